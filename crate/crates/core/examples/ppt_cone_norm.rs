//! Cone norms: the largest overlap of an operator with states in a cone cut out by maps.
//!
//! cargo run --release --example ppt_cone_norm

use schmidt_norms::norms::cone_norm;
use schmidt_norms::qops::{max_entangled, reduction_map, transpose_map};
use schmidt_norms::states::werner;
use schmidt_norms::BipartiteDims;

fn main() -> schmidt_norms::Result<()> {
    let dims = BipartiteDims::new(2, 2)?;
    let e = max_entangled(2);
    let free = cone_norm(&e, &[], dims)?;
    let ppt = cone_norm(&e, &[transpose_map(2)], dims)?;
    println!("E: all states {:.6}, PPT states {:.6}", free.upper, ppt.upper);

    let d3 = BipartiteDims::new(3, 3)?;
    let x = werner(3, 0.5)?;
    for (name, maps) in [("T", vec![transpose_map(3)]), ("R", vec![reduction_map(3)]), ("T+R", vec![transpose_map(3), reduction_map(3)])] {
        let b = cone_norm(&x, &maps, d3)?;
        println!("werner(3, 1/2) over cone {name:<3}: [{:.6}, {:.6}]", b.lower, b.upper);
    }
    Ok(())
}
