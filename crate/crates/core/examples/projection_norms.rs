//! Norms of the recursive projections P_r built from the maximally entangled projector.
//!
//! cargo run --release --example projection_norms

use schmidt_norms::norms::{sk_lower_bound_seesaw, sk_upper_bound, SeesawOptions};
use schmidt_norms::qops::transpose_map;
use schmidt_norms::states::{proj_family, proj_s1_exact, proj_s2_upper};

fn main() -> schmidt_norms::Result<()> {
    println!("{:>2} {:>2} {:>5} {:>9} {:>9} {:>9} {:>9}", "n", "r", "rank", "S1 exact", "S1 SDP", "S2 lower", "S2 bound");
    for (n, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let p = proj_family(n, r)?;
        let dims = p.dims();
        let sdp = sk_upper_bound(&p.matrix, &[transpose_map(dims.m)], dims)?;
        let s2 = sk_lower_bound_seesaw(&p.matrix, 2, dims, &SeesawOptions::default())?;
        println!(
            "{n:>2} {r:>2} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            p.rank(),
            proj_s1_exact(n, r),
            sdp.value,
            s2.value,
            proj_s2_upper(n, r)
        );
    }
    Ok(())
}
