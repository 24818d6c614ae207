//! Builds an S(1) relaxation, converts it to the real standard form and prints it as JSON
//! so it can be fed to an external solver for comparison.
//!
//! cargo run --example standard_form_dump > problem.json

use schmidt_norms::qops::{max_entangled, transpose_map};
use schmidt_norms::sdp::{build_sk_sdp, solve, to_standard_form, SolverOptions};
use schmidt_norms::BipartiteDims;

fn main() -> schmidt_norms::Result<()> {
    let dims = BipartiteDims::new(2, 2)?;
    let p = build_sk_sdp(&max_entangled(2), &transpose_map(2), dims)?;
    let sf = to_standard_form(&p)?;
    let r = solve(&sf.problem, &SolverOptions::default());
    eprintln!(
        "{} variables, blocks {:?}, optimum {:.8} ({:?}, {} iterations)",
        sf.problem.num_vars(),
        sf.problem.block_sizes(),
        r.primal_obj,
        r.status,
        r.iterations
    );
    println!("{}", sf.problem.to_json()?);
    Ok(())
}
