//! Deciding k-block positivity through the S(k) norm of a shifted operator.
//!
//! cargo run --release --example block_positivity

use schmidt_norms::norms::{is_k_block_positive, SeesawOptions};
use schmidt_norms::qops::swap_operator;
use schmidt_norms::sdp::SolverOptions;
use schmidt_norms::{BipartiteDims, HermitianOperator};

fn main() -> schmidt_norms::Result<()> {
    let dims = BipartiteDims::new(2, 2)?;
    let opts = SolverOptions::with_tol(1e-10);
    let seesaw = SeesawOptions::default();

    let cases = [("identity", HermitianOperator::identity(4)), ("swap", swap_operator(2))];
    for (name, y) in &cases {
        for k in [1, 2] {
            let c = is_k_block_positive(y, k, dims, &seesaw, &opts)?;
            print!("{name:<8} k={k}: {:?}  (c={:.3}, bounds [{:.6}, {:.6}])", c.verdict, c.shift, c.lower, c.upper);
            if let Some(v) = c.witness_value {
                print!("  witness <v|Y|v> = {v:.6}");
            }
            println!();
        }
    }
    Ok(())
}
