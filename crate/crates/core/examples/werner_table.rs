//! S(1) norms of Werner states: closed form against the transpose and reduction SDP bounds.
//!
//! cargo run --release --example werner_table

use schmidt_norms::cli::werner_table;
use schmidt_norms::states::werner_norm_exact;

fn main() -> schmidt_norms::Result<()> {
    println!("{:>2} {:>6} {:>8} {:>10} {:>10}", "n", "alpha", "exact", "transpose", "reduction");
    for row in werner_table()? {
        println!(
            "{:>2} {:>6.2} {:>8.4} {:>10.4} {:>10.4}",
            row.n, row.alpha, row.exact, row.transpose, row.reduction
        );
    }
    // For k >= 2 the norm is the top eigenvalue, attained on the antisymmetric or symmetric part.
    println!("k=2, n=3, alpha=0.5: {:.4}", werner_norm_exact(3, 0.5, 2)?);
    Ok(())
}
