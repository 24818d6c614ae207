//! r-undistillability thresholds for Werner states and the partial-transpose spectrum behind them.
//!
//! cargo run --example undistillable_werner

use schmidt_norms::states::{check_r_undistillable, p_value, undistill_threshold, undistill_threshold_simple, werner_pt_eigs};

fn main() -> schmidt_norms::Result<()> {
    for (n, r) in [(3, 1), (4, 1), (8, 2), (20, 3)] {
        let t = undistill_threshold(n, r).map_or("-".to_string(), |t| format!("{t:.4}"));
        println!("n={n:<2} r={r}  p={:.4}  threshold={t}  simple={:.4}", p_value(n, r), undistill_threshold_simple(n, r));
    }

    let report = check_r_undistillable(4, 1, 0.5)?;
    println!("\n(4, 1, 0.5) certified: {}", report.certified);
    println!("(rho^{{x2}})^T eigenvalues for n=3, alpha=2/3 (unnormalized): {:?}", werner_pt_eigs(3, 2.0 / 3.0, 2)?);
    Ok(())
}
