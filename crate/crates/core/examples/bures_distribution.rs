//! Where the S(1) and S(2) norms of Bures-random states fall between the top two eigenvalues.
//!
//! cargo run --release --example bures_distribution -- 200

use schmidt_norms::cli::bures_row;

fn main() -> schmidt_norms::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);

    let mut rel = Vec::with_capacity(samples);
    for i in 0..samples {
        let row = bures_row(4, 1, i)?;
        let l = &row.eigenvalues;
        if let Some(s1) = row.s1_upper {
            // 0 at lambda_3, 1 at lambda_4
            rel.push((s1 - l[2]) / (l[3] - l[2]));
        }
    }
    let mean = rel.iter().sum::<f64>() / rel.len() as f64;
    println!("2x2: {} samples, S(1) sits at {:.3} of the way from lambda_3 to lambda_4 on average", rel.len(), mean);

    let (mut s1_in, mut s2_in) = (0, 0);
    let n9 = samples.min(50);
    for i in 0..n9 {
        let row = bures_row(9, 1, i)?;
        let l = &row.eigenvalues;
        let inside = |lo: Option<f64>, hi: Option<f64>| match (lo, hi) {
            (Some(lo), Some(hi)) => lo >= l[7] - 1e-7 && hi <= l[8] + 1e-7,
            _ => false,
        };
        s1_in += inside(row.s1_lower, row.s1_upper) as usize;
        s2_in += inside(row.s2_lower, row.s2_upper) as usize;
    }
    println!("3x3: S(1) certified in [lambda_8, lambda_9] on {s1_in}/{n9}, S(2) on {s2_in}/{n9}");
    Ok(())
}
