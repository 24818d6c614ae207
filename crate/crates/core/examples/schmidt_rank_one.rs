//! For a pure state the S(k) norm of its projector is the sum of its k largest squared
//! Schmidt coefficients. Compares that with the computed bounds.
//!
//! cargo run --release --example schmidt_rank_one

use schmidt_norms::norms::{sk_norm_bounds, SeesawOptions};
use schmidt_norms::schmidt::{pure_norm_sk, schmidt_decompose, PureState};
use schmidt_norms::{rng, BipartiteDims, HermitianOperator};

fn main() -> schmidt_norms::Result<()> {
    let dims = BipartiteDims::new(3, 3)?;
    let mut g = rng::seeded(11);
    let v = PureState::new(rng::random_unit_vector(dims.total(), &mut g), dims)?;
    let coeffs = schmidt_decompose(&v)?.coeffs;
    println!("schmidt coefficients {coeffs:.4?}");

    let x = HermitianOperator::projector(v.amplitudes());
    for k in 1..=3 {
        let b = sk_norm_bounds(&x, k, dims, &SeesawOptions::default())?;
        println!("k={k}: formula {:.6}, bounds [{:.6}, {:.6}]", pure_norm_sk(&v, k)?, b.lower, b.upper);
    }
    Ok(())
}
