//! Coloop-free tuple counts by rank and the sandwich sum they produce.

use rlc_moments::arith::rat_to_f64;
use rlc_moments::limits::Limits;
use rlc_moments::moments::{central_moment_exact, rank_profile, EnsembleParams, Method};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();
    for (n, i, m, k) in [(4, 2, 3, 3), (6, 2, 2, 4), (6, 3, 3, 4), (8, 2, 4, 3)] {
        let params = EnsembleParams::new(n, i, m)?;
        let profile = rank_profile(n, i, k, &limits)?;
        println!("n={n} i={i} k={k}");
        for r in 0..=k {
            let count = profile.n_of(r);
            if count > 0u32.into() {
                println!("  rank {r}: {count}");
            }
        }
        println!(
            "  circuits {}  zero-sum tuples {}",
            profile.circuits(),
            profile.zero_sum_total()
        );

        let sandwich = profile.sandwich_from(&params.p());
        let (central, _) = central_moment_exact(&params, k, Method::Auto, &limits)?;
        println!(
            "  m={m}: sandwich {sandwich} = {:.5}   |central moment| {:.5}\n",
            rat_to_f64(&sandwich),
            rat_to_f64(&central).abs()
        );
    }
    Ok(())
}
