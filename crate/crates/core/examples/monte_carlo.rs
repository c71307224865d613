//! Monte Carlo moments next to the exact values, then a small look at how the
//! normalized even moments compare with Gaussian ones.

use rlc_moments::arith::rat_to_f64;
use rlc_moments::limits::Limits;
use rlc_moments::moments::{central_moment_exact, EnsembleParams, Method};
use rlc_moments::montecarlo::{estimate, gaussian_moment, McConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();
    let workers = std::thread::available_parallelism().map_or(1, usize::from);

    let cfg = McConfig {
        params: EnsembleParams::new(8, 3, 3)?,
        k_max: 4,
        samples: 200_000,
        seed: 1,
        workers,
    };
    let report = estimate(&cfg, &limits)?;
    println!("n=8 i=3 m=3, {} samples, seed {}", report.samples, report.seed);
    println!("  k  estimate      stderr     exact");
    for mom in &report.moments {
        let (exact, _) = central_moment_exact(&cfg.params, mom.k, Method::Auto, &limits)?;
        println!(
            "{:>3}  {:<13.5} {:<10.5} {:.5}",
            mom.k,
            mom.central_moment,
            mom.stderr,
            rat_to_f64(&exact)
        );
    }

    println!("\nnormalized 4th moment, Gaussian value {}", gaussian_moment(4));
    for (n, i, m) in [(12, 3, 5), (16, 4, 8), (20, 5, 11)] {
        let cfg = McConfig {
            params: EnsembleParams::new(n, i, m)?,
            k_max: 4,
            samples: 20_000,
            seed: 7,
            workers,
        };
        let r = estimate(&cfg, &limits)?;
        let fourth = r.moment(4).unwrap();
        println!(
            "  n={n:<3} i={i:<2} m={m:<3} {:.3} ± {:.3} (with exact variance {:.3})",
            fourth.normalized_empirical, fourth.stderr_normalized, fourth.normalized
        );
    }
    Ok(())
}
