//! Finite-n exponent against the rates of the lower bound and the sandwich
//! upper bound, at i = n/4 and m = n/8. Nothing here is asserted.

use rlc_moments::exponents::trend_row;
use rlc_moments::limits::Limits;
use rlc_moments::moments::EnsembleParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();
    println!("  n  k  exponent    lower rate  sandwich rate  applies");
    for n in [16, 24, 32, 40] {
        let params = EnsembleParams::new(n, n / 4, n / 8)?;
        for k in [4, 6, 8] {
            let row = trend_row(&params, k, &limits)?;
            let upper = row.sandwich_upper_rate.map_or("-".to_string(), |r| format!("{r:.5}"));
            println!(
                "{n:>3}{k:>3}  {:<11.5} {:<11.5} {upper:<14} {}",
                row.theorem_exponent, row.lower_bound_rate, row.bounds_apply
            );
        }
    }
    Ok(())
}
