//! Exponent grid over k with the k0 search and the shape diagnostics.

use rlc_moments::exponents::{exponent_grid, find_k0, grid_csv, psi_diagnostics};
use rlc_moments::krawtchouk::KrawtchoukTable;
use rlc_moments::limits::Limits;
use rlc_moments::moments::EnsembleParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();
    let params = EnsembleParams::new(32, 8, 4)?;

    print!("{}", grid_csv(&exponent_grid(&params, 12, &limits)?));

    let search = find_k0(&params, 40, &limits)?;
    println!("\nk0 = {:?}  dips at {:?}", search.k0, search.dips);

    let table = KrawtchoukTable::build(params.n(), params.i(), &limits)?;
    let diag = psi_diagnostics(&table, 2..=12)?;
    println!("flags {:?}", diag.flags());
    for (k, d) in &diag.second_differences {
        println!("  second difference at k={k}: {d:+.5}");
    }
    Ok(())
}
