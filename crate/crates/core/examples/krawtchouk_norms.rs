//! Print a Krawtchouk table and its norms.
//!
//! ```text
//! cargo run --example krawtchouk_norms -- 10 3 6
//! ```

use rlc_moments::arith::rat_to_f64;
use rlc_moments::krawtchouk::KrawtchoukTable;
use rlc_moments::limits::Limits;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, i, k_max) = match args[..] {
        [n, i, k] => (n, i, k),
        [n, i] => (n, i, 6),
        _ => (10, 3, 6),
    };
    let limits = Limits::default();
    let table = KrawtchoukTable::build(n, i, &limits)?;

    println!("K_{i}(j) for n = {n}");
    for j in 0..=n {
        println!("  j={j:>3}  {}", table.value(j));
    }

    // the recurrence gives the same rows
    let rows = KrawtchoukTable::build_by_recurrence(n, i, &limits)?;
    assert_eq!(rows[i as usize].values(), table.values());

    println!("\n  k  E|K|^k                       E K^k");
    for k in 1..=k_max {
        let abs = table.abs_norm_k(k);
        let signed = table.signed_moment_k(k);
        println!("{k:>3}  {:<28} {}", format!("{abs} ({:.4e})", rat_to_f64(&abs)), signed);
    }
    Ok(())
}
