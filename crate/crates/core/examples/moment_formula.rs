//! Exact central moments by both routes: averaging over every parity-check
//! matrix, and summing the closed-form product expectation over tuples.

use std::time::Instant;

use rlc_moments::arith::rat_to_f64;
use rlc_moments::gf2::VectorSequence;
use rlc_moments::limits::Limits;
use rlc_moments::moments::{
    central_moment_exact, product_expectation, product_expectation_oracle, EnsembleParams, Method, SequenceShape,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();

    // three edges of a triangle: rank 2, one relation
    let triangle = VectorSequence::from_words(3, &[0b011, 0b110, 0b101])?;
    let params = EnsembleParams::new(3, 2, 1)?;
    let closed = product_expectation(&triangle, &params.p(), &limits)?;
    let brute = product_expectation_oracle(&triangle, &params, &limits)?;
    let shape = SequenceShape::of(&triangle);
    println!(
        "triangle: rank {}  E prod Z = {closed} (matrix average {brute})",
        shape.rank()
    );

    println!("\n  n  i  m  k  value                       normalized   ensemble ms  tuple-sum ms");
    for (n, i, m) in [(4, 2, 1), (5, 2, 2), (6, 3, 2), (7, 2, 2)] {
        let params = EnsembleParams::new(n, i, m)?;
        let var = rat_to_f64(&params.variance());
        for k in 2..=4 {
            let t = Instant::now();
            let (by_matrices, _) = central_moment_exact(&params, k, Method::Ensemble, &limits)?;
            let ens_ms = t.elapsed().as_secs_f64() * 1e3;
            let t = Instant::now();
            let (by_tuples, _) = central_moment_exact(&params, k, Method::TupleSum, &limits)?;
            let sum_ms = t.elapsed().as_secs_f64() * 1e3;
            assert_eq!(by_matrices, by_tuples);
            let normalized = rat_to_f64(&by_tuples) / var.powf(f64::from(k) / 2.0);
            println!(
                "{n:>3}{i:>3}{m:>3}{k:>3}  {:<27} {normalized:<12.5} {ens_ms:<12.2} {sum_ms:.2}",
                by_tuples.to_string()
            );
        }
        for note in params.advisories() {
            println!("     note: {note}");
        }
    }
    Ok(())
}
