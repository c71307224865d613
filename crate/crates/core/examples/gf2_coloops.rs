//! Coloops, ranks and kernel weight counts on small explicit examples.

use rlc_moments::gf2::{coloop_positions, kernel_weight_count, relation_support, BitMatrix, BitVec, VectorSequence};
use rlc_moments::limits::Limits;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a triangle plus a pendant edge in K_4, written as weight-2 words
    let words: Vec<BitVec> = ["1100", "0110", "1010", "0011"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let seq = VectorSequence::new(words)?;
    println!("rank {}  coloops at {:?}", seq.rank(), coloop_positions(&seq));

    let packed: Vec<u64> = seq.vectors().iter().map(|v| v.as_word().unwrap()).collect();
    let (rank, support) = relation_support(&packed);
    println!("rank {rank}  positions in some relation: {support:04b} (lowest bit is position 0)");

    let h = BitMatrix::parse_rows(&["110100", "011010", "101001"])?;
    println!("\nH =");
    for row in h.rows() {
        println!("  {row}");
    }
    println!("rank {}  hex rows {:?}", h.rank(), h.to_hex_rows());
    let limits = Limits::default();
    for i in 0..=h.col_count() {
        println!("  weight {i}: {} kernel words", kernel_weight_count(&h, i, &limits)?);
    }
    Ok(())
}
