//! Cover configurations: structured tuple counts, the Hölder bound, and the
//! dual character sum evaluated at points inside and outside the dual.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rlc_moments::krawtchouk::KrawtchoukTable;
use rlc_moments::limits::Limits;
use rlc_moments::moments::{
    dual_character_sum_check, holder_bound, sample_dual_point, structured_tuple_count, CoverConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits::default();
    let (n, i) = (6, 2);
    let table = KrawtchoukTable::build(n, i, &limits)?;

    println!("r v  sets            a-profile  count   bound");
    for r in 1..=3 {
        for v in 1..=2 {
            for cfg in CoverConfig::enumerate_all(r, v).into_iter().take(3) {
                let count = structured_tuple_count(n, i, &cfg, &limits)?;
                let bound = holder_bound(&cfg, &table);
                let sets: Vec<String> = cfg.sets().iter().map(|s| format!("{s:0w$b}", w = r as usize)).collect();
                println!(
                    "{r} {v}  {:<15} {:<10} {count:<7} {bound}",
                    sets.join(","),
                    format!("{:?}", cfg.a_profile())
                );
            }
        }
    }

    let cfg = CoverConfig::from_lists(2, &[&[1], &[1, 2]])?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for in_dual in [true, false] {
        let point = sample_dual_point(&cfg, 4, in_dual, &mut rng);
        let check = dual_character_sum_check(&cfg, 4, &point, &limits)?;
        let shown: Vec<String> = point.iter().map(ToString::to_string).collect();
        println!(
            "\n{shown:?}\n  sum {} expected {} in dual {}",
            check.sum, check.expected, check.in_dual
        );
        assert!(check.matches);
    }
    Ok(())
}
