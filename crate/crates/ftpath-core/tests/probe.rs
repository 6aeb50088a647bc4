// temporary probe, not committed
use std::time::Instant;

#[test]
#[ignore]
fn probe_catalog_sizes() {
    for r in 2..=8usize {
        let started = Instant::now();
        let structures = ftpath_core::dsl::enumerate_patterns(
            &balances(r),
            r, // pairs >= r/2 suffices; r gives jmax = r-2 after clamping
            false,
        )
        .count();
        println!(
            "r={r:2} structures={structures:8} in {:.3}s",
            started.elapsed().as_secs_f64()
        );
    }
}

fn balances(r: usize) -> Vec<i64> {
    let mut b: Vec<i64> = (0..r).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let drift: i64 = b.iter().sum();
    b[0] -= drift;
    b
}
