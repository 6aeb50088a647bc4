//! Long-running randomized cross-checks, excluded from the default run.
//! Execute with `cargo test -p ftpath-core --test stress -- --ignored`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ftpath_core::dsl::{dsl_oracle, solve_dsl, DslInstance};
use ftpath_core::ftp::{
    ftp_oracle, solve_safe_guess, solve_vulnerable_guess, verify_solution, Answer, GuessMode,
};
use ftpath_core::reduce::{gen_random, EllPolicy, GenParams};

#[test]
#[ignore = "stress run, several minutes"]
fn solvers_agree_on_a_wide_corpus() {
    let mut checked = 0usize;
    for seed in 0..600u64 {
        let base = gen_random(&GenParams {
            directed: seed % 2 == 0,
            n: 4 + (seed % 4) as u32,
            m: 6 + (seed % 7) as u32,
            safe_fraction: 0.2 + 0.1 * ((seed % 7) as f64),
            weight_range: (1, 4),
            k: (seed % 4) as u32,
            ell: EllPolicy::Fixed(1),
            seed: seed.wrapping_mul(0x9E3779B97F4A7C15),
        })
        .unwrap();
        for ell in 1..=14u64 {
            let inst = base.with_ell(ell);
            let oracle = ftp_oracle(&inst).unwrap();
            for verdict in [
                solve_vulnerable_guess(&inst, GuessMode::BySize),
                solve_vulnerable_guess(&inst, GuessMode::AllSubsets),
                solve_safe_guess(&inst),
            ] {
                assert_eq!(
                    verdict.answer, oracle.answer,
                    "disagreement at seed {seed} ell {ell}: {inst:?}"
                );
                if let Some(witness) = &verdict.witness {
                    let check = verify_solution(&inst, witness);
                    assert!(check.feasible && check.cost <= inst.ell());
                }
            }
            checked += 1;
        }
    }
    println!("stress: {checked} instance-budget pairs agreed");
}

#[test]
#[ignore = "stress run, several minutes"]
fn linkage_agrees_on_a_wide_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57E55);
    for round in 0..2000usize {
        let n = rng.gen_range(3..=6u32);
        let m = rng.gen_range(2..=11usize);
        let directed = rng.gen_bool(0.5);
        let edges: Vec<(u32, u32, u64)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(1..=n);
                let mut v = rng.gen_range(1..=n);
                while v == u {
                    v = rng.gen_range(1..=n);
                }
                (u, v, rng.gen_range(0..=4))
            })
            .collect();
        let pairs = rng.gen_range(1..=4usize);
        let sources: Vec<u32> = (0..pairs).map(|_| rng.gen_range(1..=n)).collect();
        let targets: Vec<u32> = (0..pairs).map(|_| rng.gen_range(1..=n)).collect();
        let inst = DslInstance::new(directed, n, &edges, sources, targets, 20).unwrap();
        let want = dsl_oracle(&inst).unwrap();
        let got = solve_dsl(&inst).map(|s| s.cost);
        assert_eq!(got, want, "round {round}: {inst:?}");
    }
    println!("stress: 2000 linkage instances agreed");
}

#[test]
#[ignore = "stress run"]
fn redundancy_sweep_stays_consistent() {
    // answers must be monotone in ell and antitone in k across a sweep
    for seed in 0..200u64 {
        let base = gen_random(&GenParams {
            directed: seed % 2 == 1,
            n: 5 + (seed % 3) as u32,
            m: 7 + (seed % 6) as u32,
            safe_fraction: 0.5,
            weight_range: (1, 3),
            k: 0,
            ell: EllPolicy::Fixed(1),
            seed: seed.wrapping_mul(0xA24BAED4963EE407),
        })
        .unwrap();
        for k in 0..=3u32 {
            let mut previous = false;
            for ell in 1..=12u64 {
                let inst = base.with_k(k).with_ell(ell);
                let now = solve_vulnerable_guess(&inst, GuessMode::BySize).is_yes();
                assert!(now >= previous, "budget monotonicity broke: {inst:?}");
                previous = now;
            }
        }
        for ell in [4u64, 8] {
            let mut previous = true;
            for k in 0..=3u32 {
                let inst = base.with_k(k).with_ell(ell);
                let now = solve_safe_guess(&inst).is_yes();
                assert!(now <= previous, "redundancy antitonicity broke: {inst:?}");
                previous = now;
            }
        }
    }
}
