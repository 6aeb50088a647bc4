//! Parallel drivers for the guess solvers. Guess evaluation is pure, so
//! workers map over candidate chunks and the earliest hit in enumeration
//! order wins, which makes the output bit-identical to the sequential
//! solvers regardless of thread count.

use rayon::prelude::*;

use ftpath_core::ftp::{
    FtpScratch, GuessMode, SafeGuessSearch, SearchSetup, Verdict, VulnerableGuessSearch,
};
use ftpath_core::FtpInstance;

const CHUNK: usize = 1024;

pub fn solve_vulnerable_guess_par(inst: &FtpInstance, mode: GuessMode) -> Verdict {
    match VulnerableGuessSearch::prepare(inst, mode) {
        SearchSetup::Decided(verdict) => verdict,
        SearchSetup::Search(search) => {
            for chunk in search.candidates().chunks(CHUNK) {
                let hit = chunk
                    .par_iter()
                    .map_init(FtpScratch::new, |scratch, guess| {
                        search.evaluate(guess, scratch)
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .flatten()
                    .next();
                if let Some((witness, cost)) = hit {
                    return search.yes_verdict(witness, cost);
                }
            }
            search.no_verdict()
        }
    }
}

pub fn solve_safe_guess_par(inst: &FtpInstance) -> Verdict {
    match SafeGuessSearch::prepare(inst) {
        SearchSetup::Decided(verdict) => verdict,
        SearchSetup::Search(search) => {
            for chunk in search.candidates().chunks(CHUNK) {
                let hit = chunk
                    .par_iter()
                    .map(|guess| search.evaluate(guess))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .flatten()
                    .next();
                if let Some((witness, cost)) = hit {
                    return search.yes_verdict(witness, cost);
                }
            }
            search.no_verdict()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ftpath_core::reduce::{gen_random, EllPolicy, GenParams};

    #[test]
    fn parallel_solvers_match_sequential_bit_for_bit() {
        use ftpath_core::ftp::{solve_safe_guess, solve_vulnerable_guess};
        for seed in 0..40 {
            let inst = gen_random(&GenParams {
                directed: seed % 2 == 0,
                n: 6,
                m: 10,
                safe_fraction: 0.5,
                weight_range: (1, 4),
                k: (seed % 3) as u32,
                ell: EllPolicy::AroundRelaxation {
                    offset: -(seed as i64 % 4),
                },
                seed,
            })
            .unwrap();
            for mode in [GuessMode::BySize, GuessMode::AllSubsets] {
                assert_eq!(
                    solve_vulnerable_guess(&inst, mode),
                    solve_vulnerable_guess_par(&inst, mode),
                    "seed {seed}"
                );
            }
            assert_eq!(
                solve_safe_guess(&inst),
                solve_safe_guess_par(&inst),
                "seed {seed}"
            );
        }
    }
}
