//! The command-line application: solve, verify, params, gen, and bench
//! over instance files. Exit code 0 means the command ran and decided
//! (verdicts are never signalled through exit codes), 1 is a usage or
//! parse error, 2 a size guard.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ftpath_core::ftp::{
    compute_parameters, ftp_oracle, preprocess, solve_safe_guess, solve_vulnerable_guess, Answer,
    GuessMode, Preprocessed, Provenance, Verdict,
};
use ftpath_core::graph::EdgeSet;
use ftpath_core::reduce::{
    from_biclique, from_hitting_set, from_steiner_tree, gen_random, EllPolicy, GenParams,
};
use ftpath_core::FtpInstance;

use crate::format;
use crate::par;
use crate::report::{self, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;

#[derive(Parser)]
#[command(
    name = "ftpath",
    about = "Exact solvers for fault-tolerant s-t paths",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file
    Solve {
        instance: PathBuf,
        /// auto picks u-guess when |U| <= |S|, otherwise s-guess
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Write the witness edge ids here on a yes answer
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Evaluate guesses on parallel workers (same output)
        #[arg(long)]
        parallel: bool,
    },
    /// Check a witness file against an instance
    Verify { instance: PathBuf, witness: PathBuf },
    /// Print dist, C, a, b, and under the size guard p, q, opt
    Params { instance: PathBuf },
    /// Generate instances
    Gen {
        #[command(subcommand)]
        source: GenCommand,
    },
    /// Solve every *.ftp file in a directory and print a table
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Run instances on parallel workers (reports stay ordered)
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Algo {
    Auto,
    /// Vulnerable-edge guessing over all subsets of U
    UGuess,
    /// Vulnerable-edge guessing by increasing size, capped by min(|U|, 2a, l)
    QGuess,
    /// Safe-edge guessing with a min-cost flow per guess
    SGuess,
    /// Brute force over all edge subsets (size guard: 16 edges)
    Oracle,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::UGuess => "u-guess",
            Algo::QGuess => "q-guess",
            Algo::SGuess => "s-guess",
            Algo::Oracle => "oracle",
        }
    }
}

pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own help/usage text
            let _ = write!(stderr, "{err}");
            return if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
        }
    };
    match cli.command {
        Command::Solve {
            instance,
            algo,
            witness,
            parallel,
        } => cmd_solve(
            &instance,
            algo,
            witness.as_deref(),
            parallel,
            stdout,
            stderr,
        ),
        Command::Verify { instance, witness } => cmd_verify(&instance, &witness, stdout, stderr),
        Command::Params { instance } => cmd_params(&instance, stdout, stderr),
        Command::Gen { source } => cmd_gen(source, stdout, stderr),
        Command::Bench {
            dir,
            algo,
            parallel,
        } => cmd_bench(&dir, algo, parallel, stdout, stderr),
    }
}

fn load_instance(path: &Path, stderr: &mut dyn Write) -> Result<FtpInstance, i32> {
    let text = fs::read_to_string(path).map_err(|err| {
        let _ = writeln!(stderr, "{}: {err}", path.display());
        EXIT_USAGE
    })?;
    format::parse_instance(&text).map_err(|err| {
        let _ = writeln!(stderr, "{}: {err}", path.display());
        EXIT_USAGE
    })
}

/// Runs the chosen algorithm; `Err(exit)` on a tripped size guard.
fn decide(inst: &FtpInstance, algo: Algo, parallel: bool) -> Result<(Verdict, &'static str), i32> {
    let algo = match algo {
        Algo::Auto => {
            if let Preprocessed::TriviallyYes { .. } | Preprocessed::TriviallyNo = preprocess(inst)
            {
                // either guess solver short-circuits on the guards
                Algo::QGuess
            } else if inst.vulnerable_count() <= inst.safe_count() {
                Algo::UGuess
            } else {
                Algo::SGuess
            }
        }
        other => other,
    };
    let verdict = match (algo, parallel) {
        (Algo::UGuess, false) => solve_vulnerable_guess(inst, GuessMode::AllSubsets),
        (Algo::UGuess, true) => par::solve_vulnerable_guess_par(inst, GuessMode::AllSubsets),
        (Algo::QGuess, false) => solve_vulnerable_guess(inst, GuessMode::BySize),
        (Algo::QGuess, true) => par::solve_vulnerable_guess_par(inst, GuessMode::BySize),
        (Algo::SGuess, false) => solve_safe_guess(inst),
        (Algo::SGuess, true) => par::solve_safe_guess_par(inst),
        (Algo::Oracle, _) => {
            let report = ftp_oracle(inst).map_err(|_| EXIT_GUARD)?;
            Verdict {
                answer: report.answer,
                witness: report.witness,
                witness_cost: report.opt,
                provenance: Provenance::Oracle,
            }
        }
        (Algo::Auto, _) => unreachable!("auto resolved above"),
    };
    Ok((verdict, algo.name()))
}

fn cmd_solve(
    path: &Path,
    algo: Algo,
    witness_out: Option<&Path>,
    parallel: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let inst = match load_instance(path, stderr) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    let digest = report::digest(&format::serialize_instance(&inst));
    let started = Instant::now();
    let (verdict, solver) = match decide(&inst, algo, parallel) {
        Ok(result) => result,
        Err(code) => {
            let _ = writeln!(
                stderr,
                "{}: size guard exceeded for --algo oracle",
                path.display()
            );
            return code;
        }
    };
    let wall = started.elapsed().as_secs_f64() * 1e3;

    if let (Some(out), Some(witness)) = (witness_out, &verdict.witness) {
        if let Err(err) = fs::write(out, format::serialize_witness(witness.ids())) {
            let _ = writeln!(stderr, "{}: {err}", out.display());
            return EXIT_USAGE;
        }
    }

    let mut report = RunReport::new("solve", &digest);
    report.set("algo", json!(solver));
    report.set("verdict", report::verdict_json(&verdict));
    report.set_wall_ms(wall);
    let _ = writeln!(stdout, "{}", report.to_json());
    let _ = writeln!(
        stderr,
        "{}: {} via {} in {wall:.1}ms",
        path.display(),
        match verdict.answer {
            Answer::Yes => format!(
                "yes (cost {}, {} edges)",
                verdict.witness_cost.unwrap_or(0),
                verdict.witness.as_ref().map_or(0, |w| w.len())
            ),
            Answer::No => "no".to_string(),
        },
        verdict.provenance,
    );
    EXIT_OK
}

fn cmd_verify(
    path: &Path,
    witness_path: &Path,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let inst = match load_instance(path, stderr) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    let witness_text = match fs::read_to_string(witness_path) {
        Ok(text) => text,
        Err(err) => {
            let _ = writeln!(stderr, "{}: {err}", witness_path.display());
            return EXIT_USAGE;
        }
    };
    let ids = match format::parse_witness(&witness_text) {
        Ok(ids) => ids,
        Err(err) => {
            let _ = writeln!(stderr, "{}: {err}", witness_path.display());
            return EXIT_USAGE;
        }
    };
    let set = EdgeSet::from_ids(ids);
    if !set.valid_for(&inst) {
        let _ = writeln!(
            stderr,
            "{}: witness references unknown edge ids",
            witness_path.display()
        );
        return EXIT_USAGE;
    }
    let digest = report::digest(&format::serialize_instance(&inst));
    let started = Instant::now();
    let feasibility = ftpath_core::ftp::verify_solution(&inst, &set);
    let wall = started.elapsed().as_secs_f64() * 1e3;
    let within_budget = feasibility.feasible && feasibility.cost <= inst.ell();
    let mut report = RunReport::new("verify", &digest);
    report.set("feasible", json!(feasibility.feasible));
    report.set("cost", json!(feasibility.cost));
    report.set("within_budget", json!(within_budget));
    report.set_wall_ms(wall);
    let _ = writeln!(stdout, "{}", report.to_json());
    let _ = writeln!(
        stderr,
        "{}: {} (cost {})",
        witness_path.display(),
        if feasibility.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        feasibility.cost,
    );
    EXIT_OK
}

fn cmd_params(path: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let inst = match load_instance(path, stderr) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    let digest = report::digest(&format::serialize_instance(&inst));
    let started = Instant::now();
    let params = compute_parameters(&inst, true)
        .or_else(|_| compute_parameters(&inst, false))
        .expect("flow-free parameters always compute");
    let wall = started.elapsed().as_secs_f64() * 1e3;
    let mut report = RunReport::new("params", &digest);
    report.set("params", report::parameters_json(&params));
    report.set_wall_ms(wall);
    let _ = writeln!(stdout, "{}", report.to_json());
    let show = |v: Option<i64>| v.map_or("inf".to_string(), |x| x.to_string());
    let _ = writeln!(
        stderr,
        "{}: dist {} C {} a {} b {}",
        path.display(),
        params.dist,
        params.relaxation,
        show(params.a),
        show(params.b),
    );
    EXIT_OK
}

#[derive(Subcommand)]
enum GenCommand {
    /// Seeded random instance
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0.5)]
        safe_fraction: f64,
        #[arg(long, default_value_t = 1)]
        wmin: u64,
        #[arg(long, default_value_t = 1)]
        wmax: u64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Fixed budget; without it the budget tracks the relaxation optimum
        #[arg(long, conflicts_with = "ell_offset")]
        ell: Option<u64>,
        /// Budget offset from the relaxation optimum C
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        ell_offset: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// From a bipartite graph file (`bip` grammar)
    Biclique {
        source: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// From a graph-plus-terminals file (`st` grammar)
    Steiner {
        source: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// From a set-family file (`hs` grammar)
    HittingSet {
        source: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn cmd_gen(source: GenCommand, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (instance, out, seed) = match source {
        GenCommand::Random {
            n,
            m,
            safe_fraction,
            wmin,
            wmax,
            k,
            ell,
            ell_offset,
            seed,
            directed,
            out,
        } => {
            let params = GenParams {
                directed,
                n,
                m,
                safe_fraction,
                weight_range: (wmin, wmax),
                k,
                ell: match ell {
                    Some(value) => EllPolicy::Fixed(value),
                    None => EllPolicy::AroundRelaxation { offset: ell_offset },
                },
                seed,
            };
            match gen_random(&params) {
                Ok(inst) => (inst, out, Some(seed)),
                Err(err) => {
                    let _ = writeln!(stderr, "gen random: {err}");
                    return EXIT_USAGE;
                }
            }
        }
        GenCommand::Biclique { source, out } => {
            let input = match fs::read_to_string(&source)
                .map_err(|e| e.to_string())
                .and_then(|text| format::parse_biclique(&text).map_err(|e| e.to_string()))
            {
                Ok(input) => input,
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            };
            match from_biclique(&input) {
                Ok(inst) => (inst, out, None),
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            }
        }
        GenCommand::Steiner { source, out } => {
            let input = match fs::read_to_string(&source)
                .map_err(|e| e.to_string())
                .and_then(|text| format::parse_steiner(&text).map_err(|e| e.to_string()))
            {
                Ok(input) => input,
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            };
            match from_steiner_tree(&input) {
                Ok(inst) => (inst, out, None),
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            }
        }
        GenCommand::HittingSet { source, out } => {
            let input = match fs::read_to_string(&source)
                .map_err(|e| e.to_string())
                .and_then(|text| format::parse_hitting_set(&text).map_err(|e| e.to_string()))
            {
                Ok(input) => input,
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            };
            match from_hitting_set(&input) {
                Ok(inst) => (inst, out, None),
                Err(err) => {
                    let _ = writeln!(stderr, "{}: {err}", source.display());
                    return EXIT_USAGE;
                }
            }
        }
    };
    let text = format::serialize_instance(&instance);
    let digest = report::digest(&text);
    match out {
        Some(path) => {
            if let Err(err) = fs::write(&path, &text) {
                let _ = writeln!(stderr, "{}: {err}", path.display());
                return EXIT_USAGE;
            }
            let mut report = RunReport::new("gen", &digest);
            report.set("path", json!(path.display().to_string()));
            report.set(
                "size",
                json!({"n": instance.vertex_count(), "m": instance.edge_count()}),
            );
            if let Some(seed) = seed {
                report.set("seed", json!(seed));
            }
            let _ = writeln!(stdout, "{}", report.to_json());
        }
        None => {
            let _ = write!(stdout, "{text}");
        }
    }
    let _ = writeln!(
        stderr,
        "generated instance {digest}: n={} m={} k={} l={}",
        instance.vertex_count(),
        instance.edge_count(),
        instance.k(),
        instance.ell(),
    );
    EXIT_OK
}

fn cmd_bench(
    dir: &Path,
    algo: Algo,
    parallel: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "ftp"))
            .collect(),
        Err(err) => {
            let _ = writeln!(stderr, "{}: {err}", dir.display());
            return EXIT_USAGE;
        }
    };
    files.sort();

    struct Row {
        file: String,
        report: serde_json::Value,
        summary: String,
    }

    let solve_one = |path: &PathBuf| -> Row {
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => {
                return Row {
                    file: file.clone(),
                    report: json!({"command": "bench", "file": file, "error": err.to_string()}),
                    summary: format!("{file}: read error"),
                }
            }
        };
        let inst = match format::parse_instance(&text) {
            Ok(inst) => inst,
            Err(err) => {
                return Row {
                    file: file.clone(),
                    report: json!({"command": "bench", "file": file, "error": err.to_string()}),
                    summary: format!("{file}: {err}"),
                }
            }
        };
        let digest = report::digest(&format::serialize_instance(&inst));
        let started = Instant::now();
        match decide(&inst, algo, false) {
            Ok((verdict, solver)) => {
                let wall = started.elapsed().as_secs_f64() * 1e3;
                let mut report = RunReport::new("bench", &digest);
                report.set("file", json!(file));
                report.set("algo", json!(solver));
                report.set("verdict", report::verdict_json(&verdict));
                report.set_wall_ms(wall);
                Row {
                    file: file.clone(),
                    report: report.to_json(),
                    summary: format!(
                        "{file:30} {:3} cost {:>4} {:>22} {wall:9.2}ms",
                        match verdict.answer {
                            Answer::Yes => "yes",
                            Answer::No => "no",
                        },
                        verdict
                            .witness_cost
                            .map_or("-".to_string(), |c| c.to_string()),
                        verdict.provenance.to_string(),
                        wall = wall,
                    ),
                }
            }
            Err(_) => Row {
                file: file.clone(),
                report: json!({"command": "bench", "file": file, "error": "size guard exceeded"}),
                summary: format!("{file}: size guard exceeded"),
            },
        }
    };

    let rows: Vec<Row> = if parallel {
        use rayon::prelude::*;
        let mut rows: Vec<Row> = files.par_iter().map(solve_one).collect();
        rows.sort_by(|a, b| a.file.cmp(&b.file));
        rows
    } else {
        files.iter().map(solve_one).collect()
    };

    for row in &rows {
        let _ = writeln!(stdout, "{}", row.report);
        let _ = writeln!(stderr, "{}", row.summary);
    }
    let _ = writeln!(stderr, "{} instances", rows.len());
    EXIT_OK
}
