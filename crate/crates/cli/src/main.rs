use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iqcc_core::growth::{partition_growth_profile, RankLimit};
use iqcc_core::{
    canonical_element, exact, growth_exact, replay, screen, BitString, Engine, Error,
    GrowthSearchRegistry, HamiltonianFile, PauliProduct, RunConfig, ScoringConfig, SearchConfig,
    SearchContext, DEFAULT_PRUNE_EPS,
};

#[derive(Parser)]
#[command(name = "iqcc", version, about = "Growth-mitigated iterative qubit coupled cluster")]
struct Cli {
    /// Worker threads for partition searches and matrix-free products (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Drop terms with |coefficient| below this on load and after each dressing.
    #[arg(long, global = true, default_value_t = DEFAULT_PRUNE_EPS)]
    prune_eps: f64,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    /// Log progress to stderr (repeat for more).
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gradient partitions of a Hamiltonian as TSV.
    Screen {
        input: PathBuf,
        /// Only the first N partitions.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Growth search over the top partitions as TSV.
    Growth {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// A single partition, as a 0/1 x-string.
        #[arg(long)]
        partition: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Multiplicity and growth of every member of one partition, as CSV.
    Profile {
        input: PathBuf,
        /// Partition x-string; defaults to the highest-gradient partition.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Run the iterative dressing loop and write the trajectory JSON.
    Iqcc {
        input: PathBuf,
        #[arg(long, default_value = "gm")]
        policy: String,
        /// Gradient bias a in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        bias: f64,
        #[arg(long, default_value_t = iqcc_core::selection::DEFAULT_TOP_P)]
        top_p: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 20)]
        max_iter: usize,
        #[arg(long, default_value_t = 0.0)]
        grad_norm_eps: f64,
        /// Stop when |E_K - E_(K-1)| falls below this (0 disables).
        #[arg(long, default_value_t = 0.0)]
        energy_tol: f64,
        /// Record per-iteration wall time (output is then not reproducible byte for byte).
        #[arg(long)]
        timings: bool,
        /// Embed the final Hamiltonian in the trajectory.
        #[arg(long)]
        final_hamiltonian: bool,
    },
    /// Exact ground energy by diagonalization.
    Exact {
        input: PathBuf,
        /// Also print the lowest K eigenvalues.
        #[arg(long)]
        lowest: Option<usize>,
    },
    /// Apply explicit rotations, or replay a trajectory, and write the Hamiltonian.
    Transform {
        input: PathBuf,
        /// Generator label; pair each with a --tau.
        #[arg(long = "gen")]
        generators: Vec<String>,
        #[arg(long = "tau", allow_negative_numbers = true)]
        taus: Vec<f64>,
        /// Trajectory JSON whose generators and angles are replayed.
        #[arg(long, conflicts_with_all = ["generators", "taus"])]
        trajectory: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Growth search strategy.
    #[arg(long, default_value = "det")]
    search: String,
    /// Candidates scored per partition: integer, log2m, m/10 or all.
    #[arg(long, default_value = "log2m")]
    r: String,
    /// Wider limit retried when the canonical element beats the first result.
    #[arg(long)]
    r_fallback: Option<String>,
    /// Probabilistic sample count (default: number of terms).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, Error> {
        Ok(SearchConfig {
            r: self.r.parse()?,
            r_fallback: self.r_fallback.as_deref().map(str::parse::<RankLimit>).transpose()?,
            n_samples: self.samples,
            rng_seed: self.seed,
        })
    }
}

/// Exit codes: 1 usage, 2 data, 3 numerical guard.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownStrategy { .. } => 1,
        Error::SizeGuard { .. } | Error::FlatEnergyCurve { .. } => 3,
        _ => 2,
    }
}

fn load(path: &Path, prune_eps: f64) -> Result<HamiltonianFile, Error> {
    HamiltonianFile::read(path, prune_eps)
}

fn parse_partition(file: &HamiltonianFile, text: &str) -> Result<BitString, Error> {
    let x = BitString::parse(text)
        .map_err(|_| Error::Config(format!("partition must be a 0/1 string, got {text:?}")))?;
    if x.len() != file.hamiltonian.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: file.hamiltonian.n_qubits(),
            found: x.len(),
        });
    }
    Ok(x)
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let eps = cli.prune_eps;
    let mut out = String::new();
    match &cli.command {
        Command::Screen { input, top } => {
            let file = load(input, eps)?;
            let table = screen(&file.hamiltonian, &file.reference)?;
            let parts = table.top(top.unwrap_or(usize::MAX));
            out.push_str("rank\tgradient\tx_string\tcanonical\n");
            for (i, p) in parts.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{}\t{:.12e}\t{}\t{}",
                    i + 1,
                    p.gradient,
                    p.x_string,
                    canonical_element(&p.x_string)?
                );
            }
        }
        Command::Growth {
            input,
            top,
            partition,
            search,
        } => {
            let file = load(input, eps)?;
            let h = &file.hamiltonian;
            let searcher = GrowthSearchRegistry::default().create(&search.search, &search.config()?)?;
            let grouping = h.ising_grouping();
            let ctx = SearchContext::new(h, &grouping);
            let table = screen(h, &file.reference)?;
            let targets: Vec<(BitString, f64)> = match partition {
                Some(text) => {
                    let x = parse_partition(&file, text)?;
                    let g = table.find(&x).map_or(0.0, |p| p.gradient);
                    vec![(x, g)]
                }
                None => table.top(*top).iter().map(|p| (p.x_string.clone(), p.gradient)).collect(),
            };
            out.push_str(
                "x_string\tgradient\tcandidate\tmultiplicity\tanticommuting\tgrowth\tn_query\tn_candidates\tcanonical_growth\n",
            );
            for (x, g) in targets {
                let canonical = growth_exact(h, &canonical_element(&x)?)?.growth;
                let o = searcher.search(&ctx, &x)?;
                let _ = writeln!(
                    out,
                    "{x}\t{g:.12e}\t{}\t{}\t{}\t{}\t{}\t{}\t{canonical}",
                    o.report.candidate,
                    o.report.multiplicity,
                    o.report.anticommuting_count,
                    o.report.growth,
                    o.n_query,
                    o.n_candidates
                );
            }
        }
        Command::Profile { input, partition } => {
            let file = load(input, eps)?;
            let x = match partition {
                Some(text) => parse_partition(&file, text)?,
                None => screen(&file.hamiltonian, &file.reference)?
                    .partitions()
                    .first()
                    .ok_or(Error::EmptyPartitionTable)?
                    .x_string
                    .clone(),
            };
            out.push_str("candidate,multiplicity,growth\n");
            for p in partition_growth_profile(&file.hamiltonian, &x)? {
                let _ = writeln!(out, "{},{},{}", p.candidate, p.multiplicity, p.growth);
            }
        }
        Command::Iqcc {
            input,
            policy,
            bias,
            top_p,
            search,
            max_iter,
            grad_norm_eps,
            energy_tol,
            timings,
            final_hamiltonian,
        } => {
            let file = load(input, eps)?;
            let cfg = RunConfig {
                scoring: ScoringConfig {
                    bias_a: *bias,
                    top_p: *top_p,
                    policy: policy.clone(),
                },
                search: search.config()?,
                search_strategy: search.search.clone(),
                max_iterations: *max_iter,
                grad_norm_eps: *grad_norm_eps,
                energy_tol: *energy_tol,
                prune_eps: eps,
                record_timings: *timings,
                ..RunConfig::default()
            };
            let res = Engine::default().run(&file.hamiltonian, &file.reference, &cfg)?;
            let mut traj = res.trajectory;
            if *final_hamiltonian {
                traj.attach_final_hamiltonian(&res.final_hamiltonian, &file.reference);
            }
            out = traj.to_json_string();
        }
        Command::Exact { input, lowest } => {
            let file = load(input, eps)?;
            let _ = writeln!(out, "{:.12}", exact::ground_energy(&file.hamiltonian)?);
            if let Some(k) = lowest {
                for e in exact::lowest_eigenvalues(&file.hamiltonian, *k)? {
                    let _ = writeln!(out, "{e:.12}");
                }
            }
        }
        Command::Transform {
            input,
            generators,
            taus,
            trajectory,
        } => {
            let mut file = load(input, eps)?;
            let steps = match trajectory {
                Some(path) => trajectory_steps(path)?,
                None => {
                    if generators.len() != taus.len() {
                        return Err(Error::Config(format!(
                            "{} --gen but {} --tau values",
                            generators.len(),
                            taus.len()
                        )));
                    }
                    generators
                        .iter()
                        .map(|g| g.parse::<PauliProduct>())
                        .zip(taus.iter().copied())
                        .map(|(g, t)| g.map(|g| (g, t)))
                        .collect::<Result<Vec<_>, _>>()?
                }
            };
            file.hamiltonian = replay(&file.hamiltonian, steps.iter().map(|(g, t)| (g, *t)))?;
            out = file.to_json_string();
        }
    }
    Ok(out)
}

fn trajectory_steps(path: &Path) -> Result<Vec<(PauliProduct, f64)>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let bad = || Error::Format(format!("{}: not a trajectory document", path.display()));
    doc.get("iterations")
        .and_then(|v| v.as_array())
        .ok_or_else(bad)?
        .iter()
        .map(|rec| {
            let g = rec.get("generator").and_then(|v| v.as_str()).ok_or_else(bad)?;
            let t = rec.get("tau_opt").and_then(|v| v.as_f64()).ok_or_else(bad)?;
            Ok((g.parse()?, t))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("iqcc: {e}");
            return ExitCode::from(1);
        }
    }
    let result = execute(&cli).and_then(|text| {
        match &cli.out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
        .map_err(|e| Error::Format(format!("writing output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("iqcc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
