//! Command-line harness: graph construction, process simulation, model
//! fitting, forecasting, rolling evaluation and the low-rank sweep.
//!
//! Exit codes: 0 on success, 1 for usage problems (bad flags, unreadable
//! or malformed files, out-of-range parameters), 2 for numerical failures
//! (non-convergence, singular systems, checksum mismatches).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use timevertex::baselines::{self, NoncausalPredictor};
use timevertex::eval;
use timevertex::graph::{self, Graph};
use timevertex::io;
use timevertex::joint_causal::{self, JointCausalModel, SelectionCriterion};
use timevertex::simulate;
use timevertex::spectral::{self, EigenBasis, TimeVertexSignal, DEFAULT_EIGEN_TOL};
use timevertex::{DisjointModel, Error};

#[derive(Parser)]
#[command(
    name = "timevertex",
    about = "Model and forecast multivariate signals living on a graph",
    version
)]
struct Cli {
    /// RNG seed for anything stochastic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Graph edge list CSV (header `i,j,w`).
    #[arg(long, global = true)]
    graph: Option<PathBuf>,

    /// Vertex coordinates CSV (header `id,x,y[,z]`).
    #[arg(long, global = true)]
    coords: Option<PathBuf>,

    /// Signal CSV, rows = vertices, columns = time steps.
    #[arg(long, global = true)]
    signal: Option<PathBuf>,

    /// Output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Joint,
    Disjoint,
    Noncausal,
}

#[derive(Clone, Copy, ValueEnum)]
enum JpsdPreset {
    /// Flat unit spectrum.
    White,
    /// Graph-lowpass times a temporal AR(1) spectrum.
    Separable,
    /// Damped wave spectrum (non-separable).
    Wave,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write its edge list.
    BuildGraph(BuildGraphArgs),
    /// Simulate the graph wave process.
    SimulateWave(SimulateWaveArgs),
    /// Simulate a jointly stationary process with a preset spectrum.
    SimulateJwss(SimulateJwssArgs),
    /// Fit a forecasting model and write it as JSON.
    Fit(FitArgs),
    /// Forecast ahead of a history signal with a fitted model.
    Predict(PredictArgs),
    /// Rolling-origin evaluation on the test half of a signal.
    Evaluate(EvaluateArgs),
    /// Accuracy/fit-time trade-off across ignored-variance fractions.
    LowrankSweep(LowrankSweepArgs),
    /// Estimate the joint power spectral density of a signal.
    JpsdEstimate(JpsdEstimateArgs),
    /// Conditional-Gaussian forecast from a (given or estimated) JPSD.
    PredictNoncausal(PredictNoncausalArgs),
}

#[derive(Args)]
struct BuildGraphArgs {
    #[command(subcommand)]
    kind: BuildGraphKind,
}

#[derive(Subcommand)]
enum BuildGraphKind {
    /// k-nearest-neighbour graph from `--coords`.
    Knn {
        /// Neighbours per vertex.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Random geometric graph on the unit square.
    Geometric {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        avg_degree: f64,
        /// Also write the sampled coordinates here.
        #[arg(long)]
        coords_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimulateWaveArgs {
    /// Time steps to keep.
    #[arg(long)]
    t: usize,
    /// Wave speed; default keeps the propagator at 2/sqrt(lambda_max).
    #[arg(long)]
    wave_speed: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    noise_std: f64,
    /// Leading steps discarded as transient.
    #[arg(long, default_value_t = simulate::DEFAULT_WAVE_BURN_IN)]
    burn_in: usize,
    /// Generate the graph inline instead of `--graph`.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    avg_degree: Option<f64>,
    #[arg(long)]
    graph_seed: Option<u64>,
}

#[derive(Args)]
struct SimulateJwssArgs {
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value_t = JpsdPreset::Separable)]
    jpsd: JpsdPreset,
    /// Temporal AR(1) pole of the separable preset.
    #[arg(long, default_value_t = 0.8)]
    pole: f64,
    /// Graph lowpass decay of the separable preset.
    #[arg(long, default_value_t = 1.0)]
    graph_decay: f64,
    /// Wave speed of the wave preset; defaults like `simulate-wave`.
    #[arg(long)]
    wave_speed: Option<f64>,
    /// Pole damping of the wave preset.
    #[arg(long, default_value_t = 0.98)]
    damping: f64,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Joint)]
    model: ModelKind,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// Keep exactly K graph frequencies (joint model).
    #[arg(long, conflicts_with = "variance_frac")]
    rank_k: Option<usize>,
    /// Keep the smallest frequency set reaching this variance fraction.
    #[arg(long)]
    variance_frac: Option<f64>,
    /// Pick (P, Q) <= 3 by validation error instead of `--p/--q`.
    #[arg(long)]
    grid_search: bool,
    /// Where to write the eigenbasis (joint model). Defaults to the model
    /// path with extension `.basis.csv`.
    #[arg(long)]
    basis_out: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Fitted model JSON from `fit`.
    #[arg(long)]
    model: PathBuf,
    /// Eigenbasis CSV (joint models).
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Forecast horizon.
    #[arg(long)]
    steps: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Joint)]
    model: ModelKind,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    #[arg(long, default_value_t = 5)]
    kmax: usize,
    #[arg(long, conflicts_with = "variance_frac")]
    rank_k: Option<usize>,
    #[arg(long)]
    variance_frac: Option<f64>,
    #[arg(long)]
    grid_search: bool,
    /// Analysis window of the non-causal model.
    #[arg(long, default_value_t = 64)]
    window: usize,
    /// Also write the per-step summary CSV here.
    #[arg(long)]
    steps_csv: Option<PathBuf>,
}

#[derive(Args)]
struct LowrankSweepArgs {
    /// Comma-separated ignored-variance fractions, e.g. `0,0.25,0.5`.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5, 0.75])]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
}

#[derive(Args)]
struct JpsdEstimateArgs {
    /// Bartlett window length.
    #[arg(long, default_value_t = 64)]
    window: usize,
}

#[derive(Args)]
struct PredictNoncausalArgs {
    /// JPSD CSV (`n,tau,h`); estimated from the signal when omitted.
    #[arg(long)]
    jpsd: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    window: usize,
    #[arg(long)]
    steps: usize,
}

#[derive(Serialize)]
struct SimulationMeta<'a> {
    kind: &'a str,
    nodes: usize,
    t: usize,
    seed: u64,
    graph: Option<String>,
    graph_seed: Option<u64>,
    avg_degree: Option<f64>,
    wave_speed: Option<f64>,
    noise_std: Option<f64>,
    burn_in: Option<usize>,
    jpsd: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let code: u8 = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, Error> {
    value
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{flag} is required for this command")))
}

fn load_graph_arg(cli: &Cli) -> Result<Graph, Error> {
    match (&cli.graph, &cli.coords) {
        (Some(path), _) => io::load_graph(path),
        (None, Some(coords)) => {
            let coords = io::load_coords(coords)?;
            graph::knn_graph(&coords, 3)
        }
        (None, None) => Err(Error::InvalidArgument(
            "--graph (or --coords for a 3-NN graph) is required for this command".into(),
        )),
    }
}

fn basis_of(graph: &Graph) -> Result<EigenBasis, Error> {
    spectral::eigendecompose(&graph::laplacian(graph), DEFAULT_EIGEN_TOL)
}

fn load_signal_arg(cli: &Cli) -> Result<TimeVertexSignal, Error> {
    let loaded = io::load_signal_counting(required(&cli.signal, "--signal")?)?;
    if loaded.interpolated > 0 {
        eprintln!(
            "note: interpolated {} missing signal cells along time",
            loaded.interpolated
        );
    }
    Ok(loaded.signal)
}

fn selection(rank_k: Option<usize>, variance_frac: Option<f64>) -> SelectionCriterion {
    match (rank_k, variance_frac) {
        (Some(k), _) => SelectionCriterion::Count(k),
        (None, Some(rho)) => SelectionCriterion::VarianceFraction(rho),
        (None, None) => SelectionCriterion::VarianceFraction(1.0),
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::BuildGraph(args) => {
            let out = required(&cli.out, "--out")?;
            let g = match &args.kind {
                BuildGraphKind::Knn { k } => {
                    let coords = io::load_coords(required(&cli.coords, "--coords")?)?;
                    graph::knn_graph(&coords, *k)?
                }
                BuildGraphKind::Geometric {
                    nodes,
                    avg_degree,
                    coords_out,
                } => {
                    let g = graph::random_geometric_graph(*nodes, *avg_degree, cli.seed)?;
                    if let Some(path) = coords_out {
                        io::save_coords(path, g.coords().expect("geometric graphs carry coords"))?;
                    }
                    g
                }
            };
            io::save_graph(out, &g)?;
            println!(
                "graph: {} vertices, {} edges, average degree {:.2}",
                g.vertex_count(),
                g.edges().len(),
                g.average_degree()
            );
            Ok(())
        }

        Command::SimulateWave(args) => {
            let out = required(&cli.out, "--out")?;
            let (g, graph_desc, graph_seed, avg_degree) = match (&cli.graph, args.nodes) {
                (Some(path), _) => (
                    io::load_graph(path)?,
                    Some(path.display().to_string()),
                    None,
                    None,
                ),
                (None, Some(nodes)) => {
                    let deg = args.avg_degree.ok_or_else(|| {
                        Error::InvalidArgument("--avg-degree is required with --nodes".into())
                    })?;
                    let gseed = args.graph_seed.unwrap_or(cli.seed);
                    (
                        graph::random_geometric_graph(nodes, deg, gseed)?,
                        None,
                        Some(gseed),
                        Some(deg),
                    )
                }
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "provide --graph or --nodes/--avg-degree".into(),
                    ))
                }
            };
            let c = match args.wave_speed {
                Some(c) => c,
                None => simulate::default_wave_speed(&g)?,
            };
            let x = simulate::generate_wave(&g, args.t, c, args.noise_std, args.burn_in, cli.seed)?;
            io::save_signal(out, &x)?;
            io::save_json(
                &meta_path(out),
                &SimulationMeta {
                    kind: "wave",
                    nodes: g.vertex_count(),
                    t: args.t,
                    seed: cli.seed,
                    graph: graph_desc,
                    graph_seed,
                    avg_degree,
                    wave_speed: Some(c),
                    noise_std: Some(args.noise_std),
                    burn_in: Some(args.burn_in),
                    jpsd: None,
                },
            )?;
            println!("wave signal: {} x {} -> {}", x.vertex_count(), args.t, out.display());
            Ok(())
        }

        Command::SimulateJwss(args) => {
            let out = required(&cli.out, "--out")?;
            let g = load_graph_arg(&cli)?;
            let basis = basis_of(&g)?;
            let lam_max = basis.largest_eigenvalue().max(f64::MIN_POSITIVE);
            let (desc, response): (String, Box<dyn Fn(f64, f64) -> f64>) = match args.jpsd {
                JpsdPreset::White => ("white".into(), Box::new(|_, _| 1.0)),
                JpsdPreset::Separable => {
                    let pole = args.pole;
                    let decay = args.graph_decay;
                    if pole.is_nan() || pole.abs() >= 1.0 {
                        return Err(Error::InvalidArgument(format!(
                            "separable preset needs |pole| < 1, got {pole}"
                        )));
                    }
                    (
                        format!("separable(pole={pole}, graph_decay={decay})"),
                        Box::new(move |l: f64, w: f64| {
                            let denom = (1.0 - pole * w.cos()).powi(2) + (pole * w.sin()).powi(2);
                            (-decay * l / lam_max).exp() / denom
                        }),
                    )
                }
                JpsdPreset::Wave => {
                    let c = match args.wave_speed {
                        Some(c) => c,
                        None => 2.0 / lam_max.sqrt(),
                    };
                    let rho = args.damping;
                    if !(rho > 0.0 && rho < 1.0) {
                        return Err(Error::InvalidArgument(format!(
                            "wave preset needs damping in (0, 1), got {rho}"
                        )));
                    }
                    (
                        format!("wave(speed={c}, damping={rho})"),
                        Box::new(move |l: f64, w: f64| {
                            let theta = c * l.sqrt();
                            let re = 1.0 - 2.0 * rho * theta.cos() * w.cos()
                                + rho * rho * (2.0 * w).cos();
                            let im = 2.0 * rho * theta.cos() * w.sin()
                                - rho * rho * (2.0 * w).sin();
                            1.0 / (re * re + im * im)
                        }),
                    )
                }
            };
            let x = simulate::generate_jwss(&basis, &response, args.t, cli.seed)?;
            io::save_signal(out, &x)?;
            io::save_json(
                &meta_path(out),
                &SimulationMeta {
                    kind: "jwss",
                    nodes: x.vertex_count(),
                    t: args.t,
                    seed: cli.seed,
                    graph: cli.graph.as_ref().map(|p| p.display().to_string()),
                    graph_seed: None,
                    avg_degree: None,
                    wave_speed: None,
                    noise_std: None,
                    burn_in: None,
                    jpsd: Some(desc),
                },
            )?;
            println!("jwss signal: {} x {} -> {}", x.vertex_count(), args.t, out.display());
            Ok(())
        }

        Command::Fit(args) => {
            let out = required(&cli.out, "--out")?;
            let x = load_signal_arg(&cli)?;
            match args.model {
                ModelKind::Joint => {
                    let g = load_graph_arg(&cli)?;
                    let basis = basis_of(&g)?;
                    let (p, q) = if args.grid_search {
                        eval::grid_search_orders(&x, Some(&basis), 3, 3, 2)?
                    } else {
                        (args.p, args.q)
                    };
                    let model = joint_causal::fit(
                        &x,
                        &basis,
                        p,
                        q,
                        selection(args.rank_k, args.variance_frac),
                    )?;
                    std::fs::write(out, model.to_json()?)?;
                    let basis_path = args
                        .basis_out
                        .clone()
                        .unwrap_or_else(|| out.with_extension("basis.csv"));
                    io::save_basis(&basis_path, &basis)?;
                    println!(
                        "joint model: orders ({p},{q}), {} of {} frequencies, variance \
                         retained {:.4} -> {} (+ basis {})",
                        model.selected().len(),
                        basis.dim(),
                        model.variance_retained(),
                        out.display(),
                        basis_path.display()
                    );
                }
                ModelKind::Disjoint => {
                    let (p, q) = if args.grid_search {
                        eval::grid_search_orders(&x, None, 3, 3, 2)?
                    } else {
                        (args.p, args.q)
                    };
                    let model = baselines::fit_disjoint(&x, p, q)?;
                    std::fs::write(out, model.to_json()?)?;
                    println!(
                        "disjoint model: orders ({p},{q}), {} nodes -> {}",
                        model.vertex_count(),
                        out.display()
                    );
                }
                ModelKind::Noncausal => {
                    return Err(Error::InvalidArgument(
                        "the non-causal model is not a fitted artifact; use jpsd-estimate and \
                         predict-noncausal"
                            .into(),
                    ))
                }
            }
            Ok(())
        }

        Command::Predict(args) => {
            let out = required(&cli.out, "--out")?;
            let history = load_signal_arg(&cli)?;
            let text = io::read_to_string(&args.model)?;
            let forecast = if text.contains("\"basis_sha256\"") {
                let basis_path = required(&args.basis, "--basis")?;
                let basis = io::load_basis(basis_path)?;
                let model = JointCausalModel::from_json(&text, basis)?;
                model.predict(&history, args.steps)?
            } else {
                let model = DisjointModel::from_json(&text)?;
                model.predict(&history, args.steps)?
            };
            io::save_forecast(out, &forecast)?;
            println!(
                "forecast: {} x {} -> {}",
                forecast.nrows(),
                forecast.ncols(),
                out.display()
            );
            Ok(())
        }

        Command::Evaluate(args) => {
            let x = load_signal_arg(&cli)?;
            let (train, _) = eval::split_train_test(&x);
            let report = match args.model {
                ModelKind::Joint => {
                    let g = load_graph_arg(&cli)?;
                    let basis = basis_of(&g)?;
                    let (p, q) = if args.grid_search {
                        eval::grid_search_orders(&train, Some(&basis), 3, 3, 2)?
                    } else {
                        (args.p, args.q)
                    };
                    let started = std::time::Instant::now();
                    let model = joint_causal::fit(
                        &train,
                        &basis,
                        p,
                        q,
                        selection(args.rank_k, args.variance_frac),
                    )?;
                    let fit_seconds = started.elapsed().as_secs_f64();
                    eval::evaluate(&model, &x, args.kmax)?.with_fit_seconds(fit_seconds)
                }
                ModelKind::Disjoint => {
                    let (p, q) = if args.grid_search {
                        eval::grid_search_orders(&train, None, 3, 3, 2)?
                    } else {
                        (args.p, args.q)
                    };
                    let started = std::time::Instant::now();
                    let model = baselines::fit_disjoint(&train, p, q)?;
                    let fit_seconds = started.elapsed().as_secs_f64();
                    eval::evaluate(&model, &x, args.kmax)?.with_fit_seconds(fit_seconds)
                }
                ModelKind::Noncausal => {
                    let g = load_graph_arg(&cli)?;
                    let basis = basis_of(&g)?;
                    let started = std::time::Instant::now();
                    let model = NoncausalPredictor::fit(&train, &basis, args.window, args.kmax)?;
                    let fit_seconds = started.elapsed().as_secs_f64();
                    eval::evaluate(&model, &x, args.kmax)?.with_fit_seconds(fit_seconds)
                }
            };
            for step in &report.steps {
                println!(
                    "k={} median {:.4} mean {:.4} std {:.4} [{} evaluated, {} skipped]",
                    step.k, step.median, step.mean, step.std, step.count, step.skipped
                );
            }
            if let Some(out) = &cli.out {
                match cli.format {
                    Format::Json => io::save_json(out, &report)?,
                    Format::Csv => io::save_report_csv(out, &report)?,
                }
            }
            if let Some(path) = &args.steps_csv {
                io::save_report_csv(path, &report)?;
            }
            Ok(())
        }

        Command::LowrankSweep(args) => {
            let x = load_signal_arg(&cli)?;
            let g = load_graph_arg(&cli)?;
            let basis = basis_of(&g)?;
            let rows = eval::lowrank_sweep(&x, &basis, &args.fractions, args.p, args.q)?;
            for row in &rows {
                println!(
                    "ignored {:.2}: joint K={} err2 {:.4} fit {:.4}s | disjoint K={} err2 \
                     {:.4} fit {:.4}s",
                    row.fraction_ignored,
                    row.joint.components_kept,
                    row.joint.median_two_step_error,
                    row.joint.fit_seconds,
                    row.disjoint.components_kept,
                    row.disjoint.median_two_step_error,
                    row.disjoint.fit_seconds
                );
            }
            if let Some(out) = &cli.out {
                match cli.format {
                    Format::Json => io::save_json(out, &rows)?,
                    Format::Csv => {
                        let mut writer = csv::WriterBuilder::new().from_path(out).map_err(
                            |e| Error::InvalidArgument(format!("cannot write {}: {e}", out.display())),
                        )?;
                        writer
                            .write_record([
                                "fraction_ignored",
                                "joint_k",
                                "joint_variance_retained",
                                "joint_median_2step",
                                "joint_fit_seconds",
                                "disjoint_k",
                                "disjoint_variance_retained",
                                "disjoint_median_2step",
                                "disjoint_fit_seconds",
                            ])
                            .map_err(io_csv)?;
                        for row in &rows {
                            writer
                                .write_record([
                                    format!("{}", row.fraction_ignored),
                                    format!("{}", row.joint.components_kept),
                                    format!("{:.9e}", row.joint.variance_retained),
                                    format!("{:.9e}", row.joint.median_two_step_error),
                                    format!("{:.9e}", row.joint.fit_seconds),
                                    format!("{}", row.disjoint.components_kept),
                                    format!("{:.9e}", row.disjoint.variance_retained),
                                    format!("{:.9e}", row.disjoint.median_two_step_error),
                                    format!("{:.9e}", row.disjoint.fit_seconds),
                                ])
                                .map_err(io_csv)?;
                        }
                        writer.flush()?;
                    }
                }
            }
            Ok(())
        }

        Command::JpsdEstimate(args) => {
            let out = required(&cli.out, "--out")?;
            let x = load_signal_arg(&cli)?;
            let g = load_graph_arg(&cli)?;
            let basis = basis_of(&g)?;
            // Estimate on the per-node demeaned signal.
            let means = x
                .values()
                .mean_axis(ndarray::Axis(1))
                .expect("signal has columns");
            let centered = TimeVertexSignal::new(
                x.values() - &means.view().insert_axis(ndarray::Axis(1)),
            )?;
            let jpsd = baselines::estimate_jpsd(&centered, &basis, args.window)?;
            io::save_jpsd(out, &jpsd)?;
            println!(
                "JPSD: {} x {} bins from {} windows -> {}",
                jpsd.vertex_count(),
                jpsd.window_len(),
                x.time_len() / args.window,
                out.display()
            );
            Ok(())
        }

        Command::PredictNoncausal(args) => {
            let out = required(&cli.out, "--out")?;
            let history = load_signal_arg(&cli)?;
            let g = load_graph_arg(&cli)?;
            let basis = basis_of(&g)?;
            let means = history
                .values()
                .mean_axis(ndarray::Axis(1))
                .expect("signal has columns");
            let jpsd = match &args.jpsd {
                Some(path) => io::load_jpsd(path)?,
                None => {
                    let centered = TimeVertexSignal::new(
                        history.values() - &means.view().insert_axis(ndarray::Axis(1)),
                    )?;
                    baselines::estimate_jpsd(&centered, &basis, args.window)?
                }
            };
            let predictor = NoncausalPredictor::new(jpsd, basis, means, args.steps)?;
            let forecast = predictor.forecast(&history, args.steps)?;
            io::save_forecast(out, &forecast)?;
            println!(
                "non-causal forecast: {} x {} -> {}",
                forecast.nrows(),
                forecast.ncols(),
                out.display()
            );
            Ok(())
        }
    }
}

fn io_csv(e: csv::Error) -> Error {
    Error::Csv(e)
}
