use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use trotterforge::experiments::report::{format_float, write_table};
use trotterforge::experiments::{
    convergence_study, depth_search, halving_sequence, lightcone_study, single_step_order,
    truncation_study, DEFAULT_STEP_CAP,
};
use trotterforge::model::{
    anchored_norm, decompose_even_odd, decompose_greedy_coloring, interaction_norm, Decomposition,
    Model,
};
use trotterforge::schedule::{
    check_order_conditions, closed_form_total_time, level_fractions, merged_factor_count, suzuki,
    ScheduleParams,
};
use trotterforge::simulator::{heisenberg, run_schedule};
use trotterforge::{error_norm, Error};

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_ASSERTION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "trotterforge",
    version,
    about = "Trotter-Suzuki product formulas on small spin chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule and export it with its path trace and order checks.
    Schedule(ScheduleArgs),
    /// Global error against step count, with a fitted order.
    Converge(ConvergeArgs),
    /// One-step error against step size.
    Step(StepArgs),
    /// Leakage of an evolved observable outside fattened supports.
    Lightcone(LightconeArgs),
    /// Smallest step count meeting an error target.
    Depth(DepthArgs),
    /// Long-range truncation: norm bound and dynamical error.
    Truncate(TruncateArgs),
    /// Interaction norms of a model.
    Norm(NormArgs),
    /// Evolve the observable exactly or with a product formula.
    Evolve(EvolveArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct OrderArgs {
    /// Order label of the product formula.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Recursion arity (odd, at least 3).
    #[arg(long, default_value_t = 3)]
    r: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    /// Bond parity on a chain, fields folded into the bonds.
    EvenOdd,
    /// Greedy colouring of overlapping terms.
    Coloring,
}

#[derive(Args)]
struct ModelArgs {
    /// Model file (JSON, or TOML by extension).
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = Split::EvenOdd)]
    decomposition: Split,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    order: OrderArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Step counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64])]
    n: Vec<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct StepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    order: OrderArgs,
    /// Largest step size; each further sample halves it.
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct LightconeArgs {
    /// Model file (JSON, or TOML by extension).
    #[arg(long)]
    model: PathBuf,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    t: Vec<f64>,
    /// Evolve under one layer of the decomposition instead of the full model.
    #[arg(long)]
    layer: Option<usize>,
    #[arg(long, value_enum, default_value_t = Split::EvenOdd)]
    decomposition: Split,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    epsilon: f64,
    /// Largest step count tried.
    #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
    cap: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TruncateArgs {
    /// Model file (JSON, or TOML by extension).
    #[arg(long)]
    model: PathBuf,
    /// Truncation ranges, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 5, 6, 7, 8])]
    ranges: Vec<usize>,
    /// Weaker decay rate, below the model's rate.
    #[arg(long, default_value_t = 0.5)]
    b_prime: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct NormArgs {
    /// Model file (JSON, or TOML by extension).
    #[arg(long)]
    model: PathBuf,
    /// Anchor sites for the anchored norm, comma separated.
    #[arg(long, value_delimiter = ',')]
    anchor: Vec<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Product-formula steps; exact evolution when absent.
    #[arg(long)]
    n: Option<usize>,
    /// Write the evolved matrix as row-major little-endian complex doubles.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_)
        | Error::Config(_)
        | Error::DimensionMismatch(_)
        | Error::NotHermitian(_) => EXIT_VALIDATION,
        Error::DegenerateFit(_) => EXIT_ASSERTION,
        Error::ResourceCap { .. } | Error::SearchCapExceeded { .. } => EXIT_RESOURCE,
        Error::Linalg(_) | Error::Io(_) | Error::Csv(_) => EXIT_FAILURE,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Schedule(a) => cmd_schedule(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Step(a) => cmd_step(a),
        Command::Lightcone(a) => cmd_lightcone(a),
        Command::Depth(a) => cmd_depth(a),
        Command::Truncate(a) => cmd_truncate(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Evolve(a) => cmd_evolve(a),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Error> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    info!("writing {}", path.display());
    Ok(BufWriter::new(File::create(path)?))
}

fn split(model: &Model, how: Split) -> Result<Decomposition, Error> {
    match how {
        Split::EvenOdd => decompose_even_odd(&model.interaction.fold_onsite_terms()?, &model.graph),
        Split::Coloring => decompose_greedy_coloring(&model.interaction),
    }
}

fn validate_order(order: &OrderArgs, k: usize) -> Result<(), Error> {
    ScheduleParams::new(k, order.m, order.r).map(|_| ())
}

fn validate_time(t: f64) -> Result<(), Error> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time must be finite, got {t}"
        )));
    }
    Ok(())
}

fn cmd_schedule(a: ScheduleArgs) -> Result<u8, Error> {
    let params = ScheduleParams::new(a.k, a.order.m, a.order.r)?;
    let raw = suzuki(params.k, params.m, params.r)?;
    let merged = raw.merge_adjacent();
    merged.write_to(create(&a.out.out, "schedule.tsv")?)?;
    merged
        .path_trace()
        .write_csv(create(&a.out.out, "path_trace.csv")?)?;

    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for level in 1..=params.levels() {
        let fractions = level_fractions(level, params.r)?;
        let c = check_order_conditions(&fractions, level);
        worst = worst.max(c.max_residual());
        rows.push(vec![
            format!("level{level}_sum_residual"),
            format_float(c.sum_residual),
        ]);
        rows.push(vec![
            format!("level{level}_power_residual"),
            format_float(c.power_residual),
        ]);
        rows.push(vec![
            format!("level{level}_palindrome_residual"),
            format_float(c.palindrome_residual),
        ]);
    }
    let layer_defect = raw
        .layer_sums()
        .iter()
        .fold(0.0f64, |m, s| m.max((s - 1.0).abs()));
    rows.push(vec!["factor_count".into(), merged.len().to_string()]);
    rows.push(vec![
        "expected_factor_count".into(),
        merged_factor_count(params.k, params.m, params.r).to_string(),
    ]);
    rows.push(vec![
        "total_absolute_time".into(),
        format_float(raw.total_absolute_time()),
    ]);
    rows.push(vec![
        "closed_form_total_time".into(),
        format_float(closed_form_total_time(params.k, params.m, params.r)?),
    ]);
    rows.push(vec![
        "max_layer_sum_defect".into(),
        format_float(layer_defect),
    ]);
    rows.push(vec!["palindrome".into(), raw.is_palindrome().to_string()]);
    write_table(
        create(&a.out.out, "conditions.csv")?,
        &["quantity", "value"],
        rows,
    )?;

    println!(
        "entries={} raw_entries={} total_time={} max_residual={:e}",
        merged.len(),
        raw.len(),
        format_float(raw.total_absolute_time()),
        worst
    );
    Ok(0)
}

fn cmd_converge(a: ConvergeArgs) -> Result<u8, Error> {
    validate_time(a.t)?;
    let model = Model::load(&a.model.model)?;
    let d = split(&model, a.model.decomposition)?;
    validate_order(&a.order, d.k())?;
    let o = model.observable_on(&model.graph.sites())?;
    let id = a.model.model.display().to_string();
    let report = convergence_study(&id, &d, &o, a.t, a.order.m, a.order.r, &a.n)?;
    report.write_csv(create(&a.out.out, "convergence.csv")?)?;
    println!(
        "alpha_hat={:.4} expected={} r_squared={:.6}",
        report.fitted_order(),
        report.alpha_expected,
        report.r_squared()
    );
    Ok(0)
}

fn cmd_step(a: StepArgs) -> Result<u8, Error> {
    let model = Model::load(&a.model.model)?;
    let d = split(&model, a.model.decomposition)?;
    validate_order(&a.order, d.k())?;
    let o = model.observable_on(&model.graph.sites())?;
    let report = single_step_order(
        &d,
        &o,
        a.order.m,
        a.order.r,
        &halving_sequence(a.mu, a.count),
    )?;
    report.write_csv(create(&a.out.out, "single_step.csv")?)?;
    println!(
        "exponent={:.4} expected={}",
        report.exponent(),
        report.exponent_expected
    );
    Ok(0)
}

fn cmd_lightcone(a: LightconeArgs) -> Result<u8, Error> {
    for &t in &a.t {
        validate_time(t)?;
    }
    let model = Model::load(&a.model)?;
    let generator = match a.layer {
        None => model.interaction.clone(),
        Some(j) => {
            let d = split(&model, a.decomposition)?;
            d.layers().get(j).cloned().ok_or_else(|| {
                Error::InvalidParameter(format!("layer {j} of a {}-layer decomposition", d.k()))
            })?
        }
    };
    let o = model.observable_on(&model.graph.sites())?;
    let anchor: BTreeSet<usize> = model
        .observable
        .as_ref()
        .map(|p| p.string.support())
        .unwrap_or_default();
    let report = lightcone_study(&generator, &model.graph, &o, &anchor, &a.t)?;
    report.write_csv(create(&a.out.out, "lightcone.csv")?)?;
    let radii: Vec<String> = report
        .radii()
        .iter()
        .map(|(t, r)| format!("{t}:{r}"))
        .collect();
    println!("r_star={}", radii.join(","));
    Ok(0)
}

fn cmd_depth(a: DepthArgs) -> Result<u8, Error> {
    validate_time(a.t)?;
    let model = Model::load(&a.model.model)?;
    let d = split(&model, a.model.decomposition)?;
    validate_order(&a.order, d.k())?;
    let o = model.observable_on(&model.graph.sites())?;
    let report = depth_search(&d, &o, a.t, a.order.m, a.order.r, a.epsilon, a.cap)?;
    report.write_csv(create(&a.out.out, "depth.csv")?)?;
    println!(
        "n_min={} factors_per_step={} total_depth={} error={:e}",
        report.n_min, report.factors_per_step, report.total_depth, report.error_at_n_min
    );
    Ok(if report.certificate_holds() {
        0
    } else {
        EXIT_ASSERTION
    })
}

fn cmd_truncate(a: TruncateArgs) -> Result<u8, Error> {
    validate_time(a.t)?;
    let model = Model::load(&a.model)?;
    let o = model.observable_on(&model.graph.sites())?;
    let report = truncation_study(
        &model.interaction,
        &model.graph,
        &model.decay,
        a.b_prime,
        &a.ranges,
        a.t,
        &o,
    )?;
    report.write_csv(create(&a.out.out, "truncation.csv")?)?;
    let violations = report.violations();
    println!(
        "ranges={} bound_holds={} violations={:?}",
        report.rows.len(),
        violations.is_empty(),
        violations
    );
    Ok(if violations.is_empty() {
        0
    } else {
        EXIT_ASSERTION
    })
}

fn cmd_norm(a: NormArgs) -> Result<u8, Error> {
    let model = Model::load(&a.model)?;
    let norm = interaction_norm(&model.interaction, &model.graph, &model.decay)?;
    let mut rows = vec![
        vec!["interaction_norm".into(), format_float(norm)],
        vec!["b".into(), format_float(model.decay.b())],
        vec!["p".into(), format_float(model.decay.p())],
        vec![
            "max_diameter".into(),
            model.interaction.max_diameter(&model.graph).to_string(),
        ],
    ];
    let mut summary = format!("norm={norm}");
    if !a.anchor.is_empty() {
        let anchor: BTreeSet<usize> = a.anchor.iter().copied().collect();
        let anchored = anchored_norm(&model.interaction, &model.graph, &model.decay, &anchor)?;
        rows.push(vec!["anchored_norm".into(), format_float(anchored)]);
        summary.push_str(&format!(" anchored_norm={anchored}"));
    }
    write_table(
        create(&a.out.out, "norm.csv")?,
        &["quantity", "value"],
        rows,
    )?;
    println!("{summary}");
    Ok(0)
}

fn cmd_evolve(a: EvolveArgs) -> Result<u8, Error> {
    validate_time(a.t)?;
    let model = Model::load(&a.model.model)?;
    let region = model.graph.sites();
    let o = model.observable_on(&region)?;
    let exact = heisenberg(&model.interaction.assemble(&region)?, a.t, &o)?;
    let mut rows = vec![vec![
        "exact_norm".into(),
        format_float(exact.spectral_norm()?),
    ]];
    let evolved = match a.n {
        None => exact,
        Some(0) => return Err(Error::InvalidParameter("n must be at least 1".into())),
        Some(n) => {
            let d = split(&model, a.model.decomposition)?;
            validate_order(&a.order, d.k())?;
            let schedule = suzuki(d.k(), a.order.m, a.order.r)?.merge_adjacent();
            let approx = run_schedule(&d, &schedule, a.t / n as f64, n, &o)?;
            let err = error_norm(&exact, &approx)?;
            rows.push(vec![
                "product_norm".into(),
                format_float(approx.spectral_norm()?),
            ]);
            rows.push(vec!["error".into(), format_float(err)]);
            println!("error={err:e}");
            approx
        }
    };
    write_table(
        create(&a.out.out, "evolve.csv")?,
        &["quantity", "value"],
        rows,
    )?;
    if let Some(path) = a.dump {
        fs::write(&path, evolved.to_le_bytes())?;
        info!(
            "dumped {} bytes to {}",
            evolved.dim() * evolved.dim() * 16,
            path.display()
        );
    }
    Ok(0)
}
