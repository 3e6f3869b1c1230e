use std::path::PathBuf;

use bordered_gue::acceptance::{run_all, Mode};
use bordered_gue::edge::{finite_to_edge_convergence, EdgeTuning};
use bordered_gue::ensemble::{eigenvalues, sample_bordered, EnsembleParams};
use bordered_gue::experiments::{
    edge_fluctuation_experiment, par_draws, phase_scan, EdgeExperimentConfig, EdgeReference, PhaseGrid,
};
use bordered_gue::kernel::{Kernel, KernelPath, KernelSpec};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    parse_list, EdgeArgs, EdgePathArg, Format, KernelArgs, Linspace, PathArg, PhaseArgs, ReferenceArg, SampleArgs,
    VerifyArgs,
};
use crate::error::CliError;
use crate::output::{Cell, Run, Table};

/// Where and how a command writes.
pub struct Sink {
    pub dir: PathBuf,
    pub format: Format,
}

fn required<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Param(format!("--{name} is required")))
}

#[derive(Debug, Serialize)]
struct SampleConfig {
    n: usize,
    r: usize,
    mu: f64,
    sigma: f64,
    draws: usize,
    seed: u64,
}

pub fn sample(args: SampleArgs, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let cfg = SampleConfig {
        n: required(args.n, "n")?,
        r: args.r.unwrap_or(1),
        mu: args.mu.unwrap_or(0.0),
        sigma: args.sigma.unwrap_or(1.0),
        draws: args.draws.unwrap_or(1000),
        seed: args.seed.unwrap_or(0),
    };
    if cfg.draws == 0 {
        return Err(CliError::Param("draws must be >= 1".into()));
    }
    let params = EnsembleParams::new(cfg.n, cfg.r, cfg.mu, cfg.sigma, cfg.seed)?;
    let mut run = Run::new("sample", &sink.dir, sink.format);
    let spectra = par_draws(cfg.seed, 0, cfg.draws, |rng| eigenvalues(&sample_bordered(&params, rng)?))?;
    let mut table = Table::matrix("sample");
    for s in &spectra {
        table.push(s.values().iter().map(|&x| Cell::from(x)));
    }
    run.add(table);
    let layout = json!({ "rows": "draws", "columns": "eigenvalues, descending", "dimension": params.dim() });
    run.finish(Some(cfg.seed), &cfg, layout)
}

#[derive(Debug, Serialize)]
struct KernelConfig {
    path: KernelPath,
    n: usize,
    mu: f64,
    sigma2: f64,
    grid: Linspace,
}

pub fn kernel(args: KernelArgs, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let n = required(args.n, "n")?;
    let mu = args.mu.unwrap_or(0.0);
    let sigma2 = args.sigma2.unwrap_or(1.0);
    if !(sigma2 > 0.0) {
        return Err(CliError::Param(format!("sigma2 must be > 0 (got {sigma2})")));
    }
    let grid = Linspace::parse("grid", args.grid.as_deref().unwrap_or("-4:4:81"))?;
    let sigma = sigma2.sqrt();
    let spec = match args.path.unwrap_or(PathArg::Auto) {
        PathArg::Auto => KernelSpec::auto(n, mu, sigma)?,
        PathArg::General => KernelSpec::new(n, mu, sigma, KernelPath::General)?,
        PathArg::Sigma1 => KernelSpec::new(n, mu, sigma, KernelPath::Sigma1)?,
        PathArg::Mu0 => KernelSpec::new(n, mu, sigma, KernelPath::Mu0)?,
        PathArg::Gue => KernelSpec::new(n, mu, sigma, KernelPath::Gue)?,
    };
    let cfg = KernelConfig { path: spec.path, n, mu, sigma2, grid };
    let k = Kernel::new(&spec)?;
    let xs = grid.points();

    let mut run = Run::new("kernel", &sink.dir, sink.format);
    let values = k.grid(&xs, &xs);
    let mut matrix = Table::matrix("kernel_matrix");
    for row in values.chunks(xs.len()) {
        matrix.push(row.iter().map(|v| Cell::from(v.value)));
    }
    run.add(matrix);
    let mut diag = Table::new("kernel_diagonal", &["x", "density"]);
    let mut trapezoid = 0.0;
    let h = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    for (i, &x) in xs.iter().enumerate() {
        let d = k.density(x);
        let w = if i == 0 || i + 1 == xs.len() { 0.5 } else { 1.0 };
        trapezoid += w * h * d;
        diag.push([Cell::from(x), Cell::from(d)]);
    }
    run.add(diag);
    let results = json!({
        "matrix_layout": "row i is x_i, column j is y_j, both on the grid",
        "trapezoid_mass": trapezoid,
        "expected_mass": n + 1,
    });
    run.finish(None, &cfg, results)
}

#[derive(Debug, Serialize)]
struct PhaseConfig {
    c: Linspace,
    sigma2: Linspace,
    n: usize,
    draws: usize,
    seed: u64,
}

pub fn phase(args: PhaseArgs, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let cfg = PhaseConfig {
        c: Linspace::parse("c", args.c.as_deref().unwrap_or("0:3:7"))?,
        sigma2: Linspace::parse("sigma2", args.sigma2.as_deref().unwrap_or("0.5:4:8"))?,
        n: args.n.unwrap_or(200),
        draws: args.draws.unwrap_or(200),
        seed: args.seed.unwrap_or(0),
    };
    if cfg.draws < 2 {
        return Err(CliError::Param("draws must be >= 2".into()));
    }
    let grid = PhaseGrid { c: cfg.c.points(), sigma2: cfg.sigma2.points() };
    let scan = phase_scan(&grid, cfg.n, cfg.draws, cfg.seed)?;

    let mut run = Run::new("phase", &sink.dir, sink.format);
    let mut rows = Table::new(
        "phase_grid",
        &[
            "c",
            "sigma2",
            "mu",
            "separation",
            "predicted_largest",
            "empirical_largest_mean",
            "largest_std",
            "largest_se",
            "predicted_smallest",
            "empirical_smallest_mean",
            "smallest_std",
            "smallest_se",
            "gap_largest",
            "gap_smallest",
        ],
    );
    for r in &scan.rows {
        let sep = serde_json::to_value(r.separation).ok().and_then(|v| v.as_str().map(str::to_string));
        rows.push([
            r.c.into(),
            r.sigma2.into(),
            r.mu.into(),
            Cell::Text(sep.unwrap_or_default()),
            r.predicted_largest.into(),
            r.largest_mean.into(),
            r.largest_std.into(),
            r.largest_se.into(),
            r.predicted_smallest.into(),
            r.smallest_mean.into(),
            r.smallest_std.into(),
            r.smallest_se.into(),
            r.gap_largest.into(),
            r.gap_smallest.into(),
        ]);
    }
    run.add(rows);
    let mut boundary = Table::new("phase_boundary", &["c", "sigma2_empirical", "sigma2_predicted"]);
    for b in &scan.boundary {
        boundary.push([b.c.into(), b.sigma2.into(), b.predicted.into()]);
    }
    run.add(boundary);
    let results = json!({
        "separation_rule": "largest separates when sigma2 + c > 2, smallest when sigma2 - c > 2",
        "gap_statistic": "(mean largest - sqrt(2n)) * sqrt(2) * n^(1/6)",
    });
    run.finish(Some(cfg.seed), &cfg, results)
}

#[derive(Debug, Serialize)]
struct EdgeConfig {
    tuning: EdgeTuning,
    n: usize,
    draws: usize,
    seed: u64,
    reference: EdgeReference,
    ks_bound: f64,
    ns: Vec<usize>,
}

pub fn edge(args: EdgeArgs, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let n = args.n.unwrap_or(200);
    let s = args.s.unwrap_or(0.0);
    let tuning = match args.path.unwrap_or(EdgePathArg::Sigma1) {
        EdgePathArg::Sigma1 => EdgeTuning::Sigma1 { s },
        EdgePathArg::Mu0 => EdgeTuning::Mu0 { s },
        EdgePathArg::General => {
            let c_hat = args.c_hat.unwrap_or(1.0);
            let sigma_hat2 = args.sigma_hat2.unwrap_or(2.0 - c_hat);
            EdgeTuning::general(n, c_hat, sigma_hat2, args.s1.unwrap_or(0.0), args.s2.unwrap_or(0.0))?
        }
    };
    let cfg = EdgeConfig {
        tuning,
        n,
        draws: args.draws.unwrap_or(5000),
        seed: args.seed.unwrap_or(0),
        reference: match args.reference.unwrap_or(ReferenceArg::Deformed) {
            ReferenceArg::Deformed => EdgeReference::Deformed,
            ReferenceArg::Airy => EdgeReference::PureAiry,
        },
        ks_bound: args.ks_bound.unwrap_or(0.05),
        ns: parse_list("ns", args.ns.as_deref().unwrap_or("50,100,200"))?,
    };
    let mut exp = EdgeExperimentConfig::new(cfg.n, cfg.tuning, cfg.draws, cfg.seed);
    exp.reference = cfg.reference;
    exp.ks_bound = cfg.ks_bound;
    let result = edge_fluctuation_experiment(&exp)?;
    let convergence = finite_to_edge_convergence(&cfg.tuning, 0.0, 0.0, &cfg.ns)?;

    let mut run = Run::new("edge", &sink.dir, sink.format);
    let mut cdf = Table::new("edge_cdf", &["x", "empirical", "predicted"]);
    for r in &result.cdf {
        cdf.push([r.x.into(), r.empirical.into(), r.predicted.into()]);
    }
    run.add(cdf);
    let mut conv = Table::new("edge_convergence", &["n", "finite", "limit", "deviation"]);
    for r in &convergence {
        conv.push([r.n.into(), r.finite.into(), r.limit.into(), r.deviation.into()]);
    }
    run.add(conv);
    let monotone = convergence.windows(2).all(|w| w[1].deviation < w[0].deviation);
    let results = json!({ "report": result.report, "deviation_decreasing": monotone, "convergence_point": [0.0, 0.0] });
    run.finish(Some(cfg.seed), &cfg, results)
}

#[derive(Debug, Serialize)]
struct VerifyConfig {
    mode: Mode,
    seed: u64,
}

pub fn verify(args: VerifyArgs, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let cfg = VerifyConfig { mode: if args.quick { Mode::Quick } else { Mode::Full }, seed: args.seed.unwrap_or(2024) };
    let results = run_all(cfg.mode, cfg.seed);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let run = Run::new("verify", &sink.dir, sink.format);
    let written = run.finish(Some(cfg.seed), &cfg, json!({ "criteria": results, "all_passed": failed.is_empty() }))?;
    if failed.is_empty() {
        Ok(written)
    } else {
        Err(CliError::Failed(format!("verification failed for criteria {failed:?}")))
    }
}
