use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use jensen_lab_core::eigen::{eigh, DEFAULT_CLUSTER_TOL};
use jensen_lab_core::json::hermitian_from_json;
use jensen_lab_core::random::{
    hermitian_in_from_rng, random_hermitian_in, random_projection_family, rng_for,
};
use jensen_lab_core::verify::{
    check_reconstruction, demo_approximation, demo_decompose, demo_pinch,
    extract_representing_function, falsify, falsify_sweep, run_batch, BatchConfig, CheckKind,
    FalsifyTarget,
};
use jensen_lab_core::{HermitianMatrix, Interval, OperatorMap, ScalarFunction};

use crate::args::*;

/// Stream used by the CLI for the second random operand of a demo.
const DEMO_STREAM: u64 = 100;

/// Rounding slack when judging whether approximation errors decrease.
const MONOTONE_SLACK: f64 = 1e-12;

/// Everything needed to reproduce a run; embedded in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub dim: usize,
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub map_spec: Option<String>,
    pub function_spec: Option<String>,
    pub interval: Option<Interval>,
    pub mesh: Option<Vec<f64>>,
    pub check: Option<String>,
    pub k: Option<usize>,
    pub grid: Option<String>,
    pub matrix: Option<String>,
    pub expect: Option<Expect>,
    pub sweep: Option<Vec<usize>>,
    pub output_path: Option<String>,
}

impl RunConfig {
    fn new(command: &'static str, common: &Common) -> Result<Self> {
        if common.dim == 0 {
            bail!("--dim must be at least 1");
        }
        if let Some(t) = common.tol {
            if !(t > 0.0) || !t.is_finite() {
                bail!("--tol must be positive, got {t}");
            }
        }
        Ok(Self {
            command,
            dim: common.dim,
            seed: common.seed,
            tol: common.tol,
            interval: parse_interval(common)?,
            output_path: common.out.as_ref().map(|p| p.display().to_string()),
            ..Default::default()
        })
    }

    fn with_trials(mut self, trials: usize) -> Result<Self> {
        if trials == 0 {
            bail!("--trials must be at least 1");
        }
        self.trials = Some(trials);
        Ok(self)
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

/// A finished command: its JSON report and whether it counts as success.
pub struct Outcome {
    pub json: String,
    pub ok: bool,
}

fn outcome<T: Serialize>(config: &RunConfig, body: T, ok: bool) -> Result<Outcome> {
    let mut json = serde_json::to_string_pretty(&Report { config, body })?;
    json.push('\n');
    Ok(Outcome { json, ok })
}

fn parse_interval(common: &Common) -> Result<Option<Interval>> {
    common
        .interval
        .as_deref()
        .map(|s| {
            s.parse::<Interval>()
                .map_err(|e| anyhow!("--interval: {e}"))
        })
        .transpose()
}

fn resolve_map(
    select: &MapSelect,
    interval: Option<Interval>,
    config: &mut RunConfig,
) -> Result<OperatorMap> {
    config.map_spec = select.map.clone();
    config.function_spec = select.function.clone();
    let map = match (&select.map, &select.function) {
        (Some(_), Some(_)) => bail!("give either --map or --function, not both"),
        (None, None) => bail!("one of --map or --function is required"),
        (Some(m), None) => m
            .parse::<OperatorMap>()
            .map_err(|e| anyhow!("--map: {e}"))?,
        (None, Some(f)) => OperatorMap::spectral(
            f.parse::<ScalarFunction>()
                .map_err(|e| anyhow!("--function: {e}"))?,
        ),
    };
    match interval {
        Some(j) => Ok(map.with_domain(j)?),
        None => Ok(map),
    }
}

fn load_matrix(path: &Path, config: &mut RunConfig) -> Result<HermitianMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = hermitian_from_json(&text)
        .with_context(|| format!("loading matrix from {}", path.display()))?;
    config.matrix = Some(path.display().to_string());
    config.dim = m.dim();
    Ok(m)
}

fn operand(matrix: Option<&Path>, j: &Interval, config: &mut RunConfig) -> Result<HermitianMatrix> {
    match matrix {
        Some(p) => load_matrix(p, config),
        None => Ok(random_hermitian_in(j, config.dim, config.seed)?),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("verify", &args.common)?.with_trials(args.trials)?;
    let map = resolve_map(&args.select, config.interval, &mut config)?;
    let check: CheckKind = args.check.parse()?;
    if args.k == 0 {
        bail!("--k must be at least 1");
    }
    config.check = Some(check.to_string());
    config.k = Some(args.k);
    let result = run_batch(&BatchConfig {
        check,
        map,
        dim: config.dim,
        k: args.k,
        trials: args.trials,
        seed: config.seed,
        tol: config.tol,
        cluster_tol: DEFAULT_CLUSTER_TOL,
    })?;
    let ok = result.all_passed();
    outcome(&config, result, ok)
}

pub fn falsify_cmd(args: &FalsifyArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("falsify", &args.common)?.with_trials(args.trials)?;
    let map = resolve_map(&args.select, config.interval, &mut config)?;
    let check: CheckKind = args.check.parse()?;
    config.check = Some(check.to_string());
    config.k = args.k;
    config.expect = args.expect;
    let mut target = FalsifyTarget::new(map, check);
    if let Some(k) = args.k {
        target = target.with_k(k);
    }

    if let Some(dims) = &args.sweep {
        if dims.is_empty() || dims.contains(&0) {
            bail!("--sweep needs positive dimensions");
        }
        config.sweep = Some(dims.clone());
        #[derive(Serialize)]
        struct Sweep {
            sweep: Vec<jensen_lab_core::verify::SweepRow>,
        }
        let sweep = falsify_sweep(&target, dims, args.trials, config.seed, config.tol)?;
        return outcome(&config, Sweep { sweep }, true);
    }

    let result = falsify(&target, config.dim, args.trials, config.seed, config.tol)?;
    let ok = match args.expect {
        Some(Expect::Found) => result.found,
        Some(Expect::None) | None => !result.found,
    };
    outcome(&config, result, ok)
}

pub fn extract(args: &ExtractArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("extract-f", &args.common)?;
    let map = resolve_map(&args.select, config.interval, &mut config)?;
    config.grid = Some(args.grid.clone());
    let grid = parse_grid(&args.grid)?;
    let table = extract_representing_function(&map, &grid, config.dim)?;
    outcome(&config, table, true)
}

/// `lo:hi:n` → `n` equally spaced points from `lo` to `hi` inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        bail!("--grid expects lo:hi:npoints, got `{spec}`");
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad grid start `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad grid end `{hi}`"))?;
    let n: usize = n
        .trim()
        .parse()
        .with_context(|| format!("bad grid size `{n}`"))?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && hi <= lo) {
        bail!("--grid needs finite lo < hi and at least one point, got `{spec}`");
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
        .collect())
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("reconstruct", &args.common)?;
    let map = resolve_map(&args.select, config.interval, &mut config)?;
    let a = operand(args.matrix.as_deref(), &map.domain(), &mut config)?;
    let tol = config
        .tol
        .unwrap_or_else(|| jensen_lab_core::psd_tol(&[&a]));
    let report = check_reconstruction(&map, &a, DEFAULT_CLUSTER_TOL, tol)?;
    let ok = report.pass;
    outcome(&config, report, ok)
}

pub fn demo_pinch_cmd(args: &DemoPinchArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("demo-pinch", &args.common)?;
    let j = config.interval.unwrap_or(Interval::new(-1.0, 1.0)?);
    let x = operand(args.matrix.as_deref(), &j, &mut config)?;
    config.k = Some(args.k);
    let family = random_projection_family(x.dim(), args.k, config.seed)?;
    let demo = demo_pinch(&x, &family)?;
    let ok = demo.relative_deviation <= config.tol.unwrap_or(1e-10);
    outcome(&config, demo, ok)
}

pub fn demo_decompose_cmd(args: &DemoDecomposeArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("demo-decompose", &args.common)?;
    let j = config.interval.unwrap_or(Interval::new(-1.0, 1.0)?);
    let a = operand(args.matrix.as_deref(), &j, &mut config)?;
    let y = match &args.upper {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            hermitian_from_json(&text)
                .with_context(|| format!("loading matrix from {}", p.display()))?
        }
        None => {
            let unit = Interval::new(0.0, 1.0)?;
            let g = hermitian_in_from_rng(&unit, a.dim(), &mut rng_for(config.seed, DEMO_STREAM));
            &a + &g
        }
    };
    let alpha = match args.alpha {
        Some(alpha) => alpha,
        None => eigh(&a)?.min() - 0.5,
    };
    let demo = demo_decompose(&a, &y, alpha)?;
    let tol = config.tol.unwrap_or(1e-8 * (1.0 + a.max_norm()));
    let ok = demo.reconstruction_residual <= tol && demo.pair_residual <= 1e-9;
    outcome(&config, demo, ok)
}

pub fn demo_approx_cmd(args: &DemoApproxArgs) -> Result<Outcome> {
    let mut config = RunConfig::new("demo-approx", &args.common)?;
    let f: ScalarFunction = args
        .function
        .parse()
        .map_err(|e| anyhow!("--function: {e}"))?;
    config.function_spec = Some(args.function.clone());
    config.mesh = Some(args.mesh.clone());
    let j = config.interval.unwrap_or_else(|| f.domain());
    let a = operand(args.matrix.as_deref(), &j, &mut config)?;
    let rows = demo_approximation(&f, &a, &args.mesh, &j)?;
    let decreasing = rows.windows(2).all(|w| {
        w[1].mesh >= w[0].mesh
            || (w[1].upper_value_error <= w[0].upper_value_error + MONOTONE_SLACK
                && w[1].lower_value_error <= w[0].lower_value_error + MONOTONE_SLACK)
    });
    #[derive(Serialize)]
    struct Table {
        rows: Vec<jensen_lab_core::verify::ApproximationRow>,
        /// Value errors never grow (beyond rounding) as the mesh shrinks.
        monotone: bool,
    }
    outcome(
        &config,
        Table {
            rows,
            monotone: decreasing,
        },
        true,
    )
}
