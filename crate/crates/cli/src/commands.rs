use std::f64::consts::FRAC_PI_2;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chandist::channels::{displacement_z, Channel};
use chandist::discrimination::{
    convergence_error_trace, diamond_distance_f, distance_for_input, error_probabilities, fit_power_law, pauli_diamond,
    pauli_trace, trace_distance_channels,
};
use chandist::kitaev::{build_sigma, decompose_sigma, max_output_fidelity, InputSampling};
use chandist::search::{checkpoints, SearchConfig, SearchResult};
use chandist::states::maximally_entangled;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{g12, parse_value};
use crate::spec::{Bindings, ChannelSpec};
use crate::{Algorithm, BellArgs, CliError, ConvergeArgs, DistArgs, Sampling, SearchArgs, SweepArgs};

const DIST_TRIALS: u64 = 100_000;
const SWEEP_TRIALS: u64 = 20_000;

fn algorithm_name(alg: Algorithm) -> &'static str {
    match alg {
        Algorithm::F => "f",
        Algorithm::K => "k",
        Algorithm::Trace => "trace",
        Algorithm::PauliAnalytic => "pauli-analytic",
    }
}

fn sampling(s: Sampling) -> InputSampling {
    match s {
        Sampling::Mixed => InputSampling::Mixed,
        Sampling::Pure => InputSampling::Pure,
    }
}

fn search_config(s: &SearchArgs, default_trials: u64) -> Result<SearchConfig, CliError> {
    let trials = s.trials.unwrap_or(default_trials);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(SearchConfig::new(trials, s.seed).with_refinement(s.refine))
}

fn echo_search(w: &mut dyn Write, alg: Algorithm, s: &SearchArgs, cfg: &SearchConfig) -> std::io::Result<()> {
    writeln!(w, "# algorithm = {}", algorithm_name(alg))?;
    writeln!(w, "# trials = {}", cfg.trials)?;
    writeln!(w, "# seed = {}", cfg.seed)?;
    writeln!(w, "# real_only = {}", s.real_only)?;
    writeln!(w, "# refine = {}", s.refine)?;
    writeln!(w, "# sampling = {}", if s.sampling == Sampling::Mixed { "mixed" } else { "pure" })
}

/// Sampled or closed-form distances for one channel pair.
struct Distances {
    trace: f64,
    diamond: Option<f64>,
    trace_search: Option<SearchResult>,
    diamond_search: Option<SearchResult>,
}

fn distances(
    e1: &Channel,
    e2: &Channel,
    alg: Algorithm,
    s: &SearchArgs,
    cfg: &SearchConfig,
) -> Result<Distances, CliError> {
    if alg == Algorithm::PauliAnalytic {
        let (Some(q1), Some(q2)) = (e1.pauli_weights(), e2.pauli_weights()) else {
            return Err(CliError::Usage("pauli-analytic needs two Pauli channels".into()));
        };
        return Ok(Distances {
            trace: pauli_trace(q1, q2),
            diamond: Some(pauli_diamond(q1, q2)),
            trace_search: None,
            diamond_search: None,
        });
    }
    let trace_search = trace_distance_channels(e1, e2, cfg)?;
    let diamond_search = match alg {
        Algorithm::F => Some(diamond_distance_f(e1, e2, cfg, s.real_only)?),
        Algorithm::K => {
            let decomp = decompose_sigma(&build_sigma(e1.kraus(), e2.kraus())?)?;
            Some(max_output_fidelity(&decomp, cfg, sampling(s.sampling))?)
        }
        _ => None,
    };
    Ok(Distances {
        trace: trace_search.value(),
        diamond: diamond_search.as_ref().map(SearchResult::value),
        trace_search: Some(trace_search),
        diamond_search,
    })
}

/// `(p'_E, p_E)`, with the ancilla case evaluated at `max(trace, diamond)`.
fn probabilities(trace: f64, diamond: f64) -> Result<(f64, f64), CliError> {
    let p = error_probabilities(trace.clamp(0.0, 2.0), diamond.max(trace).clamp(0.0, 2.0))?;
    Ok((p.p_e_prime, p.p_e))
}

pub fn dist(a: &DistArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (s1, s2) = (ChannelSpec::load(&a.spec1)?, ChannelSpec::load(&a.spec2)?);
    let vars = Bindings::new();
    let (e1, e2) = (s1.build(&vars)?, s2.build(&vars)?);
    let cfg = search_config(&a.search, DIST_TRIALS)?;
    let d = distances(&e1, &e2, a.alg, &a.search, &cfg)?;

    writeln!(out, "# command = dist")?;
    writeln!(out, "# spec1 = {}", s1.to_json())?;
    writeln!(out, "# spec2 = {}", s2.to_json())?;
    echo_search(out, a.alg, &a.search, &cfg)?;
    writeln!(out, "quantity,value")?;
    writeln!(out, "trace_distance,{}", g12(d.trace))?;
    match d.diamond {
        Some(diamond) => {
            let (p_prime, p) = probabilities(d.trace, diamond)?;
            writeln!(out, "diamond_distance,{}", g12(diamond))?;
            writeln!(out, "difference,{}", g12(diamond - d.trace))?;
            writeln!(out, "p_e_prime,{}", g12(p_prime))?;
            writeln!(out, "p_e,{}", g12(p))?;
        }
        None => writeln!(out, "p_e_prime,{}", g12(0.5 - d.trace.clamp(0.0, 2.0) / 4.0))?,
    }
    for (prefix, r) in [("trace", &d.trace_search), ("diamond", &d.diamond_search)] {
        if let Some(r) = r {
            writeln!(out, "{prefix}_best_trial,{}", r.best_trial)?;
            let params = r.refinement.as_ref().filter(|f| f.value > r.best_value).map_or(&r.best_params, |f| &f.params);
            for (name, v) in r.param_names.iter().zip(params) {
                writeln!(out, "{prefix}_argmax_{name},{}", g12(*v))?;
            }
        }
    }
    Ok(())
}

struct Grid {
    name: String,
    values: Vec<f64>,
}

fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [name, start, stop, steps] = parts[..] else {
        return Err(CliError::Usage(format!("grid `{text}`: expected name:start:stop:steps")));
    };
    if name.is_empty() {
        return Err(CliError::Usage(format!("grid `{text}`: empty variable name")));
    }
    let (start, stop) = (parse_value(start)?, parse_value(stop)?);
    let steps: usize = steps
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("grid `{text}`: steps must be a positive integer")))?;
    let values = (0..steps)
        .map(|i| match i {
            0 => start,
            i if i == steps - 1 => stop,
            i => start + (stop - start) * i as f64 / (steps - 1) as f64,
        })
        .collect();
    Ok(Grid { name: name.to_string(), values })
}

fn open_output<'a>(path: &Option<std::path::PathBuf>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).map_err(|e| io_context(p, e))?))),
        None => Ok(Box::new(out)),
    }
}

fn io_context(p: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", p.display()))
}

pub fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.alg == Algorithm::Trace {
        return Err(CliError::Usage("sweep reports diamond distances; use --alg f, k or pauli-analytic".into()));
    }
    let (s1, s2) = (ChannelSpec::load(&a.spec1)?, ChannelSpec::load(&a.spec2)?);
    let grids = a.grids.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>, _>>()?;
    let used: Vec<&str> = s1.variables().into_iter().chain(s2.variables()).collect();
    for (k, g) in grids.iter().enumerate() {
        if grids[..k].iter().any(|h| h.name == g.name) {
            return Err(CliError::Usage(format!("grid variable `{}` given twice", g.name)));
        }
        if !used.contains(&g.name.as_str()) {
            return Err(CliError::Usage(format!("grid variable `{}` does not appear in either spec", g.name)));
        }
    }
    let cfg = search_config(&a.search, SWEEP_TRIALS)?;

    let mut w = open_output(&a.out, out)?;
    writeln!(w, "# command = sweep")?;
    writeln!(w, "# spec1 = {}", s1.to_json())?;
    writeln!(w, "# spec2 = {}", s2.to_json())?;
    for (g, text) in grids.iter().zip(&a.grids) {
        writeln!(w, "# grid = {text} ({} points)", g.values.len())?;
    }
    echo_search(&mut *w, a.alg, &a.search, &cfg)?;
    let names: Vec<&str> = grids.iter().map(|g| g.name.as_str()).collect();
    writeln!(w, "{},trace_distance,diamond_distance,difference", names.join(","))?;

    let total: usize = grids.iter().map(|g| g.values.len()).product();
    for flat in 0..total {
        // First grid varies slowest.
        let mut rem = flat;
        let mut point = vec![0.0; grids.len()];
        for (k, g) in grids.iter().enumerate().rev() {
            point[k] = g.values[rem % g.values.len()];
            rem /= g.values.len();
        }
        let vars: Bindings = names.iter().map(|n| n.to_string()).zip(point.iter().copied()).collect();
        let (e1, e2) = (s1.build(&vars)?, s2.build(&vars)?);
        let d = distances(&e1, &e2, a.alg, &a.search, &cfg)?;
        let diamond = d.diamond.expect("sweep algorithms report a diamond distance");
        let cells: Vec<String> = point.iter().map(|v| g12(*v)).collect();
        writeln!(w, "{},{},{},{}", cells.join(","), g12(d.trace), g12(diamond), g12(diamond - d.trace))?;
    }
    w.flush()?;
    Ok(())
}

/// `(n_r, running_max, delta)` rows of one seed.
type ConvergenceRows = Vec<(u64, f64, f64)>;

/// Rows of a planted `delta = n_r^exponent` with 1% noise.
fn planted_trace(exponent: f64, trials: u64, seed: u64) -> ConvergenceRows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = f64::INFINITY;
    checkpoints(trials, 20)
        .into_iter()
        .map(|n| {
            let noise = 1.0 + 0.01 * rng.random_range(-1.0..=1.0);
            last = last.min((n as f64).powf(exponent) * noise);
            (n, 1.0 - last, last)
        })
        .collect()
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 { xs[n / 2] } else { (xs[n / 2 - 1] + xs[n / 2]) / 2.0 })
}

pub fn converge(a: &ConvergeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    if !matches!(a.alg, Algorithm::F | Algorithm::K) {
        return Err(CliError::Usage("converge runs a search; use --alg f or k".into()));
    }
    let cfg = search_config(&a.search, DIST_TRIALS)?;
    let seeds: Vec<u64> = (0..a.seeds).map(|k| a.search.seed + k).collect();

    let mut header = vec!["# command = converge".to_string()];
    let mut runs: Vec<(u64, ConvergenceRows)> = Vec::new();
    let reference = if let Some(exponent) = a.self_test {
        header.push(format!("# self_test_exponent = {exponent}"));
        header.push("# reference = 1".into());
        for &seed in &seeds {
            runs.push((seed, planted_trace(exponent, cfg.trials, seed)));
        }
        1.0
    } else {
        let (s1, s2) = (
            ChannelSpec::load(a.spec1.as_deref().expect("required by clap"))?,
            ChannelSpec::load(a.spec2.as_deref().expect("required by clap"))?,
        );
        let vars = Bindings::new();
        let (e1, e2) = (s1.build(&vars)?, s2.build(&vars)?);
        let reference = match (&a.reference, a.auto) {
            (Some(r), _) => parse_value(r)?,
            (None, true) => match (e1.pauli_weights(), e2.pauli_weights()) {
                (Some(q1), Some(q2)) => pauli_diamond(q1, q2),
                _ => return Err(CliError::Usage("--auto needs two Pauli channels; pass --reference".into())),
            },
            (None, false) => return Err(CliError::Usage("pass --reference R or --auto".into())),
        };
        header.push(format!("# spec1 = {}", s1.to_json()));
        header.push(format!("# spec2 = {}", s2.to_json()));
        header.push(format!("# reference = {}", g12(reference)));
        let decomp = match a.alg {
            Algorithm::K => Some(decompose_sigma(&build_sigma(e1.kraus(), e2.kraus())?)?),
            _ => None,
        };
        for &seed in &seeds {
            let run_cfg = SearchConfig { seed, refine: false, ..cfg };
            let result = match &decomp {
                Some(d) => max_output_fidelity(d, &run_cfg, sampling(a.search.sampling))?,
                None => diamond_distance_f(&e1, &e2, &run_cfg, a.search.real_only)?,
            };
            let deltas = convergence_error_trace(&result, reference)?;
            let rows = result.trace.iter().zip(deltas).map(|(t, (n, d))| (n, t.running_max, d)).collect();
            runs.push((seed, rows));
        }
        reference
    };

    let mut w = open_output(&a.out, out)?;
    for line in &header {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "# seeds = {}..={}", seeds[0], seeds[seeds.len() - 1])?;
    echo_search(&mut *w, a.alg, &a.search, &cfg)?;
    writeln!(w, "seed,n_r,running_max,delta")?;
    let mut exponents = Vec::new();
    let mut footer = Vec::new();
    for (seed, rows) in &runs {
        for (n, best, delta) in rows {
            writeln!(w, "{seed},{n},{},{}", g12(*best), g12(*delta))?;
        }
        let points: Vec<(u64, f64)> = rows.iter().map(|&(n, _, d)| (n, d)).collect();
        match fit_power_law(&points) {
            Ok(k) => {
                exponents.push(k);
                footer.push(format!("# exponent seed={seed} = {}", g12(k)));
            }
            Err(e) => footer.push(format!("# exponent seed={seed} = nan ({e})")),
        }
    }
    for line in &footer {
        writeln!(w, "{line}")?;
    }
    let fitted = exponents.len();
    match median(exponents) {
        Some(m) => writeln!(w, "# median_exponent = {} ({fitted} of {} seeds fitted)", g12(m), runs.len())?,
        None => {
            writeln!(w, "# median_exponent = nan (no seed had enough positive errors; reference {})", g12(reference))?
        }
    }
    w.flush()?;
    Ok(())
}

/// Closed-form trace norm of the output difference for a Bell input, +z displacement vs identity.
pub fn bell_input_analytic(theta_z: f64) -> f64 {
    let (s, c) = theta_z.sin_cos();
    let s2 = s * s;
    let root = (s2 * s2 + 4.0 * (1.0 - c).powi(2)).sqrt();
    s2 / 2.0 + (s2 + root).abs() / 4.0 + (s2 - root).abs() / 4.0
}

pub fn bell_compare(a: &BellArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let bell = maximally_entangled();
    let identity = Channel::identity();
    let mut w = open_output(&a.out, out)?;
    writeln!(w, "# command = bell-compare")?;
    writeln!(w, "# channels = displacement_z(theta_z) vs identity")?;
    writeln!(w, "# steps = {}", a.steps)?;
    writeln!(w, "theta_z,trace_norm_analytic,bell_input_distance,bell_input_numeric")?;
    for i in 0..a.steps {
        let theta = if i == a.steps - 1 { FRAC_PI_2 } else { FRAC_PI_2 * i as f64 / (a.steps - 1) as f64 };
        let numeric = distance_for_input(&displacement_z(theta)?, &identity, &bell)?;
        writeln!(
            w,
            "{},{},{},{}",
            g12(theta),
            g12(2.0 * theta.sin().powi(2)),
            g12(bell_input_analytic(theta)),
            g12(numeric)
        )?;
    }
    w.flush()?;
    Ok(())
}
