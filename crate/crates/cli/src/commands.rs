use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::json;

use spinmagic::coherent::sre_exact_coherent;
use spinmagic::io::{from_json, LoadedState, StateFile};
use spinmagic::metrics::{bell_correlator, bell_from_sextet, squeezing_parameter, sre_approx, sre_exact_symmetric, sre_oracle_statevector, ORACLE_MAX_QUBITS};
use spinmagic::protocols::{
    dicke_state, evolve_oat, evolve_tact, find_best_squeezing, generalized_ghz, initial_state, kitten_state, kitten_superposition, time_for_xi2,
    Protocol, SqueezingCurve,
};
use spinmagic::readout::{estimate_sextet_with, CalibrationMode};
use spinmagic::state::{coherent_state, husimi, overlap_sextet, Axis, Cardinal};
use spinmagic::{Error, State, Superposition};

use crate::args::*;
use crate::error::CliError;
use crate::output::{write_out, Cell, Table};

/// Exact symmetric SRE is O(N⁴); refuse beyond this.
pub const SYMMETRIC_EXACT_LIMIT: usize = 256;
/// Exact coherent SRE is O(N³K²) for K components; refuse beyond this.
pub const COHERENT_EXACT_LIMIT: usize = 200;

type R<T> = Result<T, CliError>;

fn exact_wanted(n: usize, below: usize, limit: usize, what: &str) -> R<bool> {
    if n > below {
        return Ok(false);
    }
    if n > limit {
        return Err(CliError::Usage(format!("exact {what} SRE refused for N = {n} (limit {limit}); lower --exact-below")));
    }
    Ok(true)
}

fn pool(common: &Common) -> R<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    match common.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => b = b.num_threads(t),
        None => {}
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn par_rows<I: Sync, F>(common: &Common, items: &[I], f: F) -> R<Vec<Vec<Cell>>>
where
    F: Fn(&I) -> R<Vec<Cell>> + Sync + Send,
{
    pool(common)?.install(|| items.par_iter().map(f).collect())
}

fn even_list(s: Option<&String>) -> R<Vec<usize>> {
    let v = parse_list(require(s, "n-list")?)?;
    if let Some(n) = v.iter().find(|n| **n == 0 || *n % 2 == 1) {
        return Err(CliError::Usage(format!("qubit counts must be even and positive, got {n}")));
    }
    Ok(v)
}

fn xi2_cell(s: &State) -> R<Cell> {
    match squeezing_parameter(s) {
        Ok(x) => Ok(Cell::Num(x)),
        Err(Error::VanishingMeanSpin) => Ok(Cell::Empty),
        Err(e) => Err(e.into()),
    }
}

pub fn oat_sweep(a: OatSweepArgs) -> R<()> {
    let n = require(a.n, "n")?;
    if a.steps == 0 {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    if !(a.t_max.is_finite() && a.t_max > 0.0) {
        return Err(CliError::Usage("--t-max must be positive".into()));
    }
    let exact = exact_wanted(n, a.exact_below.unwrap_or(0), SYMMETRIC_EXACT_LIMIT, "symmetric")?;
    let start = initial_state::<f64>(n)?;
    let times: Vec<f64> = (0..=a.steps).map(|i| a.t_max * i as f64 / a.steps as f64).collect();
    let mut t = Table::new("oat-sweep", &["chi_t", "m2_approx", "m2_exact", "xi2", "log2_E", "Q"]);
    t.rows = par_rows(&a.common, &times, |&chi_t| {
        let s = evolve_oat(&start, chi_t);
        let sx = overlap_sextet(&s);
        let bell = bell_from_sextet(&sx, n);
        let m2e = if exact { Cell::from(sre_exact_symmetric(&s, a.q)?) } else { Cell::Empty };
        Ok(vec![chi_t.into(), sre_approx(&sx, a.q, n)?.into(), m2e, xi2_cell(&s)?, bell.log2_e.into(), bell.q.into()])
    })?;
    t.emit(&a.common)
}

pub fn scaling(a: ScalingArgs) -> R<()> {
    let protocol: Protocol = a.protocol.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let ns = even_list(a.n_list.as_ref())?;
    match (a.best, a.fixed_xi2) {
        (true, None) | (false, Some(_)) => {}
        _ => return Err(CliError::Usage("give exactly one of --best or --fixed-xi2".into())),
    }
    for &n in &ns {
        exact_wanted(n, a.exact_below, SYMMETRIC_EXACT_LIMIT, "symmetric")?;
    }
    let mut t = Table::new("scaling", &["n", "t_used", "xi2", "m2_approx", "m2_exact"]);
    t.rows = par_rows(&a.common, &ns, |&n| {
        let t_used = match a.fixed_xi2 {
            Some(v) => time_for_xi2::<f64>(n, protocol, v)?,
            None => find_best_squeezing::<f64>(n, protocol)?.t_best,
        };
        let curve = SqueezingCurve::<f64>::new(n, protocol)?;
        let s = curve.state(t_used)?;
        let m2e = if n <= a.exact_below { Cell::from(sre_exact_symmetric(&s, a.q)?) } else { Cell::Empty };
        Ok(vec![n.into(), t_used.into(), xi2_cell(&s)?, sre_approx(&overlap_sextet(&s), a.q, n)?.into(), m2e])
    })?;
    t.emit(&a.common)
}

pub fn kitten(a: KittenArgs) -> R<()> {
    let ns = even_list(a.n_list.as_ref())?;
    let heads = parse_list(&a.heads)?;
    let mut items = Vec::new();
    for &n in &ns {
        exact_wanted(n, a.exact_below, COHERENT_EXACT_LIMIT, "coherent")?;
        items.extend(heads.iter().map(|&h| (n, h)));
    }
    let mut t = Table::new("kitten", &["n", "heads", "chi_t", "m2_approx", "m2_exact", "log2_E", "Q", "E_times_heads2"]);
    t.rows = par_rows(&a.common, &items, |&(n, h)| {
        let s = kitten_state::<f64>(n, h)?;
        let sx = overlap_sextet(&s);
        let bell = bell_from_sextet(&sx, n);
        let m2e = if n <= a.exact_below { Cell::from(sre_exact_coherent(&kitten_superposition(n, h)?, a.q)?) } else { Cell::Empty };
        let chi_t = PI / h as f64;
        Ok(vec![n.into(), h.into(), chi_t.into(), sre_approx(&sx, a.q, n)?.into(), m2e, bell.log2_e.into(), bell.q.into(), (bell.e() * (h * h) as f64).into()])
    })?;
    t.emit(&a.common)
}

pub fn dicke(a: DickeArgs) -> R<()> {
    let ns = even_list(a.n_list.as_ref())?;
    for &n in &ns {
        exact_wanted(n, a.exact_below, SYMMETRIC_EXACT_LIMIT, "symmetric")?;
    }
    let mut t = Table::new("dicke", &["n", "m2_exact", "m2_closed_form", "m2_approx", "log2_E", "Q"]);
    t.rows = par_rows(&a.common, &ns, |&n| {
        let s = dicke_state::<f64>(n, 0)?;
        let sx = overlap_sextet(&s);
        let bell = bell_from_sextet(&sx, n);
        let m2e = if n <= a.exact_below { Cell::from(sre_exact_symmetric(&s, a.q)?) } else { Cell::Empty };
        // the closed form is the q = 2 Stirling approximation
        let closed = if a.q == 2.0 { Cell::Num(2.0 * (PI * n as f64 / 8.0).log2() - 1.0) } else { Cell::Empty };
        Ok(vec![n.into(), m2e, closed, sre_approx(&sx, a.q, n)?.into(), bell.log2_e.into(), bell.q.into()])
    })?;
    t.emit(&a.common)
}

pub fn gghz(a: GghzArgs) -> R<()> {
    let n = require(a.n, "n")?;
    if a.eps_grid < 2 {
        return Err(CliError::Usage("--eps-grid needs at least 2 points".into()));
    }
    if n <= 2 {
        return Err(CliError::Usage("--n must be at least 4".into()));
    }
    let exact = exact_wanted(n, a.exact_below, COHERENT_EXACT_LIMIT, "coherent")?;
    let grid: Vec<f64> = (0..a.eps_grid).map(|i| PI * i as f64 / (a.eps_grid - 1) as f64).collect();
    let mut t = Table::new("gghz", &["two_eps", "m2_approx", "m2_exact", "log2_E", "Q", "Q_over_n_minus_2"]);
    t.rows = par_rows(&a.common, &grid, |&te| {
        let sup = generalized_ghz::<f64>(n, te)?;
        let s = sup.to_state()?;
        let bell = bell_correlator(&s, Axis::Z)?;
        let m2e = if exact { Cell::from(sre_exact_coherent(&sup, a.q)?) } else { Cell::Empty };
        Ok(vec![te.into(), sre_approx(&overlap_sextet(&s), a.q, n)?.into(), m2e, bell.log2_e.into(), bell.q.into(), (bell.q / (n as f64 - 2.0)).into()])
    })?;
    t.emit(&a.common)
}

pub fn readout(a: ReadoutArgs) -> R<()> {
    let n = require(a.n, "n")?;
    let mode: CalibrationMode = a.mode.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let est = estimate_sextet_with::<f64>(n, a.chi_t, a.theta, a.shots, a.seed, mode)?;
    let direct = overlap_sextet(&evolve_oat(&initial_state(n)?, a.chi_t));
    let mut t = Table::new(
        "readout",
        &["target", "estimate_re", "estimate_im", "overlap_re", "overlap_im", "abs_error", "sigma_re", "sigma_im", "gain_a", "gain_b"],
    );
    for (i, c) in Cardinal::ALL.iter().enumerate() {
        let e = est.estimates[i];
        let d = direct.get(*c).to_complex();
        t.rows.push(vec![
            Cell::Text(c.label().into()),
            e.re.into(),
            e.im.into(),
            d.re.into(),
            d.im.into(),
            (e - d).norm().into(),
            est.sigmas[i].re.into(),
            est.sigmas[i].im.into(),
            est.gains[i].a.into(),
            est.gains[i].b.into(),
        ]);
    }
    t.meta.insert("mode".into(), json!(a.mode));
    t.meta.insert("shots".into(), json!(a.shots));
    t.meta.insert("seed".into(), json!(a.seed));
    t.emit(&a.common)
}

fn load(path: Option<&std::path::PathBuf>) -> R<LoadedState<f64>> {
    let p = require(path, "state")?;
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
    Ok(from_json(&text)?)
}

pub fn husimi_cmd(a: HusimiArgs) -> R<()> {
    let (p, q) = parse_grid(&a.grid)?;
    if p < 2 || q < 2 {
        return Err(CliError::Usage("grid sizes must be at least 2".into()));
    }
    let s = load(a.state.as_ref())?.to_state()?;
    let h = husimi(&s, p, q)?;
    let mut t = Table::new("husimi", &["theta", "phi", "q_raw", "q"]);
    for i in 0..p {
        for j in 0..q {
            t.rows.push(vec![h.thetas[i].into(), h.phis[j].into(), h.raw(i, j).into(), h.value(i, j).into()]);
        }
    }
    let maxima: Vec<_> = h.local_maxima(a.threshold).into_iter().map(|(i, j)| json!([h.thetas[i], h.phis[j], h.value(i, j)])).collect();
    t.meta.insert("n_maxima".into(), json!(maxima.len()));
    t.meta.insert("maxima".into(), json!(maxima));
    t.emit(&a.common)
}

pub fn sre(a: SreArgs) -> R<()> {
    let loaded = load(a.state.as_ref())?;
    let n = loaded.n_qubits();
    let m = match a.method.as_str() {
        "oracle" => {
            if n > ORACLE_MAX_QUBITS {
                return Err(CliError::Usage(format!("oracle refused for N = {n} (limit {ORACLE_MAX_QUBITS})")));
            }
            sre_oracle_statevector(&loaded.to_state()?, a.q)?
        }
        "symmetric" => {
            exact_wanted(n, n, SYMMETRIC_EXACT_LIMIT, "symmetric")?;
            sre_exact_symmetric(&loaded.to_state()?, a.q)?
        }
        "coherent" => {
            exact_wanted(n, n, COHERENT_EXACT_LIMIT, "coherent")?;
            let sup: Superposition = match loaded {
                LoadedState::Coherent(c) => c,
                LoadedState::Amplitudes(_) => return Err(CliError::Usage("the coherent method needs a file with coherent_components".into())),
            };
            sre_exact_coherent(&sup, a.q)?
        }
        "approx" => sre_approx(&overlap_sextet(&loaded.to_state()?), a.q, n)?,
        other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
    };
    let mut t = Table::new("sre", &["method", "q", "n", "m"]);
    t.rows.push(vec![Cell::Text(a.method.clone()), a.q.into(), n.into(), m.into()]);
    t.emit(&a.common)
}

pub fn state(a: StateArgs) -> R<()> {
    let n = require(a.n, "n")?;
    let kind = require(a.kind.as_deref(), "kind")?;
    let single = |t: f64, p: f64| Superposition::new(n, vec![(spinmagic::LogComplex::one(), t, p)]);
    let file = match kind {
        "coherent" => StateFile::from_superposition(&single(a.theta, a.phi)?),
        "plus-x" => StateFile::from_superposition(&single(PI / 2.0, 0.0)?),
        "oat" => StateFile::from_state(&evolve_oat(&initial_state(n)?, a.chi_t)),
        "tact" => StateFile::from_state(&evolve_tact(&initial_state(n)?, a.chi_t)?),
        "kitten" => StateFile::from_superposition(&kitten_superposition::<f64>(n, a.heads)?),
        "dicke" => StateFile::from_state(&dicke_state::<f64>(n, a.m)?),
        "gghz" => StateFile::from_superposition(&generalized_ghz::<f64>(n, a.two_eps)?),
        "coherent-amplitudes" => StateFile::from_state(&coherent_state::<f64>(n, a.theta, a.phi)?),
        other => return Err(CliError::Usage(format!("unknown state kind {other:?}"))),
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    write_out(&a.common, text.as_bytes())
}
