//! The six subcommands: input handling, report assembly, and CSV/JSON
//! emission. Every command is deterministic given its full flag set
//! (seed included); output goes to stdout unless `--out` is given.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kuramoto_sync::bounds::{coupling_bounds, phi, psync_lower, psync_upper};
use kuramoto_sync::dynamics::{
    default_dt, default_locking_tol, detect_locking, integrate as integrate_ode, DEFAULT_WINDOW,
};
use kuramoto_sync::index::{index_oracle, kappa_of, tau, unstable_dim, IndexCount};
use kuramoto_sync::lattice::{inscribed_radius, omega_max, omega_min};
use kuramoto_sync::model::{energy, project_mean_zero, velocity_field};
use kuramoto_sync::montecarlo::{sample_direction, transition_curve};
use kuramoto_sync::region::{boundary_distance, is_synchronizable, SyncStatus};
use kuramoto_sync::{Error, FrequencyVector64, PhaseConfig64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::{Failure, ReportFormat, TableFormat};

fn input_error(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn write_out(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json_doc(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization");
    s.push('\n');
    s
}

fn check_gamma(gamma: f64) -> Result<(), Failure> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("γ must be positive and finite, got {gamma}")))
    }
}

/// Loads ω and projects it to mean zero, printing a notice to stderr when
/// the projection actually removed something.
fn load_omega(path: &Path) -> Result<FrequencyVector64, Failure> {
    let raw = crate::input::read_vector(path)?;
    let omega = project_mean_zero(&raw).map_err(input_error)?;
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    let scale = raw.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if mean.abs() > 1e-12 * scale {
        eprintln!("note: removed mean {mean:.6e} from ω (co-rotating frame)");
    }
    Ok(omega)
}

fn counts_json(c: &IndexCount) -> serde_json::Value {
    json!({ "n_plus": c.n_plus, "n_zero": c.n_zero, "n_minus": c.n_minus })
}

pub fn index(theta_file: &Path, format: ReportFormat, out: Option<&Path>) -> Result<(), Failure> {
    let angles = crate::input::read_vector(theta_file)?;
    let theta = PhaseConfig64::new(angles).map_err(input_error)?;
    let n = theta.n();
    let kv = kappa_of(&theta);
    let s = kv.s();
    let r = s.max(0.0).sqrt() / n as f64;
    let min_abs = kv.kappa().iter().fold(f64::INFINITY, |m, &k| m.min(k.abs()));
    let tau_value = tau(&theta).ok().map(|t| t.tau);
    let formula = unstable_dim(&theta);
    let oracle = index_oracle(&theta);
    let agree = formula.as_ref().ok().map(|f| *f == oracle);

    let content = match format {
        ReportFormat::Text => {
            let kappa_list = kv
                .kappa()
                .iter()
                .map(|k| format!("{k:.6}"))
                .collect::<Vec<_>>()
                .join(", ");
            let mut s_out = String::new();
            writeln!(s_out, "N = {n} oscillators").unwrap();
            writeln!(s_out, "κ = [{kappa_list}]  (min |κ| = {min_abs:.6})").unwrap();
            writeln!(s_out, "S = Σκᵢ = {s:.6}  (N²R², R = {r:.6})").unwrap();
            match tau_value {
                Some(t) => writeln!(s_out, "τ = Σ1/κᵢ = {t:.6}").unwrap(),
                None => writeln!(s_out, "τ = Σ1/κᵢ undefined (some κᵢ ≈ 0)").unwrap(),
            }
            match &formula {
                Ok(c) => writeln!(
                    s_out,
                    "counting formula:  n₊ = {}, n₀ = {}, n₋ = {}",
                    c.n_plus, c.n_zero, c.n_minus
                )
                .unwrap(),
                Err(e) => writeln!(s_out, "counting formula:  Marginal ({e})").unwrap(),
            }
            writeln!(
                s_out,
                "eigenvalue oracle: n₊ = {}, n₀ = {}, n₋ = {}",
                oracle.n_plus, oracle.n_zero, oracle.n_minus
            )
            .unwrap();
            match agree {
                Some(true) => writeln!(s_out, "agreement: exact").unwrap(),
                Some(false) => writeln!(s_out, "agreement: MISMATCH").unwrap(),
                None => writeln!(s_out, "agreement: undecided (degenerate formula route)").unwrap(),
            }
            s_out
        }
        ReportFormat::Json => json_doc(&json!({
            "n": n,
            "kappa": kv.kappa(),
            "s": s,
            "tau": tau_value,
            "formula": formula.as_ref().ok().map(counts_json),
            "degenerate": formula.as_ref().err().map(|e| e.to_string()),
            "oracle": counts_json(&oracle),
            "agree": agree,
        })),
    };
    write_out(out, &content)?;
    match formula {
        Ok(_) => Ok(()),
        Err(e) => Err(Failure::Degenerate(e.to_string())),
    }
}

pub fn sync(omega_file: &Path, gamma: f64, out: Option<&Path>) -> Result<(), Failure> {
    check_gamma(gamma)?;
    let omega = load_omega(omega_file)?;
    let decision = is_synchronizable(&omega, gamma).map_err(input_error)?;
    let status = match decision.status {
        SyncStatus::Synchronizable => "synchronizable",
        SyncStatus::Marginal => "marginal",
        SyncStatus::NotSynchronizable => "not_synchronizable",
    };
    let synchronizable = match decision.status {
        SyncStatus::Synchronizable => json!(true),
        SyncStatus::NotSynchronizable => json!(false),
        SyncStatus::Marginal => json!(null),
    };
    let report = json!({
        "n": omega.n(),
        "gamma": gamma,
        "status": status,
        "synchronizable": synchronizable,
        "tau": decision.tau,
        "kappa": decision.kappa.as_ref().map(|kv| kv.kappa().to_vec()),
        "theta": decision.theta.as_ref().map(|t| t.angles().to_vec()),
        "s": decision.kappa.as_ref().map(|kv| kv.s()),
    });
    write_out(out, &json_doc(&report))?;
    if decision.status == SyncStatus::Marginal {
        return Err(Failure::Degenerate(format!(
            "τ = 2 within tolerance at γ = {gamma}: no strict stability decision"
        )));
    }
    Ok(())
}

pub fn boundary_scan(
    n: usize,
    samples: Option<usize>,
    tol: f64,
    seed: u64,
    format: TableFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Input(format!("need N ≥ 2, got {n}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Input(format!("tolerance must be positive and finite, got {tol}")));
    }
    let count = samples.unwrap_or(if n == 3 { 360 } else { 1000 });
    if count == 0 {
        return Err(Failure::Input("need at least one direction".into()));
    }

    // N = 3: evenly spaced polar rays in the mean-zero plane, spanned by
    // the orthonormal pair e₁ ∝ (1,−1,0), e₂ ∝ (1,1,−2). Otherwise:
    // uniform random unit directions.
    let mut alphas = None;
    let dirs: Vec<FrequencyVector64> = if n == 3 {
        let e1 = [1.0 / 2.0f64.sqrt(), -1.0 / 2.0f64.sqrt(), 0.0];
        let e2 = [1.0 / 6.0f64.sqrt(), 1.0 / 6.0f64.sqrt(), -2.0 / 6.0f64.sqrt()];
        let a: Vec<f64> = (0..count).map(|k| 2.0 * PI * k as f64 / count as f64).collect();
        let dirs = a
            .iter()
            .map(|&al| {
                let u: Vec<f64> = (0..3).map(|i| al.cos() * e1[i] + al.sin() * e2[i]).collect();
                FrequencyVector64::new(u).expect("ray in the mean-zero plane")
            })
            .collect();
        alphas = Some(a);
        dirs
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| sample_direction::<f64>(n, &mut rng)).collect()
    };

    let crossings = dirs
        .par_iter()
        .map(|u| boundary_distance(u, tol).map(|b| b.s_star).map_err(input_error))
        .collect::<Result<Vec<f64>, Failure>>()?;

    let content = match format {
        TableFormat::Csv => {
            let mut s = String::new();
            if alphas.is_some() {
                writeln!(
                    s,
                    "# columns: alpha_rad (ray angle in the mean-zero plane, radians), \
                     u1, u2, u3 (unit direction, dimensionless), \
                     s_star (boundary distance along u, frequency units at gamma = 1)"
                )
                .unwrap();
            } else {
                writeln!(
                    s,
                    "# columns: u1..u{n} (unit direction, dimensionless), \
                     s_star (boundary distance along u, frequency units at gamma = 1)"
                )
                .unwrap();
            }
            for (k, (u, &s_star)) in dirs.iter().zip(&crossings).enumerate() {
                if let Some(a) = &alphas {
                    write!(s, "{},", a[k]).unwrap();
                }
                for w in u.omega() {
                    write!(s, "{w},").unwrap();
                }
                writeln!(s, "{s_star}").unwrap();
            }
            s
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = dirs
                .iter()
                .zip(&crossings)
                .enumerate()
                .map(|(k, (u, &s_star))| match &alphas {
                    Some(a) => json!({ "alpha_rad": a[k], "u": u.omega(), "s_star": s_star }),
                    None => json!({ "u": u.omega(), "s_star": s_star }),
                })
                .collect();
            json_doc(&json!({ "n": n, "tol": tol, "seed": seed, "rows": rows }))
        }
    };
    write_out(out, &content)
}

pub fn transition(
    sizes: &[usize],
    grid: &[f64],
    samples: usize,
    seed: u64,
    format: TableFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if samples == 0 {
        return Err(Failure::Input("need at least one sample per grid point".into()));
    }
    for &d in grid {
        if !(d.is_finite() && d > 0.0) {
            return Err(Failure::Input(format!("δ grid entries must be positive and finite, got {d}")));
        }
    }
    let mut all = Vec::new();
    for &n in sizes {
        if n < 2 {
            return Err(Failure::Input(format!("need N ≥ 2, got {n}")));
        }
        let rows = transition_curve::<f64>(n, grid, samples, seed).map_err(input_error)?;
        for row in rows {
            let lower = psync_lower(row.gamma, n);
            let upper = psync_upper(row.gamma, n);
            all.push((n, row, lower, upper));
        }
    }

    let content = match format {
        TableFormat::Csv => {
            let mut s = String::new();
            writeln!(
                s,
                "# columns: n (ensemble size), delta (gamma / phi(n), dimensionless), \
                 gamma (coupling), p_hat (estimated synchronization probability), \
                 std_err (binomial standard error), psync_lower, psync_upper (analytic bounds)"
            )
            .unwrap();
            for (n, row, lower, upper) in &all {
                writeln!(
                    s,
                    "{n},{},{},{},{},{lower},{upper}",
                    row.delta, row.gamma, row.p_hat, row.std_err
                )
                .unwrap();
            }
            s
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = all
                .iter()
                .map(|(n, row, lower, upper)| {
                    json!({
                        "n": n,
                        "delta": row.delta,
                        "gamma": row.gamma,
                        "p_hat": row.p_hat,
                        "std_err": row.std_err,
                        "psync_lower": lower,
                        "psync_upper": upper,
                    })
                })
                .collect();
            json_doc(&json!({ "samples": samples, "seed": seed, "rows": rows }))
        }
    };
    write_out(out, &content)
}

/// Parses `--n` for `extremes`: an inclusive range `2..12` (or `2..=12`)
/// or a comma list `3,4,5`.
fn parse_sizes(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = |t: &str| Failure::Input(format!("cannot parse {t:?} as an ensemble size"));
    let sizes: Vec<usize> = if let Some((a, b)) = spec.trim().split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad(a))?;
        let b = b.trim().trim_start_matches('=');
        let hi: usize = b.trim().parse().map_err(|_| bad(b))?;
        if hi < lo {
            return Err(Failure::Input(format!("empty size range {lo}..{hi}")));
        }
        (lo..=hi).collect()
    } else {
        spec.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad(t)))
            .collect::<Result<_, _>>()?
    };
    match sizes.iter().find(|&&n| n < 2) {
        Some(n) => Err(Failure::Input(format!("need N ≥ 2, got {n}"))),
        None => Ok(sizes),
    }
}

fn norm_sq(v: &FrequencyVector64) -> f64 {
    v.omega().iter().map(|w| w * w).sum()
}

pub fn extremes(spec: &str, format: TableFormat, out: Option<&Path>) -> Result<(), Failure> {
    let sizes = parse_sizes(spec)?;
    let rows: Vec<serde_json::Value> = sizes
        .iter()
        .map(|&n| {
            let b = coupling_bounds::<f64>(n);
            let status = if b.gamma_min_is_conjecture { "conjectured" } else { "exact" };
            json!({
                "n": n,
                "gamma_min": b.gamma_min,
                "gamma_min_status": status,
                "gamma_max_lower": b.gamma_max_lo,
                "gamma_max_upper": b.gamma_max_hi,
                "omega_min_sq": norm_sq(&omega_min::<f64>(n).expect("N ≥ 2")),
                "omega_max_sq": norm_sq(&omega_max::<f64>(n).expect("N ≥ 2")),
                "phi": phi::<f64>(n),
                "inscribed_radius": inscribed_radius::<f64>(n),
            })
        })
        .collect();

    let content = match format {
        TableFormat::Csv => {
            let mut s = String::new();
            writeln!(
                s,
                "# columns: n (ensemble size), gamma_min (smallest critical coupling over unit \
                 directions), gamma_min_status (exact|conjectured), gamma_max_lower, \
                 gamma_max_upper (bounds on the largest critical coupling; the lower value is \
                 the conjectured exact one), omega_min_sq, omega_max_sq (squared vertex norms), \
                 phi (transition scale sqrt(2 ln n)/(n+1)), inscribed_radius (inner-ball radius \
                 n/sqrt(2))"
            )
            .unwrap();
            for row in &rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    row["n"],
                    row["gamma_min"],
                    row["gamma_min_status"].as_str().unwrap(),
                    row["gamma_max_lower"],
                    row["gamma_max_upper"],
                    row["omega_min_sq"],
                    row["omega_max_sq"],
                    row["phi"],
                    row["inscribed_radius"],
                )
                .unwrap();
            }
            s
        }
        TableFormat::Json => json_doc(&json!({ "rows": rows })),
    };
    write_out(out, &content)
}

pub fn integrate(
    omega_file: &Path,
    theta_file: Option<&Path>,
    gamma: f64,
    dt: Option<f64>,
    t_end: f64,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<(), Failure> {
    check_gamma(gamma)?;
    let omega = load_omega(omega_file)?;
    let n = omega.n();
    let theta0 = match theta_file {
        Some(path) => {
            PhaseConfig64::new(crate::input::read_vector(path)?).map_err(input_error)?
        }
        None => PhaseConfig64::new(vec![0.0; n]).map_err(input_error)?,
    };
    if theta0.n() != n {
        return Err(Failure::Input(format!(
            "θ(0) has {} entries but ω has {n}",
            theta0.n()
        )));
    }
    let dt = dt.unwrap_or_else(|| default_dt(gamma, n));
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Failure::Input(format!("dt must be positive and finite, got {dt}")));
    }
    if !(t_end.is_finite() && t_end >= dt) {
        return Err(Failure::Input(format!("t_end must be finite and ≥ dt, got {t_end}")));
    }

    let traj = integrate_ode(&theta0, &omega, gamma, dt, t_end).map_err(|e| match e {
        Error::NonFinite => {
            Failure::Input("trajectory left the finite range (reduce dt or γ)".into())
        }
        other => input_error(other),
    })?;
    let window = DEFAULT_WINDOW.min(t_end / 2.0);
    let locking_tol = default_locking_tol(gamma, n);
    let locked = detect_locking(&traj, window, locking_tol).map_err(input_error)?;
    let speed = velocity_field(traj.final_state(), &omega, gamma)
        .map_err(input_error)?
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let energy_initial = energy(&theta0, &omega, gamma).map_err(input_error)?;
    let energy_final = energy(traj.final_state(), &omega, gamma).map_err(input_error)?;

    if let Some(path) = out {
        let mut csv = String::new();
        writeln!(
            csv,
            "# columns: t (time), theta_1..theta_{n} (phase angles, radians, on the covering space)"
        )
        .unwrap();
        for (t, state) in traj.times.iter().zip(&traj.states) {
            write!(csv, "{t}").unwrap();
            for a in state.angles() {
                write!(csv, ",{a}").unwrap();
            }
            writeln!(csv).unwrap();
        }
        fs::write(path, csv)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }

    let summary = match format {
        ReportFormat::Text => {
            let mut s = String::new();
            writeln!(s, "N = {n}, γ = {gamma}, dt = {dt}, t_end = {t_end}").unwrap();
            writeln!(
                s,
                "locked: {}  (trailing window {window}, frequency-spread tol {locking_tol:.3e})",
                if locked { "yes" } else { "no" }
            )
            .unwrap();
            writeln!(s, "final velocity norm = {speed:.3e}").unwrap();
            writeln!(
                s,
                "energy: {energy_initial:.6} → {energy_final:.6}  (Δ = {:+.6})",
                energy_final - energy_initial
            )
            .unwrap();
            if let Some(path) = out {
                writeln!(s, "trajectory: {} states → {}", traj.times.len(), path.display())
                    .unwrap();
            }
            s
        }
        ReportFormat::Json => json_doc(&json!({
            "n": n,
            "gamma": gamma,
            "dt": dt,
            "t_end": t_end,
            "locked": locked,
            "window": window,
            "locking_tol": locking_tol,
            "final_velocity_norm": speed,
            "energy_initial": energy_initial,
            "energy_final": energy_final,
            "final_theta": traj.final_state().angles(),
            "trajectory_csv": out.map(|p| p.display().to_string()),
        })),
    };
    print!("{summary}");
    Ok(())
}
