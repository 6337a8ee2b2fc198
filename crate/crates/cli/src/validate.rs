//! Built-in oracle suite.

use serde::Serialize;
use serde_json::{json, Value};

use ringbose::numerics::sym_eigvals;
use ringbose::{exact, sf, si, ModelParams};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, detail }
}

fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
    check(name, false, json!({ "error": err.to_string() }))
}

fn params(m: usize, n: usize, t: f64, u: f64, v0: f64) -> ModelParams {
    ModelParams::new(m, n, t, u, v0).expect("suite points are valid")
}

fn si_points() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for m in 2..=9 {
        out.push(params(m, m, 0.3, 0.4, 0.2));
        out.push(params(m, m + 1, 1.5, 0.05, 1.0));
    }
    out.push(params(7, 8, 0.5, 1.0, 0.1));
    out
}

fn sf_points() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for m in 2..=9 {
        out.push(params(m, m, 1.0, 0.05, 0.2));
    }
    out.push(params(7, 8, 1.0, 0.2, 0.2));
    out.push(params(7, 8, 1.6, 0.1, 1.0));
    out
}

fn label(p: &ModelParams) -> String {
    format!("M={} N={} T={} U={} V0={}", p.sites(), p.bosons(), p.hopping(), p.attraction(), p.well())
}

fn union_spectrum(p: &ModelParams) -> Check {
    let name = format!("si union spectrum {}", label(p));
    let spec = match si::si_sp_energies(p) {
        Ok(s) => s,
        Err(e) => return failed(name, e),
    };
    let want = match sym_eigvals(si::one_body_matrix(p).as_ref()) {
        Ok(v) => v,
        Err(e) => return failed(name, e),
    };
    let got = spec.single_particle_energies();
    let tol = 1e-9 * (2.0 * p.hopping()).max(p.effective_well());
    let dev = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let pass = got.len() == want.len() && dev <= tol;
    check(name, pass, json!({ "max_deviation": dev, "tolerance": tol }))
}

fn solution_count(m: usize) -> Check {
    let p = params(m, m, 0.7, 0.3, 0.4);
    let name = format!("si solution count M={m}");
    match si::si_sp_energies(&p) {
        Ok(spec) => {
            let want = if m % 2 == 0 { m / 2 + 1 } else { m.div_ceil(2) };
            let got = spec.lambda.len();
            check(name, got == want && si::solution_count(m) == want, json!({ "roots": got, "expected": want }))
        }
        Err(e) => failed(name, e),
    }
}

fn si_normalization(p: &ModelParams) -> Check {
    let name = format!("si ground normalization {}", label(p));
    match si::si_ground_distributions(p) {
        Ok(g) => {
            let n = p.bosons() as f64;
            let m = p.sites();
            let x2: f64 = g.x.iter().map(|x| x * x).sum();
            let sum_n: f64 = g.n.iter().sum();
            let asym = (1..m).map(|j| (g.n[j] - g.n[m - j]).abs()).fold(0.0, f64::max);
            let pass = (x2 - 1.0).abs() <= 1e-10 && (sum_n - n).abs() <= 1e-10 * n && asym <= 1e-10 * n;
            check(name, pass, json!({ "sum_x2": x2, "sum_n": sum_n, "max_asymmetry": asym }))
        }
        Err(e) => failed(name, e),
    }
}

fn bdg(p: &ModelParams, nu_factor: f64) -> Check {
    let name = format!("sf bdg oracle {}", label(p));
    match sf::bdg_oracle_check_scaled(p, nu_factor) {
        Ok(rep) => {
            let mut detail = json!({ "max_deviation": rep.max_deviation, "tolerance": rep.tolerance });
            if !rep.pass {
                detail["diff"] = json!(rep
                    .diff()
                    .iter()
                    .map(|(a, o, d)| json!({ "analytic": a, "oracle": o, "diff": d }))
                    .collect::<Vec<_>>());
            }
            check(name, rep.pass, detail)
        }
        Err(e) => failed(name, e),
    }
}

fn sf_normalization(p: &ModelParams) -> Check {
    let name = format!("sf ground normalization {}", label(p));
    match sf::sf_ground_distributions(p) {
        Ok(d) => {
            let n = p.bosons() as f64;
            let m = p.sites();
            let sum_n: f64 = d.n.iter().sum();
            let sum_m: f64 = d.m.iter().sum();
            let asym = (1..m)
                .map(|j| (d.n[j] - d.n[m - j]).abs().max((d.m[j] - d.m[m - j]).abs()))
                .fold(0.0, f64::max);
            let pass = (sum_n - n).abs() <= 1e-10 * n && (sum_m - n).abs() <= 1e-10 * n && asym <= 1e-10 * n;
            check(name, pass, json!({ "sum_n": sum_n, "sum_m": sum_m, "max_asymmetry": asym }))
        }
        Err(e) => failed(name, e),
    }
}

fn exact_single_particle(m: usize) -> Check {
    let p = params(m, 1, 0.8, 0.0, 0.0);
    let name = format!("exact single boson M={m}");
    match exact::exact_levels(&p, 1) {
        Ok(e) => {
            let dev = (e[0] + 1.6).abs();
            check(name, dev <= 1e-12, json!({ "ground": e[0], "expected": -1.6 }))
        }
        Err(e) => failed(name, e),
    }
}

pub fn run_suite(nu_factor: f64) -> Report {
    let mut checks = Vec::new();
    for p in si_points() {
        checks.push(union_spectrum(&p));
        checks.push(si_normalization(&p));
    }
    checks.extend((2..=12).map(solution_count));
    for p in sf_points() {
        checks.push(bdg(&p, nu_factor));
        checks.push(sf_normalization(&p));
    }
    checks.extend([2, 3, 6].map(exact_single_particle));
    let pass = checks.iter().all(|c| c.pass);
    Report { version: env!("CARGO_PKG_VERSION"), pass, checks }
}
