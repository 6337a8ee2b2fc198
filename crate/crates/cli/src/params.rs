//! Parameter assembly from flags and an optional `key = value` file.

use std::fmt::Write as _;
use std::path::Path;

use ringbose::ModelParams;

use crate::error::CliError;

/// Raw parameter fields before validation. Either `T, U, V0` or
/// `tau, v` (with an optional `UN-scale`, default 1) must be given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamSet {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub v0: Option<f64>,
    pub tau: Option<f64>,
    pub v: Option<f64>,
    pub un_scale: Option<f64>,
    pub max_dim: Option<usize>,
}

impl ParamSet {
    fn has_physical(&self) -> bool {
        self.t.is_some() || self.u.is_some() || self.v0.is_some()
    }

    fn has_dimensionless(&self) -> bool {
        self.tau.is_some() || self.v.is_some() || self.un_scale.is_some()
    }

    /// `self` wins field by field. A flag from one parametrization also
    /// drops the other parametrization from `base`.
    pub fn over(&self, base: &ParamSet) -> ParamSet {
        let mut base = base.clone();
        if self.has_dimensionless() {
            (base.t, base.u, base.v0) = (None, None, None);
        }
        if self.has_physical() {
            (base.tau, base.v, base.un_scale) = (None, None, None);
        }
        ParamSet {
            m: self.m.or(base.m),
            n: self.n.or(base.n),
            t: self.t.or(base.t),
            u: self.u.or(base.u),
            v0: self.v0.or(base.v0),
            tau: self.tau.or(base.tau),
            v: self.v.or(base.v),
            un_scale: self.un_scale.or(base.un_scale),
            max_dim: self.max_dim.or(base.max_dim),
        }
    }

    /// Sets one named field; `name` uses the flag spelling.
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), CliError> {
        let float = || {
            value
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("{name}: cannot parse {value:?} as a number")))
        };
        let int = || {
            value
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("{name}: cannot parse {value:?} as an integer")))
        };
        match name {
            "M" => self.m = Some(int()?),
            "N" => self.n = Some(int()?),
            "T" => self.t = Some(float()?),
            "U" => self.u = Some(float()?),
            "V0" => self.v0 = Some(float()?),
            "tau" => self.tau = Some(float()?),
            "v" => self.v = Some(float()?),
            "UN-scale" => self.un_scale = Some(float()?),
            "max-dim" => self.max_dim = Some(int()?),
            _ => return Err(CliError::usage(format!("unknown parameter {name:?}"))),
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<ModelParams, CliError> {
        let m = self.m.ok_or_else(|| CliError::usage("--M is required"))?;
        let n = self.n.ok_or_else(|| CliError::usage("--N is required"))?;
        let made = if self.has_dimensionless() {
            if self.has_physical() {
                return Err(CliError::usage("give either --T --U --V0 or --tau --v [--UN-scale], not both"));
            }
            let tau = self.tau.ok_or_else(|| CliError::usage("--tau is required with --v"))?;
            let v = self.v.ok_or_else(|| CliError::usage("--v is required with --tau"))?;
            ModelParams::from_dimensionless(m, n, tau, v, self.un_scale.unwrap_or(1.0))
        } else {
            let t = self.t.ok_or_else(|| CliError::usage("--T is required (or use --tau --v)"))?;
            let u = self.u.ok_or_else(|| CliError::usage("--U is required (or use --tau --v)"))?;
            let v0 = self.v0.ok_or_else(|| CliError::usage("--V0 is required (or use --tau --v)"))?;
            ModelParams::new(m, n, t, u, v0)
        };
        made.map_err(|e| CliError::usage(e.to_string()))
    }

    /// The given fields in a fixed order, for output headers.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                if !out.is_empty() {
                    out.push(' ');
                }
                let _ = write!(out, "{k}={v}");
            }
        };
        put("M", self.m.map(|x| x.to_string()));
        put("N", self.n.map(|x| x.to_string()));
        put("T", self.t.map(fmt_float));
        put("U", self.u.map(fmt_float));
        put("V0", self.v0.map(fmt_float));
        put("tau", self.tau.map(fmt_float));
        put("v", self.v.map(fmt_float));
        put("UN-scale", self.un_scale.map(fmt_float));
        out
    }
}

/// Full-precision rendering of a model point.
pub fn describe_model(p: &ModelParams) -> String {
    format!(
        "M={} N={} T={} U={} V0={}",
        p.sites(),
        p.bosons(),
        fmt_float(p.hopping()),
        fmt_float(p.attraction()),
        fmt_float(p.well())
    )
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<ParamSet, CliError> {
    let mut set = ParamSet::default();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", no + 1)))?;
        set.set(key.trim(), value.trim())
            .map_err(|e| CliError::usage(format!("config line {}: {e}", no + 1)))?;
    }
    Ok(set)
}

pub fn read_config(path: &Path) -> Result<ParamSet, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    parse_config(&text)
}
