//! Grid sweeps. Points run in parallel; rows come out in grid order.

use rayon::prelude::*;
use ringbose::ModelParams;

use crate::args::{Observable, SweepArgs, DEFAULT_MAX_DIM};
use crate::commands::{gather, header};
use crate::error::CliError;
use crate::grid::{GridPoint, SweepGrid};
use crate::methods::{self, Method};
use crate::status::{status_of, OK};
use crate::table::{Cell, Table};

/// One (grid point, method) result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub index: usize,
    pub coords: Vec<f64>,
    pub method: Method,
    pub status: &'static str,
    pub values: Vec<f64>,
    pub rel_error: Option<f64>,
}

fn observe(method: Method, p: &ModelParams, obs: Observable, count: usize, cap: usize) -> ringbose::Result<Vec<f64>> {
    match obs {
        Observable::GsEnergy => Ok(vec![methods::ground_energy(method, p, cap)?]),
        Observable::Levels => Ok(methods::levels(method, p, count, cap)?.into_iter().map(|l| l.energy).collect()),
        Observable::SpEnergies => methods::sp_energies(method, p),
    }
}

fn evaluate(point: &GridPoint, methods: &[Method], obs: Observable, count: usize, cap: usize) -> Vec<SweepRecord> {
    let results: Vec<_> = methods.iter().map(|&m| (m, observe(m, &point.params, obs, count, cap))).collect();
    let reference = results
        .iter()
        .find(|(m, _)| *m == Method::Exact)
        .and_then(|(_, r)| r.as_ref().ok())
        .and_then(|v| v.first().copied());
    results
        .into_iter()
        .map(|(method, r)| {
            let (status, values) = match r {
                Ok(v) => (OK, v),
                Err(e) => (status_of(&e), Vec::new()),
            };
            let rel_error = match (obs, method, reference, values.first()) {
                (Observable::SpEnergies, ..) | (_, Method::Exact, ..) => None,
                (_, _, Some(e0), Some(e)) => Some((e - e0).abs() / e0.abs()),
                _ => None,
            };
            SweepRecord { index: point.index, coords: point.coords.clone(), method, status, values, rel_error }
        })
        .collect()
}

pub fn run_grid(
    grid: &SweepGrid,
    methods: &[Method],
    obs: Observable,
    count: usize,
    cap: usize,
    jobs: usize,
) -> Result<Vec<SweepRecord>, CliError> {
    let points = grid.points()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let nested: Vec<Vec<SweepRecord>> =
        pool.install(|| points.par_iter().map(|p| evaluate(p, methods, obs, count, cap)).collect());
    Ok(nested.into_iter().flatten().collect())
}

pub fn sweep(args: &SweepArgs) -> Result<(Table, bool), CliError> {
    let fixed = gather(&args.params)?;
    let cap = fixed.max_dim.unwrap_or(DEFAULT_MAX_DIM);
    let grid = SweepGrid::new(args.axis1.clone(), args.axis2.clone(), fixed.clone())?;
    let mut methods: Vec<Method> = Vec::new();
    for &m in &args.method {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let records = run_grid(&grid, &methods, args.observable, args.count, cap, args.jobs)?;

    let width = match args.observable {
        Observable::GsEnergy => 1,
        Observable::Levels => args.count,
        Observable::SpEnergies => fixed.m.unwrap_or(0),
    };
    let mut cols = vec!["index".to_string()];
    cols.extend(grid.axes().iter().map(|a| a.name.clone()));
    cols.extend(["method", "status"].map(String::from));
    match args.observable {
        Observable::GsEnergy => cols.push("energy".into()),
        Observable::Levels => cols.extend((0..width).map(|i| format!("e{i}"))),
        Observable::SpEnergies => {
            cols.extend((0..width).map(|i| format!("sp{i}")));
            cols.extend((0..width).map(|i| format!("free{i}")));
        }
    }
    let with_error = methods.contains(&Method::Exact) && args.observable != Observable::SpEnergies;
    if with_error {
        cols.push("rel_error".into());
    }

    let mut table = Table::new(cols);
    header(&mut table, "sweep");
    table.meta("fixed", fixed.describe());
    for a in grid.axes() {
        table.meta(format!("axis {}", a.name), format!("{:.16e}:{:.16e}:{}", a.min, a.max, a.steps));
    }
    table.meta("method", methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","));
    table.meta("observable", args.observable.as_str());
    if with_error {
        table.meta("rel_error", "|E - E_exact| / |E_exact| of the lowest energy");
    }

    let free: Vec<Vec<f64>> = if args.observable == Observable::SpEnergies {
        grid.points()?.iter().map(|p| methods::free_energies(&p.params)).collect()
    } else {
        Vec::new()
    };
    let mut failed = false;
    for rec in &records {
        failed |= rec.status != OK;
        let mut row = vec![Cell::from(rec.index)];
        row.extend(rec.coords.iter().map(|&c| Cell::from(c)));
        row.push(rec.method.as_str().into());
        row.push(rec.status.into());
        row.extend((0..width).map(|i| Cell::from(rec.values.get(i).copied())));
        if args.observable == Observable::SpEnergies {
            row.extend((0..width).map(|i| Cell::from(free[rec.index].get(i).copied())));
        }
        if with_error {
            row.push(rec.rel_error.into());
        }
        table.push(row);
    }
    Ok((table, failed))
}
