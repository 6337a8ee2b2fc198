//! `spectrum` and `dist`.

use ringbose::exact::cluster_ids;

use crate::args::{DistArgs, ParamArgs, SpectrumArgs, DEFAULT_MAX_DIM};
use crate::error::CliError;
use crate::methods::{self, Method};
use crate::params::{describe_model, read_config, ParamSet};
use crate::status::{status_of, OK};
use crate::table::{Cell, Table};

pub(crate) fn gather(args: &ParamArgs) -> Result<ParamSet, CliError> {
    let flags = args.flags();
    match &args.config {
        Some(path) => Ok(flags.over(&read_config(path)?)),
        None => Ok(flags),
    }
}

pub(crate) fn header(table: &mut Table, command: &str) {
    table.meta("ringbose", env!("CARGO_PKG_VERSION"));
    table.meta("command", command);
}

/// Returns the table and whether the method failed.
pub fn spectrum(args: &SpectrumArgs) -> Result<(Table, bool), CliError> {
    let set = gather(&args.params)?;
    let params = set.resolve()?;
    let cap = set.max_dim.unwrap_or(DEFAULT_MAX_DIM);
    let cols = ["level", "energy", "label", "cluster", "ground", "status"];
    let mut table = Table::new(cols.iter().map(|s| s.to_string()).collect());
    header(&mut table, "spectrum");
    table.meta("params", describe_model(&params));
    table.meta("method", args.method.as_str());
    table.meta("count", args.count.to_string());
    match methods::levels(args.method, &params, args.count, cap) {
        Ok(levels) => {
            let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
            let ids = cluster_ids(&energies);
            for (i, level) in levels.into_iter().enumerate() {
                let label = if args.method == Method::Exact { Cell::Empty } else { level.label.into() };
                table.push(vec![
                    i.into(),
                    level.energy.into(),
                    label,
                    ids[i].into(),
                    usize::from(ids[i] == 0).into(),
                    OK.into(),
                ]);
            }
            Ok((table, false))
        }
        Err(e) => {
            table.meta("error", e.to_string());
            table.push(vec![Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, status_of(&e).into()]);
            Ok((table, true))
        }
    }
}

pub fn dist(args: &DistArgs) -> Result<(Table, bool), CliError> {
    let set = gather(&args.params)?;
    let params = set.resolve()?;
    let cap = set.max_dim.unwrap_or(DEFAULT_MAX_DIM);
    let m = params.sites();
    let mut cols = vec!["j".to_string()];
    cols.extend(args.method.iter().map(|x| format!("n_{}", x.as_str())));
    cols.push("k".into());
    cols.extend(args.method.iter().map(|x| format!("m_{}", x.as_str())));
    let mut table = Table::new(cols);
    header(&mut table, "dist");
    table.meta("params", describe_model(&params));
    let results: Vec<_> = args.method.iter().map(|&x| methods::distributions(x, &params, cap)).collect();
    let mut failed = false;
    for (x, r) in args.method.iter().zip(&results) {
        match r {
            Ok(_) => table.meta(format!("status {}", x.as_str()), OK),
            Err(e) => {
                failed = true;
                table.meta(format!("status {}", x.as_str()), format!("{}: {e}", status_of(e)));
            }
        }
    }
    let column = |pick: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>, i: usize| -> Vec<Cell> {
        results.iter().map(|r| r.as_ref().ok().map(|d| pick(d)[i]).into()).collect()
    };
    for i in 0..m {
        let mut row = vec![Cell::from(i)];
        row.extend(column(|d| &d.0, i));
        row.push(i.into());
        row.extend(column(|d| &d.1, i));
        table.push(row);
    }
    let sums = |pick: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<Cell> {
        results.iter().map(|r| r.as_ref().ok().map(|d| pick(d).iter().sum::<f64>()).into()).collect()
    };
    let mut row = vec![Cell::from("sum")];
    row.extend(sums(|d| &d.0));
    row.push("sum".into());
    row.extend(sums(|d| &d.1));
    table.push(row);
    let mut row = vec![Cell::from("status")];
    let statuses: Vec<Cell> = results
        .iter()
        .map(|r| match r {
            Ok(_) => OK.into(),
            Err(e) => status_of(e).into(),
        })
        .collect();
    row.extend(statuses.clone());
    row.push("status".into());
    row.extend(statuses);
    table.push(row);
    Ok((table, failed))
}
