//! One- and two-axis parameter grids.

use std::str::FromStr;

use ringbose::ModelParams;

use crate::error::CliError;
use crate::params::ParamSet;

const AXIS_NAMES: [&str; 5] = ["tau", "v", "T", "V0", "U"];

/// `name:min:max:steps`, with `steps` evenly spaced values including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, steps] = parts[..] else {
            return Err(format!("axis {s:?}: expected name:min:max:steps"));
        };
        if !AXIS_NAMES.contains(&name) {
            return Err(format!("axis name {name:?} not one of {}", AXIS_NAMES.join(", ")));
        }
        let num = |x: &str| x.parse::<f64>().map_err(|_| format!("axis {s:?}: bad number {x:?}"));
        let axis = Axis {
            name: name.to_string(),
            min: num(min)?,
            max: num(max)?,
            steps: steps.parse().map_err(|_| format!("axis {s:?}: bad step count {steps:?}"))?,
        };
        if axis.steps == 0 {
            return Err(format!("axis {s:?}: steps must be at least 1"));
        }
        if !(axis.min <= axis.max) {
            return Err(format!("axis {s:?}: min must not exceed max"));
        }
        Ok(axis)
    }
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / last)
                }
            })
            .collect()
    }

    fn dimensionless(&self) -> bool {
        matches!(self.name.as_str(), "tau" | "v")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: ParamSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub coords: Vec<f64>,
    pub params: ModelParams,
}

impl SweepGrid {
    pub fn new(axis1: Axis, axis2: Option<Axis>, fixed: ParamSet) -> Result<Self, CliError> {
        if let Some(a2) = &axis2 {
            if a2.name == axis1.name {
                return Err(CliError::usage(format!("both axes are {:?}", a2.name)));
            }
            if a2.dimensionless() != axis1.dimensionless() {
                return Err(CliError::usage("axes mix tau/v with T/V0/U"));
            }
        }
        Ok(SweepGrid { axis1, axis2, fixed })
    }

    pub fn axes(&self) -> Vec<&Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref()).collect()
    }

    /// Every grid point, `axis1` outermost. Fails if any point is not a valid model.
    pub fn points(&self) -> Result<Vec<GridPoint>, CliError> {
        let v1 = self.axis1.values();
        let v2: Vec<Option<f64>> = match &self.axis2 {
            Some(a) => a.values().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut base = ParamSet::default();
        for axis in self.axes() {
            // placeholders so the axis parametrization wins over the fixed one
            base.set(&axis.name, "0")?;
        }
        let base = base.over(&self.fixed);
        let mut out = Vec::with_capacity(v1.len() * v2.len());
        for &x in &v1 {
            for y in &v2 {
                let mut set = base.clone();
                set.set(&self.axis1.name, &x.to_string())?;
                let mut coords = vec![x];
                if let (Some(a2), Some(y)) = (&self.axis2, y) {
                    set.set(&a2.name, &y.to_string())?;
                    coords.push(*y);
                }
                let params = set
                    .resolve()
                    .map_err(|e| CliError::usage(format!("grid point {coords:?}: {e}")))?;
                out.push(GridPoint { index: out.len(), coords, params });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a: Axis = "tau:0.5:1.5:3".parse().unwrap();
        assert_eq!(a.values(), vec![0.5, 1.0, 1.5]);
        assert_eq!("v:2:2:1".parse::<Axis>().unwrap().values(), vec![2.0]);
        for bad in ["tau:1:0:3", "tau:0:1:0", "w:0:1:2", "tau:0:1", "tau:a:1:2"] {
            assert!(bad.parse::<Axis>().is_err(), "{bad}");
        }
    }

    #[test]
    fn axis_ends_are_exact() {
        let a: Axis = "T:0.1:0.7:7".parse().unwrap();
        let v = a.values();
        assert_eq!((v[0], v[6]), (0.1, 0.7));
    }

    #[test]
    fn grid_points_in_order() {
        let fixed = ParamSet { m: Some(4), n: Some(2), un_scale: Some(2.0), ..Default::default() };
        let g = SweepGrid::new("tau:1:2:2".parse().unwrap(), Some("v:0:1:3".parse().unwrap()), fixed).unwrap();
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1].coords, vec![1.0, 0.5]);
        assert_eq!(pts[3].coords, vec![2.0, 0.0]);
        assert_eq!(pts[5].params.hopping(), 4.0);
        assert!(pts.iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn grid_rejects_bad_axes() {
        let fixed = ParamSet { m: Some(4), n: Some(2), ..Default::default() };
        let a = || "tau:1:2:2".parse::<Axis>().unwrap();
        assert!(SweepGrid::new(a(), Some(a()), fixed.clone()).is_err());
        assert!(SweepGrid::new(a(), Some("T:1:2:2".parse().unwrap()), fixed.clone()).is_err());
        // physical axis without the other physical fields
        let g = SweepGrid::new("T:1:2:2".parse().unwrap(), None, fixed).unwrap();
        assert!(g.points().is_err());
    }
}
