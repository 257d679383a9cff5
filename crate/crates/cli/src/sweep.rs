use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisName {
    Y0,
    D,
    Z,
    S,
    M,
    Beta,
    Lambda,
    Delta,
}

impl AxisName {
    fn parse(name: &str) -> Result<Self, String> {
        Ok(match name {
            "y0" => AxisName::Y0,
            "d" => AxisName::D,
            "z" => AxisName::Z,
            "s" => AxisName::S,
            "M" | "m" => AxisName::M,
            "beta" => AxisName::Beta,
            "lambda" => AxisName::Lambda,
            "delta" => AxisName::Delta,
            other => {
                return Err(format!("unknown sweep axis {other:?} (expected y0, d, z, s, M, beta, lambda or delta)"))
            }
        })
    }

    pub fn column(self) -> &'static str {
        match self {
            AxisName::Y0 => "y0",
            AxisName::D => "d",
            AxisName::Z => "z",
            AxisName::S => "s",
            AxisName::M => "M",
            AxisName::Beta => "beta",
            AxisName::Lambda => "lambda",
            AxisName::Delta => "delta",
        }
    }

    pub fn apply(self, cfg: &mut RunConfig, value: f64) {
        match self {
            AxisName::Y0 => cfg.y0 = value,
            AxisName::D => cfg.d = value,
            AxisName::Z => cfg.z = value,
            AxisName::S => cfg.s = value,
            AxisName::M => cfg.m = value,
            AxisName::Beta => cfg.beta = value,
            AxisName::Lambda => cfg.lambda = value,
            AxisName::Delta => cfg.delta = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: AxisName,
    pub spec: String,
    pub values: Vec<f64>,
}

fn number(text: &str) -> Result<f64, String> {
    let v: f64 = text.trim().parse().map_err(|_| format!("not a number: {text:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {text:?}"))
    }
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let (name, range) = spec.split_once('=').ok_or_else(|| format!("sweep {spec:?} must look like axis=range"))?;
        let name = AxisName::parse(name.trim())?;
        let values = if let Some(log) = range.strip_prefix("log:") {
            let parts: Vec<&str> = log.split(':').collect();
            let [start, stop, count] = parts[..] else {
                return Err(format!("log sweep {spec:?} must be log:start:stop:count"));
            };
            let (start, stop) = (number(start)?, number(stop)?);
            let count: usize = count.trim().parse().map_err(|_| format!("bad point count in {spec:?}"))?;
            if !(start > 0.0 && stop > 0.0) {
                return Err(format!("log sweep {spec:?} needs positive bounds"));
            }
            match count {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n).map(|i| start * (stop / start).powf(i as f64 / (n - 1) as f64)).collect(),
            }
        } else if range.contains(':') {
            let parts: Vec<&str> = range.split(':').collect();
            let [start, stop, step] = parts[..] else {
                return Err(format!("sweep {spec:?} must be start:stop:step"));
            };
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step.is_nan() || step <= 0.0 {
                return Err(format!("sweep {spec:?} needs a positive step"));
            }
            if stop < start {
                Vec::new()
            } else {
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|i| start + i as f64 * step).collect()
            }
        } else if range.trim().is_empty() {
            Vec::new()
        } else {
            range.split(',').map(number).collect::<Result<_, _>>()?
        };
        Ok(Axis { name, spec: spec.to_string(), values })
    }
}

/// Cartesian product of the axes, first axis outermost. No axes gives one empty point.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_range_is_inclusive() {
        let a = Axis::parse("y0=0:1000:50").unwrap();
        assert_eq!(a.values.len(), 21);
        assert_eq!(a.values[20], 1000.0);
        assert_eq!(Axis::parse("d=0.1:0.3:0.1").unwrap().values.len(), 3);
    }

    #[test]
    fn log_list_and_empty_ranges() {
        let a = Axis::parse("M=log:1:256:5").unwrap();
        assert_eq!(a.values.len(), 5);
        assert!((a.values[4] - 256.0).abs() < 1e-9);
        assert_eq!(Axis::parse("beta=0.1,1,10").unwrap().values, vec![0.1, 1.0, 10.0]);
        assert!(Axis::parse("y0=10:0:1").unwrap().values.is_empty());
        assert!(Axis::parse("z=log:1:2:0").unwrap().values.is_empty());
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for bad in ["y0", "q=1:2:1", "y0=0:10:0", "y0=a:b:c", "z=log:0:1:3", "y0=1:2"] {
            assert!(Axis::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_order() {
        let axes = [Axis::parse("beta=1,2").unwrap(), Axis::parse("d=5,6,7").unwrap()];
        let g = grid(&axes);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![1.0, 5.0]);
        assert_eq!(g[3], vec![2.0, 5.0]);
        assert_eq!(grid(&[]), vec![Vec::<f64>::new()]);
    }
}
