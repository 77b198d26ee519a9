//! Grid syntax for CLI axes: `a:step:b` (inclusive), `a,b,c`, or a single value.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GridError {}

fn number(s: &str) -> Result<f64, GridError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| GridError(format!("`{s}` is not a number")))?;
    if !x.is_finite() {
        return Err(GridError(format!("`{s}` is not finite")));
    }
    Ok(x)
}

/// Parses a real grid. Ranges are generated as `a + i·step` and snapped to
/// 12 significant digits so `0:0.01:3` yields `0.07` rather than `0.07000000000000001`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, GridError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(GridError("empty grid".into()));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(number)
            .collect::<Result<Vec<_>, _>>()?,
        [a, step, b] => {
            let (a, step, b) = (number(a)?, number(step)?, number(b)?);
            if step == 0.0 || (b - a) * step < 0.0 {
                return Err(GridError(format!("step {step} does not lead from {a} to {b}")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(GridError(format!("grid of {count} points is too large")));
            }
            (0..count).map(|i| snap(a + i as f64 * step)).collect()
        }
        _ => return Err(GridError(format!("cannot parse grid `{spec}`; use a:step:b or a,b,c"))),
    };
    if values.is_empty() {
        return Err(GridError("empty grid".into()));
    }
    Ok(values)
}

/// Parses an integer grid with the same syntax.
pub fn parse_int_grid(spec: &str) -> Result<Vec<usize>, GridError> {
    parse_grid(spec)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(GridError(format!("{x} is not a nonnegative integer")))
            }
        })
        .collect()
}

fn snap(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_lists_and_singles() {
        let g = parse_grid("0:0.01:3").unwrap();
        assert_eq!(g.len(), 301);
        assert_eq!(g[7], 0.07);
        assert_eq!(*g.last().unwrap(), 3.0);
        assert_eq!(parse_grid("1, 2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_grid("-0.01").unwrap(), vec![-0.01]);
        assert_eq!(parse_int_grid("11:10:101").unwrap().len(), 10);
        assert_eq!(parse_grid("5:-1:3").unwrap(), vec![5.0, 4.0, 3.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        for bad in ["", " ", "1:0:3", "3:1:1", "a", "1:2", "1:2:3:4", ","] {
            assert!(parse_grid(bad).is_err(), "{bad:?}");
        }
        assert!(parse_int_grid("1.5").is_err());
    }
}
