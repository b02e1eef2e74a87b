use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Connectivity bar `f(n)` a cluster's minimum cut must strictly exceed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum Criterion {
    #[default]
    Log10,
    Log2,
    Sqrt,
    /// `k * n` with `k > 0`.
    Linear(f64),
}

impl Criterion {
    /// `f(n)` as a real number. No rounding is applied.
    pub fn evaluate(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Criterion::Log10 => n.log10(),
            Criterion::Log2 => n.log2(),
            Criterion::Sqrt => n.sqrt(),
            Criterion::Linear(k) => k * n,
        }
    }

    /// Whether a cut of `cut_weight` edges passes for a cluster of `n`
    /// vertices.
    pub fn accepts(&self, cut_weight: u64, n: usize) -> bool {
        cut_weight as f64 > self.evaluate(n)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Criterion::Linear(k) if !(k > 0.0 && k.is_finite()) => Err(Error::InvalidConfig(
                format!("linear criterion needs k > 0, got {k}"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Log10 => f.write_str("log10"),
            Criterion::Log2 => f.write_str("log2"),
            Criterion::Sqrt => f.write_str("sqrt"),
            Criterion::Linear(k) => write!(f, "linear:{k}"),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    /// Parses `log10`, `log2`, `sqrt` or `linear:K`.
    fn from_str(s: &str) -> Result<Self> {
        let criterion = match s {
            "log10" => Criterion::Log10,
            "log2" => Criterion::Log2,
            "sqrt" => Criterion::Sqrt,
            other => {
                let k = other
                    .strip_prefix("linear:")
                    .and_then(|k| k.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "unknown criterion {other:?}; expected log10, log2, sqrt or linear:K"
                        ))
                    })?;
                Criterion::Linear(k)
            }
        };
        criterion.validate()?;
        Ok(criterion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(Criterion::Log10.evaluate(10), 1.0);
        assert_eq!(Criterion::Log10.evaluate(1), 0.0);
        assert_eq!(Criterion::Log2.evaluate(16), 4.0);
        assert_eq!(Criterion::Sqrt.evaluate(25), 5.0);
        assert!((Criterion::Linear(0.2).evaluate(10) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_is_strict() {
        // log2(4) = 2 exactly, so a cut of 2 does not pass.
        assert!(!Criterion::Log2.accepts(2, 4));
        assert!(Criterion::Log2.accepts(3, 4));
        assert!(Criterion::Log10.accepts(1, 2));
        assert!(Criterion::Log10.accepts(1, 1));
    }

    #[test]
    fn parse() {
        assert_eq!("linear:0.5".parse::<Criterion>().unwrap(), Criterion::Linear(0.5));
        assert_eq!("sqrt".parse::<Criterion>().unwrap(), Criterion::Sqrt);
        assert!("linear:0".parse::<Criterion>().is_err());
        assert!("linear:x".parse::<Criterion>().is_err());
        assert!("log3".parse::<Criterion>().is_err());
        for c in [Criterion::Log10, Criterion::Log2, Criterion::Sqrt, Criterion::Linear(1.5)] {
            assert_eq!(c.to_string().parse::<Criterion>().unwrap(), c);
        }
    }
}
