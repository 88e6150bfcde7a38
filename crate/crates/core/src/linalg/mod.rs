//! Exact linear algebra over ℚ: dense matrices, graded complexes of
//! finite-dimensional spaces, subquotient bookkeeping and a small exact LP.

mod complex;
mod lp;
mod matrix;
mod quotient;

pub use complex::{DoubleComplex, GradedDims, SpaceComplex};
pub use lp::{LinearProgram, LpOutcome};
pub use matrix::Matrix;
pub use quotient::Subquotient;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

/// Always `"p/q"`, with `q = 1` spelled out.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["1/2", "-3/4", "0/1", "7/1"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_vector("1,-1/2").unwrap(), vec![int(1), rat(-1, 2)]);
    }
}
