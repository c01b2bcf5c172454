//! Canonical text form of super-polynomials.
//!
//! Terms are written as `coef*x1^a1*...*t_i*...` with 1-based indices,
//! `x` for the even variables and `t` for the odd ones. Terms are ordered
//! by decreasing total degree, then decreasing x-exponent vector in lex
//! order, then increasing `θ` set. Coefficients equal to 1 are omitted,
//! the zero polynomial prints as `0`. Example: `3*x1^2*x3*t2*t4 - 1/2*t1`.
//!
//! The parser accepts this form and, more loosely, `θ` factors in any order
//! (the product is re-signed) and repeated `x` factors.

use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{SuperMonomial, SuperPoly, ThetaSet};
use crate::{Error, Rational, Result};

pub fn monomial_string(m: &SuperMonomial) -> String {
    let mut parts = Vec::new();
    for (j, &a) in m.xexp.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("x{}", j + 1)),
            _ => parts.push(format!("x{}^{a}", j + 1)),
        }
    }
    for j in m.thetas.iter() {
        parts.push(format!("t{}", j + 1));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn sort_key(m: &SuperMonomial) -> (Reverse<u32>, Reverse<Vec<u32>>, ThetaSet) {
    (Reverse(m.xdeg() + m.tdeg()), Reverse(m.xexp.clone()), m.thetas)
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(m, _)| sort_key(m));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let is_const = m.xdeg() == 0 && m.thetas.is_empty();
            if is_const {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&monomial_string(m))?;
            } else {
                write!(f, "{mag}*{}", monomial_string(m))?;
            }
        }
        Ok(())
    }
}

fn parse_index(s: &str, nvars: usize) -> Result<usize> {
    let i: usize = s.parse().map_err(|_| Error::Parse(format!("bad variable index `{s}`")))?;
    if i == 0 || i > nvars {
        return Err(Error::Parse(format!("variable index {i} outside 1..={nvars}")));
    }
    Ok(i - 1)
}

fn parse_term(term: &str, nvars: usize) -> Result<Option<(SuperMonomial, Rational)>> {
    let mut coef = Rational::one();
    let mut xexp = vec![0u32; nvars];
    let mut set = ThetaSet::EMPTY;
    let mut neg = false;
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => {
                    let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    (i, e)
                }
                None => (rest, 1),
            };
            xexp[parse_index(idx, nvars)?] += exp;
        } else if let Some(rest) = factor.strip_prefix('t') {
            let j = parse_index(rest, nvars)?;
            match set.wedge(ThetaSet::singleton(j)) {
                Some((s, ng)) => {
                    set = s;
                    neg ^= ng;
                }
                None => return Ok(None),
            }
        } else {
            let value = match factor.split_once('/') {
                Some((a, b)) => {
                    let a: BigInt = a.parse().map_err(|_| Error::Parse(format!("bad number `{factor}`")))?;
                    let b: BigInt = b.parse().map_err(|_| Error::Parse(format!("bad number `{factor}`")))?;
                    if b.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    Rational::new(a, b)
                }
                None => Rational::from_integer(
                    factor.parse().map_err(|_| Error::Parse(format!("bad factor `{factor}`")))?,
                ),
            };
            coef *= value;
        }
    }
    if neg {
        coef = -coef;
    }
    Ok(Some((SuperMonomial::new(xexp, set), coef)))
}

impl SuperPoly {
    /// Parses the canonical text form in `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<SuperPoly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut out = SuperPoly::zero(nvars);
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (neg, body) = match piece.as_bytes().first() {
                Some(b'-') => (true, &piece[1..]),
                Some(b'+') => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            if let Some((m, c)) = parse_term(body, nvars)? {
                out.add_term(m, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Parses with the variable count inferred from the largest index used.
    pub fn parse_infer(s: &str) -> Result<SuperPoly> {
        let mut n = 0usize;
        let chars: Vec<char> = s.chars().collect();
        for (i, &ch) in chars.iter().enumerate() {
            if ch == 'x' || ch == 't' {
                let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
                if let Ok(v) = digits.parse::<usize>() {
                    n = n.max(v);
                }
            }
        }
        SuperPoly::parse(s, n.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_examples() {
        for s in ["3*x1^2*x3*t2*t4 - 1/2*t1", "0", "-5", "x1*t1 - x2*t2", "t1*t2", "-x2^3 + 2/3"] {
            let p = SuperPoly::parse(s, 4).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(SuperPoly::parse(&p.to_string(), 4).unwrap(), p);
        }
    }

    #[test]
    fn reorders_thetas_with_sign() {
        let p = SuperPoly::parse("t2*t1", 2).unwrap();
        assert_eq!(p.to_string(), "-t1*t2");
        assert!(SuperPoly::parse("t1*t1", 2).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SuperPoly::parse("x0", 2).is_err());
        assert!(SuperPoly::parse("x3", 2).is_err());
        assert!(SuperPoly::parse("1/0", 2).is_err());
        assert!(SuperPoly::parse("x1 +", 2).is_err());
        assert!(SuperPoly::parse("y1", 2).is_err());
    }

    #[test]
    fn infers_variable_count() {
        assert_eq!(SuperPoly::parse_infer("x3*t1").unwrap().nvars(), 3);
    }
}
