//! Text form of sphere polynomials: `3/2 x^2 y - z + 1`.
//!
//! Terms are joined by `+`/`-`, exponents written with `^`, rational
//! coefficients as `p/q`. Parsing accepts arbitrary whitespace between
//! tokens; rendering always prints the canonical form with the leading
//! (graded-lex largest) term first.

use super::{Rational, SpherePolynomial};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("malformed number at byte {at}")]
    BadNumber { at: usize },
    #[error("zero denominator at byte {at}")]
    ZeroDenominator { at: usize },
    #[error("empty term at byte {at}")]
    EmptyTerm { at: usize },
    #[error("empty input")]
    Empty,
}

impl fmt::Display for SpherePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, coeff) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let negative = coeff.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = coeff.abs();
            let is_unit_coeff = abs.is_one() && m.degree() > 0;
            if !is_unit_coeff {
                if abs.denom().is_one() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
                if m.degree() > 0 {
                    write!(f, " ")?;
                }
            }
            let mut vars = Vec::new();
            for (name, exp) in [("x", m.a), ("y", m.b), ("z", m.c)] {
                match exp {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    e => vars.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", vars.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for SpherePolynomial {
    type Err = ParseError;

    fn from_str(input: &str) -> Result<Self, ParseError> {
        parse_polynomial(input)
    }
}

/// Parses the textual polynomial form into canonical shape.
pub fn parse_polynomial(input: &str) -> Result<SpherePolynomial, ParseError> {
    let bytes: Vec<char> = input.chars().collect();
    let mut pos = 0usize;
    let mut terms: Vec<((u32, u32, u32), Rational)> = Vec::new();

    skip_ws(&bytes, &mut pos);
    if pos == bytes.len() {
        return Err(ParseError::Empty);
    }

    let mut sign = 1i64;
    let mut explicit_sign = false;
    loop {
        skip_ws(&bytes, &mut pos);
        if pos == bytes.len() {
            if explicit_sign {
                return Err(ParseError::EmptyTerm { at: pos });
            }
            break;
        }
        match bytes[pos] {
            '+' => {
                if explicit_sign {
                    return Err(ParseError::EmptyTerm { at: pos });
                }
                sign = 1;
                explicit_sign = true;
                pos += 1;
                continue;
            }
            '-' => {
                if explicit_sign {
                    return Err(ParseError::EmptyTerm { at: pos });
                }
                sign = -1;
                explicit_sign = true;
                pos += 1;
                continue;
            }
            _ => {}
        }
        let (coeff, exponents) = parse_term(&bytes, &mut pos)?;
        let signed = if sign < 0 { -coeff } else { coeff };
        terms.push((exponents, signed));
        sign = 1;
        explicit_sign = false;

        skip_ws(&bytes, &mut pos);
        if pos == bytes.len() {
            break;
        }
        match bytes[pos] {
            '+' | '-' => {} // handled at the top of the loop
            found => return Err(ParseError::Unexpected { found, at: pos }),
        }
    }

    Ok(SpherePolynomial::from_raw_terms(terms))
}

fn parse_term(
    chars: &[char],
    pos: &mut usize,
) -> Result<(Rational, (u32, u32, u32)), ParseError> {
    let start = *pos;
    let mut coeff: Option<Rational> = None;
    let mut exps = (0u32, 0u32, 0u32);
    let mut saw_anything = false;

    loop {
        skip_ws(chars, pos);
        if *pos == chars.len() {
            break;
        }
        match chars[*pos] {
            '0'..='9' => {
                if coeff.is_some() || saw_anything {
                    return Err(ParseError::Unexpected {
                        found: chars[*pos],
                        at: *pos,
                    });
                }
                coeff = Some(parse_rational(chars, pos)?);
                saw_anything = true;
            }
            'x' | 'y' | 'z' => {
                let var = chars[*pos];
                *pos += 1;
                let exp = parse_optional_exponent(chars, pos)?;
                match var {
                    'x' => exps.0 += exp,
                    'y' => exps.1 += exp,
                    _ => exps.2 += exp,
                }
                saw_anything = true;
            }
            '+' | '-' => break,
            found => {
                return Err(ParseError::Unexpected { found, at: *pos });
            }
        }
    }

    if !saw_anything {
        return Err(ParseError::EmptyTerm { at: start });
    }
    Ok((coeff.unwrap_or_else(Rational::one), exps))
}

fn parse_optional_exponent(chars: &[char], pos: &mut usize) -> Result<u32, ParseError> {
    let mut look = *pos;
    skip_ws(chars, &mut look);
    if look < chars.len() && chars[look] == '^' {
        look += 1;
        skip_ws(chars, &mut look);
        let digits_start = look;
        while look < chars.len() && chars[look].is_ascii_digit() {
            look += 1;
        }
        if digits_start == look {
            return Err(ParseError::BadNumber { at: digits_start });
        }
        let text: String = chars[digits_start..look].iter().collect();
        let value = text
            .parse::<u32>()
            .map_err(|_| ParseError::BadNumber { at: digits_start })?;
        *pos = look;
        Ok(value)
    } else {
        Ok(1)
    }
}

fn parse_rational(chars: &[char], pos: &mut usize) -> Result<Rational, ParseError> {
    let numer = parse_integer(chars, pos)?;
    let mut look = *pos;
    skip_ws(chars, &mut look);
    if look < chars.len() && chars[look] == '/' {
        look += 1;
        skip_ws(chars, &mut look);
        *pos = look;
        let denom = parse_integer(chars, pos)?;
        if denom.is_zero() {
            return Err(ParseError::ZeroDenominator { at: *pos });
        }
        Ok(Rational::new(numer, denom))
    } else {
        Ok(Rational::from(numer))
    }
}

fn parse_integer(chars: &[char], pos: &mut usize) -> Result<BigInt, ParseError> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(ParseError::BadNumber { at: start });
    }
    let text: String = chars[start..*pos].iter().collect();
    text.parse::<BigInt>()
        .map_err(|_| ParseError::BadNumber { at: start })
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn renders_canonical_order() {
        let p = SpherePolynomial::from_raw_terms([
            ((2, 1, 0), rat(3, 2)),
            ((0, 0, 1), int(-1)),
            ((0, 0, 0), int(1)),
        ]);
        assert_eq!(p.to_string(), "3/2 x^2 y - z + 1");
    }

    #[test]
    fn parses_what_it_prints() {
        let p = SpherePolynomial::from_raw_terms([
            ((2, 1, 0), rat(3, 2)),
            ((0, 0, 1), int(-1)),
            ((0, 0, 0), int(1)),
            ((0, 4, 1), rat(-7, 3)),
        ]);
        let round: SpherePolynomial = p.to_string().parse().unwrap();
        assert_eq!(round, p);
    }

    #[test]
    fn parses_compact_and_spaced_forms() {
        let a: SpherePolynomial = "3/2x^2y-z+1".parse().unwrap();
        let b: SpherePolynomial = " 3/2 x^2 y - z + 1 ".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_reduces_to_canonical() {
        let p: SpherePolynomial = "z^2".parse().unwrap();
        assert_eq!(p.to_string(), "-x^2 - y^2 + 1");
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(SpherePolynomial::zero().to_string(), "0");
        let p: SpherePolynomial = "x - x".parse().unwrap();
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            "".parse::<SpherePolynomial>(),
            Err(ParseError::Empty)
        ));
        assert!("3//2 x".parse::<SpherePolynomial>().is_err());
        assert!("x +".parse::<SpherePolynomial>().is_err());
        assert!("2 2 x".parse::<SpherePolynomial>().is_err());
        assert!("w^2".parse::<SpherePolynomial>().is_err());
        assert!(matches!(
            "1/0".parse::<SpherePolynomial>(),
            Err(ParseError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn unit_coefficients_are_implicit() {
        let p = SpherePolynomial::from_raw_terms([((1, 0, 0), int(1)), ((0, 1, 0), int(-1))]);
        assert_eq!(p.to_string(), "x - y");
    }
}
