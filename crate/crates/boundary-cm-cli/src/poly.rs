//! A small parser for polynomials in t with rational coefficients, the
//! inline alternative to spelling out coefficient arrays in a spec file.
//!
//! Accepted syntax: a sum of terms, each an optional rational coefficient
//! followed by an optional power of t. Examples: `0`, `3`, `-1/2`, `t`,
//! `-t^2`, `2t^3`, `1+t`, `1/2 - 3t^4`. Whitespace is ignored.

use boundary_cm::series::parse_rational;
use boundary_cm::{Coeff, Series, SeriesRing};
use num_traits::{One, Zero};

pub fn parse_poly(ring: &SeriesRing, text: &str) -> Result<Series, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty polynomial".to_string());
    }
    let mut coeffs = vec![Coeff::zero(); ring.order()];
    for term in split_terms(&compact)? {
        let (coeff, exponent) = parse_term(&term)?;
        if exponent >= ring.order() {
            return Err(format!(
                "degree {exponent} is not below the truncation order {}",
                ring.order()
            ));
        }
        coeffs[exponent] += coeff;
    }
    ring.from_coeffs(&coeffs).map_err(|err| err.to_string())
}

/// Cut `1-2t+t^2` into `1`, `-2t`, `+t^2` (signs kept with their terms).
fn split_terms(compact: &str) -> Result<Vec<String>, String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    for (idx, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && idx > 0 {
            if current.trim_start_matches(['+', '-']).is_empty() {
                return Err(format!("misplaced sign in {compact:?}"));
            }
            terms.push(std::mem::take(&mut current));
        }
        current.push(ch);
    }
    if current.trim_start_matches(['+', '-']).is_empty() {
        return Err(format!("misplaced sign in {compact:?}"));
    }
    terms.push(current);
    Ok(terms)
}

fn parse_term(term: &str) -> Result<(Coeff, usize), String> {
    let unsigned = term.strip_prefix('+').unwrap_or(term);
    let (coeff_str, exponent) = match unsigned.find('t') {
        None => (unsigned, 0),
        Some(pos) => {
            let tail = &unsigned[pos + 1..];
            let exponent = if tail.is_empty() {
                1
            } else if let Some(digits) = tail.strip_prefix('^') {
                digits
                    .parse::<usize>()
                    .map_err(|_| format!("bad exponent {digits:?} in term {term:?}"))?
            } else {
                return Err(format!("unexpected {tail:?} after t in term {term:?}"));
            };
            (&unsigned[..pos], exponent)
        }
    };
    let coeff = match coeff_str {
        "" => Coeff::one(),
        "-" => -Coeff::one(),
        s => parse_rational(s).map_err(|err| format!("in term {term:?}: {err}"))?,
    };
    Ok((coeff, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> SeriesRing {
        SeriesRing::new(8).unwrap()
    }

    #[test]
    fn constants_and_monomials() {
        let r = ring();
        assert_eq!(parse_poly(&r, "0").unwrap(), r.zero());
        assert_eq!(parse_poly(&r, "3").unwrap(), r.constant_i64(3));
        assert_eq!(parse_poly(&r, "t").unwrap(), r.t());
        assert_eq!(parse_poly(&r, "-t^2").unwrap(), r.poly_i64(&[0, 0, -1]));
        assert_eq!(parse_poly(&r, "2t^3").unwrap(), r.poly_i64(&[0, 0, 0, 2]));
    }

    #[test]
    fn sums_with_signs_and_rationals() {
        let r = ring();
        assert_eq!(parse_poly(&r, "1+t").unwrap(), r.poly_i64(&[1, 1]));
        assert_eq!(parse_poly(&r, "1 - 2t + t^2").unwrap(), r.poly_i64(&[1, -2, 1]));
        let half = parse_poly(&r, "1/2t").unwrap();
        assert_eq!(&half + &half, r.t());
        assert_eq!(parse_poly(&r, "t+t").unwrap(), r.poly_i64(&[0, 2]));
    }

    #[test]
    fn rejects_malformed_input() {
        let r = ring();
        for bad in ["", "  ", "+", "1++t", "t^", "t^x", "tt", "2.5", "t^-1"] {
            assert!(parse_poly(&r, bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn rejects_degrees_at_or_above_the_order() {
        let r = ring();
        assert!(parse_poly(&r, "t^8").is_err());
        assert!(parse_poly(&r, "t^7").is_ok());
    }
}
