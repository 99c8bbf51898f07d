//! Truncated formal power series over the rationals.
//!
//! Everything downstream works in the ring Q[t]/(t^N): coefficients are
//! exact arbitrary-precision rationals and every product silently drops
//! terms of degree N and above. N (the truncation order) is fixed per
//! computation and must be at least 2, so that multiplication by t and
//! the divisibility test below stay meaningful.
//!
//! Two operations do the heavy lifting for the module theory built on top:
//! [`Series::invert`] (units are exactly the series with nonzero constant
//! term) and [`Series::shift_down`] (exact division by a power of t).
//! Note that `shift_down` is *not* injective: the top `d` coefficients of
//! the result are unrecoverable and are set to zero. Callers that need
//! exactness keep their polynomial degrees below `N - d`; the rank-2
//! constructors enforce degree < N/2 on their inputs for this reason.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Exact coefficient type used across the crate.
pub type Coeff = BigRational;

/// Errors from series construction and the partial ring operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    /// Truncation orders below 2 leave no room for a t term.
    #[error("truncation order must be at least 2, got {0}")]
    BadTruncation(usize),
    /// Inversion of a non-unit (constant term zero).
    #[error("series is not a unit: constant term is zero")]
    NotAUnit,
    /// Exact division by t^d of an element not divisible by t^d.
    #[error("series is not divisible by t^{0}")]
    NotDivisible(usize),
    /// A coefficient string that is not a valid rational.
    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),
    /// More nonzero coefficients than the truncation order allows.
    #[error("coefficient list of effective length {len} exceeds truncation order {order}")]
    TooManyCoefficients { len: usize, order: usize },
}

/// Factory for series of one fixed truncation order.
///
/// A ring is just a validated order; series produced by the same ring can
/// be combined freely. Mixing orders in arithmetic is a programming error
/// and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesRing {
    order: usize,
}

impl SeriesRing {
    /// Create a ring of truncation order `order` (N >= 2).
    pub fn new(order: usize) -> Result<Self, SeriesError> {
        if order < 2 {
            return Err(SeriesError::BadTruncation(order));
        }
        Ok(SeriesRing { order })
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The zero series.
    pub fn zero(&self) -> Series {
        Series {
            coeffs: vec![Coeff::zero(); self.order],
        }
    }

    /// The multiplicative unit.
    pub fn one(&self) -> Series {
        self.monomial(0)
    }

    /// The generator t.
    pub fn t(&self) -> Series {
        self.monomial(1)
    }

    /// t^d, or zero once d reaches the truncation order.
    pub fn monomial(&self, d: usize) -> Series {
        let mut s = self.zero();
        if d < self.order {
            s.coeffs[d] = Coeff::one();
        }
        s
    }

    /// Constant series from an integer.
    pub fn constant_i64(&self, c: i64) -> Series {
        let mut s = self.zero();
        s.coeffs[0] = Coeff::from_integer(BigInt::from(c));
        s
    }

    /// Polynomial with integer coefficients, constant term first.
    ///
    /// # Examples
    /// ```
    /// let ring = boundary_cm::SeriesRing::new(4).unwrap();
    /// let p = ring.poly_i64(&[1, 0, -1]); // 1 - t^2
    /// assert_eq!(p.coefficient(2), &-num_rational::BigRational::from_integer(1.into()));
    /// ```
    ///
    /// # Panics
    /// Panics if more than `order` coefficients are supplied; use
    /// [`SeriesRing::from_coeffs`] for fallible construction.
    pub fn poly_i64(&self, coeffs: &[i64]) -> Series {
        assert!(
            coeffs.len() <= self.order,
            "polynomial has {} coefficients but the truncation order is {}",
            coeffs.len(),
            self.order
        );
        let mut s = self.zero();
        for (d, &c) in coeffs.iter().enumerate() {
            s.coeffs[d] = Coeff::from_integer(BigInt::from(c));
        }
        s
    }

    /// Series from explicit rational coefficients, constant term first.
    ///
    /// Shorter inputs are padded with zeros. Fails only when nonzero
    /// coefficients would fall at degree >= order.
    pub fn from_coeffs(&self, coeffs: &[Coeff]) -> Result<Series, SeriesError> {
        let effective = coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |p| p + 1);
        if effective > self.order {
            return Err(SeriesError::TooManyCoefficients {
                len: effective,
                order: self.order,
            });
        }
        let mut s = self.zero();
        for (d, c) in coeffs.iter().take(self.order).enumerate() {
            s.coeffs[d] = c.clone();
        }
        Ok(s)
    }

    /// Series from "p/q" coefficient strings, constant term first.
    ///
    /// This is the inverse of the JSON wire encoding produced by
    /// [`Series::serialize`]: `["1", "-1/2"]` is 1 - t/2.
    pub fn from_coeff_strs<S: AsRef<str>>(&self, strs: &[S]) -> Result<Series, SeriesError> {
        let coeffs = strs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.from_coeffs(&coeffs)
    }
}

/// Parse an exact rational from "p" or "p/q" notation.
pub fn parse_rational(s: &str) -> Result<Coeff, SeriesError> {
    let bad = || SeriesError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An element of Q[t]/(t^N), stored as N coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Coeff>,
}

impl Series {
    /// Truncation order of the ambient ring.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// The ring this series lives in.
    pub fn ring(&self) -> SeriesRing {
        SeriesRing {
            order: self.coeffs.len(),
        }
    }

    /// Coefficient of t^d (zero for d >= order).
    pub fn coefficient(&self, d: usize) -> &Coeff {
        static ZERO: std::sync::OnceLock<Coeff> = std::sync::OnceLock::new();
        self.coeffs
            .get(d)
            .unwrap_or_else(|| ZERO.get_or_init(Coeff::zero))
    }

    /// Constant term.
    pub fn constant_term(&self) -> &Coeff {
        &self.coeffs[0]
    }

    /// All coefficients, constant term first.
    pub fn coefficients(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Index of the lowest nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the highest nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// True when the constant term vanishes, i.e. t divides the series.
    ///
    /// This only inspects degree 0, so the answer does not depend on the
    /// truncation order.
    pub fn divisible_by_t(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// True when t^d divides the series (all coefficients below d vanish).
    pub fn divisible_by(&self, d: usize) -> bool {
        self.coeffs.iter().take(d).all(|c| c.is_zero())
    }

    /// Multiply by t^d (truncating at the top).
    pub fn shift_up(&self, d: usize) -> Series {
        let n = self.order();
        let mut out = vec![Coeff::zero(); n];
        for i in 0..n.saturating_sub(d) {
            if !self.coeffs[i].is_zero() {
                out[i + d] = self.coeffs[i].clone();
            }
        }
        Series { coeffs: out }
    }

    /// Exact division by t^d.
    ///
    /// The top d coefficients of the result are unknowable after
    /// truncation and are set to zero; results are exact whenever the
    /// dividend's degree stays below `order - d`, which the callers in
    /// this crate arrange by bounding input degrees.
    pub fn shift_down(&self, d: usize) -> Result<Series, SeriesError> {
        if !self.divisible_by(d) {
            return Err(SeriesError::NotDivisible(d));
        }
        let n = self.order();
        let mut out = vec![Coeff::zero(); n];
        for i in d..n {
            if !self.coeffs[i].is_zero() {
                out[i - d] = self.coeffs[i].clone();
            }
        }
        Ok(Series { coeffs: out })
    }

    /// Multiplicative inverse; errors unless the constant term is nonzero.
    ///
    /// The coefficients of the inverse satisfy the usual recursion
    /// b_0 = 1/a_0, b_n = -(1/a_0) * sum_{i=1..n} a_i b_{n-i}.
    ///
    /// # Examples
    /// ```
    /// let ring = boundary_cm::SeriesRing::new(3).unwrap();
    /// let inv = ring.poly_i64(&[2, 1]).invert().unwrap(); // 1/(2 + t)
    /// assert_eq!(inv, ring.from_coeff_strs(&["1/2", "-1/4", "1/8"]).unwrap());
    /// ```
    pub fn invert(&self) -> Result<Series, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let n = self.order();
        let a0_inv = self.coeffs[0].recip();
        let mut b = Vec::with_capacity(n);
        b.push(a0_inv.clone());
        for m in 1..n {
            let mut acc = Coeff::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() && !b[m - i].is_zero() {
                    acc += &self.coeffs[i] * &b[m - i];
                }
            }
            b.push(-acc * &a0_inv);
        }
        Ok(Series { coeffs: b })
    }

    /// Multiply by an exact rational scalar.
    pub fn scale(&self, c: &Coeff) -> Series {
        if c.is_zero() {
            return self.ring().zero();
        }
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// In-place fused `self += c * rhs`, the inner loop of the solver.
    pub fn add_scaled_assign(&mut self, c: &Coeff, rhs: &Series) {
        assert_eq!(
            self.order(),
            rhs.order(),
            "series truncation orders differ"
        );
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }
}

fn check_orders(a: &Series, b: &Series) {
    assert_eq!(
        a.order(),
        b.order(),
        "series truncation orders differ ({} vs {})",
        a.order(),
        b.order()
    );
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        check_orders(self, rhs);
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        check_orders(self, rhs);
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        check_orders(self, rhs);
        let n = self.order();
        let mut out = vec![Coeff::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Series> for Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                $trait::$method(&self, rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl fmt::Display for Series {
    /// Human-readable polynomial form, e.g. `1 - 1/2*t + t^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if d == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if d == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{d}")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Series {
    /// Wire form: an array of "p/q" strings, constant term first, with
    /// trailing zeros trimmed (the zero series is `["0"]`). The ambient
    /// truncation order travels separately in the enclosing document.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let upto = self.degree().map_or(1, |d| d + 1);
        let mut seq = serializer.serialize_seq(Some(upto))?;
        for c in &self.coeffs[..upto] {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> SeriesRing {
        SeriesRing::new(n).unwrap()
    }

    #[test]
    fn order_must_be_at_least_two() {
        assert_eq!(SeriesRing::new(0), Err(SeriesError::BadTruncation(0)));
        assert_eq!(SeriesRing::new(1), Err(SeriesError::BadTruncation(1)));
        assert!(SeriesRing::new(2).is_ok());
    }

    #[test]
    fn arithmetic_truncates_at_order() {
        let r = ring(4);
        let t = r.t();
        let t3 = r.monomial(3);
        assert_eq!(&t3 * &t, r.zero());
        assert_eq!(&t * &t, r.monomial(2));
        let p = r.poly_i64(&[1, 1, 1, 1]);
        let q = &p * &p;
        assert_eq!(q, r.poly_i64(&[1, 2, 3, 4]));
    }

    #[test]
    fn unit_inversion_matches_the_recursion() {
        let r = ring(3);
        let inv = r.poly_i64(&[2, 1]).invert().unwrap();
        assert_eq!(inv, r.from_coeff_strs(&["1/2", "-1/4", "1/8"]).unwrap());
        // a * a^{-1} = 1 exactly in the truncated ring
        assert!((r.poly_i64(&[2, 1]) * inv).is_one());
    }

    #[test]
    fn inversion_of_longer_units_verifies_by_multiplication() {
        let r = ring(16);
        for coeffs in [vec![1, 5, -3], vec![-2, 0, 0, 7], vec![3, 1, 1, 1, 1]] {
            let a = r.poly_i64(&coeffs);
            let inv = a.invert().unwrap();
            assert!((a * inv).is_one());
        }
    }

    #[test]
    fn non_units_do_not_invert() {
        let r = ring(5);
        assert_eq!(r.t().invert(), Err(SeriesError::NotAUnit));
        assert_eq!(r.zero().invert(), Err(SeriesError::NotAUnit));
    }

    #[test]
    fn shift_down_is_exact_division() {
        let r = ring(6);
        let a = r.poly_i64(&[0, 0, 3, -1]); // 3t^2 - t^3
        let b = a.shift_down(2).unwrap();
        assert_eq!(b, r.poly_i64(&[3, -1]));
        assert_eq!(b.shift_up(2), a);
        assert_eq!(
            r.poly_i64(&[0, 1]).shift_down(2),
            Err(SeriesError::NotDivisible(2))
        );
    }

    #[test]
    fn shift_down_tops_up_with_zeros() {
        let r = ring(4);
        // t * t^3 = 0 after truncation, so (t^3 * 1).shift_down(1) cannot
        // recover degree 3 information; the top coefficient is zeroed.
        let a = r.monomial(3);
        assert_eq!(a.shift_down(1).unwrap(), r.monomial(2));
        assert_eq!(a.shift_up(1), r.zero());
    }

    #[test]
    fn divisibility_by_t_only_reads_the_constant_term() {
        for n in [2, 5, 16, 32] {
            let r = ring(n);
            assert!(r.t().divisible_by_t());
            assert!(!r.poly_i64(&[2, 9]).divisible_by_t());
            assert!(r.zero().divisible_by_t());
        }
    }

    #[test]
    fn rational_parsing_round_trips() {
        assert_eq!(
            parse_rational("-1/2").unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(2))
        );
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn wire_encoding_trims_trailing_zeros() {
        let r = ring(16);
        let s = r.from_coeff_strs(&["1", "-1/2"]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["1","-1/2"]"#);
        assert_eq!(serde_json::to_string(&r.zero()).unwrap(), r#"["0"]"#);
        // and back
        let back = r.from_coeff_strs(&["1", "-1/2"]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn from_coeffs_rejects_overlong_polynomials() {
        let r = ring(3);
        let c = |v: i64| Coeff::from_integer(BigInt::from(v));
        assert!(r.from_coeffs(&[c(1), c(0), c(0), c(0)]).is_ok());
        assert_eq!(
            r.from_coeffs(&[c(0), c(0), c(0), c(2)]),
            Err(SeriesError::TooManyCoefficients { len: 4, order: 3 })
        );
    }

    #[test]
    #[should_panic(expected = "truncation orders differ")]
    fn mixing_orders_panics() {
        let _ = ring(3).one() + ring(4).one();
    }

    #[test]
    fn display_is_polynomial_notation() {
        let r = ring(6);
        let s = r.from_coeff_strs(&["1", "-1/2", "0", "1"]).unwrap();
        assert_eq!(s.to_string(), "1 - 1/2*t + t^3");
        assert_eq!(r.zero().to_string(), "0");
        assert_eq!((-r.one()).to_string(), "-1");
    }
}
