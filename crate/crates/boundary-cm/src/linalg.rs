//! Matrices over Q[t]/(t^N) and exact kernel computation.
//!
//! Q[t]/(t^N) is a chain ring: every element is a unit times a power of t,
//! and every ideal is (t^v). That makes a Smith-style reduction possible
//! with nothing but valuation comparisons, no fraction-field tricks:
//! pick the entry of globally minimal valuation as pivot, since it divides
//! every other remaining entry. The reduction diagonalizes the matrix by
//! invertible column operations (tracked) and row operations (which do not
//! move the kernel, so untracked), leaving pivots t^{v_1}, ..., t^{v_s}.
//!
//! The kernel of diag(t^{v_1}, ..) is read off directly: a pivot column of
//! valuation v contributes the annihilator t^{N-v} (a torsion generator of
//! Q-dimension v), and each pivotless column contributes a free generator
//! of Q-dimension N. Mapping back through the tracked column operations
//! gives generators for the kernel of the original matrix.

use crate::series::{Series, SeriesRing};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::ops::{Add, Mul, Neg, Sub};

/// Dense matrix with entries in one truncated series ring.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix {
    ring: SeriesRing,
    rows: usize,
    cols: usize,
    data: Vec<Series>,
}

impl SeriesMatrix {
    /// All-zero matrix of the given shape.
    pub fn zero(ring: SeriesRing, rows: usize, cols: usize) -> Self {
        SeriesMatrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(ring: SeriesRing, n: usize) -> Self {
        Self::scalar(ring, n, &ring.one())
    }

    /// s times the identity.
    pub fn scalar(ring: SeriesRing, n: usize, s: &Series) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    /// Build from explicit rows.
    ///
    /// # Panics
    /// Panics on ragged rows or entries from a different ring.
    pub fn from_rows(ring: SeriesRing, rows: Vec<Vec<Series>>) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged rows in matrix literal");
            for e in row {
                assert_eq!(e.order(), ring.order(), "entry from a different ring");
                data.push(e.clone());
            }
        }
        SeriesMatrix {
            ring,
            rows: rows.len(),
            cols: ncols,
            data,
        }
    }

    pub fn ring(&self) -> SeriesRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Series {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Series) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        assert_eq!(v.order(), self.ring.order(), "entry from a different ring");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Matrix-vector product (vector as a column).
    pub fn mul_vec(&self, v: &[Series]) -> Vec<Series> {
        assert_eq!(v.len(), self.cols, "vector length does not match columns");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    let e = self.at(i, j);
                    if !e.is_zero() && !v[j].is_zero() {
                        acc = acc + e * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Scale every entry by s.
    pub fn scale(&self, s: &Series) -> Self {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = &*e * s;
        }
        out
    }

    /// Generators of { v : self * v = 0 } as an R-module, R = Q[t]/(t^N).
    pub fn kernel(&self) -> Vec<KernelGenerator> {
        let n = self.ring.order();
        let mut m = self.clone();
        // Column-operation tracker: original * tracker = current.
        let mut tracker = SeriesMatrix::identity(self.ring, self.cols);
        let mut row_active = vec![true; self.rows];
        let mut col_active = vec![true; self.cols];
        // (column, pivot valuation)
        let mut pivots: Vec<(usize, usize)> = Vec::new();

        loop {
            // Globally minimal valuation among active entries.
            let mut best: Option<(usize, usize, usize)> = None;
            for i in (0..self.rows).filter(|&i| row_active[i]) {
                for j in (0..self.cols).filter(|&j| col_active[j]) {
                    if let Some(v) = m.at(i, j).valuation() {
                        if best.map_or(true, |(_, _, bv)| v < bv) {
                            best = Some((i, j, v));
                            if v == 0 {
                                break;
                            }
                        }
                    }
                }
                if matches!(best, Some((_, _, 0))) {
                    break;
                }
            }
            let Some((pi, pj, pv)) = best else { break };

            // Normalize the pivot column so the pivot entry becomes t^pv.
            let unit_inv = m
                .at(pi, pj)
                .shift_down(pv)
                .expect("pivot has the claimed valuation")
                .invert()
                .expect("shifted pivot is a unit by minimality");
            for i in 0..self.rows {
                let e = m.at(i, pj);
                if !e.is_zero() {
                    m.set(i, pj, e * &unit_inv);
                }
            }
            for i in 0..self.cols {
                let e = tracker.at(i, pj);
                if !e.is_zero() {
                    tracker.set(i, pj, e * &unit_inv);
                }
            }

            // Clear the pivot row: every active entry is divisible by t^pv.
            for j in (0..self.cols).filter(|&j| col_active[j] && j != pj) {
                let e = m.at(pi, j);
                if e.is_zero() {
                    continue;
                }
                let factor = e
                    .shift_down(pv)
                    .expect("row entries are divisible by the minimal valuation");
                for i in 0..self.rows {
                    let delta = m.at(i, pj) * &factor;
                    m.set(i, j, m.at(i, j) - &delta);
                }
                for i in 0..self.cols {
                    let delta = tracker.at(i, pj) * &factor;
                    tracker.set(i, j, tracker.at(i, j) - &delta);
                }
            }

            // Clear the pivot column by row operations. Other columns of the
            // pivot row are already zero, so only this column changes; the
            // kernel is untouched by row operations, so nothing is tracked.
            for i in (0..self.rows).filter(|&i| row_active[i] && i != pi) {
                let e = m.at(i, pj);
                if e.is_zero() {
                    continue;
                }
                let factor = e
                    .shift_down(pv)
                    .expect("column entries are divisible by the minimal valuation");
                let delta = m.at(pi, pj) * &factor;
                m.set(i, pj, m.at(i, pj) - &delta);
            }

            row_active[pi] = false;
            col_active[pj] = false;
            pivots.push((pj, pv));
        }

        let mut gens = Vec::new();
        for j in 0..self.cols {
            let column = |scale: Option<usize>| -> Vec<Series> {
                (0..self.cols)
                    .map(|i| match scale {
                        Some(d) => tracker.at(i, j).shift_up(d),
                        None => tracker.at(i, j).clone(),
                    })
                    .collect()
            };
            if col_active[j] {
                gens.push(KernelGenerator {
                    vector: column(None),
                    qdim: n,
                    free: true,
                });
            } else {
                let &(_, v) = pivots.iter().find(|&&(c, _)| c == j).unwrap();
                if v > 0 {
                    // t^v x = 0 forces x into t^{N-v} R.
                    gens.push(KernelGenerator {
                        vector: column(Some(n - v)),
                        qdim: v,
                        free: false,
                    });
                }
            }
        }
        gens
    }
}

/// One generator of a kernel, with the Q-dimension of the cyclic module
/// it spans.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGenerator {
    pub vector: Vec<Series>,
    /// dim_Q of R * vector inside the kernel.
    pub qdim: usize,
    /// True when the generator spans a free rank-1 summand.
    pub free: bool,
}

/// Total Q-dimension of a kernel from its generators.
pub fn total_qdim(gens: &[KernelGenerator]) -> usize {
    gens.iter().map(|g| g.qdim).sum()
}

fn check_shapes_eq(a: &SeriesMatrix, b: &SeriesMatrix) {
    assert_eq!(
        (a.rows, a.cols),
        (b.rows, b.cols),
        "matrix shapes differ"
    );
    assert_eq!(a.ring, b.ring, "matrices from different rings");
}

impl Add for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn add(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        check_shapes_eq(self, rhs);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = &*a + b;
        }
        out
    }
}

impl Sub for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn sub(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        check_shapes_eq(self, rhs);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = &*a - b;
        }
        out
    }
}

impl Mul for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        assert_eq!(self.ring, rhs.ring, "matrices from different rings");
        let mut out = SeriesMatrix::zero(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn neg(self) -> SeriesMatrix {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = -&*e;
        }
        out
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for SeriesMatrix {
            type Output = SeriesMatrix;
            fn $method(self, rhs: SeriesMatrix) -> SeriesMatrix {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&SeriesMatrix> for SeriesMatrix {
            type Output = SeriesMatrix;
            fn $method(self, rhs: &SeriesMatrix) -> SeriesMatrix {
                $trait::$method(&self, rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl Serialize for SeriesMatrix {
    /// Nested arrays: rows of serialized series.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<&Series> = (0..self.cols).map(|j| self.at(i, j)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}
