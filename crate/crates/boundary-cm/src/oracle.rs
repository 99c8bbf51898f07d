//! Brute-force homomorphism spaces, independent of the classification.
//!
//! A module map between two representations is a matrix per vertex
//! commuting with every arrow, in both the x and the y direction; over
//! Q[t]/(t^N) the y conditions are not implied by the x conditions
//! because t divides zero divisors, so both are imposed. Flattening the
//! unknown matrices into one vector turns the commutation conditions
//! into a linear system over the series ring, and the exact kernel
//! solver in [`crate::linalg`] lists generators of the solution module.
//!
//! On top of the raw spaces sit two decision routines. A rank-1 module
//! L_X is a split summand exactly when some map L_X -> M composed with
//! some map M -> L_X is an isomorphism; because composition at a single
//! vertex is a series whose constant term is bilinear in the constant
//! terms of the two maps, and torsion generators have constant term
//! zero, scanning the free generators of the two hom spaces decides this
//! ([`is_split_summand`]). [`decompose_exhaustive`] simply tries every
//! k-subset. Neither routine consults the divisibility classification,
//! which is the point: they cross-validate it.

use crate::cmmod::{build_rank1, QuiverRep};
use crate::combinat::{binomial, k_subsets, Rim};
use crate::linalg::SeriesMatrix;
use crate::series::Coeff;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {size} subsets exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: usize, limit: usize },
}

/// Hard cap on the number of subsets [`decompose_exhaustive`] will try.
pub const SEARCH_LIMIT: usize = 100_000;

/// One generator of a homomorphism space.
#[derive(Debug, Clone, PartialEq)]
pub struct HomGenerator {
    /// The map's matrix at each vertex.
    pub maps: Vec<SeriesMatrix>,
    /// Q-dimension of the cyclic module this generator spans.
    pub qdim: usize,
    /// True when the generator spans a free rank-1 summand of the space.
    pub free: bool,
}

/// The space of module maps between two representations, as generators
/// of a module over the series ring.
#[derive(Debug, Clone, PartialEq)]
pub struct HomSpace {
    pub generators: Vec<HomGenerator>,
}

impl HomSpace {
    /// Dimension over Q.
    pub fn dimension(&self) -> usize {
        self.generators.iter().map(|g| g.qdim).sum()
    }

    /// Constant-term vectors at one vertex of the free generators, the
    /// data that survives composition to degree zero.
    fn free_constant_columns(&self, vertex: usize) -> Vec<Vec<Coeff>> {
        self.generators
            .iter()
            .filter(|g| g.free)
            .map(|g| {
                let m = &g.maps[vertex];
                let mut flat = Vec::with_capacity(m.rows() * m.cols());
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        flat.push(m.at(i, j).constant_term().clone());
                    }
                }
                flat
            })
            .collect()
    }
}

/// Compute all module maps `from -> to` by exact linear algebra.
///
/// The unknowns are the entries of one matrix per vertex (rows indexed by
/// `to`, columns by `from`); each arrow contributes one block of
/// commutation equations per direction.
pub fn hom_space(from: &QuiverRep, to: &QuiverRep) -> HomSpace {
    assert_eq!(from.n(), to.n(), "representations on different cycles");
    assert_eq!(from.ring(), to.ring(), "representations over different rings");
    let n = from.n();
    let ring = from.ring();
    let ra = from.rank();
    let rb = to.rank();
    let per_vertex = rb * ra;
    let unknowns = n * per_vertex;
    let idx = |v: usize, i: usize, j: usize| v * per_vertex + i * ra + j;

    let mut system = SeriesMatrix::zero(ring, 2 * n * per_vertex, unknowns);
    let mut row = 0;
    for label in 1..=n {
        let src = from.source(label);
        let tgt = from.target(label);
        let ax = from.x(label);
        let ay = from.y(label);
        let bx = to.x(label);
        let by = to.y(label);
        for i in 0..rb {
            for j in 0..ra {
                // x direction: (B.x f_src)_{ij} = (f_tgt A.x)_{ij}.
                for k in 0..rb {
                    let coeff = bx.at(i, k);
                    if !coeff.is_zero() {
                        system.set(row, idx(src, k, j), coeff.clone());
                    }
                }
                for k in 0..ra {
                    let coeff = ax.at(k, j);
                    if !coeff.is_zero() {
                        let cur = system.at(row, idx(tgt, i, k)) - coeff;
                        system.set(row, idx(tgt, i, k), cur);
                    }
                }
                row += 1;
                // y direction: (B.y f_tgt)_{ij} = (f_src A.y)_{ij}.
                for k in 0..rb {
                    let coeff = by.at(i, k);
                    if !coeff.is_zero() {
                        system.set(row, idx(tgt, k, j), coeff.clone());
                    }
                }
                for k in 0..ra {
                    let coeff = ay.at(k, j);
                    if !coeff.is_zero() {
                        let cur = system.at(row, idx(src, i, k)) - coeff;
                        system.set(row, idx(src, i, k), cur);
                    }
                }
                row += 1;
            }
        }
    }

    let generators = system
        .kernel()
        .into_iter()
        .map(|g| {
            let maps = (0..n)
                .map(|v| {
                    let mut m = SeriesMatrix::zero(ring, rb, ra);
                    for i in 0..rb {
                        for j in 0..ra {
                            m.set(i, j, g.vector[idx(v, i, j)].clone());
                        }
                    }
                    m
                })
                .collect();
            HomGenerator {
                maps,
                qdim: g.qdim,
                free: g.free,
            }
        })
        .collect();
    HomSpace { generators }
}

/// Check one set of per-vertex matrices for commutation with every arrow.
pub fn is_module_map(from: &QuiverRep, to: &QuiverRep, maps: &[SeriesMatrix]) -> bool {
    (1..=from.n()).all(|label| {
        let src = from.source(label);
        let tgt = from.target(label);
        let x_ok = &(to.x(label) * &maps[src]) == &(&maps[tgt] * from.x(label));
        let y_ok = &(to.y(label) * &maps[tgt]) == &(&maps[src] * from.y(label));
        x_ok && y_ok
    })
}

/// Decide whether L_X is a split summand of the given representation, by
/// searching for maps in and out whose composite is invertible.
pub fn is_split_summand(rep: &QuiverRep, x: &Rim) -> bool {
    assert_eq!(rep.n(), x.n(), "rim and representation cycles differ");
    let lx = build_rank1(rep.ring(), x);
    let into = hom_space(&lx, rep);
    let e_cols = into.free_constant_columns(0);
    if e_cols.iter().all(|c| c.iter().all(|q| q.is_zero())) {
        // Every map in hits the radical, so no composite can be a unit.
        return false;
    }
    let out = hom_space(rep, &lx);
    let f_rows = out.free_constant_columns(0);
    f_rows.iter().any(|f| {
        e_cols.iter().any(|e| {
            let dot: Coeff = f.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
            !dot.is_zero()
        })
    })
}

/// Find every k-subset whose rank-1 module splits off, by trying all of
/// them. Refuses blatantly oversized searches.
pub fn decompose_exhaustive(rep: &QuiverRep, k: usize) -> Result<Vec<Rim>, OracleError> {
    let size = binomial(rep.n(), k);
    if size > SEARCH_LIMIT {
        return Err(OracleError::SearchSpaceTooLarge {
            size,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(k_subsets(rep.n(), k)
        .into_iter()
        .filter(|x| is_split_summand(rep, x))
        .collect())
}
