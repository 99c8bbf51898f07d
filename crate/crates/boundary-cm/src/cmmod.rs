//! Representations of the doubled cycle quiver and the two module families.
//!
//! The quiver has vertices 0..n-1 on a circle and, for each edge label i
//! in {1, ..., n}, a forward arrow x_i from vertex i-1 to vertex i and a
//! backward arrow y_i the other way (vertex n is vertex 0). A
//! representation assigns each vertex a free module over Q[t]/(t^N) of a
//! fixed rank and each arrow a matrix; matrices act on column vectors
//! from the left, so the composite along a path multiplies right to left.
//!
//! The algebra relations a representation must satisfy are checked by
//! [`QuiverRep::verify_relations`]: every x_i y_i and y_i x_i composite
//! equals multiplication by t, and the two ways around the whole circle
//! agree as x^k = y^{n-k} for the k determined by the module.
//!
//! Rank-1 modules are parametrized by a subset I of edge labels
//! ([`build_rank1`]): edges in I carry x = 1, y = t, edges outside carry
//! x = t, y = 1. Rank-2 modules come from a tight pair (I, J) and a
//! vector of 2r series parameters summing to zero ([`build_rank2`]); the
//! first basis vector spans a copy of L_J inside, and the quotient by it
//! is L_I.

use crate::combinat::{model_reduction, CombinatError, ModelReduction, Rim};
use crate::linalg::SeriesMatrix;
use crate::series::{Series, SeriesRing};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors from module construction and endomorphism propagation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmError {
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error("expected {expected} parameter entries for interlacing {r}, got {got}")]
    WrongEntryCount { expected: usize, got: usize, r: usize },
    #[error(
        "parameter entry {index} has degree {degree}, but degrees must stay below \
         half the truncation order {order}"
    )]
    EntryDegreeTooHigh {
        index: usize,
        degree: usize,
        order: usize,
    },
    #[error("parameter entries must sum to zero")]
    EntriesDoNotSumToZero,
    #[error("corner map is not admissible: its lower-left entry is not divisible by t")]
    CornerNotAdmissible,
    #[error("propagation condition fails at even model position {position}")]
    ConditionsViolated { position: usize },
}

/// A representation of the doubled n-cycle quiver with one fixed rank at
/// every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct QuiverRep {
    n: usize,
    rank: usize,
    ring: SeriesRing,
    /// x[i] is the matrix of x_{i+1} (edge labels are 1-based).
    x: Vec<SeriesMatrix>,
    y: Vec<SeriesMatrix>,
}

impl QuiverRep {
    fn new(n: usize, rank: usize, ring: SeriesRing, x: Vec<SeriesMatrix>, y: Vec<SeriesMatrix>) -> Self {
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        QuiverRep { n, rank, ring, x, y }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> SeriesRing {
        self.ring
    }

    /// Matrix of the forward arrow with the given 1-based edge label.
    pub fn x(&self, label: usize) -> &SeriesMatrix {
        assert!((1..=self.n).contains(&label), "edge label out of range");
        &self.x[label - 1]
    }

    /// Matrix of the backward arrow with the given 1-based edge label.
    pub fn y(&self, label: usize) -> &SeriesMatrix {
        assert!((1..=self.n).contains(&label), "edge label out of range");
        &self.y[label - 1]
    }

    /// Source vertex of x with this label (and target of the matching y).
    pub fn source(&self, label: usize) -> usize {
        (label - 1) % self.n
    }

    /// Target vertex of x with this label.
    pub fn target(&self, label: usize) -> usize {
        label % self.n
    }

    /// Label of the forward arrow leaving a vertex.
    pub fn x_label_out_of(&self, vertex: usize) -> usize {
        vertex % self.n + 1
    }

    /// Label of the backward arrow leaving a vertex.
    pub fn y_label_out_of(&self, vertex: usize) -> usize {
        if vertex == 0 {
            self.n
        } else {
            vertex
        }
    }

    /// Block-diagonal sum of two representations on the same quiver.
    pub fn direct_sum(&self, other: &QuiverRep) -> QuiverRep {
        assert_eq!(self.n, other.n, "summands live on different cycles");
        assert_eq!(self.ring, other.ring, "summands over different rings");
        let rank = self.rank + other.rank;
        let block = |a: &SeriesMatrix, b: &SeriesMatrix| {
            let mut m = SeriesMatrix::zero(self.ring, rank, rank);
            for i in 0..self.rank {
                for j in 0..self.rank {
                    m.set(i, j, a.at(i, j).clone());
                }
            }
            for i in 0..other.rank {
                for j in 0..other.rank {
                    m.set(self.rank + i, self.rank + j, b.at(i, j).clone());
                }
            }
            m
        };
        let x = (0..self.n).map(|i| block(&self.x[i], &other.x[i])).collect();
        let y = (0..self.n).map(|i| block(&self.y[i], &other.y[i])).collect();
        QuiverRep::new(self.n, rank, self.ring, x, y)
    }

    /// Composite of the forward arrows along `steps` edges out of `vertex`.
    fn x_path(&self, vertex: usize, steps: usize) -> SeriesMatrix {
        let mut acc = SeriesMatrix::identity(self.ring, self.rank);
        let mut v = vertex;
        for _ in 0..steps {
            let label = self.x_label_out_of(v);
            acc = self.x(label) * &acc;
            v = self.target(label);
        }
        acc
    }

    /// Composite of the backward arrows along `steps` edges out of `vertex`.
    fn y_path(&self, vertex: usize, steps: usize) -> SeriesMatrix {
        let mut acc = SeriesMatrix::identity(self.ring, self.rank);
        let mut v = vertex;
        for _ in 0..steps {
            let label = self.y_label_out_of(v);
            acc = self.y(label) * &acc;
            v = self.source(label);
        }
        acc
    }

    /// Check the defining relations of the boundary algebra.
    ///
    /// Both local relations (each x_i y_i and y_i x_i composite is t) and
    /// the global one (going k steps forward equals going n-k steps
    /// backward) are verified; k is inferred from the full forward circle,
    /// which must be t^{n-k} times the identity.
    pub fn verify_relations(&self) -> RelationReport {
        let ring = self.ring;
        let t_id = SeriesMatrix::scalar(ring, self.rank, &ring.t());
        let mut failures = Vec::new();

        for v in 0..self.n {
            let xo = self.x_label_out_of(v);
            let yo = self.y_label_out_of(v);
            // Loop at v through the next vertex, then through the previous.
            if &(self.y(xo) * self.x(xo)) != &t_id {
                failures.push(format!("y_{xo} x_{xo} is not t at vertex {v}"));
            }
            if &(self.x(yo) * self.y(yo)) != &t_id {
                failures.push(format!("x_{yo} y_{yo} is not t at vertex {v}"));
            }
        }
        let commutation_ok = failures.is_empty();

        let circle = self.x_path(0, self.n);
        let inferred_k = scalar_power_of_t(&circle, self.rank)
            .and_then(|a| self.n.checked_sub(a))
            .map(|k| vec![k])
            .unwrap_or_else(|| {
                if circle.is_zero() {
                    // Truncation swallowed the circle; fall back to a scan.
                    (0..=self.n).collect()
                } else {
                    failures.push("full forward circle is not a power of t times the identity".into());
                    Vec::new()
                }
            });

        let mut found_k = None;
        for &k in &inferred_k {
            let ok = (0..self.n).all(|v| {
                let fwd = self.x_path(v, k);
                let bwd = self.y_path(v, self.n - k);
                fwd == bwd
            });
            if ok {
                found_k = Some(k);
                break;
            }
        }
        if found_k.is_none() && !inferred_k.is_empty() {
            failures.push(format!(
                "power relation x^k = y^(n-k) fails for k in {inferred_k:?}"
            ));
        }

        RelationReport {
            commutation_ok,
            inferred_k: found_k,
            failures,
        }
    }
}

/// If m = t^a * Id, return a.
fn scalar_power_of_t(m: &SeriesMatrix, rank: usize) -> Option<usize> {
    let diag = m.at(0, 0);
    let a = diag.valuation()?;
    let target = m.ring().monomial(a);
    if diag != &target {
        return None;
    }
    for i in 0..rank {
        for j in 0..rank {
            let want_diag = i == j;
            let e = m.at(i, j);
            if want_diag && e != &target {
                return None;
            }
            if !want_diag && !e.is_zero() {
                return None;
            }
        }
    }
    Some(a)
}

/// Outcome of the relation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    /// All local xy = yx = t relations hold.
    pub commutation_ok: bool,
    /// The k for which the power relation x^k = y^{n-k} holds, when one
    /// exists.
    pub inferred_k: Option<usize>,
    /// Human-readable descriptions of everything that failed.
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn is_valid(&self) -> bool {
        self.commutation_ok && self.inferred_k.is_some() && self.failures.is_empty()
    }
}

impl Serialize for QuiverRep {
    /// Export form: `{n, rank, truncation, x: [matrix; n], y: [matrix; n]}`
    /// with matrices in edge-label order.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QuiverRep", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("truncation", &self.ring.order())?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

/// The rank-1 module L_I: edges in I carry x = 1 and y = t, edges outside
/// carry x = t and y = 1.
pub fn build_rank1(ring: SeriesRing, i_rim: &Rim) -> QuiverRep {
    let n = i_rim.n();
    let one = SeriesMatrix::identity(ring, 1);
    let t = SeriesMatrix::scalar(ring, 1, &ring.t());
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for label in 1..=n {
        if i_rim.contains(label) {
            x.push(one.clone());
            y.push(t.clone());
        } else {
            x.push(t.clone());
            y.push(one.clone());
        }
    }
    QuiverRep::new(n, 1, ring, x, y)
}

/// A rank-2 module built from a tight pair, keeping the construction data
/// alongside the raw representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTwoModule {
    rep: QuiverRep,
    i_rim: Rim,
    j_rim: Rim,
    b: Vec<Series>,
    model: ModelReduction,
}

impl RankTwoModule {
    pub fn rep(&self) -> &QuiverRep {
        &self.rep
    }

    pub fn i_rim(&self) -> &Rim {
        &self.i_rim
    }

    pub fn j_rim(&self) -> &Rim {
        &self.j_rim
    }

    /// The 2r series parameters, one per difference edge in model order.
    pub fn b(&self) -> &[Series] {
        &self.b
    }

    pub fn model(&self) -> &ModelReduction {
        &self.model
    }

    pub fn ring(&self) -> SeriesRing {
        self.rep.ring()
    }

    /// Sums of consecutive parameter pairs: p_j pairs the entries of the
    /// j-th difference edge pair (one from I \ J, one from J \ I).
    pub fn pair_sums(&self) -> Vec<Series> {
        self.b.chunks(2).map(|c| &c[0] + &c[1]).collect()
    }

    /// Partial sums B_m = b_1 + ... + b_m for m in 0..=2r (1-based m).
    pub fn partial_sums(&self) -> Vec<Series> {
        let mut acc = self.ring().zero();
        let mut out = Vec::with_capacity(self.b.len() + 1);
        out.push(acc.clone());
        for b in &self.b {
            acc = &acc + b;
            out.push(acc.clone());
        }
        out
    }
}

/// Build the rank-2 module of a tight pair (I, J) with parameters b.
///
/// `b` must have one entry per difference edge (2r of them, in the cyclic
/// order of [`ModelReduction::position_map`]), the entries must sum to
/// zero, and each entry's polynomial degree must stay below half the
/// truncation order so that later exact divisions by t lose nothing.
///
/// In the resulting representation the span of the first basis vector at
/// every vertex is a subrepresentation isomorphic to L_J, with quotient
/// L_I.
pub fn build_rank2(
    ring: SeriesRing,
    i_rim: &Rim,
    j_rim: &Rim,
    b: &[Series],
) -> Result<RankTwoModule, CmError> {
    let model = model_reduction(i_rim, j_rim)?;
    let r = model.r();
    if b.len() != 2 * r {
        return Err(CmError::WrongEntryCount {
            expected: 2 * r,
            got: b.len(),
            r,
        });
    }
    let mut sum = ring.zero();
    for (index, entry) in b.iter().enumerate() {
        assert_eq!(entry.order(), ring.order(), "parameter from a different ring");
        if let Some(degree) = entry.degree() {
            if 2 * degree >= ring.order() {
                return Err(CmError::EntryDegreeTooHigh {
                    index,
                    degree,
                    order: ring.order(),
                });
            }
        }
        sum = &sum + entry;
    }
    if !sum.is_zero() {
        return Err(CmError::EntriesDoNotSumToZero);
    }

    let n = i_rim.n();
    let one = ring.one();
    let t = ring.t();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for label in 1..=n {
        let (xm, ym) = match model.position_of(label) {
            Some(m) => {
                let bm = &b[m];
                if m % 2 == 0 {
                    // Difference edge from I \ J: upper-left tracks the
                    // submodule copy of L_J (x = t there), lower-right the
                    // L_I quotient (x = 1).
                    (
                        SeriesMatrix::from_rows(
                            ring,
                            vec![vec![t.clone(), bm.clone()], vec![ring.zero(), one.clone()]],
                        ),
                        SeriesMatrix::from_rows(
                            ring,
                            vec![vec![one.clone(), -bm], vec![ring.zero(), t.clone()]],
                        ),
                    )
                } else {
                    // Difference edge from J \ I: the roles swap.
                    (
                        SeriesMatrix::from_rows(
                            ring,
                            vec![vec![one.clone(), bm.clone()], vec![ring.zero(), t.clone()]],
                        ),
                        SeriesMatrix::from_rows(
                            ring,
                            vec![vec![t.clone(), -bm], vec![ring.zero(), one.clone()]],
                        ),
                    )
                }
            }
            None => {
                if model.common().contains(&label) {
                    (
                        SeriesMatrix::identity(ring, 2),
                        SeriesMatrix::scalar(ring, 2, &t),
                    )
                } else {
                    (
                        SeriesMatrix::scalar(ring, 2, &t),
                        SeriesMatrix::identity(ring, 2),
                    )
                }
            }
        };
        x.push(xm);
        y.push(ym);
    }

    Ok(RankTwoModule {
        rep: QuiverRep::new(n, 2, ring, x, y),
        i_rim: i_rim.clone(),
        j_rim: j_rim.clone(),
        b: b.to_vec(),
        model,
    })
}

/// A module endomorphism: one square matrix per vertex, commuting with
/// every arrow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Endomorphism {
    /// phi[v] acts on the fiber at vertex v.
    pub phi: Vec<SeriesMatrix>,
}

impl Endomorphism {
    /// Verify commutation with every arrow of the representation.
    pub fn commutes_with(&self, rep: &QuiverRep) -> bool {
        (1..=rep.n()).all(|label| {
            let s = rep.source(label);
            let t = rep.target(label);
            let x_ok = &(rep.x(label) * &self.phi[s]) == &(&self.phi[t] * rep.x(label));
            let y_ok = &(rep.y(label) * &self.phi[t]) == &(&self.phi[s] * rep.y(label));
            x_ok && y_ok
        })
    }

    /// phi composed with itself equals phi at every vertex.
    pub fn is_idempotent(&self) -> bool {
        self.phi.iter().all(|m| &(m * m) == m)
    }

    /// The complementary idempotent 1 - phi.
    pub fn complement(&self, rep: &QuiverRep) -> Endomorphism {
        let id = SeriesMatrix::identity(rep.ring(), rep.rank());
        Endomorphism {
            phi: self.phi.iter().map(|m| &id - m).collect(),
        }
    }
}

/// Propagate an endomorphism of a rank-2 module around the circle from a
/// single corner value.
///
/// The corner is the would-be value of the endomorphism at the base
/// vertex, the target of the last difference edge. Writing the corner as
/// [[a, b], [c, d]], admissibility requires t | c; the quotient u = c/t
/// and the partial sums B_m of the parameters then determine the value at
/// the vertex after the m-th difference edge:
///
/// after an odd difference edge (from I \ J),
///   [[a + B_m u, t b + (d - a) B_m - B_m^2 u], [u, d - B_m u]];
/// after an even one (from J \ I),
///   [[a + B_m u, b + ((d - a) B_m - B_m^2 u)/t], [c, d - B_m u]],
///
/// where the division by t must be exact (checked; failure reports the
/// offending even position). Vertices along scalar stretches copy their
/// predecessor. Since the parameters sum to zero, the walk closes up on
/// the corner it started from.
pub fn endo_from_corner(
    module: &RankTwoModule,
    corner: &SeriesMatrix,
) -> Result<Endomorphism, CmError> {
    assert_eq!(corner.rows(), 2, "corner must be 2 x 2");
    assert_eq!(corner.cols(), 2, "corner must be 2 x 2");
    let ring = module.ring();
    let (a, b, c, d) = (
        corner.at(0, 0).clone(),
        corner.at(0, 1).clone(),
        corner.at(1, 0).clone(),
        corner.at(1, 1).clone(),
    );
    let u = c.shift_down(1).map_err(|_| CmError::CornerNotAdmissible)?;
    let sums = module.partial_sums();
    let d_minus_a = &d - &a;

    let value_after = |m: usize| -> Result<SeriesMatrix, CmError> {
        // m is the 1-based count of difference edges passed so far.
        let bm = &sums[m];
        let top_left = &a + &(bm * &u);
        let bottom_right = &d - &(bm * &u);
        let drift = &(&d_minus_a * bm) - &(&(bm * bm) * &u);
        if m % 2 == 1 {
            let top_right = &b.shift_up(1) + &drift;
            Ok(SeriesMatrix::from_rows(
                ring,
                vec![vec![top_left, top_right], vec![u.clone(), bottom_right]],
            ))
        } else {
            let scaled = drift
                .shift_down(1)
                .map_err(|_| CmError::ConditionsViolated { position: m })?;
            let top_right = &b + &scaled;
            Ok(SeriesMatrix::from_rows(
                ring,
                vec![vec![top_left, top_right], vec![c.clone(), bottom_right]],
            ))
        }
    };

    let rep = module.rep();
    let n = rep.n();
    let model = module.model();
    let two_r = model.position_map().len();
    let base = rep.target(model.label_at(two_r - 1));

    let mut phi: Vec<Option<SeriesMatrix>> = vec![None; n];
    let mut current = corner.clone();
    let mut vertex = base;
    for _ in 0..n {
        let label = rep.x_label_out_of(vertex);
        if let Some(m0) = model.position_of(label) {
            // Difference edges appear in cyclic order starting after the
            // base, so m0 + 1 difference edges have been crossed.
            current = value_after(m0 + 1)?;
        }
        vertex = rep.target(label);
        phi[vertex] = Some(current.clone());
    }
    Ok(Endomorphism {
        phi: phi.into_iter().map(|m| m.expect("walk covers every vertex")).collect(),
    })
}
