//! Exact arithmetic for rank-1 and rank-2 Cohen-Macaulay modules over the
//! boundary algebra of the Grassmannian Gr(k, n).
//!
//! The boundary algebra is presented by the doubled n-cycle quiver with
//! arrows x_i and y_i on each edge, subject to xy = yx and x^k = y^{n-k};
//! the central element t = xy turns every module into a module over the
//! power series ring in t, which this crate truncates to Q[t]/(t^N) so
//! that all computations are exact.
//!
//! What lives where:
//!
//! * [`series`]: the coefficient ring Q[t]/(t^N).
//! * [`linalg`]: matrices over it and exact kernel computation.
//! * [`combinat`]: k-subsets of the cycle, interlacing, tightness, and
//!   the reduction of a tight pair to its model data.
//! * [`cmmod`]: quiver representations, the rank-1 modules L_I, the
//!   rank-2 family of a tight pair, relation checking, and endomorphism
//!   propagation from a corner.
//! * [`classify`]: the divisibility test deciding indecomposability of a
//!   rank-2 module, explicit splitting witnesses, and the enumeration of
//!   decomposable parameter patterns.
//! * [`oracle`]: brute-force homomorphism spaces by exact linear algebra,
//!   used to cross-validate the classification.
//! * [`render`]: lattice diagrams of pairs as ASCII or SVG.

pub mod classify;
pub mod cmmod;
pub mod combinat;
pub mod linalg;
pub mod oracle;
pub mod render;
pub mod series;

pub use classify::{classify, decompose, DecompositionResult, SplitWitness};
pub use cmmod::{build_rank1, build_rank2, Endomorphism, QuiverRep, RankTwoModule};
pub use combinat::{interlacing_number, is_tight, model_reduction, Rim};
pub use linalg::SeriesMatrix;
pub use series::{Coeff, Series, SeriesRing};

/// Default truncation order used by the command-line tools.
pub const DEFAULT_TRUNCATION: usize = 16;
