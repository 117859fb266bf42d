//! Finite-field toolkit for the permutation trinomials
//! `a x + b x^q + c x^(2q-1)` over F_{q^2}.
//!
//! * [`gf`]: F_q, the tower F_{q^2}, Frobenius, trace, norm, squareness.
//! * [`trinomial`]: evaluation, brute-force and criterion-based permutation
//!   tests, the projective set of permutation triples, trace/norm resolvents.
//! * [`hermite`]: power sums of the trinomial, directly and by the
//!   combinatorial closed formula.
//! * [`lemma_sums`]: generalized binomials and the binomial-sum lemmas.
//! * [`gnq`]: the polynomials `g_{n,q}` and desirable triples.
//! * [`symbolic`]: exact multivariate polynomials for identity checking.

pub mod gf;
pub mod gnq;
pub mod hermite;
pub mod lemma_sums;
pub mod symbolic;
pub mod trinomial;

pub use gf::{ExtKind, FieldArith, FieldCtx, Fq2Elem, FqElem, GfError, QuadExtCtx};
