//! Coherence bounds and certificates for line packings.
//!
//! A line packing is a set of `n` unit vectors in `ℝ^d` or `ℂ^d`, judged by its
//! coherence `μ(X) = max_{i<j} |⟨x_i, x_j⟩|` — the smaller, the better spread
//! the lines. This crate computes the classical lower bounds on coherence
//! (Welch, orthoplex, Levenshtein) together with the duality-based bound that
//! controls coherence through the entrywise 1-norm of Gram matrices of tight
//! frames in the complementary dimension, and it certifies the inequality
//! chains behind those bounds on concrete configurations.
//!
//! The pieces:
//!
//! * [`frames`] — vector configurations, Gram reports, tightness and
//!   equiangularity predicates, orthogonal/Naimark complements, and the
//!   equality-achieving constructions (simplex ETFs, SICs).
//! * [`bounds`] — closed-form coherence lower bounds for `(d, n, field)` and
//!   the best-bound selector.
//! * [`delsarte`] — the degree-2 polynomial linear program: special
//!   polynomials for both fields, the tangency system for `(c0, c1, c2)`,
//!   feasibility certification, numeric minimization of `c0`, and the two
//!   Gram 1-norm theorems.
//! * [`certify`] — numerical certificates replaying the inequality chains and
//!   diagnosing equality conditions.
//! * [`ingest`] — parsing, caching, and fetching of packing files.
//! * [`cli`] — the batch front end behind the `linepack` binary.
//!
//! Start with the runnable programs in `examples/`: each one exercises a
//! major capability end to end.

pub mod bounds;
pub mod certify;
pub mod cli;
pub mod delsarte;
pub mod frames;
pub mod ingest;
mod lp3;
pub mod tolerances;

pub use bounds::{bound_report, BoundReport};
pub use certify::{lemma_certificate, LemmaCertificate};
pub use delsarte::{minimize_c0, tangency_solve, LpSolution};
pub use frames::{construct_sic, construct_simplex_etf, Field, GramReport, VectorConfiguration};
pub use ingest::{parse_packing, PackingRecord};
