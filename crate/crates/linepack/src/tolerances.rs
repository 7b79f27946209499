//! Numerical tolerances used across the crate.
//!
//! All arithmetic is binary64. Each constant states the comparison it guards
//! so that no module carries ad-hoc magic numbers.

/// Column norms may deviate from 1 by this much and still count as unit-norm.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// Smallest singular value below which a configuration is treated as
/// rank-deficient when building complements.
pub const RANK_TOL: f64 = 1e-10;

/// Frobenius residual `‖XX* − (n/d)I‖_F` allowed for a frame to pass as tight
/// where tightness is a precondition (Naimark complements, certificates).
pub const TIGHT_TOL: f64 = 1e-8;

/// Per-step slack floor for certificate inequality chains.
pub const CHAIN_SLACK: f64 = 1e-8;

/// Inner products with modulus below this are skipped when comparing complex
/// signs `z/|z|` (the sign of a vanishing product carries no information).
pub const SGN_DEAD_ZONE: f64 = 1e-12;

/// A feasibility certificate passes when the grid slack `f(x) − √x` never
/// drops below this.
pub const FEASIBILITY_SLACK: f64 = -1e-9;

/// Box constraints (`0 ≤ c1 ≤ k·c0`, `c2 ≤ 0`) must hold with at least this
/// margin.
pub const BOX_MARGIN: f64 = -1e-12;

/// Default grid size for feasibility certificates.
pub const DEFAULT_GRID: usize = 4097;

/// Unit-norm tolerance for parsed packing files (published coordinate dumps
/// carry few digits).
pub const PACKING_NORM_TOL: f64 = 1e-6;

/// Column corrections larger than this mark a parsed packing as renormalized.
pub const RENORM_REPORT_TOL: f64 = 1e-12;
