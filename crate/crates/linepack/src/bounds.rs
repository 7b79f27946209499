//! Closed-form coherence lower bounds for `n` lines in dimension `d`.
//!
//! Every function returns a lower bound on `μ(X) = max_{i<j} |⟨x_i,x_j⟩|`
//! valid for all unit-norm configurations of the given shape, or
//! not-applicable where the bound has no content. Not-applicable is a
//! distinct value (`None`), never zero, so the figure layer can omit points.

use serde::Serialize;
use thiserror::Error;

use crate::delsarte::{self, DelsarteError};
use crate::frames::Field;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("bounds need n > d ≥ 1 (d = {d}, n = {n})")]
    Dimension { d: usize, n: usize },
    #[error(transparent)]
    Lp(#[from] DelsarteError),
}

fn check_dims(d: usize, n: usize) -> Result<(), BoundError> {
    if d < 1 || n <= d {
        return Err(BoundError::Dimension { d, n });
    }
    Ok(())
}

/// Welch bound `μ ≥ √((n−d)/(d(n−1)))`; field-independent.
pub fn welch_bound(d: usize, n: usize) -> Result<f64, BoundError> {
    check_dims(d, n)?;
    let (df, nf) = (d as f64, n as f64);
    Ok(((nf - df) / (df * (nf - 1.0))).sqrt())
}

/// Duality bound through the polynomial Gram estimate: over `ℂ`,
///
/// ```text
/// μ ≥ (n−d)² / (n + (n² − nd − n)√(1+n−d) − (n−d)²),
/// ```
///
/// and over `ℝ` the same composition `n/(c0·n² − n)` with the real-field
/// `c0(k)`, `k = n−d`, solved from the tangency system (no closed form).
/// At `k = 1` both coincide with the Welch bound.
pub fn bukh_cox_bound(d: usize, n: usize, field: Field) -> Result<f64, BoundError> {
    check_dims(d, n)?;
    let (df, nf) = (d as f64, n as f64);
    match field {
        Field::Complex => {
            let k = nf - df;
            let denom = nf + (nf * nf - nf * df - nf) * (1.0 + k).sqrt() - k * k;
            Ok(k * k / denom)
        }
        Field::Real => {
            let gamma = delsarte::gram_one_norm_bound_bc(n - d, n, Field::Real)?;
            Ok(delsarte::lemma_coherence_floor(n, gamma)?)
        }
    }
}

/// Orthoplex bound `μ ≥ 1/√d`, applicable once `n` exceeds the maximal
/// number of equiangular lines: `d(d+1)/2` over `ℝ`, `d²` over `ℂ`.
pub fn orthoplex_bound(d: usize, n: usize, field: Field) -> Result<Option<f64>, BoundError> {
    orthoplex_bound_with_threshold(d, n, field, false)
}

/// Orthoplex bound with a togglable threshold convention: `inclusive`
/// accepts `n = gerzon_max(d)` as applicable as well.
pub fn orthoplex_bound_with_threshold(
    d: usize,
    n: usize,
    field: Field,
    inclusive: bool,
) -> Result<Option<f64>, BoundError> {
    check_dims(d, n)?;
    let threshold = gerzon_max(d, field);
    let applicable = if inclusive { n >= threshold } else { n > threshold };
    Ok(applicable.then(|| 1.0 / (d as f64).sqrt()))
}

/// Levenshtein bound: `μ² ≥ (3n − d² − 2d)/((n−d)(d+2))` over `ℝ` and
/// `μ² ≥ (2n − d² − d)/((n−d)(d+1))` over `ℂ`; not-applicable when the
/// right side is nonpositive.
pub fn levenshtein_bound(d: usize, n: usize, field: Field) -> Result<Option<f64>, BoundError> {
    check_dims(d, n)?;
    let (df, nf) = (d as f64, n as f64);
    let mu_sq = match field {
        Field::Real => (3.0 * nf - df * df - 2.0 * df) / ((nf - df) * (df + 2.0)),
        Field::Complex => (2.0 * nf - df * df - df) / ((nf - df) * (df + 1.0)),
    };
    Ok((mu_sq > 0.0).then(|| mu_sq.sqrt()))
}

/// Maximum number of equiangular lines: `d²` over `ℂ`, `d(d+1)/2` over `ℝ`.
pub fn gerzon_max(d: usize, field: Field) -> usize {
    match field {
        Field::Complex => d * d,
        Field::Real => d * (d + 1) / 2,
    }
}

/// All four bounds for one `(d, n, field)` with the best applicable value.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub n: usize,
    pub field: Field,
    pub welch: Option<f64>,
    pub bukh_cox: f64,
    pub orthoplex: Option<f64>,
    pub levenshtein: Option<f64>,
    /// Max over the applicable bounds.
    pub best: f64,
    /// First bound attaining `best` in the fixed order
    /// bukh_cox, welch, levenshtein, orthoplex (ties share values up to
    /// rounding, hence the fixed order).
    pub achiever: &'static str,
}

/// Ties between bounds that agree in exact arithmetic may differ by rounding;
/// anything within this of the max counts as attaining it.
const TIE_TOL: f64 = 1e-12;

pub fn bound_report(d: usize, n: usize, field: Field) -> Result<BoundReport, BoundError> {
    bound_report_with(d, n, field, false)
}

pub fn bound_report_with(
    d: usize,
    n: usize,
    field: Field,
    orthoplex_inclusive: bool,
) -> Result<BoundReport, BoundError> {
    check_dims(d, n)?;
    let welch = Some(welch_bound(d, n)?);
    let bukh_cox = bukh_cox_bound(d, n, field)?;
    let orthoplex = orthoplex_bound_with_threshold(d, n, field, orthoplex_inclusive)?;
    let levenshtein = levenshtein_bound(d, n, field)?;

    let ordered: [(&'static str, Option<f64>); 4] = [
        ("bukh_cox", Some(bukh_cox)),
        ("welch", welch),
        ("levenshtein", levenshtein),
        ("orthoplex", orthoplex),
    ];
    let best = ordered
        .iter()
        .filter_map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let achiever = ordered
        .iter()
        .find(|(_, v)| v.is_some_and(|v| v >= best - TIE_TOL))
        .map(|(name, _)| *name)
        .expect("bukh_cox is always applicable");

    Ok(BoundReport { d, n, field, welch, bukh_cox, orthoplex, levenshtein, best, achiever })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn welch_examples() {
        assert_abs_diff_eq!(welch_bound(6, 7).unwrap(), 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(welch_bound(6, 16).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert!(matches!(welch_bound(6, 6), Err(BoundError::Dimension { .. })));
    }

    #[test]
    fn welch_strictly_increasing_in_n() {
        // At d = 1 the bound is constantly 1; strict growth starts at d = 2.
        for n in 2..=256usize {
            assert_abs_diff_eq!(welch_bound(1, n).unwrap(), 1.0, epsilon = 1e-15);
        }
        for d in 2..=16usize {
            let mut prev = welch_bound(d, d + 1).unwrap();
            for n in (d + 2)..=256 {
                let next = welch_bound(d, n).unwrap();
                assert!(next > prev, "d={d} n={n}");
                prev = next;
            }
        }
    }

    #[test]
    fn bukh_cox_complex_examples() {
        assert_abs_diff_eq!(
            bukh_cox_bound(6, 8, Field::Complex).unwrap(),
            4.0 / (4.0 + 8.0 * 3f64.sqrt()),
            epsilon = 1e-12
        );
    }

    #[test]
    fn bukh_cox_equals_welch_at_k1() {
        for d in 1..=40usize {
            for field in [Field::Real, Field::Complex] {
                let bc = bukh_cox_bound(d, d + 1, field).unwrap();
                let w = welch_bound(d, d + 1).unwrap();
                assert!((bc - w).abs() <= 1e-12, "d={d} {field}: {bc} vs {w}");
            }
        }
    }

    #[test]
    fn bukh_cox_real_frozen_value() {
        // Real k=2 tangency triple is (2/3, 7/9, −4/9), so the d=6, n=8 bound
        // is 8/((2/3)·64 − 8) = 3/13.
        assert_abs_diff_eq!(
            bukh_cox_bound(6, 8, Field::Real).unwrap(),
            3.0 / 13.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn composition_identities() {
        // Both coherence bounds must equal the duality floor of their Gram
        // bound: μ_bound(d, n) = n/(γ(n−d, n) − n).
        for d in 1..=20usize {
            for n in (d + 1)..=(d + 20) {
                let k = n - d;
                let gamma_bc = crate::delsarte::gram_one_norm_bound_bc(k, n, Field::Complex)
                    .unwrap();
                let via_floor = crate::delsarte::lemma_coherence_floor(n, gamma_bc).unwrap();
                let direct = bukh_cox_bound(d, n, Field::Complex).unwrap();
                assert!((via_floor - direct).abs() <= 1e-12, "bc d={d} n={n}");

                let gamma_w = crate::delsarte::gram_one_norm_bound_welch(k, n).unwrap();
                let via_floor_w = crate::delsarte::lemma_coherence_floor(n, gamma_w).unwrap();
                let direct_w = welch_bound(d, n).unwrap();
                assert!((via_floor_w - direct_w).abs() <= 1e-12, "welch d={d} n={n}");
            }
        }
    }

    #[test]
    fn orthoplex_thresholds() {
        assert_abs_diff_eq!(
            orthoplex_bound(6, 22, Field::Real).unwrap().unwrap(),
            1.0 / 6f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(orthoplex_bound(6, 21, Field::Real).unwrap().is_none());
        assert!(orthoplex_bound_with_threshold(6, 21, Field::Real, true)
            .unwrap()
            .is_some());
        assert_abs_diff_eq!(
            orthoplex_bound(2, 5, Field::Complex).unwrap().unwrap(),
            1.0 / 2f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(orthoplex_bound(2, 4, Field::Complex).unwrap().is_none());
    }

    #[test]
    fn levenshtein_examples() {
        assert_abs_diff_eq!(
            levenshtein_bound(6, 40, Field::Real).unwrap().unwrap(),
            (72.0f64 / 272.0).sqrt(),
            epsilon = 1e-12
        );
        assert!(levenshtein_bound(6, 16, Field::Real).unwrap().is_none());
        assert_abs_diff_eq!(
            levenshtein_bound(2, 4, Field::Complex).unwrap().unwrap(),
            1.0 / 3f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn gerzon_values() {
        assert_eq!(gerzon_max(3, Field::Complex), 9);
        assert_eq!(gerzon_max(6, Field::Real), 21);
        assert_eq!(gerzon_max(1, Field::Complex), 1);
    }

    #[test]
    fn report_achievers() {
        let r = bound_report(6, 8, Field::Real).unwrap();
        assert_eq!(r.achiever, "bukh_cox");
        assert_abs_diff_eq!(r.best, 3.0 / 13.0, epsilon = 1e-12);
        assert!(r.orthoplex.is_none());
        assert!(r.levenshtein.is_none());

        // k = 1 tie between bukh_cox and welch resolves to bukh_cox.
        let r = bound_report(6, 7, Field::Real).unwrap();
        assert_eq!(r.achiever, "bukh_cox");
        assert_abs_diff_eq!(r.best, 1.0 / 6.0, epsilon = 1e-12);

        let r = bound_report(6, 22, Field::Real).unwrap();
        assert_eq!(r.achiever, "orthoplex");
        assert_abs_diff_eq!(r.best, 0.4082482905, epsilon = 1e-9);
    }
}
