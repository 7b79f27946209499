//! Vector configurations and their Gram analysis.
//!
//! A [`VectorConfiguration`] is a `d×n` complex matrix whose columns are the
//! vectors of a packing. Real configurations are carried as complex arrays
//! with vanishing imaginary parts plus a field tag: one code path, and the
//! field only changes which bounds and polynomials apply downstream.
//!
//! Frame vocabulary: `X` is a `c`-tight frame when `XX* = cI`; `T(d,n)` is the
//! set of `(n/d)`-tight frames of `n` vectors in dimension `d`; a unit-norm
//! configuration is equiangular when all pairwise `|⟨x_i,x_j⟩|` coincide; an
//! ETF is both at once.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::tolerances::{RANK_TOL, TIGHT_TOL, UNIT_NORM_TOL};

/// Scalar field of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(format!("unknown field `{other}` (expected real or complex)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("expected {expected} scalar entries for a {d}x{n} configuration, got {got}")]
    EntryCount {
        d: usize,
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimensions must be positive (d = {d}, n = {n})")]
    Empty { d: usize, n: usize },
    #[error("operation needs n > d (d = {d}, n = {n})")]
    Dimension { d: usize, n: usize },
    #[error("operation needs at least two vectors (n = {n})")]
    TooFewVectors { n: usize },
    #[error("columns are not unit-norm (max deviation {max_dev:.3e})")]
    NotUnitNorm { max_dev: f64 },
    #[error("configuration is rank-deficient (smallest singular value {sigma_min:.3e})")]
    RankDeficient { sigma_min: f64 },
    #[error("configuration is not a tight frame (residual {residual:.3e})")]
    NotTight { residual: f64 },
    #[error("no built-in SIC construction for k = {k} (supported: 2, 3)")]
    UnsupportedSic { k: usize },
    #[error("column {index} has norm {norm:.3e}, cannot normalize")]
    ZeroColumn { index: usize, norm: f64 },
    #[error("real-field configuration has a non-real entry (|Im| = {max_imag:.3e})")]
    NotReal { max_imag: f64 },
}

/// A `d×n` configuration of vectors over `ℝ` or `ℂ`, columns as vectors.
#[derive(Debug, Clone)]
pub struct VectorConfiguration {
    field: Field,
    d: usize,
    n: usize,
    entries: DMatrix<Complex64>,
    unit_norm: bool,
    tol_unit: f64,
}

/// Gram matrix `G = X*X` plus the derived packing statistics.
#[derive(Debug, Clone)]
pub struct GramReport {
    /// The `n×n` Gram matrix itself (Hermitian up to rounding).
    pub gram: DMatrix<Complex64>,
    /// `max_{i<j} |G_ij|`; zero when `n = 1`.
    pub coherence: f64,
    /// Entrywise 1-norm `Σ_{ij} |G_ij|`.
    pub one_norm: f64,
    /// `‖XX* − (n/d)I‖_F`.
    pub tightness_residual: f64,
    /// `max − min` of the off-diagonal moduli; zero when `n < 2`.
    pub equiangular_spread: f64,
    /// `tr(G) = Σ_i ‖x_i‖²`.
    pub trace: f64,
}

impl VectorConfiguration {
    /// Builds a complex configuration from column-major scalars (vector `j`
    /// occupies entries `j·d .. (j+1)·d`).
    pub fn from_complex_columns(
        d: usize,
        n: usize,
        data: &[Complex64],
    ) -> Result<Self, FrameError> {
        if d == 0 || n == 0 {
            return Err(FrameError::Empty { d, n });
        }
        if data.len() != d * n {
            return Err(FrameError::EntryCount {
                d,
                n,
                expected: d * n,
                got: data.len(),
            });
        }
        let entries = DMatrix::from_column_slice(d, n, data);
        Ok(Self::assemble(Field::Complex, entries))
    }

    /// Builds a real configuration from column-major scalars.
    pub fn from_real_columns(d: usize, n: usize, data: &[f64]) -> Result<Self, FrameError> {
        if d == 0 || n == 0 {
            return Err(FrameError::Empty { d, n });
        }
        if data.len() != d * n {
            return Err(FrameError::EntryCount {
                d,
                n,
                expected: d * n,
                got: data.len(),
            });
        }
        let complex: Vec<Complex64> = data.iter().map(|&re| Complex64::new(re, 0.0)).collect();
        let entries = DMatrix::from_column_slice(d, n, &complex);
        Ok(Self::assemble(Field::Real, entries))
    }

    /// Wraps an existing matrix. Real-field matrices must have (numerically)
    /// vanishing imaginary parts; dust below `1e-9` is zeroed.
    pub fn from_matrix(field: Field, entries: DMatrix<Complex64>) -> Result<Self, FrameError> {
        let (d, n) = entries.shape();
        if d == 0 || n == 0 {
            return Err(FrameError::Empty { d, n });
        }
        let mut entries = entries;
        if field == Field::Real {
            let max_imag = entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if max_imag > 1e-9 {
                return Err(FrameError::NotReal { max_imag });
            }
            for z in entries.iter_mut() {
                z.im = 0.0;
            }
        }
        Ok(Self::assemble(field, entries))
    }

    fn assemble(field: Field, entries: DMatrix<Complex64>) -> Self {
        let (d, n) = entries.shape();
        let tol_unit = UNIT_NORM_TOL;
        let max_dev = column_norms(&entries)
            .into_iter()
            .map(|nrm| (nrm - 1.0).abs())
            .fold(0.0, f64::max);
        VectorConfiguration {
            field,
            d,
            n,
            entries,
            unit_norm: max_dev <= tol_unit,
            tol_unit,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension (rows).
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of vectors (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Whether all columns are unit-norm within the stored tolerance.
    pub fn is_unit_norm(&self) -> bool {
        self.unit_norm
    }

    pub fn unit_tol(&self) -> f64 {
        self.tol_unit
    }

    pub fn column_norms(&self) -> Vec<f64> {
        column_norms(&self.entries)
    }

    fn require_unit_norm(&self) -> Result<(), FrameError> {
        if self.unit_norm {
            Ok(())
        } else {
            let max_dev = self
                .column_norms()
                .into_iter()
                .map(|nrm| (nrm - 1.0).abs())
                .fold(0.0, f64::max);
            Err(FrameError::NotUnitNorm { max_dev })
        }
    }

    /// Returns a copy with every column scaled to unit norm.
    pub fn normalized(&self) -> Result<Self, FrameError> {
        let mut entries = self.entries.clone();
        for (j, nrm) in self.column_norms().into_iter().enumerate() {
            if nrm <= 1e-300 {
                return Err(FrameError::ZeroColumn { index: j, norm: nrm });
            }
            let scale = Complex64::new(1.0 / nrm, 0.0);
            for i in 0..self.d {
                entries[(i, j)] *= scale;
            }
        }
        Ok(Self::assemble(self.field, entries))
    }

    /// Gram matrix `X*X`.
    pub fn gram(&self) -> DMatrix<Complex64> {
        self.entries.adjoint() * &self.entries
    }

    /// Computes the Gram matrix together with coherence, entrywise 1-norm,
    /// tightness residual, equiangularity spread, and trace.
    pub fn gram_report(&self) -> GramReport {
        let gram = self.gram();
        let n = self.n;
        let mut coherence = 0.0_f64;
        let mut one_norm = 0.0_f64;
        let mut off_max = 0.0_f64;
        let mut off_min = f64::INFINITY;
        let mut trace = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let m = gram[(i, j)].norm();
                one_norm += m;
                if i == j {
                    trace += gram[(i, j)].re;
                } else {
                    off_max = off_max.max(m);
                    off_min = off_min.min(m);
                }
            }
        }
        if n > 1 {
            coherence = off_max;
        }
        let equiangular_spread = if n > 1 { off_max - off_min } else { 0.0 };
        GramReport {
            gram,
            coherence,
            one_norm,
            tightness_residual: self.tightness_residual(),
            equiangular_spread,
            trace,
        }
    }

    /// `‖XX* − (n/d)I‖_F`.
    pub fn tightness_residual(&self) -> f64 {
        let c = self.n as f64 / self.d as f64;
        let mut frame_op = &self.entries * self.entries.adjoint();
        for i in 0..self.d {
            frame_op[(i, i)] -= Complex64::new(c, 0.0);
        }
        frame_op.norm()
    }

    /// Tests `XX* = (n/d)I` within `tol`; the residual is always returned.
    pub fn is_tight(&self, tol: f64) -> (bool, f64) {
        let residual = self.tightness_residual();
        (residual <= tol, residual)
    }

    /// Tests whether all off-diagonal Gram moduli agree within `tol`.
    /// Requires a unit-norm configuration with at least two vectors.
    pub fn is_equiangular(&self, tol: f64) -> Result<(bool, f64), FrameError> {
        if self.n < 2 {
            return Err(FrameError::TooFewVectors { n: self.n });
        }
        self.require_unit_norm()?;
        let spread = self.gram_report().equiangular_spread;
        Ok((spread <= tol, spread))
    }

    /// Equiangular tight frame test: tight and equiangular at tolerance `tol`.
    pub fn is_etf(&self, tol: f64) -> Result<bool, FrameError> {
        let (tight, _) = self.is_tight(tol);
        let (equi, _) = self.is_equiangular(tol)?;
        Ok(tight && equi)
    }

    /// Builds `Y ∈ T(k, n)`, `k = n − d`, whose rows span the orthogonal
    /// complement of the row space of `X`, scaled so that `YY* = (n/k)I`.
    /// Consequently `XY* = 0`. `Y` is unique only up to a left unitary; every
    /// quantity consumed downstream (`‖Y*Y‖₁`, certificates) is invariant
    /// under that freedom.
    pub fn orthogonal_tight_complement(&self) -> Result<Self, FrameError> {
        self.orthogonal_tight_complement_with(RANK_TOL)
    }

    /// Same as [`Self::orthogonal_tight_complement`] with an explicit rank
    /// tolerance on the smallest singular value.
    pub fn orthogonal_tight_complement_with(&self, rank_tol: f64) -> Result<Self, FrameError> {
        if self.n <= self.d {
            return Err(FrameError::Dimension { d: self.d, n: self.n });
        }
        let k = self.n - self.d;

        // Rank check through the d×d frame operator: σ_min(X)² = λ_min(XX*).
        let frame_op = &self.entries * self.entries.adjoint();
        let eig = SymmetricEigen::new(frame_op);
        let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let sigma_min = lambda_min.max(0.0).sqrt();
        if sigma_min <= rank_tol {
            return Err(FrameError::RankDeficient { sigma_min });
        }

        // Kernel projector P = I − QQ* with X* = QR; its unit eigenvectors
        // form an orthonormal basis of ker X.
        let qr = self.entries.adjoint().qr();
        let q = qr.q();
        let mut projector = DMatrix::<Complex64>::identity(self.n, self.n);
        projector -= &q * q.adjoint();
        let peig = SymmetricEigen::new(projector);

        let mut kernel_idx: Vec<usize> = (0..self.n)
            .filter(|&i| peig.eigenvalues[i] > 0.5)
            .collect();
        kernel_idx.sort_unstable();
        debug_assert_eq!(kernel_idx.len(), k);

        let scale = (self.n as f64 / k as f64).sqrt();
        let mut y = DMatrix::<Complex64>::zeros(k, self.n);
        for (row, &idx) in kernel_idx.iter().enumerate() {
            for col in 0..self.n {
                y[(row, col)] = peig.eigenvectors[(col, idx)].conj() * scale;
            }
        }
        Self::from_matrix(self.field, y)
    }

    /// Naimark complement of a unit-norm tight frame: the unit-norm
    /// `Y ∈ T(k, n)` with `Y*Y = (n/k)(I − (d/n)X*X)`, so that
    /// `⟨y_i,y_j⟩ = −(d/k)⟨x_i,x_j⟩` off the diagonal.
    pub fn naimark_complement(&self) -> Result<Self, FrameError> {
        if self.n <= self.d {
            return Err(FrameError::Dimension { d: self.d, n: self.n });
        }
        self.require_unit_norm()?;
        let (tight, residual) = self.is_tight(TIGHT_TOL);
        if !tight {
            return Err(FrameError::NotTight { residual });
        }
        // For tight X the row-space projector is (d/n)X*X, so the scaled
        // kernel basis realizes the Naimark Gram identity directly.
        self.orthogonal_tight_complement()
    }

    /// Horizontal concatenation of `m` copies; an `(n/d)`-tight input becomes
    /// `(mn/d)`-tight and column norms are preserved exactly.
    pub fn concat_copies(&self, m: usize) -> Result<Self, FrameError> {
        if m == 0 {
            return Err(FrameError::Empty { d: self.d, n: 0 });
        }
        let mut entries = DMatrix::<Complex64>::zeros(self.d, self.n * m);
        for copy in 0..m {
            for j in 0..self.n {
                for i in 0..self.d {
                    entries[(i, copy * self.n + j)] = self.entries[(i, j)];
                }
            }
        }
        Self::from_matrix(self.field, entries)
    }
}

fn column_norms(entries: &DMatrix<Complex64>) -> Vec<f64> {
    (0..entries.ncols())
        .map(|j| entries.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// The `d+1` vertices of a regular simplex, centered and projected into `ℝ^d`:
/// a unit-norm ETF with all `|⟨x_i,x_j⟩| = 1/d`.
///
/// Realized through the Helmert basis of the hyperplane orthogonal to
/// `(1,…,1)`, so the columns come out exact up to one square root each.
pub fn construct_simplex_etf(d: usize, field: Field) -> Result<VectorConfiguration, FrameError> {
    if d == 0 {
        return Err(FrameError::Empty { d, n: 0 });
    }
    let n = d + 1;
    let mut h = DMatrix::<Complex64>::zeros(d, n);
    for m in 1..=d {
        let s = 1.0 / ((m * (m + 1)) as f64).sqrt();
        for j in 0..m {
            h[(m - 1, j)] = Complex64::new(s, 0.0);
        }
        h[(m - 1, m)] = Complex64::new(-(m as f64) * s, 0.0);
    }
    // Helmert columns all have norm √(d/(d+1)).
    let scale = Complex64::new((n as f64 / d as f64).sqrt(), 0.0);
    VectorConfiguration::from_matrix(field, h * scale)
}

/// Hard-coded symmetric informationally complete configurations: `k²` unit
/// vectors in `ℂ^k` with all pairwise `|⟨z_i,z_j⟩|² = 1/(k+1)`, tight with
/// `ZZ* = kI`. Available for `k ∈ {2, 3}`; existence for general `k` is open.
pub fn construct_sic(k: usize) -> Result<VectorConfiguration, FrameError> {
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    match k {
        2 => {
            let a = 1.0 / 3f64.sqrt();
            let b = (2.0f64 / 3.0).sqrt();
            let mut cols: Vec<Complex64> = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
            for e in 0..3u32 {
                cols.push(Complex64::new(a, 0.0));
                cols.push(omega.powu(e) * b);
            }
            VectorConfiguration::from_complex_columns(2, 4, &cols)
        }
        3 => {
            let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let one = Complex64::new(1.0, 0.0);
            let mut cols: Vec<Complex64> = Vec::with_capacity(27);
            for e in 0..3u32 {
                let w = omega.powu(e);
                cols.extend_from_slice(&[zero, s, -w * s]);
            }
            for e in 0..3u32 {
                let w = omega.powu(e);
                cols.extend_from_slice(&[-w * s, zero, s * one]);
            }
            for e in 0..3u32 {
                let w = omega.powu(e);
                cols.extend_from_slice(&[s * one, -w * s, zero]);
            }
            VectorConfiguration::from_complex_columns(3, 9, &cols)
        }
        other => Err(FrameError::UnsupportedSic { k: other }),
    }
}

/// Random configuration with independent standard-normal entries, columns
/// normalized to unit length. Deterministic given the RNG.
pub fn random_unit_configuration<R: Rng + ?Sized>(
    field: Field,
    d: usize,
    n: usize,
    rng: &mut R,
) -> VectorConfiguration {
    assert!(d > 0 && n > 0, "dimensions must be positive");
    let entries = DMatrix::<Complex64>::from_fn(d, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex {
            rng.sample(StandardNormal)
        } else {
            0.0
        };
        Complex64::new(re, im)
    });
    VectorConfiguration::from_matrix(field, entries)
        .expect("shape is valid by construction")
        .normalized()
        .expect("normal columns are nonzero almost surely")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mercedes() -> VectorConfiguration {
        let r3 = 3f64.sqrt();
        VectorConfiguration::from_real_columns(
            2,
            3,
            &[1.0, 0.0, -0.5, r3 / 2.0, -0.5, -r3 / 2.0],
        )
        .unwrap()
    }

    fn identity(d: usize) -> VectorConfiguration {
        let m = DMatrix::<Complex64>::identity(d, d);
        VectorConfiguration::from_matrix(Field::Real, m).unwrap()
    }

    #[test]
    fn gram_report_identity() {
        let rep = identity(3).gram_report();
        assert_eq!(rep.coherence, 0.0);
        assert_abs_diff_eq!(rep.one_norm, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.tightness_residual, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.trace, 3.0, epsilon = 1e-15);
    }

    #[test]
    fn gram_report_mercedes() {
        let rep = mercedes().gram_report();
        assert_abs_diff_eq!(rep.coherence, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.one_norm, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.tightness_residual, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.equiangular_spread, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_report_sic2() {
        let rep = construct_sic(2).unwrap().gram_report();
        assert_abs_diff_eq!(rep.coherence, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(rep.one_norm, 4.0 + 4.0 * 3f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn gram_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_unit_configuration(Field::Complex, 4, 9, &mut rng);
        let g = x.gram();
        let herm_residual = (&g - g.adjoint()).norm() / g.norm();
        assert!(herm_residual <= 1e-12);
    }

    #[test]
    fn tightness_cases() {
        assert!(identity(4).is_tight(1e-12).0);
        assert!(mercedes().is_tight(1e-10).0);
        let x =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let (tight, residual) = x.is_tight(1e-10);
        assert!(!tight);
        assert_abs_diff_eq!(residual, 2f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn equiangularity_cases() {
        assert!(identity(3).is_equiangular(1e-12).unwrap().0);
        let (equi, spread) = mercedes().is_equiangular(1e-12).unwrap();
        assert!(equi);
        assert_abs_diff_eq!(spread, 0.0, epsilon = 1e-12);

        let s = 1.0 / 2f64.sqrt();
        let x =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 0.0, 1.0, s, s]).unwrap();
        let (equi, spread) = x.is_equiangular(1e-10).unwrap();
        assert!(!equi);
        assert_abs_diff_eq!(spread, s, epsilon = 1e-12);

        let single = VectorConfiguration::from_real_columns(2, 1, &[1.0, 0.0]).unwrap();
        assert!(matches!(
            single.is_equiangular(1e-10),
            Err(FrameError::TooFewVectors { n: 1 })
        ));
    }

    #[test]
    fn etf_cases() {
        assert!(mercedes().is_etf(1e-10).unwrap());
        assert!(construct_sic(2).unwrap().is_etf(1e-10).unwrap());
        let x =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(!x.is_etf(1e-10).unwrap());
    }

    #[test]
    fn complement_small_example() {
        let s = 1.0 / 2f64.sqrt();
        let x =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 0.0, 1.0, s, s]).unwrap();
        let y = x.orthogonal_tight_complement().unwrap();
        assert_eq!(y.d(), 1);
        assert_eq!(y.n(), 3);
        let cross = (x.matrix() * y.matrix().adjoint()).norm();
        assert!(cross <= 1e-10);
        let expected = 3.0 * (1.0 + s).powi(2);
        assert_abs_diff_eq!(y.gram_report().one_norm, expected, epsilon = 1e-9);
    }

    #[test]
    fn complement_of_mercedes_is_all_ones_row() {
        let y = mercedes().orthogonal_tight_complement().unwrap();
        for j in 0..3 {
            assert_abs_diff_eq!(y.matrix()[(0, j)].norm(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(y.gram_report().one_norm, 9.0, epsilon = 1e-9);
    }

    #[test]
    fn complement_rejects_bad_inputs() {
        let flat =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            flat.orthogonal_tight_complement(),
            Err(FrameError::RankDeficient { .. })
        ));
        assert!(matches!(
            identity(3).orthogonal_tight_complement(),
            Err(FrameError::Dimension { .. })
        ));
    }

    #[test]
    fn complement_invariants_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
            let d = 2 + trial % 5;
            let n = d + 1 + trial % 6;
            let x = random_unit_configuration(field, d, n, &mut rng);
            let y = x.orthogonal_tight_complement().unwrap();
            let k = n - d;
            let cross = (x.matrix() * y.matrix().adjoint()).norm();
            assert!(cross <= 1e-9 * x.matrix().norm() * y.matrix().norm());
            let mut res = y.matrix() * y.matrix().adjoint();
            for i in 0..k {
                res[(i, i)] -= Complex64::new(n as f64 / k as f64, 0.0);
            }
            assert!(res.norm() <= 1e-9);
        }
    }

    #[test]
    fn naimark_of_mercedes_flips_signs() {
        let x = mercedes();
        let y = x.naimark_complement().unwrap();
        assert!(y.is_unit_norm());
        let gx = x.gram();
        let gy = y.gram();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    // |⟨y_i,y_j⟩| = (d/k)|⟨x_i,x_j⟩| = 2 · 1/2 with opposite sign
                    assert_abs_diff_eq!(gy[(i, j)].norm(), 1.0, epsilon = 1e-10);
                    assert!(gy[(i, j)].re * gx[(i, j)].re < 0.0);
                }
            }
        }
    }

    #[test]
    fn naimark_of_sic2_is_etf() {
        let y = construct_sic(2).unwrap().naimark_complement().unwrap();
        assert_eq!(y.d(), 2);
        assert_eq!(y.n(), 4);
        assert!(y.is_etf(1e-9).unwrap());
        assert_abs_diff_eq!(
            y.gram_report().coherence,
            1.0 / 3f64.sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn naimark_preconditions() {
        assert!(matches!(
            identity(3).naimark_complement(),
            Err(FrameError::Dimension { .. })
        ));
        let s = 1.0 / 2f64.sqrt();
        let loose =
            VectorConfiguration::from_real_columns(2, 3, &[1.0, 0.0, 0.0, 1.0, s, s]).unwrap();
        assert!(matches!(
            loose.naimark_complement(),
            Err(FrameError::NotTight { .. })
        ));
    }

    #[test]
    fn naimark_twice_recovers_gram() {
        for x in [
            mercedes(),
            construct_sic(2).unwrap(),
            construct_simplex_etf(4, Field::Real).unwrap(),
        ] {
            let y = x.naimark_complement().unwrap();
            let z = y.naimark_complement().unwrap();
            let diff = (x.gram() - z.gram()).norm();
            assert!(diff <= 1e-8, "gram mismatch {diff}");
        }
    }

    #[test]
    fn naimark_modulus_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (d, n) in [(2usize, 3usize), (3, 5), (2, 4)] {
            // Random tight unit-norm X is hard to sample directly; use an ETF
            // where available, otherwise a complement that happens to be
            // unit-norm is not guaranteed, so stick with constructions.
            let _ = &mut rng;
            let x = if (d, n) == (2, 3) {
                mercedes()
            } else if (d, n) == (2, 4) {
                construct_sic(2).unwrap()
            } else {
                continue;
            };
            let k = n - d;
            let y = x.naimark_complement().unwrap();
            let gx = x.gram();
            let gy = y.gram();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let expected = (d as f64 / k as f64) * gx[(i, j)].norm();
                        assert_abs_diff_eq!(gy[(i, j)].norm(), expected, epsilon = 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn simplex_etf_cases() {
        let two = construct_simplex_etf(1, Field::Real).unwrap();
        assert_eq!(two.n(), 2);
        assert_abs_diff_eq!(two.gram_report().coherence, 1.0, epsilon = 1e-12);

        let m = construct_simplex_etf(2, Field::Real).unwrap();
        assert_abs_diff_eq!(m.gram_report().coherence, 0.5, epsilon = 1e-12);
        assert!(m.is_etf(1e-10).unwrap());

        let seven = construct_simplex_etf(6, Field::Real).unwrap();
        assert!(seven.is_etf(1e-10).unwrap());
        assert_abs_diff_eq!(seven.gram_report().coherence, 1.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn sic_constructions() {
        let z2 = construct_sic(2).unwrap();
        assert!(z2.is_unit_norm());
        assert!(z2.is_tight(1e-12).0);
        let g = z2.gram();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_abs_diff_eq!(g[(i, j)].norm_sqr(), 1.0 / 3.0, epsilon = 1e-12);
                }
            }
        }

        let z3 = construct_sic(3).unwrap();
        assert!(z3.is_unit_norm());
        assert!(z3.is_tight(1e-12).0);
        let g = z3.gram();
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert_abs_diff_eq!(g[(i, j)].norm_sqr(), 0.25, epsilon = 1e-12);
                }
            }
        }

        assert!(matches!(construct_sic(4), Err(FrameError::UnsupportedSic { k: 4 })));
    }

    #[test]
    fn concat_copies_cases() {
        let z = construct_sic(2).unwrap();
        let same = z.concat_copies(1).unwrap();
        assert_eq!(same.matrix(), z.matrix());

        let y = z.concat_copies(2).unwrap();
        assert_eq!(y.n(), 8);
        assert!(y.is_tight(1e-10).0);
        assert_abs_diff_eq!(
            y.gram_report().one_norm,
            16.0 * (1.0 + 3f64.sqrt()),
            epsilon = 1e-9
        );

        let h = construct_sic(3).unwrap();
        assert_abs_diff_eq!(h.gram_report().one_norm, 45.0, epsilon = 1e-9);
    }

    proptest! {
        // Entrywise 1-norm of the Gram matrix is blind to column phases.
        #[test]
        fn one_norm_phase_invariant(seed in 0u64..512, phases in prop::collection::vec(0.0..std::f64::consts::TAU, 6)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_unit_configuration(Field::Complex, 3, 6, &mut rng);
            let mut rotated = x.matrix().clone();
            for (j, phi) in phases.iter().enumerate() {
                let u = Complex64::from_polar(1.0, *phi);
                for i in 0..3 {
                    rotated[(i, j)] *= u;
                }
            }
            let y = VectorConfiguration::from_matrix(Field::Complex, rotated).unwrap();
            let a = x.gram_report().one_norm;
            let b = y.gram_report().one_norm;
            prop_assert!((a - b).abs() <= 1e-10);
        }

        // Copies preserve column norms exactly and scale the tightness constant.
        #[test]
        fn concat_preserves_norms(seed in 0u64..512, m in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_unit_configuration(Field::Real, 3, 5, &mut rng);
            let y = x.concat_copies(m).unwrap();
            let norms_x = x.column_norms();
            let norms_y = y.column_norms();
            for j in 0..y.n() {
                prop_assert_eq!(norms_y[j], norms_x[j % x.n()]);
            }
        }
    }
}
