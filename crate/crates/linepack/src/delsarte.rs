//! Degree-2 polynomial linear programming for Gram-matrix 1-norms.
//!
//! For an `(n/k)`-tight frame `Y` of `n` vectors in dimension `k`, the
//! entrywise 1-norm `‖Y*Y‖₁` admits two upper bounds:
//!
//! * the Cauchy–Schwarz route, `n + √(n(n−1)(n²/k − n))`, attained exactly by
//!   equiangular tight frames;
//! * the polynomial route `c0·n²`, where `(c0, c1, c2)` is any feasible point
//!   of the LP
//!
//!   ```text
//!   minimize  c0
//!   s.t.      f(x) = c0·Q0(x) + c1·Q1(x) + c2·Q2(x)
//!             0 ≤ c1 ≤ k·c0,  c2 ≤ 0,
//!             f(x) ≥ √x  for all x ∈ [0, 1],
//!   ```
//!
//!   with `Q0 = 1`, `Q1 = x − 1/k`, and a field-dependent quadratic `Q2`
//!   that is positive-definite on the corresponding projective space. The
//!   tangency triple — forcing `f` to touch `√x` at `x* = 1/(k+1)` (complex)
//!   or `1/(k+2)` (real) and meet it at `x = 1` — is feasible and appears to
//!   be optimal; [`minimize_c0`] checks that numerically.
//!
//! Both routes combine with the coherence duality `μ(X) ≥ n/(γ(k,n) − n)` to
//! produce the bounds in [`crate::bounds`].

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::frames::{
    construct_sic, construct_simplex_etf, random_unit_configuration, Field, FrameError,
};
use crate::lp3::{self, Halfspace};
use crate::tolerances::{BOX_MARGIN, DEFAULT_GRID, FEASIBILITY_SLACK};

#[derive(Debug, Error)]
pub enum DelsarteError {
    #[error("parameters must satisfy n ≥ k ≥ 1 (k = {k}, n = {n})")]
    Dimension { k: usize, n: usize },
    #[error("tangency system is numerically singular (residual {residual:.3e})")]
    SingularSystem { residual: f64 },
    #[error("solved triple is infeasible (min slack {min_slack:.3e})")]
    InfeasibleTriple { min_slack: f64 },
    #[error("discretized LP failed to converge after {rounds} refinement rounds")]
    ConvergenceFailure { rounds: usize },
    #[error("coherence floor needs gamma_upper > n (gamma_upper = {gamma_upper}, n = {n})")]
    Domain { gamma_upper: f64, n: usize },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// The special polynomials `Q0, Q1, Q2` for one `(k, field)` pair.
///
/// `Q0 = 1` and `Q1 = x − 1/k` for both fields; the quadratic is
/// `x² − 4x/(k+2) + 2/((k+1)(k+2))` over `ℂ` and
/// `x² − 6x/(k+4) + 3/((k+2)(k+4))` over `ℝ`.
#[derive(Debug, Clone, Copy)]
pub struct PolynomialTriple {
    pub field: Field,
    pub k: usize,
    /// Coefficient of `x` in `Q2`.
    pub q2_linear: f64,
    /// Constant term of `Q2`.
    pub q2_constant: f64,
}

impl PolynomialTriple {
    pub fn q0(&self, _x: f64) -> f64 {
        1.0
    }

    pub fn q1(&self, x: f64) -> f64 {
        x - 1.0 / self.k as f64
    }

    pub fn q2(&self, x: f64) -> f64 {
        x * x + self.q2_linear * x + self.q2_constant
    }

    pub fn q2_deriv(&self, x: f64) -> f64 {
        2.0 * x + self.q2_linear
    }

    /// `f(x) = c0 + c1·Q1(x) + c2·Q2(x)`.
    pub fn eval(&self, c: [f64; 3], x: f64) -> f64 {
        c[0] + c[1] * self.q1(x) + c[2] * self.q2(x)
    }

    pub fn eval_deriv(&self, c: [f64; 3], x: f64) -> f64 {
        c[1] + c[2] * self.q2_deriv(x)
    }

    /// Tangency abscissa: `1/(k+1)` over `ℂ`, `1/(k+2)` over `ℝ`.
    pub fn x_star(&self) -> f64 {
        match self.field {
            Field::Complex => 1.0 / (self.k as f64 + 1.0),
            Field::Real => 1.0 / (self.k as f64 + 2.0),
        }
    }
}

/// Builds the polynomial triple for dimension `k ≥ 1`.
pub fn q_polys(k: usize, field: Field) -> PolynomialTriple {
    assert!(k >= 1, "polynomial dimension must be at least 1");
    let kf = k as f64;
    let (q2_linear, q2_constant) = match field {
        Field::Complex => (-4.0 / (kf + 2.0), 2.0 / ((kf + 1.0) * (kf + 2.0))),
        Field::Real => (-6.0 / (kf + 4.0), 3.0 / ((kf + 2.0) * (kf + 4.0))),
    };
    PolynomialTriple { field, k, q2_linear, q2_constant }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpSource {
    Tangency,
    Minimized,
}

/// One checked LP side constraint.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub satisfied: bool,
    pub margin: f64,
}

/// Grid evidence that `(c0, c1, c2)` is feasible.
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityCertificate {
    /// Number of grid points actually checked (requested size plus the forced
    /// points `{0, x*, 1}`).
    pub grid_size: usize,
    /// `min_x f(x) − √x` over the grid.
    pub min_slack: f64,
    pub argmin_x: f64,
    pub checked_constraints: Vec<ConstraintCheck>,
    pub pass: bool,
}

/// A solved LP triple with its provenance and feasibility evidence.
#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub field: Field,
    pub k: usize,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub x_star: f64,
    pub source: LpSource,
    pub feasibility: FeasibilityCertificate,
}

/// Chebyshev-spaced points on `[0, 1]` (endpoints included) augmented with
/// the forced abscissas, sorted and deduplicated.
fn chebyshev_grid(size: usize, forced: &[f64]) -> Vec<f64> {
    assert!(size >= 3, "grid needs at least 3 points");
    let mut grid: Vec<f64> = (0..size)
        .map(|j| 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / (size as f64 - 1.0)).cos()))
        .collect();
    grid.extend_from_slice(forced);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

fn solve_3x3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(&m);
    if d.abs() <= 1e-14 {
        return None;
    }
    let mut out = [0.0f64; 3];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        out[col] = det(&mc) / d;
    }
    Some(out)
}

/// Memoized tangency triples keyed by `(k, field)`; insert-once under a lock
/// so concurrent readers are safe.
fn tangency_cache() -> &'static Mutex<HashMap<(usize, Field), [f64; 3]>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Field), [f64; 3]>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Raw tangency coefficients without the certificate; cached per `(k, field)`.
pub(crate) fn tangency_triple(k: usize, field: Field) -> Result<[f64; 3], DelsarteError> {
    if k < 1 {
        return Err(DelsarteError::Dimension { k, n: 0 });
    }
    if let Some(c) = tangency_cache().lock().unwrap().get(&(k, field)) {
        return Ok(*c);
    }
    let p = q_polys(k, field);
    let xs = p.x_star();
    let sq = xs.sqrt();
    let m = [
        [1.0, p.q1(xs), p.q2(xs)],
        [1.0, p.q1(1.0), p.q2(1.0)],
        [0.0, 1.0, p.q2_deriv(xs)],
    ];
    let rhs = [sq, 1.0, 1.0 / (2.0 * sq)];
    let c = solve_3x3(m, rhs).ok_or(DelsarteError::SingularSystem { residual: f64::INFINITY })?;
    let mut residual = 0.0f64;
    for row in 0..3 {
        let lhs = m[row][0] * c[0] + m[row][1] * c[1] + m[row][2] * c[2];
        residual = residual.max((lhs - rhs[row]).abs());
    }
    if residual > 1e-10 {
        return Err(DelsarteError::SingularSystem { residual });
    }
    tangency_cache().lock().unwrap().insert((k, field), c);
    Ok(c)
}

/// Solves the tangency system `f(x*) = √x*`, `f(1) = 1`, `f′(x*) = 1/(2√x*)`
/// for `(c0, c1, c2)` and attaches a feasibility certificate at the default
/// grid. The system is well-conditioned for every `k ≥ 1`; at `k = 1` it
/// returns `c0 = 1` because `x = 1` is a root of both `Q1` and `Q2`.
pub fn tangency_solve(k: usize, field: Field) -> Result<LpSolution, DelsarteError> {
    let c = tangency_triple(k, field)?;
    let feasibility = verify_feasible(c[0], c[1], c[2], k, field, DEFAULT_GRID);
    if !feasibility.pass {
        return Err(DelsarteError::InfeasibleTriple { min_slack: feasibility.min_slack });
    }
    Ok(LpSolution {
        field,
        k,
        c0: c[0],
        c1: c[1],
        c2: c[2],
        x_star: q_polys(k, field).x_star(),
        source: LpSource::Tangency,
        feasibility,
    })
}

/// Checks the box constraints exactly and `f(x) ≥ √x` on a Chebyshev grid of
/// `grid_size` points augmented with `{0, x*, 1}`. The certificate passes
/// when the grid slack stays above `−1e−9` and every box margin above
/// `−1e−12`.
pub fn verify_feasible(
    c0: f64,
    c1: f64,
    c2: f64,
    k: usize,
    field: Field,
    grid_size: usize,
) -> FeasibilityCertificate {
    let p = q_polys(k, field);
    let xs = p.x_star();
    let grid = chebyshev_grid(grid_size.max(3), &[0.0, xs, 1.0]);
    let c = [c0, c1, c2];

    let mut min_slack = f64::INFINITY;
    let mut argmin_x = 0.0;
    for &x in &grid {
        let slack = p.eval(c, x) - x.sqrt();
        if slack < min_slack {
            min_slack = slack;
            argmin_x = x;
        }
    }

    let checks = vec![
        ConstraintCheck { name: "c1_nonneg", satisfied: c1 >= BOX_MARGIN, margin: c1 },
        ConstraintCheck {
            name: "c1_le_k_c0",
            satisfied: k as f64 * c0 - c1 >= BOX_MARGIN,
            margin: k as f64 * c0 - c1,
        },
        ConstraintCheck { name: "c2_nonpos", satisfied: -c2 >= BOX_MARGIN, margin: -c2 },
    ];
    let pass = min_slack >= FEASIBILITY_SLACK && checks.iter().all(|c| c.satisfied);
    FeasibilityCertificate {
        grid_size: grid.len(),
        min_slack,
        argmin_x,
        checked_constraints: checks,
        pass,
    }
}

/// Minimizes `c0` over the discretized LP, then re-verifies on an 8× finer
/// grid; on failure the grid is refined and the solve repeated, at most three
/// times.
pub fn minimize_c0(k: usize, field: Field, grid_size: usize) -> Result<LpSolution, DelsarteError> {
    if k < 1 {
        return Err(DelsarteError::Dimension { k, n: 0 });
    }
    assert!(grid_size >= 65, "minimization grid must have at least 65 points");
    let p = q_polys(k, field);
    let xs = p.x_star();
    let kf = k as f64;

    let mut size = grid_size;
    for round in 0..=3 {
        let grid = chebyshev_grid(size, &[0.0, xs, 1.0]);
        let mut cons: Vec<Halfspace> = grid
            .iter()
            .map(|&x| Halfspace { a: [1.0, p.q1(x), p.q2(x)], b: x.sqrt() })
            .collect();
        let n_grid = cons.len();
        // Side constraints and a guard box keeping the polytope bounded.
        cons.push(Halfspace { a: [0.0, 1.0, 0.0], b: 0.0 }); // c1 ≥ 0
        cons.push(Halfspace { a: [kf, -1.0, 0.0], b: 0.0 }); // c1 ≤ k·c0
        cons.push(Halfspace { a: [0.0, 0.0, -1.0], b: 0.0 }); // c2 ≤ 0
        cons.push(Halfspace { a: [-1.0, 0.0, 0.0], b: -1e3 }); // c0 ≤ 1e3
        cons.push(Halfspace { a: [1.0, 0.0, 0.0], b: -1e3 }); // c0 ≥ −1e3
        cons.push(Halfspace { a: [0.0, 0.0, 1.0], b: -1e7 }); // c2 ≥ −1e7

        let star_idx = grid
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - xs).abs().partial_cmp(&(b.1 - xs).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seed: Vec<usize> = vec![
            0,
            star_idx,
            n_grid - 1,
            n_grid,
            n_grid + 1,
            n_grid + 2,
            n_grid + 3,
            n_grid + 4,
            n_grid + 5,
        ];

        let sol = match lp3::minimize_first_coord(&cons, &seed) {
            Ok(sol) => sol,
            Err(_) => return Err(DelsarteError::ConvergenceFailure { rounds: round }),
        };

        let fine = verify_feasible(sol[0], sol[1], sol[2], k, field, size * 8 + 1);
        if fine.pass {
            return Ok(LpSolution {
                field,
                k,
                c0: sol[0],
                c1: sol[1],
                c2: sol[2],
                x_star: xs,
                source: LpSource::Minimized,
                feasibility: fine,
            });
        }
        size *= 8;
    }
    Err(DelsarteError::ConvergenceFailure { rounds: 3 })
}

/// Cauchy–Schwarz bound `‖Y*Y‖₁ ≤ n + √(n(n−1)(n²/k − n))` for `Y ∈ T(k,n)`.
pub fn gram_one_norm_bound_welch(k: usize, n: usize) -> Result<f64, DelsarteError> {
    if k < 1 || n < k {
        return Err(DelsarteError::Dimension { k, n });
    }
    let (kf, nf) = (k as f64, n as f64);
    Ok(nf + (nf * (nf - 1.0) * (nf * nf / kf - nf)).sqrt())
}

/// Polynomial bound `‖Y*Y‖₁ ≤ c0·n²` for `Y ∈ T(k,n)`, with the closed-form
/// complex `c0 = (1 + (k−1)√(1+k))/k²` and the real `c0` solved from the
/// tangency system at runtime.
pub fn gram_one_norm_bound_bc(k: usize, n: usize, field: Field) -> Result<f64, DelsarteError> {
    if k < 1 || n < k {
        return Err(DelsarteError::Dimension { k, n });
    }
    let nf = n as f64;
    let c0 = match field {
        Field::Complex => {
            let kf = k as f64;
            (1.0 + (kf - 1.0) * (1.0 + kf).sqrt()) / (kf * kf)
        }
        Field::Real => tangency_triple(k, Field::Real)?[0],
    };
    Ok(c0 * nf * nf)
}

/// Coherence floor `n/(γ_upper − n)` from an upper bound on the maximal Gram
/// 1-norm; decreasing in `γ_upper`, so any valid upper bound yields a valid
/// floor.
pub fn lemma_coherence_floor(n: usize, gamma_upper: f64) -> Result<f64, DelsarteError> {
    let nf = n as f64;
    if gamma_upper <= nf {
        return Err(DelsarteError::Domain { gamma_upper, n });
    }
    Ok(nf / (gamma_upper - nf))
}

/// The tightest available theorem bound on `γ(k, n)`.
pub fn gamma_upper_bound(k: usize, n: usize, field: Field) -> Result<f64, DelsarteError> {
    let welch = gram_one_norm_bound_welch(k, n)?;
    let bc = gram_one_norm_bound_bc(k, n, field)?;
    Ok(welch.min(bc))
}

/// Brackets `γ(k, n) = max_{Y ∈ T(k,n)} ‖Y*Y‖₁` between the best built-in
/// witness and the best theorem bound.
///
/// Witnesses tried: the orthonormal basis when `n = k`, the simplex ETF when
/// `n = k + 1`, concatenated SIC copies when the field is complex and
/// `n = m·k²` for `k ∈ {2, 3}`, and otherwise the tight complement of a
/// seeded random unit-norm configuration.
pub fn gamma_interval(k: usize, n: usize, field: Field) -> Result<(f64, f64), DelsarteError> {
    if k < 1 || n < k {
        return Err(DelsarteError::Dimension { k, n });
    }
    let upper = gamma_upper_bound(k, n, field)?;

    let mut witnesses: Vec<f64> = Vec::new();
    if n == k {
        witnesses.push(n as f64);
    }
    if n == k + 1 {
        let simplex = construct_simplex_etf(k, field)?;
        witnesses.push(simplex.gram_report().one_norm);
    }
    if field == Field::Complex && (k == 2 || k == 3) && n % (k * k) == 0 {
        let m = n / (k * k);
        let copies = construct_sic(k)?.concat_copies(m)?;
        witnesses.push(copies.gram_report().one_norm);
    }
    if n > k {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x11e9ac5);
        let x = random_unit_configuration(field, n - k, n, &mut rng);
        let y = x.orthogonal_tight_complement()?;
        witnesses.push(y.gram_report().one_norm);
    }
    let lower = witnesses.into_iter().fold(0.0, f64::max);
    Ok((lower, upper))
}
