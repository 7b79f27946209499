//! Minimal dense linear programming in three variables.
//!
//! Solves `minimize x₀ subject to aᵢ·x ≥ bᵢ` by constraint generation: keep a
//! small working set, locate its optimum by enumerating basic solutions
//! (triples of active constraints), then pull in the most violated remaining
//! constraint until none is violated. With three variables every basic
//! solution is a 3×3 solve, so the subproblem optimum is exact up to
//! rounding. The caller is responsible for supplying box constraints that
//! keep the feasible region bounded.

/// One halfspace `a·x ≥ b`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Halfspace {
    pub a: [f64; 3],
    pub b: f64,
}

impl Halfspace {
    fn slack(&self, x: &[f64; 3]) -> f64 {
        self.a[0] * x[0] + self.a[1] * x[1] + self.a[2] * x[2] - self.b
    }

    fn scale(&self) -> f64 {
        let norm = (self.a[0] * self.a[0] + self.a[1] * self.a[1] + self.a[2] * self.a[2]).sqrt();
        norm.max(self.b.abs()).max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lp3Error {
    /// No basic solution satisfies the working set: empty feasible region.
    Infeasible,
    /// Constraint generation failed to settle within the iteration cap.
    Stalled,
}

const MAX_ROUNDS: usize = 200;
/// Basic solutions must satisfy working-set members to this relative slack.
const VERTEX_FEAS_TOL: f64 = 1e-9;
/// Full-set violations larger than this trigger another round.
const VIOLATION_TOL: f64 = 1e-12;

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cramer(m: &[[f64; 3]; 3], b: &[f64; 3], d: f64) -> [f64; 3] {
    let mut x = [0.0f64; 3];
    for col in 0..3 {
        let mut mc = *m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        x[col] = det3(&mc) / d;
    }
    x
}

/// Solves the 3×3 system with rows normalized first; `None` when the active
/// triple is (numerically) rank-deficient. Active triples near a tangency
/// point are ill-conditioned, so the solution is polished by iterative
/// refinement until the residual sits at rounding level.
fn solve_triple(c1: &Halfspace, c2: &Halfspace, c3: &Halfspace) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (row, c) in [c1, c2, c3].into_iter().enumerate() {
        let norm = (c.a[0] * c.a[0] + c.a[1] * c.a[1] + c.a[2] * c.a[2]).sqrt();
        if norm <= 1e-300 {
            return None;
        }
        for col in 0..3 {
            m[row][col] = c.a[col] / norm;
        }
        b[row] = c.b / norm;
    }
    let d = det3(&m);
    if d.abs() <= 1e-12 {
        return None;
    }
    let mut x = cramer(&m, &b, d);
    for _ in 0..2 {
        let mut r = [0.0f64; 3];
        for row in 0..3 {
            r[row] = b[row]
                - (m[row][0] * x[0] + m[row][1] * x[1] + m[row][2] * x[2]);
        }
        let dx = cramer(&m, &r, d);
        for col in 0..3 {
            x[col] += dx[col];
        }
    }
    Some(x)
}

/// Optimum of the working set alone: feasible basic solution with the least
/// first coordinate.
fn best_vertex(cons: &[Halfspace], working: &[usize]) -> Option<[f64; 3]> {
    let mut best: Option<[f64; 3]> = None;
    let w = working.len();
    for i in 0..w {
        for j in (i + 1)..w {
            for l in (j + 1)..w {
                let Some(x) = solve_triple(&cons[working[i]], &cons[working[j]], &cons[working[l]])
                else {
                    continue;
                };
                if !x.iter().all(|v| v.is_finite()) {
                    continue;
                }
                let feasible = working.iter().all(|&m| {
                    let c = &cons[m];
                    c.slack(&x) >= -VERTEX_FEAS_TOL * c.scale() * x_scale(&x)
                });
                if feasible && best.map_or(true, |b| x[0] < b[0]) {
                    best = Some(x);
                }
            }
        }
    }
    best
}

fn x_scale(x: &[f64; 3]) -> f64 {
    x.iter().map(|v| v.abs()).fold(1.0, f64::max)
}

/// Minimizes the first coordinate over the intersection of all halfspaces.
/// `seed` gives the initial working set (indices into `cons`).
pub(crate) fn minimize_first_coord(
    cons: &[Halfspace],
    seed: &[usize],
) -> Result<[f64; 3], Lp3Error> {
    let mut working: Vec<usize> = Vec::new();
    for &i in seed {
        if !working.contains(&i) {
            working.push(i);
        }
    }

    for _ in 0..MAX_ROUNDS {
        let x = best_vertex(cons, &working).ok_or(Lp3Error::Infeasible)?;

        let point_scale = x_scale(&x);
        let mut worst_idx = None;
        let mut worst_viol = 0.0f64;
        for (idx, c) in cons.iter().enumerate() {
            let v = c.slack(&x) / (c.scale() * point_scale);
            if v < worst_viol {
                worst_viol = v;
                worst_idx = Some(idx);
            }
        }
        match worst_idx {
            None => return Ok(x),
            Some(idx) if worst_viol >= -VIOLATION_TOL => {
                let _ = idx;
                return Ok(x);
            }
            Some(idx) => {
                if working.contains(&idx) {
                    // The vertex filter already tolerates this constraint to
                    // a looser slack; accept if it is within that budget.
                    if worst_viol >= -VERTEX_FEAS_TOL {
                        return Ok(x);
                    }
                    return Err(Lp3Error::Stalled);
                }
                working.push(idx);
                // Keep the working set small: retire members that are far
                // from active once it grows.
                if working.len() > 24 {
                    working.retain(|&m| cons[m].slack(&x) <= 1e-6 * cons[m].scale());
                    if !working.contains(&idx) {
                        working.push(idx);
                    }
                }
            }
        }
    }
    Err(Lp3Error::Stalled)
}
