//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `--nocapture` to see them). Tolerances are pinned
//! in the assertions, not configurable.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use linepack::bounds::{bukh_cox_bound, welch_bound};
use linepack::certify::{
    diagnose_lemma_equality, diagnose_theorem3_equality, lemma_certificate, welch_equality_check,
};
use linepack::cli::{figure_rows, FigureCmd};
use linepack::delsarte::{
    gram_one_norm_bound_bc, lemma_coherence_floor, minimize_c0, q_polys, tangency_solve,
    verify_feasible,
};
use linepack::frames::{
    construct_sic, construct_simplex_etf, random_unit_configuration, Field, VectorConfiguration,
};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn criterion_1_welch_corollary() {
    let clock = Instant::now();

    assert!((welch_bound(6, 7).unwrap() - 1.0 / 6.0).abs() <= 1e-12);
    let simplex6 = construct_simplex_etf(6, Field::Real).unwrap();
    assert!((simplex6.gram_report().coherence - 1.0 / 6.0).abs() <= 1e-9);

    for d in 2..=12 {
        let simplex = construct_simplex_etf(d, Field::Real).unwrap();
        let mu = simplex.gram_report().coherence;
        let bound = welch_bound(d, d + 1).unwrap();
        assert!(
            (mu - bound).abs() <= 1e-9,
            "d={d}: simplex coherence {mu} vs welch {bound}"
        );
    }

    assert!(clock.elapsed() < Duration::from_secs(1));
    println!("acceptance 1 (welch corollary via simplex ETFs): PASS");
}

#[test]
fn criterion_2_welch_gram_equality() {
    let sic = construct_sic(2).unwrap();
    let one_norm = sic.gram_report().one_norm;
    assert!((one_norm - (4.0 + 4.0 * 3f64.sqrt())).abs() <= 1e-9);

    let report = welch_equality_check(&sic, 1e-7).unwrap();
    assert!(report.equal && report.etf && report.consistent);

    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    for trial in 0..50 {
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let k = 2 + trial % 4;
        let n = k + 2 + trial % 6;
        let x = random_unit_configuration(field, n - k, n, &mut rng);
        let y = x.orthogonal_tight_complement().unwrap();
        let rep = welch_equality_check(&y, 1e-7).unwrap();
        assert!(
            rep.equiangular_spread > 1e-7,
            "trial {trial}: complement unexpectedly equiangular"
        );
        assert!(rep.norm_gap > 0.0, "trial {trial}: strict inequality violated");
        assert!(!rep.equal && rep.consistent);
    }
    println!("acceptance 2 (Gram 1-norm Cauchy-Schwarz equality cases): PASS");
}

#[test]
fn criterion_3_polynomial_gram_bound_equality() {
    let clock = Instant::now();

    let bound_28 = gram_one_norm_bound_bc(2, 8, Field::Complex).unwrap();
    assert!((bound_28 - 16.0 * (1.0 + 3f64.sqrt())).abs() <= 1e-9);
    let copies = construct_sic(2).unwrap().concat_copies(2).unwrap();
    assert!((copies.gram_report().one_norm - bound_28).abs() <= 1e-8);

    let bound_39 = gram_one_norm_bound_bc(3, 9, Field::Complex).unwrap();
    assert!((bound_39 - 45.0).abs() <= 1e-9);
    let hesse = construct_sic(3).unwrap();
    assert!((hesse.gram_report().one_norm - bound_39).abs() <= 1e-8);

    assert!(clock.elapsed() < Duration::from_secs(1));
    println!("acceptance 3 (polynomial Gram bound closed form and equality): PASS");
}

#[test]
fn criterion_4_lp_triple_reproduction() {
    let clock = Instant::now();

    for k in 1..=50usize {
        let kf = k as f64;
        let root = (1.0 + kf).sqrt();
        let c0_formula = (1.0 + (kf - 1.0) * root) / (kf * kf);
        let c1_formula = root * (-4.0 + kf * kf + 4.0 * root) / (2.0 * kf * (2.0 + kf));
        let c2_formula =
            (-(2.0 + 4.0 * kf + 2.0 * kf * kf) + root * (2.0 + 3.0 * kf + kf * kf))
                / (2.0 * kf * kf);

        let sol = tangency_solve(k, Field::Complex).unwrap();
        assert!((sol.c0 - c0_formula).abs() <= 1e-9, "k={k} c0");
        assert!((sol.c1 - c1_formula).abs() <= 1e-9, "k={k} c1");
        // The solved quadratic coefficient is the negation of the printed
        // formula; the printed sign contradicts the c2 ≤ 0 constraint.
        assert!((sol.c2 + c2_formula).abs() <= 1e-9, "k={k} c2");

        let cert = verify_feasible(sol.c0, sol.c1, sol.c2, k, Field::Complex, 32769);
        assert!(cert.pass && cert.min_slack >= -1e-9, "k={k} feasibility");

        let min = minimize_c0(k, Field::Complex, 4097).unwrap();
        assert!((min.c0 - sol.c0).abs() <= 1e-6, "k={k}: LP {} vs tangency {}", min.c0, sol.c0);
        assert!(min.c0 <= sol.c0 + 1e-9, "k={k}: LP must not exceed tangency");
    }

    assert!(clock.elapsed() < Duration::from_secs(30));
    println!("acceptance 4 (LP tangency triples and minimization, k = 1..50): PASS");
}

#[test]
fn criterion_5_corollary_composition() {
    for d in 1..=63usize {
        for n in (d + 1)..=64 {
            let k = n - d;
            let direct = bukh_cox_bound(d, n, Field::Complex).unwrap();

            let gamma = gram_one_norm_bound_bc(k, n, Field::Complex).unwrap();
            let composed = lemma_coherence_floor(n, gamma).unwrap();
            assert!((direct - composed).abs() <= 1e-12, "composition d={d} n={n}");

            let (df, nf, kf) = (d as f64, n as f64, k as f64);
            let displayed =
                kf * kf / (nf + (nf * nf - nf * df - nf) * (1.0 + kf).sqrt() - kf * kf);
            assert!((direct - displayed).abs() <= 1e-12, "displayed form d={d} n={n}");

            if k == 1 {
                let welch = welch_bound(d, n).unwrap();
                assert!((direct - welch).abs() <= 1e-12, "k=1 d={d}");
            }
        }
    }
    println!("acceptance 5 (corollary equals duality composition, d < n <= 64): PASS");
}

#[test]
fn criterion_6_real_case() {
    let sol = tangency_solve(2, Field::Real).unwrap();
    assert!((sol.c0 - 2.0 / 3.0).abs() <= 1e-12);
    assert!((sol.c1 - 7.0 / 9.0).abs() <= 1e-12);
    assert!((sol.c2 + 4.0 / 9.0).abs() <= 1e-12);

    assert!((bukh_cox_bound(6, 8, Field::Real).unwrap() - 3.0 / 13.0).abs() <= 1e-12);

    // Oracle for (6, 9): Cramer's rule on the exact k = 3 system, carried
    // through the coherence floor independently of the library path.
    let m = [
        [1.0, -2.0 / 15.0, -8.0 / 175.0],
        [1.0, 2.0 / 3.0, 8.0 / 35.0],
        [0.0, 1.0, -16.0 / 35.0],
    ];
    let rhs = [1.0 / 5f64.sqrt(), 1.0, 5f64.sqrt() / 2.0];
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d0 = det(&m);
    let mut m0 = m;
    for row in 0..3 {
        m0[row][0] = rhs[row];
    }
    let c0_oracle = det(&m0) / d0;
    let floor_oracle = 9.0 / (81.0 * c0_oracle - 9.0);

    let bound_69 = bukh_cox_bound(6, 9, Field::Real).unwrap();
    assert!((bound_69 - 0.259463).abs() <= 1e-5);
    assert!((bound_69 - floor_oracle).abs() <= 1e-9);

    println!("acceptance 6 (real-field tangency and coherence bounds): PASS");
}

#[test]
fn criterion_7_figure_reproduction() {
    let cmd = FigureCmd {
        d: 6,
        n_min: 5,
        n_max: 12,
        field: Field::Real,
        packings_dir: Some(fixtures_dir()),
        out_path: None,
        orthoplex_inclusive: false,
        json: false,
    };
    let mut warn = Vec::new();
    let rows = figure_rows(&cmd, &mut warn).unwrap();
    assert_eq!(rows.len(), 6, "rows for n = 7..12");

    for row in &rows {
        let coherence = row
            .packing_coherence
            .unwrap_or_else(|| panic!("fixture missing for n = {}", row.n));
        for (name, bound) in [
            ("welch", row.welch),
            ("bukh_cox", row.bukh_cox),
            ("orthoplex", row.orthoplex),
            ("levenshtein", row.levenshtein),
        ] {
            if let Some(b) = bound {
                assert!(
                    b <= coherence + 1e-6,
                    "n={}: {name} bound {b} exceeds packing coherence {coherence}",
                    row.n
                );
            }
        }
    }

    for n in [8usize, 9] {
        let row = rows.iter().find(|r| r.n == n).unwrap();
        assert_eq!(row.achiever, "bukh_cox", "n={n}");
        let bc = row.bukh_cox.unwrap();
        for other in [row.welch, row.orthoplex, row.levenshtein].into_iter().flatten() {
            assert!(bc > other, "n={n}: duality bound must be the strict maximum");
        }
    }

    // The bounds-only sweep over the full published range must also run.
    let full = FigureCmd { n_max: 40, packings_dir: None, ..cmd };
    let mut warn = Vec::new();
    let rows = figure_rows(&full, &mut warn).unwrap();
    assert_eq!(rows.len(), 34);
    assert!(rows.iter().all(|r| r.packing_coherence.is_none()));
    assert_eq!(rows.iter().find(|r| r.n == 8).unwrap().achiever, "bukh_cox");
    assert_eq!(rows.iter().find(|r| r.n == 9).unwrap().achiever, "bukh_cox");

    println!("acceptance 7 (figure table over fixtures, duality bound best at n = 8, 9): PASS");
}

#[test]
fn criterion_8_lemma_certificate_suite() {
    let clock = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for trial in 0..200 {
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + trial % 7; // d ≤ 8
        let n = d + 1 + trial % d; // d < n ≤ 2d
        let x = random_unit_configuration(field, d, n, &mut rng);
        let cert = lemma_certificate(&x).unwrap();
        assert!(cert.valid, "trial {trial} (d={d}, n={n}, {field})");
        for step in &cert.chain {
            assert!(step.slack >= -1e-8, "trial {trial} step {}", step.name);
        }
        assert!(cert.floor_theorem <= cert.floor_witness + 1e-8);
        assert!(cert.floor_witness <= cert.mu + 1e-8);
    }

    // Naimark pairs from the stock equality witnesses.
    let mut pairs: Vec<VectorConfiguration> = vec![
        construct_sic(2).unwrap(),
        construct_sic(3).unwrap(),
    ];
    for d in 2..=6 {
        pairs.push(construct_simplex_etf(d, Field::Real).unwrap());
    }
    for x in pairs {
        let y = x.naimark_complement().unwrap();
        let diag = diagnose_lemma_equality(&x, &y, 1e-9).unwrap();
        for cond in &diag.conditions {
            if cond.name == "orthogonality" || cond.name == "sign_opposition" {
                assert!(
                    cond.margin <= 1e-9,
                    "{} margin {} for d={} n={}",
                    cond.name,
                    cond.margin,
                    x.d(),
                    x.n()
                );
            }
        }
    }

    assert!(clock.elapsed() < Duration::from_secs(10));
    println!("acceptance 8 (certificate property suite, 200 seeded configurations): PASS");
}

#[test]
fn criterion_9_kernel_positivity() {
    for field in [Field::Real, Field::Complex] {
        let mut rng = ChaCha8Rng::seed_from_u64(match field {
            Field::Real => 900,
            Field::Complex => 901,
        });
        for trial in 0..100 {
            let k = 1 + trial % 6;
            let n = k + 1 + trial % (30 - k);
            let z = random_unit_configuration(field, k, n, &mut rng);
            let poly = q_polys(k, field);

            let weights: Vec<f64> =
                (0..n).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let wsum: f64 = weights.iter().sum();

            let g = z.gram();
            let mut quad = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let m = g[(i, j)].norm();
                    quad += poly.q2(m * m) * weights[i] * weights[j];
                }
            }
            assert!(
                quad >= -1e-9 * wsum * wsum,
                "{field} trial {trial} (k={k}, n={n}): kernel form {quad}"
            );
        }
    }
    println!("acceptance 9 (empirical positivity of the Q2 kernel): PASS");
}

#[test]
fn criterion_3b_theorem3_diagnosis_on_witnesses() {
    // Copies of the k² witnesses satisfy all four equality conditions.
    for (k, m) in [(2usize, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let y = construct_sic(k).unwrap().concat_copies(m).unwrap();
        let diag = diagnose_theorem3_equality(&y, 1e-8).unwrap();
        assert!(diag.all_satisfied, "k={k} m={m}: {:?}", diag.conditions);
        let n = y.n();
        let bound = gram_one_norm_bound_bc(k, n, Field::Complex).unwrap();
        let one_norm = y.gram_report().one_norm;
        assert!((one_norm - bound).abs() <= 1e-8 * (n * n) as f64, "k={k} m={m}");
    }
    println!("acceptance 3b (equality diagnosis on concatenated witnesses): PASS");
}
