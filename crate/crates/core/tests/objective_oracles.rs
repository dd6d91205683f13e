mod common;

use common::{all_subsets, rng};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use wsub_core::datagen::random_feature_vectors;
use wsub_core::objectives::{
    coverage_function, dpp_determinant, gaussian_gram, least_squares_loglik, logistic_loglik, KernelGramian,
    LogisticProblem, RegressionProblem, DEFAULT_RIDGE,
};
use wsub_core::setfn::check_monotone;
use wsub_core::ElementSet;

fn gaussian(r: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(r))
}

/// `‖y‖² - ‖y - X_S β‖²` with `β = pinv(X_Sᵀ X_S) X_Sᵀ y` from an eigendecomposition.
fn normal_equations_value(x: &DMatrix<f64>, y: &DVector<f64>, s: &ElementSet) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let xs = x.select_columns(s.as_slice());
    let gram = xs.transpose() * &xs;
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let inv = eig
        .eigenvalues
        .map(|l| if l > 1e-12 * top { 1.0 / l } else { 0.0 });
    let pinv = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    let beta = pinv * xs.transpose() * y;
    y.norm_squared() - (y - xs * beta).norm_squared()
}

fn cofactor_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        _ => (0..n)
            .map(|j| {
                let minor = m.clone().remove_row(0).remove_column(j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * cofactor_det(&minor)
            })
            .sum(),
    }
}

#[test]
fn least_squares_matches_normal_equations_on_all_subsets() {
    for seed in 0..5 {
        let mut r = rng(seed);
        let x = gaussian(&mut r, 8, 6);
        let y = DVector::from_fn(8, |_, _| StandardNormal.sample(&mut r));
        let f = least_squares_loglik(RegressionProblem::new(x.clone(), y.clone()).unwrap());
        for s in all_subsets(6) {
            let got = f.evaluate(&s).unwrap();
            let want = normal_equations_value(&x, &y, &s);
            assert!((got - want).abs() < 1e-8, "seed {seed} S={s}: {got} vs {want}");
        }
    }
}

#[test]
fn least_squares_residual_is_orthogonal_to_selected_columns() {
    let mut r = rng(11);
    let mut x = gaussian(&mut r, 15, 9);
    let dup = x.column(2).into_owned();
    x.set_column(7, &dup);
    let y = DVector::from_fn(15, |_, _| StandardNormal.sample(&mut r));
    let problem = RegressionProblem::new(x.clone(), y.clone()).unwrap();
    for s in all_subsets(9) {
        let fit = problem.fit(&s).unwrap();
        let xs = x.select_columns(s.as_slice());
        let resid = &y - &xs * &fit.coefficients;
        if !s.is_empty() {
            assert!((xs.transpose() * resid).amax() < 1e-8, "S={s}");
        }
    }
}

#[test]
fn extension_fast_path_matches_direct_values() {
    let mut r = rng(12);
    let x = gaussian(&mut r, 30, 20);
    let y = DVector::from_fn(30, |_, _| StandardNormal.sample(&mut r));
    let f = least_squares_loglik(RegressionProblem::new(x, y).unwrap());
    let base = ElementSet::from([1, 4, 9, 13]);
    let cands: Vec<usize> = (0..20).filter(|u| !base.contains(*u)).collect();
    let fast = f.evaluate_extensions(&base, &cands).unwrap();
    for (u, v) in cands.iter().zip(fast) {
        let direct = f.evaluate(&base.with(*u)).unwrap();
        assert!((v - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}

#[test]
fn least_squares_is_monotone_exhaustively() {
    let mut r = rng(13);
    let x = gaussian(&mut r, 20, 12);
    let y = DVector::from_fn(20, |_, _| StandardNormal.sample(&mut r));
    let f = least_squares_loglik(RegressionProblem::new(x, y).unwrap());
    let report = check_monotone(&f, 12).unwrap();
    assert!(report.monotone, "{:?}", report.counterexample);
}

#[test]
fn dpp_matches_cofactor_expansion() {
    for seed in 0..5 {
        let mut r = rng(100 + seed);
        let a = gaussian(&mut r, 5, 7);
        let gram = &a * a.transpose();
        let f = dpp_determinant(KernelGramian::from_matrix(gram.clone()).unwrap());
        for s in all_subsets(5) {
            let idx = s.as_slice();
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
                gram[(idx[i], idx[j])] + if i == j { 1.0 } else { 0.0 }
            });
            let want = cofactor_det(&sub);
            let got = f.evaluate(&s).unwrap();
            assert!(
                (got - want).abs() < 1e-9 * want.abs().max(1.0),
                "S={s}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn gaussian_gram_is_psd_and_dpp_monotone() {
    let vectors = random_feature_vectors(10, 4, &mut rng(21));
    let gram = gaussian_gram(&vectors, 1.0).unwrap();
    let eig = gram.matrix().clone().symmetric_eigen();
    assert!(eig.eigenvalues.min() >= -1e-8);
    assert!((0..10).all(|i| gram.matrix()[(i, i)] == 1.0));
    let report = check_monotone(&dpp_determinant(gram), 10).unwrap();
    assert!(report.monotone);
}

fn random_binary_problem(seed: u64, m: usize, d: usize) -> LogisticProblem {
    let mut r = rng(seed);
    let x = DMatrix::from_fn(m, d, |_, _| if r.random::<f64>() < 0.4 { 1.0 } else { 0.0 });
    let y = DVector::from_fn(m, |_, _| if r.random::<bool>() { 1.0 } else { 0.0 });
    LogisticProblem::new(x, y, DEFAULT_RIDGE).unwrap()
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let p = random_binary_problem(31, 40, 6);
    let s = ElementSet::from([0, 2, 3, 5]);
    let mut r = rng(32);
    let h = 1e-5;
    for _ in 0..20 {
        let w = DVector::from_fn(4, |_, _| r.random_range(-2.0..2.0));
        let g = p.gradient(&s, &w).unwrap();
        for i in 0..4 {
            let mut up = w.clone();
            let mut dn = w.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (p.loglik(&s, &up).unwrap() - p.loglik(&s, &dn).unwrap()) / (2.0 * h);
            assert!(
                (fd - g[i]).abs() <= 1e-4 * g[i].abs().max(1.0),
                "{fd} vs {}",
                g[i]
            );
        }
    }
}

#[test]
fn logistic_optimum_has_vanishing_gradient_on_every_support() {
    let p = random_binary_problem(33, 50, 8);
    for s in all_subsets(8) {
        let fit = p.fit(&s).unwrap();
        let g = p.gradient(&s, &fit.weights).unwrap();
        let norm = if s.is_empty() { 0.0 } else { g.amax() };
        assert!(norm < 1e-6, "S={s}: {norm}");
    }
}

#[test]
fn logistic_is_monotone_up_to_solver_tolerance() {
    let f = logistic_loglik(random_binary_problem(34, 40, 7));
    let subsets = all_subsets(7);
    let values: Vec<f64> = subsets.iter().map(|s| f.evaluate(s).unwrap()).collect();
    for (mask, &v) in values.iter().enumerate() {
        for u in 0..7 {
            assert!(values[mask | 1 << u] >= v - 1e-6);
        }
    }
    assert_eq!(f.solver_warnings(), 0);
}

#[test]
fn evaluation_ignores_member_order() {
    let mut r = rng(40);
    let x = gaussian(&mut r, 10, 6);
    let y = DVector::from_fn(10, |_, _| StandardNormal.sample(&mut r));
    let ls = least_squares_loglik(RegressionProblem::new(x, y).unwrap());
    let dpp = dpp_determinant(gaussian_gram(&random_feature_vectors(6, 3, &mut r), 1.0).unwrap());
    let lg = logistic_loglik(random_binary_problem(41, 30, 6));
    let cov = coverage_function(
        5,
        (0..6).map(|e| ElementSet::from([e % 5, (e * 2) % 5])).collect(),
        vec![1.0, 2.0, 0.5, 3.0, 1.5],
    )
    .unwrap();
    for f in [ls, dpp, lg, cov] {
        for _ in 0..10 {
            let mut members: Vec<usize> = (0..6).filter(|_| r.random::<bool>()).collect();
            let sorted = f.evaluate(&ElementSet::from(members.clone())).unwrap();
            members.shuffle(&mut r);
            members.extend(members.clone());
            assert_eq!(f.evaluate(&ElementSet::from(members)).unwrap(), sorted);
        }
    }
}
