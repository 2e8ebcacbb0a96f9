//! Kernel synthesis checks: frozen hand-expanded kernels, the defining
//! bilinear identity off-shell, closed form vs recursion, and the refusal
//! paths.

use defcalc::equation::{EquationSpec, Part};
use defcalc::fixtures;
use defcalc::gamma::{
    bilinear_residual, build_conjugate, build_gamma, build_gamma_by_recursion, build_gamma_hat,
    build_gamma_hat_tilde, build_gamma_tilde, build_gamma_tilde_by_recursion, termwise_difference,
};
use defcalc::{AxisSpec, Boundary, CalcError, CalculusSpec, Deriv, LatticeField, ShiftOrientation};
use std::collections::BTreeMap;

fn line_grid(n: usize) -> std::sync::Arc<CalculusSpec> {
    CalculusSpec::new(vec![AxisSpec::uniform("x", n, ShiftOrientation::Forward, Boundary::Periodic)])
        .unwrap()
}

#[test]
fn second_order_constant_kernel_has_two_terms() {
    // Λ_xx = 1: Γ_x = <∂†←| 1 |> + <| 1 |∂>
    let g = line_grid(8);
    let mut lam = BTreeMap::new();
    lam.insert(vec![0usize], LatticeField::constant(g.clone(), 0i64));
    lam.insert(vec![0usize, 0], LatticeField::constant(g.clone(), 1i64));
    let eq = EquationSpec::new(g, 1, lam, BTreeMap::new()).unwrap();
    let gammas = build_gamma(&eq, 0.0).unwrap();
    let terms: Vec<_> = gammas[0].terms.iter().filter(|t| t.coeff.max_norm() > 0.0).collect();
    assert_eq!(terms.len(), 2);
    let left_term = terms.iter().find(|t| !t.left.is_empty()).unwrap();
    assert_eq!(left_term.left, vec![(0, Deriv::Conjugated)]);
    assert!(left_term.right.is_empty());
    let right_term = terms.iter().find(|t| t.left.is_empty()).unwrap();
    assert_eq!(right_term.right, vec![(0, Deriv::Plain)]);
}

#[test]
fn first_order_tilde_kernel_is_single_dressed_coefficient() {
    // Ñ = 1 with constant Λ̃_x: one ζ-dressed term, no derivative words
    let g = line_grid(8);
    let mut lam_t = BTreeMap::new();
    lam_t.insert(vec![0usize], LatticeField::constant(g.clone(), -1i64));
    let eq = EquationSpec::new(g.clone(), 1, BTreeMap::new(), lam_t).unwrap();
    let gt = build_gamma_tilde(&eq, 0.0).unwrap();
    assert_eq!(gt[0].terms.len(), 1);
    let t = &gt[0].terms[0];
    assert!(t.left.is_empty() && t.right.is_empty());
    assert_eq!(t.coeff, LatticeField::constant(g, -1i64));
    // hatted version records the left ζ insertion
    let ght = build_gamma_hat_tilde(&eq, 0.0).unwrap();
    assert_eq!(ght[0].terms[0].left_zeta, Some((0, 1)));
}

#[test]
fn hat_and_plain_agree_on_constant_actions() {
    // Γ̂ differs from Γ only by ζ insertions: identical on constant fields
    let eq = fixtures::constant_int_spec(5, 1, false);
    let g = build_gamma(&eq, 0.0).unwrap();
    let gh = build_gamma_hat(&eq, 0.0).unwrap();
    let grid = eq.grid().clone();
    let f = LatticeField::constant(grid.clone(), 3i64);
    let h = LatticeField::constant(grid, -2i64);
    for (a, b) in g.iter().zip(gh.iter()) {
        assert_eq!(a.sandwich(&f, &h).unwrap(), b.sandwich(&f, &h).unwrap());
    }
}

fn unwrap_tol(x: f64) -> f64 {
    x
}

#[test]
fn bilinear_identity_exact_for_integer_constant_spec() {
    for seed in 0..6u64 {
        for dim in [1usize, 2] {
            let eq = fixtures::constant_int_spec(seed, dim, true);
            let mut r = fixtures::rng(seed + 100);
            let f = fixtures::random_int_field(eq.grid(), dim, 4, &mut r);
            let h = fixtures::random_int_field(eq.grid(), dim, 4, &mut r);
            let res = bilinear_residual(&eq, &f, &h, 0.0).unwrap();
            assert_eq!(res.max_norm(), 0.0, "seed {seed} dim {dim}");
        }
    }
}

#[test]
fn bilinear_identity_on_random_admissible_specs() {
    for seed in 0..10u64 {
        let eq = fixtures::admissible_spec_order2(seed, 1, seed % 2 == 0);
        let mut r = fixtures::rng(seed + 999);
        let f = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let h = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let res = bilinear_residual(&eq, &f, &h, unwrap_tol(1e-9)).unwrap();
        let norm = res.interior_max_norm(8);
        assert!(norm < 1e-12, "seed {seed}: residual {norm}");
    }
}

#[test]
fn bilinear_identity_matrix_valued() {
    for seed in [3u64, 7, 11] {
        let eq = fixtures::admissible_spec_order2(seed, 2, false);
        let mut r = fixtures::rng(seed * 31);
        let f = fixtures::random_field(eq.grid(), 2, 1.0, &mut r);
        let h = fixtures::random_field(eq.grid(), 2, 1.0, &mut r);
        let res = bilinear_residual(&eq, &f, &h, 1e-9).unwrap();
        assert!(res.interior_max_norm(8) < 1e-12, "seed {seed}");
    }
}

#[test]
fn bilinear_identity_nonuniform_axis() {
    for (seed, order) in [(1u64, 2usize), (2, 3), (3, 2), (4, 1)] {
        let eq = fixtures::admissible_spec_nonuniform(seed, order, seed % 2 == 1);
        let rep = eq.check_condition(1e-10).unwrap();
        assert!(rep.admissible, "seed {seed}: worst {}", rep.worst);
        let mut r = fixtures::rng(seed + 77);
        let f = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let h = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let res = bilinear_residual(&eq, &f, &h, 1e-9).unwrap();
        let norm = res.interior_max_norm(2 * order + 4);
        assert!(norm < 1e-12, "seed {seed} order {order}: residual {norm}");
        // recursion agrees termwise away from the padded edges
        let a = build_gamma(&eq, 1e-9).unwrap();
        let b = build_gamma_by_recursion(&eq, 1e-9).unwrap();
        let d = termwise_difference(&a, &b, 2 * order + 4);
        assert!(d < 1e-12, "seed {seed} order {order}: termwise {d}");
    }
}

#[test]
fn bilinear_identity_high_order() {
    for (seed, order) in [(1u64, 3usize), (2, 4), (9, 3), (12, 4)] {
        let eq = fixtures::admissible_spec_high_order(seed, order, 1, order == 3);
        let mut r = fixtures::rng(seed + 5);
        let f = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let h = fixtures::random_field(eq.grid(), 1, 1.0, &mut r);
        let res = bilinear_residual(&eq, &f, &h, 1e-9).unwrap();
        assert!(res.interior_max_norm(12) < 1e-12, "seed {seed} order {order}");
    }
}

#[test]
fn inadmissible_spec_is_refused_and_generically_violates() {
    let eq = fixtures::admissible_spec_order2(4, 1, false);
    let bad = fixtures::perturb_inadmissible(&eq, 17, 0.5);
    assert!(matches!(build_gamma(&bad, 1e-10), Err(CalcError::Inadmissible { .. })));
    // evaluated with a loose gate the kernels exist but the identity fails
    let mut r = fixtures::rng(23);
    let f = fixtures::random_field(bad.grid(), 1, 1.0, &mut r);
    let h = fixtures::random_field(bad.grid(), 1, 1.0, &mut r);
    let res = bilinear_residual(&bad, &f, &h, f64::INFINITY).unwrap();
    assert!(res.interior_max_norm(8) > 1e-3);
}

#[test]
fn recursion_matches_closed_form_constant_integers() {
    for seed in 0..4u64 {
        let eq = fixtures::constant_int_spec(seed, 1, false);
        let a = build_gamma(&eq, 0.0).unwrap();
        let b = build_gamma_by_recursion(&eq, 0.0).unwrap();
        assert_eq!(termwise_difference(&a, &b, 0), 0.0, "seed {seed}");
    }
}

#[test]
fn recursion_matches_closed_form_random_specs() {
    for seed in 0..8u64 {
        let eq = fixtures::admissible_spec_order2(seed, 1, true);
        let a = build_gamma(&eq, 1e-9).unwrap();
        let b = build_gamma_by_recursion(&eq, 1e-9).unwrap();
        let d = termwise_difference(&a, &b, 8);
        assert!(d < 1e-12, "seed {seed}: termwise diff {d}");
        let at = build_gamma_tilde(&eq, 1e-9).unwrap();
        let bt = build_gamma_tilde_by_recursion(&eq, 1e-9).unwrap();
        let dt = termwise_difference(&at, &bt, 8);
        assert!(dt < 1e-12, "seed {seed}: tilde termwise diff {dt}");
    }
}

#[test]
fn recursion_matches_closed_form_high_order() {
    for (seed, order) in [(21u64, 3usize), (22, 4)] {
        let eq = fixtures::admissible_spec_high_order(seed, order, 1, false);
        let a = build_gamma(&eq, 1e-9).unwrap();
        let b = build_gamma_by_recursion(&eq, 1e-9).unwrap();
        let d = termwise_difference(&a, &b, 8);
        assert!(d < 1e-12, "seed {seed} order {order}: {d}");
    }
}

#[test]
fn conjugate_of_constant_spec_keeps_coefficients() {
    let g = line_grid(6);
    let mut lam = BTreeMap::new();
    lam.insert(vec![0usize, 0], LatticeField::constant(g.clone(), 2i64));
    let eq = EquationSpec::new(g.clone(), 1, lam, BTreeMap::new()).unwrap();
    let conj = build_conjugate(&eq).unwrap();
    assert_eq!(conj.terms().len(), 1);
    let (deriv, word, coeff) = &conj.terms()[0];
    assert_eq!(*deriv, Deriv::Conjugated);
    assert_eq!(word, &vec![0usize, 0]);
    assert_eq!(*coeff, LatticeField::constant(g, 2i64));
}

#[test]
fn condition_part_gates_are_independent() {
    // admissible ∂ part + garbage ∂† part: gamma builds, gamma_tilde refuses
    let eq = fixtures::admissible_spec_order2(2, 1, false);
    let grid = eq.grid().clone();
    let mut r = fixtures::rng(55);
    let mut tilde = BTreeMap::new();
    tilde.insert(vec![1usize], fixtures::random_field(&grid, 1, 1.0, &mut r));
    let mixed = EquationSpec::new(grid, 1, eq.lambda.clone(), tilde).unwrap();
    assert!(build_gamma(&mixed, 1e-9).is_ok());
    assert!(build_gamma_tilde(&mixed, 1e-9).is_err());
}

#[test]
fn fixture_specs_pass_condition_check() {
    let eq = fixtures::admissible_spec_order2(0, 1, true);
    let rep = eq.check_condition(1e-10).unwrap();
    assert!(rep.admissible, "worst = {}", rep.worst);
    let eq3 = fixtures::admissible_spec_high_order(0, 3, 2, false);
    let rep3 = eq3.check_condition(1e-10).unwrap();
    assert!(rep3.admissible, "worst = {}", rep3.worst);
    assert!(rep3.entries.iter().any(|e| e.position > 0));
    // per the fixture convention both parts are checked
    assert!(rep.part_admissible(Part::Lambda));
    assert!(rep.part_admissible(Part::LambdaTilde));
}
