//! Deterministic fixtures for the property suites: seeded random fields and
//! admissible equation specs.
//!
//! Admissible fixtures come in two flavours. Order-2 specs pick the top
//! coefficient freely (symmetrized across its two slots) and solve the
//! contraction condition for the designated partner coefficients with the
//! indefinite integral along the first axis. Orders 3 and 4 instead keep
//! each coefficient constant along every axis appearing in its own word, so
//! every contraction term vanishes identically — the structure all the
//! worked models share once words of length ≥ 2 carry variable coefficients.

use crate::calculus::Deriv;
use crate::equation::{EquationSpec, Part, Word};
use crate::field::LatticeField;
use crate::grid::{AxisSpec, Boundary, CalculusSpec, ShiftOrientation};
use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random scalar-or-matrix field with entries uniform in [-amp, amp].
pub fn random_field(grid: &Arc<CalculusSpec>, dim: usize, amp: f64, r: &mut ChaCha8Rng) -> LatticeField<f64> {
    let mut f = LatticeField::zeros(grid.clone(), dim);
    for v in f.data_mut() {
        *v = r.gen_range(-amp..amp);
    }
    f
}

/// Random integer field with entries in [-bound, bound].
pub fn random_int_field(
    grid: &Arc<CalculusSpec>,
    dim: usize,
    bound: i64,
    r: &mut ChaCha8Rng,
) -> LatticeField<i64> {
    let mut f = LatticeField::zeros(grid.clone(), dim);
    for v in f.data_mut() {
        *v = r.gen_range(-bound..=bound);
    }
    f
}

/// Field varying only along axes outside `word_axes` (constant along each
/// axis named in the word: every contraction derivative kills it).
pub fn kernel_aligned_field(
    grid: &Arc<CalculusSpec>,
    dim: usize,
    word_axes: &[usize],
    amp: f64,
    r: &mut ChaCha8Rng,
) -> LatticeField<f64> {
    // random values indexed by the transverse coordinates only
    let mut table: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    let b = dim * dim;
    let mut f = LatticeField::zeros(grid.clone(), dim);
    for (site, idx) in grid.sites().enumerate() {
        let key: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|(a, _)| !word_axes.contains(a))
            .map(|(_, &k)| k)
            .collect();
        let vals = table
            .entry(key)
            .or_insert_with(|| (0..b).map(|_| r.gen_range(-amp..amp)).collect());
        f.data_mut()[site * b..(site + 1) * b].copy_from_slice(vals);
    }
    f
}

/// Subtract the per-column mean along `axis` so the periodic indefinite
/// integral exists.
pub fn mean_free_along(f: &LatticeField<f64>, axis: usize) -> LatticeField<f64> {
    let grid = f.grid().clone();
    let n = grid.axes[axis].size as f64;
    let b = f.dim() * f.dim();
    let strides = grid.strides();
    let mut out = f.clone();
    for (site, idx) in grid.sites().enumerate() {
        if idx[axis] != 0 {
            continue;
        }
        for j in 0..b {
            let mut mean = 0.0;
            for k in 0..grid.axes[axis].size {
                mean += f.data()[(site + k * strides[axis]) * b + j];
            }
            mean /= n;
            for k in 0..grid.axes[axis].size {
                out.data_mut()[(site + k * strides[axis]) * b + j] -= mean;
            }
        }
    }
    out
}

fn inv_along<S: Scalar>(f: &LatticeField<S>, axis: usize, which: Deriv) -> LatticeField<S> {
    f.inverse_diff(axis, which, f64::INFINITY).expect("fixture inverse").field
}

/// Axis layout options for random specs.
#[derive(Clone, Copy, Debug)]
pub struct FixtureGrid {
    pub nt: usize,
    pub nx: usize,
    pub orient_t: ShiftOrientation,
    pub orient_x: ShiftOrientation,
    pub nonuniform_x: bool,
}

impl FixtureGrid {
    pub fn sample(r: &mut ChaCha8Rng, allow_nonuniform: bool) -> Self {
        let orient = |r: &mut ChaCha8Rng| {
            if r.gen_bool(0.5) {
                ShiftOrientation::Forward
            } else {
                ShiftOrientation::Backward
            }
        };
        FixtureGrid {
            nt: r.gen_range(6..9),
            nx: r.gen_range(7..10),
            orient_t: orient(r),
            orient_x: orient(r),
            nonuniform_x: allow_nonuniform && r.gen_bool(0.3),
        }
    }

    pub fn build(&self, r: &mut ChaCha8Rng) -> Arc<CalculusSpec> {
        let x_axis = if self.nonuniform_x {
            // zero-padded axes need room for an interior after the margin
            let nx = self.nx + 10;
            let mut coords = Vec::with_capacity(nx);
            let mut x = 0.0;
            for _ in 0..nx {
                coords.push(x);
                x += r.gen_range(0.4..1.6);
            }
            AxisSpec::nonuniform("x", coords, self.orient_x, Boundary::ZeroPadded)
        } else {
            AxisSpec::uniform("x", self.nx, self.orient_x, Boundary::Periodic)
        };
        CalculusSpec::new(vec![
            AxisSpec::uniform("t", self.nt, self.orient_t, Boundary::Periodic),
            x_axis,
        ])
        .unwrap()
    }
}

/// Random admissible order-2 spec on a 2-axis grid, optionally with a
/// mirrored ∂† part. The t axis stays uniform periodic so the condition can
/// be solved by the indefinite integral along it.
pub fn admissible_spec_order2(
    seed: u64,
    dim: usize,
    with_tilde: bool,
) -> EquationSpec<f64> {
    let mut r = rng(seed);
    let layout = FixtureGrid::sample(&mut r, false);
    let grid = layout.build(&mut r);
    let lambda = admissible_words_order2(&grid, dim, Part::Lambda, &mut r);
    let lambda_tilde = if with_tilde {
        admissible_words_order2(&grid, dim, Part::LambdaTilde, &mut r)
    } else {
        BTreeMap::new()
    };
    EquationSpec::new(grid, dim, lambda, lambda_tilde).unwrap()
}

fn admissible_words_order2(
    grid: &Arc<CalculusSpec>,
    dim: usize,
    part: Part,
    r: &mut ChaCha8Rng,
) -> BTreeMap<Word, LatticeField<f64>> {
    let contraction = part.deriv().flip();
    let t = 0usize;
    let x = 1usize;
    let solve_t = |rhs: &LatticeField<f64>| -> LatticeField<f64> {
        inv_along(&mean_free_along(rhs, t), t, contraction)
    };
    // order 2: choose Λ_xx, derive Λ_tx = Λ_xt, then Λ_tt
    let lam_xx = mean_free_along(&random_field(grid, dim, 1.0, r), t);
    let lam_tx = {
        let raw = solve_t(&lam_xx.apply_deriv(x, contraction).unwrap().neg());
        mean_free_along(&raw, t)
    };
    let lam_tt = solve_t(&lam_tx.apply_deriv(x, contraction).unwrap().neg());
    // order 1: choose Λ_x, derive Λ_t
    let lam_x = mean_free_along(&random_field(grid, dim, 1.0, r), t);
    let lam_t = solve_t(&lam_x.apply_deriv(x, contraction).unwrap().neg());
    let mut words = BTreeMap::new();
    words.insert(vec![x, x], lam_xx);
    words.insert(vec![t, x], lam_tx.clone());
    words.insert(vec![x, t], lam_tx);
    words.insert(vec![t, t], lam_tt);
    words.insert(vec![x], lam_x);
    words.insert(vec![t], lam_t);
    words
}

/// Random admissible spec of order 3 or 4: single-axis words carry fields
/// constant along their own axis, mixed words carry constant matrices.
pub fn admissible_spec_high_order(seed: u64, order: usize, dim: usize, with_tilde: bool) -> EquationSpec<f64> {
    assert!(order == 3 || order == 4);
    let mut r = rng(seed);
    let layout = FixtureGrid::sample(&mut r, false);
    let grid = layout.build(&mut r);
    let build_part = |r: &mut ChaCha8Rng| {
        let mut words: BTreeMap<Word, LatticeField<f64>> = BTreeMap::new();
        for len in 1..=order {
            for ax in [0usize, 1usize] {
                words.insert(vec![ax; len], kernel_aligned_field(&grid, dim, &[ax], 1.0, r));
            }
        }
        // one constant mixed word for the word-bookkeeping paths
        let mixed: Word = if order == 3 { vec![0, 1, 1] } else { vec![0, 1, 1, 0] };
        let blk: Vec<f64> = (0..dim * dim).map(|_| r.gen_range(-1.0..1.0)).collect();
        words.insert(
            mixed,
            LatticeField::from_matrix_fn(grid.clone(), dim, |_, m| m.copy_from_slice(&blk)),
        );
        words
    };
    let lambda = build_part(&mut r);
    let lambda_tilde = if with_tilde { build_part(&mut r) } else { BTreeMap::new() };
    EquationSpec::new(grid, dim, lambda, lambda_tilde).unwrap()
}

/// Random admissible spec on a grid with one nonuniform zero-padded axis.
/// Nonuniform gaps stop ζ∓ from commuting with the contraction derivative,
/// so the indefinite-integral construction no longer closes at the dressed
/// positions; kernel-aligned coefficients (constant along their own word
/// axes) satisfy the dressed condition at every position instead.
pub fn admissible_spec_nonuniform(seed: u64, order: usize, with_tilde: bool) -> EquationSpec<f64> {
    assert!((1..=4).contains(&order));
    let mut r = rng(seed);
    let mut layout = FixtureGrid::sample(&mut r, true);
    layout.nonuniform_x = true;
    let grid = layout.build(&mut r);
    let build_part = |r: &mut ChaCha8Rng| {
        let mut words: BTreeMap<Word, LatticeField<f64>> = BTreeMap::new();
        for len in 1..=order {
            for ax in [0usize, 1usize] {
                words.insert(vec![ax; len], kernel_aligned_field(&grid, 1, &[ax], 1.0, r));
            }
        }
        if order >= 2 {
            words.insert(vec![0, 1], kernel_aligned_field(&grid, 1, &[0, 1], 1.0, r));
        }
        words
    };
    let lambda = build_part(&mut r);
    let lambda_tilde = if with_tilde { build_part(&mut r) } else { BTreeMap::new() };
    EquationSpec::new(grid, 1, lambda, lambda_tilde).unwrap()
}

/// Constant-coefficient integer spec for the exact-arithmetic checks.
pub fn constant_int_spec(seed: u64, dim: usize, with_tilde: bool) -> EquationSpec<i64> {
    let mut r = rng(seed);
    let grid = CalculusSpec::new(vec![
        AxisSpec::uniform("t", 6, ShiftOrientation::Forward, Boundary::Periodic),
        AxisSpec::uniform("x", 7, ShiftOrientation::Backward, Boundary::Periodic),
    ])
    .unwrap();
    let mut words = BTreeMap::new();
    for w in [vec![0usize], vec![1usize], vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 0]] {
        words.insert(w, random_constant_int(&grid, dim, &mut r));
    }
    let tilde = if with_tilde {
        let mut tw = BTreeMap::new();
        for w in [vec![0usize], vec![1usize], vec![1, 1]] {
            tw.insert(w, random_constant_int(&grid, dim, &mut r));
        }
        tw
    } else {
        BTreeMap::new()
    };
    EquationSpec::new(grid, dim, words, tilde).unwrap()
}

fn random_constant_int(
    grid: &Arc<CalculusSpec>,
    dim: usize,
    r: &mut ChaCha8Rng,
) -> LatticeField<i64> {
    let b = dim * dim;
    let blk: Vec<i64> = (0..b).map(|_| r.gen_range(-3..=3)).collect();
    LatticeField::from_matrix_fn(grid.clone(), dim, |_, m| m.copy_from_slice(&blk))
}

/// Break admissibility by adding a non-kernel bump to one coefficient.
pub fn perturb_inadmissible(eq: &EquationSpec<f64>, seed: u64, eps: f64) -> EquationSpec<f64> {
    let mut r = rng(seed);
    let grid = eq.grid().clone();
    let mut lambda = eq.lambda.clone();
    let key = lambda.keys().next().unwrap().clone();
    let bump = random_field(&grid, eq.dim(), eps, &mut r);
    let coeff = lambda.get_mut(&key).unwrap();
    *coeff = coeff.add(&bump).unwrap();
    let mut out = EquationSpec::new(grid, eq.dim(), lambda, eq.lambda_tilde.clone()).unwrap();
    out.potential = eq.potential.clone();
    out
}
