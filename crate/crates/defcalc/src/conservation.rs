//! Currents, divergence residuals, charges, and charge towers.
//!
//! A current set holds the per-axis components J_μ = Φ′Γ̂_μΦ, the mirror
//! components J̃_μ = Φ′Γ̂̃_μΦ when the equation carries a ∂† part, and the
//! combined components J′_μ = J_μ - ζ⁻_μ(J̃_μ) whose conservation law uses
//! only ∂ derivatives. Charges integrate the time component over the
//! remaining axes, one value per time slice.

use crate::error::Result;
use crate::field::LatticeField;
use crate::gamma::GammaOperator;
use crate::scalar::Scalar;

#[derive(Clone)]
pub struct CurrentSet<S: Scalar> {
    /// J_μ, one per axis.
    pub j: Vec<LatticeField<S>>,
    /// J̃_μ, one per axis (zero fields when the spec has no ∂† part).
    pub j_tilde: Vec<LatticeField<S>>,
    /// J′_μ = J_μ - ζ⁻_μ(J̃_μ).
    pub j_prime: Vec<LatticeField<S>>,
    /// Stencil margin inherited from the deepest kernel term.
    pub margin: usize,
}

/// Evaluate the current set from hatted kernels and a solution pair.
/// `gammas_hat_tilde` may be empty when the equation has no ∂† part.
pub fn evaluate_current<S: Scalar>(
    gammas_hat: &[GammaOperator<S>],
    gammas_hat_tilde: &[GammaOperator<S>],
    phi_prime: &LatticeField<S>,
    phi: &LatticeField<S>,
) -> Result<CurrentSet<S>> {
    phi_prime.same_shape(phi)?;
    let grid = phi.grid().clone();
    let naxes = grid.naxes();
    let mut j = Vec::with_capacity(naxes);
    let mut j_tilde = Vec::with_capacity(naxes);
    let mut j_prime = Vec::with_capacity(naxes);
    let mut margin = 1usize;
    for mu in 0..naxes {
        let jm = match gammas_hat.iter().find(|g| g.axis == mu) {
            Some(g) => {
                margin = margin.max(g.stencil_margin());
                g.sandwich(phi_prime, phi)?
            }
            None => LatticeField::zeros(grid.clone(), phi.dim()),
        };
        let jt = match gammas_hat_tilde.iter().find(|g| g.axis == mu) {
            Some(g) => {
                margin = margin.max(g.stencil_margin());
                g.sandwich(phi_prime, phi)?
            }
            None => LatticeField::zeros(grid.clone(), phi.dim()),
        };
        let jp = jm.sub(&jt.zeta_pow(mu, -1)?)?;
        j.push(jm);
        j_tilde.push(jt);
        j_prime.push(jp);
    }
    Ok(CurrentSet { j, j_tilde, j_prime, margin })
}

impl<S: Scalar> CurrentSet<S> {
    /// Residual of Σ_μ ∂^μ J_μ + Σ_μ ∂†^μ J̃_μ.
    pub fn divergence_residual(&self) -> Result<LatticeField<S>> {
        let grid = self.j[0].grid().clone();
        let dim = self.j[0].dim();
        let mut acc = LatticeField::zeros(grid, dim);
        for (mu, comp) in self.j.iter().enumerate() {
            acc = acc.add(&comp.diff(mu)?)?;
        }
        for (mu, comp) in self.j_tilde.iter().enumerate() {
            if comp.max_norm() != 0.0 {
                acc = acc.add(&comp.conj_diff(mu)?)?;
            }
        }
        Ok(acc)
    }

    /// Residual of the single-divergence form Σ_μ ∂^μ J′_μ.
    pub fn divergence_residual_prime(&self) -> Result<LatticeField<S>> {
        let grid = self.j[0].grid().clone();
        let dim = self.j[0].dim();
        let mut acc = LatticeField::zeros(grid, dim);
        for (mu, comp) in self.j_prime.iter().enumerate() {
            acc = acc.add(&comp.diff(mu)?)?;
        }
        Ok(acc)
    }
}

/// Charge values along a trajectory, one per time slice.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChargeSeries {
    pub label: String,
    pub times: Vec<f64>,
    /// Flattened matrix entries of Q per slice (row-major, dim² values).
    pub values: Vec<Vec<f64>>,
    /// Trace of Q per slice.
    pub traces: Vec<f64>,
    /// max_t max_entry |Q(t) - Q(0)|.
    pub drift: f64,
    /// Largest |J_t| near a zero-padded spatial boundary (0 on periodic
    /// grids): an estimate of the neglected boundary flux.
    pub boundary_leak: f64,
}

/// Integrate the time component of a current over all non-time axes.
/// `j_t` lives on the full space-time grid; the result has one charge per
/// site of the time axis.
pub fn charge_series(j_t: &LatticeField<f64>, time_axis: usize, label: &str) -> Result<ChargeSeries> {
    let grid = j_t.grid().clone();
    let space_axes: Vec<usize> = (0..grid.naxes()).filter(|&a| a != time_axis).collect();
    let q = j_t.definite_integral(&space_axes)?;
    // q is a field over the time axis only
    let nt = grid.axes[time_axis].size;
    let b = j_t.dim() * j_t.dim();
    let mut times = Vec::with_capacity(nt);
    let mut values = Vec::with_capacity(nt);
    let mut traces = Vec::with_capacity(nt);
    for k in 0..nt {
        times.push(grid.axes[time_axis].coord(k));
        let blk = q.block(k);
        values.push(blk.to_vec());
        let mut tr = 0.0;
        for d in 0..j_t.dim() {
            tr += blk[d * j_t.dim() + d];
        }
        traces.push(tr);
    }
    let mut drift = 0.0f64;
    for v in &values {
        for (j, e) in v.iter().enumerate() {
            drift = drift.max((e - values[0][j]).abs());
        }
    }
    // boundary leak: |j_t| on the outermost layer of zero-padded space axes
    let mut leak = 0.0f64;
    for (site, idx) in grid.sites().enumerate() {
        let near_edge = space_axes.iter().any(|&a| {
            matches!(grid.axes[a].boundary, crate::grid::Boundary::ZeroPadded)
                && (idx[a] == 0 || idx[a] + 1 == grid.axes[a].size)
        });
        if near_edge {
            for e in &j_t.data()[site * b..(site + 1) * b] {
                leak = leak.max(e.abs());
            }
        }
    }
    Ok(ChargeSeries { label: label.to_string(), times, values, traces, drift, boundary_leak: leak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::EquationSpec;
    use crate::gamma::{build_gamma_hat, build_gamma_hat_tilde};
    use crate::grid::{AxisSpec, Boundary, CalculusSpec, ShiftOrientation};
    use std::collections::BTreeMap;

    #[test]
    fn zero_fields_give_zero_currents_and_charges() {
        let g = CalculusSpec::new(vec![
            AxisSpec::uniform("t", 4, ShiftOrientation::Backward, Boundary::Periodic),
            AxisSpec::uniform("x", 5, ShiftOrientation::Backward, Boundary::Periodic),
        ])
        .unwrap();
        let mut lam = BTreeMap::new();
        lam.insert(vec![0usize], LatticeField::constant(g.clone(), 1.0));
        lam.insert(vec![1usize], LatticeField::constant(g.clone(), -1.0));
        let eq = EquationSpec::new(g.clone(), 1, lam, BTreeMap::new()).unwrap();
        let gh = build_gamma_hat(&eq, 1e-10).unwrap();
        let phi = LatticeField::zeros(g.clone(), 1);
        let phip = LatticeField::constant(g, 2.0);
        let cur = evaluate_current(&gh, &[], &phip, &phi).unwrap();
        assert_eq!(cur.divergence_residual().unwrap().max_norm(), 0.0);
        let q = charge_series(&cur.j[0], 0, "test").unwrap();
        assert_eq!(q.drift, 0.0);
        assert!(q.values.iter().all(|v| v[0] == 0.0));
    }

    #[test]
    fn j_prime_divergence_matches_two_part_form() {
        // algebraic identity: Σ∂^μ J'_μ = Σ∂^μJ_μ + Σ∂†^μJ̃_μ for any
        // current fields, since ∂∘ζ⁻ = -∂†
        let g = CalculusSpec::new(vec![
            AxisSpec::uniform("t", 6, ShiftOrientation::Backward, Boundary::Periodic),
            AxisSpec::uniform("x", 7, ShiftOrientation::Backward, Boundary::Periodic),
        ])
        .unwrap();
        let j0 = LatticeField::from_fn(g.clone(), |i| ((i[0] * 3 + i[1]) % 5) as f64 - 2.0);
        let j1 = LatticeField::from_fn(g.clone(), |i| ((i[0] + 2 * i[1]) % 7) as f64 - 3.0);
        let jt0 = LatticeField::from_fn(g.clone(), |i| ((i[0] * 2 + i[1] * 5) % 6) as f64 - 2.5);
        let jt1 = LatticeField::from_fn(g.clone(), |i| ((i[0] * 7 + i[1] * 3) % 4) as f64 - 1.5);
        let cur = CurrentSet {
            j_prime: vec![
                j0.sub(&jt0.zeta_pow(0, -1).unwrap()).unwrap(),
                j1.sub(&jt1.zeta_pow(1, -1).unwrap()).unwrap(),
            ],
            j: vec![j0, j1],
            j_tilde: vec![jt0, jt1],
            margin: 1,
        };
        let two_part = cur.divergence_residual().unwrap();
        let one_part = cur.divergence_residual_prime().unwrap();
        let diff = two_part.sub(&one_part).unwrap();
        assert!(diff.max_norm() < 1e-13, "diff = {}", diff.max_norm());
    }

    #[test]
    fn tilde_currents_enter_conservation() {
        let g = CalculusSpec::new(vec![
            AxisSpec::uniform("t", 5, ShiftOrientation::Backward, Boundary::Periodic),
            AxisSpec::uniform("x", 6, ShiftOrientation::Backward, Boundary::Periodic),
        ])
        .unwrap();
        let mut lam = BTreeMap::new();
        lam.insert(vec![0usize], LatticeField::constant(g.clone(), 2.0));
        let mut lam_t = BTreeMap::new();
        lam_t.insert(vec![1usize], LatticeField::constant(g.clone(), -1.0));
        let eq = EquationSpec::new(g.clone(), 1, lam, lam_t).unwrap();
        let gh = build_gamma_hat(&eq, 1e-10).unwrap();
        let ght = build_gamma_hat_tilde(&eq, 1e-10).unwrap();
        let f = LatticeField::from_fn(g.clone(), |i| ((i[0] * 5 + i[1] * 2) % 9) as f64 - 4.0);
        let h = LatticeField::from_fn(g, |i| ((i[0] * 2 + i[1] * 7) % 8) as f64 - 3.0);
        let cur = evaluate_current(&gh, &ght, &f, &h).unwrap();
        assert!(cur.j_tilde[1].max_norm() > 0.0);
    }
}
