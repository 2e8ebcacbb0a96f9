//! Deformed discrete calculus on lattice fields.
//!
//! Per axis the derivative is ∂ = (ζ - 1) (uniform), gap⁻¹(ζ - 1)
//! (nonuniform), or a central difference (sampled continuous, where ζ is the
//! identity). The conjugated derivative is ∂† = -∂∘ζ⁻ and reduces to -∂ on
//! continuous axes. Every identity claimed exact holds on interior sites;
//! zero-padded boundaries are handled by the shift itself.

use crate::error::{CalcError, Result};
use crate::field::LatticeField;
use crate::grid::{AxisKind, Boundary, ShiftOrientation};
use crate::scalar::Scalar;

/// Which derivative a word letter applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Deriv {
    Plain,
    Conjugated,
}

impl Deriv {
    pub fn flip(self) -> Self {
        match self {
            Deriv::Plain => Deriv::Conjugated,
            Deriv::Conjugated => Deriv::Plain,
        }
    }
}

/// Result of an indefinite integral; `tail_magnitude` measures how badly the
/// summed field violates the decay assumption at the truncation boundary.
#[derive(Clone, Debug)]
pub struct InverseDiffResult<S: Scalar> {
    pub field: LatticeField<S>,
    pub tail_magnitude: f64,
    pub tail_warning: bool,
}

impl<S: Scalar> LatticeField<S> {
    /// ζ^power along `axis`. Identity on sampled-continuous axes.
    pub fn zeta_pow(&self, axis: usize, power: i64) -> Result<Self> {
        let ax = self.grid().axis(axis)?;
        if !ax.is_discrete() {
            return Ok(self.clone());
        }
        self.translate(axis, power * ax.orientation.step())
    }

    /// Shift operator: values move by `power` ζ-applications along `axis`.
    /// Errors on sampled-continuous axes, where no lattice shift exists.
    pub fn shift(&self, axis: usize, power: i64) -> Result<Self> {
        let ax = self.grid().axis(axis)?;
        if !ax.is_discrete() {
            return Err(CalcError::UnsupportedAxis {
                axis,
                reason: "shift is undefined on a sampled-continuous axis".into(),
            });
        }
        if power.unsigned_abs() as usize > ax.size {
            return Err(CalcError::ShiftTooLarge { power, size: ax.size });
        }
        self.translate(axis, power * ax.orientation.step())
    }

    /// Raw translation by `offset` sites (positive = toward larger index).
    fn translate(&self, axis: usize, offset: i64) -> Result<Self> {
        let grid = self.grid().clone();
        let b = self.dim() * self.dim();
        let mut out = LatticeField::zeros(grid.clone(), self.dim());
        for (site, idx) in grid.sites().enumerate() {
            if let Some(src) = grid.shifted_site(&idx, axis, offset) {
                let s = grid.flat(&src);
                let block: Vec<S> = self.data()[s * b..(s + 1) * b].to_vec();
                out.data_mut()[site * b..(site + 1) * b].copy_from_slice(&block);
            }
            // zero padding: leave zeros
        }
        Ok(out)
    }

    /// Signed derivative gap at site k along a discrete axis: x_{σ(k)} - x_k,
    /// extended at edges by the nearest defined gap.
    fn signed_gap(&self, axis: usize, k: usize) -> f64 {
        let ax = &self.grid().axes[axis];
        match (&ax.kind, ax.orientation) {
            // uniform ∂ = ζ - 1 carries no gap factor in either orientation
            (AxisKind::UniformDiscrete, _) => 1.0,
            (AxisKind::NonuniformDiscrete { coords }, orient) => {
                let n = coords.len();
                match orient {
                    ShiftOrientation::Forward => {
                        let kk = k.min(n - 2);
                        coords[kk + 1] - coords[kk]
                    }
                    ShiftOrientation::Backward => {
                        let kk = k.max(1);
                        coords[kk - 1] - coords[kk]
                    }
                }
            }
            (AxisKind::SampledContinuous { step }, _) => *step,
        }
    }

    /// Discrete derivative along `axis`.
    pub fn diff(&self, axis: usize) -> Result<Self> {
        let ax = self.grid().axis(axis)?.clone();
        match &ax.kind {
            AxisKind::UniformDiscrete => {
                let shifted = self.zeta_pow(axis, 1)?;
                shifted.sub(self)
            }
            AxisKind::NonuniformDiscrete { coords } => {
                if S::EXACT {
                    return Err(CalcError::ExactModeUnsupported(
                        "nonuniform derivative divides by grid gaps".into(),
                    ));
                }
                let n = coords.len();
                let shifted = self.zeta_pow(axis, 1)?;
                let raw = shifted.sub(self)?;
                let b = self.dim() * self.dim();
                let mut out = raw.clone();
                for (site, idx) in self.grid().sites().enumerate() {
                    let g = self.signed_gap(axis, idx[axis].min(n - 1));
                    for j in 0..b {
                        out.data_mut()[site * b + j] =
                            raw.data()[site * b + j].div_real(g).expect("checked EXACT above");
                    }
                }
                Ok(out)
            }
            AxisKind::SampledContinuous { step } => {
                if S::EXACT {
                    return Err(CalcError::ExactModeUnsupported(
                        "continuous derivative divides by the step".into(),
                    ));
                }
                let h = *step;
                let fwd = self.translate(axis, 1)?;
                let bwd = self.translate(axis, -1)?;
                let b = self.dim() * self.dim();
                let mut out = LatticeField::zeros(self.grid().clone(), self.dim());
                let size = ax.size;
                for (site, idx) in self.grid().sites().enumerate() {
                    let k = idx[axis];
                    let interior = match ax.boundary {
                        Boundary::Periodic => true,
                        Boundary::ZeroPadded => k > 0 && k + 1 < size,
                    };
                    for j in 0..b {
                        let v = if interior {
                            fwd.data()[site * b + j]
                                .sub(bwd.data()[site * b + j])
                                .div_real(2.0 * h)
                                .expect("checked EXACT above")
                        } else if k == 0 {
                            fwd.data()[site * b + j]
                                .sub(self.data()[site * b + j])
                                .div_real(h)
                                .expect("checked EXACT above")
                        } else {
                            self.data()[site * b + j]
                                .sub(bwd.data()[site * b + j])
                                .div_real(h)
                                .expect("checked EXACT above")
                        };
                        out.data_mut()[site * b + j] = v;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Conjugated derivative ∂† = -∂∘ζ⁻ (-∂ on continuous axes). On discrete
    /// axes the composition collapses to the single-application stencil
    /// (ζ⁻f - f)/gap, which agrees with -∂(ζ⁻f) on interior sites and keeps
    /// one more valid site at a zero-padded edge.
    pub fn conj_diff(&self, axis: usize) -> Result<Self> {
        let ax = self.grid().axis(axis)?.clone();
        match &ax.kind {
            AxisKind::UniformDiscrete => self.zeta_pow(axis, -1)?.sub(self),
            AxisKind::NonuniformDiscrete { coords } => {
                if S::EXACT {
                    return Err(CalcError::ExactModeUnsupported(
                        "nonuniform derivative divides by grid gaps".into(),
                    ));
                }
                let n = coords.len();
                let raw = self.zeta_pow(axis, -1)?.sub(self)?;
                let b = self.dim() * self.dim();
                let mut out = raw.clone();
                for (site, idx) in self.grid().sites().enumerate() {
                    let g = self.signed_gap(axis, idx[axis].min(n - 1));
                    for j in 0..b {
                        out.data_mut()[site * b + j] =
                            raw.data()[site * b + j].div_real(g).expect("checked EXACT above");
                    }
                }
                Ok(out)
            }
            AxisKind::SampledContinuous { .. } => Ok(self.diff(axis)?.neg()),
        }
    }

    pub fn apply_deriv(&self, axis: usize, which: Deriv) -> Result<Self> {
        match which {
            Deriv::Plain => self.diff(axis),
            Deriv::Conjugated => self.conj_diff(axis),
        }
    }

    /// Integral weight at site k along `axis` (|derivative gap|, trapezoid on
    /// continuous axes).
    fn integral_weight(&self, axis: usize, k: usize) -> f64 {
        let ax = &self.grid().axes[axis];
        match &ax.kind {
            AxisKind::UniformDiscrete => 1.0,
            AxisKind::NonuniformDiscrete { .. } => self.signed_gap(axis, k).abs(),
            AxisKind::SampledContinuous { step } => match ax.boundary {
                Boundary::Periodic => *step,
                Boundary::ZeroPadded => {
                    if k == 0 || k + 1 == ax.size {
                        *step / 2.0
                    } else {
                        *step
                    }
                }
            },
        }
    }

    /// Definite integral over the named axes; returns a field on the
    /// remaining axes (a zero-axis grid holds a single value).
    pub fn definite_integral(&self, axes: &[usize]) -> Result<Self> {
        for &a in axes {
            self.grid().axis(a)?;
            let ax = &self.grid().axes[a];
            if S::EXACT && !matches!(ax.kind, AxisKind::UniformDiscrete) {
                return Err(CalcError::ExactModeUnsupported(
                    "weighted integrals need real weights".into(),
                ));
            }
        }
        let keep: Vec<usize> =
            (0..self.grid().naxes()).filter(|i| !axes.contains(i)).collect();
        let sub_axes: Vec<_> = keep.iter().map(|&i| self.grid().axes[i].clone()).collect();
        let sub_grid = crate::grid::CalculusSpec::new(sub_axes)?;
        let b = self.dim() * self.dim();
        let mut out = LatticeField::zeros(sub_grid.clone(), self.dim());
        for (site, idx) in self.grid().sites().enumerate() {
            let mut w = 1.0;
            let mut weighted_uniformly = true;
            for &a in axes {
                let wa = self.integral_weight(a, idx[a]);
                if wa != 1.0 {
                    weighted_uniformly = false;
                }
                w *= wa;
            }
            let sub_idx: Vec<usize> = keep.iter().map(|&i| idx[i]).collect();
            let dst = sub_grid.flat(&sub_idx);
            for j in 0..b {
                let v = self.data()[site * b + j];
                let term = if weighted_uniformly {
                    v
                } else {
                    v.mul_real(w).expect("EXACT mode rejected above")
                };
                let cur: S = out.data()[dst * b + j];
                out.data_mut()[dst * b + j] = cur.add(term);
            }
        }
        Ok(out)
    }

    /// Scalar value of a fully-integrated dim-1 field.
    pub fn scalar_value(&self) -> S {
        debug_assert_eq!(self.grid().naxes(), 0);
        debug_assert_eq!(self.dim(), 1);
        self.data()[0]
    }

    /// Indefinite integral: F with apply_deriv(F, axis, which) = f on interior
    /// sites, anchored at zero past the summation boundary. The truncated
    /// geometric series needs f ~ 0 at that boundary; `tail_tol` controls the
    /// warning flag.
    pub fn inverse_diff(&self, axis: usize, which: Deriv, tail_tol: f64) -> Result<InverseDiffResult<S>> {
        let ax = self.grid().axis(axis)?.clone();
        match &ax.kind {
            AxisKind::SampledContinuous { step } => {
                if S::EXACT {
                    return Err(CalcError::ExactModeUnsupported(
                        "continuous integral needs real weights".into(),
                    ));
                }
                // cumulative trapezoid anchored at the left boundary
                let h = *step;
                let sign = match which {
                    Deriv::Plain => 1.0,
                    Deriv::Conjugated => -1.0,
                };
                let out = self.scan_axis(axis, |col: &[S], out: &mut [S]| {
                    let b = out.len() / col.len();
                    let n = col.len() / b;
                    for j in 0..b {
                        let mut acc = S::zero();
                        out[j] = acc;
                        for k in 1..n {
                            let step_val = col[(k - 1) * b + j]
                                .add(col[k * b + j])
                                .mul_real(sign * h / 2.0)
                                .expect("EXACT rejected");
                            acc = acc.add(step_val);
                            out[k * b + j] = acc;
                        }
                    }
                });
                Ok(InverseDiffResult { field: out, tail_magnitude: 0.0, tail_warning: false })
            }
            _ => {
                // Discrete: F = -(cumulative sum of gap-weighted f), summed from
                // the far end in the summation direction. Plain ∂⁻¹ sums in the
                // ζ direction, conjugated (∂†)⁻¹ in the ζ⁻ direction.
                let toward_larger_index = match (ax.orientation, which) {
                    (ShiftOrientation::Forward, Deriv::Plain) => true,
                    (ShiftOrientation::Forward, Deriv::Conjugated) => false,
                    (ShiftOrientation::Backward, Deriv::Plain) => false,
                    (ShiftOrientation::Backward, Deriv::Conjugated) => true,
                };
                let needs_weights = !matches!(ax.kind, AxisKind::UniformDiscrete);
                if S::EXACT && needs_weights {
                    return Err(CalcError::ExactModeUnsupported(
                        "nonuniform integral needs real weights".into(),
                    ));
                }
                let n = ax.size;
                let gaps: Vec<f64> = (0..n).map(|k| self.signed_gap(axis, k)).collect();
                let out = self.scan_axis(axis, |col: &[S], out: &mut [S]| {
                    let b = col.len() / n;
                    for j in 0..b {
                        let mut acc = S::zero();
                        let order: Box<dyn Iterator<Item = usize>> = if toward_larger_index {
                            Box::new((0..n).rev())
                        } else {
                            Box::new(0..n)
                        };
                        for k in order {
                            let term = if needs_weights {
                                col[k * b + j].mul_real(gaps[k]).expect("EXACT rejected")
                            } else {
                                col[k * b + j]
                            };
                            acc = acc.add(term);
                            out[k * b + j] = acc.neg();
                        }
                    }
                });
                // Decay check at the summation start (periodic: wrap obstruction).
                let tail_magnitude = match ax.boundary {
                    Boundary::Periodic => {
                        let total = self.definite_integral(&[axis])?;
                        total.max_norm()
                    }
                    Boundary::ZeroPadded => {
                        let b = self.dim() * self.dim();
                        let mut worst = 0.0f64;
                        for (site, idx) in self.grid().sites().enumerate() {
                            let k = idx[axis];
                            let near_start = if toward_larger_index { k + 2 >= n } else { k < 2 };
                            if near_start {
                                for v in &self.data()[site * b..(site + 1) * b] {
                                    worst = worst.max(v.abs_f64());
                                }
                            }
                        }
                        worst
                    }
                };
                Ok(InverseDiffResult {
                    field: out,
                    tail_magnitude,
                    tail_warning: tail_magnitude > tail_tol,
                })
            }
        }
    }

    /// Run a per-column scan along `axis`: `f(column_data, out_column)` where
    /// columns are contiguous copies of all blocks along the axis.
    fn scan_axis(&self, axis: usize, f: impl Fn(&[S], &mut [S])) -> Self {
        let grid = self.grid().clone();
        let b = self.dim() * self.dim();
        let n = grid.axes[axis].size;
        let mut out = LatticeField::zeros(grid.clone(), self.dim());
        // enumerate all sites with idx[axis] == 0, walk the column
        let strides = grid.strides();
        for (site, idx) in grid.sites().enumerate() {
            if idx[axis] != 0 {
                continue;
            }
            let mut col = vec![S::zero(); n * b];
            for k in 0..n {
                let flat = site + k * strides[axis];
                col[k * b..(k + 1) * b].copy_from_slice(&self.data()[flat * b..(flat + 1) * b]);
            }
            let mut res = vec![S::zero(); n * b];
            f(&col, &mut res);
            for k in 0..n {
                let flat = site + k * strides[axis];
                out.data_mut()[flat * b..(flat + 1) * b].copy_from_slice(&res[k * b..(k + 1) * b]);
            }
        }
        out
    }
}

/// Residuals of the three Leibniz-rule forms along `axis`:
/// r1 = ∂(fg) - (∂f)g - (ζf)(∂g)
/// r2 = ∂[(ζ⁻f)g] - (-∂†f)g - f(∂g)
/// r3 = ∂†[(ζf)g] - (-∂f)g - f(∂†g)
/// All vanish identically on interior sites of discrete axes.
pub fn leibniz_residuals<S: Scalar>(
    f: &LatticeField<S>,
    g: &LatticeField<S>,
    axis: usize,
) -> Result<(LatticeField<S>, LatticeField<S>, LatticeField<S>)> {
    f.same_shape(g)?;
    let fg = f.mul(g)?;
    let r1 = fg
        .diff(axis)?
        .sub(&f.diff(axis)?.mul(g)?)?
        .sub(&f.zeta_pow(axis, 1)?.mul(&g.diff(axis)?)?)?;

    let r2 = f
        .zeta_pow(axis, -1)?
        .mul(g)?
        .diff(axis)?
        .add(&f.conj_diff(axis)?.mul(g)?)?
        .sub(&f.mul(&g.diff(axis)?)?)?;

    let r3 = f
        .zeta_pow(axis, 1)?
        .mul(g)?
        .conj_diff(axis)?
        .add(&f.diff(axis)?.mul(g)?)?
        .sub(&f.mul(&g.conj_diff(axis)?)?)?;

    Ok((r1, r2, r3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AxisSpec, Boundary, CalculusSpec, ShiftOrientation};
    use std::sync::Arc;

    fn line(n: usize, orient: ShiftOrientation, bnd: Boundary) -> Arc<CalculusSpec> {
        CalculusSpec::new(vec![AxisSpec::uniform("x", n, orient, bnd)]).unwrap()
    }

    fn field_i64(grid: Arc<CalculusSpec>, vals: &[i64]) -> LatticeField<i64> {
        LatticeField::from_data(grid, 1, vals.to_vec()).unwrap()
    }

    #[test]
    fn shift_forward_zero_padded() {
        let g = line(3, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = field_i64(g, &[1, 3, 6]);
        let s = f.shift(0, 1).unwrap();
        assert_eq!(s.data(), &[3, 6, 0]);
    }

    #[test]
    fn shift_constant_periodic_invariant() {
        let g = line(5, ShiftOrientation::Forward, Boundary::Periodic);
        let f = LatticeField::constant(g, 7i64);
        assert_eq!(f.shift(0, 1).unwrap(), f);
    }

    #[test]
    fn shift_roundtrip_interior() {
        let g = line(6, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = field_i64(g, &[2, -1, 4, 9, 0, 5]);
        let rt = f.shift(0, 1).unwrap().shift(0, -1).unwrap();
        // interior sites match; site 0 lost its value past the edge
        assert_eq!(&rt.data()[1..6], &f.data()[1..6]);
    }

    #[test]
    fn shift_rejects_continuous_axis() {
        let g = CalculusSpec::new(vec![AxisSpec::continuous("t", 4, 0.5, Boundary::ZeroPadded)]).unwrap();
        let f = LatticeField::constant(g, 1.0f64);
        assert!(matches!(f.shift(0, 1), Err(CalcError::UnsupportedAxis { .. })));
    }

    #[test]
    fn diff_uniform_forward() {
        let g = line(3, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = field_i64(g, &[1, 3, 6]);
        let d = f.diff(0).unwrap();
        assert_eq!(&d.data()[0..2], &[2, 3]);
    }

    #[test]
    fn diff_constant_is_zero() {
        let g = line(4, ShiftOrientation::Backward, Boundary::Periodic);
        let f = LatticeField::constant(g, 11i64);
        assert_eq!(f.diff(0).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn diff_nonuniform_matches_hand_values() {
        // f_k = x_k^2 on {0,1,3}: [(1-0)/(1-0), (9-1)/(3-1)] = [1, 4]
        let g = CalculusSpec::new(vec![AxisSpec::nonuniform(
            "x",
            vec![0.0, 1.0, 3.0],
            ShiftOrientation::Forward,
            Boundary::ZeroPadded,
        )])
        .unwrap();
        let f = LatticeField::from_fn(g, |idx| {
            let x = [0.0f64, 1.0, 3.0][idx[0]];
            x * x
        });
        let d = f.diff(0).unwrap();
        assert_eq!(d.data()[0], 1.0);
        assert_eq!(d.data()[1], 4.0);
    }

    #[test]
    fn conj_diff_negative_backward_difference() {
        // forward ∂ with zero padding: ∂†f = -(f_k - f_{k-1}) = [-1, -2, -3]
        let g = line(3, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = field_i64(g, &[1, 3, 6]);
        let d = f.conj_diff(0).unwrap();
        assert_eq!(d.data(), &[-1, -2, -3]);
    }

    #[test]
    fn conj_of_conj_is_plain_on_interior() {
        // (∂†)† = -∂†∘ζ = ∂
        let g = line(8, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = field_i64(g, &[3, 1, 4, 1, 5, 9, 2, 6]);
        let lhs = f.zeta_pow(0, 1).unwrap().conj_diff(0).unwrap().neg();
        let rhs = f.diff(0).unwrap();
        let diff = lhs.sub(&rhs).unwrap();
        assert_eq!(diff.interior_max_norm(2), 0.0);
    }

    #[test]
    fn leibniz_exact_on_random_integers() {
        let g = line(16, ShiftOrientation::Forward, Boundary::Periodic);
        let f = LatticeField::from_fn(g.clone(), |idx| ((idx[0] * 7 + 3) % 11) as i64 - 5);
        let h = LatticeField::from_fn(g, |idx| ((idx[0] * 5 + 1) % 13) as i64 - 6);
        let (r1, r2, r3) = leibniz_residuals(&f, &h, 0).unwrap();
        assert_eq!(r1.max_norm(), 0.0);
        assert_eq!(r2.max_norm(), 0.0);
        assert_eq!(r3.max_norm(), 0.0);
    }

    #[test]
    fn leibniz_delta_fields() {
        let g = line(8, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = LatticeField::from_fn(g.clone(), |idx| (idx[0] == 0) as i64);
        let h = LatticeField::from_fn(g, |idx| (idx[0] == 1) as i64);
        let (r1, r2, r3) = leibniz_residuals(&f, &h, 0).unwrap();
        assert_eq!(r1.interior_max_norm(2), 0.0);
        assert_eq!(r2.interior_max_norm(2), 0.0);
        assert_eq!(r3.interior_max_norm(2), 0.0);
    }

    #[test]
    fn integral_plain_sum_and_weighted() {
        let g = line(3, ShiftOrientation::Forward, Boundary::Periodic);
        let f = field_i64(g, &[1, 2, 3]);
        assert_eq!(f.definite_integral(&[0]).unwrap().scalar_value(), 6);

        // [1,2] with gaps [0.5, 2.0] -> 0.5*1 + 2.0*2 = 4.5
        let gn = CalculusSpec::new(vec![AxisSpec::nonuniform(
            "x",
            vec![0.0, 0.5, 2.5],
            ShiftOrientation::Forward,
            Boundary::ZeroPadded,
        )])
        .unwrap();
        let fv = LatticeField::from_data(gn, 1, vec![1.0f64, 2.0, 0.0]).unwrap();
        let v = fv.definite_integral(&[0]).unwrap().scalar_value();
        assert!((v - 4.5).abs() < 1e-15);
    }

    #[test]
    fn zero_integral_of_zero_field() {
        let g = line(5, ShiftOrientation::Forward, Boundary::Periodic);
        let f: LatticeField<i64> = LatticeField::zeros(g, 1);
        assert_eq!(f.definite_integral(&[0]).unwrap().scalar_value(), 0i64);
    }

    #[test]
    fn summation_by_parts_periodic() {
        let g = line(12, ShiftOrientation::Backward, Boundary::Periodic);
        let f = LatticeField::from_fn(g.clone(), |i| ((i[0] * i[0] + 2) % 9) as i64 - 4);
        let h = LatticeField::from_fn(g, |i| ((i[0] * 3 + 5) % 7) as i64 - 3);
        let total = f.zeta_pow(0, -1).unwrap().mul(&h).unwrap().diff(0).unwrap();
        assert_eq!(total.definite_integral(&[0]).unwrap().scalar_value(), 0);
        // hence sum (-∂†f)g = -sum f(∂g)
        let lhs = f.conj_diff(0).unwrap().neg().mul(&h).unwrap();
        let rhs = f.mul(&h.diff(0).unwrap()).unwrap();
        assert_eq!(
            lhs.definite_integral(&[0]).unwrap().scalar_value(),
            -rhs.definite_integral(&[0]).unwrap().scalar_value()
        );
    }

    #[test]
    fn inverse_diff_zero_is_zero() {
        let g = line(6, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f: LatticeField<i64> = LatticeField::zeros(g, 1);
        let r = f.inverse_diff(0, Deriv::Plain, 1e-12).unwrap();
        assert_eq!(r.field.max_norm(), 0.0);
        assert!(!r.tail_warning);
    }

    #[test]
    fn inverse_diff_roundtrip() {
        let g = line(10, ShiftOrientation::Forward, Boundary::ZeroPadded);
        // decaying toward the right end
        let f = LatticeField::from_data(g, 1, vec![4, -2, 7, 1, -3, 2, 1, 0, 0, 0]).unwrap();
        let r = f.inverse_diff(0, Deriv::Plain, 0.5).unwrap();
        assert!(!r.tail_warning);
        let d = r.field.diff(0).unwrap();
        let err = d.sub(&f).unwrap();
        assert_eq!(err.interior_max_norm(1), 0.0);
    }

    #[test]
    fn inverse_diff_delta_gives_step() {
        // ∂⁻¹ = -Σ ζ^m truncated: for f = δ_{k,3} on a forward axis,
        // F_k = -1 for k <= 3 and 0 beyond.
        let g = line(6, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = LatticeField::from_fn(g, |i| (i[0] == 3) as i64);
        let r = f.inverse_diff(0, Deriv::Plain, 0.5).unwrap();
        assert_eq!(r.field.data(), &[-1, -1, -1, -1, 0, 0]);
    }

    #[test]
    fn inverse_diff_conjugated_roundtrip() {
        let g = line(10, ShiftOrientation::Backward, Boundary::ZeroPadded);
        let f = LatticeField::from_data(g, 1, vec![0, 0, 0, 1, -3, 2, 5, -1, 2, 1]).unwrap();
        let r = f.inverse_diff(0, Deriv::Conjugated, 0.5).unwrap();
        let d = r.field.conj_diff(0).unwrap();
        let err = d.sub(&f).unwrap();
        assert_eq!(err.interior_max_norm(1), 0.0);
    }

    #[test]
    fn inverse_diff_tail_warning_fires() {
        let g = line(6, ShiftOrientation::Forward, Boundary::ZeroPadded);
        let f = LatticeField::constant(g, 3i64);
        let r = f.inverse_diff(0, Deriv::Plain, 0.5).unwrap();
        assert!(r.tail_warning);
        assert_eq!(r.tail_magnitude, 3.0);
    }

    #[test]
    fn continuous_central_difference_converges() {
        // residual of ∂(x^3) vs 3x^2 is O(h^2)
        let mut errs = Vec::new();
        for &n in &[17usize, 33, 65] {
            let h = 1.0 / (n - 1) as f64;
            let g = CalculusSpec::new(vec![AxisSpec::continuous("x", n, h, Boundary::ZeroPadded)]).unwrap();
            let f = LatticeField::from_fn(g.clone(), |i| {
                let x = i[0] as f64 * h;
                x * x * x
            });
            let want = LatticeField::from_fn(g, |i| {
                let x = i[0] as f64 * h;
                3.0 * x * x
            });
            let err = f.diff(0).unwrap().sub(&want).unwrap().interior_max_norm(1);
            errs.push(err);
        }
        assert!(errs[0] / errs[1] > 3.5);
        assert!(errs[1] / errs[2] > 3.5);
    }

    #[test]
    fn continuous_inverse_diff_roundtrip() {
        let n = 65;
        let h = 1.0 / (n - 1) as f64;
        let g = CalculusSpec::new(vec![AxisSpec::continuous("x", n, h, Boundary::ZeroPadded)]).unwrap();
        let f = LatticeField::from_fn(g, |i| {
            let x = i[0] as f64 * h;
            (2.0 * x).sin()
        });
        let r = f.inverse_diff(0, Deriv::Plain, 1e30).unwrap();
        let err = r.field.diff(0).unwrap().sub(&f).unwrap().interior_max_norm(1);
        assert!(err < 2e-3, "err = {err}");
    }
}
