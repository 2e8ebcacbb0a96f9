//! Integrable-model presets: solution fields, consistency specs for the
//! kernel synthesis, λ-expansion towers, symmetry operators, and the
//! pass/fail gates the CLI reports.

pub mod pcm;
pub mod toda_double;
pub mod toda_general;
pub mod toda_mixed;

use crate::conservation::ChargeSeries;
use crate::error::{CalcError, Result};
use crate::field::LatticeField;
use crate::grid::CalculusSpec;
use std::sync::Arc;

pub use pcm::{PcmFamily, PcmParams};
pub use toda_double::TodaDoubleParams;
pub use toda_general::TodaGeneralParams;
pub use toda_mixed::TodaMixedParams;

/// Named model preset with its parameters.
#[derive(Clone, Debug)]
pub enum ModelPreset {
    Pcm2d(PcmParams),
    Pcm3d(PcmParams),
    TodaMixed(TodaMixedParams),
    TodaGeneralized(TodaGeneralParams),
    TodaDouble(TodaDoubleParams),
}

impl ModelPreset {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "pcm2d" => Ok(ModelPreset::Pcm2d(PcmParams::default())),
            "pcm3d" => Ok(ModelPreset::Pcm3d(PcmParams::default_3d())),
            "toda_mixed" => Ok(ModelPreset::TodaMixed(TodaMixedParams::default())),
            "toda_generalized" => Ok(ModelPreset::TodaGeneralized(TodaGeneralParams::default())),
            "toda_double" => Ok(ModelPreset::TodaDouble(TodaDoubleParams::default())),
            other => Err(CalcError::Config(format!(
                "unknown preset {other}; available: pcm2d, pcm3d, toda_mixed, toda_generalized, toda_double"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelPreset::Pcm2d(_) => "pcm2d",
            ModelPreset::Pcm3d(_) => "pcm3d",
            ModelPreset::TodaMixed(_) => "toda_mixed",
            ModelPreset::TodaGeneralized(_) => "toda_generalized",
            ModelPreset::TodaDouble(_) => "toda_double",
        }
    }
}

/// One verification gate of a model run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Gate {
    pub fn new(name: &str, value: f64, threshold: f64) -> Self {
        Gate { name: name.to_string(), value, threshold, pass: value <= threshold }
    }
}

/// Outcome of a full preset run: gates plus the charge series to export.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ModelReport {
    pub preset: String,
    pub gates: Vec<Gate>,
    pub charges: Vec<ChargeSeries>,
    pub notes: Vec<String>,
}

impl ModelReport {
    pub fn all_pass(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }
}

/// Run a preset end to end and collect its gates.
pub fn run_model(preset: &ModelPreset, tower_order: usize) -> Result<ModelReport> {
    match preset {
        ModelPreset::Pcm2d(p) => pcm::run_report(p, false, tower_order),
        ModelPreset::Pcm3d(p) => pcm::run_report(p, true, tower_order),
        ModelPreset::TodaMixed(p) => toda_mixed::run_report(p, tower_order),
        ModelPreset::TodaGeneralized(p) => toda_general::run_report(p, tower_order),
        ModelPreset::TodaDouble(p) => toda_double::run_report(p),
    }
}

// ---- shared field plumbing ----

/// Extract the hyperplane idx[axis] == index as a field on the reduced grid.
pub(crate) fn slice_field(
    f: &LatticeField<f64>,
    axis: usize,
    index: usize,
) -> Result<LatticeField<f64>> {
    let grid = f.grid().clone();
    let keep: Vec<usize> = (0..grid.naxes()).filter(|&a| a != axis).collect();
    let sub_axes: Vec<_> = keep.iter().map(|&a| grid.axes[a].clone()).collect();
    let sub_grid = CalculusSpec::new(sub_axes)?;
    let b = f.dim() * f.dim();
    let mut out = LatticeField::zeros(sub_grid.clone(), f.dim());
    for (site, idx) in grid.sites().enumerate() {
        if idx[axis] != index {
            continue;
        }
        let sub_idx: Vec<usize> = keep.iter().map(|&a| idx[a]).collect();
        let dst = sub_grid.flat(&sub_idx);
        let block: Vec<f64> = f.data()[site * b..(site + 1) * b].to_vec();
        out.data_mut()[dst * b..(dst + 1) * b].copy_from_slice(&block);
    }
    Ok(out)
}

/// Replicate a reduced-grid field along `axis` of the full grid.
pub(crate) fn broadcast_field(
    sub: &LatticeField<f64>,
    full_grid: &Arc<CalculusSpec>,
    axis: usize,
) -> Result<LatticeField<f64>> {
    let keep: Vec<usize> = (0..full_grid.naxes()).filter(|&a| a != axis).collect();
    let b = sub.dim() * sub.dim();
    let mut out = LatticeField::zeros(full_grid.clone(), sub.dim());
    for (site, idx) in full_grid.sites().enumerate() {
        let sub_idx: Vec<usize> = keep.iter().map(|&a| idx[a]).collect();
        let src = sub.grid().flat(&sub_idx);
        let block: Vec<f64> = sub.data()[src * b..(src + 1) * b].to_vec();
        out.data_mut()[site * b..(site + 1) * b].copy_from_slice(&block);
    }
    Ok(out)
}

/// Scalar field of axis coordinates.
pub(crate) fn coordinate_field(grid: &Arc<CalculusSpec>, axis: usize) -> LatticeField<f64> {
    LatticeField::from_fn(grid.clone(), |idx| grid.axes[axis].coord(idx[axis]))
}

/// Two-anchor potential: F with D_main F = rhs_main everywhere and
/// D_anchor F = rhs_anchor on the anchor slice (hence everywhere, when the
/// pair is integrable). Integration constants: F = 0 at the corner site.
pub(crate) fn dual_potential(
    rhs_main: &LatticeField<f64>,
    main_axis: usize,
    rhs_anchor: &LatticeField<f64>,
    anchor_axis: usize,
    main_deriv: crate::calculus::Deriv,
) -> Result<LatticeField<f64>> {
    let full_grid = rhs_main.grid().clone();
    let f = rhs_main.inverse_diff(main_axis, main_deriv, f64::INFINITY)?.field;
    let defect = rhs_anchor.sub(&f.diff(anchor_axis)?)?;
    let defect_slice = slice_field(&defect, main_axis, 0)?;
    let anchor_in_sub = anchor_axis - usize::from(anchor_axis > main_axis);
    let corr_sub = defect_slice
        .inverse_diff(anchor_in_sub, crate::calculus::Deriv::Plain, f64::INFINITY)?
        .field;
    let corr = broadcast_field(&corr_sub, &full_grid, main_axis)?;
    f.add(&corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AxisSpec, Boundary, ShiftOrientation};

    #[test]
    fn slice_and_broadcast_roundtrip() {
        let g = CalculusSpec::new(vec![
            AxisSpec::uniform("t", 3, ShiftOrientation::Forward, Boundary::Periodic),
            AxisSpec::uniform("x", 4, ShiftOrientation::Forward, Boundary::Periodic),
        ])
        .unwrap();
        let f = LatticeField::from_fn(g.clone(), |i| (10 * i[1]) as f64);
        let s = slice_field(&f, 0, 1).unwrap();
        assert_eq!(s.grid().naxes(), 1);
        assert_eq!(s.at(&[2]), 20.0);
        let back = broadcast_field(&s, &g, 0).unwrap();
        assert_eq!(back, f);
    }
}
