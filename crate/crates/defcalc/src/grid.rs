//! Grid geometry and per-axis calculus configuration.
//!
//! A `CalculusSpec` fixes, per axis, which derivative is meant by `diff`,
//! which way the transformation operator ζ shifts, and how the boundary is
//! closed. Shift orientation is deliberately per-axis configuration: discrete
//! models in the literature use both ζf_k = f_{k+1} and ζf_k = f_{k-1}, and a
//! global default would silently break one family of presets.

use crate::error::{CalcError, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Derivative flavour of one axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AxisKind {
    /// ∂f_k = f_{σ(k)} - f_k with σ the oriented shift.
    UniformDiscrete,
    /// ∂f_k = (x_{σ(k)} - x_k)^{-1} (f_{σ(k)} - f_k); coords strictly ascending.
    NonuniformDiscrete { coords: Vec<f64> },
    /// Sampled continuous coordinate: central differences, ζ = identity.
    SampledContinuous { step: f64 },
}

/// Direction the transformation operator ζ moves values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftOrientation {
    /// ζf_k = f_{k+1}
    Forward,
    /// ζf_k = f_{k-1}
    Backward,
}

impl ShiftOrientation {
    /// Site offset of one ζ application.
    pub fn step(self) -> i64 {
        match self {
            ShiftOrientation::Forward => 1,
            ShiftOrientation::Backward => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    ZeroPadded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub size: usize,
    pub kind: AxisKind,
    pub orientation: ShiftOrientation,
    pub boundary: Boundary,
}

impl AxisSpec {
    pub fn uniform(name: &str, size: usize, orientation: ShiftOrientation, boundary: Boundary) -> Self {
        AxisSpec { name: name.to_string(), size, kind: AxisKind::UniformDiscrete, orientation, boundary }
    }

    pub fn nonuniform(name: &str, coords: Vec<f64>, orientation: ShiftOrientation, boundary: Boundary) -> Self {
        AxisSpec {
            name: name.to_string(),
            size: coords.len(),
            kind: AxisKind::NonuniformDiscrete { coords },
            orientation,
            boundary,
        }
    }

    pub fn continuous(name: &str, size: usize, step: f64, boundary: Boundary) -> Self {
        AxisSpec {
            name: name.to_string(),
            size,
            kind: AxisKind::SampledContinuous { step },
            orientation: ShiftOrientation::Forward,
            boundary,
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, AxisKind::SampledContinuous { .. })
    }

    /// Coordinate of site k along this axis.
    pub fn coord(&self, k: usize) -> f64 {
        match &self.kind {
            AxisKind::UniformDiscrete => k as f64,
            AxisKind::NonuniformDiscrete { coords } => coords[k],
            AxisKind::SampledContinuous { step } => k as f64 * step,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(CalcError::Config(format!("axis {} has zero size", self.name)));
        }
        match &self.kind {
            AxisKind::NonuniformDiscrete { coords } => {
                if coords.len() != self.size {
                    return Err(CalcError::Config(format!(
                        "axis {}: {} coords for size {}",
                        self.name,
                        coords.len(),
                        self.size
                    )));
                }
                if !coords.windows(2).all(|w| w[0] < w[1]) {
                    return Err(CalcError::Config(format!(
                        "axis {}: nonuniform coords must be strictly increasing",
                        self.name
                    )));
                }
            }
            AxisKind::SampledContinuous { step } => {
                if !(*step > 0.0) {
                    return Err(CalcError::Config(format!("axis {}: step must be > 0", self.name)));
                }
            }
            AxisKind::UniformDiscrete => {}
        }
        Ok(())
    }
}

/// Per-axis calculus description shared by all fields on one grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalculusSpec {
    pub axes: Vec<AxisSpec>,
}

impl CalculusSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Arc<Self>> {
        for ax in &axes {
            ax.validate()?;
        }
        Ok(Arc::new(CalculusSpec { axes }))
    }

    pub fn naxes(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    pub fn nsites(&self) -> usize {
        self.axes.iter().map(|a| a.size).product()
    }

    pub fn axis(&self, axis: usize) -> Result<&AxisSpec> {
        self.axes.get(axis).ok_or(CalcError::AxisOutOfRange { axis, naxes: self.axes.len() })
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| CalcError::Config(format!("no axis named {name}")))
    }

    /// Row-major strides of the site index space.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for i in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.axes[i + 1].size;
        }
        strides
    }

    /// Flat index of a multi-index.
    pub fn flat(&self, idx: &[usize]) -> usize {
        let strides = self.strides();
        idx.iter().zip(&strides).map(|(i, s)| i * s).sum()
    }

    /// Iterate all multi-indices in row-major order.
    pub fn sites(&self) -> SiteIter {
        SiteIter { shape: self.shape(), next: Some(vec![0; self.axes.len()]) }
    }

    /// Source site for one ζ^power application along `axis`, honouring the
    /// boundary. Returns `None` where zero padding applies.
    pub fn shifted_site(&self, idx: &[usize], axis: usize, offset: i64) -> Option<Vec<usize>> {
        let size = self.axes[axis].size as i64;
        let raw = idx[axis] as i64 + offset;
        let k = match self.axes[axis].boundary {
            Boundary::Periodic => raw.rem_euclid(size),
            Boundary::ZeroPadded => {
                if raw < 0 || raw >= size {
                    return None;
                }
                raw
            }
        };
        let mut out = idx.to_vec();
        out[axis] = k as usize;
        Some(out)
    }
}

pub struct SiteIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for SiteIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for ax in (0..self.shape.len()).rev() {
            succ[ax] += 1;
            if succ[ax] < self.shape[ax] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[ax] = 0;
        }
        // ran off the end
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_row_major() {
        let g = CalculusSpec::new(vec![
            AxisSpec::uniform("t", 3, ShiftOrientation::Forward, Boundary::Periodic),
            AxisSpec::uniform("x", 4, ShiftOrientation::Forward, Boundary::Periodic),
        ])
        .unwrap();
        assert_eq!(g.strides(), vec![4, 1]);
        assert_eq!(g.flat(&[2, 3]), 11);
        assert_eq!(g.sites().count(), 12);
    }

    #[test]
    fn nonuniform_coords_must_increase() {
        let bad = CalculusSpec::new(vec![AxisSpec::nonuniform(
            "x",
            vec![0.0, 2.0, 1.0],
            ShiftOrientation::Forward,
            Boundary::ZeroPadded,
        )]);
        assert!(bad.is_err());
    }

    #[test]
    fn periodic_shift_wraps() {
        let g = CalculusSpec::new(vec![AxisSpec::uniform(
            "x",
            5,
            ShiftOrientation::Forward,
            Boundary::Periodic,
        )])
        .unwrap();
        assert_eq!(g.shifted_site(&[4], 0, 1), Some(vec![0]));
        assert_eq!(g.shifted_site(&[0], 0, -1), Some(vec![4]));
    }
}
