//! Dense lattice fields with scalar or square-matrix values.
//!
//! Values are stored row-major over sites, each site holding a dim×dim block
//! (dim = 1 for scalars). All products preserve the order written in the
//! operator formulas; nothing here ever assumes commutativity.

use crate::error::{CalcError, Result};
use crate::grid::CalculusSpec;
use crate::scalar::Scalar;
use std::io::{BufRead, Write};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField<S: Scalar> {
    grid: Arc<CalculusSpec>,
    /// Matrix dimension per site; 1 for scalar fields.
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> LatticeField<S> {
    pub fn zeros(grid: Arc<CalculusSpec>, dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        let len = grid.nsites() * dim * dim;
        LatticeField { grid, dim, data: vec![S::zero(); len] }
    }

    /// Field with the identity matrix (or scalar one) everywhere.
    pub fn identity(grid: Arc<CalculusSpec>, dim: usize) -> Self {
        let mut f = Self::zeros(grid, dim);
        for site in 0..f.nsites() {
            for d in 0..dim {
                f.data[site * dim * dim + d * dim + d] = S::one();
            }
        }
        f
    }

    pub fn constant(grid: Arc<CalculusSpec>, value: S) -> Self {
        let len = grid.nsites();
        LatticeField { grid, dim: 1, data: vec![value; len] }
    }

    pub fn from_data(grid: Arc<CalculusSpec>, dim: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != grid.nsites() * dim * dim {
            return Err(CalcError::ShapeMismatch(format!(
                "data length {} != sites {} * dim^2 {}",
                data.len(),
                grid.nsites(),
                dim * dim
            )));
        }
        Ok(LatticeField { grid, dim, data })
    }

    /// Build a scalar field from a function of the multi-index.
    pub fn from_fn(grid: Arc<CalculusSpec>, f: impl Fn(&[usize]) -> S) -> Self {
        let mut out = Self::zeros(grid.clone(), 1);
        for (site, idx) in grid.sites().enumerate() {
            out.data[site] = f(&idx);
        }
        out
    }

    /// Build a matrix field from a function filling one block per site.
    pub fn from_matrix_fn(
        grid: Arc<CalculusSpec>,
        dim: usize,
        f: impl Fn(&[usize], &mut [S]),
    ) -> Self {
        let mut out = Self::zeros(grid.clone(), dim);
        let b = dim * dim;
        for (site, idx) in grid.sites().enumerate() {
            f(&idx, &mut out.data[site * b..(site + 1) * b]);
        }
        out
    }

    pub fn grid(&self) -> &Arc<CalculusSpec> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nsites(&self) -> usize {
        self.grid.nsites()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn block(&self, site: usize) -> &[S] {
        let b = self.dim * self.dim;
        &self.data[site * b..(site + 1) * b]
    }

    pub fn block_mut(&mut self, site: usize) -> &mut [S] {
        let b = self.dim * self.dim;
        &mut self.data[site * b..(site + 1) * b]
    }

    /// Scalar value at a multi-index (dim-1 fields).
    pub fn at(&self, idx: &[usize]) -> S {
        debug_assert_eq!(self.dim, 1);
        self.data[self.grid.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        debug_assert_eq!(self.dim, 1);
        let flat = self.grid.flat(idx);
        self.data[flat] = v;
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(CalcError::ShapeMismatch("fields live on different grids".into()));
        }
        if self.dim != other.dim {
            return Err(CalcError::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        LatticeField {
            grid: self.grid.clone(),
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a.add(b)).collect();
        Ok(LatticeField { grid: self.grid.clone(), dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a.sub(b)).collect();
        Ok(LatticeField { grid: self.grid.clone(), dim: self.dim, data })
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|v| v.mul(s))
    }

    /// Pointwise product; matrix blocks multiply in the written order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let n = self.dim;
        if n == 1 {
            let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a.mul(b)).collect();
            return Ok(LatticeField { grid: self.grid.clone(), dim: 1, data });
        }
        let mut out = Self::zeros(self.grid.clone(), n);
        let b = n * n;
        for site in 0..self.nsites() {
            let lhs = &self.data[site * b..(site + 1) * b];
            let rhs = &other.data[site * b..(site + 1) * b];
            let dst = &mut out.data[site * b..(site + 1) * b];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = S::zero();
                    for k in 0..n {
                        acc = acc.add(lhs[i * n + k].mul(rhs[k * n + j]));
                    }
                    dst[i * n + j] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise max |value| over all sites.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }

    /// Entrywise max |value| over sites at distance >= margin from every
    /// zero-padded boundary (periodic axes impose no restriction).
    pub fn interior_max_norm(&self, margin: usize) -> f64 {
        let b = self.dim * self.dim;
        let mut worst = 0.0f64;
        for (site, idx) in self.grid.sites().enumerate() {
            if !self.is_interior(&idx, margin) {
                continue;
            }
            for v in &self.data[site * b..(site + 1) * b] {
                worst = worst.max(v.abs_f64());
            }
        }
        worst
    }

    pub fn is_interior(&self, idx: &[usize], margin: usize) -> bool {
        idx.iter().zip(&self.grid.axes).all(|(&k, ax)| match ax.boundary {
            crate::grid::Boundary::Periodic => true,
            crate::grid::Boundary::ZeroPadded => k >= margin && k + margin < ax.size,
        })
    }

    /// Trace of the site block, as a dim-1 field.
    pub fn trace(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(self.grid.clone(), 1);
        for site in 0..self.nsites() {
            let blk = self.block(site);
            let mut acc = S::zero();
            for d in 0..n {
                acc = acc.add(blk[d * n + d]);
            }
            out.data[site] = acc;
        }
        out
    }
}

impl LatticeField<f64> {
    /// Pointwise matrix inverse (Gauss-Jordan; dim is small).
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut out = Self::zeros(self.grid.clone(), n);
        let b = n * n;
        for site in 0..self.nsites() {
            let src = &self.data[site * b..(site + 1) * b];
            let mut a: Vec<f64> = src.to_vec();
            let mut inv: Vec<f64> = vec![0.0; b];
            for d in 0..n {
                inv[d * n + d] = 1.0;
            }
            for col in 0..n {
                let mut piv = col;
                for r in col + 1..n {
                    if a[r * n + col].abs() > a[piv * n + col].abs() {
                        piv = r;
                    }
                }
                if a[piv * n + col].abs() < 1e-300 {
                    return Err(CalcError::DimensionMismatch(format!(
                        "singular matrix at site {site} while inverting field"
                    )));
                }
                if piv != col {
                    for c in 0..n {
                        a.swap(col * n + c, piv * n + c);
                        inv.swap(col * n + c, piv * n + c);
                    }
                }
                let d = a[col * n + col];
                for c in 0..n {
                    a[col * n + c] /= d;
                    inv[col * n + c] /= d;
                }
                for r in 0..n {
                    if r != col {
                        let f = a[r * n + col];
                        if f != 0.0 {
                            for c in 0..n {
                                a[r * n + c] -= f * a[col * n + c];
                                inv[r * n + c] -= f * inv[col * n + c];
                            }
                        }
                    }
                }
            }
            out.data[site * b..(site + 1) * b].copy_from_slice(&inv);
        }
        Ok(out)
    }

    /// Pointwise exp applied to scalar fields.
    pub fn exp(&self) -> Self {
        debug_assert_eq!(self.dim, 1);
        self.map(f64::exp)
    }

    /// Write the column-oriented text format: axis headers, then one row per
    /// site with indices, coordinates, and value entries row-major.
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "defcalc-field v1")?;
        writeln!(w, "axes {}", self.grid.naxes())?;
        for ax in &self.grid.axes {
            let orient = match ax.orientation {
                crate::grid::ShiftOrientation::Forward => "forward",
                crate::grid::ShiftOrientation::Backward => "backward",
            };
            let bnd = match ax.boundary {
                crate::grid::Boundary::Periodic => "periodic",
                crate::grid::Boundary::ZeroPadded => "zero",
            };
            match &ax.kind {
                crate::grid::AxisKind::UniformDiscrete => {
                    writeln!(w, "axis {} uniform {} {} {}", ax.name, ax.size, orient, bnd)?;
                }
                crate::grid::AxisKind::NonuniformDiscrete { coords } => {
                    let cs: Vec<String> = coords.iter().map(|c| format!("{c}")).collect();
                    writeln!(
                        w,
                        "axis {} nonuniform {} {} {} coords {}",
                        ax.name,
                        ax.size,
                        orient,
                        bnd,
                        cs.join(" ")
                    )?;
                }
                crate::grid::AxisKind::SampledContinuous { step } => {
                    writeln!(w, "axis {} continuous {} {} {} step {}", ax.name, ax.size, orient, bnd, step)?;
                }
            }
        }
        writeln!(w, "value matrix {}", self.dim)?;
        let b = self.dim * self.dim;
        for (site, idx) in self.grid.sites().enumerate() {
            let mut row = String::new();
            for (ai, &k) in idx.iter().enumerate() {
                row.push_str(&format!("{k} "));
                let _ = ai;
            }
            for (ai, &k) in idx.iter().enumerate() {
                row.push_str(&format!("{} ", self.grid.axes[ai].coord(k)));
            }
            for v in &self.data[site * b..(site + 1) * b] {
                row.push_str(&format!("{v} "));
            }
            writeln!(w, "{}", row.trim_end())?;
        }
        Ok(())
    }

    /// Parse the text format written by [`write_text`].
    pub fn read_text(r: &mut impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| CalcError::Parse("empty field file".into()))??;
        if header.trim() != "defcalc-field v1" {
            return Err(CalcError::Parse(format!("unexpected header: {header}")));
        }
        let axes_line = lines.next().ok_or_else(|| CalcError::Parse("missing axes line".into()))??;
        let naxes: usize = axes_line
            .strip_prefix("axes ")
            .ok_or_else(|| CalcError::Parse("expected 'axes N'".into()))?
            .trim()
            .parse()
            .map_err(|e| CalcError::Parse(format!("bad axis count: {e}")))?;
        let mut axes = Vec::with_capacity(naxes);
        for _ in 0..naxes {
            let line = lines.next().ok_or_else(|| CalcError::Parse("missing axis line".into()))??;
            axes.push(parse_axis_line(&line)?);
        }
        let value_line = lines.next().ok_or_else(|| CalcError::Parse("missing value line".into()))??;
        let dim: usize = value_line
            .strip_prefix("value matrix ")
            .ok_or_else(|| CalcError::Parse("expected 'value matrix N'".into()))?
            .trim()
            .parse()
            .map_err(|e| CalcError::Parse(format!("bad value dim: {e}")))?;
        let grid = CalculusSpec::new(axes)?;
        let mut field = LatticeField::zeros(grid.clone(), dim);
        let b = dim * dim;
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != naxes * 2 + b {
                return Err(CalcError::Parse(format!(
                    "site row has {} tokens, expected {}",
                    toks.len(),
                    naxes * 2 + b
                )));
            }
            let mut idx = Vec::with_capacity(naxes);
            for t in &toks[..naxes] {
                idx.push(t.parse::<usize>().map_err(|e| CalcError::Parse(format!("bad index: {e}")))?);
            }
            let site = grid.flat(&idx);
            for (j, t) in toks[naxes * 2..].iter().enumerate() {
                field.data[site * b + j] =
                    t.parse::<f64>().map_err(|e| CalcError::Parse(format!("bad value: {e}")))?;
            }
        }
        Ok(field)
    }
}

fn parse_axis_line(line: &str) -> Result<crate::grid::AxisSpec> {
    use crate::grid::{AxisKind, AxisSpec, Boundary, ShiftOrientation};
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 6 || toks[0] != "axis" {
        return Err(CalcError::Parse(format!("bad axis line: {line}")));
    }
    let name = toks[1].to_string();
    let size: usize = toks[3].parse().map_err(|e| CalcError::Parse(format!("bad size: {e}")))?;
    let orientation = match toks[4] {
        "forward" => ShiftOrientation::Forward,
        "backward" => ShiftOrientation::Backward,
        o => return Err(CalcError::Parse(format!("bad orientation {o}"))),
    };
    let boundary = match toks[5] {
        "periodic" => Boundary::Periodic,
        "zero" => Boundary::ZeroPadded,
        b => return Err(CalcError::Parse(format!("bad boundary {b}"))),
    };
    let kind = match toks[2] {
        "uniform" => AxisKind::UniformDiscrete,
        "nonuniform" => {
            if toks.get(6) != Some(&"coords") {
                return Err(CalcError::Parse("nonuniform axis missing coords".into()));
            }
            let coords: std::result::Result<Vec<f64>, _> =
                toks[7..].iter().map(|t| t.parse::<f64>()).collect();
            AxisKind::NonuniformDiscrete {
                coords: coords.map_err(|e| CalcError::Parse(format!("bad coord: {e}")))?,
            }
        }
        "continuous" => {
            if toks.get(6) != Some(&"step") {
                return Err(CalcError::Parse("continuous axis missing step".into()));
            }
            let step: f64 =
                toks[7].parse().map_err(|e| CalcError::Parse(format!("bad step: {e}")))?;
            AxisKind::SampledContinuous { step }
        }
        k => return Err(CalcError::Parse(format!("bad axis kind {k}"))),
    };
    Ok(AxisSpec { name, size, kind, orientation, boundary })
}
