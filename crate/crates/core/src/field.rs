//! Piecewise-constant cell fields and the discrete forms acting on them.
//!
//! All reductions run sequentially in cell (or face) order so results are
//! bit-reproducible.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::UniformMesh;

/// Quadrature rule for cell averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Value at the cell center.
    #[default]
    Midpoint,
    /// Tensor 3-point Gauss–Legendre, exact for bivariate degree ≤ 5 per direction.
    Gauss3,
}

impl Quadrature {
    /// Parse the numeric order used on the command line (1 or 3).
    pub fn from_order(order: u32) -> Option<Self> {
        match order {
            1 => Some(Quadrature::Midpoint),
            3 => Some(Quadrature::Gauss3),
            _ => None,
        }
    }
}

const GAUSS3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// One real value per cell, row-major.
#[derive(Debug, Clone)]
pub struct CellField {
    mesh: Arc<UniformMesh>,
    values: Vec<f64>,
}

impl PartialEq for CellField {
    fn eq(&self, other: &Self) -> bool {
        self.same_mesh(other) && self.values == other.values
    }
}

impl CellField {
    pub fn constant(mesh: &Arc<UniformMesh>, value: f64) -> Self {
        Self {
            mesh: Arc::clone(mesh),
            values: vec![value; mesh.num_cells()],
        }
    }

    pub fn zeros(mesh: &Arc<UniformMesh>) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn from_values(mesh: &Arc<UniformMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_cells() {
            return Err(Error::MeshMismatch);
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            values,
        })
    }

    /// Field with value `f(k)` in cell `k`.
    pub fn from_fn(mesh: &Arc<UniformMesh>, f: impl FnMut(usize) -> f64) -> Self {
        Self {
            mesh: Arc::clone(mesh),
            values: (0..mesh.num_cells()).map(f).collect(),
        }
    }

    /// Indicator of cell `k`.
    pub fn unit(mesh: &Arc<UniformMesh>, k: usize) -> Self {
        Self::from_fn(mesh, |c| if c == k { 1.0 } else { 0.0 })
    }

    /// Cellwise average of `f`, approximated with the given quadrature.
    pub fn project(mesh: &Arc<UniformMesh>, f: impl Fn(f64, f64) -> f64, quad: Quadrature) -> Self {
        let half = 0.5 * mesh.h();
        Self::from_fn(mesh, |k| {
            let [xc, yc] = mesh.center_unchecked(k);
            match quad {
                Quadrature::Midpoint => f(xc, yc),
                Quadrature::Gauss3 => {
                    let mut acc = 0.0;
                    for (wy, ny) in GAUSS3_WEIGHTS.iter().zip(GAUSS3_NODES) {
                        let y = yc + half * ny;
                        for (wx, nx) in GAUSS3_WEIGHTS.iter().zip(GAUSS3_NODES) {
                            acc += wx * wy * f(xc + half * nx, y);
                        }
                    }
                    0.25 * acc
                }
            }
        })
    }

    pub fn mesh(&self) -> &Arc<UniformMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_mesh(&self, other: &CellField) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || *self.mesh == *other.mesh
    }

    pub(crate) fn on_mesh(&self, mesh: &Arc<UniformMesh>) -> bool {
        Arc::ptr_eq(&self.mesh, mesh) || *self.mesh == **mesh
    }

    pub(crate) fn check_mesh(&self, other: &CellField) -> Result<()> {
        if self.same_mesh(other) {
            Ok(())
        } else {
            Err(Error::MeshMismatch)
        }
    }

    /// All values finite.
    pub fn is_valid(&self) -> bool {
        self.values.len() == self.mesh.num_cells() && self.values.iter().all(|v| v.is_finite())
    }

    /// Discrete inner product `h² Σ w_K φ_K`.
    pub fn inner_h(&self, other: &CellField) -> Result<f64> {
        self.check_mesh(other)?;
        Ok(self.mesh.cell_area() * dot(&self.values, &other.values))
    }

    /// Discrete gradient form `Σ_faces τ (w_K − w_L)(φ_K − φ_L)`.
    pub fn grad_form_h(&self, other: &CellField) -> Result<f64> {
        self.check_mesh(other)?;
        let (w, p) = (&self.values, &other.values);
        Ok(self
            .mesh
            .faces()
            .iter()
            .map(|f| f.trans * (w[f.k] - w[f.l]) * (p[f.k] - p[f.l]))
            .sum())
    }

    pub fn norm_l2_h(&self) -> f64 {
        (self.mesh.cell_area() * dot(&self.values, &self.values)).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sqrt(grad_form_h(w, w))`.
    pub fn seminorm_h1_h(&self) -> f64 {
        self.grad_form_h(self).expect("same mesh").sqrt()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Arithmetic mean over cells (equal to the area-weighted mean on a uniform mesh).
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Spatial (population) standard deviation over cells.
    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        let var = self
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / self.values.len() as f64;
        var.sqrt()
    }

    /// `h² Σ w_K`.
    pub fn integral(&self) -> f64 {
        self.mesh.cell_area() * self.values.iter().sum::<f64>()
    }

    /// `self - other`.
    pub fn sub(&self, other: &CellField) -> Result<CellField> {
        self.check_mesh(other)?;
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &CellField) -> Result<CellField> {
        self.check_mesh(other)?;
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        })
    }

    pub fn scale(&self, alpha: f64) -> CellField {
        Self {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    /// Largest pointwise difference.
    pub fn max_abs_diff(&self, other: &CellField) -> Result<f64> {
        Ok(self.sub(other)?.norm_linf())
    }
}

/// Plain sequential dot product.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
