//! The implicit mass + diffusion operator of one time step.
//!
//! In matrix form `(A u)_K = h² u_K + dt·d·Σ_{L~K} τ_KL (u_K − u_L)`, i.e. the
//! bilinear form `a(u, φ) = (u, φ)_h + dt·d·(∇u, ∇φ)_h` tested against cell
//! indicators. The matrix is symmetric positive definite, so the system is
//! solved with unpreconditioned conjugate gradients and never assembled.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{dot, CellField};
use crate::mesh::UniformMesh;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone)]
pub struct ImplicitDiffusionOperator {
    mesh: Arc<UniformMesh>,
    d: f64,
    dt: f64,
}

/// Iteration count and final relative residual of a CG solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

impl ImplicitDiffusionOperator {
    pub fn new(mesh: &Arc<UniformMesh>, d: f64, dt: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diffusion coefficient must be > 0, got {d}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step must be > 0, got {dt}"
            )));
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            d,
            dt,
        })
    }

    pub fn mesh(&self) -> &Arc<UniformMesh> {
        &self.mesh
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn apply(&self, u: &CellField) -> Result<CellField> {
        if !self.owns(u) {
            return Err(Error::MeshMismatch);
        }
        let mut out = CellField::zeros(&self.mesh);
        self.apply_slice(u.values(), out.values_mut());
        Ok(out)
    }

    fn owns(&self, u: &CellField) -> bool {
        Arc::ptr_eq(&self.mesh, u.mesh()) || *self.mesh == **u.mesh()
    }

    /// `out = A u` on raw cell arrays.
    pub(crate) fn apply_slice(&self, u: &[f64], out: &mut [f64]) {
        let mass = self.mesh.cell_area();
        let c = self.dt * self.d;
        for (o, &x) in out.iter_mut().zip(u) {
            *o = mass * x;
        }
        for f in self.mesh.faces() {
            let flux = c * f.trans * (u[f.k] - u[f.l]);
            out[f.k] += flux;
            out[f.l] -= flux;
        }
    }

    /// Solve `A x = rhs` starting from the no-diffusion guess `rhs / h²`.
    pub fn solve(
        &self,
        rhs: &CellField,
        tol: f64,
        max_iter: usize,
    ) -> Result<(CellField, SolveStats)> {
        let guess = rhs.scale(1.0 / self.mesh.cell_area());
        self.solve_with_guess(rhs, guess, tol, max_iter)
    }

    /// Conjugate gradients from a caller-supplied initial guess.
    ///
    /// Stops once `‖A x − rhs‖₂ ≤ tol·‖rhs‖₂`.
    pub fn solve_with_guess(
        &self,
        rhs: &CellField,
        guess: CellField,
        tol: f64,
        max_iter: usize,
    ) -> Result<(CellField, SolveStats)> {
        if !self.owns(rhs) || !self.owns(&guess) {
            return Err(Error::MeshMismatch);
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must lie in (0, 1), got {tol}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }

        let b = rhs.values();
        let b_norm = dot(b, b).sqrt();
        let mut x = guess;
        if b_norm == 0.0 {
            x.values_mut().fill(0.0);
            return Ok((
                x,
                SolveStats {
                    iterations: 0,
                    residual: 0.0,
                },
            ));
        }

        let n = b.len();
        let mut r = vec![0.0; n];
        self.apply_slice(x.values(), &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let mut rr = dot(&r, &r);
        let target = tol * b_norm;
        if rr.sqrt() <= target {
            return Ok((
                x,
                SolveStats {
                    iterations: 0,
                    residual: rr.sqrt() / b_norm,
                },
            ));
        }

        let mut p = r.clone();
        let mut ap = vec![0.0; n];
        for iter in 1..=max_iter {
            self.apply_slice(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                // A is SPD, so this only happens on NaN input or a corrupted operator
                break;
            }
            let alpha = rr / pap;
            for ((xi, pi), (ri, api)) in
                x.values_mut().iter_mut().zip(&p).zip(r.iter_mut().zip(&ap))
            {
                *xi += alpha * pi;
                *ri -= alpha * api;
            }
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() <= target {
                return Ok((
                    x,
                    SolveStats {
                        iterations: iter,
                        residual: rr_new.sqrt() / b_norm,
                    },
                ));
            }
            let beta = rr_new / rr;
            rr = rr_new;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            residual: rr.sqrt() / b_norm,
        })
    }
}
