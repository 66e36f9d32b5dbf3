//! Uniform Cartesian mesh of square control volumes.
//!
//! Cells are indexed row-major with x fastest: `k = j * nx + i`. Only interior
//! faces are stored. Boundary faces carry zero flux (homogeneous Neumann) and
//! therefore never enter any sum.

use serde::Serialize;

use crate::error::{Error, Result};

const SQUARE_TOL: f64 = 1e-12;

/// An interior face between cells `k` and `l` (`k < l`) with its
/// transmissibility `|face| / distance(centers)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub k: usize,
    pub l: usize,
    pub trans: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformMesh {
    nx: usize,
    ny: usize,
    h: f64,
    origin: [f64; 2],
    #[serde(skip)]
    faces: Vec<Face>,
}

impl PartialEq for UniformMesh {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && self.h == other.h
            && self.origin == other.origin
    }
}

impl UniformMesh {
    /// Mesh of `[0, lx] x [0, ly]`.
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::with_origin(nx, ny, lx, ly, [0.0, 0.0])
    }

    /// `n x n` mesh of the unit square.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, 1.0, 1.0)
    }

    pub fn with_origin(nx: usize, ny: usize, lx: f64, ly: f64, origin: [f64; 2]) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidSize { nx, ny });
        }
        for len in [lx, ly] {
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidLength(len));
            }
        }
        let hx = lx / nx as f64;
        let hy = ly / ny as f64;
        if ((hx - hy) / hx).abs() > SQUARE_TOL {
            return Err(Error::NonSquareCells { hx, hy });
        }
        let h = hx;

        // |face| = h and the center distance is h, so every transmissibility is exactly 1.
        let trans = 1.0;
        let mut faces = Vec::with_capacity(ny * (nx - 1) + nx * (ny - 1));
        for j in 0..ny {
            for i in 0..nx - 1 {
                let k = j * nx + i;
                faces.push(Face { k, l: k + 1, trans });
            }
        }
        for j in 0..ny - 1 {
            for i in 0..nx {
                let k = j * nx + i;
                faces.push(Face {
                    k,
                    l: k + nx,
                    trans,
                });
            }
        }

        Ok(Self {
            nx,
            ny,
            h,
            origin,
            faces,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Cell side length.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Cell area `h²`.
    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn num_cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Domain extent `(Lx, Ly)`.
    pub fn lengths(&self) -> (f64, f64) {
        (self.h * self.nx as f64, self.h * self.ny as f64)
    }

    /// Total area of the domain.
    pub fn area(&self) -> f64 {
        let (lx, ly) = self.lengths();
        lx * ly
    }

    /// Interior faces: x-faces row by row, then y-faces.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Cell index for column `i`, row `j`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Column and row of cell `k`.
    #[inline]
    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    pub fn cell_center(&self, k: usize) -> Result<[f64; 2]> {
        if k >= self.num_cells() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.num_cells(),
            });
        }
        Ok(self.center_unchecked(k))
    }

    #[inline]
    pub(crate) fn center_unchecked(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.ij(k);
        [
            self.origin[0] + (i as f64 + 0.5) * self.h,
            self.origin[1] + (j as f64 + 0.5) * self.h,
        ]
    }

    /// Iterator over all cell centers in index order.
    pub fn centers(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.num_cells()).map(move |k| self.center_unchecked(k))
    }

    /// Number of interior faces incident to cell `k`.
    pub fn neighbor_count(&self, k: usize) -> usize {
        let (i, j) = self.ij(k);
        usize::from(i > 0)
            + usize::from(i + 1 < self.nx)
            + usize::from(j > 0)
            + usize::from(j + 1 < self.ny)
    }
}
