//! Symmetric banded matrices from block Lanczos.
//!
//! Storage is by lower diagonals: `bands[j][i] = B[i + j][i]`, `j = 0..=width`.

use crate::error::{Error, Result};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    width: usize,
    bands: Vec<Vec<f64>>,
}

impl BandMatrix {
    pub fn zeros(n: usize, width: usize) -> Self {
        let bands = (0..=width)
            .map(|j| vec![0.0; n.saturating_sub(j)])
            .collect();
        Self { n, width, bands }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let off = r - c;
        if off > self.width {
            0.0
        } else {
            self.bands[off][c]
        }
    }

    /// Sets `B[i][j]` and `B[j][i]`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let off = r - c;
        assert!(
            off <= self.width,
            "entry ({i},{j}) outside bandwidth {}",
            self.width
        );
        self.bands[off][c] = v;
    }

    /// Leading principal submatrix of order `k`.
    pub fn leading(&self, k: usize) -> BandMatrix {
        let k = k.min(self.n);
        let mut out = BandMatrix::zeros(k, self.width);
        for j in 0..=self.width {
            for i in 0..k.saturating_sub(j) {
                out.bands[j][i] = self.bands[j][i];
            }
        }
        out
    }

    pub fn matvec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            out[i] += self.bands[0][i] * y[i];
        }
        for j in 1..=self.width {
            for c in 0..self.n.saturating_sub(j) {
                let v = self.bands[j][c];
                out[c + j] += v * y[c];
                out[c] += v * y[c + j];
            }
        }
        out
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut r = 0.0;
            for j in 1..=self.width {
                if i >= j {
                    r += self.bands[j][i - j].abs();
                }
                if i + j < self.n {
                    r += self.bands[j][i].abs();
                }
            }
            lo = lo.min(self.bands[0][i] - r);
            hi = hi.max(self.bands[0][i] + r);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Unpivoted band `LDLᵀ` of `B + shift·I`; returns the pivots even when
    /// some are non-positive.
    fn ldlt(&self, shift: f64, pivmin: Option<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.n;
        let m = self.width;
        // lower[j][c] = L[c + j][c]
        let mut lower: Vec<Vec<f64>> = (0..=m).map(|j| vec![0.0; n.saturating_sub(j)]).collect();
        let mut d = vec![0.0; n];
        for col in 0..n {
            let mut piv = self.bands[0][col] + shift;
            for k in col.saturating_sub(m)..col {
                let l = lower[col - k][k];
                piv -= l * l * d[k];
            }
            if let Some(pm) = pivmin {
                if piv.abs() < pm {
                    piv = -pm;
                }
            }
            d[col] = piv;
            for row in col + 1..(col + m + 1).min(n) {
                let mut v = self.bands[row - col][col];
                for k in row.saturating_sub(m)..col {
                    v -= lower[row - k][k] * lower[col - k][k] * d[k];
                }
                lower[row - col][col] = v / piv;
            }
        }
        (d, lower)
    }

    pub fn factor_shifted(&self, shift: f64) -> Result<BandFactor> {
        let (d, lower) = self.ldlt(shift, None);
        if let Some((index, pivot)) = d.iter().enumerate().find(|(_, p)| !(**p > 0.0)) {
            return Err(Error::NotPositiveDefinite {
                index,
                pivot: *pivot,
            });
        }
        Ok(BandFactor {
            width: self.width,
            d,
            lower,
        })
    }

    /// Number of eigenvalues below `sigma` (Sylvester inertia of the pivots).
    pub fn inertia_count(&self, sigma: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.norm_bound().powi(2));
        let (d, _) = self.ldlt(-sigma, Some(pivmin));
        d.iter().filter(|p| **p < 0.0).count()
    }

    pub fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.inertia_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn eig_extremes(&self) -> (f64, f64) {
        if self.n == 1 {
            return (self.bands[0][0], self.bands[0][0]);
        }
        (self.eigenvalue(0), self.eigenvalue(self.n - 1))
    }

    pub fn eigvec_min(&self) -> Vec<f64> {
        let n = self.n;
        if n == 1 {
            return vec![1.0];
        }
        let lmin = self.eigenvalue(0);
        let scale = self.norm_bound().max(f64::MIN_POSITIVE);
        let mut gap = 1e-10 * (1.0 + lmin.abs());
        let mut y: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i + 1) as f64).sin()).collect();
        let n0 = vecops::norm(&y);
        vecops::scale(1.0 / n0, &mut y);
        for _ in 0..4 {
            let f = match self.factor_shifted(-(lmin - gap)) {
                Ok(f) => f,
                Err(_) => {
                    gap *= 10.0;
                    continue;
                }
            };
            let mut z = f.solve(&y);
            let nz = vecops::norm(&z);
            vecops::scale(1.0 / nz, &mut z);
            y = z;
            let by = self.matvec(&y);
            let r: f64 = by
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - lmin * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if r <= 1e-13 * scale {
                break;
            }
        }
        crate::tridiag::fix_sign(&mut y);
        y
    }
}

#[derive(Debug, Clone)]
pub struct BandFactor {
    width: usize,
    d: Vec<f64>,
    lower: Vec<Vec<f64>>,
}

impl BandFactor {
    fn forward(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut z = rhs.to_vec();
        for i in 0..n {
            for k in i.saturating_sub(self.width)..i {
                z[i] -= self.lower[i - k][k] * z[k];
            }
        }
        z
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut x = self.forward(rhs);
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            for r in i + 1..(i + self.width + 1).min(n) {
                x[i] -= self.lower[r - i][i] * x[r];
            }
        }
        x
    }

    pub fn inv_quad(&self, y: &[f64]) -> f64 {
        let z = self.forward(y);
        z.iter().zip(&self.d).map(|(zi, di)| zi * zi / di).sum()
    }
}
