//! Momentum/parity sectors of the product basis.
//!
//! The sector `(k, z2)` is spanned by the normalized orbit sums
//! `Σ_j Σ_p e^{+i2πkj/N} z2^p T^j Z₂^p |s⟩`, on which `T` acts as
//! `e^{−i2πk/N}` and `Z₂` as `z2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::linalg::SparseMatrix;
use crate::spin::{check_dense, shift_right};
use crate::{Error, Result, C64};

/// Orthonormal basis of one `(k, z2)` sector, stored as sparse vectors.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub n_sites: usize,
    pub k: usize,
    pub z2: i8,
    /// `vectors[a]` lists `(product state, coefficient)`.
    pub vectors: Vec<Vec<(usize, C64)>>,
    /// For each product state, the basis vector it belongs to and its coefficient.
    lookup: Vec<Option<(usize, C64)>>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `⟨v_a| A |v_b⟩` for an operator that preserves the sector.
    pub fn project(&self, a: &SparseMatrix) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (b, vb) in self.vectors.iter().enumerate() {
            // A is applied column by column through its Hermitian rows, so
            // only Hermitian operators are supported.
            for &(s, cb) in vb {
                for (t, h) in a.row(s) {
                    if let Some((ia, ca)) = self.lookup[t] {
                        m[(ia, b)] += ca.conj() * h.conj() * cb;
                    }
                }
            }
        }
        m
    }

    /// Full-space vector from sector coordinates.
    pub fn embed(&self, coords: &[C64]) -> Vec<C64> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![C64::new(0.0, 0.0); 1 << self.n_sites];
        for (vec, &c) in self.vectors.iter().zip(coords) {
            for &(s, x) in vec {
                v[s] += x * c;
            }
        }
        v
    }

    /// Sector coordinates `⟨v_a|ψ⟩` of a full-space vector.
    pub fn restrict(&self, psi: &[C64]) -> Vec<C64> {
        self.vectors
            .iter()
            .map(|vec| vec.iter().map(|&(s, x)| x.conj() * psi[s]).sum())
            .collect()
    }
}

/// Builds the `(k, z2)` sector basis.
pub fn sector_basis(n_sites: usize, k: usize, z2: i8) -> Result<SectorBasis> {
    check_dense(n_sites, "sector basis")?;
    if k >= n_sites || !(z2 == 1 || z2 == -1) {
        return Err(Error::invalid(format!("bad sector (k = {k}, z2 = {z2})")));
    }
    let dim = 1usize << n_sites;
    let all = dim - 1;
    let mut seen = vec![false; dim];
    let mut vectors = Vec::new();
    let mut lookup = vec![None; dim];
    let mut acc: Vec<(usize, C64)> = Vec::with_capacity(2 * n_sites);
    for s in 0..dim {
        if seen[s] {
            continue;
        }
        acc.clear();
        let mut t = s;
        for j in 0..n_sites {
            let phase = C64::from_polar(1.0, 2.0 * PI * (k * j % n_sites) as f64 / n_sites as f64);
            for (state, sign) in [(t, 1.0), (t ^ all, z2 as f64)] {
                seen[state] = true;
                match acc.iter_mut().find(|(x, _)| *x == state) {
                    Some(entry) => entry.1 += phase * sign,
                    None => acc.push((state, phase * sign)),
                }
            }
            t = shift_right(t, n_sites);
        }
        let norm: f64 = acc.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        let mut vec: Vec<(usize, C64)> = acc
            .iter()
            .filter(|(_, c)| c.norm() > 1e-12)
            .map(|&(x, c)| (x, c / norm))
            .collect();
        vec.sort_by_key(|&(x, _)| x);
        let idx = vectors.len();
        for &(x, c) in &vec {
            lookup[x] = Some((idx, c));
        }
        vectors.push(vec);
    }
    Ok(SectorBasis {
        n_sites,
        k,
        z2,
        vectors,
        lookup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{dense_hamiltonian, symmetry_operators, HeisenbergParams};
    use crate::linalg::{dot, symmetric_eigenvalues, eigen_auto};

    #[test]
    fn dimensions_add_up() {
        for n in [3usize, 5, 7] {
            let mut total = 0;
            for k in 0..n {
                for z2 in [1, -1] {
                    total += sector_basis(n, k, z2).unwrap().dim();
                }
            }
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn basis_is_orthonormal_eigenbasis_of_symmetries() {
        let n = 5;
        let (z, t) = symmetry_operators(n).unwrap();
        for k in [0usize, 2] {
            for z2 in [1i8, -1] {
                let b = sector_basis(n, k, z2).unwrap();
                let t_eig = C64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64);
                for a in 0..b.dim() {
                    let mut e = vec![C64::new(0.0, 0.0); b.dim()];
                    e[a] = C64::new(1.0, 0.0);
                    let v = b.embed(&e);
                    assert!((dot(&v, &v).re - 1.0).abs() < 1e-12);
                    let tv = t.mul_vec(&v);
                    assert!(tv.iter().zip(&v).all(|(x, y)| (x - t_eig * y).norm() < 1e-12));
                    let zv = z.mul_vec(&v);
                    assert!(zv.iter().zip(&v).all(|(x, y)| (x - y * z2 as f64).norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn polarized_state_in_trivial_sector() {
        let n = 5;
        let b = sector_basis(n, 0, 1).unwrap();
        let arrow = crate::spin::x_basis_state(n, &[]);
        let back = b.embed(&b.restrict(&arrow));
        assert!(back.iter().zip(&arrow).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn sector_spectra_reproduce_full_spectrum() {
        let p = HeisenbergParams::new(5, 1.0, [0.4, -0.3, 1.1], 0.7).unwrap();
        let h = dense_hamiltonian(&p).unwrap();
        let full = symmetric_eigenvalues(h.to_dense_real().unwrap());
        let mut parts = Vec::new();
        for k in 0..5 {
            for z2 in [1, -1] {
                let b = sector_basis(5, k, z2).unwrap();
                parts.extend(eigen_auto(b.project(&h)).0);
            }
        }
        parts.sort_by(f64::total_cmp);
        for (a, b) in full.iter().zip(&parts) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
