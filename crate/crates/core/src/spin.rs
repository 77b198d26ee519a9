//! Pauli operators on the `2^N` product basis of a cyclic chain.
//!
//! Basis index bit `i` is site `i`; a clear bit is `σz = +1`. The translation
//! `T` right-shifts sites, so site `i` of `T|s⟩` carries site `i − 1` of `|s⟩`.

use nalgebra::DMatrix;

use crate::linalg::SparseMatrix;
use crate::{Error, Result, C64};

/// Largest chain handled by dense `2^N` constructions.
pub const DENSE_MAX_SITES: usize = 14;

pub fn check_dense(n_sites: usize, what: &'static str) -> Result<()> {
    if n_sites > DENSE_MAX_SITES {
        return Err(Error::SizeCap {
            n_sites,
            cap: DENSE_MAX_SITES,
            what,
        });
    }
    if n_sites < 2 {
        return Err(Error::invalid(format!("chain needs at least 2 sites, got {n_sites}")));
    }
    Ok(())
}

#[inline]
pub fn bit(s: usize, i: usize) -> usize {
    (s >> i) & 1
}

/// Eigenvalue of `σz` at `site` on basis state `s`.
#[inline]
pub fn sz(s: usize, site: usize) -> f64 {
    1.0 - 2.0 * bit(s, site) as f64
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Σ_i σx⁽ⁱ⁾`
pub fn sum_sx(n: usize) -> SparseMatrix {
    let dim = 1 << n;
    let mut trip = Vec::with_capacity(dim * n);
    for s in 0..dim {
        for i in 0..n {
            trip.push((s ^ (1 << i), s, re(1.0)));
        }
    }
    SparseMatrix::from_triplets(dim, trip)
}

/// Cyclic nearest-neighbour bonds `Σ_i (cx σxσx + cy σyσy + cz σzσz)`.
pub fn bonds(n: usize, cx: f64, cy: f64, cz: f64) -> SparseMatrix {
    let dim = 1 << n;
    let mut trip = Vec::with_capacity(dim * (n + 1));
    for s in 0..dim {
        let mut diag = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            diag += cz * sz(s, i) * sz(s, j);
            // σyσy on a pair: −1 for equal bits, +1 for different bits.
            let yy = if bit(s, i) == bit(s, j) { -1.0 } else { 1.0 };
            let amp = cx + cy * yy;
            if amp != 0.0 {
                trip.push((s ^ (1 << i) ^ (1 << j), s, re(amp)));
            }
        }
        trip.push((s, s, re(diag)));
    }
    SparseMatrix::from_triplets(dim, trip)
}

/// `n̂·σ⁽site⁾` for a direction `n̂ = (nx, ny, nz)`.
pub fn single_site(n: usize, site: usize, dir: [f64; 3]) -> SparseMatrix {
    let dim = 1 << n;
    let mut trip = Vec::with_capacity(2 * dim);
    for s in 0..dim {
        trip.push((s, s, re(dir[2] * sz(s, site))));
        // σx|b⟩ = |1−b⟩; σy|0⟩ = i|1⟩, σy|1⟩ = −i|0⟩.
        let flipped = s ^ (1 << site);
        let y = if bit(s, site) == 0 {
            C64::new(0.0, 1.0)
        } else {
            C64::new(0.0, -1.0)
        };
        trip.push((flipped, s, re(dir[0]) + y * dir[1]));
    }
    SparseMatrix::from_triplets(dim, trip)
}

/// `Z₂ = Π_i σx⁽ⁱ⁾`: flips every spin.
pub fn z2_operator(n: usize) -> SparseMatrix {
    let dim = 1 << n;
    let all = dim - 1;
    SparseMatrix::from_triplets(dim, (0..dim).map(|s| (s ^ all, s, re(1.0))).collect())
}

/// Cyclic right shift of basis state `s`.
#[inline]
pub fn shift_right(s: usize, n: usize) -> usize {
    let top = bit(s, n - 1);
    ((s << 1) & ((1 << n) - 1)) | top
}

pub fn translation_operator(n: usize) -> SparseMatrix {
    let dim = 1 << n;
    SparseMatrix::from_triplets(
        dim,
        (0..dim).map(|s| (shift_right(s, n), s, re(1.0))).collect(),
    )
}

/// Product state with every spin along `+x` except `flipped` sites along `−x`,
/// using `|←⟩ = (|↑⟩ − |↓⟩)/√2`.
pub fn x_basis_state(n: usize, flipped: &[usize]) -> Vec<C64> {
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let mask: usize = flipped.iter().fold(0, |m, &i| m | (1 << (i % n)));
    (0..dim)
        .map(|s| {
            let sign = if (s & mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            re(sign * amp)
        })
        .collect()
}

/// Orbit representatives of `Z₂` (states with the top site up). The sector
/// basis is `(|s⟩ ± |s̄⟩)/√2` for each representative `s`.
pub fn z2_representatives(n: usize) -> impl Iterator<Item = usize> {
    0..(1usize << (n - 1))
}

/// Block of a `Z₂`-symmetric operator in the sector of eigenvalue `parity`.
pub fn z2_project(h: &SparseMatrix, n: usize, parity: i8) -> DMatrix<C64> {
    let half = 1usize << (n - 1);
    let all = (1usize << n) - 1;
    let sign = if parity >= 0 { 1.0 } else { -1.0 };
    let mut m = DMatrix::zeros(half, half);
    for a in 0..half {
        for (c, v) in h.row(a) {
            if c < half {
                m[(a, c)] += v;
            } else {
                m[(a, c ^ all)] += v * sign;
            }
        }
    }
    m
}

/// Full-space vector of a `Z₂`-sector coordinate vector.
pub fn z2_embed(coords: &[C64], n: usize, parity: i8) -> Vec<C64> {
    let half = 1usize << (n - 1);
    assert_eq!(coords.len(), half);
    let all = (1usize << n) - 1;
    let sign = if parity >= 0 { 1.0 } else { -1.0 };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    for (s, &c) in coords.iter().enumerate() {
        v[s] = c * r;
        v[s ^ all] = c * (r * sign);
    }
    v
}
