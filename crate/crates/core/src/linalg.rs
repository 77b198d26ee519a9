//! Sparse operators on spin product bases and dense Hermitian eigensolvers.

use nalgebra::{DMatrix, DVector};

use crate::ode::{Integrator, IntegratorOptions, LinearGenerator, StepStats};
use crate::{FieldSchedule, Result, C64};

/// Compressed-row sparse complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    /// Assembles from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        let mut keep_cols = Vec::with_capacity(cols.len());
        let mut keep_vals = Vec::with_capacity(vals.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != C64::new(0.0, 0.0) {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseMatrix {
            dim,
            row_ptr,
            cols: keep_cols,
            vals: keep_vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// `y += alpha · A x`
    pub fn mul_acc(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        for r in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[r] += alpha * acc;
        }
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.mul_acc(C64::new(1.0, 0.0), x, &mut y);
        y
    }

    /// `⟨x|A|y⟩`
    pub fn inner(&self, x: &[C64], y: &[C64]) -> C64 {
        let ay = self.mul_vec(y);
        dot(x, &ay)
    }

    /// `self + alpha·other`
    pub fn add_scaled(&self, alpha: C64, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut trip = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.dim {
            trip.extend(self.row(r).map(|(c, v)| (r, c, v)));
            trip.extend(other.row(r).map(|(c, v)| (r, c, alpha * v)));
        }
        SparseMatrix::from_triplets(self.dim, trip)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Dense real part, if every entry is real.
    pub fn to_dense_real(&self) -> Option<DMatrix<f64>> {
        if self.vals.iter().any(|v| v.im != 0.0) {
            return None;
        }
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] += v.re;
            }
        }
        Some(m)
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.to_dense();
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((d[(i, j)] - d[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

/// Frobenius norm of `AB − BA` for two dense matrices.
pub fn commutator_norm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a * b - b * a).norm()
}

/// Eigenpairs of a Hermitian matrix, ascending, with eigenvectors as columns.
///
/// Each eigenvector is rotated so its largest-magnitude coefficient is real
/// and positive.
pub fn hermitian_eigen(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut col);
        vecs.set_column(dst, &col);
    }
    (vals, vecs)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenpairs of a real symmetric matrix, ascending; vectors returned complex.
pub fn real_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: DVector<C64> = eig.eigenvectors.column(src).map(|x| C64::new(x, 0.0));
        fix_phase(&mut col);
        vecs.set_column(dst, &col);
    }
    (vals, vecs)
}

/// Eigenpairs of a Hermitian matrix, using the real solver when possible.
pub fn eigen_auto(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    if m.iter().all(|v| v.im == 0.0) {
        real_symmetric_eigen(m.map(|v| v.re))
    } else {
        hermitian_eigen(m)
    }
}

fn fix_phase(col: &mut DVector<C64>) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, v) in col.iter().enumerate() {
        // Earlier entries win near-ties so the choice is reproducible.
        if v.norm() > best_norm * (1.0 + 1e-9) {
            best = i;
            best_norm = v.norm();
        }
    }
    if best_norm > 0.0 {
        let phase = col[best].conj() / best_norm;
        col.iter_mut().for_each(|v| *v *= phase);
    }
}

/// `H(t) = fixed + g(t)·field`, as a Schrödinger generator.
pub struct SweepGenerator<'a, M> {
    pub fixed: &'a M,
    pub field: &'a M,
    pub g: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub hbar: f64,
}

/// Matrix-vector product abstraction over sparse and dense operators.
pub trait MatVec {
    fn size(&self) -> usize;
    /// `y += alpha · A x`
    fn mul_acc(&self, alpha: C64, x: &[C64], y: &mut [C64]);
}

impl MatVec for SparseMatrix {
    fn size(&self) -> usize {
        self.dim
    }
    fn mul_acc(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        SparseMatrix::mul_acc(self, alpha, x, y)
    }
}

impl MatVec for DMatrix<C64> {
    fn size(&self) -> usize {
        self.nrows()
    }
    fn mul_acc(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        let n = self.nrows();
        for (j, xj) in x.iter().enumerate() {
            if *xj == C64::new(0.0, 0.0) {
                continue;
            }
            let a = alpha * xj;
            let col = self.column(j);
            for i in 0..n {
                y[i] += a * col[i];
            }
        }
    }
}

impl<M: MatVec> LinearGenerator for SweepGenerator<'_, M> {
    fn dim(&self) -> usize {
        self.fixed.size()
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let mi = C64::new(0.0, -1.0 / self.hbar);
        self.fixed.mul_acc(mi, psi, out);
        let g = (self.g)(t);
        if g != 0.0 {
            self.field.mul_acc(mi * g, psi, out);
        }
    }
}

/// Evolves `psi` under `H(t) = fixed + g(t)·field` along a linear ramp, with
/// `ħ = hbar`. Calls `at_checkpoint(i, psi)` after reaching each time in
/// `checkpoints` (ascending, within `[0, T]`).
pub fn evolve_ramp<M: MatVec + Sync>(
    fixed: &M,
    field: &M,
    schedule: &FieldSchedule,
    hbar: f64,
    opts: IntegratorOptions,
    psi: &mut [C64],
    checkpoints: &[f64],
    mut at_checkpoint: impl FnMut(usize, &[C64]),
) -> Result<StepStats> {
    let sched = *schedule;
    let gen = SweepGenerator {
        fixed,
        field,
        g: Box::new(move |t| sched.field_at_time(t)),
        hbar,
    };
    let mut integ = Integrator::new(opts, psi.len())?;
    let mut t = 0.0;
    for (i, &tc) in checkpoints.iter().enumerate() {
        integ.advance(&gen, t, tc, psi)?;
        t = tc;
        at_checkpoint(i, psi);
    }
    integ.advance(&gen, t, schedule.duration, psi)?;
    Ok(integ.stats)
}

/// Lowest eigenpair of a Hermitian sparse operator by restarted Lanczos with
/// full reorthogonalization, started from `guess`. Stops once the residual
/// `‖Hv − λv‖` drops below `tol`.
pub fn lowest_eigenpair(h: &SparseMatrix, guess: &[C64], tol: f64) -> (f64, Vec<C64>) {
    const KRYLOV: usize = 40;
    let dim = h.dim();
    let mut v: Vec<C64> = guess.to_vec();
    let mut lambda = 0.0;
    for _restart in 0..200 {
        let n0 = norm_sqr(&v).sqrt();
        v.iter_mut().for_each(|x| *x /= n0);
        let mut basis: Vec<Vec<C64>> = vec![v.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for k in 0..KRYLOV.min(dim) {
            let mut w = h.mul_vec(&basis[k]);
            alpha.push(dot(&basis[k], &w).re);
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let nb = norm_sqr(&w).sqrt();
            if nb < 1e-14 || k + 1 == KRYLOV.min(dim) {
                break;
            }
            beta.push(nb);
            w.iter_mut().for_each(|x| *x /= nb);
            basis.push(w);
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (vals, vecs) = real_symmetric_eigen(t);
        lambda = vals[0];
        let mut ritz = vec![C64::new(0.0, 0.0); dim];
        for (b, c) in basis.iter().zip(vecs.column(0).iter()) {
            ritz.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        let nr = norm_sqr(&ritz).sqrt();
        ritz.iter_mut().for_each(|x| *x /= nr);
        let mut r = h.mul_vec(&ritz);
        r.iter_mut().zip(&ritz).for_each(|(x, y)| *x -= y * lambda);
        v = ritz;
        if norm_sqr(&r).sqrt() < tol {
            break;
        }
    }
    (lambda, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates() {
        let one = C64::new(1.0, 0.0);
        let m = SparseMatrix::from_triplets(2, vec![(0, 1, one), (0, 1, one), (1, 0, 2.0 * one)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense()[(0, 1)], 2.0 * one);
        assert_eq!(m.hermiticity_defect(), 0.0);
    }

    #[test]
    fn eigen_sorted_and_phase_fixed() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(1.0, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(m.clone());
        assert!((vals[0] - 0.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
        for k in 0..2 {
            let v = vecs.column(k).into_owned();
            let r = &m * &v - v.clone() * C64::new(vals[k], 0.0);
            assert!(r.norm() < 1e-12);
            let big = v.iter().fold(C64::new(0.0, 0.0), |a, b| if b.norm() > a.norm() + 1e-12 { *b } else { a });
            assert!(big.im.abs() < 1e-12 && big.re > 0.0);
        }
    }

    #[test]
    fn lanczos_finds_ground_state() {
        let h = crate::ising::oracle::dense_hamiltonian(8, 1.0, 0.7).unwrap();
        let exact = symmetric_eigenvalues(h.to_dense_real().unwrap());
        let guess: Vec<C64> = (0..256).map(|i| C64::new(1.0 + (i % 7) as f64 * 0.1, 0.0)).collect();
        let (e, v) = lowest_eigenpair(&h, &guess, 1e-10);
        assert!((e - exact[0]).abs() < 1e-9);
        assert!((h.inner(&v, &v).re - e).abs() < 1e-9);
    }
}
