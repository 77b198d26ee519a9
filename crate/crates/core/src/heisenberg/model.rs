use crate::heisenberg::HeisenbergParams;
use crate::linalg::SparseMatrix;
use crate::spin::{self, check_dense};
use crate::{Result, C64};

/// `−J Σ (Δx σxσx + Δy σyσy + Δz σzσz)`
pub fn interaction_part(params: &HeisenbergParams) -> Result<SparseMatrix> {
    check_dense(params.n_sites, "dense Heisenberg Hamiltonian")?;
    let [dx, dy, dz] = params.delta;
    let j = params.coupling;
    Ok(spin::bonds(params.n_sites, -j * dx, -j * dy, -j * dz))
}

/// `−J Σ σx`
pub fn field_part(params: &HeisenbergParams) -> Result<SparseMatrix> {
    check_dense(params.n_sites, "dense Heisenberg Hamiltonian")?;
    let sx = spin::sum_sx(params.n_sites);
    Ok(SparseMatrix::from_triplets(sx.dim(), Vec::new()).add_scaled(C64::new(-params.coupling, 0.0), &sx))
}

/// Full `2^N` Hamiltonian in the product `σz` basis.
pub fn dense_hamiltonian(params: &HeisenbergParams) -> Result<SparseMatrix> {
    Ok(interaction_part(params)?.add_scaled(C64::new(params.field, 0.0), &field_part(params)?))
}

/// `(Z₂, T)`: the global spin flip `Π σx` and the cyclic right shift.
pub fn symmetry_operators(n_sites: usize) -> Result<(SparseMatrix, SparseMatrix)> {
    check_dense(n_sites, "symmetry operators")?;
    Ok((spin::z2_operator(n_sites), spin::translation_operator(n_sites)))
}
