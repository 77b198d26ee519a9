//! Free-fermion levels of a small Ising ring next to brute-force
//! diagonalization, and the gap closing at the critical point.

use spinramp::ising::oracle::dense_spectrum;
use spinramp::ising::{enumerate_levels, first_gap, min_two_fermion_gap, IsingParams};

fn main() -> spinramp::Result<()> {
    let n = 7;
    for g in [0.5, 1.0, 2.0] {
        let p = IsingParams::new(n, 1.0, g)?;
        let levels = enumerate_levels(&p, 6)?;
        let dense = dense_spectrum(n, 1.0, g)?;
        println!("g = {g}");
        for (l, d) in levels.iter().zip(&dense) {
            println!("  {:>10.6}  (dense {:>10.6})  Z2 = {:+}  occupied {:?}", l.energy, d, l.sector.z2(), l.occupied);
        }
        let gap = first_gap(&p);
        println!("  sector gap {:.6}, large-N form {:.6}", gap.exact, gap.asymptotic);
    }

    let n = 501;
    let (g, gap) = min_two_fermion_gap(n, 0.5, 1.5)?;
    println!("N = {n}: smallest two-fermion gap {gap:.6} at g = {g:.4} (4π/N = {:.6})", 4.0 * std::f64::consts::PI / n as f64);
    Ok(())
}
