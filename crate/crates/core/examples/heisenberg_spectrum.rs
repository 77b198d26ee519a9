//! Symmetry-resolved spectrum of a five-site anisotropic Heisenberg ring,
//! labelled by group index n, momentum k and position d.

use spinramp::heisenberg::classify::classify_along;
use spinramp::heisenberg::{sector_basis, HeisenbergParams};

fn main() -> spinramp::Result<()> {
    let n = 5;
    let g = 5.0;
    let p = HeisenbergParams::new(n, 1.0, [0.1, 0.3, 1.0], g)?;
    let mut rows = Vec::new();
    for k in 0..n {
        for z2 in [1i8, -1] {
            let basis = sector_basis(n, k, z2)?;
            let dec = classify_along(&p, &basis, &[g])?.pop().expect("one field");
            for (e, l) in dec.energies.iter().zip(&dec.labels) {
                rows.push((*e, l.group_index, k, z2, l.degeneracy_index));
            }
        }
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    println!("{:>10}  n  k  Z2  d", "E/J");
    for (e, group, k, z2, d) in rows.iter().take(16) {
        println!("{e:>10.4}  {group}  {k}  {z2:+}  {d}");
    }
    Ok(())
}
