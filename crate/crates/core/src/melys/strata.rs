use std::collections::HashSet;

use super::rep::{annihilator, canonical_rows, rows_matrix, LinearRep};
use crate::exactfield::{Cyclo, Matrix};

/// The points whose stabilizer is conjugate to `parabolic`.
///
/// The stratum is the union of the translates of `L minus (smaller members
/// of the fixed-space lattice)`, where `L` is cut out by `equations`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum {
    /// Elements of the pointwise stabilizer `P` of `L`.
    pub parabolic: Vec<usize>,
    /// Basis of `L`.
    pub subspace: Vec<Vec<Cyclo>>,
    /// Covectors cutting out `L`, in reduced echelon form.
    pub equations: Vec<Vec<Cyclo>>,
    /// Equations of the lattice members strictly inside `L`; the stratum
    /// avoids each of them.
    pub excluded: Vec<Vec<Vec<Cyclo>>>,
    pub dim: usize,
    /// Number of distinct translates `g L`.
    pub orbit_size: usize,
}

fn intersect(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>], dim: usize, proto: &Cyclo) -> Vec<Vec<Cyclo>> {
    let mut rows = a.to_vec();
    rows.extend(b.iter().cloned());
    canonical_rows(&rows, dim, proto)
}

fn basis_of(eqs: &[Vec<Cyclo>], dim: usize, proto: &Cyclo) -> Vec<Vec<Cyclo>> {
    rows_matrix(eqs, dim, proto).kernel()
}

fn contains(big: &[Vec<Cyclo>], small_basis: &[Vec<Cyclo>]) -> bool {
    big.iter().all(|eq| {
        small_basis.iter().all(|v| {
            let mut acc = Cyclo::zero(eq[0].field());
            for (a, b) in eq.iter().zip(v) {
                acc = acc.add(&a.mul(b));
            }
            acc.is_zero()
        })
    })
}

/// The stabilizer stratification of a linear representation.
pub fn stabilizer_strata(rep: &LinearRep) -> Vec<Stratum> {
    let group = rep.group();
    let n = rep.dim();
    let proto = rep.proto();
    let mut lattice: HashSet<Vec<Vec<Cyclo>>> = HashSet::new();
    for g in 0..group.order() {
        lattice.insert(annihilator(&rep.fixed_space(g), n, &proto));
    }
    loop {
        let members: Vec<_> = lattice.iter().cloned().collect();
        let before = lattice.len();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                lattice.insert(intersect(a, b, n, &proto));
            }
        }
        if lattice.len() == before {
            break;
        }
    }
    let mut members: Vec<Vec<Vec<Cyclo>>> = lattice.into_iter().collect();
    members.sort_by_key(|m| (m.len(), format!("{m:?}")));
    let translate = |g: usize, basis: &[Vec<Cyclo>]| -> Vec<Vec<Cyclo>> {
        let m: &Matrix<Cyclo> = rep.matrix(g);
        let moved: Vec<Vec<Cyclo>> = basis.iter().map(|v| m.apply(v)).collect();
        annihilator(&moved, n, &proto)
    };
    let mut seen: HashSet<Vec<Vec<Cyclo>>> = HashSet::new();
    let mut strata = Vec::new();
    for eqs in &members {
        if seen.contains(eqs) {
            continue;
        }
        let basis = basis_of(eqs, n, &proto);
        let orbit: HashSet<Vec<Vec<Cyclo>>> =
            (0..group.order()).map(|g| translate(g, &basis)).collect();
        let parabolic: Vec<usize> = (0..group.order())
            .filter(|&g| basis.iter().all(|v| rep.matrix(g).apply(v) == *v))
            .collect();
        let excluded = members
            .iter()
            .filter(|other| *other != eqs && contains(eqs, &basis_of(other, n, &proto)))
            .cloned()
            .collect();
        strata.push(Stratum {
            parabolic,
            dim: basis.len(),
            subspace: basis,
            equations: eqs.clone(),
            excluded,
            orbit_size: orbit.len(),
        });
        seen.extend(orbit);
    }
    strata.sort_by_key(|s| s.dim);
    strata
}
