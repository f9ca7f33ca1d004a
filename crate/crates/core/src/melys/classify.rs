use std::fmt;

use num_integer::Integer;

use super::map::{power_of_linear, EquivariantMap};
use super::rep::{
    annihilator, canonical_rows, linear_form, rows_matrix, subgroup, LinearRep, RepReflection,
};
use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, Matrix, Poly};
use crate::refgroup::CParameter;

/// The possible shapes of a melys map onto an irreducible reflection
/// representation.
#[derive(Clone, Debug, PartialEq)]
pub enum IrreducibleClass {
    Zero,
    /// `phi` is linear with kernel the fixed space of the source;
    /// `matrix` maps source points to target points.
    Projection {
        matrix: Matrix<Cyclo>,
    },
    /// `phi^*(x) = scale * beta^r` on a line with `W = Z/ell`.
    PowerMap {
        r: u32,
        ell: u32,
        beta: Vec<Cyclo>,
        scale: Cyclo,
    },
}

impl fmt::Display for IrreducibleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleClass::Zero => write!(f, "zero"),
            IrreducibleClass::Projection { .. } => write!(f, "projection"),
            IrreducibleClass::PowerMap { r, ell, .. } => {
                write!(f, "power map r = {r} (ell = {ell})")
            }
        }
    }
}

fn nonzero_reflections(
    map: &EquivariantMap,
    c: &crate::refgroup::CParameter,
) -> Vec<RepReflection> {
    map.target()
        .reflections()
        .into_iter()
        .filter(|r| c.values.get(&r.element).is_some_and(|v| !v.is_zero()))
        .collect()
}

fn same_subspace(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>], dim: usize, proto: &Cyclo) -> bool {
    canonical_rows(a, dim, proto) == canonical_rows(b, dim, proto)
}

/// Classifies `phi` (given by its target components) for a group generated
/// by `gens` acting irreducibly on the target.
fn classify_core(
    source: &LinearRep,
    gens: &[usize],
    phi: &[Poly<Cyclo>],
) -> Result<IrreducibleClass> {
    if phi.iter().all(|p| p.is_zero()) {
        return Ok(IrreducibleClass::Zero);
    }
    let proto = source.proto();
    let n = source.dim();
    let mut degree = None;
    for p in phi.iter().filter(|p| !p.is_zero()) {
        let d = p.total_degree().unwrap();
        if !p.is_homogeneous() || degree.is_some_and(|e| e != d) {
            return Err(Error::ClassificationFailure(
                "map is not homogeneous".into(),
            ));
        }
        degree = Some(d);
    }
    let r = degree.unwrap();
    let fixed = source.common_fixed_space(gens);
    if r == 0 {
        return Err(Error::ClassificationFailure(
            "nonzero constant map to an irreducible representation".into(),
        ));
    }
    if r == 1 {
        let rows: Vec<Vec<Cyclo>> = phi
            .iter()
            .map(|p| {
                (0..n)
                    .map(|k| {
                        let mut e = vec![0; n];
                        e[k] = 1;
                        p.coefficient(&e)
                    })
                    .collect()
            })
            .collect();
        let matrix = rows_matrix(&rows, n, &proto);
        if matrix.rank() != phi.len() || !same_subspace(&matrix.kernel(), &fixed, n, &proto) {
            return Err(Error::ClassificationFailure(
                "linear map is not a projection along the fixed space".into(),
            ));
        }
        return Ok(IrreducibleClass::Projection { matrix });
    }
    if phi.len() != 1 {
        return Err(Error::ClassificationFailure(format!(
            "power map of degree {r} onto a target of dimension {}",
            phi.len()
        )));
    }
    let ell = subgroup(source.group(), gens).len() as u32;
    let moved = annihilator(&source.fixed_space(gens[0]), n, &proto);
    let failure =
        || Error::ClassificationFailure(format!("degree {r} map is not a power of a linear form"));
    if moved.len() != 1 {
        return Err(failure());
    }
    let (_, scale) =
        power_of_linear(&phi[0], &linear_form(&moved[0], &proto)).ok_or_else(failure)?;
    if annihilator(&fixed, n, &proto) != moved {
        return Err(failure());
    }
    if r.gcd(&ell) != 1 {
        return Err(Error::ClassificationFailure(format!(
            "power map with r = {r} not coprime to ell = {ell}"
        )));
    }
    Ok(IrreducibleClass::PowerMap {
        r,
        ell,
        beta: moved[0].clone(),
        scale,
    })
}

/// Which shape a melys map onto an irreducible `(h, W)` with `W = W(c)` has.
pub fn classify_irreducible_melys(
    map: &EquivariantMap,
    c: &CParameter,
) -> Result<IrreducibleClass> {
    let target = map.target();
    if !target.is_irreducible() {
        return Err(Error::HypothesesNotMet("target is not irreducible".into()));
    }
    let gens: Vec<usize> = nonzero_reflections(map, c)
        .iter()
        .map(|r| r.element)
        .collect();
    if subgroup(target.group(), &gens).len() != target.group().order() {
        return Err(Error::HypothesesNotMet(
            "the group is not generated by reflections with c != 0".into(),
        ));
    }
    let report = map.is_melys(c)?;
    if let Some(w) = report.witness {
        return Err(Error::HypothesesNotMet(format!(
            "map is not melys along reflection {}",
            w.element
        )));
    }
    classify_core(map.source(), &gens, map.components())
}

/// One irreducible factor `h_i` of `h` under `W(c)`.
#[derive(Clone, Debug)]
pub struct FactorBlock {
    pub reflections: Vec<usize>,
    /// Basis of `h_i`.
    pub basis: Vec<Vec<Cyclo>>,
    pub class: IrreducibleClass,
}

/// `phi = p o phi(r) o iota` with `iota: k -> h x k^W` a closed embedding,
/// `phi(r)` the power maps on the line factors and `p` the projection.
///
/// `h` is written in the adapted basis: the blocks in order, then `h^W`.
#[derive(Clone, Debug)]
pub struct MelysFactorization {
    pub blocks: Vec<FactorBlock>,
    pub fixed_basis: Vec<Vec<Cyclo>>,
    /// `dim k^W`.
    pub source_fixed_dim: usize,
    pub exponents: Vec<u32>,
    pub embedding: Vec<Poly<Cyclo>>,
    pub power_map: Vec<Poly<Cyclo>>,
    pub projection: Vec<Poly<Cyclo>>,
}

impl MelysFactorization {
    /// `p o phi(r) o iota`.
    pub fn composite(&self) -> Vec<Poly<Cyclo>> {
        let mid: Vec<Poly<Cyclo>> = self
            .power_map
            .iter()
            .map(|p| p.compose(&self.embedding))
            .collect();
        self.projection.iter().map(|p| p.compose(&mid)).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

fn var_poly(i: usize, n: usize, proto: &Cyclo) -> Poly<Cyclo> {
    Poly::var(i, n, proto)
}

/// Factors a melys map between linear representations through the
/// irreducible factors of `h` under `W(c)`.
pub fn factor_linear_melys(map: &EquivariantMap, c: &CParameter) -> Result<MelysFactorization> {
    let report = map.is_melys(c)?;
    if let Some(w) = report.witness {
        return Err(Error::NotMelys(format!(
            "reflection {}: {}",
            w.element, w.reason
        )));
    }
    let group = map.target().group().clone();
    let target = map.target();
    let source = map.source();
    let proto = target.proto();
    let (n, d) = (source.dim(), target.dim());
    let refl = nonzero_reflections(map, c);

    // reflections in one irreducible factor: same hyperplane or not commuting
    let mut uf = UnionFind((0..refl.len()).collect());
    for a in 0..refl.len() {
        for b in a + 1..refl.len() {
            let (x, y) = (refl[a].element, refl[b].element);
            if refl[a].coroot == refl[b].coroot || group.mul(x, y) != group.mul(y, x) {
                uf.union(a, b);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for a in 0..refl.len() {
        let root = uf.find(a);
        match roots.iter().position(|&x| x == root) {
            Some(i) => comps[i].push(a),
            None => {
                roots.push(root);
                comps.push(vec![a]);
            }
        }
    }

    let mut columns: Vec<Vec<Cyclo>> = Vec::new();
    let mut block_ranges = Vec::new();
    let mut block_basis = Vec::new();
    for comp in &comps {
        let coroots: Vec<Vec<Cyclo>> = comp.iter().map(|&a| refl[a].coroot.clone()).collect();
        let basis = canonical_rows(&coroots, d, &proto);
        block_ranges.push(columns.len()..columns.len() + basis.len());
        columns.extend(basis.iter().cloned());
        block_basis.push(basis);
    }
    let all: Vec<usize> = refl.iter().map(|r| r.element).collect();
    let fixed_basis = target.common_fixed_space(&all);
    let fixed_range = columns.len()..columns.len() + fixed_basis.len();
    columns.extend(fixed_basis.iter().cloned());
    if columns.len() != d {
        return Err(Error::Internal("factors do not span the target".into()));
    }
    let p = Matrix::from_columns(&columns, d, &proto);
    let q = p.inverse()?;
    // phi in adapted coordinates
    let adapted: Vec<Poly<Cyclo>> = (0..d)
        .map(|a| {
            let mut acc = Poly::zero(n, &proto);
            for (b, comp) in map.components().iter().enumerate() {
                if !q[(a, b)].is_zero() {
                    acc = acc.add(&comp.scale(&q[(a, b)]));
                }
            }
            acc
        })
        .collect();

    // k^W coordinates from the averaging projector: pi = B A
    let wc = subgroup(&group, &all);
    let mut avg = Matrix::zeros(n, n, &proto);
    for &g in &wc {
        avg = avg.add(source.matrix(g));
    }
    let avg = avg.scale(&Cyclo::from_rational(
        group.field(),
        crate::exactfield::qq(1, wc.len() as i64),
    ));
    let (rref, pivots) = avg.rref();
    let t = pivots.len();
    let src_fixed: Vec<Poly<Cyclo>> = (0..t).map(|r| linear_form(rref.row(r), &proto)).collect();

    let m = d + t;
    let mut embedding = adapted.clone();
    embedding.extend(src_fixed);
    let mut power_map: Vec<Poly<Cyclo>> = (0..m).map(|i| var_poly(i, m, &proto)).collect();
    let mut blocks = Vec::new();
    let mut exponents = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        let range = block_ranges[i].clone();
        let gens: Vec<usize> = comp.iter().map(|&a| refl[a].element).collect();
        let class = classify_core(source, &gens, &adapted[range.clone()])?;
        let mut r = 1;
        if let IrreducibleClass::PowerMap {
            r: ri, beta, scale, ..
        } = &class
        {
            r = *ri;
            let z = range.start;
            embedding[z] = linear_form(beta, &proto);
            power_map[z] = var_poly(z, m, &proto).pow(*ri).scale(scale);
        }
        exponents.push(r);
        blocks.push(FactorBlock {
            reflections: gens,
            basis: block_basis[i].clone(),
            class,
        });
    }
    let projection: Vec<Poly<Cyclo>> = (0..d)
        .map(|a| {
            let row: Vec<Cyclo> = (0..m)
                .map(|j| {
                    if j < d {
                        p[(a, j)].clone()
                    } else {
                        proto.clone()
                    }
                })
                .collect();
            linear_form(&row, &proto)
        })
        .collect();
    let out = MelysFactorization {
        blocks,
        fixed_basis: fixed_range.map(|j| columns[j].clone()).collect(),
        source_fixed_dim: t,
        exponents,
        embedding,
        power_map,
        projection,
    };
    if out.composite() != map.components() {
        return Err(Error::Internal(
            "factorization does not compose to the map".into(),
        ));
    }
    Ok(out)
}
