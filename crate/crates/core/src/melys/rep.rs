use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, Matrix, Poly};
use crate::refgroup::ReflectionGroup;

/// A linear representation of the abstract group underlying a reflection
/// group, given by the matrix of every element acting on points.
#[derive(Clone, Debug)]
pub struct LinearRep {
    group: Arc<ReflectionGroup>,
    dim: usize,
    mats: Vec<Matrix<Cyclo>>,
}

/// An element acting on a representation as a reflection.
#[derive(Clone, Debug, PartialEq)]
pub struct RepReflection {
    pub element: usize,
    /// Covector cutting out the fixed hyperplane, first nonzero entry 1.
    pub alpha: Vec<Cyclo>,
    /// Spans the image of `w - 1`, first nonzero entry 1.
    pub coroot: Vec<Cyclo>,
}

pub(crate) fn normalize_first(v: &[Cyclo]) -> Vec<Cyclo> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|c| c.mul(&inv)).collect()
        }
        None => v.to_vec(),
    }
}

pub(crate) fn rows_matrix(rows: &[Vec<Cyclo>], ncols: usize, proto: &Cyclo) -> Matrix<Cyclo> {
    let mut m = Matrix::zeros(rows.len(), ncols, proto);
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            m[(i, j)] = c.clone();
        }
    }
    m
}

/// Covectors vanishing on the span of `basis`, in reduced echelon form.
pub(crate) fn annihilator(basis: &[Vec<Cyclo>], dim: usize, proto: &Cyclo) -> Vec<Vec<Cyclo>> {
    let ann = rows_matrix(basis, dim, proto).kernel();
    canonical_rows(&ann, dim, proto)
}

/// Reduced echelon basis of the row span.
pub(crate) fn canonical_rows(rows: &[Vec<Cyclo>], dim: usize, proto: &Cyclo) -> Vec<Vec<Cyclo>> {
    let (m, pivots) = rows_matrix(rows, dim, proto).rref();
    (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
}

/// The linear polynomial `sum_i alpha_i x_i`.
pub fn linear_form(alpha: &[Cyclo], proto: &Cyclo) -> Poly<Cyclo> {
    let n = alpha.len();
    Poly::from_terms(
        n,
        proto,
        alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| {
                let mut e = vec![0; n];
                e[k] = 1;
                (e, a.clone())
            }),
    )
}

impl LinearRep {
    /// The reflection representation `h` itself.
    pub fn defining(group: &Arc<ReflectionGroup>) -> LinearRep {
        LinearRep {
            group: group.clone(),
            dim: group.dim(),
            mats: (0..group.order())
                .map(|g| group.matrix(g).clone())
                .collect(),
        }
    }

    /// `dim` copies of the trivial representation.
    pub fn trivial(group: &Arc<ReflectionGroup>, dim: usize) -> LinearRep {
        let id = Matrix::identity(dim, &Cyclo::zero(group.field()));
        LinearRep {
            group: group.clone(),
            dim,
            mats: vec![id; group.order()],
        }
    }

    /// Extends images of the generators, checking every relation.
    pub fn from_generator_images(
        group: &Arc<ReflectionGroup>,
        dim: usize,
        images: &[Matrix<Cyclo>],
    ) -> Result<LinearRep> {
        let gens = group.generators();
        if images.len() != gens.len() {
            return Err(Error::NotARepresentation(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let field = group.field().clone();
        let proto = Cyclo::zero(&field);
        let images: Vec<Matrix<Cyclo>> = images
            .iter()
            .map(|m| {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::NotARepresentation(format!(
                        "generator image is {}x{}, expected {dim}x{dim}",
                        m.rows(),
                        m.cols()
                    )));
                }
                if group.conductor() % crate::refgroup::conductor_of(m) != 0 {
                    return Err(Error::NotARepresentation(
                        "entries outside the group's cyclotomic field".into(),
                    ));
                }
                Ok(m.map_into(&proto, |c| c.embed(&field)))
            })
            .collect::<Result<_>>()?;
        let mut mats: Vec<Option<Matrix<Cyclo>>> = vec![None; group.order()];
        mats[0] = Some(Matrix::identity(dim, &proto));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let p = group.mul(e, g);
                let m = mats[e].as_ref().unwrap().mul(&images[k]);
                match &mats[p] {
                    Some(existing) if *existing != m => {
                        return Err(Error::NotARepresentation(format!(
                            "relation violated at element {p}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        mats[p] = Some(m);
                        queue.push(p);
                    }
                }
            }
        }
        let mats = mats
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::Internal("unreached element".into())))
            .collect::<Result<_>>()?;
        Ok(LinearRep {
            group: group.clone(),
            dim,
            mats,
        })
    }

    pub fn direct_sum(&self, other: &LinearRep) -> Result<LinearRep> {
        if *self.group != *other.group {
            return Err(Error::InvalidInput(
                "direct sum of representations of different groups".into(),
            ));
        }
        let proto = Cyclo::zero(self.group.field());
        let n = self.dim + other.dim;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(n, n, &proto);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        Ok(LinearRep {
            group: self.group.clone(),
            dim: n,
            mats,
        })
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn proto(&self) -> Cyclo {
        Cyclo::zero(self.group.field())
    }

    pub fn matrix(&self, g: usize) -> &Matrix<Cyclo> {
        &self.mats[g]
    }

    /// Row `i` gives `g . x_i` in the coordinate basis.
    pub fn dual_matrix(&self, g: usize) -> &Matrix<Cyclo> {
        &self.mats[self.group.inv(g)]
    }

    /// `g . p`, where `(g . p)(v) = p(g^{-1} v)`.
    pub fn act_poly(&self, g: usize, p: &Poly<Cyclo>) -> Poly<Cyclo> {
        let d = self.dual_matrix(g);
        let proto = self.proto();
        let images: Vec<Poly<Cyclo>> = (0..self.dim)
            .map(|i| linear_form(d.row(i), &proto))
            .collect();
        p.compose(&images)
    }

    /// Basis of the fixed space of `g`.
    pub fn fixed_space(&self, g: usize) -> Vec<Vec<Cyclo>> {
        self.common_fixed_space(&[g])
    }

    /// Basis of the subspace fixed by every element of `gs`.
    pub fn common_fixed_space(&self, gs: &[usize]) -> Vec<Vec<Cyclo>> {
        let proto = self.proto();
        let id = Matrix::identity(self.dim, &proto);
        let mut stacked = Matrix::zeros(0, self.dim, &proto);
        for &g in gs {
            stacked = stacked.vstack(&self.mats[g].sub(&id));
        }
        stacked.kernel()
    }

    /// Elements other than the identity whose fixed space is a hyperplane.
    pub fn reflections(&self) -> Vec<RepReflection> {
        let proto = self.proto();
        let id = Matrix::identity(self.dim, &proto);
        (1..self.group.order())
            .filter_map(|g| {
                let fixed = self.fixed_space(g);
                if fixed.len() + 1 != self.dim {
                    return None;
                }
                let alpha = annihilator(&fixed, self.dim, &proto).remove(0);
                let moved = self.mats[g].sub(&id);
                let coroot = (0..self.dim)
                    .map(|j| moved.column(j))
                    .find(|c| c.iter().any(|x| !x.is_zero()))?;
                Some(RepReflection {
                    element: g,
                    alpha: normalize_first(&alpha),
                    coroot: normalize_first(&coroot),
                })
            })
            .collect()
    }

    /// Whether `<chi, chi> = 1`.
    pub fn is_irreducible(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let f = self.group.field();
        let mut acc = Cyclo::zero(f);
        for m in &self.mats {
            let t = m.trace();
            acc = acc.add(&t.mul(&t.conj()));
        }
        acc == Cyclo::from_int(f, self.group.order() as i64)
    }
}

/// Elements of the subgroup generated by `gens`.
pub fn subgroup(group: &ReflectionGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    seen[0] = true;
    let mut out = vec![0];
    let mut head = 0;
    while head < out.len() {
        let e = out[head];
        head += 1;
        for &g in gens {
            let p = group.mul(e, g);
            if !seen[p] {
                seen[p] = true;
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out
}
