use std::collections::HashMap;
use std::sync::Arc;

use crate::chered::{Cherednik, Dunkl};
use crate::error::{Error, Result};
use crate::exactfield::{monomials_of_degree, Matrix, Mono, ParamScalar, Poly};
use crate::refgroup::{Character, Parameter};

/// A truncated graded module `M_0 + ... + M_N` with explicit operator
/// matrices. Matrices act on column vectors of coordinates.
#[derive(Clone, Debug)]
pub struct GradedModule {
    alg: Arc<Cherednik>,
    lambda: Character,
    truncation: usize,
    basis: Vec<Vec<(Mono, usize)>>,
    index: Vec<HashMap<(Mono, usize), usize>>,
    /// `x_ops[m][i]: M_m -> M_{m+1}` for `m < N`.
    x_ops: Vec<Vec<Matrix<ParamScalar>>>,
    /// `y_ops[m][j]: M_m -> M_{m-1}`; empty for `m = 0`.
    y_ops: Vec<Vec<Matrix<ParamScalar>>>,
    /// `w_ops[m][g]: M_m -> M_m`.
    w_ops: Vec<Vec<Matrix<ParamScalar>>>,
}

/// `kappa(lambda)`, the scalar by which `eu` acts on the lowest weight space
/// of `Delta(lambda)`.
pub fn euler_lowest_eigenvalue(param: &Parameter, lambda: &Character) -> Result<ParamScalar> {
    let group = param.group();
    let field = param.field();
    let mut acc = ParamScalar::zero(field);
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        for i in 0..hp.ell as i64 {
            let tr = lambda.idempotent_trace(group, h, i);
            if tr.is_zero() {
                continue;
            }
            let k = param.kappa_h(h, i).scale_cyclo(&tr);
            acc = acc.checked_sub(&k.checked_mul(&ParamScalar::from_int(field, hp.ell as i64))?)?;
        }
    }
    acc.checked_div(&ParamScalar::from_int(field, lambda.dim() as i64))
}

fn unit(field: &Arc<crate::exactfield::ScalarField>, len: usize, k: usize) -> Vec<ParamScalar> {
    let mut v = vec![ParamScalar::zero(field); len];
    v[k] = ParamScalar::one(field);
    v
}

impl GradedModule {
    /// The Verma module `Delta(lambda)` truncated at degree `n`.
    pub fn verma(alg: &Arc<Cherednik>, lambda: &Character, n: usize) -> Result<GradedModule> {
        let field = alg.field().clone();
        let dim = alg.dim();
        let d = lambda.dim();
        let proto = ParamScalar::zero(&field);
        let dunkl = Dunkl::new(alg, lambda)?;
        let mut basis = Vec::new();
        let mut index = Vec::new();
        for m in 0..=n {
            let b: Vec<(Mono, usize)> = monomials_of_degree(dim, m as u32)
                .into_iter()
                .flat_map(|a| (0..d).map(move |r| (a.clone(), r)))
                .collect();
            index.push(
                b.iter()
                    .cloned()
                    .enumerate()
                    .map(|(k, v)| (v, k))
                    .collect::<HashMap<_, _>>(),
            );
            basis.push(b);
        }
        let coords = |m: usize, p: &[Poly<ParamScalar>]| -> Result<Vec<ParamScalar>> {
            let idx: &HashMap<(Mono, usize), usize> = &index[m];
            let mut v = vec![proto.clone(); basis[m].len()];
            for (r, q) in p.iter().enumerate() {
                for (e, c) in q.terms() {
                    let k = idx
                        .get(&(e.clone(), r))
                        .ok_or_else(|| Error::Internal("operator left its graded piece".into()))?;
                    v[*k] = c.clone();
                }
            }
            Ok(v)
        };
        let element = |m: usize, k: usize| -> Vec<Poly<ParamScalar>> {
            let (a, r) = &basis[m][k];
            let mut v = dunkl.zero();
            v[*r] = Poly::monomial(a.clone(), ParamScalar::one(&field));
            v
        };
        let mut x_ops = Vec::new();
        let mut y_ops = Vec::new();
        let mut w_ops = Vec::new();
        for m in 0..=n {
            let len = basis[m].len();
            let mut xs = Vec::new();
            if m < n {
                for i in 0..dim {
                    let cols = (0..len)
                        .map(|k| coords(m + 1, &dunkl.apply_x(i, &element(m, k))))
                        .collect::<Result<Vec<_>>>()?;
                    xs.push(Matrix::from_columns(&cols, basis[m + 1].len(), &proto));
                }
            }
            x_ops.push(xs);
            let mut ys = Vec::new();
            if m > 0 {
                for j in 0..dim {
                    let cols = (0..len)
                        .map(|k| coords(m - 1, &dunkl.apply_basis(j, &element(m, k))?))
                        .collect::<Result<Vec<_>>>()?;
                    ys.push(Matrix::from_columns(&cols, basis[m - 1].len(), &proto));
                }
            }
            y_ops.push(ys);
            let ws = (0..alg.group().order())
                .map(|g| {
                    let cols = (0..len)
                        .map(|k| coords(m, &dunkl.act(g, &element(m, k))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Matrix::from_columns(&cols, len, &proto))
                })
                .collect::<Result<Vec<_>>>()?;
            w_ops.push(ws);
        }
        Ok(GradedModule {
            alg: alg.clone(),
            lambda: lambda.clone(),
            truncation: n,
            basis,
            index,
            x_ops,
            y_ops,
            w_ops,
        })
    }

    pub fn algebra(&self) -> &Arc<Cherednik> {
        &self.alg
    }

    pub fn lambda(&self) -> &Character {
        &self.lambda
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self, m: usize) -> usize {
        self.basis[m].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Basis of `M_m` as pairs (monomial, index into `lambda`).
    pub fn basis(&self, m: usize) -> &[(Mono, usize)] {
        &self.basis[m]
    }

    pub fn basis_index(&self, m: usize, a: &[u32], r: usize) -> Option<usize> {
        self.index[m].get(&(a.to_vec(), r)).copied()
    }

    pub fn unit_vector(&self, m: usize, k: usize) -> Vec<ParamScalar> {
        unit(self.alg.field(), self.dim(m), k)
    }

    fn check_degree(&self, m: usize) -> Result<()> {
        if m > self.truncation {
            Err(Error::TruncationExceeded {
                needed: m,
                bound: self.truncation,
            })
        } else {
            Ok(())
        }
    }

    pub fn x_op(&self, m: usize, i: usize) -> Result<&Matrix<ParamScalar>> {
        self.check_degree(m + 1)?;
        Ok(&self.x_ops[m][i])
    }

    pub fn y_op(&self, m: usize, j: usize) -> Result<&Matrix<ParamScalar>> {
        self.check_degree(m)?;
        if m == 0 {
            return Err(Error::InvalidInput("y lowers degree 0 to nothing".into()));
        }
        Ok(&self.y_ops[m][j])
    }

    pub fn w_op(&self, m: usize, g: usize) -> Result<&Matrix<ParamScalar>> {
        self.check_degree(m)?;
        Ok(&self.w_ops[m][g])
    }

    /// Stacked `y` maps `M_m -> M_{m-1}^n`.
    pub fn lowering_matrix(&self, m: usize) -> Result<Matrix<ParamScalar>> {
        self.check_degree(m)?;
        let mut it = self.y_ops[m].iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidInput("no lowering operators".into()))?;
        Ok(it.fold(first.clone(), |acc, y| acc.vstack(y)))
    }

    /// Matrix of `eu` on `M_m`.
    pub fn euler_matrix(&self, m: usize) -> Result<Matrix<ParamScalar>> {
        self.check_degree(m)?;
        let field = self.alg.field();
        let len = self.dim(m);
        let mut eu = Matrix::zeros(len, len, &ParamScalar::zero(field));
        if m > 0 {
            for i in 0..self.alg.dim() {
                eu = eu.add(&self.x_ops[m - 1][i].mul(&self.y_ops[m][i]));
            }
        }
        let group = self.alg.group().clone();
        for (h, hp) in group.hyperplanes().iter().enumerate() {
            for i in 0..hp.ell as i64 {
                let k = self.alg.parameter().kappa_h(h, i);
                if k.is_zero() {
                    continue;
                }
                let c = k.checked_mul(&ParamScalar::from_int(field, hp.ell as i64))?;
                for (g, e) in self.alg.idempotent(h, i)? {
                    eu = eu.sub(&self.w_ops[m][g].scale(&e.checked_mul(&c)?));
                }
            }
        }
        Ok(eu)
    }

    /// Projector onto the `mu`-isotypic component of `M_m`.
    pub fn isotypic_projector(&self, m: usize, mu: &Character) -> Result<Matrix<ParamScalar>> {
        self.check_degree(m)?;
        let field = self.alg.field();
        let order = self.alg.group().order();
        let len = self.dim(m);
        let mut p = Matrix::zeros(len, len, &ParamScalar::zero(field));
        for g in 0..order {
            let c = ParamScalar::from_cyclo(field, &mu.value(g).conj())?;
            if !c.is_zero() {
                p = p.add(&self.w_ops[m][g].scale(&c));
            }
        }
        let scale = ParamScalar::from_int(field, mu.dim() as i64)
            .checked_div(&ParamScalar::from_int(field, order as i64))?;
        Ok(p.scale(&scale))
    }

    /// Basis of the `mu`-isotypic component: the pivot columns of the projector.
    pub fn isotypic_basis(&self, m: usize, mu: &Character) -> Result<Matrix<ParamScalar>> {
        let p = self.isotypic_projector(m, mu)?;
        let (_, pivots) = p.rref();
        let cols: Vec<Vec<ParamScalar>> = pivots.iter().map(|&c| p.column(c)).collect();
        Ok(Matrix::from_columns(&cols, p.rows(), p.proto()))
    }
}
