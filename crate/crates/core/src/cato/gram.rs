use std::collections::HashMap;

use super::verma::GradedModule;
use crate::error::{Error, Result};
use crate::exactfield::{monomials_of_degree, Matrix, Mono, ParamScalar, Ring};
use crate::refgroup::Character;

/// The contravariant form restricted to one isotypic component of one
/// graded piece.
#[derive(Clone, Debug, PartialEq)]
pub struct GramBlock {
    pub degree: usize,
    pub isotype: String,
    /// Columns of `basis` span the block; `matrix[i][j] = (b_i, b_j)`.
    pub basis: Matrix<ParamScalar>,
    pub matrix: Matrix<ParamScalar>,
}

impl GradedModule {
    /// Maps `y^a: M_m -> M_0` for every `a` of degree `m`.
    fn lowering_words(&self, m: usize) -> Result<Vec<(Mono, Matrix<ParamScalar>)>> {
        let n = self.algebra().dim();
        let proto = ParamScalar::zero(self.algebra().field());
        let mut prev: HashMap<Mono, Matrix<ParamScalar>> = HashMap::new();
        prev.insert(vec![0; n], Matrix::identity(self.dim(0), &proto));
        for k in 1..=m {
            let mut cur = HashMap::new();
            for a in monomials_of_degree(n, k as u32) {
                let i = a.iter().position(|&e| e > 0).unwrap();
                let mut rest = a.clone();
                rest[i] -= 1;
                let t = prev[&rest].mul(self.y_op(k, i)?);
                cur.insert(a, t);
            }
            prev = cur;
        }
        Ok(monomials_of_degree(n, m as u32)
            .into_iter()
            .map(|a| {
                let t = prev.remove(&a).unwrap();
                (a, t)
            })
            .collect())
    }

    /// Gram matrix `G[p][q] = (e_p, e_q)` of the contravariant form on `M_m`,
    /// where `(x_i u, v) = (u, y_i v)` and the form on `M_0` is the invariant
    /// form of `lambda`. The form is linear in the first argument.
    pub fn gram_matrix(&self, m: usize) -> Result<Matrix<ParamScalar>> {
        if m > self.truncation() {
            return Err(Error::TruncationExceeded {
                needed: m,
                bound: self.truncation(),
            });
        }
        let group = self.algebra().group();
        if !group.is_unitary() {
            return Err(Error::InvalidInput(
                "the contravariant form needs a group acting by unitary matrices".into(),
            ));
        }
        let field = self.algebra().field().clone();
        let d = self.lambda().dim();
        let form = self.lambda().form();
        let f: Vec<Vec<ParamScalar>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|s| ParamScalar::from_cyclo(&field, &form[(r, s)]))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let len = self.dim(m);
        let mut g = Matrix::zeros(len, len, &ParamScalar::zero(&field));
        for (a, t) in self.lowering_words(m)? {
            for s in 0..d {
                let p = self
                    .basis_index(m, &a, s)
                    .ok_or_else(|| Error::Internal("missing basis vector".into()))?;
                for q in 0..len {
                    let mut acc = ParamScalar::zero(&field);
                    for (r, row) in f.iter().enumerate() {
                        let c = &t[(r, q)];
                        if !c.is_zero() && !row[s].is_zero() {
                            acc = acc.checked_add(&row[s].checked_mul(&c.conj())?)?;
                        }
                    }
                    g[(p, q)] = acc;
                }
            }
        }
        Ok(g)
    }

    /// `(u, v)` for `u, v` in `M_m`.
    pub fn form(
        &self,
        gram: &Matrix<ParamScalar>,
        u: &[ParamScalar],
        v: &[ParamScalar],
    ) -> ParamScalar {
        let vc: Vec<ParamScalar> = v.iter().map(ParamScalar::conj).collect();
        let gv = gram.apply(&vc);
        let mut acc = ParamScalar::zero(self.algebra().field());
        for (a, b) in u.iter().zip(&gv) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add_ref(&a.mul_ref(b));
            }
        }
        acc
    }

    pub fn gram_block(&self, m: usize, mu: &Character) -> Result<GramBlock> {
        let g = self.gram_matrix(m)?;
        let basis = self.isotypic_basis(m, mu)?;
        Ok(GramBlock {
            degree: m,
            isotype: mu.name.clone(),
            matrix: basis.transpose().mul(&g).mul(&basis.map(ParamScalar::conj)),
            basis,
        })
    }

    /// Radical of the form on `M_m`, as a list of vectors.
    pub fn radical(&self, m: usize) -> Result<Vec<Vec<ParamScalar>>> {
        let g = self.gram_matrix(m)?;
        Ok(g.kernel()
            .into_iter()
            .map(|v| v.iter().map(ParamScalar::conj).collect())
            .collect())
    }

    /// Graded dimensions of the simple quotient `L(lambda)` up to the truncation.
    pub fn simple_dims(&self) -> Result<Vec<usize>> {
        (0..=self.truncation())
            .map(|m| Ok(self.gram_matrix(m)?.rank()))
            .collect()
    }
}
