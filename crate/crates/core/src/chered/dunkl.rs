use std::sync::Arc;

use super::algebra::Cherednik;
use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, ParamScalar, Poly};
use crate::refgroup::Character;

/// Element of `C[h] (x) lambda`, one polynomial per basis vector of `lambda`.
pub type VecPoly = Vec<Poly<ParamScalar>>;

/// Dunkl operators on `C[h] (x) lambda`.
#[derive(Clone, Debug)]
pub struct Dunkl {
    alg: Arc<Cherednik>,
    rho: Vec<Vec<Vec<ParamScalar>>>,
    alphas: Vec<Poly<ParamScalar>>,
    /// `sum_i kappa_{H,i} zeta^{ij}` for `j = 0..ell`.
    weights: Vec<Vec<ParamScalar>>,
}

impl Dunkl {
    pub fn new(alg: &Arc<Cherednik>, lambda: &Character) -> Result<Dunkl> {
        let field = alg.field().clone();
        let group = alg.group().clone();
        let n = alg.dim();
        let d = lambda.dim();
        let rho = (0..group.order())
            .map(|g| {
                let m = lambda.matrix(g);
                (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|t| ParamScalar::from_cyclo(&field, &m[(r, t)]))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<_>>>>()
            })
            .collect::<Result<_>>()?;
        let proto = ParamScalar::zero(&field);
        let mut alphas = Vec::new();
        let mut weights = Vec::new();
        for (h, hp) in group.hyperplanes().iter().enumerate() {
            let mut terms = Vec::new();
            for i in 0..n {
                if !hp.alpha[i].is_zero() {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    terms.push((e, ParamScalar::from_cyclo(&field, &hp.alpha[i])?));
                }
            }
            alphas.push(Poly::from_terms(n, &proto, terms));
            let zeta = Cyclo::root_of_unity(group.field(), hp.ell, 1)?;
            let mut w = Vec::new();
            for j in 0..hp.ell as i64 {
                let mut acc = ParamScalar::zero(&field);
                for i in 0..hp.ell as i64 {
                    let k = alg.parameter().kappa_h(h, i);
                    acc = acc.checked_add(&k.scale_cyclo(&zeta.pow(i * j)?))?;
                }
                w.push(acc);
            }
            weights.push(w);
        }
        Ok(Dunkl {
            alg: alg.clone(),
            rho,
            alphas,
            weights,
        })
    }

    pub fn algebra(&self) -> &Arc<Cherednik> {
        &self.alg
    }

    pub fn lambda_dim(&self) -> usize {
        self.rho[0].len()
    }

    /// Zero element of `C[h] (x) lambda`.
    pub fn zero(&self) -> VecPoly {
        let proto = ParamScalar::zero(self.alg.field());
        vec![Poly::zero(self.alg.dim(), &proto); self.lambda_dim()]
    }

    /// Diagonal action `g . (p (x) v) = (g . p) (x) rho(g) v`.
    pub fn act(&self, g: usize, p: &VecPoly) -> VecPoly {
        let inner: VecPoly = p.iter().map(|q| self.alg.act_poly(g, q)).collect();
        self.act_vector(g, &inner)
    }

    /// `(1 (x) rho(g)) p`.
    pub fn act_vector(&self, g: usize, p: &VecPoly) -> VecPoly {
        let m = &self.rho[g];
        let mut out = self.zero();
        for (r, row) in m.iter().enumerate() {
            for (t, c) in row.iter().enumerate() {
                if !c.is_zero() && !p[t].is_zero() {
                    out[r] = out[r].add(&p[t].scale(c));
                }
            }
        }
        out
    }

    /// `x_i . p`.
    pub fn apply_x(&self, i: usize, p: &VecPoly) -> VecPoly {
        let n = self.alg.dim();
        let mut e = vec![0; n];
        e[i] = 1;
        let one = ParamScalar::one(self.alg.field());
        p.iter().map(|q| q.mul_term(&e, &one)).collect()
    }

    /// Dunkl operator `D_y` for `y = sum_j y[j] y_j`.
    pub fn apply(&self, y: &[ParamScalar], p: &VecPoly) -> Result<VecPoly> {
        let group = self.alg.group().clone();
        let mut out = self.zero();
        for (j, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, q) in p.iter().enumerate() {
                out[r] = out[r].add(&q.derivative(j).scale(c));
            }
        }
        for (h, hp) in group.hyperplanes().iter().enumerate() {
            let mut pairing = ParamScalar::zero(self.alg.field());
            for (j, c) in y.iter().enumerate() {
                if !hp.alpha[j].is_zero() {
                    pairing = pairing.checked_add(&c.scale_cyclo(&hp.alpha[j]))?;
                }
            }
            if pairing.is_zero() {
                continue;
            }
            let mut inner = self.zero();
            for (j, &s) in hp.stabilizer.iter().enumerate().skip(1) {
                let w = &self.weights[h][j];
                if w.is_zero() {
                    continue;
                }
                let moved = self.act(s, p);
                let fixed = self.act_vector(s, p);
                for r in 0..inner.len() {
                    inner[r] = inner[r].add(&moved[r].sub(&fixed[r]).scale(w));
                }
            }
            // ell_H sum_i kappa_i e_i = sum_j weights[j] s^j
            let factor = pairing;
            for r in 0..out.len() {
                if inner[r].is_zero() {
                    continue;
                }
                let q = inner[r].exact_div(&self.alphas[h]).ok_or_else(|| {
                    Error::Internal("Dunkl difference not divisible by root".into())
                })?;
                out[r] = out[r].add(&q.scale(&factor));
            }
        }
        Ok(out)
    }

    /// Dunkl operator along the basis vector `y_j`.
    pub fn apply_basis(&self, j: usize, p: &VecPoly) -> Result<VecPoly> {
        let field = self.alg.field();
        let y: Vec<ParamScalar> = (0..self.alg.dim())
            .map(|k| {
                if k == j {
                    ParamScalar::one(field)
                } else {
                    ParamScalar::zero(field)
                }
            })
            .collect();
        self.apply(&y, p)
    }
}
