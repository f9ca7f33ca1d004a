use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, Matrix, ParamScalar, Q};
use crate::refgroup::Parameter;

/// A free module `C[x] (x) V` over `H_kappa(C, Z/ell)`, given by the action
/// of the generator `s` on the fiber `V`.
///
/// Regularity at the origin forces `y (x^i v) = x^{i-1} (i + ell sum_k
/// (kappa_{i+k} - kappa_k) P_k) v`, where `P_k` projects onto the `e_k`
/// eigenspace of `V`.
#[derive(Clone, Debug)]
pub struct FreeLineModule {
    param: Parameter,
    ell: u32,
    fiber: Matrix<ParamScalar>,
    projectors: Vec<Matrix<ParamScalar>>,
}

/// An O-coherent module on the line: a free part and torsion summands
/// `C[x]/(g)` given by the coefficients of `g`, lowest first.
#[derive(Clone, Debug, Default)]
pub struct LineOModule {
    pub free: Option<FreeLineModule>,
    pub torsion: Vec<Vec<Q>>,
}

/// One generalized `eu`-eigenspace in one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct JacquetPiece {
    pub degree: usize,
    pub eigenvalue: ParamScalar,
    /// Basis vectors in fiber coordinates, first nonzero entry `1`.
    pub basis: Vec<Vec<ParamScalar>>,
}

/// The `eu`-locally finite part of the completion at the origin, truncated
/// at degree `N`, with `x` and `y` written in the eigenbasis.
#[derive(Clone, Debug)]
pub struct JacquetModule {
    pub truncation: usize,
    pub pieces: Vec<JacquetPiece>,
    /// `x_ops[m]: J_m -> J_{m+1}` for `m < N`.
    pub x_ops: Vec<Matrix<ParamScalar>>,
    /// `y_ops[m]: J_m -> J_{m-1}`; `y_ops[0]` has no rows.
    pub y_ops: Vec<Matrix<ParamScalar>>,
}

impl JacquetModule {
    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.truncation + 1];
        for p in &self.pieces {
            d[p.degree] += p.basis.len();
        }
        d
    }
}

impl FreeLineModule {
    /// `fiber` is the matrix of the reflection `s` with `det(s) = zeta_ell`.
    pub fn new(param: &Parameter, fiber: &Matrix<Cyclo>) -> Result<FreeLineModule> {
        let group = param.group().clone();
        if group.dim() != 1 {
            return Err(Error::UnsupportedDimension(format!(
                "line modules need a rank one group, got dimension {}",
                group.dim()
            )));
        }
        let field = param.field().clone();
        let r = fiber.rows();
        if r == 0 || fiber.cols() != r {
            return Err(Error::InvalidInput(
                "fiber matrix must be square and nonempty".into(),
            ));
        }
        let fiber = fiber.map_into(&ParamScalar::zero(&field), |c| {
            ParamScalar::from_cyclo(&field, &c.embed(field.cyclo())).expect("embedded")
        });
        let ell = if group.hyperplanes().is_empty() {
            1
        } else {
            group.orbit_ell(0)
        };
        let proto = ParamScalar::zero(&field);
        let id = Matrix::identity(r, &proto);
        let mut pw = id.clone();
        let mut powers = vec![id.clone()];
        for _ in 1..ell {
            pw = pw.mul(&fiber);
            powers.push(pw.clone());
        }
        if pw.mul(&fiber) != id {
            return Err(Error::NotARepresentation(
                "fiber matrix does not have order dividing ell".into(),
            ));
        }
        let zeta = Cyclo::root_of_unity(field.cyclo(), ell, 1)?;
        let inv_ell = ParamScalar::from_int(&field, ell as i64).inv()?;
        let projectors = (0..ell as i64)
            .map(|k| {
                let mut p = Matrix::zeros(r, r, &proto);
                for (j, sj) in powers.iter().enumerate() {
                    let c = ParamScalar::from_cyclo(&field, &zeta.pow(k * j as i64)?)?;
                    p = p.add(&sj.scale(&c));
                }
                Ok(p.scale(&inv_ell))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeLineModule {
            param: param.clone(),
            ell,
            fiber,
            projectors,
        })
    }

    /// The polynomial representation.
    pub fn polynomial(param: &Parameter) -> Result<FreeLineModule> {
        let f = param.group().field();
        Self::new(param, &Matrix::identity(1, &Cyclo::zero(f)))
    }

    pub fn rank(&self) -> usize {
        self.fiber.rows()
    }

    fn kappa(&self, i: i64) -> ParamScalar {
        if self.param.group().hyperplanes().is_empty() {
            ParamScalar::zero(self.param.field())
        } else {
            self.param.kappa(0, i).clone()
        }
    }

    /// Matrix of `y: x^i V -> x^{i-1} V` in fiber coordinates.
    pub fn lowering(&self, i: i64) -> Result<Matrix<ParamScalar>> {
        let field = self.param.field();
        let r = self.rank();
        let mut y =
            Matrix::identity(r, &ParamScalar::zero(field)).scale(&ParamScalar::from_int(field, i));
        let ell = ParamScalar::from_int(field, self.ell as i64);
        for (k, p) in self.projectors.iter().enumerate() {
            let c = self
                .kappa(i + k as i64)
                .checked_sub(&self.kappa(k as i64))?
                .checked_mul(&ell)?;
            if !c.is_zero() {
                y = y.add(&p.scale(&c));
            }
        }
        Ok(y)
    }

    /// Matrix of `eu` on `x^i V`, assembled from `x y` and the idempotents.
    pub fn euler(&self, i: i64) -> Result<Matrix<ParamScalar>> {
        let field = self.param.field();
        let ell = ParamScalar::from_int(field, self.ell as i64);
        let mut eu = self.lowering(i)?;
        for (k, p) in self.projectors.iter().enumerate() {
            let c = self.kappa(i + k as i64).checked_mul(&ell)?;
            if !c.is_zero() {
                eu = eu.sub(&p.scale(&c));
            }
        }
        Ok(eu)
    }

    /// Candidate `eu` eigenvalues on `x^i V`.
    fn candidate_eigenvalues(&self, i: i64) -> Result<Vec<ParamScalar>> {
        let field = self.param.field();
        let ell = ParamScalar::from_int(field, self.ell as i64);
        let mut out: Vec<ParamScalar> = Vec::new();
        for k in 0..self.ell as i64 {
            let v =
                ParamScalar::from_int(field, i).checked_sub(&self.kappa(k).checked_mul(&ell)?)?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    }
}

fn normalize(v: Vec<ParamScalar>) -> Result<Vec<ParamScalar>> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv()?;
            v.iter().map(|c| c.checked_mul(&inv)).collect()
        }
        None => Ok(v),
    }
}

/// `J_0(M)` truncated at degree `n`.
pub fn jacquet_line(m: &LineOModule, n: usize) -> Result<JacquetModule> {
    for g in &m.torsion {
        let val = g
            .iter()
            .take_while(|c| **c == Q::from_integer(0.into()))
            .count();
        if val == g.len() {
            return Err(Error::InvalidInput("torsion summand with g = 0".into()));
        }
        if val > 0 {
            return Err(Error::UnsupportedShape(
                "torsion supported at the origin is not handled".into(),
            ));
        }
    }
    let Some(free) = &m.free else {
        return Ok(JacquetModule {
            truncation: n,
            pieces: Vec::new(),
            x_ops: Vec::new(),
            y_ops: Vec::new(),
        });
    };
    let field: Arc<_> = free.param.field().clone();
    let proto = ParamScalar::zero(&field);
    let r = free.rank();
    let mut pieces = Vec::new();
    let mut bases: Vec<Matrix<ParamScalar>> = Vec::new();
    for deg in 0..=n {
        let eu = free.euler(deg as i64)?;
        let id = Matrix::identity(r, &proto);
        let mut cols = Vec::new();
        for mu in free.candidate_eigenvalues(deg as i64)? {
            let shifted = eu.sub(&id.scale(&mu));
            let mut pw = shifted.clone();
            for _ in 1..r {
                pw = pw.mul(&shifted);
            }
            let basis = pw
                .kernel()
                .into_iter()
                .map(normalize)
                .collect::<Result<Vec<_>>>()?;
            if basis.is_empty() {
                continue;
            }
            cols.extend(basis.iter().cloned());
            pieces.push(JacquetPiece {
                degree: deg,
                eigenvalue: mu,
                basis,
            });
        }
        if cols.len() != r {
            return Err(Error::Internal(
                "eu is not locally finite on a graded piece".into(),
            ));
        }
        bases.push(Matrix::from_columns(&cols, r, &proto));
    }
    let mut x_ops = Vec::new();
    let mut y_ops = Vec::new();
    for deg in 0..=n {
        let b = &bases[deg];
        if deg < n {
            x_ops.push(bases[deg + 1].inverse()?.mul(b));
        }
        if deg == 0 {
            y_ops.push(Matrix::zeros(0, r, &proto));
        } else {
            y_ops.push(
                bases[deg - 1]
                    .inverse()?
                    .mul(&free.lowering(deg as i64)?)
                    .mul(b),
            );
        }
    }
    Ok(JacquetModule {
        truncation: n,
        pieces,
        x_ops,
        y_ops,
    })
}
