use std::sync::Arc;

use crate::chered::{Cherednik, Dunkl, PbwElement, PbwMonomial, VecPoly};
use crate::error::{Error, Result};
use crate::exactfield::{ParamScalar, Poly};
use crate::refgroup::Character;

/// `C[h] (x) lambda` localized at `f`, twisted by `f^{s+l}`.
///
/// An element `(P, k)` stands for `P f^{-k} f^{s+l}`.
#[derive(Clone, Debug)]
pub struct TwistedModule {
    dunkl: Dunkl,
    f: Poly<ParamScalar>,
    df: Vec<Poly<ParamScalar>>,
    shift: ParamScalar,
    s: ParamScalar,
}

#[derive(Clone, Debug)]
pub struct TwistedElement {
    pub num: VecPoly,
    pub k: u32,
}

/// Checks `g . f = f` for every generator.
pub fn check_invariant(alg: &Cherednik, f: &Poly<ParamScalar>) -> Result<()> {
    for &g in alg.group().generators() {
        if alg.act_poly(g, f) != *f {
            return Err(Error::NotInvariant);
        }
    }
    Ok(())
}

impl TwistedModule {
    /// The scalar field of `alg` must contain the symbol `s`.
    pub fn new(
        alg: &Arc<Cherednik>,
        lambda: &Character,
        f: &Poly<ParamScalar>,
        shift: ParamScalar,
    ) -> Result<TwistedModule> {
        if f.is_zero() {
            return Err(Error::InvalidInput(
                "cannot twist by the zero polynomial".into(),
            ));
        }
        check_invariant(alg, f)?;
        let s = ParamScalar::symbol(alg.field(), "s")
            .map_err(|_| Error::InvalidInput("the scalar field needs a symbol `s`".into()))?;
        Ok(TwistedModule {
            dunkl: Dunkl::new(alg, lambda)?,
            df: (0..alg.dim()).map(|j| f.derivative(j)).collect(),
            f: f.clone(),
            shift,
            s,
        })
    }

    pub fn dunkl(&self) -> &Dunkl {
        &self.dunkl
    }

    pub fn f(&self) -> &Poly<ParamScalar> {
        &self.f
    }

    pub fn element(&self, num: VecPoly) -> TwistedElement {
        TwistedElement { num, k: 0 }
    }

    /// Numerator of `e` over the denominator `f^k`, `k >= e.k`.
    pub fn numerator_at(&self, e: &TwistedElement, k: u32) -> VecPoly {
        let fk = self.f.pow(k - e.k);
        e.num.iter().map(|p| p.mul(&fk)).collect()
    }

    pub fn add(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        let k = a.k.max(b.k);
        let pa = self.numerator_at(a, k);
        let pb = self.numerator_at(b, k);
        TwistedElement {
            num: pa.iter().zip(&pb).map(|(x, y)| x.add(y)).collect(),
            k,
        }
    }

    pub fn scale(&self, e: &TwistedElement, c: &ParamScalar) -> TwistedElement {
        TwistedElement {
            num: e.num.iter().map(|p| p.scale(c)).collect(),
            k: e.k,
        }
    }

    pub fn equal(&self, a: &TwistedElement, b: &TwistedElement) -> bool {
        let k = a.k.max(b.k);
        self.numerator_at(a, k) == self.numerator_at(b, k)
    }

    pub fn apply_x(&self, i: usize, e: &TwistedElement) -> TwistedElement {
        TwistedElement {
            num: self.dunkl.apply_x(i, &e.num),
            k: e.k,
        }
    }

    pub fn apply_g(&self, g: usize, e: &TwistedElement) -> TwistedElement {
        TwistedElement {
            num: self.dunkl.act(g, &e.num),
            k: e.k,
        }
    }

    /// `y_j (P f^{s+l-k}) = (f D_j P + (s+l-k) (d_j f) P) f^{s+l-k-1}`.
    pub fn apply_y(&self, j: usize, e: &TwistedElement) -> Result<TwistedElement> {
        let field = self.dunkl.algebra().field();
        let d = self.dunkl.apply_basis(j, &e.num)?;
        let c = self
            .s
            .checked_add(&self.shift)?
            .checked_sub(&ParamScalar::from_int(field, e.k as i64))?;
        let log = self.df[j].scale(&c);
        Ok(TwistedElement {
            num: d
                .iter()
                .zip(&e.num)
                .map(|(dp, p)| self.f.mul(dp).add(&log.mul(p)))
                .collect(),
            k: e.k + 1,
        })
    }

    /// `x^a g y^b` applied to `e`.
    pub fn apply_monomial(&self, m: &PbwMonomial, e: &TwistedElement) -> Result<TwistedElement> {
        let mut cur = e.clone();
        for (j, &b) in m.y.iter().enumerate() {
            for _ in 0..b {
                cur = self.apply_y(j, &cur)?;
            }
        }
        cur = self.apply_g(m.g, &cur);
        for (i, &a) in m.x.iter().enumerate() {
            for _ in 0..a {
                cur = self.apply_x(i, &cur);
            }
        }
        Ok(cur)
    }

    pub fn apply(&self, op: &PbwElement, e: &TwistedElement) -> Result<TwistedElement> {
        let mut acc = TwistedElement {
            num: self.dunkl.zero(),
            k: 0,
        };
        for (m, c) in op.terms() {
            let t = self.apply_monomial(m, e)?;
            acc = self.add(&acc, &self.scale(&t, c));
        }
        Ok(acc)
    }
}
