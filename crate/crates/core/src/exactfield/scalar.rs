//! Rational functions in named symbols over `Q(zeta_N)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::cyclo::{Cyclo, CycloField, Q};
use super::poly::{gcd, Poly};
use super::ring::{Field, Ring};
use crate::error::{Error, Result};

/// Shared context: the cyclotomic field and the ordered symbol list.
#[derive(Debug)]
pub struct ScalarField {
    cyclo: Arc<CycloField>,
    symbols: Vec<String>,
}

impl ScalarField {
    pub fn new(conductor: u32, symbols: Vec<String>) -> Result<Arc<ScalarField>> {
        for (i, s) in symbols.iter().enumerate() {
            let ok = !s.is_empty()
                && s.chars().next().unwrap().is_ascii_alphabetic()
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || s == "z" {
                return Err(Error::InvalidInput(format!("bad symbol name `{s}`")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidInput(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Arc::new(ScalarField {
            cyclo: CycloField::new(conductor),
            symbols,
        }))
    }

    pub fn cyclo(&self) -> &Arc<CycloField> {
        &self.cyclo
    }

    pub fn conductor(&self) -> u32 {
        self.cyclo.conductor()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn nvars(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn same_as(&self, other: &ScalarField) -> bool {
        std::ptr::eq(self, other)
            || (self.cyclo.conductor() == other.cyclo.conductor() && self.symbols == other.symbols)
    }
}

/// Element of `Q(zeta_N)(symbols)` kept as a reduced fraction with monic
/// denominator.
#[derive(Clone)]
pub struct ParamScalar {
    ctx: Arc<ScalarField>,
    num: Poly<Cyclo>,
    den: Poly<Cyclo>,
}

impl PartialEq for ParamScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.num == other.num && self.den == other.den
    }
}
impl Eq for ParamScalar {}

impl Hash for ParamScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

fn check(a: &ParamScalar, b: &ParamScalar) -> Result<()> {
    if a.ctx.same_as(&b.ctx) {
        Ok(())
    } else {
        Err(Error::IncompatibleScalars(format!(
            "Q(zeta_{})({}) vs Q(zeta_{})({})",
            a.ctx.conductor(),
            a.ctx.symbols.join(","),
            b.ctx.conductor(),
            b.ctx.symbols.join(",")
        )))
    }
}

impl ParamScalar {
    fn proto(ctx: &Arc<ScalarField>) -> Cyclo {
        Cyclo::zero(&ctx.cyclo)
    }

    fn raw(ctx: &Arc<ScalarField>, num: Poly<Cyclo>, den: Poly<Cyclo>) -> ParamScalar {
        ParamScalar {
            ctx: ctx.clone(),
            num,
            den,
        }
    }

    /// Reduces `num/den` to canonical form.
    pub fn from_fraction(
        ctx: &Arc<ScalarField>,
        num: Poly<Cyclo>,
        den: Poly<Cyclo>,
    ) -> Result<ParamScalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = ctx.nvars();
        if num.is_zero() {
            return Ok(ParamScalar::zero(ctx));
        }
        if den.is_constant() {
            let c = den.constant_coeff();
            let num = if c.is_one() {
                num
            } else {
                num.scale(&c.inv()?)
            };
            return Ok(ParamScalar::raw(ctx, num, Poly::one(n, &Self::proto(ctx))));
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.lc();
        if !lc.is_one() {
            let inv = lc.inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_constant() {
            den = Poly::one(n, &Self::proto(ctx));
        }
        Ok(ParamScalar::raw(ctx, num, den))
    }

    pub fn from_poly(ctx: &Arc<ScalarField>, num: Poly<Cyclo>) -> ParamScalar {
        let one = Poly::one(ctx.nvars(), &Self::proto(ctx));
        ParamScalar::raw(ctx, num, one)
    }

    pub fn zero(ctx: &Arc<ScalarField>) -> ParamScalar {
        let p = Self::proto(ctx);
        ParamScalar::raw(ctx, Poly::zero(ctx.nvars(), &p), Poly::one(ctx.nvars(), &p))
    }

    pub fn one(ctx: &Arc<ScalarField>) -> ParamScalar {
        Self::from_cyclo_unchecked(ctx, Cyclo::one(&ctx.cyclo))
    }

    pub fn from_int(ctx: &Arc<ScalarField>, n: i64) -> ParamScalar {
        Self::from_cyclo_unchecked(ctx, Cyclo::from_int(&ctx.cyclo, n))
    }

    pub fn from_rational(ctx: &Arc<ScalarField>, r: Q) -> ParamScalar {
        Self::from_cyclo_unchecked(ctx, Cyclo::from_rational(&ctx.cyclo, r))
    }

    fn from_cyclo_unchecked(ctx: &Arc<ScalarField>, c: Cyclo) -> ParamScalar {
        ParamScalar::from_poly(ctx, Poly::constant(c, ctx.nvars()))
    }

    /// Embeds a cyclotomic number; its conductor must divide the context's.
    pub fn from_cyclo(ctx: &Arc<ScalarField>, c: &Cyclo) -> Result<ParamScalar> {
        if ctx.conductor() % c.conductor() != 0 {
            return Err(Error::IncompatibleScalars(format!(
                "Q(zeta_{}) does not embed in Q(zeta_{})",
                c.conductor(),
                ctx.conductor()
            )));
        }
        Ok(Self::from_cyclo_unchecked(ctx, c.embed(&ctx.cyclo)))
    }

    /// `zeta_m^k`; `m` must divide the conductor.
    pub fn root_of_unity(ctx: &Arc<ScalarField>, m: u32, k: i64) -> Result<ParamScalar> {
        Ok(Self::from_cyclo_unchecked(
            ctx,
            Cyclo::root_of_unity(&ctx.cyclo, m, k)?,
        ))
    }

    pub fn symbol(ctx: &Arc<ScalarField>, name: &str) -> Result<ParamScalar> {
        let i = ctx
            .symbol_index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown symbol `{name}`")))?;
        Ok(Self::symbol_at(ctx, i))
    }

    pub fn symbol_at(ctx: &Arc<ScalarField>, i: usize) -> ParamScalar {
        ParamScalar::from_poly(ctx, Poly::var(i, ctx.nvars(), &Self::proto(ctx)))
    }

    pub fn ctx(&self) -> &Arc<ScalarField> {
        &self.ctx
    }

    pub fn numer(&self) -> &Poly<Cyclo> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Cyclo> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn to_cyclo(&self) -> Option<Cyclo> {
        self.is_constant().then(|| self.num.constant_coeff())
    }

    pub fn to_rational(&self) -> Option<Q> {
        self.to_cyclo().and_then(|c| c.to_rational())
    }

    pub fn involves(&self, sym: usize) -> bool {
        self.num.involves(sym) || self.den.involves(sym)
    }

    pub fn checked_add(&self, rhs: &ParamScalar) -> Result<ParamScalar> {
        check(self, rhs)?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Ok(ParamScalar::raw(
                &self.ctx,
                self.num.add(&rhs.num),
                self.den.clone(),
            ));
        }
        if self.den == rhs.den {
            return ParamScalar::from_fraction(&self.ctx, self.num.add(&rhs.num), self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let bd = self.den.exact_div(&g).unwrap();
        let dd = rhs.den.exact_div(&g).unwrap();
        let num = self.num.mul(&dd).add(&rhs.num.mul(&bd));
        ParamScalar::from_fraction(&self.ctx, num, self.den.mul(&dd))
    }

    pub fn checked_sub(&self, rhs: &ParamScalar) -> Result<ParamScalar> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &ParamScalar) -> Result<ParamScalar> {
        check(self, rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(ParamScalar::zero(&self.ctx));
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Ok(ParamScalar::raw(
                &self.ctx,
                self.num.mul(&rhs.num),
                self.den.clone(),
            ));
        }
        if self.is_constant() {
            let c = self.num.constant_coeff();
            return Ok(ParamScalar::raw(
                &self.ctx,
                rhs.num.scale(&c),
                rhs.den.clone(),
            ));
        }
        if rhs.is_constant() {
            let c = rhs.num.constant_coeff();
            return Ok(ParamScalar::raw(
                &self.ctx,
                self.num.scale(&c),
                self.den.clone(),
            ));
        }
        // cross-cancel; the product of monic denominators stays monic
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = rhs.den.exact_div(&g1).unwrap();
        let c = rhs.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.lc();
        if lc.is_one() {
            Ok(ParamScalar::raw(&self.ctx, num, den))
        } else {
            ParamScalar::from_fraction(&self.ctx, num, den)
        }
    }

    pub fn inv(&self) -> Result<ParamScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        ParamScalar::from_fraction(&self.ctx, self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &ParamScalar) -> Result<ParamScalar> {
        check(self, rhs)?;
        self.checked_mul(&rhs.inv()?)
    }

    pub fn neg(&self) -> ParamScalar {
        ParamScalar::raw(&self.ctx, self.num.neg(), self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Result<ParamScalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(ParamScalar::raw(
            &self.ctx,
            base.num.pow(k),
            base.den.pow(k),
        ))
    }

    pub fn scale_cyclo(&self, c: &Cyclo) -> ParamScalar {
        if c.is_zero() {
            return ParamScalar::zero(&self.ctx);
        }
        ParamScalar::raw(
            &self.ctx,
            self.num.scale(&c.embed(&self.ctx.cyclo)),
            self.den.clone(),
        )
    }

    /// Cyclotomic conjugation of the coefficients; symbols are fixed.
    pub fn conj(&self) -> ParamScalar {
        let p = Self::proto(&self.ctx);
        let num = self.num.map_coeffs(&p, |c| c.conj());
        let den = self.den.map_coeffs(&p, |c| c.conj());
        ParamScalar::from_fraction(&self.ctx, num, den).expect("conjugate of a nonzero denominator")
    }

    /// Partial derivative with respect to symbol `i`.
    pub fn derivative(&self, i: usize) -> ParamScalar {
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return ParamScalar::from_fraction(&self.ctx, dn, self.den.clone()).unwrap();
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        ParamScalar::from_fraction(&self.ctx, num, self.den.mul(&self.den)).unwrap()
    }

    fn eval_poly(&self, p: &Poly<Cyclo>, images: &[ParamScalar]) -> Result<ParamScalar> {
        let mut acc = ParamScalar::zero(&self.ctx);
        let mut powcache: Vec<Vec<ParamScalar>> = vec![Vec::new(); images.len()];
        for (e, c) in p.terms() {
            let mut t = ParamScalar::from_cyclo_unchecked(&self.ctx, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pc = &mut powcache[i];
                if pc.is_empty() {
                    pc.push(ParamScalar::one(&self.ctx));
                }
                while pc.len() <= k as usize {
                    let next = pc.last().unwrap().checked_mul(&images[i])?;
                    pc.push(next);
                }
                t = t.checked_mul(&pc[k as usize])?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Replaces symbols by values; `None` leaves the symbol alone.
    pub fn substitute(&self, values: &[Option<ParamScalar>]) -> Result<ParamScalar> {
        assert_eq!(values.len(), self.ctx.nvars());
        let images: Vec<ParamScalar> = values
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Some(v) => {
                    check(self, v)?;
                    Ok(v.clone())
                }
                None => Ok(ParamScalar::symbol_at(&self.ctx, i)),
            })
            .collect::<Result<_>>()?;
        let n = self.eval_poly(&self.num, &images)?;
        let d = self.eval_poly(&self.den, &images)?;
        n.checked_div(&d)
    }

    /// Substitutes a single symbol.
    pub fn substitute_one(&self, i: usize, value: &ParamScalar) -> Result<ParamScalar> {
        if !self.involves(i) {
            return Ok(self.clone());
        }
        let mut v = vec![None; self.ctx.nvars()];
        v[i] = Some(value.clone());
        self.substitute(&v)
    }

    /// Evaluates every symbol at a cyclotomic point.
    pub fn evaluate(&self, point: &[Cyclo]) -> Result<Cyclo> {
        let ev = |p: &Poly<Cyclo>| {
            let mut acc = Cyclo::zero(&self.ctx.cyclo);
            for (e, c) in p.terms() {
                let mut t = c.clone();
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        t = t.mul(&point[i].pow(k as i64).unwrap());
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        ev(&self.num).div(&d)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.num.degree_in(i).unwrap_or(0)
    }

    /// Coefficients in symbol `i`, lowest first; the denominator must not
    /// involve that symbol.
    pub fn coeffs_in(&self, i: usize) -> Result<Vec<ParamScalar>> {
        if self.den.involves(i) {
            return Err(Error::InvalidInput(format!(
                "denominator involves `{}`",
                self.ctx.symbols[i]
            )));
        }
        self.num
            .to_univariate(i)
            .into_iter()
            .map(|c| ParamScalar::from_fraction(&self.ctx, c, self.den.clone()))
            .collect()
    }

    /// For an affine polynomial: constant term and the coefficient of each symbol.
    pub fn affine_parts(&self) -> Option<(Cyclo, Vec<Cyclo>)> {
        if !self.den.is_one() || self.num.total_degree().unwrap_or(0) > 1 {
            return None;
        }
        let n = self.ctx.nvars();
        let constant = self.num.constant_coeff();
        let lin = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                self.num.coefficient(&e)
            })
            .collect();
        Some((constant, lin))
    }

    fn fmt_poly(&self, p: &Poly<Cyclo>) -> String {
        p.fmt_with(&self.ctx.symbols, &|c| c.fmt_with("z"))
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.fmt_poly(&self.num);
        if self.den.is_one() {
            return f.write_str(&n);
        }
        let d = self.fmt_poly(&self.den);
        let wrap = |s: String| {
            if s.contains(' ') || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(n), wrap(d))
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for ParamScalar {
    fn zero_like(&self) -> Self {
        ParamScalar::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        ParamScalar::one(&self.ctx)
    }
    fn is_zero(&self) -> bool {
        ParamScalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ParamScalar::is_one(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("incompatible scalars")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("incompatible scalars")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("incompatible scalars")
    }
    fn neg_ref(&self) -> Self {
        ParamScalar::neg(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        ParamScalar::from_int(&self.ctx, n)
    }
}

impl Field for ParamScalar {
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
}

macro_rules! ps_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&ParamScalar> for &ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                self.$checked(rhs).expect("invalid scalar operation")
            }
        }
        impl $tr<ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                self.$checked(&rhs).expect("invalid scalar operation")
            }
        }
    };
}
ps_binop!(Add, add, checked_add);
ps_binop!(Sub, sub, checked_sub);
ps_binop!(Mul, mul, checked_mul);
ps_binop!(Div, div, checked_div);

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar::neg(self)
    }
}
impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar::neg(&self)
    }
}
