use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::twist::{TwistedElement, TwistedModule};
use crate::chered::{Cherednik, Dunkl, PbwElement, PbwMonomial, VecPoly};
use crate::error::{Error, Result};
use crate::exactfield::{
    monomials_of_degree, poly_factor_linear, rref_param, LinearFactorization, Matrix, Mono,
    ParamScalar, Poly,
};
use crate::refgroup::Character;

/// Search bounds for the operator ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BFunctionOptions {
    /// Largest total `y`-degree of the operator.
    pub max_op_degree: u32,
    /// Largest degree in `s` of the operator's coefficients.
    pub s_degree: u32,
}

impl Default for BFunctionOptions {
    fn default() -> Self {
        BFunctionOptions {
            max_op_degree: 8,
            s_degree: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BFunctionResult {
    /// Monic polynomial in `s`.
    pub b: ParamScalar,
    pub factors: LinearFactorization,
    /// Operator `D` with `D(f m f^s) = b(s) m f^s`.
    pub operator: PbwElement,
    pub order: u32,
    /// The functional equation holds exactly in the twisted module.
    pub residual_zero: bool,
    /// `(k, D_k(f^{k+1} m) == b(k) f^k m)` in the untwisted module.
    pub specializations: Vec<(i64, bool)>,
    pub certificate_hash: String,
}

impl BFunctionResult {
    pub fn certified(&self) -> bool {
        self.residual_zero && self.specializations.iter().all(|(_, ok)| *ok)
    }
}

fn s_index(alg: &Cherednik) -> Result<usize> {
    alg.field()
        .symbol_index("s")
        .ok_or_else(|| Error::InvalidInput("the scalar field needs a symbol `s`".into()))
}

fn homogeneous_degree(p: &VecPoly) -> Result<Option<u32>> {
    let mut deg = None;
    for q in p {
        if q.is_zero() {
            continue;
        }
        if !q.is_homogeneous() {
            return Err(Error::UnsupportedShape("inhomogeneous input".into()));
        }
        let d = q.total_degree().unwrap();
        if deg.is_some_and(|e| e != d) {
            return Err(Error::UnsupportedShape(
                "generator components of different degrees".into(),
            ));
        }
        deg = Some(d);
    }
    Ok(deg)
}

type RowKey = (usize, Mono, u32);

/// Coefficients of `s^t * v` keyed by (component, monomial, power of `s`).
fn expand(v: &VecPoly, s: usize, t: u32) -> Result<BTreeMap<RowKey, ParamScalar>> {
    let mut out = BTreeMap::new();
    for (r, q) in v.iter().enumerate() {
        for (e, c) in q.terms() {
            for (pw, a) in c.coeffs_in(s)?.into_iter().enumerate() {
                if !a.is_zero() {
                    out.insert((r, e.clone(), pw as u32 + t), a);
                }
            }
        }
    }
    Ok(out)
}

struct Column {
    monomial: PbwMonomial,
    t: u32,
    entries: BTreeMap<RowKey, ParamScalar>,
}

/// Applies `y^b` to the start vector with memoization.
struct YCache<'a> {
    module: &'a TwistedModule,
    memo: HashMap<Mono, TwistedElement>,
}

impl YCache<'_> {
    fn get(&mut self, b: &[u32]) -> Result<TwistedElement> {
        if let Some(e) = self.memo.get(b) {
            return Ok(e.clone());
        }
        let j = b.iter().position(|&e| e > 0).expect("nonzero exponent");
        let mut rest = b.to_vec();
        rest[j] -= 1;
        let prev = self.get(&rest)?;
        let e = self.module.apply_y(j, &prev)?;
        self.memo.insert(b.to_vec(), e.clone());
        Ok(e)
    }
}

/// Finds `D` and monic `b` of least operator order with
/// `D(f m f^s) = b(s) m f^s`, where `m` lies in `C[h] (x) lambda`.
pub fn bfunction(
    alg: &Arc<Cherednik>,
    lambda: &Character,
    m: &VecPoly,
    f: &Poly<ParamScalar>,
    opts: &BFunctionOptions,
) -> Result<BFunctionResult> {
    let s = s_index(alg)?;
    if f.is_zero() || f.is_constant() {
        return Err(Error::InvalidInput(
            "f must be a nonconstant polynomial".into(),
        ));
    }
    if !f.is_homogeneous() {
        return Err(Error::UnsupportedShape("f must be homogeneous".into()));
    }
    if (0..alg.field().nvars()).any(|i| f.terms().iter().any(|(_, c)| c.involves(i))) {
        return Err(Error::InvalidInput(
            "f must have constant coefficients".into(),
        ));
    }
    if m.len() != lambda.dim() || m.iter().all(Poly::is_zero) {
        return Err(Error::InvalidInput(
            "generator must be a nonzero element of C[h] (x) lambda".into(),
        ));
    }
    homogeneous_degree(m)?;
    let deg_f = f.total_degree().unwrap();
    let field = alg.field().clone();
    let n = alg.dim();
    let module = TwistedModule::new(alg, lambda, f, ParamScalar::zero(&field))?;
    let start = module.element(m.iter().map(|p| p.mul(f)).collect());
    let mut ycache = YCache {
        module: &module,
        memo: HashMap::from([(vec![0; n], start.clone())]),
    };
    let e = opts.s_degree;
    let mut terms: Vec<(PbwMonomial, VecPoly, u32)> = Vec::new();
    for d in deg_f..=opts.max_op_degree {
        for bm in monomials_of_degree(n, d) {
            let yb = ycache.get(&bm)?;
            for a in monomials_of_degree(n, d - deg_f) {
                for g in 0..alg.group().order() {
                    let mono = PbwMonomial {
                        x: a.clone(),
                        g,
                        y: vec![0; n],
                    };
                    let img = module.apply_monomial(&mono, &yb)?;
                    terms.push((
                        PbwMonomial {
                            x: a.clone(),
                            g,
                            y: bm.clone(),
                        },
                        img.num,
                        img.k,
                    ));
                }
            }
        }
        // every term is brought over the common denominator f^d
        let mut columns = Vec::new();
        for (mono, num, k) in &terms {
            let fk = f.pow(d - k);
            let num: VecPoly = num.iter().map(|p| p.mul(&fk)).collect();
            for t in 0..=e {
                columns.push(Column {
                    monomial: mono.clone(),
                    t,
                    entries: expand(&num, s, t)?,
                });
            }
        }
        // identity first, then by s-power
        columns.sort_by(|p, q| {
            (p.monomial.g, p.t, &p.monomial.y, &p.monomial.x).cmp(&(
                q.monomial.g,
                q.t,
                &q.monomial.y,
                &q.monomial.x,
            ))
        });
        let target: VecPoly = m.iter().map(|p| p.mul(&f.pow(d))).collect();
        if let Some((coeffs, delta, bcoeffs)) = solve_order(&columns, &target, s, d + e, &field)? {
            let mut op = PbwElement::zero(alg);
            let s_sym = ParamScalar::symbol_at(&field, s);
            for (c, col) in coeffs.iter().zip(&columns) {
                if c.is_zero() {
                    continue;
                }
                let coef = c.checked_mul(&s_sym.pow(col.t as i64)?)?;
                op = op.add(&PbwElement::monomial(alg, col.monomial.clone(), coef));
            }
            let mut b = s_sym.pow(delta as i64)?;
            for (t, c) in bcoeffs.iter().enumerate() {
                b = b.checked_add(&c.checked_mul(&s_sym.pow(t as i64)?)?)?;
            }
            return finish(alg, lambda, m, f, &module, &start, op, b, d, s);
        }
    }
    Err(Error::DegreeCapExceeded(format!(
        "no functional equation with operator order <= {} and s-degree <= {}",
        opts.max_op_degree, opts.s_degree
    )))
}

type OrderSolution = (Vec<ParamScalar>, u32, Vec<ParamScalar>);

/// Tries monic `b` of degree `0..=max_delta` in turn.
fn solve_order(
    columns: &[Column],
    target: &VecPoly,
    s: usize,
    max_delta: u32,
    field: &Arc<crate::exactfield::ScalarField>,
) -> Result<Option<OrderSolution>> {
    let b_cols: Vec<BTreeMap<RowKey, ParamScalar>> = (0..=max_delta)
        .map(|t| expand(target, s, t))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<RowKey, usize> = BTreeMap::new();
    for c in columns.iter().map(|c| &c.entries).chain(b_cols.iter()) {
        for k in c.keys() {
            let len = rows.len();
            rows.entry(k.clone()).or_insert(len);
        }
    }
    // columns, then -s^0 m, ..., -s^max m; the first b column that is not
    // a pivot gives the monic b of least degree
    let proto = ParamScalar::zero(field);
    let nb = columns.len();
    let mut a = Matrix::zeros(rows.len(), nb + b_cols.len(), &proto);
    for (j, c) in columns.iter().enumerate() {
        for (k, v) in &c.entries {
            a[(rows[k], j)] = v.clone();
        }
    }
    for (t, c) in b_cols.iter().enumerate() {
        for (k, v) in c {
            a[(rows[k], nb + t)] = v.neg();
        }
    }
    let (m, pivots) = rref_param(&a)?;
    let Some(delta) = (0..b_cols.len()).find(|t| !pivots.contains(&(nb + t))) else {
        return Ok(None);
    };
    let mut x = vec![proto.clone(); nb + delta];
    for (r, &p) in pivots.iter().enumerate() {
        if p < nb + delta {
            x[p] = m[(r, nb + delta)].neg();
        }
    }
    let bcoeffs = x.split_off(nb);
    Ok(Some((x, delta as u32, bcoeffs)))
}

/// `x^a g y^b` in the untwisted module, through Dunkl operators.
pub fn apply_untwisted(dunkl: &Dunkl, op: &PbwElement, v: &VecPoly) -> Result<VecPoly> {
    let mut acc = dunkl.zero();
    for (m, c) in op.terms() {
        let mut cur = v.clone();
        for (j, &b) in m.y.iter().enumerate() {
            for _ in 0..b {
                cur = dunkl.apply_basis(j, &cur)?;
            }
        }
        cur = dunkl.act(m.g, &cur);
        for (i, &a) in m.x.iter().enumerate() {
            for _ in 0..a {
                cur = dunkl.apply_x(i, &cur);
            }
        }
        for (r, p) in cur.iter().enumerate() {
            acc[r] = acc[r].add(&p.scale(c));
        }
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    alg: &Arc<Cherednik>,
    lambda: &Character,
    m: &VecPoly,
    f: &Poly<ParamScalar>,
    module: &TwistedModule,
    start: &TwistedElement,
    op: PbwElement,
    b: ParamScalar,
    order: u32,
    s: usize,
) -> Result<BFunctionResult> {
    let field = alg.field().clone();
    let lhs = module.apply(&op, start)?;
    let rhs = module.element(m.iter().map(|p| p.scale(&b)).collect());
    let residual_zero = module.equal(&lhs, &rhs);
    let dunkl = Dunkl::new(alg, lambda)?;
    let mut specializations = Vec::new();
    for k in 0..=5i64 {
        let kv = ParamScalar::from_int(&field, k);
        let op_k = op.map_coeffs(|c| c.substitute_one(s, &kv))?;
        let fk1 = f.pow(k as u32 + 1);
        let input: VecPoly = m.iter().map(|p| p.mul(&fk1)).collect();
        let out = apply_untwisted(&dunkl, &op_k, &input)?;
        let bk = b.substitute_one(s, &kv)?;
        let fk = f.pow(k as u32);
        let expect: VecPoly = m.iter().map(|p| p.mul(&fk).scale(&bk)).collect();
        specializations.push((k, out == expect));
    }
    let factors = poly_factor_linear(&b, s)?;
    let mut h = Sha256::new();
    h.update(format!(
        "b={}\nD={}\norder={}\nresidual={}\n",
        factors.display(),
        op,
        order,
        residual_zero
    ));
    for (k, ok) in &specializations {
        h.update(format!("s={k}:{ok}\n"));
    }
    let certificate_hash = h.finalize().iter().map(|x| format!("{x:02x}")).collect();
    Ok(BFunctionResult {
        b,
        factors,
        operator: op,
        order,
        residual_zero,
        specializations,
        certificate_hash,
    })
}

/// `bfunction` for the polynomial representation with generator `1`.
pub fn bfunction_polynomial(
    alg: &Arc<Cherednik>,
    f: &Poly<ParamScalar>,
    opts: &BFunctionOptions,
) -> Result<BFunctionResult> {
    let triv = Character::trivial(alg.group());
    let one = Poly::one(alg.dim(), &ParamScalar::zero(alg.field()));
    bfunction(alg, &triv, &vec![one], f, opts)
}
