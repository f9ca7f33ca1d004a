use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{parse_expr, Cyclo, Expr, ParamScalar, Poly, Ring, ScalarField};
use crate::refgroup::{Parameter, ReflectionGroup};

/// Element of the group algebra with parameter coefficients.
pub type GroupAlgebraElement = Vec<(usize, ParamScalar)>;

/// The rational Cherednik algebra `H_kappa(W, h)`.
#[derive(Debug)]
pub struct Cherednik {
    group: Arc<ReflectionGroup>,
    param: Parameter,
    field: Arc<ScalarField>,
    /// `[y_j, x_i]`, indexed `[j][i]`.
    comm: Vec<Vec<GroupAlgebraElement>>,
    /// `g . x_i` as polynomials in `x`.
    x_images: Vec<Vec<Poly<ParamScalar>>>,
    /// Matrices of the group on `h` and `h*` with parameter entries.
    h_mats: Vec<Vec<Vec<ParamScalar>>>,
}

/// PBW monomial `x^a g y^b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial {
    pub x: Vec<u32>,
    pub g: usize,
    pub y: Vec<u32>,
}

/// Element of the algebra in PBW normal form `sum c x^a g y^b`.
#[derive(Clone)]
pub struct PbwElement {
    alg: Arc<Cherednik>,
    terms: BTreeMap<PbwMonomial, ParamScalar>,
}

impl Cherednik {
    pub fn new(param: &Parameter) -> Result<Arc<Cherednik>> {
        let group = param.group().clone();
        let field = param.field().clone();
        let n = group.dim();
        let ps = |c: &Cyclo| ParamScalar::from_cyclo(&field, c);
        let mut comm = vec![vec![Vec::new(); n]; n];
        for j in 0..n {
            for i in 0..n {
                let mut acc: BTreeMap<usize, ParamScalar> = BTreeMap::new();
                if i == j {
                    acc.insert(0, ParamScalar::one(&field));
                }
                for (h, hp) in group.hyperplanes().iter().enumerate() {
                    let num = hp.alpha[j].mul(&hp.coroot[i]);
                    if num.is_zero() {
                        continue;
                    }
                    let ell = hp.ell as i64;
                    let coef = num
                        .div(&group.alpha_coroot(h))?
                        .scale(&crate::exactfield::q(ell));
                    let zeta = Cyclo::root_of_unity(group.field(), hp.ell, 1)?;
                    for i2 in 0..ell {
                        let k = param.kappa_h(h, i2 + 1).checked_sub(param.kappa_h(h, i2))?;
                        if k.is_zero() {
                            continue;
                        }
                        // e_{H,i2} = (1/ell) sum_j zeta^{i2 j} s^j
                        for (jj, &w) in hp.stabilizer.iter().enumerate() {
                            let c = coef
                                .mul(&zeta.pow(i2 * jj as i64)?)
                                .scale(&crate::exactfield::qq(1, ell));
                            let t = k.scale_cyclo(&c);
                            let e = acc.entry(w).or_insert_with(|| ParamScalar::zero(&field));
                            *e = e.checked_add(&t)?;
                        }
                    }
                }
                comm[j][i] = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        let proto = ParamScalar::zero(&field);
        let x_images = (0..group.order())
            .map(|g| group.x_images(g, &proto, |c| ps(c).unwrap()))
            .collect();
        let h_mats = (0..group.order())
            .map(|g| {
                let m = group.matrix(g);
                (0..n)
                    .map(|i| (0..n).map(|j| ps(&m[(i, j)])).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Arc::new(Cherednik {
            group,
            param: param.clone(),
            field,
            comm,
            x_images,
            h_mats,
        }))
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn parameter(&self) -> &Parameter {
        &self.param
    }

    pub fn field(&self) -> &Arc<ScalarField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn commutator_yx(&self, j: usize, i: usize) -> &GroupAlgebraElement {
        &self.comm[j][i]
    }

    /// `g . x_i`.
    pub fn x_image(&self, g: usize, i: usize) -> &Poly<ParamScalar> {
        &self.x_images[g][i]
    }

    pub fn x_images(&self, g: usize) -> &[Poly<ParamScalar>] {
        &self.x_images[g]
    }

    /// Entry `(i, j)` of the matrix of `g` on `h`.
    pub fn h_entry(&self, g: usize, i: usize, j: usize) -> &ParamScalar {
        &self.h_mats[g][i][j]
    }

    /// `g . p` for a polynomial in `x`.
    pub fn act_poly(&self, g: usize, p: &Poly<ParamScalar>) -> Poly<ParamScalar> {
        if g == 0 {
            return p.clone();
        }
        p.compose(&self.x_images[g])
    }

    /// The idempotent `e_{H,i}` in the group algebra.
    pub fn idempotent(&self, h: usize, i: i64) -> Result<GroupAlgebraElement> {
        let hp = &self.group.hyperplanes()[h];
        let zeta = Cyclo::root_of_unity(self.group.field(), hp.ell, 1)?;
        hp.stabilizer
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let c = zeta
                    .pow(i * j as i64)?
                    .scale(&crate::exactfield::qq(1, hp.ell as i64));
                Ok((w, ParamScalar::from_cyclo(&self.field, &c)?))
            })
            .collect()
    }

    pub fn same_as(&self, other: &Cherednik) -> bool {
        std::ptr::eq(self, other) || (self.param == other.param && self.field.same_as(&other.field))
    }
}

/// Scratch space for one batch of multiplications.
struct Engine<'a> {
    alg: &'a Cherednik,
    gx: HashMap<(usize, Vec<u32>), Poly<ParamScalar>>,
    yx: HashMap<(usize, Vec<u32>, usize), Vec<(PbwMonomial, ParamScalar)>>,
}

type Terms = BTreeMap<PbwMonomial, ParamScalar>;

fn add_term(acc: &mut Terms, m: PbwMonomial, c: ParamScalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&m) {
        Some(x) => {
            *x = x.add_ref(&c);
            if x.is_zero() {
                acc.remove(&m);
            }
        }
        None => {
            acc.insert(m, c);
        }
    }
}

impl<'a> Engine<'a> {
    fn new(alg: &'a Cherednik) -> Self {
        Engine {
            alg,
            gx: HashMap::new(),
            yx: HashMap::new(),
        }
    }

    /// `g . x^a` as a polynomial.
    fn g_on_x(&mut self, g: usize, a: &[u32]) -> Poly<ParamScalar> {
        if let Some(p) = self.gx.get(&(g, a.to_vec())) {
            return p.clone();
        }
        let proto = ParamScalar::zero(&self.alg.field);
        let p = self
            .alg
            .act_poly(g, &Poly::monomial(a.to_vec(), proto.one_like()));
        self.gx.insert((g, a.to_vec()), p.clone());
        p
    }

    fn left_x(&mut self, i: usize, t: &Terms) -> Terms {
        t.iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m.x[i] += 1;
                (m, c.clone())
            })
            .collect()
    }

    fn left_g(&mut self, g: usize, t: &Terms) -> Terms {
        if g == 0 {
            return t.clone();
        }
        let mut acc = Terms::new();
        for (m, c) in t {
            let p = self.g_on_x(g, &m.x);
            let gh = self.alg.group.mul(g, m.g);
            for (e, d) in p.terms() {
                add_term(
                    &mut acc,
                    PbwMonomial {
                        x: e.clone(),
                        g: gh,
                        y: m.y.clone(),
                    },
                    c.mul_ref(d),
                );
            }
        }
        acc
    }

    /// Normal form of `y_j x^a h`; every term has at most one `y`.
    fn y_x_g(&mut self, j: usize, a: &[u32], h: usize) -> Vec<(PbwMonomial, ParamScalar)> {
        let key = (j, a.to_vec(), h);
        if let Some(v) = self.yx.get(&key) {
            return v.clone();
        }
        let n = self.alg.dim();
        let mut acc = Terms::new();
        match a.iter().position(|&e| e > 0) {
            None => {
                // y_j h = h (h^{-1} . y_j)
                let hinv = self.alg.group.inv(h);
                for i in 0..n {
                    let c = self.alg.h_entry(hinv, i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let mut y = vec![0; n];
                    y[i] = 1;
                    add_term(
                        &mut acc,
                        PbwMonomial {
                            x: vec![0; n],
                            g: h,
                            y,
                        },
                        c.clone(),
                    );
                }
            }
            Some(i) => {
                let mut rest = a.to_vec();
                rest[i] -= 1;
                for (m, c) in self.y_x_g(j, &rest, h) {
                    let mut m = m;
                    m.x[i] += 1;
                    add_term(&mut acc, m, c);
                }
                let comm = self.alg.comm[j][i].clone();
                for (g, c) in comm {
                    let p = self.g_on_x(g, &rest);
                    let gh = self.alg.group.mul(g, h);
                    for (e, d) in p.terms() {
                        add_term(
                            &mut acc,
                            PbwMonomial {
                                x: e.clone(),
                                g: gh,
                                y: vec![0; n],
                            },
                            c.mul_ref(d),
                        );
                    }
                }
            }
        }
        let v: Vec<_> = acc.into_iter().collect();
        self.yx.insert(key, v.clone());
        v
    }

    fn left_y(&mut self, j: usize, t: &Terms) -> Terms {
        let mut acc = Terms::new();
        for (m, c) in t {
            for (r, d) in self.y_x_g(j, &m.x, m.g) {
                let y: Vec<u32> = r.y.iter().zip(&m.y).map(|(a, b)| a + b).collect();
                add_term(&mut acc, PbwMonomial { x: r.x, g: r.g, y }, c.mul_ref(&d));
            }
        }
        acc
    }

    /// `m * t` for a single PBW monomial `m`.
    fn monomial_times(&mut self, m: &PbwMonomial, t: &Terms) -> Terms {
        let mut cur = t.clone();
        for (j, &b) in m.y.iter().enumerate() {
            for _ in 0..b {
                cur = self.left_y(j, &cur);
            }
        }
        cur = self.left_g(m.g, &cur);
        for (i, &a) in m.x.iter().enumerate() {
            for _ in 0..a {
                cur = self.left_x(i, &cur);
            }
        }
        cur
    }

    fn product(&mut self, a: &Terms, b: &Terms) -> Terms {
        let mut acc = Terms::new();
        for (m, c) in a {
            for (r, d) in self.monomial_times(m, b) {
                add_term(&mut acc, r, c.mul_ref(&d));
            }
        }
        acc
    }
}

impl PbwElement {
    pub fn zero(alg: &Arc<Cherednik>) -> PbwElement {
        PbwElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: &Arc<Cherednik>, c: ParamScalar) -> PbwElement {
        let n = alg.dim();
        Self::monomial(
            alg,
            PbwMonomial {
                x: vec![0; n],
                g: 0,
                y: vec![0; n],
            },
            c,
        )
    }

    pub fn one(alg: &Arc<Cherednik>) -> PbwElement {
        Self::scalar(alg, ParamScalar::one(&alg.field))
    }

    pub fn monomial(alg: &Arc<Cherednik>, m: PbwMonomial, c: ParamScalar) -> PbwElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PbwElement {
            alg: alg.clone(),
            terms,
        }
    }

    /// `x_i` (0-based index).
    pub fn x(alg: &Arc<Cherednik>, i: usize) -> PbwElement {
        let n = alg.dim();
        let mut x = vec![0; n];
        x[i] = 1;
        Self::monomial(
            alg,
            PbwMonomial {
                x,
                g: 0,
                y: vec![0; n],
            },
            ParamScalar::one(&alg.field),
        )
    }

    /// `y_j` (0-based index).
    pub fn y(alg: &Arc<Cherednik>, j: usize) -> PbwElement {
        let n = alg.dim();
        let mut y = vec![0; n];
        y[j] = 1;
        Self::monomial(
            alg,
            PbwMonomial {
                x: vec![0; n],
                g: 0,
                y,
            },
            ParamScalar::one(&alg.field),
        )
    }

    pub fn group_element(alg: &Arc<Cherednik>, g: usize) -> PbwElement {
        let n = alg.dim();
        Self::monomial(
            alg,
            PbwMonomial {
                x: vec![0; n],
                g,
                y: vec![0; n],
            },
            ParamScalar::one(&alg.field),
        )
    }

    pub fn from_group_algebra(alg: &Arc<Cherednik>, e: &GroupAlgebraElement) -> PbwElement {
        let mut out = Self::zero(alg);
        for (g, c) in e {
            out = out.add(&Self::group_element(alg, *g).scale(c));
        }
        out
    }

    pub fn from_terms(
        alg: &Arc<Cherednik>,
        terms: impl IntoIterator<Item = (PbwMonomial, ParamScalar)>,
    ) -> PbwElement {
        let mut acc = Terms::new();
        for (m, c) in terms {
            add_term(&mut acc, m, c);
        }
        PbwElement {
            alg: alg.clone(),
            terms: acc,
        }
    }

    pub fn algebra(&self) -> &Arc<Cherednik> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, ParamScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration order: the largest total `y` degree.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.y.iter().sum()).max()
    }

    fn check(&self, other: &PbwElement) -> Result<()> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(Error::IncompatibleElements)
        }
    }

    pub fn checked_add(&self, other: &PbwElement) -> Result<PbwElement> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(PbwElement {
            alg: self.alg.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &PbwElement) -> Result<PbwElement> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &PbwElement) -> Result<PbwElement> {
        self.check(other)?;
        let mut e = Engine::new(&self.alg);
        Ok(PbwElement {
            alg: self.alg.clone(),
            terms: e.product(&self.terms, &other.terms),
        })
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        self.checked_add(other)
            .expect("elements of different algebras")
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        self.checked_sub(other)
            .expect("elements of different algebras")
    }

    pub fn mul(&self, other: &PbwElement) -> PbwElement {
        self.checked_mul(other)
            .expect("elements of different algebras")
    }

    pub fn neg(&self) -> PbwElement {
        PbwElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ParamScalar) -> PbwElement {
        let mut terms = Terms::new();
        for (m, d) in &self.terms {
            add_term(&mut terms, m.clone(), d.mul_ref(c));
        }
        PbwElement {
            alg: self.alg.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> PbwElement {
        let mut acc = PbwElement::one(&self.alg);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, other: &PbwElement) -> Result<PbwElement> {
        Ok(self
            .checked_mul(other)?
            .checked_sub(&other.checked_mul(self)?)?)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(
        &self,
        f: impl Fn(&ParamScalar) -> Result<ParamScalar>,
    ) -> Result<PbwElement> {
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            add_term(&mut terms, m.clone(), f(c)?);
        }
        Ok(PbwElement {
            alg: self.alg.clone(),
            terms,
        })
    }

    /// Moves the element to another algebra with the same group and field,
    /// transforming coefficients with `f`.
    pub fn transport(
        &self,
        target: &Arc<Cherednik>,
        f: impl Fn(&ParamScalar) -> Result<ParamScalar>,
    ) -> Result<PbwElement> {
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            add_term(&mut terms, m.clone(), f(c)?);
        }
        Ok(PbwElement {
            alg: target.clone(),
            terms,
        })
    }
}

impl PartialEq for PbwElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.terms == other.terms
    }
}

fn fmt_monomial(m: &PbwMonomial) -> String {
    let mut parts = Vec::new();
    for (i, &a) in m.x.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{a}", i + 1)),
        }
    }
    if m.g != 0 {
        parts.push(format!("g{}", m.g));
    }
    for (j, &b) in m.y.iter().enumerate() {
        match b {
            0 => {}
            1 => parts.push(format!("y{}", j + 1)),
            _ => parts.push(format!("y{}^{b}", j + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let mono = fmt_monomial(m);
            let cs = c.to_string();
            let (neg, mag) = if !cs.contains(' ') && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let body = if mono.is_empty() {
                if mag.contains(' ') {
                    format!("({mag})")
                } else {
                    mag
                }
            } else if mag == "1" {
                mono
            } else if mag.contains(' ') {
                format!("({mag})*{mono}")
            } else {
                format!("{mag}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn generator_index(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn eval_pbw(alg: &Arc<Cherednik>, e: &Expr) -> Result<PbwElement> {
    let n = alg.dim();
    Ok(match e {
        Expr::Int(_) => {
            PbwElement::scalar(alg, crate::exactfield::parse::eval_scalar(e, &alg.field)?)
        }
        Expr::Ident { name, column } => {
            if let Some(i) = generator_index(name, 'x') {
                if i == 0 || i > n {
                    return Err(Error::UnknownGenerator(name.clone()));
                }
                PbwElement::x(alg, i - 1)
            } else if let Some(j) = generator_index(name, 'y') {
                if j == 0 || j > n {
                    return Err(Error::UnknownGenerator(name.clone()));
                }
                PbwElement::y(alg, j - 1)
            } else if let Some(g) = generator_index(name, 'g') {
                if g >= alg.group.order() {
                    return Err(Error::UnknownGenerator(name.clone()));
                }
                PbwElement::group_element(alg, g)
            } else if name == "z" || alg.field.symbol_index(name).is_some() {
                PbwElement::scalar(alg, crate::exactfield::parse::eval_scalar(e, &alg.field)?)
            } else {
                let _ = column;
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        Expr::Neg(a) => eval_pbw(alg, a)?.neg(),
        Expr::Add(a, b) => eval_pbw(alg, a)?.checked_add(&eval_pbw(alg, b)?)?,
        Expr::Sub(a, b) => eval_pbw(alg, a)?.checked_sub(&eval_pbw(alg, b)?)?,
        Expr::Mul(a, b) => eval_pbw(alg, a)?.checked_mul(&eval_pbw(alg, b)?)?,
        Expr::Div(a, b, col) => {
            let d =
                crate::exactfield::parse::eval_scalar(b, &alg.field).map_err(|_| Error::Parse {
                    column: *col,
                    message: "only division by scalars is allowed".into(),
                })?;
            if d.is_zero() {
                return Err(Error::Parse {
                    column: *col,
                    message: "division by zero".into(),
                });
            }
            eval_pbw(alg, a)?.scale(&d.inv()?)
        }
        Expr::Pow(a, k) => {
            let base = eval_pbw(alg, a)?;
            if *k >= 0 {
                base.pow(*k as u32)
            } else {
                // negative powers only for group elements and scalars
                match (base.terms.len(), base.terms.iter().next()) {
                    (1, Some((m, c)))
                        if m.x.iter().all(|&v| v == 0) && m.y.iter().all(|&v| v == 0) =>
                    {
                        let inv = PbwElement::monomial(
                            alg,
                            PbwMonomial {
                                x: m.x.clone(),
                                g: alg.group.inv(m.g),
                                y: m.y.clone(),
                            },
                            c.inv()?,
                        );
                        inv.pow(k.unsigned_abs() as u32)
                    }
                    _ => {
                        return Err(Error::InvalidInput(
                            "negative power of a non-invertible element".into(),
                        ))
                    }
                }
            }
        }
    })
}

/// Parses a word such as `x1^2*g3*y2 + k1*g1` and returns its normal form.
pub fn pbw_normal_form(alg: &Arc<Cherednik>, text: &str) -> Result<PbwElement> {
    eval_pbw(alg, &parse_expr(text)?)
}

/// `eu = sum_i x_i y_i - sum_H ell_H sum_i kappa_{H,i} e_{H,i}`.
pub fn euler_element(alg: &Arc<Cherednik>) -> Result<PbwElement> {
    let n = alg.dim();
    let mut eu = PbwElement::zero(alg);
    for i in 0..n {
        let mut x = vec![0; n];
        let mut y = vec![0; n];
        x[i] = 1;
        y[i] = 1;
        eu = eu.add(&PbwElement::monomial(
            alg,
            PbwMonomial { x, g: 0, y },
            ParamScalar::one(&alg.field),
        ));
    }
    let group = alg.group.clone();
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        for i in 0..hp.ell as i64 {
            let k = alg.param.kappa_h(h, i);
            if k.is_zero() {
                continue;
            }
            let c = k.checked_mul(&ParamScalar::from_int(&alg.field, hp.ell as i64))?;
            let e = PbwElement::from_group_algebra(alg, &alg.idempotent(h, i)?);
            eu = eu.sub(&e.scale(&c));
        }
    }
    Ok(eu)
}
