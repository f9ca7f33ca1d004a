//! Sparse multivariate polynomials with lexicographic term order.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use super::ring::{Field, Ring};

/// Exponent vector.
pub type Mono = Vec<u32>;

/// Sparse polynomial in `nvars` variables over a coefficient ring `C`.
///
/// Terms are kept sorted by descending lexicographic order of exponents
/// (variable 0 is the most significant), with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    nvars: usize,
    terms: Vec<(Mono, C)>,
    zero: C,
}

/// All exponent vectors of total degree `deg` in `n` variables, in
/// descending lexicographic order.
pub fn monomials_of_degree(n: usize, deg: u32) -> Vec<Mono> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in (0..=deg).rev() {
        for mut rest in monomials_of_degree(n - 1, deg - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn mono_add(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_sub(b: &[u32], a: &[u32]) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

impl<C: Ring> Poly<C> {
    pub fn zero(nvars: usize, proto: &C) -> Self {
        Poly {
            nvars,
            terms: Vec::new(),
            zero: proto.zero_like(),
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        let zero = c.zero_like();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(vec![0; nvars], c)]
        };
        Poly { nvars, terms, zero }
    }

    pub fn one(nvars: usize, proto: &C) -> Self {
        Self::constant(proto.one_like(), nvars)
    }

    pub fn var(i: usize, nvars: usize, proto: &C) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly {
            nvars,
            terms: vec![(e, proto.one_like())],
            zero: proto.zero_like(),
        }
    }

    pub fn monomial(exps: Mono, c: C) -> Self {
        let nvars = exps.len();
        let zero = c.zero_like();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(exps, c)]
        };
        Poly { nvars, terms, zero }
    }

    /// Collects arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, proto: &C, terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            match acc.get_mut(&e) {
                Some(x) => x.add_assign_ref(&c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Self::from_map(nvars, proto, acc)
    }

    fn from_map(nvars: usize, proto: &C, acc: BTreeMap<Mono, C>) -> Self {
        let terms: Vec<(Mono, C)> = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly {
            nvars,
            terms,
            zero: proto.zero_like(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Mono, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, C)> {
        self.terms
    }

    pub fn coeff_zero(&self) -> &C {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.terms.is_empty() && self.terms[0].1.is_one()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_coeff(&self) -> C {
        match self.terms.last() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => c.clone(),
            _ => self.zero.clone(),
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> C {
        self.terms
            .iter()
            .find(|(e, _)| e.as_slice() == exps)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.zero.clone())
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> C {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e[v]).max()
    }

    pub fn min_degree_in(&self, v: usize) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e[v]).min()
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[v] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .cloned()
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg_ref()))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &rhs.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate {
                        b[j].1.neg_ref()
                    } else {
                        b[j].1.clone()
                    };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        a[i].1.sub_ref(&b[j].1)
                    } else {
                        a[i].1.add_ref(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            nvars: self.nvars,
            terms: out,
            zero: self.zero.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.merge(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.merge(rhs, true)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, &self.zero);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(e, x)| {
                    let y = x.mul_ref(c);
                    (!y.is_zero()).then(|| (e.clone(), y))
                })
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn mul_term(&self, e: &[u32], c: &C) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(f, x)| {
                    let y = x.mul_ref(c);
                    (!y.is_zero()).then(|| (mono_add(f, e), y))
                })
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.nvars, &self.zero);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (e, x) in &self.terms {
            for (f, y) in &rhs.terms {
                let m = mono_add(e, f);
                let p = x.mul_ref(y);
                match acc.get_mut(&m) {
                    Some(c) => c.add_assign_ref(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Self::from_map(self.nvars, &self.zero, acc)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.nvars, &self.zero);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v] > 0)
                .filter_map(|(e, c)| {
                    let mut f = e.clone();
                    let k = f[v];
                    f[v] -= 1;
                    let y = c.mul_ref(&c.from_i64_like(k as i64));
                    (!y.is_zero()).then_some((f, y))
                })
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// Substitutes `x_i -> images[i]`; all images share a variable count.
    pub fn compose(&self, images: &[Poly<C>]) -> Poly<C> {
        assert_eq!(images.len(), self.nvars);
        let target_nvars = images.first().map_or(0, |p| p.nvars);
        let mut cache: Vec<Vec<Poly<C>>> = vec![Vec::new(); self.nvars];
        let mut acc = Poly::zero(target_nvars, &self.zero);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone(), target_nvars);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(Poly::one(target_nvars, &self.zero));
                }
                while powers.len() <= k as usize {
                    let next = powers.last().unwrap().mul(&images[i]);
                    powers.push(next);
                }
                t = t.mul(&powers[k as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Ring>(&self, proto: &D, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let y = f(c);
                    (!y.is_zero()).then(|| (e.clone(), y))
                })
                .collect(),
            zero: proto.zero_like(),
        }
    }

    /// Coefficients with respect to variable `v`, indexed by degree.
    pub fn to_univariate(&self, v: usize) -> Vec<Poly<C>> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut parts: Vec<Vec<(Mono, C)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[v] as usize;
            f[v] = 0;
            parts[k].push((f, c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                // removing one variable keeps descending order
                t.sort_by(|a, b| b.0.cmp(&a.0));
                Poly {
                    nvars: self.nvars,
                    terms: t,
                    zero: self.zero.clone(),
                }
            })
            .collect()
    }

    pub fn from_univariate(v: usize, coeffs: &[Poly<C>], nvars: usize, proto: &C) -> Poly<C> {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            for (e, c) in &p.terms {
                let mut f = e.clone();
                f[v] += k as u32;
                terms.push((f, c.clone()));
            }
        }
        Poly::from_terms(nvars, proto, terms)
    }

    /// Coefficient of `x_v^k` viewed as a polynomial in the other variables.
    pub fn coeff_in(&self, v: usize, k: u32) -> Poly<C> {
        let mut t: Vec<(Mono, C)> = self
            .terms
            .iter()
            .filter(|(e, _)| e[v] == k)
            .map(|(e, c)| {
                let mut f = e.clone();
                f[v] = 0;
                (f, c.clone())
            })
            .collect();
        t.sort_by(|a, b| b.0.cmp(&a.0));
        Poly {
            nvars: self.nvars,
            terms: t,
            zero: self.zero.clone(),
        }
    }

    /// Formats with the given variable names, leading term first.
    pub fn fmt_with(&self, names: &[String], coef: &dyn Fn(&C) -> String) -> String {
        Self::fmt_terms(self.terms.iter(), names, coef)
    }

    /// Formats with the constant term first.
    pub fn fmt_ascending(&self, names: &[String], coef: &dyn Fn(&C) -> String) -> String {
        Self::fmt_terms(self.terms.iter().rev(), names, coef)
    }

    fn fmt_terms<'a>(
        terms: impl Iterator<Item = &'a (Mono, C)>,
        names: &[String],
        coef: &dyn Fn(&C) -> String,
    ) -> String
    where
        C: 'a,
    {
        let mut out = String::new();
        for (e, c) in terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let cs = coef(c);
            let compound = cs.contains(' ');
            let (neg, mag) = if !compound && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let body = if mono.is_empty() {
                if compound {
                    format!("({mag})")
                } else {
                    mag
                }
            } else if mag == "1" {
                mono
            } else if compound {
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
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Field> Poly<C> {
    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly<C>) -> Option<Poly<C>> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.nvars, &self.zero));
        }
        let (dm, dc) = (&d.terms[0].0, &d.terms[0].1);
        let dinv = dc.inv_ref()?;
        if d.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                if !mono_divides(dm, e) {
                    return None;
                }
                terms.push((mono_sub(e, dm), c.mul_ref(&dinv)));
            }
            return Some(Poly {
                nvars: self.nvars,
                terms,
                zero: self.zero.clone(),
            });
        }
        let mut rem = self.clone();
        let mut quo: Vec<(Mono, C)> = Vec::new();
        while let Some((e, c)) = rem.terms.first() {
            if !mono_divides(dm, e) {
                return None;
            }
            let qe = mono_sub(e, dm);
            let qc = c.mul_ref(&dinv);
            rem = rem.sub(&d.mul_term(&qe, &qc));
            quo.push((qe, qc));
        }
        Some(Poly {
            nvars: self.nvars,
            terms: quo,
            zero: self.zero.clone(),
        })
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly<C> {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv_ref().expect("nonzero leading coefficient")),
        }
    }

    /// Pseudo-remainder of `a` by `b` with respect to variable `v`.
    fn prem(a: &Poly<C>, b: &Poly<C>, v: usize) -> Poly<C> {
        let db = b.degree_in(v).unwrap_or(0);
        let lb = b.coeff_in(v, db);
        let mut r = a.clone();
        let mut steps = 0i64;
        let da = a.degree_in(v).unwrap_or(0);
        let total = da as i64 - db as i64 + 1;
        while !r.is_zero() {
            let dr = r.degree_in(v).unwrap();
            if dr < db {
                break;
            }
            let lr = r.coeff_in(v, dr);
            let mut shift = vec![0; r.nvars];
            shift[v] = dr - db;
            let t = Poly::monomial(shift, r.zero.one_like()).mul(&lr);
            r = r.mul(&lb).sub(&b.mul(&t));
            steps += 1;
        }
        let extra = total - steps;
        if extra > 0 {
            r = r.mul(&lb.pow(extra as u32));
        }
        r
    }

    /// Content with respect to `v`: gcd of the coefficients in `v`.
    fn content_in(p: &Poly<C>, v: usize) -> Poly<C> {
        let mut g = Poly::zero(p.nvars, &p.zero);
        for c in p.to_univariate(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Univariate-in-`v` gcd of primitive polynomials via subresultants.
    fn subresultant_gcd(a: &Poly<C>, b: &Poly<C>, v: usize) -> Poly<C> {
        let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let one = Poly::one(a.nvars, &a.zero);
        let mut g = one.clone();
        let mut h = one.clone();
        loop {
            let delta = a.degree_in(v).unwrap() - b.degree_in(v).unwrap();
            let r = Self::prem(&a, &b, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v).unwrap() == 0 {
                return one;
            }
            let den = g.mul(&h.pow(delta));
            a = b;
            b = r.exact_div(&den).expect("subresultant division is exact");
            g = a.coeff_in(v, a.degree_in(v).unwrap());
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).exact_div(&h.pow(delta - 1)).expect("exact")
            };
        }
        let c = Self::content_in(&b, v);
        b.exact_div(&c).expect("content divides")
    }
}

/// Greatest common divisor over a field, normalized to be monic.
pub fn gcd<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars, &a.zero);
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        // gcd with a monomial is a monomial
        let (m, p) = if a.terms.len() == 1 { (a, b) } else { (b, a) };
        let mut e = m.terms[0].0.clone();
        for (f, _) in &p.terms {
            for (x, y) in e.iter_mut().zip(f) {
                *x = (*x).min(*y);
            }
        }
        return Poly::monomial(e, a.zero.one_like());
    }
    let v = match (0..a.nvars).find(|&v| a.involves(v) || b.involves(v)) {
        Some(v) => v,
        None => return Poly::one(a.nvars, &a.zero),
    };
    if !a.involves(v) {
        return gcd(a, &Poly::content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&Poly::content_in(a, v), b);
    }
    let ca = Poly::content_in(a, v);
    let cb = Poly::content_in(b, v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let h = Poly::subresultant_gcd(&pa, &pb, v);
    c.mul(&h).monic()
}

impl<C: Ring + fmt::Display> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("v{i}")).collect();
        f.write_str(&self.fmt_with(&names, &|c| c.to_string()))
    }
}
