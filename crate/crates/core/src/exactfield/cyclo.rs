//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{Field, Ring};
use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The field `Q(zeta_N)` with `zeta_N = exp(2 pi i / N)`, stored with the
/// power basis `1, z, ..., z^(phi-1)` modulo the cyclotomic polynomial.
#[derive(Debug)]
pub struct CycloField {
    n: u32,
    phi: usize,
    /// Monic cyclotomic polynomial, low degree first.
    modulus: Vec<Q>,
    /// Reduced forms of `z^k` for `k < n`.
    powers: Vec<Vec<Q>>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}
impl Eq for CycloField {}

fn int_poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    if r.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quo = vec![BigInt::zero(); r.len() - dd];
    for i in (0..quo.len()).rev() {
        let t = r[i + dd].clone();
        if !t.is_zero() {
            for (k, dk) in den.iter().enumerate() {
                r[i + k] -= &t * dk;
            }
        }
        quo[i] = t;
    }
    quo
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = int_poly_divexact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl CycloField {
    pub fn new(n: u32) -> Arc<CycloField> {
        assert!(n >= 1, "conductor must be positive");
        let modulus: Vec<Q> = cyclotomic_polynomial(n)
            .into_iter()
            .map(Q::from_integer)
            .collect();
        let phi = modulus.len() - 1;
        let mut f = CycloField {
            n,
            phi,
            modulus,
            powers: Vec::new(),
        };
        let mut powers = Vec::with_capacity(n as usize);
        for k in 0..n as usize {
            let mut v = vec![Q::zero(); k + 1];
            v[k] = Q::one();
            powers.push(f.reduce(v));
        }
        f.powers = powers;
        Arc::new(f)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    fn reduce(&self, mut a: Vec<Q>) -> Vec<Q> {
        let phi = self.phi;
        if a.len() > phi {
            for i in (phi..a.len()).rev() {
                let t = std::mem::take(&mut a[i]);
                if t.is_zero() {
                    continue;
                }
                for k in 0..phi {
                    let m = &self.modulus[k];
                    if !m.is_zero() {
                        a[i - phi + k] -= &t * m;
                    }
                }
            }
        }
        a.resize(phi, Q::zero());
        a
    }
}

/// An element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    c: Vec<Q>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            self.c == other.c
        } else {
            let (a, b) = align(self, other);
            a.c == b.c
        }
    }
}
impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.c.hash(state);
    }
}

fn align(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
    let n = lcm_u32(a.field.n, b.field.n);
    let f = CycloField::new(n);
    (a.embed(&f), b.embed(&f))
}

impl Cyclo {
    pub fn zero(field: &Arc<CycloField>) -> Cyclo {
        Cyclo {
            field: field.clone(),
            c: vec![Q::zero(); field.phi],
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Cyclo {
        Cyclo::from_rational(field, Q::one())
    }

    pub fn from_rational(field: &Arc<CycloField>, r: Q) -> Cyclo {
        let mut c = vec![Q::zero(); field.phi];
        c[0] = r;
        Cyclo {
            field: field.clone(),
            c,
        }
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Cyclo {
        Cyclo::from_rational(field, q(n))
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Cyclo {
        let n = field.n as i64;
        let k = k.rem_euclid(n) as usize;
        Cyclo {
            field: field.clone(),
            c: field.powers[k].clone(),
        }
    }

    /// `zeta_m^k` where `m` must divide the conductor.
    pub fn root_of_unity(field: &Arc<CycloField>, m: u32, k: i64) -> Result<Cyclo> {
        if m == 0 || field.n % m != 0 {
            return Err(Error::IncompatibleScalars(format!(
                "zeta_{m} does not lie in Q(zeta_{})",
                field.n
            )));
        }
        Ok(Cyclo::zeta_pow(field, k * (field.n / m) as i64))
    }

    /// Builds an element from power-basis coordinates of any length.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<Q>) -> Cyclo {
        let mut acc = vec![Q::zero(); field.phi];
        for (k, a) in coeffs.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &field.powers[k % field.n as usize];
            for (t, pt) in p.iter().enumerate() {
                if !pt.is_zero() {
                    acc[t] += &a * pt;
                }
            }
        }
        Cyclo {
            field: field.clone(),
            c: acc,
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// Power-basis coordinates.
    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Image under `Q(zeta_n) -> Q(zeta_m)`; `n` must divide `m`.
    pub fn embed(&self, target: &Arc<CycloField>) -> Cyclo {
        if target.n == self.field.n {
            return Cyclo {
                field: target.clone(),
                c: self.c.clone(),
            };
        }
        assert!(
            target.n % self.field.n == 0,
            "cannot embed Q(zeta_{}) into Q(zeta_{})",
            self.field.n,
            target.n
        );
        let step = (target.n / self.field.n) as usize;
        let mut acc = vec![Q::zero(); target.phi];
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &target.powers[(k * step) % target.n as usize];
            for (t, pt) in p.iter().enumerate() {
                if !pt.is_zero() {
                    acc[t] += a * pt;
                }
            }
        }
        Cyclo {
            field: target.clone(),
            c: acc,
        }
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyclo {
        let n = self.field.n as usize;
        let mut acc = vec![Q::zero(); self.field.phi];
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &self.field.powers[(n - k % n) % n];
            for (t, pt) in p.iter().enumerate() {
                if !pt.is_zero() {
                    acc[t] += a * pt;
                }
            }
        }
        Cyclo {
            field: self.field.clone(),
            c: acc,
        }
    }

    pub fn scale(&self, r: &Q) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    fn same_field_op(&self, rhs: &Cyclo, f: impl Fn(&Cyclo, &Cyclo) -> Cyclo) -> Cyclo {
        if self.field.n == rhs.field.n {
            f(self, rhs)
        } else {
            let (a, b) = align(self, rhs);
            f(&a, &b)
        }
    }

    pub fn add(&self, rhs: &Cyclo) -> Cyclo {
        self.same_field_op(rhs, |a, b| Cyclo {
            field: a.field.clone(),
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, rhs: &Cyclo) -> Cyclo {
        self.same_field_op(rhs, |a, b| Cyclo {
            field: a.field.clone(),
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, rhs: &Cyclo) -> Cyclo {
        self.same_field_op(rhs, |a, b| {
            let phi = a.field.phi;
            if phi == 1 {
                return Cyclo {
                    field: a.field.clone(),
                    c: vec![&a.c[0] * &b.c[0]],
                };
            }
            if b.is_rational() {
                return a.scale(&b.c[0]);
            }
            if a.is_rational() {
                return b.scale(&a.c[0]);
            }
            let mut prod = vec![Q::zero(); 2 * phi - 1];
            for (i, x) in a.c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.c.iter().enumerate() {
                    if !y.is_zero() {
                        prod[i + j] += x * y;
                    }
                }
            }
            Cyclo {
                field: a.field.clone(),
                c: a.field.reduce(prod),
            }
        })
    }

    pub fn pow(&self, e: i64) -> Result<Cyclo> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Cyclo::from_rational(&self.field, self.c[0].recip()));
        }
        // extended Euclid: find u with u*a = 1 mod modulus
        let a = trim(self.c.clone());
        let m = self.field.modulus.clone();
        let (g, u) = ext_gcd_left(a, m);
        // g is a nonzero constant since the modulus is irreducible
        if g.len() != 1 {
            return Err(Error::Internal("cyclotomic inverse failed".into()));
        }
        let ginv = g[0].recip();
        let u: Vec<Q> = u.into_iter().map(|x| x * &ginv).collect();
        Ok(Cyclo {
            field: self.field.clone(),
            c: self.field.reduce(u),
        })
    }

    pub fn div(&self, rhs: &Cyclo) -> Result<Cyclo> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Returns `k` with `self = zeta_m^k`, if any.
    pub fn root_of_unity_exponent(&self, m: u32) -> Option<i64> {
        for k in 0..m as i64 {
            if let Ok(z) = Cyclo::root_of_unity(&self.field, m, k) {
                if &z == self {
                    return Some(k);
                }
            }
        }
        None
    }

    /// Writes the element as `c0 + c1*z + ...` using `var` for the generator.
    pub fn fmt_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            let body = match k {
                0 => format_rational(&mag),
                _ => {
                    let v = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    if mag.is_one() {
                        v
                    } else {
                        format!("{}*{v}", format_rational(&mag))
                    }
                }
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

    /// Number of nonzero power-basis coordinates.
    pub fn term_count(&self) -> usize {
        self.c.iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn format_rational(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn trim(mut a: Vec<Q>) -> Vec<Q> {
    while a.len() > 1 && a.last().map_or(false, |x| x.is_zero()) {
        a.pop();
    }
    a
}

fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (vec![Q::zero()], r);
    }
    let mut quo = vec![Q::zero(); r.len() - db];
    for i in (0..quo.len()).rev() {
        let t = &r[i + db] / &lb;
        if !t.is_zero() {
            for (k, bk) in b.iter().enumerate() {
                r[i + k] -= &t * bk;
            }
        }
        quo[i] = t;
    }
    r.truncate(db.max(1));
    (quo, trim(r))
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

/// Returns `(g, u)` with `u*a = g mod b`.
fn ext_gcd_left(a: Vec<Q>, b: Vec<Q>) -> (Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trim(a), trim(b));
    let (mut u0, mut u1) = (vec![Q::one()], vec![Q::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (quo, rem) = poly_divrem(&r0, &r1);
        let u2 = poly_sub(&u0, &poly_mul(&quo, &u1));
        r0 = std::mem::replace(&mut r1, rem);
        u0 = std::mem::replace(&mut u1, u2);
    }
    (r0, u0)
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; z = zeta_{}]", self.fmt_with("z"), self.field.n)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("z"))
    }
}

impl Ring for Cyclo {
    fn zero_like(&self) -> Self {
        Cyclo::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Cyclo::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Cyclo::is_one(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Cyclo::add(self, rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Cyclo::sub(self, rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Cyclo::mul(self, rhs)
    }
    fn neg_ref(&self) -> Self {
        Cyclo::neg(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Cyclo::from_int(&self.field, n)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        if self.field.n == rhs.field.n {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = Cyclo::add(self, rhs);
        }
    }
}

impl Field for Cyclo {
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
}

macro_rules! cyclo_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                Cyclo::$m(self, rhs)
            }
        }
    };
}
cyclo_binop!(Add, add);
cyclo_binop!(Sub, sub);
cyclo_binop!(Mul, mul);

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small() {
        let p = |n| {
            cyclotomic_polynomial(n)
                .into_iter()
                .map(|x| i64::try_from(x).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(p(1), vec![-1, 1]);
        assert_eq!(p(2), vec![1, 1]);
        assert_eq!(p(3), vec![1, 1, 1]);
        assert_eq!(p(4), vec![1, 0, 1]);
        assert_eq!(p(6), vec![1, -1, 1]);
        assert_eq!(p(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_powers_sum_to_zero() {
        for n in 2..13u32 {
            let f = CycloField::new(n);
            let mut acc = Cyclo::zero(&f);
            for k in 0..n as i64 {
                acc = acc.add(&Cyclo::zeta_pow(&f, k));
            }
            assert!(acc.is_zero(), "n = {n}");
            assert!(Cyclo::zeta_pow(&f, n as i64).is_one());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = CycloField::new(5);
        let a = Cyclo::from_coeffs(&f, vec![q(2), q(-1), qq(1, 3)]);
        let b = a.inv().unwrap();
        assert!(a.mul(&b).is_one());
        assert_eq!(Cyclo::zero(&f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f3 = CycloField::new(3);
        let f6 = CycloField::new(6);
        let z3 = Cyclo::zeta_pow(&f3, 1);
        let e = z3.embed(&f6);
        assert_eq!(e, Cyclo::zeta_pow(&f6, 2));
        // mixed conductors align automatically
        let s = z3.add(&Cyclo::zeta_pow(&f6, 1));
        assert_eq!(s.conductor(), 6);
    }

    #[test]
    fn conjugation_inverts_roots() {
        let f = CycloField::new(7);
        let z = Cyclo::zeta_pow(&f, 3);
        assert_eq!(z.conj(), Cyclo::zeta_pow(&f, -3));
        assert!(z.mul(&z.conj()).is_one());
    }

    #[test]
    fn formatting() {
        let f = CycloField::new(3);
        let a = Cyclo::from_coeffs(&f, vec![qq(1, 2), q(-1)]);
        assert_eq!(a.to_string(), "1/2 - z");
        assert_eq!(Cyclo::zeta_pow(&f, 2).to_string(), "-1 - z");
    }
}
