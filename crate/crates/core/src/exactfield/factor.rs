//! Extraction of linear factors `s - rho(k)` with `rho` affine in the other
//! symbols.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclo::{Cyclo, CycloField, Q};
use super::poly::{gcd, Poly};
use super::ring::Ring;
use super::scalar::ParamScalar;
use crate::error::{Error, Result};

/// `p = remainder * prod (s - root)^mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactorization {
    pub var: usize,
    pub roots: Vec<(ParamScalar, u32)>,
    pub remainder: ParamScalar,
}

impl LinearFactorization {
    /// Text such as `(s + 1)*(s + 1/2 + k1)`.
    pub fn display(&self) -> String {
        let ctx = self.remainder.ctx();
        let name = &ctx.symbols()[self.var];
        let mut parts: Vec<String> = self
            .roots
            .iter()
            .map(|(r, m)| {
                let c = r.neg();
                let body = if c.is_zero() {
                    name.clone()
                } else if c.is_polynomial() {
                    let t = c.numer().fmt_ascending(ctx.symbols(), &|x| x.fmt_with("z"));
                    match t.strip_prefix('-') {
                        Some(rest) => format!("{name} - {rest}"),
                        None => format!("{name} + {t}"),
                    }
                } else {
                    format!("{name} + {c}")
                };
                if *m == 1 {
                    format!("({body})")
                } else {
                    format!("({body})^{m}")
                }
            })
            .collect();
        parts.sort();
        if !self.remainder.is_one() || parts.is_empty() {
            let r = self.remainder.to_string();
            let r = if r.contains(' ') { format!("({r})") } else { r };
            parts.insert(0, r);
        }
        parts.join("*")
    }

    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum::<u32>() + self.remainder.degree_in(self.var)
    }
}

fn to_univariate(p: &ParamScalar, var: usize) -> Result<Poly<ParamScalar>> {
    let coeffs = p.coeffs_in(var)?;
    let proto = ParamScalar::zero(p.ctx());
    Ok(Poly::from_terms(
        1,
        &proto,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32], c)),
    ))
}

fn from_univariate(u: &Poly<ParamScalar>, var: usize, proto: &ParamScalar) -> ParamScalar {
    let s = ParamScalar::symbol_at(proto.ctx(), var);
    let mut acc = proto.zero_like();
    for (e, c) in u.terms() {
        acc = &acc + &(c * &s.pow(e[0] as i64).unwrap());
    }
    acc
}

fn horner(u: &Poly<ParamScalar>, x: &ParamScalar) -> ParamScalar {
    let deg = u.degree_in(0).unwrap_or(0);
    let mut acc = x.zero_like();
    for k in (0..=deg).rev() {
        acc = &(&acc * x) + &u.coefficient(&[k]);
    }
    acc
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let v = n.to_u64().filter(|&v| v <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a rational polynomial (coefficients low degree first).
pub fn rational_roots(coeffs: &[Q]) -> Option<Vec<Q>> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Q::zero());
        c.drain(..lead_zeros);
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer())
        .collect();
    let p_div = small_divisors(&ints[0])?;
    let q_div = small_divisors(ints.last().unwrap())?;
    let eval = |r: &Q| {
        let mut acc = Q::zero();
        for a in ints.iter().rev() {
            acc = acc * r + Q::from_integer(a.clone());
        }
        acc
    };
    let mut seen = std::collections::BTreeSet::new();
    for p in &p_div {
        for d in &q_div {
            for sign in [1i64, -1] {
                let r = BigRational::new(p * BigInt::from(sign), d.clone());
                if seen.insert(r.clone()) && eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Some(roots)
}

/// Rational roots of a univariate polynomial with cyclotomic coefficients.
fn rational_roots_cyclo(coeffs: &[Cyclo]) -> Option<Vec<Q>> {
    let f1 = CycloField::new(1);
    let proto = Cyclo::zero(&f1);
    let phi = coeffs.first().map_or(1, |c| c.coeffs().len());
    let mut g = Poly::zero(1, &proto);
    for k in 0..phi {
        let coord = Poly::from_terms(
            1,
            &proto,
            coeffs.iter().enumerate().map(|(d, c)| {
                (
                    vec![d as u32],
                    Cyclo::from_rational(&f1, c.coeffs()[k].clone()),
                )
            }),
        );
        g = gcd(&g, &coord);
    }
    let deg = g.degree_in(0).unwrap_or(0);
    let dense: Vec<Q> = (0..=deg)
        .map(|d| g.coefficient(&[d]).to_rational().unwrap())
        .collect();
    rational_roots(&dense)
}

fn eval_point(ctx_val: &ParamScalar, point: &[Cyclo]) -> Option<Cyclo> {
    ctx_val.evaluate(point).ok()
}

/// Finds all roots of `p` (as a polynomial in symbol `var`) that are affine
/// in the remaining symbols with rational coefficients, with multiplicities.
pub fn poly_factor_linear(p: &ParamScalar, var: usize) -> Result<LinearFactorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ctx = p.ctx().clone();
    let proto = ParamScalar::zero(&ctx);
    let u = to_univariate(p, var)?;
    let deg = u.degree_in(0).unwrap_or(0);
    let mut roots: Vec<ParamScalar> = Vec::new();
    if deg > 0 {
        let du = u.derivative(0);
        let g = gcd(&u, &du);
        let sq = u.exact_div(&g).expect("gcd divides").monic();
        let sq_deg = sq.degree_in(0).unwrap_or(0) as usize;
        let sq_full = from_univariate(&sq, var, &proto);
        let d_var = sq_full.derivative(var);
        let others: Vec<usize> = (0..ctx.nvars())
            .filter(|&i| i != var && sq_full.involves(i))
            .collect();
        let grads: BTreeMap<usize, ParamScalar> =
            others.iter().map(|&i| (i, sq_full.derivative(i))).collect();
        let f = ctx.cyclo().clone();
        let trials = if others.is_empty() { 1 } else { 24 };
        for t in 0..trials {
            if roots.len() == sq_deg {
                break;
            }
            let mut point: Vec<Cyclo> = vec![Cyclo::zero(&f); ctx.nvars()];
            for (j, &i) in others.iter().enumerate() {
                let v = ((t as i64 + 1) * (j as i64 + 3) * (2 * j as i64 + 5)) % 61 - 29;
                point[i] = Cyclo::from_int(&f, v);
            }
            let mut spec = Vec::with_capacity(sq_deg + 1);
            let mut ok = true;
            for k in 0..=sq_deg as u32 {
                match eval_point(&sq.coefficient(&[k]), &point) {
                    Some(c) => spec.push(c),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || spec.last().map_or(true, |c| c.is_zero()) {
                continue;
            }
            let Some(cands) = rational_roots_cyclo(&spec) else {
                continue;
            };
            for r0 in cands {
                let mut pt = point.clone();
                pt[var] = Cyclo::from_rational(&f, r0.clone());
                let Some(ds) = eval_point(&d_var, &pt) else {
                    continue;
                };
                if ds.is_zero() {
                    continue;
                }
                let mut rho = ParamScalar::from_rational(&ctx, r0.clone());
                let mut affine = true;
                for &i in &others {
                    let Some(di) = eval_point(&grads[&i], &pt) else {
                        affine = false;
                        break;
                    };
                    let slope = di.div(&ds)?.neg();
                    if slope.is_zero() {
                        continue;
                    }
                    let shift = ParamScalar::symbol_at(&ctx, i)
                        .checked_sub(&ParamScalar::from_cyclo(&ctx, &point[i])?)?;
                    rho = rho.checked_add(&shift.scale_cyclo(&slope))?;
                }
                if !affine || roots.contains(&rho) {
                    continue;
                }
                if horner(&sq, &rho).is_zero() {
                    roots.push(rho);
                }
            }
        }
    }
    // multiplicities against the original polynomial
    let mut rest = u.clone();
    let mut found = Vec::new();
    for r in roots {
        let lin = Poly::from_terms(1, &proto, [(vec![1], proto.one_like()), (vec![0], r.neg())]);
        let mut m = 0;
        while let Some(qt) = rest.exact_div(&lin) {
            if rest.degree_in(0).unwrap_or(0) == 0 {
                break;
            }
            rest = qt;
            m += 1;
        }
        found.push((r, m));
    }
    Ok(LinearFactorization {
        var,
        roots: found,
        remainder: from_univariate(&rest, var, &proto),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::cyclo::{q, qq};
    use crate::exactfield::scalar::ScalarField;

    #[test]
    fn factors_cyclic_b_function() {
        let ctx = ScalarField::new(2, vec!["k0".into(), "k1".into(), "s".into()]).unwrap();
        let s = ParamScalar::symbol(&ctx, "s").unwrap();
        let k1 = ParamScalar::symbol(&ctx, "k1").unwrap();
        let one = ParamScalar::one(&ctx);
        let half = ParamScalar::from_rational(&ctx, qq(1, 2));
        let p = &(&s + &one) * &(&(&s + &half) + &k1);
        let f = poly_factor_linear(&p, 2).unwrap();
        assert_eq!(f.roots.len(), 2);
        assert!(f.remainder.is_one());
        assert_eq!(f.display(), "(s + 1)*(s + 1/2 + k1)");
    }

    #[test]
    fn multiplicity_and_remainder() {
        let ctx = ScalarField::new(1, vec!["k".into(), "s".into()]).unwrap();
        let s = ParamScalar::symbol(&ctx, "s").unwrap();
        let k = ParamScalar::symbol(&ctx, "k").unwrap();
        let two = ParamScalar::from_int(&ctx, 2);
        let lin = &s - &(&k * &two);
        let irr = &(&s * &s) + &two;
        let p = &(&(&lin * &lin) * &irr) * &ParamScalar::from_int(&ctx, 3);
        let f = poly_factor_linear(&p, 1).unwrap();
        assert_eq!(f.roots, vec![(&k * &two, 2)]);
        assert_eq!(f.remainder, &irr * &ParamScalar::from_int(&ctx, 3));
        assert_eq!(f.display(), "(3*s^2 + 6)*(s - 2*k)^2");
    }

    #[test]
    fn zero_is_rejected() {
        let ctx = ScalarField::new(1, vec!["s".into()]).unwrap();
        assert_eq!(
            poly_factor_linear(&ParamScalar::zero(&ctx), 0),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn rational_root_search() {
        let r = rational_roots(&[q(-1), q(0), q(4)]).unwrap();
        assert!(r.contains(&qq(1, 2)) && r.contains(&qq(-1, 2)));
    }
}
