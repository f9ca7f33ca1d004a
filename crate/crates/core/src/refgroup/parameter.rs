use std::collections::BTreeMap;
use std::sync::Arc;

use super::group::ReflectionGroup;
use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, ParamScalar, Poly, Ring, ScalarField};

/// Scalar context whose symbols are the parameter slots of `group`
/// followed by `extra`.
pub fn scalar_field_for(group: &ReflectionGroup, extra: &[&str]) -> Result<Arc<ScalarField>> {
    let mut symbols: Vec<String> = group.slot_names().into_iter().flatten().collect();
    symbols.extend(extra.iter().map(|s| s.to_string()));
    ScalarField::new(group.conductor(), symbols)
}

/// The parameter `kappa_{H,i}`, constant on hyperplane orbits.
#[derive(Clone, Debug)]
pub struct Parameter {
    group: Arc<ReflectionGroup>,
    field: Arc<ScalarField>,
    kappa: Vec<Vec<ParamScalar>>,
}

/// The parameter written as a function on reflections.
#[derive(Clone, Debug, PartialEq)]
pub struct CParameter {
    pub values: BTreeMap<usize, ParamScalar>,
}

impl PartialEq for Parameter {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.kappa == other.kappa
    }
}

impl Parameter {
    fn check_field(group: &ReflectionGroup, field: &ScalarField) -> Result<()> {
        if field.conductor() % group.conductor() != 0 {
            return Err(Error::IncompatibleScalars(format!(
                "scalar field Q(zeta_{}) does not contain Q(zeta_{})",
                field.conductor(),
                group.conductor()
            )));
        }
        Ok(())
    }

    /// Every slot its own symbol; with `normalize_zero`, `kappa_{H,0} = 0`.
    pub fn symbolic(
        group: &Arc<ReflectionGroup>,
        field: &Arc<ScalarField>,
        normalize_zero: bool,
    ) -> Result<Parameter> {
        Self::check_field(group, field)?;
        let kappa = group
            .slot_names()
            .into_iter()
            .map(|names| {
                names
                    .iter()
                    .enumerate()
                    .map(|(i, n)| {
                        if normalize_zero && i == 0 {
                            Ok(ParamScalar::zero(field))
                        } else {
                            ParamScalar::symbol(field, n)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Parameter {
            group: group.clone(),
            field: field.clone(),
            kappa,
        })
    }

    pub fn zero(group: &Arc<ReflectionGroup>, field: &Arc<ScalarField>) -> Result<Parameter> {
        Self::check_field(group, field)?;
        let kappa = (0..group.orbits().len())
            .map(|o| vec![ParamScalar::zero(field); group.orbit_ell(o) as usize])
            .collect();
        Ok(Parameter {
            group: group.clone(),
            field: field.clone(),
            kappa,
        })
    }

    /// Explicit values, one list per hyperplane orbit.
    pub fn from_values(
        group: &Arc<ReflectionGroup>,
        field: &Arc<ScalarField>,
        values: Vec<Vec<ParamScalar>>,
    ) -> Result<Parameter> {
        Self::check_field(group, field)?;
        if values.len() != group.orbits().len() {
            return Err(Error::InvalidInput(format!(
                "{} orbit value lists for {} hyperplane orbits",
                values.len(),
                group.orbits().len()
            )));
        }
        for (o, v) in values.iter().enumerate() {
            if v.len() != group.orbit_ell(o) as usize {
                return Err(Error::InvalidInput(format!(
                    "orbit {o} needs {} values, got {}",
                    group.orbit_ell(o),
                    v.len()
                )));
            }
            for x in v {
                if !x.ctx().same_as(field) {
                    return Err(Error::IncompatibleScalars(
                        "parameter value in a foreign context".into(),
                    ));
                }
            }
        }
        Ok(Parameter {
            group: group.clone(),
            field: field.clone(),
            kappa: values,
        })
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<ScalarField> {
        &self.field
    }

    pub fn values(&self) -> &[Vec<ParamScalar>] {
        &self.kappa
    }

    /// `kappa_{o,i}` with `i` read modulo `ell`.
    pub fn kappa(&self, orbit: usize, i: i64) -> &ParamScalar {
        let v = &self.kappa[orbit];
        &v[i.rem_euclid(v.len() as i64) as usize]
    }

    /// `kappa_{H,i}` for a hyperplane index.
    pub fn kappa_h(&self, h: usize, i: i64) -> &ParamScalar {
        self.kappa(self.group.hyperplanes()[h].orbit, i)
    }

    /// Applies a substitution to every value.
    pub fn map_values(&self, f: impl Fn(&ParamScalar) -> Result<ParamScalar>) -> Result<Parameter> {
        let kappa = self
            .kappa
            .iter()
            .map(|v| v.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Parameter {
            group: self.group.clone(),
            field: self.field.clone(),
            kappa,
        })
    }

    /// Adds integers to the slots.
    pub fn shifted(&self, by: &[Vec<i64>]) -> Result<Parameter> {
        let mut out = self.clone();
        for (o, v) in by.iter().enumerate() {
            for (i, &t) in v.iter().enumerate() {
                out.kappa[o][i] =
                    out.kappa[o][i].checked_add(&ParamScalar::from_int(&self.field, t))?;
            }
        }
        Ok(out)
    }

    /// `c(w) = ((1 - lambda_w)/2) sum_i kappa_{H,i} det(w)^i` on reflections.
    pub fn c_of_kappa(&self) -> CParameter {
        let f = &self.field;
        let mut values = BTreeMap::new();
        for r in self.group.reflections() {
            let ell = self.group.hyperplanes()[r.hyperplane].ell as i64;
            let mut acc = ParamScalar::zero(f);
            for i in 0..ell {
                let d = r.det.pow(i).unwrap();
                acc = &acc + &self.kappa_h(r.hyperplane, i).scale_cyclo(&d);
            }
            let factor = Cyclo::one(r.lambda.field())
                .sub(&r.lambda)
                .scale(&crate::exactfield::qq(1, 2));
            values.insert(r.element, acc.scale_cyclo(&factor));
        }
        CParameter { values }
    }

    /// Inverse dictionary on the slice `kappa_{H,0} = 0`, checked by
    /// comparing both Dunkl operators on low-degree monomials.
    pub fn kappa_of_c(
        group: &Arc<ReflectionGroup>,
        field: &Arc<ScalarField>,
        c: &CParameter,
    ) -> Result<Parameter> {
        Self::check_field(group, field)?;
        for r in group.reflections() {
            if !c.values.contains_key(&r.element) {
                return Err(Error::DictionaryMismatch(format!(
                    "no value for reflection {}",
                    r.element
                )));
            }
        }
        if c.values.len() != group.reflections().len() {
            return Err(Error::DictionaryMismatch(
                "values given on non-reflections".into(),
            ));
        }
        let mut kappa: Vec<Option<Vec<ParamScalar>>> = vec![None; group.orbits().len()];
        for (h, hp) in group.hyperplanes().iter().enumerate() {
            let ell = hp.ell as i64;
            let zeta = Cyclo::root_of_unity(group.field(), hp.ell, 1)?;
            // a_j = 2 c(s^j) / (ell (1 - lambda)), a_0 fixed by kappa_0 = 0
            let mut a = vec![ParamScalar::zero(field); ell as usize];
            for j in 1..ell as usize {
                let w = hp.stabilizer[j];
                let datum = group.reflection_datum(w).unwrap();
                let denom = Cyclo::one(group.field())
                    .sub(&datum.lambda)
                    .scale(&crate::exactfield::qq(ell, 2));
                a[j] = c.values[&w].scale_cyclo(&denom.inv()?);
            }
            let mut a0 = ParamScalar::zero(field);
            for x in &a[1..] {
                a0 = &a0 - x;
            }
            a[0] = a0;
            let vals: Vec<ParamScalar> = (0..ell)
                .map(|i| {
                    let mut acc = ParamScalar::zero(field);
                    for (j, aj) in a.iter().enumerate() {
                        acc = &acc + &aj.scale_cyclo(&zeta.pow(-i * j as i64).unwrap());
                    }
                    acc
                })
                .collect();
            match &kappa[hp.orbit] {
                None => kappa[hp.orbit] = Some(vals),
                Some(prev) if *prev == vals => {}
                Some(_) => {
                    return Err(Error::DictionaryMismatch(format!(
                        "values differ within the orbit of hyperplane {h}"
                    )))
                }
            }
        }
        let p = Parameter {
            group: group.clone(),
            field: field.clone(),
            kappa: kappa.into_iter().map(|v| v.unwrap()).collect(),
        };
        let max_ell = group.hyperplanes().iter().map(|h| h.ell).max().unwrap_or(1);
        verify_dictionary(&p, c, 2 * max_ell)?;
        Ok(p)
    }

    /// `cbar(w) = c(w^{-1})`.
    pub fn opposite(&self) -> Result<Parameter> {
        let c = self.c_of_kappa();
        let values = c
            .values
            .keys()
            .map(|&w| (w, c.values[&self.group.inv(w)].clone()))
            .collect();
        Parameter::kappa_of_c(&self.group, &self.field, &CParameter { values })
    }
}

fn act(
    group: &ReflectionGroup,
    g: usize,
    p: &Poly<ParamScalar>,
    field: &Arc<ScalarField>,
) -> Poly<ParamScalar> {
    let proto = ParamScalar::zero(field);
    let imgs = group.x_images(g, &proto, |c| ParamScalar::from_cyclo(field, c).unwrap());
    p.compose(&imgs)
}

fn alpha_poly(group: &ReflectionGroup, h: usize, field: &Arc<ScalarField>) -> Poly<ParamScalar> {
    let proto = ParamScalar::zero(field);
    let n = group.dim();
    Poly::from_terms(
        n,
        &proto,
        group.hyperplanes()[h]
            .alpha
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut e = vec![0; n];
                e[k] = 1;
                (e, ParamScalar::from_cyclo(field, a).unwrap())
            }),
    )
}

fn all_monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in 0..=deg {
        for mut rest in all_monomials(n - 1, deg - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

/// Compares the Dunkl operators built from `kappa` and from `c` on all
/// monomials up to `max_degree`.
fn verify_dictionary(p: &Parameter, c: &CParameter, max_degree: u32) -> Result<()> {
    let group = &p.group;
    let field = &p.field;
    let n = group.dim();
    let proto = ParamScalar::zero(field);
    let alphas: Vec<Poly<ParamScalar>> = (0..group.hyperplanes().len())
        .map(|h| alpha_poly(group, h, field))
        .collect();
    for e in all_monomials(n, max_degree) {
        let mono = Poly::monomial(e.clone(), proto.one_like());
        for j in 0..n {
            let mut lhs = Poly::zero(n, &proto);
            for (h, hp) in group.hyperplanes().iter().enumerate() {
                if hp.alpha[j].is_zero() {
                    continue;
                }
                let zeta = Cyclo::root_of_unity(group.field(), hp.ell, 1)?;
                let mut inner = Poly::zero(n, &proto);
                let images: Vec<Poly<ParamScalar>> = hp
                    .stabilizer
                    .iter()
                    .map(|&w| act(group, w, &mono, field))
                    .collect();
                for i in 0..hp.ell as i64 {
                    let k = p.kappa_h(h, i).checked_sub(p.kappa_h(h, 0))?;
                    if k.is_zero() {
                        continue;
                    }
                    for (jj, img) in images.iter().enumerate() {
                        let coef = k.scale_cyclo(&zeta.pow(i * jj as i64)?);
                        inner = inner.add(&img.scale(&coef));
                    }
                }
                let scaled = inner.scale(&ParamScalar::from_cyclo(field, &hp.alpha[j])?);
                lhs = lhs.add(
                    &scaled
                        .exact_div(&alphas[h])
                        .ok_or_else(|| Error::Internal("inexact division".into()))?,
                );
            }
            let mut rhs = Poly::zero(n, &proto);
            for r in group.reflections() {
                let hp = &group.hyperplanes()[r.hyperplane];
                if hp.alpha[j].is_zero() {
                    continue;
                }
                let diff = act(group, r.element, &mono, field).sub(&mono);
                let one_minus = Cyclo::one(group.field()).sub(&r.lambda);
                let coef = c.values[&r.element]
                    .scale_cyclo(&one_minus.inv()?.scale(&crate::exactfield::q(2)))
                    .scale_cyclo(&hp.alpha[j]);
                let t = diff.scale(&coef);
                rhs = rhs.add(
                    &t.exact_div(&alphas[r.hyperplane])
                        .ok_or_else(|| Error::Internal("inexact division".into()))?,
                );
            }
            if lhs != rhs {
                return Err(Error::DictionaryMismatch(format!(
                    "Dunkl operators disagree on monomial {e:?} in direction {}",
                    j + 1
                )));
            }
        }
    }
    Ok(())
}
