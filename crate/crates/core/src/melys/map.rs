use std::collections::BTreeMap;

use super::rep::{annihilator, linear_form, LinearRep, RepReflection};
use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, ParamScalar, Poly};
use crate::refgroup::CParameter;

/// A polynomial map `phi: k -> h` commuting with the group, stored as the
/// pullbacks `phi^*(x_i)` of the target coordinates.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    source: LinearRep,
    target: LinearRep,
    components: Vec<Poly<Cyclo>>,
}

/// A reflection `(w, Z)` of the target along which the melys condition fails.
#[derive(Clone, Debug, PartialEq)]
pub struct MelysWitness {
    pub element: usize,
    pub alpha: Vec<Cyclo>,
    /// `phi^*(alpha_Z)`.
    pub pullback: Poly<Cyclo>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MelysReport {
    pub holds: bool,
    pub witness: Option<MelysWitness>,
}

impl EquivariantMap {
    pub fn new(
        source: &LinearRep,
        target: &LinearRep,
        components: Vec<Poly<Cyclo>>,
    ) -> Result<EquivariantMap> {
        if *source.group() != *target.group() {
            return Err(Error::InvalidInput(
                "source and target carry different groups".into(),
            ));
        }
        if components.len() != target.dim() {
            return Err(Error::InvalidInput(format!(
                "{} components for a target of dimension {}",
                components.len(),
                target.dim()
            )));
        }
        if components.iter().any(|p| p.nvars() != source.dim()) {
            return Err(Error::InvalidInput(format!(
                "components must be polynomials in {} variables",
                source.dim()
            )));
        }
        let field = source.group().field();
        let components = components
            .into_iter()
            .map(|p| p.map_coeffs(&Cyclo::zero(field), |c| c.embed(field)))
            .collect();
        let map = EquivariantMap {
            source: source.clone(),
            target: target.clone(),
            components,
        };
        map.check_equivariant()?;
        Ok(map)
    }

    pub fn identity(rep: &LinearRep) -> EquivariantMap {
        let proto = rep.proto();
        let components = (0..rep.dim())
            .map(|i| Poly::var(i, rep.dim(), &proto))
            .collect();
        EquivariantMap {
            source: rep.clone(),
            target: rep.clone(),
            components,
        }
    }

    fn check_equivariant(&self) -> Result<()> {
        for &g in self.source.group().generators() {
            let d = self.target.dual_matrix(g);
            for i in 0..self.target.dim() {
                let lhs = self.pullback(&linear_form(d.row(i), &self.target.proto()));
                let rhs = self.source.act_poly(g, &self.components[i]);
                if lhs != rhs {
                    return Err(Error::NotEquivariant(format!(
                        "component {} under generator {g}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &LinearRep {
        &self.source
    }

    pub fn target(&self) -> &LinearRep {
        &self.target
    }

    pub fn components(&self) -> &[Poly<Cyclo>] {
        &self.components
    }

    /// `p o phi` for a polynomial `p` on the target.
    pub fn pullback(&self, p: &Poly<Cyclo>) -> Poly<Cyclo> {
        p.compose(&self.components)
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &EquivariantMap) -> Result<EquivariantMap> {
        if inner.target.dim() != self.source.dim() {
            return Err(Error::InvalidInput("dimensions do not match".into()));
        }
        Ok(EquivariantMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|p| inner.pullback(p)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    /// Common degree when every nonzero component is homogeneous of it.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for p in self.components.iter().filter(|p| !p.is_zero()) {
            if !p.is_homogeneous() {
                return None;
            }
            let d = p.total_degree()?;
            if deg.is_some_and(|e| e != d) {
                return None;
            }
            deg = Some(d);
        }
        deg
    }
}

/// `c(w)` for a reflection; elements without a value count as zero.
fn c_value<'a>(c: &'a CParameter, w: usize) -> Option<&'a ParamScalar> {
    c.values.get(&w).filter(|v| !v.is_zero())
}

fn check_c(c: &CParameter, target: &LinearRep) -> Result<Vec<RepReflection>> {
    let refl = target.reflections();
    for &w in c.values.keys() {
        if !refl.iter().any(|r| r.element == w) {
            return Err(Error::InvalidInput(format!(
                "parameter value on element {w}, which is not a reflection of the target"
            )));
        }
    }
    Ok(refl)
}

/// `(r, lambda)` with `g = lambda beta^r`, if such exist.
pub(crate) fn power_of_linear(g: &Poly<Cyclo>, beta: &Poly<Cyclo>) -> Option<(u32, Cyclo)> {
    let r = g.total_degree()?;
    let q = g.exact_div(&beta.pow(r))?;
    q.is_constant().then(|| (r, q.constant_coeff()))
}

/// Largest `m` with `beta^m | g`, for nonzero `g`.
pub(crate) fn order_of_vanishing(g: &Poly<Cyclo>, beta: &Poly<Cyclo>) -> u32 {
    let mut m = 0;
    let mut cur = g.clone();
    while let Some(q) = cur.exact_div(beta) {
        cur = q;
        m += 1;
    }
    m
}

impl EquivariantMap {
    /// Whether `phi^{-1}(Z)` lies in `k^w` for the reflection `(w, Z)`.
    ///
    /// The ideal of `phi^{-1}(Z)` is principal, generated by `g =
    /// phi^*(alpha_Z)`, so the containment holds iff `k^w = k`, or `g` is a
    /// nonzero constant, or `k^w` is a hyperplane `ker(beta)` and `g` is a
    /// multiple of a power of `beta`.
    fn condition_at(&self, r: &RepReflection) -> Option<MelysWitness> {
        let proto = self.source.proto();
        let g = self.pullback(&linear_form(&r.alpha, &self.target.proto()));
        let fixed = self.source.fixed_space(r.element);
        let ann = annihilator(&fixed, self.source.dim(), &proto);
        let fail = |reason: &str| {
            Some(MelysWitness {
                element: r.element,
                alpha: r.alpha.clone(),
                pullback: g.clone(),
                reason: reason.to_string(),
            })
        };
        if ann.is_empty() || (g.is_constant() && !g.is_zero()) {
            return None;
        }
        if g.is_zero() {
            return fail("the preimage is everything but w moves the source");
        }
        if ann.len() > 1 {
            return fail("the fixed space of w has codimension above one");
        }
        match power_of_linear(&g, &linear_form(&ann[0], &proto)) {
            Some(_) => None,
            None => fail("the preimage leaves the fixed hyperplane of w"),
        }
    }

    pub fn is_melys(&self, c: &CParameter) -> Result<MelysReport> {
        for r in check_c(c, &self.target)? {
            if c_value(c, r.element).is_none() {
                continue;
            }
            if let Some(w) = self.condition_at(&r) {
                return Ok(MelysReport {
                    holds: false,
                    witness: Some(w),
                });
            }
        }
        Ok(MelysReport {
            holds: true,
            witness: None,
        })
    }

    /// Melys, and no `w` with `c(w) != 0` and `phi^{-1}(Z)` nonempty fixes
    /// the (connected) source.
    pub fn is_strongly_melys(&self, c: &CParameter) -> Result<MelysReport> {
        let report = self.is_melys(c)?;
        if !report.holds {
            return Ok(report);
        }
        for r in check_c(c, &self.target)? {
            if c_value(c, r.element).is_none() {
                continue;
            }
            let g = self.pullback(&linear_form(&r.alpha, &self.target.proto()));
            let meets = g.is_zero() || !g.is_constant();
            if meets && self.source.fixed_space(r.element).len() == self.source.dim() {
                return Ok(MelysReport {
                    holds: false,
                    witness: Some(MelysWitness {
                        element: r.element,
                        alpha: r.alpha.clone(),
                        pullback: g,
                        reason: "w fixes the source, which meets the preimage".into(),
                    }),
                });
            }
        }
        Ok(report)
    }

    /// `phi^* c` on the reflections of the source: `val_Z(phi^* f_{Z'}) c(w, Z')`
    /// when `Z` is a component of `phi^{-1}(Z')`, and zero otherwise.
    pub fn pullback_parameter(&self, c: &CParameter) -> Result<CParameter> {
        let report = self.is_melys(c)?;
        if let Some(w) = report.witness {
            return Err(Error::NotMelys(format!(
                "reflection {}: {}",
                w.element, w.reason
            )));
        }
        let target_refl = check_c(c, &self.target)?;
        let proto = self.source.proto();
        let mut values = BTreeMap::new();
        let zero = c.values.values().next().map(|v| ParamScalar::zero(v.ctx()));
        for r in self.source.reflections() {
            let mut value = zero.clone();
            if let (Some(cv), Some(t)) = (
                c_value(c, r.element),
                target_refl.iter().find(|t| t.element == r.element),
            ) {
                let g = self.pullback(&linear_form(&t.alpha, &self.target.proto()));
                if !g.is_constant() {
                    let v = order_of_vanishing(&g, &linear_form(&r.alpha, &proto));
                    value = Some(cv.checked_mul(&ParamScalar::from_int(cv.ctx(), v as i64))?);
                }
            }
            if let Some(v) = value {
                values.insert(r.element, v);
            }
        }
        Ok(CParameter { values })
    }
}
