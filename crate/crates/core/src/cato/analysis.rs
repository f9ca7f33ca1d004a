use std::collections::BTreeSet;
use std::sync::Arc;

use super::verma::{euler_lowest_eigenvalue, GradedModule};
use crate::chered::Cherednik;
use crate::error::Result;
use crate::exactfield::ParamScalar;
use crate::refgroup::{characters, scalar_field_for, Character, Parameter, ReflectionGroup};

/// Irreducible representations: all characters for abelian groups, otherwise
/// the explicitly supplied list.
pub fn irreducibles(
    group: &ReflectionGroup,
    explicit: Option<&[Character]>,
) -> Result<Vec<Character>> {
    match explicit {
        Some(list) => Ok(list.to_vec()),
        None => characters(group),
    }
}

/// Degree `m` vectors of the module killed by every `y`, for `1 <= m <= up_to`.
pub fn singular_vectors(
    module: &GradedModule,
    up_to: usize,
) -> Result<Vec<(usize, Vec<Vec<ParamScalar>>)>> {
    let mut out = Vec::new();
    for m in 1..=up_to.min(module.truncation()) {
        let k = module.lowering_matrix(m)?.kernel();
        if !k.is_empty() {
            out.push((m, k));
        }
    }
    Ok(out)
}

/// True when no Verma module has a singular vector in degrees `1..=n`.
pub fn is_regular_truncated(alg: &Arc<Cherednik>, irreps: &[Character], n: usize) -> Result<bool> {
    for lambda in irreps {
        let module = GradedModule::verma(alg, lambda, n)?;
        if !singular_vectors(&module, n)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimensions of the trivial isotypic component of `L(lambda)` in each degree.
pub fn simple_trivial_dims(module: &GradedModule) -> Result<Vec<usize>> {
    let triv = Character::trivial(module.algebra().group());
    (0..=module.truncation())
        .map(|m| Ok(module.gram_block(m, &triv)?.matrix.rank()))
        .collect()
}

/// Per-irrep outcome of the aspherical test.
#[derive(Clone, Debug, PartialEq)]
pub struct AsphericalWitness {
    pub lambda: String,
    pub simple_dims: Vec<usize>,
}

/// Returns a simple module with no invariants in degrees `0..=n`, if any.
pub fn aspherical_witness(
    alg: &Arc<Cherednik>,
    irreps: &[Character],
    n: usize,
) -> Result<Option<AsphericalWitness>> {
    for lambda in irreps {
        let module = GradedModule::verma(alg, lambda, n)?;
        if simple_trivial_dims(&module)?.iter().all(|&d| d == 0) {
            return Ok(Some(AsphericalWitness {
                lambda: lambda.name.clone(),
                simple_dims: module.simple_dims()?,
            }));
        }
    }
    Ok(None)
}

pub fn aspherical_test(alg: &Arc<Cherednik>, irreps: &[Character], n: usize) -> Result<bool> {
    Ok(aspherical_witness(alg, irreps, n)?.is_some())
}

/// The forms `kappa(lambda) - kappa(mu) + m`, `1 <= m <= n`, in fully
/// symbolic parameters, skipping pairs where the parameter part vanishes.
pub fn aspherical_candidates(
    group: &Arc<ReflectionGroup>,
    irreps: &[Character],
    n: usize,
) -> Result<Vec<ParamScalar>> {
    let field = scalar_field_for(group, &[])?;
    let param = Parameter::symbolic(group, &field, false)?;
    let values = irreps
        .iter()
        .map(|l| euler_lowest_eigenvalue(&param, l))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in &values {
        for b in &values {
            let diff = a.checked_sub(b)?;
            if diff.is_zero() {
                continue;
            }
            for m in 1..=n as i64 {
                let form = diff.checked_add(&ParamScalar::from_int(&field, m))?;
                if seen.insert(form.to_string()) {
                    out.push(form);
                }
            }
        }
    }
    Ok(out)
}
