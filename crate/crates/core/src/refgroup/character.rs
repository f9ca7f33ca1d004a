use std::collections::BTreeSet;

use super::group::ReflectionGroup;
use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, Matrix};

/// An irreducible representation given by matrices for every group element,
/// with a positive definite invariant Hermitian form.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub name: String,
    dim: usize,
    mats: Vec<Matrix<Cyclo>>,
    form: Matrix<Cyclo>,
}

fn conj_transpose(m: &Matrix<Cyclo>) -> Matrix<Cyclo> {
    m.transpose().map(|c| c.conj())
}

impl Character {
    /// Extends generator images to the whole group, checking the relations
    /// and irreducibility.
    pub fn from_generator_images(
        group: &ReflectionGroup,
        name: &str,
        images: &[Matrix<Cyclo>],
    ) -> Result<Character> {
        let gens = group.generators();
        if images.len() != gens.len() {
            return Err(Error::NotARepresentation(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let field = group.field().clone();
        let dim = images.first().map_or(1, |m| m.rows());
        let proto = Cyclo::zero(&field);
        let images: Vec<Matrix<Cyclo>> = images
            .iter()
            .map(|m| {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::NotARepresentation(
                        "image matrices differ in size".into(),
                    ));
                }
                if group.conductor() % conductor_of(m) != 0 {
                    return Err(Error::NotARepresentation(
                        "entries outside the group's cyclotomic field".into(),
                    ));
                }
                Ok(m.map_into(&proto, |c| c.embed(&field)))
            })
            .collect::<Result<_>>()?;
        let n = group.order();
        let mut mats: Vec<Option<Matrix<Cyclo>>> = vec![None; n];
        mats[0] = Some(Matrix::identity(dim, &proto));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let p = group.mul(e, g);
                let m = mats[e].as_ref().unwrap().mul(&images[k]);
                match &mats[p] {
                    Some(existing) => {
                        if *existing != m {
                            return Err(Error::NotARepresentation(format!(
                                "relation violated at element {p}"
                            )));
                        }
                    }
                    None => {
                        mats[p] = Some(m);
                        queue.push(p);
                    }
                }
            }
        }
        let mats: Vec<Matrix<Cyclo>> = mats
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::Internal("unreached element".into())))
            .collect::<Result<_>>()?;
        let mut form = Matrix::zeros(dim, dim, &proto);
        for m in &mats {
            form = form.add(&conj_transpose(m).mul(m));
        }
        let inv_n = Cyclo::from_rational(&field, crate::exactfield::qq(1, n as i64));
        let form = form.scale(&inv_n);
        let ch = Character {
            name: name.to_string(),
            dim,
            mats,
            form,
        };
        let norm = ch.inner(&ch);
        if !norm.is_one() {
            return Err(Error::NotARepresentation(format!(
                "`{name}` is not irreducible (<chi, chi> = {norm})"
            )));
        }
        Ok(ch)
    }

    pub fn trivial(group: &ReflectionGroup) -> Character {
        let f = group.field();
        let one = Matrix::identity(1, &Cyclo::zero(f));
        let images = vec![one; group.generators().len()];
        Character::from_generator_images(group, "triv", &images).expect("trivial character")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix<Cyclo> {
        &self.mats[g]
    }

    pub fn value(&self, g: usize) -> Cyclo {
        self.mats[g].trace()
    }

    pub fn values(&self) -> Vec<Cyclo> {
        (0..self.mats.len()).map(|g| self.value(g)).collect()
    }

    /// Invariant Hermitian form: `(u, v) = v^* F u`.
    pub fn form(&self) -> &Matrix<Cyclo> {
        &self.form
    }

    /// `(1/|W|) sum chi(g) conj(psi(g))`.
    pub fn inner(&self, other: &Character) -> Cyclo {
        let n = self.mats.len();
        let f = self.form.proto().field().clone();
        let mut acc = Cyclo::zero(&f);
        for g in 0..n {
            acc = acc.add(&self.value(g).mul(&other.value(g).conj()));
        }
        acc.scale(&crate::exactfield::qq(1, n as i64))
    }

    /// `tr(e_{H,i} | lambda)` for hyperplane `h`.
    pub fn idempotent_trace(&self, group: &ReflectionGroup, h: usize, i: i64) -> Cyclo {
        let hp = &group.hyperplanes()[h];
        let f = group.field();
        let zeta = Cyclo::root_of_unity(f, hp.ell, 1).unwrap();
        let mut acc = Cyclo::zero(f);
        for (j, &w) in hp.stabilizer.iter().enumerate() {
            let c = zeta.pow(i * j as i64).unwrap();
            acc = acc.add(&c.mul(&self.value(w)));
        }
        acc.scale(&crate::exactfield::qq(1, hp.ell as i64))
    }
}

pub(crate) fn conductor_of(m: &Matrix<Cyclo>) -> u32 {
    let mut n = 1u32;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            n = num_integer::lcm(n, m[(i, j)].conductor());
        }
    }
    n
}

/// All characters of an abelian group, trivial first, ordered by the
/// exponents `a_i` in `chi(g_i) = zeta_{o_i}^{a_i}`.
pub fn characters(group: &ReflectionGroup) -> Result<Vec<Character>> {
    if !group.is_abelian() {
        return Err(Error::NeedExplicitIrreps);
    }
    let gens = group.generators();
    let orders: Vec<u32> = gens.iter().map(|&g| group.element_order(g)).collect();
    let f = group.field();
    let proto = Cyclo::zero(f);
    let mut out: Vec<Character> = Vec::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let total: usize = orders.iter().map(|&o| o as usize).product();
    for idx in 0..total {
        let mut rem = idx;
        let mut a = vec![0u32; orders.len()];
        for k in (0..orders.len()).rev() {
            a[k] = (rem % orders[k] as usize) as u32;
            rem /= orders[k] as usize;
        }
        let images: Vec<Matrix<Cyclo>> = a
            .iter()
            .zip(&orders)
            .map(|(&ai, &o)| {
                Matrix::from_rows(
                    vec![vec![Cyclo::root_of_unity(f, o, ai as i64).unwrap()]],
                    &proto,
                )
            })
            .collect();
        let name = if a.iter().all(|&x| x == 0) {
            "triv".to_string()
        } else {
            format!(
                "chi{}",
                a.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("_")
            )
        };
        let Ok(ch) = Character::from_generator_images(group, &name, &images) else {
            continue;
        };
        let key: Vec<String> = ch.values().iter().map(|v| v.to_string()).collect();
        if seen.insert(key) {
            out.push(ch);
        }
    }
    if out.len() != group.order() {
        return Err(Error::Internal(format!(
            "found {} characters for a group of order {}",
            out.len(),
            group.order()
        )));
    }
    Ok(out)
}
