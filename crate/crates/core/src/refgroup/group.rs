use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{Cyclo, CycloField, Matrix, Poly};

use num_integer::Integer;

pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// A reflecting hyperplane `H = ker(alpha)` with its pointwise stabilizer.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    /// Defining covector in the `x` coordinates, first nonzero entry 1.
    pub alpha: Vec<Cyclo>,
    /// Spans the nontrivial eigenline of the stabilizer, first nonzero entry 1.
    pub coroot: Vec<Cyclo>,
    /// Order of the pointwise stabilizer `W_H`.
    pub ell: u32,
    /// The element of `W_H` acting on the coroot by `zeta_ell`.
    pub generator: usize,
    /// `W_H = {generator^j : j < ell}` listed by `j`.
    pub stabilizer: Vec<usize>,
    pub orbit: usize,
}

/// One reflection `w`, its hyperplane and eigenvalue data.
#[derive(Clone, Debug)]
pub struct ReflectionDatum {
    pub element: usize,
    pub hyperplane: usize,
    /// Eigenvalue of `w` on `alpha_H`.
    pub lambda: Cyclo,
    /// Determinant of `w` on `h`.
    pub det: Cyclo,
}

/// A finite subgroup of `GL(h)` generated by the given matrices, with the
/// full list of elements in breadth-first order from the identity.
#[derive(Debug)]
pub struct ReflectionGroup {
    dim: usize,
    field: Arc<CycloField>,
    elements: Vec<Matrix<Cyclo>>,
    dual: Vec<Matrix<Cyclo>>,
    index: HashMap<Matrix<Cyclo>, usize>,
    mult: Option<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    hyperplanes: Vec<Hyperplane>,
    orbits: Vec<Vec<usize>>,
    reflections: Vec<ReflectionDatum>,
    abelian: bool,
}

fn closure(
    gens: &[Matrix<Cyclo>],
    dim: usize,
    field: &Arc<CycloField>,
    cap: usize,
) -> Result<Vec<Matrix<Cyclo>>> {
    let id = Matrix::identity(dim, &Cyclo::zero(field));
    let mut elements = vec![id.clone()];
    let mut seen: HashMap<Matrix<Cyclo>, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for g in gens {
            let p = e.mul(g);
            if !seen.contains_key(&p) {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                seen.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
    }
    Ok(elements)
}

fn normalize_first(v: &[Cyclo]) -> Option<Vec<Cyclo>> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(v.iter().map(|c| c.mul(&inv)).collect())
}

impl ReflectionGroup {
    /// `Z/l_1 x ... x Z/l_r` acting diagonally on `A^r`.
    pub fn cyclic_product(orders: &[u32]) -> Result<ReflectionGroup> {
        if orders.is_empty() || orders.iter().any(|&l| l == 0) {
            return Err(Error::InvalidInput("orders must be positive".into()));
        }
        let n = orders.iter().fold(1u32, |a, &b| a.lcm(&b));
        let field = CycloField::new(n);
        let r = orders.len();
        let proto = Cyclo::zero(&field);
        let gens: Vec<Matrix<Cyclo>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 1)
            .map(|(i, &l)| {
                let mut m = Matrix::identity(r, &proto);
                m[(i, i)] = Cyclo::root_of_unity(&field, l, 1).unwrap();
                m
            })
            .collect();
        Self::build(gens, r, &field, DEFAULT_SIZE_CAP)
    }

    /// `S_n` permuting the coordinates of `A^n`.
    pub fn symmetric(n: usize) -> Result<ReflectionGroup> {
        if n < 1 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let field = CycloField::new(1);
        let proto = Cyclo::zero(&field);
        let gens = (0..n.saturating_sub(1))
            .map(|i| {
                let mut m = Matrix::identity(n, &proto);
                m[(i, i)] = proto.clone();
                m[(i + 1, i + 1)] = proto.clone();
                m[(i, i + 1)] = Cyclo::one(&field);
                m[(i + 1, i)] = Cyclo::one(&field);
                m
            })
            .collect();
        Self::build(gens, n, &field, DEFAULT_SIZE_CAP)
    }

    /// Group generated by explicit matrices over `Q(zeta_N)`.
    pub fn from_matrices(gens: Vec<Matrix<Cyclo>>, size_cap: usize) -> Result<ReflectionGroup> {
        let Some(first) = gens.first() else {
            return Err(Error::InvalidInput(
                "at least one generator is required".into(),
            ));
        };
        let dim = first.rows();
        let mut n = 1u32;
        for g in &gens {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::InvalidInput(
                    "generators must be square of equal size".into(),
                ));
            }
            for i in 0..dim {
                for j in 0..dim {
                    n = n.lcm(&g[(i, j)].conductor());
                }
            }
        }
        let field = CycloField::new(n);
        let gens: Vec<Matrix<Cyclo>> = gens
            .iter()
            .map(|g| g.map_into(&Cyclo::zero(&field), |c| c.embed(&field)))
            .collect();
        for g in &gens {
            if g.determinant()?.is_zero() {
                return Err(Error::NotInvertible);
            }
        }
        Self::build(gens, dim, &field, size_cap)
    }

    fn build(
        gens: Vec<Matrix<Cyclo>>,
        dim: usize,
        field: &Arc<CycloField>,
        cap: usize,
    ) -> Result<ReflectionGroup> {
        let elements = closure(&gens, dim, field, cap)?;
        // enlarge the conductor so that every element order has its roots of unity
        let index: HashMap<Matrix<Cyclo>, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let id = 0usize;
        let mut exponent = 1u32;
        for e in &elements {
            let mut p = e.clone();
            let mut k = 1u32;
            while index[&p] != id {
                p = p.mul(e);
                k += 1;
            }
            exponent = exponent.lcm(&k);
        }
        let n = field.conductor().lcm(&exponent);
        if n != field.conductor() {
            let big = CycloField::new(n);
            let gens = gens
                .iter()
                .map(|g| g.map_into(&Cyclo::zero(&big), |c| c.embed(&big)))
                .collect();
            return Self::build(gens, dim, &big, cap);
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let mut group = ReflectionGroup {
            dim,
            field: field.clone(),
            dual: Vec::new(),
            inverse: Vec::new(),
            mult: None,
            index,
            elements,
            generators,
            hyperplanes: Vec::new(),
            orbits: Vec::new(),
            reflections: Vec::new(),
            abelian: false,
        };
        group.dual = group
            .elements
            .iter()
            .map(|m| m.inverse())
            .collect::<Result<Vec<_>>>()?;
        group.inverse = group.dual.iter().map(|m| group.index[m]).collect();
        if group.order() <= 512 {
            let n = group.order();
            let mut table = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = group.lookup(&group.elements[a].mul(&group.elements[b]));
                }
            }
            group.mult = Some(table);
        }
        group.abelian = group.generators.iter().all(|&a| {
            group
                .generators
                .iter()
                .all(|&b| group.mul(a, b) == group.mul(b, a))
        });
        group.find_reflections()?;
        Ok(group)
    }

    fn lookup(&self, m: &Matrix<Cyclo>) -> usize {
        self.index[m]
    }

    fn find_reflections(&mut self) -> Result<()> {
        let proto = Cyclo::zero(&self.field);
        let id = Matrix::identity(self.dim, &proto);
        let mut hyper_index: HashMap<Vec<Cyclo>, usize> = HashMap::new();
        let mut members: Vec<Vec<(usize, Cyclo)>> = Vec::new();
        for (w, m) in self.elements.iter().enumerate().skip(1) {
            let d = m.sub(&id);
            if d.rank() != 1 {
                continue;
            }
            let row = (0..self.dim)
                .map(|i| d.row(i).to_vec())
                .find(|r| r.iter().any(|c| !c.is_zero()));
            let alpha = normalize_first(&row.unwrap()).unwrap();
            let col = (0..self.dim)
                .map(|j| d.column(j))
                .find(|c| c.iter().any(|x| !x.is_zero()));
            let coroot = normalize_first(&col.unwrap()).unwrap();
            let image = m.apply(&coroot);
            let k = coroot.iter().position(|c| !c.is_zero()).unwrap();
            let det = image[k].div(&coroot[k])?;
            let h = match hyper_index.get(&alpha) {
                Some(&h) => h,
                None => {
                    let h = members.len();
                    hyper_index.insert(alpha.clone(), h);
                    members.push(Vec::new());
                    self.hyperplanes.push(Hyperplane {
                        alpha: alpha.clone(),
                        coroot: coroot.clone(),
                        ell: 0,
                        generator: 0,
                        stabilizer: Vec::new(),
                        orbit: 0,
                    });
                    h
                }
            };
            members[h].push((w, det.clone()));
            self.reflections.push(ReflectionDatum {
                element: w,
                hyperplane: h,
                lambda: det.inv()?,
                det,
            });
        }
        for (h, mem) in members.iter().enumerate() {
            let ell = mem.len() as u32 + 1;
            let zeta = Cyclo::root_of_unity(&self.field, ell, 1)?;
            let gen = mem
                .iter()
                .find(|(_, d)| *d == zeta)
                .map(|(w, _)| *w)
                .ok_or_else(|| Error::Internal("hyperplane stabilizer is not cyclic".into()))?;
            let mut stab = vec![0usize];
            for _ in 1..ell {
                stab.push(self.mul(*stab.last().unwrap(), gen));
            }
            let hp = &mut self.hyperplanes[h];
            hp.ell = ell;
            hp.generator = gen;
            hp.stabilizer = stab;
        }
        // orbits of W on hyperplanes
        let nh = self.hyperplanes.len();
        let mut orbit_of = vec![usize::MAX; nh];
        for h in 0..nh {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let o = self.orbits.len();
            let mut list = Vec::new();
            for g in 0..self.order() {
                let moved = self.move_covector(g, &self.hyperplanes[h].alpha);
                let key = normalize_first(&moved).unwrap();
                let t = hyper_index[&key];
                if orbit_of[t] == usize::MAX {
                    orbit_of[t] = o;
                    list.push(t);
                }
            }
            list.sort();
            self.orbits.push(list);
        }
        for (h, &o) in orbit_of.iter().enumerate() {
            self.hyperplanes[h].orbit = o;
        }
        Ok(())
    }

    /// `g . alpha` for a covector written in the `x` coordinates.
    pub fn move_covector(&self, g: usize, alpha: &[Cyclo]) -> Vec<Cyclo> {
        // (g.alpha)_k = sum_i alpha_i (M_g^{-1})_{ik}
        let d = &self.dual[g];
        (0..self.dim)
            .map(|k| {
                let mut acc = Cyclo::zero(&self.field);
                for (i, a) in alpha.iter().enumerate() {
                    if !a.is_zero() {
                        acc = acc.add(&a.mul(&d[(i, k)]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Matrix of `g` on `h`: column `j` is `g . y_j`.
    pub fn matrix(&self, g: usize) -> &Matrix<Cyclo> {
        &self.elements[g]
    }

    /// Matrix of `g` on `h*`: row `i` gives `g . x_i` in the `x` basis.
    pub fn dual_matrix(&self, g: usize) -> &Matrix<Cyclo> {
        &self.dual[g]
    }

    pub fn element_index(&self, m: &Matrix<Cyclo>) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mult {
            Some(t) => t[a * self.order() + b],
            None => self.lookup(&self.elements[a].mul(&self.elements[b])),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn reflections(&self) -> &[ReflectionDatum] {
        &self.reflections
    }

    pub fn reflection_datum(&self, w: usize) -> Option<&ReflectionDatum> {
        self.reflections.iter().find(|r| r.element == w)
    }

    /// `ell` of the hyperplanes in orbit `o`.
    pub fn orbit_ell(&self, o: usize) -> u32 {
        self.hyperplanes[self.orbits[o][0]].ell
    }

    pub fn det(&self, g: usize) -> Cyclo {
        self.elements[g].determinant().expect("square")
    }

    pub fn element_order(&self, g: usize) -> u32 {
        let mut p = g;
        let mut k = 1;
        while p != 0 {
            p = self.mul(p, g);
            k += 1;
        }
        k
    }

    /// Whether every element satisfies `M^{-1} = conj(M)^T`.
    pub fn is_unitary(&self) -> bool {
        self.elements
            .iter()
            .zip(&self.dual)
            .all(|(m, d)| m.transpose().map(|c| c.conj()) == *d)
    }

    /// `sum_i alpha_i coroot_i`.
    pub fn alpha_coroot(&self, h: usize) -> Cyclo {
        let hp = &self.hyperplanes[h];
        let mut acc = Cyclo::zero(&self.field);
        for (a, c) in hp.alpha.iter().zip(&hp.coroot) {
            acc = acc.add(&a.mul(c));
        }
        acc
    }

    /// Names of the parameter slots, grouped by hyperplane orbit.
    pub fn slot_names(&self) -> Vec<Vec<String>> {
        let single = self.orbits.len() == 1;
        self.orbits
            .iter()
            .enumerate()
            .map(|(o, _)| {
                (0..self.orbit_ell(o))
                    .map(|i| {
                        if single {
                            format!("k{i}")
                        } else {
                            format!("k{o}_{i}")
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Images of the coordinate functions under `g`, as polynomials over
    /// the coefficient type produced by `embed`.
    pub fn x_images<C: crate::exactfield::Ring>(
        &self,
        g: usize,
        proto: &C,
        embed: impl Fn(&Cyclo) -> C,
    ) -> Vec<Poly<C>> {
        let d = &self.dual[g];
        (0..self.dim)
            .map(|i| {
                Poly::from_terms(
                    self.dim,
                    proto,
                    (0..self.dim).filter(|&k| !d[(i, k)].is_zero()).map(|k| {
                        let mut e = vec![0; self.dim];
                        e[k] = 1;
                        (e, embed(&d[(i, k)]))
                    }),
                )
            })
            .collect()
    }

    /// Fixed subspace `h^g` as a basis of column vectors.
    pub fn fixed_space(&self, g: usize) -> Vec<Vec<Cyclo>> {
        let id = Matrix::identity(self.dim, &Cyclo::zero(&self.field));
        self.elements[g].sub(&id).kernel()
    }
}

impl PartialEq for ReflectionGroup {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.elements == other.elements
    }
}
