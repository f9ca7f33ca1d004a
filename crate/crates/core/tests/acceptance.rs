//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Every comparison is exact. Runtime budgets are wall-clock limits on the
//! criterion as a whole.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cherednik::bfun::{
    bfunction_polynomial, jacquet_line, rational_line_kappa, BFunctionOptions, BFunctionResult,
    FreeLineModule, LineModule, LineOModule,
};
use cherednik::cato::{
    aspherical_candidates, aspherical_test, euler_lowest_eigenvalue, irreducibles,
    is_regular_truncated, GradedModule,
};
use cherednik::chered::{Cherednik, Dunkl, PbwElement, PbwMonomial, VecPoly};
use cherednik::exactfield::{q, qq, Cyclo, Matrix, Mono, ParamScalar, Poly, ScalarField, Q};
use cherednik::melys::{
    classify_irreducible_melys, factor_linear_melys, EquivariantMap, IrreducibleClass, LinearRep,
};
use cherednik::refgroup::{
    scalar_field_for, CParameter, Character, Parameter, ReflectionGroup, DEFAULT_SIZE_CAP,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), Box<dyn std::error::Error>>;

const BUDGET_CYCLIC_BFUNCTIONS: Duration = Duration::from_secs(10);
const BUDGET_CLASSICAL: Duration = Duration::from_secs(1);
const BUDGET_CONFLUENCE: Duration = Duration::from_secs(30);
const BUDGET_ASPHERICAL: Duration = Duration::from_secs(60);
const BUDGET_LOCALIZATION: Duration = Duration::from_secs(30);

const ASSOCIATIVITY_TRIPLES: usize = 100;
const DUNKL_POLYS: usize = 6;
const DUNKL_MAX_DEGREE: u32 = 6;
const GRAM_DEGREE: usize = 6;
const REGULAR_TRUNCATION: usize = 12;
const LINE_WINDOW: i64 = 24;
const JACQUET_TRUNCATION: usize = 8;
const SPECIALIZATIONS: std::ops::RangeInclusive<i64> = 0..=5;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn within(start: Instant, budget: Duration) -> Check {
    let t = start.elapsed();
    ensure!(
        t <= budget,
        "took {:.2}s, budget {:.2}s",
        t.as_secs_f64(),
        budget.as_secs_f64()
    );
    Ok(())
}

fn cyclic(orders: &[u32]) -> Arc<ReflectionGroup> {
    Arc::new(ReflectionGroup::cyclic_product(orders).unwrap())
}

fn matrix_group(conductor: u32, gens: &[[[(i64, i64); 2]; 2]]) -> Arc<ReflectionGroup> {
    // Entries are `c * z^k` given as `(c, k)` with `z` a primitive root.
    let f = cherednik::exactfield::CycloField::new(conductor);
    let proto = Cyclo::zero(&f);
    let mats = gens
        .iter()
        .map(|m| {
            let rows = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&(c, k)| {
                            Cyclo::root_of_unity(&f, conductor, k)
                                .unwrap()
                                .mul(&Cyclo::from_int(&f, c))
                        })
                        .collect()
                })
                .collect();
            Matrix::from_rows(rows, &proto)
        })
        .collect();
    Arc::new(ReflectionGroup::from_matrices(mats, DEFAULT_SIZE_CAP).unwrap())
}

fn symbolic(group: &Arc<ReflectionGroup>, extra: &[&str], normalize: bool) -> Parameter {
    let field = scalar_field_for(group, extra).unwrap();
    Parameter::symbolic(group, &field, normalize).unwrap()
}

fn rational_param(group: &Arc<ReflectionGroup>, values: &[Q]) -> Parameter {
    let field = scalar_field_for(group, &[]).unwrap();
    let v = values
        .iter()
        .map(|x| ParamScalar::from_rational(&field, x.clone()))
        .collect();
    let orbits = if group.hyperplanes().is_empty() {
        vec![]
    } else {
        vec![v]
    };
    Parameter::from_values(group, &field, orbits).unwrap()
}

fn int(f: &Arc<ScalarField>, n: i64) -> ParamScalar {
    ParamScalar::from_int(f, n)
}

fn rat(f: &Arc<ScalarField>, n: i64, d: i64) -> ParamScalar {
    ParamScalar::from_rational(f, qq(n, d))
}

fn monomial_poly(n: usize, e: Mono, c: ParamScalar) -> Poly<ParamScalar> {
    let proto = ParamScalar::zero(c.ctx());
    Poly::from_terms(n, &proto, [(e, c)])
}

/// The coefficient `c` with `p = c x^m`, for `p` in one variable.
fn single_coefficient(p: &Poly<ParamScalar>, m: u32) -> Result<ParamScalar, String> {
    match p.terms() {
        [] => Ok(ParamScalar::zero(p.coeff_zero().ctx())),
        [(e, c)] if e[0] == m => Ok(c.clone()),
        _ => Err(format!("expected a multiple of x^{m}, got {p:?}")),
    }
}

/// `lambda(e_{H,i})` for a one-dimensional character: `(1/ell) sum_t zeta^{it} lambda(s^t)`.
fn idempotent_value(group: &ReflectionGroup, lambda: &Character, h: usize, i: i64) -> Cyclo {
    let hp = &group.hyperplanes()[h];
    let f = group.field();
    let zeta = Cyclo::root_of_unity(f, hp.ell, 1).unwrap();
    let mut acc = Cyclo::zero(f);
    for (t, &w) in hp.stabilizer.iter().enumerate() {
        acc = acc.add(&zeta.pow(i * t as i64).unwrap().mul(&lambda.value(w)));
    }
    acc.scale(&qq(1, hp.ell as i64))
}

/// `-sum_H ell_H sum_i kappa_{H,i} tr(e_{H,i} | lambda) / dim lambda`, from
/// the character table.
fn lowest_eu_oracle(param: &Parameter, lambda: &Character) -> ParamScalar {
    let group = param.group();
    let f = param.field();
    let mut acc = ParamScalar::zero(f);
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        for i in 0..hp.ell as i64 {
            let zeta = Cyclo::root_of_unity(group.field(), hp.ell, 1).unwrap();
            let mut tr = Cyclo::zero(group.field());
            for (t, &w) in hp.stabilizer.iter().enumerate() {
                tr = tr.add(
                    &zeta
                        .pow(i * t as i64)
                        .unwrap()
                        .mul(&lambda.matrix(w).trace()),
                );
            }
            let tr = tr.scale(&qq(1, (hp.ell as usize * lambda.dim()) as i64));
            let term = param.kappa_h(h, i).scale_cyclo(&tr);
            acc = &acc - &(&term * &int(f, hp.ell as i64));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// b-functions

fn solve(param: &Parameter, f: &Poly<ParamScalar>) -> Result<BFunctionResult, cherednik::Error> {
    let alg = Cherednik::new(param)?;
    bfunction_polynomial(&alg, f, &BFunctionOptions::default())
}

fn x_power(field: &Arc<ScalarField>, d: u32) -> Poly<ParamScalar> {
    monomial_poly(1, vec![d], ParamScalar::one(field))
}

fn cyclic_cases() -> Vec<(u32, Parameter)> {
    (2..=4)
        .map(|ell| (ell, symbolic(&cyclic(&[ell]), &["s"], true)))
        .collect()
}

fn criterion_cyclic_bfunctions() -> Check {
    let start = Instant::now();
    for (ell, param) in cyclic_cases() {
        let f = param.field();
        let r = solve(&param, &x_power(f, ell))?;
        let s = ParamScalar::symbol(f, "s")?;
        let mut expected = ParamScalar::one(f);
        for j in 1..=ell as i64 {
            let factor = &(&s + &rat(f, j, ell as i64)) + param.kappa(0, j);
            expected = &expected * &factor;
        }
        ensure!(
            r.b == expected,
            "ell = {ell}: got {}, expected {expected}",
            r.factors.display()
        );
    }
    within(start, BUDGET_CYCLIC_BFUNCTIONS)
}

/// `d^d b(s)` from expanding `d^d/dx^d x^{d(s+1)} = prod_{i<d} (d(s+1) - i) x^{ds}`.
fn classical_oracle(f: &Arc<ScalarField>, d: i64) -> ParamScalar {
    let s = ParamScalar::symbol(f, "s").unwrap();
    let exponent = &(&s + &int(f, 1)) * &int(f, d);
    let mut acc = ParamScalar::one(f);
    for i in 0..d {
        acc = &acc * &(&exponent - &int(f, i));
    }
    acc
}

fn criterion_classical() -> Check {
    let start = Instant::now();
    let group = cyclic(&[1]);
    let param = symbolic(&group, &["s"], true);
    let f = param.field();
    let alg = Cherednik::new(&param)?;
    for (d, text) in [(1i64, "(s + 1)"), (2, "(s + 1)*(s + 1/2)")] {
        let r = solve(&param, &x_power(f, d as u32))?;
        ensure!(
            r.factors.display() == text,
            "f = x^{d}: got {}",
            r.factors.display()
        );
        let scale = int(f, d.pow(d as u32));
        ensure!(
            &r.b * &scale == classical_oracle(f, d),
            "f = x^{d}: b does not match the expansion of d^{d}"
        );
        let expected_op = PbwElement::y(&alg, 0).pow(d as u32).scale(&scale.inv()?);
        ensure!(
            r.operator.checked_sub(&expected_op)?.is_zero(),
            "f = x^{d}: operator {}",
            r.operator
        );
    }
    within(start, BUDGET_CLASSICAL)
}

/// Applies `x^a g y^b` monomials one generator at a time.
fn apply_literally(
    dunkl: &Dunkl,
    op: &PbwElement,
    v: &VecPoly,
) -> Result<VecPoly, cherednik::Error> {
    let mut out = dunkl.zero();
    for (m, c) in op.terms() {
        let mut w = v.clone();
        for (j, &e) in m.y.iter().enumerate() {
            for _ in 0..e {
                w = dunkl.apply_basis(j, &w)?;
            }
        }
        w = dunkl.act(m.g, &w);
        for (i, &e) in m.x.iter().enumerate() {
            for _ in 0..e {
                w = dunkl.apply_x(i, &w);
            }
        }
        for (o, p) in out.iter_mut().zip(&w) {
            *o = o.add(&p.scale(c));
        }
    }
    Ok(out)
}

fn criterion_certificates() -> Check {
    let mut cases: Vec<(Parameter, u32)> =
        cyclic_cases().into_iter().map(|(l, p)| (p, l)).collect();
    let trivial = symbolic(&cyclic(&[1]), &["s"], true);
    cases.push((trivial.clone(), 1));
    cases.push((trivial, 2));
    for (param, d) in cases {
        let field = param.field().clone();
        let s = field.symbol_index("s").unwrap();
        let alg = Cherednik::new(&param)?;
        let dunkl = Dunkl::new(&alg, &Character::trivial(alg.group()))?;
        let f = x_power(&field, d);
        let r = solve(&param, &f)?;
        ensure!(r.certified(), "degree {d}: solver certificate failed");
        for k in SPECIALIZATIONS {
            let kk = int(&field, k);
            let op = r.operator.map_coeffs(|c| c.substitute_one(s, &kk))?;
            let lhs = apply_literally(&dunkl, &op, &vec![f.pow(k as u32 + 1)])?;
            let bk = r.b.substitute_one(s, &kk)?;
            let rhs = f.pow(k as u32).scale(&bk);
            ensure!(lhs[0] == rhs, "f = x^{d}, s = {k}: D(f^(k+1)) != b(k) f^k");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// PBW and Dunkl operators

fn random_element(alg: &Arc<Cherednik>, rng: &mut ChaCha8Rng) -> PbwElement {
    let n = alg.dim();
    let f = alg.field();
    let order = alg.group().order();
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut x = vec![0; n];
            let mut y = vec![0; n];
            for _ in 0..rng.gen_range(0..=2) {
                x[rng.gen_range(0..n)] += 1;
            }
            for _ in 0..rng.gen_range(0..=2) {
                y[rng.gen_range(0..n)] += 1;
            }
            let g = rng.gen_range(0..order);
            let c = rat(f, rng.gen_range(-5..=5), rng.gen_range(1..=3));
            (PbwMonomial { x, g, y }, c)
        })
        .collect::<Vec<_>>();
    PbwElement::from_terms(alg, terms)
}

fn random_poly(f: &Arc<ScalarField>, n: usize, rng: &mut ChaCha8Rng) -> Poly<ParamScalar> {
    let proto = ParamScalar::zero(f);
    let terms = (0..rng.gen_range(1..=5))
        .map(|_| {
            let d = rng.gen_range(0..=DUNKL_MAX_DEGREE);
            let mut e = vec![0; n];
            for _ in 0..d {
                e[rng.gen_range(0..n)] += 1;
            }
            (e, int(f, rng.gen_range(-4..=4)))
        })
        .collect::<Vec<_>>();
    Poly::from_terms(n, &proto, terms)
}

fn criterion_confluence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for orders in [&[2][..], &[3], &[2, 2], &[1]] {
        let group = cyclic(orders);
        let alg = Cherednik::new(&symbolic(&group, &[], false))?;
        for t in 0..ASSOCIATIVITY_TRIPLES {
            let a = random_element(&alg, &mut rng);
            let b = random_element(&alg, &mut rng);
            let c = random_element(&alg, &mut rng);
            let left = a.checked_mul(&b)?.checked_mul(&c)?;
            let right = a.checked_mul(&b.checked_mul(&c)?)?;
            ensure!(
                left.checked_sub(&right)?.is_zero(),
                "Z/{orders:?}, triple {t}: (ab)c != a(bc) for a = {a}, b = {b}, c = {c}"
            );
        }
    }
    let rank_two = [
        ("Z/2 x Z/2", cyclic(&[2, 2])),
        ("Z/3 x Z/2", cyclic(&[3, 2])),
        // B2, acting by signed permutations
        (
            "B2",
            matrix_group(
                1,
                &[
                    [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
                    [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]],
                ],
            ),
        ),
        // G(3,3,2), isomorphic to S3
        (
            "G(3,3,2)",
            matrix_group(
                3,
                &[
                    [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
                    [[(0, 0), (1, 1)], [(1, 2), (0, 0)]],
                ],
            ),
        ),
        // G(3,1,2)
        (
            "G(3,1,2)",
            matrix_group(
                3,
                &[
                    [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
                    [[(1, 1), (0, 0)], [(0, 0), (1, 0)]],
                ],
            ),
        ),
    ];
    for (name, group) in rank_two {
        let alg = Cherednik::new(&symbolic(&group, &[], false))?;
        let lambdas = if group.is_abelian() {
            irreducibles(&group, None)?
        } else {
            vec![Character::trivial(&group)]
        };
        for lambda in &lambdas {
            let d = Dunkl::new(&alg, lambda)?;
            for _ in 0..DUNKL_POLYS {
                let p = random_poly(alg.field(), 2, &mut rng);
                let v: VecPoly = vec![p.clone()];
                let d12 = d.apply_basis(0, &d.apply_basis(1, &v)?)?;
                let d21 = d.apply_basis(1, &d.apply_basis(0, &v)?)?;
                ensure!(
                    d12 == d21,
                    "{name}, {}: Dunkl operators do not commute on {p:?}",
                    lambda.name
                );
            }
        }
    }
    within(start, BUDGET_CONFLUENCE)
}

// ---------------------------------------------------------------------------
// Contravariant forms

/// `(x^a (x) e_0, w)` for a one-dimensional `lambda`, computed by moving
/// every `x_i` to the right as the Dunkl operator `D_i`.
fn pair(
    d: &Dunkl,
    f0: &ParamScalar,
    a: &Mono,
    w: &VecPoly,
) -> Result<ParamScalar, cherednik::Error> {
    if let Some(i) = a.iter().position(|&e| e > 0) {
        let mut rest = a.clone();
        rest[i] -= 1;
        return pair(d, f0, &rest, &d.apply_basis(i, w)?);
    }
    let zero = ParamScalar::zero(f0.ctx());
    let w0 = &w[0];
    if w0.is_zero() {
        return Ok(zero);
    }
    if w0.is_constant() {
        return Ok(f0 * &w0.constant_coeff().conj());
    }
    // (e_0, w) = conj((w, e_0)), and (w, e_0) is linear in w.
    let mut acc = zero;
    let one = d
        .zero()
        .into_iter()
        .map(|p| p.add(&Poly::one(p.nvars(), p.coeff_zero())))
        .collect::<VecPoly>();
    for (e, c) in w0.terms() {
        acc = &acc + &(c * &pair(d, f0, e, &one)?);
    }
    Ok(acc.conj())
}

fn vec_of(n: usize, f: &Arc<ScalarField>, a: &Mono) -> VecPoly {
    vec![monomial_poly(n, a.clone(), ParamScalar::one(f))]
}

fn random_vector(f: &Arc<ScalarField>, len: usize, rng: &mut ChaCha8Rng) -> Vec<ParamScalar> {
    (0..len).map(|_| int(f, rng.gen_range(-3..=3))).collect()
}

fn gram_suite(param: &Parameter, top: usize, rng: &mut ChaCha8Rng) -> Check {
    let group = param.group().clone();
    let f = param.field();
    let n = group.dim();
    let alg = Cherednik::new(param)?;
    for lambda in irreducibles(&group, None)? {
        let module = GradedModule::verma(&alg, &lambda, top)?;
        let d = Dunkl::new(&alg, &lambda)?;
        let f0 = ParamScalar::from_cyclo(f, &lambda.form()[(0, 0)])?;
        let kappa = lowest_eu_oracle(param, &lambda);
        ensure!(
            euler_lowest_eigenvalue(param, &lambda)? == kappa,
            "{}: lowest eu eigenvalue",
            lambda.name
        );
        let isotypes = irreducibles(&group, None)?;
        let mut grams = Vec::new();
        for m in 0..=top {
            let g = module.gram_matrix(m)?;
            let basis = module.basis(m);
            for (p, (a, _)) in basis.iter().enumerate() {
                for (qi, (b, _)) in basis.iter().enumerate() {
                    let oracle = pair(&d, &f0, a, &vec_of(n, f, b))?;
                    ensure!(
                        g[(p, qi)] == oracle,
                        "{}: Gram entry ({p},{qi}) in degree {m}",
                        lambda.name
                    );
                }
            }
            for m2 in 0..m {
                for (a, _) in basis {
                    for (b, _) in module.basis(m2) {
                        let v = pair(&d, &f0, a, &vec_of(n, f, b))?;
                        ensure!(
                            v.is_zero(),
                            "{}: degrees {m} and {m2} pair nontrivially",
                            lambda.name
                        );
                    }
                }
            }
            let blocks = isotypes
                .iter()
                .map(|mu| module.isotypic_basis(m, mu))
                .collect::<Result<Vec<_>, _>>()?;
            for (i, bi) in blocks.iter().enumerate() {
                for bj in &blocks[i + 1..] {
                    if bi.cols() == 0 || bj.cols() == 0 {
                        continue;
                    }
                    let cross = bi.transpose().mul(&g).mul(&bj.map(ParamScalar::conj));
                    ensure!(
                        cross.is_zero(),
                        "{}: isotypic blocks in degree {m} are not orthogonal",
                        lambda.name
                    );
                }
            }
            let eu = module.euler_matrix(m)?;
            let target = Matrix::identity(module.dim(m), &ParamScalar::zero(f))
                .scale(&(&kappa + &int(f, m as i64)));
            ensure!(
                eu == target,
                "{}: eu on degree {m} is not kappa(lambda) + {m}",
                lambda.name
            );
            grams.push(g);
        }
        for m in 1..=top {
            for i in 0..n {
                let u = random_vector(f, module.dim(m - 1), rng);
                let v = random_vector(f, module.dim(m), rng);
                let xu = module.x_op(m - 1, i)?.apply(&u);
                let yv = module.y_op(m, i)?.apply(&v);
                let lhs = module.form(&grams[m], &xu, &v);
                let rhs = module.form(&grams[m - 1], &u, &yv);
                ensure!(
                    lhs == rhs,
                    "{}: (x_{i} u, v) != (u, y_{i} v) in degree {m}",
                    lambda.name
                );
            }
        }
    }
    Ok(())
}

/// Index `j` with `lambda = e_j`-eigencharacter: `lambda(s) = zeta^{-j}`.
fn eigen_index(group: &ReflectionGroup, lambda: &Character) -> i64 {
    let ell = group.hyperplanes()[0].ell as i64;
    (0..ell)
        .find(|&j| idempotent_value(group, lambda, 0, j).is_one())
        .unwrap()
}

fn criterion_gram() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a4d);
    for ell in 2..=4u32 {
        let group = cyclic(&[ell]);
        let param = symbolic(&group, &[], true);
        let f = param.field();
        let alg = Cherednik::new(&param)?;
        gram_suite(&param, GRAM_DEGREE, &mut rng)?;
        for lambda in irreducibles(&group, None)? {
            let module = GradedModule::verma(&alg, &lambda, GRAM_DEGREE)?;
            let d = Dunkl::new(&alg, &lambda)?;
            let j = eigen_index(&group, &lambda);
            let l = int(f, ell as i64);
            let mut closed = ParamScalar::one(f);
            let mut dunkl_product = ParamScalar::one(f);
            for m in 0..=GRAM_DEGREE {
                if m > 0 {
                    let form = &int(f, m as i64)
                        + &(&l * &(param.kappa(0, m as i64 + j) - param.kappa(0, j)));
                    closed = &closed * &form;
                    let image = d.apply_basis(0, &vec_of(1, f, &vec![m as u32]))?;
                    dunkl_product = &dunkl_product * &single_coefficient(&image[0], m as u32 - 1)?;
                }
                let f0 = ParamScalar::from_cyclo(f, &lambda.form()[(0, 0)])?;
                let mut found = 0;
                for mu in irreducibles(&group, None)? {
                    let block = module.gram_block(m, &mu)?;
                    if block.matrix.rows() == 0 {
                        continue;
                    }
                    found += 1;
                    let det = block.matrix.determinant()?;
                    ensure!(
                        det == &closed * &f0 && det == &dunkl_product * &f0,
                        "Z/{ell}, {}: det in degree {m} is {det}, expected {closed}",
                        lambda.name
                    );
                }
                ensure!(found == 1, "Z/{ell}: degree {m} spans {found} isotypes");
            }
        }
    }
    let group = cyclic(&[2, 2]);
    gram_suite(&symbolic(&group, &[], true), 4, &mut rng)?;
    let s3 = Arc::new(ReflectionGroup::symmetric(3)?);
    let param = symbolic(&s3, &[], true);
    let alg = Cherednik::new(&param)?;
    let module = GradedModule::verma(&alg, &Character::trivial(&s3), 3)?;
    let kappa = lowest_eu_oracle(&param, &Character::trivial(&s3));
    for m in 0..=3 {
        let target = Matrix::identity(module.dim(m), &ParamScalar::zero(param.field()))
            .scale(&(&kappa + &int(param.field(), m as i64)));
        ensure!(module.euler_matrix(m)? == target, "S3: eu on degree {m}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Regularity and asphericity

/// `c(i)` with `D(x^i (x) v) = c(i) x^{i-1} (x) v`, for `i >= 1`.
fn dunkl_lowering(
    d: &Dunkl,
    f: &Arc<ScalarField>,
    i: u32,
) -> Result<ParamScalar, Box<dyn std::error::Error>> {
    let image = d.apply_basis(0, &vec_of(1, f, &vec![i]))?;
    Ok(single_coefficient(&image[0], i - 1)?)
}

/// Truncated brute force for a rank one Verma module: `J_m = {v : y v in
/// J_{m-1}}`, `J_0 = 0`. Returns (singular degree exists, `L^W = 0` up to `n`).
fn line_lattice(
    d: &Dunkl,
    group: &ReflectionGroup,
    f: &Arc<ScalarField>,
    n: usize,
) -> Result<(bool, bool), Box<dyn std::error::Error>> {
    let mut in_j = false;
    let mut singular = false;
    let mut no_invariants = true;
    for m in 0..=n as u32 {
        if m > 0 {
            let c = dunkl_lowering(d, f, m)?;
            singular |= c.is_zero();
            in_j = in_j || c.is_zero();
        }
        let v = vec_of(1, f, &vec![m]);
        let invariant = (0..group.order()).all(|g| d.act(g, &v) == v);
        if invariant && !in_j {
            no_invariants = false;
        }
    }
    Ok((singular, no_invariants))
}

fn criterion_aspherical() -> Check {
    let start = Instant::now();
    for orders in [&[2][..], &[3], &[2, 2]] {
        let group = cyclic(orders);
        let reps = irreducibles(&group, None)?;
        let n = 4;
        let param = symbolic(&group, &[], false);
        let kappas: Vec<ParamScalar> = reps.iter().map(|l| lowest_eu_oracle(&param, l)).collect();
        for c in aspherical_candidates(&group, &reps, n)? {
            let (constant, coeffs) = c
                .affine_parts()
                .ok_or_else(|| format!("{c} is not affine"))?;
            let m = constant.to_rational().ok_or("constant is not rational")?;
            ensure!(m.is_integer() && m >= q(1), "{c}: constant term {m}");
            ensure!(
                coeffs
                    .iter()
                    .all(|k| k.to_rational().is_some_and(|r| r.is_integer())),
                "{c}: non-integer coefficient"
            );
            let f = c.ctx();
            let matches = kappas.iter().any(|a| {
                kappas.iter().any(|b| {
                    // The candidate field carries no extra symbols, so the
                    // forms can be compared directly.
                    let diff = a - b;
                    diff.ctx().symbols() == f.symbols()
                        && &(&diff + &ParamScalar::from_rational(f, m.clone())) == &c
                })
            });
            ensure!(
                matches,
                "{c} is not of the form kappa(lambda) - kappa(mu) + m"
            );
        }
    }
    let group = cyclic(&[2]);
    let reps = irreducibles(&group, None)?;
    let expectations = [
        (qq(1, 3), true, false),
        (qq(-1, 2), false, false),
        (qq(-3, 2), false, false),
        (qq(1, 2), false, true),
    ];
    for (k1, want_regular, want_aspherical) in expectations {
        let param = rational_param(&group, &[q(0), k1.clone()]);
        let f = param.field();
        let alg = Cherednik::new(&param)?;
        let mut any_singular = false;
        let mut any_aspherical = false;
        for lambda in &reps {
            let d = Dunkl::new(&alg, lambda)?;
            let (s, a) = line_lattice(&d, &group, f, REGULAR_TRUNCATION)?;
            any_singular |= s;
            any_aspherical |= a;
        }
        let regular = is_regular_truncated(&alg, &reps, REGULAR_TRUNCATION)?;
        let aspherical = aspherical_test(&alg, &reps, REGULAR_TRUNCATION)?;
        ensure!(
            regular == !any_singular,
            "kappa_1 = {k1}: regular = {regular}, lattice says {}",
            !any_singular
        );
        ensure!(
            aspherical == any_aspherical,
            "kappa_1 = {k1}: aspherical = {aspherical}, lattice says {any_aspherical}"
        );
        ensure!(
            regular == want_regular && aspherical == want_aspherical,
            "kappa_1 = {k1}: regular = {regular}, aspherical = {aspherical}"
        );
    }
    within(start, BUDGET_ASPHERICAL)
}

// ---------------------------------------------------------------------------
// Localization on the line

/// Chain length of `C[x, x^{-1}]` from its submodules `span{x^i : i >= b}`
/// inside the window. `y x^i = c(i) x^{i-1}` comes from the Dunkl operator
/// for `i >= 1` and extends to negative `i` since `c(i) - i` only depends on
/// `i mod ell`.
fn localization_oracle(
    param: &Parameter,
    ell: u32,
    window: i64,
) -> Result<usize, Box<dyn std::error::Error>> {
    let group = param.group();
    let f = param.field();
    let alg = Cherednik::new(param)?;
    let d = Dunkl::new(&alg, &Character::trivial(group))?;
    let ell = ell as i64;
    let mut shift = Vec::new();
    for r in 0..ell {
        let i = r + ell;
        shift.push(&dunkl_lowering(&d, f, i as u32)? - &int(f, i));
    }
    let c = |i: i64| &int(f, i) + &shift[i.rem_euclid(ell) as usize];
    let mut proper = 0;
    for b in -window..=window {
        // span{x^i : i >= b} is closed under y iff each y x^i stays inside
        let closed = (b..=window).all(|i| i > b || c(i).is_zero());
        if closed {
            proper += 1;
        }
    }
    Ok(proper + 1)
}

fn criterion_localization() -> Check {
    let start = Instant::now();
    let trivial = cyclic(&[1]);
    let z2 = cyclic(&[2]);
    let cases = [
        ("trivial group", rational_param(&trivial, &[]), Some(2)),
        (
            "kappa_1 = 1/3",
            rational_param(&z2, &[q(0), qq(1, 3)]),
            Some(2),
        ),
        (
            "kappa_1 = -3/2",
            rational_param(&z2, &[q(0), qq(-3, 2)]),
            None,
        ),
    ];
    for (name, param, expected) in cases {
        let (ell, kappa) = if param.group().hyperplanes().is_empty() {
            (1, vec![q(0)])
        } else {
            rational_line_kappa(&param)?
        };
        let local = LineModule::polynomial(ell, kappa)?
            .localize()
            .ok_or("the localization vanished")?;
        let series = local.composition_series(LINE_WINDOW);
        ensure!(series.certified, "{name}: breaks outside the window");
        let oracle = localization_oracle(&param, ell, LINE_WINDOW)?;
        ensure!(
            series.length() == oracle,
            "{name}: length {} but lattice gives {oracle}",
            series.length()
        );
        match expected {
            Some(n) => ensure!(series.length() == n, "{name}: length {}", series.length()),
            None => ensure!(series.length() >= 3, "{name}: length {}", series.length()),
        }
    }
    within(start, BUDGET_LOCALIZATION)
}

// ---------------------------------------------------------------------------
// Melys maps

fn cyclo_polys(rep: &LinearRep, texts: &[&str]) -> Vec<Poly<Cyclo>> {
    let f = ScalarField::new(rep.group().conductor(), vec![]).unwrap();
    texts
        .iter()
        .map(|t| {
            cherednik::exactfield::parse_poly(t, &f, rep.dim())
                .unwrap()
                .map_coeffs(&rep.proto(), |c| c.to_cyclo().unwrap())
        })
        .collect()
}

/// `Z/ell_1 x ... ` acting on a line, generator `k` by `zeta_{ell_k}^{a_k}`.
fn line_rep(group: &Arc<ReflectionGroup>, exps: &[i64]) -> LinearRep {
    let f = group.field();
    let images: Vec<Matrix<Cyclo>> = group
        .generators()
        .iter()
        .zip(exps)
        .map(|(&s, &a)| {
            let z = Cyclo::root_of_unity(f, group.element_order(s), a).unwrap();
            Matrix::from_rows(vec![vec![z]], &Cyclo::zero(f))
        })
        .collect();
    LinearRep::from_generator_images(group, 1, &images).unwrap()
}

fn generic_c(group: &Arc<ReflectionGroup>) -> CParameter {
    symbolic(group, &[], true).c_of_kappa()
}

fn inverse_mod(r: i64, ell: i64) -> Option<i64> {
    (0..ell).find(|a| (a * r).rem_euclid(ell) == 1 % ell)
}

fn evaluate(p: &Poly<Cyclo>, point: &[Cyclo]) -> Cyclo {
    let consts: Vec<Poly<Cyclo>> = point.iter().map(|c| Poly::constant(c.clone(), 0)).collect();
    p.compose(&consts).constant_coeff()
}

fn criterion_melys() -> Check {
    let zero_c = CParameter {
        values: Default::default(),
    };

    // Diagonal projection h + h -> h.
    let z2 = cyclic(&[2]);
    let h = LinearRep::defining(&z2);
    let hh = h.direct_sum(&h)?;
    let proj = EquivariantMap::new(&hh, &h, cyclo_polys(&hh, &["x1"]))?;
    ensure!(
        !proj.is_melys(&generic_c(&z2))?.holds,
        "diagonal projection is melys"
    );
    ensure!(
        proj.is_melys(&zero_c)?.holds,
        "diagonal projection fails at c = 0"
    );

    // Stable subspaces.
    let z22 = cyclic(&[2, 2]);
    let h22 = LinearRep::defining(&z22);
    let axis = line_rep(&z22, &[1, 0]);
    let inc = EquivariantMap::new(&axis, &h22, cyclo_polys(&axis, &["x1", "0"]))?;
    ensure!(
        inc.is_melys(&generic_c(&z22))?.holds,
        "axis embedding is not melys"
    );
    let origin = LinearRep::trivial(&z22, 0);
    let z = Poly::zero(0, &origin.proto());
    let inc0 = EquivariantMap::new(&origin, &h22, vec![z.clone(), z])?;
    ensure!(
        inc0.is_melys(&generic_c(&z22))?.holds,
        "origin is not melys"
    );
    let s3 = Arc::new(ReflectionGroup::symmetric(3)?);
    let perm = LinearRep::defining(&s3);
    let proto = perm.proto();
    // S3 on the sum-zero plane, basis e1 - e2, e2 - e3
    let images: Vec<Matrix<Cyclo>> = s3
        .generators()
        .iter()
        .map(|&g| {
            let m = perm.matrix(g);
            let basis = [[1, -1, 0], [0, 1, -1]];
            let moved: Vec<Vec<Cyclo>> = basis
                .iter()
                .map(|b| {
                    m.apply(
                        &b.iter()
                            .map(|&t| Cyclo::from_int(s3.field(), t))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            // coordinates of a sum-zero vector v: (v1, v1 + v2)
            let cols: Vec<Vec<Cyclo>> = moved
                .iter()
                .map(|v| vec![v[0].clone(), v[0].add(&v[1])])
                .collect();
            Matrix::from_columns(&cols, 2, &proto)
        })
        .collect();
    let plane = LinearRep::from_generator_images(&s3, 2, &images)?;
    let emb = EquivariantMap::new(
        &plane,
        &perm,
        cyclo_polys(&plane, &["x1", "x2 - x1", "-x2"]),
    )?;
    ensure!(
        emb.is_melys(&generic_c(&s3))?.holds,
        "sum-zero plane is not melys"
    );

    for map in [&proj, &inc, &inc0, &emb] {
        ensure!(map.is_melys(&zero_c)?.holds, "a map fails at c = 0");
    }

    // Power maps on Z/ell.
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e17);
    for ell in 2..=7i64 {
        let group = cyclic(&[ell as u32]);
        let h = LinearRep::defining(&group);
        let c = generic_c(&group);
        for r in 1..=8i64 {
            let Some(a) = inverse_mod(r, ell) else {
                for a in 0..ell {
                    let k = line_rep(&group, &[a]);
                    let text = format!("x1^{r}");
                    ensure!(
                        EquivariantMap::new(&k, &h, cyclo_polys(&k, &[&text])).is_err(),
                        "x^{r} equivariant on Z/{ell} with gcd > 1"
                    );
                }
                continue;
            };
            let k = line_rep(&group, &[a]);
            let scale = Cyclo::from_rational(
                group.field(),
                qq(rng.gen_range(1..=9), rng.gen_range(1..=5)),
            );
            let comp = vec![Poly::monomial(vec![r as u32], scale.clone())];
            let phi = EquivariantMap::new(&k, &h, comp)?;
            let pulled = phi.pullback_parameter(&c)?;
            for (w, v) in &c.values {
                let expected = v * &ParamScalar::from_int(v.ctx(), r);
                ensure!(
                    pulled.values.get(w) == Some(&expected),
                    "Z/{ell}, r = {r}: pullback at {w}"
                );
            }
            if r == 1 {
                continue;
            }
            match classify_irreducible_melys(&phi, &c)? {
                IrreducibleClass::PowerMap {
                    r: rr,
                    ell: ll,
                    scale: sc,
                    ..
                } => {
                    ensure!(
                        rr as i64 == r
                            && ll as i64 == ell
                            && num_integer::gcd(rr, ll) == 1
                            && sc == scale,
                        "Z/{ell}, r = {r}: classified as r = {rr}, ell = {ll}"
                    );
                }
                other => return Err(format!("Z/{ell}, r = {r}: classified as {other}").into()),
            }
        }
    }

    // Factorization through power maps.
    for _ in 0..20 {
        let ells = [rng.gen_range(2..=5u32), rng.gen_range(2..=5u32)];
        let group = cyclic(&ells);
        let h = LinearRep::defining(&group);
        let c = generic_c(&group);
        let mut source = LinearRep::trivial(&group, 1);
        let mut comps = Vec::new();
        let mut slot = 1;
        let mut pieces = Vec::new();
        for (k, &l) in ells.iter().enumerate() {
            let l = l as i64;
            let choices: Vec<i64> = (1..=6).filter(|&r| inverse_mod(r, l).is_some()).collect();
            let r = choices[rng.gen_range(0..choices.len())];
            if rng.gen_bool(0.2) {
                pieces.push(None);
                continue;
            }
            let mut exps = vec![0; 2];
            exps[k] = inverse_mod(r, l).unwrap();
            source = source.direct_sum(&line_rep(&group, &exps))?;
            pieces.push(Some((slot, r)));
            slot += 1;
        }
        let n = source.dim();
        for piece in &pieces {
            comps.push(match piece {
                None => Poly::zero(n, &source.proto()),
                Some((s, r)) => {
                    let mut e = vec![0; n];
                    e[*s] = *r as u32;
                    let scale = Cyclo::from_rational(
                        group.field(),
                        qq(rng.gen_range(1..=7), rng.gen_range(1..=4)),
                    );
                    Poly::monomial(e, scale)
                }
            });
        }
        let phi = EquivariantMap::new(&source, &h, comps)?;
        let fac = factor_linear_melys(&phi, &c)?;
        ensure!(
            fac.composite() == phi.components(),
            "composite differs from the map"
        );
        for _ in 0..3 {
            let point: Vec<Cyclo> = (0..n)
                .map(|_| {
                    Cyclo::from_rational(
                        group.field(),
                        qq(rng.gen_range(-6..=6), rng.gen_range(1..=3)),
                    )
                })
                .collect();
            let e: Vec<Cyclo> = fac.embedding.iter().map(|p| evaluate(p, &point)).collect();
            let m: Vec<Cyclo> = fac.power_map.iter().map(|p| evaluate(p, &e)).collect();
            let out: Vec<Cyclo> = fac.projection.iter().map(|p| evaluate(p, &m)).collect();
            let direct: Vec<Cyclo> = phi
                .components()
                .iter()
                .map(|p| evaluate(p, &point))
                .collect();
            ensure!(
                out == direct,
                "factorization disagrees with the map at a point"
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Jacquet functor

fn criterion_jacquet() -> Check {
    let n = JACQUET_TRUNCATION;
    for ell in [2u32, 3] {
        let group = cyclic(&[ell]);
        let mut params = vec![symbolic(&group, &[], true)];
        let mut kappa = vec![q(0); ell as usize];
        kappa[1] = qq(-1, 2);
        params.push(rational_param(&group, &kappa));
        for param in params {
            let f = param.field();
            let alg = Cherednik::new(&param)?;
            let triv = Character::trivial(&group);
            let verma = GradedModule::verma(&alg, &triv, n)?;
            let poly = LineOModule {
                free: Some(FreeLineModule::polynomial(&param)?),
                torsion: vec![],
            };
            let j = jacquet_line(&poly, n)?;
            ensure!(
                j.dims() == verma.dims(),
                "Z/{ell}: dims {:?} vs {:?}",
                j.dims(),
                verma.dims()
            );
            let kappa0 = lowest_eu_oracle(&param, &triv);
            for p in &j.pieces {
                ensure!(
                    p.eigenvalue == &kappa0 + &int(f, p.degree as i64),
                    "Z/{ell}: eu on J_{}",
                    p.degree
                );
            }
            for m in 0..n {
                let jx = &j.x_ops[m];
                let vx = verma.x_op(m, 0)?;
                ensure!(
                    !jx.is_zero() && !vx.is_zero(),
                    "Z/{ell}: x vanishes in degree {m}"
                );
                let jyx = j.y_ops[m + 1].mul(jx);
                let vyx = verma.y_op(m + 1, 0)?.mul(vx);
                ensure!(jyx == vyx, "Z/{ell}: y x differs on degree {m}");
            }
            let one = Q::one();
            let away = LineOModule {
                free: None,
                torsion: vec![
                    vec![-one.clone(), one.clone()],
                    vec![q(2), q(-3), one.clone()],
                ],
            };
            ensure!(
                jacquet_line(&away, n)?.is_zero(),
                "Z/{ell}: torsion away from 0 survives"
            );
            let mixed = LineOModule {
                free: Some(FreeLineModule::polynomial(&param)?),
                torsion: vec![vec![q(-5), Q::zero(), one]],
            };
            ensure!(
                jacquet_line(&mixed, n)?.dims() == verma.dims(),
                "Z/{ell}: torsion changes the free part"
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("cyclic b-functions for x^ell", criterion_cyclic_bfunctions),
        ("classical degeneration", criterion_classical),
        ("functional equation certificates", criterion_certificates),
        (
            "PBW associativity and Dunkl commutation",
            criterion_confluence,
        ),
        ("contravariant form suite", criterion_gram),
        ("aspherical and regular analysis", criterion_aspherical),
        ("localization lengths on the line", criterion_localization),
        ("melys suite", criterion_melys),
        ("Jacquet functor on the line", criterion_jacquet),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg.into())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
