//! The rational Cherednik algebra: PBW normal forms and Dunkl operators.

mod algebra;
mod dunkl;

pub use algebra::{
    euler_element, pbw_normal_form, Cherednik, GroupAlgebraElement, PbwElement, PbwMonomial,
};
pub use dunkl::{Dunkl, VecPoly};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{ParamScalar, Poly};
    use crate::refgroup::{characters, scalar_field_for, Character, Parameter, ReflectionGroup};
    use std::sync::Arc;

    fn symbolic(group: ReflectionGroup) -> Arc<Cherednik> {
        let group = Arc::new(group);
        let field = scalar_field_for(&group, &[]).unwrap();
        Cherednik::new(&Parameter::symbolic(&group, &field, false).unwrap()).unwrap()
    }

    #[test]
    fn z2_relation() {
        let alg = symbolic(ReflectionGroup::cyclic_product(&[2]).unwrap());
        let yx = pbw_normal_form(&alg, "y1*x1").unwrap();
        let expected = pbw_normal_form(&alg, "x1*y1 + 1 + 2*(k1 - k0)*g1").unwrap();
        assert_eq!(yx, expected);
        assert_eq!(yx.order(), Some(1));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let alg = symbolic(ReflectionGroup::cyclic_product(&[3]).unwrap());
        let e = pbw_normal_form(&alg, "y1^2*x1*g1 - k1/2*x1^2*g2").unwrap();
        let back = pbw_normal_form(&alg, &e.to_string()).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn unknown_generators_are_rejected() {
        let alg = symbolic(ReflectionGroup::cyclic_product(&[2]).unwrap());
        assert!(matches!(
            pbw_normal_form(&alg, "x2"),
            Err(crate::Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            pbw_normal_form(&alg, "g7"),
            Err(crate::Error::UnknownGenerator(_))
        ));
    }

    fn check_euler(alg: &Arc<Cherednik>) {
        let eu = euler_element(alg).unwrap();
        for i in 0..alg.dim() {
            let x = PbwElement::x(alg, i);
            let y = PbwElement::y(alg, i);
            assert_eq!(eu.commutator(&x).unwrap(), x);
            assert_eq!(eu.commutator(&y).unwrap(), y.neg());
        }
        for &g in alg.group().generators() {
            let g = PbwElement::group_element(alg, g);
            assert!(eu.commutator(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_grading() {
        check_euler(&symbolic(ReflectionGroup::cyclic_product(&[3]).unwrap()));
        check_euler(&symbolic(ReflectionGroup::cyclic_product(&[2, 2]).unwrap()));
        check_euler(&symbolic(ReflectionGroup::symmetric(3).unwrap()));
    }

    fn monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for a in 0..=deg {
            for mut rest in monomials(n - 1, deg - a) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
        out
    }

    fn basis_vec(d: &Dunkl, a: &[u32], r: usize) -> VecPoly {
        let mut v = d.zero();
        v[r] = Poly::monomial(a.to_vec(), ParamScalar::one(d.algebra().field()));
        v
    }

    fn check_dunkl_commute(alg: &Arc<Cherednik>, lambda: &Character, deg: u32) {
        let d = Dunkl::new(alg, lambda).unwrap();
        let n = alg.dim();
        for total in 0..=deg {
            for a in monomials(n, total) {
                for r in 0..lambda.dim() {
                    let p = basis_vec(&d, &a, r);
                    for i in 0..n {
                        for j in i + 1..n {
                            let ij = d.apply_basis(i, &d.apply_basis(j, &p).unwrap()).unwrap();
                            let ji = d.apply_basis(j, &d.apply_basis(i, &p).unwrap()).unwrap();
                            assert_eq!(ij, ji);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dunkl_operators_commute() {
        let s3 = symbolic(ReflectionGroup::symmetric(3).unwrap());
        check_dunkl_commute(&s3, &Character::trivial(s3.group()), 3);
        let k = symbolic(ReflectionGroup::cyclic_product(&[2, 2]).unwrap());
        for ch in characters(k.group()).unwrap() {
            check_dunkl_commute(&k, &ch, 3);
        }
    }

    /// The action of `y_j` on `x^a (x) v` through the PBW normal form of
    /// `y_j x^a` agrees with the Dunkl operator.
    fn check_pbw_against_dunkl(alg: &Arc<Cherednik>, lambda: &Character, deg: u32) {
        let d = Dunkl::new(alg, lambda).unwrap();
        let n = alg.dim();
        let field = alg.field().clone();
        for total in 0..=deg {
            for a in monomials(n, total) {
                let xa = PbwElement::monomial(
                    alg,
                    PbwMonomial {
                        x: a.clone(),
                        g: 0,
                        y: vec![0; n],
                    },
                    ParamScalar::one(&field),
                );
                for j in 0..n {
                    let nf = PbwElement::y(alg, j).mul(&xa);
                    for r in 0..lambda.dim() {
                        let mut via_pbw = d.zero();
                        for (m, c) in nf.terms() {
                            if m.y.iter().any(|&b| b > 0) {
                                continue;
                            }
                            let gv = d.act_vector(m.g, &basis_vec(&d, &m.x, r));
                            for t in 0..gv.len() {
                                via_pbw[t] = via_pbw[t].add(&gv[t].scale(c));
                            }
                        }
                        let via_dunkl = d.apply_basis(j, &basis_vec(&d, &a, r)).unwrap();
                        assert_eq!(via_pbw, via_dunkl, "y{} x^{:?}", j + 1, a);
                    }
                }
            }
        }
    }

    #[test]
    fn pbw_matches_dunkl() {
        let z3 = symbolic(ReflectionGroup::cyclic_product(&[3]).unwrap());
        for ch in characters(z3.group()).unwrap() {
            check_pbw_against_dunkl(&z3, &ch, 5);
        }
        let s3 = symbolic(ReflectionGroup::symmetric(3).unwrap());
        check_pbw_against_dunkl(&s3, &Character::trivial(s3.group()), 3);
        let k = symbolic(ReflectionGroup::cyclic_product(&[2, 3]).unwrap());
        for ch in characters(k.group()).unwrap() {
            check_pbw_against_dunkl(&k, &ch, 2);
        }
    }
}
