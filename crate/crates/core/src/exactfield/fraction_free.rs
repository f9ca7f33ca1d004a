//! Fraction-free elimination for matrices over `Q(zeta_N)(symbols)`.
//!
//! Rows are cleared to polynomial numerators and reduced by Gauss-Jordan
//! steps `a_ij <- (p a_ij - a_ic a_rj) / p_prev`, which keeps every entry a
//! polynomial minor. Reducing to lowest terms happens once at the end.

use std::sync::Arc;

use super::cyclo::Cyclo;
use super::linalg::Matrix;
use super::poly::{gcd, Poly};
use super::scalar::{ParamScalar, ScalarField};
use crate::error::Result;

type Row = Vec<Poly<Cyclo>>;

fn lcm(a: &Poly<Cyclo>, b: &Poly<Cyclo>) -> Poly<Cyclo> {
    if b.is_one() || a == b {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    let g = gcd(a, b);
    a.mul(&b.exact_div(&g).expect("gcd divides"))
}

fn clear_row(row: &[ParamScalar], n: usize, proto: &Cyclo) -> Row {
    let mut l = Poly::one(n, proto);
    for x in row {
        if !x.is_zero() {
            l = lcm(&l, x.denom());
        }
    }
    row.iter()
        .map(|x| {
            if x.is_zero() {
                Poly::zero(n, proto)
            } else if x.denom().is_one() {
                x.numer().mul(&l)
            } else {
                x.numer().mul(&l.exact_div(x.denom()).expect("lcm divides"))
            }
        })
        .collect()
}

/// Fraction-free Gauss-Jordan; `None` if an expected exact division fails.
fn eliminate(m: &mut [Row], cols: usize, n: usize, proto: &Cyclo) -> Option<Vec<usize>> {
    let rows = m.len();
    let mut prev = Poly::one(n, proto);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].terms().len())
        else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                let mut t = row[j].mul(&piv);
                if !f.is_zero() && !prow[j].is_zero() {
                    t = t.sub(&f.mul(&prow[j]));
                }
                row[j] = if prev.is_one() {
                    t
                } else {
                    t.exact_div(&prev)?
                };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

/// Reduced row echelon form and pivot columns.
pub fn rref_param(a: &Matrix<ParamScalar>) -> Result<(Matrix<ParamScalar>, Vec<usize>)> {
    let ctx: Arc<ScalarField> = a.proto().ctx().clone();
    let n = ctx.nvars();
    let proto = Cyclo::zero(ctx.cyclo());
    let mut m: Vec<Row> = (0..a.rows())
        .map(|i| clear_row(a.row(i), n, &proto))
        .collect();
    let Some(pivots) = eliminate(&mut m, a.cols(), n, &proto) else {
        return Ok(a.rref());
    };
    let zero = ParamScalar::zero(&ctx);
    let mut out = Matrix::zeros(a.rows(), a.cols(), &zero);
    let mut is_pivot = vec![false; a.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for (r, &p) in pivots.iter().enumerate() {
        out[(r, p)] = ParamScalar::one(&ctx);
        let d = &m[r][p];
        for j in (p + 1..a.cols()).filter(|&j| !is_pivot[j]) {
            if !m[r][j].is_zero() {
                out[(r, j)] = ParamScalar::from_fraction(&ctx, m[r][j].clone(), d.clone())?;
            }
        }
    }
    Ok((out, pivots))
}
