//! Exact scalars: cyclotomic numbers, rational functions in parameters,
//! sparse polynomials and dense linear algebra.

pub mod cyclo;
pub mod factor;
pub mod fraction_free;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod scalar;

pub use cyclo::{q, qq, Cyclo, CycloField, Q};
pub use factor::{poly_factor_linear, LinearFactorization};
pub use fraction_free::rref_param;
pub use linalg::{LinearSolution, Matrix, SolveOutcome};
pub use parse::{format_poly, parse_cyclo, parse_expr, parse_poly, parse_scalar, Expr};
pub use poly::{gcd, monomials_of_degree, Mono, Poly};
pub use ring::{Field, Ring};
pub use scalar::{ParamScalar, ScalarField};

use crate::error::{Error, Result};

/// Solves `a * x = b` over a common scalar context.
pub fn solve_linear(
    a: &Matrix<ParamScalar>,
    b: &[ParamScalar],
) -> Result<SolveOutcome<ParamScalar>> {
    if a.rows() != b.len() {
        return Err(Error::InvalidInput(format!(
            "{} equations but {} right-hand sides",
            a.rows(),
            b.len()
        )));
    }
    let ctx = a.proto().ctx();
    for i in 0..a.rows() {
        for x in a.row(i).iter().chain(std::iter::once(&b[i])) {
            if !x.ctx().same_as(ctx) {
                return Err(Error::IncompatibleScalars(
                    "mixed contexts in linear system".into(),
                ));
            }
        }
    }
    let cols = a.cols();
    let mut aug = Matrix::zeros(a.rows(), cols + 1, a.proto());
    for i in 0..a.rows() {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let (m, pivots) = rref_param(&aug)?;
    if pivots.last() == Some(&cols) {
        return Ok(SolveOutcome::NoSolution);
    }
    let zero = a.proto().clone();
    let mut solution = vec![zero.clone(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        solution[p] = m[(r, cols)].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = ParamScalar::one(a.proto().ctx());
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = m[(r, free)].neg();
        }
        kernel.push(v);
    }
    Ok(SolveOutcome::Solved(LinearSolution { solution, kernel }))
}
