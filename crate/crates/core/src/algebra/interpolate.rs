use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Interpolates through the first `max_degree + 1` points (Newton divided
/// differences) and checks every remaining point against the result.
pub fn interpolate_poly(points: &[(Rational, Rational)], max_degree: usize) -> Result<Polynomial> {
    let n = (max_degree + 1).min(points.len());
    if n == 0 {
        return Err(Error::InvalidInput("no interpolation points".into()));
    }
    let xs: Vec<&Rational> = points[..n].iter().map(|(x, _)| x).collect();
    let mut coef: Vec<Rational> = points[..n].iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = xs[i] - xs[i - level];
            if dx.is_zero() {
                return Err(Error::InvalidInput("repeated interpolation abscissa".into()));
            }
            coef[i] = (&coef[i] - &coef[i - 1]) / dx;
        }
    }
    // expand the Newton form from the innermost factor outwards
    let mut poly = Polynomial::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = Polynomial::from_coeffs(vec![-xs[i].clone(), Rational::from_integer(1.into())]);
        poly = &(&poly * &factor) + &Polynomial::constant(coef[i].clone());
    }
    if points[n..].iter().any(|(x, y)| poly.eval(x) != *y) {
        return Err(Error::DegreeExceeded { max_degree });
    }
    Ok(poly)
}
