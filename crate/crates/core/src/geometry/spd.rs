//! Affine-invariant geometry of the SPD cone.

use std::cmp::Ordering;

use super::linalg::{sym_eig, SquareMatrix};
use super::{Point, SPD_EIGEN_FLOOR, SPD_SYMMETRY_TOL};
use crate::{Error, Result};

pub(super) fn validate(m: &SquareMatrix) -> Result<SquareMatrix> {
    let norm = m.frobenius_norm();
    let asymmetry = m.max_asymmetry();
    if asymmetry > SPD_SYMMETRY_TOL * norm.max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let sym = m.symmetrize();
    let eig = sym_eig(&sym)?;
    let (lo, hi) = (eig.min_value(), eig.max_value());
    if !(hi > 0.0) || !(lo > SPD_EIGEN_FLOOR * hi) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    Ok(sym)
}

fn mat(size: usize, coords: &[f64]) -> SquareMatrix {
    SquareMatrix::from_row_major(size, coords.to_vec()).expect("coordinate length checked by caller")
}

/// Orders a pair so symmetric quantities are computed identically for
/// `(p, q)` and `(q, p)`.
fn canonical<'a>(p: &'a [f64], q: &'a [f64]) -> (&'a [f64], &'a [f64]) {
    let ord = p
        .iter()
        .zip(q)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    if ord == Ordering::Greater {
        (q, p)
    } else {
        (p, q)
    }
}

pub(super) fn inv_sqrt(size: usize, a: &[f64]) -> Vec<f64> {
    let eig = sym_eig(&mat(size, a)).expect("SPD point is symmetric");
    eig.map(|l| 1.0 / l.sqrt()).into_vec()
}

/// `‖log(S B S)‖_F` with `S = A^{-1/2}` precomputed.
pub(super) fn distance_from_inv_sqrt(size: usize, s: &[f64], b: &[f64]) -> f64 {
    let c = mat(size, b).sandwich(&mat(size, s));
    let eig = sym_eig(&c).expect("congruence of SPD is symmetric");
    eig.values.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt()
}

pub(super) fn distance(size: usize, p: &[f64], q: &[f64]) -> f64 {
    let (a, b) = canonical(p, q);
    distance_from_inv_sqrt(size, &inv_sqrt(size, a), b)
}

/// Point at parameter `s` on the geodesic `A^{1/2} (A^{-1/2} B A^{-1/2})^s A^{1/2}`.
fn geodesic_raw(size: usize, a: &[f64], b: &[f64], s: f64) -> SquareMatrix {
    let eig_a = sym_eig(&mat(size, a)).expect("SPD point is symmetric");
    let root = eig_a.map(f64::sqrt);
    let inv_root = eig_a.map(|l| 1.0 / l.sqrt());
    let c = mat(size, b).sandwich(&inv_root);
    let cs = sym_eig(&c).expect("congruence of SPD is symmetric").map(|l| l.powf(s));
    cs.sandwich(&root)
}

pub(super) fn midpoint(size: usize, p: &[f64], q: &[f64]) -> SquareMatrix {
    let (a, b) = canonical(p, q);
    let eig_a = sym_eig(&mat(size, a)).expect("SPD point is symmetric");
    let root = eig_a.map(f64::sqrt);
    let inv_root = eig_a.map(|l| 1.0 / l.sqrt());
    let c = mat(size, b).sandwich(&inv_root);
    let c_root = sym_eig(&c).expect("congruence of SPD is symmetric").map(f64::sqrt);
    c_root.sandwich(&root)
}

fn spd_size(p: &Point) -> Result<usize> {
    let n = p.len();
    let size = (n as f64).sqrt().round() as usize;
    if size * size != n || size == 0 {
        return Err(Error::ManifoldMismatch);
    }
    Ok(size)
}

/// Geodesic `gamma(s)` from `a` (s = 0) to `b` (s = 1); `s` outside `[0, 1]`
/// extrapolates along the same geodesic.
pub fn spd_geodesic(a: &Point, b: &Point, s: f64) -> Result<Point> {
    let size = spd_size(a)?;
    if b.len() != a.len() {
        return Err(Error::ManifoldMismatch);
    }
    Ok(Point::new_unchecked(
        geodesic_raw(size, a.coords(), b.coords(), s).into_vec(),
    ))
}

/// `B^{1/2} exp(t D) B^{1/2}`: the geodesic leaving `base` with direction `D`
/// (a symmetric matrix in the whitened tangent space). Its distance from
/// `base` is `|t| ‖D‖_F`.
pub fn spd_exp_ray(base: &Point, direction: &[f64], t: f64) -> Result<Point> {
    let size = spd_size(base)?;
    if direction.len() != base.len() {
        return Err(Error::ManifoldMismatch);
    }
    let root = sym_eig(&mat(size, base.coords()))?.map(f64::sqrt);
    let e = sym_eig(&mat(size, direction).scale(t))?.map(f64::exp);
    Ok(Point::new_unchecked(e.sandwich(&root).into_vec()))
}

/// Matrix geometric mean `A # B`.
pub fn spd_geometric_mean(a: &Point, b: &Point) -> Result<Point> {
    let size = spd_size(a)?;
    if b.len() != a.len() {
        return Err(Error::ManifoldMismatch);
    }
    Ok(Point::new_unchecked(midpoint(size, a.coords(), b.coords()).into_vec()))
}
