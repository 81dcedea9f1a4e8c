//! Dense complex operators on `d^n`-dimensional qudit spaces.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for operator identities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Square complex matrix, row-major, acting on `n` qudits of dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    d: usize,
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(d: usize, n: usize) -> Self {
        let dim = d.pow(n as u32);
        Self {
            d,
            n,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(d: usize, n: usize) -> Self {
        let mut out = Self::zeros(d, n);
        for i in 0..out.dim {
            out.data[i * out.dim + i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    /// Build from a row-major entry function.
    pub fn from_fn(d: usize, n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(d, n);
        let dim = out.dim;
        for r in 0..dim {
            for c in 0..dim {
                out.data[r * dim + c] = f(r, c);
            }
        }
        out
    }

    pub fn from_diagonal(d: usize, n: usize, diag: &[Complex64]) -> Result<Self> {
        let mut out = Self::zeros(d, n);
        if diag.len() != out.dim {
            return Err(Error::DimensionMismatch {
                left: out.dim,
                right: diag.len(),
            });
        }
        for (i, z) in diag.iter().enumerate() {
            out.data[i * out.dim + i] = *z;
        }
        Ok(out)
    }

    pub fn from_row_major(d: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = d.pow(n as u32);
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        Ok(Self { d, n, dim, data })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, z: Complex64) {
        self.data[row * self.dim + col] = z;
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Matrix product `self · rhs`. Zero entries of `self` are skipped, so
    /// products with monomial or banded left factors stay cheap.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let dim = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let out_row = &mut out[i * dim..(i + 1) * dim];
            for k in 0..dim {
                let a = self.data[i * dim + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * dim..(k + 1) * dim];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            d: self.d,
            n: self.n,
            dim,
            data: out,
        })
    }

    pub fn dagger(&self) -> Self {
        let dim = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        Self { data, ..*self }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|x| x * z).collect(),
            ..*self
        }
    }

    /// Integer power; negative exponents use the adjoint, which is only the
    /// inverse for unitary operators.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.dagger() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.d, self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&sq).expect("same dims");
            }
            e >>= 1;
            if e > 0 {
                sq = sq.matmul(&sq).expect("same dims");
            }
        }
        acc
    }

    /// Kronecker product; `self` acts on the more significant factor.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        if self.d != rhs.d {
            return Err(Error::DimensionMismatch {
                left: self.d,
                right: rhs.d,
            });
        }
        let (da, db) = (self.dim, rhs.dim);
        let dim = da * db;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.data[ar * da + ac];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for br in 0..db {
                    for bc in 0..db {
                        data[(ar * db + br) * dim + ac * db + bc] = a * rhs.data[br * db + bc];
                    }
                }
            }
        }
        Ok(Self {
            d: self.d,
            n: self.n + rhs.n,
            dim,
            data,
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij − B_ij|`.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖AB − BA‖_max`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        self.matmul(other)?.max_diff(&other.matmul(self)?)
    }

    /// `‖UU† − 1‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = Self::identity(self.d, self.n);
        self.matmul(&self.dagger())
            .expect("square")
            .max_diff(&id)
            .expect("same dims")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        matches!(self.max_diff(other), Ok(r) if r <= tol)
    }

    /// Exactly one nonzero entry in every row and column, each of unit modulus.
    pub fn is_monomial(&self, tol: f64) -> bool {
        let dim = self.dim;
        let mut col_count = vec![0usize; dim];
        for r in 0..dim {
            let mut row_count = 0;
            for (c, count) in col_count.iter_mut().enumerate() {
                let z = self.get(r, c);
                if z.norm() > tol {
                    if (z.norm() - 1.0).abs() > tol {
                        return false;
                    }
                    row_count += 1;
                    *count += 1;
                }
            }
            if row_count != 1 {
                return false;
            }
        }
        col_count.iter().all(|&c| c == 1)
    }
}

/// Unit complex `λ` with `‖A − λB‖_max ≤ tol`, if one exists.
///
/// `λ` is read off at the largest-modulus entry of `B`.
pub fn equal_up_to_phase(a: &DenseOperator, b: &DenseOperator, tol: f64) -> Result<Option<Complex64>> {
    a.check_same(b)?;
    let (idx, pivot) = b
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, z)| (i, *z))
        .expect("non-empty operator");
    if pivot.norm() <= tol {
        // B ≈ 0: any phase works iff A ≈ 0 as well.
        return Ok((a.max_abs() <= tol).then_some(Complex64::new(1.0, 0.0)));
    }
    let ratio = a.data[idx] / pivot;
    if ratio.norm() == 0.0 {
        return Ok(None);
    }
    let lambda = ratio / ratio.norm();
    let residual = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - lambda * y).norm())
        .fold(0.0, f64::max);
    Ok((residual <= tol).then_some(lambda))
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseOperator {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..*self
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseOperator {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            ..*self
        }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_of_scalar_multiple() {
        let id = DenseOperator::identity(2, 1);
        let i_id = id.scale(c(0.0, 1.0));
        let lambda = equal_up_to_phase(&i_id, &id, 1e-12).unwrap().unwrap();
        assert!((lambda - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn mismatched_dims_rejected() {
        let a = DenseOperator::identity(2, 1);
        let b = DenseOperator::identity(2, 2);
        assert!(equal_up_to_phase(&a, &b, 1e-12).is_err());
        assert!(a.matmul(&b).is_err());
    }

    #[test]
    fn kron_ordering() {
        // |1> ⊗ |0> is index 2 for d = 2.
        let x = DenseOperator::from_fn(2, 1, |r, col| if r != col { c_one() } else { c(0.0, 0.0) });
        let id = DenseOperator::identity(2, 1);
        let x1 = x.kron(&id).unwrap();
        assert_eq!(x1.get(2, 0), c_one());
    }

    fn c_one() -> Complex64 {
        c(1.0, 0.0)
    }

    #[test]
    fn negative_pow_is_adjoint_power() {
        let u = DenseOperator::from_fn(3, 1, |r, col| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * (r * col) as f64 / 3.0);
            w / 3f64.sqrt()
        });
        let prod = u.pow(-2).matmul(&u.pow(2)).unwrap();
        assert!(prod.approx_eq(&DenseOperator::identity(3, 1), 1e-14));
    }

    proptest! {
        #[test]
        fn recovers_any_unit_phase(theta in 0.0f64..std::f64::consts::TAU, seed in 0u64..1000) {
            let a = DenseOperator::from_fn(3, 1, |r, col| {
                let x = ((seed + 7 * r as u64 + 13 * col as u64) % 17) as f64 - 8.0;
                c(x, 0.5 * x + 1.0)
            });
            let lambda = Complex64::from_polar(1.0, theta);
            let got = equal_up_to_phase(&a.scale(lambda), &a, 1e-12).unwrap().unwrap();
            prop_assert!((got - lambda).norm() <= 1e-12);
        }
    }
}
