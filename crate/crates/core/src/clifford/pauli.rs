//! Phased generalized Pauli operators `e^{iπp/d} ∏_i X_i^{a_i} ∏_i Z_i^{b_i}`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli_monomial, CyclotomicPhase, DenseOperator, QuditSystem};

/// Pauli monomial with phase exponent `p ∈ Z_{2d}` in units of `e^{iπ/d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliLabel {
    d: usize,
    x: Vec<usize>,
    z: Vec<usize>,
    phase: usize,
}

impl PauliLabel {
    pub fn new(d: usize, x: Vec<usize>, z: Vec<usize>, phase: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if x.len() != z.len() || x.is_empty() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(Self {
            x: x.into_iter().map(|a| a % d).collect(),
            z: z.into_iter().map(|b| b % d).collect(),
            phase: phase.rem_euclid(2 * d as i64) as usize,
            d,
        })
    }

    pub fn identity(d: usize, n: usize) -> Self {
        Self {
            d,
            x: vec![0; n],
            z: vec![0; n],
            phase: 0,
        }
    }

    /// `X_i` (1-based).
    pub fn x_on(d: usize, n: usize, i: usize) -> Self {
        let mut p = Self::identity(d, n);
        p.x[i - 1] = 1;
        p
    }

    /// `Z_i` (1-based).
    pub fn z_on(d: usize, n: usize, i: usize) -> Self {
        let mut p = Self::identity(d, n);
        p.z[i - 1] = 1;
        p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    /// Phase exponent in units of `e^{iπ/d}`.
    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn phase_ring(&self) -> CyclotomicPhase {
        CyclotomicPhase::half_omega(self.d, self.phase as i64)
    }

    pub fn with_phase(&self, phase: i64) -> Self {
        let mut p = self.clone();
        p.phase = phase.rem_euclid(2 * self.d as i64) as usize;
        p
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    fn dot(u: &[usize], v: &[usize]) -> usize {
        u.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!((self.d, self.n()), (rhs.d, rhs.n()));
        let d = self.d;
        // Z^b X^{a'} = ω^{b·a'} X^{a'} Z^b
        let phase = (self.phase + rhs.phase + 2 * Self::dot(&self.z, &rhs.x)) % (2 * d);
        Self {
            d,
            x: self.x.iter().zip(&rhs.x).map(|(a, b)| (a + b) % d).collect(),
            z: self.z.iter().zip(&rhs.z).map(|(a, b)| (a + b) % d).collect(),
            phase,
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.d, self.n());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        let d = self.d;
        // (X^a Z^b)^{-1} = Z^{-b} X^{-a} = ω^{a·b} X^{-a} Z^{-b}
        let phase = (2 * d - self.phase + 2 * Self::dot(&self.x, &self.z)) % (2 * d);
        Self {
            d,
            x: self.x.iter().map(|a| (d - a) % d).collect(),
            z: self.z.iter().map(|b| (d - b) % d).collect(),
            phase,
        }
    }

    /// `k` with `self · other = ω^k other · self`.
    pub fn commutation_exponent(&self, other: &Self) -> usize {
        let d = self.d;
        (Self::dot(&self.z, &other.x) + d * d - Self::dot(&self.x, &other.z) % d) % d
    }

    /// Smallest phase making `self^d = 1` for the same monomial.
    pub fn order_d_phase(&self) -> usize {
        let d = self.d;
        // (X^a Z^b)^d = ω^{(a·b) d(d−1)/2}; in e^{iπ/d} units that is (a·b)·d(d−1)
        let pd = (Self::dot(&self.x, &self.z) * d * (d - 1)) % (2 * d);
        (0..2 * d).find(|p| (p * d + pd) % (2 * d) == 0).expect("p = 1 or 0 works")
    }

    pub fn to_operator(&self) -> Result<DenseOperator> {
        let sys = QuditSystem::new(self.d, self.n())?;
        Ok(pauli_monomial(&sys, &self.x, &self.z)?.scale(self.phase_ring().as_complex()))
    }

    /// Read `op` as `λ X^a Z^b` with `λ = e^{iπp/d}`, within `tol`.
    pub fn from_operator(op: &DenseOperator, tol: f64) -> Option<Self> {
        let (d, n) = (op.d(), op.n());
        let sys = QuditSystem::with_bound(d, n, usize::MAX).ok()?;
        let dim = sys.dim();
        // X^a Z^b |0⟩ = |a⟩
        let (row0, lambda) = (0..dim)
            .map(|r| (r, op.get(r, 0)))
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if lambda.norm() < 0.5 {
            return None;
        }
        let x: Vec<usize> = (1..=n).map(|i| sys.digit(row0, i)).collect();
        let mut z = Vec::with_capacity(n);
        for i in 1..=n {
            let col = sys.stride(i);
            let row = (0..n).fold(0, |acc, q| {
                let k = if q + 1 == i { 1 } else { 0 };
                acc + ((k + x[q]) % d) * sys.stride(q + 1)
            });
            let ratio = op.get(row, col) / lambda;
            let w = CyclotomicPhase::from_complex(d, ratio, tol.sqrt().max(1e-6))?;
            // ω^{b}: 8d-ring exponent 8b
            if w.num() % 8 != 0 {
                return None;
            }
            z.push((w.num() / 8) as usize % d);
        }
        let ph = CyclotomicPhase::from_complex(d, lambda, tol.sqrt().max(1e-6))?;
        let p = ph.half_omega_exponent()?;
        let label = Self::new(d, x, z, p).ok()?;
        let candidate = label.to_operator().ok()?;
        (candidate.max_diff(op).ok()? <= tol).then_some(label)
    }

    pub fn phase_complex(&self) -> Complex64 {
        self.phase_ring().as_complex()
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.phase != 0 {
            parts.push(format!("e^(iπ·{}/{})", self.phase, self.d));
        }
        let single = self.n() == 1;
        for (name, exps) in [("X", &self.x), ("Z", &self.z)] {
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let q = if single { String::new() } else { (i + 1).to_string() };
                if e == 1 {
                    parts.push(format!("{name}{q}"));
                } else {
                    parts.push(format!("{name}{q}^{e}"));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn label(d: usize, x: Vec<usize>, z: Vec<usize>, p: i64) -> PauliLabel {
        PauliLabel::new(d, x, z, p).unwrap()
    }

    #[test]
    fn commutation_of_x_and_z() {
        let x = PauliLabel::x_on(3, 1, 1);
        let z = PauliLabel::z_on(3, 1, 1);
        // ZX = ωXZ
        let zx = z.mul(&x);
        assert_eq!(zx, x.mul(&z).with_phase(2));
        assert_eq!(z.commutation_exponent(&x), 1);
        assert_eq!(x.commutation_exponent(&z), 2);
    }

    #[test]
    fn order_d_phases() {
        assert_eq!(label(2, vec![1], vec![1], 0).order_d_phase(), 1);
        assert_eq!(label(3, vec![1], vec![2], 0).order_d_phase(), 0);
        assert_eq!(label(4, vec![1], vec![3], 0).order_d_phase(), 1);
        let p = label(4, vec![1], vec![3], 1);
        assert!(p.pow(4).is_identity());
    }

    #[test]
    fn round_trip_through_matrices() {
        let p = label(3, vec![1, 2], vec![0, 1], 3);
        let op = p.to_operator().unwrap();
        assert_eq!(PauliLabel::from_operator(&op, 1e-9), Some(p));
        let f = crate::linalg::fourier_gate(3).unwrap();
        assert!(PauliLabel::from_operator(&f, 1e-9).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(label(3, vec![1], vec![2], 0).to_string(), "X Z^2");
        assert_eq!(label(3, vec![0, 1], vec![0, 0], 0).to_string(), "X2");
        assert_eq!(PauliLabel::identity(2, 2).to_string(), "I");
    }

    fn arb_label(d: usize, n: usize) -> impl Strategy<Value = PauliLabel> {
        (
            proptest::collection::vec(0..d, n),
            proptest::collection::vec(0..d, n),
            0..(2 * d as i64),
        )
            .prop_map(move |(x, z, p)| PauliLabel::new(d, x, z, p).unwrap())
    }

    proptest! {
        #[test]
        fn product_matches_matrices(
            (a, b) in (2usize..=5).prop_flat_map(|d| {
                let n = if d <= 3 { 2 } else { 1 };
                (arb_label(d, n), arb_label(d, n))
            })
        ) {
            let lhs = a.mul(&b).to_operator().unwrap();
            let rhs = a.to_operator().unwrap().matmul(&b.to_operator().unwrap()).unwrap();
            prop_assert!(lhs.max_diff(&rhs).unwrap() <= 1e-12);
            prop_assert!(a.mul(&a.inverse()).is_identity());
            prop_assert!(a.inverse().mul(&a).is_identity());
        }

        #[test]
        fn multiplication_is_associative(
            (a, b, c) in (arb_label(4, 2), arb_label(4, 2), arb_label(4, 2))
        ) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
