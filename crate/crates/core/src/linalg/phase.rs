//! Exact roots of unity `exp(2πi·num/(8d))`.
//!
//! The modulus `8d` is large enough to hold `ω = e^{2πi/d}`, its half-integer
//! powers (`ω^{1/2} = e^{πi/d}`) and the eighth-integer powers that appear in
//! the Fourier prefactor of quadratic-phase sequences.

use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Root of unity `exp(2πi·num/(8d))` with `num` reduced modulo `8d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicPhase {
    num: i64,
    d: u32,
}

impl CyclotomicPhase {
    /// Phase with raw exponent `num` in units of `2π/(8d)`.
    pub fn new(d: usize, num: i64) -> Self {
        assert!(d >= 1, "phase ring needs d >= 1");
        let modulus = 8 * d as i64;
        Self {
            num: num.rem_euclid(modulus),
            d: d as u32,
        }
    }

    pub fn one(d: usize) -> Self {
        Self::new(d, 0)
    }

    /// `ω^k` for integer `k`.
    pub fn omega(d: usize, k: i64) -> Self {
        Self::new(d, 8 * k)
    }

    /// `ω^{numer/denom}`, or `None` if the exponent does not lie in the ring
    /// (i.e. `8·numer` is not divisible by `denom`).
    pub fn omega_frac(d: usize, numer: i64, denom: i64) -> Option<Self> {
        assert!(denom != 0, "zero denominator");
        let scaled = 8 * numer;
        (scaled % denom == 0).then(|| Self::new(d, scaled / denom))
    }

    /// `e^{iπ k/d} = ω^{k/2}`.
    pub fn half_omega(d: usize, k: i64) -> Self {
        Self::new(d, 4 * k)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    pub fn modulus(&self) -> i64 {
        8 * self.d as i64
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn conj(self) -> Self {
        Self::new(self.d(), -self.num)
    }

    pub fn pow(self, k: i64) -> Self {
        let m = self.modulus() as i128;
        let e = (self.num as i128 * k as i128).rem_euclid(m);
        Self::new(self.d(), e as i64)
    }

    /// Exponent as a multiple of `ω^{1/2} = e^{iπ/d}`, if the phase is one.
    pub fn half_omega_exponent(&self) -> Option<i64> {
        (self.num % 4 == 0).then_some(self.num / 4)
    }

    pub fn angle(&self) -> f64 {
        // Map to (-π, π] before scaling so the rounding error stays ~1 ulp.
        let m = self.modulus();
        let centered = if 2 * self.num > m {
            self.num - m
        } else {
            self.num
        };
        std::f64::consts::TAU * centered as f64 / m as f64
    }

    pub fn as_complex(&self) -> Complex64 {
        let m = self.modulus();
        // Exact values on the axes.
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if 4 * self.num == m {
            return Complex64::new(0.0, 1.0);
        }
        if 2 * self.num == m {
            return Complex64::new(-1.0, 0.0);
        }
        if 4 * self.num == 3 * m {
            return Complex64::new(0.0, -1.0);
        }
        let (s, c) = self.angle().sin_cos();
        Complex64::new(c, s)
    }

    /// Snap a unit complex number onto the ring if it lies within `tol`
    /// of one of its elements.
    pub fn from_complex(d: usize, z: Complex64, tol: f64) -> Option<Self> {
        let m = 8 * d as i64;
        let turns = z.arg() / std::f64::consts::TAU;
        let num = (turns * m as f64).round() as i64;
        let candidate = Self::new(d, num);
        ((candidate.as_complex() - z).norm() <= tol).then_some(candidate)
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.d, other.d, "phases from different rings");
    }
}

impl Mul for CyclotomicPhase {
    type Output = Self;

    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        self.check_ring(&rhs);
        Self::new(self.d(), self.num + rhs.num)
    }
}

impl Div for CyclotomicPhase {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self.check_ring(&rhs);
        Self::new(self.d(), self.num - rhs.num)
    }
}

impl fmt::Display for CyclotomicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2πi·{}/{})", self.num, self.modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_modulo_8d() {
        let p = CyclotomicPhase::new(3, 25);
        assert_eq!(p.num(), 1);
        assert_eq!(CyclotomicPhase::new(3, -1).num(), 23);
    }

    #[test]
    fn omega_powers() {
        for d in 2..=7 {
            let w = CyclotomicPhase::omega(d, 1);
            assert!(w.pow(d as i64).is_one());
            let z = w.as_complex();
            let expect = Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64);
            assert!((z - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn half_and_eighth_powers() {
        // ω^{1/2} = e^{iπ/d}
        let h = CyclotomicPhase::omega_frac(4, 1, 2).unwrap();
        assert_eq!(h, CyclotomicPhase::half_omega(4, 1));
        assert!((h.as_complex() - Complex64::from_polar(1.0, std::f64::consts::PI / 4.0)).norm() < 1e-15);
        // ω^{-1/4} for d = 2 is e^{-iπ/4}
        let q = CyclotomicPhase::omega_frac(2, -1, 4).unwrap();
        assert!((q.as_complex() - Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)).norm() < 1e-15);
        assert!(CyclotomicPhase::omega_frac(3, 1, 16).is_none());
    }

    #[test]
    fn snapping() {
        let p = CyclotomicPhase::new(5, 17);
        assert_eq!(CyclotomicPhase::from_complex(5, p.as_complex(), 1e-12), Some(p));
        let off = Complex64::from_polar(1.0, 0.01);
        assert_eq!(CyclotomicPhase::from_complex(5, off, 1e-9), None);
    }

    proptest! {
        #[test]
        fn ring_arithmetic_matches_exponentials(d in 2usize..12, a in -500i64..500, b in -500i64..500, c in -500i64..500) {
            let (pa, pb, pc) = (CyclotomicPhase::new(d, a), CyclotomicPhase::new(d, b), CyclotomicPhase::new(d, c));
            prop_assert_eq!((pa * pb) * pc, pa * (pb * pc));
            prop_assert_eq!(pa * pb, pb * pa);
            let z = pa.as_complex() * pb.as_complex();
            prop_assert!(((pa * pb).as_complex() - z).norm() <= 1e-15 * 4.0);
            prop_assert!((pa.as_complex().norm() - 1.0).abs() <= 1e-15);
            let exact = Complex64::from_polar(1.0, std::f64::consts::TAU * a.rem_euclid(8 * d as i64) as f64 / (8 * d) as f64);
            // the reference angle is unreduced, so allow a few ulps of 2π
            prop_assert!((pa.as_complex() - exact).norm() <= 1e-14);
        }

        #[test]
        fn pow_matches_repeated_product(d in 2usize..8, a in -50i64..50, k in 0i64..12) {
            let p = CyclotomicPhase::new(d, a);
            let mut acc = CyclotomicPhase::one(d);
            for _ in 0..k { acc = acc * p; }
            prop_assert_eq!(p.pow(k), acc);
            prop_assert!((p * p.conj()).is_one());
        }
    }
}
