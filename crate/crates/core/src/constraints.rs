//! Coefficient vectors of the parity-diagonal braid ansatz
//! `U = (1/√d) Σ_m c_m Λ^m` and the constraints that make it a unitary
//! braid-group representation.
//!
//! * unitarity: `Σ_m c_m c̄_{m+r} = d·δ_{r,0}` for every `r ∈ Z_d`
//! * Yang–Baxter: `Σ_r c_r c_{k−r} c_m ω^{mr} = Σ_r c_r c_k c_{m−r} ω^{kr}`
//!   for every `(k, m) ∈ Z_d²`
//!
//! Both are invariant under a global phase, the twist `c_n ↦ ω^n c_n` and
//! the conjugate-reverse map `c_n ↦ c̄_{−n}`. The overall phase is fixed by
//! requiring `c_0 ≥ 0`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CyclotomicPhase;

/// Entries with modulus at or below this are treated as zero when fixing the gauge.
pub const GAUGE_ZERO_TOL: f64 = 1e-12;

/// The `d` coefficients `c_0 … c_{d−1}` (indices taken modulo `d`),
/// rotated so that the pivot entry is real and non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientJson", into = "CoefficientJson")]
pub struct CoefficientVector {
    c: Vec<Complex64>,
    pivot: Option<usize>,
}

impl CoefficientVector {
    /// Gauge-fix and wrap `c`. The pivot is `c_0` unless `|c_0| ≤ 1e−12`, in
    /// which case the lowest-index entry above that threshold is used.
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::InvalidDimension(c.len()));
        }
        let (c, pivot) = gauge_fix(c);
        Ok(Self { c, pivot })
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::CoefficientLength {
                got: im.len(),
                expected: re.len(),
            });
        }
        Self::new(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }

    pub fn d(&self) -> usize {
        self.c.len()
    }

    /// `c_m`, index reduced modulo `d`.
    pub fn get(&self, m: i64) -> Complex64 {
        self.c[m.rem_euclid(self.d() as i64) as usize]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.c
    }

    /// Index of the entry made real and non-negative (`None` for the zero vector).
    pub fn gauge_pivot(&self) -> Option<usize> {
        self.pivot
    }

    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max_m |c_m − c'_m|`.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.d() != other.d() {
            return f64::INFINITY;
        }
        self.c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn gauge_fix(mut c: Vec<Complex64>) -> (Vec<Complex64>, Option<usize>) {
    let pivot = c.iter().position(|z| z.norm() > GAUGE_ZERO_TOL);
    if let Some(p) = pivot {
        let r = c[p].norm();
        let rot = c[p].conj() / r;
        for z in &mut c {
            *z *= rot;
        }
        c[p] = Complex64::new(r, 0.0);
    }
    (c, pivot)
}

#[derive(Serialize, Deserialize)]
struct CoefficientJson {
    d: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<CoefficientJson> for CoefficientVector {
    type Error = Error;

    fn try_from(j: CoefficientJson) -> Result<Self> {
        if j.re.len() != j.d {
            return Err(Error::CoefficientLength {
                got: j.re.len(),
                expected: j.d,
            });
        }
        Self::from_parts(&j.re, &j.im)
    }
}

impl From<CoefficientVector> for CoefficientJson {
    fn from(v: CoefficientVector) -> Self {
        Self {
            d: v.d(),
            re: v.c.iter().map(|z| z.re).collect(),
            im: v.c.iter().map(|z| z.im).collect(),
        }
    }
}

fn omega(d: usize, k: i64) -> Complex64 {
    CyclotomicPhase::omega(d, k).as_complex()
}

/// `Σ_m c_m c̄_{m+r} − d·δ_{r,0}` for each `r`.
pub fn unitarity_components(c: &CoefficientVector) -> Vec<Complex64> {
    let d = c.d() as i64;
    (0..d)
        .map(|r| {
            let s: Complex64 = (0..d).map(|m| c.get(m) * c.get(m + r).conj()).sum();
            if r == 0 {
                s - d as f64
            } else {
                s
            }
        })
        .collect()
}

/// Max-norm violation of the unitarity constraint.
pub fn unitarity_residual(c: &CoefficientVector) -> f64 {
    max_norm(&unitarity_components(c))
}

/// Left minus right side of the Yang–Baxter constraint, row-major in `(k, m)`.
pub fn yang_baxter_components(c: &CoefficientVector) -> Vec<Complex64> {
    let d = c.d() as i64;
    let du = c.d();
    let mut out = Vec::with_capacity(du * du);
    for k in 0..d {
        for m in 0..d {
            let lhs: Complex64 = (0..d)
                .map(|r| c.get(r) * c.get(k - r) * c.get(m) * omega(du, m * r))
                .sum();
            let rhs: Complex64 = (0..d)
                .map(|r| c.get(r) * c.get(k) * c.get(m - r) * omega(du, k * r))
                .sum();
            out.push(lhs - rhs);
        }
    }
    out
}

/// Max-norm violation of the Yang–Baxter constraint.
pub fn yang_baxter_residual(c: &CoefficientVector) -> f64 {
    max_norm(&yang_baxter_components(c))
}

/// Larger of the two residuals.
pub fn constraint_residual(c: &CoefficientVector) -> f64 {
    unitarity_residual(c).max(yang_baxter_residual(c))
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sign choice of the quadratic-phase family; `Minus` swaps clockwise and
/// counter-clockwise exchanges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("sign must be + or -, got {other:?}"))),
        }
    }
}

/// Parameters of the quadratic-phase (Frank–Zadoff–Chu) solutions
/// `c_m = ω^{±m(m+2r+d)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FzcParams {
    pub d: usize,
    pub r: usize,
    pub sign: Sign,
}

impl FzcParams {
    pub fn new(d: usize, r: i64, sign: Sign) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self {
            d,
            r: r.rem_euclid(d as i64) as usize,
            sign,
        })
    }

    /// All `2d` parameter choices in a fixed order (`r` ascending, `+` first).
    pub fn all(d: usize) -> Vec<Self> {
        (0..d)
            .flat_map(|r| {
                [Sign::Plus, Sign::Minus].map(|sign| Self { d, r, sign })
            })
            .collect()
    }

    /// Exact phases `c_m` in the `8d` ring.
    pub fn phases(&self) -> Vec<CyclotomicPhase> {
        let (d, r) = (self.d as i64, self.r as i64);
        (0..d)
            .map(|m| {
                // ω^{m(m+2r+d)/2}: 8d ring exponent is 4·m(m+2r+d)
                CyclotomicPhase::new(self.d, self.sign.as_i64() * 4 * m * (m + 2 * r + d))
            })
            .collect()
    }

    /// Exact Fourier prefactor `č_0 = ω^{±(−r(r+d)/2 + d(1−d)/8)}`.
    pub fn check_c0(&self) -> CyclotomicPhase {
        let (d, r) = (self.d as i64, self.r as i64);
        CyclotomicPhase::new(self.d, self.sign.as_i64() * (-4 * r * (r + d) + d * (1 - d)))
    }
}

pub fn fzc_coefficients(params: FzcParams) -> CoefficientVector {
    CoefficientVector::new(params.phases().iter().map(|p| p.as_complex()).collect())
        .expect("d >= 2")
}

/// The identity solution `c = (√d, 0, …, 0)`, for which `U ∝ 1`.
pub fn trivial_coefficients(d: usize) -> CoefficientVector {
    let mut c = vec![Complex64::new(0.0, 0.0); d];
    c[0] = Complex64::new((d as f64).sqrt(), 0.0);
    CoefficientVector::new(c).expect("d >= 2")
}

pub fn is_trivial(c: &CoefficientVector, radius: f64) -> bool {
    c.distance(&trivial_coefficients(c.d())) <= radius
}

/// Maps that leave both constraints invariant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symmetry {
    /// `c_n ↦ e^{iφ} c_n`
    GlobalPhase(f64),
    /// `c_n ↦ ω^n c_n`
    Twist,
    /// `c_n ↦ c̄_{−n}`
    ConjugateReverse,
}

/// Apply a symmetry and re-fix the gauge.
pub fn apply_symmetry(c: &CoefficientVector, which: Symmetry) -> CoefficientVector {
    let d = c.d();
    let raw: Vec<Complex64> = match which {
        Symmetry::GlobalPhase(phi) => {
            let p = Complex64::from_polar(1.0, phi);
            c.as_slice().iter().map(|z| z * p).collect()
        }
        Symmetry::Twist => (0..d as i64).map(|n| c.get(n) * omega(d, n)).collect(),
        Symmetry::ConjugateReverse => (0..d as i64).map(|n| c.get(-n).conj()).collect(),
    };
    CoefficientVector::new(raw).expect("same length")
}

/// Continuous `d = 4` family `(1, e^{iφ}, ±1, ∓e^{iφ})`.
pub fn d4_family(phi: f64, sign: Sign) -> CoefficientVector {
    let e = Complex64::from_polar(1.0, phi);
    let s = sign.as_i64() as f64;
    CoefficientVector::new(vec![Complex64::new(1.0, 0.0), e, Complex64::new(s, 0.0), -e * s])
        .expect("d = 4")
}

/// Distance from `c` to the closest member of the `d = 4` family, both signs,
/// after gauge fixing. Returns `(distance, sign, φ)`.
pub fn d4_family_distance(c: &CoefficientVector) -> Option<(f64, Sign, f64)> {
    if c.d() != 4 {
        return None;
    }
    let phi = c.get(1).arg().rem_euclid(TAU);
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|s| (c.distance(&d4_family(phi, s)), s, phi))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Solution fixtures and the reduced `d = 3`, `d = 4` equation systems,
/// written out term by term independently of the generic residuals.
pub mod fixtures {
    use super::*;

    /// `ω`-exponents of `(c_0, c_1, c_2)` for the six `d = 3` solutions in
    /// table order.
    pub const QUTRIT_TABLE: [[i64; 3]; 6] = [
        [0, 0, 1],
        [0, 2, 2],
        [0, 1, 0],
        [0, 2, 0],
        [0, 0, 2],
        [0, 1, 1],
    ];

    pub fn qutrit_solutions() -> Vec<CoefficientVector> {
        QUTRIT_TABLE
            .iter()
            .map(|row| CoefficientVector::new(row.iter().map(|&k| omega(3, k)).collect()).unwrap())
            .collect()
    }

    /// The six non-equivalent `d = 3` equations, each as `lhs − rhs`.
    pub fn qutrit_equations(c: &CoefficientVector) -> [Complex64; 6] {
        let (c0, c1, c2) = (c.get(0), c.get(1), c.get(2));
        [
            Complex64::new(c0.norm_sqr() + c1.norm_sqr() + c2.norm_sqr() - 3.0, 0.0),
            c0 * c1.conj() + c1 * c2.conj() + c2 * c0.conj(),
            c0 * c2.conj() + c1 * c0.conj() + c2 * c1.conj(),
            c0 * c0 * c1 + c1 * c1 * c2 + c2 * c2 * c0,
            c0 * c0 * c2 + c1 * c1 * c0 + c2 * c2 * c1,
            c1 * c1 * c1 - c2 * c2 * c2,
        ]
    }

    /// The seven non-equivalent `d = 4` equations, each as `lhs − rhs`.
    pub fn ququart_equations(c: &CoefficientVector) -> [Complex64; 7] {
        let (c0, c1, c2, c3) = (c.get(0), c.get(1), c.get(2), c.get(3));
        let two = Complex64::new(2.0, 0.0);
        [
            Complex64::new(
                c0.norm_sqr() + c1.norm_sqr() + c2.norm_sqr() + c3.norm_sqr() - 4.0,
                0.0,
            ),
            c0 * c1.conj() + c1 * c2.conj() + c2 * c3.conj() + c3 * c0.conj(),
            c0 * c2.conj() + c1 * c3.conj() + c2 * c0.conj() + c3 * c1.conj(),
            c1 * (c0 * c0 + c2 * c2) + two * c0 * c2 * c3,
            c3 * (c0 * c0 + c2 * c2) + two * c0 * c1 * c2,
            c0 * (c1 * c1 + c3 * c3) + c0 * c0 * c2 - c2 * c2 * c2 + two * c1 * c2 * c3,
            c1 * c1 - c3 * c3,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn cv(v: &[(f64, f64)]) -> CoefficientVector {
        CoefficientVector::new(v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn unitarity_examples() {
        assert!(unitarity_residual(&cv(&[(1., 0.), (0., 1.)])) < 1e-15);
        for d in 2..=7 {
            assert!(unitarity_residual(&trivial_coefficients(d)) < 1e-14);
        }
        // r = 1 term of (1,1,1) sums to 3.
        let r = unitarity_residual(&cv(&[(1., 0.), (1., 0.), (1., 0.)]));
        assert!((r - 3.0).abs() < 1e-14);
    }

    #[test]
    fn yang_baxter_examples() {
        for d in 2..=7 {
            assert!(yang_baxter_residual(&trivial_coefficients(d)) < 1e-12);
        }
        let w = omega(3, 1);
        let c = CoefficientVector::new(vec![Complex64::new(1., 0.), Complex64::new(1., 0.), w]).unwrap();
        assert!(yang_baxter_residual(&c) < 1e-14);
    }

    #[test]
    fn fzc_family_solves_both_constraints() {
        for d in 2..=7 {
            for p in FzcParams::all(d) {
                let c = fzc_coefficients(p);
                assert!(unitarity_residual(&c) <= 1e-12, "{p:?}");
                assert!(yang_baxter_residual(&c) <= 1e-12, "{p:?}");
                // c_{m+d} = c_m holds for the closed form itself
                let ph = p.phases();
                for m in 0..d as i64 {
                    let shifted = CyclotomicPhase::new(
                        d,
                        p.sign.as_i64() * 4 * (m + d as i64) * (m + d as i64 + 2 * p.r as i64 + d as i64),
                    );
                    assert_eq!(shifted, ph[m as usize]);
                }
            }
        }
    }

    #[test]
    fn fzc_small_cases() {
        let c = fzc_coefficients(FzcParams::new(2, 0, Sign::Plus).unwrap());
        assert!(c.distance(&cv(&[(1., 0.), (0., -1.)])) < 1e-15);
        let c = fzc_coefficients(FzcParams::new(3, 0, Sign::Plus).unwrap());
        assert!(c.distance(&qutrit_solutions()[1]) < 1e-15);
    }

    #[test]
    fn fzc_reproduces_qutrit_table() {
        let table = qutrit_solutions();
        let mut hit = [false; 6];
        for p in FzcParams::all(3) {
            let c = fzc_coefficients(p);
            let idx = table.iter().position(|t| t.distance(&c) < 1e-12).expect("in table");
            assert!(!hit[idx], "duplicate");
            hit[idx] = true;
            let partner = apply_symmetry(&c, Symmetry::ConjugateReverse);
            let pidx = table.iter().position(|t| t.distance(&partner) < 1e-12).unwrap();
            // conjugate-reverse swaps the sign classes
            assert_eq!(
                FzcParams::all(3)
                    .into_iter()
                    .find(|q| fzc_coefficients(*q).distance(&table[pidx]) < 1e-12)
                    .unwrap()
                    .sign,
                p.sign.flip()
            );
        }
        assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn qutrit_table_satisfies_each_equation() {
        for c in qutrit_solutions() {
            for (i, e) in qutrit_equations(&c).iter().enumerate() {
                assert!(e.norm() <= 1e-12, "equation {i} fails for {c:?}");
            }
            assert!(constraint_residual(&c) <= 1e-12);
        }
    }

    #[test]
    fn symmetries() {
        let base = fzc_coefficients(FzcParams::new(5, 2, Sign::Plus).unwrap());
        let mut t = base.clone();
        for _ in 0..5 {
            t = apply_symmetry(&t, Symmetry::Twist);
        }
        assert!(t.distance(&base) < 1e-13);

        let c = cv(&[(1., 0.), (0., 1.)]);
        let cr = apply_symmetry(&c, Symmetry::ConjugateReverse);
        assert!(cr.distance(&cv(&[(1., 0.), (0., -1.)])) < 1e-15);

        for d in 2..=6 {
            for r in 0..d as i64 {
                let plus = fzc_coefficients(FzcParams::new(d, r, Sign::Plus).unwrap());
                let next = fzc_coefficients(FzcParams::new(d, r + 1, Sign::Plus).unwrap());
                assert!(apply_symmetry(&plus, Symmetry::Twist).distance(&next) < 1e-12);
                let minus = fzc_coefficients(FzcParams::new(d, r, Sign::Minus).unwrap());
                let prev = fzc_coefficients(FzcParams::new(d, r - 1, Sign::Minus).unwrap());
                assert!(apply_symmetry(&minus, Symmetry::Twist).distance(&prev) < 1e-12);
                let mirrored = fzc_coefficients(FzcParams::new(d, -r, Sign::Minus).unwrap());
                assert!(apply_symmetry(&plus, Symmetry::ConjugateReverse).distance(&mirrored) < 1e-12);
            }
        }
    }

    #[test]
    fn symmetries_preserve_residuals() {
        let inputs = [
            fzc_coefficients(FzcParams::new(4, 1, Sign::Minus).unwrap()),
            d4_family(0.7, Sign::Plus),
            cv(&[(0.3, 0.2), (1.1, -0.4), (0.0, 0.9)]),
        ];
        for c in &inputs {
            for s in [Symmetry::GlobalPhase(1.3), Symmetry::Twist, Symmetry::ConjugateReverse] {
                let t = apply_symmetry(c, s);
                assert!((unitarity_residual(&t) - unitarity_residual(c)).abs() <= 1e-12);
                assert!((yang_baxter_residual(&t) - yang_baxter_residual(c)).abs() <= 1e-12);
                assert!(t.get(0).im == 0.0 && t.get(0).re >= 0.0);
            }
        }
    }

    #[test]
    fn d4_family_checks() {
        let c = d4_family(0.0, Sign::Plus);
        assert!(c.distance(&cv(&[(1., 0.), (1., 0.), (1., 0.), (-1., 0.)])) < 1e-15);
        let mut worst: f64 = 0.0;
        for k in 0..64 {
            let phi = TAU * k as f64 / 64.0;
            for s in [Sign::Plus, Sign::Minus] {
                let c = d4_family(phi, s);
                worst = worst.max(constraint_residual(&c));
                let m = c.get(0).norm();
                assert!((1..4).all(|i| (c.get(i).norm() - m).abs() < 1e-15));
                assert!((c.get(1) * c.get(1) - c.get(3) * c.get(3)).norm() < 1e-15);
                assert!(ququart_equations(&c).iter().all(|e| e.norm() < 1e-12));
                let (dist, sign, _) = d4_family_distance(&c).unwrap();
                assert!(dist < 1e-12 && sign == s);
            }
        }
        assert!(worst <= 1e-12);
        for p in FzcParams::all(4) {
            let c = fzc_coefficients(p);
            assert!(ququart_equations(&c).iter().all(|e| e.norm() < 1e-12), "{p:?}");
        }
        // a unitary non-solution violates at least one reduced equation
        let c = cv(&[(2., 0.), (0., 0.), (0., 0.), (0., 0.)]);
        assert!(ququart_equations(&c).iter().all(|e| e.norm() < 1e-12));
        let c = fzc_coefficients(FzcParams::new(4, 0, Sign::Plus).unwrap());
        let mixed = CoefficientVector::new(vec![c.get(0), c.get(1), c.get(2) * -1.0, c.get(3)]).unwrap();
        assert!(yang_baxter_residual(&mixed) > 1e-3);
        assert!(ququart_equations(&mixed).iter().any(|e| e.norm() > 1e-3));
    }

    #[test]
    fn gauge_fixing_with_vanishing_c0() {
        let c = cv(&[(0., 0.), (0., 2.), (1., 1.)]);
        assert_eq!(c.gauge_pivot(), Some(1));
        assert_eq!(c.get(1), Complex64::new(2.0, 0.0));
        assert!((c.get(2) - Complex64::new(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let c = cv(&[(1., 0.), (0., 1.)]);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["d"], 2);
        assert_eq!(v["re"].as_array().unwrap().len(), 2);
        let back: CoefficientVector = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        let bad = serde_json::json!({"d": 3, "re": [1.0], "im": [0.0]});
        assert!(serde_json::from_value::<CoefficientVector>(bad).is_err());
    }
}
