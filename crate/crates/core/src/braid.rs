//! Braid words and their matrix representation `U_i = (1/√d) Σ_m c_m Λ_i^m`.
//!
//! A [`BraidWord`] lists generators in time order: entry 0 acts first, so the
//! unitary is the product of the entries read right to left. Operator
//! products written the usual way (`V = U_4 U_3`, rightmost acting first) can
//! be read with [`BraidWord::from_operator_product`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constraints::{
    fzc_coefficients, unitarity_residual, CoefficientVector, FzcParams, Sign,
};
use crate::error::{Error, Result};
use crate::linalg::{equal_up_to_phase, CyclotomicPhase, DenseOperator};
use crate::parafermion::ParafermionSystem;

/// Coefficient vectors whose unitarity residual exceeds this are rejected.
pub const COEFFICIENT_TOL: f64 = 1e-9;

/// Exact phases are recognised within this distance of a root of unity.
pub const PHASE_SNAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidStep {
    /// 1-based generator index.
    pub generator: usize,
    pub inverse: bool,
}

impl BraidStep {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for BraidStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "-{}", self.generator)
        } else {
            write!(f, "{}", self.generator)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    steps: Vec<BraidStep>,
}

impl BraidWord {
    pub fn new(steps: Vec<BraidStep>) -> Self {
        Self { steps }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// Parse time-ordered text such as `"4 3 | 5 -4"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '|' || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let (inverse, digits) = match tok.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, tok.strip_prefix('+').unwrap_or(tok)),
            };
            let generator: usize = digits
                .parse()
                .map_err(|_| Error::BraidParse(format!("bad token {tok:?}")))?;
            if generator == 0 {
                return Err(Error::BraidParse("generator indices start at 1".into()));
            }
            steps.push(BraidStep { generator, inverse });
        }
        Ok(Self { steps })
    }

    /// Parse an operator product written left to right, e.g. `"4 3"` for
    /// `U_4 U_3` (so `U_3` acts first).
    pub fn from_operator_product(text: &str) -> Result<Self> {
        let mut w = Self::parse(text)?;
        w.steps.reverse();
        Ok(w)
    }

    /// The word as an operator product, rightmost factor acting first.
    pub fn to_operator_product(&self) -> String {
        let rev: Vec<String> = self.steps.iter().rev().map(|s| s.to_string()).collect();
        rev.join(" ")
    }

    /// Expand a named shortcut (`F`, `S`, `T`, optionally with a power such as
    /// `S^-2`) or fall back to [`BraidWord::parse`].
    pub fn from_shortcut_or_word(text: &str) -> Result<Self> {
        let t = text.trim();
        let (name, power) = match t.split_once('^') {
            Some((n, p)) => {
                let p: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::BraidParse(format!("bad exponent in {t:?}")))?;
                (n.trim(), p)
            }
            None => (t, 1),
        };
        let base = match name {
            "F" => canonical::fourier(),
            "S" => canonical::s_braid(),
            "T" => canonical::t_braid(),
            "V" => canonical::v_braid(),
            "W" => canonical::w_braid(),
            _ if power == 1 => return Self::parse(t),
            _ => return Err(Error::BraidParse(format!("unknown shortcut {name:?}"))),
        };
        Ok(base.pow(power))
    }

    pub fn steps(&self) -> &[BraidStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.steps.iter().map(|s| s.generator).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            steps: self.steps.iter().rev().map(|s| s.inverted()).collect(),
        }
    }

    /// `self` followed in time by `later`.
    pub fn then(&self, later: &Self) -> Self {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&later.steps);
        Self { steps }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut steps = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            steps.extend_from_slice(&base.steps);
        }
        Self { steps }
    }

    /// Shift every generator index by `offset` (e.g. copy a one-qudit word to qudit B).
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .map(|s| BraidStep::new(s.generator + offset, s.inverse))
                .collect(),
        }
    }

    pub fn validate(&self, n_generators: usize) -> Result<()> {
        for s in &self.steps {
            if s.generator > n_generators {
                return Err(Error::IndexOutOfRange {
                    what: "braid generator",
                    index: s.generator,
                    max: n_generators,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Braids used for the logical gates, stored both in time order and as
/// operator products.
pub mod canonical {
    use super::BraidWord;

    /// `U_1 U_2 U_1`.
    pub const FOURIER_PRODUCT: &str = "1 2 1";
    /// `V = U_4 U_3`.
    pub const V_PRODUCT: &str = "4 3";
    pub const V_WORD: &str = "3 4";
    /// `W = U_5 U_4 U_6 U_5`.
    pub const W_PRODUCT: &str = "5 4 6 5";
    pub const W_WORD: &str = "5 6 4 5";
    /// `S = V W² V†`.
    pub const S_PRODUCT: &str = "4 3 | 5 4 6 5 | 5 4 6 5 | -3 -4";
    pub const S_WORD: &str = "-4 -3 | 5 6 4 5 | 5 6 4 5 | 3 4";
    /// `T = (U_4 U_3 U_5 U_4)²`.
    pub const T_PRODUCT: &str = "4 3 5 4 | 4 3 5 4";
    pub const T_WORD: &str = "4 5 3 4 | 4 5 3 4";

    pub fn fourier() -> BraidWord {
        BraidWord::from_operator_product(FOURIER_PRODUCT).expect("fixture")
    }

    pub fn v_braid() -> BraidWord {
        BraidWord::parse(V_WORD).expect("fixture")
    }

    pub fn w_braid() -> BraidWord {
        BraidWord::parse(W_WORD).expect("fixture")
    }

    pub fn s_braid() -> BraidWord {
        BraidWord::parse(S_WORD).expect("fixture")
    }

    pub fn t_braid() -> BraidWord {
        BraidWord::parse(T_WORD).expect("fixture")
    }
}

/// A coefficient vector attached to a parafermion system, with the
/// generators `U_1 … U_{2n−1}` built once.
#[derive(Clone, Debug)]
pub struct BraidRepresentation {
    system: ParafermionSystem,
    coeffs: CoefficientVector,
    generators: Vec<DenseOperator>,
}

impl BraidRepresentation {
    pub fn new(system: ParafermionSystem, coeffs: CoefficientVector) -> Result<Self> {
        if coeffs.d() != system.d() {
            return Err(Error::CoefficientLength {
                got: coeffs.d(),
                expected: system.d(),
            });
        }
        let residual = unitarity_residual(&coeffs);
        if residual > COEFFICIENT_TOL {
            return Err(Error::NonUnitaryCoefficients { residual });
        }
        let generators = (1..=system.n_parities())
            .map(|i| braid_generator(&system, &coeffs, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            system,
            coeffs,
            generators,
        })
    }

    pub fn fzc(d: usize, n_pairs: usize, r: i64, sign: Sign) -> Result<Self> {
        let params = FzcParams::new(d, r, sign)?;
        Self::new(ParafermionSystem::build(d, n_pairs)?, fzc_coefficients(params))
    }

    pub fn system(&self) -> &ParafermionSystem {
        &self.system
    }

    pub fn coefficients(&self) -> &CoefficientVector {
        &self.coeffs
    }

    pub fn d(&self) -> usize {
        self.system.d()
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    /// `U_i`, 1-based.
    pub fn generator(&self, i: usize) -> Result<&DenseOperator> {
        if i == 0 || i > self.generators.len() {
            return Err(Error::IndexOutOfRange {
                what: "braid generator",
                index: i,
                max: self.generators.len(),
            });
        }
        Ok(&self.generators[i - 1])
    }

    pub fn generators(&self) -> &[DenseOperator] {
        &self.generators
    }

    /// FZC parameters reproducing the coefficients, if any.
    pub fn fzc_params(&self) -> Option<FzcParams> {
        FzcParams::all(self.d())
            .into_iter()
            .find(|p| fzc_coefficients(*p).distance(&self.coeffs) <= PHASE_SNAP_TOL)
    }
}

fn braid_generator(system: &ParafermionSystem, c: &CoefficientVector, i: usize) -> Result<DenseOperator> {
    let lambda = system.parity(i)?;
    let d = system.d();
    let norm = 1.0 / (d as f64).sqrt();
    let mut power = DenseOperator::identity(d, system.n_pairs());
    let mut acc = power.scale(c.get(0) * norm);
    for m in 1..d {
        // Λ on the left keeps the product cheap: Λ is monomial.
        power = lambda.matmul(&power)?;
        acc = &acc + &power.scale(c.get(m as i64) * norm);
    }
    Ok(acc)
}

/// `U_i` for the representation (a copy of the cached generator).
pub fn build_braid_operator(rep: &BraidRepresentation, i: usize) -> Result<DenseOperator> {
    rep.generator(i).cloned()
}

/// Unitary of a time-ordered braid word; inverse steps use `U_i†`.
pub fn compose_braid(rep: &BraidRepresentation, word: &BraidWord) -> Result<DenseOperator> {
    word.validate(rep.n_generators())?;
    let mut acc = DenseOperator::identity(rep.d(), rep.system.n_pairs());
    for step in word.steps() {
        let u = rep.generator(step.generator)?;
        // later steps multiply from the left
        acc = if step.inverse {
            u.dagger().matmul(&acc)?
        } else {
            u.matmul(&acc)?
        };
    }
    Ok(acc)
}

/// Matrix-level residuals of the braid relations.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RepresentationReport {
    pub unitarity: f64,
    /// `[U_i, γ_j]` for `j ∉ {i, i+1}`.
    pub locality: f64,
    /// `[U_i, Λ_i]`.
    pub parity_commutation: f64,
    /// `[U_i, U_j]` for `|i − j| > 1`; `None` with fewer than three generators.
    pub far_commutativity: Option<f64>,
    /// `U_i U_{i+1} U_i − U_{i+1} U_i U_{i+1}`; `None` with a single generator.
    pub yang_baxter: Option<f64>,
    /// `[U_i, Λ_1 Λ_3 … Λ_{2n−1}]`.
    pub parity_conservation: f64,
}

impl RepresentationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.unitarity,
            self.locality,
            self.parity_commutation,
            self.far_commutativity.unwrap_or(0.0),
            self.yang_baxter.unwrap_or(0.0),
            self.parity_conservation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn check_representation(rep: &BraidRepresentation) -> Result<RepresentationReport> {
    let sys = &rep.system;
    let us = &rep.generators;
    let total = sys.total_parity();
    let mut out = RepresentationReport::default();
    for (idx, u) in us.iter().enumerate() {
        let i = idx + 1;
        out.unitarity = out.unitarity.max(u.unitarity_residual());
        out.parity_commutation = out.parity_commutation.max(u.commutator_norm(sys.parity(i)?)?);
        out.parity_conservation = out.parity_conservation.max(u.commutator_norm(&total)?);
        for (jdx, g) in sys.gammas().iter().enumerate() {
            let j = jdx + 1;
            if j != i && j != i + 1 {
                out.locality = out.locality.max(u.commutator_norm(g)?);
            }
        }
        for (jdx, v) in us.iter().enumerate().skip(idx + 2) {
            debug_assert!(jdx > idx + 1);
            let c = u.commutator_norm(v)?;
            out.far_commutativity = Some(out.far_commutativity.unwrap_or(0.0).max(c));
        }
        if let Some(v) = us.get(idx + 1) {
            let lhs = u.matmul(v)?.matmul(u)?;
            let rhs = v.matmul(u)?.matmul(v)?;
            let r = lhs.max_diff(&rhs)?;
            out.yang_baxter = Some(out.yang_baxter.unwrap_or(0.0).max(r));
        }
    }
    Ok(out)
}

/// Closed-form check of `U γ_i U† = ω^{−r} γ_{i+1}`,
/// `U γ_{i+1} U† = ω^{1−r} γ_i† γ_{i+1}²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugationLaw {
    /// Shift entering the predicted phases.
    pub r: usize,
    /// Whether the law was checked for conjugation by `U_i†` (sign `−`).
    pub by_inverse: bool,
    pub expected_first: CyclotomicPhase,
    pub expected_second: CyclotomicPhase,
    /// Phases extracted from the matrices, when they are roots of unity.
    pub phase_first: Option<CyclotomicPhase>,
    pub phase_second: Option<CyclotomicPhase>,
    pub residual: f64,
}

impl ConjugationLaw {
    pub fn holds(&self) -> bool {
        self.phase_first == Some(self.expected_first) && self.phase_second == Some(self.expected_second)
    }
}

#[derive(Clone, Debug)]
pub struct ConjugationAction {
    /// `U_i γ_i U_i†`.
    pub image_first: DenseOperator,
    /// `U_i γ_{i+1} U_i†`.
    pub image_second: DenseOperator,
    /// Present when the coefficients are an FZC vector.
    pub law: Option<ConjugationLaw>,
}

pub fn conjugation_action(rep: &BraidRepresentation, i: usize) -> Result<ConjugationAction> {
    let u = rep.generator(i)?;
    let sys = &rep.system;
    let (gi, gn) = (sys.gamma(i)?, sys.gamma(i + 1)?);
    let ud = u.dagger();
    let image_first = u.matmul(gi)?.matmul(&ud)?;
    let image_second = u.matmul(gn)?.matmul(&ud)?;

    let law = match rep.fzc_params() {
        None => None,
        Some(p) => {
            let d = rep.d();
            let (r, by_inverse, a, b) = match p.sign {
                Sign::Plus => (p.r, false, image_first.clone(), image_second.clone()),
                // U(r, −)† = U(−r, +)
                Sign::Minus => (
                    (d - p.r) % d,
                    true,
                    ud.matmul(gi)?.matmul(u)?,
                    ud.matmul(gn)?.matmul(u)?,
                ),
            };
            let target_first = gn.clone();
            let target_second = gi.dagger().matmul(gn)?.matmul(gn)?;
            let expected_first = CyclotomicPhase::omega(d, -(r as i64));
            let expected_second = CyclotomicPhase::omega(d, 1 - r as i64);
            let ph1 = equal_up_to_phase(&a, &target_first, PHASE_SNAP_TOL)?;
            let ph2 = equal_up_to_phase(&b, &target_second, PHASE_SNAP_TOL)?;
            let residual = a
                .max_diff(&target_first.scale(expected_first.as_complex()))?
                .max(b.max_diff(&target_second.scale(expected_second.as_complex()))?);
            Some(ConjugationLaw {
                r,
                by_inverse,
                expected_first,
                expected_second,
                phase_first: ph1.and_then(|z| CyclotomicPhase::from_complex(d, z, PHASE_SNAP_TOL)),
                phase_second: ph2.and_then(|z| CyclotomicPhase::from_complex(d, z, PHASE_SNAP_TOL)),
                residual,
            })
        }
    };
    Ok(ConjugationAction {
        image_first,
        image_second,
        law,
    })
}

/// Eigenvalues `č_k` of `U_i` on the `ω^k` eigenspace of `Λ_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalPhases {
    /// `č_k = (1/√d) Σ_m c_m ω^{km}`.
    pub values: Vec<Complex64>,
    /// `c̄_k · č_0` in the exact ring for sign `+`, `c̄_{−k} · č_0` for sign `−`
    /// (FZC vectors only).
    pub exact: Option<Vec<CyclotomicPhase>>,
    /// Closed form `č_0 = ω^{−r(r+d)/2 + d(1−d)/8}` (conjugated for sign `−`).
    pub check_c0: Option<CyclotomicPhase>,
    /// Largest distance between `values` and `exact`.
    pub dft_residual: Option<f64>,
    /// `max_k ‖U_i P_k − č_k P_k‖` over the spectral projectors `P_k` of `Λ_i`.
    pub eigen_residual: f64,
}

impl DiagonalPhases {
    /// Whether every numeric `č_k` snaps to the same ring element as `exact`.
    pub fn exact_match(&self) -> bool {
        let Some(exact) = &self.exact else { return false };
        let d = exact.first().map(|p| p.d()).unwrap_or(2);
        self.values
            .iter()
            .zip(exact)
            .all(|(z, e)| CyclotomicPhase::from_complex(d, *z, PHASE_SNAP_TOL) == Some(*e))
    }
}

/// `č_k` from the coefficients alone.
pub fn dft_phases(c: &CoefficientVector) -> Vec<Complex64> {
    let d = c.d();
    let norm = 1.0 / (d as f64).sqrt();
    (0..d as i64)
        .map(|k| {
            (0..d as i64)
                .map(|m| c.get(m) * CyclotomicPhase::omega(d, k * m).as_complex())
                .sum::<Complex64>()
                * norm
        })
        .collect()
}

pub fn diagonal_phases(rep: &BraidRepresentation, i: usize) -> Result<DiagonalPhases> {
    let u = rep.generator(i)?;
    let lambda = rep.system.parity(i)?;
    let d = rep.d();
    let values = dft_phases(&rep.coeffs);

    let powers: Vec<DenseOperator> = (0..d as i64).map(|j| lambda.pow(j)).collect();
    let mut eigen_residual: f64 = 0.0;
    for (k, ck) in values.iter().enumerate() {
        let mut proj = DenseOperator::zeros(d, rep.system.n_pairs());
        for (j, p) in powers.iter().enumerate() {
            let w = CyclotomicPhase::omega(d, -((k * j) as i64)).as_complex() / d as f64;
            proj = &proj + &p.scale(w);
        }
        let lhs = u.matmul(&proj)?;
        eigen_residual = eigen_residual.max(lhs.max_diff(&proj.scale(*ck))?);
    }

    let (exact, check_c0, dft_residual) = match rep.fzc_params() {
        None => (None, None, None),
        Some(p) => {
            let c0 = p.check_c0();
            let ph = p.phases();
            let exact: Vec<CyclotomicPhase> = (0..d)
                .map(|k| {
                    let idx = match p.sign {
                        Sign::Plus => k,
                        Sign::Minus => (d - k) % d,
                    };
                    ph[idx].conj() * c0
                })
                .collect();
            let res = values
                .iter()
                .zip(&exact)
                .map(|(z, e)| (z - e.as_complex()).norm())
                .fold(0.0, f64::max);
            (Some(exact), Some(c0), Some(res))
        }
    };
    Ok(DiagonalPhases {
        values,
        exact,
        check_c0,
        dft_residual,
        eigen_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{d4_family, trivial_coefficients};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_display() {
        let w = BraidWord::parse("4 3 | 5 -4").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.steps()[3], BraidStep::new(4, true));
        assert_eq!(w.to_string(), "4 3 5 -4");
        assert_eq!(w.to_string().parse::<BraidWord>().unwrap(), w);
        assert!(BraidWord::parse("0").is_err());
        assert!(BraidWord::parse("x").is_err());
        assert!(BraidWord::parse("").unwrap().is_empty());
        assert_eq!(w.inverse().to_string(), "4 -5 -3 -4");
    }

    #[test]
    fn canonical_words_agree_in_both_notations() {
        use canonical::*;
        assert_eq!(BraidWord::from_operator_product(V_PRODUCT).unwrap(), v_braid());
        assert_eq!(BraidWord::from_operator_product(W_PRODUCT).unwrap(), w_braid());
        assert_eq!(BraidWord::from_operator_product(S_PRODUCT).unwrap(), s_braid());
        assert_eq!(BraidWord::from_operator_product(T_PRODUCT).unwrap(), t_braid());
        // S = V W² V† assembled in time order: V† first, V last
        let s = v_braid().inverse().then(&w_braid().pow(2)).then(&v_braid());
        assert_eq!(s, s_braid());
        assert_eq!(BraidWord::from_shortcut_or_word("S^-1").unwrap(), s_braid().inverse());
        assert_eq!(BraidWord::from_shortcut_or_word("F").unwrap().to_string(), "1 2 1");
        assert_eq!(BraidWord::from_shortcut_or_word("2 -1").unwrap().to_string(), "2 -1");
        assert!(BraidWord::from_shortcut_or_word("Q^2").is_err());
    }

    #[test]
    fn majorana_generator() {
        let rep = BraidRepresentation::fzc(2, 1, 0, Sign::Plus).unwrap();
        let lambda = rep.system().parity(1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = &DenseOperator::identity(2, 1).scale(c(s, 0.)) + &lambda.scale(c(0., -s));
        assert!(build_braid_operator(&rep, 1).unwrap().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn rejects_bad_coefficients() {
        let sys = ParafermionSystem::build(3, 1).unwrap();
        let bad = CoefficientVector::new(vec![c(1., 0.); 3]).unwrap();
        assert!(matches!(
            BraidRepresentation::new(sys.clone(), bad),
            Err(Error::NonUnitaryCoefficients { .. })
        ));
        let wrong_d = trivial_coefficients(2);
        assert!(BraidRepresentation::new(sys, wrong_d).is_err());
        let rep = BraidRepresentation::fzc(3, 1, 0, Sign::Plus).unwrap();
        assert!(build_braid_operator(&rep, 2).is_err());
    }

    #[test]
    fn representation_checks() {
        for d in 2..=4 {
            for r in 0..d as i64 {
                for s in [Sign::Plus, Sign::Minus] {
                    let rep = BraidRepresentation::fzc(d, 2, r, s).unwrap();
                    let rpt = check_representation(&rep).unwrap();
                    assert!(rpt.max_residual() <= 1e-10, "d={d} r={r} {s:?}: {rpt:?}");
                    assert!(rpt.yang_baxter.is_some());
                }
            }
        }
        let rep = BraidRepresentation::new(ParafermionSystem::build(3, 2).unwrap(), trivial_coefficients(3)).unwrap();
        assert!(check_representation(&rep).unwrap().max_residual() <= 1e-14);
        let rep = BraidRepresentation::new(ParafermionSystem::build(4, 2).unwrap(), d4_family(std::f64::consts::FRAC_PI_3, Sign::Plus)).unwrap();
        assert!(check_representation(&rep).unwrap().max_residual() <= 1e-10);
    }

    #[test]
    fn generator_commutes_with_outer_parity_pair() {
        let rep = BraidRepresentation::fzc(3, 2, 1, Sign::Plus).unwrap();
        let sys = rep.system();
        let outer = sys.parity(1).unwrap().matmul(sys.parity(3).unwrap()).unwrap();
        assert!(rep.generator(2).unwrap().commutator_norm(&outer).unwrap() <= 1e-12);
    }

    #[test]
    fn ivanov_rule() {
        let rep = BraidRepresentation::fzc(2, 1, 0, Sign::Plus).unwrap();
        let act = conjugation_action(&rep, 1).unwrap();
        let sys = rep.system();
        assert!(act.image_first.approx_eq(sys.gamma(2).unwrap(), 1e-14));
        assert!(act.image_second.approx_eq(&sys.gamma(1).unwrap().scale(c(-1., 0.)), 1e-14));
        assert!(act.law.unwrap().holds());
    }

    #[test]
    fn conjugation_law_all_generators() {
        for d in 2..=4 {
            for r in 0..d as i64 {
                for s in [Sign::Plus, Sign::Minus] {
                    let rep = BraidRepresentation::fzc(d, 2, r, s).unwrap();
                    for i in 1..=3 {
                        let law = conjugation_action(&rep, i).unwrap().law.unwrap();
                        assert!(law.holds(), "d={d} r={r} {s:?} i={i}: {law:?}");
                        assert!(law.residual <= 1e-10);
                    }
                }
            }
        }
        let rep = BraidRepresentation::fzc(3, 1, 1, Sign::Plus).unwrap();
        let law = conjugation_action(&rep, 1).unwrap().law.unwrap();
        assert_eq!(law.phase_first, Some(CyclotomicPhase::omega(3, -1)));
    }

    #[test]
    fn non_fzc_has_no_law() {
        let rep = BraidRepresentation::new(ParafermionSystem::build(4, 1).unwrap(), d4_family(0.3, Sign::Minus)).unwrap();
        assert!(conjugation_action(&rep, 1).unwrap().law.is_none());
        assert!(diagonal_phases(&rep, 1).unwrap().exact.is_none());
    }

    #[test]
    fn qubit_diagonal_phases() {
        let rep = BraidRepresentation::fzc(2, 1, 0, Sign::Plus).unwrap();
        let dp = diagonal_phases(&rep, 1).unwrap();
        let c0 = dp.check_c0.unwrap();
        assert_eq!(c0, CyclotomicPhase::new(2, -2));
        assert_eq!(c0 * c0, CyclotomicPhase::new(2, -4));
        assert!((dp.values[0] - c0.as_complex()).norm() < 1e-15);
        assert!(dp.exact_match());
    }

    #[test]
    fn diagonal_phases_match_eigenspaces() {
        for d in 2..=5 {
            for r in 0..d as i64 {
                for s in [Sign::Plus, Sign::Minus] {
                    let rep = BraidRepresentation::fzc(d, 2, r, s).unwrap();
                    for i in 1..=3 {
                        let dp = diagonal_phases(&rep, i).unwrap();
                        assert!(dp.eigen_residual <= 1e-12, "d={d} r={r} i={i}");
                        assert!(dp.dft_residual.unwrap() <= 1e-12, "d={d} r={r} {s:?}");
                        assert!(dp.exact_match());
                    }
                }
            }
        }
    }

    #[test]
    fn compose_conventions() {
        let rep = BraidRepresentation::fzc(3, 2, 0, Sign::Plus).unwrap();
        let id = DenseOperator::identity(3, 2);
        assert!(compose_braid(&rep, &BraidWord::identity()).unwrap().approx_eq(&id, 0.0));
        let pair = BraidWord::parse("2 -2").unwrap();
        assert!(compose_braid(&rep, &pair).unwrap().approx_eq(&id, 1e-12));
        // time order: "3 4" means U_4 U_3
        let w = compose_braid(&rep, &canonical::v_braid()).unwrap_err();
        assert!(matches!(w, Error::IndexOutOfRange { .. }));
        let w = compose_braid(&rep, &BraidWord::parse("1 2").unwrap()).unwrap();
        let expect = rep.generator(2).unwrap().matmul(rep.generator(1).unwrap()).unwrap();
        assert!(w.approx_eq(&expect, 1e-14));
    }
}
