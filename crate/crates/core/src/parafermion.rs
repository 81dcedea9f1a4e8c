//! Parafermion and parity operators built from qudit Paulis by a
//! Jordan–Wigner-type string map.
//!
//! For `n` pairs on `n` qudits:
//!
//! ```text
//! γ_{2i-1} = (∏_{j<i} X_j) Z_i
//! γ_{2i}   = ω^{(d+1)/2} (∏_{j≤i} X_j) Z_i
//! Λ_i      = ω^{(d+1)/2} γ_i γ_{i+1}†
//! ```
//!
//! which gives `Λ_{2i-1} = X_i†` and `Λ_{2i} = Z_i Z_{i+1}†`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{pauli_x, pauli_z, CyclotomicPhase, DenseOperator, QuditSystem};

/// Tolerance used for the eager construction checks.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// `ω^{(d+1)/2}`, using the branch `ω^{1/2} = e^{iπ/d}`.
pub fn parity_prefactor(d: usize) -> CyclotomicPhase {
    CyclotomicPhase::omega_frac(d, d as i64 + 1, 2).expect("half-integer powers live in the ring")
}

/// `2·n_pairs` parafermion operators and their `2·n_pairs − 1` parities.
#[derive(Clone, Debug)]
pub struct ParafermionSystem {
    qudits: QuditSystem,
    gammas: Vec<DenseOperator>,
    parities: Vec<DenseOperator>,
}

impl ParafermionSystem {
    pub fn build(d: usize, n_pairs: usize) -> Result<Self> {
        let qudits = QuditSystem::new(d, n_pairs)?;
        Self::from_qudits(qudits)
    }

    pub fn from_qudits(qudits: QuditSystem) -> Result<Self> {
        let (d, n) = (qudits.d(), qudits.n());
        let pre = parity_prefactor(d).as_complex();

        let mut gammas = Vec::with_capacity(2 * n);
        let mut string = DenseOperator::identity(d, n);
        for i in 1..=n {
            let zi = pauli_z(&qudits, i)?;
            let xi = pauli_x(&qudits, i)?;
            gammas.push(string.matmul(&zi)?);
            string = string.matmul(&xi)?;
            gammas.push(string.matmul(&zi)?.scale(pre));
        }

        let parities = gammas
            .windows(2)
            .map(|w| Ok(w[0].matmul(&w[1].dagger())?.scale(pre)))
            .collect::<Result<Vec<_>>>()?;

        let sys = Self {
            qudits,
            gammas,
            parities,
        };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<()> {
        let report = check_parafermion_algebra(self);
        if report.max_residual() > ALGEBRA_TOL {
            return Err(Error::Invariant(format!(
                "parafermion relations fail with residual {:.3e}",
                report.max_residual()
            )));
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.qudits.d()
    }

    pub fn n_pairs(&self) -> usize {
        self.qudits.n()
    }

    pub fn n_modes(&self) -> usize {
        self.gammas.len()
    }

    pub fn n_parities(&self) -> usize {
        self.parities.len()
    }

    pub fn qudits(&self) -> &QuditSystem {
        &self.qudits
    }

    pub fn dim(&self) -> usize {
        self.qudits.dim()
    }

    pub fn omega(&self, k: i64) -> Complex64 {
        self.qudits.omega(k)
    }

    /// `γ_j`, 1-based.
    pub fn gamma(&self, j: usize) -> Result<&DenseOperator> {
        index(&self.gammas, j, "parafermion")
    }

    /// `Λ_i`, 1-based.
    pub fn parity(&self, i: usize) -> Result<&DenseOperator> {
        index(&self.parities, i, "parity")
    }

    pub fn gammas(&self) -> &[DenseOperator] {
        &self.gammas
    }

    pub fn parities(&self) -> &[DenseOperator] {
        &self.parities
    }

    /// `Λ_1 Λ_3 … Λ_{2n−1}`.
    pub fn total_parity(&self) -> DenseOperator {
        self.parities
            .iter()
            .step_by(2)
            .fold(DenseOperator::identity(self.d(), self.n_pairs()), |acc, p| {
                acc.matmul(p).expect("same dims")
            })
    }
}

fn index<'a>(ops: &'a [DenseOperator], i: usize, what: &'static str) -> Result<&'a DenseOperator> {
    if i == 0 || i > ops.len() {
        return Err(Error::IndexOutOfRange {
            what,
            index: i,
            max: ops.len(),
        });
    }
    Ok(&ops[i - 1])
}

/// Build `2·n_pairs` parafermions on `n_pairs` qudits.
pub fn build_parafermions(d: usize, n_pairs: usize) -> Result<ParafermionSystem> {
    ParafermionSystem::build(d, n_pairs)
}

/// `Λ_i = ω^{(d+1)/2} γ_i γ_{i+1}†`.
pub fn parity(sys: &ParafermionSystem, i: usize) -> Result<DenseOperator> {
    sys.parity(i).cloned()
}

/// Residuals of the defining relations `γ^d = 1` and
/// `γ_j γ_k = ω^{sgn(k−j)} γ_k γ_j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParafermionAlgebraReport {
    pub unitarity: f64,
    pub power: f64,
    pub exchange: f64,
    pub pairs_checked: usize,
}

impl ParafermionAlgebraReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity.max(self.power).max(self.exchange)
    }
}

pub fn check_parafermion_algebra(sys: &ParafermionSystem) -> ParafermionAlgebraReport {
    let d = sys.d();
    let id = DenseOperator::identity(d, sys.n_pairs());
    let mut report = ParafermionAlgebraReport::default();
    for g in sys.gammas() {
        report.unitarity = report.unitarity.max(g.unitarity_residual());
        report.power = report.power.max(g.pow(d as i64).max_diff(&id).expect("same dims"));
    }
    let w = sys.omega(1);
    for (j, gj) in sys.gammas().iter().enumerate() {
        for gk in sys.gammas().iter().skip(j + 1) {
            // j < k: γ_j γ_k = ω γ_k γ_j
            let lhs = gj * gk;
            let rhs = (gk * gj).scale(w);
            report.exchange = report.exchange.max(lhs.max_diff(&rhs).expect("same dims"));
            report.pairs_checked += 1;
        }
    }
    report
}

/// Residuals of `Λ^d = 1` and the parity exchange relations
/// (`[Λ_i, Λ_j] = 0` for `|i−j| > 1`, `Λ_iΛ_j = ω^{sgn(j−i)}Λ_jΛ_i` for neighbours).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParityAlgebraReport {
    pub power: f64,
    pub far: f64,
    pub adjacent: f64,
    pub pairs_checked: usize,
}

impl ParityAlgebraReport {
    pub fn max_residual(&self) -> f64 {
        self.power.max(self.far).max(self.adjacent)
    }
}

pub fn check_parity_algebra(sys: &ParafermionSystem) -> ParityAlgebraReport {
    let d = sys.d();
    let id = DenseOperator::identity(d, sys.n_pairs());
    let mut report = ParityAlgebraReport::default();
    for l in sys.parities() {
        report.power = report.power.max(l.pow(d as i64).max_diff(&id).expect("same dims"));
    }
    let ps = sys.parities();
    for i in 0..ps.len() {
        for j in 0..ps.len() {
            if i == j {
                continue;
            }
            let lhs = &ps[i] * &ps[j];
            let rhs = &ps[j] * &ps[i];
            if i.abs_diff(j) > 1 {
                report.far = report.far.max(lhs.max_diff(&rhs).expect("same dims"));
            } else {
                let sgn = if j > i { 1 } else { -1 };
                let rhs = rhs.scale(sys.omega(sgn));
                report.adjacent = report.adjacent.max(lhs.max_diff(&rhs).expect("same dims"));
            }
            report.pairs_checked += 1;
        }
    }
    report
}

/// Multiplicity of each eigenvalue `ω^m` of `Λ_i`, from the traces of the
/// spectral projectors `P_m = (1/d) Σ_j ω^{−mj} Λ_i^j`.
pub fn parity_multiplicities(sys: &ParafermionSystem, i: usize) -> Result<Vec<usize>> {
    let d = sys.d();
    let lambda = sys.parity(i)?;
    let powers: Vec<Complex64> = (0..d).map(|j| lambda.pow(j as i64).trace()).collect();
    Ok((0..d)
        .map(|m| {
            let tr: Complex64 = powers
                .iter()
                .enumerate()
                .map(|(j, t)| t * sys.omega(-((m * j) as i64)))
                .sum::<Complex64>()
                / d as f64;
            tr.re.round() as usize
        })
        .collect())
}

/// Fourier eigenbasis of an odd-indexed parity `Λ_{2q−1} = X_q†`:
/// `|m⟩ = (1/√d) Σ_k ω^{mk} |k⟩` on qudit `q`, with `Λ|m⟩ = ω^m|m⟩`.
#[derive(Clone, Debug)]
pub struct ParityEigenbasis {
    d: usize,
    parity_index: usize,
    qudit: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl ParityEigenbasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parity_index(&self) -> usize {
        self.parity_index
    }

    /// Qudit carrying this parity.
    pub fn qudit(&self) -> usize {
        self.qudit
    }

    /// Single-qudit amplitudes of `|m⟩` (label taken modulo `d`).
    pub fn vector(&self, m: i64) -> &[Complex64] {
        &self.vectors[m.rem_euclid(self.d as i64) as usize]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// `|m⟩` on the parity's qudit tensored with computational basis states
    /// `rest` on the other qudits (`rest[q-1]` is ignored for the parity's own qudit).
    pub fn embed(&self, sys: &QuditSystem, m: i64, rest: &[usize]) -> Result<Vec<Complex64>> {
        if rest.len() != sys.n() {
            return Err(Error::DimensionMismatch {
                left: sys.n(),
                right: rest.len(),
            });
        }
        let mut base = 0;
        for (q, &k) in rest.iter().enumerate() {
            if q + 1 != self.qudit {
                base += (k % sys.d()) * sys.stride(q + 1);
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); sys.dim()];
        let stride = sys.stride(self.qudit);
        for (k, amp) in self.vector(m).iter().enumerate() {
            out[base + k * stride] = *amp;
        }
        Ok(out)
    }
}

pub fn parity_eigenbasis(sys: &ParafermionSystem, i: usize) -> Result<ParityEigenbasis> {
    sys.parity(i)?;
    if i % 2 == 0 {
        return Err(Error::EvenParityIndex(i));
    }
    Ok(fourier_eigenbasis(sys.d(), i))
}

pub(crate) fn fourier_eigenbasis(d: usize, parity_index: usize) -> ParityEigenbasis {
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (0..d)
        .map(|m| {
            (0..d)
                .map(|k| CyclotomicPhase::omega(d, (m * k) as i64).as_complex() * norm)
                .collect()
        })
        .collect();
    ParityEigenbasis {
        d,
        parity_index,
        qudit: parity_index.div_ceil(2),
        vectors,
    }
}
