//! Logical qudits in the neutral-parity fusion space of four parafermions.
//!
//! Logical qudit `q` (0-based) uses parities `Λ_{4q+1}` and `Λ_{4q+3}`,
//! i.e. register qudits `2q+1` and `2q+2`. Its basis state `|k⟩_L` is
//! `|k⟩ ⊗ |−k⟩` in the Fourier eigenbases of those two parities, so
//! `Λ_{4q+1} Λ_{4q+3} = 1` on the code space. For two logical qudits the
//! logical index is `k_A·d + k_B`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::braid::{canonical, compose_braid, dft_phases, BraidRepresentation, BraidWord};
use crate::clifford::{clifford_membership, CliffordTableau, PauliLabel, MEMBERSHIP_TOL};
use crate::constraints::Sign;
use crate::error::{Error, Result};
use crate::linalg::{
    equal_up_to_phase, fourier_gate, pauli_monomial, pauli_x, pauli_z, CyclotomicPhase,
    DenseOperator, QuditSystem,
};
use crate::parafermion::{fourier_eigenbasis, ParafermionSystem};

/// Maximum leakage for a braid to count as a logical gate.
pub const LEAKAGE_TOL: f64 = 1e-10;
/// Tolerance for dictionary matches.
pub const GATE_TOL: f64 = 1e-9;

/// Isometry from `n_logical` qudits into `4·n_logical` parafermions.
#[derive(Clone, Debug)]
pub struct Encoding {
    d: usize,
    n_logical: usize,
    system: ParafermionSystem,
    logical: QuditSystem,
    /// Column `L` is the image of logical basis state `L`.
    columns: Vec<Vec<Complex64>>,
}

impl Encoding {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn system(&self) -> &ParafermionSystem {
        &self.system
    }

    pub fn logical_system(&self) -> &QuditSystem {
        &self.logical
    }

    pub fn logical_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// `max |E†E − 1|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.columns.iter().enumerate() {
            for (j, b) in self.columns.iter().enumerate() {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}

pub fn build_encoding(d: usize, n_logical: usize) -> Result<Encoding> {
    if !(1..=2).contains(&n_logical) {
        return Err(Error::InvalidArgument(format!(
            "encodings are defined for 1 or 2 logical qudits, got {n_logical}"
        )));
    }
    let system = ParafermionSystem::build(d, 2 * n_logical)?;
    let logical = QuditSystem::with_bound(d, n_logical, usize::MAX)?;
    let basis = fourier_eigenbasis(d, 1);
    let mut columns = Vec::with_capacity(logical.dim());
    for l in 0..logical.dim() {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for q in 1..=n_logical {
            let k = logical.digit(l, q) as i64;
            v = kron_vec(&v, basis.vector(k));
            v = kron_vec(&v, basis.vector(-k));
        }
        columns.push(v);
    }
    let enc = Encoding {
        d,
        n_logical,
        system,
        logical,
        columns,
    };
    let res = enc.orthonormality_residual();
    if res > 1e-12 {
        return Err(Error::Invariant(format!("encoding columns not orthonormal ({res:.3e})")));
    }
    Ok(enc)
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `T(A) = E†AE` together with the leakage `‖(1 − EE†)AE‖_max`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub op: DenseOperator,
    pub leakage: f64,
}

pub fn restrict(enc: &Encoding, a: &DenseOperator) -> Result<Restriction> {
    if a.dim() != enc.system.dim() {
        return Err(Error::DimensionMismatch {
            left: enc.system.dim(),
            right: a.dim(),
        });
    }
    let ae: Vec<Vec<Complex64>> = enc.columns.iter().map(|c| a.apply(c)).collect::<Result<_>>()?;
    let op = DenseOperator::from_fn(enc.d, enc.n_logical, |i, j| {
        enc.columns[i].iter().zip(&ae[j]).map(|(x, y)| x.conj() * y).sum()
    });
    let mut leakage: f64 = 0.0;
    for (j, col) in ae.iter().enumerate() {
        for (row, &v) in col.iter().enumerate() {
            let back: Complex64 = (0..enc.columns.len())
                .map(|i| enc.columns[i][row] * op.get(i, j))
                .sum();
            leakage = leakage.max((v - back).norm());
        }
    }
    Ok(Restriction { op, leakage })
}

/// Logical `X_q`, `Z_q` (1-based logical qudit).
pub fn logical_x(enc: &Encoding, q: usize) -> Result<DenseOperator> {
    pauli_x(&enc.logical, q)
}

pub fn logical_z(enc: &Encoding, q: usize) -> Result<DenseOperator> {
    pauli_z(&enc.logical, q)
}

/// `C_X |i, j⟩ = |i, i ⊕ j⟩`.
pub fn controlled_x_gate(d: usize) -> DenseOperator {
    DenseOperator::from_fn(d, 2, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == i * d + (i + j) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `C_Z |i, j⟩ = ω^{ij} |i, j⟩`.
pub fn controlled_z_gate(d: usize) -> DenseOperator {
    let diag: Vec<Complex64> = (0..d * d)
        .map(|idx| CyclotomicPhase::omega(d, ((idx / d) * (idx % d)) as i64).as_complex())
        .collect();
    DenseOperator::from_diagonal(d, 2, &diag).expect("d² entries")
}

fn power_name(base: &str, a: i64) -> String {
    if a == 1 {
        base.to_string()
    } else {
        format!("{base}^{a}")
    }
}

/// Named gates tried by [`identify_gate`], in matching order.
pub fn gate_dictionary(rep: &BraidRepresentation, n_logical: usize) -> Result<Vec<(String, DenseOperator)>> {
    let d = rep.d();
    let mut out = vec![("I".to_string(), DenseOperator::identity(d, n_logical))];
    match n_logical {
        1 => {
            let sys = QuditSystem::new(d, 1)?;
            for a in 0..d {
                for b in 0..d {
                    if a + b > 0 {
                        let label = PauliLabel::new(d, vec![a], vec![b], 0)?;
                        out.push((label.to_string(), pauli_monomial(&sys, &[a], &[b])?));
                    }
                }
            }
            let f = fourier_gate(d)?;
            out.push(("F".into(), f.clone()));
            out.push(("F^2".into(), f.pow(2)));
            out.push(("F^3".into(), f.pow(3)));
            let ck = dft_phases(rep.coefficients());
            let diag = DenseOperator::from_diagonal(d, 1, &ck)?;
            let rev: Vec<Complex64> = (0..d).map(|k| ck[(d - k) % d]).collect();
            let diag_rev = DenseOperator::from_diagonal(d, 1, &rev)?;
            for a in 1..2 * d as i64 {
                let suffix = if a == 1 { String::new() } else { format!("^{a}") };
                out.push((format!("diag(č){suffix}"), diag.pow(a)));
                out.push((format!("diag(č_-k){suffix}"), diag_rev.pow(a)));
            }
        }
        2 => {
            let (cx, cz) = (controlled_x_gate(d), controlled_z_gate(d));
            for a in 1..d as i64 {
                out.push((power_name("C_X", a), cx.pow(a)));
            }
            for a in 1..d as i64 {
                out.push((power_name("C_Z", a), cz.pow(a)));
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!("no gate dictionary for {n_logical} qudits")));
        }
    }
    Ok(out)
}

/// Result of matching a restricted braid against the dictionary.
#[derive(Clone, Debug)]
pub struct GateIdentification {
    pub word: BraidWord,
    /// Dictionary name, or `"unknown"`.
    pub gate: String,
    /// `T(U) = λ·G`.
    pub phase: Option<Complex64>,
    /// `λ` in the exact phase ring, when it is one of its elements.
    pub exact_phase: Option<CyclotomicPhase>,
    pub leakage: f64,
    /// Largest deviation from `λ·G` (0 for unknown gates).
    pub residual: f64,
    pub logical: DenseOperator,
    /// Conjugation tableau, when the logical gate is Clifford.
    pub tableau: Option<CliffordTableau>,
}

impl GateIdentification {
    pub fn is_known(&self) -> bool {
        self.gate != "unknown"
    }

    pub fn report(&self) -> GateReport {
        GateReport {
            word: self.word.to_string(),
            gate: self.gate.clone(),
            phase_exponent_mod_8d: self.exact_phase.map(|p| p.num()),
            leakage: self.leakage,
        }
    }
}

/// JSON form of a gate identification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateReport {
    pub word: String,
    pub gate: String,
    pub phase_exponent_mod_8d: Option<i64>,
    pub leakage: f64,
}

/// Restrict the braid to the code space and fail if it leaks.
pub fn logical_gate(enc: &Encoding, rep: &BraidRepresentation, word: &BraidWord) -> Result<Restriction> {
    check_compatible(enc, rep)?;
    let u = compose_braid(rep, word)?;
    let r = restrict(enc, &u)?;
    if r.leakage > LEAKAGE_TOL {
        return Err(Error::Leakage { leakage: r.leakage });
    }
    Ok(r)
}

fn check_compatible(enc: &Encoding, rep: &BraidRepresentation) -> Result<()> {
    if rep.d() != enc.d || rep.system().n_pairs() != enc.system.n_pairs() {
        return Err(Error::DimensionMismatch {
            left: enc.system.dim(),
            right: rep.system().dim(),
        });
    }
    Ok(())
}

pub fn identify_gate(enc: &Encoding, rep: &BraidRepresentation, word: &BraidWord) -> Result<GateIdentification> {
    let r = logical_gate(enc, rep, word)?;
    let mut id = identify_logical(rep, enc.n_logical, &r.op)?;
    id.word = word.clone();
    id.leakage = r.leakage;
    Ok(id)
}

/// Match a logical operator against [`gate_dictionary`].
pub fn identify_logical(rep: &BraidRepresentation, n_logical: usize, op: &DenseOperator) -> Result<GateIdentification> {
    let d = rep.d();
    let tableau = clifford_membership(op, MEMBERSHIP_TOL);
    for (name, g) in gate_dictionary(rep, n_logical)? {
        if let Some(lambda) = equal_up_to_phase(op, &g, GATE_TOL)? {
            let residual = op.max_diff(&g.scale(lambda))?;
            return Ok(GateIdentification {
                word: BraidWord::identity(),
                gate: name,
                phase: Some(lambda),
                exact_phase: CyclotomicPhase::from_complex(d, lambda, GATE_TOL),
                leakage: 0.0,
                residual,
                logical: op.clone(),
                tableau,
            });
        }
    }
    Ok(GateIdentification {
        word: BraidWord::identity(),
        gate: "unknown".into(),
        phase: None,
        exact_phase: None,
        leakage: 0.0,
        residual: 0.0,
        logical: op.clone(),
        tableau,
    })
}

/// Image of one logical Pauli generator under conjugation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PauliImage {
    /// e.g. `"X"`, `"Z_B"`.
    pub input: String,
    /// `None` when the image is not a phased Pauli monomial.
    pub image: Option<PauliLabel>,
}

impl fmt::Display for PauliImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.image {
            Some(p) => write!(f, "{} -> {}", self.input, p),
            None => write!(f, "{} -> (not a Pauli monomial)", self.input),
        }
    }
}

/// Conjugation images `T(U) P T(U)†` of the logical `X_q`, `Z_q`.
pub fn pauli_conjugation(enc: &Encoding, rep: &BraidRepresentation, word: &BraidWord) -> Result<Vec<PauliImage>> {
    let t = logical_gate(enc, rep, word)?.op;
    pauli_images(enc, &t)
}

pub fn pauli_images(enc: &Encoding, t: &DenseOperator) -> Result<Vec<PauliImage>> {
    let td = t.dagger();
    let mut out = Vec::new();
    for (name, make) in [("X", logical_x as fn(&Encoding, usize) -> _), ("Z", logical_z)] {
        for q in 1..=enc.n_logical {
            let p = make(enc, q)?;
            let img = t.matmul(&p)?.matmul(&td)?;
            let input = if enc.n_logical == 1 {
                name.to_string()
            } else {
                format!("{name}_{}", if q == 1 { "A" } else { "B" })
            };
            out.push(PauliImage {
                input,
                image: PauliLabel::from_operator(&img, GATE_TOL),
            });
        }
    }
    Ok(out)
}

/// Product `∏ Λ_j^{e_j}` in the listed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityMonomial(pub Vec<(usize, i64)>);

impl ParityMonomial {
    pub fn single(j: usize) -> Self {
        Self(vec![(j, 1)])
    }

    pub fn to_operator(&self, sys: &ParafermionSystem) -> Result<DenseOperator> {
        let mut acc = DenseOperator::identity(sys.d(), sys.n_pairs());
        for &(j, e) in &self.0 {
            acc = acc.matmul(&sys.parity(j)?.pow(e))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for ParityMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(j, e)| if e == 1 { format!("Λ{j}") } else { format!("Λ{j}^{e}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Conjugation images of `Λ_1, Λ_2, Λ_3, Λ_5, Λ_6, Λ_7` under `S`.
pub fn s_parity_table() -> Vec<(usize, ParityMonomial)> {
    vec![
        (1, ParityMonomial::single(1)),
        (2, ParityMonomial(vec![(2, 1), (6, -2)])),
        (3, ParityMonomial::single(3)),
        (5, ParityMonomial(vec![(3, -2), (5, 1)])),
        (6, ParityMonomial::single(6)),
        (7, ParityMonomial(vec![(3, 2), (7, 1)])),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityRow {
    pub index: usize,
    pub expected: String,
    /// `U Λ_j U† = λ · expected`, if proportional.
    pub phase: Option<Complex64>,
    pub exact_phase: Option<CyclotomicPhase>,
}

impl ParityRow {
    pub fn holds(&self) -> bool {
        self.phase.is_some()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityTable {
    pub rows: Vec<ParityRow>,
    /// `[U, Λ_1Λ_3]` and `[U, Λ_5Λ_7]`.
    pub code_parity_commutator: f64,
}

impl ParityTable {
    pub fn holds(&self, tol: f64) -> bool {
        self.rows.iter().all(ParityRow::holds) && self.code_parity_commutator <= tol
    }

    /// Whether every matched row has phase exactly 1.
    pub fn phases_trivial(&self) -> bool {
        self.rows.iter().all(|r| r.exact_phase.is_some_and(|p| p.is_one()))
    }
}

/// Check `U Λ_j U† ∝ expected_j` for every listed row of an eight-parafermion system.
pub fn parity_conjugation_table(
    rep: &BraidRepresentation,
    word: &BraidWord,
    expected: &[(usize, ParityMonomial)],
) -> Result<ParityTable> {
    let sys = rep.system();
    if sys.n_modes() != 8 {
        return Err(Error::InvalidArgument(format!(
            "parity table needs 8 parafermions, got {}",
            sys.n_modes()
        )));
    }
    let u = compose_braid(rep, word)?;
    let ud = u.dagger();
    let mut rows = Vec::with_capacity(expected.len());
    for (j, mono) in expected {
        let img = u.matmul(sys.parity(*j)?)?.matmul(&ud)?;
        let phase = equal_up_to_phase(&img, &mono.to_operator(sys)?, GATE_TOL)?;
        rows.push(ParityRow {
            index: *j,
            expected: mono.to_string(),
            phase,
            exact_phase: phase.and_then(|z| CyclotomicPhase::from_complex(rep.d(), z, GATE_TOL)),
        });
    }
    let mut comm: f64 = 0.0;
    for (a, b) in [(1, 3), (5, 7)] {
        let p = sys.parity(a)?.matmul(sys.parity(b)?)?;
        comm = comm.max(u.commutator_norm(&p)?);
    }
    Ok(ParityTable {
        rows,
        code_parity_commutator: comm,
    })
}

/// Braid-derived single-qudit Clifford words for logical qudit `q`
/// (`U_{4q−3}` and `U_{4q−3} U_{4q−2} U_{4q−3}`).
pub fn single_qudit_words(q: usize) -> Vec<BraidWord> {
    let off = 4 * (q - 1);
    vec![
        BraidWord::parse("1").expect("fixture").shifted(off),
        canonical::fourier().shifted(off),
    ]
}

/// Tableaux of the braid-derived generators: single-qudit words on each
/// logical qudit, plus `S^{−2}` for two qudits.
pub fn braid_clifford_generators(d: usize, n_logical: usize, rep: &BraidRepresentation) -> Result<Vec<CliffordTableau>> {
    let enc = build_encoding(d, n_logical)?;
    let mut words: Vec<BraidWord> = (1..=n_logical).flat_map(single_qudit_words).collect();
    if n_logical == 2 {
        words.push(canonical::s_braid().pow(-2));
    }
    words
        .iter()
        .map(|w| {
            let op = logical_gate(&enc, rep, w)?.op;
            clifford_membership(&op, MEMBERSHIP_TOL)
                .ok_or_else(|| Error::Invariant(format!("braid {w} is not Clifford on the code space")))
        })
        .collect()
}

/// Outcome of the entangling identities for one representation.
#[derive(Clone, Debug, Serialize)]
pub struct EntanglingRow {
    pub r: usize,
    pub sign: Sign,
    pub s_leakage: f64,
    pub t_leakage: f64,
    /// Gate matched by `T(S†)`.
    pub s_dagger_gate: String,
    /// Gate matched by `T(T_braid)`.
    pub t_gate: String,
    pub parity_table_holds: bool,
}

/// Run the entangling identities for every `(r, sign)` at dimension `d`.
pub fn entangling_sweep(d: usize) -> Result<Vec<EntanglingRow>> {
    let enc = build_encoding(d, 2)?;
    let mut rows = Vec::new();
    for r in 0..d {
        for sign in [Sign::Plus, Sign::Minus] {
            let rep = BraidRepresentation::fzc(d, 4, r as i64, sign)?;
            let s = canonical::s_braid();
            let t = canonical::t_braid();
            let s_r = restrict(&enc, &compose_braid(&rep, &s.inverse())?)?;
            let t_r = restrict(&enc, &compose_braid(&rep, &t)?)?;
            let name = |res: &Restriction| -> Result<String> {
                if res.leakage > LEAKAGE_TOL {
                    return Ok("leaks".into());
                }
                Ok(identify_logical(&rep, 2, &res.op)?.gate)
            };
            let table = parity_conjugation_table(&rep, &s, &s_parity_table())?;
            rows.push(EntanglingRow {
                r,
                sign,
                s_leakage: s_r.leakage,
                t_leakage: t_r.leakage,
                s_dagger_gate: name(&s_r)?,
                t_gate: name(&t_r)?,
                parity_table_holds: table.holds(GATE_TOL),
            });
        }
    }
    Ok(rows)
}
