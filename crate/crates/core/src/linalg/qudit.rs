//! Qudit registers, generalized Pauli operators and the qudit Fourier gate.
//!
//! Basis index `k = Σ_i k_i d^{n-i}`: qudit 1 is the most significant digit.

use num_complex::Complex64;

use super::operator::DenseOperator;
use super::phase::CyclotomicPhase;
use crate::error::{Error, Result};

/// Environment variable overriding the `d^n` dimension cap.
pub const SIZE_BOUND_ENV: &str = "PARABRAID_SIZE_BOUND";
pub const DEFAULT_SIZE_BOUND: usize = 4096;

/// Current dimension cap, honouring [`SIZE_BOUND_ENV`].
pub fn size_bound() -> usize {
    std::env::var(SIZE_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_BOUND)
}

/// `n` qudits of dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuditSystem {
    d: usize,
    n: usize,
}

impl QuditSystem {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        Self::with_bound(d, n, size_bound())
    }

    pub fn with_bound(d: usize, n: usize, bound: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if n < 1 {
            return Err(Error::EmptySystem { what: "qudit" });
        }
        let dim = (d as u128)
            .checked_pow(n as u32)
            .filter(|&x| x <= bound as u128)
            .ok_or(Error::SizeBound {
                dim: d.saturating_pow(n as u32),
                bound,
            })?;
        debug_assert!(dim >= 2);
        Ok(Self { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// Primitive root `ω = e^{2πi/d}` raised to `k`.
    pub fn omega(&self, k: i64) -> Complex64 {
        CyclotomicPhase::omega(self.d, k).as_complex()
    }

    /// Digit `k_i` (1-based `i`) of basis index `index`.
    pub fn digit(&self, index: usize, i: usize) -> usize {
        (index / self.d.pow((self.n - i) as u32)) % self.d
    }

    /// Place value of qudit `i`.
    pub fn stride(&self, i: usize) -> usize {
        self.d.pow((self.n - i) as u32)
    }

    fn check_qudit(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                what: "qudit",
                index: i,
                max: self.n,
            });
        }
        Ok(())
    }

    /// Lift a single-qudit operator to act on qudit `i`.
    pub fn embed(&self, op: &DenseOperator, i: usize) -> Result<DenseOperator> {
        self.check_qudit(i)?;
        if op.dim() != self.d {
            return Err(Error::DimensionMismatch {
                left: self.d,
                right: op.dim(),
            });
        }
        let stride = self.stride(i);
        let d = self.d;
        Ok(DenseOperator::from_fn(self.d, self.n, |r, c| {
            let (dr, dc) = ((r / stride) % d, (c / stride) % d);
            // Every other digit must agree.
            if r - dr * stride == c - dc * stride {
                op.get(dr, dc)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }
}

/// Single-qudit shift `X|k⟩ = |k⊕1⟩`.
pub fn shift(d: usize) -> DenseOperator {
    DenseOperator::from_fn(d, 1, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Single-qudit clock `Z|k⟩ = ω^k|k⟩`.
pub fn clock(d: usize) -> DenseOperator {
    let diag: Vec<_> = (0..d)
        .map(|k| CyclotomicPhase::omega(d, k as i64).as_complex())
        .collect();
    DenseOperator::from_diagonal(d, 1, &diag).expect("length d")
}

/// `X_i` on the full register.
pub fn pauli_x(sys: &QuditSystem, i: usize) -> Result<DenseOperator> {
    sys.embed(&shift(sys.d()), i)
}

/// `Z_i` on the full register.
pub fn pauli_z(sys: &QuditSystem, i: usize) -> Result<DenseOperator> {
    sys.embed(&clock(sys.d()), i)
}

/// `X^a Z^b` on the full register, with exponent vectors indexed by qudit.
pub fn pauli_monomial(sys: &QuditSystem, x: &[usize], z: &[usize]) -> Result<DenseOperator> {
    if x.len() != sys.n() || z.len() != sys.n() {
        return Err(Error::DimensionMismatch {
            left: sys.n(),
            right: x.len().min(z.len()),
        });
    }
    let d = sys.d();
    // X^a Z^b |k⟩ = ω^{b·k} |k + a⟩
    let mut out = DenseOperator::zeros(d, sys.n());
    for col in 0..sys.dim() {
        let mut row = 0;
        let mut phase = 0i64;
        for i in 1..=sys.n() {
            let k = sys.digit(col, i);
            phase += (z[i - 1] * k) as i64;
            row += ((k + x[i - 1]) % d) * sys.stride(i);
        }
        out.set(row, col, CyclotomicPhase::omega(d, phase).as_complex());
    }
    Ok(out)
}

/// Qudit Fourier gate `F_{km} = ω^{km}/√d`.
pub fn fourier_gate(d: usize) -> Result<DenseOperator> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(DenseOperator::from_fn(d, 1, |k, m| {
        CyclotomicPhase::omega(d, (k * m) as i64).as_complex() * norm
    }))
}
