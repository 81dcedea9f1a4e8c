//! Clifford tableaux: images of `X_1 … X_n, Z_1 … Z_n` under conjugation.

use std::fmt;

use serde::Serialize;

use super::pauli::PauliLabel;
use crate::error::{Error, Result};
use crate::linalg::{pauli_x, pauli_z, DenseOperator, QuditSystem};

/// Default tolerance for reading conjugation images as Pauli monomials.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `images[j]` is `U X_{j+1} U†` for `j < n` and `U Z_{j−n+1} U†` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CliffordTableau {
    d: usize,
    n: usize,
    images: Vec<PauliLabel>,
}

impl CliffordTableau {
    /// Validates that the images obey the same commutation relations as the
    /// generators and that each has order `d`.
    pub fn new(d: usize, n: usize, images: Vec<PauliLabel>) -> Result<Self> {
        if images.len() != 2 * n {
            return Err(Error::Tableau(format!("expected {} images, got {}", 2 * n, images.len())));
        }
        if images.iter().any(|p| p.d() != d || p.n() != n) {
            return Err(Error::Tableau("image on a different register".into()));
        }
        let t = Self { d, n, images };
        let pre = Self::identity(d, n);
        for j in 0..2 * n {
            for k in 0..2 * n {
                let want = pre.images[j].commutation_exponent(&pre.images[k]);
                if t.images[j].commutation_exponent(&t.images[k]) != want {
                    return Err(Error::Tableau(format!(
                        "images {j} and {k} break the commutation relations"
                    )));
                }
            }
            if !t.images[j].pow(d).is_identity() {
                return Err(Error::Tableau(format!("image {j} does not have order {d}")));
            }
        }
        Ok(t)
    }

    pub fn identity(d: usize, n: usize) -> Self {
        let images = (1..=n)
            .map(|i| PauliLabel::x_on(d, n, i))
            .chain((1..=n).map(|i| PauliLabel::z_on(d, n, i)))
            .collect();
        Self { d, n, images }
    }

    /// Tableau from the images of `X_i` and `Z_i`, given per qudit.
    pub fn from_images(d: usize, n: usize, x_images: Vec<PauliLabel>, z_images: Vec<PauliLabel>) -> Result<Self> {
        let mut images = x_images;
        images.extend(z_images);
        Self::new(d, n, images)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[PauliLabel] {
        &self.images
    }

    /// Image of `X_i` (1-based).
    pub fn image_x(&self, i: usize) -> &PauliLabel {
        &self.images[i - 1]
    }

    /// Image of `Z_i` (1-based).
    pub fn image_z(&self, i: usize) -> &PauliLabel {
        &self.images[self.n + i - 1]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.d, self.n)
    }

    /// Conjugation image of an arbitrary phased monomial.
    pub fn apply(&self, p: &PauliLabel) -> PauliLabel {
        let mut acc = PauliLabel::identity(self.d, self.n).with_phase(p.phase() as i64);
        for (k, &e) in p.x().iter().chain(p.z()).enumerate() {
            for _ in 0..e {
                acc = acc.mul(&self.images[k]);
            }
        }
        acc
    }

    /// Tableau of the matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            n: self.n,
            images: other.images.iter().map(|p| self.apply(p)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.d, self.n);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Smallest `k ≥ 1` with `self^k = 1`.
    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            k += 1;
        }
        k
    }

    pub fn inverse(&self) -> Self {
        self.pow(self.order() - 1)
    }

    /// Symplectic part: column `j` holds the `(x, z)` exponents of image `j`.
    pub fn symplectic_matrix(&self) -> Vec<Vec<usize>> {
        let m = 2 * self.n;
        (0..m)
            .map(|row| {
                self.images
                    .iter()
                    .map(|p| if row < self.n { p.x()[row] } else { p.z()[row - self.n] })
                    .collect()
            })
            .collect()
    }

    pub fn phases(&self) -> Vec<usize> {
        self.images.iter().map(|p| p.phase()).collect()
    }
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(2 * self.n);
        for i in 1..=self.n {
            let q = if self.n == 1 { String::new() } else { i.to_string() };
            parts.push(format!("X{q} -> {}", self.image_x(i)));
        }
        for i in 1..=self.n {
            let q = if self.n == 1 { String::new() } else { i.to_string() };
            parts.push(format!("Z{q} -> {}", self.image_z(i)));
        }
        f.write_str(&parts.join(", "))
    }
}

/// Tableau of `u` if it maps every `X_i`, `Z_i` to a phased Pauli monomial
/// within `tol`; `None` otherwise.
pub fn clifford_membership(u: &DenseOperator, tol: f64) -> Option<CliffordTableau> {
    let (d, n) = (u.d(), u.n());
    let sys = QuditSystem::with_bound(d, n, usize::MAX).ok()?;
    let ud = u.dagger();
    let mut images = Vec::with_capacity(2 * n);
    for make in [pauli_x as fn(&QuditSystem, usize) -> _, pauli_z] {
        for i in 1..=n {
            let p = make(&sys, i).ok()?;
            // P is monomial, so P·U† is cheap on the left
            let img = u.matmul(&p.matmul(&ud).ok()?).ok()?;
            images.push(PauliLabel::from_operator(&img, tol)?);
        }
    }
    CliffordTableau::new(d, n, images).ok()
}

/// Tableaux for `{X ↦ XZ†, Z ↦ Z}` and `{X ↦ Z, Z ↦ X†}` on every qudit,
/// plus `C_X` (control 1, target 2) for two qudits. For even `d` the first
/// map carries the phase needed for an order-`d` image.
pub fn reference_generators(d: usize, n: usize) -> Result<Vec<CliffordTableau>> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidArgument(format!("reference generators need n in 1..=2, got {n}")));
    }
    let mut out = Vec::new();
    for q in 1..=n {
        let mut xs: Vec<PauliLabel> = (1..=n).map(|i| PauliLabel::x_on(d, n, i)).collect();
        let zs: Vec<PauliLabel> = (1..=n).map(|i| PauliLabel::z_on(d, n, i)).collect();
        let xz = xs[q - 1].mul(&zs[q - 1].inverse());
        xs[q - 1] = xz.with_phase(xz.order_d_phase() as i64);
        out.push(CliffordTableau::from_images(d, n, xs, zs)?);

        let mut xs: Vec<PauliLabel> = (1..=n).map(|i| PauliLabel::x_on(d, n, i)).collect();
        let mut zs: Vec<PauliLabel> = (1..=n).map(|i| PauliLabel::z_on(d, n, i)).collect();
        let x_dag = xs[q - 1].inverse();
        xs[q - 1] = zs[q - 1].clone();
        zs[q - 1] = x_dag;
        out.push(CliffordTableau::from_images(d, n, xs, zs)?);
    }
    if n == 2 {
        out.push(controlled_x(d)?);
    }
    Ok(out)
}

/// `C_X`: `X_A ↦ X_A X_B`, `Z_B ↦ Z_A† Z_B`, `Z_A`, `X_B` fixed.
pub fn controlled_x(d: usize) -> Result<CliffordTableau> {
    let xa = PauliLabel::x_on(d, 2, 1);
    let xb = PauliLabel::x_on(d, 2, 2);
    let za = PauliLabel::z_on(d, 2, 1);
    let zb = PauliLabel::z_on(d, 2, 2);
    CliffordTableau::from_images(d, 2, vec![xa.mul(&xb), xb], vec![za.clone(), za.inverse().mul(&zb)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fourier_gate, CyclotomicPhase};

    #[test]
    fn fourier_tableau() {
        for d in 2..=5 {
            let t = clifford_membership(&fourier_gate(d).unwrap(), MEMBERSHIP_TOL).unwrap();
            assert_eq!(*t.image_x(1), PauliLabel::z_on(d, 1, 1));
            assert_eq!(*t.image_z(1), PauliLabel::x_on(d, 1, 1).inverse());
            assert_eq!(t.order(), if d == 2 { 2 } else { 4 });
        }
    }

    #[test]
    fn cubic_phase_gate() {
        // k³ ≡ k (mod 3), so diag(ω^{k³}) is just Z
        let diag: Vec<_> = (0..3).map(|k| CyclotomicPhase::omega(3, k * k * k).as_complex()).collect();
        let z = DenseOperator::from_diagonal(3, 1, &diag).unwrap();
        assert!(clifford_membership(&z, MEMBERSHIP_TOL).is_some());
        // diag(e^{2πi k³/9}) is the qutrit non-Clifford phase gate
        let diag: Vec<_> = (0..3)
            .map(|k| num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * (k * k * k) as f64 / 9.0))
            .collect();
        let t = DenseOperator::from_diagonal(3, 1, &diag).unwrap();
        assert!(clifford_membership(&t, MEMBERSHIP_TOL).is_none());
    }

    #[test]
    fn reference_tableaux_validate() {
        for d in 2..=5 {
            for n in 1..=2 {
                let gens = reference_generators(d, n).unwrap();
                assert_eq!(gens.len(), 2 * n + usize::from(n == 2));
                for g in &gens {
                    let inv = g.inverse();
                    assert!(g.compose(&inv).is_identity());
                }
            }
        }
        assert!(reference_generators(3, 3).is_err());
    }

    #[test]
    fn controlled_x_matches_matrix() {
        for d in 2..=4 {
            let cx = DenseOperator::from_fn(d, 2, |r, c| {
                let (i, j) = (c / d, c % d);
                if r == i * d + (i + j) % d {
                    num_complex::Complex64::new(1.0, 0.0)
                } else {
                    num_complex::Complex64::new(0.0, 0.0)
                }
            });
            assert_eq!(clifford_membership(&cx, MEMBERSHIP_TOL).unwrap(), controlled_x(d).unwrap());
            assert_eq!(controlled_x(d).unwrap().order(), d);
        }
    }

    #[test]
    fn rejects_broken_tableau() {
        let x = PauliLabel::x_on(3, 1, 1);
        assert!(CliffordTableau::new(3, 1, vec![x.clone(), x]).is_err());
        let x = PauliLabel::x_on(2, 1, 1);
        let z = PauliLabel::z_on(2, 1, 1);
        // XZ squares to −1, so it cannot be an image
        assert!(CliffordTableau::new(2, 1, vec![x.mul(&z), z]).is_err());
    }
}
