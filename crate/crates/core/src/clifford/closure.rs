//! Breadth-first closure of a set of Clifford tableaux.
//!
//! Elements are stored only as packed `u128` keys of their tableau. With
//! [`PhaseMode::Tracked`] the key holds the symplectic part and the phase
//! vector; conjugation tableaux do not see the global phase of the unitary,
//! so no further quotient is needed. [`PhaseMode::Ignored`] drops the phase
//! vector, which quotients by the Pauli group.

use std::collections::HashSet;

use rayon::prelude::*;

use super::pauli::PauliLabel;
use super::tableau::CliffordTableau;
use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_LIMIT: usize = 10_000_000;

/// Whether image phases are part of an element's identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseMode {
    Tracked,
    Ignored,
}

/// Bit layout of a packed tableau.
#[derive(Clone, Copy, Debug)]
struct Layout {
    d: usize,
    n: usize,
    exp_bits: u32,
    phase_bits: u32,
    phases: PhaseMode,
}

impl Layout {
    fn new(d: usize, n: usize, phases: PhaseMode) -> Result<Self> {
        let bits = |v: usize| usize::BITS - (v - 1).leading_zeros();
        let l = Self {
            d,
            n,
            exp_bits: bits(d),
            phase_bits: bits(2 * d),
            phases,
        };
        let total = 2 * n as u32 * (2 * n as u32 * l.exp_bits + l.phase_bits);
        if total > 128 {
            return Err(Error::Tableau(format!("tableau for d={d}, n={n} needs {total} bits")));
        }
        Ok(l)
    }

    /// Entries per image: `n` x-exponents, `n` z-exponents, phase.
    fn stride(&self) -> usize {
        2 * self.n + 1
    }

    fn flat_len(&self) -> usize {
        2 * self.n * self.stride()
    }

    fn pack(&self, flat: &[u16]) -> u128 {
        let mut key = 0u128;
        for img in flat.chunks(self.stride()) {
            for &e in &img[..2 * self.n] {
                key = (key << self.exp_bits) | e as u128;
            }
            let p = if self.phases == PhaseMode::Tracked { img[2 * self.n] } else { 0 };
            key = (key << self.phase_bits) | p as u128;
        }
        key
    }

    fn unpack(&self, mut key: u128, flat: &mut [u16]) {
        let emask = (1u128 << self.exp_bits) - 1;
        let pmask = (1u128 << self.phase_bits) - 1;
        for img in flat.chunks_mut(self.stride()).rev() {
            img[2 * self.n] = (key & pmask) as u16;
            key >>= self.phase_bits;
            for e in img[..2 * self.n].iter_mut().rev() {
                *e = (key & emask) as u16;
                key >>= self.exp_bits;
            }
        }
    }

    fn flatten(&self, t: &CliffordTableau) -> Vec<u16> {
        t.images()
            .iter()
            .flat_map(|p| {
                p.x()
                    .iter()
                    .chain(p.z())
                    .map(|&e| e as u16)
                    .chain(std::iter::once(p.phase() as u16))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn to_tableau(self, flat: &[u16]) -> Result<CliffordTableau> {
        let images = flat
            .chunks(self.stride())
            .map(|img| {
                let p = PauliLabel::new(
                    self.d,
                    img[..self.n].iter().map(|&e| e as usize).collect(),
                    img[self.n..2 * self.n].iter().map(|&e| e as usize).collect(),
                    img[2 * self.n] as i64,
                )?;
                Ok(match self.phases {
                    PhaseMode::Tracked => p,
                    PhaseMode::Ignored => {
                        let ph = p.order_d_phase() as i64;
                        p.with_phase(ph)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CliffordTableau::new(self.d, self.n, images)
    }
}

/// A generator prepared for fast left multiplication: `powers[k][e]` is the
/// flat label of `image_k^e`.
struct Prepared {
    powers: Vec<Vec<Vec<u16>>>,
}

impl Prepared {
    fn new(layout: &Layout, t: &CliffordTableau) -> Self {
        let powers = t
            .images()
            .iter()
            .map(|img| {
                (0..layout.d)
                    .map(|e| {
                        let p = img.pow(e);
                        p.x().iter().chain(p.z()).map(|&v| v as u16).chain([p.phase() as u16]).collect()
                    })
                    .collect()
            })
            .collect();
        Self { powers }
    }

    /// `out = self ∘ elem` on flat tableaux.
    fn compose(&self, layout: &Layout, elem: &[u16], out: &mut [u16]) {
        let (d, n, s) = (layout.d as u32, layout.n, layout.stride());
        let two_d = 2 * d;
        for (src, dst) in elem.chunks(s).zip(out.chunks_mut(s)) {
            let mut phase = src[2 * n] as u32;
            let mut acc = [0u32; 16];
            let acc = &mut acc[..2 * n];
            for (k, &e) in src[..2 * n].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let f = &self.powers[k][e as usize];
                // acc · f picks up ω^{z_acc · x_f}
                let cross: u32 = (0..n).map(|i| acc[n + i] * f[i] as u32).sum();
                phase += f[2 * n] as u32 + 2 * cross;
                for (a, &b) in acc.iter_mut().zip(&f[..2 * n]) {
                    *a = (*a + b as u32) % d;
                }
                phase %= two_d;
            }
            for (o, a) in dst[..2 * n].iter_mut().zip(acc.iter()) {
                *o = *a as u16;
            }
            dst[2 * n] = (phase % two_d) as u16;
        }
    }
}

/// A finite group of Clifford tableaux.
#[derive(Clone, Debug)]
pub struct CliffordGroup {
    d: usize,
    n: usize,
    generators: Vec<CliffordTableau>,
    elements: HashSet<u128>,
    levels: usize,
    phases: PhaseMode,
}

impl CliffordGroup {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Number of breadth-first levels (word-length radius plus one).
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn generators(&self) -> &[CliffordTableau] {
        &self.generators
    }

    pub fn phase_mode(&self) -> PhaseMode {
        self.phases
    }

    pub fn contains(&self, t: &CliffordTableau) -> bool {
        if (t.d(), t.n()) != (self.d, self.n) {
            return false;
        }
        let layout = Layout::new(self.d, self.n, self.phases).expect("validated at closure");
        self.elements.contains(&layout.pack(&layout.flatten(t)))
    }

    /// Equal order and each generating set contained in the other group.
    pub fn same_group(&self, other: &Self) -> bool {
        self.phases == other.phases
            && self.order() == other.order()
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// All elements as tableaux (sorted by key). Only sensible for small
    /// groups. Without tracked phases each image gets its order-`d` phase.
    pub fn elements(&self) -> Vec<CliffordTableau> {
        let layout = Layout::new(self.d, self.n, self.phases).expect("validated at closure");
        let mut keys: Vec<u128> = self.elements.iter().copied().collect();
        keys.sort_unstable();
        let mut flat = vec![0u16; layout.flat_len()];
        keys.into_iter()
            .map(|k| {
                layout.unpack(k, &mut flat);
                layout.to_tableau(&flat).expect("group elements are valid tableaux")
            })
            .collect()
    }
}

/// `|Sp(2n, Z_d)| · d^{2n}`: the order of the Clifford group modulo phases,
/// from the prime-power factorisation of `d`.
pub fn clifford_group_order(d: usize, n: usize) -> u128 {
    let mut order: u128 = 1;
    let mut rest = d as u128;
    let mut p = 2u128;
    let dim = (n * (2 * n + 1)) as u32;
    while rest > 1 {
        if rest % p == 0 {
            let mut k = 0u32;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            // |Sp(2n, F_p)| = p^{n²} ∏_{i=1}^{n} (p^{2i} − 1)
            let mut sp = p.pow((n * n) as u32);
            for i in 1..=n as u32 {
                sp *= p.pow(2 * i) - 1;
            }
            order *= sp * p.pow((k - 1) * dim);
        }
        p += 1;
    }
    order * (d as u128).pow(2 * n as u32)
}

/// `|Sp(2n, Z_d)|`, the order of the Clifford group modulo Paulis and phases.
pub fn symplectic_group_order(d: usize, n: usize) -> u128 {
    clifford_group_order(d, n) / (d as u128).pow(2 * n as u32)
}

/// Close `generators` (and their inverses) under composition, tracking phases.
pub fn closure(generators: &[CliffordTableau], limit: usize) -> Result<CliffordGroup> {
    closure_with(generators, limit, PhaseMode::Tracked)
}

pub fn closure_with(generators: &[CliffordTableau], limit: usize, phases: PhaseMode) -> Result<CliffordGroup> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidArgument("closure needs at least one generator".into()))?;
    let (d, n) = (first.d(), first.n());
    if generators.iter().any(|g| (g.d(), g.n()) != (d, n)) {
        return Err(Error::Tableau("generators act on different registers".into()));
    }
    let layout = Layout::new(d, n, phases)?;

    let mut moves: Vec<CliffordTableau> = Vec::new();
    for g in generators {
        for t in [g.clone(), g.inverse()] {
            if !t.is_identity() && !moves.contains(&t) {
                moves.push(t);
            }
        }
    }
    let prepared: Vec<Prepared> = moves.iter().map(|g| Prepared::new(&layout, g)).collect();

    let id = layout.pack(&layout.flatten(&CliffordTableau::identity(d, n)));
    let mut elements = HashSet::new();
    elements.insert(id);
    let mut frontier = vec![id];
    let mut levels = 1;
    while !frontier.is_empty() {
        let found: Vec<Vec<u128>> = frontier
            .par_chunks(4096)
            .map(|chunk| {
                let mut elem = vec![0u16; layout.flat_len()];
                let mut out = vec![0u16; layout.flat_len()];
                let mut keys = Vec::with_capacity(chunk.len() * prepared.len());
                for &k in chunk {
                    layout.unpack(k, &mut elem);
                    for g in &prepared {
                        g.compose(&layout, &elem, &mut out);
                        keys.push(layout.pack(&out));
                    }
                }
                keys
            })
            .collect();
        let mut next = Vec::new();
        for k in found.into_iter().flatten() {
            if elements.insert(k) {
                if elements.len() > limit {
                    return Err(Error::LimitExceeded { limit });
                }
                next.push(k);
            }
        }
        if !next.is_empty() {
            levels += 1;
        }
        frontier = next;
    }
    Ok(CliffordGroup {
        d,
        n,
        generators: generators.to_vec(),
        elements,
        levels,
        phases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::tableau::reference_generators;

    #[test]
    fn pack_round_trip() {
        let layout = Layout::new(3, 2, PhaseMode::Tracked).unwrap();
        for g in reference_generators(3, 2).unwrap() {
            let flat = layout.flatten(&g);
            let mut back = vec![0u16; flat.len()];
            layout.unpack(layout.pack(&flat), &mut back);
            assert_eq!(flat, back);
            assert_eq!(layout.to_tableau(&back).unwrap(), g);
        }
        assert!(Layout::new(16, 3, PhaseMode::Tracked).is_err());
    }

    #[test]
    fn flat_composition_matches_tableau_composition() {
        let layout = Layout::new(4, 2, PhaseMode::Tracked).unwrap();
        let gens = reference_generators(4, 2).unwrap();
        for a in &gens {
            let p = Prepared::new(&layout, a);
            for b in &gens {
                let mut out = vec![0u16; layout.flat_len()];
                p.compose(&layout, &layout.flatten(b), &mut out);
                assert_eq!(layout.to_tableau(&out).unwrap(), a.compose(b));
            }
        }
    }

    #[test]
    fn small_reference_orders() {
        let g = closure(&reference_generators(2, 1).unwrap(), DEFAULT_CLOSURE_LIMIT).unwrap();
        assert_eq!(g.order(), 24);
        let g = closure(&reference_generators(3, 1).unwrap(), DEFAULT_CLOSURE_LIMIT).unwrap();
        assert_eq!(g.order(), 216);
        assert_eq!(g.elements().len(), 216);
    }

    #[test]
    fn group_order_formula() {
        assert_eq!(clifford_group_order(2, 1), 24);
        assert_eq!(clifford_group_order(3, 1), 216);
        assert_eq!(clifford_group_order(4, 1), 768);
        assert_eq!(clifford_group_order(6, 1), 144 * 36);
        assert_eq!(clifford_group_order(3, 2), 4_199_040);
    }

    #[test]
    fn ignoring_phases_gives_symplectic_group() {
        for d in 2..=5 {
            let g = closure_with(&reference_generators(d, 1).unwrap(), DEFAULT_CLOSURE_LIMIT, PhaseMode::Ignored).unwrap();
            assert_eq!(g.order() as u128, symplectic_group_order(d, 1));
            for t in g.elements() {
                assert!(g.contains(&t));
            }
        }
        assert_eq!(symplectic_group_order(3, 2), 51840);
    }

    #[test]
    fn limit_is_enforced() {
        let err = closure(&reference_generators(3, 1).unwrap(), 100).unwrap_err();
        assert_eq!(err, Error::LimitExceeded { limit: 100 });
        assert!(closure(&[], 10).is_err());
    }
}
