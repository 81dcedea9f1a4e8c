//! Independent oracles: brute-force symplectic enumeration, numeric
//! eigenvalues and floating-point DFT sums, compared against the library.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use parabraid::braid::{diagonal_phases, BraidRepresentation};
use parabraid::clifford::{
    clifford_group_order, closure, closure_with, reference_generators, symplectic_group_order, PhaseMode,
    DEFAULT_CLOSURE_LIMIT,
};
use parabraid::constraints::{FzcParams, Sign};
use parabraid::logical::braid_clifford_generators;
use parabraid::parafermion::{parity_multiplicities, ParafermionSystem};

mod common;
use common::count_symplectic;

#[test]
fn symplectic_enumeration_matches_formula() {
    for (d, n, want) in [(2, 1, 6), (3, 1, 24), (4, 1, 48), (5, 1, 120), (6, 1, 144), (2, 2, 720), (3, 2, 51840)] {
        let got = count_symplectic(d, n);
        assert_eq!(got, want, "d={d} n={n}");
        assert_eq!(symplectic_group_order(d, n), got as u128);
        assert_eq!(clifford_group_order(d, n), got as u128 * (d as u128).pow(2 * n as u32));
    }
}

#[test]
fn reference_closures_hit_the_oracle() {
    for d in [2, 3, 5] {
        let g = closure(&reference_generators(d, 1).unwrap(), DEFAULT_CLOSURE_LIMIT).unwrap();
        assert_eq!(g.order() as u64, count_symplectic(d, 1) * (d * d) as u64, "d={d}");
    }
    for d in 2..=6 {
        let g = closure_with(&reference_generators(d, 1).unwrap(), DEFAULT_CLOSURE_LIMIT, PhaseMode::Ignored).unwrap();
        assert_eq!(g.order() as u64, count_symplectic(d, 1), "d={d}");
    }
}

#[test]
fn braid_closures_up_to_phases_hit_the_oracle() {
    for d in 2..=5 {
        let rep = BraidRepresentation::fzc(d, 2, 0, Sign::Plus).unwrap();
        let gens = braid_clifford_generators(d, 1, &rep).unwrap();
        let g = closure_with(&gens, DEFAULT_CLOSURE_LIMIT, PhaseMode::Ignored).unwrap();
        assert_eq!(g.order() as u64, count_symplectic(d, 1), "d={d}");
    }
}

fn to_dmatrix(op: &parabraid::linalg::DenseOperator) -> DMatrix<Complex64> {
    let n = op.dim();
    DMatrix::from_fn(n, n, |r, c| op.get(r, c))
}

#[test]
fn parity_spectrum_from_singular_values() {
    // multiplicity of ω^k = nullity of Λ − ω^k·1
    for (d, pairs) in [(2, 2), (3, 2), (4, 2), (5, 1), (3, 3)] {
        let sys = ParafermionSystem::build(d, pairs).unwrap();
        for i in 1..=sys.n_parities() {
            let m = to_dmatrix(sys.parity(i).unwrap());
            let dim = m.nrows();
            let counts: Vec<usize> = (0..d)
                .map(|k| {
                    let w = Complex64::from_polar(1.0, TAU * k as f64 / d as f64);
                    let shifted = &m - DMatrix::<Complex64>::identity(dim, dim) * w;
                    shifted.singular_values().iter().filter(|&&s| s < 1e-8).count()
                })
                .collect();
            assert_eq!(counts.iter().sum::<usize>(), dim, "Λ{i} is not diagonalisable over the d-th roots");
            assert_eq!(counts, parity_multiplicities(&sys, i).unwrap(), "d={d} pairs={pairs} Λ{i}");
        }
    }
}

#[test]
fn dft_prefactor_from_float_sums() {
    for d in 2..=7usize {
        for r in 0..d {
            let c: Vec<Complex64> = (0..d)
                .map(|m| {
                    let e = (m * (m + 2 * r + d)) as f64 / 2.0;
                    Complex64::from_polar(1.0, TAU * e / d as f64)
                })
                .collect();
            let check0: Complex64 = c.iter().sum::<Complex64>() / (d as f64).sqrt();
            let (r_f, d_f) = (r as f64, d as f64);
            let closed = Complex64::from_polar(1.0, 2.0 * PI / d_f * (-r_f * (r_f + d_f) / 2.0 + d_f * (1.0 - d_f) / 8.0));
            assert!((check0 - closed).norm() < 1e-12, "d={d} r={r}");

            let rep = BraidRepresentation::fzc(d, 1, r as i64, Sign::Plus).unwrap();
            let dp = diagonal_phases(&rep, 1).unwrap();
            assert!((dp.values[0] - check0).norm() < 1e-12);
            let lib = FzcParams::new(d, r as i64, Sign::Plus).unwrap().check_c0().as_complex();
            assert!((lib - closed).norm() < 1e-12);
        }
    }
}
