//! Random-restart Levenberg–Marquardt search for solutions of the
//! unitarity and Yang–Baxter constraints, with clustering and a local
//! estimate of the solution-manifold dimension.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constraints::{
    apply_symmetry, constraint_residual, d4_family_distance, fzc_coefficients, is_trivial,
    CoefficientVector, FzcParams, Sign, Symmetry,
};
use crate::error::{Error, Result};
use crate::linalg::CyclotomicPhase;

pub const DEFAULT_RESTARTS: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 0x5eed_b4a1d;
pub const MAX_ITERATIONS: usize = 500;

/// Step used when probing null directions of the Jacobian.
const PROBE_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    pub d: usize,
    pub restarts: usize,
    pub tol: f64,
    pub cluster_radius: f64,
    pub seed: u64,
    pub max_iterations: usize,
}

impl SolverConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            restarts: DEFAULT_RESTARTS,
            tol: DEFAULT_TOL,
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
            seed: DEFAULT_SEED,
            max_iterations: MAX_ITERATIONS,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=6).contains(&self.d) {
            return Err(Error::InvalidArgument(format!("solver supports d in 2..=6, got {}", self.d)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < self.cluster_radius) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {} must be positive and below the cluster radius {}",
                self.tol, self.cluster_radius
            )));
        }
        Ok(())
    }
}

/// The stacked real residual map and its Jacobian in `(Re c_j, Im c_j)`.
struct ConstraintMap {
    d: usize,
    omega: Vec<Complex64>,
}

impl ConstraintMap {
    fn new(d: usize) -> Self {
        Self {
            d,
            omega: (0..d as i64).map(|k| CyclotomicPhase::omega(d, k).as_complex()).collect(),
        }
    }

    fn n_rows(&self) -> usize {
        2 * (self.d + self.d * self.d)
    }

    fn w(&self, k: i64) -> Complex64 {
        self.omega[k.rem_euclid(self.d as i64) as usize]
    }

    fn at(c: &[Complex64], k: i64) -> Complex64 {
        c[k.rem_euclid(c.len() as i64) as usize]
    }

    fn complex_residuals(&self, c: &[Complex64]) -> Vec<Complex64> {
        let d = self.d as i64;
        let mut out = Vec::with_capacity(self.d + self.d * self.d);
        for r in 0..d {
            let mut s: Complex64 = (0..d).map(|m| Self::at(c, m) * Self::at(c, m + r).conj()).sum();
            if r == 0 {
                s -= d as f64;
            }
            out.push(s);
        }
        for k in 0..d {
            for m in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..d {
                    s += Self::at(c, r) * Self::at(c, k - r) * Self::at(c, m) * self.w(m * r);
                    s -= Self::at(c, r) * Self::at(c, k) * Self::at(c, m - r) * self.w(k * r);
                }
                out.push(s);
            }
        }
        out
    }

    fn residuals(&self, c: &[Complex64]) -> DVector<f64> {
        let z = self.complex_residuals(c);
        DVector::from_iterator(2 * z.len(), z.iter().flat_map(|v| [v.re, v.im]))
    }

    /// Rows follow [`Self::residuals`]; column `2j` is `∂/∂Re c_j`, `2j+1` is `∂/∂Im c_j`.
    fn jacobian(&self, c: &[Complex64]) -> DMatrix<f64> {
        let d = self.d as i64;
        let zero = Complex64::new(0.0, 0.0);
        let mut jac = DMatrix::zeros(self.n_rows(), 2 * self.d);
        let mut put = |row: usize, j: usize, dc: Complex64, dcbar: Complex64| {
            let dx = dc + dcbar;
            let dy = Complex64::i() * (dc - dcbar);
            jac[(2 * row, 2 * j)] = dx.re;
            jac[(2 * row + 1, 2 * j)] = dx.im;
            jac[(2 * row, 2 * j + 1)] = dy.re;
            jac[(2 * row + 1, 2 * j + 1)] = dy.im;
        };
        for r in 0..d {
            for j in 0..d {
                // Σ_m c_m c̄_{m+r}
                put(r as usize, j as usize, Self::at(c, j + r).conj(), Self::at(c, j - r));
            }
        }
        for k in 0..d {
            for m in 0..d {
                let row = (d + k * d + m) as usize;
                let sum_l: Complex64 = (0..d).map(|r| Self::at(c, r) * Self::at(c, k - r) * self.w(m * r)).sum();
                let sum_r: Complex64 = (0..d).map(|r| Self::at(c, r) * Self::at(c, m - r) * self.w(k * r)).sum();
                for j in 0..d {
                    let mut dl = Self::at(c, k - j) * Self::at(c, m) * self.w(m * j)
                        + Self::at(c, k - j) * Self::at(c, m) * self.w(m * (k - j));
                    if m == j {
                        dl += sum_l;
                    }
                    let mut dr = Self::at(c, k) * Self::at(c, m - j) * self.w(k * j)
                        + Self::at(c, m - j) * Self::at(c, k) * self.w(k * (m - j));
                    if k == j {
                        dr += sum_r;
                    }
                    put(row, j as usize, dl - dr, zero);
                }
            }
        }
        jac
    }
}

fn to_complex(x: &DVector<f64>) -> Vec<Complex64> {
    x.as_slice().chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

fn to_real(c: &[Complex64]) -> DVector<f64> {
    DVector::from_iterator(2 * c.len(), c.iter().flat_map(|z| [z.re, z.im]))
}

/// Outcome of one local minimisation.
#[derive(Clone, Debug)]
struct LocalRun {
    c: Vec<Complex64>,
    iterations: usize,
}

fn levenberg_marquardt(map: &ConstraintMap, start: Vec<Complex64>, max_iterations: usize) -> LocalRun {
    let mut x = to_real(&start);
    let mut f = map.residuals(&start);
    let mut cost = f.norm_squared();
    let mut mu = -1.0;
    let mut nu = 2.0;
    let mut it = 0;
    while it < max_iterations {
        it += 1;
        if f.amax() <= 1e-15 {
            break;
        }
        let c = to_complex(&x);
        let jac = map.jacobian(&c);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * &f;
        if mu < 0.0 {
            mu = 1e-3 * a.diagonal().max().max(1e-12);
        }
        let mut lhs = a.clone();
        for i in 0..lhs.nrows() {
            lhs[(i, i)] += mu;
        }
        let step = match lhs.clone().cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => match lhs.svd(true, true).solve(&(-&g), 1e-14) {
                Ok(s) => s,
                Err(_) => break,
            },
        };
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
        let x_new = &x + &step;
        let f_new = map.residuals(&to_complex(&x_new));
        let cost_new = f_new.norm_squared();
        let predicted = step.dot(&(mu * &step - &g));
        let rho = if predicted > 0.0 { (cost - cost_new) / predicted } else { -1.0 };
        if rho > 0.0 {
            x = x_new;
            f = f_new;
            cost = cost_new;
            mu *= (1.0 - (2.0 * rho - 1.0).powi(3)).max(1.0 / 3.0);
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if !mu.is_finite() || mu > 1e30 {
                break;
            }
        }
    }
    LocalRun {
        c: to_complex(&x),
        iterations: it,
    }
}

fn random_start(d: usize, seed: u64, index: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let radius = (d as f64).sqrt();
    (0..d)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = TAU * rng.random::<f64>();
            Complex64::from_polar(r, theta)
        })
        .collect()
}

/// Local dimension estimate at a solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldEstimate {
    /// Singular values of the real Jacobian below `√tol`.
    pub jacobian_nullity: usize,
    /// `jacobian_nullity − 1` (the global-phase direction removed).
    pub jacobian_dim: usize,
    /// Rank of the displacements obtained by re-solving from points pushed
    /// along the null directions; `None` when `jacobian_dim = 0`.
    pub sampled_dim: Option<usize>,
    /// Reported dimension: `sampled_dim` if present, else `jacobian_dim`.
    pub dim: usize,
}

/// Jacobian null-space dimension at `c`, refined by local re-solving when
/// the null space is larger than the phase direction.
pub fn manifold_estimate(c: &CoefficientVector, tol: f64) -> Result<ManifoldEstimate> {
    let residual = constraint_residual(c);
    if residual > tol {
        return Err(Error::NotASolution { residual, tol });
    }
    let d = c.d();
    let map = ConstraintMap::new(d);
    let jac = map.jacobian(c.as_slice());
    let svd = jac.svd(false, true);
    let threshold = tol.sqrt();
    // singular values are not sorted by nalgebra; pair them with V rows
    let v_t = svd.v_t.as_ref().expect("requested");
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < threshold)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    // columns beyond the number of rows cannot occur (rows ≥ 2d)
    let nullity = null.len();
    let jacobian_dim = nullity.saturating_sub(1);
    if jacobian_dim == 0 {
        return Ok(ManifoldEstimate {
            jacobian_nullity: nullity,
            jacobian_dim,
            sampled_dim: None,
            dim: 0,
        });
    }

    let base = to_real(c.as_slice());
    let phase_dir = {
        let p = to_real(&c.as_slice().iter().map(|z| Complex64::i() * z).collect::<Vec<_>>());
        p.normalize()
    };
    let mut directions: Vec<DVector<f64>> = Vec::new();
    for v in null {
        let mut w = &v - &phase_dir * phase_dir.dot(&v);
        for u in &directions {
            w -= u * u.dot(&w);
        }
        if w.norm() > 1e-6 {
            directions.push(w.normalize());
        }
    }
    let mut displacements = Vec::new();
    for dir in &directions {
        for s in [PROBE_STEP, -PROBE_STEP] {
            let start = to_complex(&(&base + dir * s));
            let run = levenberg_marquardt(&map, start, MAX_ITERATIONS);
            let landed = CoefficientVector::new(run.c)?;
            if constraint_residual(&landed) > tol {
                continue;
            }
            displacements.push(to_real(landed.as_slice()) - &base);
        }
    }
    let sampled = if displacements.is_empty() {
        0
    } else {
        let m = DMatrix::from_columns(&displacements);
        m.singular_values().iter().filter(|s| **s > 0.25 * PROBE_STEP).count()
    };
    let sampled = sampled.min(jacobian_dim);
    Ok(ManifoldEstimate {
        jacobian_nullity: nullity,
        jacobian_dim,
        sampled_dim: Some(sampled),
        dim: sampled,
    })
}

pub fn manifold_dimension(c: &CoefficientVector, tol: f64) -> Result<usize> {
    Ok(manifold_estimate(c, tol)?.dim)
}

/// A group of converged restarts within the cluster radius of its first member.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionCluster {
    pub representative: CoefficientVector,
    pub count: usize,
    pub max_internal_distance: f64,
    pub manifold: ManifoldEstimate,
    pub trivial: bool,
    pub residual: f64,
    /// Index of the first cluster related by twist / conjugate-reverse.
    pub orbit: usize,
    pub fzc: Option<FzcParams>,
    /// `(sign, φ)` when the representative lies on the `d = 4` family.
    pub d4_family: Option<(Sign, f64)>,
}

impl SolutionCluster {
    pub fn manifold_dim(&self) -> usize {
        self.manifold.dim
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RestartStats {
    pub converged: usize,
    pub rejected: usize,
    pub total_iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverReport {
    pub config: SolverConfig,
    pub clusters: Vec<SolutionCluster>,
    pub stats: RestartStats,
}

impl SolverReport {
    pub fn nontrivial(&self) -> impl Iterator<Item = &SolutionCluster> {
        self.clusters.iter().filter(|c| !c.trivial)
    }

    pub fn nontrivial_count(&self) -> usize {
        self.nontrivial().count()
    }
}

/// Run every restart and cluster the accepted points in restart order.
pub fn solve_all(config: &SolverConfig) -> Result<SolverReport> {
    config.validate()?;
    let map = ConstraintMap::new(config.d);
    let runs: Vec<LocalRun> = (0..config.restarts)
        .into_par_iter()
        .map(|i| levenberg_marquardt(&map, random_start(config.d, config.seed, i), config.max_iterations))
        .collect();

    let mut stats = RestartStats::default();
    let mut groups: Vec<(CoefficientVector, Vec<CoefficientVector>)> = Vec::new();
    for run in runs {
        stats.total_iterations += run.iterations;
        let c = CoefficientVector::new(run.c)?;
        // acceptance re-checked through the independent residual code
        if constraint_residual(&c) > config.tol {
            stats.rejected += 1;
            continue;
        }
        stats.converged += 1;
        match groups.iter_mut().find(|(rep, _)| rep.distance(&c) <= config.cluster_radius) {
            Some((_, members)) => members.push(c),
            None => groups.push((c.clone(), vec![c])),
        }
    }

    let reps: Vec<CoefficientVector> = groups.iter().map(|g| g.0.clone()).collect();
    let clusters = groups
        .into_iter()
        .enumerate()
        .map(|(idx, (rep, members))| {
            let mut max_internal: f64 = 0.0;
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    max_internal = max_internal.max(a.distance(b));
                }
            }
            let manifold = manifold_estimate(&rep, config.tol)?;
            let orbit = orbit_index(&reps, idx, config.cluster_radius);
            let fzc = FzcParams::all(config.d)
                .into_iter()
                .find(|p| fzc_coefficients(*p).distance(&rep) <= config.cluster_radius);
            let d4_family = d4_family_distance(&rep)
                .filter(|(dist, _, _)| *dist <= config.cluster_radius)
                .map(|(_, s, phi)| (s, phi));
            Ok(SolutionCluster {
                trivial: is_trivial(&rep, config.cluster_radius),
                residual: constraint_residual(&rep),
                representative: rep,
                count: members.len(),
                max_internal_distance: max_internal,
                manifold,
                orbit,
                fzc,
                d4_family,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolverReport {
        config: *config,
        clusters,
        stats,
    })
}

/// Smallest index whose representative is mapped onto `reps[idx]` by some
/// twist power, optionally after conjugate-reversal.
fn orbit_index(reps: &[CoefficientVector], idx: usize, radius: f64) -> usize {
    let target = &reps[idx];
    let d = target.d();
    for (j, cand) in reps.iter().enumerate().take(idx) {
        for flip in [false, true] {
            let mut t = if flip { apply_symmetry(cand, Symmetry::ConjugateReverse) } else { cand.clone() };
            for _ in 0..d {
                if t.distance(target) <= radius {
                    return j;
                }
                t = apply_symmetry(&t, Symmetry::Twist);
            }
        }
    }
    idx
}
