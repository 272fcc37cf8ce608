//! Floating-point checks that are independent of the symbolic pipeline:
//! eigenstate and random-state moduli points, the variational bound,
//! membership on `f = 0`, the normal-vector property, boundary tracing with
//! cusp detection, and the oscillator uncertainty relation.

use std::f64::consts::FRAC_PI_2;

use eigenmoduli_poly::MPoly;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::family::{FamilyKind, HamiltonianFamily, ModelSpec};
use crate::fock::{expectation_matrix, Operator};
use crate::linalg::{eigh, norm, singular_values, CMatrix, SpectrumResult};
use crate::moduli::SymbolicJacobian;
use crate::tolerances::Tolerances;
use crate::CoreError;

/// Where a moduli point came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Provenance {
    RandomSample { seed: u64, index: usize },
    Eigenstate { lambda: Vec<f64>, branch: usize },
    Ground { lambda: Vec<f64> },
    Given,
}

/// Expectation values `ρ = (⟨Ĥ₁⟩, …, ⟨Ĥ_M⟩)` of a normalized state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub rho: Vec<f64>,
    pub provenance: Provenance,
    /// Set when `ρ` was computed from a unit vector, so that identity-like
    /// coordinates take their sector values.
    pub normalized: bool,
}

pub fn eigendecompose(op: &Operator) -> Result<SpectrumResult, CoreError> {
    eigh(op.float_view())
}

/// `ρ` at `state / ‖state‖`.
pub fn moduli_point(
    family: &HamiltonianFamily,
    state: &[Complex64],
    provenance: Provenance,
) -> Result<ModuliPoint, CoreError> {
    if state.len() != family.hilbert_dim() {
        return Err(CoreError::DimensionMismatch {
            expected: family.hilbert_dim(),
            found: state.len(),
        });
    }
    let nrm = norm(state);
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(CoreError::ZeroState);
    }
    let unit: Vec<Complex64> = state.iter().map(|z| z / nrm).collect();
    let rho = family
        .operators()
        .iter()
        .map(|op| expectation_matrix(op.float_view(), &unit))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModuliPoint {
        rho,
        provenance,
        normalized: true,
    })
}

/// Haar-random unit vector: independent standard complex Gaussians, normalized.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = norm(&v);
        if n > 0.0 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Generator for item `index` of a seeded stream. Each index gets its own
/// ChaCha stream, so results do not depend on evaluation order.
fn indexed_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// `count` moduli points of Haar-random states; bit-reproducible from `seed`.
pub fn sample_moduli(
    family: &HamiltonianFamily,
    count: usize,
    seed: u64,
) -> Result<Vec<ModuliPoint>, CoreError> {
    sample_states(family, count, seed, family.hilbert_dim())
}

/// Like [`sample_moduli`] but with random amplitudes only on the first
/// `levels` basis states.
pub fn sample_states(
    family: &HamiltonianFamily,
    count: usize,
    seed: u64,
    levels: usize,
) -> Result<Vec<ModuliPoint>, CoreError> {
    let dim = family.hilbert_dim();
    let levels = levels.clamp(1, dim);
    (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = indexed_rng(seed, index);
            let mut state = random_state(&mut rng, levels);
            state.resize(dim, Complex64::new(0.0, 0.0));
            moduli_point(family, &state, Provenance::RandomSample { seed, index })
        })
        .collect()
}

/// Eigen-decomposition of `Ĥ(λ)` together with the moduli point of every branch.
#[derive(Clone, Debug)]
pub struct EigenPoints {
    pub spectrum: SpectrumResult,
    pub points: Vec<ModuliPoint>,
}

pub fn eigen_points(family: &HamiltonianFamily, lambda: &[f64]) -> Result<EigenPoints, CoreError> {
    let spectrum = eigh(&family.assemble(lambda)?)?;
    let points = spectrum
        .eigenvectors
        .iter()
        .enumerate()
        .map(|(branch, v)| {
            moduli_point(
                family,
                v,
                Provenance::Eigenstate {
                    lambda: lambda.to_vec(),
                    branch,
                },
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(EigenPoints { spectrum, points })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundPoint {
    pub point: ModuliPoint,
    pub energy: f64,
    pub degenerate: bool,
}

pub fn ground_state_point(family: &HamiltonianFamily, lambda: &[f64]) -> Result<GroundPoint, CoreError> {
    let spectrum = eigh(&family.assemble(lambda)?)?;
    let point = moduli_point(
        family,
        &spectrum.eigenvectors[0],
        Provenance::Ground {
            lambda: lambda.to_vec(),
        },
    )?;
    Ok(GroundPoint {
        point,
        energy: spectrum.eigenvalues[0],
        degenerate: spectrum.degenerate[0],
    })
}

/// Random parameter vectors `λ = (1, u₂, …, u_M)` with `u_i` uniform in
/// `[−range, range]`. For lattice families these are `(1, V₁, …, V_q)`.
pub fn draw_lambdas(size: usize, count: usize, range: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut l = vec![1.0];
            l.extend((1..size).map(|_| rng.random_range(-range..=range)));
            l
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundViolation {
    pub lambda_index: usize,
    pub sample_index: usize,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub draws: usize,
    pub samples: usize,
    /// `min_λ (min_s λᵗρ_s − E₀(λ)) / scale(λ)`; never below `−tol` on success.
    pub worst_margin: f64,
    /// Largest distance in `ρ` between the ground point and the sample that
    /// comes closest to saturating the bound, over all draws.
    pub max_support_distance: f64,
    /// `max_λ (min_s λᵗρ_s − E₀(λ)) / scale(λ)`: how far the cloud's lower
    /// support sits above the ground branch in the worst direction.
    pub max_support_gap: f64,
    pub violations: Vec<BoundViolation>,
    pub passed: bool,
}

/// Checks `λᵗρ(s) ≥ E₀(λ)` for every sample and every parameter draw.
pub fn verify_variational_bound(
    family: &HamiltonianFamily,
    lambdas: &[Vec<f64>],
    samples: &[ModuliPoint],
    tol: &Tolerances,
) -> Result<BoundReport, CoreError> {
    let per_draw = lambdas
        .par_iter()
        .enumerate()
        .map(|(li, lambda)| -> Result<_, CoreError> {
            let ground = ground_state_point(family, lambda)?;
            let spec_scale = family.assemble(lambda)?.frobenius_norm().max(1.0);
            let mut best = (f64::INFINITY, 0usize);
            let mut violations = Vec::new();
            for (si, s) in samples.iter().enumerate() {
                let margin = (dot(lambda, &s.rho) - ground.energy) / spec_scale;
                if margin < best.0 {
                    best = (margin, si);
                }
                if margin < -tol.variational_bound {
                    violations.push(BoundViolation {
                        lambda_index: li,
                        sample_index: si,
                        margin,
                    });
                }
            }
            let dist = samples
                .get(best.1)
                .map(|s| {
                    s.rho
                        .iter()
                        .zip(&ground.point.rho)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .unwrap_or(f64::NAN);
            Ok((best.0, dist, violations))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = BoundReport {
        draws: lambdas.len(),
        samples: samples.len(),
        worst_margin: f64::INFINITY,
        max_support_distance: 0.0,
        max_support_gap: 0.0,
        violations: Vec::new(),
        passed: true,
    };
    for (margin, dist, v) in per_draw {
        report.worst_margin = report.worst_margin.min(margin);
        report.max_support_gap = report.max_support_gap.max(margin);
        report.max_support_distance = report.max_support_distance.max(dist);
        report.violations.extend(v);
    }
    report.passed = report.violations.is_empty() && !lambdas.is_empty() && !samples.is_empty();
    Ok(report)
}

/// `|f(ρ)| / Σ|terms of f at ρ|`.
pub fn relative_residual(f: &MPoly, rho: &[f64]) -> f64 {
    let (v, mag) = f.eval_f64_with_magnitude(rho);
    if mag == 0.0 {
        0.0
    } else {
        v.abs() / mag
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VarietyReport {
    pub draws: usize,
    pub eigen_points: usize,
    pub max_eigen_residual: f64,
    pub worst_point: Option<ModuliPoint>,
    pub random_points: usize,
    /// Fraction of random states whose residual exceeds the separation threshold.
    pub separated_fraction: f64,
    pub min_random_residual: f64,
    pub median_random_residual: f64,
    /// Every eigen-branch residual is below the variety tolerance.
    pub membership_passed: bool,
    /// Enough random states sit above the separation threshold.
    pub separation_passed: bool,
    pub passed: bool,
}

fn check_arity(f: &MPoly, family: &HamiltonianFamily) -> Result<(), CoreError> {
    if f.arity() != family.size() {
        return Err(CoreError::DimensionMismatch {
            expected: family.size(),
            found: f.arity(),
        });
    }
    Ok(())
}

/// Residual of `f` at every eigen-branch point over the draws, and at
/// random states for contrast.
pub fn verify_variety(
    f: &MPoly,
    family: &HamiltonianFamily,
    lambdas: &[Vec<f64>],
    random: &[ModuliPoint],
    tol: &Tolerances,
) -> Result<VarietyReport, CoreError> {
    check_arity(f, family)?;
    let branches = lambdas
        .par_iter()
        .map(|l| eigen_points(family, l).map(|e| e.points))
        .collect::<Result<Vec<_>, _>>()?;
    let mut max_res = 0.0f64;
    let mut worst = None;
    let mut count = 0;
    for p in branches.into_iter().flatten() {
        let r = relative_residual(f, &p.rho);
        count += 1;
        if r > max_res || worst.is_none() {
            max_res = max_res.max(r);
            worst = Some(p);
        }
    }
    let mut rand_res: Vec<f64> = random.par_iter().map(|p| relative_residual(f, &p.rho)).collect();
    rand_res.sort_by(|a, b| a.total_cmp(b));
    let separated = rand_res.iter().filter(|&&r| r > tol.separation).count();
    let separated_fraction = if rand_res.is_empty() {
        1.0
    } else {
        separated as f64 / rand_res.len() as f64
    };
    Ok(VarietyReport {
        draws: lambdas.len(),
        eigen_points: count,
        max_eigen_residual: max_res,
        worst_point: worst,
        random_points: rand_res.len(),
        separated_fraction,
        min_random_residual: rand_res.first().copied().unwrap_or(f64::NAN),
        median_random_residual: rand_res.get(rand_res.len() / 2).copied().unwrap_or(f64::NAN),
        membership_passed: count > 0 && max_res < tol.variety,
        separation_passed: separated_fraction >= tol.separation_fraction,
        passed: count > 0 && max_res < tol.variety && separated_fraction >= tol.separation_fraction,
    })
}

/// Coefficients `c` with `Σ c_i Ĥ_i = Î`, if the family spans the identity.
pub fn identity_coefficients(family: &HamiltonianFamily) -> Option<Vec<f64>> {
    let m = family.size();
    let n = family.hilbert_dim();
    let ops = family.operators();
    // Normal equations G c = b with G_ij = tr(H_i H_j), b_i = tr(H_i).
    let mut g = vec![0.0; m * m];
    let mut b = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            g[i * m + j] = ops[i].trace_inner(&ops[j]);
        }
        b[i] = (0..n).map(|k| ops[i].float_view()[(k, k)].re).sum();
    }
    let c = solve(m, g, b)?;
    let mut acc = CMatrix::zeros(n, n);
    for (op, &ci) in ops.iter().zip(&c) {
        acc.add_scaled(op.float_view(), ci);
    }
    acc.add_scaled(&CMatrix::identity(n), -1.0);
    (acc.frobenius_norm() < 1e-9 * (n as f64).sqrt()).then_some(c)
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve(m: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i * m + col].abs().total_cmp(&a[j * m + col].abs()))?;
        if a[piv * m + col].abs() < 1e-300 {
            return None;
        }
        for k in 0..m {
            a.swap(col * m + k, piv * m + k);
        }
        b.swap(col, piv);
        for r in (col + 1)..m {
            let f = a[r * m + col] / a[col * m + col];
            for k in col..m {
                a[r * m + k] -= f * a[col * m + k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = ((r + 1)..m).map(|k| a[r * m + k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r * m + r];
    }
    Some(x)
}

/// Normalized cross-product magnitude `‖g ∧ l‖ / (‖g‖‖l‖)`.
pub fn collinearity_defect(g: &[f64], l: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            s += (g[i] * l[j] - g[j] * l[i]).powi(2);
        }
    }
    let d = dot(g, g).sqrt() * dot(l, l).sqrt();
    if d == 0.0 {
        f64::INFINITY
    } else {
        s.sqrt() / d
    }
}

pub fn gradient(f: &MPoly) -> Vec<MPoly> {
    (0..f.arity()).map(|v| f.derivative(v)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalReport {
    pub checked: usize,
    pub skipped_degenerate: usize,
    pub skipped_singular: usize,
    pub max_defect: f64,
    /// Largest `|∇f(ρ)·ρ| / (‖∇f‖‖ρ‖)`; vanishes for homogeneous `f` on the variety.
    pub max_euler_defect: f64,
    pub passed: bool,
}

/// Collinearity of `∇f(ρ*)` with the energy-absorbed parameter
/// `λ̃ = λ − E·c`, where `Σ c_i Ĥ_i = Î`.
pub fn verify_normal_vector(
    f: &MPoly,
    family: &HamiltonianFamily,
    lambdas: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<NormalReport, CoreError> {
    check_arity(f, family)?;
    let ident = identity_coefficients(family).ok_or_else(|| {
        CoreError::InvalidFamily("normal-vector check needs a family spanning the identity".into())
    })?;
    let grad = gradient(f);
    let per_draw = lambdas
        .par_iter()
        .map(|lambda| -> Result<Vec<Option<(f64, f64)>>, CoreError> {
            let e = eigen_points(family, lambda)?;
            Ok(e.points
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    if e.spectrum.degenerate[k] {
                        return None;
                    }
                    let energy = e.spectrum.eigenvalues[k];
                    let tilde: Vec<f64> = lambda.iter().zip(&ident).map(|(l, c)| l - energy * c).collect();
                    let g: Vec<f64> = grad.iter().map(|d| d.eval_f64(&p.rho)).collect();
                    let gn = dot(&g, &g).sqrt();
                    if gn < tol.singular_gradient {
                        return Some((f64::NAN, f64::NAN));
                    }
                    let euler = dot(&g, &p.rho).abs() / (gn * dot(&p.rho, &p.rho).sqrt().max(1e-300));
                    Some((collinearity_defect(&g, &tilde), euler))
                })
                .collect())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = NormalReport {
        checked: 0,
        skipped_degenerate: 0,
        skipped_singular: 0,
        max_defect: 0.0,
        max_euler_defect: 0.0,
        passed: true,
    };
    for r in per_draw.into_iter().flatten() {
        match r {
            None => report.skipped_degenerate += 1,
            Some((d, _)) if d.is_nan() => report.skipped_singular += 1,
            Some((d, euler)) => {
                report.checked += 1;
                report.max_defect = report.max_defect.max(d);
                report.max_euler_defect = report.max_euler_defect.max(euler);
            }
        }
    }
    report.passed = report.checked > 0 && report.max_defect < tol.normal_vector;
    Ok(report)
}

/// One sample of a branch trace. `delta_v` is `None` at the compactified
/// endpoints `ΔV = ±∞`.
#[derive(Clone, Debug, Serialize)]
pub struct TracePoint {
    pub branch: usize,
    pub theta: f64,
    pub delta_v: f64,
    pub delta_n: f64,
    pub f: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cusp {
    /// Closed loop the cusp lies on, named by its first branch.
    pub loop_branch: usize,
    /// Branch of the sample at the cusp.
    pub branch: usize,
    /// Estimated `ΔV_c`; `None` when the cusp sits at `ΔV → ±∞`.
    pub delta_v: Option<f64>,
    pub delta_n: f64,
    pub f: f64,
    /// Cosine of the turning angle between neighbouring secants (−1 = full reversal).
    pub turn_cosine: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    /// `F₁` from a fit `F ≈ F₀ + F₁ n₁n₂` on the ground branch near `Δn = 0`.
    pub fitted_f1: f64,
    pub fitted_f0: f64,
    pub fit_points: usize,
    /// Closed-form reference `4t²√(ΔU²+16t²) / (16t² − 2ΔU(√(ΔU²+16t²) − ΔU))`.
    pub reference_closed_form: Option<f64>,
    /// Weak-coupling reference `−t² − ΔU/2`.
    pub reference_expansion: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryTrace {
    pub samples: usize,
    /// `branches[k]` is the `k`-th eigen-branch over the sweep.
    pub branches: Vec<Vec<TracePoint>>,
    pub cusps: Vec<Cusp>,
    pub ground_curvature: CurvatureReport,
}

impl BoundaryTrace {
    pub fn cusps_on(&self, loop_branch: usize) -> Vec<&Cusp> {
        self.cusps.iter().filter(|c| c.loop_branch == loop_branch).collect()
    }
}

/// Sweeps `ΔV = V₁ − V₂ = tan θ` over `θ ∈ (−π/2, π/2)` for a two-site
/// lattice family, using `λ(θ) = (cos θ, sin θ/2, −sin θ/2)`.
///
/// The compactified parameter closes every branch into a loop: at `θ = ±π/2`
/// the spectrum order flips, so branch `k` continues as branch `N−1−k`.
/// Cusps are reported where the tangent of a loop reverses (consecutive
/// secants at an obtuse angle), which also catches cusps whose `Δn`
/// derivative keeps its sign.
pub fn trace_boundary(
    family: &HamiltonianFamily,
    samples: usize,
    spec: Option<&ModelSpec>,
) -> Result<BoundaryTrace, CoreError> {
    match family.kind() {
        FamilyKind::Dft { sites: 2, .. } if family.size() == 3 => {}
        _ => return Err(CoreError::NotDimer),
    }
    if samples < 8 {
        return Err(CoreError::InvalidSpec(format!(
            "boundary sweep needs at least 8 samples, got {samples}"
        )));
    }
    let thetas: Vec<f64> = (0..samples)
        .map(|k| -FRAC_PI_2 + (k as f64 + 0.5) * std::f64::consts::PI / samples as f64)
        .collect();
    let rows = thetas
        .par_iter()
        .map(|&theta| {
            let (s, c) = theta.sin_cos();
            let e = eigen_points(family, &[c, s / 2.0, -s / 2.0])?;
            Ok(e.points
                .into_iter()
                .enumerate()
                .map(|(branch, p)| TracePoint {
                    branch,
                    theta,
                    delta_v: theta.tan(),
                    delta_n: p.rho[1] - p.rho[2],
                    f: p.rho[0],
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let nb = family.hilbert_dim();
    let mut branches: Vec<Vec<TracePoint>> = vec![Vec::with_capacity(samples); nb];
    for row in rows {
        for p in row {
            branches[p.branch].push(p);
        }
    }

    let mut cusps = Vec::new();
    for k in 0..nb.div_ceil(2) {
        let partner = nb - 1 - k;
        let mut cycle: Vec<&TracePoint> = branches[k].iter().collect();
        if partner != k {
            cycle.extend(branches[partner].iter());
        }
        cusps.extend(find_cusps(&cycle, k));
    }
    let ground_curvature = fit_ground_curvature(&branches[0], spec);
    Ok(BoundaryTrace {
        samples,
        branches,
        cusps,
        ground_curvature,
    })
}

/// Tangent reversals along a closed polyline.
///
/// A cusp shows up either at a vertex whose two secants point in opposite
/// directions, or inside one secant that is perpendicular to both of its
/// neighbours, in which case the secants on either side of it reverse.
/// Detections at neighbouring positions are merged into one cusp.
fn find_cusps(cycle: &[&TracePoint], loop_branch: usize) -> Vec<Cusp> {
    let len = cycle.len();
    if len < 4 {
        return Vec::new();
    }
    let at = |i: usize| cycle[i % len];
    let sec = |i: usize| {
        let (a, b) = (at(i), at(i + 1));
        (b.delta_n - a.delta_n, b.f - a.f)
    };
    let cosine = |u: (f64, f64), v: (f64, f64)| {
        let d = (u.0 * u.0 + u.1 * u.1).sqrt() * (v.0 * v.0 + v.1 * v.1).sqrt();
        if d == 0.0 {
            1.0
        } else {
            (u.0 * v.0 + u.1 * v.1) / d
        }
    };
    // Secant i runs from sample i to sample i+1; it wraps through θ = ±π/2
    // when the branch changes or θ jumps back.
    let wraps = |i: usize| at(i).branch != at(i + 1).branch || at(i + 1).theta < at(i).theta;

    // Events on a doubled index grid: 2i = vertex i, 2i+1 = inside secant i.
    let mut events: Vec<(usize, f64)> = Vec::new();
    for i in 0..len {
        let prev = sec(i + len - 1);
        let c = cosine(prev, sec(i));
        if c < 0.0 {
            events.push((2 * i, c));
        }
        let c = cosine(prev, sec(i + 1));
        if c < 0.0 {
            events.push((2 * i + 1, c));
        }
    }
    if events.is_empty() {
        return Vec::new();
    }
    // Group events whose grid positions are adjacent (cyclically).
    let grid = 2 * len;
    let mut groups: Vec<Vec<(usize, f64)>> = Vec::new();
    for e in events {
        match groups.last_mut() {
            Some(g) if e.0 - g.last().unwrap().0 <= 2 => g.push(e),
            _ => groups.push(vec![e]),
        }
    }
    if groups.len() > 1 {
        let first = groups[0][0].0;
        let last = groups.last().unwrap().last().unwrap().0;
        if first + grid - last <= 2 {
            let tail = groups.pop().unwrap();
            groups[0].splice(0..0, tail);
        }
    }

    groups
        .into_iter()
        .map(|g| {
            let &(pos, turn_cosine) = g
                .iter()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty group");
            let i = pos / 2;
            let (delta_n, f, branch, at_infinity) = if pos % 2 == 0 {
                let p = at(i);
                (p.delta_n, p.f, p.branch, wraps(i + len - 1) || wraps(i))
            } else {
                let (a, b) = (at(i), at(i + 1));
                (
                    0.5 * (a.delta_n + b.delta_n),
                    0.5 * (a.f + b.f),
                    a.branch,
                    wraps(i),
                )
            };
            Cusp {
                loop_branch,
                branch,
                delta_v: (!at_infinity).then(|| at(i).delta_v),
                delta_n,
                f,
                turn_cosine,
            }
        })
        .collect()
}

/// Width of the `Δn` window used for the curvature fit.
const CURVATURE_WINDOW: f64 = 0.2;

/// Least-squares fit `F = a + b Δn²` on the ground branch; with
/// `n₁ + n₂ = 2`, `n₁n₂ = 1 − Δn²/4`, so `F₁ = −4b` and `F₀ = a + 4b`.
fn fit_ground_curvature(ground: &[TracePoint], spec: Option<&ModelSpec>) -> CurvatureReport {
    let pts: Vec<(f64, f64)> = ground
        .iter()
        .filter(|p| p.delta_n.abs() < CURVATURE_WINDOW)
        .map(|p| (p.delta_n * p.delta_n, p.f))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
    let det = n * sxx - sx * sx;
    let (a, b) = if pts.len() >= 2 && det.abs() > 0.0 {
        let b = (n * sxy - sx * sy) / det;
        ((sy - b * sx) / n, b)
    } else {
        (f64::NAN, f64::NAN)
    };
    let refs = spec.and_then(|s| {
        use num_traits::ToPrimitive;
        let t = s.hopping.first()?.get(1)?.to_f64()?;
        let du = s.onsite.to_f64()? - s.intersite.first()?.get(1)?.to_f64()?;
        let root = (du * du + 16.0 * t * t).sqrt();
        let closed = 4.0 * t * t * root / (16.0 * t * t - 2.0 * du * (root - du));
        Some((closed, -t * t - du / 2.0))
    });
    CurvatureReport {
        fitted_f1: -4.0 * b,
        fitted_f0: a + 4.0 * b,
        fit_points: pts.len(),
        reference_closed_form: refs.map(|r| r.0),
        reference_expansion: refs.map(|r| r.1),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenProduct {
    pub level: usize,
    pub product: f64,
    pub expected: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UncertaintyReport {
    pub truncation: usize,
    pub eigenstates: Vec<EigenProduct>,
    pub ground_product: f64,
    pub ground_error: f64,
    pub random_states: usize,
    pub random_levels: usize,
    pub min_random_product: f64,
    pub random_violations: Vec<usize>,
    pub passed: bool,
}

/// Number of low-lying eigenstates compared with `(k + 1/2)²`.
pub const UNCERTAINTY_LEVELS: usize = 6;

fn label_index(family: &HamiltonianFamily, label: &str) -> Result<usize, CoreError> {
    family
        .labels()
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| CoreError::InvalidFamily(format!("family has no {label} member")))
}

/// `Δx² Δp²` from a moduli point of the oscillator family.
pub fn uncertainty_product(idx: &[usize; 4], rho: &[f64]) -> f64 {
    let [x2, p2, x, p] = *idx;
    (rho[x2] - rho[x] * rho[x]) * (rho[p2] - rho[p] * rho[p])
}

/// Eigenstate products, ground-state saturation, and the bound `≥ 1/4` on
/// random states supported on the lower half of the truncated basis.
pub fn verify_uncertainty(
    family: &HamiltonianFamily,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<UncertaintyReport, CoreError> {
    let truncation = match family.kind() {
        FamilyKind::Oscillator { truncation } => *truncation,
        _ => return Err(CoreError::InvalidFamily("uncertainty check needs the oscillator family".into())),
    };
    let idx = [
        label_index(family, "x2")?,
        label_index(family, "p2")?,
        label_index(family, "x")?,
        label_index(family, "p")?,
    ];
    let mut lambda = vec![0.0; family.size()];
    lambda[idx[0]] = 0.5;
    lambda[idx[1]] = 0.5;
    let e = eigen_points(family, &lambda)?;
    let eigenstates: Vec<EigenProduct> = e
        .points
        .iter()
        .take(UNCERTAINTY_LEVELS)
        .enumerate()
        .map(|(k, p)| {
            let product = uncertainty_product(&idx, &p.rho);
            let expected = (k as f64 + 0.5).powi(2);
            EigenProduct {
                level: k,
                product,
                expected,
                error: (product - expected).abs(),
            }
        })
        .collect();
    let ground_product = eigenstates.first().map_or(f64::NAN, |g| g.product);
    let ground_error = (ground_product - 0.25).abs();
    let levels = truncation / 2;
    let random = sample_states(family, count, seed, levels)?;
    let products: Vec<f64> = random.iter().map(|p| uncertainty_product(&idx, &p.rho)).collect();
    let random_violations: Vec<usize> = products
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < 0.25 - tol.uncertainty_bound)
        .map(|(i, _)| i)
        .collect();
    let min_random_product = products.iter().copied().fold(f64::INFINITY, f64::min);
    let passed = eigenstates.len() == UNCERTAINTY_LEVELS
        && eigenstates.iter().all(|p| p.error < tol.uncertainty_eigen)
        && ground_error < tol.uncertainty_saturation
        && random_violations.is_empty();
    Ok(UncertaintyReport {
        truncation,
        eigenstates,
        ground_product,
        ground_error,
        random_states: count,
        random_levels: levels,
        min_random_product,
        random_violations,
        passed,
    })
}

/// Smallest singular value of the substituted Jacobian relative to the largest.
pub fn jacobian_smallest_singular_value(
    jac: &SymbolicJacobian,
    state: &[Complex64],
) -> Result<(f64, f64), CoreError> {
    let sv = singular_values(&jac.substitute(state))?;
    let largest = sv.first().copied().unwrap_or(0.0);
    let smallest = sv.last().copied().unwrap_or(0.0);
    Ok((smallest, largest))
}

#[derive(Clone, Debug, Serialize)]
pub struct CokernelReport {
    pub eigen_points: usize,
    /// Largest `σ_min / σ_max` at eigenstates.
    pub max_eigen_ratio: f64,
    pub random_points: usize,
    /// Fraction of random states with `σ_min / σ_max > 1e−3`.
    pub random_fraction_full_rank: f64,
    pub passed: bool,
}

/// Relative smallest singular value at random non-eigenstates that counts as full rank.
pub const FULL_RANK_RATIO: f64 = 1e-3;

/// Rank drop of the substituted Jacobian at eigenstates and its absence at
/// random states.
pub fn verify_cokernel(
    jac: &SymbolicJacobian,
    family: &HamiltonianFamily,
    lambdas: &[Vec<f64>],
    random_count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CokernelReport, CoreError> {
    let eigen = lambdas
        .par_iter()
        .map(|l| -> Result<Vec<f64>, CoreError> {
            let s = eigh(&family.assemble(l)?)?;
            s.eigenvectors
                .iter()
                .map(|v| jacobian_smallest_singular_value(jac, v).map(|(a, b)| a / b))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let eigen: Vec<f64> = eigen.into_iter().flatten().collect();
    let random = (0..random_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i);
            let v = random_state(&mut rng, family.hilbert_dim());
            jacobian_smallest_singular_value(jac, &v).map(|(a, b)| a / b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_eigen_ratio = eigen.iter().copied().fold(0.0, f64::max);
    let full = random.iter().filter(|&&r| r > FULL_RANK_RATIO).count();
    let random_fraction_full_rank = if random.is_empty() {
        1.0
    } else {
        full as f64 / random.len() as f64
    };
    Ok(CokernelReport {
        eigen_points: eigen.len(),
        max_eigen_ratio,
        random_points: random.len(),
        random_fraction_full_rank,
        passed: !eigen.is_empty() && max_eigen_ratio < tol.cokernel && random_fraction_full_rank >= tol.separation_fraction,
    })
}
