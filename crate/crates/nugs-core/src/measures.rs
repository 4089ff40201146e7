//! Stability quantities of a weighted sampling set relative to a
//! reconstruction space: the concentration measure V (worst-case weighted
//! sample energy captured inside a ball), the residual V* (energy outside
//! it), the Bessel quantity W with its analytic bound, explicit lower frame
//! bounds, a sup-norm balayage check, and optimally concentrated
//! trigonometric polynomials.

use crate::dd::{jacobi_eigen_dd, Dd, DdMat};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg::{hermitian_extremes, C64};
use crate::rng::substream;
use crate::sampling::SamplingSet;
use crate::spaces::{
    continuous_gram, discrete_gram, QuadSpec, ReconstructionSpace, SpaceFamily,
};
use crate::weights::{WeightMethod, WeightedSamples};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Concentration, residual, and Bessel numbers of one configuration,
/// together with the analytic certificates that apply to it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureReport {
    /// Smallest eigenvalue of the ball-restricted weighted Gram.
    pub v: f64,
    /// Largest eigenvalue of the annulus-restricted weighted Gram
    /// (computed part; the neglected remainder is `tail_error`).
    pub v_star: f64,
    /// Largest eigenvalue of the ball-restricted weighted Gram.
    pub w_empirical: f64,
    /// Analytic Bessel bound, valid over all of L²(D); absent when no gap
    /// estimate is available.
    pub w_bound: Option<f64>,
    /// Analytic lower frame bound; absent without a subcritical gap.
    pub a_bound: Option<f64>,
    pub k: f64,
    pub tail_radius: f64,
    /// Bound on the neglected part of V* beyond `tail_radius`.
    pub tail_error: f64,
}

/// A real trigonometric polynomial `m(t) = sum c_k e^{2 pi i k t}` with unit
/// total energy and minimal energy on `[-eps, eps]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcentrationPolynomial {
    pub n: usize,
    pub epsilon: f64,
    /// Unit-norm coefficients c_0..c_n.
    pub coefficients: Vec<f64>,
    /// Energy on `[-eps, eps]`; the minimal eigenvalue of the overlap matrix.
    pub leak: f64,
}

fn check_coverage(ws: &WeightedSamples, radius: f64) -> Result<()> {
    if radius > ws.weight_domain_radius() + 1e-9 {
        return Err(Error::InsufficientExtent {
            needed: radius,
            extent: ws.weight_domain_radius(),
        });
    }
    Ok(())
}

/// Weighted samples in the annulus `lo < |omega| <= hi`.
fn annulus(ws: &WeightedSamples, lo: f64, hi: f64) -> WeightedSamples {
    let dim = ws.dim();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (p, w) in ws.iter_weighted() {
        let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > lo + 1e-9 && r <= hi + 1e-9 {
            points.extend_from_slice(p);
            weights.push(w);
        }
    }
    WeightedSamples::from_parts(dim, points, weights, hi, ws.method().clone())
        .expect("filtered subset of valid samples")
}

/// Concentration measure: smallest eigenvalue of the weighted Gram over
/// `Omega ∩ B_k`. Equals the infimum of the weighted sample energy over
/// unit-norm members of the space. Empty restriction gives 0.
pub fn measure_v(space: &ReconstructionSpace, ws: &WeightedSamples, k: f64) -> Result<f64> {
    check_coverage(ws, k)?;
    let ball = ws.restricted(k);
    if ball.is_empty() {
        return Ok(0.0);
    }
    let g = discrete_gram(space, &ball)?;
    Ok(hermitian_extremes(&g).0.max(0.0))
}

/// Residual measure: largest eigenvalue of the weighted Gram over the
/// annulus `k < |omega| <= tail_radius`, plus a certified bound on the part
/// beyond `tail_radius` (returned separately as the second value).
///
/// The sum-to-integral conversion behind the tail bound needs the
/// circumradius of every Voronoi cell: in one dimension the maximal weight
/// is such a bound and is derived internally; in higher dimensions the
/// caller must supply `cell_radius` since cell measures alone do not bound
/// cell extents.
pub fn measure_vstar(
    space: &ReconstructionSpace,
    ws: &WeightedSamples,
    k: f64,
    tail_radius: f64,
    cell_radius: Option<f64>,
) -> Result<(f64, f64)> {
    check_coverage(ws, tail_radius)?;
    let pad = match (ws.dim(), cell_radius) {
        (_, Some(r)) if r >= 0.0 => r,
        (_, Some(_)) => return Err(Error::invalid("cell_radius", "must be nonnegative")),
        (1, None) => ws.weights().iter().cloned().fold(0.0_f64, f64::max),
        (_, None) => {
            return Err(Error::invalid(
                "cell_radius",
                "required for d >= 2: cell measures do not bound cell extents",
            ))
        }
    };
    let tail = tail_envelope(space, tail_radius, pad)?;
    if tail_radius <= k {
        return Ok((0.0, tail));
    }
    let ann = annulus(ws, k, tail_radius);
    if ann.is_empty() {
        return Ok((0.0, tail));
    }
    let g = discrete_gram(space, &ann)?;
    Ok((hermitian_extremes(&g).1.max(0.0), tail))
}

/// Envelope bound on the weighted sample energy beyond `tail_radius` for a
/// Voronoi-weighted set whose cells have circumradius at most `pad`:
/// an integral of the squared transform envelope over `|xi| > tail_radius - pad`.
///
/// Legendre uses the oscillatory envelope `sum_n |phi_hat_n(xi)|^2 <=
/// S0 / (2 pi^2 xi^2)` with `S0` the larger parity-class sum of `2n+1`
/// (adjacent orders alternate sine and cosine phases); it is asymptotic,
/// valid once the frequency dominates the squared degree. The Haar bounds
/// are exact sinc envelopes; the two-dimensional constant is pessimistic by
/// a factor `2^J` (axis-wise reduction) and is reported as such.
fn tail_envelope(space: &ReconstructionSpace, tail_radius: f64, pad: f64) -> Result<f64> {
    let s = tail_radius - pad;
    if s <= 0.0 {
        return Err(Error::invalid(
            "tail_radius",
            "must exceed the Voronoi cell radius",
        ));
    }
    Ok(match *space.family() {
        SpaceFamily::Legendre { n_max } => {
            let p1 = (n_max + 1) as f64;
            let s0 = (p1 * p1 + p1) / 2.0;
            s0 / (std::f64::consts::PI.powi(2) * s)
        }
        SpaceFamily::Haar { j, d: 1, .. } => {
            2.0 * 4.0_f64.powi(j as i32) / (std::f64::consts::PI.powi(2) * s)
        }
        SpaceFamily::Haar { j, d: 2, .. } => {
            4.0 * 2.0_f64.sqrt() * 8.0_f64.powi(j as i32) / (std::f64::consts::PI.powi(2) * s)
        }
        SpaceFamily::Haar { .. } => {
            return Err(Error::invalid(
                "space",
                "tail envelope implemented for d <= 2",
            ))
        }
    })
}

/// Bessel measure over the space: largest eigenvalue of the ball-restricted
/// weighted Gram, and (when a gap in the polar norm is supplied) the
/// analytic bound `exp(4 pi delta c° m_D)` valid over all of L²(D).
pub fn measure_w(
    space: &ReconstructionSpace,
    ws: &WeightedSamples,
    k: f64,
    gap_polar: Option<f64>,
) -> Result<(f64, Option<f64>)> {
    check_coverage(ws, k)?;
    let ball = ws.restricted(k);
    let w_emp = if ball.is_empty() {
        0.0
    } else {
        hermitian_extremes(&discrete_gram(space, &ball)?).1
    };
    let bound = match gap_polar {
        Some(d) => Some(w_bound(space.domain(), d)?),
        None => None,
    };
    Ok((w_emp, bound))
}

/// Analytic Bessel bound `exp(4 pi delta c° m_D)` for Voronoi weights at
/// gap `delta` in the polar norm. Valid for every f in L²(D).
pub fn w_bound(body: &ConvexBody, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::invalid("delta", "must be a finite nonnegative gap"));
    }
    Ok((4.0 * std::f64::consts::PI * delta * body.c_polar() * body.m_d()).exp())
}

/// The aperture parameter of the lower frame bound:
/// `kappa = (1/sqrt(4 delta) - 1)(1 - 1/(d+2))`.
pub fn kappa(delta: f64, dim: usize) -> f64 {
    (1.0 / (4.0 * delta).sqrt() - 1.0) * (1.0 - 1.0 / (dim as f64 + 2.0))
}

/// Explicit lower frame bound for Voronoi-weighted exponentials at
/// subcritical gap: `meas(D°) meas(D) (delta kappa^2 / 6)^d
/// cos^2(2 pi delta (1+kappa)^2)`, positive for every `delta < 1/4`.
pub fn frame_bound_a(body: &ConvexBody, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::invalid("delta", "must be a positive gap"));
    }
    if delta >= 0.25 {
        return Err(Error::SupercriticalGap { gap: delta });
    }
    let d = body.dim();
    let k = kappa(delta, d);
    let (meas_d, meas_polar) = body.volumes();
    let angle = 2.0 * std::f64::consts::PI * delta * (1.0 + k) * (1.0 + k);
    Ok(meas_polar * meas_d * (delta * k * k / 6.0).powi(d as i32) * angle.cos().powi(2))
}

/// Lower frame bound for unweighted exponentials:
/// `meas(D) eps^d cos^2(2 pi (1+eps) delta)`, requiring `(1+eps) delta < 1/4`.
pub fn lower_bound_unweighted(body: &ConvexBody, delta: f64, eps: f64) -> Result<f64> {
    if !(delta > 0.0) || !(eps > 0.0) {
        return Err(Error::invalid("delta/eps", "must be positive"));
    }
    if (1.0 + eps) * delta >= 0.25 {
        return Err(Error::invalid(
            "eps",
            "requires (1 + eps) * delta < 1/4",
        ));
    }
    let d = body.dim();
    let (meas_d, _) = body.volumes();
    let angle = 2.0 * std::f64::consts::PI * (1.0 + eps) * delta;
    Ok(meas_d * eps.powi(d as i32) * angle.cos().powi(2))
}

/// Lower frame bound for Voronoi-weighted exponentials with free parameters:
/// `meas(D°) meas(D) (eta eps / 6)^d cos^2(2 pi (1+eps)(delta+eta))`,
/// requiring `(1+eps)(delta+eta) < 1/4`. At `eps = kappa(delta, d)` and
/// `eta = eps * delta` it reproduces `frame_bound_a` exactly.
pub fn lower_bound_weighted(
    body: &ConvexBody,
    delta: f64,
    eps: f64,
    eta: f64,
) -> Result<f64> {
    if !(delta > 0.0) || !(eps > 0.0) || !(eta > 0.0) {
        return Err(Error::invalid("delta/eps/eta", "must be positive"));
    }
    if (1.0 + eps) * (delta + eta) >= 0.25 {
        return Err(Error::invalid(
            "eps",
            "requires (1 + eps) * (delta + eta) < 1/4",
        ));
    }
    let d = body.dim();
    let (meas_d, meas_polar) = body.volumes();
    let angle = 2.0 * std::f64::consts::PI * (1.0 + eps) * (delta + eta);
    Ok(meas_polar * meas_d * (eta * eps / 6.0).powi(d as i32) * angle.cos().powi(2))
}

/// Concentration of the space over the ball: `lambda_min(G_K)` of the
/// continuous Gram.
pub fn measure_v_cont(space: &ReconstructionSpace, k: f64, quad: &QuadSpec) -> Result<f64> {
    let g = continuous_gram(space, k, quad)?;
    Ok(hermitian_extremes(&g).0.max(0.0))
}

/// Residual of the space over the ball complement: `lambda_max(I - G_K)`,
/// computed as `1 - lambda_min(G_K)` (the bases are orthonormal, so the
/// full-frequency Gram is the identity and the identity is exact).
pub fn measure_vstar_cont(space: &ReconstructionSpace, k: f64, quad: &QuadSpec) -> Result<f64> {
    Ok(1.0 - measure_v_cont(space, k, quad)?)
}

/// Assemble the full report for one configuration. `gap_polar` enables the
/// analytic certificates; `cell_radius` as in `measure_vstar`.
pub fn measure_report(
    space: &ReconstructionSpace,
    ws: &WeightedSamples,
    k: f64,
    tail_radius: f64,
    cell_radius: Option<f64>,
    gap_polar: Option<f64>,
) -> Result<MeasureReport> {
    let v = measure_v(space, ws, k)?;
    let (v_star, tail_error) = measure_vstar(space, ws, k, tail_radius, cell_radius)?;
    let (w_empirical, w_bound) = measure_w(space, ws, k, gap_polar)?;
    let a_bound = match gap_polar {
        Some(d) if d > 0.0 && d < 0.25 => Some(frame_bound_a(space.domain(), d)?),
        _ => None,
    };
    Ok(MeasureReport {
        v,
        v_star,
        w_empirical,
        w_bound,
        a_bound,
        k,
        tail_radius,
        tail_error,
    })
}

/// V, V*, and tail bound for a Haar space sampled on the integer lattice
/// with unit weights, computed per residue class instead of by eigensolve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeConcentration {
    pub v: f64,
    pub v_star: f64,
    pub tail_error: f64,
    pub k: f64,
    pub tail_radius: f64,
}

/// Fast path for `Omega = Z^d`, `mu = 1`, Haar scale `j`: the weighted Gram
/// is circulant, so its eigenvalues are per-residue lattice sums of
/// `prod_i sinc^2(k_i / 2^j)`. V is the smallest ball sum; V* the largest
/// annulus sum, truncated at `tail_radius` with the exact sinc envelope
/// `2^{j+1} / (pi^2 (T - 2^j))` per axis as tail bound.
pub fn lattice_haar_concentration(
    j: u32,
    d: usize,
    k: f64,
    tail_radius: f64,
) -> Result<LatticeConcentration> {
    if !(k >= 0.0) || tail_radius <= k {
        return Err(Error::invalid("k", "need 0 <= k < tail_radius"));
    }
    let cells = 1i64 << j;
    let scale = cells as f64;
    if tail_radius <= scale {
        return Err(Error::invalid("tail_radius", "must exceed the scale 2^j"));
    }
    let t = tail_radius.floor() as i64;
    let axis_env = 2.0 * scale / (std::f64::consts::PI.powi(2) * (tail_radius - scale));
    let sinc2 = |kk: i64| -> f64 {
        let v = crate::special::sinc(kk as f64 / scale);
        v * v
    };
    match d {
        1 => {
            let mut ball = vec![0.0f64; cells as usize];
            let mut ann = vec![0.0f64; cells as usize];
            for kk in -t..=t {
                let r = kk.rem_euclid(cells) as usize;
                let s2 = sinc2(kk);
                if (kk.abs() as f64) <= k {
                    ball[r] += s2;
                } else {
                    ann[r] += s2;
                }
            }
            let v = ball.iter().cloned().fold(f64::INFINITY, f64::min);
            let v_star = ann.iter().cloned().fold(0.0f64, f64::max);
            Ok(LatticeConcentration {
                v,
                v_star,
                tail_error: axis_env,
                k,
                tail_radius,
            })
        }
        2 => {
            let n = cells as usize;
            // per-axis residue sums over the full truncation range
            let mut axis_total = vec![0.0f64; n];
            for kk in -t..=t {
                axis_total[kk.rem_euclid(cells) as usize] += sinc2(kk);
            }
            // ball sums per residue pair
            let mut ball = vec![0.0f64; n * n];
            let kf = k.floor() as i64;
            for k1 in -kf..=kf {
                let lim = k * k - (k1 * k1) as f64;
                let m = lim.sqrt().floor() as i64;
                let r1 = k1.rem_euclid(cells) as usize;
                let s1 = sinc2(k1);
                for k2 in -m..=m {
                    ball[r1 * n + k2.rem_euclid(cells) as usize] += s1 * sinc2(k2);
                }
            }
            let mut v = f64::INFINITY;
            let mut v_star = 0.0f64;
            for r1 in 0..n {
                for r2 in 0..n {
                    let b = ball[r1 * n + r2];
                    v = v.min(b);
                    v_star = v_star.max(axis_total[r1] * axis_total[r2] - b);
                }
            }
            Ok(LatticeConcentration {
                v,
                v_star,
                tail_error: 2.0 * axis_env,
                k,
                tail_radius,
            })
        }
        _ => Err(Error::invalid("d", "lattice fast path supports d in {1, 2}")),
    }
}

/// Result of the sup-norm transfer check: how much of a function's peak
/// magnitude the sampling set sees, against the `cos(2 pi delta)` certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BalayageReport {
    /// Measured gap of the set in the polar norm of the space's domain.
    pub gap: f64,
    /// Certified lower bound `cos(2 pi gap)` for the sup-norm ratio.
    pub bound: f64,
    pub min_ratio: f64,
    pub ratios: Vec<f64>,
}

/// For random unit-coefficient members f of the space, compares
/// `sup_Omega |f_hat|` against the sup over a fine grid of step `grid_res`
/// covering the set's extent. Refuses supercritical sets.
pub fn balayage_check(
    space: &ReconstructionSpace,
    set: &SamplingSet,
    n_trials: usize,
    grid_res: f64,
    seed: u64,
) -> Result<BalayageReport> {
    if set.dim() != space.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.ambient_dim(),
            got: set.dim(),
        });
    }
    if set.dim() != 1 {
        return Err(Error::invalid(
            "set",
            "sup-norm grid evaluation implemented for d = 1",
        ));
    }
    if !(grid_res > 0.0) {
        return Err(Error::invalid("grid_res", "must be positive"));
    }
    if n_trials == 0 {
        return Err(Error::invalid("n_trials", "must be positive"));
    }
    // exact 1d gap in the polar norm: half the largest consecutive spacing
    let mut xs: Vec<f64> = set.coords().to_vec();
    xs.sort_by(f64::total_cmp);
    if xs.len() < 2 {
        return Err(Error::EmptySet);
    }
    let max_diff = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    let gap = space.domain().param() * max_diff / 2.0;
    if gap >= 0.25 {
        return Err(Error::SupercriticalGap { gap });
    }
    let dim = space.dim();
    let rows_at = |points: &[f64]| -> Vec<C64> {
        let mut rows = vec![C64::new(0.0, 0.0); points.len() * dim];
        for (i, &x) in points.iter().enumerate() {
            space.fourier_row_into(&[x], &mut rows[i * dim..(i + 1) * dim]);
        }
        rows
    };
    let omega_rows = rows_at(&xs);
    let extent = set.extent_radius();
    let n_grid = (2.0 * extent / grid_res).ceil() as usize;
    let grid: Vec<f64> = (0..n_grid).map(|i| -extent + i as f64 * grid_res).collect();
    let grid_rows = rows_at(&grid);
    let sup = |rows: &[C64], c: &[C64]| -> f64 {
        rows.chunks_exact(dim)
            .map(|row| {
                row.iter()
                    .zip(c)
                    .map(|(r, ci)| r * ci)
                    .sum::<C64>()
                    .norm()
            })
            .fold(0.0f64, f64::max)
    };
    let mut rng = substream(seed, "balayage");
    let mut ratios = Vec::with_capacity(n_trials);
    for _ in 0..n_trials {
        let mut c: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut c {
            *z /= norm;
        }
        ratios.push(sup(&omega_rows, &c) / sup(&grid_rows, &c));
    }
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(BalayageReport {
        gap,
        bound: (2.0 * std::f64::consts::PI * gap).cos(),
        min_ratio,
        ratios,
    })
}

/// Minimal eigenpair of the (size x size) overlap matrix
/// `M_kl = sin(2 pi eps (k-l)) / (pi (k-l))` (diagonal `2 eps`) in
/// double-double precision. The eigenvalue reaches far below f64 resolution.
pub(crate) fn prolate_min_dd(size: usize, eps: f64) -> (Dd, Vec<Dd>) {
    let m = DdMat::from_fn(size, |k, l| {
        if k == l {
            Dd::from_f64(2.0 * eps)
        } else {
            let diff = k as f64 - l as f64;
            // sin(2 pi eps d) / (pi d) with an exact product argument
            let arg = Dd::from_prod(2.0 * eps, diff);
            arg.sinpi() / (Dd::PI * Dd::from_f64(diff))
        }
    });
    let (evals, evecs) = jacobi_eigen_dd(&m);
    let mut c = evecs.column(0);
    // deterministic sign: largest-magnitude coefficient positive
    let lead = c
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    if c[lead].hi < 0.0 {
        for v in &mut c {
            *v = -*v;
        }
    }
    (evals[0], c)
}

/// L²-optimal concentration polynomial of degree `n` for the window
/// `[-eps, eps]`: unit-energy coefficients minimizing the window energy.
/// The minimal energy (`leak`) decays exponentially in `n`.
pub fn concentration_polynomial(n: usize, eps: f64) -> Result<ConcentrationPolynomial> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid("eps", "must lie in (0, 1/2)"));
    }
    let (leak, c) = prolate_min_dd(n + 1, eps);
    Ok(ConcentrationPolynomial {
        n,
        epsilon: eps,
        coefficients: c.iter().map(|v| v.to_f64()).collect(),
        leak: leak.to_f64(),
    })
}
