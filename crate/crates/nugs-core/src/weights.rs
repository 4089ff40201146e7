//! Voronoi weights of a sampling set in the polar norm of a body: the
//! Lebesgue measure of each point's nearest-point region. Exact midpoint
//! intervals in 1D; grid or Monte Carlo cell probing in higher dimensions.

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, NearestIndex};
use crate::sampling::SamplingSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How a weight vector was estimated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum WeightMethod {
    Midpoint1d,
    Grid { resolution: usize },
    Mc { samples: usize, seed: u64 },
}

/// Probing strategy selector for `voronoi_weights_nd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMethod {
    Grid,
    Mc,
}

/// Points of `Omega ∩ B_K` with their Voronoi weights.
#[derive(Clone, Debug)]
pub struct WeightedSamples {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    weight_domain_radius: f64,
    method: WeightMethod,
}

impl WeightedSamples {
    /// Assemble from explicit data, validating counts and positivity.
    pub fn from_parts(
        dim: usize,
        points: Vec<f64>,
        weights: Vec<f64>,
        weight_domain_radius: f64,
        method: WeightMethod,
    ) -> Result<WeightedSamples> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if points.len() != weights.len() * dim {
            return Err(Error::SampleCount {
                samples: points.len() / dim.max(1),
                weights: weights.len(),
            });
        }
        if !weights.iter().all(|&w| w > 0.0 && w.is_finite()) {
            return Err(Error::invalid("weights", "must be strictly positive"));
        }
        Ok(WeightedSamples {
            dim,
            points,
            weights,
            weight_domain_radius,
            method,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.points
    }

    pub fn weight_domain_radius(&self) -> f64 {
        self.weight_domain_radius
    }

    pub fn method(&self) -> &WeightMethod {
        &self.method
    }

    pub fn iter_weighted(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }

    /// Keep only points with Euclidean norm at most `k`.
    pub fn restricted(&self, k: f64) -> WeightedSamples {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (p, w) in self.iter_weighted() {
            if norm2(p) <= k + 1e-9 {
                points.extend_from_slice(p);
                weights.push(w);
            }
        }
        WeightedSamples {
            dim: self.dim,
            points,
            weights,
            weight_domain_radius: self.weight_domain_radius,
            method: self.method.clone(),
        }
    }
}

fn norm2(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Exact 1D Voronoi weights: every norm on the line is a positive multiple
/// of the absolute value, so cells are midpoint intervals and `mu =
/// (next - prev) / 2` for interior points.
///
/// Weights are reported for points with `|omega| <= k`, with neighbors taken
/// from the full realized set; a reported point without both neighbors means
/// the set's extent cannot justify its cell and is an error.
pub fn voronoi_weights_1d(
    set: &SamplingSet,
    body: &ConvexBody,
    k: f64,
) -> Result<WeightedSamples> {
    if set.dim() != 1 || body.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: set.dim().max(body.dim()),
        });
    }
    let mut xs: Vec<f64> = set.coords().to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if x.abs() <= k + 1e-9 {
            if i == 0 || i + 1 == xs.len() {
                return Err(Error::InsufficientExtent {
                    needed: k,
                    extent: set.extent_radius(),
                });
            }
            points.push(x);
            weights.push((xs[i + 1] - xs[i - 1]) / 2.0);
        }
    }
    WeightedSamples::from_parts(1, points, weights, k, WeightMethod::Midpoint1d)
}

/// Voronoi weights in dimension >= 2, estimated by assigning probes over
/// the ball `B_{k + pad}` to their nearest point in the polar norm.
///
/// The pad is twice the largest realized nearest-neighbor distance inside
/// `B_k`, standing in for the conceptual cell radius, so cells of reported
/// points are measured in full. Grid probing uses `resolution` cells per
/// axis (integer counts, so results are independent of worker count);
/// Monte Carlo uses `resolution_or_samples` seeded uniform draws.
pub fn voronoi_weights_nd(
    set: &SamplingSet,
    body: &ConvexBody,
    k: f64,
    method: ProbeMethod,
    resolution_or_samples: usize,
    seed: u64,
) -> Result<WeightedSamples> {
    let d = set.dim();
    if d < 2 {
        return Err(Error::invalid("set", "voronoi_weights_nd requires d >= 2"));
    }
    if body.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: body.dim(),
        });
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let pad = 2.0 * max_nearest_neighbor_distance(set, k)?;
    let r = k + pad;
    if r > set.extent_radius() + 1e-9 {
        return Err(Error::InsufficientExtent {
            needed: r,
            extent: set.extent_radius(),
        });
    }

    let (counts, probe_measure, method_meta) = match method {
        ProbeMethod::Grid => {
            let total: f64 = (resolution_or_samples as f64).powi(d as i32);
            if total < 1e4 {
                return Err(Error::ProbeBudget {
                    got: total as usize,
                    min: 10_000,
                });
            }
            let (counts, kept) = assign_grid(set, body, r, resolution_or_samples);
            let cell_measure = (2.0 * r / resolution_or_samples as f64).powi(d as i32);
            let _ = kept;
            (
                counts,
                cell_measure,
                WeightMethod::Grid {
                    resolution: resolution_or_samples,
                },
            )
        }
        ProbeMethod::Mc => {
            if resolution_or_samples < 10_000 {
                return Err(Error::ProbeBudget {
                    got: resolution_or_samples,
                    min: 10_000,
                });
            }
            let (counts, kept) = assign_mc(set, body, r, resolution_or_samples, seed);
            let ball_measure = ConvexBody::ball(r, d)?.volumes().0;
            (
                counts,
                ball_measure / kept as f64,
                WeightMethod::Mc {
                    samples: resolution_or_samples,
                    seed,
                },
            )
        }
    };

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (i, p) in set.iter_points().enumerate() {
        if norm2(p) <= k + 1e-9 {
            let mu = counts[i] as f64 * probe_measure;
            if mu <= 0.0 {
                return Err(Error::invalid(
                    "resolution",
                    format!("no probes landed in the cell of point {i}; refine the probing"),
                ));
            }
            points.extend_from_slice(p);
            weights.push(mu);
        }
    }
    WeightedSamples::from_parts(d, points, weights, k, method_meta)
}

/// Largest Euclidean nearest-neighbor distance among points inside `B_k`.
fn max_nearest_neighbor_distance(set: &SamplingSet, k: f64) -> Result<f64> {
    let n = set.len();
    if n < 2 {
        return Err(Error::UndefinedSeparation);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| set.point(i)[0].partial_cmp(&set.point(j)[0]).unwrap());
    let mut worst = 0.0_f64;
    for (rank, &i) in order.iter().enumerate() {
        let pi = set.point(i);
        if norm2(pi) > k + 1e-9 {
            continue;
        }
        let mut best = f64::INFINITY;
        // scan outward in sorted x-order in both directions
        for &j in order[rank + 1..].iter() {
            let pj = set.point(j);
            if pj[0] - pi[0] >= best {
                break;
            }
            best = best.min(dist2(pi, pj));
        }
        for &j in order[..rank].iter().rev() {
            let pj = set.point(j);
            if pi[0] - pj[0] >= best {
                break;
            }
            best = best.min(dist2(pi, pj));
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Count probe-grid cells (centers inside `B_r`) assigned to each point.
/// Returns per-point counts and the number of kept probes. Rows of the
/// grid are processed in parallel; integer counts make the reduction
/// order irrelevant, so the result does not depend on the worker count.
fn assign_grid(
    set: &SamplingSet,
    body: &ConvexBody,
    r: f64,
    resolution: usize,
) -> (Vec<u64>, u64) {
    let d = set.dim();
    let n = set.len();
    let cell = 2.0 * r / resolution as f64;
    let center = |i: usize| -> f64 { -r + (i as f64 + 0.5) * cell };
    let index = NearestIndex::build(set, body);

    let combine = |mut a: (Vec<u64>, u64), b: (Vec<u64>, u64)| {
        for (x, y) in a.0.iter_mut().zip(b.0) {
            *x += y;
        }
        (a.0, a.1 + b.1)
    };

    (0..resolution)
        .into_par_iter()
        .fold(
            || (vec![0u64; n], 0u64),
            |(mut counts, mut kept), i0| {
                let mut probe = vec![0.0; d];
                probe[0] = center(i0);
                let mut idx = vec![0usize; d - 1];
                'outer: loop {
                    for a in 1..d {
                        probe[a] = center(idx[a - 1]);
                    }
                    if norm2(&probe) <= r {
                        let (who, _) = index.nearest(&probe);
                        counts[who] += 1;
                        kept += 1;
                    }
                    let mut axis = d - 1;
                    loop {
                        if axis == 0 {
                            break 'outer;
                        }
                        axis -= 1;
                        if idx[axis] + 1 < resolution {
                            idx[axis] += 1;
                            for v in idx[axis + 1..].iter_mut() {
                                *v = 0;
                            }
                            break;
                        }
                    }
                }
                (counts, kept)
            },
        )
        .reduce(|| (vec![0u64; n], 0u64), combine)
}

/// Count seeded uniform draws over `B_r` assigned to each point.
fn assign_mc(
    set: &SamplingSet,
    body: &ConvexBody,
    r: f64,
    samples: usize,
    seed: u64,
) -> (Vec<u64>, u64) {
    use rand::Rng;
    let d = set.dim();
    let mut rng = crate::rng::substream(seed, "voronoi-mc");
    let index = NearestIndex::build(set, body);
    let mut counts = vec![0u64; set.len()];
    let mut kept = 0u64;
    let mut probe = vec![0.0; d];
    for _ in 0..samples {
        for v in probe.iter_mut() {
            *v = rng.gen_range(-r..r);
        }
        if norm2(&probe) <= r {
            let (who, _) = index.nearest(&probe);
            counts[who] += 1;
            kept += 1;
        }
    }
    (counts, kept)
}
