//! Sampling-set families: uniform and jittered lattices, radial lines, and
//! Archimedean spirals, together with truncation to a ball.
//!
//! A generated set realizes a conceptual countable set out to
//! `extent_radius`; geometry and weight queries are only valid strictly
//! inside that radius, so generators should be given a margin beyond the
//! largest truncation radius the caller will use.

use crate::error::{Error, Result};
use crate::rng::unit_jitter;
use serde::{Deserialize, Serialize};

/// How a set was produced. Carried along for manifests and reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorMeta {
    Grid { h: f64 },
    Jittered { h: f64, tau: f64, seed: u64 },
    Radial { n_lines: usize, radial_step: f64 },
    Spiral { pitch: f64, arc_step: f64 },
    Explicit,
}

/// Finite realization of a sampling set in frequency space.
///
/// Points are stored row-major (`dim` coordinates per point). All points lie
/// in the closed Euclidean ball of radius `extent_radius` and are pairwise
/// distinct to 1e-12.
#[derive(Clone, Debug)]
pub struct SamplingSet {
    dim: usize,
    points: Vec<f64>,
    extent_radius: f64,
    generator: GeneratorMeta,
}

/// Slack used when testing membership of boundary points in closed balls,
/// so that lattice points landing on the radius via rounded arithmetic are
/// kept.
const BOUNDARY_TOL: f64 = 1e-9;

fn norm2(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl SamplingSet {
    /// Build a set from explicit coordinates, validating the type
    /// invariants (finiteness, extent, no duplicates).
    pub fn from_points(
        dim: usize,
        points: Vec<f64>,
        extent_radius: f64,
        generator: GeneratorMeta,
    ) -> Result<SamplingSet> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if points.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: points.len() % dim,
            });
        }
        if !points.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("points", "coordinates must be finite"));
        }
        let set = SamplingSet {
            dim,
            points,
            extent_radius,
            generator,
        };
        for p in set.iter_points() {
            if norm2(p) > extent_radius + BOUNDARY_TOL {
                return Err(Error::invalid(
                    "points",
                    "a point lies outside the extent radius",
                ));
            }
        }
        set.check_distinct()?;
        Ok(set)
    }

    fn check_distinct(&self) -> Result<()> {
        let tol = 1e-12;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| {
            self.point(i)
                .partial_cmp(self.point(j))
                .expect("points are finite")
        });
        for (rank, &i) in order.iter().enumerate() {
            let pi = self.point(i);
            for &j in order[rank + 1..].iter() {
                let pj = self.point(j);
                if pj[0] - pi[0] > tol {
                    break;
                }
                let d2: f64 = pi.iter().zip(pj).map(|(a, b)| (a - b) * (a - b)).sum();
                if d2.sqrt() <= tol {
                    return Err(Error::DuplicatePoints { tol });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn extent_radius(&self) -> f64 {
        self.extent_radius
    }

    pub fn generator(&self) -> &GeneratorMeta {
        &self.generator
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Flat row-major coordinate storage.
    pub fn coords(&self) -> &[f64] {
        &self.points
    }

    /// Restrict to the closed ball of radius `k`; the result's extent
    /// becomes `k`.
    pub fn truncate(&self, k: f64) -> Result<SamplingSet> {
        if k > self.extent_radius + BOUNDARY_TOL {
            return Err(Error::InsufficientExtent {
                needed: k,
                extent: self.extent_radius,
            });
        }
        let mut points = Vec::new();
        for p in self.iter_points() {
            if norm2(p) <= k + BOUNDARY_TOL {
                points.extend_from_slice(p);
            }
        }
        Ok(SamplingSet {
            dim: self.dim,
            points,
            extent_radius: k,
            generator: self.generator.clone(),
        })
    }
}

/// Visit lattice indices `k` with `|k|_inf <= kmax` in lexicographic order.
fn for_each_lattice_index(dim: usize, kmax: i64, mut f: impl FnMut(&[i64])) {
    let mut k = vec![-kmax; dim];
    loop {
        f(&k);
        let mut axis = dim;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if k[axis] < kmax {
                k[axis] += 1;
                for v in k[axis + 1..].iter_mut() {
                    *v = -kmax;
                }
                break;
            }
        }
    }
}

/// All points of `h Z^d` with Euclidean norm at most `extent_radius`.
pub fn gen_grid(h: f64, dim: usize, extent_radius: f64) -> Result<SamplingSet> {
    gen_jittered(h, 0.0, dim, extent_radius, 0).map(|mut s| {
        s.generator = GeneratorMeta::Grid { h };
        s
    })
}

/// Perturbed lattice `h k + u_k` with `u_k` uniform on `[-tau h, tau h]^d`.
///
/// Each jitter component is a pure hash of (seed, k, axis), so any part of
/// the set can be regenerated independently with identical coordinates.
pub fn gen_jittered(
    h: f64,
    tau: f64,
    dim: usize,
    extent_radius: f64,
    seed: u64,
) -> Result<SamplingSet> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::invalid("h", "step must be positive"));
    }
    if !(0.0..0.5).contains(&tau) {
        return Err(Error::invalid("tau", "jitter fraction must be in [0, 1/2)"));
    }
    if dim == 0 {
        return Err(Error::invalid("dim", "must be positive"));
    }
    let kmax = (extent_radius / h + 1.0).ceil() as i64;
    let mut points = Vec::new();
    let mut buf = vec![0.0; dim];
    for_each_lattice_index(dim, kmax, |k| {
        for (axis, v) in buf.iter_mut().enumerate() {
            *v = h * k[axis] as f64;
            if tau > 0.0 {
                *v += tau * h * unit_jitter(seed, k, axis as u32);
            }
        }
        if norm2(&buf) <= extent_radius + BOUNDARY_TOL * h {
            points.extend_from_slice(&buf);
        }
    });
    Ok(SamplingSet {
        dim,
        points,
        extent_radius,
        generator: GeneratorMeta::Jittered { h, tau, seed },
    })
}

/// Points on `n_lines` full lines through the origin at angles `pi j /
/// n_lines`, with signed radii in `radial_step * Z`; the origin appears
/// once.
pub fn gen_radial(n_lines: usize, radial_step: f64, extent_radius: f64) -> Result<SamplingSet> {
    if n_lines == 0 {
        return Err(Error::invalid("n_lines", "need at least one line"));
    }
    if radial_step <= 0.0 {
        return Err(Error::invalid("radial_step", "must be positive"));
    }
    let mut points = vec![0.0, 0.0];
    let mmax = (extent_radius / radial_step + BOUNDARY_TOL).floor() as i64;
    for j in 0..n_lines {
        let theta = std::f64::consts::PI * j as f64 / n_lines as f64;
        let (sin_t, cos_t) = theta.sin_cos();
        for m in 1..=mmax {
            let r = radial_step * m as f64;
            points.extend_from_slice(&[r * cos_t, r * sin_t]);
            points.extend_from_slice(&[-r * cos_t, -r * sin_t]);
        }
    }
    SamplingSet::from_points(2, points, extent_radius, GeneratorMeta::Radial {
        n_lines,
        radial_step,
    })
}

/// Points marched along the Archimedean spiral `r = pitch * theta / (2
/// pi)` at approximately uniform arc length, starting from the origin.
pub fn gen_spiral(pitch: f64, arc_step: f64, extent_radius: f64) -> Result<SamplingSet> {
    if pitch <= 0.0 {
        return Err(Error::invalid("pitch", "must be positive"));
    }
    if arc_step <= 0.0 {
        return Err(Error::invalid("arc_step", "must be positive"));
    }
    let b = pitch / (2.0 * std::f64::consts::PI);
    let mut points = vec![0.0, 0.0];
    let mut theta = 0.0_f64;
    loop {
        let r_here = b * theta;
        theta += arc_step / (b * b + r_here * r_here).sqrt();
        let r = b * theta;
        if r > extent_radius {
            break;
        }
        points.extend_from_slice(&[r * theta.cos(), r * theta.sin()]);
    }
    SamplingSet::from_points(2, points, extent_radius, GeneratorMeta::Spiral {
        pitch,
        arc_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_1d(set: &SamplingSet) -> Vec<f64> {
        let mut v: Vec<f64> = set.coords().to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn grid_1d_examples() {
        let s = gen_grid(1.0, 1, 2.0).unwrap();
        assert_eq!(sorted_1d(&s), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        let s = gen_grid(0.5, 1, 1.0).unwrap();
        assert_eq!(sorted_1d(&s), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn grid_2d_example() {
        let s = gen_grid(1.0, 2, 1.0).unwrap();
        let mut pts: Vec<(i64, i64)> = s
            .iter_points()
            .map(|p| (p[0].round() as i64, p[1].round() as i64))
            .collect();
        pts.sort();
        assert_eq!(pts, vec![(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn grid_matches_brute_force_enumeration() {
        let h = 0.3;
        let r = 2.0;
        let s = gen_grid(h, 2, r).unwrap();
        let mut expect = Vec::new();
        for k1 in -20..=20i64 {
            for k2 in -20..=20i64 {
                let (x, y) = (h * k1 as f64, h * k2 as f64);
                if (x * x + y * y).sqrt() <= r + 1e-9 * h {
                    expect.push((k1, k2));
                }
            }
        }
        assert_eq!(s.len(), expect.len());
    }

    #[test]
    fn jitter_zero_equals_grid() {
        let a = gen_grid(0.5, 2, 3.0).unwrap();
        let b = gen_jittered(0.5, 0.0, 2, 3.0, 99).unwrap();
        assert_eq!(a.coords(), b.coords());
    }

    #[test]
    fn jitter_is_deterministic() {
        let a = gen_jittered(0.5, 0.25, 1, 50.0, 7).unwrap();
        let b = gen_jittered(0.5, 0.25, 1, 50.0, 7).unwrap();
        assert_eq!(a.coords(), b.coords());
        let c = gen_jittered(0.5, 0.25, 1, 50.0, 8).unwrap();
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn jitter_spacing_respects_analytic_bound() {
        // spacing between consecutive points of a tau-jittered h-lattice is
        // at most h(1 + 2 tau), so the gap is at most h(1/2 + tau)
        let (h, tau) = (0.5, 0.25);
        let s = gen_jittered(h, tau, 1, 200.0, 3).unwrap();
        let xs = sorted_1d(&s);
        let max_spacing = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        assert!(max_spacing <= h * (1.0 + 2.0 * tau) + 1e-12);
        assert!(max_spacing > h * (1.0 - 2.0 * tau));
    }

    #[test]
    fn radial_single_line_is_signed_axis() {
        let s = gen_radial(1, 1.0, 2.0).unwrap();
        let mut xs: Vec<f64> = s.iter_points().map(|p| p[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(s.iter_points().all(|p| p[1] == 0.0));
    }

    #[test]
    fn radial_two_lines_contains_vertical_point() {
        let s = gen_radial(2, 0.7, 3.0).unwrap();
        assert!(s
            .iter_points()
            .any(|p| (p[0] - 0.0).abs() < 1e-12 && (p[1] - 0.7).abs() < 1e-12));
    }

    #[test]
    fn radial_count_formula() {
        for (n_lines, step, extent) in [(3usize, 0.5, 4.0), (8, 0.25, 2.0), (1, 1.0, 5.0)] {
            let s = gen_radial(n_lines, step, extent).unwrap();
            let per_line = 2 * (extent / step).floor() as usize;
            assert_eq!(s.len(), n_lines * per_line + 1);
        }
    }

    #[test]
    fn spiral_starts_at_origin_and_stays_bounded() {
        let s = gen_spiral(1.0, 0.4, 6.0).unwrap();
        assert_eq!(&s.coords()[..2], &[0.0, 0.0]);
        for p in s.iter_points() {
            assert!(norm2(p) <= 6.0 + 0.4);
        }
        assert!(s.len() > 100, "spiral should fill the disk");
    }

    #[test]
    fn truncate_examples() {
        let s = gen_grid(1.0, 1, 10.0).unwrap();
        let t = s.truncate(2.5).unwrap();
        assert_eq!(sorted_1d(&t), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(t.extent_radius(), 2.5);

        let id = s.truncate(10.0).unwrap();
        assert_eq!(id.coords(), s.coords());

        let z = s.truncate(0.0).unwrap();
        assert_eq!(z.coords(), &[0.0]);

        assert!(s.truncate(11.0).is_err());
    }

    #[test]
    fn truncate_composes_as_min() {
        let s = gen_jittered(0.5, 0.2, 1, 20.0, 11).unwrap();
        let a = s.truncate(8.0).unwrap().truncate(3.0).unwrap();
        let b = s.truncate(3.0).unwrap();
        assert_eq!(a.coords(), b.coords());
    }

    #[test]
    fn duplicate_points_rejected() {
        let r = SamplingSet::from_points(
            1,
            vec![0.0, 1.0, 1.0 + 1e-14],
            2.0,
            GeneratorMeta::Explicit,
        );
        assert!(matches!(r, Err(Error::DuplicatePoints { .. })));
    }

    #[test]
    fn point_outside_extent_rejected() {
        let r = SamplingSet::from_points(1, vec![0.0, 3.0], 2.0, GeneratorMeta::Explicit);
        assert!(r.is_err());
    }
}
