//! Centered symmetric convex bodies, their polar norms and volumes, and
//! geometric statistics of point sets: gap, separation, covering number.

use crate::error::{Error, Result};
use crate::sampling::SamplingSet;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Supported body shapes. `Box` is the cube `[-a, a]^d` with half-width `a`;
/// `Ball` is the Euclidean ball of the given radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Box,
    Ball,
}

/// A centered symmetric convex body `D` together with its dimension.
///
/// Carries closed forms for the Minkowski norm of `D`, the norm whose unit
/// ball is the polar set `D° = {z : x·z <= 1 for all x in D}`, both volumes,
/// the circumradius `m_D`, and the smallest `c°` with `|z|_2 <= c°
/// |z|_{D°}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr", into = "BodyRepr")]
pub struct ConvexBody {
    kind: BodyKind,
    dim: usize,
    param: f64,
}

#[derive(Serialize, Deserialize)]
struct BodyRepr {
    kind: String,
    dim: usize,
    param: f64,
}

impl From<ConvexBody> for BodyRepr {
    fn from(b: ConvexBody) -> BodyRepr {
        BodyRepr {
            kind: match b.kind {
                BodyKind::Box => "box".into(),
                BodyKind::Ball => "ball".into(),
            },
            dim: b.dim,
            param: b.param,
        }
    }
}

impl TryFrom<BodyRepr> for ConvexBody {
    type Error = Error;
    fn try_from(r: BodyRepr) -> Result<ConvexBody> {
        match r.kind.as_str() {
            "box" => ConvexBody::cube(r.param, r.dim),
            "ball" => ConvexBody::ball(r.param, r.dim),
            other => Err(Error::invalid("kind", format!("unknown body kind '{other}'"))),
        }
    }
}

impl ConvexBody {
    /// The cube `[-half_width, half_width]^d`.
    pub fn cube(half_width: f64, dim: usize) -> Result<ConvexBody> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::invalid("half_width", "must be positive"));
        }
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        Ok(ConvexBody {
            kind: BodyKind::Box,
            dim,
            param: half_width,
        })
    }

    /// The Euclidean ball of the given radius.
    pub fn ball(radius: f64, dim: usize) -> Result<ConvexBody> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("radius", "must be positive"));
        }
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        Ok(ConvexBody {
            kind: BodyKind::Ball,
            dim,
            param: radius,
        })
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Minkowski functional `inf {a > 0 : x in aD}`.
    pub fn norm_d(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self.kind {
            BodyKind::Box => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / self.param,
            BodyKind::Ball => norm2(x) / self.param,
        })
    }

    /// Norm whose unit ball is the polar set `D°`.
    pub fn norm_polar(&self, z: &[f64]) -> Result<f64> {
        self.check_dim(z)?;
        Ok(self.norm_polar_unchecked(z))
    }

    #[inline]
    pub(crate) fn norm_polar_unchecked(&self, z: &[f64]) -> f64 {
        match self.kind {
            BodyKind::Box => self.param * z.iter().map(|v| v.abs()).sum::<f64>(),
            BodyKind::Ball => self.param * norm2(z),
        }
    }

    /// `|z|_2 <= polar_to_euclidean_factor * |z|_{D°}` with the smallest
    /// such factor; used to convert polar-norm radii to Euclidean ones.
    #[inline]
    pub(crate) fn polar_to_euclidean_factor(&self) -> f64 {
        1.0 / self.param
    }

    /// Lebesgue measures `(meas(D), meas(D°))` in closed form.
    pub fn volumes(&self) -> (f64, f64) {
        let d = self.dim as f64;
        match self.kind {
            BodyKind::Box => {
                // D° is the l1 ball of radius 1/a
                let meas_d = (2.0 * self.param).powf(d);
                let mut dfact = 1.0;
                for k in 1..=self.dim {
                    dfact *= k as f64;
                }
                let meas_polar = (2.0 / self.param).powf(d) / dfact;
                (meas_d, meas_polar)
            }
            BodyKind::Ball => {
                let unit = unit_ball_volume(self.dim);
                (unit * self.param.powf(d), unit * self.param.powf(-d))
            }
        }
    }

    /// Circumradius `m_D = max_{x in D} |x|_2`.
    pub fn m_d(&self) -> f64 {
        match self.kind {
            BodyKind::Box => self.param * (self.dim as f64).sqrt(),
            BodyKind::Ball => self.param,
        }
    }

    /// Smallest `c°` with `|z|_2 <= c° |z|_{D°}` for all `z`.
    pub fn c_polar(&self) -> f64 {
        1.0 / self.param
    }
}

fn norm2(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Volume of the unit Euclidean ball via the two-step recursion
/// `V_d = V_{d-2} * 2 pi / d`.
fn unit_ball_volume(dim: usize) -> f64 {
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut d = dim % 2;
    while d < dim {
        d += 2;
        v *= 2.0 * std::f64::consts::PI / d as f64;
    }
    v
}

/// Grid-search estimate of the gap, with its one-sided resolution error.
///
/// The true supremum over the probed ball exceeds `value` by at most
/// `error_bound` (the polar-norm radius of one probe-grid cell).
#[derive(Clone, Copy, Debug)]
pub struct GapEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// Deterministic grid-search estimate of the gap `delta_{D°}(set)`: the
/// supremum over probe points `z` in the ball of `probe_radius` of the
/// polar-norm distance from `z` to the set.
pub fn gap(
    set: &SamplingSet,
    body: &ConvexBody,
    probe_radius: f64,
    grid_step: f64,
) -> Result<GapEstimate> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: set.dim(),
        });
    }
    if !(grid_step > 0.0) {
        return Err(Error::invalid("grid_step", "must be positive"));
    }
    if probe_radius > set.extent_radius() {
        return Err(Error::InsufficientExtent {
            needed: probe_radius,
            extent: set.extent_radius(),
        });
    }
    let d = set.dim();
    let index = NearestIndex::build(set, body);
    let kmax = (probe_radius / grid_step).floor() as i64;
    let mut sup = 0.0_f64;
    let mut probe = vec![0.0; d];
    let mut k = vec![-kmax; d];
    'outer: loop {
        for a in 0..d {
            probe[a] = k[a] as f64 * grid_step;
        }
        if norm2(&probe) <= probe_radius {
            let dist = index.nearest_polar_dist(&probe);
            if dist > sup {
                sup = dist;
            }
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                break 'outer;
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
    // any z in the probed ball is within half a grid diagonal of a probe
    let half_cell = vec![grid_step / 2.0; d];
    let error_bound = body.norm_polar_unchecked(&half_cell);
    Ok(GapEstimate {
        value: sup,
        error_bound,
    })
}

/// Norm used for pairwise-distance statistics.
#[derive(Clone, Copy)]
pub enum NormChoice<'a> {
    Euclidean,
    Polar(&'a ConvexBody),
}

/// Minimum pairwise distance of the set in the chosen norm.
pub fn separation(set: &SamplingSet, norm: NormChoice) -> Result<f64> {
    let n = set.len();
    if n < 2 {
        return Err(Error::UndefinedSeparation);
    }
    if let NormChoice::Polar(body) = norm {
        if body.dim() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: body.dim(),
                got: set.dim(),
            });
        }
    }
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        match norm {
            NormChoice::Euclidean => norm2(&diff),
            NormChoice::Polar(body) => body.norm_polar_unchecked(&diff),
        }
    };
    // both norms dominate a multiple of the first-coordinate difference, so
    // a sweep over points sorted by first coordinate can stop early
    let scale = match norm {
        NormChoice::Euclidean => 1.0,
        NormChoice::Polar(body) => body.param(),
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| set.point(i)[0].partial_cmp(&set.point(j)[0]).unwrap());
    let mut best = f64::INFINITY;
    for i in 0..n {
        let pi = set.point(order[i]);
        for &oj in order[i + 1..].iter() {
            let pj = set.point(oj);
            if scale * (pj[0] - pi[0]) >= best {
                break;
            }
            let d = dist(pi, pj);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Supremum over closed unit cubes of the number of set points they
/// contain. Candidate cube origins are all points shifted by each cube
/// corner, plus a coarse safety-net grid of step 0.05, all within
/// `probe_radius`.
pub fn covering_number(set: &SamplingSet, probe_radius: f64) -> Result<usize> {
    if set.is_empty() {
        return Ok(0);
    }
    let d = set.dim();
    let sqrt_d = (d as f64).sqrt();
    if probe_radius > set.extent_radius() - sqrt_d {
        return Err(Error::InsufficientExtent {
            needed: probe_radius + sqrt_d,
            extent: set.extent_radius(),
        });
    }
    // boundary slack for closed-cube membership with rounded coordinates
    let tol = 1e-9;
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&i, &j| set.point(i)[0].partial_cmp(&set.point(j)[0]).unwrap());
    let xs: Vec<f64> = order.iter().map(|&i| set.point(i)[0]).collect();

    let count_in_cube = |z: &[f64]| -> usize {
        let lo = xs.partition_point(|&x| x < z[0] - tol);
        let hi = xs.partition_point(|&x| x <= z[0] + 1.0 + tol);
        let mut count = 0;
        for &idx in order[lo..hi].iter() {
            let p = set.point(idx);
            if p[1..]
                .iter()
                .zip(z[1..].iter())
                .all(|(&x, &c)| x >= c - tol && x <= c + 1.0 + tol)
            {
                count += 1;
            }
        }
        count
    };

    let mut sup = 0usize;
    let mut consider = |z: &[f64]| {
        if norm2(z) <= probe_radius {
            sup = sup.max(count_in_cube(z));
        }
    };

    // cube origins touching a point with one of its corners
    let mut z = vec![0.0; d];
    for p in set.iter_points() {
        for corner in 0..(1usize << d) {
            for a in 0..d {
                z[a] = p[a] - ((corner >> a) & 1) as f64;
            }
            consider(&z);
        }
    }

    // coarse safety-net grid
    let step = 0.05;
    let kmax = (probe_radius / step).floor() as i64;
    let mut k = vec![-kmax; d];
    'outer: loop {
        for a in 0..d {
            z[a] = k[a] as f64 * step;
        }
        consider(&z);
        let mut axis = d;
        loop {
            if axis == 0 {
                break 'outer;
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
    Ok(sup)
}

/// Bucket-grid nearest-neighbor index in the polar norm of a body.
///
/// Supports any dimension; lookups expand square rings of buckets and stop
/// once no farther bucket can beat the current best, using that both
/// supported polar norms dominate `param * |.|_inf`.
pub(crate) struct NearestIndex<'a> {
    set: &'a SamplingSet,
    body: ConvexBody,
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl<'a> NearestIndex<'a> {
    pub(crate) fn build(set: &'a SamplingSet, body: &ConvexBody) -> NearestIndex<'a> {
        let n = set.len().max(1);
        let d = set.dim();
        // aim for O(1) points per bucket on quasi-uniform sets
        let spread = 2.0 * set.extent_radius() + 1.0;
        let cell = (spread / (n as f64).powf(1.0 / d as f64)).max(1e-9);
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let key: Vec<i64> = set.point(i).iter().map(|&x| (x / cell).floor() as i64).collect();
            buckets.entry(key).or_default().push(i);
        }
        NearestIndex {
            set,
            body: *body,
            cell,
            buckets,
        }
    }

    pub(crate) fn nearest_polar_dist(&self, z: &[f64]) -> f64 {
        self.nearest(z).1
    }

    /// Index of the closest point in the polar norm and the distance;
    /// exact ties go to the lexicographically smallest point coordinates.
    pub(crate) fn nearest(&self, z: &[f64]) -> (usize, f64) {
        let d = self.set.dim();
        let home: Vec<i64> = z.iter().map(|&x| (x / self.cell).floor() as i64).collect();
        let scale = self.body.param();
        let mut best = f64::INFINITY;
        let mut best_idx = usize::MAX;
        let mut diff = vec![0.0; d];
        let mut ring = 0i64;
        loop {
            if best.is_finite() && scale * ((ring - 1).max(0) as f64 * self.cell) > best {
                break;
            }
            let mut visited_any = false;
            self.for_ring(&home, ring, |key| {
                if let Some(indices) = self.buckets.get(key) {
                    visited_any = true;
                    for &i in indices {
                        let p = self.set.point(i);
                        for a in 0..d {
                            diff[a] = z[a] - p[a];
                        }
                        let dist = self.body.norm_polar_unchecked(&diff);
                        if dist < best
                            || (dist == best
                                && best_idx != usize::MAX
                                && p < self.set.point(best_idx))
                        {
                            best = dist;
                            best_idx = i;
                        }
                    }
                }
            });
            let _ = visited_any;
            ring += 1;
            // guard against querying far outside the populated region
            if ring as f64 * self.cell > 4.0 * (2.0 * self.set.extent_radius() + 1.0) {
                break;
            }
        }
        (best_idx, best)
    }

    /// Visit bucket keys at l-infinity index distance exactly `ring`.
    fn for_ring(&self, home: &[i64], ring: i64, mut f: impl FnMut(&Vec<i64>)) {
        let d = home.len();
        if ring == 0 {
            f(&home.to_vec());
            return;
        }
        // iterate the full box and keep the shell; bucket dims are small
        let mut offset = vec![-ring; d];
        let mut key = vec![0i64; d];
        'outer: loop {
            if offset.iter().any(|&o| o.abs() == ring) {
                for a in 0..d {
                    key[a] = home[a] + offset[a];
                }
                f(&key);
            }
            let mut axis = d;
            loop {
                if axis == 0 {
                    break 'outer;
                }
                axis -= 1;
                if offset[axis] < ring {
                    offset[axis] += 1;
                    for v in offset[axis + 1..].iter_mut() {
                        *v = -ring;
                    }
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{gen_grid, gen_jittered, gen_spiral, GeneratorMeta};
    use approx::assert_relative_eq;

    #[test]
    fn norm_d_examples() {
        let b = ConvexBody::cube(0.5, 2).unwrap();
        assert_relative_eq!(b.norm_d(&[0.5, 0.0]).unwrap(), 1.0);
        let b = ConvexBody::ball(2.0, 2).unwrap();
        assert_relative_eq!(b.norm_d(&[0.0, 3.0]).unwrap(), 1.5);
        let b = ConvexBody::cube(1.0, 1).unwrap();
        assert_eq!(b.norm_d(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn norm_polar_examples() {
        let b = ConvexBody::cube(0.5, 1).unwrap();
        assert_relative_eq!(b.norm_polar(&[1.0]).unwrap(), 0.5);
        let b = ConvexBody::cube(0.5, 2).unwrap();
        assert_relative_eq!(b.norm_polar(&[1.0, 1.0]).unwrap(), 1.0);
        let b = ConvexBody::ball(1.0, 2).unwrap();
        assert_relative_eq!(b.norm_polar(&[0.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let b = ConvexBody::cube(0.5, 2).unwrap();
        assert!(b.norm_d(&[1.0]).is_err());
        assert!(b.norm_polar(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn volumes_closed_forms() {
        let (d, p) = ConvexBody::cube(0.5, 2).unwrap().volumes();
        assert_relative_eq!(d, 1.0);
        assert_relative_eq!(p, 8.0);
        let (d, p) = ConvexBody::ball(1.0, 2).unwrap().volumes();
        assert_relative_eq!(d, std::f64::consts::PI);
        assert_relative_eq!(p, std::f64::consts::PI);
        // product for cubes is independent of the half-width
        for a in [0.25, 0.5, 1.0, 2.0] {
            let (d, p) = ConvexBody::cube(a, 3).unwrap().volumes();
            assert_relative_eq!(d * p, 64.0 / 6.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn constants_m_d_and_c_polar() {
        let b = ConvexBody::cube(0.5, 2).unwrap();
        assert_relative_eq!(b.m_d(), 0.5 * 2.0_f64.sqrt());
        assert_relative_eq!(b.c_polar(), 2.0);
        let b = ConvexBody::ball(3.0, 2).unwrap();
        assert_relative_eq!(b.m_d(), 3.0);
        assert_relative_eq!(b.c_polar(), 1.0 / 3.0);
    }

    #[test]
    fn norm_axioms_on_deterministic_triples() {
        let bodies = [
            ConvexBody::cube(0.5, 2).unwrap(),
            ConvexBody::cube(1.3, 2).unwrap(),
            ConvexBody::ball(0.7, 2).unwrap(),
        ];
        let vecs: Vec<[f64; 2]> = (0..20)
            .map(|i| {
                let t = i as f64 * 0.71;
                [(2.0 * t).sin() * 1.3, (3.0 * t).cos() * 0.9]
            })
            .collect();
        for b in &bodies {
            for x in &vecs {
                for y in &vecs {
                    let nx = b.norm_polar(x).unwrap();
                    let ny = b.norm_polar(y).unwrap();
                    let sum = [x[0] + y[0], x[1] + y[1]];
                    assert!(b.norm_polar(&sum).unwrap() <= nx + ny + 1e-12);
                    let neg = [-x[0], -x[1]];
                    assert_relative_eq!(b.norm_polar(&neg).unwrap(), nx);
                    for t in [0.0, 0.5, 2.5] {
                        let tx = [t * x[0], t * x[1]];
                        assert_relative_eq!(
                            b.norm_polar(&tx).unwrap(),
                            t * nx,
                            epsilon = 1e-12,
                            max_relative = 1e-12
                        );
                        assert_relative_eq!(
                            b.norm_d(&tx).unwrap(),
                            t * b.norm_d(x).unwrap(),
                            epsilon = 1e-12,
                            max_relative = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn duality_pairing_bound() {
        // x in D, z in D° implies x.z <= 1
        let bodies = [
            ConvexBody::cube(0.5, 2).unwrap(),
            ConvexBody::ball(2.0, 2).unwrap(),
        ];
        for b in &bodies {
            for i in 0..30 {
                let t = i as f64 * 0.37 + 0.1;
                let mut x = [(1.7 * t).sin(), (2.3 * t).cos()];
                let mut z = [(0.9 * t).cos(), (1.1 * t).sin()];
                let nx = b.norm_d(&x).unwrap();
                if nx > 0.0 {
                    x = [x[0] / nx, x[1] / nx];
                }
                let nz = b.norm_polar(&z).unwrap();
                if nz > 0.0 {
                    z = [z[0] / nz, z[1] / nz];
                }
                assert!(x[0] * z[0] + x[1] * z[1] <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn body_serde_round_trip() {
        let b = ConvexBody::cube(0.5, 2).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.contains("\"kind\":\"box\""));
        let back: ConvexBody = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
        let bad: std::result::Result<ConvexBody, _> =
            serde_json::from_str("{\"kind\":\"cone\",\"dim\":2,\"param\":1.0}");
        assert!(bad.is_err());
    }

    #[test]
    fn gap_of_integer_grid_is_quarter() {
        let set = gen_grid(1.0, 1, 30.0).unwrap();
        let body = ConvexBody::cube(0.5, 1).unwrap();
        let g = gap(&set, &body, 10.0, 0.005).unwrap();
        assert_relative_eq!(g.value, 0.25, epsilon = 3e-3);
        assert!(g.value <= 0.25 + 1e-12);
        assert_relative_eq!(g.error_bound, 0.5 * 0.005 / 2.0);

        let half = gen_grid(0.5, 1, 30.0).unwrap();
        let g = gap(&half, &body, 10.0, 0.005).unwrap();
        assert_relative_eq!(g.value, 0.125, epsilon = 3e-3);
    }

    #[test]
    fn gap_of_z2_with_half_box_is_half() {
        let set = gen_grid(1.0, 2, 12.0).unwrap();
        let body = ConvexBody::cube(0.5, 2).unwrap();
        let g = gap(&set, &body, 3.0, 0.01).unwrap();
        // supremum 0.5 attained at cell centers
        assert!(g.value <= 0.5 + 1e-12);
        assert!(g.value >= 0.5 - g.error_bound - 1e-12);
    }

    #[test]
    fn gap_is_antitone_under_point_insertion() {
        let sparse = gen_grid(1.0, 1, 20.0).unwrap();
        let dense = gen_grid(0.5, 1, 20.0).unwrap();
        let body = ConvexBody::cube(0.5, 1).unwrap();
        let gs = gap(&sparse, &body, 8.0, 0.01).unwrap().value;
        let gd = gap(&dense, &body, 8.0, 0.01).unwrap().value;
        assert!(gd <= gs);
    }

    #[test]
    fn gap_scales_linearly_on_grids() {
        let body = ConvexBody::cube(0.5, 1).unwrap();
        let s1 = gen_grid(1.0, 1, 40.0).unwrap();
        let s3 = gen_grid(3.0, 1, 120.0).unwrap();
        let g1 = gap(&s1, &body, 10.0, 0.01).unwrap().value;
        let g3 = gap(&s3, &body, 30.0, 0.03).unwrap().value;
        assert_relative_eq!(g3, 3.0 * g1, max_relative = 1e-12);
    }

    #[test]
    fn gap_rejects_bad_inputs() {
        let body = ConvexBody::cube(0.5, 1).unwrap();
        let empty = SamplingSet::from_points(1, vec![], 5.0, GeneratorMeta::Explicit).unwrap();
        assert!(matches!(
            gap(&empty, &body, 1.0, 0.1),
            Err(Error::EmptySet)
        ));
        let set = gen_grid(1.0, 1, 5.0).unwrap();
        assert!(matches!(
            gap(&set, &body, 9.0, 0.1),
            Err(Error::InsufficientExtent { .. })
        ));
    }

    #[test]
    fn separation_examples() {
        let set = gen_grid(1.0, 1, 5.0).unwrap();
        assert_relative_eq!(separation(&set, NormChoice::Euclidean).unwrap(), 1.0);

        let set = SamplingSet::from_points(
            1,
            vec![0.0, 0.4, 1.0],
            2.0,
            GeneratorMeta::Explicit,
        )
        .unwrap();
        assert_relative_eq!(separation(&set, NormChoice::Euclidean).unwrap(), 0.4);

        let set = gen_jittered(0.5, 0.0, 1, 5.0, 1).unwrap();
        assert_relative_eq!(separation(&set, NormChoice::Euclidean).unwrap(), 0.5);

        let single =
            SamplingSet::from_points(1, vec![0.3], 1.0, GeneratorMeta::Explicit).unwrap();
        assert!(matches!(
            separation(&single, NormChoice::Euclidean),
            Err(Error::UndefinedSeparation)
        ));
    }

    #[test]
    fn separation_in_polar_norm() {
        let set = gen_grid(1.0, 2, 6.0).unwrap();
        let body = ConvexBody::cube(0.5, 2).unwrap();
        // nearest lattice neighbors differ by a unit vector: 0.5 * l1 = 0.5
        assert_relative_eq!(
            separation(&set, NormChoice::Polar(&body)).unwrap(),
            0.5
        );
    }

    #[test]
    fn covering_number_examples() {
        let z = gen_grid(1.0, 1, 12.0).unwrap();
        assert_eq!(covering_number(&z, 6.0).unwrap(), 2);

        let half = gen_grid(0.5, 1, 12.0).unwrap();
        assert_eq!(covering_number(&half, 6.0).unwrap(), 3);

        let sparse = gen_grid(3.0, 1, 12.0).unwrap();
        assert_eq!(covering_number(&sparse, 6.0).unwrap(), 1);

        let empty = SamplingSet::from_points(1, vec![], 5.0, GeneratorMeta::Explicit).unwrap();
        assert_eq!(covering_number(&empty, 1.0).unwrap(), 0);
    }

    #[test]
    fn covering_number_z2_is_four() {
        let z2 = gen_grid(1.0, 2, 8.0).unwrap();
        assert_eq!(covering_number(&z2, 4.0).unwrap(), 4);
    }

    #[test]
    fn halving_spiral_pitch_decreases_gap() {
        let body = ConvexBody::ball(1.0, 2).unwrap();
        let coarse = gen_spiral(1.0, 0.3, 8.0).unwrap();
        let fine = gen_spiral(0.5, 0.3, 8.0).unwrap();
        let gc = gap(&coarse, &body, 4.0, 0.02).unwrap().value;
        let gf = gap(&fine, &body, 4.0, 0.02).unwrap().value;
        assert!(gf < gc, "gap {gf} should drop below {gc}");
    }

    #[test]
    fn nearest_index_matches_brute_force() {
        let set = gen_jittered(0.7, 0.3, 2, 6.0, 5).unwrap();
        let body = ConvexBody::cube(0.5, 2).unwrap();
        let index = NearestIndex::build(&set, &body);
        for i in 0..40 {
            let t = i as f64 * 0.41;
            let z = [(1.3 * t).sin() * 4.0, (0.7 * t).cos() * 4.0];
            let brute = set
                .iter_points()
                .map(|p| body.norm_polar_unchecked(&[z[0] - p[0], z[1] - p[1]]))
                .fold(f64::INFINITY, f64::min);
            let got = index.nearest_polar_dist(&z);
            assert_relative_eq!(got, brute, epsilon = 1e-12);
        }
    }
}
