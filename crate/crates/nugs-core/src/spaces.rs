//! Reconstruction subspaces of L²(D) with closed-form Fourier transforms:
//! orthonormal Legendre polynomials on [-1, 1] and tensor-product Haar
//! scaling spaces on [-1/2, 1/2]^d.

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg::C64;
use crate::special::{gauss_legendre, legendre_pn, sinc, spherical_jn_seq};
use crate::weights::WeightedSamples;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Which orthonormal family spans the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceFamily {
    /// Legendre polynomials of degree 0..=n_max on [-1, 1], orthonormalized.
    Legendre { n_max: usize },
    /// Haar scaling functions at scale `j` on [-1/2, 1/2]^d (the
    /// multiresolution span of all wavelets below scale `j`). `j0` records
    /// the nominal base scale; the span depends only on `j`.
    Haar { j: u32, j0: u32, d: usize },
}

/// A finite-dimensional reconstruction space with an orthonormal basis.
///
/// Haar bases in d dimensions are indexed row-major: basis index
/// `n = n_1 * 2^j + n_2` for d = 2.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionSpace {
    family: SpaceFamily,
    domain: ConvexBody,
}

impl ReconstructionSpace {
    pub fn legendre(n_max: usize) -> ReconstructionSpace {
        ReconstructionSpace {
            family: SpaceFamily::Legendre { n_max },
            domain: ConvexBody::cube(1.0, 1).expect("unit interval body"),
        }
    }

    pub fn haar(j: u32, d: usize, j0: u32) -> Result<ReconstructionSpace> {
        if d == 0 {
            return Err(Error::invalid("d", "must be positive"));
        }
        if j > 16 {
            return Err(Error::invalid("j", "scale too large for a dense basis"));
        }
        if j0 > j {
            return Err(Error::invalid("j0", "base scale cannot exceed finest scale"));
        }
        Ok(ReconstructionSpace {
            family: SpaceFamily::Haar { j, j0, d },
            domain: ConvexBody::cube(0.5, d)?,
        })
    }

    /// Parse a CLI spec string: `legendre:N` or `haar:J[:d[:J0]]`.
    pub fn parse(spec: &str) -> Result<ReconstructionSpace> {
        let bad = |reason: &str| Error::SpaceSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = spec.split(':');
        let family = parts.next().ok_or_else(|| bad("empty spec"))?;
        let nums: Vec<&str> = parts.collect();
        let parse_int = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| bad(&format!("{what} must be a nonnegative integer, got '{s}'")))
        };
        match family {
            "legendre" => {
                if nums.len() != 1 {
                    return Err(bad("expected legendre:N"));
                }
                Ok(ReconstructionSpace::legendre(
                    parse_int(nums[0], "degree")? as usize,
                ))
            }
            "haar" => {
                if nums.is_empty() || nums.len() > 3 {
                    return Err(bad("expected haar:J[:d[:J0]]"));
                }
                let j = parse_int(nums[0], "scale")? as u32;
                let d = if nums.len() >= 2 {
                    parse_int(nums[1], "dimension")? as usize
                } else {
                    1
                };
                let j0 = if nums.len() >= 3 {
                    parse_int(nums[2], "base scale")? as u32
                } else {
                    0
                };
                ReconstructionSpace::haar(j, d, j0)
            }
            other => Err(bad(&format!("unknown family '{other}'"))),
        }
    }

    /// Canonical spec string for reports and manifests.
    pub fn spec_string(&self) -> String {
        match self.family {
            SpaceFamily::Legendre { n_max } => format!("legendre:{n_max}"),
            SpaceFamily::Haar { j, j0, d } => format!("haar:{j}:{d}:{j0}"),
        }
    }

    pub fn family(&self) -> &SpaceFamily {
        &self.family
    }

    /// Dimension of the space.
    pub fn dim(&self) -> usize {
        match self.family {
            SpaceFamily::Legendre { n_max } => n_max + 1,
            SpaceFamily::Haar { j, d, .. } => (1usize << j).pow(d as u32),
        }
    }

    /// Spatial (and frequency) dimension d.
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            SpaceFamily::Legendre { .. } => 1,
            SpaceFamily::Haar { d, .. } => d,
        }
    }

    /// The domain D the basis is orthonormal on.
    pub fn domain(&self) -> &ConvexBody {
        &self.domain
    }

    /// Value of basis function `n` at spatial point `x`.
    pub fn eval_basis(&self, n: usize, x: &[f64]) -> Result<f64> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        if n >= self.dim() {
            return Err(Error::invalid("n", "basis index out of range"));
        }
        Ok(match self.family {
            SpaceFamily::Legendre { .. } => {
                let norm = ((2 * n + 1) as f64 / 2.0).sqrt();
                norm * legendre_pn(n, x[0]).0
            }
            SpaceFamily::Haar { j, d, .. } => {
                let cells = 1usize << j;
                let width = 1.0 / cells as f64;
                let mut inside = true;
                let mut rest = n;
                for axis in (0..d).rev() {
                    let cell = rest % cells;
                    rest /= cells;
                    let lo = -0.5 + cell as f64 * width;
                    inside &= x[axis] >= lo && x[axis] < lo + width;
                }
                if inside {
                    (cells as f64).sqrt().powi(d as i32)
                } else {
                    0.0
                }
            }
        })
    }

    /// Fourier transforms of all basis functions at frequency `omega`:
    /// `phi_hat_n(omega) = integral of phi_n(x) e^{-i 2 pi omega . x} dx`.
    pub fn fourier_row(&self, omega: &[f64]) -> Result<Vec<C64>> {
        if omega.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: omega.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.fourier_row_into(omega, &mut out);
        Ok(out)
    }

    /// `fourier_row` writing into a caller-provided buffer of length `dim`.
    pub fn fourier_row_into(&self, omega: &[f64], out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.dim());
        match self.family {
            SpaceFamily::Legendre { n_max } => {
                legendre_fourier_row(n_max, omega[0], out);
            }
            SpaceFamily::Haar { j, d, .. } => {
                let cells = 1usize << j;
                let mut axis_rows = Vec::with_capacity(d);
                for &xi in omega.iter().take(d) {
                    axis_rows.push(haar_axis_row(j, xi));
                }
                // tensor product, row-major over axis cell indices
                for (idx, v) in out.iter_mut().enumerate() {
                    let mut acc = C64::new(1.0, 0.0);
                    let mut rest = idx;
                    for axis in (0..d).rev() {
                        acc *= axis_rows[axis][rest % cells];
                        rest /= cells;
                    }
                    *v = acc;
                }
            }
        }
    }
}

/// Legendre row: `sqrt((2n+1)/2) * 2 (-i)^n j_n(2 pi |xi|)`, conjugated for
/// negative frequencies.
fn legendre_fourier_row(n_max: usize, xi: f64, out: &mut [C64]) {
    let s = 2.0 * std::f64::consts::PI * xi.abs();
    let jn = spherical_jn_seq(n_max, s);
    for (n, v) in out.iter_mut().enumerate() {
        let mag = ((2 * n + 1) as f64 / 2.0).sqrt() * 2.0 * jn[n];
        // (-i)^n cycle
        let val = match n % 4 {
            0 => C64::new(mag, 0.0),
            1 => C64::new(0.0, -mag),
            2 => C64::new(-mag, 0.0),
            _ => C64::new(0.0, mag),
        };
        *v = if xi < 0.0 { val.conj() } else { val };
    }
}

/// One axis of the Haar row: `2^{-j/2} sinc(xi / 2^j) e^{-2 pi i xi t_n}`
/// with `t_n` the center of cell `n`.
fn haar_axis_row(j: u32, xi: f64) -> Vec<C64> {
    let cells = 1usize << j;
    let scale = 2.0_f64.powi(j as i32);
    let base = sinc(xi / scale) / scale.sqrt();
    (0..cells)
        .map(|n| {
            let t_n = -0.5 + (n as f64 + 0.5) / scale;
            let arg = -2.0 * std::f64::consts::PI * xi * t_n;
            let (s, c) = arg.sin_cos();
            C64::new(base * c, base * s)
        })
        .collect()
}

/// Quadrature resolution for `continuous_gram`: Gauss-Legendre panels with
/// this many nodes per unit frequency length per axis.
#[derive(Clone, Copy, Debug)]
pub struct QuadSpec {
    pub nodes_per_unit: usize,
}

impl Default for QuadSpec {
    fn default() -> QuadSpec {
        QuadSpec { nodes_per_unit: 32 }
    }
}

/// Gram matrix of the basis Fourier transforms over the ball `|xi| <= k`:
/// `G[m, n] = integral phi_hat_m(xi) conj(phi_hat_n(xi)) d xi`.
///
/// d = 1 uses Gauss-Legendre panels of width at most one; d = 2 integrates
/// in polar coordinates with the same radial panels and a uniform angular
/// rule sized to the ring circumference. The result is Hermitian by
/// construction.
pub fn continuous_gram(
    space: &ReconstructionSpace,
    k: f64,
    quad: &QuadSpec,
) -> Result<DMatrix<C64>> {
    if !(k >= 0.0) {
        return Err(Error::invalid("k", "radius must be nonnegative"));
    }
    if quad.nodes_per_unit < 4 {
        return Err(Error::invalid(
            "nodes_per_unit",
            "need at least 4 quadrature nodes per unit length",
        ));
    }
    let dim = space.dim();
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    if k == 0.0 {
        return Ok(g);
    }
    let mut row = vec![C64::new(0.0, 0.0); dim];
    let mut visit = |point: &[f64], w: f64, g: &mut DMatrix<C64>| {
        space.fourier_row_into(point, &mut row);
        for m in 0..dim {
            let rm = row[m];
            for n in m..dim {
                g[(m, n)] += rm * row[n].conj() * w;
            }
        }
    };
    match space.ambient_dim() {
        1 => {
            let panels = (2.0 * k).ceil().max(1.0) as usize;
            let width = 2.0 * k / panels as f64;
            let nodes = ((quad.nodes_per_unit as f64 * width).ceil() as usize).max(4);
            let (gx, gw) = gauss_legendre(nodes);
            for p in 0..panels {
                let lo = -k + p as f64 * width;
                for (x, w) in gx.iter().zip(&gw) {
                    let xi = lo + (x + 1.0) * width / 2.0;
                    visit(&[xi], w * width / 2.0, &mut g);
                }
            }
        }
        2 => {
            let panels = k.ceil().max(1.0) as usize;
            let width = k / panels as f64;
            let nodes = ((quad.nodes_per_unit as f64 * width).ceil() as usize).max(4);
            let (gx, gw) = gauss_legendre(nodes);
            for p in 0..panels {
                let lo = p as f64 * width;
                for (x, w) in gx.iter().zip(&gw) {
                    let r = lo + (x + 1.0) * width / 2.0;
                    let wr = w * width / 2.0 * r;
                    let n_theta = ((quad.nodes_per_unit as f64 * 2.0
                        * std::f64::consts::PI
                        * r)
                        .ceil() as usize)
                        .max(16);
                    let wt = 2.0 * std::f64::consts::PI / n_theta as f64;
                    for t in 0..n_theta {
                        let theta = wt * (t as f64 + 0.5);
                        visit(&[r * theta.cos(), r * theta.sin()], wr * wt, &mut g);
                    }
                }
            }
        }
        d => {
            return Err(Error::invalid(
                "space",
                format!("continuous_gram supports d <= 2, got d = {d}"),
            ));
        }
    }
    // fill the lower triangle; diagonal is real up to roundoff
    for m in 0..dim {
        g[(m, m)] = C64::new(g[(m, m)].re, 0.0);
        for n in (m + 1)..dim {
            g[(n, m)] = g[(m, n)].conj();
        }
    }
    Ok(g)
}

/// Weighted discrete Gram `G[m, n] = sum_omega mu_omega phi_hat_m(omega)
/// conj(phi_hat_n(omega))`: Hermitian positive semidefinite.
///
/// Points are accumulated in fixed-size chunks combined in chunk order, so
/// the result is bitwise independent of the number of worker threads.
pub fn discrete_gram(space: &ReconstructionSpace, ws: &WeightedSamples) -> Result<DMatrix<C64>> {
    if ws.is_empty() {
        return Err(Error::EmptySet);
    }
    if ws.dim() != space.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.ambient_dim(),
            got: ws.dim(),
        });
    }
    let dim = space.dim();
    let n_pts = ws.len();
    const CHUNK: usize = 4096;
    let starts: Vec<usize> = (0..n_pts).step_by(CHUNK).collect();
    let partials: Vec<DMatrix<C64>> = starts
        .par_iter()
        .map(|&start| {
            let stop = (start + CHUNK).min(n_pts);
            let mut part = DMatrix::<C64>::zeros(dim, dim);
            let mut row = vec![C64::new(0.0, 0.0); dim];
            for i in start..stop {
                space.fourier_row_into(ws.point(i), &mut row);
                let mu = ws.weight(i);
                for m in 0..dim {
                    let rm = row[m] * mu;
                    for n in m..dim {
                        part[(m, n)] += rm * row[n].conj();
                    }
                }
            }
            part
        })
        .collect();
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for part in partials {
        g += part;
    }
    for m in 0..dim {
        g[(m, m)] = C64::new(g[(m, m)].re, 0.0);
        for n in (m + 1)..dim {
            g[(n, m)] = g[(m, n)].conj();
        }
    }
    Ok(g)
}
