//! Double-double arithmetic (~31 significant decimal digits) and a Jacobi
//! eigensolver built on it.
//!
//! The concentration spectra computed in this crate have eigenvalues far
//! below the 1e-16 noise floor of f64 eigensolvers; representing the matrix
//! entries and the rotations as unevaluated sums of two f64 values keeps
//! those eigenvalues meaningful down to roughly 1e-31 times the matrix norm.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two f64 values.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "sqrt of negative double-double");
        // Karp's method: one Newton correction of the f64 square root.
        let x = 1.0 / self.hi.sqrt();
        let y = self.hi * x;
        let dy = (self - Dd::from_prod(y, y)).hi * (x * 0.5);
        let (h, l) = quick_two_sum(y, dy);
        Dd { hi: h, lo: l }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    fn total_cmp(&self, other: &Dd) -> Ordering {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo).unwrap(),
            Some(ord) => ord,
            None => panic!("NaN in double-double comparison"),
        }
    }

    /// sin(pi * self), exact for dyadic-rational arguments.
    pub fn sinpi(self) -> Dd {
        let (r, _neg_cos) = reduce_half_period(self);
        // r in [-1, 1]; fold to [0, 1] by oddness, then to [0, 1/2].
        let (r, sign) = if r.hi < 0.0 { (-r, -1.0) } else { (r, 1.0) };
        let r = if r > Dd::from_f64(0.5) { Dd::ONE - r } else { r };
        let v = if r > Dd::from_f64(0.25) {
            cos_kernel(Dd::PI * (Dd::from_f64(0.5) - r))
        } else {
            sin_kernel(Dd::PI * r)
        };
        if sign < 0.0 {
            -v
        } else {
            v
        }
    }

    /// cos(pi * self), exact for dyadic-rational arguments.
    pub fn cospi(self) -> Dd {
        let (r, _) = reduce_half_period(self);
        let r = r.abs();
        let (r, sign) = if r > Dd::from_f64(0.5) {
            (Dd::ONE - r, -1.0)
        } else {
            (r, 1.0)
        };
        let v = if r > Dd::from_f64(0.25) {
            sin_kernel(Dd::PI * (Dd::from_f64(0.5) - r))
        } else {
            cos_kernel(Dd::PI * r)
        };
        if sign < 0.0 {
            -v
        } else {
            v
        }
    }
}

/// Reduce modulo 2 into [-1, 1]. The subtraction is exact because the
/// multiple of 2 is exactly representable for the argument sizes used here.
fn reduce_half_period(x: Dd) -> (Dd, bool) {
    debug_assert!(x.hi.abs() < 4.0e15);
    let m = (x.hi * 0.5).round();
    (x - Dd::from_f64(2.0 * m), false)
}

/// Taylor series for sin(t), |t| <= pi/4.
fn sin_kernel(t: Dd) -> Dd {
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 1u32;
    loop {
        term = term * t2 / Dd::from_f64(-((2 * k) as f64 * (2 * k + 1) as f64));
        sum = sum + term;
        if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) || k > 30 {
            break;
        }
        k += 1;
    }
    sum
}

/// Taylor series for cos(t), |t| <= pi/4.
fn cos_kernel(t: Dd) -> Dd {
    let t2 = t * t;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 1u32;
    loop {
        term = term * t2 / Dd::from_f64(-((2 * k - 1) as f64 * (2 * k) as f64));
        sum = sum + term;
        if term.hi.abs() < 1e-35 || k > 30 {
            break;
        }
        k += 1;
    }
    sum
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s2, e2) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s2, e2 + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        assert!(b.hi != 0.0, "double-double division by zero");
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    /// e^{i pi t}.
    pub fn expi_pi(t: Dd) -> DdComplex {
        DdComplex {
            re: t.cospi(),
            im: t.sinpi(),
        }
    }

    pub fn add(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    pub fn mul(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    pub fn scale(self, s: Dd) -> DdComplex {
        DdComplex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }
}

/// Dense symmetric matrix of double-double entries, row-major.
#[derive(Clone)]
pub struct DdMat {
    n: usize,
    a: Vec<Dd>,
}

impl DdMat {
    pub fn zeros(n: usize) -> DdMat {
        DdMat {
            n,
            a: vec![Dd::ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Dd) -> DdMat {
        let mut m = DdMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> DdMat {
        let mut m = DdMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Dd::ONE;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Dd {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Dd) {
        self.a[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Dd> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

/// Eigen decomposition of a symmetric double-double matrix by cyclic Jacobi
/// rotations. Returns eigenvalues in ascending order and the matching
/// eigenvectors as columns.
///
/// Accuracy is limited by the double-double format: eigenvalues carry an
/// absolute error around `1e-31 * ||A||`, independent of their size.
pub fn jacobi_eigen_dd(m: &DdMat) -> (Vec<Dd>, DdMat) {
    let n = m.size();
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..n {
            debug_assert!(
                (a.get(i, j) - a.get(j, i)).hi.abs() <= 1e-30 * a.get(i, j).hi.abs().max(1.0),
                "jacobi_eigen_dd requires a symmetric matrix"
            );
        }
    }
    let mut v = DdMat::identity(n);
    let scale: f64 = (0..n)
        .map(|i| a.get(i, i).hi.abs())
        .fold(0.0, f64::max)
        .max(1e-300);

    for _sweep in 0..60 {
        let mut max_off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a.get(p, q).hi.abs());
            }
        }
        if max_off <= 1e-64 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.hi.abs() <= 1e-70 * scale {
                    a.set(p, q, Dd::ZERO);
                    a.set(q, p, Dd::ZERO);
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (Dd::from_f64(2.0) * apq);
                let t_abs = (theta * theta + Dd::ONE).sqrt() + theta.abs();
                let t = if theta.hi >= 0.0 {
                    t_abs.recip()
                } else {
                    -t_abs.recip()
                };
                let c = (t * t + Dd::ONE).sqrt().recip();
                let s = t * c;

                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, Dd::ZERO);
                a.set(q, p, Dd::ZERO);
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        let np = c * akp - s * akq;
                        let nq = s * akp + c * akq;
                        a.set(k, p, np);
                        a.set(p, k, np);
                        a.set(k, q, nq);
                        a.set(q, k, nq);
                    }
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let vals: Vec<Dd> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vecs = DdMat::zeros(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vecs.set(i, new_j, v.get(i, old_j));
        }
    }
    (vals, vecs)
}
