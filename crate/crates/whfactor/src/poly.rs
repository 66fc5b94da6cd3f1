//! Dense complex polynomial arithmetic, evaluation and the two norms used
//! throughout the pipeline: the Hoelder 1-norm of the coefficient vector and
//! the maximum modulus on a circle.

use crate::error::Error;
use crate::scalar::{two_prod_complex, two_sum_complex, Cplx, Real};

/// Zero threshold factor for "vanishes on the contour" checks: a sampled
/// minimum below `1e-12 * ||p||` aborts, because every accuracy bound
/// degenerates as the circle minimum goes to zero.
pub const ZERO_ON_CIRCLE_FACTOR: f64 = 1e-12;

/// Relative accuracy target of the golden-section refinement in
/// [`circle_extrema`].
const REFINE_REL_TOL: f64 = 1e-6;

/// Dense polynomial with coefficients ascending by power: `coeffs[j]` holds
/// the coefficient of `z^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T: Real> {
    coeffs: Vec<Cplx<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Builds a polynomial, trimming explicit zero leading coefficients.
    /// An all-zero vector collapses to the zero polynomial of degree 0.
    pub fn new(mut coeffs: Vec<Cplx<T>>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_reals(sample: &T, values: &[f64]) -> Self {
        Polynomial::new(
            values.iter().map(|v| Cplx::from_re(sample.from_f64(*v))).collect(),
        )
    }

    pub fn constant(value: Cplx<T>) -> Self {
        Polynomial { coeffs: vec![value] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^j`; zero beyond the stored degree.
    pub fn coeff(&self, j: usize) -> Cplx<T> {
        if j < self.coeffs.len() {
            self.coeffs[j].clone()
        } else {
            self.coeffs[0].zero()
        }
    }

    pub fn leading(&self) -> &Cplx<T> {
        self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Cplx<T>) -> Cplx<T> {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Compensated Horner evaluation: the rounding error of every product
    /// and sum is captured with error-free transformations and folded back
    /// at the end. In binary64 this recovers full working accuracy even when
    /// the coefficients span many orders of magnitude and the value is small
    /// against them; in extended precision the compensation terms vanish.
    pub fn eval_compensated(&self, z: &Cplx<T>) -> Cplx<T> {
        let mut val = self.coeffs.last().unwrap().clone();
        let mut err = val.zero();
        for c in self.coeffs.iter().rev().skip(1) {
            let (prod, e_prod) = two_prod_complex(&val, z);
            let (next, e_sum) = two_sum_complex(&prod, c);
            err = &(&err * z) + &(&e_prod + &e_sum);
            val = next;
        }
        &val + &err
    }

    /// Hoelder 1-norm of the coefficient vector.
    pub fn one_norm(&self) -> T {
        let mut acc = self.coeffs[0].re.zero();
        for c in &self.coeffs {
            acc = acc + c.abs();
        }
        acc
    }

    /// Coefficient convolution.
    pub fn multiply(&self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let zero = self.coeffs[0].zero();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(out)
    }

    pub fn add(&self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let zero = self.coeffs[0].zero();
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![zero; len];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] = &out[i] + a;
        }
        for (i, b) in rhs.coeffs.iter().enumerate() {
            out[i] = &out[i] + b;
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let zero = self.coeffs[0].zero();
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![zero; len];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] = &out[i] + a;
        }
        for (i, b) in rhs.coeffs.iter().enumerate() {
            out[i] = &out[i] - b;
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: &Cplx<T>) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Polynomial<T> {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(self.coeffs[0].zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&c.re.from_i64(j as i64)))
            .collect();
        Polynomial::new(coeffs)
    }

    /// `p / p_nu`: unit leading coefficient.
    pub fn to_monic(&self) -> Polynomial<T> {
        let lead = self.leading().clone();
        Polynomial::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Coefficient symmetry deviation for the self-inversive test
    /// `p_{nu-j} = conj(p_j)`, measured in the 1-norm.
    pub fn self_inversive_deviation(&self) -> T {
        let nu = self.degree();
        let mut acc = self.coeffs[0].re.zero();
        for j in 0..=nu {
            let d = &self.coeff(nu - j) - &self.coeff(j).conj();
            acc = acc + d.abs();
        }
        acc
    }

    /// Deviation from a real palindrome `p_{nu-j} = p_j` with real entries.
    pub fn real_palindrome_deviation(&self) -> T {
        let nu = self.degree();
        let mut acc = self.coeffs[0].re.zero();
        for j in 0..=nu {
            let d = &self.coeff(nu - j) - &self.coeff(j);
            acc = acc + d.abs() + self.coeff(j).im.abs();
        }
        acc
    }
}

/// min and max of |p| over the circle of the given radius.
///
/// Dense uniform sampling followed by golden-section refinement of the
/// bracketing arc around the grid minimizer and maximizer. Errors with
/// [`Error::ZeroOnCircle`] when the refined minimum falls below
/// `1e-12 * ||p||`.
pub fn circle_extrema<T: Real>(
    p: &Polynomial<T>,
    radius: &T,
    samples: usize,
) -> Result<(T, T), Error> {
    assert!(
        samples >= 4 * (p.degree() + 1),
        "need at least 4(degree+1) samples"
    );
    let (min, max) = sample_extrema(p, radius, samples);
    let threshold = ZERO_ON_CIRCLE_FACTOR * p.one_norm().to_f64();
    if min.to_f64() < threshold {
        return Err(Error::ZeroOnCircle { min_abs: min.to_f64(), threshold });
    }
    Ok((min, max))
}

/// Sampling + refinement without the zero-circle check; used by the annulus
/// search, which treats small minima as a stop condition rather than an error.
pub(crate) fn sample_extrema<T: Real>(
    p: &Polynomial<T>,
    radius: &T,
    samples: usize,
) -> (T, T) {
    let two_pi = radius.pi() * radius.from_i64(2);
    let step = two_pi.clone() / radius.from_i64(samples as i64);
    let abs_at = |phi: &T| -> T {
        let z = Cplx::from_polar(radius, phi);
        p.eval(&z).abs()
    };

    let mut min_val = abs_at(&radius.zero());
    let mut max_val = min_val.clone();
    let mut min_idx = 0usize;
    let mut max_idx = 0usize;
    for k in 1..samples {
        let phi = step.clone() * radius.from_i64(k as i64);
        let v = abs_at(&phi);
        if v < min_val {
            min_val = v.clone();
            min_idx = k;
        }
        if v > max_val {
            max_val = v;
            max_idx = k;
        }
    }

    let refine = |center: usize, maximize: bool| -> T {
        let lo = step.clone() * radius.from_i64(center as i64 - 1);
        let hi = step.clone() * radius.from_i64(center as i64 + 1);
        golden_section(&lo, &hi, |phi| {
            let v = abs_at(phi);
            if maximize {
                -v
            } else {
                v
            }
        })
    };
    let refined_min = refine(min_idx, false);
    let refined_max = -refine(max_idx, true);
    (refined_min.min_val(&min_val), refined_max.max_val(&max_val))
}

/// Golden-section minimization on [lo, hi]; returns the best function value.
fn golden_section<T: Real>(lo: &T, hi: &T, f: impl Fn(&T) -> T) -> T {
    // (sqrt(5) - 1) / 2
    let ratio = (lo.from_i64(5).sqrt() - lo.one()) / lo.from_i64(2);
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut x1 = b.clone() - (b.clone() - &a) * &ratio;
    let mut x2 = a.clone() + (b.clone() - &a) * &ratio;
    let mut f1 = f(&x1);
    let mut f2 = f(&x2);
    let tol = lo.from_f64(REFINE_REL_TOL);
    let scale = lo.one().max_val(&b.abs());
    while (b.clone() - &a).abs() > tol.clone() * &scale {
        if f1 <= f2 {
            b = x2;
            x2 = x1.clone();
            f2 = f1;
            x1 = b.clone() - (b.clone() - &a) * &ratio;
            f1 = f(&x1);
        } else {
            a = x1;
            x1 = x2.clone();
            f1 = f2;
            x2 = a.clone() + (b.clone() - &a) * &ratio;
            f2 = f(&x2);
        }
    }
    f1.min_val(&f2)
}
