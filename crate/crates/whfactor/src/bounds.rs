//! Effective a-priori estimates: the multiplicative constant delta0, norm
//! and condition bounds for the central Toeplitz matrix, and the certified
//! factor accuracies derived from the input accuracy.

use crate::error::Error;
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};

/// Catalan's constant to 30 decimal digits.
pub const CATALAN_30: &str = "0.915965594177219015054603514932";

/// Boyd's constant `e^{2G/pi} = 1.7916228120695934247...` evaluated in the
/// working precision.
pub fn boyd_delta<T: Real>(sample: &T) -> T {
    let g = sample.parse_decimal(CATALAN_30).expect("catalan literal");
    (sample.from_i64(2) * g / sample.pi()).exp()
}

/// Selection policy for the effective constant in
/// `||p1|| ||p2|| <= delta0 ||p||`.
#[derive(Clone, Debug, PartialEq)]
pub enum Delta0Mode<T: Real> {
    /// exact_one -> self_inversive -> general, each gated by its hypothesis
    /// test; exact_one fires only when oracle roots are supplied.
    Auto,
    General,
    SelfInversive,
    ExactOne,
    Manual(T),
}

/// User-facing bound configuration: contraction parameter, input accuracy,
/// delta0 policy and the optional window-accuracy override.
#[derive(Clone, Debug)]
pub struct BoundsConfig<T: Real> {
    pub q: T,
    pub delta: T,
    pub delta0_mode: Delta0Mode<T>,
    pub eps_tilde_override: Option<T>,
}

impl<T: Real> BoundsConfig<T> {
    pub fn validate(&self) -> Result<(), Error> {
        let zero = self.q.zero();
        if self.q <= zero || self.q >= self.q.one() {
            return Err(Error::InvalidInput("q must lie in (0, 1)".into()));
        }
        if self.delta <= zero {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        Ok(())
    }
}

/// Inputs shared by the norm, condition and accuracy bounds.
#[derive(Clone, Debug)]
pub struct BoundInputs<T: Real> {
    pub n: usize,
    pub nu: usize,
    pub kappa: i64,
    pub rho: T,
    pub m1: T,
    pub m_k: T,
    pub delta0: T,
    pub norm_p: T,
    pub q: T,
}

/// Everything the accuracy certificate of one run consists of.
#[derive(Clone, Debug)]
pub struct BoundLedger<T: Real> {
    pub delta0: T,
    pub boyd_delta: T,
    pub norm_p: T,
    pub m1: T,
    pub m_k: T,
    pub rho: T,
    pub cond_bound_annulus: T,
    pub cond_bound_rough: T,
    pub eps1: T,
    pub eps2: T,
    /// Certified accuracy, `max(eps1, eps2)`; trimming threshold.
    pub eps: T,
    pub d: i32,
    pub d_tilde: i32,
    pub eps_tilde: T,
    pub eps_pow10: T,
    pub ell: usize,
    pub window_entry_bound: T,
}

/// Certified accuracy triple; `certified` is false when the input accuracy
/// violates the perturbation hypothesis.
#[derive(Clone, Debug)]
pub struct AccuracyBounds<T: Real> {
    pub eps1: T,
    pub eps2: T,
    pub eps: T,
    pub certified: bool,
}

/// delta0 for the chosen mode.
///
/// `roots`, when available (oracle check enabled), gates the exact-one rule
/// that additionally needs every root in the open left half-plane.
pub fn select_delta0<T: Real>(
    p: &Polynomial<T>,
    kappa: i64,
    mode: &Delta0Mode<T>,
    roots: Option<&[Cplx<T>]>,
) -> Result<T, Error> {
    let sample = p.coeff(0).re.zero();
    let monic = p.to_monic();
    let tol = monic.one_norm() * sample.from_f64(1e-12);

    let self_inversive_ok = monic.self_inversive_deviation() <= tol && monic.degree().is_multiple_of(2);
    let palindrome_ok = monic.real_palindrome_deviation() <= tol && monic.degree().is_multiple_of(2);
    let roots_left_half = roots.map(|rs| rs.iter().all(|r| r.re < sample.zero()));

    match mode {
        Delta0Mode::Manual(v) => {
            if *v < sample.one() {
                return Err(Error::InvalidInput("delta0 must be at least 1".into()));
            }
            Ok(v.clone())
        }
        Delta0Mode::General => Ok(general_delta0(p, kappa)),
        Delta0Mode::SelfInversive => {
            if !self_inversive_ok {
                return Err(Error::SymmetryViolation {
                    deviation: monic.self_inversive_deviation().to_f64(),
                });
            }
            Ok(sample.from_i64(monic.degree() as i64 / 2 + 1))
        }
        Delta0Mode::ExactOne => {
            if !palindrome_ok {
                return Err(Error::SymmetryViolation {
                    deviation: monic.real_palindrome_deviation().to_f64(),
                });
            }
            if roots_left_half == Some(false) {
                return Err(Error::SymmetryViolation { deviation: f64::INFINITY });
            }
            Ok(sample.one())
        }
        Delta0Mode::Auto => {
            if palindrome_ok && roots_left_half == Some(true) {
                return Ok(sample.one());
            }
            if self_inversive_ok {
                return Ok(sample.from_i64(monic.degree() as i64 / 2 + 1));
            }
            Ok(general_delta0(p, kappa))
        }
    }
}

/// `delta^nu sqrt((kappa+1)(nu-kappa+1))` with Boyd's constant.
fn general_delta0<T: Real>(p: &Polynomial<T>, kappa: i64) -> T {
    let sample = p.coeff(0).re.zero();
    let nu = p.degree() as i64;
    let delta = boyd_delta(&sample);
    delta.powi(nu) * (sample.from_i64(kappa + 1) * sample.from_i64(nu - kappa + 1)).sqrt()
}

/// Upper bounds for `||T_{-kappa}||`: the annulus bound
/// `(1/m_K)(1+rho)/(1-rho)` and the rough bound `(2n+1)/m1`.
pub fn toeplitz_norm_bounds<T: Real>(inputs: &BoundInputs<T>) -> (T, T) {
    let one = inputs.rho.one();
    let annulus = (one.clone() + &inputs.rho) / ((one.clone() - &inputs.rho) * &inputs.m_k);
    let rough = inputs.m1.from_i64(2 * inputs.n as i64 + 1) / &inputs.m1;
    (annulus, rough)
}

/// Condition-number bounds `k(T) <= (delta0/m_K)((1+rho)/(1-rho))||p||` and
/// `k(T) <= ((2n+1) delta0 / m1)||p||`.
pub fn condition_bounds<T: Real>(inputs: &BoundInputs<T>) -> (T, T) {
    let (annulus, rough) = toeplitz_norm_bounds(inputs);
    let dp = inputs.delta0.clone() * &inputs.norm_p;
    (annulus * &dp, rough * &dp)
}

/// Factor accuracies from the input accuracy `Delta`:
/// `eps1` and `eps2` per the coefficient-perturbation estimates, and the
/// certified accuracy `eps = max(eps1, eps2)`.
pub fn accuracy_bounds<T: Real>(inputs: &BoundInputs<T>, delta: &T) -> AccuracyBounds<T> {
    let one = inputs.q.one();
    let two_n1 = inputs.q.from_i64(2 * inputs.n as i64 + 1);
    let dp = inputs.delta0.clone() * &inputs.norm_p;
    let one_minus_q = one.clone() - &inputs.q;
    let m1_sq = inputs.m1.clone() * &inputs.m1;
    let denom = one_minus_q.clone() * &one_minus_q * &m1_sq;
    let ratio = (one.clone() + &inputs.rho) / (one.clone() - &inputs.rho);

    let eps1 = two_n1.clone() * &dp / &denom
        * (dp.clone() * &ratio / &inputs.m_k + &one)
        * delta;
    let eps2 = two_n1 * &dp * &dp / &denom * delta;
    let eps = eps1.max_val(&eps2);

    let hyp1 = inputs.q.clone() * &inputs.m1;
    let hyp2 = inputs.q.clone() * &one_minus_q * &m1_sq
        / (inputs.q.from_i64(2 * inputs.n as i64 + 1) * &dp);
    let certified = *delta <= hyp1.min_val(&hyp2);
    AccuracyBounds { eps1, eps2, eps, certified }
}

/// Factor perturbations caused by approximating the window at sampling
/// order `ell`, plus whether the sampling hypothesis
/// `rho^{ell/2}/(1-rho^ell) < q m_K / ((4n+2) delta0 ||p||)` holds.
pub fn window_perturbation_bounds<T: Real>(
    inputs: &BoundInputs<T>,
    ell: usize,
) -> (T, T, bool) {
    let one = inputs.rho.one();
    let dp = inputs.delta0.clone() * &inputs.norm_p;
    let one_minus_q = one.clone() - &inputs.q;
    let x = inputs.rho.powi((ell / 2) as i64)
        / (one.clone() - inputs.rho.powi(ell as i64));
    let ratio = (one.clone() + &inputs.rho) / (one.clone() - &inputs.rho);

    let four_n = inputs.q.from_i64(4 * inputs.n as i64);
    let c1 = (four_n.clone() - inputs.q.from_i64(2)) * &dp
        / (one_minus_q.clone() * &inputs.m_k)
        * (dp.clone() * &ratio / (one_minus_q.clone() * &inputs.m_k) + &one);
    let c2 = (four_n + inputs.q.from_i64(2)) * &dp * &dp
        / (one_minus_q.clone() * &inputs.m_k);

    let bound_p1 = c1 * &x;
    let bound_p2 = c2 * &x;
    let hypothesis = x
        < inputs.q.clone() * &inputs.m_k
            / (inputs.q.from_i64(4 * inputs.n as i64 + 2) * &dp);
    (bound_p1, bound_p2, hypothesis)
}

/// Absolute error bound for a perturbed linear solve:
/// `||x - x~|| <= (||A^-1||/(1-q)) [ ||A^-1|| ||A - A~|| ||b|| + ||b - b~|| ]`,
/// requiring `||A - A~|| <= q / ||A^-1||`.
pub fn linear_system_error<T: Real>(
    a_inv_norm: &T,
    a_delta: &T,
    b_norm: &T,
    b_delta: &T,
    q: &T,
) -> Result<T, Error> {
    let limit = q.clone() / a_inv_norm;
    if *a_delta > limit {
        return Err(Error::HypothesisViolated(format!(
            "||A - A~|| = {} exceeds q/||A^-1|| = {}",
            a_delta.to_f64(),
            limit.to_f64()
        )));
    }
    let one = q.one();
    Ok(a_inv_norm.clone() / (one - q)
        * (a_inv_norm.clone() * a_delta * b_norm + b_delta))
}

/// Decimal bookkeeping: `d` with `10^-d < eps`, and `d~` with
/// `cond <= 10^{d~}` taken from the smaller condition bound.
pub fn decimal_exponents<T: Real>(eps: &T, cond_bound: &T) -> (i32, i32) {
    let d = (-eps.log10().to_f64()).floor() as i32 + 1;
    let d_tilde = cond_bound.log10().to_f64().ceil() as i32;
    (d, d_tilde)
}
