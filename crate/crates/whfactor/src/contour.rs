//! Winding-number computation on the unit circle and selection of the
//! zero-free annulus.

use crate::error::Error;
use crate::poly::{self, Polynomial, ZERO_ON_CIRCLE_FACTOR};
use crate::scalar::{Cplx, Real};

/// Zero-free annulus `r <= |z| <= R` around the unit circle together with the
/// circle minima the accuracy bounds need.
#[derive(Clone, Debug)]
pub struct AnnulusParams<T: Real> {
    /// max(r, 1/R), in (0, 1).
    pub rho: T,
    pub r: T,
    pub big_r: T,
    /// min |p| on |z| = 1.
    pub m1: T,
    /// min |p| on the closed annulus; attained on the boundary circles.
    pub m_k: T,
}

/// Gauss-Legendre nodes per panel.
const GL_NODES: usize = 16;
/// Panel-doubling start and cap.
const PANELS_START: usize = 8;
const PANELS_MAX: usize = 4096;
/// Two successive panel counts must agree this closely.
const QUAD_AGREE_TOL: f64 = 1e-3;
/// Quadrature value may sit at most this far from an integer.
const ROUND_TOL: f64 = 0.25;

/// Number of zeros of `p` inside the unit circle, by quadrature of the
/// argument-principle integrand over `[0, 2pi]`.
///
/// The integrand is `Im(p'(z) i z / p(z))` with `z = e^{i phi}`; the
/// derivative factor comes from the exact derivative polynomial. Composite
/// Gauss-Legendre panels are doubled until two successive estimates agree,
/// then the value is rounded to the nearest integer.
pub fn winding_number<T: Real>(p: &Polynomial<T>, quad_points: usize) -> Result<i64, Error> {
    let sample = p.coeff(0).re.zero();
    let (m1, _) = poly::circle_extrema(p, &sample.one(), (4 * (p.degree() + 1)).max(256))?;
    debug_assert!(m1.to_f64() > 0.0);

    let dp = p.derivative();
    let integrand = |phi: &T| -> T {
        let z = Cplx::from_polar(&sample.one(), phi);
        let num = &dp.eval(&z) * &z;
        let q = &num / &p.eval(&z);
        // times i: Im(i q) is Re(q); we need Im(p' i z / p) = Re(p' z / p)
        q.re
    };

    let (nodes, weights) = gauss_legendre(&sample, GL_NODES);
    let two_pi = sample.pi() * sample.from_i64(2);

    let estimate = |panels: usize| -> T {
        let width = two_pi.clone() / sample.from_i64(panels as i64);
        let half = sample.from_f64(0.5);
        let mut acc = sample.zero();
        for panel in 0..panels {
            let a = width.clone() * sample.from_i64(panel as i64);
            let center = a + width.clone() * &half;
            let scale = width.clone() * &half;
            for (x, w) in nodes.iter().zip(weights.iter()) {
                let phi = center.clone() + scale.clone() * x;
                acc = acc + integrand(&phi) * w;
            }
        }
        acc * scale_total(&two_pi, panels, &sample)
    };

    let mut panels = PANELS_START.max(quad_points.div_ceil(GL_NODES)).max(1);
    let mut prev = estimate(panels);
    loop {
        panels *= 2;
        if panels > PANELS_MAX {
            let value = prev.to_f64();
            return Err(Error::IndexUncertain {
                value,
                distance: (value - value.round()).abs(),
            });
        }
        let next = estimate(panels);
        let diff = (next.clone() - &prev).abs().to_f64();
        prev = next;
        if diff < QUAD_AGREE_TOL {
            break;
        }
    }

    let value = prev.to_f64();
    let rounded = value.round();
    let distance = (value - rounded).abs();
    if distance > ROUND_TOL {
        return Err(Error::IndexUncertain { value, distance });
    }
    Ok(rounded as i64)
}

fn scale_total<T: Real>(two_pi: &T, panels: usize, sample: &T) -> T {
    // panel half-width / (2 pi) factors: integral * (1 / 2pi), including the
    // half-width substitution already applied per node.
    let width = two_pi.clone() / sample.from_i64(panels as i64);
    let half_width = width * sample.from_f64(0.5);
    half_width / two_pi
}

/// True iff the perturbation is small enough to reuse the winding number:
/// `||p - q|| < m1(p)`. A polynomial vanishing on the circle has m1 = 0 and
/// never grants the margin.
pub fn stability_margin<T: Real>(p: &Polynomial<T>, p_tilde: &Polynomial<T>) -> bool {
    let sample = p.coeff(0).re.zero();
    let (m1, _) = poly::sample_extrema(p, &sample.one(), (4 * (p.degree() + 1)).max(256));
    let diff = p.sub(p_tilde).one_norm();
    diff < m1
}

/// Samples used on each circle when qualifying an annulus.
fn annulus_samples<T: Real>(p: &Polynomial<T>) -> usize {
    (4 * (p.degree() + 1)).max(4096)
}

/// Annulus with explicitly chosen boundary circles `r < 1 < R`; the
/// parameter of the bounds is `rho = max(r, 1/R)`, and `m_K` is the minimum
/// of |p| over both circles (the annulus minimum, since 1/p is analytic
/// inside).
pub fn annulus_from_radii<T: Real>(
    p: &Polynomial<T>,
    r: &T,
    big_r: &T,
) -> Result<AnnulusParams<T>, Error> {
    let sample = p.coeff(0).re.zero();
    let one = sample.one();
    if *r <= sample.zero() || *r >= one || *big_r <= one {
        return Err(Error::InvalidInput("annulus needs 0 < r < 1 < R".into()));
    }
    let samples = annulus_samples(p);
    let (m1, _) = poly::circle_extrema(p, &one, samples)?;
    let (min_r, _) = poly::circle_extrema(p, r, samples)?;
    let (min_big, _) = poly::circle_extrema(p, big_r, samples)?;
    let m_k = min_r.min_val(&min_big).min_val(&m1);
    let rho = r.max_val(&(one / big_r));
    Ok(AnnulusParams { rho, r: r.clone(), big_r: big_r.clone(), m1, m_k })
}

/// Builds the annulus: either verifies the caller's `rho_hint` (symmetric
/// annulus `[rho, 1/rho]`) or searches outward from the unit circle (step
/// factor 0.99) for the widest annulus on which the sampled minimum of |p|
/// stays above `1e-3 * m1`.
pub fn choose_annulus<T: Real>(
    p: &Polynomial<T>,
    rho_hint: Option<&T>,
) -> Result<AnnulusParams<T>, Error> {
    let sample = p.coeff(0).re.zero();
    let samples = annulus_samples(p);
    let (m1, _) = poly::circle_extrema(p, &sample.one(), samples)?;

    if let Some(rho) = rho_hint {
        if *rho <= sample.zero() || *rho >= sample.one() {
            return Err(Error::InvalidInput("rho must lie in (0, 1)".into()));
        }
        let big_r = sample.one() / rho;
        return annulus_from_radii(p, rho, &big_r);
    }

    let margin = m1.clone() * sample.from_f64(1e-3);
    let step = sample.from_f64(0.99);
    let mut rho = sample.one();
    let mut best: Option<(T, T)> = None;
    for _ in 0..90 {
        rho = rho * &step;
        let big_r = sample.one() / &rho;
        let (min_r, _) = poly::sample_extrema(p, &rho, samples);
        let (min_big, _) = poly::sample_extrema(p, &big_r, samples);
        let m_k = min_r.min_val(&min_big).min_val(&m1);
        if m_k > margin {
            best = Some((rho.clone(), m_k));
        } else {
            break;
        }
    }
    match best {
        Some((rho, m_k)) => {
            let big_r = sample.one() / &rho;
            Ok(AnnulusParams { r: rho.clone(), big_r, rho, m1, m_k })
        }
        None => {
            // Even the thinnest annulus tried fails; probe rho = 0.999 as the
            // last resort before declaring a root numerically on the circle.
            let rho = sample.from_f64(0.999);
            let big_r = sample.one() / &rho;
            let (min_r, _) = poly::sample_extrema(p, &rho, samples);
            let (min_big, _) = poly::sample_extrema(p, &big_r, samples);
            let m_k = min_r.min_val(&min_big).min_val(&m1);
            let threshold = ZERO_ON_CIRCLE_FACTOR * p.one_norm().to_f64();
            if m_k.to_f64() < threshold {
                return Err(Error::ZeroOnCircle { min_abs: m_k.to_f64(), threshold });
            }
            if m_k > margin {
                Ok(AnnulusParams { r: rho.clone(), big_r, rho, m1, m_k })
            } else {
                Err(Error::NoAnnulus)
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence at working precision.
pub fn gauss_legendre<T: Real>(sample: &T, n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let pi = sample.pi();
    for i in 0..n {
        // Chebyshev-style initial guess.
        let guess = (pi.clone() * sample.from_f64(i as f64 + 0.75)
            / sample.from_f64(n as f64 + 0.5))
        .cos();
        let mut x = guess;
        for _ in 0..60 {
            let (p, dp) = legendre_with_derivative(sample, n, &x);
            let delta = p / dp;
            x = x - &delta;
            if delta.abs().to_f64() < sample.epsilon() {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(sample, n, &x);
        let w = sample.from_i64(2)
            / ((sample.one() - x.clone() * &x) * dp.clone() * &dp);
        nodes.push(x);
        weights.push(w);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_with_derivative<T: Real>(sample: &T, n: usize, x: &T) -> (T, T) {
    let mut p_prev = sample.one();
    let mut p = x.clone();
    for k in 2..=n {
        let kf = sample.from_i64(k as i64);
        let a = (sample.from_i64((2 * k - 1) as i64) * x.clone() * &p
            - sample.from_i64((k - 1) as i64) * &p_prev)
            / &kf;
        p_prev = p;
        p = a;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let nf = sample.from_i64(n as i64);
    let dp = nf * (x.clone() * &p - &p_prev) / (x.clone() * x - sample.one());
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::scalar::{Precision, PrecisionContext};

    fn ctx() -> PrecisionContext<f64> {
        PrecisionContext::new(Precision::Native64)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (nodes, weights) = gauss_legendre(&0.0f64, 16);
        // integral of x^2 over [-1,1] = 2/3
        let acc: f64 = nodes.iter().zip(&weights).map(|(x, w)| x * x * w).sum();
        assert!((acc - 2.0 / 3.0).abs() < 1e-14);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn winding_number_single_root_inside() {
        let p = Polynomial::from_reals(&0.0, &[-0.5, 1.0]);
        assert_eq!(winding_number(&p, 128).unwrap(), 1);
    }

    #[test]
    fn winding_number_root_outside() {
        let p = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        assert_eq!(winding_number(&p, 128).unwrap(), 0);
    }

    #[test]
    fn winding_number_scaling_invariant() {
        let ctx = ctx();
        let roots = vec![
            ctx.complex_from_f64(0.3, 0.2),
            ctx.complex_from_f64(-0.4, 0.1),
            ctx.complex_from_f64(1.8, -1.1),
        ];
        let p = oracle::poly_from_roots(&0.0, &roots);
        let scaled = p.scale(&ctx.complex_from_f64(-7.5, 3.0));
        assert_eq!(winding_number(&p, 128).unwrap(), 2);
        assert_eq!(winding_number(&scaled, 128).unwrap(), 2);
    }

    #[test]
    fn winding_number_matches_root_partition() {
        let ctx = ctx();
        let roots = vec![
            ctx.complex_from_f64(0.5, 0.0),
            ctx.complex_from_f64(0.0, -0.7),
            ctx.complex_from_f64(2.5, 0.0),
            ctx.complex_from_f64(-1.3, 1.2),
            ctx.complex_from_f64(0.2, 0.1),
        ];
        let p = oracle::poly_from_roots(&0.0, &roots);
        let kappa = winding_number(&p, 128).unwrap();
        assert_eq!(kappa, 3);
        // reversed polynomial z^nu p(1/z): roots are reciprocals
        let rev = Polynomial::new(p.coeffs().iter().rev().cloned().collect());
        let kappa_rev = winding_number(&rev, 128).unwrap();
        assert_eq!(kappa + kappa_rev, p.degree() as i64);
    }

    #[test]
    fn stability_margin_cases() {
        let ctx = ctx();
        let p = Polynomial::from_reals(&0.0, &[-0.5, 1.0]);
        assert!(stability_margin(&p, &p));
        let q = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        // ||p - q|| = 1.5 >= m1 = 0.5
        assert!(!stability_margin(&p, &q));
        let mut c: Vec<f64> = vec![1.0; 11];
        c[5] = 5.0;
        let ex2 = Polynomial::from_reals(&0.0, &c);
        let mut perturbed = c.clone();
        perturbed[0] += 1e-3;
        let ex2p = Polynomial::from_reals(&0.0, &perturbed);
        assert!(stability_margin(&ex2, &ex2p));
        let _ = ctx;
    }

    #[test]
    fn choose_annulus_hint_toy() {
        let p = Polynomial::from_reals(&0.0, &[1.0, -2.5, 1.0]);
        let hint = 0.7f64;
        let a = choose_annulus(&p, Some(&hint)).unwrap();
        assert!((a.rho - 0.7).abs() < 1e-15);
        // dense-sampling oracle for m_K
        let mut oracle_min = f64::INFINITY;
        for &radius in &[0.7f64, 1.0 / 0.7] {
            for k in 0..100_000 {
                let phi = 2.0 * std::f64::consts::PI * (k as f64) / 100_000.0;
                let z = Cplx::new(radius * phi.cos(), radius * phi.sin());
                oracle_min = oracle_min.min(p.eval(&z).abs());
            }
        }
        assert!(
            (a.m_k / oracle_min - 1.0).abs() < 1e-4,
            "m_K {} vs oracle {}",
            a.m_k,
            oracle_min
        );
    }

    #[test]
    fn choose_annulus_auto_finds_wide_annulus() {
        let p = Polynomial::from_reals(&0.0, &[1.0, -2.5, 1.0]);
        let a = choose_annulus(&p, None).unwrap();
        assert!(a.rho < 0.99 && a.rho > 0.5, "rho = {}", a.rho);
        assert!(a.m_k > 0.0 && a.m1 >= a.m_k);
    }

    #[test]
    fn choose_annulus_rejects_root_on_circle() {
        let p = Polynomial::from_reals(&0.0, &[-1.0, 1.0]);
        assert!(choose_annulus(&p, None).is_err());
    }
}
