//! Toeplitz machinery over a Laurent window: the sigma functional, the
//! matrix family `T_k`, essential indices, kernel bases, the essentialness
//! test and normalization to the factorization essential pair.

use crate::error::Error;
use crate::laurent::LaurentWindow;
use crate::linalg::{self, Matrix};
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};

/// Numerical-rank threshold relative to the largest singular value.
pub fn rank_threshold<T: Real>(sample: &T, rows: usize, cols: usize) -> f64 {
    sample.epsilon() * rows.max(cols) as f64 * 1e2
}

/// Required singular-value gap ratio at the rank cut.
const GAP_RATIO: f64 = 1e3;

/// View of `T_k` over a window: `entry(i, j) = c_{k+i-j}`, of shape
/// `(N - k + 1) x (k - M + 1)`.
pub struct ToeplitzView<'a, T: Real> {
    pub window: &'a LaurentWindow<T>,
    pub k: i64,
    pub rows: usize,
    pub cols: usize,
}

impl<'a, T: Real> ToeplitzView<'a, T> {
    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        self.window
            .value(self.k + i as i64 - j as i64)
            .expect("view entries lie inside the window")
            .clone()
    }

    pub fn materialize(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j))
    }
}

/// The family member `T_k`; errors when `k` is outside `[M, N]`.
pub fn toeplitz_view<T: Real>(window: &LaurentWindow<T>, k: i64) -> Result<ToeplitzView<'_, T>, Error> {
    if k < window.lo || k > window.hi {
        return Err(Error::IndexOutOfWindow { index: k, lo: window.lo, hi: window.hi });
    }
    Ok(ToeplitzView {
        window,
        k,
        rows: (window.hi - k + 1) as usize,
        cols: (k - window.lo + 1) as usize,
    })
}

/// `sigma{z^power Q(z)} = sum_j Q_j c_{-power-j}`, the linear extension of
/// `sigma{z^j} = c_{-j}`.
pub fn sigma<T: Real>(
    window: &LaurentWindow<T>,
    q: &Polynomial<T>,
    power: i64,
) -> Result<Cplx<T>, Error> {
    sigma_skipping(window, q, power, None)
}

/// Same as [`sigma`] but ignoring the coefficient at one formal position.
/// The essentialness expressions cancel their top coefficients exactly, and
/// skipping them keeps every window lookup inside `[M, N]`.
fn sigma_skipping<T: Real>(
    window: &LaurentWindow<T>,
    q: &Polynomial<T>,
    power: i64,
    skip: Option<usize>,
) -> Result<Cplx<T>, Error> {
    let mut acc = q.coeff(0).zero();
    for (j, coeff) in q.coeffs().iter().enumerate() {
        if skip == Some(j) || coeff.is_zero() {
            continue;
        }
        let idx = -power - j as i64;
        let c = window.value(idx)?;
        acc = &acc + &(coeff * c);
    }
    Ok(acc)
}

/// Essential indices `(mu1, mu2)` from the rank of the middle family member
/// `T_{floor((M+N)/2)}`.
pub fn essential_indices<T: Real>(window: &LaurentWindow<T>) -> Result<(i64, i64), Error> {
    if window.is_all_zero() {
        return Err(Error::ZeroWindow);
    }
    let mid = (window.lo + window.hi).div_euclid(2);
    let view = toeplitz_view(window, mid)?;
    let mat = view.materialize();
    let svd = linalg::svd(&mat);
    let tau = rank_threshold(&mat.at(0, 0).re, view.rows, view.cols);
    let rank = svd.rank(tau);
    if rank < svd.s.len() {
        let below = svd.s[rank].to_f64();
        let gap_ratio = if below == 0.0 {
            f64::INFINITY
        } else {
            svd.s[rank - 1].to_f64() / below
        };
        if gap_ratio < GAP_RATIO {
            return Err(Error::RankAmbiguous { gap_ratio });
        }
    }
    let pi = rank as i64;
    Ok((window.lo + pi - 1, window.hi - pi + 1))
}

/// Orthonormal basis of the numerical null space of `T_k`, as generating
/// polynomials of formal degree `k - M`. Empty when the kernel is trivial.
pub fn kernel_basis<T: Real>(view: &ToeplitzView<'_, T>) -> Vec<Polynomial<T>> {
    let mat = view.materialize();
    let svd = linalg::svd(&mat);
    let tau = rank_threshold(&mat.at(0, 0).re, view.rows, view.cols);
    let rank = svd.rank(tau);
    let mut out = Vec::new();
    for col in rank..view.cols {
        let coeffs: Vec<Cplx<T>> = (0..view.cols).map(|i| svd.v.at(i, col).clone()).collect();
        out.push(Polynomial::new(coeffs));
    }
    out
}

/// Essential pair after normalization: `Q1 = z^{n-kappa+1} p1` (monic top,
/// vanishing at 0) and `Q2 = p2` with `sigma{z^kappa Q2} = 1`.
#[derive(Clone, Debug)]
pub struct EssentialPair<T: Real> {
    pub mu1: i64,
    pub mu2: i64,
    pub q1: Polynomial<T>,
    pub q2: Polynomial<T>,
    /// Test number of the normalized pair; -1 up to working accuracy.
    pub sigma0: Cplx<T>,
    /// Normalization determinant of the raw kernel basis.
    pub sigma1: Cplx<T>,
}

/// Essentialness test number
/// `sigma{z^{-mu1} Q_{2,top} Q1(z) - z^{-mu2} Q_{1,top} Q2(z)}`;
/// nonzero iff the pair is essential for the window.
pub fn essentialness_test<T: Real>(
    window: &LaurentWindow<T>,
    q1: &Polynomial<T>,
    q2: &Polynomial<T>,
    mu1: i64,
    mu2: i64,
) -> Result<Cplx<T>, Error> {
    if mu1 + mu2 != window.lo + window.hi {
        return Err(Error::InvalidInput(format!(
            "mu1 + mu2 = {} must equal M + N = {}",
            mu1 + mu2,
            window.lo + window.hi
        )));
    }
    check_in_kernel(window, q1, mu1 + 1)?;
    check_in_kernel(window, q2, mu2 + 1)?;

    let top1 = (mu1 - window.lo + 1) as usize;
    let top2 = (mu2 - window.lo + 1) as usize;
    let a = q2.coeff(top2);
    let b = q1.coeff(top1);
    // The formal-top terms multiply c_{M-1} with coefficient a*b - b*a = 0;
    // skip them so every lookup stays inside the window.
    let s1 = sigma_skipping(window, q1, -mu1, Some(top1))?;
    let s2 = sigma_skipping(window, q2, -mu2, Some(top2))?;
    Ok(&(&a * &s1) - &(&b * &s2))
}

/// Verifies the orthogonality conditions `sigma{z^{-i} Q} = 0`,
/// `i = k..N`, i.e. membership of `Q` in the kernel space of `T_k`.
fn check_in_kernel<T: Real>(
    window: &LaurentWindow<T>,
    q: &Polynomial<T>,
    k: i64,
) -> Result<(), Error> {
    let sample = q.coeff(0).re.zero();
    let scale = window.one_norm() * q.one_norm();
    let scale = scale.max_val(&sample.from_f64(f64::MIN_POSITIVE));
    let dim = window.len();
    let tolerance = sample.epsilon() * dim as f64 * 1e8 * scale.to_f64();
    for i in k..=window.hi {
        let r = sigma(window, q, -i)?;
        let residual = r.abs().to_f64();
        if residual > tolerance {
            return Err(Error::NotInKernel { residual, tolerance });
        }
    }
    Ok(())
}

/// Builds the factorization essential pair from any kernel basis
/// `{R1, R2}` of `T_{-kappa+1}`:
/// `Q1 = -(R_{2,0} R1 - R_{1,0} R2)/sigma1`,
/// `Q2 = (R_{2,n+1} R1 - R_{1,n+1} R2)/sigma0`.
pub fn normalize_to_factorization_pair<T: Real>(
    window: &LaurentWindow<T>,
    r1: &Polynomial<T>,
    r2: &Polynomial<T>,
    kappa: i64,
) -> Result<EssentialPair<T>, Error> {
    let n = window.n;
    let top = n + 1;
    let r10 = r1.coeff(0);
    let r20 = r2.coeff(0);
    let r1t = r1.coeff(top);
    let r2t = r2.coeff(top);

    let sigma1 = &(&r10 * &r2t) - &(&r20 * &r1t);
    // S = R_{2,n+1} R1 - R_{1,n+1} R2; its top coefficient cancels exactly.
    let s = r1.scale(&r2t).sub(&r2.scale(&r1t));
    let sigma0_raw = sigma(window, &s, kappa)?;

    // sigma1 is bilinear in the basis coefficients, so a relative threshold
    // against ||R1|| ||R2|| is meaningful. sigma0 additionally carries the
    // window scale (its healthy magnitude is ~ ||S||/||p2||, arbitrarily
    // small for large factors), so it is compared against the noise floor of
    // the sigma evaluation instead: window entry error plus roundoff.
    let norms = (r1.one_norm() * r2.one_norm()).to_f64();
    let sigma1_threshold = 1e-3 * norms;
    let sample = r10.re.zero();
    let max_c = window
        .values()
        .iter()
        .map(|v| v.abs())
        .fold(sample.zero(), |m, v| m.max_val(&v))
        .to_f64();
    let noise = s.one_norm().to_f64()
        * (window.per_entry_bound.to_f64() + sample.epsilon() * window.len() as f64 * max_c);
    let sigma0_threshold = 1e3 * noise;
    if sigma1.abs().to_f64() < sigma1_threshold || sigma0_raw.abs().to_f64() < sigma0_threshold {
        return Err(Error::DegeneratePair {
            sigma0: sigma0_raw.abs().to_f64(),
            sigma1: sigma1.abs().to_f64(),
            threshold: sigma1_threshold.max(sigma0_threshold),
        });
    }

    let q2 = s.scale(&sigma0_raw.recip());
    let q1_unscaled = r1.scale(&r20).sub(&r2.scale(&r10)).scale(&(-&sigma1).recip());
    // Pin the top coefficient to exactly one.
    let q1 = q1_unscaled.scale(&q1_unscaled.coeff(top).recip());

    let test_number = -&sigma(window, &q2, kappa)?;
    Ok(EssentialPair {
        mu1: -kappa,
        mu2: -kappa,
        q1,
        q2,
        sigma0: test_number,
        sigma1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact::{self, CQ};
    use crate::scalar::{Precision, PrecisionContext};

    fn ctx() -> PrecisionContext<f64> {
        PrecisionContext::new(Precision::Native64)
    }

    /// Exact window of 1/((z-1/2)(z-2)) as f64 values, n and kappa fixed.
    fn toy_window(n: usize) -> LaurentWindow<f64> {
        let roots = vec![exact::cq(1, 2), exact::cq(2, 1)];
        let lo = -(n as i64) - 1;
        let hi = n as i64 - 1;
        let vals = exact::laurent_window(&roots, lo, hi)
            .iter()
            .map(|c| exact::to_cplx(&0.0f64, c))
            .collect();
        LaurentWindow::from_values(n, 1, vals, 1e-15, 64)
    }

    #[test]
    fn sigma_monomial_is_window_entry() {
        let w = toy_window(3);
        let ctx = ctx();
        for j in 0..3i64 {
            let mono = Polynomial::new(
                (0..=j as usize)
                    .map(|i| {
                        if i as i64 == j {
                            ctx.complex_from_f64(1.0, 0.0)
                        } else {
                            ctx.complex_from_f64(0.0, 0.0)
                        }
                    })
                    .collect(),
            );
            let got = sigma(&w, &mono, 0).unwrap();
            let want = w.value(-j).unwrap();
            assert!((&got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn sigma_of_shifted_p2_is_one() {
        let w = toy_window(3);
        let p2 = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let got = sigma(&w, &p2, 1).unwrap();
        assert!((got.re - 1.0).abs() < 1e-14 && got.im.abs() < 1e-15, "sigma = {got:?}");
    }

    #[test]
    fn view_shapes_and_entries() {
        // window lo=-4, hi=2 (n=3, kappa=1), k=-1 -> 4x4 with first row
        // (c_-1, c_-2, c_-3, c_-4)
        let w = toy_window(3);
        let v = toeplitz_view(&w, -1).unwrap();
        assert_eq!((v.rows, v.cols), (4, 4));
        for j in 0..4usize {
            let want = w.value(-1 - j as i64).unwrap();
            assert!((&v.entry(0, j) - want).abs() < 1e-16);
        }
        // Toeplitz property: entries depend only on i - j.
        for i in 0..4 {
            for j in 0..4 {
                if i + 1 < 4 && j + 1 < 4 {
                    assert_eq!(v.entry(i, j).re, v.entry(i + 1, j + 1).re);
                }
            }
        }
        let col = toeplitz_view(&w, w.lo).unwrap();
        assert_eq!((col.rows, col.cols), (7, 1));
        let row = toeplitz_view(&w, w.hi).unwrap();
        assert_eq!((row.rows, row.cols), (1, 7));
        assert!(toeplitz_view(&w, 3).is_err());
    }

    #[test]
    fn essential_indices_toy() {
        let w = toy_window(3);
        assert_eq!(essential_indices(&w).unwrap(), (-1, -1));
        // cross-check the middle rank with exact arithmetic
        let roots = vec![exact::cq(1, 2), exact::cq(2, 1)];
        let window = exact::laurent_window(&roots, -4, 2);
        let mat = exact::toeplitz(&window, -4, 2, -1);
        assert_eq!(exact::rank(mat), 4);
    }

    #[test]
    fn essential_indices_rejects_zero_window() {
        let ctx = ctx();
        let zero = ctx.complex_from_f64(0.0, 0.0);
        let w = LaurentWindow::from_values(2, 1, vec![zero; 5], 0.0, 8);
        assert!(matches!(essential_indices(&w), Err(Error::ZeroWindow)));
    }

    #[test]
    fn kernel_dimensions_follow_the_chain() {
        let w = toy_window(3);
        // T_{-kappa} is invertible: trivial kernel.
        let v0 = toeplitz_view(&w, -1).unwrap();
        assert!(kernel_basis(&v0).is_empty());
        // T_{-kappa+1} has a two-dimensional kernel.
        let v1 = toeplitz_view(&w, 0).unwrap();
        let basis = kernel_basis(&v1);
        assert_eq!(basis.len(), 2);
        // Below mu1 the kernel is trivial.
        let vm = toeplitz_view(&w, -2).unwrap();
        assert!(kernel_basis(&vm).is_empty());
    }

    #[test]
    fn essentialness_of_known_pair() {
        let w = toy_window(3);
        // Q1 = z^{n-kappa+1} p1 = z^3 (z - 1/2), Q2 = p2 = z - 2.
        let q1 = Polynomial::from_reals(&0.0, &[0.0, 0.0, 0.0, -0.5, 1.0]);
        let q2 = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let s0 = essentialness_test(&w, &q1, &q2, -1, -1).unwrap();
        assert!((s0.re + 1.0).abs() < 1e-13 && s0.im.abs() < 1e-14, "{s0:?}");
        // A proportional pair fails the test.
        let s_dep = essentialness_test(&w, &q1, &q1, -1, -1).unwrap();
        assert!(s_dep.abs() < 1e-13);
    }

    #[test]
    fn sigma_of_shifted_q1_recovers_inverse_factor_value() {
        // sigma{z^{-(n-kappa+1)} Q1} = 1/p2(0): the analytic identity behind
        // the essential-pair proof, on the exact toy window with n = 3.
        let w = toy_window(3);
        let q1 = Polynomial::from_reals(&0.0, &[0.0, 0.0, 0.0, -0.5, 1.0]);
        let got = sigma(&w, &q1, -3).unwrap();
        assert!((got.re + 0.5).abs() < 1e-14 && got.im.abs() < 1e-15, "{got:?}");
    }

    #[test]
    fn essential_indices_of_factorization_window() {
        // Window of 1/p for the self-inversive degree-10 polynomial:
        // indices must be (-kappa, -kappa) = (-5, -5).
        let mut c = vec![1.0f64; 11];
        c[5] = 5.0;
        let p = Polynomial::from_reals(&0.0, &c);
        let annulus = crate::contour::choose_annulus(&p, Some(&0.83f64)).unwrap();
        let w = crate::laurent::build_window(&p, 11, 5, 418, &annulus).unwrap();
        assert_eq!(essential_indices(&w).unwrap(), (-5, -5));
    }

    #[test]
    fn essentialness_rejects_non_kernel_input() {
        let w = toy_window(3);
        let q1 = Polynomial::from_reals(&0.0, &[0.0, 0.0, 0.0, -0.5, 1.0]);
        let junk = Polynomial::from_reals(&0.0, &[1.0, 1.0]);
        assert!(matches!(
            essentialness_test(&w, &q1, &junk, -1, -1),
            Err(Error::NotInKernel { .. })
        ));
    }

    #[test]
    fn normalize_from_svd_basis_recovers_factors() {
        let w = toy_window(3);
        let v1 = toeplitz_view(&w, 0).unwrap();
        let basis = kernel_basis(&v1);
        let pair = normalize_to_factorization_pair(&w, &basis[0], &basis[1], 1).unwrap();
        // Q1 = z^4 - z^3/2, Q2 = z - 2
        assert!((pair.q1.coeff(4).re - 1.0).abs() < 1e-12);
        assert!((pair.q1.coeff(3).re + 0.5).abs() < 1e-12);
        assert!(pair.q1.coeff(0).abs() < 1e-12);
        assert!((pair.q2.coeff(0).re + 2.0).abs() < 1e-11);
        assert!((pair.q2.coeff(1).re - 1.0).abs() < 1e-11);
        assert!((&pair.sigma0 + &Cplx::new(1.0, 0.0)).abs() < 1e-11);
    }

    #[test]
    fn normalize_is_idempotent() {
        let w = toy_window(3);
        let q1 = Polynomial::from_reals(&0.0, &[0.0, 0.0, 0.0, -0.5, 1.0]);
        let q2 = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let pair = normalize_to_factorization_pair(&w, &q1, &q2, 1).unwrap();
        assert!(pair.q1.sub(&q1).one_norm() < 1e-13);
        assert!(pair.q2.sub(&q2).one_norm() < 1e-13);
    }

    #[test]
    fn normalize_rejects_dependent_basis() {
        let w = toy_window(3);
        let q1 = Polynomial::from_reals(&0.0, &[0.0, 0.0, 0.0, -0.5, 1.0]);
        let scaled = q1.scale(&Cplx::new(2.0, 0.0));
        assert!(matches!(
            normalize_to_factorization_pair(&w, &q1, &scaled, 1),
            Err(Error::DegeneratePair { .. })
        ));
    }

    #[test]
    fn delta_chain_on_random_exact_windows() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let lo = -(rng.gen_range(1..=5i64));
            let hi = rng.gen_range(0..=5i64);
            let len = (hi - lo + 1) as usize;
            let window: Vec<CQ> = (0..len)
                .map(|_| {
                    exact::cq2(
                        exact::q(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
                        exact::q(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
                    )
                })
                .collect();
            if window.iter().all(|c| {
                use num_traits::Zero;
                c.is_zero()
            }) {
                continue;
            }
            let dim_kernel = |k: i64| -> usize {
                let m = exact::toeplitz(&window, lo, hi, k);
                let cols = (k - lo + 1) as usize;
                cols - exact::rank(m)
            };
            let mut dims = Vec::new();
            dims.push(0usize); // d_{M-1}
            for k in lo..=hi {
                dims.push(dim_kernel(k));
            }
            dims.push(len + 1); // d_{N+1}: all polynomials of formal degree N-M+1
            let deltas: Vec<i64> = dims.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
            assert_eq!(*deltas.first().unwrap(), 0, "Delta_M = 0");
            assert!(*deltas.last().unwrap() <= 2);
            for pair in deltas.windows(2) {
                assert!(pair[0] <= pair[1], "chain must be nondecreasing: {deltas:?}");
            }
            assert_eq!(deltas.iter().sum::<i64>() as usize, len + 1);
        }
    }
}
