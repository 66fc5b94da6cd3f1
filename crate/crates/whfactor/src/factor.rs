//! Factor extraction: the two Toeplitz solution paths (direct linear
//! systems and kernel basis), assembly with structural-zero trimming, and
//! the closed-form inverse columns used as a test oracle.

use crate::error::Error;
use crate::laurent::LaurentWindow;
use crate::linalg::{self, Matrix};
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};
use crate::toeplitz::{self, EssentialPair};

/// Which route produced the factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolvePath {
    Direct,
    Kernel,
}

impl SolvePath {
    pub fn label(&self) -> &'static str {
        match self {
            SolvePath::Direct => "direct",
            SolvePath::Kernel => "kernel",
        }
    }
}

/// `p_-(z) = p1(z) / z^kappa`, stored as the numerator plus the shift.
#[derive(Clone, Debug)]
pub struct PminusRep<T: Real> {
    pub coeffs: Polynomial<T>,
    pub shift: i64,
}

/// Output of the factorization together with the raw solution vectors.
#[derive(Clone, Debug)]
pub struct FactorizationResult<T: Real> {
    pub kappa: i64,
    /// Monic factor of degree kappa, all roots inside the unit circle.
    pub p1: Polynomial<T>,
    /// Degree nu - kappa factor carrying the original leading coefficient.
    pub p2: Polynomial<T>,
    pub pminus: PminusRep<T>,
    pub residual: T,
    pub path: SolvePath,
    pub alpha_raw: Vec<Cplx<T>>,
    pub beta_raw: Vec<Cplx<T>>,
    /// Leading coefficient of the input polynomial (folded into `p2`).
    pub leading: Cplx<T>,
}

impl<T: Real> FactorizationResult<T> {
    /// `p_+` is an alias of `p2`.
    pub fn pplus(&self) -> &Polynomial<T> {
        &self.p2
    }
}

/// Materializes `T_{-kappa}` over the index range `lo..=hi` of the window
/// (entry `(i, j) = c_{-kappa+i-j}`, shape `(hi+kappa+1) x (kappa-lo+1)`).
fn toeplitz_slice<T: Real>(
    window: &LaurentWindow<T>,
    kappa: i64,
    lo: i64,
    hi: i64,
) -> Result<Matrix<T>, Error> {
    let k = -kappa;
    let rows = (hi - k + 1) as usize;
    let cols = (k - lo + 1) as usize;
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            entries.push(window.value(k + i as i64 - j as i64)?.clone());
        }
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| entries[i * cols + j].clone()))
}

/// Raw solution vectors (alpha, beta) of the two central systems.
pub type DirectVectors<T> = (Vec<Cplx<T>>, Vec<Cplx<T>>);

/// Solves the two central systems:
/// `T_{-kappa}(c_{-n-kappa+1}^{n-kappa-1}) alpha = -(c_{-n-kappa}^{-kappa-1})^T`
/// and `T_{-kappa}(c_{-n-kappa}^{n-kappa}) beta = e_1`,
/// each by dense LU with one step of iterative refinement.
pub fn solve_direct<T: Real>(
    window: &LaurentWindow<T>,
    kappa: i64,
    n: usize,
) -> Result<DirectVectors<T>, Error> {
    assert_eq!(window.kappa, kappa, "window was built for a different kappa");
    assert_eq!(window.n, n, "window was built for a different n");
    let sample = window.values()[0].re.zero();
    let n_i = n as i64;

    // alpha: the shrunken window slice of the same approximate entries.
    let a = toeplitz_slice(window, kappa, -n_i - kappa + 1, n_i - kappa - 1)?;
    let mut rhs_a = Vec::with_capacity(n);
    for i in 0..n_i {
        rhs_a.push(-window.value(-n_i - kappa + i)?);
    }
    let alpha = linalg::solve_refined(&a, &rhs_a)?;

    // beta: the full (n+1) x (n+1) system with e_1.
    let b = toeplitz_slice(window, kappa, -n_i - kappa, n_i - kappa)?;
    let mut rhs_b = vec![Cplx::new(sample.zero(), sample.zero()); n + 1];
    rhs_b[0] = Cplx::new(sample.one(), sample.zero());
    let beta = linalg::solve_refined(&b, &rhs_b)?;

    Ok((alpha, beta))
}

/// Kernel route: basis of `ker T_{-kappa+1}` via SVD, then normalization to
/// the factorization essential pair.
pub fn solve_kernel<T: Real>(
    window: &LaurentWindow<T>,
    kappa: i64,
    n: usize,
) -> Result<EssentialPair<T>, Error> {
    assert_eq!(window.kappa, kappa, "window was built for a different kappa");
    assert_eq!(window.n, n, "window was built for a different n");
    let view = toeplitz_view_for_kernel(window, kappa)?;
    let basis = toeplitz::kernel_basis(&view);
    if basis.len() != 2 {
        return Err(Error::RankAmbiguous { gap_ratio: basis.len() as f64 });
    }
    toeplitz::normalize_to_factorization_pair(window, &basis[0], &basis[1], kappa)
}

fn toeplitz_view_for_kernel<T: Real>(
    window: &LaurentWindow<T>,
    kappa: i64,
) -> Result<toeplitz::ToeplitzView<'_, T>, Error> {
    toeplitz::toeplitz_view(window, -kappa + 1)
}

/// Either path's raw output, ready for assembly.
pub enum PathOutput<T: Real> {
    Direct { alpha: Vec<Cplx<T>>, beta: Vec<Cplx<T>> },
    Kernel(EssentialPair<T>),
}

impl<T: Real> PathOutput<T> {
    fn into_vectors(self, n: usize) -> (SolvePath, Vec<Cplx<T>>, Vec<Cplx<T>>) {
        match self {
            PathOutput::Direct { alpha, beta } => (SolvePath::Direct, alpha, beta),
            PathOutput::Kernel(pair) => {
                let alpha = (1..=n).map(|i| pair.q1.coeff(i)).collect();
                let beta = (0..=n).map(|i| pair.q2.coeff(i)).collect();
                (SolvePath::Kernel, alpha, beta)
            }
        }
    }
}

/// Verifies the structurally zero coefficients stay below the certified
/// accuracy, deletes them, and forms the final factors.
///
/// `p` is the original (possibly non-monic) polynomial: the window always
/// comes from the monic normalization, so the leading coefficient is
/// restored into `p2` here, and the residual is taken against `p` itself.
pub fn assemble<T: Real>(
    output: PathOutput<T>,
    p: &Polynomial<T>,
    kappa: i64,
    n: usize,
    eps: &T,
) -> Result<FactorizationResult<T>, Error> {
    let nu = p.degree();
    let k = kappa as usize;
    assert!(kappa > 0 && k < nu, "assemble expects a nontrivial index");
    let sample = p.coeff(0).re.zero();
    let (path, alpha, beta) = output.into_vectors(n);
    assert_eq!(alpha.len(), n);
    assert_eq!(beta.len(), n + 1);

    // Theoretical zero patterns: alpha_1..alpha_{n-kappa} (vector indices
    // 0..n-kappa-1) and beta_{nu-kappa+1}..beta_n.
    let mut worst = sample.zero();
    for a in alpha.iter().take(n - k) {
        worst = worst.max_val(&a.abs());
    }
    for b in beta.iter().skip(nu - k + 1) {
        worst = worst.max_val(&b.abs());
    }
    if worst >= *eps {
        return Err(Error::TrimViolation { magnitude: worst.to_f64(), eps: eps.to_f64() });
    }

    let one = Cplx::new(sample.one(), sample.zero());
    let mut p1_coeffs: Vec<Cplx<T>> = alpha[(n - k)..].to_vec();
    p1_coeffs.push(one);
    let p1 = Polynomial::new(p1_coeffs);

    let leading = p.leading().clone();
    let p2_monic = Polynomial::new(beta[..=(nu - k)].to_vec());
    let p2 = p2_monic.scale(&leading);

    let residual = p1.multiply(&p2).sub(p).one_norm();
    Ok(FactorizationResult {
        kappa,
        pminus: PminusRep { coeffs: p1.clone(), shift: kappa },
        p1,
        p2,
        residual,
        path,
        alpha_raw: alpha,
        beta_raw: beta,
        leading,
    })
}

/// Trivial factorizations for `kappa = 0` (p1 = 1) and `kappa = nu`
/// (p2 = leading constant).
pub fn trivial_result<T: Real>(p: &Polynomial<T>, kappa: i64) -> FactorizationResult<T> {
    let sample = p.coeff(0).re.zero();
    let one = Cplx::new(sample.one(), sample.zero());
    let nu = p.degree();
    let (p1, p2) = if kappa == 0 {
        (Polynomial::constant(one), p.clone())
    } else {
        assert_eq!(kappa as usize, nu);
        (p.to_monic(), Polynomial::constant(p.leading().clone()))
    };
    let residual = p1.multiply(&p2).sub(p).one_norm();
    FactorizationResult {
        kappa,
        pminus: PminusRep { coeffs: p1.clone(), shift: kappa },
        p1,
        p2,
        residual,
        path: SolvePath::Kernel,
        alpha_raw: Vec::new(),
        beta_raw: Vec::new(),
        leading: p.leading().clone(),
    }
}

/// Generating polynomials of the columns of `T_{-kappa}^{-1}`:
/// prefix products of `p1`, shifted copies of `p`, and suffix products of
/// `p2`. Both factors must be monic; `n >= nu`.
pub fn inverse_columns<T: Real>(
    p1: &Polynomial<T>,
    p2: &Polynomial<T>,
    n: usize,
) -> Vec<Polynomial<T>> {
    let kappa = p1.degree();
    let nu = kappa + p2.degree();
    assert!(n >= nu, "inverse column formula needs n >= nu");
    let p = p1.multiply(p2);
    let sample = p1.coeff(0).re.zero();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let b = if j <= kappa {
            // p1^{(j)}: top j+1 coefficients of p1 pulled down to degree j.
            let prefix = Polynomial::new(
                (0..=j).map(|t| p1.coeff(kappa - j + t)).collect::<Vec<_>>(),
            );
            prefix.multiply(p2)
        } else if j <= n - nu + kappa {
            shift_up(&p, j - kappa, &sample)
        } else {
            // p2^{(n-j)}: bottom n-j+1 coefficients of p2.
            let suffix = Polynomial::new(
                (0..=(n - j)).map(|t| p2.coeff(t)).collect::<Vec<_>>(),
            );
            shift_up(&p1.multiply(&suffix), j - kappa, &sample)
        };
        out.push(b);
    }
    out
}

fn shift_up<T: Real>(p: &Polynomial<T>, by: usize, sample: &T) -> Polynomial<T> {
    let zero = Cplx::new(sample.zero(), sample.zero());
    let mut coeffs = vec![zero; by];
    coeffs.extend(p.coeffs().iter().cloned());
    Polynomial::new(coeffs)
}

/// Reflection residual `||p2 - z^kappa p1(1/z) / p1(0)||` of a spectral
/// factorization; requires the input to be self-inversive.
pub fn spectral_symmetry_check<T: Real>(
    p: &Polynomial<T>,
    result: &FactorizationResult<T>,
) -> Result<T, Error> {
    let deviation = p.self_inversive_deviation();
    let tol = p.one_norm() * p.coeff(0).re.from_f64(1e-12);
    if deviation > tol {
        return Err(Error::NotSelfInversive { deviation: deviation.to_f64() });
    }
    let p1 = &result.p1;
    let kappa = result.kappa as usize;
    // z^kappa p1(1/z): reversed coefficients.
    let reversed = Polynomial::new((0..=kappa).map(|i| p1.coeff(kappa - i)).collect::<Vec<_>>());
    let scaled = reversed.scale(&p1.coeff(0).recip());
    let p2_monic = result.p2.scale(&result.leading.recip());
    Ok(p2_monic.sub(&scaled).one_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact;
    use crate::scalar::{Precision, PrecisionContext};

    fn ctx() -> PrecisionContext<f64> {
        PrecisionContext::new(Precision::Native64)
    }

    fn toy_poly() -> Polynomial<f64> {
        Polynomial::from_reals(&0.0, &[1.0, -2.5, 1.0])
    }

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
    fn direct_path_toy_vectors() {
        let w = toy_window(3);
        let (alpha, beta) = solve_direct(&w, 1, 3).unwrap();
        // alpha = (0, 0, -1/2)
        assert!(alpha[0].abs() < 1e-13 && alpha[1].abs() < 1e-13);
        assert!((alpha[2].re + 0.5).abs() < 1e-13);
        // beta = (-2, 1, 0, 0)
        assert!((beta[0].re + 2.0).abs() < 1e-12);
        assert!((beta[1].re - 1.0).abs() < 1e-12);
        assert!(beta[2].abs() < 1e-12 && beta[3].abs() < 1e-12);
    }

    #[test]
    fn direct_path_identity_window() {
        let ctx = ctx();
        // c_0 = 1, everything else zero, kappa = 0: T_{-kappa} = I.
        let n = 3usize;
        let mut vals = vec![ctx.complex_from_f64(0.0, 0.0); 2 * n + 1];
        vals[n] = ctx.complex_from_f64(1.0, 0.0); // index 0 when kappa = 0
        let w = LaurentWindow::from_values(n, 0, vals, 0.0, 8);
        let (alpha, beta) = solve_direct(&w, 0, n).unwrap();
        for a in &alpha {
            assert!(a.abs() < 1e-15);
        }
        assert!((beta[0].re - 1.0).abs() < 1e-15);
        for b in beta.iter().skip(1) {
            assert!(b.abs() < 1e-15);
        }
    }

    #[test]
    fn kernel_path_toy_pair() {
        let w = toy_window(3);
        let pair = solve_kernel(&w, 1, 3).unwrap();
        assert!((pair.q1.coeff(4).re - 1.0).abs() < 1e-12);
        assert!((pair.q1.coeff(3).re + 0.5).abs() < 1e-11);
        assert!((pair.q2.coeff(0).re + 2.0).abs() < 1e-11);
    }

    #[test]
    fn assemble_recovers_toy_factors() {
        let w = toy_window(3);
        let p = toy_poly();
        let (alpha, beta) = solve_direct(&w, 1, 3).unwrap();
        let res = assemble(PathOutput::Direct { alpha, beta }, &p, 1, 3, &1e-9).unwrap();
        assert_eq!(res.p1.degree(), 1);
        assert!((res.p1.coeff(0).re + 0.5).abs() < 1e-12);
        assert_eq!(res.p2.degree(), 1);
        assert!((res.p2.coeff(0).re + 2.0).abs() < 1e-12);
        assert!(res.residual < 1e-11, "residual {}", res.residual);
        assert_eq!(res.pminus.shift, 1);
    }

    #[test]
    fn assemble_rejects_fat_structural_zeros() {
        let w = toy_window(3);
        let p = toy_poly();
        let (mut alpha, beta) = solve_direct(&w, 1, 3).unwrap();
        alpha[0] = Cplx::new(1e-3, 0.0);
        let err = assemble(PathOutput::Direct { alpha, beta }, &p, 1, 3, &1e-9).unwrap_err();
        assert!(matches!(err, Error::TrimViolation { .. }));
    }

    #[test]
    fn trivial_factorizations() {
        let p = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let res = trivial_result(&p, 0);
        assert_eq!(res.p1.degree(), 0);
        assert!((res.p1.coeff(0).re - 1.0).abs() < 1e-15);
        assert!(res.residual < 1e-15);
        let q = Polynomial::from_reals(&0.0, &[-0.5, 1.0]);
        let res2 = trivial_result(&q, 1);
        assert_eq!(res2.p2.degree(), 0);
        assert!(res2.residual < 1e-15);
    }

    #[test]
    fn inverse_columns_structure() {
        let p1 = Polynomial::from_reals(&0.0, &[-0.5, 1.0]);
        let p2 = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let p = p1.multiply(&p2);
        let n = 4;
        let cols = inverse_columns(&p1, &p2, n);
        assert_eq!(cols.len(), n + 1);
        // j = kappa: B_kappa = p
        assert!(cols[1].sub(&p).one_norm() < 1e-15);
        // middle band: z^{j-kappa} p with the same norm as p
        assert!((cols[2].one_norm() - p.one_norm()).abs() < 1e-15);
        assert!((cols[3].one_norm() - p.one_norm()).abs() < 1e-15);
    }

    #[test]
    fn inverse_columns_invert_toeplitz() {
        let p1 = Polynomial::from_reals(&0.0, &[-0.5, 1.0]);
        let p2 = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let n = 4usize;
        let w = toy_window(n);
        let t = toeplitz_slice(&w, 1, -(n as i64) - 1, n as i64 - 1).unwrap();
        assert_eq!((t.rows(), t.cols()), (n + 1, n + 1));
        let cols = inverse_columns(&p1, &p2, n);
        let binv = Matrix::from_fn(n + 1, n + 1, |i, j| cols[j].coeff(i));
        let prod = t.matmul(&binv);
        for i in 0..=n {
            for j in 0..=n {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = prod.at(i, j);
                assert!(
                    (got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12,
                    "entry ({i},{j}) = {got:?}"
                );
            }
        }
    }

    #[test]
    fn norm_chain_collapses_for_nonnegative_factors() {
        // Factors with nonnegative real coefficients make both ends of
        // ||p|| <= max_j ||B_j|| <= ||p1|| ||p2|| sharp: everything equals
        // p(1) = p1(1) p2(1).
        let p1 = Polynomial::from_reals(&0.0, &[0.5, 1.0]);
        let p2 = Polynomial::from_reals(&0.0, &[2.0, 3.0, 1.0]);
        let p = p1.multiply(&p2);
        let norm = p.one_norm();
        let at_one = p.eval(&Cplx::new(1.0, 0.0)).re;
        assert!((norm - at_one).abs() < 1e-12);
        assert!((norm - p1.one_norm() * p2.one_norm()).abs() < 1e-12);
        let cols = inverse_columns(&p1, &p2, 4);
        let max_col = cols.iter().map(|b| b.one_norm()).fold(0.0f64, f64::max);
        assert!((max_col - norm).abs() < 1e-12, "max ||B_j|| = {max_col}, ||p|| = {norm}");
    }

    #[test]
    fn spectral_symmetry_toy() {
        let p = toy_poly(); // palindromic with real coefficients
        let w = toy_window(3);
        let (alpha, beta) = solve_direct(&w, 1, 3).unwrap();
        let res = assemble(PathOutput::Direct { alpha, beta }, &p, 1, 3, &1e-9).unwrap();
        let s = spectral_symmetry_check(&p, &res).unwrap();
        assert!(s < 1e-11, "symmetry residual {s}");
        // non-self-inversive input is rejected
        let q = Polynomial::from_reals(&0.0, &[-2.0, 1.0]);
        let res_q = trivial_result(&q, 0);
        assert!(matches!(
            spectral_symmetry_check(&q, &res_q),
            Err(Error::NotSelfInversive { .. })
        ));
    }

    #[test]
    fn path_agreement_on_toy() {
        let w = toy_window(3);
        let p = toy_poly();
        let (alpha, beta) = solve_direct(&w, 1, 3).unwrap();
        let direct = assemble(PathOutput::Direct { alpha, beta }, &p, 1, 3, &1e-9).unwrap();
        let pair = solve_kernel(&w, 1, 3).unwrap();
        let kernel = assemble(PathOutput::Kernel(pair), &p, 1, 3, &1e-9).unwrap();
        assert!(direct.p1.sub(&kernel.p1).one_norm() < 1e-10);
        assert!(direct.p2.sub(&kernel.p2).one_norm() < 1e-10);
    }
}
