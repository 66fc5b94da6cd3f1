//! Independent cross-checks: a naive root-based factorizer and exact
//! arithmetic helpers.
//!
//! Nothing here sits on the factorization path. The naive method exists
//! precisely because it is the ill-conditioned baseline the Toeplitz route
//! is measured against, and the exact-rational harness verifies the kernel
//! combinatorics without floating noise.

use crate::error::Error;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};

/// Roots of `p` as eigenvalues of its companion matrix (balanced complex
/// Hessenberg QR with Wilkinson shifts). Unordered, with multiplicity.
pub fn companion_roots<T: Real>(p: &Polynomial<T>) -> Result<Vec<Cplx<T>>, Error> {
    let nu = p.degree();
    if p.leading().is_zero() {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    if nu == 0 {
        return Ok(vec![]);
    }
    let monic = p.to_monic();
    let sample = p.coeff(0).re.zero();
    let mut h = Matrix::zeros(nu, nu, &sample);
    for i in 1..nu {
        *h.at_mut(i, i - 1) = Cplx::new(sample.one(), sample.zero());
    }
    for i in 0..nu {
        *h.at_mut(i, nu - 1) = -&monic.coeff(i);
    }
    balance(&mut h);
    hessenberg_eigenvalues(h)
}

/// Parlett-Reinsch balancing by powers of two; eigenvalues are unchanged.
fn balance<T: Real>(h: &mut Matrix<T>) {
    let n = h.rows();
    let sample = h.at(0, 0).re.zero();
    let two = sample.from_i64(2);
    for _ in 0..32 {
        let mut converged = true;
        for i in 0..n {
            let mut row = sample.zero();
            let mut col = sample.zero();
            for j in 0..n {
                if j != i {
                    row = row + h.at(i, j).abs();
                    col = col + h.at(j, i).abs();
                }
            }
            if row.is_zero() || col.is_zero() {
                continue;
            }
            let mut factor = sample.one();
            let mut c = col.clone();
            let mut r = row.clone();
            while c < r.clone() / &two {
                factor = factor * &two;
                c = c * &two;
                r = r / &two;
            }
            while c >= r.clone() * &two {
                factor = factor / &two;
                c = c / &two;
                r = r * &two;
            }
            // Apply D^-1 H D only when it reduces the combined norm enough.
            let total = col + &row;
            if (c + r) < total.from_f64(0.95) * &total {
                converged = false;
                let inv = sample.one() / &factor;
                for j in 0..n {
                    *h.at_mut(i, j) = h.at(i, j).scale(&inv);
                    *h.at_mut(j, i) = h.at(j, i).scale(&factor);
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn complex_sqrt<T: Real>(z: &Cplx<T>) -> Cplx<T> {
    let zero = z.re.zero();
    let r = z.abs();
    if r.is_zero() {
        return z.zero();
    }
    let half = z.re.from_f64(0.5);
    let t = ((r.clone() + z.re.abs()) * &half).sqrt();
    if z.re >= zero {
        let im = z.im.clone() / (z.re.from_i64(2) * &t);
        Cplx::new(t, im)
    } else {
        let mag = z.im.abs() / (z.re.from_i64(2) * &t);
        let im = if z.im >= z.re.zero() { t } else { -t };
        Cplx::new(mag, im)
    }
}

/// Complex Givens rotation: returns (c, s) with c real so that
/// `conj(c)*f + conj(s)... ` i.e. rows map to (c f + s g, -conj(s) f + c g)
/// with the second component zero.
fn givens<T: Real>(f: &Cplx<T>, g: &Cplx<T>) -> (T, Cplx<T>) {
    let sample = f.re.zero();
    if g.is_zero() {
        return (f.re.one(), Cplx::new(sample.zero(), sample.zero()));
    }
    if f.is_zero() {
        let gm = g.abs();
        return (sample.zero(), g.conj().scale(&(sample.one() / &gm)));
    }
    let fm = f.abs();
    let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = fm.clone() / &r;
    let s = &f.scale(&(sample.one() / &fm)) * &g.conj().scale(&(sample.one() / &r));
    (c, s)
}

fn hessenberg_eigenvalues<T: Real>(mut h: Matrix<T>) -> Result<Vec<Cplx<T>>, Error> {
    let n = h.rows();
    let sample = h.at(0, 0).re.zero();
    let eps = sample.from_f64(sample.epsilon());
    let mut eigs = Vec::with_capacity(n);
    let mut high = n;
    let mut iter = 0usize;
    let max_iter = 40 * n.max(1);

    while high > 0 {
        // Find the start of the trailing unreduced block.
        let mut lo = high - 1;
        while lo > 0 {
            let scale = h.at(lo - 1, lo - 1).abs() + h.at(lo, lo).abs();
            let scale = if scale.is_zero() { sample.one() } else { scale };
            if h.at(lo, lo - 1).abs() <= eps.clone() * &scale {
                *h.at_mut(lo, lo - 1) = Cplx::new(sample.zero(), sample.zero());
                break;
            }
            lo -= 1;
        }
        if lo == high - 1 {
            eigs.push(h.at(high - 1, high - 1).clone());
            high -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::EigFailure);
        }

        // Wilkinson shift from the trailing 2x2 of the active block.
        let a = h.at(high - 2, high - 2).clone();
        let b = h.at(high - 2, high - 1).clone();
        let c2 = h.at(high - 1, high - 2).clone();
        let d = h.at(high - 1, high - 1).clone();
        let mut mu = {
            let half = sample.from_f64(0.5);
            let tr = (&a + &d).scale(&half);
            let diff = &a - &d;
            let disc = &(&diff * &diff).scale(&sample.from_f64(0.25))
                + &(&b * &c2);
            let root = complex_sqrt(&disc);
            let lam1 = &tr + &root;
            let lam2 = &tr - &root;
            if (&lam1 - &d).abs() <= (&lam2 - &d).abs() {
                lam1
            } else {
                lam2
            }
        };
        if iter.is_multiple_of(12) {
            // Exceptional shift to break rare cycles.
            let kick = h.at(high - 1, high - 2).abs();
            mu = &d + &Cplx::new(kick.clone() * sample.from_f64(0.75), kick * sample.from_f64(0.4375));
        }

        // Implicit single-shift QR sweep on rows/cols lo..high.
        let mut x = &h.at(lo, lo).clone() - &mu;
        let mut y = h.at(lo + 1, lo).clone();
        for k in lo..(high - 1) {
            let (c, s) = givens(&x, &y);
            let s_conj = s.conj();
            // Rows k, k+1.
            let j0 = k.saturating_sub(1).max(lo);
            for j in j0..high {
                let t1 = h.at(k, j).clone();
                let t2 = h.at(k + 1, j).clone();
                *h.at_mut(k, j) = &t1.scale(&c) + &(&s * &t2);
                *h.at_mut(k + 1, j) = &t2.scale(&c) - &(&s_conj * &t1);
            }
            // Columns k, k+1.
            let i1 = (k + 2).min(high - 1);
            for i in lo..=i1 {
                let t1 = h.at(i, k).clone();
                let t2 = h.at(i, k + 1).clone();
                *h.at_mut(i, k) = &t1.scale(&c) + &(&s_conj * &t2);
                *h.at_mut(i, k + 1) = &t2.scale(&c) - &(&s * &t1);
            }
            if k + 2 < high {
                x = h.at(k + 1, k).clone();
                y = h.at(k + 2, k).clone();
            }
        }
    }
    Ok(eigs)
}

/// Separates roots by modulus and rebuilds both factors from them.
///
/// `p1_hat` is the monic product over roots inside the unit circle, `p2_hat`
/// carries the leading coefficient of `p`. Errors with
/// [`Error::RootOnCircle`] when some root is within 1e-6 of the circle.
pub fn naive_factorize<T: Real>(
    p: &Polynomial<T>,
) -> Result<(Polynomial<T>, Polynomial<T>), Error> {
    let roots = companion_roots(p)?;
    let one = p.coeff(0).re.one();
    let margin = p.coeff(0).re.from_f64(1e-6);
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for xi in roots {
        let m = xi.abs();
        if (m.clone() - &one).abs() < margin {
            return Err(Error::RootOnCircle);
        }
        if m < one {
            inside.push(xi);
        } else {
            outside.push(xi);
        }
    }
    let p1 = poly_from_roots(&p.coeff(0).re, &inside);
    let p2 = poly_from_roots(&p.coeff(0).re, &outside).scale(p.leading());
    Ok((p1, p2))
}

/// Monic polynomial with the given roots, multiplied as a balanced tree.
pub fn poly_from_roots<T: Real>(sample: &T, roots: &[Cplx<T>]) -> Polynomial<T> {
    let one = Cplx::new(sample.one(), sample.zero());
    if roots.is_empty() {
        return Polynomial::constant(one);
    }
    let mut level: Vec<Polynomial<T>> = roots
        .iter()
        .map(|r| Polynomial::new(vec![-r, one.clone()]))
        .collect();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.multiply(&b)),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

/// Exact Laurent coefficient of `1/p` on the unit annulus for a monic `p`
/// given by simple roots off the unit circle, via partial fractions.
pub fn exact_laurent<T: Real>(roots: &[Cplx<T>], k: i64) -> Result<Cplx<T>, Error> {
    if roots.is_empty() {
        return Err(Error::InvalidInput("constant polynomial has no Laurent data".into()));
    }
    let sample = roots[0].re.zero();
    let scale = roots
        .iter()
        .map(|r| r.abs())
        .fold(sample.one(), |m, v| m.max_val(&v));
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if (&roots[i] - &roots[j]).abs() < scale.from_f64(1e-9) * &scale {
                return Err(Error::RepeatedRoot);
            }
        }
    }
    let one = Cplx::new(sample.one(), sample.zero());
    let mut acc = Cplx::new(sample.zero(), sample.zero());
    for (j, xi) in roots.iter().enumerate() {
        let mut denom = one.clone();
        for (i, other) in roots.iter().enumerate() {
            if i != j {
                denom = &denom * &(xi - other);
            }
        }
        let coeff = &one / &denom;
        let inside = xi.abs() < sample.one();
        if inside && k <= -1 {
            acc = &acc + &(&coeff * &cplx_powi(xi, -k - 1));
        } else if !inside && k >= 0 {
            acc = &acc - &(&coeff * &cplx_powi(&xi.recip(), k + 1));
        }
    }
    Ok(acc)
}

fn cplx_powi<T: Real>(z: &Cplx<T>, mut n: i64) -> Cplx<T> {
    assert!(n >= 0);
    let mut base = z.clone();
    let mut acc = z.one();
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

pub mod exact {
    //! Exact-rational harness over Q(i) for the kernel-structure invariants.
    //!
    //! Ranks, null spaces and polynomial divisions here are exact, so the
    //! combinatorial claims about Toeplitz kernels are tested without any
    //! floating-point tolerance.

    use num_bigint::BigInt;
    use num_complex::Complex;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    use crate::poly::Polynomial;
    use crate::scalar::{Cplx, Real};

    pub type Q = BigRational;
    pub type CQ = Complex<BigRational>;

    pub fn q(num: i64, den: i64) -> Q {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn cq(num: i64, den: i64) -> CQ {
        Complex::new(q(num, den), Q::zero())
    }

    pub fn cq2(re: Q, im: Q) -> CQ {
        Complex::new(re, im)
    }

    /// Monic expansion of prod (z - root).
    pub fn poly_from_roots(roots: &[CQ]) -> Vec<CQ> {
        let mut coeffs = vec![CQ::one()];
        for r in roots {
            let mut next = vec![CQ::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c.clone();
                next[i] -= c.clone() * r.clone();
            }
            coeffs = next;
        }
        coeffs
    }

    pub fn poly_mul(a: &[CQ], b: &[CQ]) -> Vec<CQ> {
        let mut out = vec![CQ::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x.clone() * y.clone();
            }
        }
        out
    }

    /// Quotient and remainder of a / b over Q(i); b must be nonzero.
    pub fn poly_divmod(a: &[CQ], b: &[CQ]) -> (Vec<CQ>, Vec<CQ>) {
        let deg = |p: &[CQ]| p.iter().rposition(|c| !c.is_zero());
        let db = deg(b).expect("division by zero polynomial");
        let mut rem: Vec<CQ> = a.to_vec();
        let mut quo = vec![CQ::zero(); a.len().saturating_sub(db).max(1)];
        while let Some(dr) = deg(&rem) {
            if dr < db {
                break;
            }
            let factor = rem[dr].clone() / b[db].clone();
            let shift = dr - db;
            quo[shift] = factor.clone();
            for i in 0..=db {
                let t = b[i].clone() * factor.clone();
                rem[i + shift] -= t;
            }
        }
        (quo, rem)
    }

    /// Exact Laurent coefficient of 1/p on the unit annulus, partial
    /// fractions over simple rational roots of a monic p.
    pub fn laurent_coeff(roots: &[CQ], k: i64) -> CQ {
        let mut acc = CQ::zero();
        for (j, xi) in roots.iter().enumerate() {
            let mut denom = CQ::one();
            for (i, other) in roots.iter().enumerate() {
                if i != j {
                    denom *= xi.clone() - other.clone();
                }
            }
            let coeff = CQ::one() / denom;
            let inside = (xi.re.clone() * xi.re.clone() + xi.im.clone() * xi.im.clone()) < Q::one();
            if inside && k <= -1 {
                acc += coeff * pow_cq(xi, (-k - 1) as usize);
            } else if !inside && k >= 0 {
                let inv = CQ::one() / xi.clone();
                acc -= coeff * pow_cq(&inv, (k + 1) as usize);
            }
        }
        acc
    }

    pub fn pow_cq(z: &CQ, n: usize) -> CQ {
        let mut acc = CQ::one();
        for _ in 0..n {
            acc *= z.clone();
        }
        acc
    }

    /// Exact window `c_lo..c_hi` of 1/p for a monic p with simple roots.
    pub fn laurent_window(roots: &[CQ], lo: i64, hi: i64) -> Vec<CQ> {
        (lo..=hi).map(|k| laurent_coeff(roots, k)).collect()
    }

    /// Toeplitz matrix T_k of the window with entries c_lo..c_hi:
    /// entry (i, j) = c_{k+i-j}, shape (hi-k+1) x (k-lo+1).
    pub fn toeplitz(window: &[CQ], lo: i64, hi: i64, k: i64) -> Vec<Vec<CQ>> {
        assert!(lo <= k && k <= hi);
        let rows = (hi - k + 1) as usize;
        let cols = (k - lo + 1) as usize;
        let entry = |idx: i64| -> CQ { window[(idx - lo) as usize].clone() };
        (0..rows)
            .map(|i| (0..cols).map(|j| entry(k + i as i64 - j as i64)).collect())
            .collect()
    }

    /// Exact rank by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(mut m: Vec<Vec<CQ>>) -> usize {
        if m.is_empty() || m[0].is_empty() {
            return 0;
        }
        let rows = m.len();
        let cols = m[0].len();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            let inv = CQ::one() / m[row][col].clone();
            for c in col..cols {
                m[row][c] = m[row][c].clone() * inv.clone();
            }
            for r in 0..rows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..cols {
                        let t = m[row][c].clone() * f.clone();
                        m[r][c] -= t;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        rank
    }

    /// Exact null-space basis (column vectors) via RREF.
    #[allow(clippy::needless_range_loop)]
    pub fn null_space(mut m: Vec<Vec<CQ>>) -> Vec<Vec<CQ>> {
        let rows = m.len();
        let cols = m[0].len();
        let mut pivot_col_of_row = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            let inv = CQ::one() / m[row][col].clone();
            for c in 0..cols {
                m[row][c] = m[row][c].clone() * inv.clone();
            }
            for r in 0..rows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..cols {
                        let t = m[row][c].clone() * f.clone();
                        m[r][c] -= t;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        let pivot_set: std::collections::HashSet<usize> =
            pivot_col_of_row.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![CQ::zero(); cols];
            v[free] = CQ::one();
            for (r, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// sigma{z^power * Q(z)} = sum_j Q_j c_{-power-j} on an exact window.
    pub fn sigma(window: &[CQ], lo: i64, poly: &[CQ], power: i64) -> CQ {
        let hi = lo + window.len() as i64 - 1;
        let mut acc = CQ::zero();
        for (j, qc) in poly.iter().enumerate() {
            let idx = -power - j as i64;
            assert!(lo <= idx && idx <= hi, "sigma index out of window");
            acc += qc.clone() * window[(idx - lo) as usize].clone();
        }
        acc
    }

    /// Analytic sigma: residue at 0 of t^{-1} c(t) Q(t) where c is the
    /// window generating function, i.e. the constant Laurent coefficient of
    /// the product.
    pub fn sigma_by_residue(window: &[CQ], lo: i64, poly: &[CQ]) -> CQ {
        let mut acc = CQ::zero();
        for (i, c) in window.iter().enumerate() {
            let ci = lo + i as i64;
            for (j, qc) in poly.iter().enumerate() {
                if ci + j as i64 == 0 {
                    acc += c.clone() * qc.clone();
                }
            }
        }
        acc
    }

    pub fn to_cplx<T: Real>(sample: &T, v: &CQ) -> Cplx<T> {
        Cplx::new(rational_to_real(sample, &v.re), rational_to_real(sample, &v.im))
    }

    /// Rational -> backend scalar through exact integer strings, so extended
    /// backends keep full precision.
    pub fn rational_to_real<T: Real>(sample: &T, v: &Q) -> T {
        let num = sample
            .parse_decimal(&v.numer().to_string())
            .expect("integer literal");
        let den = sample
            .parse_decimal(&v.denom().to_string())
            .expect("integer literal");
        num / den
    }

    pub fn to_polynomial<T: Real>(sample: &T, coeffs: &[CQ]) -> Polynomial<T> {
        Polynomial::new(coeffs.iter().map(|c| to_cplx(sample, c)).collect())
    }

    /// |coefficient|-sum as rational squares cannot express the modulus of a
    /// complex rational; callers on real windows use this real-part variant.
    pub fn one_norm_real(coeffs: &[CQ]) -> Q {
        coeffs.iter().map(|c| c.re.abs() + c.im.abs()).fold(Q::zero(), |a, b| a + b)
    }
}
