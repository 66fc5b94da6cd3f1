//! Laurent coefficients of `1/p` by roots-of-unity averaging, with the
//! certified truncation bound and the automatic choice of the sampling
//! order.

use crate::contour::AnnulusParams;
use crate::error::Error;
use crate::poly::{Polynomial, ZERO_ON_CIRCLE_FACTOR};
use crate::scalar::{two_prod_complex, two_sum_complex, Cplx, Real};

/// Finite slice `c_{-n-kappa} .. c_{n-kappa}` of approximate Laurent
/// coefficients of `1/p`, with a uniform per-entry error bound.
#[derive(Clone, Debug)]
pub struct LaurentWindow<T: Real> {
    pub lo: i64,
    pub hi: i64,
    values: Vec<Cplx<T>>,
    pub per_entry_bound: T,
    pub ell: usize,
    pub n: usize,
    pub kappa: i64,
}

impl<T: Real> LaurentWindow<T> {
    /// Wraps explicitly provided coefficients (exact windows in tests, or
    /// windows imported from elsewhere).
    pub fn from_values(
        n: usize,
        kappa: i64,
        values: Vec<Cplx<T>>,
        per_entry_bound: T,
        ell: usize,
    ) -> Self {
        assert_eq!(values.len(), 2 * n + 1, "window must hold 2n+1 entries");
        LaurentWindow {
            lo: -(n as i64) - kappa,
            hi: n as i64 - kappa,
            values,
            per_entry_bound,
            ell,
            n,
            kappa,
        }
    }

    pub fn value(&self, index: i64) -> Result<&Cplx<T>, Error> {
        if index < self.lo || index > self.hi {
            return Err(Error::IndexOutOfWindow { index, lo: self.lo, hi: self.hi });
        }
        Ok(&self.values[(index - self.lo) as usize])
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Sum of entry moduli (the 1-norm of the coefficient sequence).
    pub fn one_norm(&self) -> T {
        let mut acc = self.values[0].re.zero();
        for v in &self.values {
            acc = acc + v.abs();
        }
        acc
    }
}

/// Evaluates `1/p` at the ell-th roots of unity taken from `table`. Shared
/// by [`approx_coefficient`] and [`build_window`]; the polynomial
/// evaluations happen once per window, never per coefficient.
fn inverse_samples<T: Real>(
    p: &Polynomial<T>,
    table: &[Cplx<T>],
) -> Result<Vec<Cplx<T>>, Error> {
    let threshold = ZERO_ON_CIRCLE_FACTOR * p.one_norm().to_f64();
    let mut out = Vec::with_capacity(table.len());
    for omega in table {
        // Compensated evaluation: the window entries are the data of every
        // later solve, so they get full working accuracy even in binary64.
        let val = p.eval_compensated(omega);
        if val.abs().to_f64() < threshold {
            return Err(Error::ZeroOnCircle { min_abs: val.abs().to_f64(), threshold });
        }
        out.push(val.recip());
    }
    Ok(out)
}

/// Single approximate Laurent coefficient
/// `(1/ell) sum_j 1/(p(omega_j) omega_j^k)`.
pub fn approx_coefficient<T: Real>(
    p: &Polynomial<T>,
    k: i64,
    ell: usize,
) -> Result<Cplx<T>, Error> {
    assert!(ell >= 2 && ell.is_multiple_of(2), "ell must be even and >= 2");
    let sample = p.coeff(0).re.zero();
    let table = unit_root_table(&sample, ell);
    let inv = inverse_samples(p, &table)?;
    let mut acc = Cplx::new(sample.zero(), sample.zero());
    let mut err = acc.zero();
    for (j, f) in inv.iter().enumerate() {
        let idx = (-(k) * j as i64).rem_euclid(ell as i64) as usize;
        let (prod, e_prod) = two_prod_complex(f, &table[idx]);
        let (next, e_sum) = two_sum_complex(&acc, &prod);
        err = &err + &(&e_prod + &e_sum);
        acc = next;
    }
    acc = &acc + &err;
    Ok(acc.scale(&(sample.one() / sample.from_i64(ell as i64))))
}

/// Builds the full window `c_{-n-kappa} .. c_{n-kappa}`.
///
/// Root-of-unity powers are table lookups with exactly folded integer
/// indices, evaluated in a fixed order, so the result is deterministic.
pub fn build_window<T: Real>(
    p: &Polynomial<T>,
    n: usize,
    kappa: i64,
    ell: usize,
    annulus: &AnnulusParams<T>,
) -> Result<LaurentWindow<T>, Error> {
    let nu = p.degree() as i64;
    let n0 = kappa.max(nu - kappa).max(0) as usize;
    if n < n0 {
        return Err(Error::InvalidInput(format!(
            "n = {n} below n0 = max(kappa, nu - kappa) = {n0}"
        )));
    }
    let required = 2 * (n as i64 + kappa).max(0) as usize;
    if !ell.is_multiple_of(2) || ell < required.max(2) {
        return Err(Error::EllTooSmall { ell, required });
    }

    let sample = p.coeff(0).re.zero();
    let lo = -(n as i64) - kappa;
    let width = 2 * n + 1;

    // omega_j^{-k} = table[(-k j) mod ell]: the power indices fold exactly
    // in integer arithmetic, so every factor carries one rounding of the
    // trig table instead of a running-product drift.
    let table = unit_root_table(&sample, ell);
    let inv = inverse_samples(p, &table)?;
    let mut idx: Vec<usize> = (0..ell as i64)
        .map(|j| ((-lo) * j).rem_euclid(ell as i64) as usize)
        .collect();

    let ell_inv = sample.one() / sample.from_i64(ell as i64);
    let mut values = Vec::with_capacity(width);
    for step in 0..width {
        // Compensated accumulation: the terms are O(1/m1) and cancel down to
        // the coefficient size, so the plain-sum roundoff would dominate the
        // entry accuracy in binary64.
        let mut acc = Cplx::new(sample.zero(), sample.zero());
        let mut err = acc.zero();
        for j in 0..ell {
            let (prod, e_prod) = two_prod_complex(&inv[j], &table[idx[j]]);
            let (next, e_sum) = two_sum_complex(&acc, &prod);
            err = &err + &(&e_prod + &e_sum);
            acc = next;
        }
        acc = &acc + &err;
        values.push(acc.scale(&ell_inv));
        if step + 1 < width {
            for (j, slot) in idx.iter_mut().enumerate() {
                // next k: multiply by omega_j^{-1}, i.e. subtract j mod ell
                *slot = (*slot + ell - j % ell) % ell;
            }
        }
    }

    let bound = truncation_bound(&annulus.rho, &annulus.m_k, ell);
    Ok(LaurentWindow::from_values(n, kappa, values, bound, ell))
}

/// Table of the ell-th roots of unity `e^{2 pi i m / ell}`, m = 0..ell-1.
fn unit_root_table<T: Real>(sample: &T, ell: usize) -> Vec<Cplx<T>> {
    (0..ell)
        .map(|m| {
            let (c, s) = sample.unit_root(m as i64, ell as i64);
            Cplx::new(c, s)
        })
        .collect()
}

/// Uniform truncation bound `2 M_K rho^{ell/2} / (1 - rho^ell)` with
/// `M_K = 1/m_K`, valid for every index in `[-ell/2, ell/2]`.
pub fn truncation_bound<T: Real>(rho: &T, m_k: &T, ell: usize) -> T {
    let m_big = rho.one() / m_k;
    let half = rho.powi((ell / 2) as i64);
    let full = rho.powi(ell as i64);
    rho.from_i64(2) * m_big * half / (rho.one() - full)
}

/// Inputs of the sampling-order selection: everything the truncation and
/// perturbation bounds need.
#[derive(Clone, Debug)]
pub struct EllInputs<T: Real> {
    pub n: usize,
    pub kappa: i64,
    pub rho: T,
    pub m_k: T,
    pub delta0: T,
    pub norm_p: T,
    pub q: T,
}

/// Smallest admissible even sampling order for a demanded window accuracy.
///
/// Guarantees both factor perturbation bounds stay below `eps_tilde`:
/// the order must exceed `2 max(n + kappa, log(sqrt(1 + 1/(4 a^2)) + 1/(2a))
/// / |log rho|)` with the effectivity constant `a` built from the ledger
/// inputs.
pub fn choose_ell<T: Real>(eps_tilde: &T, inputs: &EllInputs<T>) -> Result<usize, Error> {
    let s = inputs.q.zero();
    let one = s.one();
    let limit = inputs.q.clone() / (one.clone() - &inputs.q);
    if *eps_tilde >= limit {
        return Err(Error::EpsTooLarge {
            eps_tilde: eps_tilde.to_f64(),
            limit: limit.to_f64(),
        });
    }

    let n_i = s.from_i64(inputs.n as i64);
    let four_n = s.from_i64(4) * &n_i;
    let dp = inputs.delta0.clone() * &inputs.norm_p;
    let ratio = (one.clone() + &inputs.rho) / (one.clone() - &inputs.rho);
    let first = (four_n.clone() - s.from_i64(2))
        * (one.clone() + dp.clone() * &ratio / &inputs.m_k);
    let second = (four_n + s.from_i64(2)) * &dp;
    let alpha = eps_tilde.clone() * (one.clone() - &inputs.q) * &inputs.m_k / &dp
        * first.min_val(&second);

    let inv2a = one.clone() / (s.from_i64(2) * &alpha);
    let log_term = ((one.clone() + inv2a.clone() * &inv2a).sqrt() + &inv2a).ln()
        / inputs.rho.ln().abs();
    let n_plus_kappa = s.from_i64(inputs.n as i64 + inputs.kappa);
    let x = n_plus_kappa.max_val(&log_term);
    // smallest even integer strictly above 2x
    let floor_x = x.to_f64().floor();
    Ok((2.0 * (floor_x + 1.0)) as usize)
}
