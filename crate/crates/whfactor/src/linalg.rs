//! Dense complex linear algebra, generic over the scalar backend.
//!
//! Kernel extraction and the direct solves must run in extended precision,
//! so both the partial-pivot LU and the one-sided Jacobi SVD are written
//! against the [`Real`] abstraction instead of an external LAPACK binding.

use crate::error::Error;
use crate::scalar::{Cplx, Real};

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, sample: &T) -> Self {
        let zero = Cplx::new(sample.zero(), sample.zero());
        Matrix { rows, cols, data: vec![zero; rows * cols] }
    }

    pub fn identity(n: usize, sample: &T) -> Self {
        let mut m = Matrix::zeros(n, n, sample);
        for i in 0..n {
            *m.at_mut(i, i) = Cplx::new(sample.one(), sample.zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn at(&self, i: usize, j: usize) -> &Cplx<T> {
        &self.data[i * self.cols + j]
    }
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Cplx<T> {
        &mut self.data[i * self.cols + j]
    }

    pub fn matvec(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(self.cols, x.len());
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = x[0].zero();
            for (j, xj) in x.iter().enumerate() {
                acc = &acc + &(self.at(i, j) * xj);
            }
            out.push(acc);
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        let sample = &self.data[0].re;
        let mut out = Matrix::zeros(self.rows, rhs.cols, sample);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    *out.at_mut(i, j) = &(&a * rhs.at(k, j)) + out.at(i, j);
                }
            }
        }
        out
    }

    /// Induced 1-norm (max column sum of moduli).
    pub fn one_norm(&self) -> T {
        let mut best = self.data[0].re.zero();
        for j in 0..self.cols {
            let mut sum = self.data[0].re.zero();
            for i in 0..self.rows {
                sum = sum + self.at(i, j).abs();
            }
            best = best.max_val(&sum);
        }
        best
    }
}

/// LU decomposition with partial pivoting.
pub struct Lu<T: Real> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

/// Factorizes a square matrix; [`Error::SingularSystem`] on an exactly zero
/// pivot column.
pub fn lu_factor<T: Real>(a: &Matrix<T>) -> Result<Lu<T>, Error> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = lu.at(k, k).norm_sqr();
        for i in (k + 1)..n {
            let mag = lu.at(i, k).norm_sqr();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag.is_zero() {
            return Err(Error::SingularSystem);
        }
        if pivot_row != k {
            perm.swap(k, pivot_row);
            for j in 0..n {
                let tmp = lu.at(k, j).clone();
                *lu.at_mut(k, j) = lu.at(pivot_row, j).clone();
                *lu.at_mut(pivot_row, j) = tmp;
            }
        }
        let pivot = lu.at(k, k).clone();
        for i in (k + 1)..n {
            let factor = lu.at(i, k) / &pivot;
            *lu.at_mut(i, k) = factor.clone();
            for j in (k + 1)..n {
                *lu.at_mut(i, j) = &(lu.at(i, j).clone()) - &(&factor * lu.at(k, j));
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl<T: Real> Lu<T> {
    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut y: Vec<Cplx<T>> = self.perm.iter().map(|&i| b[i].clone()).collect();
        // L has unit diagonal.
        for i in 1..n {
            for j in 0..i {
                y[i] = &y[i] - &(self.lu.at(i, j) * &y[j]);
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] = &y[i] - &(self.lu.at(i, j) * &y[j]);
            }
            y[i] = &y[i] / self.lu.at(i, i);
        }
        y
    }
}

/// Residual `b - A x` with compensated dot products: every product and sum
/// contributes its rounding error, so the residual is accurate well below
/// working precision even under heavy cancellation.
fn residual_compensated<T: Real>(a: &Matrix<T>, x: &[Cplx<T>], b: &[Cplx<T>]) -> Vec<Cplx<T>> {
    use crate::scalar::{two_prod_complex, two_sum_complex};
    let mut out = Vec::with_capacity(a.rows());
    for (i, bi) in b.iter().enumerate() {
        let mut sum = bi.clone();
        let mut err = sum.zero();
        for (j, xj) in x.iter().enumerate() {
            let (prod, e_prod) = two_prod_complex(a.at(i, j), xj);
            let (next, e_sum) = two_sum_complex(&sum, &(-&prod));
            err = &err - &(&e_prod - &e_sum);
            sum = next;
        }
        out.push(&sum + &err);
    }
    out
}

/// Solves `A x = b` by LU with one step of iterative refinement driven by a
/// compensated residual, which restores the accuracy lost to elimination
/// roundoff.
pub fn solve_refined<T: Real>(a: &Matrix<T>, b: &[Cplx<T>]) -> Result<Vec<Cplx<T>>, Error> {
    let lu = lu_factor(a)?;
    let mut x = lu.solve(b);
    let r = residual_compensated(a, &x, b);
    let dx = lu.solve(&r);
    for (xi, di) in x.iter_mut().zip(dx.iter()) {
        *xi = &*xi + di;
    }
    Ok(x)
}

/// Singular value decomposition `A = U diag(s) V^H`.
///
/// `s` is sorted descending. `v` is square `cols x cols`, so the trailing
/// columns span the numerical null space even when `cols > rows`.
pub struct Svd<T: Real> {
    pub u: Matrix<T>,
    pub s: Vec<T>,
    pub v: Matrix<T>,
}

const MAX_SWEEPS: usize = 60;

/// One-sided Jacobi (Hestenes) SVD.
///
/// Columns are repeatedly rotated pairwise until mutually orthogonal to
/// working accuracy. Rotations are accumulated into `v`.
pub fn svd<T: Real>(a: &Matrix<T>) -> Svd<T> {
    let sample = a.at(0, 0).re.zero();
    let m = a.rows();
    let n = a.cols();
    let mut work = a.clone();
    let mut v = Matrix::identity(n, &sample);
    let tol = sample.from_f64(sample.epsilon() * 0.5);
    let tol_sq = tol.clone() * &tol;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                // Gram entries of the column pair.
                let mut aa = sample.zero();
                let mut bb = sample.zero();
                let mut d = Cplx::new(sample.zero(), sample.zero());
                for k in 0..m {
                    let ui = work.at(k, i);
                    let vj = work.at(k, j);
                    aa = aa + ui.norm_sqr();
                    bb = bb + vj.norm_sqr();
                    d = &d + &(&ui.conj() * vj);
                }
                let dmag_sq = d.norm_sqr();
                if dmag_sq <= tol_sq.clone() * &aa * &bb || dmag_sq.is_zero() {
                    continue;
                }
                rotated = true;
                let dmag = dmag_sq.sqrt();
                let phase = d.scale(&(sample.one() / &dmag));
                let zeta = (bb - &aa) / (sample.from_i64(2) * &dmag);
                let t = {
                    let denom = zeta.abs() + (sample.one() + zeta.clone() * &zeta).sqrt();
                    let mag = sample.one() / denom;
                    if zeta >= sample.zero() {
                        mag
                    } else {
                        -mag
                    }
                };
                let c = sample.one() / (sample.one() + t.clone() * &t).sqrt();
                let s = c.clone() * &t;
                // col_i' = c*col_i - s*conj(phase)*col_j
                // col_j' = s*phase*col_i + c*col_j
                let s_conj_phase = phase.conj().scale(&s);
                let s_phase = phase.scale(&s);
                for k in 0..m {
                    let ui = work.at(k, i).clone();
                    let vj = work.at(k, j).clone();
                    *work.at_mut(k, i) = &ui.scale(&c) - &(&s_conj_phase * &vj);
                    *work.at_mut(k, j) = &(&s_phase * &ui) + &vj.scale(&c);
                }
                for k in 0..n {
                    let ui = v.at(k, i).clone();
                    let vj = v.at(k, j).clone();
                    *v.at_mut(k, i) = &ui.scale(&c) - &(&s_conj_phase * &vj);
                    *v.at_mut(k, j) = &(&s_phase * &ui) + &vj.scale(&c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the column norms; normalize U where possible.
    let mut order: Vec<usize> = (0..n).collect();
    let mut norms = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = sample.zero();
        for i in 0..m {
            acc = acc + work.at(i, j).norm_sqr();
        }
        norms.push(acc.sqrt());
    }
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap_or(std::cmp::Ordering::Equal));

    let mut u = Matrix::zeros(m, n, &sample);
    let mut s = Vec::with_capacity(n);
    let mut vs = Matrix::zeros(n, n, &sample);
    for (pos, &j) in order.iter().enumerate() {
        s.push(norms[j].clone());
        let nonzero = !norms[j].is_zero();
        for i in 0..m {
            *u.at_mut(i, pos) = if nonzero {
                work.at(i, j).scale(&(sample.one() / &norms[j]))
            } else {
                work.at(i, j).clone()
            };
        }
        for i in 0..n {
            *vs.at_mut(i, pos) = v.at(i, j).clone();
        }
    }
    Svd { u, s, v: vs }
}

impl<T: Real> Svd<T> {
    /// Numerical rank under the threshold `tau * s_max`.
    pub fn rank(&self, tau: f64) -> usize {
        if self.s.is_empty() || self.s[0].is_zero() {
            return 0;
        }
        let cutoff = self.s[0].from_f64(tau) * &self.s[0];
        self.s.iter().take_while(|x| **x > cutoff).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn lu_solves_small_system() {
        let a = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(2.0, 0.0),
            (0, 1) => c(1.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(3.0, 0.0),
        });
        let b = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let x = solve_refined(&a, &b).unwrap();
        let ax = a.matvec(&x);
        for (l, r) in ax.iter().zip(b.iter()) {
            assert!((l - r).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_detects_singular() {
        // rows identical -> singular
        let a = Matrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let res = lu_factor(&a);
        assert!(matches!(res, Err(Error::SingularSystem)));
    }

    #[test]
    fn svd_reconstructs_matrix() {
        let a = Matrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64 + 1.0, (i as f64) - (j as f64)));
        let f = svd(&a);
        // A v_k = s_k u_k
        for k in 0..3 {
            let vk: Vec<Cplx<f64>> = (0..3).map(|i| f.v.at(i, k).clone()).collect();
            let av = a.matvec(&vk);
            for (i, got) in av.iter().enumerate() {
                let want = f.u.at(i, k).scale(&f.s[k]);
                assert!((got - &want).abs() < 1e-12, "entry {i},{k}");
            }
        }
        // V unitary
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = c(0.0, 0.0);
                for k in 0..3 {
                    acc = &acc + &(&f.v.at(k, i).conj() * f.v.at(k, j));
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((acc.re - want).abs() < 1e-13 && acc.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn svd_finds_null_space_of_wide_matrix() {
        // 2x4 matrix with rank 2: null space dimension 2.
        let a = Matrix::from_fn(2, 4, |i, j| c(((i + 1) * (j + 1)) as f64, (j as f64) * 0.5));
        let f = svd(&a);
        assert_eq!(f.s.len(), 4);
        assert!(f.s[1] > 1e-10);
        assert!(f.s[2] < 1e-12 && f.s[3] < 1e-12, "s = {:?}", f.s);
        // Null vectors satisfy A x = 0.
        for k in 2..4 {
            let xk: Vec<Cplx<f64>> = (0..4).map(|i| f.v.at(i, k).clone()).collect();
            let ax = a.matvec(&xk);
            for e in &ax {
                assert!(e.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn svd_rank_thresholding() {
        let mut a = Matrix::zeros(3, 3, &0.0);
        *a.at_mut(0, 0) = c(4.0, 0.0);
        *a.at_mut(1, 1) = c(2.0, 0.0);
        *a.at_mut(2, 2) = c(1e-18, 0.0);
        let f = svd(&a);
        assert_eq!(f.rank(1e-12), 2);
        assert_eq!(f.rank(1e-20), 3);
    }
}
