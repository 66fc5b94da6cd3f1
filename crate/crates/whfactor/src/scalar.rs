//! Scalar abstraction shared by every numeric module.
//!
//! All algorithms are generic over [`Real`], so the same code runs in
//! binary64 and in extended precision. Constants are always derived from an
//! existing value (`x.zero()`, `x.pi()`, ...) so that precision information
//! propagates without a global context.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::Error;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Real scalar the factorization pipeline computes in.
///
/// The operator bounds let formula-heavy code read naturally; the inherent
/// methods cover what operators cannot express (precision-aware construction,
/// elementary functions, decimal I/O). The `from_*` constructors take a
/// receiver on purpose: the result inherits the receiver's precision.
#[allow(clippy::wrong_self_convention)]
pub trait Real:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Neg<Output = Self>
    + Add<Self, Output = Self>
    + Sub<Self, Output = Self>
    + Mul<Self, Output = Self>
    + Div<Self, Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// A zero carrying `digits` significant decimal digits (ignored by f64).
    fn seed(digits: u32) -> Self;

    fn from_f64(&self, x: f64) -> Self;
    fn from_i64(&self, x: i64) -> Self;
    fn parse_decimal(&self, s: &str) -> Result<Self, Error>;

    fn to_f64(&self) -> f64;
    /// Decimal string that parses back to the same value.
    fn to_decimal(&self) -> String;

    fn zero(&self) -> Self {
        self.from_i64(0)
    }
    fn one(&self) -> Self {
        self.from_i64(1)
    }

    /// `self * a + b`; fused (exactly rounded) where the backend allows.
    fn mul_add(&self, a: &Self, b: &Self) -> Self;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn powi(&self, n: i64) -> Self;
    fn pi(&self) -> Self;

    /// Unit roundoff of the backend, as f64.
    fn epsilon(&self) -> f64;
    fn is_finite(&self) -> bool;

    /// `(cos, sin)` of `2 pi m / ell`, accurate to a few units of roundoff.
    /// The default computes the angle directly; backends with coarse native
    /// precision should override with an exact-reduction scheme.
    fn unit_root(&self, m: i64, ell: i64) -> (Self, Self) {
        let phi = self.pi() * self.from_i64(2) * self.from_i64(m.rem_euclid(ell))
            / self.from_i64(ell);
        (phi.cos(), phi.sin())
    }

    fn is_zero(&self) -> bool {
        *self == self.zero()
    }
    fn max_val(&self, other: &Self) -> Self {
        if *self >= *other {
            self.clone()
        } else {
            other.clone()
        }
    }
    fn min_val(&self, other: &Self) -> Self {
        if *self <= *other {
            self.clone()
        } else {
            other.clone()
        }
    }
    fn log10(&self) -> Self {
        self.ln() / self.from_i64(10).ln()
    }
}

impl Real for f64 {
    fn seed(_digits: u32) -> Self {
        0.0
    }
    fn from_f64(&self, x: f64) -> Self {
        x
    }
    fn from_i64(&self, x: i64) -> Self {
        x as f64
    }
    fn parse_decimal(&self, s: &str) -> Result<Self, Error> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad decimal literal `{s}`")))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_decimal(&self) -> String {
        format!("{self:?}")
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Self {
        f64::mul_add(*self, *a, *b)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn powi(&self, n: i64) -> Self {
        f64::powi(*self, n as i32)
    }
    fn pi(&self) -> Self {
        std::f64::consts::PI
    }
    fn epsilon(&self) -> f64 {
        f64::EPSILON
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    /// Octant-reduced roots of unity with a double-double phase, so nodes
    /// carry ~1 ulp instead of the ~2e-15 absolute error of a rounded
    /// `2 pi m / ell` argument.
    fn unit_root(&self, m: i64, ell: i64) -> (f64, f64) {
        debug_assert!(ell > 0 && ell % 2 == 0);
        let m = m.rem_euclid(ell);
        if 2 * m > ell {
            let (c, s) = Real::unit_root(self, ell - m, ell);
            return (c, -s);
        }
        if 4 * m > ell {
            let (c, s) = Real::unit_root(self, ell / 2 - m, ell);
            return (-c, s);
        }
        // phi = 2 pi m / ell <= pi/2, evaluated in double-double.
        const PI_LO: f64 = 1.224_646_799_147_353_2e-16;
        let num = 2.0 * m as f64; // exact
        let a_hi = std::f64::consts::PI * num;
        let a_lo = std::f64::consts::PI.mul_add(num, -a_hi) + PI_LO * num;
        let d = ell as f64; // exact
        let q1 = a_hi / d;
        let q2 = (q1.mul_add(-d, a_hi) + a_lo) / d;
        let (s1, c1) = q1.sin_cos();
        (q2.mul_add(-s1, c1), q2.mul_add(c1, s1))
    }
}

/// Arbitrary-precision real built on astro-float.
///
/// Every value remembers its working precision in bits; binary operations
/// compute at the larger of the two operand precisions.
#[derive(Clone, Debug)]
pub struct BigReal {
    x: BigFloat,
    prec: usize,
}

/// 32 guard bits on top of the requested decimal digits.
fn digits_to_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

impl BigReal {
    fn wrap(&self, x: BigFloat) -> Self {
        BigReal { x, prec: self.prec }
    }
    fn join(&self, rhs: &Self) -> usize {
        self.prec.max(rhs.prec)
    }
    pub fn precision_bits(&self) -> usize {
        self.prec
    }
}

impl Display for BigReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(&self.x, f)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.x.partial_cmp(&other.x) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.partial_cmp(&other.x)
    }
}

macro_rules! bigreal_binop {
    ($trait:ident, $method:ident, $astro:ident) => {
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                let p = self.join(&rhs);
                BigReal { x: self.x.$astro(&rhs.x, p, RM), prec: p }
            }
        }
        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let p = self.join(rhs);
                BigReal { x: self.x.$astro(&rhs.x, p, RM), prec: p }
            }
        }
    };
}

bigreal_binop!(Add, add, add);
bigreal_binop!(Sub, sub, sub);
bigreal_binop!(Mul, mul, mul);
bigreal_binop!(Div, div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        let x = self.x.neg();
        BigReal { x, prec: self.prec }
    }
}

impl Real for BigReal {
    fn seed(digits: u32) -> Self {
        let prec = digits_to_bits(digits.max(1));
        BigReal { x: BigFloat::from_f64(0.0, prec), prec }
    }
    fn from_f64(&self, x: f64) -> Self {
        self.wrap(BigFloat::from_f64(x, self.prec))
    }
    fn from_i64(&self, x: i64) -> Self {
        self.wrap(BigFloat::from_i64(x, self.prec))
    }
    fn parse_decimal(&self, s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::InvalidInput("empty decimal literal".into()));
        }
        let x = CONSTS
            .with(|cc| BigFloat::parse(t, Radix::Dec, self.prec, RM, &mut cc.borrow_mut()));
        if x.is_nan() && !t.eq_ignore_ascii_case("nan") {
            return Err(Error::InvalidInput(format!("bad decimal literal `{t}`")));
        }
        Ok(self.wrap(x))
    }
    fn to_f64(&self) -> f64 {
        // Display emits full precision in scientific notation; f64 parsing
        // rounds it correctly.
        format!("{}", self.x).parse::<f64>().unwrap_or(f64::NAN)
    }
    fn to_decimal(&self) -> String {
        format!("{}", self.x)
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Self {
        let p = self.join(a).max(b.prec);
        BigReal { x: self.x.mul(&a.x, p, RM).add(&b.x, p, RM), prec: p }
    }
    fn abs(&self) -> Self {
        self.wrap(self.x.abs())
    }
    fn sqrt(&self) -> Self {
        self.wrap(self.x.sqrt(self.prec, RM))
    }
    fn ln(&self) -> Self {
        self.wrap(CONSTS.with(|cc| self.x.ln(self.prec, RM, &mut cc.borrow_mut())))
    }
    fn exp(&self) -> Self {
        self.wrap(CONSTS.with(|cc| self.x.exp(self.prec, RM, &mut cc.borrow_mut())))
    }
    fn sin(&self) -> Self {
        self.wrap(CONSTS.with(|cc| self.x.sin(self.prec, RM, &mut cc.borrow_mut())))
    }
    fn cos(&self) -> Self {
        self.wrap(CONSTS.with(|cc| self.x.cos(self.prec, RM, &mut cc.borrow_mut())))
    }
    fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            self.wrap(self.x.powi(n as usize, self.prec, RM))
        } else {
            let pos = self.x.powi((-n) as usize, self.prec, RM);
            self.wrap(BigFloat::from_i64(1, self.prec).div(&pos, self.prec, RM))
        }
    }
    fn pi(&self) -> Self {
        self.wrap(CONSTS.with(|cc| cc.borrow_mut().pi(self.prec, RM)))
    }
    fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.prec as i32)
    }
    fn is_finite(&self) -> bool {
        !self.x.is_inf() && !self.x.is_nan()
    }
}

/// Complex number over any [`Real`] backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Cplx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cplx { re, im }
    }
    pub fn from_re(re: T) -> Self {
        let im = re.zero();
        Cplx { re, im }
    }
    pub fn zero(&self) -> Self {
        Cplx { re: self.re.zero(), im: self.re.zero() }
    }
    pub fn one(&self) -> Self {
        Cplx { re: self.re.one(), im: self.re.zero() }
    }
    /// r * e^(i*phi)
    pub fn from_polar(r: &T, phi: &T) -> Self {
        Cplx { re: r.clone() * phi.cos(), im: r.clone() * phi.sin() }
    }
    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn norm_sqr(&self) -> T {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }
    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }
    pub fn scale(&self, s: &T) -> Self {
        Cplx { re: self.re.clone() * s, im: self.im.clone() * s }
    }
    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Cplx { re: self.re.clone() / &d, im: -self.im.clone() / &d }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<'b, T: Real> Add<&'b Cplx<T>> for &Cplx<T> {
    type Output = Cplx<T>;
    fn add(self, rhs: &'b Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re.clone() + &rhs.re, im: self.im.clone() + &rhs.im }
    }
}

impl<'b, T: Real> Sub<&'b Cplx<T>> for &Cplx<T> {
    type Output = Cplx<T>;
    fn sub(self, rhs: &'b Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re.clone() - &rhs.re, im: self.im.clone() - &rhs.im }
    }
}

impl<'b, T: Real> Mul<&'b Cplx<T>> for &Cplx<T> {
    type Output = Cplx<T>;
    fn mul(self, rhs: &'b Cplx<T>) -> Cplx<T> {
        Cplx {
            re: self.re.clone() * &rhs.re - self.im.clone() * &rhs.im,
            im: self.re.clone() * &rhs.im + self.im.clone() * &rhs.re,
        }
    }
}

impl<'b, T: Real> Div<&'b Cplx<T>> for &Cplx<T> {
    type Output = Cplx<T>;
    fn div(self, rhs: &'b Cplx<T>) -> Cplx<T> {
        let d = rhs.norm_sqr();
        Cplx {
            re: (self.re.clone() * &rhs.re + self.im.clone() * &rhs.im) / &d,
            im: (self.im.clone() * &rhs.re - self.re.clone() * &rhs.im) / &d,
        }
    }
}

impl<T: Real> Neg for &Cplx<T> {
    type Output = Cplx<T>;
    fn neg(self) -> Cplx<T> {
        Cplx { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// a*b with its rounding error: e = fma(a, b, -p); exact in binary64,
/// vanishing in extended precision.
pub(crate) fn two_prod<T: Real>(a: &T, b: &T) -> (T, T) {
    let p = a.clone() * b;
    let e = a.mul_add(b, &-p.clone());
    (p, e)
}

/// a+b with its rounding error (branchless Knuth two-sum).
pub(crate) fn two_sum<T: Real>(a: &T, b: &T) -> (T, T) {
    let s = a.clone() + b;
    let z = s.clone() - a;
    let e = (a.clone() - (s.clone() - &z)) + (b.clone() - &z);
    (s, e)
}

/// Complex product with a first-order error term from the four real
/// products and the two combining sums.
pub(crate) fn two_prod_complex<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> (Cplx<T>, Cplx<T>) {
    let (p1, e1) = two_prod(&a.re, &b.re);
    let (p2, e2) = two_prod(&a.im, &b.im);
    let (re, e3) = two_sum(&p1, &-p2);
    let (p3, e4) = two_prod(&a.re, &b.im);
    let (p4, e5) = two_prod(&a.im, &b.re);
    let (im, e6) = two_sum(&p3, &p4);
    let err = Cplx::new(e1 - e2 + e3, e4 + e5 + e6);
    (Cplx::new(re, im), err)
}

pub(crate) fn two_sum_complex<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> (Cplx<T>, Cplx<T>) {
    let (re, e_re) = two_sum(&a.re, &b.re);
    let (im, e_im) = two_sum(&a.im, &b.im);
    (Cplx::new(re, im), Cplx::new(e_re, e_im))
}

/// Numeric backend selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Native64,
    /// At least this many significant decimal digits.
    Extended(u32),
}

impl Precision {
    pub fn label(&self) -> String {
        match self {
            Precision::Native64 => "native".into(),
            Precision::Extended(d) => format!("ext:{d}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t == "native" || t == "native64" {
            return Ok(Precision::Native64);
        }
        if let Some(d) = t.strip_prefix("ext:") {
            let digits: u32 = d
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad precision `{s}`")))?;
            if digits < 20 {
                return Err(Error::InvalidInput(
                    "extended precision requires at least 20 digits".into(),
                ));
            }
            return Ok(Precision::Extended(digits));
        }
        Err(Error::InvalidInput(format!("bad precision `{s}`")))
    }
}

/// Value factory for one backend at one precision.
#[derive(Clone, Debug)]
pub struct PrecisionContext<T: Real> {
    proto: T,
    precision: Precision,
}

impl<T: Real> PrecisionContext<T> {
    pub fn new(precision: Precision) -> Self {
        let digits = match precision {
            Precision::Native64 => 0,
            Precision::Extended(d) => d,
        };
        PrecisionContext { proto: T::seed(digits), precision }
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }
    pub fn real_from_f64(&self, x: f64) -> T {
        self.proto.from_f64(x)
    }
    pub fn real_from_i64(&self, x: i64) -> T {
        self.proto.from_i64(x)
    }
    pub fn real_from_str(&self, s: &str) -> Result<T, Error> {
        self.proto.parse_decimal(s)
    }
    pub fn complex_from_f64(&self, re: f64, im: f64) -> Cplx<T> {
        Cplx::new(self.proto.from_f64(re), self.proto.from_f64(im))
    }
    pub fn complex_from_str(&self, re: &str, im: &str) -> Result<Cplx<T>, Error> {
        Ok(Cplx::new(self.proto.parse_decimal(re)?, self.proto.parse_decimal(im)?))
    }
}
