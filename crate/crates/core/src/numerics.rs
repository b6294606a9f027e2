//! Scalar kernels that keep large magnitudes in sign/log form.
//!
//! Photon numbers in the hundreds or thousands push factorials, powers of the
//! displacement and Hermite values far outside the range of `f64`. Everything
//! here returns either a plain log or a [`LogScaled`] so that callers can sum
//! logarithms and exponentiate once at the end.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg};
use std::sync::OnceLock;

use crate::error::DomainError;

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// `sign == 0` represents an exact zero and the magnitude is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    sign: i8,
    log_magnitude: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: LogScaled = LogScaled {
        sign: 1,
        log_magnitude: 0.0,
    };

    /// Builds a value from an explicit sign and natural-log magnitude.
    ///
    /// Any positive sign maps to `+1`, any negative to `-1`.
    pub fn new(sign: i32, log_magnitude: f64) -> Self {
        match sign.signum() {
            0 => Self::ZERO,
            s => LogScaled {
                sign: s as i8,
                log_magnitude,
            },
        }
    }

    pub fn from_f64(value: f64) -> Self {
        if value == 0.0 {
            Self::ZERO
        } else {
            LogScaled {
                sign: if value > 0.0 { 1 } else { -1 },
                log_magnitude: value.abs().ln(),
            }
        }
    }

    /// `mantissa * exp(log_scale)`, used by the recurrences below.
    fn from_scaled(mantissa: f64, log_scale: f64) -> Self {
        let mut v = Self::from_f64(mantissa);
        if v.sign != 0 {
            v.log_magnitude += log_scale;
        }
        v
    }

    pub fn sign(self) -> i32 {
        i32::from(self.sign)
    }

    pub fn log_magnitude(self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    /// Square of the value: always non-negative.
    pub fn squared(self) -> Self {
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogScaled {
            sign: 1,
            log_magnitude: 2.0 * self.log_magnitude,
        }
    }

    /// Sum of signed log-scaled terms. The terms are rescaled by the largest
    /// magnitude and accumulated with Neumaier compensation.
    pub fn sum(terms: &[LogScaled]) -> Self {
        let max_log = terms
            .iter()
            .filter(|t| t.sign != 0)
            .map(|t| t.log_magnitude)
            .fold(f64::NEG_INFINITY, f64::max);
        if max_log == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let mut acc = 0.0_f64;
        let mut comp = 0.0_f64;
        for t in terms.iter().filter(|t| t.sign != 0) {
            let x = f64::from(t.sign) * (t.log_magnitude - max_log).exp();
            let s = acc + x;
            if acc.abs() >= x.abs() {
                comp += (acc - s) + x;
            } else {
                comp += (x - s) + acc;
            }
            acc = s;
        }
        Self::from_scaled(acc + comp, max_log)
    }
}

impl Neg for LogScaled {
    type Output = Self;

    fn neg(self) -> Self {
        LogScaled {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }
}

impl Mul for LogScaled {
    type Output = Self;

    fn mul(self, other: LogScaled) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        LogScaled {
            sign: self.sign * other.sign,
            log_magnitude: self.log_magnitude + other.log_magnitude,
        }
    }
}

const TABLE_LEN: usize = 10_001;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(TABLE_LEN);
        table.push(0.0);
        // compensated running sum of ln k
        let (mut acc, mut comp) = (0.0_f64, 0.0_f64);
        for k in 1..TABLE_LEN {
            let y = (k as f64).ln() - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            table.push(acc);
        }
        table
    })
}

/// Stirling series for ln(k!), accurate to rounding for k above a few hundred.
pub(crate) fn log_factorial_stirling(k: u64) -> f64 {
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

/// Natural log of `k!`.
pub fn log_factorial(k: u64) -> f64 {
    match usize::try_from(k) {
        Ok(i) if i < TABLE_LEN => log_factorial_table()[i],
        _ => log_factorial_stirling(k),
    }
}

/// ln C(n, k) for k ≤ n.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Rescales the pair so the larger magnitude is one, folding the factor into
/// `log_scale`.
#[inline]
fn renormalize(prev: &mut f64, cur: &mut f64, log_scale: &mut f64) {
    let s = prev.abs().max(cur.abs());
    if s > 0.0 && s != 1.0 {
        *prev /= s;
        *cur /= s;
        *log_scale += s.ln();
    }
}

/// Physicists' Hermite polynomial `H_n(x)` from the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`, renormalized at every step.
pub fn hermite(n: u32, x: f64) -> LogScaled {
    if n == 0 {
        return LogScaled::ONE;
    }
    let mut prev = 1.0_f64;
    let mut cur = 2.0 * x;
    let mut log_scale = 0.0_f64;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
        renormalize(&mut prev, &mut cur, &mut log_scale);
    }
    LogScaled::from_scaled(cur, log_scale)
}

/// `H_0(x), …, H_{n_max}(x)` in one pass of the same recurrence.
pub fn hermite_sequence(n_max: u32, x: f64) -> Vec<LogScaled> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(LogScaled::ONE);
    if n_max == 0 {
        return out;
    }
    let mut prev = 1.0_f64;
    let mut cur = 2.0 * x;
    let mut log_scale = 0.0_f64;
    out.push(LogScaled::from_scaled(cur, log_scale));
    for k in 1..n_max {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
        renormalize(&mut prev, &mut cur, &mut log_scale);
        out.push(LogScaled::from_scaled(cur, log_scale));
    }
    out
}

/// Associated Laguerre polynomial `L_n^{(k)}(x)` via
/// `(j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}`.
pub fn laguerre_assoc(n: u32, k: u32, x: f64) -> LogScaled {
    if n == 0 {
        return LogScaled::ONE;
    }
    let k = f64::from(k);
    let mut prev = 1.0_f64;
    let mut cur = 1.0 + k - x;
    let mut log_scale = 0.0_f64;
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        renormalize(&mut prev, &mut cur, &mut log_scale);
    }
    LogScaled::from_scaled(cur, log_scale)
}

/// Unevaluated sum `hi + lo` carrying roughly 106 bits of significand.
///
/// Only what the cancellation-prone validation sums need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
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

    pub fn mul_f64(self, b: f64) -> Self {
        self * Self::from_f64(b)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let (s, e) = Self::two_sum(self.hi, other.hi);
        let (t, f) = Self::two_sum(self.lo, other.lo);
        let (s, e) = Self::quick_two_sum(s, e + t);
        let (hi, lo) = Self::quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let (p, e) = Self::two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = Self::quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self + -other.mul_f64(q1);
        let q2 = r.hi / other.hi;
        let r = r + -other.mul_f64(q2);
        let q3 = r.hi / other.hi;
        let (hi, lo) = Self::quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + Self::from_f64(q3)
    }
}

/// Angle of the point `(x, y)` in `(-π, π]`.
pub fn full_angle(y: f64, x: f64) -> Result<f64, DomainError> {
    if x == 0.0 && y == 0.0 {
        return Err(DomainError::AngleAtOrigin);
    }
    let a = y.atan2(x);
    // atan2(-0.0, x<0) gives -π
    Ok(if a == -PI { PI } else { a })
}

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(phi: f64) -> f64 {
    let t = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if t <= -PI {
        PI
    } else {
        t
    }
}
