//! Exact rational linear algebra.
//!
//! Everything in the crate is built on [`Rat`] (arbitrary precision rationals).
//! Floating point appears only in [`eigen`], where real eigenvalues are
//! extracted for diagnostics and for quotient dynamics.

pub mod eigen;
pub mod matrix;
pub mod poly;
pub mod subspace;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use eigen::{minors_gcd, pencil_candidates, real_eigen, PencilSpectrum, RealEigen};
pub use matrix::{Decomposition, RatMatrix};
pub use poly::{Poly, RealRoot};
pub use subspace::Subspace;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("no rank-revealing probe found after {0} attempts")]
    ProbeFailure(usize),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator or denominator: scale down by the bit length first
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses a rational in canonical form: `"p"` or `"p/q"` with `q > 1` and
/// `gcd(p, q) = 1`. Anything else (`"2/4"`, `"1/0"`, `"+3"`, `"1/1"`) is rejected.
pub fn parse_rat(s: &str) -> Result<Rat, LinAlgError> {
    let bad = || LinAlgError::BadRational(s.to_string());
    let canonical_int = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        if t == "-0" {
            return None;
        }
        t.parse::<BigInt>().ok()
    };
    match s.split_once('/') {
        None => canonical_int(s).map(Rat::from_integer).ok_or_else(bad),
        Some((p, q)) => {
            let p = canonical_int(p).ok_or_else(bad)?;
            if q.starts_with('-') {
                return Err(bad());
            }
            let q = canonical_int(q).ok_or_else(bad)?;
            if q <= BigInt::one() {
                return Err(bad());
            }
            let r = Rat::new(p.clone(), q.clone());
            if r.numer() != &p || r.denom() != &q {
                return Err(bad());
            }
            Ok(r)
        }
    }
}

/// Canonical string form, the inverse of [`parse_rat`].
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: u64) -> Rat {
    if !x.is_finite() {
        return Rat::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rat::zero();
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Scales a nonzero vector to a primitive integer vector (positive multiple).
/// Default tolerance for the floating-point fallbacks.
pub const DEFAULT_TOL: f64 = 1e-9;

pub(crate) fn primitive(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub(crate) fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}
