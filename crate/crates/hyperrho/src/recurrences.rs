//! The rational recurrences behind the path and fork weight propagations:
//!
//!   f_1(x) = x,            f_i(x) = x / (1 - f_{i-1}(x))
//!   g_1(x) = x,  g_2(x) = x / (1-x)^2,  g_i(x) = x / (1 - g_{i-1}(x))
//!
//! together with their unit roots a_i, b_i, the crossing bounds c_i, the
//! fixed points alpha_n of g_{n-4}(x) + x/(1-x)^2 = 1, and the comparison
//! functions L_i. Every root is located by plain bisection: all target
//! functions are monotone on the bracket.

use std::sync::OnceLock;

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Largest supported recurrence index.
pub const MAX_INDEX: usize = 64;

/// Default bisection tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Recurrence evaluation switches to double-double accumulation above this
/// index; 1 - f_{i-1} contracts toward 0 near the root and amplifies error.
const DD_THRESHOLD: usize = 20;

fn force_extended() -> bool {
    static FORCE: OnceLock<bool> = OnceLock::new();
    *FORCE.get_or_init(|| {
        matches!(
            std::env::var("HYPERRHO_PRECISION")
                .map(|v| v.to_ascii_lowercase())
                .as_deref(),
            Ok("extended") | Ok("dd") | Ok("double-double")
        )
    })
}

fn check_args(i: usize, alpha: f64) -> Result<()> {
    if i == 0 || i > MAX_INDEX {
        return Err(Error::InvalidParams(format!(
            "recurrence index {i} outside 1..={MAX_INDEX}"
        )));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1]")));
    }
    Ok(())
}

fn use_dd(i: usize) -> bool {
    i > DD_THRESHOLD || force_extended()
}

/// f_i(alpha). Errors if some denominator 1 - f_{j}(alpha) is nonpositive
/// before index i, i.e. alpha lies beyond a_{i-1}.
pub fn eval_f(i: usize, alpha: f64) -> Result<f64> {
    check_args(i, alpha)?;
    if use_dd(i) {
        let mut v = Dd::new(alpha);
        let x = Dd::new(alpha);
        for j in 2..=i {
            let d = Dd::new(1.0).sub(v);
            if d.hi() <= 0.0 {
                return Err(denominator_error('f', j - 1, alpha));
            }
            v = x.div(d);
        }
        Ok(v.value())
    } else {
        let mut v = alpha;
        for j in 2..=i {
            let d = 1.0 - v;
            if d <= 0.0 {
                return Err(denominator_error('f', j - 1, alpha));
            }
            v = alpha / d;
        }
        Ok(v)
    }
}

/// g_i(alpha), with the special base g_2(x) = x/(1-x)^2.
pub fn eval_g(i: usize, alpha: f64) -> Result<f64> {
    check_args(i, alpha)?;
    if i == 1 {
        return Ok(alpha);
    }
    let d0 = 1.0 - alpha;
    if d0 <= 0.0 {
        return Err(denominator_error('g', 1, alpha));
    }
    if use_dd(i) {
        let x = Dd::new(alpha);
        let d = Dd::new(d0);
        let mut v = x.div(d.mul(d));
        for j in 3..=i {
            let den = Dd::new(1.0).sub(v);
            if den.hi() <= 0.0 {
                return Err(denominator_error('g', j - 1, alpha));
            }
            v = x.div(den);
        }
        Ok(v.value())
    } else {
        let mut v = alpha / (d0 * d0);
        for j in 3..=i {
            let den = 1.0 - v;
            if den <= 0.0 {
                return Err(denominator_error('g', j - 1, alpha));
            }
            v = alpha / den;
        }
        Ok(v)
    }
}

fn denominator_error(kind: char, j: usize, alpha: f64) -> Error {
    Error::Domain(format!("1 - {kind}_{j}({alpha}) is nonpositive"))
}

/// Cached f_i / g_i values at a fixed alpha, up to the first nonpositive
/// denominator in each sequence.
#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    pub alpha: f64,
    /// f[i-1] = f_i(alpha) for i = 1..=valid_prefix_f
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub valid_prefix_f: usize,
    pub valid_prefix_g: usize,
}

impl RecurrenceTable {
    pub fn build(alpha: f64, max_index: usize) -> Result<Self> {
        check_args(max_index.max(1), alpha)?;
        let mut f = Vec::new();
        for i in 1..=max_index {
            match eval_f(i, alpha) {
                Ok(v) => f.push(v),
                Err(Error::Domain(_)) => break,
                Err(e) => return Err(e),
            }
        }
        let mut g = Vec::new();
        for i in 1..=max_index {
            match eval_g(i, alpha) {
                Ok(v) => g.push(v),
                Err(Error::Domain(_)) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(RecurrenceTable {
            alpha,
            valid_prefix_f: f.len(),
            valid_prefix_g: g.len(),
            f,
            g,
        })
    }
}

/// A bisection result: the root lies in [lo, hi], `value` is the midpoint,
/// `tol` the bracket width at termination.
#[derive(Debug, Clone, Copy)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub tol: f64,
}

/// Bisection for a monotone increasing criterion. `probe` returns false
/// while the argument is below the root and true at or past it (domain
/// blow-ups count as past).
fn bisect(mut lo: f64, mut hi: f64, tol: f64, probe: impl Fn(f64) -> bool) -> Result<RootBracket> {
    if tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance {tol} must be > 0")));
    }
    if probe(lo) {
        return Err(Error::NotBracketed(format!(
            "criterion already holds at {lo}"
        )));
    }
    if !probe(hi) {
        return Err(Error::NotBracketed(format!("criterion fails at {hi}")));
    }
    for _ in 0..256 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // f64 resolution reached
        }
        if probe(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RootBracket {
        lo,
        hi,
        value: 0.5 * (lo + hi),
        tol: hi - lo,
    })
}

/// a_i: the root of f_i(x) = 1 in (0, a_{i-1}]. a_1 = 1, a_2 = 1/2.
pub fn root_a(i: usize, tol: f64) -> Result<RootBracket> {
    check_args(i, 0.5)?;
    bisect(1e-15, 1.0, tol, |x| match eval_f(i, x) {
        Ok(v) => v >= 1.0,
        Err(_) => true,
    })
}

/// b_i: the root of g_i(x) = 1.
pub fn root_b(i: usize, tol: f64) -> Result<RootBracket> {
    check_args(i, 0.5)?;
    bisect(1e-15, 1.0, tol, |x| match eval_g(i, x) {
        Ok(v) => v >= 1.0,
        Err(_) => true,
    })
}

/// c_i = min{a_{i+1}, b_{i-1}, c_2}, which collapses to b_{i-1} for i >= 5
/// and to c_2 (the (0,1) root of 1 - 4x + 2x^2, exactly 1 - sqrt(2)/2) for
/// 2 <= i <= 4. The i = 1 case is left undefined.
pub fn root_c(i: usize, tol: f64) -> Result<RootBracket> {
    if i < 2 {
        return Err(Error::InvalidParams(
            "c_i is defined for i >= 2 only".into(),
        ));
    }
    if i <= 4 {
        bisect(0.0, 0.5, tol, |x| 1.0 - 4.0 * x + 2.0 * x * x <= 0.0)
    } else {
        root_b(i - 1, tol)
    }
}

/// alpha_n: the root of g_{n-4}(x) + x/(1-x)^2 = 1, the weight-consistency
/// fixed point of the double-fork chain with n edges. Defined for n >= 10.
pub fn solve_alpha_n(n: usize, tol: f64) -> Result<RootBracket> {
    if n < 10 {
        return Err(Error::InvalidParams(format!(
            "alpha_n requires n >= 10, got {n}"
        )));
    }
    if n - 4 > MAX_INDEX {
        return Err(Error::InvalidParams(format!(
            "alpha_n requires n - 4 <= {MAX_INDEX}"
        )));
    }
    bisect(1e-6, 0.5, tol, |x| match eval_g(n - 4, x) {
        Ok(v) => {
            let d = 1.0 - x;
            v + x / (d * d) >= 1.0
        }
        Err(_) => true,
    })
}

/// L_i(x) = f_i(x) + x/(1-2x) - (g_i(x) + x/(1-x)^2), for i >= 7 and
/// x in (0, 1/2) inside both valid prefixes.
pub fn eval_l(i: usize, x: f64) -> Result<f64> {
    if i < 7 {
        return Err(Error::InvalidParams(format!(
            "L_i is defined for i >= 7, got {i}"
        )));
    }
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::Domain(format!("L_i needs x in (0, 1/2), got {x}")));
    }
    let fi = eval_f(i, x)?;
    let gi = eval_g(i, x)?;
    let d1 = 1.0 - 2.0 * x;
    let d2 = 1.0 - x;
    Ok(fi + x / d1 - (gi + x / (d2 * d2)))
}
