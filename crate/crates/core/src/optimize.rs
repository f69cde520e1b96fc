//! Derivative-free scalar maximization and capacity sweeps.

use std::fmt;
use std::str::FromStr;

use crate::capacity::{capacity_cd, rate_rd, Capacity, Unit};
use crate::error::{Error, Result};
use crate::model::{ChannelParams, RawParams};
use crate::scalar::Scalar;

/// Closed search interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidBracket {
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Iteration cap of [`maximize_scalar`].
pub const MAX_ITERATIONS: usize = 200;

/// Golden-section search for the maximum of a unimodal `f` on `bracket`.
///
/// Stops once the remaining interval has half-width `<= tol` or after
/// [`MAX_ITERATIONS`] shrink steps. Returns `(argmax, max)`.
pub fn maximize_scalar<T, F>(mut f: F, bracket: Bracket<T>, tol: T) -> Result<(T, T)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::InvalidTolerance(tol.to_f64_lossy()));
    }
    let mut eval = |x: T| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteValue {
                at: x.to_f64_lossy(),
            })
        }
    };
    // 1 / phi
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;

    for _ in 0..MAX_ITERATIONS {
        if (b - a) * T::half() <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        }
    }
    let x = (a + b) * T::half();
    let fx = eval(x)?;
    // the midpoint can lose to an interior probe by rounding on flat tops
    let best = [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |acc, p| if p.1 > acc.1 { p } else { acc });
    Ok(best)
}

/// Default search interval for the auxiliary coefficient.
pub const DEFAULT_ALPHA_HALF_WIDTH: f64 = 10.0;

/// `[-10, 10]`, widened when the a-priori bound
/// `|alpha*| <= (Q2 d_q2 + |A1| d_pq1) / (Q2 d_q2 + Q1 d_pq1)` exceeds it.
pub fn alpha_bracket<T: Scalar>(params: &ChannelParams<T>) -> Result<Bracket<T>> {
    params.require_non_degenerate()?;
    let m = params.derived_moments();
    let q2d = params.q2() * m.d_q2;
    let bound = (q2d + m.a1.abs() * m.d_pq1) / (q2d + params.q1() * m.d_pq1);
    let half = T::lit(DEFAULT_ALPHA_HALF_WIDTH).max(bound + T::one());
    Bracket::new(-half, half)
}

/// Numerically maximizes the achievable rate over `alpha`. Returns `(alpha, rate)`.
pub fn maximize_rate<T: Scalar>(params: &ChannelParams<T>, tol: T) -> Result<(T, T)> {
    let bracket = alpha_bracket(params)?;
    maximize_scalar(
        |a| {
            rate_rd(params, a)
                .map(|r| r.rate)
                .unwrap_or_else(|_| T::nan())
        },
        bracket,
        tol,
    )
}

/// Channel parameter varied by [`sweep_capacity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    RhoS2z,
    RhoXs1,
    /// `P / N`; `P` is varied with `N` held fixed.
    Snr,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::RhoS2z => "rho_s2z",
            SweepParameter::RhoXs1 => "rho_xs1",
            SweepParameter::Snr => "snr",
        }
    }

    /// `base` with this parameter set to `value`, validated.
    pub fn apply<T: Scalar>(self, base: &ChannelParams<T>, value: T) -> Result<ChannelParams<T>> {
        let mut raw: RawParams<T> = base.raw();
        match self {
            SweepParameter::RhoS2z => raw.rho_s2z = value,
            SweepParameter::RhoXs1 => raw.rho_xs1 = value,
            SweepParameter::Snr => raw.p = value * raw.n,
        }
        raw.validate()
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "rho_s2z" => Ok(SweepParameter::RhoS2z),
            "rho_xs1" => Ok(SweepParameter::RhoXs1),
            "snr" => Ok(SweepParameter::Snr),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected rho-s2z, rho-xs1 or snr)"
            )),
        }
    }
}

/// Capacity at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepValue<T> {
    Finite(T),
    Infinite,
    /// Both correlations at `|rho| = 1`.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint<T> {
    pub x: T,
    pub y: SweepValue<T>,
}

/// Capacity of `base` with `parameter` set to each grid value, in `unit`.
///
/// Invalid grid values abort the sweep with the value attached; degenerate
/// ones are emitted as [`SweepValue::Infinite`] or [`SweepValue::Indeterminate`].
pub fn sweep_capacity<T: Scalar>(
    base: &ChannelParams<T>,
    parameter: SweepParameter,
    grid: &[T],
    unit: Unit,
) -> Result<Vec<SweepPoint<T>>> {
    grid.iter()
        .map(|&x| {
            let annotate = |e: Error| Error::Sweep {
                value: x.to_f64_lossy(),
                source: Box::new(e),
            };
            let params = parameter.apply(base, x).map_err(annotate)?;
            let y = match capacity_cd(&params) {
                Ok(c) => match c.value.in_unit(unit) {
                    Capacity::Finite(v) => SweepValue::Finite(v),
                    Capacity::Infinite => SweepValue::Infinite,
                },
                Err(Error::IndeterminateCapacity) => SweepValue::Indeterminate,
                Err(e) => return Err(annotate(e)),
            };
            Ok(SweepPoint { x, y })
        })
        .collect()
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn linspace<T: Scalar>(from: T, to: T, steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let last = T::lit((steps - 1) as f64);
            (0..steps)
                .map(|i| {
                    if i == steps - 1 {
                        to
                    } else {
                        from + (to - from) * T::lit(i as f64) / last
                    }
                })
                .collect()
        }
    }
}
