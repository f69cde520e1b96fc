//! Achievable rate, optimal auxiliary coefficient, converse bound and capacity.
//!
//! With `U = alpha * S1 + X` the achievable rate is
//!
//! ```text
//! R(alpha) = I(U; Y, S2) - I(U; S1)
//!          = 1/2 ln( d_q2 (Q2 (P + Q1 + 2 A1) + d_pq1) / (Q1 f(alpha)) )
//! f(alpha) = (alpha - 1)^2 Q2 d_q2 + d_pq1 (alpha^2 Q1 + 2 alpha A1 + P)
//! ```
//!
//! `f` is a convex quadratic, so the rate is maximized where `f' = 0`:
//!
//! ```text
//! alpha* = (Q2 d_q2 - A1 d_pq1) / (Q2 d_q2 + Q1 d_pq1)
//! ```
//!
//! At `alpha*` the rate meets the converse bound `I(X; Y | S1, S2)` and both
//! equal `1/2 ln(1 + P (1 - rho_xs1^2) / (N (1 - rho_s2z^2)))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gaussian_info::{conditional_mutual_info, det_u_y_s2, det_y_s2, mutual_info, var_u};
use crate::matrix::Var;
use crate::model::{joint_covariance, ChannelParams};
use crate::scalar::Scalar;

/// Information unit used for presentation. Computation is always in nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Unit {
    Nats,
    #[default]
    Bits,
}

impl Unit {
    /// Converts a value in nats to this unit.
    pub fn from_nats<T: Scalar>(self, nats: T) -> T {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / T::LN_2(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nats" | "nat" => Ok(Unit::Nats),
            "bits" | "bit" => Ok(Unit::Bits),
            other => Err(format!("unknown unit `{other}` (expected bits or nats)")),
        }
    }
}

/// A rate or capacity that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Capacity<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn in_unit(self, unit: Unit) -> Self {
        match self {
            Capacity::Finite(v) => Capacity::Finite(unit.from_nats(v)),
            Capacity::Infinite => Capacity::Infinite,
        }
    }
}

/// Rate achieved by a particular `alpha`, with its two mutual-information terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult<T> {
    /// `i_u_ys2 - i_u_s1`, nats.
    pub rate: T,
    pub alpha: T,
    /// `I(U; Y, S2)`, nats.
    pub i_u_ys2: T,
    /// `I(U; S1)`, nats.
    pub i_u_s1: T,
}

/// Capacity together with the achievability and converse values it is sandwiched by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult<T> {
    pub value: Capacity<T>,
    pub achievability: Capacity<T>,
    pub converse: Capacity<T>,
}

/// Rate of the linear auxiliary `U = alpha * S1 + X`, from the closed-form determinants.
pub fn rate_rd<T: Scalar>(params: &ChannelParams<T>, alpha: T) -> Result<RateResult<T>> {
    params.require_non_degenerate()?;
    let m = params.derived_moments();
    let vu = var_u(params, m.a1, alpha);
    let i_u_ys2 = T::half() * (vu * det_y_s2(params) / det_u_y_s2(params, alpha)).ln();
    let i_u_s1 = T::half() * (vu * params.q1() / m.d_q2).ln();
    Ok(RateResult {
        rate: i_u_ys2 - i_u_s1,
        alpha,
        i_u_ys2,
        i_u_s1,
    })
}

/// The achievable rate as a single log-ratio (the `H(U)` terms cancelled).
pub fn rate_closed_form<T: Scalar>(params: &ChannelParams<T>, alpha: T) -> Result<T> {
    params.require_non_degenerate()?;
    let m = params.derived_moments();
    let (p, q1, q2) = (params.p(), params.q1(), params.q2());
    let am1 = alpha - T::one();
    let num = m.d_q2 * (q2 * (p + q1 + T::two() * m.a1) + m.d_pq1);
    let f = am1 * am1 * q2 * m.d_q2 + m.d_pq1 * (alpha * alpha * q1 + T::two() * alpha * m.a1 + p);
    Ok(T::half() * (num / (q1 * f)).ln())
}

/// Same rate evaluated as `I(U; Y, S2) - I(U; S1)` on the assembled covariance.
pub fn rate_rd_logdet<T: Scalar>(params: &ChannelParams<T>, alpha: T) -> Result<RateResult<T>> {
    params.require_non_degenerate()?;
    let cov = joint_covariance(params, alpha)?;
    let i_u_ys2 = mutual_info(&cov, &[Var::U], &[Var::Y, Var::S2])?;
    let i_u_s1 = mutual_info(&cov, &[Var::U], &[Var::S1])?;
    Ok(RateResult {
        rate: i_u_ys2 - i_u_s1,
        alpha,
        i_u_ys2,
        i_u_s1,
    })
}

/// Unique maximizer of [`rate_rd`] over `alpha`.
pub fn alpha_star<T: Scalar>(params: &ChannelParams<T>) -> Result<T> {
    params.require_non_degenerate()?;
    let m = params.derived_moments();
    let q2d = params.q2() * m.d_q2;
    Ok((q2d - m.a1 * m.d_pq1) / (q2d + params.q1() * m.d_pq1))
}

/// Converse bound `max I(X; Y | S1, S2)`, closed form.
pub fn upper_bound<T: Scalar>(params: &ChannelParams<T>) -> Result<T> {
    if params.s2z_degenerate() {
        return Err(Error::DegenerateChannel);
    }
    let m = params.derived_moments();
    let q1d = params.q1() * m.d_pq1;
    Ok(T::half() * ((params.q2() * m.d_q2 + q1d) / q1d).ln())
}

/// Converse bound as `H(X + Z, S1, S2) - H(S1, S2) - H(Z | S2)` on the assembled covariance.
///
/// `(Y, S1, S2)` stands in for `(X + Z, S1, S2)`: the two differ by a
/// unit-determinant linear map, so their entropies are equal.
pub fn upper_bound_logdet<T: Scalar>(params: &ChannelParams<T>) -> Result<T> {
    if params.s2z_degenerate() {
        return Err(Error::DegenerateChannel);
    }
    let cov = joint_covariance(params, T::zero())?;
    let h = |vars: &[Var]| {
        cov.submatrix(vars)
            .and_then(|m| crate::gaussian_info::diff_entropy(&m))
            .map(|e| e.value)
    };
    let h_xz_s1_s2 = h(&[Var::Y, Var::S1, Var::S2])?;
    let h_s1_s2 = h(&[Var::S1, Var::S2])?;
    let h_z_given_s2 = h(&[Var::Z, Var::S2])? - h(&[Var::S2])?;
    Ok(h_xz_s1_s2 - h_s1_s2 - h_z_given_s2)
}

/// `I(X; Y | S1, S2)` directly as a conditional mutual information.
pub fn converse_conditional_mi<T: Scalar>(params: &ChannelParams<T>) -> Result<T> {
    params.require_non_degenerate()?;
    let cov = joint_covariance(params, T::zero())?;
    conditional_mutual_info(&cov, &[Var::X], &[Var::Y], &[Var::S1, Var::S2])
}

/// `1/2 ln(1 + P (1 - rho_xs1^2) / (N (1 - rho_s2z^2)))` for a non-degenerate channel.
pub fn capacity_formula<T: Scalar>(params: &ChannelParams<T>) -> Result<T> {
    params.require_non_degenerate()?;
    let one = T::one();
    let (r1, r2) = (params.rho_xs1(), params.rho_s2z());
    let snr = params.p() * (one - r1 * r1) / (params.n() * (one - r2 * r2));
    Ok(T::half() * snr.ln_1p())
}

/// Capacity of the channel with its achievability and converse values.
///
/// `|rho_s2z| = 1` gives an infinite capacity, `|rho_xs1| = 1` gives zero,
/// and both at once is indeterminate.
pub fn capacity_cd<T: Scalar>(params: &ChannelParams<T>) -> Result<CapacityResult<T>> {
    match (params.xs1_degenerate(), params.s2z_degenerate()) {
        (true, true) => Err(Error::IndeterminateCapacity),
        (false, true) => Ok(CapacityResult {
            value: Capacity::Infinite,
            achievability: Capacity::Infinite,
            converse: Capacity::Infinite,
        }),
        (true, false) => Ok(CapacityResult {
            value: Capacity::Finite(T::zero()),
            // U is a function of S1 here; the rate is zero in the limit
            achievability: Capacity::Finite(T::zero()),
            converse: Capacity::Finite(upper_bound(params)?),
        }),
        (false, false) => {
            let a = alpha_star(params)?;
            Ok(CapacityResult {
                value: Capacity::Finite(capacity_formula(params)?),
                achievability: Capacity::Finite(rate_rd(params, a)?.rate),
                converse: Capacity::Finite(upper_bound(params)?),
            })
        }
    }
}

/// Capacity of the channel with interference known only at the transmitter:
/// `1/2 ln(1 + P/N)`.
pub fn costa_capacity<T: Scalar>(p: T, n: T) -> T {
    debug_assert!(p > T::zero() && n > T::zero());
    T::half() * (p / n).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ChannelParams<f64> {
        ChannelParams::new(4.0, 1.0, 1.0, 2.0, 0.5, 0.5).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rate_worked_examples() {
        let p = worked();
        let r = rate_rd(&p, 1.0 / 3.0).unwrap();
        assert!(close(r.rate, 0.5 * 3f64.ln(), 1e-12));
        assert!(close(r.rate, 0.549_306_144_334_054_8, 1e-12));
        assert!(close(r.rate, r.i_u_ys2 - r.i_u_s1, 1e-12));
        let r1 = rate_rd(&p, 1.0).unwrap();
        assert!(close(r1.rate, 0.5 * (25.5f64 / 10.5).ln(), 1e-12));
        assert!(close(r1.rate, 0.443_651_597_500_451_4, 1e-12));
    }

    #[test]
    fn rate_routes_agree() {
        let p = worked();
        for alpha in [-2.0, -0.5, 0.0, 1.0 / 3.0, 1.0, 2.5] {
            let a = rate_rd(&p, alpha).unwrap();
            let b = rate_rd_logdet(&p, alpha).unwrap();
            let c = rate_closed_form(&p, alpha).unwrap();
            assert!(close(a.rate, b.rate, 1e-9) && close(a.rate, c, 1e-9));
            assert!(close(a.i_u_ys2, b.i_u_ys2, 1e-9) && close(a.i_u_s1, b.i_u_s1, 1e-9));
        }
    }

    #[test]
    fn unit_channel_costa_optimum() {
        let p = ChannelParams::<f64>::unit();
        assert!(close(
            rate_rd(&p, 0.5).unwrap().rate,
            0.5 * 2f64.ln(),
            1e-12
        ));
        assert_eq!(alpha_star(&p).unwrap(), 0.5);
    }

    #[test]
    fn alpha_star_examples() {
        assert!(close(alpha_star(&worked()).unwrap(), 1.0 / 3.0, 1e-15));
        let p = ChannelParams::new(7.0, 2.0, 9.0, 3.0, 0.0, 0.0).unwrap();
        assert!(close(alpha_star(&p).unwrap(), 0.7, 1e-15));
    }

    #[test]
    fn rate_rejects_degenerate() {
        let p = ChannelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(rate_rd(&p, 0.5), Err(Error::DegenerateChannel));
        assert_eq!(alpha_star(&p), Err(Error::DegenerateChannel));
    }

    #[test]
    fn capacity_examples() {
        let p = ChannelParams::new(10.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let c = capacity_cd(&p).unwrap();
        assert!(close(c.value.finite().unwrap(), 0.5 * 11f64.ln(), 1e-12));
        assert!(close(
            c.value.finite().unwrap(),
            1.198_947_636_399_185_3,
            1e-12
        ));

        for (q1, q2) in [(1.0, 1.0), (0.2, 30.0), (17.0, 0.05)] {
            let p = ChannelParams::new(4.0, q1, q2, 2.0, 0.5, 0.5).unwrap();
            let c = capacity_cd(&p).unwrap();
            for v in [c.value, c.achievability, c.converse] {
                assert!(close(v.finite().unwrap(), 0.5 * 3f64.ln(), 1e-12));
            }
        }
    }

    #[test]
    fn capacity_degenerate_limits() {
        let p = ChannelParams::new(3.0, 2.0, 1.0, 1.0, -1.0, 0.4).unwrap();
        let c = capacity_cd(&p).unwrap();
        assert_eq!(c.value, Capacity::Finite(0.0));
        assert_eq!(c.converse, Capacity::Finite(0.0));

        let p = ChannelParams::new(3.0, 2.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(capacity_cd(&p).unwrap().value.is_infinite());
        let p = ChannelParams::new(3.0, 2.0, 1.0, 1.0, 0.0, -1.0).unwrap();
        assert!(capacity_cd(&p).unwrap().value.is_infinite());

        let p = ChannelParams::new(3.0, 2.0, 1.0, 1.0, 1.0, -1.0).unwrap();
        assert_eq!(capacity_cd(&p), Err(Error::IndeterminateCapacity));
    }

    #[test]
    fn upper_bound_examples() {
        assert!(close(
            upper_bound(&worked()).unwrap(),
            0.5 * 3f64.ln(),
            1e-12
        ));
        let p = ChannelParams::new(5.0, 1.0, 1.0, 2.0, 0.0, 0.0).unwrap();
        assert!(close(upper_bound(&p).unwrap(), 0.5 * 3.5f64.ln(), 1e-12));
        let scaled = ChannelParams::new(4.0, 2.0, 3.0, 2.0, 0.5, 0.5).unwrap();
        assert!(close(
            upper_bound(&scaled).unwrap(),
            upper_bound(&worked()).unwrap(),
            1e-12
        ));
        assert!(close(
            upper_bound_logdet(&worked()).unwrap(),
            0.5 * 3f64.ln(),
            1e-9
        ));
        assert!(close(
            converse_conditional_mi(&worked()).unwrap(),
            0.5 * 3f64.ln(),
            1e-9
        ));
        let p = ChannelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(upper_bound(&p), Err(Error::DegenerateChannel));
    }

    #[test]
    fn costa_examples() {
        assert!(close(costa_capacity(2.0, 2.0), 0.5 * 2f64.ln(), 1e-15));
        assert!(close(costa_capacity(10.0, 1.0), 0.5 * 11f64.ln(), 1e-15));
        for (q1, q2) in [(0.3, 8.0), (40.0, 1.0)] {
            let p = ChannelParams::new(6.0, q1, q2, 1.5, 0.0, 0.0).unwrap();
            let c = capacity_cd(&p).unwrap().value.finite().unwrap();
            assert!(close(c, costa_capacity(6.0, 1.5), 1e-12));
        }
    }

    #[test]
    fn bits_conversion() {
        let v = Unit::Bits.from_nats(0.5 * 11f64.ln());
        assert!(close(v, 0.5 * 11f64.log2(), 1e-12));
        assert!(close(v, 1.729_715_809_318_648_7, 1e-12));
        assert_eq!(Unit::Nats.from_nats(1.25), 1.25);
        assert_eq!("NATS".parse::<Unit>().unwrap(), Unit::Nats);
    }

    #[test]
    fn single_precision_capacity() {
        let p = ChannelParams::<f32>::new(4.0, 1.0, 1.0, 2.0, 0.5, 0.5).unwrap();
        let c = capacity_cd(&p).unwrap();
        let want = 0.5 * 3f32.ln();
        for v in [c.value, c.achievability, c.converse] {
            assert!((v.finite().unwrap() - want).abs() < 1e-5);
        }
    }
}
