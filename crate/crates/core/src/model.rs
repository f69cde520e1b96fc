//! Channel definition, derived second moments and covariance assembly.
//!
//! The channel is `Y = X + S1 + S2 + Z` with `(X, S1, S2, Z)` zero-mean jointly
//! Gaussian, `X` correlated only with `S1` and `S2` correlated only with `Z`.
//! The auxiliary variable is `U = alpha * S1 + X`. The input is always
//! evaluated at full power, `E{X^2} = P`.

use crate::error::{Error, Result};
use crate::matrix::{CovMatrix, Var};
use crate::scalar::Scalar;

/// Unvalidated parameter record, as read from a config file or flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams<T> {
    pub p: T,
    pub q1: T,
    pub q2: T,
    pub n: T,
    pub rho_xs1: T,
    pub rho_s2z: T,
}

impl<T: Scalar> RawParams<T> {
    pub fn validate(&self) -> Result<ChannelParams<T>> {
        validate(self)
    }
}

/// Validated channel parameters.
///
/// `rho(X, S2)` and `rho(S1, S2)` are zero by definition and have no field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    p: T,
    q1: T,
    q2: T,
    n: T,
    rho_xs1: T,
    rho_s2z: T,
}

/// Checks positivity of the four variances and `|rho| <= 1` for both correlations.
///
/// `|rho| = 1` is accepted; see [`ChannelParams::is_degenerate`].
pub fn validate<T: Scalar>(raw: &RawParams<T>) -> Result<ChannelParams<T>> {
    for (name, v) in [("p", raw.p), ("q1", raw.q1), ("q2", raw.q2), ("n", raw.n)] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::NonPositiveVariance {
                name,
                value: v.to_f64_lossy(),
            });
        }
    }
    for (name, v) in [("rho_xs1", raw.rho_xs1), ("rho_s2z", raw.rho_s2z)] {
        if v.is_nan() || v.abs() > T::one() {
            return Err(Error::CorrelationOutOfRange {
                name,
                value: v.to_f64_lossy(),
            });
        }
    }
    Ok(ChannelParams {
        p: raw.p,
        q1: raw.q1,
        q2: raw.q2,
        n: raw.n,
        rho_xs1: raw.rho_xs1,
        rho_s2z: raw.rho_s2z,
    })
}

impl<T: Scalar> ChannelParams<T> {
    pub fn new(p: T, q1: T, q2: T, n: T, rho_xs1: T, rho_s2z: T) -> Result<Self> {
        validate(&RawParams {
            p,
            q1,
            q2,
            n,
            rho_xs1,
            rho_s2z,
        })
    }

    /// Unit variances, zero correlations.
    pub fn unit() -> Self {
        Self::new(T::one(), T::one(), T::one(), T::one(), T::zero(), T::zero())
            .expect("unit channel is valid")
    }

    /// Input power bound `P`.
    pub fn p(&self) -> T {
        self.p
    }
    /// Variance of the transmitter state `S1`.
    pub fn q1(&self) -> T {
        self.q1
    }
    /// Variance of the receiver state `S2`.
    pub fn q2(&self) -> T {
        self.q2
    }
    /// Noise variance `N`.
    pub fn n(&self) -> T {
        self.n
    }
    pub fn rho_xs1(&self) -> T {
        self.rho_xs1
    }
    pub fn rho_s2z(&self) -> T {
        self.rho_s2z
    }

    pub fn raw(&self) -> RawParams<T> {
        RawParams {
            p: self.p,
            q1: self.q1,
            q2: self.q2,
            n: self.n,
            rho_xs1: self.rho_xs1,
            rho_s2z: self.rho_s2z,
        }
    }

    /// `|rho_xs1| = 1`: the input is a deterministic function of `S1`.
    pub fn xs1_degenerate(&self) -> bool {
        self.rho_xs1.abs() == T::one()
    }

    /// `|rho_s2z| = 1`: the receiver observes the noise exactly.
    pub fn s2z_degenerate(&self) -> bool {
        self.rho_s2z.abs() == T::one()
    }

    pub fn is_degenerate(&self) -> bool {
        self.xs1_degenerate() || self.s2z_degenerate()
    }

    pub(crate) fn require_non_degenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateChannel)
        } else {
            Ok(())
        }
    }

    pub fn derived_moments(&self) -> DerivedMoments<T> {
        derived_moments(self)
    }
}

/// Second moments derived from [`ChannelParams`].
///
/// The names `d_q2` and `d_pq1` follow the customary labels of these two
/// determinants even though `d_q2` contains no `Q2` and `d_pq1` contains
/// neither `P` nor `Q1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedMoments<T> {
    /// `E{X S1} = sqrt(P Q1) rho_xs1`.
    pub a1: T,
    /// `E{S2 Z} = sqrt(Q2 N) rho_s2z`.
    pub l2: T,
    /// `P Q1 - a1^2`, the determinant of cov(X, S1).
    pub d_q2: T,
    /// `Q2 N - l2^2`, the determinant of cov(S2, Z).
    pub d_pq1: T,
}

pub fn derived_moments<T: Scalar>(params: &ChannelParams<T>) -> DerivedMoments<T> {
    let one = T::one();
    let a1 = (params.p * params.q1).sqrt() * params.rho_xs1;
    let l2 = (params.q2 * params.n).sqrt() * params.rho_s2z;
    // factored forms: exactly zero at |rho| = 1
    let d_q2 = params.p * params.q1 * (one - params.rho_xs1 * params.rho_xs1);
    let d_pq1 = params.q2 * params.n * (one - params.rho_s2z * params.rho_s2z);
    DerivedMoments {
        a1,
        l2,
        d_q2,
        d_pq1,
    }
}

/// Order of the variables in the base covariance.
pub const BASE_VARS: [Var; 4] = [Var::X, Var::S1, Var::S2, Var::Z];

/// Base covariance of `(X, S1, S2, Z)` together with the auxiliary coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel<T> {
    params: ChannelParams<T>,
    alpha: T,
    base: CovMatrix<T>,
}

impl<T: Scalar> JointModel<T> {
    pub fn new(params: ChannelParams<T>, alpha: T) -> Self {
        let base = base_covariance(&params);
        Self {
            params,
            alpha,
            base,
        }
    }

    /// Uses a caller-supplied base covariance over `(X, S1, S2, Z)`.
    pub fn with_base(params: ChannelParams<T>, alpha: T, base: CovMatrix<T>) -> Result<Self> {
        if base.labels() != BASE_VARS {
            return Err(Error::LabelError(format!(
                "base covariance must be over {BASE_VARS:?}, got {:?}",
                base.labels()
            )));
        }
        Ok(Self {
            params,
            alpha,
            base,
        })
    }

    pub fn params(&self) -> &ChannelParams<T> {
        &self.params
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn base(&self) -> &CovMatrix<T> {
        &self.base
    }

    /// Coefficients of each of the six variables on `(X, S1, S2, Z)`.
    pub fn linear_map(&self) -> Vec<Vec<T>> {
        let (o, z) = (T::one(), T::zero());
        vec![
            vec![o, z, z, z],
            vec![z, o, z, z],
            vec![z, z, o, z],
            vec![z, z, z, o],
            vec![o, self.alpha, z, z],
            vec![o, o, o, o],
        ]
    }

    /// Full 6x6 covariance over `(X, S1, S2, Z, U, Y)`.
    pub fn covariance(&self) -> Result<CovMatrix<T>> {
        self.base
            .linear_image(Var::ALL.to_vec(), &self.linear_map())
    }

    /// Gaussian form of the Markov chain `S2 -> S1 -> (U, X)`: the partial
    /// covariance of `S2` with `U` and with `X` given `S1` must vanish.
    pub fn check_structure(&self) -> bool {
        let Ok(cov) = self.covariance() else {
            return false;
        };
        let c = |a, b| cov.entry(a, b).expect("all six variables present");
        let var_s1 = c(Var::S1, Var::S1);
        let tol = T::lit(1e-12);
        [Var::U, Var::X].iter().all(|&w| {
            let partial = if var_s1 > T::zero() {
                c(Var::S2, w) - c(Var::S2, Var::S1) * c(Var::S1, w) / var_s1
            } else {
                c(Var::S2, w)
            };
            let scale = (c(Var::S2, Var::S2) * c(w, w)).sqrt();
            partial.abs() <= tol * scale
        })
    }
}

fn base_covariance<T: Scalar>(params: &ChannelParams<T>) -> CovMatrix<T> {
    let m = params.derived_moments();
    let z = T::zero();
    #[rustfmt::skip]
    let entries = vec![
        params.p, m.a1,      z,         z,
        m.a1,     params.q1, z,         z,
        z,        z,         params.q2, m.l2,
        z,        z,         m.l2,      params.n,
    ];
    CovMatrix::new(BASE_VARS.to_vec(), entries).expect("validated parameters give a PSD base")
}

/// Covariance of `(X, S1, S2, Z, U, Y)` for `U = alpha * S1 + X`.
pub fn joint_covariance<T: Scalar>(params: &ChannelParams<T>, alpha: T) -> Result<CovMatrix<T>> {
    JointModel::new(*params, alpha).covariance()
}
