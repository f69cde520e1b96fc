//! Differential entropy and mutual information of jointly Gaussian variables.
//!
//! Two independent routes are provided: the generic log-determinant of a
//! labeled covariance, and closed-form expressions in the channel parameters
//! ([`closed_form_entropies`]). All values are in nats.

use crate::error::{Error, Result};
use crate::matrix::{CovMatrix, Var};
use crate::model::ChannelParams;
use crate::scalar::Scalar;

/// Differential entropy of a set of variables, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyValue<T> {
    pub value: T,
    pub variable_set: Vec<Var>,
}

/// `1/2 ln((2 pi e)^k det)`.
pub fn gaussian_entropy<T: Scalar>(k: usize, det: T) -> T {
    T::half() * (T::lit(k as f64) * T::two_pi_e().ln() + det.ln())
}

fn checked_det<T: Scalar>(cov: &CovMatrix<T>) -> Result<T> {
    let det = cov.determinant();
    if cov.is_singular() {
        return Err(Error::SingularCovariance {
            labels: cov.labels().to_vec(),
            det: det.to_f64_lossy(),
        });
    }
    Ok(det)
}

/// `1/2 ln((2 pi e)^k det(cov))`; errors when `cov` is numerically singular.
pub fn diff_entropy<T: Scalar>(cov: &CovMatrix<T>) -> Result<EntropyValue<T>> {
    let det = checked_det(cov)?;
    Ok(EntropyValue {
        value: gaussian_entropy(cov.dim(), det),
        variable_set: cov.labels().to_vec(),
    })
}

fn check_disjoint(sets: &[&[Var]]) -> Result<()> {
    let mut seen: Vec<Var> = Vec::new();
    for set in sets {
        if set.is_empty() {
            return Err(Error::LabelError("empty variable set".into()));
        }
        for v in *set {
            if seen.contains(v) {
                return Err(Error::LabelError(format!(
                    "`{v}` appears in more than one set"
                )));
            }
            seen.push(*v);
        }
    }
    Ok(())
}

fn concat(sets: &[&[Var]]) -> Vec<Var> {
    sets.iter().flat_map(|s| s.iter().copied()).collect()
}

/// `I(A; B) = H(A) + H(B) - H(A, B)` in nats.
///
/// Returns exactly zero when the cross-covariance block is zero.
pub fn mutual_info<T: Scalar>(cov: &CovMatrix<T>, set_a: &[Var], set_b: &[Var]) -> Result<T> {
    check_disjoint(&[set_a, set_b])?;
    let ca = cov.submatrix(set_a)?;
    let cb = cov.submatrix(set_b)?;
    let cab = cov.submatrix(&concat(&[set_a, set_b]))?;
    let det_a = checked_det(&ca)?;
    let det_b = checked_det(&cb)?;
    let det_ab = checked_det(&cab)?;

    let k = set_a.len();
    let cross_zero = (0..k).all(|i| (k..cab.dim()).all(|j| cab.get(i, j) == T::zero()));
    if cross_zero {
        return Ok(T::zero());
    }
    Ok(T::half() * (det_a * det_b / det_ab).ln())
}

/// `I(A; B | C) = H(A, C) + H(B, C) - H(A, B, C) - H(C)` in nats.
pub fn conditional_mutual_info<T: Scalar>(
    cov: &CovMatrix<T>,
    set_a: &[Var],
    set_b: &[Var],
    given: &[Var],
) -> Result<T> {
    check_disjoint(&[set_a, set_b, given])?;
    let det = |vars: Vec<Var>| cov.submatrix(&vars).and_then(|m| checked_det(&m));
    let d_ac = det(concat(&[set_a, given]))?;
    let d_bc = det(concat(&[set_b, given]))?;
    let d_abc = det(concat(&[set_a, set_b, given]))?;
    let d_c = det(given.to_vec())?;
    Ok(T::half() * ((d_ac / d_abc) * (d_bc / d_c)).ln())
}

/// Closed-form entropies of the channel at full input power, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTable<T> {
    /// `H(Y, S2)`
    pub h_y_s2: T,
    /// `H(U, Y, S2)`
    pub h_u_y_s2: T,
    /// `H(S1)`
    pub h_s1: T,
    /// `H(U, S1)`
    pub h_u_s1: T,
    /// `H(X + Z, S1, S2)`
    pub h_x_plus_z_s1_s2: T,
    /// `H(S1, S2)`
    pub h_s1_s2: T,
    /// `H(Z, S2)`
    pub h_z_s2: T,
}

impl<T: Scalar> EntropyTable<T> {
    /// Each entry with its name and the variables whose joint covariance
    /// determines it. `X + Z` is represented by `Y`, since
    /// `(X + Z, S1, S2)` and `(Y, S1, S2)` differ by a unit-determinant map.
    pub fn entries(&self) -> [(&'static str, T, &'static [Var]); 7] {
        [
            ("h_y_s2", self.h_y_s2, &[Var::Y, Var::S2]),
            ("h_u_y_s2", self.h_u_y_s2, &[Var::U, Var::Y, Var::S2]),
            ("h_s1", self.h_s1, &[Var::S1]),
            ("h_u_s1", self.h_u_s1, &[Var::U, Var::S1]),
            (
                "h_x_plus_z_s1_s2",
                self.h_x_plus_z_s1_s2,
                &[Var::Y, Var::S1, Var::S2],
            ),
            ("h_s1_s2", self.h_s1_s2, &[Var::S1, Var::S2]),
            ("h_z_s2", self.h_z_s2, &[Var::Z, Var::S2]),
        ]
    }
}

/// Quadratic `alpha^2 Q1 + 2 alpha A1 + P`, the variance of `U`.
pub(crate) fn var_u<T: Scalar>(params: &ChannelParams<T>, a1: T, alpha: T) -> T {
    alpha * alpha * params.q1() + T::two() * alpha * a1 + params.p()
}

/// `det cov(U, Y, S2) = d_pq1 Var(U) + (alpha - 1)^2 Q2 d_q2`.
pub(crate) fn det_u_y_s2<T: Scalar>(params: &ChannelParams<T>, alpha: T) -> T {
    let m = params.derived_moments();
    let am1 = alpha - T::one();
    m.d_pq1 * var_u(params, m.a1, alpha) + am1 * am1 * params.q2() * m.d_q2
}

/// `det cov(Y, S2) = Q2 (P + Q1 + 2 A1) + d_pq1`.
pub(crate) fn det_y_s2<T: Scalar>(params: &ChannelParams<T>) -> T {
    let m = params.derived_moments();
    params.q2() * (params.p() + params.q1() + T::two() * m.a1) + m.d_pq1
}

/// Evaluates the seven closed-form entropies for `U = alpha * S1 + X`.
pub fn closed_form_entropies<T: Scalar>(
    params: &ChannelParams<T>,
    alpha: T,
) -> Result<EntropyTable<T>> {
    params.require_non_degenerate()?;
    let m = params.derived_moments();
    let (q1, q2) = (params.q1(), params.q2());
    Ok(EntropyTable {
        h_y_s2: gaussian_entropy(2, det_y_s2(params)),
        h_u_y_s2: gaussian_entropy(3, det_u_y_s2(params, alpha)),
        h_s1: gaussian_entropy(1, q1),
        h_u_s1: gaussian_entropy(2, m.d_q2),
        h_x_plus_z_s1_s2: gaussian_entropy(3, q2 * m.d_q2 + q1 * m.d_pq1),
        h_s1_s2: gaussian_entropy(2, q1 * q2),
        h_z_s2: gaussian_entropy(2, m.d_pq1),
    })
}
