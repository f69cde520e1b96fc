//! Sampling oracle for the closed-form entropies and rates.
//!
//! Draws i.i.d. rows of `(X, S1, S2, Z)` through a Cholesky factor of the base
//! covariance, forms `U` and `Y` from them, and re-evaluates every Gaussian
//! functional on the empirical covariance (plug-in estimation).
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`; standard normals
//! use the Marsaglia polar transform on `f64` uniforms. Standard errors come
//! from [`BATCHES`] contiguous, equally sized batch replicates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{alpha_star, capacity_formula, rate_rd, upper_bound};
use crate::error::{Error, Result};
use crate::gaussian_info::closed_form_entropies;
use crate::matrix::{CovMatrix, Var, SINGULAR_REL_TOL};
use crate::model::{ChannelParams, JointModel, BASE_VARS};
use crate::scalar::Scalar;

/// Number of batch replicates behind every standard error.
pub const BATCHES: usize = 20;

/// Pass threshold of [`mc_verify`], in standard errors.
pub const PASS_SIGMAS: f64 = 4.0;

/// Lower-triangular `L` with `L L^T = cov`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CholeskyFactor<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    /// `L L^T`, row-major.
    pub fn reconstruct(&self) -> Vec<T> {
        let k = self.dim;
        let mut out = vec![T::zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = (0..=i.min(j))
                    .map(|m| self.get(i, m) * self.get(j, m))
                    .sum();
            }
        }
        out
    }

    /// `L z` into `out`.
    fn apply(&self, z: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..=i).map(|m| self.get(i, m) * z[m]).sum();
        }
    }
}

/// Cholesky factorization; a pivot at or below `1e-12` times its diagonal
/// entry is rejected as not positive definite.
pub fn cholesky<T: Scalar>(cov: &CovMatrix<T>) -> Result<CholeskyFactor<T>> {
    let k = cov.dim();
    let mut l = vec![T::zero(); k * k];
    for j in 0..k {
        let d = cov.get(j, j) - (0..j).map(|m| l[j * k + m] * l[j * k + m]).sum::<T>();
        if d.is_nan() || d <= T::lit(SINGULAR_REL_TOL) * cov.get(j, j) {
            return Err(Error::NotPositiveDefinite);
        }
        let ljj = d.sqrt();
        l[j * k + j] = ljj;
        for i in (j + 1)..k {
            let s = cov.get(i, j) - (0..j).map(|m| l[i * k + m] * l[j * k + m]).sum::<T>();
            l[i * k + j] = s / ljj;
        }
    }
    Ok(CholeskyFactor { dim: k, entries: l })
}

/// Standard normal variates by the Marsaglia polar method.
#[derive(Debug, Clone)]
pub struct NormalSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_f64(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.gen::<f64>() - 1.0;
            let v = 2.0 * self.rng.gen::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

/// `n` i.i.d. draws of a set of variables, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock<T> {
    labels: Vec<Var>,
    data: Vec<T>,
    seed: u64,
    n: usize,
}

impl<T: Scalar> SampleBlock<T> {
    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Row-major `n x k` data.
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        let k = self.labels.len();
        &self.data[i * k..(i + 1) * k]
    }

    pub fn column(&self, v: Var) -> Option<impl Iterator<Item = T> + '_> {
        let k = self.labels.len();
        let j = self.labels.iter().position(|&l| l == v)?;
        Some(self.data.iter().skip(j).step_by(k).copied())
    }

    /// The same draws of `(X, S1, S2, Z)` with `U` rebuilt as `alpha * S1 + X`.
    pub fn with_alpha(&self, alpha: T) -> Result<Self> {
        let idx = |v: Var| {
            self.labels
                .iter()
                .position(|&l| l == v)
                .ok_or_else(|| Error::LabelError(format!("block has no `{v}` column")))
        };
        let (ix, is1, iu) = (idx(Var::X)?, idx(Var::S1)?, idx(Var::U)?);
        let mut out = self.clone();
        let k = self.labels.len();
        for row in out.data.chunks_exact_mut(k) {
            row[iu] = alpha * row[is1] + row[ix];
        }
        Ok(out)
    }

    fn moments(&self, rows: std::ops::Range<usize>) -> Moments<T> {
        let k = self.labels.len();
        let mut m = Moments::new(k);
        for i in rows {
            m.push(self.row(i));
        }
        m
    }
}

/// Sums and sums of products; merging is order-independent.
#[derive(Debug, Clone)]
struct Moments<T> {
    k: usize,
    count: usize,
    sum: Vec<T>,
    sum_xy: Vec<T>,
}

impl<T: Scalar> Moments<T> {
    fn new(k: usize) -> Self {
        Self {
            k,
            count: 0,
            sum: vec![T::zero(); k],
            sum_xy: vec![T::zero(); k * k],
        }
    }

    fn push(&mut self, row: &[T]) {
        self.count += 1;
        for i in 0..self.k {
            self.sum[i] += row[i];
            for j in i..self.k {
                self.sum_xy[i * self.k + j] += row[i] * row[j];
            }
        }
    }

    fn merge(&mut self, other: &Self) {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += *b;
        }
        for (a, b) in self.sum_xy.iter_mut().zip(&other.sum_xy) {
            *a += *b;
        }
    }

    /// Unbiased sample covariance.
    fn covariance(&self, labels: &[Var]) -> Result<CovMatrix<T>> {
        let n = T::lit(self.count as f64);
        let k = self.k;
        CovMatrix::from_upper_fn(labels.to_vec(), |i, j| {
            (self.sum_xy[i * k + j] - self.sum[i] * self.sum[j] / n) / (n - T::one())
        })
        .map_err(|_| Error::SingularEmpiricalCovariance {
            labels: labels.to_vec(),
        })
    }
}

/// Draws `n` rows of `(X, S1, S2, Z, U, Y)` for the given channel and `alpha`.
pub fn sample<T: Scalar>(
    params: &ChannelParams<T>,
    alpha: T,
    n: usize,
    seed: u64,
) -> Result<SampleBlock<T>> {
    if n < 2 {
        return Err(Error::InsufficientSamples {
            required: 2,
            got: n,
        });
    }
    let model = JointModel::new(*params, alpha);
    let factor = cholesky(model.base())?;
    let mut normals = NormalSource::new(seed);
    let labels = Var::ALL.to_vec();
    let k = labels.len();
    let mut data = Vec::with_capacity(n * k);
    let mut z = [T::zero(); 4];
    let mut base = [T::zero(); 4];
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = T::lit(normals.next_f64());
        }
        factor.apply(&z, &mut base);
        let [x, s1, s2, nz] = base;
        data.extend_from_slice(&[x, s1, s2, nz, alpha * s1 + x, x + s1 + s2 + nz]);
    }
    debug_assert_eq!(BASE_VARS, [Var::X, Var::S1, Var::S2, Var::Z]);
    Ok(SampleBlock {
        labels,
        data,
        seed,
        n,
    })
}

/// Plug-in estimate with its batch-replicate standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    /// Estimate on the whole block, nats.
    pub value: T,
    pub n: usize,
    /// Standard deviation of the batch estimates over `sqrt(BATCHES)`, nats.
    pub std_error: T,
}

/// Evaluates `f` on the empirical covariance of the whole block and of each batch.
///
/// `k` is the number of variables `f` touches; at least `10 k^2` rows are required.
pub fn mc_functional<T, F>(block: &SampleBlock<T>, k: usize, f: F) -> Result<McEstimate<T>>
where
    T: Scalar,
    F: Fn(&CovMatrix<T>) -> Result<T>,
{
    let required = (10 * k * k).max(BATCHES * (k + 2));
    if block.n < required {
        return Err(Error::InsufficientSamples {
            required,
            got: block.n,
        });
    }
    let eval = |cov: &CovMatrix<T>| {
        f(cov).map_err(|e| match e {
            Error::SingularCovariance { labels, .. } => {
                Error::SingularEmpiricalCovariance { labels }
            }
            other => other,
        })
    };
    let size = block.n / BATCHES;
    let mut total = Moments::new(block.labels.len());
    let mut batch_values = Vec::with_capacity(BATCHES);
    for b in 0..BATCHES {
        let end = if b + 1 == BATCHES {
            block.n
        } else {
            (b + 1) * size
        };
        let m = block.moments(b * size..end);
        batch_values.push(eval(&m.covariance(&block.labels)?)?);
        total.merge(&m);
    }
    let value = eval(&total.covariance(&block.labels)?)?;

    let bn = T::lit(BATCHES as f64);
    let mean = batch_values.iter().copied().sum::<T>() / bn;
    let var = batch_values
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<T>()
        / (bn - T::one());
    Ok(McEstimate {
        value,
        n: block.n,
        std_error: (var / bn).sqrt(),
    })
}

fn entropy_of<T: Scalar>(cov: &CovMatrix<T>, vars: &[Var]) -> Result<T> {
    let sub = cov.submatrix(vars)?;
    crate::gaussian_info::diff_entropy(&sub).map(|h| h.value)
}

/// Plug-in differential entropy of `vars`.
pub fn mc_entropy<T: Scalar>(block: &SampleBlock<T>, vars: &[Var]) -> Result<McEstimate<T>> {
    mc_functional(block, vars.len(), |cov| entropy_of(cov, vars))
}

/// Plug-in `I(A; B)`.
pub fn mc_mutual_info<T: Scalar>(
    block: &SampleBlock<T>,
    set_a: &[Var],
    set_b: &[Var],
) -> Result<McEstimate<T>> {
    mc_functional(block, set_a.len() + set_b.len(), |cov| {
        crate::gaussian_info::mutual_info(cov, set_a, set_b)
    })
}

/// Plug-in `I(A; B | C)`.
pub fn mc_conditional_mutual_info<T: Scalar>(
    block: &SampleBlock<T>,
    set_a: &[Var],
    set_b: &[Var],
    given: &[Var],
) -> Result<McEstimate<T>> {
    mc_functional(block, set_a.len() + set_b.len() + given.len(), |cov| {
        crate::gaussian_info::conditional_mutual_info(cov, set_a, set_b, given)
    })
}

fn rate_functional<T: Scalar>(cov: &CovMatrix<T>) -> Result<T> {
    use crate::gaussian_info::mutual_info;
    Ok(mutual_info(cov, &[Var::U], &[Var::Y, Var::S2])? - mutual_info(cov, &[Var::U], &[Var::S1])?)
}

/// `H(X + Z, S1, S2) - H(S1, S2) - H(Z | S2)`, with `(Y, S1, S2)` standing in
/// for `(X + Z, S1, S2)`.
fn converse_functional<T: Scalar>(cov: &CovMatrix<T>) -> Result<T> {
    Ok(entropy_of(cov, &[Var::Y, Var::S1, Var::S2])?
        - entropy_of(cov, &[Var::S1, Var::S2])?
        - entropy_of(cov, &[Var::Z, Var::S2])?
        + entropy_of(cov, &[Var::S2])?)
}

/// One row of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationCheck<T> {
    pub name: &'static str,
    pub closed_form: T,
    /// `Err` when the block is too small or an empirical covariance is singular.
    pub estimate: Result<McEstimate<T>>,
    pub pass: bool,
}

impl<T: Scalar> VerificationCheck<T> {
    fn new(name: &'static str, closed_form: T, estimate: Result<McEstimate<T>>) -> Self {
        let pass = match &estimate {
            Ok(e) => (closed_form - e.value).abs() <= T::lit(PASS_SIGMAS) * e.std_error,
            Err(_) => false,
        };
        Self {
            name,
            closed_form,
            estimate,
            pass,
        }
    }

    /// `|closed_form - estimate| / std_error`.
    pub fn z_score(&self) -> Option<T> {
        self.estimate
            .as_ref()
            .ok()
            .map(|e| (self.closed_form - e.value).abs() / e.std_error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub params: ChannelParams<T>,
    pub alpha: T,
    pub alpha_star: T,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<VerificationCheck<T>>,
}

impl<T: Scalar> VerificationReport<T> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Compares every closed-form quantity with its Monte Carlo estimate.
///
/// Checks: the seven closed-form entropies, `I(U; Y, S2)`, `I(U; S1)` and the
/// rate at `alpha`, the capacity (estimated as the rate at `alpha*` on the
/// same draws), and the converse bound (estimated through the entropy
/// decomposition of `I(X; Y | S1, S2)`). A check passes when the two agree
/// within [`PASS_SIGMAS`] standard errors; a check whose estimate cannot be
/// formed (too few samples) fails.
pub fn mc_verify<T: Scalar>(
    params: &ChannelParams<T>,
    alpha: T,
    n: usize,
    seed: u64,
) -> Result<VerificationReport<T>> {
    params.require_non_degenerate()?;
    let block = sample(params, alpha, n, seed)?;
    let a_star = alpha_star(params)?;
    let star_block = block.with_alpha(a_star)?;
    let table = closed_form_entropies(params, alpha)?;
    let rate = rate_rd(params, alpha)?;

    let mut checks: Vec<_> = table
        .entries()
        .into_iter()
        .map(|(name, value, vars)| VerificationCheck::new(name, value, mc_entropy(&block, vars)))
        .collect();
    checks.extend([
        VerificationCheck::new(
            "i_u_ys2",
            rate.i_u_ys2,
            mc_mutual_info(&block, &[Var::U], &[Var::Y, Var::S2]),
        ),
        VerificationCheck::new(
            "i_u_s1",
            rate.i_u_s1,
            mc_mutual_info(&block, &[Var::U], &[Var::S1]),
        ),
        VerificationCheck::new("rate", rate.rate, mc_functional(&block, 4, rate_functional)),
        VerificationCheck::new(
            "capacity",
            capacity_formula(params)?,
            mc_functional(&star_block, 4, rate_functional),
        ),
        VerificationCheck::new(
            "upper_bound",
            upper_bound(params)?,
            mc_functional(&block, 4, converse_functional),
        ),
    ]);
    Ok(VerificationReport {
        params: *params,
        alpha,
        alpha_star: a_star,
        n,
        seed,
        checks,
    })
}

/// Plug-in `I(U; Y, S2) - I(U; S1)` with batch standard error.
pub fn mc_rate<T: Scalar>(block: &SampleBlock<T>) -> Result<McEstimate<T>> {
    mc_functional(block, 4, rate_functional)
}

/// Plug-in `I(X; Y | S1, S2)` through `H(X + Z, S1, S2) - H(S1, S2) - H(Z | S2)`.
pub fn mc_converse<T: Scalar>(block: &SampleBlock<T>) -> Result<McEstimate<T>> {
    mc_functional(block, 4, converse_functional)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_identity_and_hand_case() {
        let id = CovMatrix::new(vec![Var::X, Var::S1], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let l = cholesky(&id).unwrap();
        assert_eq!(l.reconstruct(), vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!((l.get(0, 0), l.get(1, 0), l.get(1, 1)), (1.0, 0.0, 1.0));

        let a = CovMatrix::new(vec![Var::X, Var::S1], vec![4.0, 2.0, 2.0, 2.0]).unwrap();
        let l = cholesky(&a).unwrap();
        assert_eq!(
            (l.get(0, 0), l.get(0, 1), l.get(1, 0), l.get(1, 1)),
            (2.0, 0.0, 1.0, 1.0)
        );
    }

    #[test]
    fn cholesky_rejects_singular() {
        let a = CovMatrix::new(vec![Var::X, Var::S1], vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(cholesky(&a), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn polar_normals_have_unit_moments() {
        let mut src = NormalSource::new(11);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| src.next_f64()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 4.0 * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn sample_is_deterministic_and_linear() {
        let p = ChannelParams::new(4.0, 1.0, 1.0, 2.0, 0.5, 0.5).unwrap();
        let a = sample(&p, 0.3, 1000, 5).unwrap();
        let b = sample(&p, 0.3, 1000, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample(&p, 0.3, 1000, 6).unwrap());
        for i in 0..a.n() {
            let r = a.row(i);
            assert_eq!(r[4], 0.3 * r[1] + r[0]);
            assert_eq!(r[5], r[0] + r[1] + r[2] + r[3]);
        }
    }

    #[test]
    fn sample_rejects_degenerate_and_tiny_n() {
        let p = ChannelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(sample(&p, 0.5, 100, 1), Err(Error::NotPositiveDefinite));
        let p = ChannelParams::<f64>::unit();
        assert!(matches!(
            sample(&p, 0.5, 1, 1),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn with_alpha_rebuilds_u() {
        let p = ChannelParams::<f64>::unit();
        let a = sample(&p, 0.0, 50, 3).unwrap().with_alpha(2.0).unwrap();
        for i in 0..a.n() {
            let r = a.row(i);
            assert_eq!(r[4], 2.0 * r[1] + r[0]);
        }
    }

    #[test]
    fn mc_requires_enough_samples() {
        let p = ChannelParams::<f64>::unit();
        let b = sample(&p, 0.5, 30, 3).unwrap();
        assert!(matches!(
            mc_mutual_info(&b, &[Var::U], &[Var::Y, Var::S2]),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn independent_pair_estimate_near_zero() {
        let p = ChannelParams::<f64>::unit();
        let b = sample(&p, 0.5, 100_000, 9).unwrap();
        let e = mc_mutual_info(&b, &[Var::X], &[Var::S2]).unwrap();
        assert!(e.std_error > 0.0);
        assert!(e.value.abs() <= 3.0 * e.std_error, "{e:?}");
    }
}
