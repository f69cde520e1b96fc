//! Labeled covariance matrices over the channel's scalar variables.
//!
//! Dimensions never exceed six, so the dense routines here (LU determinant,
//! cyclic Jacobi eigenvalues) are written out directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A scalar random variable of the channel model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Channel input.
    X,
    /// State known at the transmitter.
    S1,
    /// State known at the receiver.
    S2,
    /// Additive noise.
    Z,
    /// Auxiliary variable `alpha * S1 + X`.
    U,
    /// Channel output `X + S1 + S2 + Z`.
    Y,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::S1, Var::S2, Var::Z, Var::U, Var::Y];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "X",
            Var::S1 => "S1",
            Var::S2 => "S2",
            Var::Z => "Z",
            Var::U => "U",
            Var::Y => "Y",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .iter()
            .copied()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::LabelError(format!("unknown variable `{s}`")))
    }
}

/// Symmetric positive-semidefinite matrix whose rows and columns are named by [`Var`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    labels: Vec<Var>,
    // row-major, dim * dim
    entries: Vec<T>,
}

/// Relative tolerance of the PSD check: `min eigenvalue >= -PSD_REL_TOL * trace`.
pub const PSD_REL_TOL: f64 = 1e-9;

/// [`PSD_REL_TOL`], raised to a few ulps for scalars coarser than `f64`.
pub fn psd_tolerance<T: Scalar>() -> T {
    T::lit(PSD_REL_TOL).max(T::lit(64.0) * T::epsilon())
}

/// A determinant at or below `SINGULAR_REL_TOL * prod(diag)` is treated as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

impl<T: Scalar> CovMatrix<T> {
    /// Builds a covariance matrix from row-major entries, checking symmetry,
    /// nonnegative diagonal and positive semidefiniteness.
    pub fn new(labels: Vec<Var>, entries: Vec<T>) -> Result<Self> {
        let m = Self::new_unchecked_psd(labels, entries)?;
        let min = m.min_eigenvalue();
        if min < -psd_tolerance::<T>() * m.trace() {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(m)
    }

    /// Builds a symmetric matrix from the upper triangle produced by `f(i, j)`, `i <= j`.
    pub fn from_upper_fn(labels: Vec<Var>, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let k = labels.len();
        let mut entries = vec![T::zero(); k * k];
        for i in 0..k {
            for j in i..k {
                let v = f(i, j);
                entries[i * k + j] = v;
                entries[j * k + i] = v;
            }
        }
        Self::new(labels, entries)
    }

    /// Shape, label, finiteness and symmetry checks; no eigenvalue test.
    fn new_unchecked_psd(labels: Vec<Var>, entries: Vec<T>) -> Result<Self> {
        let k = labels.len();
        if k == 0 {
            return Err(Error::InvalidMatrix("empty label set".into()));
        }
        if entries.len() != k * k {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for {} labels",
                entries.len(),
                k
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::LabelError(format!("duplicate label `{a}`")));
            }
        }
        for i in 0..k {
            let d = entries[i * k + i];
            if !d.is_finite() || d < T::zero() {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {i} is {}",
                    d.to_f64_lossy()
                )));
            }
            for j in (i + 1)..k {
                let (a, b) = (entries[i * k + j], entries[j * k + i]);
                if !a.is_finite() || a != b {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({i},{j}) not symmetric"
                    )));
                }
            }
        }
        Ok(Self { labels, entries })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim() + j]
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.labels.iter().position(|&l| l == v)
    }

    /// Covariance between two labeled variables.
    pub fn entry(&self, a: Var, b: Var) -> Result<T> {
        let i = self.require(a)?;
        let j = self.require(b)?;
        Ok(self.get(i, j))
    }

    fn require(&self, v: Var) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::LabelError(format!("`{v}` not in {:?}", self.labels)))
    }

    /// Principal submatrix over `vars`, in the given order.
    pub fn submatrix(&self, vars: &[Var]) -> Result<Self> {
        let idx = vars
            .iter()
            .map(|&v| self.require(v))
            .collect::<Result<Vec<_>>>()?;
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in &idx {
            for &j in &idx {
                entries.push(self.get(i, j));
            }
        }
        // a principal submatrix of a PSD matrix is PSD
        Self::new_unchecked_psd(vars.to_vec(), entries)
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn diag_product(&self) -> T {
        (0..self.dim()).fold(T::one(), |acc, i| acc * self.get(i, i))
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> T {
        lu_determinant(&self.entries, self.dim())
    }

    /// True when the determinant is at or below the scale-free singularity threshold.
    pub fn is_singular(&self) -> bool {
        let det = self.determinant();
        det <= T::lit(SINGULAR_REL_TOL) * self.diag_product()
    }

    /// Eigenvalues in ascending order (cyclic Jacobi).
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev = jacobi_eigenvalues(&self.entries, self.dim());
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -psd_tolerance::<T>() * self.trace()
    }

    /// Covariance of the linear images `rows[r] . v` where `v` ranges over this
    /// matrix's variables, i.e. `M * Self * M^T`.
    pub fn linear_image(&self, labels: Vec<Var>, rows: &[Vec<T>]) -> Result<Self> {
        let k = self.dim();
        if rows.len() != labels.len() || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidMatrix("linear map shape mismatch".into()));
        }
        // inner[r][l] = sum_m rows[r][m] * self[m][l]
        let inner: Vec<Vec<T>> = rows
            .iter()
            .map(|r| {
                (0..k)
                    .map(|l| (0..k).map(|m| r[m] * self.get(m, l)).sum())
                    .collect()
            })
            .collect();
        Self::from_upper_fn(labels, |i, j| {
            (0..k).map(|l| inner[i][l] * rows[j][l]).sum()
        })
    }
}

pub(crate) fn lu_determinant<T: Scalar>(entries: &[T], n: usize) -> T {
    let mut a = entries.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if a[pivot * n + col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            for c in 0..n {
                a.swap(col * n + c, pivot * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in (col + 1)..n {
            let factor = a[r * n + col] / p;
            if factor != T::zero() {
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= factor * v;
                }
            }
        }
    }
    det
}

fn jacobi_eigenvalues<T: Scalar>(entries: &[T], n: usize) -> Vec<T> {
    let mut a = entries.to_vec();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let scale: T = a.iter().map(|&x| x * x).sum();
        if off <= T::epsilon() * T::epsilon() * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::two() * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
