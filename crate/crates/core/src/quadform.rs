//! Positive definite rational quadratic forms and their orthogonal groups.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, int, Matrix, Rational};

/// A symmetric positive definite Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct QuadraticForm {
    gram: Matrix,
}

impl TryFrom<Matrix> for QuadraticForm {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        QuadraticForm::new(m)
    }
}

impl From<QuadraticForm> for Matrix {
    fn from(q: QuadraticForm) -> Self {
        q.gram
    }
}

impl QuadraticForm {
    /// Checks symmetry and that every leading principal minor is positive.
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::NotPositiveDefinite(format!(
                "gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotPositiveDefinite(
                "gram matrix is not symmetric".into(),
            ));
        }
        for (k, minor) in leading_minors(&gram).into_iter().enumerate() {
            if !minor.is_positive() {
                return Err(Error::NotPositiveDefinite(format!(
                    "leading principal minor of order {} is {}",
                    k + 1,
                    format_rational(&minor)
                )));
            }
        }
        Ok(Self { gram })
    }

    pub fn diagonal(entries: &[Rational]) -> Result<Self> {
        Self::new(Matrix::diag(entries))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `x^T Q y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate().take(self.dim()) {
            if xi.is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for (j, yj) in y.iter().enumerate().take(self.dim()) {
                let g = &self.gram[(i, j)];
                if !yj.is_zero() && !g.is_zero() {
                    row += g * yj;
                }
            }
            acc += xi * row;
        }
        acc
    }

    /// `x^T Q x`.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.bilinear(x, x)
    }

    pub fn scaled(&self, a: &Rational) -> Result<Self> {
        Self::new(self.gram.scale(a))
    }
}

/// Leading principal minors `det Q[..k, ..k]` for `k = 1..=n`, read off the
/// pivots of elimination without row exchanges. Once a pivot vanishes the
/// remaining minors are computed directly.
fn leading_minors(q: &Matrix) -> Vec<Rational> {
    let n = q.rows();
    let mut m = q.clone();
    let mut minors = Vec::with_capacity(n);
    let mut det = Rational::one();
    for k in 0..n {
        let pivot = m[(k, k)].clone();
        if pivot.is_zero() {
            minors.push(Rational::zero());
            for j in k + 1..n {
                let sub = q.submatrix(0, 0, j + 1, j + 1).expect("inside bounds");
                minors.push(sub.determinant().expect("square"));
            }
            return minors;
        }
        det *= &pivot;
        minors.push(det.clone());
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &pivot;
            for j in k..n {
                let v = &f * &m[(k, j)];
                m[(i, j)] -= v;
            }
        }
    }
    minors
}

/// `diag[1, 3, .., n(n-1)/2]`, the (n-1)-dimensional form with entries `k(k+1)/2`.
pub fn paper_form(n: usize) -> Result<QuadraticForm> {
    check_n(n)?;
    let entries: Vec<Rational> = (1..n as i64).map(|k| int(k * (k + 1) / 2)).collect();
    QuadraticForm::diagonal(&entries)
}

/// `diag[2, 6, .., n(n-1)]`, twice [`paper_form`].
pub fn paper_form_prime(n: usize) -> Result<QuadraticForm> {
    check_n(n)?;
    let entries: Vec<Rational> = (1..n as i64).map(|k| int(k * (k + 1))).collect();
    QuadraticForm::diagonal(&entries)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "n must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Exact check of `M^T Q M = Q`.
pub fn in_orthogonal_group(m: &Matrix, q: &QuadraticForm) -> Result<bool> {
    if !m.is_square() || m.rows() != q.dim() {
        return Err(Error::Shape {
            op: "in_orthogonal_group",
            expected: format!("{0}x{0}", q.dim()),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(m.transpose().matmul(q.gram())?.matmul(m)? == *q.gram())
}

/// Cayley transform for `O(Q)`: `M = (I + Q^{-1} K)^{-1} (I - Q^{-1} K)` for skew `K`.
///
/// Equivalently `M = (Q + K)^{-1} (Q - K)`; `Q + K` is always invertible since
/// `x^T (Q + K) x = x^T Q x > 0`. The result is checked against `M^T Q M = Q`.
pub fn cayley_orthogonal(k: &Matrix, q: &QuadraticForm) -> Result<Matrix> {
    if !k.is_square() || k.rows() != q.dim() {
        return Err(Error::Shape {
            op: "cayley_orthogonal",
            expected: format!("{0}x{0}", q.dim()),
            found: format!("{}x{}", k.rows(), k.cols()),
        });
    }
    if !k.is_skew_symmetric() {
        return Err(Error::Precondition("K is not skew-symmetric".into()));
    }
    let id = Matrix::identity(q.dim());
    let a = q.gram().inverse()?.matmul(k)?;
    let m = id.add(&a)?.inverse()?.matmul(&id.sub(&a)?)?;
    if !in_orthogonal_group(&m, q)? {
        return Err(Error::NotMember("Cayley image fails M^T Q M = Q".into()));
    }
    Ok(m)
}

/// Which clause makes `sum i(i+1) x_i^2` (over `i < n`) similar to `sum y_i^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchoenbergClause {
    /// `n` odd and a perfect square.
    OddSquare,
    /// `n = 0 mod 4`.
    ZeroModFour,
    /// `n = 2 mod 4` and `n` is a sum of two squares.
    TwoModFourSumOfTwoSquares,
}

impl std::fmt::Display for SchoenbergClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::OddSquare => "(a) n is odd and square",
            Self::ZeroModFour => "(b) n = 0 mod 4",
            Self::TwoModFourSumOfTwoSquares => "(c) n = 2 mod 4 and n is a sum of two squares",
        })
    }
}

/// Decides whether `diag[1, 3, .., n(n-1)/2]` is similar to the identity form of
/// dimension `n - 1`, returning the satisfied clause, or `None` when none holds.
pub fn schoenberg_similar_to_identity(n: u64) -> Result<Option<SchoenbergClause>> {
    check_n(n as usize)?;
    let clause = match n % 4 {
        0 => Some(SchoenbergClause::ZeroModFour),
        2 if is_sum_of_two_squares(n) => Some(SchoenbergClause::TwoModFourSumOfTwoSquares),
        1 | 3 if is_square(n) => Some(SchoenbergClause::OddSquare),
        _ => None,
    };
    Ok(clause)
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// `n` is a sum of two squares iff every prime `p = 3 mod 4` divides it to an even power.
pub fn is_sum_of_two_squares(mut n: u64) -> bool {
    if n == 0 {
        return true;
    }
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if p % 4 == 3 && e % 2 == 1 {
                return false;
            }
        }
        p += 2;
    }
    n % 4 != 3
}

/// Checks a similarity witness: `g^T Q1 g = a Q2` with `a != 0`.
pub fn equivalence_witness_check(
    q1: &QuadraticForm,
    q2: &QuadraticForm,
    g: &Matrix,
    a: &Rational,
) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Precondition(
            "similarity scale a must be nonzero".into(),
        ));
    }
    if q1.dim() != q2.dim() || g.rows() != q1.dim() || g.cols() != q2.dim() {
        return Err(Error::Shape {
            op: "equivalence_witness_check",
            expected: format!("{0}x{0} forms and witness", q1.dim()),
            found: format!("Q2 {0}x{0}, g {1}x{2}", q2.dim(), g.rows(), g.cols()),
        });
    }
    let lhs = g.transpose().matmul(q1.gram())?.matmul(g)?;
    Ok(lhs == q2.gram().scale(a))
}
