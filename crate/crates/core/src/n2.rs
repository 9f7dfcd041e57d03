//! The group `N2(n)` of rational orthogonal matrices fixing the all-ones vector.
//!
//! `N2(n)` collects the matrices `A^{-1} B` for full-rank degree-2 solutions
//! `[A] =_2 [B]` of the n-dimensional PTE problem. Membership reduces to two exact
//! checks, `M M^T = I` and `M 1 = 1`. Every element has a Cayley form
//! `(I + S)^{-1} (I - S) R` with `S` skew, `S 1 = 0` and `R` a permutation, and
//! conjugating by the basis `P = [1 b_1 .. b_{n-1}]` splits every element as
//! `diag(1, B')` with `B'` orthogonal for `Q' = diag[2, 6, .., n(n-1)]`.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, format_rational, frac, int, Matrix, Rational};
use crate::perm::Permutation;
use crate::pte::PteSolution;

/// Why a matrix failed the membership test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum MembershipFailure {
    /// `(M M^T)[row][col]` differs from the identity.
    NotOrthogonal {
        row: usize,
        col: usize,
        value: String,
    },
    /// `(M 1)[row]` differs from 1.
    RowSumNotOne { row: usize, value: String },
}

impl std::fmt::Display for MembershipFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotOrthogonal { row, col, value } => {
                let want = if row == col { 1 } else { 0 };
                write!(
                    f,
                    "M M^T != I: entry ({row},{col}) is {value}, expected {want}"
                )
            }
            Self::RowSumNotOne { row, value } => {
                write!(f, "M 1 != 1: row {row} sums to {value}")
            }
        }
    }
}

/// Exact membership test. `Ok(None)` means `m` lies in `N2(n)`.
pub fn membership(m: &Matrix) -> Result<Option<MembershipFailure>> {
    if !m.is_square() {
        return Err(Error::Shape {
            op: "membership",
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let n = m.rows();
    for i in 0..n {
        for j in i..n {
            let v = dot(m.row(i), m.row(j));
            let want = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            if v != want {
                return Ok(Some(MembershipFailure::NotOrthogonal {
                    row: i,
                    col: j,
                    value: format_rational(&v),
                }));
            }
        }
    }
    for (i, s) in m.row_sums().iter().enumerate() {
        if !s.is_one() {
            return Ok(Some(MembershipFailure::RowSumNotOne {
                row: i,
                value: format_rational(s),
            }));
        }
    }
    Ok(None)
}

pub fn is_member(m: &Matrix) -> bool {
    matches!(membership(m), Ok(None))
}

/// A witness `(S, R)` with `E = (I + S)^{-1} (I - S) R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyCertificate {
    pub skew: Matrix,
    pub perm: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N2Element {
    matrix: Matrix,
    certificate: Option<CayleyCertificate>,
}

impl N2Element {
    /// Certifies `matrix` as a member of `N2(n)`.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if let Some(fail) = membership(&matrix)? {
            return Err(Error::NotMember(fail.to_string()));
        }
        Ok(Self {
            matrix,
            certificate: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n),
            certificate: Some(CayleyCertificate {
                skew: Matrix::zeros(n, n),
                perm: Permutation::identity(n),
            }),
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn certificate(&self) -> Option<&CayleyCertificate> {
        self.certificate.as_ref()
    }

    fn check_same_size(&self, other: &N2Element, op: &'static str) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::Shape {
                op,
                expected: format!("n = {}", self.size()),
                found: format!("n = {}", other.size()),
            });
        }
        Ok(())
    }

    pub fn compose(&self, other: &N2Element) -> Result<N2Element> {
        self.check_same_size(other, "compose")?;
        N2Element::new(self.matrix.matmul(&other.matrix)?)
    }

    /// The group inverse, which is the transpose.
    pub fn invert(&self) -> Result<N2Element> {
        N2Element::new(self.matrix.transpose())
    }
}

/// `A^{-1} B` for a full-rank degree-2 solution of PTE_n with `n` points.
pub fn from_pte(a: &Matrix, b: &Matrix) -> Result<N2Element> {
    if !a.is_square() {
        return Err(Error::Shape {
            op: "from_pte",
            expected: "square point matrices".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let sol = PteSolution::new(2, a.clone(), b.clone())?;
    let n = a.rows();
    for (side, mat) in [('A', a), ('B', b)] {
        let rank = mat.rank();
        if rank != n {
            return Err(Error::RankDeficient {
                side,
                rank,
                expected: n,
            });
        }
    }
    let report = sol.verify();
    if let Some(v) = report.violation {
        return Err(Error::PteViolation(v.to_string()));
    }
    N2Element::new(a.inverse()?.matmul(b)?)
}

fn check_cayley_skew(s: &Matrix) -> Result<()> {
    if !s.is_skew_symmetric() {
        return Err(Error::Precondition("S is not skew-symmetric".into()));
    }
    if let Some((i, v)) = s.row_sums().iter().enumerate().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Precondition(format!(
            "S 1 != 0: row {i} sums to {}",
            format_rational(v)
        )));
    }
    Ok(())
}

/// `(I + S)^{-1} (I - S) R`, certified.
pub fn cayley(s: &Matrix, r: &Permutation) -> Result<N2Element> {
    check_cayley_skew(s)?;
    let n = s.rows();
    if r.len() != n {
        return Err(Error::Shape {
            op: "cayley",
            expected: format!("permutation of length {n}"),
            found: format!("length {}", r.len()),
        });
    }
    let id = Matrix::identity(n);
    let plus_inv = id.add(s)?.inverse()?;
    let m = plus_inv.matmul(&id.sub(s)?)?.matmul(&r.to_matrix())?;
    let mut e = N2Element::new(m)?;
    e.certificate = Some(CayleyCertificate {
        skew: s.clone(),
        perm: r.clone(),
    });
    Ok(e)
}

/// Controls the permutation scan in [`cayley_decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Maximum number of permutations tried in lexicographic order.
    pub lex_budget: usize,
    /// Random permutations tried after the lexicographic budget runs out.
    pub random_tries: usize,
    pub seed: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            lex_budget: 40_320,
            random_tries: 20_000,
            seed: 0,
        }
    }
}

/// Tries `R`, returning `S = (I - M)(I + M)^{-1}` for `M = E R^T` when `I + M` is invertible.
fn try_permutation(e: &Matrix, r: &Permutation) -> Result<Option<CayleyCertificate>> {
    let n = e.rows();
    let id = Matrix::identity(n);
    let m = e.matmul(&r.to_matrix().transpose())?;
    let plus_inv = match id.add(&m)?.inverse() {
        Ok(inv) => inv,
        Err(Error::Singular { .. }) => return Ok(None),
        Err(err) => return Err(err),
    };
    let s = id.sub(&m)?.matmul(&plus_inv)?;
    let cert = CayleyCertificate {
        skew: s,
        perm: r.clone(),
    };
    let rebuilt = cayley(&cert.skew, &cert.perm)?;
    if rebuilt.matrix() != e {
        return Err(Error::Precondition(format!(
            "Cayley roundtrip failed for permutation {r}"
        )));
    }
    Ok(Some(cert))
}

/// Finds a Cayley certificate for `e`, scanning permutations in lexicographic
/// order (the first success is returned), then random permutations if the
/// lexicographic budget is exhausted before `n!`.
///
/// Exhaustion would contradict the parametrization of `N2(n)` and is reported as
/// [`Error::DecomposeExhausted`].
pub fn cayley_decompose(e: &N2Element, opts: &DecomposeOptions) -> Result<CayleyCertificate> {
    let n = e.size();
    let mut r = Permutation::identity(n);
    let mut tried = 0;
    loop {
        if tried >= opts.lex_budget {
            break;
        }
        tried += 1;
        if let Some(cert) = try_permutation(e.matrix(), &r)? {
            return Ok(cert);
        }
        if !r.next_lex() {
            return Err(Error::DecomposeExhausted { tried });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_tries {
        tried += 1;
        let r = Permutation::random(n, &mut rng);
        if let Some(cert) = try_permutation(e.matrix(), &r)? {
            return Ok(cert);
        }
    }
    Err(Error::DecomposeExhausted { tried })
}

/// Basis of `{S skew : S 1 = 0}`: for `i < j < n-1` the 3-cycle
/// `(E_ij - E_ji) + (E_j,n-1 - E_n-1,j) + (E_n-1,i - E_i,n-1)`.
pub fn zero_sum_skew_basis(n: usize) -> Vec<Matrix> {
    let mut basis = Vec::new();
    if n < 3 {
        return basis;
    }
    let last = n - 1;
    for i in 0..last {
        for j in i + 1..last {
            let mut s = Matrix::zeros(n, n);
            for (a, b) in [(i, j), (j, last), (last, i)] {
                s[(a, b)] = int(1);
                s[(b, a)] = int(-1);
            }
            basis.push(s);
        }
    }
    basis
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

/// Random skew matrix with zero row sums, as a combination of
/// [`zero_sum_skew_basis`] with small rational coefficients.
pub fn random_zero_sum_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    zero_sum_skew_basis(n)
        .iter()
        .fold(Matrix::zeros(n, n), |acc, b| {
            acc.add(&b.scale(&small_rational(rng))).expect("same shape")
        })
}

/// Random certified element from a random Cayley certificate.
pub fn random_element<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<N2Element> {
    let s = random_zero_sum_skew(n, rng);
    let r = Permutation::random(n, rng);
    cayley(&s, &r)
}

/// Conjugating basis `P` whose first column is `1` and whose columns are
/// mutually orthogonal, together with its inverse and the Gram block `Q'` of the
/// remaining columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationBasis {
    p: Matrix,
    p_inv: Matrix,
    q_prime: Matrix,
}

impl ConjugationBasis {
    /// The basis with `b_k = (1, .., 1, -k, 0, .., 0)` (`k` ones), so that
    /// `P^T P = diag[n, 2, 6, .., n(n-1)]`.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "n must be at least 2, got {n}"
            )));
        }
        let mut p = Matrix::zeros(n, n);
        for i in 0..n {
            p[(i, 0)] = Rational::one();
        }
        for k in 1..n {
            for i in 0..k {
                p[(i, k)] = Rational::one();
            }
            p[(k, k)] = int(-(k as i64));
        }
        Self::new(p)
    }

    /// Validates an arbitrary basis: square, first column `1`, pairwise orthogonal nonzero columns.
    pub fn new(p: Matrix) -> Result<Self> {
        if !p.is_square() || p.rows() < 2 {
            return Err(Error::Shape {
                op: "ConjugationBasis",
                expected: "square matrix of order >= 2".into(),
                found: format!("{}x{}", p.rows(), p.cols()),
            });
        }
        let n = p.rows();
        if p.column(0).iter().any(|x| !x.is_one()) {
            return Err(Error::Precondition("first column of P must be 1".into()));
        }
        let gram = p.transpose().matmul(&p)?;
        for i in 0..n {
            if gram[(i, i)].is_zero() {
                return Err(Error::Precondition(format!("column {i} of P is zero")));
            }
            for j in i + 1..n {
                if !gram[(i, j)].is_zero() {
                    return Err(Error::Precondition(format!(
                        "columns {i} and {j} of P are not orthogonal"
                    )));
                }
            }
        }
        let p_inv = p.inverse()?;
        let q_prime = gram.submatrix(1, 1, n - 1, n - 1)?;
        Ok(Self { p, p_inv, q_prime })
    }

    pub fn size(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn p_inv(&self) -> &Matrix {
        &self.p_inv
    }

    /// Diagonal Gram matrix of `b_1, .., b_{n-1}`.
    pub fn q_prime(&self) -> &Matrix {
        &self.q_prime
    }

    fn check_size(&self, n: usize, op: &'static str) -> Result<()> {
        if n != self.size() {
            return Err(Error::Shape {
                op,
                expected: format!("n = {}", self.size()),
                found: format!("n = {n}"),
            });
        }
        Ok(())
    }

    fn preserves_q_prime(&self, block: &Matrix) -> Result<bool> {
        let lhs = block.transpose().matmul(&self.q_prime)?.matmul(block)?;
        Ok(lhs == self.q_prime)
    }
}

/// `P^{-1} E P = diag(1, B')`; returns `B'` after checking the block shape and
/// `B'^T Q' B' = Q'`.
pub fn to_block(e: &N2Element, basis: &ConjugationBasis) -> Result<Matrix> {
    basis.check_size(e.size(), "to_block")?;
    let n = e.size();
    let conj = basis.p_inv.matmul(e.matrix())?.matmul(&basis.p)?;
    if !conj[(0, 0)].is_one() {
        return Err(Error::BlockStructure(format!(
            "corner entry is {}",
            format_rational(&conj[(0, 0)])
        )));
    }
    for k in 1..n {
        if !conj[(0, k)].is_zero() || !conj[(k, 0)].is_zero() {
            return Err(Error::BlockStructure(format!(
                "first row/column not e_1 at index {k}"
            )));
        }
    }
    let block = conj.submatrix(1, 1, n - 1, n - 1)?;
    if !basis.preserves_q_prime(&block)? {
        return Err(Error::BlockStructure("B'^T Q' B' != Q'".into()));
    }
    Ok(block)
}

/// Inverse of [`to_block`]: `P diag(1, B') P^{-1}`, certified as a member.
pub fn from_block(block: &Matrix, basis: &ConjugationBasis) -> Result<N2Element> {
    if !block.is_square() {
        return Err(Error::Shape {
            op: "from_block",
            expected: "square block".into(),
            found: format!("{}x{}", block.rows(), block.cols()),
        });
    }
    basis.check_size(block.rows() + 1, "from_block")?;
    if !basis.preserves_q_prime(block)? {
        return Err(Error::NotMember("B'^T Q' B' != Q'".into()));
    }
    let m = basis
        .p
        .matmul(&block.with_leading_one())?
        .matmul(&basis.p_inv)?;
    N2Element::new(m)
}

/// Convenience for randomized checks: a seeded stream of certified elements.
pub fn seeded_elements(n: usize, count: usize, seed: u64) -> Result<Vec<N2Element>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(n, &mut rng)).collect()
}
