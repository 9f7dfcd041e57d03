//! Solutions of the r-dimensional Prouhet-Tarry-Escott problem.
//!
//! A solution is a pair of multisets `A`, `B` of `n` points in `Q^r` whose
//! monomial power sums agree for every total degree `1..=m`. Each side is held
//! as an `r x n` matrix whose columns are the points.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SolutionRepr", into = "SolutionRepr")]
pub struct PteSolution {
    degree: usize,
    a: Matrix,
    b: Matrix,
}

#[derive(Serialize, Deserialize)]
struct SolutionRepr {
    r: usize,
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
}

impl TryFrom<SolutionRepr> for PteSolution {
    type Error = Error;

    fn try_from(repr: SolutionRepr) -> Result<Self> {
        let sol = PteSolution::new(repr.m, repr.a, repr.b)?;
        if sol.dimension() != repr.r || sol.size() != repr.n {
            return Err(Error::Shape {
                op: "PteSolution",
                expected: format!("r={} n={}", repr.r, repr.n),
                found: format!("r={} n={}", sol.dimension(), sol.size()),
            });
        }
        Ok(sol)
    }
}

impl From<PteSolution> for SolutionRepr {
    fn from(sol: PteSolution) -> Self {
        SolutionRepr {
            r: sol.dimension(),
            n: sol.size(),
            m: sol.degree,
            a: sol.a,
            b: sol.b,
        }
    }
}

impl PteSolution {
    /// Pairs two `r x n` point matrices with an intended degree `m`. No power sums are
    /// checked here; call [`PteSolution::verify`].
    pub fn new(degree: usize, a: Matrix, b: Matrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Shape {
                op: "PteSolution::new",
                expected: format!("B of shape {}x{}", a.rows(), a.cols()),
                found: format!("{}x{}", b.rows(), b.cols()),
            });
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::Shape {
                op: "PteSolution::new",
                expected: "at least one point of dimension >= 1".into(),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(Self { degree, a, b })
    }

    /// Dimension `r` of the ambient space.
    pub fn dimension(&self) -> usize {
        self.a.rows()
    }

    /// Number of points `n` on each side.
    pub fn size(&self) -> usize {
        self.a.cols()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// True when no point of `A` also occurs in `B`.
    pub fn is_disjoint(&self) -> bool {
        let bs = self.b.columns();
        self.a.columns().iter().all(|p| !bs.contains(p))
    }

    /// Checks every power-sum identity up to the stored degree, in graded
    /// lexicographic order of exponent tuples, stopping at the first violation.
    pub fn verify(&self) -> PteReport {
        let tuples = exponent_tuples(self.dimension(), self.degree);
        let pa = PowerTable::new(&self.a, self.degree);
        let pb = PowerTable::new(&self.b, self.degree);
        let disjoint = self.is_disjoint();
        for (idx, k) in tuples.iter().enumerate() {
            let lhs = pa.power_sum(k);
            let rhs = pb.power_sum(k);
            if lhs != rhs {
                return PteReport {
                    holds: false,
                    disjoint,
                    identities_checked: idx + 1,
                    violation: Some(PowerSumViolation {
                        exponents: k.clone(),
                        lhs: format_rational(&lhs),
                        rhs: format_rational(&rhs),
                    }),
                };
            }
        }
        PteReport {
            holds: true,
            disjoint,
            identities_checked: tuples.len(),
            violation: None,
        }
    }

    /// Multiset equality with the other solution, ignoring column order on each side.
    pub fn same_multisets(&self, other: &PteSolution) -> bool {
        canonical_columns(&self.a) == canonical_columns(&other.a)
            && canonical_columns(&self.b) == canonical_columns(&other.b)
    }
}

/// Outcome of [`PteSolution::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PteReport {
    pub holds: bool,
    /// Diagnostic only; validity never depends on it.
    pub disjoint: bool,
    pub identities_checked: usize,
    pub violation: Option<PowerSumViolation>,
}

/// A failed identity `sum_i prod_j a_ij^k_j = sum_i prod_j b_ij^k_j`, both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumViolation {
    pub exponents: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for PowerSumViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "exponents {:?}: sum over A = {}, sum over B = {}",
            self.exponents, self.lhs, self.rhs
        )
    }
}

/// Cached coordinate powers `x^0..=x^m` for every point of one side.
struct PowerTable {
    // powers[point][coord][e]
    powers: Vec<Vec<Vec<Rational>>>,
}

impl PowerTable {
    fn new(points: &Matrix, m: usize) -> Self {
        let powers = points
            .columns()
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|x| {
                        let mut row = Vec::with_capacity(m + 1);
                        row.push(Rational::one());
                        for e in 1..=m {
                            row.push(&row[e - 1] * &x);
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Self { powers }
    }

    fn power_sum(&self, k: &[usize]) -> Rational {
        self.powers.iter().fold(Rational::zero(), |acc, pt| {
            let mono = pt
                .iter()
                .zip(k)
                .fold(Rational::one(), |prod, (pw, &e)| prod * &pw[e]);
            acc + mono
        })
    }
}

/// All exponent tuples of length `r` with total degree in `1..=m`, grouped by
/// degree and lexicographically descending within a degree, e.g. for `r = 2`,
/// `m = 2`: `(1,0) (0,1) (2,0) (1,1) (0,2)`.
pub fn exponent_tuples(r: usize, m: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=rest).rev() {
            prefix.push(e);
            fill(rest - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    for d in 1..=m {
        fill(d, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Columns sorted lexicographically; two point matrices describe the same
/// multiset iff these agree.
pub fn canonical_columns(points: &Matrix) -> Vec<Vec<Rational>> {
    let mut cols = points.columns();
    cols.sort();
    cols
}

/// The `k` cyclic shifts of `v` under `(x_1, ..., x_k) -> (x_k, x_1, ..., x_{k-1})`,
/// returned as the columns of a `k x k` matrix (column `j` is the `j`-th shift).
pub fn cyclic_orbit(v: &[Rational]) -> Matrix {
    let k = v.len();
    let mut m = Matrix::zeros(k, k);
    for j in 0..k {
        for i in 0..k {
            m[(i, j)] = v[(i + k - j % k) % k].clone();
        }
    }
    m
}

/// A solution whose concatenation `[A B]` is in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedSolution {
    pub solution: PteSolution,
    /// The `r x 2n` matrix `[A B]`.
    pub witness: Matrix,
    pub pivot_columns: Vec<usize>,
    /// Set when a pivot column falls inside the `B` half.
    pub pivots_in_b: bool,
}

impl NormalizedSolution {
    pub fn is_normalized(sol: &PteSolution) -> Result<bool> {
        let w = sol.a.hstack(&sol.b)?;
        Ok(w.rref().matrix == w)
    }
}

/// Replaces `[A B]` by its reduced row echelon form. Both sides must have rank `r`.
///
/// The reduction is a left multiplication by an invertible `r x r` matrix, i.e. a
/// linear change of coordinates applied to every point, which preserves all
/// power-sum identities of every degree.
pub fn normalize(sol: &PteSolution) -> Result<NormalizedSolution> {
    let r = sol.dimension();
    let n = sol.size();
    for (side, mat) in [('A', &sol.a), ('B', &sol.b)] {
        let rank = mat.rank();
        if rank != r {
            return Err(Error::RankDeficient {
                side,
                rank,
                expected: r,
            });
        }
    }
    let reduced = sol.a.hstack(&sol.b)?.rref();
    let a = reduced.matrix.submatrix(0, 0, r, n)?;
    let b = reduced.matrix.submatrix(0, n, r, n)?;
    let pivots_in_b = reduced.pivot_columns.iter().any(|&c| c >= n);
    Ok(NormalizedSolution {
        solution: PteSolution::new(sol.degree, a, b)?,
        witness: reduced.matrix,
        pivot_columns: reduced.pivot_columns,
        pivots_in_b,
    })
}
