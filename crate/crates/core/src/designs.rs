//! Rational ellipsoidal t-designs on central quadrics `x^T Q x = r`.
//!
//! # Exact design test
//!
//! A finite `X` on `E = {x : x^T Q x = r}` is a t-design when averaging any
//! polynomial of degree `<= t` over `X` matches its average under the
//! `O(Q, R)`-invariant probability measure on `E`. That measure has no rational
//! description, so it is never integrated here. Instead:
//!
//! 1. Pick a real `L` with `L^T Q L = r I`. Then `u -> L u` maps the unit sphere
//!    `S^{d-1}` onto `E`, conjugates `O(d)` onto `O(Q)` and so carries the uniform
//!    measure to the invariant one. Composition with `L` preserves polynomial
//!    degree in both directions, so `X` is an ellipsoidal t-design iff
//!    `L^{-1} X` is a spherical t-design.
//! 2. For `x = L u`, `y = L v` we get `u . v = x^T Q y / r`: the spherical
//!    inner products are the rational numbers `x^T Q y / r`, and `L` never has
//!    to be formed.
//! 3. With `G_k` the degree-k Gegenbauer polynomial for `S^{d-1}`, the addition
//!    theorem gives `sum_{u,v} G_k(u . v) = c_k sum_i |sum_u Y_ki(u)|^2` with
//!    `c_k > 0` and `Y_ki` an orthonormal basis of degree-k harmonics. A set is a
//!    spherical t-design iff all harmonic moments of degree `1..=t` vanish, i.e.
//!    iff `sum_{x,y in X} G_k(x^T Q y / r) = 0` for `k = 1..=t`.
//!
//! Every quantity in step 3 is rational, so the test is decided exactly. The
//! criterion is invariant under positive rescaling of each `G_k`; here
//! `G_k(1) = 1`. In dimension 1 the harmonic spaces of degree `>= 2` vanish and
//! only `k = 1` is tested.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, frac, int, serde_points, serde_rational, Rational};
use crate::quadform::QuadraticForm;

pub type Point = Vec<Rational>;

/// Gegenbauer polynomials `G_0..=G_t` for the sphere `S^{d-1}`, normalized so
/// that `G_k(1) = 1`:
///
/// `G_0 = 1`, `G_1 = x`, `(k + d - 2) G_{k+1} = (2k + d - 2) x G_k - k G_{k-1}`.
///
/// For `d = 2` these are the Chebyshev polynomials `T_k`, for `d = 3` the
/// Legendre polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GegenbauerTable {
    dim: usize,
    // coefficient vectors, ascending powers
    polys: Vec<Vec<Rational>>,
}

impl GegenbauerTable {
    pub fn new(dim: usize, max_degree: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Precondition(format!(
                "Gegenbauer table needs dimension >= 2, got {dim}"
            )));
        }
        let mut polys: Vec<Vec<Rational>> = vec![vec![int(1)]];
        if max_degree >= 1 {
            polys.push(vec![int(0), int(1)]);
        }
        for k in 1..max_degree {
            let (a, b, c) = recurrence_coeffs(dim, k);
            let mut next = vec![Rational::zero(); k + 2];
            for (i, coef) in polys[k].iter().enumerate() {
                next[i + 1] += &a * coef;
            }
            for (i, coef) in polys[k - 1].iter().enumerate() {
                next[i] -= &b * coef;
            }
            for coef in next.iter_mut() {
                *coef = &*coef / &c;
            }
            polys.push(next);
        }
        Ok(Self { dim, polys })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    /// Ascending coefficients of `G_k`.
    pub fn coefficients(&self, k: usize) -> &[Rational] {
        &self.polys[k]
    }

    /// Horner evaluation of `G_k(x)`.
    pub fn eval(&self, k: usize, x: &Rational) -> Rational {
        self.polys[k]
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `G_0(x), .., G_t(x)` through the recurrence.
    pub fn eval_all(&self, x: &Rational) -> Vec<Rational> {
        eval_recurrence(self.dim, self.max_degree(), x)
    }

    /// `<G_j, G_k>` under the probability measure proportional to
    /// `(1 - x^2)^{(d-3)/2}` on `[-1, 1]`.
    pub fn inner_product(&self, j: usize, k: usize) -> Rational {
        let moments = normalized_even_moments(self.dim, (j + k) / 2);
        let mut acc = Rational::zero();
        for (a, ca) in self.polys[j].iter().enumerate() {
            for (b, cb) in self.polys[k].iter().enumerate() {
                if (a + b) % 2 == 0 && !ca.is_zero() && !cb.is_zero() {
                    acc += ca * cb * &moments[(a + b) / 2];
                }
            }
        }
        acc
    }

    /// True iff `<G_j, G_k> = 0` exactly for all `j != k` in the table.
    pub fn is_orthogonal(&self) -> bool {
        let t = self.max_degree();
        (0..=t).all(|j| (j + 1..=t).all(|k| self.inner_product(j, k).is_zero()))
    }
}

/// Returns `(2k + d - 2, k, k + d - 2)` for the step producing `G_{k+1}`.
fn recurrence_coeffs(dim: usize, k: usize) -> (Rational, Rational, Rational) {
    let (d, k) = (dim as i64, k as i64);
    (int(2 * k + d - 2), int(k), int(k + d - 2))
}

fn eval_recurrence(dim: usize, t: usize, x: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(t + 1);
    out.push(Rational::one());
    if t >= 1 {
        out.push(x.clone());
    }
    for k in 1..t {
        let (a, b, c) = recurrence_coeffs(dim, k);
        let v = (a * x * &out[k] - b * &out[k - 1]) / c;
        out.push(v);
    }
    out
}

/// `E[x^{2j}]` for `j = 0..=max_j` under the probability measure proportional to
/// `(1 - x^2)^{(d-3)/2}` on `[-1, 1]`: `prod_{i<j} (2i + 1) / (2i + d)`.
pub fn normalized_even_moments(dim: usize, max_j: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for i in 0..max_j {
        let next = &out[i] * frac(2 * i as i64 + 1, 2 * i as i64 + dim as i64);
        out.push(next);
    }
    out
}

/// A candidate design: points on `x^T Q x = r` and a target strength `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct DesignInstance {
    form: QuadraticForm,
    radius: Rational,
    points: Vec<Point>,
    strength: usize,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    form: QuadraticForm,
    #[serde(with = "serde_rational")]
    r: Rational,
    t: usize,
    #[serde(with = "serde_points")]
    points: Vec<Point>,
}

impl TryFrom<InstanceRepr> for DesignInstance {
    type Error = Error;

    fn try_from(repr: InstanceRepr) -> Result<Self> {
        DesignInstance::new(repr.form, repr.r, repr.points, repr.t)
    }
}

impl From<DesignInstance> for InstanceRepr {
    fn from(d: DesignInstance) -> Self {
        InstanceRepr {
            form: d.form,
            r: d.radius,
            t: d.strength,
            points: d.points,
        }
    }
}

impl DesignInstance {
    pub fn new(
        form: QuadraticForm,
        radius: Rational,
        points: Vec<Point>,
        strength: usize,
    ) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::Precondition(format!(
                "radius must be positive, got {}",
                format_rational(&radius)
            )));
        }
        if points.is_empty() {
            return Err(Error::Precondition(
                "design needs at least one point".into(),
            ));
        }
        check_on_quadric(&form, &radius, &points)?;
        Ok(Self {
            form,
            radius,
            points,
            strength,
        })
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn with_strength(&self, t: usize) -> Self {
        Self {
            strength: t,
            ..self.clone()
        }
    }
}

fn check_on_quadric(form: &QuadraticForm, radius: &Rational, points: &[Point]) -> Result<()> {
    for (index, p) in points.iter().enumerate() {
        if p.len() != form.dim() {
            return Err(Error::Shape {
                op: "design point",
                expected: format!("{} coordinates", form.dim()),
                found: format!("point {index} with {}", p.len()),
            });
        }
        let v = form.eval(p);
        if &v != radius {
            return Err(Error::OffQuadric {
                index,
                value: format_rational(&v),
                radius: format_rational(radius),
            });
        }
    }
    Ok(())
}

/// Outcome of [`verify_design`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub holds: bool,
    pub failing_degree: Option<usize>,
    /// `sum_{x,y} G_k(x^T Q y / r)` for `k = 1, 2, ..` up to the failing degree.
    pub pair_sums: Vec<String>,
}

/// Pairwise cosines `x^T Q y / r`, upper triangle including the diagonal.
fn cosine_matrix(form: &QuadraticForm, radius: &Rational, points: &[Point]) -> Vec<Vec<Rational>> {
    let inv_r = radius.recip();
    points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            points[i..]
                .iter()
                .map(|y| form.bilinear(x, y) * &inv_r)
                .collect()
        })
        .collect()
}

/// Exact Gegenbauer pair-sum test for strengths `1..=t` (see the module docs).
pub fn verify_design(inst: &DesignInstance) -> DesignReport {
    let t = inst.strength;
    let dim = inst.form.dim();
    let checked_t = if dim == 1 { t.min(1) } else { t };
    let n = inst.points.len();
    let cos = cosine_matrix(&inst.form, &inst.radius, &inst.points);

    // sums[k] for k = 1..=checked_t; diagonal pairs contribute G_k(1) = 1 each.
    let mut sums = vec![int(n as i64); checked_t + 1];
    let two = int(2);
    for (i, row) in cos.iter().enumerate() {
        for (off, c) in row.iter().enumerate() {
            if off == 0 {
                debug_assert!(c.is_one(), "point {i} off the quadric");
                continue;
            }
            let vals = eval_recurrence(dim.max(2), checked_t, c);
            for k in 1..=checked_t {
                sums[k] += &two * &vals[k];
            }
        }
    }
    let mut pair_sums = Vec::new();
    for (k, s) in sums.iter().enumerate().skip(1) {
        pair_sums.push(format_rational(s));
        if !s.is_zero() {
            return DesignReport {
                holds: false,
                failing_degree: Some(k),
                pair_sums,
            };
        }
    }
    DesignReport {
        holds: true,
        failing_degree: None,
        pair_sums,
    }
}

fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Size of a tight t-design in ambient dimension `n`:
/// `C(n+s-1, s) + C(n+s-2, s-1)` for `t = 2s`, `2 C(n+s-1, s)` for `t = 2s+1`.
pub fn tight_size(n: usize, t: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::Precondition(
            "ambient dimension must be at least 1".into(),
        ));
    }
    let (n, s) = (n as i64, (t / 2) as i64);
    Ok(if t.is_multiple_of(2) {
        binomial(n + s - 1, s) + binomial(n + s - 2, s - 1)
    } else {
        2 * binomial(n + s - 1, s)
    })
}

/// Height of a point: the largest `|numerator|` or denominator among its coordinates.
pub fn point_height(p: &[Rational]) -> BigInt {
    p.iter()
        .map(|q| q.numer().abs().max(q.denom().clone()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Primitive integer vectors in `[-h, h]^d` whose first nonzero entry is positive:
/// one representative per rational direction of height `<= h`.
pub fn primitive_directions(d: usize, h: u64) -> Vec<Vec<i64>> {
    let h = h as i64;
    let mut out = Vec::new();
    let mut cur = vec![-h; d];
    if d == 0 {
        return out;
    }
    loop {
        let lead = cur.iter().find(|&&v| v != 0);
        if let Some(&l) = lead {
            let g = cur.iter().fold(0i64, |g, &v| g.gcd(&v));
            if l > 0 && g == 1 {
                out.push(cur.clone());
            }
        }
        // odometer
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                break;
            }
            cur[i] = -h;
        }
    }
}

/// Second intersection of the line `base + s v` with the quadric, or `None` when
/// the line is tangent at `base`.
///
/// Substituting gives `2 s v^T Q base + s^2 v^T Q v = 0`, so
/// `s = -2 v^T Q base / v^T Q v`.
pub fn chord_point(form: &QuadraticForm, base: &[Rational], dir: &[Rational]) -> Option<Point> {
    let vqb = form.bilinear(dir, base);
    if vqb.is_zero() {
        return None;
    }
    let vqv = form.eval(dir);
    let s = -(int(2) * vqb) / vqv;
    Some(base.iter().zip(dir).map(|(b, v)| b + &s * v).collect())
}

/// Rational points on `x^T Q x = r` reached from `base` along every primitive
/// integer direction of height `<= height`. The result contains `base`, is
/// deduplicated and sorted lexicographically.
///
/// In the plane the direction `(1, t)` is the usual chord parameter `t`.
pub fn enumerate_rational_points(
    form: &QuadraticForm,
    radius: &Rational,
    base: &[Rational],
    height: u64,
) -> Result<Vec<Point>> {
    check_on_quadric(form, radius, std::slice::from_ref(&base.to_vec()))?;
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    seen.insert(base.to_vec());
    for dir in primitive_directions(form.dim(), height) {
        let dir: Vec<Rational> = dir.into_iter().map(int).collect();
        if let Some(p) = chord_point(form, base, &dir) {
            debug_assert_eq!(&form.eval(&p), radius);
            seen.insert(p);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Canonical rationals of height `<= h`, ordered by height then value.
fn rationals_up_to_height(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut vals: Vec<Rational> = vec![int(0)];
    for ht in 1..=h {
        let mut level = Vec::new();
        for q in 1..=ht {
            for p in 1..=ht {
                if p.max(q) == ht && p.gcd(&q) == 1 {
                    level.push(frac(p, q));
                    level.push(frac(-p, q));
                }
            }
        }
        level.sort();
        vals.extend(level);
    }
    vals
}

/// Bounded brute-force search for a rational point on `x^T Q x = r` with every
/// coordinate of height `<= height`. Scans at most `max_tries` candidates.
pub fn find_base_point(
    form: &QuadraticForm,
    radius: &Rational,
    height: u64,
    max_tries: usize,
) -> Option<Point> {
    let vals = rationals_up_to_height(height);
    let d = form.dim();
    let mut idx = vec![0usize; d];
    for _ in 0..max_tries {
        let p: Point = idx.iter().map(|&i| vals[i].clone()).collect();
        if &form.eval(&p) == radius {
            return Some(p);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] + 1 < vals.len() {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search-tree nodes to visit.
    pub budget: usize,
    /// Worker threads; 1 runs the search on the calling thread.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub target_size: u128,
    pub pool_size: usize,
    pub nodes_visited: usize,
    pub pruned: usize,
    pub budget_exhausted: bool,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub designs: Vec<DesignInstance>,
    pub report: SearchReport,
}

/// Shared state of one search.
struct Search<'a> {
    target: usize,
    t: usize,
    // gk[k-1][i][j] = G_k(cos(p_i, p_j))
    gk: Vec<Vec<Vec<Rational>>>,
    min_off: Vec<Rational>,
    max_off: Vec<Rational>,
    budget: usize,
    nodes: &'a AtomicUsize,
    pruned: &'a AtomicUsize,
    exhausted: &'a AtomicBool,
}

#[derive(Clone)]
struct Node {
    chosen: Vec<usize>,
    // partial pair sums over chosen x chosen, k = 1..=t
    partial: Vec<Rational>,
    // cross[k-1][q] = sum_{x in chosen} G_k(cos(q, x))
    cross: Vec<Vec<Rational>>,
}

impl Search<'_> {
    fn enter(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// True when some degree can no longer reach a zero pair sum.
    fn hopeless(&self, node: &Node, start: usize) -> bool {
        let s = self.target - node.chosen.len();
        let pool = self.gk.first().map_or(0, Vec::len);
        if pool - start < s {
            return true;
        }
        if s == 0 {
            return false;
        }
        let new_pairs = int((s * (s - 1)) as i64);
        let two = int(2);
        let diag = int(s as i64);
        for k in 0..self.t {
            let mut cross: Vec<&Rational> = node.cross[k][start..].iter().collect();
            cross.sort();
            let lo_cross: Rational = cross[..s].iter().fold(Rational::zero(), |a, &c| a + c);
            let hi_cross: Rational = cross[cross.len() - s..]
                .iter()
                .fold(Rational::zero(), |a, &c| a + c);
            let lower = &node.partial[k] + &diag + &two * lo_cross + &new_pairs * &self.min_off[k];
            let upper = &node.partial[k] + &diag + &two * hi_cross + &new_pairs * &self.max_off[k];
            if lower.is_positive() || upper.is_negative() {
                return true;
            }
        }
        false
    }

    fn add(&self, node: &Node, q: usize) -> Node {
        let mut next = node.clone();
        next.chosen.push(q);
        for k in 0..self.t {
            next.partial[k] += int(1) + int(2) * &node.cross[k][q];
            for (c, g) in next.cross[k].iter_mut().zip(&self.gk[k]) {
                *c += &g[q];
            }
        }
        next
    }

    fn dfs(&self, node: &Node, start: usize, hits: &mut Vec<Vec<usize>>) {
        if !self.enter() {
            return;
        }
        if node.chosen.len() == self.target {
            if node.partial.iter().all(Zero::is_zero) {
                hits.push(node.chosen.clone());
            }
            return;
        }
        if self.hopeless(node, start) {
            self.pruned.fetch_add(1, Ordering::Relaxed);
            return;
        }
        let pool = self.gk.first().map_or(0, Vec::len);
        let s = self.target - node.chosen.len();
        for q in start..=pool - s {
            if self.exhausted.load(Ordering::Relaxed) {
                return;
            }
            let child = self.add(node, q);
            self.dfs(&child, q + 1, hits);
        }
    }
}

/// Depth-first search for subsets of `pool` of exactly the tight size for
/// strength `t` that pass [`verify_design`].
///
/// A branch is cut when, for some degree, the pair sum of every completion is
/// bounded away from zero. The bound adds the exact partial sum, the diagonal
/// terms of the points still to choose, the extreme cross sums with the points
/// already chosen, and `min`/`max` of `G_k` over pool pairs for the pairs among
/// the new points. Returning nothing is an ordinary outcome.
pub fn search_tight_designs(
    form: &QuadraticForm,
    radius: &Rational,
    t: usize,
    pool: &[Point],
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    check_on_quadric(form, radius, pool)?;
    let pool: Vec<Point> = pool
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let target_size = tight_size(form.dim(), t)?;
    let dim = form.dim();
    let t_eff = if dim == 1 { t.min(1) } else { t };
    let p = pool.len();

    let mut gk = vec![vec![vec![Rational::zero(); p]; p]; t_eff];
    let inv_r = radius.recip();
    for i in 0..p {
        for j in i..p {
            let c = form.bilinear(&pool[i], &pool[j]) * &inv_r;
            let vals = eval_recurrence(dim.max(2), t_eff, &c);
            for k in 0..t_eff {
                gk[k][i][j] = vals[k + 1].clone();
                gk[k][j][i] = vals[k + 1].clone();
            }
        }
    }
    let extreme = |k: usize, pick_max: bool| -> Rational {
        let mut best: Option<Rational> = None;
        for (i, row) in gk[k].iter().enumerate() {
            for v in &row[i + 1..] {
                best = Some(match best {
                    None => v.clone(),
                    Some(b) if (v > &b) == pick_max && v != &b => v.clone(),
                    Some(b) => b,
                });
            }
        }
        best.unwrap_or_else(Rational::zero)
    };
    let min_off: Vec<Rational> = (0..t_eff).map(|k| extreme(k, false)).collect();
    let max_off: Vec<Rational> = (0..t_eff).map(|k| extreme(k, true)).collect();

    let nodes = AtomicUsize::new(0);
    let pruned = AtomicUsize::new(0);
    let exhausted = AtomicBool::new(false);
    let mut hits: Vec<Vec<usize>> = Vec::new();

    if let Ok(target) = usize::try_from(target_size) {
        if target <= p {
            let search = Search {
                target,
                t: t_eff,
                gk,
                min_off,
                max_off,
                budget: opts.budget,
                nodes: &nodes,
                pruned: &pruned,
                exhausted: &exhausted,
            };
            let root = Node {
                chosen: Vec::new(),
                partial: vec![Rational::zero(); t_eff],
                cross: vec![vec![Rational::zero(); p]; t_eff],
            };
            if opts.workers <= 1 || target == 0 {
                search.dfs(&root, 0, &mut hits);
            } else if search.enter() {
                if search.hopeless(&root, 0) {
                    pruned.fetch_add(1, Ordering::Relaxed);
                } else {
                    let pool_threads = rayon::ThreadPoolBuilder::new()
                        .num_threads(opts.workers)
                        .build()
                        .map_err(|e| Error::Precondition(e.to_string()))?;
                    let per_branch: Vec<Vec<Vec<usize>>> = pool_threads.install(|| {
                        (0..=p - target)
                            .into_par_iter()
                            .map(|q| {
                                let mut local = Vec::new();
                                if !search.exhausted.load(Ordering::Relaxed) {
                                    let child = search.add(&root, q);
                                    search.dfs(&child, q + 1, &mut local);
                                }
                                local
                            })
                            .collect()
                    });
                    hits.extend(per_branch.into_iter().flatten());
                }
            }
        }
    }

    let mut designs: Vec<Vec<Point>> = hits
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| pool[i].clone()).collect())
        .collect();
    designs.sort();
    designs.dedup();
    let designs = designs
        .into_iter()
        .map(|pts| DesignInstance::new(form.clone(), radius.clone(), pts, t))
        .collect::<Result<Vec<_>>>()?;
    let report = SearchReport {
        target_size,
        pool_size: p,
        nodes_visited: nodes.load(Ordering::Relaxed).min(opts.budget),
        pruned: pruned.load(Ordering::Relaxed),
        budget_exhausted: exhausted.load(Ordering::Relaxed),
        hits: designs.len(),
    };
    Ok(SearchOutcome { designs, report })
}
