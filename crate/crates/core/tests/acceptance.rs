//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the report reads top to bottom; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptekit::designs::{self, DesignInstance, GegenbauerTable, SearchOptions};
use ptekit::fano;
use ptekit::linalg::{frac, int, Matrix, Rational};
use ptekit::n2::{self, ConjugationBasis, DecomposeOptions, N2Element};
use ptekit::pte;
use ptekit::quadform::{self, QuadraticForm, SchoenbergClause};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!(
            "took {:.3}s, limit {:.0}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn ac1_fano() -> Check {
    let start = Instant::now();
    let sol = fano::solution();
    let report = sol.verify();
    ensure(report.holds, || format!("{:?}", report.violation))?;
    let norm = pte::normalize(&sol).map_err(e)?;
    // A is the orbit of e_1, B the orbit of (-1/2, 1/2, 1/2, 0, 1/2, 0, 0)
    let mut e1 = vec![int(0); 7];
    e1[0] = int(1);
    let h = frac(1, 2);
    let b_gen = vec![-h.clone(), h.clone(), h.clone(), int(0), h, int(0), int(0)];
    ensure(norm.solution.a() == &pte::cyclic_orbit(&e1), || {
        "A is not the orbit of e_1".into()
    })?;
    ensure(norm.solution.b() == &pte::cyclic_orbit(&b_gen), || {
        format!("B differs:\n{}", norm.solution.b())
    })?;
    ensure(norm.solution.a().is_identity(), || "A is not I_7".into())?;
    ensure(norm.solution.verify().holds, || {
        "normalized pair fails".into()
    })?;
    let pipeline = fano::demo();
    ensure(pipeline.all_ok(), || {
        format!("{:?}", pipeline.first_failure())
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "{} identities exact, RREF matches, {:.3}s",
        report.identities_checked,
        elapsed.as_secs_f64()
    ))
}

const PER_N: usize = 200;

fn random_elements() -> Vec<(usize, Vec<N2Element>)> {
    (2..=8)
        .map(|n| {
            (
                n,
                n2::seeded_elements(n, PER_N, 0xac2 + n as u64).expect("random element"),
            )
        })
        .collect()
}

fn ac2_cayley(sets: &[(usize, Vec<N2Element>)]) -> Check {
    let start = Instant::now();
    let id_count = sets.iter().map(|(_, v)| v.len()).sum::<usize>();
    for (n, elems) in sets {
        let n = *n;
        let ones = Matrix::all_ones(n);
        for (i, el) in elems.iter().enumerate() {
            let a = el.matrix();
            ensure(a.matmul(&a.transpose()).map_err(e)?.is_identity(), || {
                format!("n={n} #{i}: A A^T != I")
            })?;
            ensure(a.matmul(&ones).map_err(e)? == ones, || {
                format!("n={n} #{i}: A 1 != 1")
            })?;
            let cert = n2::cayley_decompose(el, &DecomposeOptions::default()).map_err(e)?;
            ensure(cert.skew.is_skew_symmetric(), || {
                format!("n={n} #{i}: S not skew")
            })?;
            ensure(cert.skew.matmul(&ones).map_err(e)?.is_zero(), || {
                format!("n={n} #{i}: S 1 != 0")
            })?;
            let back = n2::cayley(&cert.skew, &cert.perm).map_err(e)?;
            ensure(back.matrix() == a, || {
                format!("n={n} #{i}: roundtrip differs")
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{id_count} elements over n=2..8, members and roundtrips exact, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn ac3_block_forward(sets: &[(usize, Vec<N2Element>)]) -> Check {
    let mut checked = 0;
    for (n, elems) in sets {
        let n = *n;
        let basis = ConjugationBasis::standard(n).map_err(e)?;
        let q_prime = Matrix::diag(&(1..n as i64).map(|k| int(k * (k + 1))).collect::<Vec<_>>());
        ensure(basis.q_prime() == &q_prime, || format!("n={n}: Q' differs"))?;
        for (i, el) in elems.iter().enumerate() {
            let conj = basis
                .p_inv()
                .matmul(el.matrix())
                .map_err(e)?
                .matmul(basis.p())
                .map_err(e)?;
            ensure(conj[(0, 0)].is_one(), || format!("n={n} #{i}: corner != 1"))?;
            for k in 1..n {
                ensure(conj[(0, k)].is_zero() && conj[(k, 0)].is_zero(), || {
                    format!("n={n} #{i}: not block diagonal at {k}")
                })?;
            }
            let b = conj.submatrix(1, 1, n - 1, n - 1).map_err(e)?;
            let lhs = b
                .transpose()
                .matmul(&q_prime)
                .map_err(e)?
                .matmul(&b)
                .map_err(e)?;
            ensure(lhs == q_prime, || format!("n={n} #{i}: B'^T Q' B' != Q'"))?;
            ensure(n2::to_block(el, &basis).map_err(e)? == b, || {
                format!("n={n} #{i}: to_block disagrees")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} elements, zero failures"))
}

fn ac4_block_backward() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac4);
    let mut pairs = 0;
    for n in 2..=6 {
        let basis = ConjugationBasis::standard(n).map_err(e)?;
        for i in 0..100 {
            let e1 = n2::random_element(n, &mut rng).map_err(e)?;
            let e2 = n2::random_element(n, &mut rng).map_err(e)?;
            let b1 = n2::to_block(&e1, &basis).map_err(e)?;
            let b2 = n2::to_block(&e2, &basis).map_err(e)?;
            let back = n2::from_block(&b1, &basis).map_err(e)?;
            ensure(back.matrix() == e1.matrix(), || {
                format!("n={n} #{i}: from_block(to_block(E)) != E")
            })?;
            let prod = e1.compose(&e2).map_err(e)?;
            let b12 = n2::to_block(&prod, &basis).map_err(e)?;
            ensure(b12 == b1.matmul(&b2).map_err(e)?, || {
                format!("n={n} #{i}: not multiplicative")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs over n=2..6"))
}

/// Canonical rationals of height at most `h`.
fn rationals(h: i64) -> Vec<Rational> {
    let mut out = vec![int(0)];
    for q in 1..=h {
        for p in 1..=h {
            let r = frac(p, q);
            if r.numer() == &p.into() {
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    out
}

fn ac5_n2_of_two() -> Check {
    // Analytic: M 1 = 1 gives rows (a, 1-a) and (b, 1-b). A unit row needs
    // a^2 + (1-a)^2 = 1, i.e. 2a^2 - 2a = 0, roots (2 +- sqrt(4)) / 4 = {0, 1};
    // orthogonal rows need ab + (1-a)(1-b) = 0, which forces a != b.
    let roots: Vec<Rational> = [int(2) + int(2), int(2) - int(2)]
        .into_iter()
        .map(|num| num / int(4))
        .collect();
    for a in &roots {
        ensure((a * a + (int(1) - a) * (int(1) - a)).is_one(), || {
            format!("root {a} not unit")
        })?;
    }
    let mut analytic = Vec::new();
    for a in &roots {
        for b in &roots {
            if (a * b + (int(1) - a) * (int(1) - b)).is_zero() {
                analytic.push(
                    Matrix::from_rows(vec![
                        vec![a.clone(), int(1) - a],
                        vec![b.clone(), int(1) - b],
                    ])
                    .map_err(e)?,
                );
            }
        }
    }
    let id = Matrix::identity(2);
    let swap = Matrix::from_ints(&[[0, 1], [1, 0]]);
    analytic.sort_by_key(|m| m.to_string());
    let mut want = vec![id, swap];
    want.sort_by_key(|m| m.to_string());
    ensure(analytic == want, || format!("analytic set {analytic:?}"))?;

    // brute force over all 2x2 matrices with entries of height <= 3
    let vals = rationals(3);
    let mut found = Vec::new();
    let mut scanned = 0usize;
    for a in &vals {
        for b in &vals {
            for c in &vals {
                for d in &vals {
                    scanned += 1;
                    let m = Matrix::from_rows(vec![
                        vec![a.clone(), b.clone()],
                        vec![c.clone(), d.clone()],
                    ])
                    .map_err(e)?;
                    if n2::is_member(&m) {
                        found.push(m);
                    }
                }
            }
        }
    }
    found.sort_by_key(|m| m.to_string());
    ensure(found == want, || {
        format!("brute force found {} members", found.len())
    })?;

    let basis = ConjugationBasis::standard(2).map_err(e)?;
    let mut blocks: Vec<Rational> = Vec::new();
    for m in &found {
        let b = n2::to_block(&N2Element::new(m.clone()).map_err(e)?, &basis).map_err(e)?;
        blocks.push(b[(0, 0)].clone());
    }
    blocks.sort();
    ensure(blocks == vec![int(-1), int(1)], || {
        format!("blocks {blocks:?}")
    })?;
    Ok(format!(
        "{scanned} matrices scanned, members {{I, swap}} -> blocks {{1, -1}}"
    ))
}

fn ac6_schoenberg() -> Check {
    use SchoenbergClause::*;
    let cases = [(4, Some(ZeroModFour)), (5, None), (9, Some(OddSquare))];
    for (n, want) in cases {
        let got = quadform::schoenberg_similar_to_identity(n).map_err(e)?;
        ensure(got == want, || format!("n={n}: {got:?}"))?;
    }
    for n in 2..=200u64 {
        let odd_square = n % 2 == 1 && (1..=n).any(|k| k * k == n);
        let two_squares = (0..=n).any(|a| (a..=n).any(|b| a * a + b * b == n));
        let want = if odd_square {
            Some(OddSquare)
        } else if n % 4 == 0 {
            Some(ZeroModFour)
        } else if n % 4 == 2 && two_squares {
            Some(TwoModFourSumOfTwoSquares)
        } else {
            None
        };
        let got = quadform::schoenberg_similar_to_identity(n).map_err(e)?;
        ensure(got == want, || {
            format!("n={n}: got {got:?}, brute force {want:?}")
        })?;
    }
    Ok("4 similar, 5 not, 9 similar; n=2..200 agree with brute force".into())
}

fn pts(raw: &[[i64; 2]]) -> Vec<Vec<Rational>> {
    raw.iter().map(|p| vec![int(p[0]), int(p[1])]).collect()
}

fn hexagon() -> DesignInstance {
    let q = QuadraticForm::new(
        Matrix::from_rows(vec![vec![int(1), frac(1, 2)], vec![frac(1, 2), int(1)]]).expect("2x2"),
    )
    .expect("positive definite");
    DesignInstance::new(
        q,
        int(1),
        pts(&[[1, 0], [0, 1], [-1, 0], [0, -1], [1, -1], [-1, 1]]),
        5,
    )
    .expect("on the quadric")
}

fn ac7_designs() -> Check {
    let start = Instant::now();
    let hex = hexagon();
    let five = designs::verify_design(&hex);
    ensure(five.holds, || format!("hexagon t=5: {five:?}"))?;
    let six = designs::verify_design(&hex.with_strength(6));
    ensure(!six.holds && six.failing_degree == Some(6), || {
        format!("hexagon t=6: {six:?}")
    })?;
    let tight = designs::tight_size(2, 5).map_err(e)?;
    ensure(tight == 6 && hex.points().len() == 6, || {
        format!("tight_size(2,5) = {tight}")
    })?;
    let circle = QuadraticForm::new(Matrix::identity(2)).map_err(e)?;
    let square = DesignInstance::new(circle, int(1), pts(&[[1, 0], [0, 1], [-1, 0], [0, -1]]), 3)
        .map_err(e)?;
    let sq = designs::verify_design(&square);
    ensure(sq.holds, || format!("square t=3: {sq:?}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "hexagon 5-design (t=6 sum {}), square 3-design, {:.3}s",
        six.pair_sums[5],
        elapsed.as_secs_f64()
    ))
}

/// `(a-1)!! / ((a+b)(a+b-2)...(b+2))`: integral of `sin^a cos^b` over
/// `[-pi/2, pi/2]` relative to `a = 0`, for even `a`.
fn wallis_ratio(a: usize, b: usize) -> Rational {
    (1..=a / 2).fold(int(1), |acc, i| {
        acc * frac(2 * i as i64 - 1, (2 * i + b) as i64)
    })
}

fn ac8_gegenbauer() -> Check {
    let mut pairs = 0;
    for d in 2..=6usize {
        let g = GegenbauerTable::new(d, 8).map_err(e)?;
        ensure(g.is_orthogonal(), || {
            format!("d={d}: table reports non-orthogonal")
        })?;
        // moments of the weight (1-x^2)^((d-3)/2) relative to the total mass:
        // substituting x = sin(theta) turns them into Wallis ratios
        let moments: Vec<Rational> = (0..=16)
            .map(|e| {
                if e % 2 == 0 {
                    wallis_ratio(e, d - 2)
                } else {
                    int(0)
                }
            })
            .collect();
        ensure(
            designs::normalized_even_moments(d, 8)
                == (0..=8).map(|j| moments[2 * j].clone()).collect::<Vec<_>>(),
            || format!("d={d}: moments differ"),
        )?;
        for j in 0..=8 {
            for k in j..=8 {
                let (cj, ck) = (g.coefficients(j), g.coefficients(k));
                let mut integral = int(0);
                for (a, x) in cj.iter().enumerate() {
                    for (b, y) in ck.iter().enumerate() {
                        integral += x * y * &moments[a + b];
                    }
                }
                if j == k {
                    ensure(integral > int(0), || format!("d={d} k={k}: zero norm"))?;
                } else {
                    ensure(integral.is_zero(), || {
                        format!("d={d} <G{j},G{k}> = {integral}")
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs exactly orthogonal for d=2..6, k<=8"))
}

fn ac9_points() -> Check {
    let q = QuadraticForm::diagonal(&[int(1), int(3)]).map_err(e)?;
    let base = vec![int(1), int(0)];
    let points = designs::enumerate_rational_points(&q, &int(1), &base, 10).map_err(e)?;
    ensure(points.len() >= 20, || {
        format!("only {} points", points.len())
    })?;
    for p in &points {
        ensure(q.eval(p).is_one(), || format!("{p:?} off the quadric"))?;
    }
    let chord = designs::chord_point(&q, &base, &[int(1), int(1)]).ok_or("no chord point")?;
    ensure(chord == vec![frac(1, 2), frac(-1, 2)], || {
        format!("parameter 1 gives {chord:?}")
    })?;
    Ok(format!(
        "{} distinct points on x^2+3y^2=1, parameter 1 -> (1/2, -1/2)",
        points.len()
    ))
}

fn ac10_search() -> Check {
    let hex = hexagon();
    let out = designs::search_tight_designs(
        hex.form(),
        hex.radius(),
        5,
        hex.points(),
        &SearchOptions::default(),
    )
    .map_err(e)?;
    let mut want = hex.points().to_vec();
    want.sort();
    ensure(
        out.designs.len() == 1 && out.designs[0].points() == want.as_slice(),
        || format!("hexagon pool: {:?}", out.report),
    )?;

    let preset = quadform::paper_form(5).map_err(e)?;
    let base = vec![int(1), int(0), int(0), int(0)];
    let pool = designs::enumerate_rational_points(&preset, &int(1), &base, 1).map_err(e)?;
    let opts = SearchOptions {
        budget: 50_000,
        workers: 1,
    };
    let mut lines = Vec::new();
    for t in 2..=4 {
        let start = Instant::now();
        let res = designs::search_tight_designs(&preset, &int(1), t, &pool, &opts).map_err(e)?;
        let r = &res.report;
        ensure(r.nodes_visited <= opts.budget + 1, || {
            format!("t={t}: budget overrun {r:?}")
        })?;
        ensure(r.hits == res.designs.len(), || {
            format!("t={t}: hit count mismatch")
        })?;
        for d in &res.designs {
            ensure(designs::verify_design(d).holds, || {
                format!("t={t}: reported design fails")
            })?;
        }
        lines.push(format!(
            "t={t}: {} hits of size {} in pool {} ({} nodes{}, {:.2}s)",
            r.hits,
            r.target_size,
            r.pool_size,
            r.nodes_visited,
            if r.budget_exhausted {
                ", budget exhausted"
            } else {
                ", exhaustive"
            },
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(format!(
        "hexagon recovered; diag[1,3,6,10] {}",
        lines.join("; ")
    ))
}

fn main() -> ExitCode {
    let sets = random_elements();
    let results: Vec<(&str, Check)> = vec![
        ("AC1 Fano solution end to end", ac1_fano()),
        ("AC2 Cayley parametrization", ac2_cayley(&sets)),
        ("AC3 block form, forward", ac3_block_forward(&sets)),
        (
            "AC4 block form, backward and homomorphism",
            ac4_block_backward(),
        ),
        ("AC5 N2(2) brute force", ac5_n2_of_two()),
        ("AC6 similarity classifier", ac6_schoenberg()),
        ("AC7 design verification", ac7_designs()),
        ("AC8 Gegenbauer orthogonality", ac8_gegenbauer()),
        ("AC9 rational points on x^2+3y^2=1", ac9_points()),
        ("AC10 tight design search", ac10_search()),
    ];
    let mut failed = 0;
    for (name, res) in &results {
        match res {
            Ok(msg) => println!("[PASS] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
