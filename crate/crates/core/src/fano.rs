//! The Fano-plane solution of PTE_7 of degree 2 and the pipeline that carries it
//! into `N2(7)` and then into `O(Q')`.
//!
//! `X` is the cyclic orbit of the characteristic vector `(1,1,0,1,0,0,0)` of a
//! Fano line, `Y` the orbit of `(0,0,1,0,1,1,0)`. Row-reducing `[X Y]` gives
//! `A = I_7` and `B` the orbit of `(-1/2, 1/2, 1/2, 0, 1/2, 0, 0)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::linalg::{frac, int, Matrix, Rational};
use crate::n2::{self, ConjugationBasis};
use crate::pte::{cyclic_orbit, normalize, PteSolution};
use crate::quadform::{in_orthogonal_group, paper_form_prime};

pub fn x_generator() -> Vec<Rational> {
    [1, 1, 0, 1, 0, 0, 0].into_iter().map(int).collect()
}

pub fn y_generator() -> Vec<Rational> {
    [0, 0, 1, 0, 1, 1, 0].into_iter().map(int).collect()
}

pub fn normalized_b_generator() -> Vec<Rational> {
    vec![
        frac(-1, 2),
        frac(1, 2),
        frac(1, 2),
        int(0),
        frac(1, 2),
        int(0),
        int(0),
    ]
}

pub fn solution() -> PteSolution {
    PteSolution::new(
        2,
        cyclic_orbit(&x_generator()),
        cyclic_orbit(&y_generator()),
    )
    .expect("7x7 orbits")
}

/// The normalized pair `(A, B)`: `A` the orbit of `e_1`, `B` the orbit of
/// [`normalized_b_generator`].
pub fn expected_normalized() -> PteSolution {
    let mut e1 = vec![int(0); 7];
    e1[0] = int(1);
    PteSolution::new(
        2,
        cyclic_orbit(&e1),
        cyclic_orbit(&normalized_b_generator()),
    )
    .expect("7x7 orbits")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Ok,
    Violation,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub status: StageStatus,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub stages: Vec<Stage>,
}

impl PipelineReport {
    pub fn all_ok(&self) -> bool {
        self.stages.iter().all(|s| s.status == StageStatus::Ok)
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| s.status != StageStatus::Ok)
    }
}

struct Runner {
    stages: Vec<Stage>,
}

impl Runner {
    fn ok(&mut self, name: &'static str, detail: Value) {
        self.stages.push(Stage {
            name,
            status: StageStatus::Ok,
            detail,
        });
    }

    fn fail(mut self, name: &'static str, status: StageStatus, detail: Value) -> PipelineReport {
        self.stages.push(Stage {
            name,
            status,
            detail,
        });
        PipelineReport {
            stages: self.stages,
        }
    }
}

fn error_detail(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

/// Runs verify -> normalize -> compare -> N2(7) -> block form on `(x, y)`,
/// stopping at the first stage that does not succeed.
pub fn run_pipeline(x: &Matrix, y: &Matrix) -> PipelineReport {
    let mut run = Runner { stages: Vec::new() };

    let sol = match PteSolution::new(2, x.clone(), y.clone()) {
        Ok(s) => s,
        Err(e) => return run.fail("orbits", StageStatus::Error, error_detail(e)),
    };
    run.ok(
        "orbits",
        json!({ "r": sol.dimension(), "n": sol.size(), "X": x, "Y": y }),
    );

    let rep = sol.verify();
    if !rep.holds {
        return run.fail("verify", StageStatus::Violation, json!(rep));
    }
    run.ok("verify", json!(rep));

    let norm = match normalize(&sol) {
        Ok(n) => n,
        Err(e) => return run.fail("normalize", StageStatus::Error, error_detail(e)),
    };
    let norm_report = norm.solution.verify();
    if !norm_report.holds {
        return run.fail("normalize", StageStatus::Violation, json!(norm_report));
    }
    run.ok(
        "normalize",
        json!({ "A": norm.solution.a(), "B": norm.solution.b(), "pivots_in_b": norm.pivots_in_b }),
    );

    let expected = expected_normalized();
    if norm.solution != expected {
        return run.fail(
            "compare",
            StageStatus::Violation,
            json!({ "expected": expected, "found": norm.solution }),
        );
    }
    run.ok("compare", json!({ "matches_stated_normal_form": true }));

    let elem = match n2::from_pte(norm.solution.a(), norm.solution.b()) {
        Ok(e) => e,
        Err(e) => return run.fail("n2", StageStatus::Violation, error_detail(e)),
    };
    run.ok("n2", json!({ "element": elem.matrix() }));

    let block = match ConjugationBasis::standard(7).and_then(|b| n2::to_block(&elem, &b)) {
        Ok(b) => b,
        Err(e) => return run.fail("block", StageStatus::Violation, error_detail(e)),
    };
    let certified: Result<bool> = paper_form_prime(7).and_then(|q| in_orthogonal_group(&block, &q));
    match certified {
        Ok(true) => run.ok(
            "block",
            json!({ "block": block, "q_prime": paper_form_prime(7).map(|q| q.gram().clone()).ok() }),
        ),
        Ok(false) => {
            return run.fail(
                "block",
                StageStatus::Violation,
                json!({ "block": block, "reason": "B'^T Q' B' != Q'" }),
            )
        }
        Err(e) => return run.fail("block", StageStatus::Error, error_detail(e)),
    }
    PipelineReport { stages: run.stages }
}

/// The pipeline on the bundled orbits.
pub fn demo() -> PipelineReport {
    let sol = solution();
    run_pipeline(sol.a(), sol.b())
}
