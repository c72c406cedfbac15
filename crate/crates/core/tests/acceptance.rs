//   Copyright 2026 rpi-core developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL
//! line per criterion, followed by indented details.

mod common;

use std::time::Instant;

use rpi_core::commands::{table1, TABLE_TOL};
use rpi_core::corpus::{corpus, exmp4};
use rpi_core::csf::{csf_approx, csf_exact_nilpotent, CsfConfig};
use rpi_core::invariant::{boundary_contact, mci_sequence_2d, mrpi, reach_aggregate, MrpiOutcome};
use rpi_core::matrix::Matrix;
use rpi_core::sets::{hull_2d, HPolytope};

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Verdict { pass, summary: summary.into(), details }
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let rows = table1(1e-4).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut details = Vec::new();
    for r in &rows {
        let e = &r.expected;
        let line = match &r.result {
            Ok(res) => format!(
                "row {:2}: M {} N {:3} lb {:.6} ub {:.6} | expected M {} N {:3} lb {:.6} ub {:.6} | {}",
                r.row,
                res.m,
                res.n,
                res.alpha_lb,
                res.alpha_ub,
                e.m,
                e.n,
                e.alpha_lb,
                e.alpha_ub,
                if r.passes() { "ok" } else { "MISMATCH" }
            ),
            Err(err) => format!("row {:2}: error {err}", r.row),
        };
        details.push(line);
    }
    let failed: Vec<usize> = rows.iter().filter(|r| !r.passes()).map(|r| r.row).collect();
    let pass = failed.is_empty() && secs < 10.0;
    Verdict::new(
        pass,
        format!("reference table, M exact, N within one, bounds within {TABLE_TOL:e}; {secs:.2} s; failing rows {failed:?}"),
        details,
    )
}

fn criterion_2() -> Verdict {
    let rows = corpus().unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for (row, target) in [(3usize, 2.0 / 3.0), (4, 0.857143)] {
        let sys = &rows[row - 1].system;
        let exact = csf_exact_nilpotent(sys, 64).unwrap();
        let bracket = csf_approx(sys, &CsfConfig::default()).unwrap();
        let ok = match exact {
            Some(x) => {
                let v = x.alpha_lb;
                (v - target).abs() <= 1e-6 && bracket.alpha_lb <= v && v <= bracket.alpha_ub
            }
            None => false,
        };
        pass &= ok;
        details.push(format!(
            "row {row}: exact {:?} (k {:?}), bracket [{:.6}, {:.6}], target {target:.6}",
            exact.map(|x| x.alpha_lb),
            exact.map(|x| x.k),
            bracket.alpha_lb,
            bracket.alpha_ub
        ));
    }
    Verdict::new(pass, "exact value for A^k = eta I inside the bracket", details)
}

fn criterion_3() -> Verdict {
    let mut pass = true;
    let mut details = Vec::new();
    for e in corpus().unwrap() {
        let start = Instant::now();
        let res = csf_approx(&e.system, &CsfConfig::default()).unwrap();
        let below = mrpi(&e.system, 0.999 * res.alpha_lb, 500).unwrap();
        let above = mrpi(&e.system, 1.001 * res.alpha_ub, 500).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let ok = matches!(below, MrpiOutcome::Determined { .. }) && matches!(above, MrpiOutcome::Empty { .. }) && secs < 5.0;
        pass &= ok;
        details.push(format!(
            "row {:2}: 0.999 lb -> {} (k {}), 1.001 ub -> {} (k {}), {secs:.2} s{}",
            e.row,
            below.status(),
            below.k(),
            above.status(),
            above.k(),
            if ok { "" } else { "  MISMATCH" }
        ));
    }
    Verdict::new(pass, "MRPI nonempty at 0.999 lb and empty at 1.001 ub, k_max 500, < 5 s per row", details)
}

fn criterion_4() -> Verdict {
    let mut pass = true;
    let mut details = Vec::new();
    let rows = corpus().unwrap();
    let (scalar, planar) = (&rows[0].system, &rows[1].system);
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0] {
        for k in 0..=20 {
            let rho = 2.0 * alpha * (1.0 - 0.5f64.powi(k as i32));
            let h1 = reach_aggregate(scalar, alpha, k).unwrap().support(&[1.0]);
            let h2 = reach_aggregate(planar, alpha, k).unwrap().support(&[1.0, 0.0]);
            worst = worst.max((h1 - rho).abs()).max((h2 - rho).abs());
        }
    }
    pass &= worst <= 1e-12;
    details.push(format!("reach support vs 2 alpha (1 - 0.5^k): largest error {worst:.1e}"));
    for alpha in [0.5, 0.9, 1.0] {
        let out = mrpi(scalar, alpha, 500).unwrap();
        let ok = match &out {
            MrpiOutcome::Determined { set, .. } => {
                let bb = set.bounding_box().unwrap()[0];
                (bb.0 + 2.0).abs() < 1e-9 && (bb.1 - 2.0).abs() < 1e-9
            }
            _ => false,
        };
        pass &= ok;
        details.push(format!("alpha {alpha}: {} (k {}), [-2, 2] {}", out.status(), out.k(), if ok { "ok" } else { "MISMATCH" }));
    }
    for alpha in [1.5f64, 2.0, 4.0] {
        let bound = (alpha / (alpha - 1.0)).log2().ceil() as usize + 1;
        let out = mrpi(scalar, alpha, 500).unwrap();
        let ok = matches!(out, MrpiOutcome::Empty { k } if k <= bound);
        pass &= ok;
        details.push(format!("alpha {alpha}: {} at k {} (bound {bound})", out.status(), out.k()));
    }
    Verdict::new(pass, "closed-form reach supports and scalar S-iteration", details)
}

fn criterion_5() -> Verdict {
    let sys = corpus().unwrap()[2].system.clone();
    let mut details = Vec::new();
    let band = HPolytope::new(Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap(), vec![2.0 / 3.0, 2.0 / 3.0]).unwrap();
    let target = sys.x.intersect(&band).unwrap();
    let out = mrpi(&sys, 2.0 / 3.0, 500).unwrap();
    let set_ok = match &out {
        MrpiOutcome::Determined { set, .. } => common::same(set, &target, 1e-7),
        _ => false,
    };
    details.push(format!("MRPI at 2/3: {} (k {}), matches |x1 - x2| <= 2/3 band: {set_ok}", out.status(), out.k()));
    let r2 = reach_aggregate(&sys, 1.0, 2).unwrap();
    let corners = [[1.5, 0.5], [0.5, 1.5], [-1.5, -0.5], [-0.5, -1.5]];
    let hull = hull_2d(&corners);
    let mut worst: f64 = 0.0;
    for i in 0..360 {
        let t = (i as f64).to_radians();
        let v = [t.cos(), t.sin()];
        let oracle = hull.vertices().iter().map(|p| p[0] * v[0] + p[1] * v[1]).fold(f64::MIN, f64::max);
        worst = worst.max((r2.support(&v) - oracle).abs());
    }
    let support_ok = worst <= 1e-12;
    details.push(format!("R_2 support vs hull of four vertices over 360 directions: largest error {worst:.1e}"));
    Verdict::new(set_ok && support_ok, "nilpotent example geometry", details)
}

fn criterion_6() -> Verdict {
    let suites: Vec<(&str, Box<dyn Fn() -> common::Outcome>)> = vec![
        ("distributive laws", Box::new(|| common::distributive_laws(11, 200))),
        ("S/R monotonicity", Box::new(|| common::monotonicity(12, 20))),
        ("direct vs recursive S_k", Box::new(|| common::direct_vs_recursion(13, 50))),
        ("exact reach scaling", Box::new(|| common::scaling_law(14, 10))),
        ("S_k continuity sandwich", Box::new(common::s_sandwich)),
        ("Q_k continuity sandwich", Box::new(|| common::q_sandwich(1.0, 0.1, 20))),
        ("reduced vs direct upper bound", Box::new(common::reduced_equals_direct)),
        ("outer bound on the reach limit", Box::new(|| common::outer_bound(15))),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, suite) in suites {
        let start = Instant::now();
        let res = suite();
        let secs = start.elapsed().as_secs_f64();
        let ok = res.is_ok() && secs < 60.0;
        pass &= ok;
        let msg = match res {
            Ok(m) | Err(m) => m,
        };
        details.push(format!("{name}: {} ({secs:.2} s) {msg}", if ok { "ok" } else { "FAIL" }));
    }
    Verdict::new(pass, "invariant property suites", details)
}

fn criterion_7() -> Verdict {
    let mut pass = true;
    let mut details = Vec::new();
    let sandwich = common::q_sandwich(1.0, 0.1, 20);
    pass &= sandwich.is_ok();
    details.push(format!("Q sandwich alpha 1 vs 1.1: {sandwich:?}"));
    let sys = exmp4().unwrap();
    let q20 = mci_sequence_2d(&sys, 1.0, 20).unwrap().pop().unwrap();
    let q_touch = boundary_contact(&q20, &sys.x).unwrap();
    pass &= !q_touch;
    details.push(format!("Q_20 at alpha 1 touches X: {q_touch}; bounding box {:?}", q20.bounding_box().unwrap()));
    let mut untouched = Vec::new();
    for e in corpus().unwrap() {
        let lb = csf_approx(&e.system, &CsfConfig::default()).unwrap().alpha_lb;
        for factor in [0.5, 0.999] {
            match mrpi(&e.system, factor * lb, 500).unwrap() {
                MrpiOutcome::Determined { set, .. } if boundary_contact(&set, &e.system.x).unwrap() => {}
                _ => untouched.push((e.row, factor)),
            }
        }
    }
    pass &= untouched.is_empty();
    details.push(format!("corpus MRPI sets at 0.5 lb and 0.999 lb without contact: {untouched:?}"));
    Verdict::new(pass, "planar MCI sandwich and boundary contact contrast", details)
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    let mut failures = 0;
    for (id, run) in criteria {
        let v = run();
        println!("criterion {id}: {} - {}", if v.pass { "PASS" } else { "FAIL" }, v.summary);
        for d in &v.details {
            println!("    {d}");
        }
        if !v.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
