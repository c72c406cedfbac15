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

//! Seeded invariant suites shared by the property tests and the
//! acceptance harness. Each returns a short summary or a failure message.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpi_core::corpus::{corpus, exmp4};
use rpi_core::csf::{alpha_bar, alpha_bar_direct, csf_approx, CsfConfig};
use rpi_core::invariant::{mci_sequence_2d, reach_aggregate, s_direct, s_step, SState, Step, SystemSpec};
use rpi_core::matrix::Matrix;
use rpi_core::sets::{HPolytope, SupportSet};
use rpi_core::Error;

pub type Outcome = Result<String, String>;

pub const CONTAIN_TOL: f64 = 1e-7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn same(p: &HPolytope, q: &HPolytope, tol: f64) -> bool {
    p.contains_tol(q, tol).unwrap() && q.contains_tol(p, tol).unwrap()
}

pub fn unit_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-3 {
            return v.iter().map(|x| x / len).collect();
        }
    }
}

/// Random planar system with both eigenvalues inside `rho_max`, a single
/// controllable input, a box constraint cut by one extra random row, and a
/// box disturbance.
pub fn random_stable_system(rng: &mut ChaCha8Rng, rho_max: f64) -> SystemSpec {
    loop {
        let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = Matrix::new(2, 2, entries).unwrap();
        let rho = a.eigen_magnitudes(1e-9).unwrap().spectral_radius;
        if rho < 1e-3 {
            continue;
        }
        let a = a.scale(rng.gen_range(0.2..rho_max) / rho);
        let e = Matrix::new(2, 1, vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
        let w = [rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)];
        let cut_dir = unit_direction(rng, 2);
        let cut_len = rng.gen_range(0.2..1.5);
        let cut = HPolytope::new(
            Matrix::from_rows(&[[cut_dir[0] * cut_len, cut_dir[1] * cut_len]]).unwrap(),
            vec![1.0],
        )
        .unwrap();
        let x = HPolytope::from_box(&w).unwrap().intersect(&cut).unwrap();
        let d = SupportSet::boxed(&[rng.gen_range(0.2..1.0)]).unwrap();
        let sys = SystemSpec::new("random", a, e, 2, x, d).unwrap();
        if sys.structure().unwrap().passes() {
            return sys;
        }
    }
}

fn random_planar_set(rng: &mut ChaCha8Rng) -> SupportSet {
    match rng.gen_range(0..3) {
        0 => SupportSet::boxed(&[rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)]).unwrap(),
        1 => {
            let gens = (0..rng.gen_range(1..5))
                .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            SupportSet::zonotope(2, gens).unwrap()
        }
        _ => {
            // Symmetric vertex sets always contain the origin.
            let mut verts = Vec::new();
            for _ in 0..rng.gen_range(2..5) {
                let v = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                verts.push(v.iter().map(|x| -x).collect());
                verts.push(v);
            }
            SupportSet::vpolytope(2, verts).unwrap()
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// Scaling distributes over Minkowski sums, Pontryagin differences and
/// intersections.
pub fn distributive_laws(seed: u64, cases: usize) -> Outcome {
    let mut rng = rng(seed);
    for case in 0..cases {
        let (u, v) = (random_planar_set(&mut rng), random_planar_set(&mut rng));
        let beta = rng.gen_range(0.1..5.0);
        let sum = SupportSet::aggregate(2, vec![(Matrix::identity(2), u.clone()), (Matrix::identity(2), v.clone())]).unwrap();
        let scaled_sum = sum.scaled(beta).unwrap();
        let sum_scaled = SupportSet::aggregate(
            2,
            vec![(Matrix::identity(2), u.scaled(beta).unwrap()), (Matrix::identity(2), v.scaled(beta).unwrap())],
        )
        .unwrap();
        for _ in 0..32 {
            let dir = unit_direction(&mut rng, 2);
            if !close(scaled_sum.support(&dir), sum_scaled.support(&dir)) {
                return Err(format!("case {case}: beta (U + V) differs from beta U + beta V along {dir:?}"));
            }
        }

        let p = HPolytope::from_box(&[rng.gen_range(3.0..6.0), rng.gen_range(3.0..6.0)]).unwrap();
        let q = HPolytope::new(Matrix::from_rows(&[unit_direction(&mut rng, 2)]).unwrap(), vec![rng.gen_range(0.5..2.0)]).unwrap();
        let lhs = p.pontryagin_diff(&u).unwrap().scale(beta);
        let rhs = p.scale(beta).unwrap().pontryagin_diff(&u.scaled(beta).unwrap()).unwrap();
        match lhs {
            Ok(lhs) => {
                if !lhs.b().iter().zip(rhs.b()).all(|(a, b)| close(*a, *b)) {
                    return Err(format!("case {case}: beta (P - U) differs from beta P - beta U"));
                }
            }
            // P - U has a non-positive offset; compare raw offsets instead.
            Err(_) => {
                let raw: Vec<f64> = p.pontryagin_diff(&u).unwrap().b().iter().map(|b| beta * b).collect();
                if !raw.iter().zip(rhs.b()).all(|(a, b)| close(*a, *b)) {
                    return Err(format!("case {case}: beta (P - U) offsets differ"));
                }
            }
        }
        let two_step = p.pontryagin_diff(&u).unwrap().pontryagin_diff(&v).unwrap();
        let one_step = p.pontryagin_diff(&sum).unwrap();
        if !two_step.b().iter().zip(one_step.b()).all(|(a, b)| close(*a, *b)) {
            return Err(format!("case {case}: (P - U) - V differs from P - (U + V)"));
        }

        let lhs = p.intersect(&q).unwrap().scale(beta).unwrap();
        let rhs = p.scale(beta).unwrap().intersect(&q.scale(beta).unwrap()).unwrap();
        if !same(&lhs, &rhs, 1e-9) {
            return Err(format!("case {case}: beta (P ∩ Q) differs from beta P ∩ beta Q"));
        }
    }
    Ok(format!("{cases} random set pairs"))
}

/// `S_k` non-increasing and `R_k` supports non-decreasing.
pub fn monotonicity(seed: u64, systems: usize) -> Outcome {
    let mut rng = rng(seed);
    for s in 0..systems {
        let sys = random_stable_system(&mut rng, 0.95);
        let alpha = rng.gen_range(0.05..1.0) * csf_approx(&sys, &CsfConfig::default()).unwrap().alpha_lb;
        let mut state = SState::initial(&sys).unwrap();
        for _ in 0..8 {
            match s_step(&sys, alpha, &state).unwrap() {
                Step::Next { state: next, .. } => {
                    if !state.set().contains_tol(next.set(), CONTAIN_TOL).unwrap() {
                        return Err(format!("system {s}: S_{} not inside S_{}", next.k(), state.k()));
                    }
                    state = next;
                }
                Step::Empty { k } => return Err(format!("system {s}: S_{k} empty below the bracket")),
            }
        }
        let dirs: Vec<Vec<f64>> = (0..100).map(|_| unit_direction(&mut rng, 2)).collect();
        let mut prev = reach_aggregate(&sys, alpha, 0).unwrap();
        for k in 1..=20 {
            let next = reach_aggregate(&sys, alpha, k).unwrap();
            for v in &dirs {
                if next.support(v) < prev.support(v) - 1e-12 {
                    return Err(format!("system {s}: h(R_{k}) below h(R_{}) along {v:?}", k - 1));
                }
            }
            prev = next;
        }
    }
    Ok(format!("{systems} random systems, 8 S-steps and 20 R-steps each"))
}

/// `R_k^alpha = alpha R_k^1` exactly, support by support.
pub fn scaling_law(seed: u64, systems: usize) -> Outcome {
    let mut rng = rng(seed);
    for s in 0..systems {
        let sys = random_stable_system(&mut rng, 0.95);
        for k in 0..=20 {
            let alpha = rng.gen_range(0.01..10.0);
            let r_alpha = reach_aggregate(&sys, alpha, k).unwrap();
            let r_one = reach_aggregate(&sys, 1.0, k).unwrap();
            for _ in 0..10 {
                let v = unit_direction(&mut rng, 2);
                if r_alpha.support(&v) != alpha * r_one.support(&v) {
                    return Err(format!("system {s}, k {k}: scaling is not exact"));
                }
            }
        }
    }
    Ok(format!("{systems} random systems, k <= 20, bit-exact"))
}

/// Direct stacking of `S_k` agrees with the one-step recursion.
pub fn direct_vs_recursion(seed: u64, systems: usize) -> Outcome {
    let mut rng = rng(seed);
    let mut empties = 0;
    for s in 0..systems {
        let sys = random_stable_system(&mut rng, 0.95);
        let lb = csf_approx(&sys, &CsfConfig::default()).unwrap().alpha_lb;
        let alpha = rng.gen_range(0.2..1.5) * lb;
        let mut state = Some(SState::initial(&sys).unwrap());
        for k in 0..=6 {
            let direct = s_direct(&sys, alpha, k);
            match (&state, direct) {
                (Some(st), Ok(d)) => {
                    if !same(st.set(), &d, CONTAIN_TOL) {
                        return Err(format!("system {s}, k {k}: direct and recursive S_k differ"));
                    }
                }
                (None, Err(Error::EmptySet)) => {}
                (st, d) => {
                    return Err(format!(
                        "system {s}, k {k}: recursion {} but direct {}",
                        if st.is_some() { "nonempty" } else { "empty" },
                        if d.is_ok() { "nonempty" } else { "empty" }
                    ))
                }
            }
            if k == 6 {
                break;
            }
            state = match state.as_ref().map(|st| s_step(&sys, alpha, st).unwrap()) {
                Some(Step::Next { state, .. }) => Some(state),
                _ => None,
            };
        }
        if state.is_none() {
            empties += 1;
        }
    }
    Ok(format!("{systems} random systems, k <= 6 ({empties} became empty)"))
}

fn s_sequence(sys: &SystemSpec, alpha: f64, steps: usize) -> Result<Vec<HPolytope>, String> {
    let mut state = SState::initial(sys).unwrap();
    let mut out = vec![state.set().clone()];
    for _ in 0..steps {
        match s_step(sys, alpha, &state).unwrap() {
            Step::Next { state: next, .. } => {
                out.push(next.set().clone());
                state = next;
            }
            Step::Empty { k } => return Err(format!("S_{k} empty at alpha {alpha}")),
        }
    }
    Ok(out)
}

/// `η S_k^α ⊆ S_k^{α+δ} ⊆ S_k^α` with `δ = (1-η)(α_lb - α)`.
pub fn s_sandwich() -> Outcome {
    let rows = corpus().unwrap();
    for e in &rows {
        let lb = csf_approx(&e.system, &CsfConfig::default()).unwrap().alpha_lb;
        let alpha = 0.5 * lb;
        let base = s_sequence(&e.system, alpha, 5)?;
        for eta in [0.5, 0.9] {
            let delta = (1.0 - eta) * (lb - alpha);
            let bumped = s_sequence(&e.system, alpha + delta, 5)?;
            for (k, (s, t)) in base.iter().zip(&bumped).enumerate() {
                if !t.contains_tol(&s.scale(eta).unwrap(), CONTAIN_TOL).unwrap() {
                    return Err(format!("row {}: eta S_{k} not inside S_{k} at alpha + delta (eta {eta})", e.row));
                }
                if !s.contains_tol(t, CONTAIN_TOL).unwrap() {
                    return Err(format!("row {}: S_{k} at alpha + delta not inside S_{k} (eta {eta})", e.row));
                }
            }
        }
    }
    Ok(format!("{} corpus rows, eta in {{0.5, 0.9}}, k <= 5", rows.len()))
}

/// `(α/(α+δ)) Q_k^{α+δ} ⊆ Q_k^α ⊆ Q_k^{α+δ}` on the planar unstable system.
pub fn q_sandwich(alpha: f64, delta: f64, steps: usize) -> Outcome {
    let sys = exmp4().unwrap();
    let lo = mci_sequence_2d(&sys, alpha, steps).map_err(|e| e.to_string())?;
    let hi = mci_sequence_2d(&sys, alpha + delta, steps).map_err(|e| e.to_string())?;
    let shrink = alpha / (alpha + delta);
    for (k, (q, r)) in lo.iter().zip(&hi).enumerate() {
        if !q.contains_tol(&r.scale(shrink).unwrap(), CONTAIN_TOL).unwrap() {
            return Err(format!("k {k}: scaled Q at alpha + delta not inside Q at alpha"));
        }
        if !r.contains_tol(q, CONTAIN_TOL).unwrap() {
            return Err(format!("k {k}: Q at alpha not inside Q at alpha + delta"));
        }
    }
    Ok(format!("alpha {alpha}, delta {delta}, k <= {steps}"))
}

/// Reduced and full-space upper bounds coincide.
pub fn reduced_equals_direct() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in corpus().unwrap() {
        let res = csf_approx(&e.system, &CsfConfig::default()).unwrap();
        let reduced = alpha_bar(&e.system, res.m, res.n).unwrap();
        let direct = alpha_bar_direct(&e.system, res.m * res.n).unwrap();
        let diff = (reduced - direct).abs();
        if diff > 1e-10 {
            return Err(format!("row {}: reduced {reduced} vs direct {direct}", e.row));
        }
        worst = worst.max(diff);
    }
    Ok(format!("11 corpus rows, largest difference {worst:.1e}"))
}

/// `h(R_{10k}) <= h(R_k) / (1 - η)` with `k = M N`.
pub fn outer_bound(seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let cfg = CsfConfig::default();
    let eta = cfg.eps / (1.0 + cfg.eps);
    for e in corpus().unwrap() {
        let res = csf_approx(&e.system, &cfg).unwrap();
        let short = reach_aggregate(&e.system, 1.0, res.k).unwrap();
        let long = reach_aggregate(&e.system, 1.0, 10 * res.k).unwrap();
        for _ in 0..100 {
            let v = unit_direction(&mut rng, e.system.dim());
            let (hs, hl) = (short.support(&v), long.support(&v));
            if hl > hs / (1.0 - eta) + 1e-12 * (1.0 + hl) {
                return Err(format!("row {}: h(R_10k) = {hl} exceeds {} along {v:?}", e.row, hs / (1.0 - eta)));
            }
        }
    }
    Ok("11 corpus rows, 100 directions each".into())
}
