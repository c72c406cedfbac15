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

//! Invariant-set sequences of `x+ = A x + E d`, `x in X`, `d in alpha D*`.
//!
//! `S_k` shrinks towards the maximal RPI set, `R_k` grows towards the
//! minimal one, and `Q_k` is the planar controlled-invariance analogue
//! where `d` acts as an input.

use crate::error::{Error, Result};
use crate::matrix::{norm2, verify_structure, Matrix, StructureReport, DEFAULT_TOL};
use crate::sets::{h_to_v_2d, hull_2d, minkowski_v_2d, v_to_h_2d, HPolytope, SupportSet, ZERO_ROW_TOL};

/// Tolerance for deciding that a set touches a constraint facet.
pub const CONTACT_TOL: f64 = 1e-7;

/// Default step limit for the MRPI iteration.
pub const DEFAULT_K_MAX: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub label: String,
    pub a: Matrix,
    pub e: Matrix,
    /// Dimension of the controllable block.
    pub r: usize,
    /// Constraint set with unit offsets.
    pub x: HPolytope,
    /// Unit disturbance set `D*`.
    pub d: SupportSet,
}

impl SystemSpec {
    /// Checks shapes only; structure and stability are checked by
    /// [`SystemSpec::structure`] where a computation needs them.
    pub fn new(label: &str, a: Matrix, e: Matrix, r: usize, x: HPolytope, d: SupportSet) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if e.rows() != n || e.cols() != d.dim() {
            return Err(Error::Dimension(format!(
                "E is {}x{}, expected {n}x{}",
                e.rows(),
                e.cols(),
                d.dim()
            )));
        }
        if x.dim() != n {
            return Err(Error::Dimension(format!("X lives in R^{} but A is {n}x{n}", x.dim())));
        }
        if !x.is_normalized() {
            return Err(Error::NotCSet("X must be given with unit offsets".into()));
        }
        if r == 0 || r > n {
            return Err(Error::Dimension(format!("r = {r} outside 1..={n}")));
        }
        Ok(SystemSpec { label: label.into(), a, e, r, x, d })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn structure(&self) -> Result<StructureReport> {
        verify_structure(&self.a, &self.e, self.r, DEFAULT_TOL)
    }
}

/// `R_k^alpha = alpha (⊕_{j<k} A^j E D*)`; `R_0 = {0}`.
pub fn reach_aggregate(sys: &SystemSpec, alpha: f64, k: usize) -> Result<SupportSet> {
    let mut terms = Vec::with_capacity(k);
    let mut power = sys.e.clone();
    for _ in 0..k {
        terms.push((power.clone(), sys.d.clone()));
        power = sys.a.mul(&power)?;
    }
    SupportSet::aggregate(sys.dim(), terms)?.scaled(alpha)
}

/// One point of the `S_k` recursion together with what the next step
/// needs: `A^k` and the unscaled reach supports `sum_{j<k} h_D(H_i A^j E)`
/// for every row of `X`.
#[derive(Debug, Clone)]
pub struct SState {
    set: HPolytope,
    k: usize,
    power: Matrix,
    reach: Vec<f64>,
    radius: Vec<f64>,
}

impl SState {
    /// `S_0 = X`.
    pub fn initial(sys: &SystemSpec) -> Result<Self> {
        let radius = sys.x.bounding_box()?.iter().map(|(lo, hi)| lo.abs().max(hi.abs())).collect();
        Ok(SState {
            set: sys.x.clone(),
            k: 0,
            power: Matrix::identity(sys.dim()),
            reach: vec![0.0; sys.x.n_rows()],
            radius,
        })
    }

    pub fn set(&self) -> &HPolytope {
        &self.set
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Same step index and history with a different current set.
    pub fn with_set(&self, set: HPolytope) -> Self {
        SState { set, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub enum Step {
    Next { state: SState, changed: bool },
    Empty { k: usize },
}

/// `S_{k+1} = (A^{k+1})^{-1}(X ⊖ R_{k+1}) ∩ S_k`.
///
/// New rows are first compared with the bound `|c . x| <= sum_j |c_j| r_j`
/// over the bounding box of `X` (which contains `S_k`): rows whose offset
/// exceeds it are dropped, rows whose offset is below its negative prove
/// emptiness. Remaining rows are scaled to unit norm and the stack is
/// reduced.
pub fn s_step(sys: &SystemSpec, alpha: f64, state: &SState) -> Result<Step> {
    let k1 = state.k + 1;
    let ake = state.power.mul(&sys.e)?;
    let power = sys.a.mul(&state.power)?;
    let mut reach = state.reach.clone();
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for (i, hx) in sys.x.h().row_iter().enumerate() {
        reach[i] += sys.d.support(&ake.vec_mul(hx));
        let row = power.vec_mul(hx);
        let offset = 1.0 - alpha * reach[i];
        let len = norm2(&row);
        if len <= ZERO_ROW_TOL {
            if offset < -DEFAULT_TOL {
                return Ok(Step::Empty { k: k1 });
            }
            continue;
        }
        let bound: f64 = row.iter().zip(&state.radius).map(|(c, r)| c.abs() * r).sum();
        if offset >= bound {
            continue;
        }
        if offset < -bound {
            return Ok(Step::Empty { k: k1 });
        }
        rows.push(row.iter().map(|v| v / len).collect::<Vec<f64>>());
        b.push(offset / len);
    }
    let mut next = SState { set: state.set.clone(), k: k1, power, reach, radius: state.radius.clone() };
    if rows.is_empty() {
        return Ok(Step::Next { state: next, changed: false });
    }
    let cut = HPolytope::new(Matrix::from_rows(&rows)?, b)?;
    let set = match state.set.intersect(&cut)?.reduce() {
        Ok(set) => set,
        Err(Error::EmptySet) => return Ok(Step::Empty { k: k1 }),
        Err(e) => return Err(e),
    };
    let changed = !set.contains(&state.set)?;
    next.set = set;
    Ok(Step::Next { state: next, changed })
}

#[derive(Debug, Clone, PartialEq)]
pub enum MrpiOutcome {
    /// `S_{k+1} = S_k = set`.
    Determined { set: HPolytope, k: usize },
    /// `S_k` is empty.
    Empty { k: usize },
    /// No fixed point within `k_max` steps; `last` is `S_{k_max}`.
    Undetermined { k_max: usize, last: HPolytope },
}

impl MrpiOutcome {
    /// `Some(true)` for a nonempty MRPI set, `Some(false)` for an empty one,
    /// `None` when undetermined.
    pub fn exists(&self) -> Option<bool> {
        match self {
            MrpiOutcome::Determined { .. } => Some(true),
            MrpiOutcome::Empty { .. } => Some(false),
            MrpiOutcome::Undetermined { .. } => None,
        }
    }

    pub fn set(&self) -> Option<&HPolytope> {
        match self {
            MrpiOutcome::Determined { set, .. } => Some(set),
            MrpiOutcome::Undetermined { last, .. } => Some(last),
            MrpiOutcome::Empty { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            MrpiOutcome::Determined { .. } => "determined",
            MrpiOutcome::Empty { .. } => "empty",
            MrpiOutcome::Undetermined { .. } => "undetermined",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            MrpiOutcome::Determined { k, .. } | MrpiOutcome::Empty { k } => *k,
            MrpiOutcome::Undetermined { k_max, .. } => *k_max,
        }
    }
}

/// Maximal RPI set for `alpha D*` by iterating [`s_step`] until the set
/// stops changing.
pub fn mrpi(sys: &SystemSpec, alpha: f64, k_max: usize) -> Result<MrpiOutcome> {
    if !(alpha > 0.0) || k_max == 0 {
        return Err(Error::Dimension(format!("need alpha > 0 and k_max >= 1, got {alpha} and {k_max}")));
    }
    let mut state = SState::initial(sys)?;
    while state.k < k_max {
        match s_step(sys, alpha, &state)? {
            Step::Empty { k } => return Ok(MrpiOutcome::Empty { k }),
            Step::Next { state: next, changed } => {
                if !changed {
                    return Ok(MrpiOutcome::Determined { set: next.set, k: state.k });
                }
                state = next;
            }
        }
    }
    Ok(MrpiOutcome::Undetermined { k_max, last: state.set })
}

/// `S_k = ∩_{j=0}^{k} (A^j)^{-1}(X ⊖ R_j)` assembled in one stack. Fails
/// with [`Error::EmptySet`] when the result is empty.
pub fn s_direct(sys: &SystemSpec, alpha: f64, k: usize) -> Result<HPolytope> {
    let mut acc = sys.x.clone();
    let mut power = Matrix::identity(sys.dim());
    for j in 1..=k {
        power = sys.a.mul(&power)?;
        let shrunk = sys.x.pontryagin_diff(&reach_aggregate(sys, alpha, j)?)?;
        acc = acc.intersect(&shrunk.preimage(&power)?)?;
    }
    acc.reduce()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// `alpha` lies in the bracket or the iteration did not settle.
    Inconclusive,
    Inconsistent,
}

/// Compare an MRPI outcome with a bracket `[lb, ub]` on the critical
/// scaling factor: the set must be nonempty below `lb` and empty above `ub`.
pub fn mrpi_consistency(outcome: &MrpiOutcome, alpha: f64, lb: f64, ub: f64) -> Consistency {
    if (lb..=ub).contains(&alpha) {
        return Consistency::Inconclusive;
    }
    match outcome.exists() {
        None => Consistency::Inconclusive,
        Some(nonempty) if nonempty == (alpha < lb) => Consistency::Consistent,
        Some(_) => Consistency::Inconsistent,
    }
}

/// True when `p` reaches some facet of the normalized set `x`.
pub fn boundary_contact(p: &HPolytope, x: &HPolytope) -> Result<bool> {
    for row in x.h().row_iter() {
        if p.support(row)? >= 1.0 - CONTACT_TOL {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `delta = eps * min(alpha, (alpha_star - alpha) / (1 + eps))`.
pub fn continuity_delta(alpha: f64, eps: f64, alpha_star: f64) -> f64 {
    eps * alpha.min((alpha_star - alpha) / (1.0 + eps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub delta: f64,
    /// `P^{alpha+delta} ⊆ P^alpha`.
    pub inner: Option<bool>,
    /// `P^alpha ⊆ (1+eps) P^{alpha+delta}`.
    pub outer: Option<bool>,
    /// `R^alpha ⊆ R^{alpha+delta} ⊆ (1+eps) R^alpha` on every probe direction.
    pub reach: bool,
}

impl ContinuityReport {
    pub fn holds(&self) -> bool {
        self.inner == Some(true) && self.outer == Some(true) && self.reach
    }
}

/// Continuity sandwich with `delta` from [`continuity_delta`], using `lb`
/// in place of the critical scaling factor.
pub fn continuity_check(sys: &SystemSpec, alpha: f64, eps: f64, lb: f64, k_max: usize) -> Result<ContinuityReport> {
    continuity_check_with_delta(sys, alpha, eps, continuity_delta(alpha, eps, lb), k_max)
}

/// The MRPI comparisons are `None` when either set is undetermined or
/// empty. The reach side probes the rows of `X` and their negatives on
/// `R_k` with `k = k_max`.
pub fn continuity_check_with_delta(
    sys: &SystemSpec,
    alpha: f64,
    eps: f64,
    delta: f64,
    k_max: usize,
) -> Result<ContinuityReport> {
    let lo = mrpi(sys, alpha, k_max)?;
    let hi = mrpi(sys, alpha + delta, k_max)?;
    let (inner, outer) = match (&lo, &hi) {
        (MrpiOutcome::Determined { set: p, .. }, MrpiOutcome::Determined { set: q, .. }) => {
            (Some(p.contains_tol(q, CONTACT_TOL)?), Some(q.scale(1.0 + eps)?.contains_tol(p, CONTACT_TOL)?))
        }
        _ => (None, None),
    };
    let r_lo = reach_aggregate(sys, alpha, k_max)?;
    let r_hi = reach_aggregate(sys, alpha + delta, k_max)?;
    let mut reach = true;
    for row in sys.x.h().row_iter() {
        for sign in [1.0, -1.0] {
            let v: Vec<f64> = row.iter().map(|c| sign * c).collect();
            let (a, b) = (r_lo.support(&v), r_hi.support(&v));
            reach &= a <= b + 1e-12 && b <= (1.0 + eps) * a + 1e-12;
        }
    }
    Ok(ContinuityReport { delta, inner, outer, reach })
}

/// `Q_{k+1} = A^{-1}(Q_k ⊕ (-E alpha D*)) ∩ X` for planar systems.
pub fn mci_step_2d(sys: &SystemSpec, alpha: f64, q: &HPolytope) -> Result<HPolytope> {
    if sys.dim() != 2 {
        return Err(Error::Dimension(format!("planar MCI step needs n = 2, got {}", sys.dim())));
    }
    let verts = h_to_v_2d(q)?;
    let dist = sys.d.image(&sys.e.scale(-alpha))?;
    let pts: Vec<[f64; 2]> = dist.candidate_points().iter().map(|p| [p[0], p[1]]).collect();
    let dist = hull_2d(&pts);
    let sum = minkowski_v_2d(verts.vertices(), dist.vertices());
    v_to_h_2d(&sum)?.preimage(&sys.a)?.intersect(&sys.x)?.reduce()
}

/// `[Q_0, ..., Q_steps]` with `Q_0 = X`.
pub fn mci_sequence_2d(sys: &SystemSpec, alpha: f64, steps: usize) -> Result<Vec<HPolytope>> {
    let mut out = vec![sys.x.clone()];
    for _ in 0..steps {
        let next = mci_step_2d(sys, alpha, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}
