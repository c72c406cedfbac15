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

//! Certified bracket on the critical scaling factor
//! `alpha* = sup { alpha : the MRPI set for alpha D* is nonempty }`.
//!
//! The bracket comes from the reduced dynamics on the controllable block:
//! `W = ⊕_{k<M} A11^k E1 D*` is full-dimensional in `R^r`, and once
//! `Λ^N W ⊆ η W` for `Λ = A11^M` the finite sum of `N` reduced terms
//! overestimates `alpha*` by at most a factor `1 + eps`.

use crate::error::{Error, Result};
use crate::invariant::SystemSpec;
use crate::matrix::{controllability_matrix, Matrix, DEFAULT_TOL};
use crate::sets::{zonotope_facets, HPolytope, SupportSet};

/// Slack on the contraction test `max_i h_W(H_w,i Λ^N) <= η`.
pub const ETA_SLACK: f64 = 1e-12;

/// Entry tolerance when testing `A^k = η I`.
pub const SCALAR_POWER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsfConfig {
    /// Target relative gap between the bounds.
    pub eps: f64,
    /// Largest `N` tried.
    pub n_max: usize,
    /// Largest power tried for `A^k = η I`.
    pub k_cap: usize,
}

impl Default for CsfConfig {
    fn default() -> Self {
        CsfConfig { eps: 1e-4, n_max: 100_000, k_cap: 64 }
    }
}

impl CsfConfig {
    pub fn with_eps(eps: f64) -> Self {
        CsfConfig { eps, ..CsfConfig::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) || self.n_max == 0 || self.k_cap == 0 {
            return Err(Error::Dimension(format!("invalid csf settings {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsfMethod {
    Algorithm1,
    NilpotentExact,
}

impl CsfMethod {
    pub fn name(self) -> &'static str {
        match self {
            CsfMethod::Algorithm1 => "algorithm1",
            CsfMethod::NilpotentExact => "nilpotent-exact",
        }
    }
}

/// `alpha_lb <= alpha* <= alpha_ub`. For the exact method `m` and `n` are
/// zero, `k` is the power with `A^k = η I` and both bounds coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsfResult {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub alpha_lb: f64,
    pub alpha_ub: f64,
    pub eps: f64,
    pub method: CsfMethod,
}

fn split(sys: &SystemSpec) -> (Matrix, Matrix) {
    let r = sys.r;
    (sys.a.block(0, r, 0, r), sys.e.block(0, r, 0, sys.e.cols()))
}

fn require_assumptions(sys: &SystemSpec) -> Result<()> {
    let report = sys.structure()?;
    if !report.passes() {
        return Err(Error::Structure(report.failures().join("; ")));
    }
    Ok(())
}

/// Smallest `M` with `rank [E1, A11 E1, ..., A11^{M-1} E1] = r`.
pub fn select_m(sys: &SystemSpec) -> Result<usize> {
    let (a11, e1) = split(sys);
    for m in 1..=sys.r {
        if controllability_matrix(&a11, &e1, m)?.rank(DEFAULT_TOL) == sys.r {
            return Ok(m);
        }
    }
    Err(Error::Structure(format!("(A11, E1) is not controllable within {} blocks", sys.r)))
}

/// `W = ⊕_{k<M} A11^k E1 D*` and its normalized facets `H_w`.
pub fn build_w(sys: &SystemSpec, m: usize) -> Result<(SupportSet, HPolytope)> {
    let (a11, e1) = split(sys);
    let mut terms = Vec::with_capacity(m);
    let mut term = e1;
    for _ in 0..m {
        terms.push((term.clone(), sys.d.clone()));
        term = a11.mul(&term)?;
    }
    let w = SupportSet::aggregate(sys.r, terms)?;
    let facets = zonotope_facets(&w)?;
    Ok((w, facets))
}

/// Smallest `N` in `1..=n_max` with `max_i h_W(H_w,i Λ^N) <= η`.
pub fn find_n(w: &SupportSet, hw: &HPolytope, lambda: &Matrix, eta: f64, n_max: usize) -> Result<usize> {
    let mut power = lambda.clone();
    for n in 1..=n_max {
        let worst = hw.h().row_iter().map(|row| w.support(&power.vec_mul(row))).fold(0.0, f64::max);
        if worst <= eta + ETA_SLACK {
            return Ok(n);
        }
        power = power.mul(lambda)?;
    }
    let spectral_radius = lambda.eigen_magnitudes(DEFAULT_TOL).map(|s| s.spectral_radius).unwrap_or(f64::NAN);
    Err(Error::NSearchExhausted { n_max, spectral_radius })
}

/// `min_i 1 / sum_{j<N} h_W(H_x⁻,i Λ^j)` over the rows of
/// `X⁻ = {x1 : (x1, 0) in X}` with a positive sum.
pub fn alpha_bar(sys: &SystemSpec, m: usize, n: usize) -> Result<f64> {
    let (a11, _) = split(sys);
    let (w, _) = build_w(sys, m)?;
    let lambda = a11.pow(m)?;
    let reduced = sys.x.project_controllable(sys.r)?;
    let mut best = f64::INFINITY;
    for row in reduced.h().row_iter() {
        let mut v = row.to_vec();
        let mut sum = 0.0;
        for _ in 0..n {
            sum += w.support(&v);
            v = lambda.vec_mul(&v);
        }
        if sum > 0.0 {
            best = best.min(1.0 / sum);
        }
    }
    if best.is_infinite() {
        return Err(Error::InvisibleDisturbance);
    }
    Ok(best)
}

/// `min_i 1 / sum_{j<k} h_D(H_x,i A^j E)` in the full state space.
pub fn alpha_bar_direct(sys: &SystemSpec, k: usize) -> Result<f64> {
    let mut best = f64::INFINITY;
    for row in sys.x.h().row_iter() {
        let mut v = row.to_vec();
        let mut sum = 0.0;
        for _ in 0..k {
            sum += sys.d.support(&sys.e.vec_mul(&v));
            v = sys.a.vec_mul(&v);
        }
        if sum > 0.0 {
            best = best.min(1.0 / sum);
        }
    }
    if best.is_infinite() {
        return Err(Error::InvisibleDisturbance);
    }
    Ok(best)
}

/// Bracket `[ᾱ / (1 + eps), ᾱ]` with relative gap `eps`.
pub fn csf_approx(sys: &SystemSpec, cfg: &CsfConfig) -> Result<CsfResult> {
    cfg.validate()?;
    require_assumptions(sys)?;
    let m = select_m(sys)?;
    let (w, hw) = build_w(sys, m)?;
    let (a11, _) = split(sys);
    let lambda = a11.pow(m)?;
    let eta = cfg.eps / (1.0 + cfg.eps);
    let n = find_n(&w, &hw, &lambda, eta, cfg.n_max)?;
    let ub = alpha_bar(sys, m, n)?;
    Ok(CsfResult {
        m,
        n,
        k: m * n,
        alpha_lb: ub / (1.0 + cfg.eps),
        alpha_ub: ub,
        eps: cfg.eps,
        method: CsfMethod::Algorithm1,
    })
}

/// Exact `alpha* = (1 - η) ᾱ_direct(k)` when some `A^k = η I` with
/// `0 <= η < 1` and `k <= k_cap`.
pub fn csf_exact_nilpotent(sys: &SystemSpec, k_cap: usize) -> Result<Option<CsfResult>> {
    let n = sys.dim();
    let mut power = Matrix::identity(n);
    for k in 1..=k_cap {
        power = sys.a.mul(&power)?;
        let eta = power.get(0, 0);
        let scalar = (0..n).all(|i| {
            (0..n).all(|j| {
                let target = if i == j { eta } else { 0.0 };
                (power.get(i, j) - target).abs() <= SCALAR_POWER_TOL
            })
        });
        if scalar && eta > -SCALAR_POWER_TOL && eta < 1.0 {
            let eta = eta.max(0.0);
            let alpha = (1.0 - eta) * alpha_bar_direct(sys, k)?;
            return Ok(Some(CsfResult {
                m: 0,
                n: 0,
                k,
                alpha_lb: alpha,
                alpha_ub: alpha,
                eps: 0.0,
                method: CsfMethod::NilpotentExact,
            }));
        }
    }
    Ok(None)
}
