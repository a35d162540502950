//! Relaxation-based solver for the merge.
//!
//! Coupling and trace states are joined by the linear relations
//!
//! ```text
//! rho_R^k = rho_0^k - sigma_k,   v_R^k = v_0^k + lambda sigma_k    (k = 1, 2)
//! rho_L^3 = rho_0^3 + sigma,     v_L^3 = v_0^3 + lambda sigma
//! ```
//!
//! Kirchhoff on `v` together with influx-ratio preservation gives
//! `sigma_k = r_k (sigma - h)` with `h = G1 / lambda`. Kirchhoff on the
//! flux `rho V(rho)` then becomes `A sigma^2 + B sigma + C = 0`.

use serde::Serialize;

use super::{influx_ratios, Branch, CouplingResult, Diagnostics, InfluxRatios, JunctionTrace, WaveStrengths};
use crate::error::{Error, Result};
use crate::fundamentals::FundamentalDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticSetup {
    /// Flux imbalance `f1 + f2 - f3` at the trace densities.
    pub g0: f64,
    /// Imbalance `v1 + v2 - v3` of the trace flux variables.
    pub g1: f64,
    pub h: f64,
    pub ratios: InfluxRatios,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub discriminant: f64,
}

impl QuadraticSetup {
    pub fn new(trace: &JunctionTrace, diagrams: &[FundamentalDiagram; 3], lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::config(format!("relaxation speed must be positive, got {lambda}")));
        }
        if trace.rho.iter().chain(trace.v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Input(format!("non-finite junction trace {trace:?}")));
        }
        let rho = trace.rho;
        let f = |k: usize| diagrams[k].flux_unchecked(rho[k]);
        let slope = |k: usize| diagrams[k].flux_derivative_unchecked(rho[k]);

        let g0 = f(0) + f(1) - f(2);
        let g1 = trace.v[0] + trace.v[1] - trace.v[2];
        let h = g1 / lambda;
        let ratios = influx_ratios(trace.v[0], trace.v[1]);
        let (r1, r2) = (ratios.r1, ratios.r2);

        // incoming curvature and slope, weighted by the ratio split
        let s = r1 * r1 * diagrams[0].stiffness() + r2 * r2 * diagrams[1].stiffness();
        let p = r1 * slope(0) + r2 * slope(1);

        let a = diagrams[2].stiffness() - s;
        let b = 2.0 * h * s - p - slope(2);
        let c = g0 + h * p - h * h * s;
        Ok(Self {
            g0,
            g1,
            h,
            ratios,
            a,
            b,
            c,
            discriminant: b * b - 4.0 * a * c,
        })
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        (self.a * sigma + self.b) * sigma + self.c
    }

    /// Squared distance of the coupling data from the trace as a function of
    /// the outgoing wave strength.
    pub fn distance(&self, sigma: f64) -> f64 {
        let (r1, r2) = (self.ratios.r1, self.ratios.r2);
        let d = sigma - self.h;
        (r1 * r1 + r2 * r2) * d * d + sigma * sigma
    }

    /// Real roots, in no particular order. Empty for a negative discriminant
    /// or a degenerate (non-quadratic) equation.
    pub fn real_roots(&self) -> Vec<f64> {
        if self.a == 0.0 || self.discriminant < 0.0 {
            return Vec::new();
        }
        let q = -0.5 * (self.b + self.discriminant.sqrt().copysign(self.b));
        if q == 0.0 {
            // b == 0 and c == 0
            return vec![0.0];
        }
        [q / self.a, self.c / q]
            .into_iter()
            .filter(|r| r.is_finite())
            .collect()
    }

    /// Picks the outgoing wave strength and the branch that produced it.
    pub fn select_sigma(&self) -> (f64, Branch) {
        if self.a != 0.0 {
            let roots = self.real_roots();
            if let Some(best) = roots.into_iter().min_by(|x, y| {
                self.distance(*x)
                    .total_cmp(&self.distance(*y))
                    .then(x.abs().total_cmp(&y.abs()))
            }) {
                return (best, Branch::Quadratic);
            }
            (-self.b / (2.0 * self.a), Branch::FallbackVertex)
        } else if self.b != 0.0 {
            (-self.c / self.b, Branch::FallbackLinear)
        } else {
            (self.h, Branch::Degenerate)
        }
    }
}

/// Maps trace data to coupling data. The returned fluxes are the coupling
/// flux variables `v`; the third equals the sum of the first two exactly.
pub fn solve_relaxation(
    trace: &JunctionTrace,
    diagrams: &[FundamentalDiagram; 3],
    lambda: f64,
) -> Result<CouplingResult> {
    let setup = QuadraticSetup::new(trace, diagrams, lambda)?;
    let (sigma, branch) = setup.select_sigma();
    let shift = sigma - setup.h;
    let sigma1 = setup.ratios.r1 * shift;
    let sigma2 = setup.ratios.r2 * shift;

    let rho = [trace.rho[0] - sigma1, trace.rho[1] - sigma2, trace.rho[2] + sigma];
    let v1 = trace.v[0] + lambda * sigma1;
    let v2 = trace.v[1] + lambda * sigma2;
    let flux = [v1, v2, v1 + v2];

    let kirchhoff_residual = diagrams[0].flux_unchecked(rho[0]) + diagrams[1].flux_unchecked(rho[1])
        - diagrams[2].flux_unchecked(rho[2]);

    Ok(CouplingResult {
        rho: Some(rho),
        flux,
        diagnostics: Diagnostics {
            branch,
            degenerate_ratio: setup.ratios.degenerate,
            discriminant: Some(setup.discriminant),
            sigma: Some(WaveStrengths {
                sigma: [sigma1, sigma2, sigma],
            }),
            kirchhoff_residual,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma1Case {
    /// Both sufficient inequalities hold.
    Direct,
    /// Both converse inequalities hold.
    Converse,
    NotApplicable,
}

/// The two sufficient conditions for a real root, evaluated in their
/// original inequality form from the trace rather than from the
/// aggregated coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub positive_influx: bool,
    /// `h^2 (r1^2 c1 + r2^2 c2)`; must not exceed `cond1_rhs`.
    pub cond1_lhs: f64,
    /// `G0 + h (r1 f1'(rho1) + r2 f2'(rho2))`.
    pub cond1_rhs: f64,
    /// `c3`; must not exceed `cond2_rhs`.
    pub cond2_lhs: f64,
    /// `r1^2 c1 + r2^2 c2`.
    pub cond2_rhs: f64,
    pub case: Lemma1Case,
    pub discriminant: f64,
}

pub fn lemma1_check(
    setup: &QuadraticSetup,
    trace: &JunctionTrace,
    diagrams: &[FundamentalDiagram; 3],
    lambda: f64,
) -> Lemma1Report {
    let (r1, r2) = (setup.ratios.r1, setup.ratios.r2);
    let c = |k: usize| diagrams[k].v_max() / diagrams[k].rho_max();
    let g0 = diagrams[0].flux_unchecked(trace.rho[0]) + diagrams[1].flux_unchecked(trace.rho[1])
        - diagrams[2].flux_unchecked(trace.rho[2]);
    let g1 = trace.v[0] + trace.v[1] - trace.v[2];

    let cond1_lhs = r1 * r1 * g1 * g1 * c(0) / (lambda * lambda) + r2 * r2 * g1 * g1 * c(1) / (lambda * lambda);
    let cond1_rhs = g0
        + g1 / lambda
            * (r1 * diagrams[0].flux_derivative_unchecked(trace.rho[0])
                + r2 * diagrams[1].flux_derivative_unchecked(trace.rho[1]));
    let cond2_lhs = c(2);
    let cond2_rhs = c(0) * r1 * r1 + c(1) * r2 * r2;

    let positive_influx = trace.v[0] + trace.v[1] > 0.0;
    let case = if !positive_influx {
        Lemma1Case::NotApplicable
    } else if cond1_lhs <= cond1_rhs && cond2_lhs <= cond2_rhs {
        Lemma1Case::Direct
    } else if cond1_lhs >= cond1_rhs && cond2_lhs >= cond2_rhs {
        Lemma1Case::Converse
    } else {
        Lemma1Case::NotApplicable
    };

    Lemma1Report {
        positive_influx,
        cond1_lhs,
        cond1_rhs,
        cond2_lhs,
        cond2_rhs,
        case,
        discriminant: setup.discriminant,
    }
}
