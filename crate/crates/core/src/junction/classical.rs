use super::{influx_ratios, Branch, CouplingResult, Diagnostics};
use crate::error::Result;
use crate::fundamentals::FundamentalDiagram;

/// Demand/supply solver mapping trace densities to coupling fluxes.
///
/// Total flow through the node is maximised; in congestion the outgoing
/// supply is split by the influx ratios of the trace, and a road whose share
/// exceeds its demand is capped at the demand with the other road taking the
/// remainder.
pub fn solve_classical(rho: [f64; 3], diagrams: &[FundamentalDiagram; 3]) -> Result<CouplingResult> {
    let d1 = diagrams[0].demand(rho[0])?;
    let d2 = diagrams[1].demand(rho[1])?;
    let s3 = diagrams[2].supply(rho[2])?;

    let (flux, branch, degenerate_ratio) = if d1 + d2 <= s3 {
        ([d1, d2, d1 + d2], Branch::FreeFlow, false)
    } else {
        let ratios = influx_ratios(diagrams[0].flux(rho[0])?, diagrams[1].flux(rho[1])?);
        let (r1, r2) = if ratios.degenerate {
            // stagnant incoming traces: split the supply by demand instead
            (d1 / (d1 + d2), d2 / (d1 + d2))
        } else {
            (ratios.r1, ratios.r2)
        };
        let (f1, f2) = (r1 * s3, r2 * s3);
        if f1 > d1 {
            ([d1, s3 - d1, s3], Branch::Clipped1, ratios.degenerate)
        } else if f2 > d2 {
            ([s3 - d2, d2, s3], Branch::Clipped2, ratios.degenerate)
        } else if ratios.degenerate {
            ([f1, f2, s3], Branch::DegenerateRatio, true)
        } else {
            ([f1, f2, s3], Branch::Congestion, false)
        }
    };

    Ok(CouplingResult {
        rho: None,
        flux,
        diagnostics: Diagnostics {
            branch,
            degenerate_ratio,
            discriminant: None,
            sigma: None,
            kirchhoff_residual: flux[0] + flux[1] - flux[2],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    fn paper_roads() -> [FundamentalDiagram; 3] {
        [
            FundamentalDiagram::new(1.0, 1.0).unwrap(),
            FundamentalDiagram::new(1.0, 1.0).unwrap(),
            FundamentalDiagram::new(1.0, 1.2).unwrap(),
        ]
    }

    fn assert_flux(got: [f64; 3], want: [f64; 3], tol: f64) {
        for k in 0..3 {
            assert!((got[k] - want[k]).abs() <= tol, "flux {got:?} vs {want:?}");
        }
    }

    #[test]
    fn free_flow_example() {
        let out = solve_classical([0.15, 0.2, 0.3], &paper_roads()).unwrap();
        assert_eq!(out.diagnostics.branch, Branch::FreeFlow);
        assert_flux(out.flux, [0.1275, 0.16, 0.2875], 1e-15);
    }

    #[test]
    fn congestion_example() {
        let out = solve_classical([0.5, 0.8, 0.6], &paper_roads()).unwrap();
        assert_eq!(out.diagnostics.branch, Branch::Congestion);
        // split of 0.3 in the ratio 0.25 : 0.16
        assert_flux(out.flux, [0.3 * 0.25 / 0.41, 0.3 * 0.16 / 0.41, 0.3], 1e-15);
        assert!((out.flux[0] - 0.182_927).abs() < 1e-6);
        assert!((out.flux[1] - 0.117_073).abs() < 1e-6);
    }

    #[test]
    fn clipping_example() {
        let out = solve_classical([0.1, 0.9, 0.9], &paper_roads()).unwrap();
        assert_eq!(out.diagnostics.branch, Branch::Clipped1);
        assert_flux(out.flux, [0.09, 0.135, 0.225], 1e-15);
    }

    #[test]
    fn stagnant_incoming_roads_split_by_demand() {
        let d = [
            FundamentalDiagram::new(1.0, 1.0).unwrap(),
            FundamentalDiagram::new(2.0, 1.0).unwrap(),
            FundamentalDiagram::new(1.0, 1.2).unwrap(),
        ];
        let out = solve_classical([1.0, 1.0, 0.3], &d).unwrap();
        assert_eq!(out.diagnostics.branch, Branch::DegenerateRatio);
        assert!(out.diagnostics.degenerate_ratio);
        // demands 0.25 and 0.5 share the supply 0.3
        assert_flux(out.flux, [0.1, 0.2, 0.3], 1e-15);
    }

    #[test]
    fn empty_incoming_roads() {
        let out = solve_classical([0.0, 0.0, 0.9], &paper_roads()).unwrap();
        assert_eq!(out.diagnostics.branch, Branch::FreeFlow);
        assert_eq!(out.flux, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_out_of_range_trace() {
        assert!(matches!(
            solve_classical([1.1, 0.2, 0.3], &paper_roads()),
            Err(Error::Domain { .. })
        ));
    }

    proptest! {
        #[test]
        fn admissible_and_flow_maximising(
            a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0,
            v in [0.3f64..3.0, 0.3f64..3.0, 0.3f64..3.0],
            r in [0.3f64..3.0, 0.3f64..3.0, 0.3f64..3.0],
        ) {
            let d = [
                FundamentalDiagram::new(v[0], r[0]).unwrap(),
                FundamentalDiagram::new(v[1], r[1]).unwrap(),
                FundamentalDiagram::new(v[2], r[2]).unwrap(),
            ];
            let rho = [a * r[0], b * r[1], c * r[2]];
            let out = solve_classical(rho, &d).unwrap();
            let f = out.flux;
            let (d1, d2, s3) = (d[0].demand(rho[0]).unwrap(), d[1].demand(rho[1]).unwrap(), d[2].supply(rho[2]).unwrap());

            prop_assert!((f[0] + f[1] - f[2]).abs() <= 1e-12);
            prop_assert!(f.iter().all(|x| *x >= -1e-12));
            prop_assert!(f[0] <= d1 + 1e-12 && f[1] <= d2 + 1e-12 && f[2] <= s3 + 1e-12);
            prop_assert!((f[2] - (d1 + d2).min(s3)).abs() <= 1e-12);
            if out.diagnostics.branch == Branch::Congestion {
                let ratios = influx_ratios(d[0].flux(rho[0]).unwrap(), d[1].flux(rho[1]).unwrap());
                prop_assert!((f[0] / (f[0] + f[1]) - ratios.r1).abs() <= 1e-12);
            }
        }
    }
}
