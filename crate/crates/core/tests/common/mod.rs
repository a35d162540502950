#![allow(dead_code)]

use lwr_merge::simulation::{InitialProfile, RoadSpec, Segment};
use lwr_merge::{FundamentalDiagram, JunctionTrace, Scenario, SolverChoice};
use rand::rngs::StdRng;
use rand::Rng;

pub fn paper_roads() -> [FundamentalDiagram; 3] {
    [
        FundamentalDiagram::new(1.0, 1.0).unwrap(),
        FundamentalDiagram::new(1.0, 1.0).unwrap(),
        FundamentalDiagram::new(1.0, 1.2).unwrap(),
    ]
}

pub fn random_diagram(rng: &mut StdRng) -> FundamentalDiagram {
    FundamentalDiagram::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)).unwrap()
}

/// Piecewise-constant data with up to three pieces, values in `[0, rho_max]`.
fn random_profile(rng: &mut StdRng, rho_max: f64, domain: (f64, f64)) -> InitialProfile {
    let pieces = rng.gen_range(1..=3);
    if pieces == 1 {
        return InitialProfile::Constant(rng.gen_range(0.0..=rho_max));
    }
    let mut cuts: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(domain.0..domain.1)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![domain.0];
    edges.extend(cuts);
    edges.push(domain.1);
    InitialProfile::Piecewise(
        edges
            .windows(2)
            .map(|w| Segment {
                from: w[0],
                to: w[1],
                value: rng.gen_range(0.0..=rho_max),
            })
            .collect(),
    )
}

/// Random scenario on the fixed merge topology: random Greenshields roads,
/// piecewise-constant data inside the admissible range, random resolution,
/// CFL number, relaxation speed and final time.
pub fn random_scenario(rng: &mut StdRng, solver: SolverChoice) -> Scenario {
    let diagrams = [random_diagram(rng), random_diagram(rng), random_diagram(rng)];
    let domains = [(-1.0, 0.0), (-1.0, 0.0), (0.0, 1.0)];
    let roads = [0, 1, 2].map(|k| RoadSpec {
        diagram: diagrams[k],
        initial: random_profile(rng, diagrams[k].rho_max(), domains[k]),
    });
    let vmax = diagrams.iter().map(|d| d.v_max()).fold(0.0, f64::max);
    Scenario {
        roads,
        cells: rng.gen_range(20..=200),
        cfl: rng.gen_range(0.3..=1.0),
        lambda: Some(vmax * rng.gen_range(1.0..1.5)),
        final_time: rng.gen_range(0.1..1.0),
        solver,
        snapshot_times: Vec::new(),
    }
}

/// Random admissible trace: densities in range, flux variables anywhere in
/// `[-0.2, 1] * capacity`, positive total influx.
pub fn random_trace(rng: &mut StdRng) -> ([FundamentalDiagram; 3], JunctionTrace, f64) {
    loop {
        let d = [random_diagram(rng), random_diagram(rng), random_diagram(rng)];
        let rho = [0, 1, 2].map(|k| rng.gen_range(0.0..=d[k].rho_max()));
        let v = [0, 1, 2].map(|k| rng.gen_range(-0.2..=1.0) * d[k].capacity());
        if v[0].max(0.0) + v[1].max(0.0) > 1e-3 {
            let lambda = rng.gen_range(0.5..4.0);
            return (d, JunctionTrace::new(rho, v), lambda);
        }
    }
}

/// Bisection for `f(rho) = target` on `[lo, hi]` where `f - target` changes
/// sign.
pub fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |x: f64| f(x) - target;
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Equilibrium trace with `f1 + f2 - f3 == 0` exactly in floating point.
/// Road 3's density is root-found on a randomly chosen branch of its
/// diagram and then nudged by a few ulps until the balance is exact.
pub fn balanced_trace(rng: &mut StdRng) -> ([FundamentalDiagram; 3], JunctionTrace) {
    loop {
        let d = [random_diagram(rng), random_diagram(rng), random_diagram(rng)];
        let rho1 = rng.gen_range(0.0..=d[0].rho_max());
        let rho2 = rng.gen_range(0.0..=d[1].rho_max());
        let (f1, f2) = (d[0].flux_unchecked(rho1), d[1].flux_unchecked(rho2));
        let target = f1 + f2;
        if target >= d[2].capacity() || target <= 0.0 {
            continue;
        }
        let crit = d[2].critical_density();
        let f3 = |x: f64| d[2].flux_unchecked(x);
        let guess = if rng.gen_bool(0.5) {
            bisect(f3, target, 0.0, crit)
        } else {
            bisect(f3, target, crit, d[2].rho_max())
        };
        let mut x = guess;
        let mut found = None;
        for _ in 0..64 {
            if f1 + f2 - f3(x) == 0.0 {
                found = Some(x);
                break;
            }
            x = if (f1 + f2 - f3(x) > 0.0) == (x < crit) {
                f64::from_bits(x.to_bits() + 1)
            } else {
                f64::from_bits(x.to_bits() - 1)
            };
        }
        if let Some(rho3) = found {
            let rho = [rho1, rho2, rho3];
            let trace = JunctionTrace::new(rho, [f1, f2, f3(rho3)]);
            return (d, trace);
        }
    }
}
