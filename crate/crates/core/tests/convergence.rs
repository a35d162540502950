//! Grid refinement behavior of the finite-volume scheme.

use lwr_merge::junction::SolverKind;
use lwr_merge::{interior_flux, run_with, FundamentalDiagram, Preset, SolverChoice};

/// Periodic single-road Rusanov run on `[0, 1)` from a smooth bump.
fn bump_run(cells: usize, final_time: f64) -> Vec<f64> {
    let d = FundamentalDiagram::new(1.0, 1.0).unwrap();
    let lambda = 1.0;
    let dx = 1.0 / cells as f64;
    let mut rho: Vec<f64> = (0..cells)
        .map(|i| {
            let x = (i as f64 + 0.5) * dx;
            0.3 + 0.2 * (2.0 * std::f64::consts::PI * x).sin()
        })
        .collect();
    let mut t = 0.0;
    let base_dt = 0.5 * dx / lambda;
    while t < final_time {
        let dt = base_dt.min(final_time - t);
        let flux: Vec<f64> = (0..cells)
            .map(|i| interior_flux(&d, rho[i], rho[(i + 1) % cells], lambda).unwrap())
            .collect();
        let next: Vec<f64> = (0..cells)
            .map(|i| rho[i] - dt / dx * (flux[i] - flux[(i + cells - 1) % cells]))
            .collect();
        rho = next;
        t += dt;
    }
    rho
}

/// Cell averages of a fine solution on a grid coarser by `factor`.
fn project(fine: &[f64], factor: usize) -> Vec<f64> {
    fine.chunks(factor).map(|c| c.iter().sum::<f64>() / factor as f64).collect()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    let dx = 1.0 / a.len() as f64;
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx
}

#[test]
fn smooth_bump_is_first_order() {
    // Shock forms at t = 1 / (2 pi * 0.4) ~ 0.4.
    let t = 0.2;
    let (u1, u2, u4) = (bump_run(100, t), bump_run(200, t), bump_run(400, t));
    let e1 = l1(&u1, &project(&u2, 2));
    let e2 = l1(&u2, &project(&u4, 2));
    let order = (e1 / e2).log2();
    println!("self-convergence order {order:.3} (e1 {e1:.3e}, e2 {e2:.3e})");
    assert!((0.6..=1.2).contains(&order), "order {order}");
}

fn preset_distances(preset: Preset, solver: SolverKind) -> Vec<f64> {
    let fine = 4000;
    let mut sc = preset.scenario(SolverChoice::from(solver));
    sc.cells = fine;
    let reference = run_with(&sc, solver).unwrap();
    [100, 250, 1000]
        .iter()
        .map(|&m| {
            sc.cells = m;
            let coarse = run_with(&sc, solver).unwrap();
            (0..3)
                .map(|k| {
                    let r = project(&reference.network.roads[k].cells, fine / m);
                    l1(&coarse.network.roads[k].cells, &r)
                })
                .sum()
        })
        .collect()
}

#[test]
fn presets_approach_fine_grid_reference() {
    for preset in [Preset::Exp1, Preset::Exp2, Preset::Exp3] {
        for solver in [SolverKind::Classical, SolverKind::Relaxation] {
            let d = preset_distances(preset, solver);
            println!("{} {solver}: L1 distances to M=4000 {d:?}", preset.name());
            assert!(d[0] > d[1] && d[1] > d[2], "{} {solver}: {d:?}", preset.name());
        }
    }
}
