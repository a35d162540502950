mod common;

use lwr_merge::junction::SolverKind;
use lwr_merge::{run_with, Error, SolverChoice};
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn relaxation_conserves_mass_or_reports_domain_error() {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut ok, mut aborted) = (0, 0);
    for _ in 0..60 {
        let sc = common::random_scenario(&mut rng, SolverChoice::Relaxation);
        match run_with(&sc, SolverKind::Relaxation) {
            Ok(res) => {
                let tol = 1e-12 * res.mass.initial.abs().max(1.0);
                assert!(res.mass.defect.abs() <= tol, "defect {}", res.mass.defect);
                ok += 1;
            }
            Err(Error::Step { source, time, .. }) => {
                assert!(matches!(*source, Error::Domain { .. }), "{source}");
                assert!(time >= 0.0 && time <= sc.final_time);
                aborted += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    println!("{ok} completed, {aborted} left the admissible range");
    assert!(ok > 0);
}
