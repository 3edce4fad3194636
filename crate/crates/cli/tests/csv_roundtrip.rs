use cntflow_cli::csvio::{profile_to_string, read_profile};
use cntflow_core::{Mesh, SolutionProfile, StateVector};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, -1e-12..1e-12f64, Just(0.0), Just(-0.0)]
}

proptest! {
    #[test]
    fn profile_csv_round_trips_exactly(
        eta_max in 1.0..20.0f64,
        intervals in 8usize..40,
        values in prop::collection::vec(prop::array::uniform5(finite()), 41),
    ) {
        let mesh = Mesh::uniform(eta_max, intervals).unwrap();
        let states: Vec<StateVector> = values[..=intervals].iter().map(|&a| StateVector::from_array(a)).collect();
        let profile = SolutionProfile {
            mesh: mesh.clone(),
            states: states.clone(),
            converged: true,
            iterations: 3,
            final_correction_norm: 0.0,
            correction_history: vec![],
        };
        let text = profile_to_string(&profile).unwrap();
        let (mesh2, states2) = read_profile(text.as_bytes()).unwrap();
        prop_assert_eq!(mesh2.nodes(), mesh.nodes());
        for (a, b) in states.iter().zip(&states2) {
            prop_assert_eq!(a.to_array().map(f64::to_bits), b.to_array().map(f64::to_bits));
        }
    }
}
