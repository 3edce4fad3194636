use cntflow_core::diagnostics::wall_quantities;
use cntflow_core::kellerbox;
use cntflow_core::shooting::solve_shooting;
use cntflow_core::{
    mixture_ratios, BuiltinFluid, EnergyForm, FlowParameters, MixtureRatios, ShootingConfig, SimilarityModel,
    SolverConfig,
};

fn swcnt(phi: f64) -> MixtureRatios {
    mixture_ratios(
        &BuiltinFluid::Kerosene.properties(),
        &BuiltinFluid::Swcnt.properties(),
        phi,
    )
    .unwrap()
}

fn grid() -> Vec<FlowParameters> {
    let mut out = Vec::new();
    for phi in [0.0, 0.1] {
        for m in [0.0, 2.0] {
            for (lambda, delta) in [(0.0, 0.0), (0.1, 0.1), (0.4, 0.15)] {
                out.push(FlowParameters {
                    phi,
                    porosity_k: 0.5,
                    forchheimer_fr: 0.25,
                    magnetic_m: m,
                    radiation_r: 1.0,
                    prandtl: 21.0,
                    suction_s: 0.1,
                    velocity_slip: lambda,
                    thermal_slip: delta,
                    energy_form: EnergyForm::Literal,
                });
            }
        }
    }
    out
}

#[test]
fn kellerbox_and_shooting_agree_on_grid() {
    for p in grid() {
        let r = swcnt(p.phi);
        let kb = kellerbox::solve(&p, &r, &SolverConfig::default()).unwrap();
        let sh = solve_shooting(&p, &r, &ShootingConfig::default()).unwrap();
        assert!(kb.converged && sh.converged, "{p:?}");
        let df = (kb.f_double_prime_0() - sh.f_double_prime_0()).abs();
        let dt = (kb.theta_prime_0() - sh.theta_prime_0()).abs();
        assert!(df < 1e-4 && dt < 1e-4, "{p:?}: df = {df:e}, dt = {dt:e}");
    }
}

#[test]
fn converged_grid_solutions_satisfy_boundary_conditions() {
    for p in grid() {
        let r = swcnt(p.phi);
        let model = SimilarityModel::new(p, r).unwrap();
        let kb = kellerbox::solve(&p, &r, &SolverConfig::default()).unwrap();
        assert!(kb.max_boundary_residual(&model) < 1e-6);
        let (m, t) = kb.far_field_magnitude(0.0);
        assert!(m < 1e-3 && t < 1e-3, "{p:?}: far field {m:e} {t:e}");
    }
}

#[test]
fn wall_shear_is_independent_of_thermal_parameters() {
    let base = FlowParameters {
        phi: 0.1,
        porosity_k: 0.5,
        forchheimer_fr: 0.25,
        magnetic_m: 2.0,
        suction_s: 0.1,
        velocity_slip: 0.1,
        ..FlowParameters::clean(1.0)
    };
    let r = swcnt(0.1);
    let mut kb = Vec::new();
    let mut sh = Vec::new();
    for (pr, rad, delta) in [(1.0, 0.0, 0.0), (5.0, 1.0, 0.1), (10.0, 5.0, 0.2)] {
        let p = FlowParameters {
            prandtl: pr,
            radiation_r: rad,
            thermal_slip: delta,
            ..base
        };
        kb.push(
            kellerbox::solve(&p, &r, &SolverConfig::default())
                .unwrap()
                .f_double_prime_0(),
        );
        sh.push(
            solve_shooting(&p, &r, &ShootingConfig::default())
                .unwrap()
                .f_double_prime_0(),
        );
    }
    for v in [&kb, &sh] {
        assert!((v[0] - v[1]).abs() < 1e-6 && (v[0] - v[2]).abs() < 1e-6, "{v:?}");
    }
}

#[test]
fn richardson_ratios_are_second_order() {
    for pr in [1.0, 10.0] {
        let p = FlowParameters::clean(pr);
        let vals: Vec<(f64, f64)> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&h| {
                let s =
                    kellerbox::solve(&p, &MixtureRatios::IDENTITY, &SolverConfig::default().with_spacing(h)).unwrap();
                (s.f_double_prime_0(), s.theta_prime_0())
            })
            .collect();
        let rf = (vals[0].0 - vals[1].0) / (vals[1].0 - vals[2].0);
        let rt = (vals[0].1 - vals[1].1) / (vals[1].1 - vals[2].1);
        assert!((3.2..=4.8).contains(&rf), "Pr {pr}: f ratio {rf}");
        assert!((3.2..=4.8).contains(&rt), "Pr {pr}: theta ratio {rt}");
    }
}

#[test]
fn mesh_refinement_changes_table_case_little() {
    let p = FlowParameters {
        phi: 0.1,
        porosity_k: 0.7,
        forchheimer_fr: 0.4,
        magnetic_m: 2.5,
        radiation_r: 10.0,
        prandtl: 21.0,
        suction_s: 0.5,
        velocity_slip: 0.1,
        thermal_slip: 0.1,
        energy_form: EnergyForm::Restated,
    };
    let r = swcnt(0.1);
    let coarse = kellerbox::solve(&p, &r, &SolverConfig::default().with_spacing(0.02)).unwrap();
    let fine = kellerbox::solve(&p, &r, &SolverConfig::default().with_spacing(0.01)).unwrap();
    assert!((coarse.f_double_prime_0() - fine.f_double_prime_0()).abs() < 5e-4);
    assert!((coarse.theta_prime_0() - fine.theta_prime_0()).abs() < 5e-4);
}

#[test]
fn newton_converges_quadratically_on_clean_case() {
    let s = kellerbox::solve(
        &FlowParameters::clean(1.0),
        &MixtureRatios::IDENTITY,
        &SolverConfig::default(),
    )
    .unwrap();
    let h = &s.correction_history;
    assert!(s.converged && h.len() >= 3, "{h:?}");
    // Once in the basin, each correction is roughly the square of the last.
    let k = h.iter().position(|&d| d < 1e-2).expect("reaches basin");
    if k + 1 < h.len() && h[k + 1] > 1e-13 {
        assert!(h[k + 1] < 10.0 * h[k] * h[k], "{h:?}");
    }
}

// With the literal conduction-plus-radiation coefficient, stronger radiation
// thickens the thermal layer and lowers the wall heat flux.
#[test]
fn literal_energy_form_nusselt_falls_with_radiation() {
    let r = swcnt(0.1);
    let mut nu = Vec::new();
    for rad in [1.0, 5.0, 7.0, 10.0] {
        let p = FlowParameters {
            phi: 0.1,
            porosity_k: 0.7,
            forchheimer_fr: 0.4,
            magnetic_m: 2.5,
            radiation_r: rad,
            prandtl: 21.0,
            suction_s: 0.5,
            velocity_slip: 0.1,
            thermal_slip: 0.1,
            energy_form: EnergyForm::Literal,
        };
        let s = kellerbox::solve(&p, &r, &SolverConfig::default()).unwrap();
        nu.push(wall_quantities(&s, &r, 0.1).unwrap().reduced_nusselt);
    }
    assert!(nu.windows(2).all(|w| w[1] < w[0]), "{nu:?}");
}

#[test]
fn restated_energy_form_nusselt_rises_with_radiation() {
    let r = swcnt(0.1);
    let mut nu = Vec::new();
    for rad in [1.0, 5.0, 7.0, 10.0] {
        let p = FlowParameters {
            phi: 0.1,
            porosity_k: 0.7,
            forchheimer_fr: 0.4,
            magnetic_m: 2.5,
            radiation_r: rad,
            prandtl: 21.0,
            suction_s: 0.5,
            velocity_slip: 0.1,
            thermal_slip: 0.1,
            energy_form: EnergyForm::Restated,
        };
        let s = kellerbox::solve(&p, &r, &SolverConfig::default()).unwrap();
        nu.push(wall_quantities(&s, &r, 0.1).unwrap().reduced_nusselt);
    }
    assert!(nu.windows(2).all(|w| w[1] > w[0]), "{nu:?}");
}
