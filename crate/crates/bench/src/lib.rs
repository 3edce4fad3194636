//! Benchmark fixtures shared by the criterion harnesses.

use cntflow_core::{mixture_ratios, BuiltinFluid, FlowParameters, MixtureRatios};

/// The clean Magyari–Keller configuration.
pub fn clean_case(prandtl: f64) -> (FlowParameters, MixtureRatios) {
    (FlowParameters::clean(prandtl), MixtureRatios::IDENTITY)
}

/// Table baseline: 10% SWCNT in kerosene, Pr = 21, with drag, field,
/// radiation, suction and slip all active.
pub fn table_case() -> (FlowParameters, MixtureRatios) {
    let ratios = mixture_ratios(
        &BuiltinFluid::Kerosene.properties(),
        &BuiltinFluid::Swcnt.properties(),
        0.1,
    )
    .expect("catalog mixture");
    let params = FlowParameters {
        phi: 0.1,
        porosity_k: 0.7,
        forchheimer_fr: 0.4,
        magnetic_m: 2.5,
        radiation_r: 10.0,
        prandtl: 21.0,
        suction_s: 0.5,
        velocity_slip: 0.1,
        thermal_slip: 0.1,
        ..FlowParameters::clean(21.0)
    };
    (params, ratios)
}
