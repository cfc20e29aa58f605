//! Fixtures shared by the benchmarks.

use jacobi::transform::{even_gaussian, GridSpec, SampledRadialFunction, TransformPlan};
use jacobi::JacobiParameters;
use std::sync::Arc;

/// Grid pair sized for the double quadrature of a convolution.
pub fn convolution_plan(params: &JacobiParameters) -> Arc<TransformPlan> {
    GridSpec {
        t_max: 8.0,
        radial_panels: 30,
        radial_order: 8,
        lambda_max: 40.0,
        spectral_panels: 80,
        spectral_order: 10,
    }
    .plan(params)
    .expect("valid grid")
}

pub fn bump(plan: &TransformPlan, center: f64, width: f64) -> SampledRadialFunction {
    plan.radial().sample(even_gaussian(center, width))
}
