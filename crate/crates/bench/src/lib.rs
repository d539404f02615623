//! Shared inputs for the pipeline benchmarks.

use fracjet::{analyze, parse, AnalysisReport, LagrangianModel};

pub const FIXTURE: &str = "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3";

pub fn model(text: &str, n: u32) -> LagrangianModel {
    LagrangianModel::new(n, parse(text, n).expect("benchmark model parses")).expect("valid model")
}

pub fn fixture_report() -> AnalysisReport {
    analyze(&model(FIXTURE, 3)).expect("fixture analyzes")
}
