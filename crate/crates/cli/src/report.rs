//! Plain-text and JSON renderings of an analysis.
//!
//! Every expression in the JSON document is a string in the parser grammar,
//! so consumers can re-parse it with the declared `n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fracjet::constraints::ClosureOutcome;
use fracjet::dynamics::{
    derive_action_form, derive_equations_of_motion, ActionForm, TotalDifferentialEquation,
};
use fracjet::{render, AnalysisReport, Expr};
use serde::{Deserialize, Serialize};

use crate::model::ModelFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub name: String,
    pub n: u32,
    pub lagrangian: String,
    pub hessian: Vec<Vec<String>>,
    pub rank: usize,
    pub regular: Vec<u32>,
    pub singular: Vec<u32>,
    pub momenta: JsonMomenta,
    pub accelerations: BTreeMap<String, String>,
    pub h0: String,
    pub h0prime: String,
    pub constraints: Vec<JsonConstraint>,
    pub closure: JsonClosure,
    pub equations: Vec<JsonEquation>,
    pub reduced_equations: Vec<JsonEquation>,
    pub action: JsonAction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonMomenta {
    pub p: Vec<String>,
    pub pi: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonConstraint {
    pub label: String,
    pub origin: String,
    pub class: String,
    pub coord: u32,
    pub generation: u32,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonClosureEntry {
    pub pass: usize,
    pub label: String,
    pub constraint: String,
    pub bracket: String,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonClosure {
    pub passes: usize,
    pub entries: Vec<JsonClosureEntry>,
    pub rules: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonEquation {
    pub target: String,
    pub sign: i8,
    pub dt: String,
    pub dx: BTreeMap<u32, String>,
    pub dv: BTreeMap<u32, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonForm {
    pub dt: String,
    pub dx: BTreeMap<u32, String>,
    pub dv: BTreeMap<u32, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonAction {
    pub general: JsonForm,
    pub reduced: JsonForm,
    /// Potential of the gauge part of the reduced form, when it is exact.
    pub boundary: Option<String>,
}

/// Equations and action forms derived from a report, in both the general
/// and the second-class-reduced version.
pub struct Derived {
    pub equations: Vec<TotalDifferentialEquation>,
    pub reduced_equations: Vec<TotalDifferentialEquation>,
    pub general: ActionForm,
    pub reduced: ActionForm,
    pub boundary: Option<Expr>,
}

impl Derived {
    pub fn new(report: &AnalysisReport) -> Self {
        let equations = derive_equations_of_motion(report);
        let rules = report.second_class_rules();
        let reduced_equations = equations.iter().map(|e| e.reduced(&rules)).collect();
        let (general, reduced) = derive_action_form(report);
        let boundary = reduced.mu_potential(report.singular_idx());
        Derived {
            equations,
            reduced_equations,
            general,
            reduced,
            boundary,
        }
    }
}

fn strings(m: &BTreeMap<u32, Expr>) -> BTreeMap<u32, String> {
    m.iter().map(|(k, e)| (*k, render(e))).collect()
}

fn equation(e: &TotalDifferentialEquation) -> JsonEquation {
    JsonEquation {
        target: e.target.to_string(),
        sign: e.sign,
        dt: render(&e.dt_coeff),
        dx: strings(&e.dx_mu_coeff),
        dv: strings(&e.dv_mu_coeff),
    }
}

fn form(f: &ActionForm) -> JsonForm {
    JsonForm {
        dt: render(&f.dt_coeff),
        dx: strings(&f.dx_mu_coeff),
        dv: strings(&f.dv_mu_coeff),
    }
}

fn outcome(o: &ClosureOutcome) -> String {
    match o {
        ClosureOutcome::Vanishes => "vanishes".into(),
        ClosureOutcome::Absorbed { partners } => format!("absorbed by {}", partners.join(", ")),
        ClosureOutcome::Secondary { label } => format!("secondary {label}"),
    }
}

pub fn json_report(file: &ModelFile, report: &AnalysisReport, derived: &Derived) -> JsonReport {
    let n = report.n();
    JsonReport {
        name: file.name.clone(),
        n,
        lagrangian: render(report.model.lagrangian()),
        hessian: report
            .hessian
            .iter()
            .map(|row| row.iter().map(render).collect())
            .collect(),
        rank: report.rank(),
        regular: report.regular_idx().to_vec(),
        singular: report.singular_idx().to_vec(),
        momenta: JsonMomenta {
            p: (1..=n).map(|i| render(report.momenta.p(i))).collect(),
            pi: (1..=n).map(|i| render(report.momenta.pi(i))).collect(),
        },
        accelerations: report
            .accel_solutions
            .iter()
            .map(|(v, e)| (v.to_string(), render(e)))
            .collect(),
        h0: render(&report.h0),
        h0prime: render(&report.h0prime),
        constraints: report
            .constraints
            .iter()
            .map(|c| JsonConstraint {
                label: c.label.clone(),
                origin: c.origin.to_string(),
                class: c.class.to_string(),
                coord: c.coord,
                generation: c.generation,
                expr: render(&c.expr),
            })
            .collect(),
        closure: JsonClosure {
            passes: report.closure_log.passes,
            entries: report
                .closure_log
                .entries
                .iter()
                .map(|e| JsonClosureEntry {
                    pass: e.pass,
                    label: e.label.clone(),
                    constraint: render(&e.constraint),
                    bracket: render(&e.bracket_with_h),
                    outcome: outcome(&e.outcome),
                })
                .collect(),
            rules: report
                .closure_log
                .rules
                .iter()
                .map(|(v, e)| (v.to_string(), render(e)))
                .collect(),
        },
        equations: derived.equations.iter().map(equation).collect(),
        reduced_equations: derived.reduced_equations.iter().map(equation).collect(),
        action: JsonAction {
            general: form(&derived.general),
            reduced: form(&derived.reduced),
            boundary: derived.boundary.as_ref().map(render),
        },
    }
}

/// The tagged derivation followed by the equations of motion and the
/// action one-forms.
pub fn text_report(file: &ModelFile, report: &AnalysisReport, derived: &Derived) -> String {
    let mut out = String::new();
    writeln!(out, "[model] name = {}", file.name).unwrap();
    if let Some(notes) = &file.notes {
        writeln!(out, "[model] notes = {notes}").unwrap();
    }
    out.push_str(&report.to_string());
    for e in &derived.equations {
        writeln!(out, "[equations] {e}").unwrap();
    }
    for e in &derived.reduced_equations {
        writeln!(out, "[equations-reduced] {e}").unwrap();
    }
    writeln!(out, "[action] {}", derived.general).unwrap();
    writeln!(out, "[action-reduced] {}", derived.reduced).unwrap();
    if let Some(b) = &derived.boundary {
        writeln!(out, "[action-reduced] boundary term = {b}").unwrap();
    }
    out
}
