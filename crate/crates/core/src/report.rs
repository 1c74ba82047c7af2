//! Diagnostics behind the `validate` subcommand.

use std::fmt::Write as _;

use crate::channels::{validate_cptp, CptpReport, KrausSet, CPTP_TOL};
use crate::error::Result;
use crate::lindblad::{
    apply_correlated, apply_uncorrelated, case2_discrepancy, fixture_case1_matrix,
    generator_residuals, x_ratio, AtomicModel, Case2Discrepancy, GeneratorSource,
};
use crate::matops::{kron, ComplexMatrix, DensityMatrix, HERMITIAN_TOL};

/// Outcome of a validation run: readable lines and an overall verdict.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub lines: Vec<String>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        let _ = writeln!(s, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

/// Probe states for trace preservation: Bell, maximally mixed, `|11><11|`.
pub fn probe_states(dim: usize) -> Vec<ComplexMatrix> {
    let mut states = vec![DensityMatrix::maximally_mixed(dim).into_matrix()];
    states.push(ComplexMatrix::unit(dim, 0, 0));
    if dim == 4 {
        states.push(DensityMatrix::bell_phi_plus().into_matrix());
    }
    states
}

/// Largest `|tr E(rho) - 1|` over the probe states.
pub fn trace_residual(k: &KrausSet) -> f64 {
    probe_states(k.dim())
        .iter()
        .map(|rho| (k.apply_matrix(rho).trace().re - 1.0).abs())
        .fold(0.0, f64::max)
}

pub fn validate_channel(k: &KrausSet) -> ValidationReport {
    let CptpReport {
        completeness_defect,
        choi_min_eigenvalue,
    } = validate_cptp(k);
    let residual = trace_residual(k);
    let passed = completeness_defect <= CPTP_TOL
        && choi_min_eigenvalue >= -CPTP_TOL
        && residual <= HERMITIAN_TOL;
    let mut lines = vec![
        format!(
            "channel: {} ({} operators, dim {})",
            k.label(),
            k.len(),
            k.dim()
        ),
        format!("completeness defect: {completeness_defect:.3e} (tolerance {CPTP_TOL:e})"),
        format!("choi min eigenvalue: {choi_min_eigenvalue:.3e} (tolerance -{CPTP_TOL:e})"),
        format!("trace preservation residual: {residual:.3e} (tolerance {HERMITIAN_TOL:e})"),
    ];
    if k.is_degenerate() {
        lines.push("note: derivatives at a coefficient zero use the one-sided limit".into());
    }
    if let Some(w) = k.warning() {
        lines.push(format!("warning: {w}"));
    }
    ValidationReport { lines, passed }
}

pub fn validate_lindblad(model: &AtomicModel) -> Result<ValidationReport> {
    let bell = DensityMatrix::bell_phi_plus();
    let mut probes = probe_states(4);
    probes.push(kron(
        &ComplexMatrix::from_real_diagonal(&[0.3, 0.7]),
        &ComplexMatrix::from_real_diagonal(&[0.6, 0.4]),
    ));
    let total = model.total_generator();
    let (mut tr_worst, mut herm_worst) = (0.0f64, 0.0f64);
    for rho in &probes {
        let (tr, herm) = generator_residuals(&total, rho);
        tr_worst = tr_worst.max(tr);
        herm_worst = herm_worst.max(herm);
    }
    let passed = tr_worst <= HERMITIAN_TOL && herm_worst <= HERMITIAN_TOL;

    let mut lines = vec![
        format!(
            "lindblad: gamma1={} gamma2={} a={} n_bar={}",
            model.gamma1(),
            model.gamma2(),
            model.a(),
            model.n_bar()
        ),
        format!("tr L(rho) residual: {tr_worst:.3e} (tolerance {HERMITIAN_TOL:e})"),
        format!("hermiticity residual: {herm_worst:.3e} (tolerance {HERMITIAN_TOL:e})"),
    ];
    if model.gamma1() == model.gamma2() {
        let g = model.gamma1();
        let case1 = apply_uncorrelated(model, bell.matrix())?
            .max_abs_diff(&fixture_case1_matrix(g, model.n_bar()));
        lines.push(format!(
            "case-1 fixture vs first principles: max |diff| = {case1:.3e}"
        ));
        let Case2Discrepancy { fixture, derived } = case2_discrepancy(g, model.n_bar(), model.a())?;
        lines.push(format!(
            "case-2 coherence: fixture a*N*(2+N)*gamma/2 = {fixture:.12}, derived a*(2N+1)*gamma/2 = {derived:.12}, |diff| = {:.3e}",
            (fixture - derived).abs()
        ));
        let xf = x_ratio(model, &bell, GeneratorSource::Fixture)?;
        let xd = x_ratio(model, &bell, GeneratorSource::Derived)?;
        lines.push(format!("x: fixture = {xf:.12}, derived = {xd:.12}"));
    } else {
        let cor = apply_correlated(model, bell.matrix())?;
        lines.push(format!(
            "L_cor(Bell) (|10>,|01>) coherence = {:.12}",
            cor.get(1, 2).re
        ));
    }
    Ok(ValidationReport { lines, passed })
}
