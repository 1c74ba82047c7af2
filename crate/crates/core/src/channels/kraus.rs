use crate::error::{Error, Result};
use crate::matops::{hermitian_eigenvalues, kron, ComplexMatrix, DensityMatrix};

use super::jet::Jet;

/// Completeness and Choi-positivity tolerance for a valid channel.
pub const CPTP_TOL: f64 = 1e-10;

/// Below this weight a coefficient `sqrt(w)` is treated as sitting on its
/// zero, where `d sqrt(w)/dt` is replaced by the one-sided limit.
pub const DEGENERATE_WEIGHT: f64 = 1e-10;

/// A time-dependent operator `K(t) = sum_k sqrt(w_k(t)) B_k` with constant
/// `B_k` and nonnegative weights `w_k`.
#[derive(Clone, Debug)]
pub struct WeightedOperator {
    terms: Vec<(Jet, ComplexMatrix)>,
}

impl WeightedOperator {
    pub fn single(weight: Jet, basis: ComplexMatrix) -> Self {
        Self {
            terms: vec![(weight, basis)],
        }
    }

    pub fn from_terms(terms: Vec<(Jet, ComplexMatrix)>) -> Self {
        assert!(!terms.is_empty());
        let dim = terms[0].1.dim();
        assert!(terms.iter().all(|(_, b)| b.dim() == dim));
        Self { terms }
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }

    /// Tensor product; `sqrt(w_a) sqrt(w_b) = sqrt(w_a w_b)`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (wa, ba) in &self.terms {
            for (wb, bb) in &other.terms {
                terms.push((*wa * *wb, kron(ba, bb)));
            }
        }
        Self { terms }
    }

    /// Multiplies the operator by `sqrt(s)`.
    pub fn scale_weight(&self, s: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, b)| (w.scale(s), b.clone()))
                .collect(),
        }
    }

    fn is_null(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, _)| w.value == 0.0 && w.is_static())
    }

    /// Returns `(K, dK/dt, degenerate)`.
    fn materialize(&self) -> (ComplexMatrix, ComplexMatrix, bool) {
        let n = self.dim();
        let mut op = ComplexMatrix::zeros(n);
        let mut deriv = ComplexMatrix::zeros(n);
        let mut degenerate = false;
        for (w, b) in &self.terms {
            let (coef, rate, flagged) = sqrt_jet(w);
            degenerate |= flagged;
            op = &op + &b.scale_real(coef);
            if rate != 0.0 {
                deriv = &deriv + &b.scale_real(rate);
            }
        }
        (op, deriv, degenerate)
    }
}

/// `sqrt(w)` and its time derivative. On a zero of `w` (necessarily a
/// minimum) the coefficient behaves like `sqrt(w''/2) |t - t0|`, whose
/// right-sided derivative is reported.
fn sqrt_jet(w: &Jet) -> (f64, f64, bool) {
    if w.is_static() {
        return (w.value.max(0.0).sqrt(), 0.0, false);
    }
    if w.value > DEGENERATE_WEIGHT {
        let c = w.value.sqrt();
        (c, w.rate / (2.0 * c), false)
    } else {
        let c = w.value.max(0.0).sqrt();
        (c, (w.accel.max(0.0) / 2.0).sqrt(), true)
    }
}

/// A family of Kraus operators at one parameter point, optionally carrying
/// the time derivatives `dK/dt` needed by speed-limit bounds.
#[derive(Clone, Debug)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    derivatives: Option<Vec<ComplexMatrix>>,
    label: String,
    degenerate: bool,
    warning: Option<&'static str>,
}

impl KrausSet {
    /// Operators without time dependence information.
    pub fn from_operators(label: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = check_dims(&operators)?;
        Ok(Self {
            dim,
            operators,
            derivatives: None,
            label: label.into(),
            degenerate: false,
            warning: None,
        })
    }

    pub fn with_derivatives(
        label: impl Into<String>,
        operators: Vec<ComplexMatrix>,
        derivatives: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let dim = check_dims(&operators)?;
        if derivatives.len() != operators.len() {
            return Err(Error::DimensionMismatch {
                expected: operators.len(),
                found: derivatives.len(),
            });
        }
        if let Some(bad) = derivatives.iter().find(|d| d.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self {
            dim,
            operators,
            derivatives: Some(derivatives),
            label: label.into(),
            degenerate: false,
            warning: None,
        })
    }

    /// Materializes weighted operators, dropping those that vanish
    /// identically.
    pub fn from_weighted(label: impl Into<String>, ops: &[WeightedOperator]) -> Self {
        let mut operators = Vec::with_capacity(ops.len());
        let mut derivatives = Vec::with_capacity(ops.len());
        let mut degenerate = false;
        for w in ops.iter().filter(|w| !w.is_null()) {
            let (k, dk, flagged) = w.materialize();
            operators.push(k);
            derivatives.push(dk);
            degenerate |= flagged;
        }
        let dim = ops.first().map(WeightedOperator::dim).unwrap_or(1);
        if operators.is_empty() {
            operators.push(ComplexMatrix::zeros(dim));
            derivatives.push(ComplexMatrix::zeros(dim));
        }
        Self {
            dim,
            operators,
            derivatives: Some(derivatives),
            label: label.into(),
            degenerate,
            warning: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
            derivatives: Some(vec![ComplexMatrix::zeros(dim)]),
            label: "identity".into(),
            degenerate: false,
            warning: None,
        }
    }

    pub(crate) fn with_warning(mut self, warning: &'static str) -> Self {
        self.warning = Some(warning);
        self
    }

    pub(crate) fn set_degenerate(&mut self, degenerate: bool) {
        self.degenerate = degenerate;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn derivatives(&self) -> Option<&[ComplexMatrix]> {
        self.derivatives.as_deref()
    }

    /// True when some derivative was replaced by its one-sided limit at a
    /// zero of a coefficient (e.g. `phi = 1` at `t = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn warning(&self) -> Option<&'static str> {
        self.warning
    }

    /// Copy with operator `index` (and its derivative) multiplied by `factor`.
    pub fn scale_operator(&self, index: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.operators[index] = out.operators[index].scale_real(factor);
        if let Some(d) = out.derivatives.as_mut() {
            d[index] = d[index].scale_real(factor);
        }
        out.label = format!("{} (operator {index} scaled by {factor})", self.label);
        out
    }

    /// `sum_a K_a^dagger K_a`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &k.dagger().matmul(k)
            })
    }

    /// `sum_a K_a rho K_a^dagger` without validating the result.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.dim(), self.dim);
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &k.sandwich(rho, k)
            })
    }

    /// `J = sum_a vec(K_a) vec(K_a)^dagger`, a `dim^2 x dim^2` matrix.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let n = self.dim * self.dim;
        let mut j = ComplexMatrix::zeros(n);
        for k in &self.operators {
            let v = k.vectorize();
            j = &j + &ComplexMatrix::outer(&v, &v);
        }
        j
    }
}

fn check_dims(ops: &[ComplexMatrix]) -> Result<usize> {
    let dim = ops.first().map(ComplexMatrix::dim).ok_or(Error::param(
        "operators",
        0.0,
        "Kraus set must be nonempty",
    ))?;
    if let Some(bad) = ops.iter().find(|k| k.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    Ok(dim)
}

/// Applies a channel and validates the output state.
pub fn apply_channel(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if k.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: rho.dim(),
        });
    }
    DensityMatrix::new(k.apply_matrix(rho.matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    /// `|| sum K^dagger K - I ||_HS`.
    pub completeness_defect: f64,
    pub choi_min_eigenvalue: f64,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.completeness_defect <= CPTP_TOL && self.choi_min_eigenvalue >= -CPTP_TOL
    }
}

pub fn validate_cptp(k: &KrausSet) -> CptpReport {
    let defect = (&k.completeness_sum() - &ComplexMatrix::identity(k.dim())).hs_norm();
    let choi = k.choi_matrix();
    let min = hermitian_eigenvalues(&choi).expect("Choi matrix is Hermitian by construction")[0];
    CptpReport {
        completeness_defect: defect,
        choi_min_eigenvalue: min,
    }
}

/// Product extension of a single-qubit set: `K_i (x) K_j` with
/// `d(K_i (x) K_j)/dt = dK_i (x) K_j + K_i (x) dK_j`.
pub fn product_two_qubit(single: &KrausSet) -> Result<KrausSet> {
    if single.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: single.dim(),
        });
    }
    let ops = single.operators();
    let mut operators = Vec::with_capacity(ops.len() * ops.len());
    for a in ops {
        for b in ops {
            operators.push(kron(a, b));
        }
    }
    let label = format!("{} (x2)", single.label());
    let mut out = match single.derivatives() {
        None => KrausSet::from_operators(label, operators)?,
        Some(ds) => {
            let mut derivatives = Vec::with_capacity(operators.len());
            for (a, da) in ops.iter().zip(ds) {
                for (b, db) in ops.iter().zip(ds) {
                    derivatives.push(&kron(da, b) + &kron(a, db));
                }
            }
            KrausSet::with_derivatives(label, operators, derivatives)?
        }
    };
    out.set_degenerate(single.is_degenerate());
    out.warning = single.warning;
    Ok(out)
}
