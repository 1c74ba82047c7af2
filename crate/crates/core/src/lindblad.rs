//! Two-qubit atomic master equation in a thermal bath.
//!
//! Independent emission and absorption at rates `gamma_i (N + 1)` and
//! `gamma_i N`, plus collective cross terms weighted by
//! `gamma_12 = sqrt(gamma_1 gamma_2) a`. All generators use the GKSL
//! dissipator `D[A](rho) = A rho A^dagger - {A^dagger A, rho}/2`.

use crate::error::{Error, Result};
use crate::matops::{kron, pauli, ComplexMatrix, DensityMatrix, StateTolerances, HERMITIAN_TOL};

/// Stability guard for [`evolve_rk4`]: `dt * max_rate` may not exceed this.
pub const RK4_MAX_STEP_RATE: f64 = 0.1;

/// Relaxed state checks along an integrated trajectory.
pub const TRAJECTORY_TOLERANCES: StateTolerances = StateTolerances {
    hermitian: 1e-10,
    trace: 1e-9,
    positivity: 1e-8,
};

/// Planck occupancy `1 / (e^{omega/T} - 1)` with `hbar = k_B = 1`.
pub fn planck_n(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("omega", omega, "must be positive"));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::param("temperature", temperature, "must be positive"));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalBath {
    n_bar: f64,
    omega: Option<f64>,
    temperature: Option<f64>,
}

impl ThermalBath {
    pub fn from_temperature(omega: f64, temperature: f64) -> Result<Self> {
        Ok(Self {
            n_bar: planck_n(omega, temperature)?,
            omega: Some(omega),
            temperature: Some(temperature),
        })
    }

    /// Bath given directly by its mean occupancy.
    pub fn from_occupancy(n_bar: f64) -> Result<Self> {
        if !(n_bar >= 0.0 && n_bar.is_finite()) {
            return Err(Error::param(
                "n_bar",
                n_bar,
                "must be nonnegative and finite",
            ));
        }
        Ok(Self {
            n_bar,
            omega: None,
            temperature: None,
        })
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    pub fn temperature(&self) -> Option<f64> {
        self.temperature
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomicModel {
    gamma1: f64,
    gamma2: f64,
    a: f64,
    bath: ThermalBath,
}

impl AtomicModel {
    pub fn new(gamma1: f64, gamma2: f64, a: f64, bath: ThermalBath) -> Result<Self> {
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::param(name, g, "decay rate must be positive"));
            }
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::param(
                "a",
                a,
                "collective coupling must lie in [0, 1]",
            ));
        }
        Ok(Self {
            gamma1,
            gamma2,
            a,
            bath,
        })
    }

    /// Identical atoms, `gamma1 = gamma2 = gamma`.
    pub fn symmetric(gamma: f64, a: f64, bath: ThermalBath) -> Result<Self> {
        Self::new(gamma, gamma, a, bath)
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n_bar(&self) -> f64 {
        self.bath.n_bar
    }

    pub fn bath(&self) -> &ThermalBath {
        &self.bath
    }

    /// `gamma_12 = sqrt(gamma1 gamma2) a`.
    pub fn gamma12(&self) -> f64 {
        (self.gamma1 * self.gamma2).sqrt() * self.a
    }

    pub fn uncorrelated_generator(&self) -> GeneratorSpec {
        let n = self.bath.n_bar;
        let mut jumps = Vec::new();
        for (g, lower) in [(self.gamma1, lowering(0)), (self.gamma2, lowering(1))] {
            let raise = lower.dagger();
            jumps.push((lower, g * (n + 1.0)));
            jumps.push((raise, g * n));
        }
        GeneratorSpec::new(GeneratorLabel::Uncorrelated, jumps)
    }

    /// Full generator in diagonal form: the rate matrix
    /// `[[gamma1, gamma12], [gamma12, gamma2]]` is diagonalized, giving
    /// collective jumps `v_1 sigma^-_1 + v_2 sigma^-_2` (and their adjoints
    /// for absorption).
    pub fn total_generator(&self) -> GeneratorSpec {
        let n = self.bath.n_bar;
        let modes = symmetric_eigen_2x2(self.gamma1, self.gamma12(), self.gamma2);
        let scale = self.gamma1.max(self.gamma2);
        let mut jumps = Vec::new();
        for (rate, v) in modes {
            if rate <= 1e-14 * scale {
                continue;
            }
            let lower = &lowering(0).scale_real(v[0]) + &lowering(1).scale_real(v[1]);
            let raise = lower.dagger();
            jumps.push((lower, rate * (n + 1.0)));
            jumps.push((raise, rate * n));
        }
        GeneratorSpec::new(GeneratorLabel::Total, jumps)
    }
}

/// `sigma^-` on qubit `which` (0 = left tensor factor).
pub fn lowering(which: usize) -> ComplexMatrix {
    match which {
        0 => kron(&pauli::sigma_minus(), &pauli::identity()),
        1 => kron(&pauli::identity(), &pauli::sigma_minus()),
        _ => panic!("two-qubit model has qubits 0 and 1"),
    }
}

fn symmetric_eigen_2x2(a: f64, b: f64, d: f64) -> [(f64, [f64; 2]); 2] {
    if b == 0.0 {
        return [(a, [1.0, 0.0]), (d, [0.0, 1.0])];
    }
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let mut out = [(0.0, [0.0; 2]); 2];
    for (slot, lambda) in out.iter_mut().zip([mean + radius, mean - radius]) {
        let (x, y) = (b, lambda - a);
        let norm = (x * x + y * y).sqrt();
        *slot = (lambda.max(0.0), [x / norm, y / norm]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorLabel {
    Uncorrelated,
    Correlated,
    Total,
}

/// Lindblad generator in diagonal form: `L(rho) = sum_k rate_k D[A_k](rho)`.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    jump_ops: Vec<(ComplexMatrix, f64)>,
    label: GeneratorLabel,
}

impl GeneratorSpec {
    /// Jumps with zero rate are dropped; negative rates are a caller bug.
    pub fn new(label: GeneratorLabel, jumps: Vec<(ComplexMatrix, f64)>) -> Self {
        assert!(
            jumps.iter().all(|(_, r)| *r >= 0.0),
            "rates must be nonnegative"
        );
        Self {
            jump_ops: jumps.into_iter().filter(|(_, r)| *r > 0.0).collect(),
            label,
        }
    }

    pub fn zero(label: GeneratorLabel) -> Self {
        Self {
            jump_ops: Vec::new(),
            label,
        }
    }

    pub fn label(&self) -> GeneratorLabel {
        self.label
    }

    pub fn jump_ops(&self) -> &[(ComplexMatrix, f64)] {
        &self.jump_ops
    }

    pub fn max_rate(&self) -> f64 {
        self.jump_ops.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.jump_ops
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, (op, rate)| {
                &acc + &dissipator(op, rho).scale_real(*rate)
            })
    }
}

/// `A rho A^dagger - (A^dagger A rho + rho A^dagger A)/2`.
pub fn dissipator(a: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let ad = a.dagger();
    let ada = ad.matmul(a);
    let jump = a.matmul(rho).matmul(&ad);
    let anti = &ada.matmul(rho) + &rho.matmul(&ada);
    &jump - &anti.scale_real(0.5)
}

/// Cross dissipator `A rho B^dagger - (B^dagger A rho + rho B^dagger A)/2`.
fn cross_dissipator(a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let bd = b.dagger();
    let bda = bd.matmul(a);
    let jump = a.matmul(rho).matmul(&bd);
    let anti = &bda.matmul(rho) + &rho.matmul(&bda);
    &jump - &anti.scale_real(0.5)
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `L_un(rho) = sum_i gamma_i (N+1) D[sigma^-_i](rho) + gamma_i N D[sigma^+_i](rho)`.
pub fn apply_uncorrelated(model: &AtomicModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_two_qubit(rho)?;
    Ok(model.uncorrelated_generator().apply(rho))
}

/// Collective cross terms, evaluated from first principles:
/// `sum_{i != j} gamma_12 [(N+1) D_{ij}[sigma^-](rho) + N D_{ij}[sigma^+](rho)]`.
pub fn apply_correlated(model: &AtomicModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_two_qubit(rho)?;
    let n = model.n_bar();
    let g = model.gamma12();
    let (l1, l2) = (lowering(0), lowering(1));
    let (r1, r2) = (l1.dagger(), l2.dagger());
    let emission = &cross_dissipator(&l2, &l1, rho) + &cross_dissipator(&l1, &l2, rho);
    let absorption = &cross_dissipator(&r2, &r1, rho) + &cross_dissipator(&r1, &r2, rho);
    Ok(&emission.scale_real(g * (n + 1.0)) + &absorption.scale_real(g * n))
}

/// The printed uncorrelated generator at the Bell state (basis
/// `|11>, |10>, |01>, |00>`).
pub fn fixture_case1_matrix(gamma: f64, n: f64) -> ComplexMatrix {
    let corner = -gamma * (1.0 + 2.0 * n) / 2.0;
    let mid = (1.0 + 2.0 * n) * gamma / 2.0;
    #[rustfmt::skip]
    let entries = [
        -(1.0 + n) * gamma, 0.0, 0.0, corner,
        0.0, mid, 0.0, 0.0,
        0.0, 0.0, mid, 0.0,
        corner, 0.0, 0.0, -n * gamma,
    ];
    ComplexMatrix::from_real(4, &entries).expect("4x4")
}

/// The printed correlated generator: only `(|10>, |01>)` coherences, equal
/// to `a N (2 + N) gamma / 2`.
pub fn fixture_case2_matrix(gamma: f64, n: f64, a: f64) -> ComplexMatrix {
    let v = a * n * (2.0 + n) * gamma / 2.0;
    let mut m = ComplexMatrix::zeros(4);
    m.set(1, 2, crate::matops::re(v));
    m.set(2, 1, crate::matops::re(v));
    m
}

/// How `L_un(rho0)` and `L_cor(rho0)` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GeneratorSource {
    /// The printed Case-1 / Case-2 matrices (Bell initial state).
    #[default]
    Fixture,
    /// First-principles evaluation of the generators at `rho0`.
    Derived,
}

impl std::str::FromStr for GeneratorSource {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixture" => Ok(Self::Fixture),
            "derived" => Ok(Self::Derived),
            _ => Err(format!("unknown mode `{s}` (expected fixture | derived)")),
        }
    }
}

impl GeneratorSource {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fixture => "fixture",
            Self::Derived => "derived",
        }
    }
}

/// `(L_un(rho0), L_cor(rho0))`. The fixture ignores `rho0` and needs
/// identical atoms.
pub fn generator_pair(
    model: &AtomicModel,
    rho0: &DensityMatrix,
    source: GeneratorSource,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    match source {
        GeneratorSource::Fixture => {
            if model.gamma1 != model.gamma2 {
                return Err(Error::param(
                    "gamma2",
                    model.gamma2,
                    "printed matrices assume gamma1 = gamma2",
                ));
            }
            let (g, n) = (model.gamma1, model.n_bar());
            Ok((
                fixture_case1_matrix(g, n),
                fixture_case2_matrix(g, n, model.a),
            ))
        }
        GeneratorSource::Derived => Ok((
            apply_uncorrelated(model, rho0.matrix())?,
            apply_correlated(model, rho0.matrix())?,
        )),
    }
}

/// `x = ||L_cor(rho0)|| / ||L_un(rho0)||`.
pub fn x_ratio(model: &AtomicModel, rho0: &DensityMatrix, source: GeneratorSource) -> Result<f64> {
    let (un, cor) = generator_pair(model, rho0, source)?;
    let denom = un.hs_norm();
    if denom == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(cor.hs_norm() / denom)
}

/// The `(|10>, |01>)` coherence of `L_cor(Bell)` as printed and as derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Case2Discrepancy {
    /// `a N (2 + N) gamma / 2`.
    pub fixture: f64,
    /// First-principles value, `a (2N + 1) gamma / 2`.
    pub derived: f64,
}

impl Case2Discrepancy {
    pub fn absolute(&self) -> f64 {
        (self.fixture - self.derived).abs()
    }

    /// The two expressions agree only when `N^2 = 1` or `a gamma = 0`.
    pub fn is_mismatch(&self, tol: f64) -> bool {
        self.absolute() > tol
    }
}

pub fn case2_discrepancy(gamma: f64, n: f64, a: f64) -> Result<Case2Discrepancy> {
    let model = AtomicModel::symmetric(gamma, a, ThermalBath::from_occupancy(n)?)?;
    let derived = apply_correlated(&model, DensityMatrix::bell_phi_plus().matrix())?;
    Ok(Case2Discrepancy {
        fixture: fixture_case2_matrix(gamma, n, a).get(1, 2).re,
        derived: derived.get(1, 2).re,
    })
}

/// Single-qubit thermal state `diag(N, N + 1) / (2N + 1)` (excited first),
/// squared into the two-qubit product state.
pub fn thermal_product_state(n: f64) -> Result<DensityMatrix> {
    let z = 2.0 * n + 1.0;
    let single = ComplexMatrix::from_real_diagonal(&[n / z, (n + 1.0) / z]);
    DensityMatrix::new(kron(&single, &single))
}

/// Classic fourth-order Runge-Kutta integration of `d rho/dt = L(rho)`.
/// Returns `steps + 1` states including `rho0`.
pub fn evolve_rk4(
    generator: &GeneratorSpec,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
) -> Result<Vec<DensityMatrix>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", dt, "must be positive"));
    }
    if steps == 0 {
        return Err(Error::param("steps", 0.0, "must be positive"));
    }
    let max_rate = generator.max_rate();
    if dt * max_rate > RK4_MAX_STEP_RATE {
        return Err(Error::StepTooLarge {
            dt,
            limit: RK4_MAX_STEP_RATE / max_rate,
        });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(rho0.clone());
    let mut rho = rho0.matrix().clone();
    for step in 1..=steps {
        let k1 = generator.apply(&rho);
        let k2 = generator.apply(&(&rho + &k1.scale_real(dt / 2.0)));
        let k3 = generator.apply(&(&rho + &k2.scale_real(dt / 2.0)));
        let k4 = generator.apply(&(&rho + &k3.scale_real(dt)));
        let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_real(2.0);
        rho = &rho + &incr.scale_real(dt / 6.0);
        let state = DensityMatrix::with_tolerances(rho.clone(), TRAJECTORY_TOLERANCES).map_err(
            |e| match e {
                Error::NotPositive { min_eigenvalue } => Error::PositivityViolation {
                    step,
                    min_eigenvalue,
                },
                other => other,
            },
        )?;
        out.push(state);
    }
    Ok(out)
}

/// `|tr L(rho)|` and the Hermiticity defect of `L(rho)`.
pub fn generator_residuals(generator: &GeneratorSpec, rho: &ComplexMatrix) -> (f64, f64) {
    let l = generator.apply(rho);
    (l.trace().norm(), l.hermiticity_defect())
}

/// Whether `L(rho)` is traceless and Hermitian at the state tolerance.
pub fn is_trace_preserving(generator: &GeneratorSpec, rho: &ComplexMatrix) -> bool {
    let (tr, herm) = generator_residuals(generator, rho);
    tr <= HERMITIAN_TOL && herm <= HERMITIAN_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(gamma: f64, n: f64, a: f64) -> AtomicModel {
        AtomicModel::symmetric(gamma, a, ThermalBath::from_occupancy(n).unwrap()).unwrap()
    }

    #[test]
    fn planck_examples() {
        assert!((planck_n(1.0, 1.0).unwrap() - 0.581977).abs() < 1e-6);
        assert!((planck_n(2f64.ln(), 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(planck_n(1000.0, 1.0).unwrap() < 1e-300);
        assert!(planck_n(1.0, 2.0).unwrap() > planck_n(1.0, 1.0).unwrap());
        assert!(planck_n(-1.0, 1.0).is_err());
    }

    #[test]
    fn case1_printed_at_unit_rates() {
        let bell = DensityMatrix::bell_phi_plus();
        let l = apply_uncorrelated(&model(1.0, 1.0, 0.0), bell.matrix()).unwrap();
        for (i, want) in [-2.0, 1.5, 1.5, -1.0].into_iter().enumerate() {
            assert!((l.get(i, i).re - want).abs() < 1e-15);
        }
        assert!((l.get(0, 3).re + 1.5).abs() < 1e-15 && (l.get(3, 0).re + 1.5).abs() < 1e-15);
        assert!(l.max_abs_diff(&fixture_case1_matrix(1.0, 1.0)) < 1e-15);
    }

    #[test]
    fn case1_at_zero_temperature() {
        let m = fixture_case1_matrix(1.0, 0.0);
        let want = ComplexMatrix::from_real(
            4,
            &[
                -1.0, 0.0, 0.0, -0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(m, want);
        assert_eq!(fixture_case1_matrix(0.0, 3.0).hs_norm(), 0.0);
    }

    #[test]
    fn case2_examples() {
        assert_eq!(fixture_case2_matrix(1.0, 1.0, 0.0).hs_norm(), 0.0);
        assert_eq!(fixture_case2_matrix(1.0, 1.0, 1.0).get(1, 2).re, 1.5);
        let (g, n, a) = (0.7, 2.0, 0.4);
        let want = a * n * (2.0 + n) * g / 2f64.sqrt();
        assert!((fixture_case2_matrix(g, n, a).hs_norm() - want).abs() < 1e-14);
    }

    #[test]
    fn x_ratio_fixture_and_linearity() {
        let bell = DensityMatrix::bell_phi_plus();
        let x = x_ratio(&model(1.0, 1.0, 1.0), &bell, GeneratorSource::Fixture).unwrap();
        assert!((x - 1.5 * 2f64.sqrt() / 14f64.sqrt()).abs() < 1e-15);
        assert!((x - 0.566947).abs() < 1e-6);
        assert_eq!(
            x_ratio(&model(1.0, 1.0, 0.0), &bell, GeneratorSource::Fixture).unwrap(),
            0.0
        );
        let half = x_ratio(&model(1.0, 1.0, 0.5), &bell, GeneratorSource::Fixture).unwrap();
        assert!((half - x / 2.0).abs() < 1e-15);
    }

    #[test]
    fn derived_case2_coherence() {
        for n in [0.0, 0.5, 1.0, 3.0] {
            let d = case2_discrepancy(1.3, n, 0.6).unwrap();
            assert!((d.derived - 0.6 * (2.0 * n + 1.0) * 1.3 / 2.0).abs() < 1e-14);
            assert!((d.fixture - 0.6 * n * (2.0 + n) * 1.3 / 2.0).abs() < 1e-14);
        }
        assert!(!case2_discrepancy(1.0, 1.0, 1.0).unwrap().is_mismatch(1e-12));
        assert!(case2_discrepancy(1.0, 2.0, 1.0).unwrap().is_mismatch(1e-12));
    }

    #[test]
    fn total_generator_is_sum_of_parts() {
        let bell = DensityMatrix::bell_phi_plus();
        for a in [0.0, 0.3, 1.0] {
            let m =
                AtomicModel::new(0.8, 1.7, a, ThermalBath::from_occupancy(0.6).unwrap()).unwrap();
            let total = m.total_generator().apply(bell.matrix());
            let parts = &apply_uncorrelated(&m, bell.matrix()).unwrap()
                + &apply_correlated(&m, bell.matrix()).unwrap();
            assert!(total.max_abs_diff(&parts) < 1e-14, "a={a}");
        }
    }

    #[test]
    fn gibbs_state_is_stationary() {
        for n in [0.1, 1.0, 5.0] {
            let rho = thermal_product_state(n).unwrap();
            let l = apply_uncorrelated(&model(1.0, n, 0.0), rho.matrix()).unwrap();
            assert!(l.hs_norm() < 1e-10);
        }
        let bath = ThermalBath::from_temperature(1.0, 0.8).unwrap();
        let rho = thermal_product_state(bath.n_bar()).unwrap();
        let m = AtomicModel::symmetric(2.0, 0.0, bath).unwrap();
        assert!(apply_uncorrelated(&m, rho.matrix()).unwrap().hs_norm() < 1e-10);
    }

    #[test]
    fn emission_only_flow() {
        let rho = DensityMatrix::maximally_mixed(4);
        let l = apply_uncorrelated(&model(1.0, 0.0, 0.0), rho.matrix()).unwrap();
        assert!(l.trace().norm() < 1e-15);
        assert!(l.get(0, 0).re < 0.0 && l.get(3, 3).re > 0.0);
    }

    #[test]
    fn rk4_constant_under_zero_generator() {
        let bell = DensityMatrix::bell_phi_plus();
        let traj = evolve_rk4(&GeneratorSpec::zero(GeneratorLabel::Total), &bell, 0.1, 5).unwrap();
        assert_eq!(traj.len(), 6);
        assert!(traj.iter().all(|s| s.matrix() == bell.matrix()));
    }

    #[test]
    fn rk4_step_guard() {
        let generator = model(1.0, 0.0, 0.0).uncorrelated_generator();
        let bell = DensityMatrix::bell_phi_plus();
        assert!(matches!(
            evolve_rk4(&generator, &bell, 0.5, 3),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn dimension_checks() {
        let m = model(1.0, 1.0, 0.5);
        assert!(apply_uncorrelated(&m, &ComplexMatrix::identity(2)).is_err());
        assert!(apply_correlated(&m, &ComplexMatrix::identity(2)).is_err());
        assert!(AtomicModel::symmetric(1.0, 1.5, *m.bath()).is_err());
    }
}
