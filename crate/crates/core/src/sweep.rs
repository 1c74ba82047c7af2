//! Parameter sweeps and their CSV output.
//!
//! Grid points are independent, so they are evaluated data-parallel when the
//! `parallel` feature is on. Results are collected in grid order; the output
//! does not depend on scheduling.

use std::io::{self, Write};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::channels::{ChannelFamily, MemoryMix, RtnParams};
use crate::error::Result;
use crate::lindblad::{generator_pair, AtomicModel, GeneratorSource, ThermalBath};
use crate::matops::DensityMatrix;
use crate::qsl::{lindblad_sandwich, qsl_ratio_channels, Bound, QslInput};

/// Significant digits of every CSV number.
pub const CSV_DIGITS: usize = 12;

pub const CHANNEL_HEADER: &str = "tau,t_eval,phi,p,denom_uncorrelated,denom_correlated,ratio_R";
pub const LINDBLAD_HEADER: &str = "a,gamma,n_bar,x,ratio,lower_bound,upper_bound";

/// How grid points are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

// derive(Default) cannot follow the feature flag
#[allow(clippy::derivable_impls)]
impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

/// Order-preserving map over a grid.
pub fn grid_map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + (max - min) * i as f64 / last
            }
        })
        .collect()
}

/// Inclusive grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }

    fn validate(&self, prefix: &'static str) -> std::result::Result<(), String> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(format!("{prefix}-min/{prefix}-max must be finite"));
        }
        if self.min >= self.max {
            return Err(format!(
                "{prefix}-min ({}) must be below {prefix}-max ({})",
                self.min, self.max
            ));
        }
        if self.steps < 2 {
            return Err(format!(
                "{prefix}-steps ({}) must be at least 2",
                self.steps
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSweepConfig {
    pub family: ChannelFamily,
    pub tau: Grid,
    pub t_eval: f64,
    pub theta: f64,
    /// Memory parameter of the correlated side; the uncorrelated side is `mu = 0`.
    pub mu: f64,
}

impl Default for ChannelSweepConfig {
    fn default() -> Self {
        Self {
            family: ChannelFamily::PhaseDamping,
            tau: Grid {
                min: 0.01,
                max: 0.25,
                steps: 25,
            },
            t_eval: 0.1,
            theta: std::f64::consts::FRAC_PI_2,
            mu: 1.0,
        }
    }
}

impl ChannelSweepConfig {
    /// Checks every field; the message names the offending one.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.tau.validate("tau")?;
        if self.tau.min <= 0.0 {
            return Err(format!("tau-min ({}) must be positive", self.tau.min));
        }
        if !(self.t_eval.is_finite() && self.t_eval >= 0.0) {
            return Err(format!("time ({}) must be nonnegative", self.t_eval));
        }
        if !(self.theta > 0.0 && self.theta <= std::f64::consts::FRAC_PI_2) {
            return Err(format!("theta ({}) must lie in (0, pi/2]", self.theta));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(format!("mu ({}) must lie in [0, 1]", self.mu));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelRow {
    pub tau: f64,
    pub t_eval: f64,
    pub phi: f64,
    pub p: f64,
    pub denom_uncorrelated: f64,
    pub denom_correlated: f64,
    pub ratio: Bound,
}

pub fn sweep_channel(config: &ChannelSweepConfig, exec: Execution) -> Result<Vec<ChannelRow>> {
    let mix = (MemoryMix::uncorrelated(), MemoryMix::new(config.mu)?);
    let input = QslInput::new(config.theta, DensityMatrix::bell_phi_plus())?;
    let rows = grid_map(&config.tau.points(), exec, |&tau| {
        channel_row(config.family, tau, config.t_eval, mix, &input)
    });
    rows.into_iter().collect()
}

fn channel_row(
    family: ChannelFamily,
    tau: f64,
    t: f64,
    mix: (MemoryMix, MemoryMix),
    input: &QslInput,
) -> Result<ChannelRow> {
    let params = RtnParams::new(tau, t)?;
    let r = qsl_ratio_channels(family, &params, mix, input.rho0())?;
    Ok(ChannelRow {
        tau,
        t_eval: t,
        phi: params.phi(),
        p: family.probability(&params)?,
        denom_uncorrelated: r.denom_uncorrelated,
        denom_correlated: r.denom_correlated,
        ratio: r.point.ratio,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LindbladSweepConfig {
    pub a: Grid,
    pub gammas: Vec<f64>,
    pub bath: BathSpec,
    pub theta: f64,
    pub source: GeneratorSource,
}

/// Bath occupancies to sweep, given directly or via `(omega, T)`.
#[derive(Clone, Debug, PartialEq)]
pub enum BathSpec {
    Occupancies(Vec<f64>),
    Temperature { omega: f64, temperature: f64 },
}

impl BathSpec {
    pub fn baths(&self) -> Result<Vec<ThermalBath>> {
        match self {
            BathSpec::Occupancies(ns) => {
                ns.iter().map(|&n| ThermalBath::from_occupancy(n)).collect()
            }
            BathSpec::Temperature { omega, temperature } => {
                Ok(vec![ThermalBath::from_temperature(*omega, *temperature)?])
            }
        }
    }
}

impl Default for LindbladSweepConfig {
    fn default() -> Self {
        Self {
            a: Grid {
                min: 0.0,
                max: 1.0,
                steps: 21,
            },
            gammas: vec![1.0],
            bath: BathSpec::Occupancies(vec![1.0]),
            theta: std::f64::consts::FRAC_PI_2,
            source: GeneratorSource::Fixture,
        }
    }
}

impl LindbladSweepConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.a.validate("a")?;
        if self.a.min < 0.0 || self.a.max > 1.0 {
            return Err(format!(
                "a-min/a-max ({}, {}) must lie in [0, 1]",
                self.a.min, self.a.max
            ));
        }
        if self.gammas.is_empty() || self.gammas.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(format!("gamma ({:?}) must be positive", self.gammas));
        }
        match &self.bath {
            BathSpec::Occupancies(ns) => {
                if ns.is_empty() || ns.iter().any(|n| !(*n >= 0.0 && n.is_finite())) {
                    return Err(format!("nbar ({ns:?}) must be nonnegative"));
                }
            }
            BathSpec::Temperature { omega, temperature } => {
                if !(*omega > 0.0 && omega.is_finite()) {
                    return Err(format!("omega ({omega}) must be positive"));
                }
                if !(*temperature > 0.0 && temperature.is_finite()) {
                    return Err(format!("temperature ({temperature}) must be positive"));
                }
            }
        }
        if !(self.theta > 0.0 && self.theta <= std::f64::consts::FRAC_PI_2) {
            return Err(format!("theta ({}) must lie in (0, pi/2]", self.theta));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladRow {
    pub a: f64,
    pub gamma: f64,
    pub n_bar: f64,
    pub x: f64,
    pub ratio: Bound,
    pub lower: f64,
    pub upper: Bound,
}

impl LindbladRow {
    pub fn within_bounds(&self, tol: f64) -> bool {
        let r = self.ratio.as_f64();
        self.lower <= r + tol && (self.upper.is_infinite() || r <= self.upper.as_f64() + tol)
    }
}

/// Rows ordered by bath occupancy, then gamma, then `a`.
pub fn sweep_lindblad(config: &LindbladSweepConfig, exec: Execution) -> Result<Vec<LindbladRow>> {
    let baths = config.bath.baths()?;
    let mut points = Vec::new();
    for bath in &baths {
        for &gamma in &config.gammas {
            for a in config.a.points() {
                points.push((*bath, gamma, a));
            }
        }
    }
    let bell = DensityMatrix::bell_phi_plus();
    let rows = grid_map(&points, exec, |&(bath, gamma, a)| {
        let model = AtomicModel::symmetric(gamma, a, bath)?;
        let (un, cor) = generator_pair(&model, &bell, config.source)?;
        let s = lindblad_sandwich(a, &un, &cor)?;
        Ok(LindbladRow {
            a,
            gamma,
            n_bar: bath.n_bar(),
            x: s.x,
            ratio: s.point.ratio,
            lower: s.point.lower.unwrap_or(f64::NAN),
            upper: s.point.upper.unwrap_or(Bound::Infinite),
        })
    });
    rows.into_iter().collect()
}

/// Formats with [`CSV_DIGITS`] significant digits, `%g` style, trailing
/// zeros trimmed. Non-finite values never reach this.
pub fn format_number(v: f64) -> String {
    assert!(v.is_finite(), "non-finite value in CSV output");
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..CSV_DIGITS as i32).contains(&exp) {
        let decimals = (CSV_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

pub fn format_bound(b: Bound) -> String {
    match b {
        Bound::Finite(v) => format_number(v),
        Bound::Infinite => "inf".to_string(),
    }
}

pub fn write_channel_csv<W: Write>(rows: &[ChannelRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CHANNEL_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_number(r.tau),
            format_number(r.t_eval),
            format_number(r.phi),
            format_number(r.p),
            format_number(r.denom_uncorrelated),
            format_number(r.denom_correlated),
            format_bound(r.ratio),
        )?;
    }
    Ok(())
}

pub fn write_lindblad_csv<W: Write>(rows: &[LindbladRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{LINDBLAD_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_number(r.a),
            format_number(r.gamma),
            format_number(r.n_bar),
            format_number(r.x),
            format_bound(r.ratio),
            format_number(r.lower),
            format_bound(r.upper),
        )?;
    }
    Ok(())
}

pub fn channel_csv_string(rows: &[ChannelRow]) -> String {
    let mut buf = Vec::new();
    write_channel_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

pub fn lindblad_csv_string(rows: &[LindbladRow]) -> String {
    let mut buf = Vec::new();
    write_lindblad_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(1.5e20), "1.5e20");
        assert_eq!(format_bound(Bound::Infinite), "inf");
    }

    #[test]
    fn formatted_numbers_round_trip_to_twelve_digits() {
        for v in [
            0.566947,
            2.309256307,
            1e-9 / 7.0,
            7.25e13,
            -0.000123456789012345,
        ] {
            let back: f64 = format_number(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-11, "{v}");
        }
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.01, 0.25, 25);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[24], 0.25);
        assert!((g[1] - 0.02).abs() < 1e-15);
    }

    #[test]
    fn config_validation_messages() {
        let mut c = ChannelSweepConfig::default();
        assert!(c.validate().is_ok());
        c.tau = Grid {
            min: 0.1,
            max: 0.1,
            steps: 2,
        };
        assert!(c.validate().unwrap_err().contains("tau-min"));
        let l = LindbladSweepConfig {
            gammas: vec![-1.0],
            ..LindbladSweepConfig::default()
        };
        assert!(l.validate().unwrap_err().contains("gamma"));
    }

    #[test]
    fn execution_modes_agree() {
        let c = ChannelSweepConfig::default();
        let seq = sweep_channel(&c, Execution::Sequential).unwrap();
        let def = sweep_channel(&c, Execution::default()).unwrap();
        assert_eq!(seq, def);
    }
}
