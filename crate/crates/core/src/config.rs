//! Flat `key = value` configuration files and layered lookup.
//!
//! Keys are the long command-line flag names without the leading dashes
//! (`tau-min = 0.02`); underscores are accepted in place of dashes. `#`
//! starts a comment. Lookup order is command-line flag, then config file,
//! then the built-in default.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::channels::{AmplitudeVariant, ChannelFamily};
use crate::lindblad::GeneratorSource;
use crate::sweep::{BathSpec, ChannelSweepConfig, Grid, LindbladSweepConfig};

/// Environment variable naming a fallback config file.
pub const CONFIG_ENV: &str = "QSLNOISE_CONFIG";

pub type KeyValues = BTreeMap<String, String>;

fn normalize_key(k: &str) -> String {
    k.trim().replace('_', "-")
}

pub fn parse_config(text: &str) -> Result<KeyValues, String> {
    let mut out = KeyValues::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", lineno + 1))?;
        let key = normalize_key(k);
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<KeyValues, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("config: cannot read {}: {e}", path.display()))?;
    parse_config(&text)
}

/// Flag values layered over config-file values.
#[derive(Clone, Debug, Default)]
pub struct Layered {
    flags: KeyValues,
    file: KeyValues,
}

impl Layered {
    pub fn new(flags: KeyValues, file: KeyValues) -> Self {
        let flags = flags
            .into_iter()
            .map(|(k, v)| (normalize_key(&k), v))
            .collect();
        Self { flags, file }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .or_else(|| self.file.get(key))
            .map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| format!("{key}: cannot parse `{v}`: {e}")),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>, String> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("{key}: cannot parse `{s}`: {e}"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}

/// Channel family names accepted on the command line.
pub fn parse_family(
    name: &str,
    variant: AmplitudeVariant,
) -> Result<Option<ChannelFamily>, String> {
    match name {
        "rtn-product" => Ok(Some(ChannelFamily::RtnProduct)),
        "phase-damping" => Ok(Some(ChannelFamily::PhaseDamping)),
        "amplitude-damping" => Ok(Some(ChannelFamily::AmplitudeDamping(variant))),
        "lindblad" => Ok(None),
        other => Err(format!(
            "family: unknown `{other}` (expected rtn-product | phase-damping | amplitude-damping | lindblad)"
        )),
    }
}

pub fn channel_sweep_config(s: &Layered) -> Result<ChannelSweepConfig, String> {
    let d = ChannelSweepConfig::default();
    let variant: AmplitudeVariant = s.get_or("variant", AmplitudeVariant::Standard)?;
    let family_name = s.raw("family").unwrap_or(d.family.name());
    let family = parse_family(family_name, variant)?
        .ok_or("family: `lindblad` is swept with sweep-lindblad".to_string())?;
    let config = ChannelSweepConfig {
        family,
        tau: Grid {
            min: s.get_or("tau-min", d.tau.min)?,
            max: s.get_or("tau-max", d.tau.max)?,
            steps: s.get_or("tau-steps", d.tau.steps)?,
        },
        t_eval: s.get_or("time", d.t_eval)?,
        theta: s.get_or("theta", d.theta)?,
        mu: s.get_or("mu", d.mu)?,
    };
    config.validate()?;
    Ok(config)
}

pub fn lindblad_sweep_config(s: &Layered) -> Result<LindbladSweepConfig, String> {
    let d = LindbladSweepConfig::default();
    let nbar = s.get_list("nbar")?;
    let omega: Option<f64> = s.get("omega")?;
    let temperature: Option<f64> = s.get("temperature")?;
    let bath = match (nbar, omega, temperature) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err("nbar: give either --nbar or --omega/--temperature, not both".into())
        }
        (Some(ns), None, None) => BathSpec::Occupancies(ns),
        (None, Some(omega), Some(temperature)) => BathSpec::Temperature { omega, temperature },
        (None, Some(_), None) => return Err("temperature: required together with --omega".into()),
        (None, None, Some(_)) => return Err("omega: required together with --temperature".into()),
        (None, None, None) => d.bath.clone(),
    };
    let config = LindbladSweepConfig {
        a: Grid {
            min: s.get_or("a-min", d.a.min)?,
            max: s.get_or("a-max", d.a.max)?,
            steps: s.get_or("a-steps", d.a.steps)?,
        },
        gammas: s.get_list("gamma")?.unwrap_or(d.gammas),
        bath,
        theta: s.get_or("theta", d.theta)?,
        source: s.get_or::<GeneratorSource>("mode", d.source)?,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> KeyValues {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn parses_flat_file() {
        let text = "# sweep\ntau_min = 0.02\n\nfamily=rtn-product  # inline\n";
        let kv = parse_config(text).unwrap();
        assert_eq!(kv["tau-min"], "0.02");
        assert_eq!(kv["family"], "rtn-product");
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn precedence_flag_over_file_over_default() {
        let fields: &[(&str, &str, &str)] = &[
            ("tau-min", "0.02", "0.03"),
            ("tau-max", "0.2", "0.22"),
            ("tau-steps", "5", "7"),
            ("time", "0.3", "0.4"),
            ("theta", "1.0", "1.2"),
            ("mu", "0.5", "0.7"),
        ];
        for (key, file_v, flag_v) in fields {
            let d = channel_sweep_config(&Layered::default()).unwrap();
            let f = channel_sweep_config(&Layered::new(KeyValues::new(), kv(&[(key, file_v)])))
                .unwrap();
            let both =
                channel_sweep_config(&Layered::new(kv(&[(key, flag_v)]), kv(&[(key, file_v)])))
                    .unwrap();
            let pick = |c: &ChannelSweepConfig| match *key {
                "tau-min" => c.tau.min,
                "tau-max" => c.tau.max,
                "tau-steps" => c.tau.steps as f64,
                "time" => c.t_eval,
                "theta" => c.theta,
                _ => c.mu,
            };
            assert_ne!(pick(&d), file_v.parse::<f64>().unwrap(), "{key}");
            assert_eq!(pick(&f), file_v.parse::<f64>().unwrap(), "{key}");
            assert_eq!(pick(&both), flag_v.parse::<f64>().unwrap(), "{key}");
        }
        let fam = channel_sweep_config(&Layered::new(
            kv(&[
                ("family", "amplitude-damping"),
                ("variant", "paper-literal"),
            ]),
            kv(&[("family", "rtn-product")]),
        ))
        .unwrap();
        assert_eq!(
            fam.family,
            ChannelFamily::AmplitudeDamping(AmplitudeVariant::Literal)
        );
    }

    #[test]
    fn lindblad_precedence_and_bath_exclusivity() {
        let c = lindblad_sweep_config(&Layered::new(
            kv(&[("gamma", "0.5,2")]),
            kv(&[("gamma", "3"), ("nbar", "0.1, 0.5"), ("a-steps", "11")]),
        ))
        .unwrap();
        assert_eq!(c.gammas, vec![0.5, 2.0]);
        assert_eq!(c.bath, BathSpec::Occupancies(vec![0.1, 0.5]));
        assert_eq!(c.a.steps, 11);

        let err = lindblad_sweep_config(&Layered::new(
            kv(&[("nbar", "1"), ("omega", "1")]),
            KeyValues::new(),
        ))
        .unwrap_err();
        assert!(err.starts_with("nbar"));
        let err = lindblad_sweep_config(&Layered::new(kv(&[("omega", "1")]), KeyValues::new()))
            .unwrap_err();
        assert!(err.starts_with("temperature"));
        let t = lindblad_sweep_config(&Layered::new(
            kv(&[("omega", "1"), ("temperature", "2")]),
            KeyValues::new(),
        ))
        .unwrap();
        assert!(matches!(t.bath, BathSpec::Temperature { .. }));
    }

    #[test]
    fn invalid_values_name_the_field() {
        let e = channel_sweep_config(&Layered::new(kv(&[("tau-steps", "abc")]), KeyValues::new()))
            .unwrap_err();
        assert!(e.starts_with("tau-steps"));
        let e = channel_sweep_config(&Layered::new(
            kv(&[("family", "lindblad")]),
            KeyValues::new(),
        ))
        .unwrap_err();
        assert!(e.starts_with("family"));
        let e =
            channel_sweep_config(&Layered::new(kv(&[("mu", "2")]), KeyValues::new())).unwrap_err();
        assert!(e.starts_with("mu"));
    }
}
