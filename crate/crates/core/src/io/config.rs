//! `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Unknown and repeated keys
//! are rejected. Wavelengths are nanometres, geometry micrometres.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::objectives::{
    default_g0, MismatchSource, Normalization, ObjectiveSpec, Problem, Variant,
};
use crate::optimizer::HwsdaConfig;
use crate::physics::{nm_to_um, DispersionModel, PhaseMismatchPair, SellmeierCoefficients};

pub const REQUIRED_KEYS: [&str; 4] = [
    "crystal_length_um",
    "domain_thickness_um",
    "process",
    "pump_wavelengths_nm",
];

const SELLMEIER_KEYS: [&str; 10] = [
    "sellmeier_a1",
    "sellmeier_a2",
    "sellmeier_a3",
    "sellmeier_a4",
    "sellmeier_a5",
    "sellmeier_a6",
    "sellmeier_b1",
    "sellmeier_b2",
    "sellmeier_b3",
    "sellmeier_b4",
];

const OPTIONAL_KEYS: [&str; 34] = [
    "temperature_c",
    "sellmeier_lambda_min_um",
    "sellmeier_lambda_max_um",
    "dk_override",
    "normalization",
    "g0",
    "beta",
    "np",
    "generations",
    "seed",
    "workers",
    "output_dir",
    "f_max",
    "f_min",
    "cr",
    "init_min",
    "init_max",
    "leader_count",
    "gwo_a",
    "gwo_a_end",
    "p_dist",
    "p_sl",
    "p_flip",
    "phase_split",
    "discreteness_factor",
    "divide_by_leader_count",
    "adaptive_branches",
    "theta_low",
    "theta_high",
    "convergence_threshold",
    "convergence_window",
    "exploration_boost",
    "exploitation_factor",
    "decay_end",
];

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub crystal_length_um: f64,
    pub domain_thickness_um: f64,
    pub process: Variant,
    pub pump_wavelengths_nm: Vec<f64>,
    pub temperature_c: f64,
    pub sellmeier: SellmeierCoefficients,
    pub lambda_min_um: f64,
    pub lambda_max_um: f64,
    pub dk_override: Option<Vec<PhaseMismatchPair>>,
    pub normalization: Normalization,
    pub g0: f64,
    pub beta: f64,
    pub optimizer: HwsdaConfig,
    /// 0 selects one worker per core.
    pub workers: usize,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn domain_count(&self) -> usize {
        (self.crystal_length_um / self.domain_thickness_um).round() as usize
    }

    pub fn dispersion_model(&self) -> Result<DispersionModel> {
        DispersionModel::new(
            self.sellmeier,
            self.temperature_c,
            self.lambda_min_um,
            self.lambda_max_um,
        )
    }

    pub fn mismatch_source(&self) -> Result<MismatchSource> {
        Ok(match &self.dk_override {
            Some(pairs) => MismatchSource::Override(pairs.clone()),
            None => MismatchSource::Dispersion(self.dispersion_model()?),
        })
    }

    pub fn objective_spec(&self) -> ObjectiveSpec {
        ObjectiveSpec {
            variant: self.process,
            pump_wavelengths_nm: self.pump_wavelengths_nm.clone(),
            g0: self.g0,
            beta: self.beta,
            normalization: self.normalization,
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(
            self.objective_spec(),
            &self.mismatch_source()?,
            self.domain_thickness_um,
            self.domain_count(),
        )
    }

    /// Every key with its resolved value; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        kv("crystal_length_um", self.crystal_length_um.to_string());
        kv("domain_thickness_um", self.domain_thickness_um.to_string());
        kv("process", self.process.to_string());
        kv("pump_wavelengths_nm", list(&self.pump_wavelengths_nm));
        kv("temperature_c", self.temperature_c.to_string());
        for (key, (_, value)) in SELLMEIER_KEYS.iter().zip(self.sellmeier.named()) {
            kv(key, value.to_string());
        }
        kv("sellmeier_lambda_min_um", self.lambda_min_um.to_string());
        kv("sellmeier_lambda_max_um", self.lambda_max_um.to_string());
        if let Some(pairs) = &self.dk_override {
            kv(
                "dk_override",
                pairs
                    .iter()
                    .map(|p| format!("{}:{}", p.dk1, p.dk2))
                    .collect::<Vec<_>>()
                    .join(", "),
            );
        }
        kv("normalization", self.normalization.to_string());
        kv("g0", self.g0.to_string());
        kv("beta", self.beta.to_string());
        let o = &self.optimizer;
        kv("np", o.np.to_string());
        kv("generations", o.generations.to_string());
        kv("seed", o.seed.to_string());
        kv("workers", self.workers.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        kv("f_max", o.de.f_max.to_string());
        kv("f_min", o.de.f_min.to_string());
        kv("cr", o.de.cr.to_string());
        kv("init_min", o.de.init_min.to_string());
        kv("init_max", o.de.init_max.to_string());
        kv("leader_count", o.gwo.leader_count.to_string());
        kv("gwo_a", o.gwo.a.to_string());
        kv("gwo_a_end", o.gwo.a_end.to_string());
        kv("p_dist", o.gwo.disturbance_rate.to_string());
        kv("p_sl", o.gwo.social_learning_rate.to_string());
        kv("p_flip", o.gwo.flip_rate.to_string());
        kv("phase_split", o.gwo.phase_split.to_string());
        kv("discreteness_factor", o.gwo.discreteness_factor.to_string());
        kv(
            "divide_by_leader_count",
            o.gwo.divide_by_leader_count.to_string(),
        );
        kv("adaptive_branches", o.adaptive.branches.to_string());
        kv("theta_low", o.adaptive.theta_low.to_string());
        kv("theta_high", o.adaptive.theta_high.to_string());
        kv(
            "convergence_threshold",
            o.adaptive.convergence_threshold.to_string(),
        );
        kv(
            "convergence_window",
            o.adaptive.convergence_window.to_string(),
        );
        kv(
            "exploration_boost",
            o.adaptive.exploration_boost.to_string(),
        );
        kv(
            "exploitation_factor",
            o.adaptive.exploitation_factor.to_string(),
        );
        kv("decay_end", o.adaptive.decay_end.to_string());
        s
    }

    pub fn write_resolved(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("resolved.cfg");
        super::write_file(&path, self.to_config_string())?;
        Ok(path)
    }
}

struct Entries {
    values: HashMap<String, (usize, String)>,
}

impl Entries {
    fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |(l, _)| *l)
    }

    fn fail(&self, key: &str, message: impl Into<String>) -> Error {
        Error::ConfigLine {
            line: self.line(key),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(_, v)| v.as_str())
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.fail(key, format!("cannot parse `{v}`"))),
        }
    }

    fn float(&self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.parsed(key, default)?;
        if !v.is_finite() {
            return Err(self.fail(key, "value must be finite"));
        }
        Ok(v)
    }

    fn in_range(&self, key: &str, default: f64, lo: f64, hi: f64) -> Result<f64> {
        let v = self.float(key, default)?;
        if !(lo..=hi).contains(&v) {
            return Err(self.fail(key, format!("{v} outside [{lo}, {hi}]")));
        }
        Ok(v)
    }
}

fn split_entries(text: &str) -> Result<Entries> {
    let known: Vec<&str> = REQUIRED_KEYS
        .iter()
        .chain(&SELLMEIER_KEYS)
        .chain(&OPTIONAL_KEYS)
        .copied()
        .collect();
    let mut values = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::ConfigLine {
                line,
                key: content.to_string(),
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        if !known.contains(&key) {
            return Err(Error::ConfigLine {
                line,
                key: key.to_string(),
                message: "unknown key".into(),
            });
        }
        if let Some((first, _)) = values.get(key) {
            return Err(Error::ConfigLine {
                line,
                key: key.to_string(),
                message: format!("repeated key (first set on line {first})"),
            });
        }
        values.insert(key.to_string(), (line, value.trim().to_string()));
    }
    Ok(Entries { values })
}

/// Parse and validate a configuration text, applying defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = split_entries(text)?;

    let length_key = "crystal_length_um";
    let thickness_key = "domain_thickness_um";
    e.required(length_key)?;
    e.required(thickness_key)?;
    let crystal_length_um = e.float(length_key, 0.0)?;
    let domain_thickness_um = e.float(thickness_key, 0.0)?;
    if !(crystal_length_um > 0.0) {
        return Err(e.fail(length_key, "must be positive"));
    }
    if !(domain_thickness_um > 0.0) {
        return Err(e.fail(thickness_key, "must be positive"));
    }
    let ratio = crystal_length_um / domain_thickness_um;
    if (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
        return Err(e.fail(
            thickness_key,
            format!(
                "non-integer domain count: {crystal_length_um} / {domain_thickness_um} = {ratio}"
            ),
        ));
    }

    let process: Variant = e
        .required("process")?
        .parse()
        .map_err(|err: Error| e.fail("process", err.to_string()))?;

    let wl_key = "pump_wavelengths_nm";
    let pump_wavelengths_nm = e
        .required(wl_key)?
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| e.fail(wl_key, format!("invalid wavelength `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if process.is_multi() && pump_wavelengths_nm.len() < 2 {
        return Err(e.fail(wl_key, format!("{process} needs at least two wavelengths")));
    }
    if !process.is_multi() && pump_wavelengths_nm.len() != 1 {
        return Err(e.fail(wl_key, format!("{process} takes exactly one wavelength")));
    }

    let temperature_c = e.float("temperature_c", 25.0)?;
    let defaults = DispersionModel::congruent_ln(temperature_c);
    let mut sellmeier = defaults.coefficients;
    for key in SELLMEIER_KEYS {
        let name = &key["sellmeier_".len()..];
        let current = sellmeier
            .named()
            .iter()
            .find(|(n, _)| *n == name)
            .map(|p| p.1);
        let v = e.float(key, current.unwrap_or(0.0))?;
        sellmeier.set(name, v);
    }
    let lambda_min_um = e.float("sellmeier_lambda_min_um", defaults.lambda_min_um)?;
    let lambda_max_um = e.float("sellmeier_lambda_max_um", defaults.lambda_max_um)?;
    if !(lambda_min_um > 0.0 && lambda_min_um < lambda_max_um) {
        return Err(e.fail(
            "sellmeier_lambda_max_um",
            format!("invalid range [{lambda_min_um}, {lambda_max_um}]"),
        ));
    }

    let dk_override = match e.raw("dk_override") {
        None => None,
        Some(v) => {
            let pairs = v
                .split(',')
                .map(|p| {
                    let p = p.trim();
                    let parsed = p.split_once(':').and_then(|(a, b)| {
                        Some(PhaseMismatchPair::new(
                            a.trim().parse().ok()?,
                            b.trim().parse().ok()?,
                        ))
                    });
                    parsed
                        .filter(|m| m.dk1.is_finite() && m.dk2.is_finite())
                        .ok_or_else(|| {
                            e.fail("dk_override", format!("expected dk1:dk2, found `{p}`"))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            if pairs.len() != pump_wavelengths_nm.len() {
                return Err(e.fail(
                    "dk_override",
                    format!(
                        "{} pairs for {} pump wavelengths",
                        pairs.len(),
                        pump_wavelengths_nm.len()
                    ),
                ));
            }
            Some(pairs)
        }
    };

    let normalization: Normalization = e
        .raw("normalization")
        .unwrap_or("normalized")
        .parse()
        .map_err(|err: Error| e.fail("normalization", err.to_string()))?;
    let g0 = e.float(
        "g0",
        default_g0(process.process(), normalization, crystal_length_um),
    )?;
    if !(g0 > 0.0) {
        return Err(e.fail("g0", "must be positive"));
    }
    let beta = e.float("beta", 1.0)?;
    if beta < 0.0 {
        return Err(e.fail("beta", "must be >= 0"));
    }

    let mut opt = HwsdaConfig::default();
    opt.np = e.parsed("np", opt.np)?;
    if opt.np < 4 {
        return Err(e.fail("np", format!("{} but at least 4 are required", opt.np)));
    }
    opt.generations = e.parsed("generations", opt.generations)?;
    opt.seed = e.parsed("seed", opt.seed)?;
    let workers = e.parsed("workers", 0usize)?;
    let output_dir = PathBuf::from(e.raw("output_dir").unwrap_or("out"));

    opt.de.f_max = e.in_range("f_max", opt.de.f_max, f64::MIN_POSITIVE, 2.0)?;
    opt.de.f_min = e.in_range("f_min", opt.de.f_min, f64::MIN_POSITIVE, 2.0)?;
    if opt.de.f_min > opt.de.f_max {
        return Err(e.fail("f_min", format!("exceeds f_max = {}", opt.de.f_max)));
    }
    opt.de.f = opt.de.f_max;
    opt.de.cr = e.in_range("cr", opt.de.cr, 0.0, 1.0)?;
    opt.de.init_min = e.float("init_min", opt.de.init_min)?;
    opt.de.init_max = e.float("init_max", opt.de.init_max)?;
    if opt.de.init_min > opt.de.init_max {
        return Err(e.fail("init_min", "exceeds init_max"));
    }

    opt.gwo.leader_count = e.parsed("leader_count", opt.gwo.leader_count)?;
    if !(3..=4).contains(&opt.gwo.leader_count) {
        return Err(e.fail("leader_count", "must be 3 or 4"));
    }
    opt.gwo.a = e.in_range("gwo_a", opt.gwo.a, 0.0, 2.0)?;
    opt.gwo.a_end = e.in_range("gwo_a_end", opt.gwo.a_end, 0.0, opt.gwo.a)?;
    opt.gwo.disturbance_rate = e.in_range("p_dist", opt.gwo.disturbance_rate, 0.0, 1.0)?;
    opt.gwo.social_learning_rate = e.in_range("p_sl", opt.gwo.social_learning_rate, 0.0, 1.0)?;
    opt.gwo.flip_rate = e.in_range("p_flip", opt.gwo.flip_rate, 0.0, 1.0)?;
    opt.gwo.phase_split = e.in_range("phase_split", opt.gwo.phase_split, 0.0, 1.0)?;
    opt.gwo.discreteness_factor = e.in_range(
        "discreteness_factor",
        opt.gwo.discreteness_factor,
        0.0,
        f64::MAX,
    )?;
    opt.gwo.divide_by_leader_count =
        e.parsed("divide_by_leader_count", opt.gwo.divide_by_leader_count)?;

    let a = &mut opt.adaptive;
    a.branches = e.parsed("adaptive_branches", a.branches)?;
    a.theta_low = e.in_range("theta_low", a.theta_low, 0.0, f64::MAX)?;
    a.theta_high = e.in_range("theta_high", a.theta_high, 0.0, f64::MAX)?;
    a.convergence_threshold =
        e.in_range("convergence_threshold", a.convergence_threshold, 0.0, 1.0)?;
    a.convergence_window = e.parsed("convergence_window", a.convergence_window)?;
    if a.convergence_window == 0 {
        return Err(e.fail("convergence_window", "must be >= 1"));
    }
    a.exploration_boost = e.in_range("exploration_boost", a.exploration_boost, 0.0, f64::MAX)?;
    a.exploitation_factor =
        e.in_range("exploitation_factor", a.exploitation_factor, 0.0, f64::MAX)?;
    a.decay_end = e.in_range("decay_end", a.decay_end, 0.8, 1.0)?;
    opt.validate()?;

    let config = RunConfig {
        crystal_length_um,
        domain_thickness_um,
        process,
        pump_wavelengths_nm,
        temperature_c,
        sellmeier,
        lambda_min_um,
        lambda_max_um,
        dk_override,
        normalization,
        g0,
        beta,
        optimizer: opt,
        workers,
        output_dir,
    };

    if config.dk_override.is_none() {
        let model = config.dispersion_model()?;
        let order = match process.process() {
            crate::physics::Process::Shg => 2.0,
            crate::physics::Process::Thg => 3.0,
        };
        for &nm in &config.pump_wavelengths_nm {
            let lambda = nm_to_um(nm);
            for w in [lambda, lambda / order] {
                model
                    .refractive_index(w)
                    .map_err(|err| e.fail(wl_key, err.to_string()))?;
            }
        }
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
