//! Flat `[section]` / `key = value` configuration with explicit units.
//!
//! ```text
//! [system]
//! preset = benchmark
//! g = 1 MHz
//!
//! [sweep]
//! parameter = detuning_ratio
//! grid = 0.5:1.5:201
//! solvers = analytic, analytic-rwa
//! ```
//!
//! Bare numbers are in SI base units (Hz, K, V, F, H, m, Ω). `#` starts a
//! comment.

use std::collections::BTreeMap;

use super::{linear_grid, CircuitSetup, Solver, SweepSpec, SweptParameter};
use crate::error::{Error, Result};
use crate::fock::OracleConfig;
use crate::model::{build_system, lc_frequency, CircuitParams, ModeParams, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Frequency,
    Temperature,
    Voltage,
    Capacitance,
    Inductance,
    Length,
    Resistance,
    Dimensionless,
}

impl Quantity {
    fn scale(self, unit: &str) -> Option<f64> {
        let table: &[(&str, f64)] = match self {
            Quantity::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("KHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Quantity::Temperature => &[("K", 1.0), ("mK", 1e-3), ("uK", 1e-6), ("µK", 1e-6)],
            Quantity::Voltage => &[("V", 1.0), ("mV", 1e-3), ("uV", 1e-6), ("µV", 1e-6)],
            Quantity::Capacitance => &[("F", 1.0), ("pF", 1e-12), ("fF", 1e-15), ("aF", 1e-18)],
            Quantity::Inductance => &[("H", 1.0), ("uH", 1e-6), ("µH", 1e-6), ("nH", 1e-9), ("pH", 1e-12)],
            Quantity::Length => &[("m", 1.0), ("um", 1e-6), ("µm", 1e-6), ("nm", 1e-9), ("pm", 1e-12)],
            Quantity::Resistance => &[("Ohm", 1.0), ("kOhm", 1e3), ("MOhm", 1e6)],
            Quantity::Dimensionless => &[],
        };
        if unit.is_empty() {
            return Some(1.0);
        }
        table.iter().find(|(u, _)| *u == unit).map(|&(_, s)| s)
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    value: String,
}

type Section = BTreeMap<String, Entry>;

fn tokenize(text: &str) -> Result<BTreeMap<String, (usize, Section)>> {
    let mut sections: BTreeMap<String, (usize, Section)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::config(Some(line), None, "unterminated section header"))?
                .trim()
                .to_owned();
            if !matches!(name.as_str(), "system" | "circuit" | "mechanics" | "sweep" | "oracle") {
                return Err(Error::config(Some(line), None, format!("unknown section [{name}]")));
            }
            if sections.contains_key(&name) {
                return Err(Error::config(Some(line), None, format!("section [{name}] repeated")));
            }
            sections.insert(name.clone(), (line, Section::new()));
            current = Some(name);
            continue;
        }
        let (key, value) =
            content.split_once('=').ok_or_else(|| Error::config(Some(line), None, "expected `key = value`"))?;
        let key = key.trim();
        let section =
            current.as_ref().ok_or_else(|| Error::config(Some(line), Some(key), "key outside of any section"))?;
        let entries = &mut sections.get_mut(section).expect("section registered").1;
        if entries.insert(key.to_owned(), Entry { line, value: value.trim().to_owned() }).is_some() {
            return Err(Error::config(Some(line), Some(key), "key repeated"));
        }
    }
    Ok(sections)
}

/// Split `"2.5 MHz"` into number and unit.
fn parse_quantity(text: &str, quantity: Quantity) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text.char_indices().rev().take_while(|(_, c)| c.is_alphabetic()).last().map_or(text.len(), |(i, _)| i);
    let (number, unit) = text.split_at(split);
    let number = number.trim();
    // An exponent marker is not a unit.
    if unit.eq_ignore_ascii_case("e") || unit.is_empty() && number.is_empty() {
        return Err(format!("cannot parse `{text}`"));
    }
    let value: f64 = number.parse().map_err(|_| format!("cannot parse number `{number}`"))?;
    let scale = quantity
        .scale(unit)
        .ok_or_else(|| format!("unit `{unit}` is not valid for a {quantity:?} value").to_lowercase())?;
    if !value.is_finite() {
        return Err("value must be finite".into());
    }
    Ok(value * scale)
}

struct Reader<'a> {
    name: &'static str,
    entries: &'a Section,
    used: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn new(name: &'static str, entries: &'a Section) -> Self {
        Reader { name, entries, used: Vec::new() }
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Entry> {
        self.used.push(key);
        self.entries.get(key)
    }

    fn number(&mut self, key: &'static str, quantity: Quantity) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => {
                parse_quantity(&e.value, quantity).map(Some).map_err(|m| Error::config(Some(e.line), Some(key), m))
            }
        }
    }

    fn required(&mut self, key: &'static str, quantity: Quantity) -> Result<f64> {
        self.number(key, quantity)?.ok_or_else(|| Error::config(None, Some(key), format!("missing in [{}]", self.name)))
    }

    fn text(&mut self, key: &'static str) -> Option<(usize, &'a str)> {
        self.raw(key).map(|e| (e.line, e.value.as_str()))
    }

    fn boolean(&mut self, key: &'static str) -> Result<Option<bool>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" | "yes" => Ok(Some(true)),
                "false" | "no" => Ok(Some(false)),
                other => Err(Error::config(Some(e.line), Some(key), format!("expected true or false, got `{other}`"))),
            },
        }
    }

    /// Reject keys that were never looked up.
    fn finish(self) -> Result<()> {
        for (key, entry) in self.entries {
            if !self.used.contains(&key.as_str()) {
                return Err(Error::config(Some(entry.line), Some(key), format!("unknown key in [{}]", self.name)));
            }
        }
        Ok(())
    }
}

fn read_system(entries: &Section, section_line: usize) -> Result<(SystemSpec, Option<f64>)> {
    let mut r = Reader::new("system", entries);
    let preset = match r.text("preset") {
        None => None,
        Some((_, "benchmark")) => Some(SystemSpec::benchmark()),
        Some((_, "scaled-benchmark")) => Some(SystemSpec::scaled_benchmark()),
        Some((line, other)) => {
            return Err(Error::config(Some(line), Some("preset"), format!("unknown preset `{other}`")))
        }
    };
    let g = r.number("g", Quantity::Frequency)?;
    let g_l = r.number("g_l", Quantity::Frequency)?;
    if g.is_some() && g_l.is_some() {
        return Err(Error::config(Some(section_line), Some("g_l"), "give either `g` or `g_l`"));
    }
    let g = g.or(g_l);
    let mut fields = [
        ("omega_a", r.number("omega_a", Quantity::Frequency)?),
        ("delta", r.number("delta", Quantity::Frequency)?),
        ("g", g),
        ("gamma0", r.number("gamma0", Quantity::Frequency)?),
        ("kappa0", r.number("kappa0", Quantity::Frequency)?),
        ("n_a0", r.number("n_a0", Quantity::Dimensionless)?),
        ("n_b0", r.number("n_b0", Quantity::Dimensionless)?),
    ];
    let lc = r.number("lc_frequency", Quantity::Frequency)?;
    r.finish()?;
    let base = preset.unwrap_or(SystemSpec {
        omega_a: f64::NAN,
        delta: f64::NAN,
        g: f64::NAN,
        gamma0: f64::NAN,
        kappa0: f64::NAN,
        n_a0: f64::NAN,
        n_b0: 0.0,
    });
    let defaults = [base.omega_a, base.delta, base.g, base.gamma0, base.kappa0, base.n_a0, base.n_b0];
    for ((name, value), default) in fields.iter_mut().zip(defaults) {
        if value.is_none() {
            if default.is_nan() {
                return Err(Error::config(Some(section_line), Some(name), "missing in [system] (no preset given)"));
            }
            *value = Some(default);
        }
    }
    let v: Vec<f64> = fields.iter().map(|(_, v)| v.unwrap()).collect();
    let spec = SystemSpec { omega_a: v[0], delta: v[1], g: v[2], gamma0: v[3], kappa0: v[4], n_a0: v[5], n_b0: v[6] };
    spec.validate().map_err(|e| Error::config(Some(section_line), None, e.to_string()))?;
    Ok((spec, lc))
}

fn read_circuit(circuit: &Section, mechanics: Option<&Section>, line: usize) -> Result<CircuitSetup> {
    let mut r = Reader::new("circuit", circuit);
    let preset = match r.text("preset") {
        None => None,
        Some((_, "benchmark")) => Some(CircuitParams::benchmark()),
        Some((l, other)) => return Err(Error::config(Some(l), Some("preset"), format!("unknown preset `{other}`"))),
    };
    let mut get = |key: &'static str, q: Quantity, default: Option<f64>| -> Result<f64> {
        match (r.number(key, q)?, default) {
            (Some(v), _) | (None, Some(v)) => Ok(v),
            (None, None) => Err(Error::config(Some(line), Some(key), "missing in [circuit] (no preset given)")),
        }
    };
    let p = preset;
    let params = CircuitParams {
        c_x0: get("c_x0", Quantity::Capacitance, p.map(|c| c.c_x0))?,
        c_sigma0: get("c_sigma0", Quantity::Capacitance, p.map(|c| c.c_sigma0))?,
        c_g: None,
        c_b: None,
        inductance: get("inductance", Quantity::Inductance, p.map(|c| c.inductance))?,
        d0: get("d0", Quantity::Length, p.map(|c| c.d0))?,
        delta_x0: get("delta_x0", Quantity::Length, p.map(|c| c.delta_x0))?,
        v_c: get("v_c", Quantity::Voltage, p.map(|c| c.v_c))?,
        resistance: get("resistance", Quantity::Resistance, p.map(|c| c.resistance))?,
        t0: get("t0", Quantity::Temperature, p.map(|c| c.t0))?,
    };
    let c_g = r.number("c_g", Quantity::Capacitance)?.or(p.and_then(|c| c.c_g));
    let c_b = r.number("c_b", Quantity::Capacitance)?.or(p.and_then(|c| c.c_b));
    let drive = r.number("drive_frequency", Quantity::Frequency)?;
    r.finish()?;
    let params = CircuitParams { c_g, c_b, ..params };
    params.validate().map_err(|e| Error::config(Some(line), None, e.to_string()))?;

    let empty = Section::new();
    let mut m = Reader::new("mechanics", mechanics.unwrap_or(&empty));
    let mechanics = ModeParams {
        frequency: m.required("frequency", Quantity::Frequency)?,
        damping: m.required("damping", Quantity::Frequency)?,
        bath_occupation: m.number("bath_occupation", Quantity::Dimensionless)?,
    };
    m.finish()?;
    let f_b = lc_frequency(&params)?;
    // Default drive sits on the first red sideband.
    let drive_frequency = drive.unwrap_or(f_b - mechanics.frequency);
    Ok(CircuitSetup { circuit: params, mechanics, drive_frequency })
}

/// Parse `start:stop:n` (with optional units on the ends) into a grid.
pub fn parse_grid(text: &str, parameter: SweptParameter) -> Result<Vec<f64>> {
    let quantity = if parameter.is_frequency() { Quantity::Frequency } else { Quantity::Dimensionless };
    let err = |m: String| Error::config(None, Some("grid"), m);
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(err(format!("expected start:stop:n, got `{text}`")));
    }
    let start = parse_quantity(parts[0], quantity).map_err(err)?;
    let stop = parse_quantity(parts[1], quantity).map_err(err)?;
    let n: usize = parts[2].trim().parse().map_err(|_| err(format!("bad point count `{}`", parts[2].trim())))?;
    if n == 0 {
        return Err(err("grid is empty".into()));
    }
    if n > 1 && start == stop {
        return Err(err("start and stop coincide".into()));
    }
    Ok(linear_grid(start, stop, n))
}

/// Comma-separated solver names.
pub fn parse_solvers(text: &str) -> Result<Vec<Solver>> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

fn locate(e: Error, line: usize, key: &str) -> Error {
    match e {
        Error::Config { line: None, key: k, message } => {
            Error::Config { line: Some(line), key: k.or(Some(key.to_owned())), message }
        }
        other => other,
    }
}

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let sections = tokenize(text)?;
    let section = |name: &str| sections.get(name);

    let (base, lc, setup) = match (section("system"), section("circuit")) {
        (Some(_), Some((line, _))) => {
            return Err(Error::config(Some(*line), None, "give either [system] or [circuit], not both"))
        }
        (Some((line, entries)), None) => {
            if let Some((l, _)) = section("mechanics") {
                return Err(Error::config(Some(*l), None, "[mechanics] belongs with [circuit]"));
            }
            let (spec, lc) = read_system(entries, *line)?;
            (spec, lc, None)
        }
        (None, Some((line, entries))) => {
            let setup = read_circuit(entries, section("mechanics").map(|s| &s.1), *line)?;
            let spec = build_system(&setup.circuit, &setup.mechanics, setup.drive_frequency)
                .map_err(|e| Error::config(Some(*line), None, e.to_string()))?;
            (spec, Some(lc_frequency(&setup.circuit)?), Some(setup))
        }
        (None, None) => return Err(Error::config(None, None, "no [system] or [circuit] section")),
    };

    let mut spec =
        SweepSpec::at(base, vec![Solver::Analytic, Solver::AnalyticRwa, Solver::Gaussian, Solver::Semiclassical]);
    spec.setup = setup;

    let mut scaled = false;
    if let Some((_, entries)) = section("sweep") {
        let mut r = Reader::new("sweep", entries);
        if let Some((line, name)) = r.text("parameter") {
            spec.parameter = name.parse().map_err(|e| locate(e, line, "parameter"))?;
            spec.grid = vec![spec.parameter.value_of(&base)];
        }
        let grid = r.text("grid");
        let values = r.text("values");
        match (grid, values) {
            (Some(_), Some((line, _))) => {
                return Err(Error::config(Some(line), Some("values"), "give either `grid` or `values`"))
            }
            (Some((line, text)), None) => {
                spec.grid = parse_grid(text, spec.parameter).map_err(|e| locate(e, line, "grid"))?;
            }
            (None, Some((line, text))) => {
                let quantity =
                    if spec.parameter.is_frequency() { Quantity::Frequency } else { Quantity::Dimensionless };
                spec.grid = text
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|v| parse_quantity(v, quantity))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|m| Error::config(Some(line), Some("values"), m))?;
            }
            (None, None) => {}
        }
        if let Some((line, text)) = r.text("solvers") {
            spec.solvers = parse_solvers(text).map_err(|e| locate(e, line, "solvers"))?;
        }
        scaled = r.boolean("scaled")?.unwrap_or(false);
        r.finish()?;
    }

    if let Some((_, entries)) = section("oracle") {
        let mut r = Reader::new("oracle", entries);
        let mut config = OracleConfig::default();
        if let Some((line, text)) = r.text("dims") {
            let dims: Vec<usize> =
                text.split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| {
                    Error::config(Some(line), Some("dims"), format!("expected `N_a, N_b`, got `{text}`"))
                })?;
            if dims.len() != 2 {
                return Err(Error::config(Some(line), Some("dims"), "expected two sizes"));
            }
            config.dims = (dims[0], dims[1]);
        }
        if let Some(v) = r.boolean("counter_rotating")? {
            config.include_counter_rotating = v;
        }
        if let Some(v) = r.number("tail_threshold", Quantity::Dimensionless)? {
            config.tail_threshold = v;
        }
        if let Some((line, text)) = r.text("concurrency") {
            spec.oracle_concurrency = text.parse().map_err(|_| {
                Error::config(Some(line), Some("concurrency"), format!("expected a count, got `{text}`"))
            })?;
        }
        r.finish()?;
        spec.oracle = Some(config);
    }

    spec.lc_frequency = lc;
    spec.validate()?;
    Ok(if scaled { spec.scaled() } else { spec })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantities_with_and_without_units() {
        assert_eq!(parse_quantity("2 MHz", Quantity::Frequency), Ok(2e6));
        assert_eq!(parse_quantity("2MHz", Quantity::Frequency), Ok(2e6));
        assert_eq!(parse_quantity("2e6", Quantity::Frequency), Ok(2e6));
        assert_eq!(parse_quantity("-1.5e-3 GHz", Quantity::Frequency), Ok(-1.5e6));
        assert_eq!(parse_quantity("20 mK", Quantity::Temperature), Ok(20e-3));
        assert!(parse_quantity("2 mK", Quantity::Frequency).is_err());
        assert!(parse_quantity("2 Hz", Quantity::Dimensionless).is_err());
        assert!(parse_quantity("MHz", Quantity::Frequency).is_err());
        assert!(parse_quantity("3e", Quantity::Frequency).is_err());
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("0.5:1.5:3", SweptParameter::DetuningRatio).unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(parse_grid("1 MHz:3 MHz:2", SweptParameter::G).unwrap(), vec![1e6, 3e6]);
        assert!(parse_grid("0:1:0", SweptParameter::G).is_err());
        assert!(parse_grid("0:1", SweptParameter::G).is_err());
        assert!(parse_grid("1:1:5", SweptParameter::G).is_err());
    }
}
