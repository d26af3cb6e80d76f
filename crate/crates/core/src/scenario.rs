//! Scenario files: global parameters plus repeated agent specification
//! blocks, in a plain-text `key = value` format.
//!
//! ```text
//! # comment
//! [GLOBAL]
//! blocks = 6
//! start_year = 2002
//! ...
//! [AGENT]
//! name = P1
//! role = 0
//! ...
//! ```
//!
//! `[GLOBAL]` appears exactly once and first; `[AGENT]` appears `blocks`
//! times. Missing keys are errors, unknown keys are warnings. Role codes:
//! 0 produsen, 1 distributor, 2 konsumen (3 accepted as a konsumen alias
//! with a warning). `harvest_failure_chance` is a probability fraction in
//! [0, 1], not a percentage.

use crate::runtime::ServiceKind;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// Simulation-wide parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSpec {
    pub block_count: usize,
    pub start_year: i32,
    pub duration_years: u32,
    /// Kg of harvest revenue produced by 1 kg of seed.
    pub harvest_ratio: f64,
    /// Kg of seed planted per hectare.
    pub seed_per_ha: f64,
    /// Automatic run (true) or manually stepped (false).
    pub autonom: bool,
    /// Months from planting to harvest.
    pub growth_months: u32,
    /// Harvest lot granularity in kg.
    pub lot_kg: f64,
    /// Tuber diameter model: Normal(mean, sd) clamped to [1, 12] cm.
    pub diameter_mean: f64,
    pub diameter_sd: f64,
}

impl Default for GlobalSpec {
    fn default() -> Self {
        GlobalSpec {
            block_count: 0,
            start_year: 2002,
            duration_years: 1,
            harvest_ratio: 2.0,
            seed_per_ha: 1000.0,
            autonom: true,
            growth_months: 4,
            lot_kg: 10.0,
            diameter_mean: 5.5,
            diameter_sd: 1.2,
        }
    }
}

/// One agent specification block.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSpec {
    pub gui: bool,
    pub name: String,
    pub role: ServiceKind,
    pub stock_start_kg: f64,
    pub money_start_rp: f64,
    pub seed_start_kg: f64,
    pub min_diameter_cm: f64,
    pub max_diameter_cm: f64,
    pub production_usage_kg: f64,
    pub production_income_rp_per_kg: f64,
    pub market_income_rp_per_kg: f64,
    pub normal_buy_price_rp_per_kg: f64,
    pub normal_pledge_price_rp_per_kg: f64,
    /// Probability fraction in [0, 1] that a harvest is randomly reduced.
    pub harvest_failure_chance: f64,
    pub field_ha: f64,
    pub plant_cost_rp_per_ha: f64,
    /// FCL script path, relative to the scenario file.
    pub fcl_path: String,
    pub agent_count: usize,
}

/// Parsed scenario: global section plus agent blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub global: GlobalSpec,
    pub blocks: Vec<AgentSpec>,
}

impl Scenario {
    /// Expands blocks into concrete agents. A block with `count > 1` yields
    /// `name-1` .. `name-N`; a block with `count == 1` keeps its plain name.
    pub fn expand(&self) -> Vec<(String, AgentSpec)> {
        let mut agents = Vec::new();
        for block in &self.blocks {
            if block.agent_count == 1 {
                agents.push((block.name.clone(), block.clone()));
            } else {
                for i in 1..=block.agent_count {
                    agents.push((format!("{}-{i}", block.name), block.clone()));
                }
            }
        }
        agents
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse or validation finding, with the 1-based source row when known.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub row: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn error(row: Option<usize>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, row, message: message.into() }
    }

    fn warning(row: Option<usize>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, row, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.row {
            Some(row) => write!(f, "{kind} (row {row}): {}", self.message),
            None => write!(f, "{kind}: {}", self.message),
        }
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Renders a diagnostics list; an empty list renders as `OK`.
pub fn render_diagnostics(diags: &[Diagnostic]) -> String {
    if diags.is_empty() {
        "OK".to_string()
    } else {
        diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
    }
}

/// Parse result: the scenario is present whenever no error was found.
#[derive(Debug)]
pub struct ParseOutcome {
    pub scenario: Option<Scenario>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Reads and parses a scenario file. FCL paths are checked for readability
/// relative to the scenario's directory.
pub fn parse_scenario(path: &Path) -> ParseOutcome {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => {
            return ParseOutcome {
                scenario: None,
                diagnostics: vec![Diagnostic::error(None, format!("cannot read {}: {err}", path.display()))],
            }
        }
    };
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_scenario_str(&text, Some(base))
}

const GLOBAL_KEYS: &[&str] =
    &["blocks", "start_year", "years", "harvest_ratio", "seed_per_ha", "autonom"];
const GLOBAL_OPTIONAL_KEYS: &[&str] = &["growth_months", "lot_kg", "diameter_mean", "diameter_sd"];
const AGENT_KEYS: &[&str] = &[
    "gui",
    "name",
    "role",
    "stock_kg",
    "money_rp",
    "seed_kg",
    "min_diameter_cm",
    "max_diameter_cm",
    "production_usage_kg",
    "production_income_rp",
    "market_income_rp",
    "normal_buy_price_rp",
    "normal_pledge_price_rp",
    "harvest_failure_chance",
    "field_ha",
    "plant_cost_rp",
    "fcl_path",
    "count",
];

type Section = Vec<(usize, String, String)>; // row, key, value

/// Parses scenario text. `base` enables the FCL readability check; pass
/// `None` for in-memory scenarios.
pub fn parse_scenario_str(text: &str, base: Option<&Path>) -> ParseOutcome {
    let mut diags = Vec::new();
    let mut global: Option<(usize, Section)> = None;
    let mut agents: Vec<(usize, Section)> = Vec::new();
    let mut current: Option<&mut Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let row = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[').and_then(|rest| rest.strip_suffix(']')) {
            match header.trim().to_ascii_uppercase().as_str() {
                "GLOBAL" => {
                    if global.is_some() {
                        diags.push(Diagnostic::error(Some(row), "duplicate [GLOBAL] section"));
                        current = None;
                    } else {
                        if !agents.is_empty() {
                            diags.push(Diagnostic::error(
                                Some(row),
                                "[GLOBAL] must come before all [AGENT] sections",
                            ));
                        }
                        global = Some((row, Vec::new()));
                        current = global.as_mut().map(|(_, s)| s);
                    }
                }
                "AGENT" => {
                    agents.push((row, Vec::new()));
                    current = agents.last_mut().map(|(_, s)| s);
                }
                other => {
                    diags.push(Diagnostic::error(Some(row), format!("unknown section [{other}]")));
                    current = None;
                }
            }
            continue;
        }
        match line.split_once('=') {
            Some((key, value)) => match current.as_deref_mut() {
                Some(section) => {
                    section.push((row, key.trim().to_string(), value.trim().to_string()))
                }
                None => diags.push(Diagnostic::error(
                    Some(row),
                    "key outside of a [GLOBAL] or [AGENT] section",
                )),
            },
            None => diags.push(Diagnostic::error(Some(row), format!("expected `key = value`, got `{line}`"))),
        }
    }

    let Some((global_row, global_section)) = global else {
        diags.push(Diagnostic::error(None, "missing [GLOBAL] section"));
        return ParseOutcome { scenario: None, diagnostics: diags };
    };

    let global_spec = parse_global(global_row, &global_section, &mut diags);

    let mut blocks = Vec::new();
    for (row, section) in &agents {
        if let Some(spec) = parse_agent(*row, section, &mut diags) {
            blocks.push(spec);
        }
    }

    if let Some(ref g) = global_spec {
        if g.block_count != agents.len() {
            diags.push(Diagnostic::error(
                Some(global_row),
                format!(
                    "block count mismatch: [GLOBAL] declares {} blocks, found {} [AGENT] sections",
                    g.block_count,
                    agents.len()
                ),
            ));
        }
    }

    if let Some(base) = base {
        for block in &blocks {
            let path = base.join(&block.fcl_path);
            if std::fs::File::open(&path).is_err() {
                diags.push(Diagnostic::error(
                    None,
                    format!("agent `{}`: unreadable FCL path `{}`", block.name, path.display()),
                ));
            }
        }
    }

    if has_errors(&diags) {
        return ParseOutcome { scenario: None, diagnostics: diags };
    }
    let scenario = Scenario { global: global_spec.expect("no errors"), blocks };
    ParseOutcome { scenario: Some(scenario), diagnostics: diags }
}

fn section_map<'s>(
    section: &'s Section,
    known: &[&str],
    optional: &[&str],
    diags: &mut Vec<Diagnostic>,
) -> BTreeMap<&'s str, (usize, &'s str)> {
    let mut map = BTreeMap::new();
    for (row, key, value) in section {
        if !known.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
            diags.push(Diagnostic::warning(Some(*row), format!("unknown key `{key}`")));
            continue;
        }
        if map.insert(key.as_str(), (*row, value.as_str())).is_some() {
            diags.push(Diagnostic::warning(Some(*row), format!("duplicate key `{key}` overrides earlier value")));
        }
    }
    map
}

struct FieldReader<'a> {
    map: BTreeMap<&'a str, (usize, &'a str)>,
    section_row: usize,
    section_name: &'static str,
}

impl FieldReader<'_> {
    fn required<T: std::str::FromStr>(
        &self,
        key: &str,
        what: &str,
        diags: &mut Vec<Diagnostic>,
    ) -> Option<T> {
        match self.map.get(key) {
            None => {
                diags.push(Diagnostic::error(
                    Some(self.section_row),
                    format!("{} section: missing key `{key}`", self.section_name),
                ));
                None
            }
            Some((row, value)) => match value.parse() {
                Ok(v) => Some(v),
                Err(_) => {
                    diags.push(Diagnostic::error(
                        Some(*row),
                        format!("key `{key}`: expected {what}, got `{value}`"),
                    ));
                    None
                }
            },
        }
    }

    fn optional<T: std::str::FromStr>(
        &self,
        key: &str,
        what: &str,
        default: T,
        diags: &mut Vec<Diagnostic>,
    ) -> T {
        match self.map.get(key) {
            None => default,
            Some((row, value)) => match value.parse() {
                Ok(v) => v,
                Err(_) => {
                    diags.push(Diagnostic::error(
                        Some(*row),
                        format!("key `{key}`: expected {what}, got `{value}`"),
                    ));
                    default
                }
            },
        }
    }

    fn bool_field(&self, key: &str, diags: &mut Vec<Diagnostic>) -> Option<bool> {
        let raw: String = self.required(key, "0 or 1", diags)?;
        match raw.as_str() {
            "0" | "false" => Some(false),
            "1" | "true" => Some(true),
            other => {
                let row = self.map.get(key).map(|(r, _)| *r);
                diags.push(Diagnostic::error(row, format!("key `{key}`: expected 0 or 1, got `{other}`")));
                None
            }
        }
    }
}

fn parse_global(row: usize, section: &Section, diags: &mut Vec<Diagnostic>) -> Option<GlobalSpec> {
    let reader = FieldReader {
        map: section_map(section, GLOBAL_KEYS, GLOBAL_OPTIONAL_KEYS, diags),
        section_row: row,
        section_name: "[GLOBAL]",
    };
    let defaults = GlobalSpec::default();
    let block_count: Option<usize> = reader.required("blocks", "a positive integer", diags);
    let start_year: Option<i32> = reader.required("start_year", "an integer year", diags);
    let duration_years: Option<u32> = reader.required("years", "a positive integer", diags);
    let harvest_ratio: Option<f64> = reader.required("harvest_ratio", "a positive number", diags);
    let seed_per_ha: Option<f64> = reader.required("seed_per_ha", "a positive number", diags);
    let autonom = reader.bool_field("autonom", diags);
    let growth_months: u32 =
        reader.optional("growth_months", "a positive integer", defaults.growth_months, diags);
    let lot_kg: f64 = reader.optional("lot_kg", "a positive number", defaults.lot_kg, diags);
    let diameter_mean: f64 =
        reader.optional("diameter_mean", "a number", defaults.diameter_mean, diags);
    let diameter_sd: f64 = reader.optional("diameter_sd", "a number", defaults.diameter_sd, diags);

    let spec = GlobalSpec {
        block_count: block_count?,
        start_year: start_year?,
        duration_years: duration_years?,
        harvest_ratio: harvest_ratio?,
        seed_per_ha: seed_per_ha?,
        autonom: autonom?,
        growth_months,
        lot_kg,
        diameter_mean,
        diameter_sd,
    };
    for (ok, name) in [
        (spec.block_count > 0, "blocks"),
        (spec.duration_years > 0, "years"),
        (spec.harvest_ratio > 0.0, "harvest_ratio"),
        (spec.seed_per_ha > 0.0, "seed_per_ha"),
        (spec.growth_months > 0, "growth_months"),
        (spec.lot_kg > 0.0, "lot_kg"),
    ] {
        if !ok {
            diags.push(Diagnostic::error(Some(row), format!("key `{name}` must be positive")));
            return None;
        }
    }
    Some(spec)
}

fn parse_agent(row: usize, section: &Section, diags: &mut Vec<Diagnostic>) -> Option<AgentSpec> {
    let reader = FieldReader {
        map: section_map(section, AGENT_KEYS, &[], diags),
        section_row: row,
        section_name: "[AGENT]",
    };
    let gui = reader.bool_field("gui", diags);
    let name: Option<String> = reader.required("name", "an agent name", diags);
    let role_raw: Option<u32> = reader.required("role", "a role code (0, 1, 2)", diags);
    let role = role_raw.and_then(|code| match code {
        0 => Some(ServiceKind::Produsen),
        1 => Some(ServiceKind::Distributor),
        2 => Some(ServiceKind::Konsumen),
        3 => {
            diags.push(Diagnostic::warning(
                Some(row),
                "role code 3 accepted as a konsumen alias; canonical code is 2",
            ));
            Some(ServiceKind::Konsumen)
        }
        other => {
            diags.push(Diagnostic::error(Some(row), format!("unknown role code {other}")));
            None
        }
    });

    macro_rules! nonneg {
        ($key:expr) => {{
            let v: Option<f64> = reader.required($key, "a non-negative number", diags);
            match v {
                Some(v) if v < 0.0 => {
                    diags.push(Diagnostic::error(
                        Some(row),
                        format!("key `{}` must be non-negative", $key),
                    ));
                    None
                }
                other => other,
            }
        }};
    }

    let stock = nonneg!("stock_kg");
    let money = nonneg!("money_rp");
    let seed = nonneg!("seed_kg");
    let min_d = nonneg!("min_diameter_cm");
    let max_d = nonneg!("max_diameter_cm");
    let usage = nonneg!("production_usage_kg");
    let prod_income = nonneg!("production_income_rp");
    let market_income = nonneg!("market_income_rp");
    let buy_price = nonneg!("normal_buy_price_rp");
    let pledge_price = nonneg!("normal_pledge_price_rp");
    let failure: Option<f64> = reader.required("harvest_failure_chance", "a fraction in [0, 1]", diags);
    let failure = match failure {
        Some(f) if !(0.0..=1.0).contains(&f) => {
            diags.push(Diagnostic::error(
                Some(row),
                "key `harvest_failure_chance` must lie in [0, 1] (a fraction, not a percentage)",
            ));
            None
        }
        other => other,
    };
    let field = nonneg!("field_ha");
    let plant_cost = nonneg!("plant_cost_rp");
    let fcl_path: Option<String> = reader.required("fcl_path", "a file path", diags);
    let count: Option<usize> = reader.required("count", "a positive integer", diags);
    let count = match count {
        Some(0) => {
            diags.push(Diagnostic::error(Some(row), "key `count` must be positive"));
            None
        }
        other => other,
    };

    let name = name?;
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        diags.push(Diagnostic::error(
            Some(row),
            format!("agent name `{name}` must be non-empty and free of whitespace"),
        ));
        return None;
    }

    Some(AgentSpec {
        gui: gui?,
        name,
        role: role?,
        stock_start_kg: stock?,
        money_start_rp: money?,
        seed_start_kg: seed?,
        min_diameter_cm: min_d?,
        max_diameter_cm: max_d?,
        production_usage_kg: usage?,
        production_income_rp_per_kg: prod_income?,
        market_income_rp_per_kg: market_income?,
        normal_buy_price_rp_per_kg: buy_price?,
        normal_pledge_price_rp_per_kg: pledge_price?,
        harvest_failure_chance: failure?,
        field_ha: field?,
        plant_cost_rp_per_ha: plant_cost?,
        fcl_path: fcl_path?,
        agent_count: count?,
    })
}

/// Semantic checks beyond parsing.
pub fn validate(scenario: &Scenario) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for block in &scenario.blocks {
        let name = &block.name;
        if block.min_diameter_cm > block.max_diameter_cm
            && block.min_diameter_cm != 0.0
            && block.max_diameter_cm != 0.0
        {
            diags.push(Diagnostic::error(
                None,
                format!(
                    "agent `{name}`: min diameter {} exceeds max diameter {}",
                    block.min_diameter_cm, block.max_diameter_cm
                ),
            ));
        } else if block.min_diameter_cm > block.max_diameter_cm && block.max_diameter_cm == 0.0 {
            // (min, 0) is not the all-pass convention; flag it too
            diags.push(Diagnostic::error(
                None,
                format!(
                    "agent `{name}`: min diameter {} with max diameter 0",
                    block.min_diameter_cm
                ),
            ));
        }
        match block.role {
            ServiceKind::Konsumen => {
                if block.production_usage_kg == 0.0 {
                    diags.push(Diagnostic::warning(
                        None,
                        format!("konsumen `{name}` has production_usage_kg = 0 and will never produce"),
                    ));
                }
            }
            ServiceKind::Produsen => {
                if block.field_ha == 0.0 && block.seed_start_kg > 0.0 {
                    diags.push(Diagnostic::warning(
                        None,
                        format!("produsen `{name}` holds seed but has no field to plant"),
                    ));
                }
            }
            ServiceKind::Distributor => {}
        }
        if block.role != ServiceKind::Produsen && block.field_ha > 0.0 {
            diags.push(Diagnostic::error(
                None,
                format!("agent `{name}`: only produsen agents may own a field"),
            ));
        }
        if name == "Main" {
            diags.push(Diagnostic::error(
                None,
                "agent name `Main` is reserved for the scenario-driving agent",
            ));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for (name, _) in scenario.expand() {
        if !seen.insert(name.clone()) {
            diags.push(Diagnostic::error(None, format!("expanded agent name `{name}` is not unique")));
        }
    }
    diags
}

/// Writes a scenario back to the file format; re-parsing the result yields
/// an equal `Scenario`.
pub fn write_scenario(scenario: &Scenario) -> String {
    let mut out = String::new();
    let g = &scenario.global;
    out.push_str("[GLOBAL]\n");
    out.push_str(&format!("blocks = {}\n", g.block_count));
    out.push_str(&format!("start_year = {}\n", g.start_year));
    out.push_str(&format!("years = {}\n", g.duration_years));
    out.push_str(&format!("harvest_ratio = {}\n", g.harvest_ratio));
    out.push_str(&format!("seed_per_ha = {}\n", g.seed_per_ha));
    out.push_str(&format!("autonom = {}\n", u8::from(g.autonom)));
    out.push_str(&format!("growth_months = {}\n", g.growth_months));
    out.push_str(&format!("lot_kg = {}\n", g.lot_kg));
    out.push_str(&format!("diameter_mean = {}\n", g.diameter_mean));
    out.push_str(&format!("diameter_sd = {}\n", g.diameter_sd));
    for block in &scenario.blocks {
        out.push('\n');
        out.push_str("[AGENT]\n");
        out.push_str(&format!("gui = {}\n", u8::from(block.gui)));
        out.push_str(&format!("name = {}\n", block.name));
        let role = match block.role {
            ServiceKind::Produsen => 0,
            ServiceKind::Distributor => 1,
            ServiceKind::Konsumen => 2,
        };
        out.push_str(&format!("role = {role}\n"));
        out.push_str(&format!("stock_kg = {}\n", block.stock_start_kg));
        out.push_str(&format!("money_rp = {}\n", block.money_start_rp));
        out.push_str(&format!("seed_kg = {}\n", block.seed_start_kg));
        out.push_str(&format!("min_diameter_cm = {}\n", block.min_diameter_cm));
        out.push_str(&format!("max_diameter_cm = {}\n", block.max_diameter_cm));
        out.push_str(&format!("production_usage_kg = {}\n", block.production_usage_kg));
        out.push_str(&format!("production_income_rp = {}\n", block.production_income_rp_per_kg));
        out.push_str(&format!("market_income_rp = {}\n", block.market_income_rp_per_kg));
        out.push_str(&format!("normal_buy_price_rp = {}\n", block.normal_buy_price_rp_per_kg));
        out.push_str(&format!(
            "normal_pledge_price_rp = {}\n",
            block.normal_pledge_price_rp_per_kg
        ));
        out.push_str(&format!("harvest_failure_chance = {}\n", block.harvest_failure_chance));
        out.push_str(&format!("field_ha = {}\n", block.field_ha));
        out.push_str(&format!("plant_cost_rp = {}\n", block.plant_cost_rp_per_ha));
        out.push_str(&format!("fcl_path = {}\n", block.fcl_path));
        out.push_str(&format!("count = {}\n", block.agent_count));
    }
    out
}
