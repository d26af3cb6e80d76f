//! Simulation lifecycle: building the world from a scenario, driving the
//! monthly phase sequence, and emitting per-agent yearly outputs.
//!
//! Monthly phase order (deterministic):
//!   1. date sync (plus year-end recording when the new month is January)
//!   2. harvests, pledge deliveries, divergence sales
//!   3. konsumen production, with the request protocol on shortfall
//!   4. pledge proposals
//!   5. offer protocols, produsen sellers first, then distributors
//!   6. planting
//!
//! All agents are visited in lexicographic name order inside every phase.

use crate::error::SimError;
use crate::market::{
    lot_passes, stock_kg, CommodityLot, DateStamp, PledgeContract, PledgeStatus, PlantedBatch,
};
use crate::predict::{predict_next, series_seed, TrainConfig};
use crate::report::{render_chart, render_table, Metric, YearlySeries};
use crate::runtime::{
    AclMessage, AgentId, Behavior, Content, Counters, LogRecord, MsgFilter, Performative,
    Protocol, ServiceKind, World,
};
use crate::scenario::{AgentSpec, Diagnostic, GlobalSpec, Scenario, Severity};
use fcl::FuzzyProgram;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

/// Per-agent clock kept inside the runtime world; updated by the agent's
/// message pump when a date-sync broadcast arrives.
#[derive(Debug, Clone, Copy, Default)]
pub struct AgentClock {
    pub date: Option<DateStamp>,
    pub ticks: u64,
}

/// Full state of one market agent.
pub struct MarketAgentState {
    pub spec: AgentSpec,
    pub money_rp: f64,
    pub stock: Vec<CommodityLot>,
    pub seed_kg: f64,
    pub batches: Vec<PlantedBatch>,
    pub pledge: Option<PledgeContract>,
    pub controller: Arc<FuzzyProgram>,
    pub finance_series: YearlySeries,
    pub commodity_series: YearlySeries,
    /// Round-robin cursor over pledge counterparties (konsumen only).
    pub pledge_cursor: usize,
    /// Denominator for the controller's stock_level input.
    pub stock_reference: f64,
}

impl MarketAgentState {
    pub fn stock_kg(&self) -> f64 {
        stock_kg(&self.stock)
    }

    pub fn stock_level(&self) -> f64 {
        if self.stock_reference <= 0.0 {
            2.0
        } else {
            (self.stock_kg() / self.stock_reference).clamp(0.0, 2.0)
        }
    }

    pub fn has_open_pledge(&self) -> bool {
        matches!(&self.pledge, Some(contract) if contract.status == PledgeStatus::Open)
    }
}

/// Kahan-compensated accumulator for the conservation ledger.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

/// Cumulative flows in and out of the closed trading system.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Ledger {
    pub production_income_rp: Kahan,
    pub market_sale_income_rp: Kahan,
    pub plant_cost_rp: Kahan,
    pub harvested_kg: Kahan,
    pub consumed_kg: Kahan,
    pub market_sold_kg: Kahan,
}

/// Snapshot of the conservation identities.
#[derive(Debug, Clone, Copy)]
pub struct ConservationReport {
    pub money_total: f64,
    pub money_expected: f64,
    pub commodity_total: f64,
    pub commodity_expected: f64,
    pub min_money: f64,
    pub min_lot_kg: f64,
    pub min_seed_kg: f64,
}

impl ConservationReport {
    pub fn money_error(&self) -> f64 {
        (self.money_total - self.money_expected).abs()
    }

    pub fn commodity_error(&self) -> f64 {
        (self.commodity_total - self.commodity_expected).abs()
    }
}

/// Statistics for one simulated month.
#[derive(Debug, Clone, Copy)]
pub struct MonthStats {
    pub stamp: DateStamp,
    pub month_index: u32,
    pub messages_sent: u64,
    pub behaviors_run: u64,
}

/// Scenario-to-simulation build failure, carrying scenario-style
/// diagnostics.
#[derive(Debug)]
pub struct SimBuildError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SimBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::scenario::render_diagnostics(&self.diagnostics))
    }
}

impl std::error::Error for SimBuildError {}

fn err(message: String) -> Diagnostic {
    Diagnostic { severity: Severity::Error, row: None, message }
}

/// Parses every FCL script referenced by the scenario, relative to `base`.
pub fn load_controllers(
    scenario: &Scenario,
    base: &Path,
) -> Result<BTreeMap<String, Arc<FuzzyProgram>>, Vec<Diagnostic>> {
    let mut programs = BTreeMap::new();
    let mut diags = Vec::new();
    for block in &scenario.blocks {
        if programs.contains_key(&block.fcl_path) {
            continue;
        }
        let path = base.join(&block.fcl_path);
        match std::fs::read_to_string(&path) {
            Err(io_err) => diags.push(err(format!("cannot read `{}`: {io_err}", path.display()))),
            Ok(text) => match fcl::parse_fcl(&text) {
                Ok(program) => {
                    programs.insert(block.fcl_path.clone(), Arc::new(program));
                }
                Err(fcl_err) => {
                    diags.push(err(format!("{}: {fcl_err}", path.display())));
                }
            },
        }
    }
    if diags.is_empty() {
        Ok(programs)
    } else {
        Err(diags)
    }
}

/// Checks the market controller contract: inputs `price_ratio` and
/// `stock_level`; outputs `accept` over (0, 1) and `adjust` over
/// (-0.5, 0.5).
pub fn check_controller_contract(program: &FuzzyProgram) -> Vec<String> {
    let mut issues = Vec::new();
    let mut input_names: Vec<&str> = program.inputs.iter().map(|v| v.name.as_str()).collect();
    input_names.sort_unstable();
    if input_names != ["price_ratio", "stock_level"] {
        issues.push(format!(
            "inputs must be exactly `price_ratio` and `stock_level`, found {input_names:?}"
        ));
    }
    let mut output_names: Vec<&str> = program.outputs.iter().map(|v| v.name.as_str()).collect();
    output_names.sort_unstable();
    if output_names != ["accept", "adjust"] {
        issues.push(format!(
            "outputs must be exactly `accept` and `adjust`, found {output_names:?}"
        ));
    }
    for (name, range) in [("accept", (0.0, 1.0)), ("adjust", (-0.5, 0.5))] {
        if let Some(block) = program.defuzzify_for(name) {
            if block.range != range {
                issues.push(format!(
                    "output `{name}` must use RANGE ({} .. {}), found ({} .. {})",
                    range.0, range.1, block.range.0, block.range.1
                ));
            }
        }
    }
    issues
}

pub struct Simulation {
    world: World<AgentClock>,
    states: BTreeMap<AgentId, MarketAgentState>,
    pub(crate) global: GlobalSpec,
    main_id: AgentId,
    market_ids: Vec<AgentId>,
    months_elapsed: u32,
    total_months: u32,
    seed: u64,
    pub(crate) rng: StdRng,
    pub(crate) ledger: Ledger,
    initial_money_rp: f64,
    initial_stock_kg: f64,
}

impl Simulation {
    /// Builds a simulation world from an already-validated scenario and its
    /// parsed controllers (keyed by the scenario's `fcl_path` values).
    pub fn new(
        scenario: &Scenario,
        controllers: &BTreeMap<String, Arc<FuzzyProgram>>,
        seed: u64,
    ) -> Result<Simulation, SimBuildError> {
        let mut diags = Vec::new();
        for block in &scenario.blocks {
            match controllers.get(&block.fcl_path) {
                None => diags.push(err(format!(
                    "agent `{}`: no controller loaded for `{}`",
                    block.name, block.fcl_path
                ))),
                Some(program) => {
                    for issue in check_controller_contract(program) {
                        diags.push(err(format!("controller `{}`: {issue}", block.fcl_path)));
                    }
                }
            }
        }
        // contract issues repeat per block sharing a path; report each once
        diags.dedup_by(|a, b| a.message == b.message);
        if !diags.is_empty() {
            return Err(SimBuildError { diagnostics: diags });
        }

        let mut rng = StdRng::seed_from_u64(seed);
        let diameter = Normal::new(scenario.global.diameter_mean, scenario.global.diameter_sd)
            .expect("diameter sd must be finite and non-negative");

        let main_id = AgentId::new("Main").expect("static name");
        let mut world: World<AgentClock> = World::new();
        world
            .spawn_agent(
                main_id.clone(),
                None,
                AgentClock::default(),
                vec![Behavior::delayed("DateTick", 1, |clock: &mut AgentClock, _ctx| {
                    clock.ticks += 1;
                    Ok(())
                })],
            )
            .expect("fresh world");

        let mut states = BTreeMap::new();
        let mut initial_money = Kahan::default();
        let mut initial_stock = Kahan::default();
        for (name, block) in scenario.expand() {
            let id = AgentId::new(&name)
                .map_err(|e| SimBuildError { diagnostics: vec![err(e)] })?;
            let mut spec = block.clone();
            spec.name = name.clone();
            spec.agent_count = 1;

            // starting stock arrives in lot-sized pieces with drawn diameters
            let mut stock = Vec::new();
            let mut remaining = spec.stock_start_kg;
            while remaining > 0.0 {
                let kg = remaining.min(scenario.global.lot_kg);
                let diameter_cm = diameter.sample(&mut rng).clamp(1.0, 12.0);
                stock.push(CommodityLot { kg, diameter_cm, unit_price_rp: 0.0 });
                remaining -= kg;
            }

            let stock_reference = match spec.role {
                ServiceKind::Produsen => {
                    spec.field_ha * scenario.global.seed_per_ha * scenario.global.harvest_ratio
                }
                ServiceKind::Distributor => 1000.0,
                ServiceKind::Konsumen => 6.0 * spec.production_usage_kg,
            };

            initial_money.add(spec.money_start_rp);
            for lot in &stock {
                initial_stock.add(lot.kg);
            }

            let state = MarketAgentState {
                money_rp: spec.money_start_rp,
                seed_kg: spec.seed_start_kg,
                stock,
                batches: Vec::new(),
                pledge: None,
                controller: Arc::clone(&controllers[&spec.fcl_path]),
                finance_series: YearlySeries::new(&name, Metric::Finance),
                commodity_series: YearlySeries::new(&name, Metric::Commodity),
                pledge_cursor: 0,
                stock_reference,
                spec,
            };
            world
                .spawn_agent(
                    id.clone(),
                    Some(state.spec.role),
                    AgentClock::default(),
                    vec![Behavior::cyclic("MessagePump", |clock: &mut AgentClock, ctx| {
                        while let Some(msg) = ctx.receive(&MsgFilter::any()) {
                            if let Content::DateSync { year, month } = msg.content {
                                clock.date = Some(DateStamp::new(year, month));
                            }
                        }
                        Ok(())
                    })],
                )
                .map_err(|e| SimBuildError { diagnostics: vec![err(e.to_string())] })?;
            states.insert(id, state);
        }

        let market_ids: Vec<AgentId> = states.keys().cloned().collect();
        Ok(Simulation {
            world,
            states,
            global: scenario.global.clone(),
            main_id,
            market_ids,
            months_elapsed: 0,
            total_months: scenario.global.duration_years * 12,
            seed,
            rng,
            ledger: Ledger::default(),
            initial_money_rp: initial_money.total(),
            initial_stock_kg: initial_stock.total(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn months_elapsed(&self) -> u32 {
        self.months_elapsed
    }

    pub fn total_months(&self) -> u32 {
        self.total_months
    }

    pub fn is_finished(&self) -> bool {
        self.months_elapsed >= self.total_months
    }

    pub fn date(&self) -> Option<DateStamp> {
        (self.months_elapsed > 0).then(|| self.date_of(self.months_elapsed))
    }

    fn date_of(&self, month_index: u32) -> DateStamp {
        DateStamp {
            year: self.global.start_year + ((month_index - 1) / 12) as i32,
            month: (month_index - 1) % 12 + 1,
        }
    }

    pub fn agent_ids(&self) -> &[AgentId] {
        &self.market_ids
    }

    pub fn state(&self, id: &AgentId) -> Option<&MarketAgentState> {
        self.states.get(id)
    }

    pub(crate) fn state_mut(&mut self, id: &AgentId) -> &mut MarketAgentState {
        self.states.get_mut(id).expect("market agent exists")
    }

    pub(crate) fn world_mut(&mut self) -> &mut World<AgentClock> {
        &mut self.world
    }

    pub fn counters(&self) -> Counters {
        self.world.counters()
    }

    pub fn message_log(&self) -> &[LogRecord] {
        self.world.message_log()
    }

    pub fn dump_log(&self, w: impl std::io::Write) -> std::io::Result<()> {
        self.world.dump_log(w)
    }

    /// Role of a log participant; `None` for the main agent.
    pub fn role_of(&self, id: &AgentId) -> Option<ServiceKind> {
        self.states.get(id).map(|s| s.spec.role)
    }

    pub(crate) fn ids_of(&self, service: ServiceKind) -> Vec<AgentId> {
        self.world.search_service(service)
    }

    pub(crate) fn conversation(&self, tag: &str, initiator: &AgentId) -> String {
        format!("{tag}:{initiator}:{}", self.months_elapsed)
    }

    /// Advances one virtual month through the full phase sequence.
    pub fn run_month(&mut self) -> Result<MonthStats, SimError> {
        debug_assert!(!self.is_finished(), "run_month past the configured duration");
        let counters_before = self.world.counters();
        let stamp = self.sync_date()?;
        self.phase_harvest_and_sales(stamp)?;
        self.phase_production()?;
        self.phase_pledges()?;
        self.phase_offers()?;
        self.phase_planting(stamp);
        self.world.run_round()?;

        if self.is_finished() {
            // simulation end: record the final (just completed) year
            let final_year = self.global.start_year + self.global.duration_years as i32 - 1;
            self.record_year_end(final_year)?;
        }

        let counters = self.world.counters();
        Ok(MonthStats {
            stamp,
            month_index: self.months_elapsed,
            messages_sent: counters.sent - counters_before.sent,
            behaviors_run: counters.behaviors_run - counters_before.behaviors_run,
        })
    }

    /// Steps up to `n` months, stopping at the configured duration.
    pub fn step_months(&mut self, n: u32) -> Result<Vec<MonthStats>, SimError> {
        let mut stats = Vec::new();
        for _ in 0..n {
            if self.is_finished() {
                break;
            }
            stats.push(self.run_month()?);
        }
        Ok(stats)
    }

    pub fn run_to_end(&mut self) -> Result<(), SimError> {
        while !self.is_finished() {
            self.run_month()?;
        }
        Ok(())
    }

    /// Date sync: advance the calendar, record the completed year when the
    /// new month is January, and broadcast the stamp to every live agent.
    fn sync_date(&mut self) -> Result<DateStamp, SimError> {
        self.months_elapsed += 1;
        let stamp = self.date_of(self.months_elapsed);
        if stamp.month == 1 && self.months_elapsed > 1 {
            self.record_year_end(stamp.year - 1)?;
        }
        if let Some(clock) = self.world.state_mut(&self.main_id) {
            clock.date = Some(stamp);
        }
        if !self.market_ids.is_empty() {
            let msg = AclMessage::new(
                self.main_id.clone(),
                self.market_ids.clone(),
                Performative::Subscribe,
                Protocol::DetailedYear,
                format!("date:{}", self.months_elapsed),
                Content::DateSync { year: stamp.year, month: stamp.month },
            );
            self.world.exchange(msg)?;
        }
        Ok(stamp)
    }

    fn record_year_end(&mut self, year: i32) -> Result<(), SimError> {
        for id in self.market_ids.clone() {
            let state = self.state_mut(&id);
            let money = state.money_rp;
            let kg = state.stock_kg();
            state.finance_series.push(year, money).map_err(|_| SimError::DuplicateYear {
                agent: id.to_string(),
                metric: "finance".into(),
                year,
            })?;
            state.commodity_series.push(year, kg).map_err(|_| SimError::DuplicateYear {
                agent: id.to_string(),
                metric: "commodity".into(),
                year,
            })?;
        }
        Ok(())
    }

    /// Conservation identities over the closed trading system.
    pub fn conservation(&self) -> ConservationReport {
        let mut money = Kahan::default();
        let mut commodity = Kahan::default();
        let mut min_money = f64::INFINITY;
        let mut min_lot = f64::INFINITY;
        let mut min_seed = f64::INFINITY;
        for state in self.states.values() {
            money.add(state.money_rp);
            min_money = min_money.min(state.money_rp);
            min_seed = min_seed.min(state.seed_kg);
            for lot in &state.stock {
                commodity.add(lot.kg);
                min_lot = min_lot.min(lot.kg);
            }
        }
        let money_expected = self.initial_money_rp + self.ledger.production_income_rp.total()
            + self.ledger.market_sale_income_rp.total()
            - self.ledger.plant_cost_rp.total();
        let commodity_expected = self.initial_stock_kg + self.ledger.harvested_kg.total()
            - self.ledger.consumed_kg.total()
            - self.ledger.market_sold_kg.total();
        ConservationReport {
            money_total: money.total(),
            money_expected,
            commodity_total: commodity.total(),
            commodity_expected,
            min_money,
            min_lot_kg: min_lot,
            min_seed_kg: min_seed,
        }
    }

    /// One-line agent status for the interactive stepper.
    pub fn status(&self, name: &str) -> Option<String> {
        let id = AgentId::new(name).ok()?;
        if id == self.main_id {
            let date = self.date().map_or("not started".to_string(), |d| d.to_string());
            return Some(format!("Main: date {date}, month {}/{}", self.months_elapsed, self.total_months));
        }
        let state = self.states.get(&id)?;
        let pledge = match &state.pledge {
            Some(c) if c.status == PledgeStatus::Open => {
                format!("open pledge @{} Rp/kg", c.price_rp_per_kg)
            }
            Some(_) => "pledge delivered".to_string(),
            None => "no pledge".to_string(),
        };
        Some(format!(
            "{} [{}]: money {:.2} Rp, stock {:.2} kg ({} lots), seed {:.2} kg, field {} Ha, {}",
            name,
            state.spec.role,
            state.money_rp,
            state.stock_kg(),
            state.stock.len(),
            state.seed_kg,
            state.spec.field_ha,
            pledge
        ))
    }

    /// Finished per-agent series with predictions attached. Returns the
    /// series in deterministic order plus warnings for skipped predictions.
    pub fn final_series(&self) -> (Vec<YearlySeries>, Vec<String>) {
        let mut all = Vec::new();
        let mut warnings = Vec::new();
        for (id, state) in &self.states {
            for series in [&state.finance_series, &state.commodity_series] {
                let mut series = series.clone();
                let values = series.values();
                let config = TrainConfig {
                    seed: series_seed(self.seed, id.as_str(), series.metric.as_str()),
                    ..TrainConfig::default()
                };
                match predict_next(&values, &config) {
                    Some(value) => {
                        let next_year = series.points.last().map(|&(y, _)| y + 1).unwrap_or(0);
                        series.predicted = Some((next_year, value));
                    }
                    None => warnings.push(format!(
                        "{} {}: series too short for prediction ({} points, window {})",
                        id,
                        series.metric.as_str(),
                        values.len(),
                        config.window
                    )),
                }
                all.push(series);
            }
        }
        (all, warnings)
    }

    /// Writes one table and one chart per agent and metric into `out_dir`.
    /// Returns the number of files written plus prediction warnings.
    pub fn write_outputs(&self, out_dir: &Path) -> Result<(usize, Vec<String>), SimError> {
        std::fs::create_dir_all(out_dir)?;
        let (all, warnings) = self.final_series();
        let mut written = 0;
        for series in &all {
            let stem = series.file_stem();
            std::fs::write(out_dir.join(format!("{stem}.csv")), render_table(series))?;
            std::fs::write(out_dir.join(format!("{stem}.svg")), render_chart(series))?;
            written += 2;
        }
        Ok((written, warnings))
    }
}
