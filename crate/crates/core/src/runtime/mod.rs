//! Deterministic agent execution substrate: lifecycle, behavior scheduling,
//! performative-typed messaging, and a yellow-pages service directory.
//!
//! The scheduler is cooperative and single-logical-threaded. Agents are
//! stepped in lexicographic name order every round, so a fixed input always
//! replays to the identical message log.

mod message;

pub use message::{AclMessage, AgentId, Content, Performative, Protocol, ServiceKind};

use crate::error::SimError;
use std::collections::{BTreeMap, VecDeque};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// How a behavior is scheduled across rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorKind {
    /// Runs in the next round, then never again.
    OneShot,
    /// Runs every round.
    Cyclic,
    /// Fires every `period` rounds (first at round `period - 1`).
    Delayed { period: u64 },
}

type StepFn<S> = Box<dyn FnMut(&mut S, &mut Ctx<'_>) -> Result<(), String>>;

/// A named step function over agent state and mailbox.
pub struct Behavior<S> {
    name: String,
    kind: BehaviorKind,
    step: StepFn<S>,
}

impl<S> Behavior<S> {
    pub fn one_shot(
        name: impl Into<String>,
        step: impl FnMut(&mut S, &mut Ctx<'_>) -> Result<(), String> + 'static,
    ) -> Self {
        Behavior { name: name.into(), kind: BehaviorKind::OneShot, step: Box::new(step) }
    }

    pub fn cyclic(
        name: impl Into<String>,
        step: impl FnMut(&mut S, &mut Ctx<'_>) -> Result<(), String> + 'static,
    ) -> Self {
        Behavior { name: name.into(), kind: BehaviorKind::Cyclic, step: Box::new(step) }
    }

    pub fn delayed(
        name: impl Into<String>,
        period: u64,
        step: impl FnMut(&mut S, &mut Ctx<'_>) -> Result<(), String> + 'static,
    ) -> Self {
        assert!(period > 0, "delay period must be positive");
        Behavior { name: name.into(), kind: BehaviorKind::Delayed { period }, step: Box::new(step) }
    }
}

struct BehaviorSlot<S> {
    behavior: Behavior<S>,
    done: bool,
}

struct AgentSlot<S> {
    state: S,
    service: Option<ServiceKind>,
    mailbox: VecDeque<AclMessage>,
    behaviors: Vec<BehaviorSlot<S>>,
}

/// Mailbox selection pattern for [`World::receive`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MsgFilter {
    pub performative: Option<Performative>,
    pub protocol: Option<Protocol>,
    pub conversation_id: Option<String>,
}

impl MsgFilter {
    pub fn any() -> Self {
        MsgFilter::default()
    }

    pub fn of(performative: Performative, protocol: Protocol) -> Self {
        MsgFilter { performative: Some(performative), protocol: Some(protocol), conversation_id: None }
    }

    pub fn in_conversation(mut self, id: impl Into<String>) -> Self {
        self.conversation_id = Some(id.into());
        self
    }

    fn matches(&self, msg: &AclMessage) -> bool {
        self.performative.map_or(true, |p| p == msg.performative)
            && self.protocol.map_or(true, |p| p == msg.protocol)
            && self.conversation_id.as_deref().map_or(true, |c| c == msg.conversation_id)
    }
}

/// One line of the message log; one record per (message, receiver).
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub round: u64,
    pub sender: AgentId,
    pub receiver: AgentId,
    pub performative: Performative,
    pub protocol: Protocol,
    pub conversation_id: String,
}

/// Per-round scheduler statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub round: u64,
    /// Pending messages moved into mailboxes at this round's boundary.
    pub delivered: u64,
    /// Behavior steps executed.
    pub behaviors_run: u64,
    /// Messages (per receiver) queued by behaviors during this round.
    pub sent: u64,
}

/// Message accounting; `sent = received + dropped + in_flight` at all times.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub sent: u64,
    pub received: u64,
    /// Queued messages discarded when their owner was killed.
    pub dropped: u64,
    pub in_flight: u64,
    pub peak_in_flight: u64,
    pub behaviors_run: u64,
}

/// Execution context handed to behavior steps.
pub struct Ctx<'a> {
    agent: &'a AgentId,
    round: u64,
    mailbox: &'a mut VecDeque<AclMessage>,
    directory: &'a [(AgentId, Option<ServiceKind>)],
    outbox: Vec<AclMessage>,
    received: u64,
}

impl Ctx<'_> {
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn self_id(&self) -> &AgentId {
        self.agent
    }

    /// Queues a message for delivery at the next round boundary.
    pub fn send(&mut self, msg: AclMessage) -> Result<(), SimError> {
        if msg.receivers.is_empty() {
            return Err(SimError::NoReceivers);
        }
        for r in &msg.receivers {
            if !self.directory.iter().any(|(id, _)| id == r) {
                return Err(SimError::UnknownReceiver(r.to_string()));
            }
        }
        self.outbox.push(msg);
        Ok(())
    }

    /// Live agents providing `service`, in lexicographic name order.
    pub fn search(&self, service: ServiceKind) -> Vec<AgentId> {
        self.directory
            .iter()
            .filter(|(_, s)| *s == Some(service))
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Removes and returns the oldest mailbox message matching `filter`.
    pub fn receive(&mut self, filter: &MsgFilter) -> Option<AclMessage> {
        let pos = self.mailbox.iter().position(|m| filter.matches(m))?;
        self.received += 1;
        self.mailbox.remove(pos)
    }
}

/// The simulation world: directory, mailboxes, scheduler, and message log.
pub struct World<S> {
    agents: BTreeMap<AgentId, AgentSlot<S>>,
    pending: VecDeque<(AgentId, AclMessage)>,
    round: u64,
    log: Vec<LogRecord>,
    counters: Counters,
}

impl<S> Default for World<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> World<S> {
    pub fn new() -> Self {
        World {
            agents: BTreeMap::new(),
            pending: VecDeque::new(),
            round: 0,
            log: Vec::new(),
            counters: Counters::default(),
        }
    }

    /// Registers an agent with its service entry and behaviors.
    pub fn spawn_agent(
        &mut self,
        id: AgentId,
        service: Option<ServiceKind>,
        state: S,
        behaviors: Vec<Behavior<S>>,
    ) -> Result<(), SimError> {
        if self.agents.contains_key(&id) {
            return Err(SimError::DuplicateAgent(id.to_string()));
        }
        self.agents.insert(
            id,
            AgentSlot {
                state,
                service,
                mailbox: VecDeque::new(),
                behaviors: behaviors
                    .into_iter()
                    .map(|behavior| BehaviorSlot { behavior, done: false })
                    .collect(),
            },
        );
        Ok(())
    }

    /// Removes an agent; its queued messages are dropped (and counted).
    pub fn kill_agent(&mut self, id: &AgentId) -> Result<(), SimError> {
        let slot = self.agents.remove(id).ok_or_else(|| SimError::UnknownAgent(id.to_string()))?;
        let dropped = slot.mailbox.len() as u64;
        let pending_before = self.pending.len();
        self.pending.retain(|(receiver, _)| receiver != id);
        let dropped = dropped + (pending_before - self.pending.len()) as u64;
        self.counters.dropped += dropped;
        self.counters.in_flight -= dropped;
        Ok(())
    }

    pub fn is_live(&self, id: &AgentId) -> bool {
        self.agents.contains_key(id)
    }

    pub fn agent_ids(&self) -> Vec<AgentId> {
        self.agents.keys().cloned().collect()
    }

    pub fn state(&self, id: &AgentId) -> Option<&S> {
        self.agents.get(id).map(|slot| &slot.state)
    }

    pub fn state_mut(&mut self, id: &AgentId) -> Option<&mut S> {
        self.agents.get_mut(id).map(|slot| &mut slot.state)
    }

    /// Live agents providing `service`, sorted lexicographically by name.
    pub fn search_service(&self, service: ServiceKind) -> Vec<AgentId> {
        self.agents
            .iter()
            .filter(|(_, slot)| slot.service == Some(service))
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Queues `msg` for every receiver; delivery happens at the next round
    /// boundary. Fails without partial delivery when any receiver is unknown.
    pub fn send(&mut self, msg: AclMessage) -> Result<(), SimError> {
        self.check_receivers(&msg)?;
        self.record(&msg);
        for r in &msg.receivers {
            self.pending.push_back((r.clone(), msg.clone()));
        }
        Ok(())
    }

    /// Delivers `msg` into receiver mailboxes immediately. Used by protocol
    /// orchestrations whose conversations complete within one round.
    pub fn exchange(&mut self, msg: AclMessage) -> Result<(), SimError> {
        self.check_receivers(&msg)?;
        self.record(&msg);
        for r in &msg.receivers {
            self.agents.get_mut(r).unwrap().mailbox.push_back(msg.clone());
        }
        Ok(())
    }

    fn check_receivers(&self, msg: &AclMessage) -> Result<(), SimError> {
        if msg.receivers.is_empty() {
            return Err(SimError::NoReceivers);
        }
        for r in &msg.receivers {
            if !self.agents.contains_key(r) {
                return Err(SimError::UnknownReceiver(r.to_string()));
            }
        }
        Ok(())
    }

    fn record(&mut self, msg: &AclMessage) {
        let n = msg.receivers.len() as u64;
        self.counters.sent += n;
        self.counters.in_flight += n;
        self.counters.peak_in_flight = self.counters.peak_in_flight.max(self.counters.in_flight);
        for r in &msg.receivers {
            self.log.push(LogRecord {
                round: self.round,
                sender: msg.sender.clone(),
                receiver: r.clone(),
                performative: msg.performative,
                protocol: msg.protocol,
                conversation_id: msg.conversation_id.clone(),
            });
        }
    }

    /// Removes and returns the oldest matching message from `id`'s mailbox.
    /// FIFO order per (sender, receiver) pair is preserved.
    pub fn receive(&mut self, id: &AgentId, filter: &MsgFilter) -> Option<AclMessage> {
        let slot = self.agents.get_mut(id)?;
        let pos = slot.mailbox.iter().position(|m| filter.matches(m))?;
        self.counters.received += 1;
        self.counters.in_flight -= 1;
        slot.mailbox.remove(pos)
    }

    pub fn mailbox_len(&self, id: &AgentId) -> usize {
        self.agents.get(id).map_or(0, |slot| slot.mailbox.len())
    }

    /// Index of the round the next `run_round` call will execute.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Delivers all pending messages, then steps every live agent's due
    /// behaviors once, in lexicographic agent order.
    pub fn run_round(&mut self) -> Result<RoundStats, SimError> {
        let round = self.round;
        let mut stats = RoundStats { round, ..RoundStats::default() };

        while let Some((receiver, msg)) = self.pending.pop_front() {
            // receivers are validated at send time and cannot die mid-queue
            // without kill_agent purging their pending entries
            self.agents.get_mut(&receiver).unwrap().mailbox.push_back(msg);
            stats.delivered += 1;
        }

        let directory: Vec<(AgentId, Option<ServiceKind>)> =
            self.agents.iter().map(|(id, slot)| (id.clone(), slot.service)).collect();

        let sent_before = self.counters.sent;
        for id in self.agent_ids() {
            let slot = self.agents.get_mut(&id).unwrap();
            let mut behaviors = std::mem::take(&mut slot.behaviors);
            for entry in behaviors.iter_mut() {
                if entry.done || !due(entry.behavior.kind, round) {
                    continue;
                }
                let slot = self.agents.get_mut(&id).unwrap();
                let mut ctx = Ctx {
                    agent: &id,
                    round,
                    mailbox: &mut slot.mailbox,
                    directory: &directory,
                    outbox: Vec::new(),
                    received: 0,
                };
                let result = catch_unwind(AssertUnwindSafe(|| {
                    (entry.behavior.step)(&mut slot.state, &mut ctx)
                }));
                let (outbox, received) = (std::mem::take(&mut ctx.outbox), ctx.received);
                self.counters.received += received;
                self.counters.in_flight -= received;
                stats.behaviors_run += 1;
                self.counters.behaviors_run += 1;
                match result {
                    Ok(Ok(())) => {}
                    Ok(Err(message)) => {
                        self.agents.get_mut(&id).unwrap().behaviors = behaviors;
                        return Err(SimError::BehaviorFailed {
                            agent: id.to_string(),
                            behavior: entry.behavior.name.clone(),
                            message,
                        });
                    }
                    Err(panic) => {
                        self.agents.get_mut(&id).unwrap().behaviors = behaviors;
                        return Err(SimError::BehaviorPanic {
                            agent: id.to_string(),
                            behavior: entry.behavior.name.clone(),
                            message: panic_text(panic),
                        });
                    }
                }
                for msg in outbox {
                    self.record(&msg);
                    for r in &msg.receivers {
                        self.pending.push_back((r.clone(), msg.clone()));
                    }
                }
                if entry.behavior.kind == BehaviorKind::OneShot {
                    entry.done = true;
                }
            }
            behaviors.retain(|entry| !entry.done);
            self.agents.get_mut(&id).unwrap().behaviors = behaviors;
        }
        stats.sent = self.counters.sent - sent_before;
        self.round += 1;
        Ok(stats)
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn message_log(&self) -> &[LogRecord] {
        &self.log
    }

    /// Tab-separated debug dump: round, sender, receiver, performative,
    /// protocol, conversation id. One line per message.
    pub fn dump_log(&self, mut w: impl Write) -> std::io::Result<()> {
        for record in &self.log {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                record.round,
                record.sender,
                record.receiver,
                record.performative,
                record.protocol,
                record.conversation_id
            )?;
        }
        Ok(())
    }
}

fn due(kind: BehaviorKind, round: u64) -> bool {
    match kind {
        BehaviorKind::OneShot | BehaviorKind::Cyclic => true,
        BehaviorKind::Delayed { period } => (round + 1) % period == 0,
    }
}

fn panic_text(panic: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}
