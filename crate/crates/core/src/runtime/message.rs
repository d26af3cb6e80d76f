//! Performative-typed messages and their self-describing content payloads.

use crate::market::CommodityLot;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// FIPA-style speech-act type. A closed enumeration; the serialized name
/// round-trips exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Performative {
    Request,
    QueryIf,
    Propose,
    AcceptProposal,
    RejectProposal,
    Inform,
    InformIf,
    Agree,
    Refuse,
    Cfp,
    Confirm,
    Disconfirm,
    RequestWhen,
    Subscribe,
}

impl Performative {
    pub const ALL: [Performative; 14] = [
        Performative::Request,
        Performative::QueryIf,
        Performative::Propose,
        Performative::AcceptProposal,
        Performative::RejectProposal,
        Performative::Inform,
        Performative::InformIf,
        Performative::Agree,
        Performative::Refuse,
        Performative::Cfp,
        Performative::Confirm,
        Performative::Disconfirm,
        Performative::RequestWhen,
        Performative::Subscribe,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Performative::Request => "REQUEST",
            Performative::QueryIf => "QUERY_IF",
            Performative::Propose => "PROPOSE",
            Performative::AcceptProposal => "ACCEPT_PROPOSAL",
            Performative::RejectProposal => "REJECT_PROPOSAL",
            Performative::Inform => "INFORM",
            Performative::InformIf => "INFORM_IF",
            Performative::Agree => "AGREE",
            Performative::Refuse => "REFUSE",
            Performative::Cfp => "CFP",
            Performative::Confirm => "CONFIRM",
            Performative::Disconfirm => "DISCONFIRM",
            Performative::RequestWhen => "REQUEST_WHEN",
            Performative::Subscribe => "SUBSCRIBE",
        }
    }
}

impl fmt::Display for Performative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Performative {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Performative::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown performative `{s}`"))
    }
}

/// Interaction protocol a message belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    Offer,
    Seed,
    Pledge,
    DetailedYear,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::Offer => "Offer",
            Protocol::Seed => "Seed",
            Protocol::Pledge => "Pledge",
            Protocol::DetailedYear => "DetailedYear",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unique agent name. Non-empty, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Result<Self, String> {
        let name = name.into();
        if name.is_empty() {
            return Err("agent name must be non-empty".into());
        }
        if name.chars().any(char::is_whitespace) {
            return Err(format!("agent name `{name}` contains whitespace"));
        }
        Ok(AgentId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Market service kind announced in the yellow-pages directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ServiceKind {
    Produsen,
    Distributor,
    Konsumen,
}

impl ServiceKind {
    pub const ALL: [ServiceKind; 3] =
        [ServiceKind::Produsen, ServiceKind::Distributor, ServiceKind::Konsumen];

    pub fn as_str(&self) -> &'static str {
        match self {
            ServiceKind::Produsen => "produsen",
            ServiceKind::Distributor => "distributor",
            ServiceKind::Konsumen => "konsumen",
        }
    }
}

impl fmt::Display for ServiceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Message payload: a tagged union of the market content records, serialized
/// as a self-describing `{"type": ...}` structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Content {
    OfferInfo { kg: f64, ask_rp: f64 },
    Interest { kg: f64 },
    Allocation { kg: f64, price_rp: f64 },
    PriceQuote { rp_per_kg: f64 },
    PledgeProposal { rp_per_kg: f64 },
    Delivery { lots: Vec<CommodityLot> },
    Rejection { lots: Vec<CommodityLot> },
    DateSync { year: i32, month: u32 },
}

/// Performative-typed envelope carried between agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AclMessage {
    pub sender: AgentId,
    pub receivers: Vec<AgentId>,
    pub performative: Performative,
    pub protocol: Protocol,
    pub conversation_id: String,
    pub in_reply_to: Option<String>,
    pub content: Content,
}

impl AclMessage {
    pub fn new(
        sender: AgentId,
        receivers: Vec<AgentId>,
        performative: Performative,
        protocol: Protocol,
        conversation_id: impl Into<String>,
        content: Content,
    ) -> Self {
        AclMessage {
            sender,
            receivers,
            performative,
            protocol,
            conversation_id: conversation_id.into(),
            in_reply_to: None,
            content,
        }
    }

    /// Reply envelope: swaps direction and keeps the conversation id.
    pub fn reply(
        &self,
        from: AgentId,
        performative: Performative,
        content: Content,
    ) -> AclMessage {
        AclMessage {
            sender: from,
            receivers: vec![self.sender.clone()],
            performative,
            protocol: self.protocol,
            conversation_id: self.conversation_id.clone(),
            in_reply_to: Some(self.conversation_id.clone()),
            content,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn performative_names_round_trip() {
        for p in Performative::ALL {
            assert_eq!(p.as_str().parse::<Performative>().unwrap(), p);
        }
        assert!("NOT_A_PERFORMATIVE".parse::<Performative>().is_err());
    }

    #[test]
    fn agent_id_rejects_whitespace_and_empty() {
        assert!(AgentId::new("P1").is_ok());
        assert!(AgentId::new("").is_err());
        assert!(AgentId::new("P 1").is_err());
    }

    #[test]
    fn content_serializes_as_tagged_record() {
        let json = serde_json::to_string(&Content::OfferInfo { kg: 40.0, ask_rp: 5300.0 }).unwrap();
        assert_eq!(json, r#"{"type":"OfferInfo","kg":40.0,"ask_rp":5300.0}"#);
        let back: Content = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Content::OfferInfo { kg: 40.0, ask_rp: 5300.0 });
    }

    #[test]
    fn date_sync_wire_format() {
        let json = serde_json::to_string(&Content::DateSync { year: 2002, month: 1 }).unwrap();
        assert_eq!(json, r#"{"type":"DateSync","year":2002,"month":1}"#);
    }
}
