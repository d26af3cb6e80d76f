//! Message-log conformance: every logged message must use a
//! (sender role, performative, protocol) combination licensed by the
//! interaction matrix. The main agent may only SUBSCRIBE under
//! DetailedYear; market roles are limited to their protocol templates.

use crate::runtime::{AgentId, LogRecord, Performative, Protocol, ServiceKind};
use std::collections::BTreeMap;

/// Whether a sender role may emit `performative` under `protocol`.
/// `role == None` is the main agent.
pub fn licensed(
    role: Option<ServiceKind>,
    performative: Performative,
    protocol: Protocol,
) -> bool {
    use Performative::*;
    match (role, protocol) {
        (None, Protocol::DetailedYear) => performative == Subscribe,
        (None, _) => false,
        (Some(ServiceKind::Produsen), Protocol::Offer) => {
            matches!(performative, QueryIf | Inform | InformIf | Agree | Refuse)
        }
        (Some(ServiceKind::Produsen), Protocol::Seed) => {
            matches!(performative, AcceptProposal | RejectProposal)
        }
        (Some(ServiceKind::Produsen), Protocol::Pledge) => matches!(performative, Cfp | Confirm),
        (Some(ServiceKind::Distributor), Protocol::Offer) => {
            matches!(performative, InformIf | QueryIf | Inform | Agree | Refuse)
        }
        (Some(ServiceKind::Distributor), Protocol::Pledge) => {
            matches!(performative, RequestWhen | Disconfirm)
        }
        (Some(ServiceKind::Distributor), Protocol::Seed) => false,
        (Some(ServiceKind::Konsumen), Protocol::Offer) => {
            matches!(performative, InformIf | Request | Agree | Refuse)
        }
        (Some(ServiceKind::Konsumen), Protocol::Seed) => {
            matches!(performative, Propose | Agree | Refuse)
        }
        (Some(ServiceKind::Konsumen), Protocol::Pledge) => {
            matches!(performative, RequestWhen | Disconfirm)
        }
        (Some(_), Protocol::DetailedYear) => false,
    }
}

/// Checks a full message log against the licensing matrix. Returns one
/// violation line per offending record.
pub fn check_log(
    log: &[LogRecord],
    roles: &BTreeMap<AgentId, Option<ServiceKind>>,
) -> Vec<String> {
    let mut violations = Vec::new();
    for record in log {
        let Some(role) = roles.get(&record.sender) else {
            violations.push(format!(
                "round {}: unknown sender `{}`",
                record.round, record.sender
            ));
            continue;
        };
        if !licensed(*role, record.performative, record.protocol) {
            violations.push(format!(
                "round {}: `{}` may not send {} under {}",
                record.round, record.sender, record.performative, record.protocol
            ));
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_agent_only_subscribes() {
        assert!(licensed(None, Performative::Subscribe, Protocol::DetailedYear));
        assert!(!licensed(None, Performative::Inform, Protocol::DetailedYear));
        assert!(!licensed(None, Performative::Subscribe, Protocol::Offer));
    }

    #[test]
    fn cfp_is_produsen_only_under_pledge() {
        assert!(licensed(Some(ServiceKind::Produsen), Performative::Cfp, Protocol::Pledge));
        assert!(!licensed(Some(ServiceKind::Distributor), Performative::Cfp, Protocol::Pledge));
        assert!(!licensed(Some(ServiceKind::Konsumen), Performative::Cfp, Protocol::Pledge));
        assert!(!licensed(Some(ServiceKind::Produsen), Performative::Cfp, Protocol::Offer));
    }

    #[test]
    fn pledge_proposals_flow_one_way() {
        assert!(licensed(Some(ServiceKind::Konsumen), Performative::Propose, Protocol::Seed));
        assert!(!licensed(Some(ServiceKind::Produsen), Performative::Propose, Protocol::Seed));
        assert!(licensed(
            Some(ServiceKind::Produsen),
            Performative::AcceptProposal,
            Protocol::Seed
        ));
        assert!(!licensed(
            Some(ServiceKind::Konsumen),
            Performative::AcceptProposal,
            Protocol::Seed
        ));
    }
}
