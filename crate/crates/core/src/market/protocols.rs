//! Monthly market phases and the four interaction protocols (Offer, Seed,
//! Pledge, Detailed Year). Conversations complete within the month they
//! start; every solicited reply is consumed before the phase ends.

use crate::error::SimError;
use crate::market::sim::Simulation;
use crate::market::{
    sort_lots, stock_kg, take_kg, take_passing_kg, CommodityLot, DateStamp, PledgeContract,
    PledgeStatus, PlantedBatch,
};
use crate::runtime::{AclMessage, AgentId, Content, MsgFilter, Performative, Protocol, ServiceKind};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Acceptance threshold on the controller's `accept` output.
const ACCEPT_THRESHOLD: f64 = 0.5;
/// Quantities below this are treated as nothing to trade.
const EPSILON_KG: f64 = 1e-9;

fn price_ratio(own_normal_buy: f64, counterparty_price: f64) -> f64 {
    if own_normal_buy <= 0.0 {
        2.0
    } else {
        (counterparty_price / own_normal_buy).clamp(0.0, 2.0)
    }
}

impl Simulation {
    /// Controller decision inputs: `price_ratio` (counterparty price over
    /// own normal buy price) and `stock_level`. Returns (accept, adjust).
    fn controller_decision(&self, id: &AgentId, ratio: f64) -> Result<(f64, f64), SimError> {
        let state = self.state(id).expect("market agent");
        let inputs = std::collections::BTreeMap::from([
            ("price_ratio".to_string(), ratio.clamp(0.0, 2.0)),
            ("stock_level".to_string(), state.stock_level()),
        ]);
        let outputs = fcl::evaluate(&state.controller, &inputs)
            .map_err(|source| SimError::Controller { agent: id.to_string(), source })?;
        Ok((outputs["accept"], outputs["adjust"]))
    }

    /// Buyers a seller may offer to: produsen reach distributors and
    /// konsumen, distributors reach konsumen only.
    fn offer_buyers(&self, seller_role: ServiceKind) -> Vec<AgentId> {
        let mut buyers = match seller_role {
            ServiceKind::Produsen => {
                let mut v = self.ids_of(ServiceKind::Distributor);
                v.extend(self.ids_of(ServiceKind::Konsumen));
                v
            }
            ServiceKind::Distributor => self.ids_of(ServiceKind::Konsumen),
            ServiceKind::Konsumen => Vec::new(),
        };
        buyers.sort();
        buyers
    }

    /// Phase 2: per produsen, harvest maturing batches, then deliver the
    /// fresh lots under an open pledge or poll prices (divergence).
    pub(crate) fn phase_harvest_and_sales(&mut self, stamp: DateStamp) -> Result<(), SimError> {
        for produsen in self.ids_of(ServiceKind::Produsen) {
            let fresh = self.harvest(&produsen, stamp);
            if fresh.is_empty() {
                continue;
            }
            let pledge = self.state(&produsen).expect("produsen").pledge.clone();
            match pledge {
                Some(contract) if contract.status == PledgeStatus::Open => {
                    let lots = self.remove_tail(&produsen, fresh.len());
                    let receiver = AgentId::new(&contract.konsumen).expect("validated name");
                    self.give_commodity(&produsen, &receiver, lots, contract.price_rp_per_kg)?;
                    self.mark_pledge_delivered(&produsen, &receiver);
                }
                _ => {
                    let lots = self.remove_tail(&produsen, fresh.len());
                    self.divergence_protocol(&produsen, lots)?;
                }
            }
        }
        Ok(())
    }

    /// Removes the `count` newest lots (the ones a harvest just appended).
    fn remove_tail(&mut self, id: &AgentId, count: usize) -> Vec<CommodityLot> {
        let state = self.state_mut(id);
        let at = state.stock.len() - count;
        state.stock.split_off(at)
    }

    /// Harvest every batch maturing this month: revenue = seed x ratio,
    /// randomly reduced by Uniform[0.3, 0.8] with the agent's failure
    /// chance, split into lots with drawn diameters. Returns the new lots
    /// (also appended to stock).
    pub(crate) fn harvest(&mut self, id: &AgentId, stamp: DateStamp) -> Vec<CommodityLot> {
        let state = self.state(id).expect("produsen");
        let due: Vec<PlantedBatch> =
            state.batches.iter().filter(|b| b.matures_at == stamp).cloned().collect();
        if due.is_empty() {
            return Vec::new();
        }
        let failure_chance = state.spec.harvest_failure_chance;
        let ratio = self.global.harvest_ratio;
        let lot_kg = self.global.lot_kg;
        let diameter = Normal::new(self.global.diameter_mean, self.global.diameter_sd)
            .expect("validated at build");

        let mut fresh = Vec::new();
        for batch in &due {
            let mut revenue_kg = batch.seed_kg * ratio;
            if failure_chance > 0.0 && self.rng.gen::<f64>() < failure_chance {
                let loss: f64 = self.rng.gen_range(0.3..0.8);
                revenue_kg *= loss;
            }
            let mut remaining = revenue_kg;
            while remaining > 0.0 {
                let kg = remaining.min(lot_kg);
                let diameter_cm = diameter.sample(&mut self.rng).clamp(1.0, 12.0);
                fresh.push(CommodityLot { kg, diameter_cm, unit_price_rp: 0.0 });
                remaining -= kg;
            }
        }
        let state = self.state_mut(id);
        state.batches.retain(|b| b.matures_at != stamp);
        for lot in &fresh {
            self.ledger.harvested_kg.add(lot.kg);
        }
        self.state_mut(id).stock.extend(fresh.clone());
        fresh
    }

    /// Phase 3: konsumen production, falling back to the request protocol
    /// when passing stock cannot cover one production run.
    pub(crate) fn phase_production(&mut self) -> Result<(), SimError> {
        for konsumen in self.ids_of(ServiceKind::Konsumen) {
            self.produce_monthly(&konsumen)?;
        }
        Ok(())
    }

    pub(crate) fn produce_monthly(&mut self, id: &AgentId) -> Result<(), SimError> {
        let state = self.state(id).expect("konsumen");
        let usage = state.spec.production_usage_kg;
        if usage <= 0.0 {
            return Ok(());
        }
        let (min_d, max_d) = (state.spec.min_diameter_cm, state.spec.max_diameter_cm);
        let passing = crate::market::passing_kg(&state.stock, min_d, max_d);
        if passing >= usage {
            let income = usage * state.spec.production_income_rp_per_kg;
            let state = self.state_mut(id);
            let consumed = take_passing_kg(&mut state.stock, usage, min_d, max_d);
            state.money_rp += income;
            for lot in &consumed {
                self.ledger.consumed_kg.add(lot.kg);
            }
            self.ledger.production_income_rp.add(income);
        } else {
            self.request_protocol(id, usage - passing)?;
        }
        Ok(())
    }

    /// Offer-protocol request leg: REQUEST quotes from every produsen and
    /// distributor, then buy cheapest-first until the need or the money
    /// runs out.
    pub(crate) fn request_protocol(&mut self, buyer: &AgentId, needed_kg: f64) -> Result<(), SimError> {
        if needed_kg <= EPSILON_KG {
            return Ok(());
        }
        let mut sellers = self.ids_of(ServiceKind::Produsen);
        sellers.extend(self.ids_of(ServiceKind::Distributor));
        sellers.sort();
        if sellers.is_empty() {
            return Ok(()); // request expires silently this month
        }
        let conv = self.conversation("req", buyer);
        let msg = AclMessage::new(
            buyer.clone(),
            sellers.clone(),
            Performative::Request,
            Protocol::Offer,
            conv.clone(),
            Content::Interest { kg: needed_kg },
        );
        self.world_mut().exchange(msg)?;

        // sellers with stock quote their normal buy price; the rest stay silent
        let mut quotes: Vec<(f64, AgentId, f64)> = Vec::new(); // ask, seller, available
        for seller in &sellers {
            let request = self
                .world_mut()
                .receive(seller, &MsgFilter::of(Performative::Request, Protocol::Offer).in_conversation(&conv))
                .expect("request was just delivered");
            let state = self.state(seller).expect("seller");
            let available = state.stock_kg();
            let ask = state.spec.normal_buy_price_rp_per_kg;
            if available > EPSILON_KG {
                let reply = request.reply(
                    seller.clone(),
                    Performative::QueryIf,
                    Content::OfferInfo { kg: available, ask_rp: ask },
                );
                self.world_mut().exchange(reply)?;
                quotes.push((ask, seller.clone(), available));
            }
        }
        // drain the quote replies in arrival order
        while self
            .world_mut()
            .receive(buyer, &MsgFilter::of(Performative::QueryIf, Protocol::Offer).in_conversation(&conv))
            .is_some()
        {}

        quotes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
        let mut remaining = needed_kg;
        for (ask, seller, available) in quotes {
            let money = self.state(buyer).expect("buyer").money_rp;
            let affordable = if ask > 0.0 { money / ask } else { f64::INFINITY };
            let take = remaining.min(available).min(affordable);
            let reply_to = AclMessage::new(
                buyer.clone(),
                vec![seller.clone()],
                Performative::Agree,
                Protocol::Offer,
                conv.clone(),
                Content::Allocation { kg: take.max(0.0), price_rp: ask },
            );
            if take > EPSILON_KG && remaining > EPSILON_KG {
                self.world_mut().exchange(reply_to)?;
                let moved = self.settle_trade(&seller, buyer, take, ask);
                remaining -= moved;
            } else {
                let mut refuse = reply_to;
                refuse.performative = Performative::Refuse;
                refuse.content = Content::Allocation { kg: 0.0, price_rp: ask };
                self.world_mut().exchange(refuse)?;
            }
            let _ = self.world_mut().receive(
                &seller,
                &MsgFilter::default().in_conversation(&conv),
            );
        }
        Ok(())
    }

    /// Phase 4: each konsumen without an open contract proposes its pledge
    /// price to one produsen, round-robin across months.
    pub(crate) fn phase_pledges(&mut self) -> Result<(), SimError> {
        for konsumen in self.ids_of(ServiceKind::Konsumen) {
            self.pledge_deal_protocol(&konsumen)?;
        }
        Ok(())
    }

    pub(crate) fn pledge_deal_protocol(&mut self, konsumen: &AgentId) -> Result<(), SimError> {
        let state = self.state(konsumen).expect("konsumen");
        let pledge_price = state.spec.normal_pledge_price_rp_per_kg;
        if state.has_open_pledge() || pledge_price <= 0.0 {
            return Ok(());
        }
        let candidates: Vec<AgentId> = self
            .ids_of(ServiceKind::Produsen)
            .into_iter()
            .filter(|p| !self.state(p).expect("produsen").has_open_pledge())
            .collect();
        if candidates.is_empty() {
            return Ok(());
        }
        let cursor = self.state(konsumen).expect("konsumen").pledge_cursor;
        let target = candidates[cursor % candidates.len()].clone();
        self.state_mut(konsumen).pledge_cursor = cursor.wrapping_add(1);

        let conv = self.conversation("pledge", konsumen);
        let propose = AclMessage::new(
            konsumen.clone(),
            vec![target.clone()],
            Performative::Propose,
            Protocol::Seed,
            conv.clone(),
            Content::PledgeProposal { rp_per_kg: pledge_price },
        );
        self.world_mut().exchange(propose)?;

        let proposal = self
            .world_mut()
            .receive(&target, &MsgFilter::of(Performative::Propose, Protocol::Seed).in_conversation(&conv))
            .expect("proposal was just delivered");
        let ratio = price_ratio(
            self.state(&target).expect("produsen").spec.normal_buy_price_rp_per_kg,
            pledge_price,
        );
        let (accept, _) = self.controller_decision(&target, ratio)?;
        let verdict = if accept >= ACCEPT_THRESHOLD {
            Performative::AcceptProposal
        } else {
            Performative::RejectProposal
        };
        let reply = proposal.reply(
            target.clone(),
            verdict,
            Content::PledgeProposal { rp_per_kg: pledge_price },
        );
        self.world_mut().exchange(reply)?;
        let _ = self
            .world_mut()
            .receive(konsumen, &MsgFilter::default().in_conversation(&conv))
            .expect("verdict was just delivered");

        if verdict == Performative::AcceptProposal {
            let contract = PledgeContract {
                produsen: target.to_string(),
                konsumen: konsumen.to_string(),
                price_rp_per_kg: pledge_price,
                status: PledgeStatus::Open,
            };
            self.state_mut(&target).pledge = Some(contract.clone());
            self.state_mut(konsumen).pledge = Some(contract);
        }
        Ok(())
    }

    /// Phase 5: offer protocols, produsen sellers first, then distributors.
    pub(crate) fn phase_offers(&mut self) -> Result<(), SimError> {
        let mut sellers = self.ids_of(ServiceKind::Produsen);
        sellers.extend(self.ids_of(ServiceKind::Distributor));
        for seller in sellers {
            self.offer_protocol(&seller)?;
        }
        Ok(())
    }

    /// INFORM the offer, gather INFORM_IF interest / REFUSE replies, then
    /// allocate stock to interested buyers in lexicographic order.
    pub(crate) fn offer_protocol(&mut self, seller: &AgentId) -> Result<(), SimError> {
        let state = self.state(seller).expect("seller");
        let offered_kg = state.stock_kg();
        let ask = state.spec.normal_buy_price_rp_per_kg;
        if offered_kg <= EPSILON_KG {
            return Ok(());
        }
        let buyers = self.offer_buyers(state.spec.role);
        if buyers.is_empty() {
            return Ok(());
        }
        let conv = self.conversation("offer", seller);
        let inform = AclMessage::new(
            seller.clone(),
            buyers.clone(),
            Performative::Inform,
            Protocol::Offer,
            conv.clone(),
            Content::OfferInfo { kg: offered_kg, ask_rp: ask },
        );
        self.world_mut().exchange(inform)?;

        let mut interested: Vec<(AgentId, f64)> = Vec::new();
        for buyer in &buyers {
            let offer = self
                .world_mut()
                .receive(buyer, &MsgFilter::of(Performative::Inform, Protocol::Offer).in_conversation(&conv))
                .expect("offer was just delivered");
            let buyer_state = self.state(buyer).expect("buyer");
            let ratio = price_ratio(buyer_state.spec.normal_buy_price_rp_per_kg, ask);
            let (accept, _) = self.controller_decision(buyer, ratio)?;
            let need = (buyer_state.stock_reference - buyer_state.stock_kg()).max(0.0);
            let affordable =
                if ask > 0.0 { buyer_state.money_rp / ask } else { f64::INFINITY };
            let desired = offered_kg.min(need).min(affordable);
            let (performative, content) = if accept >= ACCEPT_THRESHOLD && desired > EPSILON_KG {
                interested.push((buyer.clone(), desired));
                (Performative::InformIf, Content::Interest { kg: desired })
            } else {
                (Performative::Refuse, Content::Interest { kg: 0.0 })
            };
            let reply = offer.reply(buyer.clone(), performative, content);
            self.world_mut().exchange(reply)?;
        }
        // consume every reply before deciding allocations
        while self
            .world_mut()
            .receive(seller, &MsgFilter { protocol: Some(Protocol::Offer), ..MsgFilter::default() }.in_conversation(&conv))
            .is_some()
        {}

        let mut remaining = offered_kg;
        for (buyer, desired) in interested {
            let alloc = desired.min(remaining);
            if alloc > EPSILON_KG {
                let agree = AclMessage::new(
                    seller.clone(),
                    vec![buyer.clone()],
                    Performative::Agree,
                    Protocol::Offer,
                    conv.clone(),
                    Content::Allocation { kg: alloc, price_rp: ask },
                );
                self.world_mut().exchange(agree)?;
                let _ = self
                    .world_mut()
                    .receive(&buyer, &MsgFilter::default().in_conversation(&conv));
                // settlement re-checks the buyer's cash; the allocation
                // shrinks rather than driving money negative
                let money = self.state(&buyer).expect("buyer").money_rp;
                let affordable = if ask > 0.0 { money / ask } else { f64::INFINITY };
                let moved = self.settle_trade(seller, &buyer, alloc.min(affordable), ask);
                remaining -= moved;
            } else {
                let refuse = AclMessage::new(
                    seller.clone(),
                    vec![buyer.clone()],
                    Performative::Refuse,
                    Protocol::Offer,
                    conv.clone(),
                    Content::Allocation { kg: 0.0, price_rp: ask },
                );
                self.world_mut().exchange(refuse)?;
                let _ = self
                    .world_mut()
                    .receive(&buyer, &MsgFilter::default().in_conversation(&conv));
            }
        }
        Ok(())
    }

    /// Moves up to `kg` from seller stock to buyer stock at `price`,
    /// settling cash zero-sum. Returns the kilograms actually moved.
    pub(crate) fn settle_trade(
        &mut self,
        seller: &AgentId,
        buyer: &AgentId,
        kg: f64,
        price: f64,
    ) -> f64 {
        if kg <= 0.0 {
            return 0.0;
        }
        let lots = take_kg(&mut self.state_mut(seller).stock, kg);
        let moved = stock_kg(&lots);
        if moved <= 0.0 {
            return 0.0;
        }
        let pay = {
            let buyer_state = self.state_mut(buyer);
            let pay = (moved * price).min(buyer_state.money_rp);
            buyer_state.money_rp -= pay;
            buyer_state.stock.extend(lots.into_iter().map(|mut lot| {
                lot.unit_price_rp = price;
                lot
            }));
            pay
        };
        self.state_mut(seller).money_rp += pay;
        moved
    }

    /// CFP price poll at harvest: every distributor and konsumen quotes
    /// `normal_buy x (1 + adjust)`; the highest quote wins the delivery.
    pub(crate) fn divergence_protocol(
        &mut self,
        produsen: &AgentId,
        lots: Vec<CommodityLot>,
    ) -> Result<(), SimError> {
        let lots_kg = stock_kg(&lots);
        if lots_kg <= 0.0 {
            return Ok(());
        }
        let responders = self.offer_buyers(ServiceKind::Produsen);
        if responders.is_empty() {
            // no one to quote: the lots remain in stock for the offer phase
            self.state_mut(produsen).stock.extend(lots);
            return Ok(());
        }
        let conv = self.conversation("div", produsen);
        let cfp = AclMessage::new(
            produsen.clone(),
            responders.clone(),
            Performative::Cfp,
            Protocol::Pledge,
            conv.clone(),
            Content::OfferInfo { kg: lots_kg, ask_rp: 0.0 },
        );
        self.world_mut().exchange(cfp)?;

        let mut quotes: Vec<(AgentId, f64)> = Vec::new();
        for responder in &responders {
            let cfp_msg = self
                .world_mut()
                .receive(responder, &MsgFilter::of(Performative::Cfp, Protocol::Pledge).in_conversation(&conv))
                .expect("cfp was just delivered");
            // no counterparty price exists yet; quote from a neutral ratio
            let (_, adjust) = self.controller_decision(responder, 1.0)?;
            let base = self.state(responder).expect("responder").spec.normal_buy_price_rp_per_kg;
            let quote = base * (1.0 + adjust);
            let reply = cfp_msg.reply(
                responder.clone(),
                Performative::RequestWhen,
                Content::PriceQuote { rp_per_kg: quote },
            );
            self.world_mut().exchange(reply)?;
            quotes.push((responder.clone(), quote));
        }
        while self
            .world_mut()
            .receive(produsen, &MsgFilter::of(Performative::RequestWhen, Protocol::Pledge).in_conversation(&conv))
            .is_some()
        {}

        // argmax quote, lexicographic winner on ties
        let (winner, price) = quotes
            .into_iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| b.0.cmp(&a.0)))
            .expect("responders is non-empty");
        self.give_commodity(produsen, &winner, lots, price)?;
        Ok(())
    }

    /// Delivers lots at a fixed price: the receiver sorts by its diameter
    /// standard, keeps what it can pay for, and DISCONFIRMs the rest back.
    /// Returned lots are market-sold by the produsen immediately.
    pub(crate) fn give_commodity(
        &mut self,
        produsen: &AgentId,
        receiver: &AgentId,
        lots: Vec<CommodityLot>,
        price_rp_per_kg: f64,
    ) -> Result<(), SimError> {
        if lots.is_empty() {
            return Ok(());
        }
        let conv = self.conversation("give", produsen);
        let confirm = AclMessage::new(
            produsen.clone(),
            vec![receiver.clone()],
            Performative::Confirm,
            Protocol::Pledge,
            conv.clone(),
            Content::Delivery { lots: lots.clone() },
        );
        self.world_mut().exchange(confirm)?;
        let delivery = self
            .world_mut()
            .receive(receiver, &MsgFilter::of(Performative::Confirm, Protocol::Pledge).in_conversation(&conv))
            .expect("delivery was just delivered");
        let Content::Delivery { lots: delivered } = delivery.content else {
            unreachable!("delivery content is fixed above");
        };

        let (min_d, max_d, money) = {
            let r = self.state(receiver).expect("receiver");
            (r.spec.min_diameter_cm, r.spec.max_diameter_cm, r.money_rp)
        };
        let (mut pass, mut returned) = sort_lots(delivered, min_d, max_d);
        // affordability cap: the unpayable remainder goes back too
        let affordable_kg =
            if price_rp_per_kg > 0.0 { money / price_rp_per_kg } else { f64::INFINITY };
        let pass_kg = stock_kg(&pass);
        let accepted = if pass_kg > affordable_kg {
            let kept = take_kg(&mut pass, affordable_kg);
            returned.extend(std::mem::take(&mut pass));
            kept
        } else {
            std::mem::take(&mut pass)
        };

        let accepted_kg = stock_kg(&accepted);
        let pay = {
            let r = self.state_mut(receiver);
            let pay = (accepted_kg * price_rp_per_kg).min(r.money_rp);
            r.money_rp -= pay;
            r.stock.extend(accepted.into_iter().map(|mut lot| {
                lot.unit_price_rp = price_rp_per_kg;
                lot
            }));
            pay
        };
        self.state_mut(produsen).money_rp += pay;

        let disconfirm = AclMessage::new(
            receiver.clone(),
            vec![produsen.clone()],
            Performative::Disconfirm,
            Protocol::Pledge,
            conv.clone(),
            Content::Rejection { lots: returned.clone() },
        );
        self.world_mut().exchange(disconfirm)?;
        let _ = self
            .world_mut()
            .receive(produsen, &MsgFilter::of(Performative::Disconfirm, Protocol::Pledge).in_conversation(&conv))
            .expect("rejection was just delivered");
        self.sell_at_market(produsen, returned);
        Ok(())
    }

    fn mark_pledge_delivered(&mut self, produsen: &AgentId, konsumen: &AgentId) {
        for id in [produsen, konsumen] {
            if let Some(contract) = &mut self.state_mut(id).pledge {
                contract.status = PledgeStatus::Delivered;
            }
        }
    }

    /// Sells lots out of the simulation into the traditional market at the
    /// agent's market income price (an exogenous sink).
    pub(crate) fn sell_at_market(&mut self, id: &AgentId, lots: Vec<CommodityLot>) {
        if lots.is_empty() {
            return;
        }
        let rate = self.state(id).expect("agent").spec.market_income_rp_per_kg;
        let mut kg = 0.0;
        for lot in &lots {
            self.ledger.market_sold_kg.add(lot.kg);
            kg += lot.kg;
        }
        let income = kg * rate;
        self.state_mut(id).money_rp += income;
        self.ledger.market_sale_income_rp.add(income);
    }

    /// Phase 6: plant the largest batch the field, the seed store, and the
    /// cash balance allow; one open batch at a time.
    pub(crate) fn phase_planting(&mut self, stamp: DateStamp) {
        for produsen in self.ids_of(ServiceKind::Produsen) {
            self.plant(&produsen, stamp);
        }
    }

    pub(crate) fn plant(&mut self, id: &AgentId, stamp: DateStamp) {
        let seed_per_ha = self.global.seed_per_ha;
        let growth = self.global.growth_months;
        let state = self.state_mut(id);
        if !state.batches.is_empty() || state.seed_kg <= 0.0 {
            return;
        }
        let capacity_kg = state.spec.field_ha * seed_per_ha;
        let cost_per_kg = state.spec.plant_cost_rp_per_ha / seed_per_ha;
        let affordable_kg =
            if cost_per_kg > 0.0 { state.money_rp / cost_per_kg } else { f64::INFINITY };
        let quantity = state.seed_kg.min(capacity_kg).min(affordable_kg);
        if quantity <= 0.0 {
            return;
        }
        let cost = (quantity * cost_per_kg).min(state.money_rp);
        state.seed_kg -= quantity;
        state.money_rp -= cost;
        state.batches.push(PlantedBatch {
            seed_kg: quantity,
            planted_at: stamp,
            matures_at: stamp.plus_months(growth),
        });
        self.ledger.plant_cost_rp.add(cost);
    }
}
