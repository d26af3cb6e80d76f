//! The domain layer: market agent state, commodity lots, pledge contracts,
//! the four interaction protocols, and monthly/yearly bookkeeping.

mod conformance;
mod protocols;
mod sim;

pub use conformance::{check_log, licensed};
pub use sim::{
    check_controller_contract, load_controllers, AgentClock, ConservationReport,
    MarketAgentState, MonthStats, SimBuildError, Simulation,
};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Virtual calendar stamp; advances strictly one month per tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DateStamp {
    pub year: i32,
    pub month: u32,
}

impl DateStamp {
    pub fn new(year: i32, month: u32) -> Self {
        assert!((1..=12).contains(&month), "month must be 1..=12");
        DateStamp { year, month }
    }

    /// December wraps to January of the next year.
    pub fn next(self) -> Self {
        if self.month == 12 {
            DateStamp { year: self.year + 1, month: 1 }
        } else {
            DateStamp { year: self.year, month: self.month + 1 }
        }
    }

    pub fn plus_months(self, months: u32) -> Self {
        let zero_based = self.month - 1 + months;
        DateStamp { year: self.year + (zero_based / 12) as i32, month: zero_based % 12 + 1 }
    }
}

impl fmt::Display for DateStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{:02}", self.year, self.month)
    }
}

/// A quantity of potatoes with a diameter attribute; the unit of trade and
/// sorting. Lots are split but never merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommodityLot {
    pub kg: f64,
    pub diameter_cm: f64,
    /// Last acquisition price per kg; zero for harvested or starting stock.
    pub unit_price_rp: f64,
}

/// Forward contract locking a per-kg price for a future harvest.
#[derive(Debug, Clone, PartialEq)]
pub struct PledgeContract {
    pub produsen: String,
    pub konsumen: String,
    pub price_rp_per_kg: f64,
    pub status: PledgeStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PledgeStatus {
    Open,
    Delivered,
}

/// Seed in the ground, maturing `growth_months` after planting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedBatch {
    pub seed_kg: f64,
    pub planted_at: DateStamp,
    pub matures_at: DateStamp,
}

/// Total kilograms across lots.
pub fn stock_kg(lots: &[CommodityLot]) -> f64 {
    lots.iter().map(|lot| lot.kg).sum()
}

/// Diameter window predicate; a (0, 0) window passes everything (the
/// produsen convention for "no standard").
pub fn lot_passes(lot: &CommodityLot, min_d: f64, max_d: f64) -> bool {
    if min_d == 0.0 && max_d == 0.0 {
        return true;
    }
    (min_d..=max_d).contains(&lot.diameter_cm)
}

/// Partitions lots by the diameter window. Kilograms are conserved exactly:
/// no lot is split or merged here.
pub fn sort_lots(
    lots: Vec<CommodityLot>,
    min_d: f64,
    max_d: f64,
) -> (Vec<CommodityLot>, Vec<CommodityLot>) {
    lots.into_iter().partition(|lot| lot_passes(lot, min_d, max_d))
}

/// Kilograms of stock inside the diameter window.
pub fn passing_kg(lots: &[CommodityLot], min_d: f64, max_d: f64) -> f64 {
    lots.iter().filter(|lot| lot_passes(lot, min_d, max_d)).map(|lot| lot.kg).sum()
}

/// Removes up to `kg` from the front of the stock (oldest lots first),
/// splitting the last lot when needed. Returns the removed lots.
pub fn take_kg(stock: &mut Vec<CommodityLot>, kg: f64) -> Vec<CommodityLot> {
    let mut taken = Vec::new();
    let mut remaining = kg;
    while remaining > 0.0 && !stock.is_empty() {
        if stock[0].kg <= remaining {
            let lot = stock.remove(0);
            remaining -= lot.kg;
            taken.push(lot);
        } else {
            let mut part = stock[0].clone();
            part.kg = remaining;
            stock[0].kg -= remaining;
            taken.push(part);
            remaining = 0.0;
        }
    }
    taken
}

/// Like [`take_kg`] but only lots inside the diameter window are touched;
/// out-of-window lots stay in place.
pub fn take_passing_kg(
    stock: &mut Vec<CommodityLot>,
    kg: f64,
    min_d: f64,
    max_d: f64,
) -> Vec<CommodityLot> {
    let mut taken = Vec::new();
    let mut remaining = kg;
    let mut index = 0;
    while remaining > 0.0 && index < stock.len() {
        if !lot_passes(&stock[index], min_d, max_d) {
            index += 1;
            continue;
        }
        if stock[index].kg <= remaining {
            let lot = stock.remove(index);
            remaining -= lot.kg;
            taken.push(lot);
        } else {
            let mut part = stock[index].clone();
            part.kg = remaining;
            stock[index].kg -= remaining;
            taken.push(part);
            remaining = 0.0;
        }
    }
    taken
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lot(kg: f64, diameter: f64) -> CommodityLot {
        CommodityLot { kg, diameter_cm: diameter, unit_price_rp: 0.0 }
    }

    #[test]
    fn date_wraps_december_to_january() {
        assert_eq!(DateStamp::new(2002, 12).next(), DateStamp::new(2003, 1));
        assert_eq!(DateStamp::new(2002, 5).next(), DateStamp::new(2002, 6));
    }

    #[test]
    fn date_plus_months_crosses_years() {
        assert_eq!(DateStamp::new(2002, 11).plus_months(4), DateStamp::new(2003, 3));
        assert_eq!(DateStamp::new(2002, 1).plus_months(0), DateStamp::new(2002, 1));
    }

    #[test]
    fn sorting_partitions_by_window() {
        let lots = vec![lot(5.0, 4.0), lot(5.0, 5.5), lot(5.0, 6.0)];
        let (pass, reject) = sort_lots(lots, 4.9, 6.3);
        let pass_d: Vec<f64> = pass.iter().map(|l| l.diameter_cm).collect();
        let reject_d: Vec<f64> = reject.iter().map(|l| l.diameter_cm).collect();
        assert_eq!(pass_d, vec![5.5, 6.0]);
        assert_eq!(reject_d, vec![4.0]);
    }

    #[test]
    fn zero_window_passes_everything() {
        let lots = vec![lot(5.0, 0.5), lot(5.0, 20.0)];
        let (pass, reject) = sort_lots(lots, 0.0, 0.0);
        assert_eq!(pass.len(), 2);
        assert!(reject.is_empty());
    }

    #[test]
    fn sorting_empty_input() {
        let (pass, reject) = sort_lots(Vec::new(), 1.0, 2.0);
        assert!(pass.is_empty() && reject.is_empty());
    }

    #[test]
    fn sorting_conserves_kg() {
        let lots = vec![lot(3.5, 4.0), lot(2.25, 5.5), lot(10.0, 6.0)];
        let before = stock_kg(&lots);
        let (pass, reject) = sort_lots(lots, 5.0, 6.0);
        assert_eq!(stock_kg(&pass) + stock_kg(&reject), before);
    }

    #[test]
    fn take_kg_is_oldest_first_with_split() {
        let mut stock = vec![lot(10.0, 5.0), lot(10.0, 6.0)];
        let taken = take_kg(&mut stock, 14.0);
        assert_eq!(taken.len(), 2);
        assert_eq!(taken[0].kg, 10.0);
        assert_eq!(taken[1].kg, 4.0);
        assert_eq!(taken[1].diameter_cm, 6.0);
        assert_eq!(stock.len(), 1);
        assert_eq!(stock[0].kg, 6.0);
    }

    #[test]
    fn take_passing_skips_out_of_window_lots() {
        let mut stock = vec![lot(10.0, 2.0), lot(10.0, 5.5), lot(10.0, 5.6)];
        let taken = take_passing_kg(&mut stock, 12.0, 5.0, 6.0);
        assert_eq!(stock_kg(&taken), 12.0);
        assert!(taken.iter().all(|l| l.diameter_cm >= 5.0));
        // the 2.0 cm lot is untouched and still first
        assert_eq!(stock[0].diameter_cm, 2.0);
        assert_eq!(stock[0].kg, 10.0);
    }
}
