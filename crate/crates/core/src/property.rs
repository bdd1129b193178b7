// Copyright 2026 The Popledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Registered property held against a currency escrow.
//!
//! Buying at price `P` costs `2P` of spendable funds: `P` goes to the seller
//! and `P` is locked as escrow recording the property. The escrow comes back
//! to the owner on resale. A tenure clock counts up while escrow covers the
//! appraised value and down while it does not; reaching zero while
//! under-escrowed forfeits the property. Standing bids put a floor under the
//! appraisal: it can never sit below the second-highest bid.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{LedgerError, Result};
use crate::ledger::{Ledger, NewOutput, TxKind, UtxoId};
use crate::membership::ParticipantId;
use crate::value_space::Poplets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyId(pub [u8; 32]);

impl PropertyId {
    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|_| LedgerError::UnknownProperty)?;
        let arr: [u8; 32] = bytes.try_into().map_err(|_| LedgerError::UnknownProperty)?;
        Ok(PropertyId(arr))
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyRecord {
    pub property_id: PropertyId,
    pub owner: ParticipantId,
    pub appraised_value: Poplets,
    pub escrow: Poplets,
    pub tenure: u64,
    pub registered_epoch: u64,
}

impl PropertyRecord {
    /// Escrow equal to the appraisal counts as adequate.
    pub fn is_adequately_escrowed(&self) -> bool {
        self.escrow >= self.appraised_value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandingBid {
    pub bidder: ParticipantId,
    pub property_id: PropertyId,
    pub amount: Poplets,
    pub epoch: u64,
}

/// What happened to a property that forfeited during a tenure tick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forfeiture {
    pub property_id: PropertyId,
    pub former_owner: ParticipantId,
    /// `None` when no bidder could take it and the property was unregistered.
    pub new_owner: Option<ParticipantId>,
    pub price: Poplets,
    pub epoch: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyBook {
    pub(crate) records: BTreeMap<PropertyId, PropertyRecord>,
    /// Per property, highest amount first; ties by earlier epoch, then bidder.
    pub(crate) bids: BTreeMap<PropertyId, Vec<StandingBid>>,
}

impl PropertyBook {
    pub fn get(&self, pid: &PropertyId) -> Option<&PropertyRecord> {
        self.records.get(pid)
    }

    pub fn records(&self) -> impl Iterator<Item = &PropertyRecord> {
        self.records.values()
    }

    pub fn bids(&self, pid: &PropertyId) -> &[StandingBid] {
        self.bids.get(pid).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_escrow(&self) -> Result<Poplets> {
        Poplets::checked_sum(self.records.values().map(|r| r.escrow))
    }

    /// Second-highest standing bid, if at least two bids stand.
    pub fn bid_floor(&self, pid: &PropertyId) -> Option<Poplets> {
        self.bids(pid).get(1).map(|b| b.amount)
    }

    fn record_mut(&mut self, pid: &PropertyId) -> Result<&mut PropertyRecord> {
        self.records.get_mut(pid).ok_or(LedgerError::UnknownProperty)
    }

    fn enforce_floor(&mut self, pid: &PropertyId) {
        if let Some(floor) = self.bid_floor(pid) {
            if let Some(rec) = self.records.get_mut(pid) {
                rec.appraised_value = rec.appraised_value.max(floor);
            }
        }
    }

    pub(crate) fn insert_bid(&mut self, bid: StandingBid) {
        let list = self.bids.entry(bid.property_id).or_default();
        list.retain(|b| b.bidder != bid.bidder);
        list.push(bid);
        sort_bids(list);
    }

    fn remove_bids_by(&mut self, pid: &PropertyId, bidder: &ParticipantId) {
        if let Some(list) = self.bids.get_mut(pid) {
            list.retain(|b| &b.bidder != bidder);
            if list.is_empty() {
                self.bids.remove(pid);
            }
        }
    }

    pub(crate) fn reduce_escrow(&mut self, pid: &PropertyId, amount: Poplets) {
        if let Some(rec) = self.records.get_mut(pid) {
            rec.escrow = Poplets(rec.escrow.0.saturating_sub(amount.0));
        }
    }
}

pub(crate) fn sort_bids(list: &mut [StandingBid]) {
    list.sort_by(|a, b| b.amount.cmp(&a.amount).then(a.epoch.cmp(&b.epoch)).then(a.bidder.cmp(&b.bidder)));
}

/// Tenure clock step for one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TenureStep {
    Up,
    Down,
    Forfeit,
}

pub fn tenure_step(rec: &PropertyRecord) -> TenureStep {
    if rec.is_adequately_escrowed() {
        TenureStep::Up
    } else if rec.tenure > 0 {
        TenureStep::Down
    } else {
        TenureStep::Forfeit
    }
}

impl Ledger {
    fn new_property_id(&self, buyer: &ParticipantId, seller: &ParticipantId, price: Poplets) -> PropertyId {
        let mut h = Sha256::new();
        h.update(b"property");
        h.update(self.seq.to_le_bytes());
        h.update(self.epoch().to_le_bytes());
        h.update(buyer.0);
        h.update(seller.0);
        h.update(price.0.to_le_bytes());
        PropertyId(h.finalize().into())
    }

    fn locked_to(&self, pid: &PropertyId) -> Vec<UtxoId> {
        self.utxos.values().filter(|u| u.lock.as_ref() == Some(pid)).map(|u| u.id).collect()
    }

    fn expiry_of(&self, ids: &[UtxoId]) -> Option<u64> {
        if self.policy.is_expiring() {
            ids.iter().filter_map(|id| self.utxos.get(id)).filter_map(|u| u.expiry).min()
        } else {
            None
        }
    }

    /// Moves `2 * price` of `buyer`'s funds: `price` to `seller` and `price`
    /// into escrow locked to `pid`.
    fn purchase_with_escrow(
        &mut self,
        pid: PropertyId,
        buyer: &ParticipantId,
        seller: &ParticipantId,
        price: Poplets,
        inputs: &[UtxoId],
        input_total: Poplets,
    ) -> Result<()> {
        let cost = price.checked_mul(2)?;
        let change = input_total.checked_sub(cost)?;
        let expiry = self.expiry_of(inputs);
        let mut outputs = vec![
            NewOutput { owner: *seller, amount: price, lock: None, expiry },
            NewOutput { owner: *buyer, amount: price, lock: Some(pid), expiry },
        ];
        if !change.is_zero() {
            outputs.push(NewOutput { owner: *buyer, amount: change, lock: None, expiry });
        }
        self.commit(TxKind::EscrowLock, inputs, &outputs);
        Ok(())
    }

    /// Unlocks all escrow of `pid` back to `to`. Returns the amount released.
    fn release_escrow(&mut self, pid: &PropertyId, to: &ParticipantId) -> Result<Poplets> {
        let locked = self.locked_to(pid);
        if locked.is_empty() {
            return Ok(Poplets::ZERO);
        }
        let total = Poplets::checked_sum(locked.iter().map(|id| self.utxos[id].amount))?;
        let expiry = self.expiry_of(&locked);
        self.commit(TxKind::EscrowRelease, &locked, &[NewOutput { owner: *to, amount: total, lock: None, expiry }]);
        Ok(total)
    }

    /// Registers a property bought by `buyer` from `seller` at `price`.
    pub fn register_property(
        &mut self,
        buyer: &ParticipantId,
        seller: &ParticipantId,
        price: Poplets,
    ) -> Result<PropertyId> {
        if price.is_zero() {
            return Err(LedgerError::ZeroPrice);
        }
        let cost = price.checked_mul(2)?;
        let (inputs, total) = self.select_inputs(buyer, cost)?;
        let pid = self.new_property_id(buyer, seller, price);
        self.purchase_with_escrow(pid, buyer, seller, price, &inputs, total)?;
        let epoch = self.epoch();
        self.properties.records.insert(
            pid,
            PropertyRecord {
                property_id: pid,
                owner: *buyer,
                appraised_value: price,
                escrow: price,
                tenure: 0,
                registered_epoch: epoch,
            },
        );
        Ok(pid)
    }

    /// Resale: the seller receives `price` plus their old escrow; the buyer's
    /// escrow replaces it and tenure restarts.
    pub fn transfer_property(
        &mut self,
        pid: &PropertyId,
        seller: &ParticipantId,
        buyer: &ParticipantId,
        price: Poplets,
    ) -> Result<()> {
        let rec = self.properties.get(pid).ok_or(LedgerError::UnknownProperty)?;
        if &rec.owner != seller {
            return Err(LedgerError::NotOwner);
        }
        if price.is_zero() {
            return Err(LedgerError::ZeroPrice);
        }
        if self.properties.bid_floor(pid).is_some_and(|floor| price < floor) {
            return Err(LedgerError::BidFloorViolated);
        }
        let (inputs, total) = self.select_inputs(buyer, price.checked_mul(2)?)?;
        self.release_escrow(pid, seller)?;
        self.purchase_with_escrow(*pid, buyer, seller, price, &inputs, total)?;
        let rec = self.properties.record_mut(pid)?;
        rec.owner = *buyer;
        rec.appraised_value = price;
        rec.escrow = price;
        rec.tenure = 0;
        self.properties.remove_bids_by(pid, buyer);
        self.properties.enforce_floor(pid);
        Ok(())
    }

    /// Positive `delta` tops escrow up from spendable funds; negative
    /// withdraws, never below the appraised value.
    pub fn adjust_escrow(&mut self, pid: &PropertyId, owner: &ParticipantId, delta: i128) -> Result<()> {
        let rec = self.properties.get(pid).ok_or(LedgerError::UnknownProperty)?;
        if &rec.owner != owner {
            return Err(LedgerError::NotOwner);
        }
        if delta == 0 {
            return Err(LedgerError::ZeroAmount);
        }
        let amount = Poplets(delta.unsigned_abs());
        if delta > 0 {
            let (inputs, total) = self.select_inputs(owner, amount)?;
            let change = total.checked_sub(amount)?;
            let expiry = self.expiry_of(&inputs);
            let mut outputs = vec![NewOutput { owner: *owner, amount, lock: Some(*pid), expiry }];
            if !change.is_zero() {
                outputs.push(NewOutput { owner: *owner, amount: change, lock: None, expiry });
            }
            self.commit(TxKind::EscrowLock, &inputs, &outputs);
            let rec = self.properties.record_mut(pid)?;
            rec.escrow = rec.escrow.checked_add(amount)?;
        } else {
            let remaining = rec.escrow.checked_sub(amount).map_err(|_| LedgerError::WithdrawBelowAppraisal)?;
            if remaining < rec.appraised_value {
                return Err(LedgerError::WithdrawBelowAppraisal);
            }
            let locked = self.locked_to(pid);
            let expiry = self.expiry_of(&locked);
            let mut outputs = vec![NewOutput { owner: *owner, amount, lock: None, expiry }];
            if !remaining.is_zero() {
                outputs.push(NewOutput { owner: *owner, amount: remaining, lock: Some(*pid), expiry });
            }
            self.commit(TxKind::EscrowRelease, &locked, &outputs);
            self.properties.record_mut(pid)?.escrow = remaining;
        }
        Ok(())
    }

    pub fn place_bid(&mut self, bidder: &ParticipantId, pid: &PropertyId, amount: Poplets) -> Result<()> {
        let rec = self.properties.get(pid).ok_or(LedgerError::UnknownProperty)?;
        if &rec.owner == bidder {
            return Err(LedgerError::OwnerCannotBid);
        }
        if amount.is_zero() {
            return Err(LedgerError::ZeroAmount);
        }
        let epoch = self.epoch();
        self.properties.insert_bid(StandingBid { bidder: *bidder, property_id: *pid, amount, epoch });
        self.properties.enforce_floor(pid);
        Ok(())
    }

    /// Sets a new appraisal; the second-highest bid still bounds it below.
    pub fn appraise(&mut self, pid: &PropertyId, new_value: Poplets) -> Result<()> {
        if new_value.is_zero() {
            return Err(LedgerError::ZeroAmount);
        }
        self.properties.record_mut(pid)?.appraised_value = new_value;
        self.properties.enforce_floor(pid);
        Ok(())
    }

    /// One epoch of tenure for every property, forfeiting those that are
    /// under-escrowed with no tenure left.
    pub(crate) fn tick_tenure(&mut self) -> Result<Vec<Forfeiture>> {
        let mut forfeit = Vec::new();
        for rec in self.properties.records.values_mut() {
            match tenure_step(rec) {
                TenureStep::Up => rec.tenure += 1,
                TenureStep::Down => rec.tenure -= 1,
                TenureStep::Forfeit => forfeit.push(rec.property_id),
            }
        }
        forfeit.iter().map(|pid| self.forfeit(pid)).collect()
    }

    /// The highest bidder able to cover twice the clearing price takes the
    /// property at the second-highest bid; otherwise it is unregistered.
    /// Either way the former owner gets the stale escrow back.
    fn forfeit(&mut self, pid: &PropertyId) -> Result<Forfeiture> {
        let former = self.properties.get(pid).ok_or(LedgerError::UnknownProperty)?.owner;
        let epoch = self.epoch();
        loop {
            let bids = self.properties.bids(pid);
            let Some(top) = bids.first().cloned() else { break };
            let price = bids.get(1).map(|b| b.amount).unwrap_or(top.amount);
            let cost = price.checked_mul(2)?;
            match self.select_inputs(&top.bidder, cost) {
                Ok((inputs, total)) => {
                    self.release_escrow(pid, &former)?;
                    self.purchase_with_escrow(*pid, &top.bidder, &former, price, &inputs, total)?;
                    let rec = self.properties.record_mut(pid)?;
                    rec.owner = top.bidder;
                    rec.appraised_value = price;
                    rec.escrow = price;
                    rec.tenure = 0;
                    self.properties.remove_bids_by(pid, &top.bidder);
                    self.properties.enforce_floor(pid);
                    return Ok(Forfeiture {
                        property_id: *pid,
                        former_owner: former,
                        new_owner: Some(top.bidder),
                        price,
                        epoch,
                    });
                }
                Err(LedgerError::InsufficientFunds) => self.properties.remove_bids_by(pid, &top.bidder),
                Err(e) => return Err(e),
            }
        }
        self.release_escrow(pid, &former)?;
        self.properties.records.remove(pid);
        self.properties.bids.remove(pid);
        Ok(Forfeiture { property_id: *pid, former_owner: former, new_owner: None, price: Poplets::ZERO, epoch })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::LedgerConfig;
    use crate::membership::MockAttestation;

    /// Ledger with `n` participants and one distribution, genesis small
    /// enough to reason about by hand: 49 * 100 with L = 50 issues 100.
    fn ledger(n: usize) -> (Ledger, Vec<ParticipantId>) {
        let mut cfg = LedgerConfig::democratic(50);
        cfg.genesis = Poplets(4900 * n as u128);
        let mut l = Ledger::new(cfg).unwrap();
        let ids = (0..n).map(|i| l.enroll(&MockAttestation, format!("p{i}").as_bytes()).unwrap()).collect();
        l.advance_epoch().unwrap();
        (l, ids)
    }

    #[test]
    fn registration_needs_twice_the_price() {
        let (mut l, ids) = ledger(3);
        assert_eq!(l.spendable(&ids[0]), Poplets(100));
        let before = l.clone();
        assert_eq!(l.register_property(&ids[0], &ids[1], Poplets(51)), Err(LedgerError::InsufficientFunds));
        assert_eq!(l, before);
        assert_eq!(l.register_property(&ids[0], &ids[1], Poplets(0)), Err(LedgerError::ZeroPrice));

        let pid = l.register_property(&ids[0], &ids[1], Poplets(50)).unwrap();
        assert_eq!(l.balance(&ids[0]), (Poplets(0), Poplets(50)));
        assert_eq!(l.balance(&ids[1]), (Poplets(150), Poplets(0)));
        let rec = l.properties().get(&pid).unwrap();
        assert_eq!((rec.appraised_value, rec.escrow, rec.tenure), (Poplets(50), Poplets(50), 0));
        l.check_invariants().unwrap();
    }

    #[test]
    fn resale_releases_escrow() {
        let (mut l, ids) = ledger(3);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(40)).unwrap();
        assert_eq!(l.balance(&ids[0]), (Poplets(20), Poplets(40)));
        assert_eq!(l.transfer_property(&pid, &ids[1], &ids[2], Poplets(40)), Err(LedgerError::NotOwner));
        l.transfer_property(&pid, &ids[0], &ids[2], Poplets(40)).unwrap();
        // seller: 20 change + 40 price + 40 released escrow
        assert_eq!(l.balance(&ids[0]), (Poplets(100), Poplets(0)));
        assert_eq!(l.balance(&ids[2]), (Poplets(20), Poplets(40)));
        let rec = l.properties().get(&pid).unwrap();
        assert_eq!(rec.owner, ids[2]);
        assert_eq!(rec.tenure, 0);
        l.check_invariants().unwrap();
    }

    #[test]
    fn withdraw_down_to_appraisal_only() {
        let (mut l, ids) = ledger(2);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(30)).unwrap();
        l.adjust_escrow(&pid, &ids[0], 30).unwrap();
        assert_eq!(l.balance(&ids[0]), (Poplets(10), Poplets(60)));
        assert_eq!(l.adjust_escrow(&pid, &ids[1], -1), Err(LedgerError::NotOwner));
        l.adjust_escrow(&pid, &ids[0], -30).unwrap();
        assert_eq!(l.properties().get(&pid).unwrap().escrow, Poplets(30));
        assert_eq!(l.adjust_escrow(&pid, &ids[0], -1), Err(LedgerError::WithdrawBelowAppraisal));
        assert_eq!(l.adjust_escrow(&pid, &ids[0], 0), Err(LedgerError::ZeroAmount));
        assert_eq!(l.adjust_escrow(&pid, &ids[0], 41), Err(LedgerError::InsufficientFunds));
        l.check_invariants().unwrap();
    }

    #[test]
    fn second_price_floor() {
        let (mut l, ids) = ledger(4);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(50)).unwrap();
        l.appraise(&pid, Poplets(100)).unwrap();
        assert_eq!(l.place_bid(&ids[0], &pid, Poplets(10)), Err(LedgerError::OwnerCannotBid));
        assert_eq!(l.place_bid(&ids[1], &pid, Poplets(0)), Err(LedgerError::ZeroAmount));
        l.place_bid(&ids[1], &pid, Poplets(80)).unwrap();
        l.place_bid(&ids[2], &pid, Poplets(120)).unwrap();
        assert_eq!(l.properties().get(&pid).unwrap().appraised_value, Poplets(100));
        l.place_bid(&ids[3], &pid, Poplets(150)).unwrap();
        assert_eq!(l.properties().bid_floor(&pid), Some(Poplets(120)));
        assert_eq!(l.properties().get(&pid).unwrap().appraised_value, Poplets(120));
        l.appraise(&pid, Poplets(90)).unwrap();
        assert_eq!(l.properties().get(&pid).unwrap().appraised_value, Poplets(120));
        assert_eq!(l.transfer_property(&pid, &ids[0], &ids[1], Poplets(119)), Err(LedgerError::BidFloorViolated));
    }

    #[test]
    fn rebid_replaces_previous() {
        let (mut l, ids) = ledger(3);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(10)).unwrap();
        l.place_bid(&ids[1], &pid, Poplets(20)).unwrap();
        l.place_bid(&ids[1], &pid, Poplets(5)).unwrap();
        assert_eq!(l.properties().bids(&pid).len(), 1);
        assert_eq!(l.properties().bids(&pid)[0].amount, Poplets(5));
    }

    #[test]
    fn tenure_counts_up_then_down_then_forfeits() {
        let (mut l, ids) = ledger(2);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(40)).unwrap();
        for expected in 1..=5 {
            l.advance_epoch().unwrap();
            assert_eq!(l.properties().get(&pid).unwrap().tenure, expected);
        }
        let doubled = Poplets(80);
        l.appraise(&pid, doubled).unwrap();
        for expected in [4, 3, 2, 1, 0] {
            let r = l.advance_epoch().unwrap();
            assert!(r.forfeitures.is_empty());
            assert_eq!(l.properties().get(&pid).unwrap().tenure, expected);
        }
        let r = l.advance_epoch().unwrap();
        assert_eq!(r.forfeitures.len(), 1);
        assert_eq!(r.forfeitures[0].new_owner, None);
        assert!(l.properties().get(&pid).is_none());
        assert_eq!(l.balance(&ids[0]).1, Poplets(0));
        l.check_invariants().unwrap();
    }

    #[test]
    fn forfeit_goes_to_highest_bidder_at_second_price() {
        let (mut l, ids) = ledger(4);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(30)).unwrap();
        l.place_bid(&ids[2], &pid, Poplets(45)).unwrap();
        l.place_bid(&ids[3], &pid, Poplets(40)).unwrap();
        // floor 40 > escrow 30: under-escrowed with zero tenure
        let owner_before = l.spendable(&ids[0]);
        let r = l.advance_epoch().unwrap();
        assert_eq!(r.forfeitures.len(), 1);
        let f = &r.forfeitures[0];
        assert_eq!(f.new_owner, Some(ids[2]));
        assert_eq!(f.price, Poplets(40));
        // former owner: stale escrow 30 + price 40 + this epoch's coinbase
        let coinbase = r.per_participant;
        assert_eq!(l.spendable(&ids[0]).0, owner_before.0 + 30 + 40 + coinbase.0);
        let rec = l.properties().get(&pid).unwrap();
        assert_eq!((rec.owner, rec.escrow, rec.tenure), (ids[2], Poplets(40), 0));
        assert!(l.properties().bids(&pid).iter().all(|b| b.bidder != ids[2]));
        l.check_invariants().unwrap();
    }

    #[test]
    fn forfeit_skips_bidders_who_cannot_pay() {
        let (mut l, ids) = ledger(4);
        let pid = l.register_property(&ids[0], &ids[1], Poplets(30)).unwrap();
        // top bidder cannot cover 2 * 120; the seller (260 after the
        // coinbase) then clears at the remaining second price 110
        l.place_bid(&ids[2], &pid, Poplets(1_000_000)).unwrap();
        l.place_bid(&ids[1], &pid, Poplets(120)).unwrap();
        l.place_bid(&ids[3], &pid, Poplets(110)).unwrap();
        let r = l.advance_epoch().unwrap();
        let f = &r.forfeitures[0];
        assert_eq!(f.new_owner, Some(ids[1]));
        assert_eq!(f.price, Poplets(110));
        assert!(l.properties().bids(&pid).iter().all(|b| b.bidder != ids[2]));
        l.check_invariants().unwrap();
    }
}
