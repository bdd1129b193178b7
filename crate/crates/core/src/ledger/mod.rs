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

//! UTXO ledger state machine.
//!
//! All mutation goes through `&mut Ledger`: payments, epoch advances and the
//! property operations in [`crate::property`]. Every operation validates in
//! full before touching state, so a failed call leaves the ledger exactly as
//! it was.

mod snapshot;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::error::{LedgerError, Result};
use crate::membership::{AttestationProvider, ParticipantId, ParticipantRegistry};
use crate::par::Execution;
use crate::policy::{self, CoinbaseOutput, DistributionEvent, PolicyKind};
use crate::property::{Forfeiture, PropertyBook, PropertyId};
use crate::value_space::{self, ConversionRate, Poplets, ValueSpace, GENESIS_SIZE};

pub use snapshot::SNAPSHOT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UtxoId(pub [u8; 32]);

impl UtxoId {
    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|_| LedgerError::UnknownInput(s.to_string()))?;
        let arr: [u8; 32] = bytes.try_into().map_err(|_| LedgerError::UnknownInput(s.to_string()))?;
        Ok(UtxoId(arr))
    }
}

impl fmt::Display for UtxoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utxo {
    pub id: UtxoId,
    pub owner: ParticipantId,
    pub amount: Poplets,
    pub mint_epoch: u64,
    pub expiry: Option<u64>,
    pub lock: Option<PropertyId>,
}

impl Utxo {
    pub fn is_spendable_at(&self, epoch: u64) -> bool {
        self.lock.is_none() && !policy::is_expired(self.expiry, epoch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxKind {
    Coinbase,
    Payment,
    EscrowLock,
    EscrowRelease,
}

impl TxKind {
    fn tag(self) -> &'static [u8] {
        match self {
            TxKind::Coinbase => b"coinbase",
            TxKind::Payment => b"payment",
            TxKind::EscrowLock => b"escrow-lock",
            TxKind::EscrowRelease => b"escrow-release",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TxOutput {
    pub owner: ParticipantId,
    pub amount: Poplets,
}

/// A submitted transaction. Only payments are accepted from outside; the
/// other kinds are produced internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub kind: TxKind,
    pub inputs: Vec<UtxoId>,
    pub outputs: Vec<TxOutput>,
    pub epoch: u64,
    pub signer: ParticipantId,
    /// Placeholder; only `signer` against input owners is checked.
    pub signature: Vec<u8>,
}

impl Transaction {
    pub fn payment(signer: ParticipantId, inputs: Vec<UtxoId>, outputs: Vec<TxOutput>, epoch: u64) -> Self {
        Transaction { kind: TxKind::Payment, inputs, outputs, epoch, signer, signature: Vec::new() }
    }
}

/// Output about to be created by an internal transaction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NewOutput {
    pub owner: ParticipantId,
    pub amount: Poplets,
    pub lock: Option<PropertyId>,
    pub expiry: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerConfig {
    pub policy: PolicyKind,
    /// Separate lifespan for escrowed value (democratic policy only).
    pub property_lifespan: Option<u64>,
    /// Per-epoch batch for the expiring policy; defaults to `genesis / L`.
    pub batch_size: Option<Poplets>,
    pub genesis: Poplets,
}

impl LedgerConfig {
    pub fn democratic(lifespan: u64) -> Self {
        LedgerConfig {
            policy: PolicyKind::Democratic { lifespan },
            property_lifespan: None,
            batch_size: None,
            genesis: GENESIS_SIZE,
        }
    }

    pub fn expiring(lifespan: u64, batch_size: Option<Poplets>) -> Self {
        LedgerConfig {
            policy: PolicyKind::ExpiringCoins { lifespan },
            property_lifespan: None,
            batch_size,
            genesis: GENESIS_SIZE,
        }
    }

    pub fn with_property_lifespan(mut self, lifespan: u64) -> Self {
        self.property_lifespan = Some(lifespan);
        self
    }
}

/// Metrics for one completed epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochReport {
    pub epoch: u64,
    pub value_space_size: Poplets,
    pub issuance: Poplets,
    pub participants: u64,
    pub per_participant: Poplets,
    pub residual: Poplets,
    pub popcoin_rate: ConversionRate,
    /// Filled in by the simulator, which knows the world population.
    pub adoption_reward_factor: Option<BigRational>,
    pub share_of_space_per_participant: BigRational,
    pub expired: Poplets,
    pub forfeitures: Vec<Forfeiture>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Totals {
    pub spendable: Poplets,
    pub escrowed: Poplets,
}

#[derive(Debug, Clone)]
pub struct Ledger {
    pub(crate) utxos: BTreeMap<UtxoId, Utxo>,
    pub(crate) expired_ids: BTreeSet<UtxoId>,
    pub(crate) by_owner: BTreeMap<ParticipantId, BTreeSet<UtxoId>>,
    pub(crate) value_space: ValueSpace,
    pub(crate) registry: ParticipantRegistry,
    pub(crate) policy: PolicyKind,
    pub(crate) property_lifespan: Option<u64>,
    pub(crate) batch_size: Poplets,
    pub(crate) log: Vec<DistributionEvent>,
    pub(crate) properties: PropertyBook,
    /// Expiring policy: undivided part of each live batch, keyed by expiry.
    pub(crate) batch_remainders: BTreeMap<u64, Poplets>,
    pub(crate) expired_total: Poplets,
    pub(crate) seq: u64,
    pub(crate) exec: Execution,
}

impl PartialEq for Ledger {
    fn eq(&self, other: &Self) -> bool {
        // by_owner is derived and exec is a runtime choice
        self.utxos == other.utxos
            && self.expired_ids == other.expired_ids
            && self.value_space == other.value_space
            && self.registry == other.registry
            && self.policy == other.policy
            && self.property_lifespan == other.property_lifespan
            && self.batch_size == other.batch_size
            && self.log == other.log
            && self.properties == other.properties
            && self.batch_remainders == other.batch_remainders
            && self.expired_total == other.expired_total
            && self.seq == other.seq
    }
}

impl Eq for Ledger {}

impl Ledger {
    pub fn new(config: LedgerConfig) -> Result<Self> {
        let lifespan = config.policy.lifespan();
        let value_space = ValueSpace::with_genesis(config.genesis, lifespan)?;
        let batch_size = match config.policy {
            PolicyKind::Democratic { .. } => {
                if config.batch_size.is_some() {
                    return Err(LedgerError::InvalidConfig("batch size applies to the expiring policy".into()));
                }
                if let Some(lp) = config.property_lifespan {
                    if lp < 2 || config.genesis.0 < u128::from(lp - 1) {
                        return Err(LedgerError::InvalidConfig(format!("property lifespan {lp} is invalid")));
                    }
                }
                Poplets::ZERO
            }
            PolicyKind::ExpiringCoins { lifespan } => {
                if config.property_lifespan.is_some() {
                    return Err(LedgerError::InvalidConfig(
                        "property lifespan applies to the democratic policy".into(),
                    ));
                }
                let batch = config.batch_size.unwrap_or(Poplets(config.genesis.0 / u128::from(lifespan)));
                if batch.is_zero() {
                    return Err(LedgerError::InvalidConfig("batch size must be positive".into()));
                }
                batch
            }
        };
        Ok(Ledger {
            utxos: BTreeMap::new(),
            expired_ids: BTreeSet::new(),
            by_owner: BTreeMap::new(),
            value_space,
            registry: ParticipantRegistry::new(),
            policy: config.policy,
            property_lifespan: config.property_lifespan,
            batch_size,
            log: Vec::new(),
            properties: PropertyBook::default(),
            batch_remainders: BTreeMap::new(),
            expired_total: Poplets::ZERO,
            seq: 0,
            exec: Execution::default(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn set_execution(&mut self, exec: Execution) {
        self.exec = exec;
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn epoch(&self) -> u64 {
        self.value_space.epoch()
    }

    pub fn value_space(&self) -> &ValueSpace {
        &self.value_space
    }

    pub fn registry(&self) -> &ParticipantRegistry {
        &self.registry
    }

    pub fn policy(&self) -> PolicyKind {
        self.policy
    }

    pub fn property_lifespan(&self) -> Option<u64> {
        self.property_lifespan
    }

    pub fn batch_size(&self) -> Poplets {
        self.batch_size
    }

    pub fn distribution_log(&self) -> &[DistributionEvent] {
        &self.log
    }

    pub fn properties(&self) -> &PropertyBook {
        &self.properties
    }

    pub fn utxos(&self) -> impl Iterator<Item = &Utxo> {
        self.utxos.values()
    }

    pub fn utxo(&self, id: &UtxoId) -> Option<&Utxo> {
        self.utxos.get(id)
    }

    pub fn utxo_count(&self) -> usize {
        self.utxos.len()
    }

    pub fn expired_total(&self) -> Poplets {
        self.expired_total
    }

    /// Total Poplets minted by coinbases so far.
    pub fn issued_total(&self) -> Result<Poplets> {
        Poplets::checked_sum(self.log.iter().map(|e| e.issuance))
    }

    pub fn enroll<A: AttestationProvider + ?Sized>(
        &mut self,
        provider: &A,
        credential: &[u8],
    ) -> Result<ParticipantId> {
        let epoch = self.epoch();
        self.registry.enroll(provider, credential, epoch)
    }

    pub fn enroll_batch<A: AttestationProvider + ?Sized>(
        &mut self,
        provider: &A,
        credentials: &[Vec<u8>],
    ) -> Result<Vec<ParticipantId>> {
        let epoch = self.epoch();
        // enroll into a scratch copy so a failure part-way leaves us untouched
        let mut registry = self.registry.clone();
        let ids = registry.enroll_batch(provider, credentials, epoch, self.exec)?;
        self.registry = registry;
        Ok(ids)
    }

    pub fn depart(&mut self, id: &ParticipantId) -> Result<()> {
        let epoch = self.epoch();
        self.registry.depart(id, epoch)
    }

    pub fn conversion_rate(&self) -> Result<ConversionRate> {
        let last = self.log.last().ok_or(LedgerError::NoDistribution)?;
        value_space::conversion_rate(last.issuance, last.participants, last.epoch)
    }

    /// `(spendable, escrowed)` for `owner`; unknown owners hold nothing.
    pub fn balance(&self, owner: &ParticipantId) -> (Poplets, Poplets) {
        let epoch = self.epoch();
        let mut spendable = 0u128;
        let mut escrowed = 0u128;
        if let Some(ids) = self.by_owner.get(owner) {
            for u in ids.iter().filter_map(|id| self.utxos.get(id)) {
                if u.lock.is_some() {
                    escrowed += u.amount.0;
                } else if !policy::is_expired(u.expiry, epoch) {
                    spendable += u.amount.0;
                }
            }
        }
        (Poplets(spendable), Poplets(escrowed))
    }

    pub fn spendable(&self, owner: &ParticipantId) -> Poplets {
        self.balance(owner).0
    }

    /// Ledger-wide spendable and escrowed sums.
    pub fn totals(&self) -> Totals {
        let (s, e) = self.exec.fold_values(
            &self.utxos,
            (0u128, 0u128),
            |(s, e), u| {
                if u.lock.is_some() {
                    (s, e + u.amount.0)
                } else {
                    (s + u.amount.0, e)
                }
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
        Totals { spendable: Poplets(s), escrowed: Poplets(e) }
    }

    /// Per-owner `(spendable, escrowed)` for every owner holding anything.
    pub fn balances(&self) -> BTreeMap<ParticipantId, (Poplets, Poplets)> {
        self.by_owner.keys().map(|o| (*o, self.balance(o))).collect()
    }

    /// Spendable outputs of `owner`, soonest-expiring first.
    pub fn spendable_utxos(&self, owner: &ParticipantId) -> Vec<&Utxo> {
        let epoch = self.epoch();
        let mut v: Vec<&Utxo> = self
            .by_owner
            .get(owner)
            .into_iter()
            .flatten()
            .filter_map(|id| self.utxos.get(id))
            .filter(|u| u.is_spendable_at(epoch))
            .collect();
        v.sort_by_key(|u| (u.expiry.unwrap_or(u64::MAX), u.mint_epoch, u.id));
        v
    }

    /// Picks spendable inputs of `owner` covering `amount`.
    pub fn select_inputs(&self, owner: &ParticipantId, amount: Poplets) -> Result<(Vec<UtxoId>, Poplets)> {
        let mut picked = Vec::new();
        let mut total = 0u128;
        for u in self.spendable_utxos(owner) {
            if total >= amount.0 {
                break;
            }
            picked.push(u.id);
            total += u.amount.0;
        }
        if total < amount.0 {
            return Err(LedgerError::InsufficientFunds);
        }
        Ok((picked, Poplets(total)))
    }

    /// Builds a payment of `amount` from `from` to `to` with change back.
    pub fn build_payment(&self, from: &ParticipantId, to: &ParticipantId, amount: Poplets) -> Result<Transaction> {
        if amount.is_zero() {
            return Err(LedgerError::ZeroAmount);
        }
        let (inputs, total) = self.select_inputs(from, amount)?;
        let mut outputs = vec![TxOutput { owner: *to, amount }];
        let change = total.checked_sub(amount)?;
        if !change.is_zero() {
            outputs.push(TxOutput { owner: *from, amount: change });
        }
        Ok(Transaction::payment(*from, inputs, outputs, self.epoch()))
    }

    fn inherited_expiry(&self, inputs: &[&Utxo]) -> Option<u64> {
        if self.policy.is_expiring() {
            inputs.iter().filter_map(|u| u.expiry).min()
        } else {
            None
        }
    }

    pub fn apply_payment(&mut self, tx: &Transaction) -> Result<()> {
        if tx.kind != TxKind::Payment {
            return Err(LedgerError::CoinbaseRejected);
        }
        if tx.inputs.is_empty() {
            return Err(LedgerError::EmptyTransaction);
        }
        let epoch = self.epoch();
        let mut seen = BTreeSet::new();
        let mut inputs = Vec::with_capacity(tx.inputs.len());
        for id in &tx.inputs {
            if !seen.insert(*id) {
                return Err(LedgerError::DoubleSpend(id.to_string()));
            }
            let u = match self.utxos.get(id) {
                Some(u) => u,
                None if self.expired_ids.contains(id) => return Err(LedgerError::Expired(id.to_string())),
                None => return Err(LedgerError::UnknownInput(id.to_string())),
            };
            if u.owner != tx.signer {
                return Err(LedgerError::NotOwner);
            }
            if u.lock.is_some() {
                return Err(LedgerError::LockedInput(id.to_string()));
            }
            if policy::is_expired(u.expiry, epoch) {
                return Err(LedgerError::Expired(id.to_string()));
            }
            inputs.push(u);
        }
        if tx.outputs.iter().any(|o| o.amount.is_zero()) {
            return Err(LedgerError::ZeroAmount);
        }
        let input_sum = Poplets::checked_sum(inputs.iter().map(|u| u.amount))?;
        let output_sum = Poplets::checked_sum(tx.outputs.iter().map(|o| o.amount))?;
        if input_sum != output_sum {
            return Err(LedgerError::ValueMismatch);
        }
        let expiry = self.inherited_expiry(&inputs);
        let outputs: Vec<NewOutput> =
            tx.outputs.iter().map(|o| NewOutput { owner: o.owner, amount: o.amount, lock: None, expiry }).collect();
        self.commit(TxKind::Payment, &tx.inputs, &outputs);
        Ok(())
    }

    fn next_txid(&mut self, kind: TxKind, inputs: &[UtxoId]) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(kind.tag());
        h.update(self.seq.to_le_bytes());
        h.update(self.epoch().to_le_bytes());
        for id in inputs {
            h.update(id.0);
        }
        self.seq += 1;
        h.finalize().into()
    }

    fn output_id(txid: &[u8; 32], index: usize) -> UtxoId {
        let mut h = Sha256::new();
        h.update(txid);
        h.update((index as u64).to_le_bytes());
        UtxoId(h.finalize().into())
    }

    /// Removes `inputs` and inserts `outputs`. Callers have validated both.
    pub(crate) fn commit(&mut self, kind: TxKind, inputs: &[UtxoId], outputs: &[NewOutput]) -> Vec<UtxoId> {
        let txid = self.next_txid(kind, inputs);
        for id in inputs {
            if let Some(u) = self.utxos.remove(id) {
                self.unindex(&u.owner, id);
            }
        }
        let epoch = self.epoch();
        let ids = self.exec.map(outputs, |i, _| Self::output_id(&txid, i));
        for (o, id) in outputs.iter().zip(&ids) {
            debug_assert!(!o.amount.is_zero());
            self.insert_utxo(Utxo {
                id: *id,
                owner: o.owner,
                amount: o.amount,
                mint_epoch: epoch,
                expiry: o.expiry,
                lock: o.lock,
            });
        }
        ids
    }

    pub(crate) fn insert_utxo(&mut self, u: Utxo) {
        self.by_owner.entry(u.owner).or_default().insert(u.id);
        self.utxos.insert(u.id, u);
    }

    fn unindex(&mut self, owner: &ParticipantId, id: &UtxoId) {
        if let Some(set) = self.by_owner.get_mut(owner) {
            set.remove(id);
            if set.is_empty() {
                self.by_owner.remove(owner);
            }
        }
    }

    fn mint_coinbase(&mut self, outputs: &[CoinbaseOutput], expiry: Option<u64>) {
        if outputs.is_empty() {
            return;
        }
        let new: Vec<NewOutput> =
            outputs.iter().map(|o| NewOutput { owner: o.owner, amount: o.amount, lock: None, expiry }).collect();
        self.commit(TxKind::Coinbase, &[], &new);
    }

    /// Removes every output whose expiry has been reached. Returns the value
    /// that vanished, remainders included.
    fn sweep_expired(&mut self, epoch: u64) -> Result<Poplets> {
        let dead = self.exec.filter_keys(&self.utxos, |u| policy::is_expired(u.expiry, epoch));
        let mut vanished = Poplets::ZERO;
        for id in dead {
            let u = self.utxos.remove(&id).expect("swept id present");
            self.unindex(&u.owner, &id);
            if let Some(pid) = u.lock {
                self.properties.reduce_escrow(&pid, u.amount);
            }
            vanished = vanished.checked_add(u.amount)?;
            self.expired_ids.insert(id);
        }
        let live = self.batch_remainders.split_off(&(epoch + 1));
        for r in std::mem::replace(&mut self.batch_remainders, live).into_values() {
            vanished = vanished.checked_add(r)?;
        }
        self.expired_total = self.expired_total.checked_add(vanished)?;
        Ok(vanished)
    }

    /// Closes the current epoch: runs the policy's coinbase, ages property
    /// tenure and records the distribution.
    pub fn advance_epoch(&mut self) -> Result<EpochReport> {
        if self.registry.active_count() == 0 {
            return Err(LedgerError::NoParticipants);
        }
        let (event, expired) = match self.policy {
            PolicyKind::Democratic { .. } => {
                let escrowed = self.properties.total_escrow()?;
                let dist =
                    policy::democratic_epoch_dual(&self.value_space, &self.registry, escrowed, self.property_lifespan)?;
                self.value_space = dist.value_space;
                self.mint_coinbase(&dist.outputs, None);
                (dist.event, Poplets::ZERO)
            }
            PolicyKind::ExpiringCoins { lifespan } => {
                let (next, event, batch) =
                    policy::expiring_epoch(&self.value_space, lifespan, self.batch_size, &self.registry)?;
                self.value_space = next;
                let expired = self.sweep_expired(batch.mint_epoch)?;
                self.mint_coinbase(&batch.outputs, Some(batch.expiry));
                if !batch.remainder.is_zero() {
                    self.batch_remainders.insert(batch.expiry, batch.remainder);
                }
                let residual = Poplets::checked_sum(self.batch_remainders.values().copied())?;
                self.value_space = self.value_space.clone().with_residual(residual);
                (event, expired)
            }
        };
        let forfeitures = self.tick_tenure()?;
        self.log.push(event.clone());
        let popcoin_rate = value_space::conversion_rate(event.issuance, event.participants, event.epoch)?;
        Ok(EpochReport {
            epoch: event.epoch,
            value_space_size: self.value_space.size(),
            issuance: event.issuance,
            participants: event.participants,
            per_participant: event.per_participant,
            residual: self.value_space.residual(),
            popcoin_rate,
            adoption_reward_factor: None,
            share_of_space_per_participant: self.value_space.share_of(event.per_participant),
            expired,
            forfeitures,
        })
    }

    /// Checks every cross-structure invariant. Returns a description of the
    /// first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let totals = self.totals();
        let residual = self.value_space.residual();
        let issued = self.issued_total().map_err(|e| e.to_string())?;
        let held = totals.spendable.0 + totals.escrowed.0 + residual.0 + self.expired_total.0;
        if held != issued.0 {
            return Err(format!("conservation: held {held} != issued {issued}"));
        }
        if !self.policy.is_expiring() && issued != self.value_space.issued() {
            return Err(format!("issued {issued} != value space growth {}", self.value_space.issued()));
        }
        if self.policy.is_expiring() {
            let r: u128 = self.batch_remainders.values().map(|p| p.0).sum();
            if r != residual.0 {
                return Err("residual does not match live batch remainders".into());
            }
        }
        let epoch = self.epoch();
        for u in self.utxos.values() {
            if u.amount.is_zero() {
                return Err(format!("zero-value output {}", u.id));
            }
            if policy::is_expired(u.expiry, epoch) {
                return Err(format!("expired output {} still live", u.id));
            }
            if !self.by_owner.get(&u.owner).is_some_and(|s| s.contains(&u.id)) {
                return Err(format!("owner index misses {}", u.id));
            }
            if let Some(pid) = u.lock {
                if !self.properties.records.contains_key(&pid) {
                    return Err(format!("output {} locked to unknown property", u.id));
                }
            }
        }
        let indexed: usize = self.by_owner.values().map(|s| s.len()).sum();
        if indexed != self.utxos.len() {
            return Err("owner index has stale entries".into());
        }
        let mut locked: BTreeMap<PropertyId, u128> = BTreeMap::new();
        for u in self.utxos.values() {
            if let Some(pid) = u.lock {
                *locked.entry(pid).or_default() += u.amount.0;
            }
        }
        for (pid, rec) in &self.properties.records {
            let sum = locked.get(pid).copied().unwrap_or(0);
            if sum != rec.escrow.0 {
                return Err(format!("property {pid} escrow {} != locked {sum}", rec.escrow));
            }
            if rec.tenure > epoch.saturating_sub(rec.registered_epoch) {
                return Err(format!("property {pid} tenure exceeds holding time"));
            }
            if let Some(floor) = self.properties.bid_floor(pid) {
                if rec.appraised_value < floor {
                    return Err(format!("property {pid} appraisal below bid floor"));
                }
            }
        }
        Ok(())
    }

    pub fn snapshot(&self) -> Vec<u8> {
        snapshot::encode(self)
    }

    pub fn restore(bytes: &[u8]) -> Result<Ledger> {
        snapshot::decode(bytes)
    }
}
