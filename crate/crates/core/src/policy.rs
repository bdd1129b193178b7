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

//! Epoch transition rules.
//!
//! [`PolicyKind::Democratic`] expands the value space and hands the growth
//! out in equal shares. [`PolicyKind::ExpiringCoins`] keeps the space fixed
//! and instead mints a fresh batch each epoch that dies `L` epochs later,
//! leaving a rolling window of `L` live batches.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{LedgerError, Result};
use crate::membership::{ParticipantId, ParticipantRegistry};
use crate::value_space::{Poplets, ValueSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Democratic { lifespan: u64 },
    ExpiringCoins { lifespan: u64 },
}

impl PolicyKind {
    pub fn new(name: &str, lifespan: u64) -> Result<Self> {
        if lifespan < 2 {
            return Err(LedgerError::InvalidConfig(format!("lifespan {lifespan} must be at least 2")));
        }
        match name {
            "democratic" => Ok(PolicyKind::Democratic { lifespan }),
            "expiring" => Ok(PolicyKind::ExpiringCoins { lifespan }),
            other => Err(LedgerError::InvalidConfig(format!("unknown policy {other:?}"))),
        }
    }

    pub fn lifespan(&self) -> u64 {
        match *self {
            PolicyKind::Democratic { lifespan } | PolicyKind::ExpiringCoins { lifespan } => lifespan,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Democratic { .. } => "democratic",
            PolicyKind::ExpiringCoins { .. } => "expiring",
        }
    }

    pub fn is_expiring(&self) -> bool {
        matches!(self, PolicyKind::ExpiringCoins { .. })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(L={})", self.name(), self.lifespan())
    }
}

/// Record of one epoch's coinbase.
///
/// `per_participant * participants + residual_carried` equals `issuance`
/// plus the residual carried into this epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionEvent {
    pub epoch: u64,
    pub issuance: Poplets,
    pub per_participant: Poplets,
    pub participants: u64,
    pub residual_carried: Poplets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoinbaseOutput {
    pub owner: ParticipantId,
    pub amount: Poplets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub value_space: ValueSpace,
    pub event: DistributionEvent,
    pub outputs: Vec<CoinbaseOutput>,
}

/// `(floor(pool / n), pool mod n)`.
pub fn split_equally(pool: Poplets, n: u64) -> Result<(Poplets, Poplets)> {
    if n == 0 {
        return Err(LedgerError::NoParticipants);
    }
    let n = u128::from(n);
    Ok((Poplets(pool.0 / n), Poplets(pool.0 % n)))
}

fn equal_outputs(registry: &ParticipantRegistry, per: Poplets) -> Vec<CoinbaseOutput> {
    if per.is_zero() {
        return Vec::new();
    }
    registry.active().map(|&owner| CoinbaseOutput { owner, amount: per }).collect()
}

pub fn democratic_epoch(vs: &ValueSpace, registry: &ParticipantRegistry) -> Result<Distribution> {
    democratic_epoch_dual(vs, registry, Poplets::ZERO, None)
}

/// Democratic step where `escrowed` Poplets devalue at `property_lifespan`
/// (when set) instead of the circulating lifespan.
pub fn democratic_epoch_dual(
    vs: &ValueSpace,
    registry: &ParticipantRegistry,
    escrowed: Poplets,
    property_lifespan: Option<u64>,
) -> Result<Distribution> {
    let n = registry.active_count();
    if n == 0 {
        return Err(LedgerError::NoParticipants);
    }
    let (expanded, issuance) = match property_lifespan {
        Some(lp) => vs.expand_epoch_dual(escrowed, lp)?,
        None => vs.expand_epoch()?,
    };
    let pool = issuance.checked_add(vs.residual())?;
    let (per, residual) = split_equally(pool, n)?;
    let event = DistributionEvent {
        epoch: expanded.epoch(),
        issuance,
        per_participant: per,
        participants: n,
        residual_carried: residual,
    };
    Ok(Distribution { value_space: expanded.with_residual(residual), event, outputs: equal_outputs(registry, per) })
}

/// One freshly minted expiring batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpiringBatch {
    pub mint_epoch: u64,
    pub expiry: u64,
    pub outputs: Vec<CoinbaseOutput>,
    /// Undivided part of the batch; it expires together with the batch.
    pub remainder: Poplets,
}

/// Mints the batch for the next epoch. The value space does not grow; the
/// caller removes batches whose expiry has been reached.
pub fn expiring_epoch(
    vs: &ValueSpace,
    lifespan: u64,
    batch_size: Poplets,
    registry: &ParticipantRegistry,
) -> Result<(ValueSpace, DistributionEvent, ExpiringBatch)> {
    let n = registry.active_count();
    if n == 0 {
        return Err(LedgerError::NoParticipants);
    }
    if batch_size.is_zero() {
        return Err(LedgerError::InvalidConfig("batch size must be positive".into()));
    }
    let next = vs.advance_fixed()?;
    let epoch = next.epoch();
    let (per, remainder) = split_equally(batch_size, n)?;
    let event = DistributionEvent {
        epoch,
        issuance: batch_size,
        per_participant: per,
        participants: n,
        residual_carried: remainder,
    };
    let batch = ExpiringBatch {
        mint_epoch: epoch,
        expiry: epoch.checked_add(lifespan).ok_or(LedgerError::Overflow)?,
        outputs: equal_outputs(registry, per),
        remainder,
    };
    Ok((next, event, batch))
}

/// A coin with expiry `e` is spendable in epochs `< e`.
pub fn is_expired(expiry: Option<u64>, epoch: u64) -> bool {
    matches!(expiry, Some(e) if epoch >= e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lifetime {
    Unlimited,
    Epochs(u64),
}

pub fn remaining_lifetime(expiry: Option<u64>, epoch: u64) -> Lifetime {
    match expiry {
        None => Lifetime::Unlimited,
        Some(e) => Lifetime::Epochs(e.saturating_sub(epoch)),
    }
}

/// World population over current users: how far adoption could still grow.
pub fn adoption_reward_factor(world_population: u64, users: u64) -> Result<BigRational> {
    if users == 0 {
        return Err(LedgerError::NoParticipants);
    }
    Ok(BigRational::new(BigInt::from(world_population), BigInt::from(users)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::MockAttestation;

    fn registry(n: u64) -> ParticipantRegistry {
        let mut reg = ParticipantRegistry::new();
        for i in 0..n {
            reg.enroll(&MockAttestation, format!("p{i}").as_bytes(), 0).unwrap();
        }
        reg
    }

    #[test]
    fn single_participant_gets_whole_issuance() {
        let vs = ValueSpace::new(50).unwrap();
        let d = democratic_epoch(&vs, &registry(1)).unwrap();
        assert_eq!(d.outputs.len(), 1);
        assert_eq!(d.outputs[0].amount, Poplets(376464164769582686));
        assert_eq!(d.event.residual_carried, Poplets::ZERO);
    }

    #[test]
    fn forty_nine_way_split() {
        let vs = ValueSpace::new(50).unwrap();
        let d = democratic_epoch(&vs, &registry(49)).unwrap();
        // long division: 376464164769582686 = 49 * 7682942138154748 + 34
        assert_eq!(d.event.per_participant, Poplets(7682942138154748));
        assert_eq!(d.event.residual_carried, Poplets(34));
        assert_eq!(d.value_space.residual(), Poplets(34));
        assert!(d.outputs.iter().all(|o| o.amount == Poplets(7682942138154748)));
    }

    #[test]
    fn residual_is_carried_into_next_pool() {
        let reg = registry(49);
        let d1 = democratic_epoch(&ValueSpace::new(50).unwrap(), &reg).unwrap();
        let d2 = democratic_epoch(&d1.value_space, &reg).unwrap();
        let pool = d2.event.issuance.0 + 34;
        assert_eq!(d2.event.per_participant.0, pool / 49);
        assert_eq!(d2.event.residual_carried.0, pool % 49);
    }

    #[test]
    fn no_participants() {
        let vs = ValueSpace::new(50).unwrap();
        assert_eq!(democratic_epoch(&vs, &registry(0)), Err(LedgerError::NoParticipants));
        assert!(matches!(expiring_epoch(&vs, 3, Poplets(300), &registry(0)), Err(LedgerError::NoParticipants)));
    }

    #[test]
    fn departure_shrinks_denominator() {
        let mut reg = registry(10);
        let ids: Vec<_> = reg.active().copied().take(3).collect();
        for id in &ids {
            reg.depart(id, 0).unwrap();
        }
        let vs = ValueSpace::new(50).unwrap();
        let d = democratic_epoch(&vs, &reg).unwrap();
        let issuance = 376464164769582686u128;
        assert_eq!(d.event.participants, 7);
        assert_eq!(d.event.per_participant.0, issuance / 7);
        assert!(d.outputs.iter().all(|o| !ids.contains(&o.owner)));
    }

    #[test]
    fn expiring_batch_tags_expiry() {
        let vs = ValueSpace::new(3).unwrap();
        let (next, ev, batch) = expiring_epoch(&vs, 3, Poplets(300), &registry(3)).unwrap();
        assert_eq!(next.size(), vs.size());
        assert_eq!(ev.epoch, 1);
        assert_eq!(batch.expiry, 4);
        assert_eq!(batch.outputs.len(), 3);
        assert_eq!(batch.remainder, Poplets::ZERO);
        assert!(!is_expired(Some(4), 3));
        assert!(is_expired(Some(4), 4));
        assert!(!is_expired(None, u64::MAX));
    }

    #[test]
    fn lifetimes() {
        assert_eq!(remaining_lifetime(None, 10), Lifetime::Unlimited);
        assert_eq!(remaining_lifetime(Some(52), 10), Lifetime::Epochs(42));
        assert_eq!(remaining_lifetime(Some(52), 52), Lifetime::Epochs(0));
        assert_eq!(remaining_lifetime(Some(52), 60), Lifetime::Epochs(0));
    }

    #[test]
    fn reward_factor() {
        let one = adoption_reward_factor(7_630_000_000, 7_630_000_000).unwrap();
        assert_eq!(one, BigRational::from_integer(1.into()));
        let r = adoption_reward_factor(7_630_000_000, 1_000_000).unwrap();
        assert_eq!(r, BigRational::from_integer(7630.into()));
        assert_eq!(adoption_reward_factor(10, 0), Err(LedgerError::NoParticipants));
    }

    #[test]
    fn doubling_population_ratio() {
        // Same registry size N then 2N on consecutive epochs.
        let n = 1000;
        let small = registry(n);
        let big = registry(2 * n);
        let d1 = democratic_epoch(&ValueSpace::new(50).unwrap(), &small).unwrap();
        let d2 = democratic_epoch(&d1.value_space, &big).unwrap();
        let ratio = d1.event.per_participant.0 as f64 / d2.event.per_participant.0 as f64;
        assert!((ratio - 1.96).abs() < 1e-9, "{ratio}");
    }

    #[test]
    fn policy_names() {
        assert_eq!(PolicyKind::new("democratic", 50).unwrap(), PolicyKind::Democratic { lifespan: 50 });
        assert_eq!(PolicyKind::new("expiring", 3).unwrap().lifespan(), 3);
        assert!(PolicyKind::new("bitcoin", 50).is_err());
        assert!(PolicyKind::new("democratic", 1).is_err());
    }
}
