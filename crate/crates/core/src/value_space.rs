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

//! Exact arithmetic for the expanding monetary value space.
//!
//! The space starts at [`GENESIS_SIZE`] Poplets. Each epoch it grows by a
//! factor `L/(L-1)` and the growth is the epoch's issuance. The exact
//! rational target is carried alongside the integer size so that rounding
//! never compounds: `size` is always `floor(target)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{LedgerError, Result};
use crate::numfmt;

/// Indivisible unit of ledger value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poplets(pub u128);

pub const GENESIS_SIZE: Poplets = Poplets(1u128 << 64);

/// Average days per year as the exact fraction 1461/4.
const DAYS_PER_YEAR_NUM: u128 = 1461;
const DAYS_PER_YEAR_DEN: u128 = 4;

impl Poplets {
    pub const ZERO: Poplets = Poplets(0);

    pub fn get(self) -> u128 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, rhs: Poplets) -> Result<Poplets> {
        self.0.checked_add(rhs.0).map(Poplets).ok_or(LedgerError::Overflow)
    }

    pub fn checked_sub(self, rhs: Poplets) -> Result<Poplets> {
        self.0.checked_sub(rhs.0).map(Poplets).ok_or(LedgerError::Overflow)
    }

    pub fn checked_mul(self, n: u128) -> Result<Poplets> {
        self.0.checked_mul(n).map(Poplets).ok_or(LedgerError::Overflow)
    }

    pub fn checked_sum<I: IntoIterator<Item = Poplets>>(iter: I) -> Result<Poplets> {
        iter.into_iter().try_fold(Poplets::ZERO, |acc, p| acc.checked_add(p))
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.0))
    }
}

impl fmt::Display for Poplets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Poplets {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self> {
        numfmt::parse_u128(s).map(Poplets)
    }
}

impl From<u128> for Poplets {
    fn from(v: u128) -> Self {
        Poplets(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSpace {
    size: Poplets,
    epoch: u64,
    lifespan: u64,
    residual: Poplets,
    genesis: Poplets,
    target: BigRational,
}

pub fn new_value_space(lifespan: u64) -> Result<ValueSpace> {
    ValueSpace::new(lifespan)
}

impl ValueSpace {
    pub fn new(lifespan: u64) -> Result<ValueSpace> {
        Self::with_genesis(GENESIS_SIZE, lifespan)
    }

    /// A space of arbitrary starting size. The size must be at least `L-1`
    /// so that every expansion issues at least one Poplet.
    pub fn with_genesis(size: Poplets, lifespan: u64) -> Result<ValueSpace> {
        check_lifespan(lifespan)?;
        if size.0 < u128::from(lifespan - 1) || size.is_zero() {
            return Err(LedgerError::InvalidConfig(format!("genesis size {size} is smaller than lifespan - 1")));
        }
        Ok(ValueSpace { size, epoch: 0, lifespan, residual: Poplets::ZERO, genesis: size, target: size.to_rational() })
    }

    /// Rebuilds a space from persisted parts, checking their consistency.
    pub fn from_parts(
        size: Poplets,
        epoch: u64,
        lifespan: u64,
        residual: Poplets,
        genesis: Poplets,
        target: BigRational,
    ) -> Result<ValueSpace> {
        check_lifespan(lifespan)?;
        if target.floor().to_integer() != BigInt::from(size.0) {
            return Err(LedgerError::MalformedSnapshot("size is not floor(target)".into()));
        }
        if genesis > size {
            return Err(LedgerError::MalformedSnapshot("genesis exceeds size".into()));
        }
        Ok(ValueSpace { size, epoch, lifespan, residual, genesis, target })
    }

    pub fn size(&self) -> Poplets {
        self.size
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn lifespan(&self) -> u64 {
        self.lifespan
    }

    pub fn residual(&self) -> Poplets {
        self.residual
    }

    pub fn genesis(&self) -> Poplets {
        self.genesis
    }

    /// Exact (unrounded) size the integer `size` tracks.
    pub fn target(&self) -> &BigRational {
        &self.target
    }

    /// Total Poplets created since genesis.
    pub fn issued(&self) -> Poplets {
        Poplets(self.size.0 - self.genesis.0)
    }

    pub fn with_residual(mut self, residual: Poplets) -> ValueSpace {
        self.residual = residual;
        self
    }

    /// Fraction of the whole value space held by `amount`.
    pub fn share_of(&self, amount: Poplets) -> BigRational {
        BigRational::new(BigInt::from(amount.0), BigInt::from(self.size.0))
    }

    /// One epoch of expansion by `L/(L-1)`. Returns the new space and the
    /// Poplets issued, which equal the growth in size.
    pub fn expand_epoch(&self) -> Result<(ValueSpace, Poplets)> {
        let growth = &self.target / BigInt::from(self.lifespan - 1);
        self.grow(growth)
    }

    /// Expansion with escrowed value devaluing at its own lifespan: the
    /// escrowed part grows by `1/(Lp-1)` and the remainder by `1/(L-1)`.
    pub fn expand_epoch_dual(&self, escrowed: Poplets, property_lifespan: u64) -> Result<(ValueSpace, Poplets)> {
        check_lifespan(property_lifespan)?;
        if escrowed > self.size {
            return Err(LedgerError::InvalidConfig("escrow exceeds value space".into()));
        }
        let escrowed = escrowed.to_rational();
        let circulating = &self.target - &escrowed;
        let growth = circulating / BigInt::from(self.lifespan - 1) + escrowed / BigInt::from(property_lifespan - 1);
        self.grow(growth)
    }

    fn grow(&self, growth: BigRational) -> Result<(ValueSpace, Poplets)> {
        let target = &self.target + growth;
        let new_size = target.floor().to_integer().to_u128().ok_or(LedgerError::Overflow)?;
        let issuance = Poplets(new_size - self.size.0);
        let next = ValueSpace {
            size: Poplets(new_size),
            epoch: self.epoch.checked_add(1).ok_or(LedgerError::Overflow)?,
            lifespan: self.lifespan,
            residual: self.residual,
            genesis: self.genesis,
            target,
        };
        Ok((next, issuance))
    }

    /// Epoch step without expansion (the expiring-coin policy keeps a fixed
    /// space).
    pub fn advance_fixed(&self) -> Result<ValueSpace> {
        let mut next = self.clone();
        next.epoch = self.epoch.checked_add(1).ok_or(LedgerError::Overflow)?;
        Ok(next)
    }
}

fn check_lifespan(lifespan: u64) -> Result<()> {
    if lifespan < 2 {
        return Err(LedgerError::InvalidConfig(format!("lifespan {lifespan} must be at least 2")));
    }
    Ok(())
}

/// Poplets per Popcoin: one day of one person's share of the latest
/// distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionRate {
    poplets_per_popcoin: BigRational,
    pub epoch: u64,
    pub participants: u64,
}

/// `issuance / participants / 365.25`, held exactly as
/// `(issuance * 4) / (participants * 1461)`.
pub fn conversion_rate(last_issuance: Poplets, participants: u64, epoch: u64) -> Result<ConversionRate> {
    if participants == 0 {
        return Err(LedgerError::NoParticipants);
    }
    if last_issuance.is_zero() {
        return Err(LedgerError::NoDistribution);
    }
    let numer = BigInt::from(last_issuance.0) * BigInt::from(DAYS_PER_YEAR_DEN);
    let denom = BigInt::from(participants) * BigInt::from(DAYS_PER_YEAR_NUM);
    Ok(ConversionRate { poplets_per_popcoin: BigRational::new(numer, denom), epoch, participants })
}

impl ConversionRate {
    pub fn poplets_per_popcoin(&self) -> &BigRational {
        &self.poplets_per_popcoin
    }

    pub fn to_popcoin(&self, amount: Poplets) -> BigRational {
        amount.to_rational() / &self.poplets_per_popcoin
    }

    pub fn from_popcoin(&self, popcoin: &BigRational) -> BigRational {
        popcoin * &self.poplets_per_popcoin
    }
}

/// Face value of `amount`, rounded half-even to `decimals` places.
pub fn to_popcoin_display(amount: Poplets, rate: &ConversionRate, decimals: u32) -> String {
    numfmt::to_fixed(&rate.to_popcoin(amount), decimals)
}

impl fmt::Display for ConversionRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.poplets_per_popcoin;
        if r.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", numfmt::ratio_string(r))
    }
}
