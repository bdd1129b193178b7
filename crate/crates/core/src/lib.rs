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

//! Deterministic ledger engine for an equal-share, devaluing currency.
//!
//! The value space starts at 2^64 Poplets and expands by `L/(L-1)` every
//! epoch; the new money is split equally among enrolled participants. All
//! balances are integer Poplets and never change when the space expands, so
//! devaluation shows up as a shrinking share of the total rather than a
//! shrinking number.
//!
//! Modules:
//! - [`value_space`]: exact expansion arithmetic and Popcoin face values.
//! - [`membership`]: participant registry behind an attestation interface.
//! - [`policy`]: democratic and expiring-coin epoch transitions.
//! - [`ledger`]: UTXO state machine, epoch advance and canonical snapshots.
//! - [`property`]: escrowed property records, tenure clocks, standing bids.
//! - [`simulator`]: scenario runs and basic-income estimates.
//! - [`cli`]: command-line dispatch.

pub mod cli;
pub mod error;
pub mod ledger;
pub mod membership;
pub mod numfmt;
pub mod par;
pub mod policy;
pub mod property;
pub mod simulator;
pub mod value_space;

pub use error::{LedgerError, Result};
pub use ledger::{EpochReport, Ledger, LedgerConfig, Transaction, TxKind, TxOutput, Utxo, UtxoId};
pub use membership::{AttestationProvider, MockAttestation, ParticipantId, ParticipantRegistry};
pub use par::Execution;
pub use policy::{DistributionEvent, Lifetime, PolicyKind};
pub use property::{PropertyBook, PropertyId, PropertyRecord, StandingBid};
pub use value_space::{ConversionRate, Poplets, ValueSpace, GENESIS_SIZE};
