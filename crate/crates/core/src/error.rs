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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LedgerError>;

/// Every domain failure the engine can report.
///
/// [`LedgerError::code`] gives the stable identifier printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("no enrolled participants")]
    NoParticipants,
    #[error("no distribution has occurred")]
    NoDistribution,

    #[error("participant already enrolled")]
    DuplicateEnrollment,
    #[error("credential rejected by attestation provider")]
    InvalidCredential,
    #[error("departed participant cannot re-enroll")]
    ReenrollmentAfterDeparture,
    #[error("unknown participant")]
    UnknownParticipant,

    #[error("unknown input {0}")]
    UnknownInput(String),
    #[error("input {0} spent twice")]
    DoubleSpend(String),
    #[error("input {0} has expired")]
    Expired(String),
    #[error("inputs and outputs do not balance")]
    ValueMismatch,
    #[error("signer does not own the input or property")]
    NotOwner,
    #[error("input {0} is escrow-locked")]
    LockedInput(String),
    #[error("zero amount")]
    ZeroAmount,
    #[error("transaction has no inputs")]
    EmptyTransaction,
    #[error("coinbase transactions are only created by the policy engine")]
    CoinbaseRejected,

    #[error("malformed snapshot: {0}")]
    MalformedSnapshot(String),
    #[error("unsupported snapshot version {0}")]
    VersionMismatch(String),

    #[error("insufficient spendable funds")]
    InsufficientFunds,
    #[error("price must be positive")]
    ZeroPrice,
    #[error("unknown property")]
    UnknownProperty,
    #[error("price is below the standing second-price bid")]
    BidFloorViolated,
    #[error("withdrawal would leave escrow below the appraised value")]
    WithdrawBelowAppraisal,
    #[error("owner cannot bid on own property")]
    OwnerCannotBid,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("population must be positive")]
    ZeroPopulation,
    #[error("rate must lie strictly between 0 and 1")]
    InvalidRate,
    #[error("invalid number: {0}")]
    InvalidNumber(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl LedgerError {
    pub fn code(&self) -> &'static str {
        use LedgerError::*;
        match self {
            InvalidConfig(_) => "InvalidConfig",
            Overflow => "Overflow",
            NoParticipants => "NoParticipants",
            NoDistribution => "NoDistribution",
            DuplicateEnrollment => "DuplicateEnrollment",
            InvalidCredential => "InvalidCredential",
            ReenrollmentAfterDeparture => "ReenrollmentAfterDeparture",
            UnknownParticipant => "UnknownParticipant",
            UnknownInput(_) => "UnknownInput",
            DoubleSpend(_) => "DoubleSpend",
            Expired(_) => "Expired",
            ValueMismatch => "ValueMismatch",
            NotOwner => "NotOwner",
            LockedInput(_) => "LockedInput",
            ZeroAmount => "ZeroAmount",
            EmptyTransaction => "EmptyTransaction",
            CoinbaseRejected => "CoinbaseRejected",
            MalformedSnapshot(_) => "MalformedSnapshot",
            VersionMismatch(_) => "VersionMismatch",
            InsufficientFunds => "InsufficientFunds",
            ZeroPrice => "ZeroPrice",
            UnknownProperty => "UnknownProperty",
            BidFloorViolated => "BidFloorViolated",
            WithdrawBelowAppraisal => "WithdrawBelowAppraisal",
            OwnerCannotBid => "OwnerCannotBid",
            InvalidScenario(_) => "InvalidScenario",
            ZeroPopulation => "ZeroPopulation",
            InvalidRate => "InvalidRate",
            InvalidNumber(_) => "InvalidNumber",
            Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for LedgerError {
    fn from(e: std::io::Error) -> Self {
        LedgerError::Io(e.to_string())
    }
}
