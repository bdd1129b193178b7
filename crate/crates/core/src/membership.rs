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

//! Enrolled-participant registry.
//!
//! Every distribution divides by the number of active participants at that
//! moment. Proof of personhood itself is delegated to an
//! [`AttestationProvider`]; the registry only sees the resulting ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{LedgerError, Result};
use crate::par::Execution;

/// Opaque 32-byte participant identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParticipantId(pub [u8; 32]);

impl ParticipantId {
    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|_| LedgerError::InvalidCredential)?;
        let arr: [u8; 32] = bytes.try_into().map_err(|_| LedgerError::InvalidCredential)?;
        Ok(ParticipantId(arr))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Display for ParticipantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for ParticipantId {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

/// Maps a personhood credential to a participant id. Must be deterministic.
pub trait AttestationProvider: Sync {
    fn verify(&self, credential: &[u8]) -> Result<ParticipantId>;
}

/// Accepts any non-empty credential; the id is its SHA-256.
#[derive(Debug, Default, Clone, Copy)]
pub struct MockAttestation;

impl AttestationProvider for MockAttestation {
    fn verify(&self, credential: &[u8]) -> Result<ParticipantId> {
        if credential.is_empty() {
            return Err(LedgerError::InvalidCredential);
        }
        Ok(ParticipantId(Sha256::digest(credential).into()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParticipantRegistry {
    active: BTreeSet<ParticipantId>,
    departed: BTreeSet<ParticipantId>,
    enrollment_epoch: BTreeMap<ParticipantId, u64>,
}

impl ParticipantRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enroll<A: AttestationProvider + ?Sized>(
        &mut self,
        provider: &A,
        credential: &[u8],
        epoch: u64,
    ) -> Result<ParticipantId> {
        let id = provider.verify(credential)?;
        self.enroll_id(id, epoch)?;
        Ok(id)
    }

    /// Enrolls an already-attested id.
    pub fn enroll_id(&mut self, id: ParticipantId, epoch: u64) -> Result<()> {
        if self.active.contains(&id) {
            return Err(LedgerError::DuplicateEnrollment);
        }
        if self.departed.contains(&id) {
            return Err(LedgerError::ReenrollmentAfterDeparture);
        }
        self.active.insert(id);
        self.enrollment_epoch.insert(id, epoch);
        Ok(())
    }

    /// Attests a batch of credentials (in parallel when enabled) and enrolls
    /// them in order. Stops at the first failure; ids enrolled before it stay.
    pub fn enroll_batch<A: AttestationProvider + ?Sized>(
        &mut self,
        provider: &A,
        credentials: &[Vec<u8>],
        epoch: u64,
        exec: Execution,
    ) -> Result<Vec<ParticipantId>> {
        let attested = exec.map(credentials, |_, c| provider.verify(c));
        let mut ids = Vec::with_capacity(attested.len());
        for id in attested {
            let id = id?;
            self.enroll_id(id, epoch)?;
            ids.push(id);
        }
        Ok(ids)
    }

    /// Stops future distributions to `id`. Existing holdings are untouched.
    pub fn depart(&mut self, id: &ParticipantId, _epoch: u64) -> Result<()> {
        if !self.active.remove(id) {
            return Err(LedgerError::UnknownParticipant);
        }
        self.departed.insert(*id);
        Ok(())
    }

    pub fn active_count(&self) -> u64 {
        self.active.len() as u64
    }

    pub fn is_active(&self, id: &ParticipantId) -> bool {
        self.active.contains(id)
    }

    pub fn is_departed(&self, id: &ParticipantId) -> bool {
        self.departed.contains(id)
    }

    pub fn enrollment_epoch(&self, id: &ParticipantId) -> Option<u64> {
        self.enrollment_epoch.get(id).copied()
    }

    /// Active ids in ascending order.
    pub fn active(&self) -> impl Iterator<Item = &ParticipantId> {
        self.active.iter()
    }

    pub fn departed(&self) -> impl Iterator<Item = &ParticipantId> {
        self.departed.iter()
    }

    /// Rebuilds a registry from persisted lists.
    pub fn from_parts(
        active: impl IntoIterator<Item = (ParticipantId, u64)>,
        departed: impl IntoIterator<Item = (ParticipantId, u64)>,
    ) -> Result<Self> {
        let mut reg = ParticipantRegistry::new();
        for (id, epoch) in active {
            if !reg.active.insert(id) {
                return Err(LedgerError::MalformedSnapshot(format!("duplicate participant {id}")));
            }
            reg.enrollment_epoch.insert(id, epoch);
        }
        for (id, epoch) in departed {
            if reg.active.contains(&id) || !reg.departed.insert(id) {
                return Err(LedgerError::MalformedSnapshot(format!("participant {id} listed twice")));
            }
            reg.enrollment_epoch.insert(id, epoch);
        }
        Ok(reg)
    }
}
