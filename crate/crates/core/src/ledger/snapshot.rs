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

//! Canonical text snapshot.
//!
//! ```text
//! popledger-v1
//! [valuespace]
//! key=value              (keys sorted)
//! [registry]
//! active <id> enrolled=<epoch>
//! departed <id> enrolled=<epoch>
//! [utxos]
//! expired <id>
//! live <id> amount=.. expiry=.. lock=.. mint=.. owner=..
//! [properties]
//! bid <property> <rank> amount=.. bidder=.. epoch=..
//! record <property> appraised=.. escrow=.. owner=.. registered=.. tenure=..
//! [log]
//! event <epoch> issuance=.. participants=.. per_participant=.. residual_carried=..
//! checksum=<sha256 of everything above>
//! ```
//!
//! Integers are decimal, ids are lowercase hex, `-` marks an absent value.
//! Entries appear in id order, events in epoch order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Ledger, Utxo, UtxoId};
use crate::error::{LedgerError, Result};
use crate::membership::{ParticipantId, ParticipantRegistry};
use crate::numfmt;
use crate::par::Execution;
use crate::policy::{DistributionEvent, PolicyKind};
use crate::property::{sort_bids, PropertyBook, PropertyId, PropertyRecord, StandingBid};
use crate::value_space::{Poplets, ValueSpace};

pub const SNAPSHOT_VERSION: &str = "popledger-v1";

const SECTIONS: [&str; 5] = ["valuespace", "registry", "utxos", "properties", "log"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub(super) fn encode(l: &Ledger) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(SNAPSHOT_VERSION);
    out.push('\n');

    let vs = &l.value_space;
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    kv.insert("batch_size".into(), l.batch_size.to_string());
    kv.insert("epoch".into(), vs.epoch().to_string());
    kv.insert("expired_total".into(), l.expired_total.to_string());
    kv.insert("genesis".into(), vs.genesis().to_string());
    kv.insert("lifespan".into(), vs.lifespan().to_string());
    kv.insert("policy".into(), l.policy.name().into());
    kv.insert("property_lifespan".into(), opt(l.property_lifespan));
    kv.insert("residual".into(), vs.residual().to_string());
    kv.insert("seq".into(), l.seq.to_string());
    kv.insert("size".into(), vs.size().to_string());
    kv.insert("target".into(), numfmt::ratio_string(vs.target()));
    for (expiry, r) in &l.batch_remainders {
        kv.insert(format!("remainder.{expiry}"), r.to_string());
    }
    out.push_str("[valuespace]\n");
    for (k, v) in &kv {
        let _ = writeln!(out, "{k}={v}");
    }

    out.push_str("[registry]\n");
    let reg = &l.registry;
    for id in reg.active() {
        let _ = writeln!(out, "active {id} enrolled={}", opt(reg.enrollment_epoch(id)));
    }
    for id in reg.departed() {
        let _ = writeln!(out, "departed {id} enrolled={}", opt(reg.enrollment_epoch(id)));
    }

    out.push_str("[utxos]\n");
    for id in &l.expired_ids {
        let _ = writeln!(out, "expired {id}");
    }
    for u in l.utxos.values() {
        let _ = writeln!(
            out,
            "live {} amount={} expiry={} lock={} mint={} owner={}",
            u.id,
            u.amount,
            opt(u.expiry),
            opt(u.lock),
            u.mint_epoch,
            u.owner
        );
    }

    out.push_str("[properties]\n");
    for (pid, bids) in &l.properties.bids {
        for (rank, b) in bids.iter().enumerate() {
            let _ = writeln!(out, "bid {pid} {rank} amount={} bidder={} epoch={}", b.amount, b.bidder, b.epoch);
        }
    }
    for r in l.properties.records.values() {
        let _ = writeln!(
            out,
            "record {} appraised={} escrow={} owner={} registered={} tenure={}",
            r.property_id, r.appraised_value, r.escrow, r.owner, r.registered_epoch, r.tenure
        );
    }

    out.push_str("[log]\n");
    for e in &l.log {
        let _ = writeln!(
            out,
            "event {} issuance={} participants={} per_participant={} residual_carried={}",
            e.epoch, e.issuance, e.participants, e.per_participant, e.residual_carried
        );
    }

    let digest = hex::encode(Sha256::digest(out.as_bytes()));
    let _ = writeln!(out, "checksum={digest}");
    out.into_bytes()
}

fn malformed(msg: impl Into<String>) -> LedgerError {
    LedgerError::MalformedSnapshot(msg.into())
}

/// `key=value` fields after the positional tokens of an entry line.
struct Fields<'a> {
    line: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(line: &'a str, tokens: &[&'a str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in tokens {
            let (k, v) = t.split_once('=').ok_or_else(|| malformed(format!("bad field in {line:?}")))?;
            if map.insert(k, v).is_some() {
                return Err(malformed(format!("duplicate field {k} in {line:?}")));
            }
        }
        Ok(Fields { line, map })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.map.get(key).copied().ok_or_else(|| malformed(format!("missing {key} in {:?}", self.line)))
    }

    fn u64(&self, key: &str) -> Result<u64> {
        self.raw(key)?.parse().map_err(|_| malformed(format!("bad {key} in {:?}", self.line)))
    }

    fn poplets(&self, key: &str) -> Result<Poplets> {
        self.raw(key)?.parse::<u128>().map(Poplets).map_err(|_| malformed(format!("bad {key} in {:?}", self.line)))
    }

    fn opt_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.raw(key)? {
            "-" => Ok(None),
            _ => self.u64(key).map(Some),
        }
    }

    fn participant(&self, key: &str) -> Result<ParticipantId> {
        parse_participant(self.raw(key)?)
    }
}

fn parse_participant(s: &str) -> Result<ParticipantId> {
    ParticipantId::from_hex(s).map_err(|_| malformed(format!("bad participant id {s:?}")))
}

fn parse_property(s: &str) -> Result<PropertyId> {
    PropertyId::from_hex(s).map_err(|_| malformed(format!("bad property id {s:?}")))
}

fn parse_utxo(s: &str) -> Result<UtxoId> {
    UtxoId::from_hex(s).map_err(|_| malformed(format!("bad utxo id {s:?}")))
}

pub(super) fn decode(bytes: &[u8]) -> Result<Ledger> {
    let text = std::str::from_utf8(bytes).map_err(|_| malformed("not utf-8"))?;
    let header = text.lines().next().ok_or_else(|| malformed("empty"))?;
    if header != SNAPSHOT_VERSION {
        if header.starts_with("popledger-v") {
            return Err(LedgerError::VersionMismatch(header.to_string()));
        }
        return Err(malformed("missing header"));
    }
    if !text.ends_with('\n') {
        return Err(malformed("truncated"));
    }
    let body_end = text[..text.len() - 1].rfind('\n').ok_or_else(|| malformed("truncated"))? + 1;
    let (body, trailer) = text.split_at(body_end);
    let digest =
        trailer.trim_end_matches('\n').strip_prefix("checksum=").ok_or_else(|| malformed("missing checksum"))?;
    if hex::encode(Sha256::digest(body.as_bytes())) != digest {
        return Err(malformed("checksum mismatch"));
    }

    let mut sections: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut current: Option<&str> = None;
    for line in body.lines().skip(1) {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if sections.insert(name, Vec::new()).is_some() {
                return Err(malformed(format!("duplicate section {name}")));
            }
            order.push(name);
            current = Some(name);
        } else {
            let name = current.ok_or_else(|| malformed("content before first section"))?;
            sections.get_mut(name).expect("section exists").push(line);
        }
    }
    if order != SECTIONS {
        return Err(malformed(format!("sections {order:?}, expected {SECTIONS:?}")));
    }

    // [valuespace]
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for line in &sections["valuespace"] {
        let (k, v) = line.split_once('=').ok_or_else(|| malformed(format!("bad line {line:?}")))?;
        if kv.insert(k, v).is_some() {
            return Err(malformed(format!("duplicate key {k}")));
        }
    }
    let kvf = Fields { line: "[valuespace]", map: kv.clone() };
    let lifespan = kvf.u64("lifespan")?;
    let policy = PolicyKind::new(kvf.raw("policy")?, lifespan).map_err(|e| malformed(e.to_string()))?;
    let mut batch_remainders = BTreeMap::new();
    for (k, v) in &kv {
        if let Some(expiry) = k.strip_prefix("remainder.") {
            let expiry: u64 = expiry.parse().map_err(|_| malformed(format!("bad key {k}")))?;
            let r: u128 = v.parse().map_err(|_| malformed(format!("bad value for {k}")))?;
            batch_remainders.insert(expiry, Poplets(r));
        }
    }
    let target = numfmt::parse_ratio(kvf.raw("target")?).map_err(|_| malformed("bad target"))?;
    let value_space = ValueSpace::from_parts(
        kvf.poplets("size")?,
        kvf.u64("epoch")?,
        lifespan,
        kvf.poplets("residual")?,
        kvf.poplets("genesis")?,
        target,
    )?;

    // [registry]
    let mut active = Vec::new();
    let mut departed = Vec::new();
    for line in &sections["registry"] {
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != 3 {
            return Err(malformed(format!("bad registry line {line:?}")));
        }
        let id = parse_participant(tokens[1])?;
        let f = Fields::parse(line, &tokens[2..])?;
        let epoch = f.opt_u64("enrolled")?.ok_or_else(|| malformed("missing enrollment epoch"))?;
        match tokens[0] {
            "active" => active.push((id, epoch)),
            "departed" => departed.push((id, epoch)),
            _ => return Err(malformed(format!("bad registry line {line:?}"))),
        }
    }
    let registry = ParticipantRegistry::from_parts(active, departed)?;

    // [utxos]
    let mut utxos = BTreeMap::new();
    let mut expired_ids = BTreeSet::new();
    for line in &sections["utxos"] {
        let tokens: Vec<&str> = line.split(' ').collect();
        match tokens.first().copied() {
            Some("expired") if tokens.len() == 2 => {
                expired_ids.insert(parse_utxo(tokens[1])?);
            }
            Some("live") if tokens.len() == 7 => {
                let id = parse_utxo(tokens[1])?;
                let f = Fields::parse(line, &tokens[2..])?;
                let lock = match f.raw("lock")? {
                    "-" => None,
                    s => Some(parse_property(s)?),
                };
                let u = Utxo {
                    id,
                    owner: f.participant("owner")?,
                    amount: f.poplets("amount")?,
                    mint_epoch: f.u64("mint")?,
                    expiry: f.opt_u64("expiry")?,
                    lock,
                };
                if utxos.insert(id, u).is_some() {
                    return Err(malformed(format!("duplicate utxo {id}")));
                }
            }
            _ => return Err(malformed(format!("bad utxo line {line:?}"))),
        }
    }

    // [properties]
    let mut book = PropertyBook::default();
    for line in &sections["properties"] {
        let tokens: Vec<&str> = line.split(' ').collect();
        match tokens.first().copied() {
            Some("bid") if tokens.len() == 6 => {
                let pid = parse_property(tokens[1])?;
                let f = Fields::parse(line, &tokens[3..])?;
                book.bids.entry(pid).or_default().push(StandingBid {
                    bidder: f.participant("bidder")?,
                    property_id: pid,
                    amount: f.poplets("amount")?,
                    epoch: f.u64("epoch")?,
                });
            }
            Some("record") if tokens.len() == 7 => {
                let pid = parse_property(tokens[1])?;
                let f = Fields::parse(line, &tokens[2..])?;
                let rec = PropertyRecord {
                    property_id: pid,
                    owner: f.participant("owner")?,
                    appraised_value: f.poplets("appraised")?,
                    escrow: f.poplets("escrow")?,
                    tenure: f.u64("tenure")?,
                    registered_epoch: f.u64("registered")?,
                };
                if book.records.insert(pid, rec).is_some() {
                    return Err(malformed(format!("duplicate property {pid}")));
                }
            }
            _ => return Err(malformed(format!("bad property line {line:?}"))),
        }
    }
    for (pid, bids) in book.bids.iter_mut() {
        if !book.records.contains_key(pid) {
            return Err(malformed(format!("bids on unknown property {pid}")));
        }
        let mut sorted = bids.clone();
        sort_bids(&mut sorted);
        if &sorted != bids {
            return Err(malformed(format!("bids for {pid} out of order")));
        }
    }

    // [log]
    let mut log = Vec::new();
    for line in &sections["log"] {
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != 6 || tokens[0] != "event" {
            return Err(malformed(format!("bad log line {line:?}")));
        }
        let f = Fields::parse(line, &tokens[2..])?;
        log.push(DistributionEvent {
            epoch: tokens[1].parse().map_err(|_| malformed(format!("bad epoch in {line:?}")))?,
            issuance: f.poplets("issuance")?,
            participants: f.u64("participants")?,
            per_participant: f.poplets("per_participant")?,
            residual_carried: f.poplets("residual_carried")?,
        });
    }

    let mut ledger = Ledger {
        utxos: BTreeMap::new(),
        expired_ids,
        by_owner: BTreeMap::new(),
        value_space,
        registry,
        policy,
        property_lifespan: kvf.opt_u64("property_lifespan")?,
        batch_size: kvf.poplets("batch_size")?,
        log,
        properties: book,
        batch_remainders,
        expired_total: kvf.poplets("expired_total")?,
        seq: kvf.u64("seq")?,
        exec: Execution::default(),
    };
    for u in utxos.into_values() {
        ledger.insert_utxo(u);
    }
    ledger.check_invariants().map_err(malformed)?;
    Ok(ledger)
}
