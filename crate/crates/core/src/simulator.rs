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

//! Scenario runs over the ledger and the M1-based basic-income estimator.
//!
//! A scenario fixes a policy and the enrolled population at every epoch;
//! the simulator enrolls or departs synthetic participants to match, then
//! advances the ledger and records one [`EpochReport`] per epoch. No agent
//! behaviour is modelled. Everything reported is a mechanical ledger
//! quantity, so the same scenario always yields the same CSV bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{LedgerError, Result};
use crate::ledger::{EpochReport, Ledger, LedgerConfig};
use crate::membership::{MockAttestation, ParticipantId};
use crate::numfmt;
use crate::par::Execution;
use crate::policy::{self, PolicyKind};

pub const CSV_HEADER: &str =
    "epoch,value_space,issuance,participants,per_participant,popcoin_rate,reward_factor,share_per_participant";

/// Significant digits in the decimal half of rational CSV cells.
const CSV_DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub policy: PolicyKind,
    pub epochs: u64,
    /// Enrolled participants during each epoch's distribution.
    pub population: Vec<u64>,
    pub world_population: u64,
    /// M1-equivalent value of the whole space in an external unit.
    pub anchor: Option<BigRational>,
}

impl Scenario {
    /// Parses the `key = value` scenario format. `#` starts a comment.
    /// `population` is a comma list; `value*count` repeats a value.
    pub fn parse(text: &str) -> Result<Scenario> {
        let bad = |m: String| LedgerError::InvalidScenario(m);
        let mut name = None;
        let mut policy_name = "democratic".to_string();
        let mut lifespan = 50u64;
        let mut epochs = None;
        let mut population = None;
        let mut world = None;
        let mut anchor = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once(['=', ':']).ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| numfmt::parse_u64(v).map_err(|_| bad(format!("line {}: bad number {v:?}", lineno + 1)));
            match key {
                "name" => name = Some(value.to_string()),
                "policy" => policy_name = value.to_string(),
                "lifespan" => lifespan = num(value)?,
                "epochs" => epochs = Some(num(value)?),
                "world_population" => world = Some(num(value)?),
                "anchor" => {
                    anchor = Some(numfmt::parse_decimal(value).map_err(|_| bad(format!("bad anchor {value:?}")))?)
                }
                "population" => {
                    let mut list = Vec::new();
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        match item.split_once('*') {
                            Some((v, n)) => {
                                let (v, n) = (num(v.trim())?, num(n.trim())?);
                                list.extend(std::iter::repeat_n(v, n as usize));
                            }
                            None => list.push(num(item)?),
                        }
                    }
                    population = Some(list);
                }
                other => return Err(bad(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        let name = name.ok_or_else(|| bad("missing name".into()))?;
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(bad(format!("name {name:?} must be a plain file stem")));
        }
        let population = population.ok_or_else(|| bad("missing population".into()))?;
        let epochs = epochs.unwrap_or(population.len() as u64);
        let policy = PolicyKind::new(&policy_name, lifespan).map_err(|e| bad(e.to_string()))?;
        let scenario = Scenario {
            name,
            policy,
            epochs,
            population,
            world_population: world.ok_or_else(|| bad("missing world_population".into()))?,
            anchor,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LedgerError::InvalidScenario(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        if self.population.len() as u64 != self.epochs {
            return bad("population list length must equal epochs");
        }
        if self.population.contains(&0) {
            return bad("populations must be positive");
        }
        if self.world_population == 0 {
            return bad("world_population must be positive");
        }
        if self.anchor.as_ref().is_some_and(|a| !a.is_positive()) {
            return bad("anchor must be positive");
        }
        Ok(())
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<Vec<EpochReport>> {
    run_scenario_with(scenario, Execution::default())
}

pub fn run_scenario_with(scenario: &Scenario, exec: Execution) -> Result<Vec<EpochReport>> {
    scenario.validate()?;
    let config = match scenario.policy {
        PolicyKind::Democratic { lifespan } => LedgerConfig::democratic(lifespan),
        PolicyKind::ExpiringCoins { lifespan } => LedgerConfig::expiring(lifespan, None),
    };
    let mut ledger = Ledger::new(config)?.with_execution(exec);
    // newest first out: departures pop from the end
    let mut enrolled: Vec<ParticipantId> = Vec::new();
    let mut next_serial = 0u64;
    let mut reports = Vec::with_capacity(scenario.population.len());
    for &target in &scenario.population {
        let target = target as usize;
        if enrolled.len() < target {
            let creds: Vec<Vec<u8>> = (0..(target - enrolled.len()) as u64)
                .map(|k| format!("{}/{}", scenario.name, next_serial + k).into_bytes())
                .collect();
            next_serial += creds.len() as u64;
            enrolled.extend(ledger.enroll_batch(&MockAttestation, &creds)?);
        }
        while enrolled.len() > target {
            let id = enrolled.pop().expect("non-empty");
            ledger.depart(&id)?;
        }
        let mut report = ledger.advance_epoch()?;
        report.adoption_reward_factor =
            Some(policy::adoption_reward_factor(scenario.world_population, report.participants)?);
        reports.push(report);
    }
    Ok(reports)
}

/// Runs independent scenarios, in parallel when enabled. Results keep the
/// input order.
pub fn run_all(scenarios: &[Scenario], exec: Execution) -> Vec<Result<Vec<EpochReport>>> {
    exec.map(scenarios, |_, s| run_scenario_with(s, Execution::Sequential))
}

/// `p/q=d` where `d` has twelve significant digits.
pub fn rational_cell(r: &BigRational) -> String {
    format!("{}={}", numfmt::ratio_string(r), numfmt::to_sig_string(r, CSV_DIGITS))
}

pub fn reports_to_csv(reports: &[EpochReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let reward = r.adoption_reward_factor.as_ref().map(rational_cell).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.epoch,
            r.value_space_size,
            r.issuance,
            r.participants,
            r.per_participant,
            rational_cell(r.popcoin_rate.poplets_per_popcoin()),
            reward,
            rational_cell(&r.share_of_space_per_participant),
        );
    }
    out
}

/// One report as a JSON object (for `--format json-lines`).
pub fn report_json(r: &EpochReport) -> serde_json::Value {
    serde_json::json!({
        "epoch": r.epoch,
        "value_space": r.value_space_size.to_string(),
        "issuance": r.issuance.to_string(),
        "participants": r.participants,
        "per_participant": r.per_participant.to_string(),
        "residual": r.residual.to_string(),
        "popcoin_rate": numfmt::ratio_string(r.popcoin_rate.poplets_per_popcoin()),
        "reward_factor": r.adoption_reward_factor.as_ref().map(numfmt::ratio_string),
        "share_per_participant": numfmt::ratio_string(&r.share_of_space_per_participant),
        "expired": r.expired.to_string(),
        "forfeitures": r.forfeitures.len(),
    })
}

/// A basic-income figure: exact value and its three-significant-figure
/// rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimate {
    pub exact: BigRational,
    pub rounded: BigRational,
    pub display: String,
}

const ESTIMATE_SIG: u32 = 3;

/// Yearly basic income per person: `m1 * rate / population`.
pub fn estimate_basic_income(m1: &BigRational, population: &BigRational, rate: &BigRational) -> Result<Estimate> {
    if !population.is_positive() {
        return Err(LedgerError::ZeroPopulation);
    }
    if !rate.is_positive() || rate >= &BigRational::from_integer(1.into()) {
        return Err(LedgerError::InvalidRate);
    }
    if m1.is_negative() {
        return Err(LedgerError::InvalidNumber("m1 must not be negative".into()));
    }
    let exact = m1 * rate / population;
    let (rounded, decimals) = numfmt::round_sig(&exact, ESTIMATE_SIG);
    let display = numfmt::to_fixed(&rounded, decimals.max(2));
    Ok(Estimate { exact, rounded, display })
}

/// One region of the M1 table: money supply in USD millions, population in
/// thousands, and the published figures for the 2%, 5% and 10% rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionM1 {
    pub region: &'static str,
    pub m1_usd_millions: u64,
    pub population_thousands: u64,
    pub published: [&'static str; 3],
    pub poverty_line: Option<&'static str>,
}

pub const TABLE_RATES: [&str; 3] = ["0.02", "0.05", "0.10"];

pub const M1_TABLE: [RegionM1; 5] = [
    RegionM1 {
        region: "Global",
        m1_usd_millions: 36_800_000,
        population_thousands: 7_630_000,
        published: ["96.50", "241.00", "482.00"],
        poverty_line: Some("694.00"),
    },
    RegionM1 {
        region: "Switzerland",
        m1_usd_millions: 657_000,
        population_thousands: 8_540,
        published: ["1,540.00", "3,850.00", "7,690.00"],
        poverty_line: Some("26,900.00"),
    },
    RegionM1 {
        region: "United States",
        m1_usd_millions: 3_660_000,
        population_thousands: 327_000,
        published: ["223.00", "560.00", "1,120.00"],
        poverty_line: Some("11,800.00"),
    },
    RegionM1 {
        region: "India",
        m1_usd_millions: 440_000,
        population_thousands: 1_350_000,
        published: ["6.51", "16.30", "32.60"],
        poverty_line: Some("172.00"),
    },
    RegionM1 {
        region: "Nigeria",
        m1_usd_millions: 30_200,
        population_thousands: 196_000,
        published: ["3.08", "7.70", "15.40"],
        poverty_line: None,
    },
];

impl RegionM1 {
    pub fn m1(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.m1_usd_millions) * BigInt::from(1_000_000u32))
    }

    pub fn population(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.population_thousands) * BigInt::from(1_000u32))
    }

    pub fn estimates(&self) -> Result<Vec<Estimate>> {
        TABLE_RATES
            .iter()
            .map(|r| estimate_basic_income(&self.m1(), &self.population(), &numfmt::parse_decimal(r)?))
            .collect()
    }
}

pub const GLOBAL_POVERTY_LINE_PER_YEAR: u64 = 694;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PovertyGap {
    /// income / 694
    pub ratio: BigRational,
    /// income / 365.25
    pub per_day: BigRational,
}

pub fn poverty_gap(income: &BigRational) -> Result<PovertyGap> {
    if income.is_negative() {
        return Err(LedgerError::InvalidNumber("income must not be negative".into()));
    }
    let line = BigRational::from_integer(GLOBAL_POVERTY_LINE_PER_YEAR.into());
    let days = BigRational::new(1461.into(), 4.into());
    Ok(PovertyGap { ratio: income / line, per_day: income / days })
}
