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

//! Command-line front end.
//!
//! Each invocation loads the ledger snapshot, applies one command and writes
//! the snapshot back. Exit status: 0 on success, 1 on a domain error (stderr
//! carries `<ErrorCode>: <message>` on one line), 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{LedgerError, Result};
use crate::ledger::{EpochReport, Ledger, LedgerConfig};
use crate::membership::{MockAttestation, ParticipantId};
use crate::numfmt;
use crate::par::Execution;
use crate::policy::PolicyKind;
use crate::property::PropertyId;
use crate::simulator::{self, Scenario};
use crate::value_space::{self, Poplets};

pub const SNAPSHOT_ENV: &str = "POPLEDGER_SNAPSHOT";
pub const DEFAULT_SNAPSHOT: &str = "popledger.snap";

#[derive(Debug, Parser)]
#[command(name = "popledger", version, about = "Democratic-money ledger, property escrow and epoch simulator")]
pub struct Cli {
    /// Ledger snapshot file (overrides POPLEDGER_SNAPSHOT)
    #[arg(long, global = true, value_name = "PATH")]
    pub snapshot: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Democratic,
    Expiring,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a fresh ledger snapshot
    Init {
        #[arg(long, value_enum, default_value_t = PolicyArg::Democratic)]
        policy: PolicyArg,
        /// Nominal lifespan of circulating money, in epochs
        #[arg(long, visible_alias = "circulating-lifespan", default_value_t = 50)]
        lifespan: u64,
        /// Separate lifespan for escrowed property value (democratic only)
        #[arg(long)]
        property_lifespan: Option<u64>,
        /// Poplets minted per epoch under the expiring policy
        #[arg(long)]
        batch_size: Option<String>,
        /// Overwrite an existing snapshot
        #[arg(long)]
        force: bool,
    },
    /// Enroll a participant from a hex-encoded credential
    Enroll {
        #[arg(long)]
        credential: String,
    },
    /// Stop future distributions to a participant
    Depart {
        #[arg(long)]
        id: String,
    },
    /// Pay Poplets from one participant to another
    Pay {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        amount: String,
    },
    /// Close the epoch: devalue, distribute and age property tenure
    AdvanceEpoch,
    /// Spendable and escrowed Poplets of a participant
    Balance {
        #[arg(long)]
        owner: String,
        /// Decimal places for the Popcoin face value
        #[arg(long, default_value_t = 2)]
        decimals: u32,
    },
    /// Convert Poplets to Popcoin at the current rate
    Convert {
        #[arg(long)]
        amount: String,
        #[arg(long, default_value_t = 2)]
        decimals: u32,
    },
    /// Property registry operations
    Property {
        #[command(subcommand)]
        command: PropertyCommand,
    },
    /// Run scenario files and write <name>.csv for each
    Simulate {
        /// Scenario files, or directories with --all
        paths: Vec<PathBuf>,
        /// Run every scenario in the given directories (default: scenarios/) in parallel
        #[arg(long)]
        all: bool,
        /// Directory for CSV output
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Yearly basic income per person from M1 money supply
    Estimate {
        /// M1 money supply
        #[arg(long, required_unless_present = "table")]
        m1: Option<String>,
        /// Population
        #[arg(long, required_unless_present = "table")]
        population: Option<String>,
        /// Devaluation rate, strictly between 0 and 1
        #[arg(long, required_unless_present = "table")]
        rate: Option<String>,
        /// Also report the gap to the global poverty line
        #[arg(long)]
        poverty: bool,
        /// Print the five-region M1 table next to the published figures
        #[arg(long)]
        table: bool,
    },
    /// Write the canonical snapshot to a file or stdout
    Snapshot {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a snapshot file and install it as the current ledger
    Restore {
        #[arg(long)]
        from: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PropertyCommand {
    /// Buy and register a property: 2x price needed, half goes to escrow
    Register {
        #[arg(long)]
        buyer: String,
        #[arg(long)]
        seller: String,
        #[arg(long)]
        price: String,
    },
    /// Resell a registered property
    Transfer {
        #[arg(long)]
        property: String,
        #[arg(long)]
        seller: String,
        #[arg(long)]
        buyer: String,
        #[arg(long)]
        price: String,
    },
    /// Place a standing bid
    Bid {
        #[arg(long)]
        bidder: String,
        #[arg(long)]
        property: String,
        #[arg(long)]
        amount: String,
    },
    /// Record a new appraisal
    Appraise {
        #[arg(long)]
        property: String,
        #[arg(long)]
        value: String,
    },
    /// Top up (positive) or withdraw (negative) escrow
    EscrowAdjust {
        #[arg(long)]
        property: String,
        #[arg(long)]
        owner: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Show one property or all of them
    Show {
        #[arg(long)]
        property: Option<String>,
    },
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dispatch<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutput { code: 0, stdout: text, stderr: String::new() }
                }
                _ => CliOutput { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let env = std::env::var_os(SNAPSHOT_ENV).map(PathBuf::from);
    match run(&cli, env) {
        Ok(stdout) => CliOutput { code: 0, stdout, stderr: String::new() },
        Err(e) => CliOutput { code: 1, stdout: String::new(), stderr: format!("{}: {}\n", e.code(), e) },
    }
}

fn snapshot_path(cli: &Cli, env: Option<PathBuf>) -> PathBuf {
    cli.snapshot.clone().or(env).unwrap_or_else(|| PathBuf::from(DEFAULT_SNAPSHOT))
}

fn load(path: &Path) -> Result<Ledger> {
    let bytes = std::fs::read(path).map_err(|e| LedgerError::Io(format!("{}: {e}", path.display())))?;
    Ledger::restore(&bytes)
}

fn save(path: &Path, ledger: &Ledger) -> Result<()> {
    let tmp = path.with_extension("snap.tmp");
    std::fs::write(&tmp, ledger.snapshot())?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn participant(s: &str) -> Result<ParticipantId> {
    ParticipantId::from_hex(s).map_err(|_| LedgerError::UnknownParticipant)
}

fn poplets(s: &str) -> Result<Poplets> {
    s.parse()
}

fn emit(format: Format, fields: &[(&str, String)]) -> String {
    match format {
        Format::Human => {
            let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}\n", parts.join(" "))
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::JsonLines => {
            let map: serde_json::Map<String, serde_json::Value> =
                fields.iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone()))).collect();
            format!("{}\n", serde_json::Value::Object(map))
        }
    }
}

fn report_out(format: Format, r: &EpochReport) -> String {
    match format {
        Format::JsonLines => format!("{}\n", simulator::report_json(r)),
        Format::Csv => simulator::reports_to_csv(std::slice::from_ref(r)),
        Format::Human => {
            let mut s = format!(
                "epoch={} value_space={} issuance={} participants={} per_participant={} residual={} popcoin_rate={}\n",
                r.epoch, r.value_space_size, r.issuance, r.participants, r.per_participant, r.residual, r.popcoin_rate
            );
            if !r.expired.is_zero() {
                let _ = writeln!(s, "expired={}", r.expired);
            }
            for f in &r.forfeitures {
                let to = f.new_owner.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "forfeit property={} from={} to={} price={}",
                    f.property_id, f.former_owner, to, f.price
                );
            }
            s
        }
    }
}

fn run(cli: &Cli, env: Option<PathBuf>) -> Result<String> {
    let path = snapshot_path(cli, env);
    let fmt = cli.format;
    match &cli.command {
        Command::Init { policy, lifespan, property_lifespan, batch_size, force } => {
            if path.exists() && !force {
                return Err(LedgerError::InvalidConfig(format!("{} exists; pass --force", path.display())));
            }
            let mut config = match policy {
                PolicyArg::Democratic => LedgerConfig::democratic(*lifespan),
                PolicyArg::Expiring => {
                    LedgerConfig::expiring(*lifespan, batch_size.as_deref().map(poplets).transpose()?)
                }
            };
            if *policy == PolicyArg::Democratic && batch_size.is_some() {
                return Err(LedgerError::InvalidConfig("--batch-size needs --policy expiring".into()));
            }
            config.property_lifespan = *property_lifespan;
            PolicyKind::new(config.policy.name(), *lifespan)?;
            let ledger = Ledger::new(config)?;
            save(&path, &ledger)?;
            Ok(emit(
                fmt,
                &[
                    ("policy", ledger.policy().name().to_string()),
                    ("lifespan", lifespan.to_string()),
                    ("value_space", ledger.value_space().size().to_string()),
                    ("snapshot", path.display().to_string()),
                ],
            ))
        }
        Command::Enroll { credential } => {
            let mut ledger = load(&path)?;
            let bytes = hex::decode(credential.trim()).map_err(|_| LedgerError::InvalidCredential)?;
            let id = ledger.enroll(&MockAttestation, &bytes)?;
            save(&path, &ledger)?;
            Ok(emit(fmt, &[("id", id.to_string()), ("epoch", ledger.epoch().to_string())]))
        }
        Command::Depart { id } => {
            let mut ledger = load(&path)?;
            let id = participant(id)?;
            ledger.depart(&id)?;
            save(&path, &ledger)?;
            Ok(emit(fmt, &[("departed", id.to_string()), ("active", ledger.registry().active_count().to_string())]))
        }
        Command::Pay { from, to, amount } => {
            let mut ledger = load(&path)?;
            let (from, to) = (participant(from)?, participant(to)?);
            let tx = ledger.build_payment(&from, &to, poplets(amount)?)?;
            ledger.apply_payment(&tx)?;
            save(&path, &ledger)?;
            let (spendable, _) = ledger.balance(&from);
            Ok(emit(fmt, &[("paid", amount.clone()), ("from_spendable", spendable.to_string())]))
        }
        Command::AdvanceEpoch => {
            let mut ledger = load(&path)?;
            let report = ledger.advance_epoch()?;
            save(&path, &ledger)?;
            Ok(report_out(fmt, &report))
        }
        Command::Balance { owner, decimals } => {
            let ledger = load(&path)?;
            let owner = participant(owner)?;
            let (spendable, escrowed) = ledger.balance(&owner);
            let mut fields = vec![
                ("owner", owner.to_string()),
                ("spendable", spendable.to_string()),
                ("escrowed", escrowed.to_string()),
            ];
            if let Ok(rate) = ledger.conversion_rate() {
                fields.push(("spendable_popcoin", value_space::to_popcoin_display(spendable, &rate, *decimals)));
                fields.push(("escrowed_popcoin", value_space::to_popcoin_display(escrowed, &rate, *decimals)));
            }
            Ok(emit(fmt, &fields))
        }
        Command::Convert { amount, decimals } => {
            let ledger = load(&path)?;
            let rate = ledger.conversion_rate()?;
            let amount = poplets(amount)?;
            Ok(emit(
                fmt,
                &[
                    ("poplets", amount.to_string()),
                    ("popcoin", value_space::to_popcoin_display(amount, &rate, *decimals)),
                    ("poplets_per_popcoin", rate.to_string()),
                ],
            ))
        }
        Command::Property { command } => run_property(&path, fmt, command),
        Command::Simulate { paths, all, output_dir } => run_simulate(fmt, paths, *all, output_dir),
        Command::Estimate { m1, population, rate, poverty, table } => {
            if *table {
                return Ok(estimate_table(fmt));
            }
            let (m1, population, rate) = match (m1, population, rate) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Err(LedgerError::InvalidConfig("--m1, --population and --rate are required".into())),
            };
            let est = simulator::estimate_basic_income(
                &numfmt::parse_decimal(m1)?,
                &numfmt::parse_decimal(population)?,
                &numfmt::parse_decimal(rate)?,
            )?;
            let mut fields = vec![("income", est.display.clone())];
            if *poverty {
                let gap = simulator::poverty_gap(&est.rounded)?;
                fields.push(("poverty_ratio", numfmt::to_fixed(&gap.ratio, 3)));
                fields.push(("per_day", numfmt::to_fixed(&gap.per_day, 2)));
            }
            if fmt == Format::Human && !*poverty {
                return Ok(format!("{}\n", est.display));
            }
            Ok(emit(fmt, &fields))
        }
        Command::Snapshot { out } => {
            let ledger = load(&path)?;
            let bytes = ledger.snapshot();
            match out {
                Some(p) => {
                    std::fs::write(p, &bytes)?;
                    Ok(emit(fmt, &[("wrote", p.display().to_string())]))
                }
                None => Ok(String::from_utf8(bytes).expect("snapshot is utf-8")),
            }
        }
        Command::Restore { from } => {
            let ledger = load(from)?;
            save(&path, &ledger)?;
            Ok(emit(fmt, &[("restored", path.display().to_string()), ("epoch", ledger.epoch().to_string())]))
        }
    }
}

fn property_id(s: &str) -> Result<PropertyId> {
    PropertyId::from_hex(s)
}

fn run_property(path: &Path, fmt: Format, command: &PropertyCommand) -> Result<String> {
    let mut ledger = load(path)?;
    let out = match command {
        PropertyCommand::Register { buyer, seller, price } => {
            let pid = ledger.register_property(&participant(buyer)?, &participant(seller)?, poplets(price)?)?;
            emit(fmt, &[("property", pid.to_string())])
        }
        PropertyCommand::Transfer { property, seller, buyer, price } => {
            let pid = property_id(property)?;
            ledger.transfer_property(&pid, &participant(seller)?, &participant(buyer)?, poplets(price)?)?;
            emit(fmt, &[("property", pid.to_string()), ("owner", buyer.clone())])
        }
        PropertyCommand::Bid { bidder, property, amount } => {
            let pid = property_id(property)?;
            ledger.place_bid(&participant(bidder)?, &pid, poplets(amount)?)?;
            let appraised = ledger.properties().get(&pid).map(|r| r.appraised_value).unwrap_or_default();
            emit(fmt, &[("property", pid.to_string()), ("appraised", appraised.to_string())])
        }
        PropertyCommand::Appraise { property, value } => {
            let pid = property_id(property)?;
            ledger.appraise(&pid, poplets(value)?)?;
            let appraised = ledger.properties().get(&pid).map(|r| r.appraised_value).unwrap_or_default();
            emit(fmt, &[("property", pid.to_string()), ("appraised", appraised.to_string())])
        }
        PropertyCommand::EscrowAdjust { property, owner, delta } => {
            let pid = property_id(property)?;
            let d = numfmt::parse_decimal(delta)?;
            if !d.is_integer() {
                return Err(LedgerError::InvalidNumber(delta.clone()));
            }
            let d: i128 = d.to_integer().try_into().map_err(|_| LedgerError::InvalidNumber(delta.clone()))?;
            ledger.adjust_escrow(&pid, &participant(owner)?, d)?;
            let escrow = ledger.properties().get(&pid).map(|r| r.escrow).unwrap_or_default();
            emit(fmt, &[("property", pid.to_string()), ("escrow", escrow.to_string())])
        }
        PropertyCommand::Show { property } => {
            let wanted = property.as_deref().map(property_id).transpose()?;
            if let Some(pid) = &wanted {
                ledger.properties().get(pid).ok_or(LedgerError::UnknownProperty)?;
            }
            let mut s = String::new();
            for r in ledger.properties().records() {
                if wanted.is_some_and(|w| w != r.property_id) {
                    continue;
                }
                let floor = ledger.properties().bid_floor(&r.property_id).map(|p| p.to_string()).unwrap_or("-".into());
                s.push_str(&emit(
                    fmt,
                    &[
                        ("property", r.property_id.to_string()),
                        ("owner", r.owner.to_string()),
                        ("appraised", r.appraised_value.to_string()),
                        ("escrow", r.escrow.to_string()),
                        ("tenure", r.tenure.to_string()),
                        ("registered", r.registered_epoch.to_string()),
                        ("bids", ledger.properties().bids(&r.property_id).len().to_string()),
                        ("bid_floor", floor),
                    ],
                ));
            }
            return Ok(s);
        }
    };
    save(path, &ledger)?;
    Ok(out)
}

fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| LedgerError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt" || x == "scenario"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_simulate(fmt: Format, paths: &[PathBuf], all: bool, output_dir: &Path) -> Result<String> {
    let mut files = Vec::new();
    if all {
        let dirs = if paths.is_empty() { vec![PathBuf::from("scenarios")] } else { paths.to_vec() };
        for d in dirs {
            if d.is_dir() {
                files.extend(scenario_files(&d)?);
            } else {
                files.push(d);
            }
        }
    } else {
        files = paths.to_vec();
    }
    if files.is_empty() {
        return Err(LedgerError::InvalidScenario("no scenario files given".into()));
    }
    let scenarios = files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(f).map_err(|e| LedgerError::Io(format!("{}: {e}", f.display())))?;
            Scenario::parse(&text)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<&str> = scenarios.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(LedgerError::InvalidScenario("scenario names must be unique".into()));
    }
    std::fs::create_dir_all(output_dir)?;
    let exec = if all { Execution::default() } else { Execution::Sequential };
    let written = exec.map(&scenarios, |_, s| -> Result<(PathBuf, usize)> {
        let reports = simulator::run_scenario_with(s, Execution::Sequential)?;
        let out = output_dir.join(format!("{}.csv", s.name));
        std::fs::write(&out, simulator::reports_to_csv(&reports))?;
        Ok((out, reports.len()))
    });
    let mut s = String::new();
    for (scenario, result) in scenarios.iter().zip(written) {
        let (path, epochs) = result?;
        s.push_str(&emit(
            fmt,
            &[("scenario", scenario.name.clone()), ("epochs", epochs.to_string()), ("csv", path.display().to_string())],
        ));
    }
    Ok(s)
}

fn estimate_table(fmt: Format) -> String {
    let mut s = String::new();
    if fmt == Format::Csv {
        s.push_str("region,rate,income,published,match\n");
    }
    for region in simulator::M1_TABLE.iter() {
        let estimates = match region.estimates() {
            Ok(e) => e,
            Err(e) => {
                let _ = writeln!(s, "{}: {e}", region.region);
                continue;
            }
        };
        for ((rate, est), published) in simulator::TABLE_RATES.iter().zip(&estimates).zip(region.published) {
            let matches = numfmt::parse_decimal(published).is_ok_and(|p| p == est.rounded);
            match fmt {
                Format::Csv => {
                    let _ = writeln!(
                        s,
                        "{},{rate},{},{},{}",
                        region.region,
                        est.display,
                        published.replace(',', ""),
                        matches
                    );
                }
                Format::JsonLines => {
                    let _ = writeln!(
                        s,
                        "{}",
                        serde_json::json!({
                            "region": region.region,
                            "rate": rate,
                            "income": est.display,
                            "published": published,
                            "match": matches,
                        })
                    );
                }
                Format::Human => {
                    let _ = writeln!(
                        s,
                        "{:<14} rate={rate:<5} income={:>9} published={:>9}{}",
                        region.region,
                        est.display,
                        published,
                        if matches { "" } else { "  (differs)" }
                    );
                }
            }
        }
    }
    s
}
