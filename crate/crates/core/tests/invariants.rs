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

//! Property tests for the cross-module invariants: membership states,
//! distribution fairness, the expiring window, conservation under arbitrary
//! interleavings, atomicity, determinism and the property book.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use popledger::simulator::{self, Scenario};
use popledger::{
    AttestationProvider, Execution, Ledger, LedgerConfig, LedgerError, MockAttestation, ParticipantId,
    ParticipantRegistry, Poplets, PropertyId, ValueSpace, GENESIS_SIZE,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Enroll(u8),
    Depart(u8),
    Advance,
    Pay { from: u8, to: u8, permille: u16 },
    Register { buyer: u8, seller: u8, permille: u16 },
    Transfer { prop: u8, buyer: u8, permille: u16 },
    Escrow { prop: u8, up: bool, permille: u16 },
    Bid { prop: u8, bidder: u8, permille: u16 },
    Appraise { prop: u8, permille: u16 },
}

fn op() -> impl Strategy<Value = Op> {
    let p = 1u16..=1000;
    prop_oneof![
        1 => any::<u8>().prop_map(Op::Enroll),
        1 => any::<u8>().prop_map(Op::Depart),
        2 => Just(Op::Advance),
        4 => (any::<u8>(), any::<u8>(), p.clone()).prop_map(|(from, to, permille)| Op::Pay { from, to, permille }),
        2 => (any::<u8>(), any::<u8>(), p.clone()).prop_map(|(buyer, seller, permille)| Op::Register { buyer, seller, permille }),
        1 => (any::<u8>(), any::<u8>(), p.clone()).prop_map(|(prop, buyer, permille)| Op::Transfer { prop, buyer, permille }),
        1 => (any::<u8>(), any::<bool>(), p.clone()).prop_map(|(prop, up, permille)| Op::Escrow { prop, up, permille }),
        1 => (any::<u8>(), any::<u8>(), p.clone()).prop_map(|(prop, bidder, permille)| Op::Bid { prop, bidder, permille }),
        1 => (any::<u8>(), p).prop_map(|(prop, permille)| Op::Appraise { prop, permille }),
    ]
}

fn scaled(amount: Poplets, permille: u16) -> Poplets {
    Poplets(amount.0 / 1000 * permille as u128 + amount.0 % 1000 * permille as u128 / 1000)
}

struct Walk {
    ledger: Ledger,
    people: Vec<ParticipantId>,
    props: Vec<PropertyId>,
}

impl Walk {
    fn new(config: LedgerConfig) -> Walk {
        let mut ledger = Ledger::new(config).unwrap();
        let people = (0..4u8).map(|i| ledger.enroll(&MockAttestation, &[i, 0xff]).unwrap()).collect();
        Walk { ledger, people, props: Vec::new() }
    }

    fn person(&self, i: u8) -> ParticipantId {
        self.people[i as usize % self.people.len()]
    }

    fn prop(&self, i: u8) -> Option<PropertyId> {
        (!self.props.is_empty()).then(|| self.props[i as usize % self.props.len()])
    }

    fn apply(&mut self, op: &Op) -> popledger::Result<()> {
        let l = &mut self.ledger;
        match *op {
            Op::Enroll(c) => l.enroll(&MockAttestation, &[c]).map(|id| self.people.push(id)),
            Op::Depart(i) => {
                let id = self.person(i);
                self.ledger.depart(&id)
            }
            Op::Advance => l.advance_epoch().map(|_| ()),
            Op::Pay { from, to, permille } => {
                let (from, to) = (self.person(from), self.person(to));
                let l = &mut self.ledger;
                let amount = scaled(l.spendable(&from), permille);
                l.build_payment(&from, &to, amount).and_then(|tx| l.apply_payment(&tx))
            }
            Op::Register { buyer, seller, permille } => {
                let (buyer, seller) = (self.person(buyer), self.person(seller));
                let price = Poplets(scaled(self.ledger.spendable(&buyer), permille).0 / 2);
                let pid = self.ledger.register_property(&buyer, &seller, price)?;
                self.props.push(pid);
                Ok(())
            }
            Op::Transfer { prop, buyer, permille } => {
                let pid = self.prop(prop).ok_or(LedgerError::UnknownProperty)?;
                let buyer = self.person(buyer);
                let l = &mut self.ledger;
                let owner = l.properties().get(&pid).ok_or(LedgerError::UnknownProperty)?.owner;
                let price = Poplets(scaled(l.spendable(&buyer), permille).0 / 2);
                l.transfer_property(&pid, &owner, &buyer, price)
            }
            Op::Escrow { prop, up, permille } => {
                let pid = self.prop(prop).ok_or(LedgerError::UnknownProperty)?;
                let l = &mut self.ledger;
                let rec = l.properties().get(&pid).ok_or(LedgerError::UnknownProperty)?.clone();
                let delta = if up {
                    scaled(l.spendable(&rec.owner), permille).0 as i128
                } else {
                    -(scaled(rec.escrow, permille).0 as i128)
                };
                l.adjust_escrow(&pid, &rec.owner, delta)
            }
            Op::Bid { prop, bidder, permille } => {
                let pid = self.prop(prop).ok_or(LedgerError::UnknownProperty)?;
                let bidder = self.person(bidder);
                let amount = scaled(self.ledger.spendable(&bidder), permille);
                self.ledger.place_bid(&bidder, &pid, amount)
            }
            Op::Appraise { prop, permille } => {
                let pid = self.prop(prop).ok_or(LedgerError::UnknownProperty)?;
                let l = &mut self.ledger;
                let current = l.properties().get(&pid).ok_or(LedgerError::UnknownProperty)?.appraised_value;
                l.appraise(&pid, Poplets(current.0 / 2 + scaled(current, permille).0))
            }
        }
    }
}

fn held(l: &Ledger) -> u128 {
    let t = l.totals();
    t.spendable.0 + t.escrowed.0 + l.value_space().residual().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn democratic_conservation_and_atomicity(ops in prop::collection::vec(op(), 1..120), dual in any::<bool>()) {
        let mut cfg = LedgerConfig::democratic(50);
        if dual {
            cfg = cfg.with_property_lifespan(200);
        }
        let mut walk = Walk::new(cfg);
        let genesis = walk.ledger.value_space().genesis();
        for op in &ops {
            let before = walk.ledger.snapshot();
            let result = walk.apply(op);
            if result.is_err() {
                prop_assert_eq!(&walk.ledger.snapshot(), &before, "{:?} failed but changed state", op);
            }
            prop_assert_eq!(held(&walk.ledger), walk.ledger.value_space().size().0 - genesis.0);
            prop_assert!(walk.ledger.utxos().all(|u| u.amount.0 > 0));
            let check = walk.ledger.check_invariants();
            prop_assert!(check.is_ok(), "{:?}", check);
        }
    }

    #[test]
    fn replay_is_byte_identical(ops in prop::collection::vec(op(), 1..80)) {
        let run = |exec| {
            let mut walk = Walk::new(LedgerConfig::democratic(50));
            walk.ledger.set_execution(exec);
            let mut forfeits = Vec::new();
            for op in &ops {
                if let Op::Advance = op {
                    if let Ok(r) = walk.ledger.advance_epoch() {
                        forfeits.push((r.epoch, r.forfeitures));
                    }
                } else {
                    let _ = walk.apply(op);
                }
            }
            (walk.ledger.snapshot(), forfeits)
        };
        let (a, fa) = run(Execution::Sequential);
        let (b, fb) = run(Execution::default());
        prop_assert_eq!(a, b);
        prop_assert_eq!(fa, fb);
    }

    #[test]
    fn expiring_conservation_and_window(
        lifespan in 2u64..8,
        batch in 1u128..10_000,
        ops in prop::collection::vec(op(), 1..100),
    ) {
        let mut walk = Walk::new(LedgerConfig::expiring(lifespan, Some(Poplets(batch))));
        for op in &ops {
            let _ = walk.apply(op);
            let l = &walk.ledger;
            let t = l.totals();
            let issued = l.issued_total().unwrap();
            prop_assert_eq!(t.spendable.0 + t.escrowed.0 + l.value_space().residual().0 + l.expired_total().0, issued.0);
            prop_assert!(t.spendable.0 + t.escrowed.0 <= lifespan as u128 * batch);
            prop_assert_eq!(l.value_space().size(), GENESIS_SIZE);
            let check = l.check_invariants();
            prop_assert!(check.is_ok(), "{:?}", check);
        }
    }

    #[test]
    fn steady_window_is_exact(lifespan in 2u64..12, n in 1u64..6, k in 1u128..1000, extra in 0u64..10) {
        let batch = Poplets(k * n as u128);
        let mut l = Ledger::new(LedgerConfig::expiring(lifespan, Some(batch))).unwrap();
        for i in 0..n {
            l.enroll(&MockAttestation, &i.to_le_bytes()).unwrap();
        }
        for _ in 0..lifespan + extra {
            l.advance_epoch().unwrap();
        }
        prop_assert_eq!(l.totals().spendable.0, lifespan as u128 * batch.0);
    }

    #[test]
    fn coinbase_is_fair_and_counts_active(n in 1u64..40, departs in 0u64..40, epochs in 1u64..4) {
        let mut l = Ledger::new(LedgerConfig::democratic(50)).unwrap();
        let ids: Vec<_> = (0..n).map(|i| l.enroll(&MockAttestation, &i.to_le_bytes()).unwrap()).collect();
        for id in ids.iter().take(departs.min(n - 1) as usize) {
            l.depart(id).unwrap();
        }
        for _ in 0..epochs {
            let before = l.utxo_count();
            let r = l.advance_epoch().unwrap();
            prop_assert_eq!(r.participants, l.registry().active_count());
            let fresh: BTreeSet<u128> = l.utxos().filter(|u| u.mint_epoch == r.epoch).map(|u| u.amount.0).collect();
            prop_assert_eq!(l.utxo_count() - before, r.participants as usize);
            prop_assert_eq!(fresh.into_iter().collect::<Vec<_>>(), vec![r.per_participant.0]);
        }
    }

    #[test]
    fn membership_states_are_exclusive(script in prop::collection::vec((any::<bool>(), 0u8..12), 1..60)) {
        let mut reg = ParticipantRegistry::new();
        for (enroll, c) in script {
            let before = reg.clone();
            let id = MockAttestation.verify(&[c]).unwrap();
            let result = if enroll { reg.enroll(&MockAttestation, &[c], 0).map(|_| ()) } else { reg.depart(&id, 0) };
            if result.is_err() {
                prop_assert_eq!(&reg, &before);
            }
            prop_assert!(!(reg.is_active(&id) && reg.is_departed(&id)));
        }
    }

    #[test]
    fn geometric_tracking(lifespan in 2u64..200, t in 1u64..120) {
        // stay inside u128; beyond that expansion reports Overflow
        prop_assume!(t as f64 * (lifespan as f64 / (lifespan - 1) as f64).log2() < 63.0);
        let mut vs = ValueSpace::new(lifespan).unwrap();
        for _ in 0..t {
            vs = vs.expand_epoch().unwrap().0;
        }
        let g = BigRational::new(BigInt::from(lifespan), BigInt::from(lifespan - 1));
        let exact = GENESIS_SIZE.to_rational() * num_traits::pow(g, t as usize);
        let err = (vs.size().to_rational() - &exact).abs() / &exact;
        let bound = BigRational::new(BigInt::from(10 * t), BigInt::from(1u128 << 64));
        prop_assert!(err < bound);
    }

    #[test]
    fn early_adopter_share_never_grows(steps in prop::collection::vec(0u64..50, 1..15), start in 1u64..50) {
        let mut pop = Vec::new();
        let mut n = start;
        for s in steps {
            n += s;
            pop.push(n);
        }
        let s = Scenario {
            name: "monotone".into(),
            policy: popledger::PolicyKind::Democratic { lifespan: 50 },
            epochs: pop.len() as u64,
            population: pop,
            world_population: 10_000,
            anchor: None,
        };
        let reports = simulator::run_scenario(&s).unwrap();
        // Exact up to the floors on the space size and on the slice itself.
        for w in reports.windows(2) {
            let slack = BigRational::new(BigInt::from(2), BigInt::from(w[1].value_space_size.0));
            prop_assert!(w[1].share_of_space_per_participant <= &w[0].share_of_space_per_participant + slack);
        }
        prop_assert_eq!(simulator::reports_to_csv(&reports), simulator::reports_to_csv(&simulator::run_scenario(&s).unwrap()));
    }
}

#[test]
fn error_codes_are_distinct() {
    use LedgerError::*;
    let s = String::new;
    let all = [
        InvalidConfig(s()),
        Overflow,
        NoParticipants,
        NoDistribution,
        DuplicateEnrollment,
        InvalidCredential,
        ReenrollmentAfterDeparture,
        UnknownParticipant,
        UnknownInput(s()),
        DoubleSpend(s()),
        Expired(s()),
        ValueMismatch,
        NotOwner,
        LockedInput(s()),
        ZeroAmount,
        EmptyTransaction,
        CoinbaseRejected,
        MalformedSnapshot(s()),
        VersionMismatch(s()),
        InsufficientFunds,
        ZeroPrice,
        UnknownProperty,
        BidFloorViolated,
        WithdrawBelowAppraisal,
        OwnerCannotBid,
        InvalidScenario(s()),
        ZeroPopulation,
        InvalidRate,
        InvalidNumber(s()),
        Io(s()),
    ];
    let codes: BTreeSet<&str> = all.iter().map(|e| e.code()).collect();
    assert_eq!(codes.len(), all.len());
}

#[test]
fn constant_population_rate_is_steady() {
    let s = Scenario::parse("name = steady\nlifespan = 50\npopulation = 7*40\nworld_population = 100\n").unwrap();
    let reports = simulator::run_scenario(&s).unwrap();
    // Measured as a share of the value space, one Popcoin is worth the same
    // every epoch; in raw Poplets it inflates with the space.
    let share = |r: &popledger::EpochReport| r.popcoin_rate.poplets_per_popcoin() / r.value_space_size.to_rational();
    let first = share(&reports[0]);
    let tol = BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(15)));
    for r in &reports[1..] {
        assert!(((share(r) - &first) / &first).abs() < tol, "epoch {}", r.epoch);
    }
}
