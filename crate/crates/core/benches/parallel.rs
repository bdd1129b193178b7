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

//! Sequential against data-parallel execution on the hot paths: coinbase
//! distribution, bulk enrollment, ledger-wide totals and scenario batches.

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use popledger::simulator::{run_all, Scenario};
use popledger::{Execution, Ledger, LedgerConfig, MockAttestation};

const PARTICIPANTS: usize = 100_000;

fn credentials(n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|i| format!("bench/{i}").into_bytes()).collect()
}

fn enrolled(n: usize, exec: Execution) -> Ledger {
    let mut ledger = Ledger::new(LedgerConfig::democratic(50)).unwrap().with_execution(exec);
    ledger.enroll_batch(&MockAttestation, &credentials(n)).unwrap();
    ledger
}

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn bench_enrollment(c: &mut Criterion) {
    let creds = credentials(PARTICIPANTS);
    let mut group = c.benchmark_group("enroll_batch");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter_batched(
                || Ledger::new(LedgerConfig::democratic(50)).unwrap().with_execution(exec),
                |mut ledger| ledger.enroll_batch(&MockAttestation, &creds).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn bench_distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("advance_epoch");
    group.sample_size(10);
    for (name, exec) in modes() {
        let base = enrolled(PARTICIPANTS, exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter_batched(|| base.clone(), |mut ledger| ledger.advance_epoch().unwrap(), BatchSize::LargeInput)
        });
    }
    group.finish();
}

fn bench_totals(c: &mut Criterion) {
    let mut group = c.benchmark_group("totals");
    for (name, exec) in modes() {
        let mut ledger = enrolled(PARTICIPANTS, exec);
        for _ in 0..3 {
            ledger.advance_epoch().unwrap();
        }
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| ledger.totals()));
    }
    group.finish();
}

fn bench_scenarios(c: &mut Criterion) {
    let scenarios: Vec<Scenario> = (0..8)
        .map(|i| {
            Scenario::parse(&format!(
                "name = s{i}\nlifespan = 50\npopulation = {}*40\nworld_population = 7630000000\n",
                200 + 50 * i
            ))
            .unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("run_all");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_all(&scenarios, exec)));
    }
    group.finish();
}

criterion_group!(benches, bench_enrollment, bench_distribution, bench_totals, bench_scenarios);
criterion_main!(benches);
