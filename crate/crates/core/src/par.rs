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

//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in input order, so switching between
//! [`Execution::Sequential`] and [`Execution::Parallel`] never changes ledger
//! state or snapshot bytes. Without the `parallel` feature both variants run
//! on the calling thread.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
use rayon::prelude::*;

impl Execution {
    /// Whether work actually fans out to the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(usize, &T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
        }
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }

    /// Folds every value of `map` into an accumulator, combining partial
    /// accumulators with `combine`. `combine` must be associative.
    pub fn fold_values<K, V, A, F, C>(self, map: &BTreeMap<K, V>, init: A, fold: F, combine: C) -> A
    where
        K: Ord + Sync,
        V: Sync,
        A: Clone + Send + Sync,
        F: Fn(A, &V) -> A + Sync + Send,
        C: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return map.par_iter().fold(|| init.clone(), |acc, (_, v)| fold(acc, v)).reduce(|| init.clone(), &combine);
        }
        let _ = &combine;
        map.values().fold(init, fold)
    }

    /// Keys of `map` whose value satisfies `pred`, in key order.
    pub fn filter_keys<K, V, P>(self, map: &BTreeMap<K, V>, pred: P) -> Vec<K>
    where
        K: Ord + Clone + Sync + Send,
        V: Sync,
        P: Fn(&V) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return map.par_iter().filter(|(_, v)| pred(v)).map(|(k, _)| k.clone()).collect();
        }
        map.iter().filter(|(_, v)| pred(v)).map(|(k, _)| k.clone()).collect()
    }
}
