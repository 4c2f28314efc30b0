use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Query counts: calls to `A`, to `A†`, and to the Boolean oracle `U_f`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryLedger {
    pub calls_a: u64,
    pub calls_a_dagger: u64,
    pub calls_uf: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Calls to `A` and `A†` together.
    pub fn total_algorithm_calls(&self) -> u64 {
        self.calls_a + self.calls_a_dagger
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        *self += *other;
    }
}

impl Add for QueryLedger {
    type Output = QueryLedger;

    fn add(self, rhs: QueryLedger) -> QueryLedger {
        QueryLedger {
            calls_a: self.calls_a + rhs.calls_a,
            calls_a_dagger: self.calls_a_dagger + rhs.calls_a_dagger,
            calls_uf: self.calls_uf + rhs.calls_uf,
        }
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, rhs: QueryLedger) {
        *self = *self + rhs;
    }
}

impl Sum for QueryLedger {
    fn sum<I: Iterator<Item = QueryLedger>>(iter: I) -> Self {
        iter.fold(QueryLedger::default(), Add::add)
    }
}

impl<'a> Sum<&'a QueryLedger> for QueryLedger {
    fn sum<I: Iterator<Item = &'a QueryLedger>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ledger() -> impl Strategy<Value = QueryLedger> {
        (0u64..1 << 40, 0u64..1 << 40, 0u64..1 << 40).prop_map(|(a, b, c)| QueryLedger {
            calls_a: a,
            calls_a_dagger: b,
            calls_uf: c,
        })
    }

    proptest! {
        #[test]
        fn merge_is_associative_and_commutative(a in ledger(), b in ledger(), c in ledger()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a + b, b + a);
            let mut m = a;
            m.merge(&b);
            prop_assert_eq!(m, a + b);
            prop_assert!(m.calls_a >= a.calls_a && m.calls_uf >= a.calls_uf);
        }
    }
}
