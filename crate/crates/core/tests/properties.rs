mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;

fn setups() -> &'static [Setup] {
    static S: OnceLock<Vec<Setup>> = OnceLock::new();
    S.get_or_init(small_setups)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent(i in 0usize..3, seed in any::<u64>()) {
        normal_form_idempotent(&setups()[i], seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn pullback_is_contravariant(i in 0usize..3, seed in any::<u64>()) {
        pullback_contravariant(&setups()[i], seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn branch_valuation_survives_doubling(i in 0usize..3, seed in any::<u64>()) {
        valuation_stable(&setups()[i], seed).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn group_tables_are_latin_squares() {
    for s in setups() {
        latin_square(&s.g1).unwrap();
        latin_square(&s.g2).unwrap();
    }
}

#[test]
fn alpha_is_an_involution() {
    for s in setups() {
        alpha_involution(s).unwrap();
    }
}
