#[path = "support/engine_model.rs"]
mod engine_model;

use engine_model::*;

const CASES: u32 = 1000;

#[test]
fn block_is_a_fold_of_transactions() {
    block_is_a_fold(&mut runner(CASES)).unwrap();
}

#[test]
fn disjoint_transactions_commute() {
    disjoint_commute(&mut runner(CASES)).unwrap();
}

#[test]
fn rejected_transactions_change_nothing() {
    rejection_is_inert(&mut runner(CASES)).unwrap();
}

#[test]
fn transfers_conserve_balances() {
    transfers_conserve(&mut runner(CASES)).unwrap();
}
