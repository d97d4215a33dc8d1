use unimono::harness::acceptance::{run_acceptance, AcceptanceOptions};

#[test]
fn every_criterion_passes() {
    let outcomes = run_acceptance(&AcceptanceOptions::default(), |o| println!("{o}"));
    assert_eq!(outcomes.len(), 11);
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.to_string())
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
