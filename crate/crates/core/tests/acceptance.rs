use tamechow::acceptance;
use tamechow::sample::DEFAULT_SEED;

#[test]
fn acceptance_criteria() {
    let results = acceptance::run_all(DEFAULT_SEED);
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.ok()).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
