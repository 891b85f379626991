use unialg::corpus::{coefficient_triples, Corpus, DEFAULT_SEED};
use unialg::suites::{run_all, SuiteConfig};

#[test]
fn every_suite_passes_on_the_standard_corpus() {
    let corpus = Corpus::standard(DEFAULT_SEED);
    let triples = coefficient_triples().unwrap();
    let outcomes = run_all(&corpus, &triples, &SuiteConfig::new(DEFAULT_SEED)).unwrap();
    for o in &outcomes {
        println!("{:<22} checks {:>6} failed {:>3} {:?} {:?}", o.name, o.checks, o.failed, o.elapsed, o.notes);
        for f in &o.failures {
            println!("    {f}");
        }
    }
    assert!(outcomes.iter().all(|o| o.passed()));
}
