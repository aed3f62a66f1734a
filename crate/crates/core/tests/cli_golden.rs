mod common;

use deltapoly::algebra::RingContext;
use deltapoly::lang::parse;

#[test]
fn cli_matches_golden_files() {
    let failures: Vec<String> = common::golden::run_all()
        .into_iter()
        .filter(|r| !r.problems.is_empty())
        .map(|r| format!("{}: {}", r.name, r.problems.join("; ")))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn parser_corpus_is_canonical_and_idempotent() {
    let ring = RingContext::new(2, ["y", "z"]).unwrap();
    let corpus = common::golden::parser_corpus();
    assert_eq!(corpus.len(), 20);
    for (input, canonical) in corpus {
        let printed = parse(&input, &ring).unwrap().to_string();
        assert_eq!(printed, canonical, "{input}");
        assert_eq!(parse(&printed, &ring).unwrap().to_string(), printed);
    }
}
