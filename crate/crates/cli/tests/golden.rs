mod common;

/// Set UPDATE_GOLDEN=1 to rewrite the golden transcripts.
#[test]
fn every_case_matches_its_golden_transcript() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let bad = common::golden_mismatches(update);
    assert!(bad.is_empty(), "mismatched golden cases: {bad:?}");
}

#[test]
fn every_subcommand_has_a_case() {
    let subcommands = [
        "validate",
        "encode",
        "hilbert",
        "rank",
        "dual",
        "localize",
        "socle",
        "top",
        "hom",
        "fringe-check",
        "fringe-eval",
        "fringe-of",
        "pullback",
        "decompose",
        "decompose-min",
        "irreducible",
        "qr",
        "recover",
        "elder",
        "barcode",
    ];
    for s in subcommands {
        assert!(common::CASES.iter().any(|(_, args)| args[0] == s), "{s}");
    }
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let code = |name: &str| {
        let (_, args) = common::CASES.iter().find(|(n, _)| *n == name).unwrap();
        common::run_case(args).lines().next().unwrap().to_string()
    };
    assert_eq!(code("validate_module"), "exit: 0");
    assert_eq!(code("validate_noncommuting"), "exit: 1");
    assert_eq!(code("validate_malformed"), "exit: 2");
    assert_eq!(code("unknown_flag"), "exit: 2");
}
