//! Golden cases shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

/// (golden name, arguments); fixture file names are resolved against tests/fixtures.
pub const CASES: &[(&str, &[&str])] = &[
    ("validate_module", &["validate", "elder.json"]),
    (
        "validate_downset",
        &["validate", "two_component.json", "--as", "downset"],
    ),
    ("validate_noncommuting", &["validate", "noncommuting.json"]),
    ("validate_malformed", &["validate", "malformed.json"]),
    (
        "encode_module",
        &["encode", "skyscraper_plus_constant.json"],
    ),
    ("encode_iso_uptight", &["encode", "iso_uptight.json"]),
    ("hilbert_elder", &["hilbert", "elder.json", "--at", "1,1"]),
    (
        "hilbert_downset",
        &[
            "hilbert",
            "two_component.json",
            "--at",
            "5,-1",
            "--as",
            "downset",
        ],
    ),
    (
        "rank_free",
        &["rank", "free.json", "--from", "0,0", "--to", "1,1"],
    ),
    (
        "rank_elder_map",
        &[
            "rank",
            "elder.json",
            "--from",
            "1,0",
            "--to",
            "2,1",
            "--map",
        ],
    ),
    ("dual_elder", &["dual", "elder.json"]),
    ("localize_elder", &["localize", "elder.json", "--face", "1"]),
    (
        "localize_support_elder",
        &["localize", "elder.json", "--face", "1", "--support"],
    ),
    (
        "localize_restrict_elder",
        &["localize", "elder.json", "--face", "2", "--restrict"],
    ),
    (
        "localize_downset",
        &["localize", "two_component.json", "--face", "1"],
    ),
    (
        "localize_support_downset",
        &["localize", "two_component.json", "--face=", "--support"],
    ),
    ("socle_elder", &["socle", "elder.json", "--face="]),
    ("top_elder", &["top", "elder.json", "--face="]),
    ("hom_labels", &["hom", "hom_labels.json"]),
    ("hom_inclusion", &["hom", "inclusion.json"]),
    ("fringe_check_elder", &["fringe-check", "elder_fringe.json"]),
    ("fringe_eval_elder", &["fringe-eval", "elder_fringe.json"]),
    ("fringe_of_elder", &["fringe-of", "elder.json"]),
    ("pullback_encoding", &["pullback", "encoding.json"]),
    ("pullback_poset_fringe", &["pullback", "poset_fringe.json"]),
    (
        "decompose_two_component",
        &["decompose", "two_component.json"],
    ),
    (
        "decompose_face",
        &["decompose", "two_component.json", "--face", "1"],
    ),
    ("decompose_module_elder", &["decompose", "elder.json"]),
    (
        "decompose_min_two_component",
        &["decompose-min", "two_component.json"],
    ),
    ("irreducible_staircase", &["irreducible", "staircase.json"]),
    ("qr_elder", &["qr", "elder.json"]),
    ("qr_gen_space", &["qr", "elder.json", "--at", "1,1"]),
    (
        "qr_death_functor",
        &[
            "qr",
            "elder.json",
            "--at",
            "0,1",
            "--phi",
            "1",
            "--death-face",
            "1",
            "--death-at",
            "0,1",
        ],
    ),
    ("recover_elder", &["recover", "elder_qr.json"]),
    ("elder_elder", &["elder", "elder.json", "--at", "1,1"]),
    ("barcode_merging", &["barcode", "merging_bars.json"]),
    (
        "barcode_ascii",
        &["barcode", "merging_bars.json", "--ascii"],
    ),
    (
        "barcode_interval",
        &["barcode", "--interval", "(-inf, 1/2]"],
    ),
    (
        "barcode_projection",
        &[
            "barcode",
            "merging_bars.json",
            "--birth",
            "closed:1",
            "--death",
            "open:2",
        ],
    ),
    ("schema_module", &["--schema", "module"]),
    (
        "unknown_flag",
        &[
            "rank",
            "free.json",
            "--from",
            "0,0",
            "--to",
            "1,1",
            "--frobnicate",
        ],
    ),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Exit code, stdout and stderr in one transcript.
pub fn run_case(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_persistence-kernel"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

/// Names of cases whose transcript differs from the golden file or between two runs.
pub fn golden_mismatches(update: bool) -> Vec<String> {
    let mut bad = Vec::new();
    for (name, args) in CASES {
        let first = run_case(args);
        let path = golden_dir().join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &first).expect("golden dir is writable");
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_default();
        if first != expected || run_case(args) != first {
            bad.push(name.to_string());
        }
    }
    bad
}
