//! Stored canonical documents: parsing and reprinting each fixture must
//! reproduce it byte for byte. Refresh with UPDATE_GOLDEN=1 after an
//! intentional format change.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cacti_cli::doc;
use cacti_core::cactus::{Cactus, Variety};
use cacti_core::rational::{q, qi};

fn fixture(name: &str, c: &Cactus) {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let want = doc::print(c);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &want).expect("fixture dir is writable");
    }
    let stored = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing fixture {name}; rerun with UPDATE_GOLDEN=1"));
    assert_eq!(stored, want, "fixture {name} is stale");
    let parsed = doc::parse(&stored).expect("fixtures are valid documents");
    assert_eq!(doc::print(&parsed), stored, "reprint of {name} changed bytes");
    assert_eq!(parsed, *c);
}

#[test]
fn golden_documents_reprint_byte_for_byte() {
    fixture(
        "doc_chain_cact.json",
        &Cactus::from_word(
            Variety::Cact,
            &[(1, q(1, 3)), (2, q(1, 2)), (1, q(2, 3))],
            &BTreeMap::new(),
        )
        .unwrap(),
    );
    fixture(
        "doc_corolla_cact1.json",
        &Cactus::corolla(Variety::Cact1, &[qi(1), qi(1), qi(1)]).unwrap(),
    );
    fixture(
        "doc_spined_cacti.json",
        &Cactus::from_word(
            Variety::Cacti,
            &[(1, q(1, 4)), (2, qi(1)), (1, q(3, 4)), (3, q(1, 2))],
            &BTreeMap::from([(1, q(1, 2)), (2, q(1, 4)), (3, q(1, 3))]),
        )
        .unwrap(),
    );
}
