//! Reference tables shipped with the crate, pinned by SHA-256.

use sha2::{Digest, Sha256};

use crate::liealg::{LieError, ThinTable};

pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "fsl2", file: "fsl2.txt", text: include_str!("../fixtures/fsl2.txt") },
    Fixture { name: "M1", file: "m1.txt", text: include_str!("../fixtures/m1.txt") },
    Fixture { name: "M2", file: "m2.txt", text: include_str!("../fixtures/m2.txt") },
    Fixture { name: "M3", file: "m3.txt", text: include_str!("../fixtures/m3.txt") },
    Fixture { name: "M4", file: "m4.txt", text: include_str!("../fixtures/m4.txt") },
    Fixture { name: "M4-search", file: "m4_search.txt", text: include_str!("../fixtures/m4_search.txt") },
    Fixture { name: "N1(4)", file: "n1_4.txt", text: include_str!("../fixtures/n1_4.txt") },
];

const SHA256SUMS: &str = include_str!("../fixtures/SHA256SUMS");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Fixture {
    pub fn table(&self) -> Result<ThinTable, LieError> {
        ThinTable::parse_text(self.text)
    }

    pub fn expected_sha256(&self) -> Option<&'static str> {
        SHA256SUMS.lines().find_map(|l| {
            let (hash, file) = l.split_once(char::is_whitespace)?;
            (file.trim() == self.file).then_some(hash)
        })
    }

    pub fn checksum_ok(&self) -> bool {
        self.expected_sha256() == Some(sha256_hex(self.text.as_bytes()).as_str())
    }
}

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name.eq_ignore_ascii_case(name))
}

/// Parses a shipped table; panics only if the embedded text is corrupt.
pub fn table(name: &str) -> ThinTable {
    by_name(name)
        .unwrap_or_else(|| panic!("no fixture named {name}"))
        .table()
        .unwrap_or_else(|e| panic!("fixture {name} does not parse: {e}"))
}
