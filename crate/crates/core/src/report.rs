//! Expected-versus-computed reports used by the command-line tool and the
//! acceptance suite.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon;
use crate::families::{self, Family};
use crate::fixtures;
use crate::invariants::{self, Fingerprint, LocusMode};
use crate::liealg::{LieError, ThinTable};
use crate::meataxe;
use crate::search::{self, Level};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let passed = expected == computed;
        Check { name: name.into(), expected, computed, passed }
    }

    pub fn flag(name: impl Into<String>, passed: bool, computed: impl fmt::Display) -> Self {
        Check { name: name.into(), expected: "true".into(), computed: computed.to_string(), passed }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, key: &str, value: impl fmt::Display) {
        self.inputs.push((key.to_string(), value.to_string()));
    }

    pub fn result(&mut self, key: &str, value: impl fmt::Display) {
        self.results.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Plain-text rendering. With `stable` the wall-clock line is omitted so
    /// repeated runs are byte-identical.
    pub fn render(&self, stable: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "input {k}: {v}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(s, "{k}: {v}");
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{verdict} {}: expected {}, computed {}", c.name, c.expected, c.computed);
        }
        if !self.checks.is_empty() {
            let failed = self.failures().count();
            let _ = writeln!(s, "summary: {} pass, {failed} fail", self.checks.len() - failed);
            for c in self.failures() {
                let _ = writeln!(s, "failed: {}", c.name);
            }
        }
        if let (false, Some(t)) = (stable, self.elapsed) {
            let _ = writeln!(s, "elapsed: {:.3}s", t.as_secs_f64());
        }
        s
    }
}

/// Names the table invariant a construction error violates, or `None` when
/// the error is a format problem rather than a mathematical one.
pub fn violated_invariant(e: &LieError) -> Option<&'static str> {
    match e {
        LieError::Asymmetric { .. } => Some("symmetry"),
        LieError::NonzeroDiagonal(_) => Some("zero-diagonal"),
        LieError::NotClosed { .. } => Some("root-closure"),
        _ => None,
    }
}

/// Validates a table file and reports simplicity and fingerprint.
/// Returns `Err` only for input that does not parse.
pub fn verify_fixture(label: &str, text: &str, seed: u64) -> Result<RunReport, LieError> {
    let start = Instant::now();
    let mut r = RunReport::new("verify-fixture");
    r.input("file", label);
    r.input("seed", seed);
    let t = match ThinTable::parse_any(text) {
        Ok(t) => t,
        Err(e) => match violated_invariant(&e) {
            Some(which) => {
                r.check(Check::flag(which, false, e));
                r.elapsed = Some(start.elapsed());
                return Ok(r);
            }
            None => return Err(e),
        },
    };
    r.check(Check::flag("symmetry", true, "ok"));
    r.check(Check::flag("zero-diagonal", true, "ok"));
    let violations = t.jacobi_violations();
    r.check(Check::new("jacobi", "0 violating triples", format!("{} violating triples", violations.len())));
    if violations.is_empty() {
        match meataxe::is_simple(&t, seed) {
            Ok(meataxe::Simplicity::Simple) => r.result("simplicity", "simple"),
            Ok(meataxe::Simplicity::NotSimple(w)) => {
                r.result("simplicity", format!("not-simple (ideal of dimension {})", w.dim()))
            }
            Err(e) => r.result("simplicity", format!("undetermined ({e})")),
        }
        r.result("fingerprint", invariants::fingerprint(&t));
    }
    r.elapsed = Some(start.elapsed());
    Ok(r)
}

/// Values the tables and their derived algebras are expected to have.
pub mod expected {
    pub const N3_BASE: u64 = 2781;
    pub const N3_TAUT: u64 = 10;
    pub const N3_SIMPLE_CLASSES: usize = 1;
    pub const FSL2_COUNTS: (u64, u64) = (1, 2);
    pub const N3_SIMPLE_COUNTS: (u64, u64) = (4, 3);
    pub const N4_PAIRS: [(u64, u64); 6] = [(152, 97), (96, 49), (64, 41), (64, 25), (80, 57), (80, 73)];
    pub const N4_LARGEST_DER: usize = 20;
    /// `(name, nilpotent2, toral)`; toral is only pinned for the first two.
    pub const M_COUNTS: [(&str, u64, Option<u64>); 4] = [
        ("M1", 18176, Some(7169)),
        ("M2", 36864, Some(10241)),
        ("M3", 23296, None),
        ("M4", 38912, None),
    ];
    pub const N2_4_COUNTS: (u64, u64) = (80, 57);
    pub const DERIVED_N1_5: (usize, u64, u64) = (30, 17664, 9217);
}

fn counts(f: &Fingerprint) -> String {
    format!("({}, {})", f.nilpotent2, f.toral)
}

fn simple_tables(tables: Vec<ThinTable>, seed: u64) -> Vec<ThinTable> {
    tables
        .into_iter()
        .filter(|t| meataxe::is_simple(t, seed).map(|s| s.is_simple()).unwrap_or(false))
        .collect()
}

pub fn criterion_n3_base(parallel: bool) -> Vec<Check> {
    let count = search::search_tables(3, Level::Base, parallel).map(|v| v.len()).unwrap_or(0);
    vec![Check::new("n=3 base solutions", expected::N3_BASE, count)]
}

pub fn criterion_n3_taut(parallel: bool, seed: u64) -> Vec<Check> {
    let tables = search::search_tables(3, Level::Taut, parallel).unwrap_or_default();
    let n_taut = tables.len();
    let simple = simple_tables(tables, seed);
    let n_simple = simple.len();
    let classes = canon::classify(&simple).map(|c| c.classes.len()).unwrap_or(0);
    vec![
        Check::new("n=3 taut solutions", expected::N3_TAUT, n_taut),
        Check::new(
            "n=3 simple taut classes",
            expected::N3_SIMPLE_CLASSES,
            format!("{classes}"),
        ),
        Check::flag("n=3 simple taut tables found", n_simple > 0, n_simple),
    ]
}

pub fn criterion_small_counts(parallel: bool, seed: u64) -> Vec<Check> {
    let fsl2 = invariants::fingerprint(&fixtures::table("fsl2"));
    let mut checks = vec![Check::new(
        "fsl2 (nilpotent2, toral)",
        format!("{:?}", expected::FSL2_COUNTS),
        counts(&fsl2),
    )];
    let tables = search::search_tables(3, Level::Taut, parallel).unwrap_or_default();
    let mut pairs: Vec<String> =
        simple_tables(tables, seed).iter().map(|t| counts(&invariants::fingerprint(t))).collect();
    pairs.sort();
    pairs.dedup();
    checks.push(Check::new(
        "n=3 simple (nilpotent2, toral)",
        format!("{:?}", expected::N3_SIMPLE_COUNTS),
        pairs.join(" "),
    ));
    checks
}

pub fn criterion_n4_classes(parallel: bool, seed: u64) -> Vec<Check> {
    let tables = search::search_tables(4, Level::Taut, parallel).unwrap_or_default();
    let simple = simple_tables(tables, seed);
    let classification = match canon::classify(&simple) {
        Ok(c) => c,
        Err(e) => return vec![Check::flag("n=4 classification", false, e)],
    };
    let mut found: Vec<(u64, u64)> =
        classification.classes.iter().map(|c| (c.fingerprint.nilpotent2, c.fingerprint.toral)).collect();
    found.sort_unstable();
    found.dedup();
    let mut checks: Vec<Check> = expected::N4_PAIRS
        .iter()
        .map(|p| Check::flag(format!("n=4 class with (nilpotent2, toral) = {p:?}"), found.contains(p), found.contains(p)))
        .collect();
    let der = classification
        .classes
        .iter()
        .find(|c| c.fingerprint.nilpotent2 == 152)
        .map_or("none".to_string(), |c| c.fingerprint.der_alg_dim.to_string());
    checks.push(Check::new("n=4 152-class derivation algebra dimension", expected::N4_LARGEST_DER, der));
    checks
}

pub fn criterion_fixtures(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, nil2, toral) in expected::M_COUNTS {
        let t = fixtures::table(name);
        checks.push(Check::new(format!("{name} jacobi violations"), 0, t.jacobi_violations().len()));
        let simple = meataxe::is_simple(&t, seed).map(|s| s.is_simple());
        checks.push(Check::new(format!("{name} simple"), "Ok(true)", format!("{simple:?}")));
        checks.push(Check::new(
            format!("{name} nilpotent2"),
            nil2,
            invariants::count_locus(&t, LocusMode::Nilpotent2),
        ));
        if let Some(toral) = toral {
            checks.push(Check::new(format!("{name} toral"), toral, invariants::count_locus(&t, LocusMode::Toral)));
        }
    }
    checks
}

pub fn criterion_families_n4() -> Vec<Check> {
    let n1 = families::build_n1(4).map(|t| t.rows().to_vec());
    let fixture = fixtures::table("N1(4)").rows().to_vec();
    let n2 = families::build_n2(4).map(|t| counts(&invariants::fingerprint(&t)));
    vec![
        Check::flag("N1(4) equals the reference table", n1.as_ref() == Ok(&fixture), n1.is_ok()),
        Check::new(
            "N2(4) (nilpotent2, toral)",
            format!("{:?}", expected::N2_4_COUNTS),
            n2.unwrap_or_else(|e| e.to_string()),
        ),
    ]
}

pub fn criterion_family_theorems(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for n in [4, 6] {
        for family in [Family::N1, Family::N2] {
            let verdict = family.build(n).map_err(|e| e.to_string()).and_then(|t| {
                let simple = meataxe::is_simple(&t, seed).map_err(|e| e.to_string())?.is_simple();
                Ok((simple, t.verify_thin_decomposition().is_some()))
            });
            checks.push(Check::new(format!("{family}({n}) simple, thin decomposition"), "Ok((true, true))", format!("{verdict:?}")));
        }
    }
    let derived = |family: Family| -> Result<ThinTable, String> {
        let t = family.build(5).map_err(|e| e.to_string())?;
        t.subalgebra_table(&t.derived_roots()).map_err(|e| e.to_string())
    };
    match derived(Family::N1) {
        Ok(d) => {
            let simple = meataxe::is_simple(&d, seed).map(|s| s.is_simple());
            let f = invariants::fingerprint(&d);
            checks.push(Check::new(
                "D(N1(5)) (dim, nilpotent2, toral)",
                format!("{:?}", expected::DERIVED_N1_5),
                format!("({}, {}, {})", f.dim, f.nilpotent2, f.toral),
            ));
            checks.push(Check::new("D(N1(5)) simple", "Ok(true)", format!("{simple:?}")));
        }
        Err(e) => checks.push(Check::flag("D(N1(5))", false, e)),
    }
    match derived(Family::N2) {
        Ok(d) => {
            let simple = meataxe::is_simple(&d, seed).map(|s| s.is_simple());
            checks.push(Check::new("D(N2(5)) dim", 30, d.dim()));
            checks.push(Check::new("D(N2(5)) simple", "Ok(true)", format!("{simple:?}")));
        }
        Err(e) => checks.push(Check::flag("D(N2(5))", false, e)),
    }
    checks
}

/// Runs the full acceptance set, except the n = 5 search.
pub fn reproduce_all(seed: u64, parallel: bool) -> RunReport {
    let start = Instant::now();
    let mut r = RunReport::new("reproduce-all");
    r.input("seed", seed);
    r.input("parallel", parallel);
    let checksum_failures: Vec<&str> =
        fixtures::FIXTURES.iter().filter(|f| !f.checksum_ok()).map(|f| f.file).collect();
    r.check(Check::new("fixture checksums", "[]", format!("{checksum_failures:?}")));
    for c in criterion_n3_base(parallel)
        .into_iter()
        .chain(criterion_n3_taut(parallel, seed))
        .chain(criterion_small_counts(parallel, seed))
        .chain(criterion_n4_classes(parallel, seed))
        .chain(criterion_fixtures(seed))
        .chain(criterion_families_n4())
        .chain(criterion_family_theorems(seed))
    {
        r.check(c);
    }
    let m4_search = invariants::fingerprint(&fixtures::table("M4-search"));
    r.result("M4-search (nilpotent2, toral)", counts(&m4_search));
    r.elapsed = Some(start.elapsed());
    r
}

/// A reproducible sample of `k` distinct valid `n = 3` tables.
pub fn sample_n3_tables(k: usize, seed: u64) -> Vec<ThinTable> {
    let mut all = search::search_tables(3, Level::Base, false).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    all.truncate(k);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_render_has_no_clock() {
        let mut r = RunReport::new("x");
        r.check(Check::new("a", 1, 1));
        r.elapsed = Some(Duration::from_millis(5));
        assert!(!r.render(true).contains("elapsed"));
        assert!(r.render(false).contains("elapsed"));
        assert_eq!(r.exit_code(), 0);
        r.check(Check::new("b", 1, 2));
        assert_eq!(r.exit_code(), 1);
        assert!(r.render(true).contains("failed: b"));
    }

    #[test]
    fn asymmetric_file_names_symmetry() {
        let r = verify_fixture("t", "n = 2\n0 1 0\n0 0 1\n0 1 0\n", 0).unwrap();
        let c = r.failures().next().unwrap();
        assert_eq!(c.name, "symmetry");
    }

    #[test]
    fn malformed_file_is_a_parse_error() {
        assert!(matches!(verify_fixture("t", "n = 2\n0 1\n", 0), Err(LieError::Parse { .. })));
    }

    #[test]
    fn fsl2_fixture_report() {
        let text = fixtures::by_name("fsl2").unwrap().text;
        let r = verify_fixture("fsl2", text, 0).unwrap();
        assert!(r.all_passed());
        assert!(r.render(true).contains("simplicity: simple"));
        assert!(r.render(true).contains("nil2=1 toral=2"));
    }
}
