//! The infinite families `N₁(n)` and `N₂(n)` and checks of their structure.
//!
//! For even `n` both algebras are simple; for odd `n` the derived algebra has
//! codimension one, misses `e_α̂` for `α̂ = α₁ + … + αₙ`, and is simple.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::liealg::{inner, norm, LieError, ThinTable};
use crate::meataxe::{self, MeataxeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("n = {0} is out of range")]
    NOutOfRange(usize),
    #[error("conflicting values for T({a}, {b})")]
    Conflict { a: u32, b: u32 },
    #[error("unknown family `{0}` (expected N1 or N2)")]
    UnknownFamily(String),
    #[error(transparent)]
    Table(#[from] LieError),
    #[error(transparent)]
    Meataxe(#[from] MeataxeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    N1,
    N2,
}

impl Family {
    pub fn build(self, n: usize) -> Result<ThinTable, FamilyError> {
        match self {
            Family::N1 => build_n1(n),
            Family::N2 => build_n2(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::N1 => "N1",
            Family::N2 => "N2",
        })
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s.to_ascii_uppercase().as_str() {
            "N1" => Ok(Family::N1),
            "N2" => Ok(Family::N2),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

fn check_n(n: usize) -> Result<(), FamilyError> {
    if (2..=crate::liealg::MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(FamilyError::NOutOfRange(n))
    }
}

/// `T(α,β) = 1` iff both norms are 1, or one norm is 0 and `(α,β) = 1`.
pub fn n1_rule(a: u32, b: u32) -> bool {
    if norm(a) && norm(b) {
        true
    } else {
        inner(a, b)
    }
}

pub fn build_n1(n: usize) -> Result<ThinTable, FamilyError> {
    check_n(n)?;
    Ok(ThinTable::from_fn(n, n1_rule)?)
}

/// The rule for `[e_a, e_b]` with conditions read on `a`, or `None` when no
/// rule applies in this argument order.
fn n2_ordered(top: u32, a: u32, b: u32) -> Option<bool> {
    let (a_top, b_top) = (a & top != 0, b & top != 0);
    if !a_top && norm(a) && norm(b) {
        Some(true)
    } else if !a_top && !norm(a) {
        Some(inner(a, b))
    } else if a_top && b_top {
        Some(!(norm(a) && norm(b)))
    } else {
        None
    }
}

/// `N₂(n)`, with the rules applied to whichever argument meets their
/// condition. No rule covers `a` with `(a,αₙ) = 0, |a| = 1` paired with `b`
/// with `(b,αₙ) = 1, |b| = 0`; those entries use the inner-product rule,
/// which is the only choice compatible with the Jacobi identity.
pub fn build_n2(n: usize) -> Result<ThinTable, FamilyError> {
    check_n(n)?;
    let top = 1u32 << (n - 1);
    let mut conflict = None;
    let t = ThinTable::from_fn(n, |a, b| {
        match (n2_ordered(top, a, b), n2_ordered(top, b, a)) {
            (Some(x), Some(y)) => {
                if x != y && conflict.is_none() {
                    conflict = Some((a, b));
                }
                x
            }
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => inner(a, b),
        }
    })?;
    match conflict {
        Some((a, b)) => Err(FamilyError::Conflict { a, b }),
        None => Ok(t),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClauseCheck {
    pub family: Family,
    pub clause: String,
    pub passed: bool,
    /// False for clauses outside the range the theorems cover (`n < 4`);
    /// those are reported but do not affect the verdict.
    pub claimed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub checks: Vec<ClauseCheck>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.claimed)
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = match (c.passed, c.claimed) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "INFO",
            };
            writeln!(f, "{verdict} {}({}) {}: {}", c.family, self.n, c.clause, c.detail)?;
        }
        Ok(())
    }
}

/// `Σ_{j≠i} ad(e_{α_j})²` acts on each `e_α` as `(α, α_i)`.
pub fn torus_combinations_hold(t: &ThinTable) -> bool {
    let n = t.n();
    let squares: Vec<u64> = (0..n)
        .map(|j| t.square_diagonal(t.index_of(1 << j).expect("standard root present")))
        .collect();
    (0..n).all(|i| {
        let combo = (0..n).filter(|&j| j != i).fold(0u64, |acc, j| acc ^ squares[j]);
        let target = (0..t.dim()).fold(0u64, |acc, c| acc | ((t.root(c) >> i & 1) as u64) << c);
        combo == target
    })
}

pub fn verify_family_theorems(n: usize, seed: u64) -> Result<FamilyReport, FamilyError> {
    check_n(n)?;
    let mut checks = Vec::new();
    for family in [Family::N1, Family::N2] {
        let t = family.build(n)?;
        let mut push = |clause: &str, passed: bool, detail: String| {
            let claimed = n >= 4 || clause == "jacobi" || clause == "contains-N1(n-1)";
            checks.push(ClauseCheck { family, clause: clause.to_string(), passed, claimed, detail });
        };
        let violations = t.jacobi_violations().len();
        push("jacobi", violations == 0, format!("{violations} violating triples"));
        if n.is_multiple_of(2) {
            let simple = meataxe::is_simple(&t, seed)?;
            push("simple", simple.is_simple(), format!("dim {}", t.dim()));
            let decomposition = t.verify_thin_decomposition();
            push(
                "thin-decomposition",
                decomposition.is_some(),
                "coordinate functions in the span of ad(e_a)^2".to_string(),
            );
            push(
                "torus-combinations",
                torus_combinations_hold(&t),
                "sum over j != i of ad(e_{a_j})^2 acts as (a, a_i)".to_string(),
            );
        } else {
            let hat = (1u32 << n) - 1;
            let derived = t.derived_roots();
            let expected_dim = (1usize << n) - 2;
            let missing_hat_only = derived.len() == expected_dim && !derived.contains(&hat);
            push(
                "derived-codim-1",
                missing_hat_only,
                format!("derived dim {}, missing root {hat}", derived.len()),
            );
            match t.subalgebra_table(&derived) {
                Ok(sub) => {
                    let jac = sub.jacobi_violations().len();
                    push("derived-closed", jac == 0, format!("{jac} violating triples"));
                    let simple = meataxe::is_simple(&sub, seed)?;
                    push("derived-simple", simple.is_simple(), format!("dim {}", sub.dim()));
                }
                Err(e) => push("derived-closed", false, e.to_string()),
            }
        }
        if family == Family::N2 && n >= 3 {
            let top = 1u32 << (n - 1);
            let low: Vec<u32> = t.roots().iter().copied().filter(|r| r & top == 0).collect();
            let embedded = match (t.subalgebra_table(&low), build_n1(n - 1)) {
                (Ok(sub), Ok(n1)) => sub.rows() == n1.rows(),
                _ => false,
            };
            push("contains-N1(n-1)", embedded, "restriction to (a, a_n) = 0".to_string());
        }
    }
    Ok(FamilyReport { n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_of_2_is_fsl2() {
        assert_eq!(build_n1(2).unwrap(), ThinTable::from_fn(2, |_, _| true).unwrap());
    }

    #[test]
    fn n1_4_sample_brackets() {
        let t = build_n1(4).unwrap();
        assert!(t.get(0b0101, 0b0011));
        assert_eq!(t.bracket_basis(t.index_of(0b0101).unwrap(), t.index_of(0b0011).unwrap()), t.index_of(0b0110));
        assert!(t.get(0b0001, 0b0010));
    }

    #[test]
    fn families_satisfy_jacobi() {
        for n in 2..=6 {
            assert!(build_n1(n).unwrap().is_lie_algebra(), "N1({n})");
            assert!(build_n2(n).unwrap().is_lie_algebra(), "N2({n})");
        }
    }

    #[test]
    fn constant_gap_fills_break_jacobi() {
        for fill in [false, true] {
            let top = 1u32 << 3;
            let t = ThinTable::from_fn(4, |a, b| {
                match (n2_ordered(top, a, b), n2_ordered(top, b, a)) {
                    (Some(x), _) | (None, Some(x)) => x,
                    (None, None) => fill,
                }
            })
            .unwrap();
            assert!(!t.is_lie_algebra());
        }
    }

    #[test]
    fn n2_differs_from_n1() {
        let (a, b) = (build_n1(4).unwrap(), build_n2(4).unwrap());
        assert_ne!(a, b);
        assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn n3_derived_algebra_is_reported_but_not_claimed() {
        let r = verify_family_theorems(3, 0).unwrap();
        assert!(r.all_passed());
        let simple = r.checks.iter().find(|c| c.clause == "derived-simple").unwrap();
        assert!(!simple.passed && !simple.claimed);
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("n2".parse::<Family>().unwrap(), Family::N2);
        assert!("N3".parse::<Family>().is_err());
        assert!(matches!(build_n1(1), Err(FamilyError::NOutOfRange(1))));
    }
}
