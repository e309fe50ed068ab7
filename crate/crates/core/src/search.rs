//! Constraint systems whose solutions are exactly the thin tables of a given
//! rank, and their exhaustive enumeration.
//!
//! There is one Boolean variable per unordered pair of distinct roots
//! `α < β`, standing for `T(α, β)`; the diagonal is zero by construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{LieError, ThinTable, MAX_N};
use crate::quad::{self, Equation, QuadSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("n = {0} is out of range (expected 2..={MAX_N})")]
    NOutOfRange(usize),
    #[error("assignment has {found} values, expected {expected}")]
    IncompleteAssignment { expected: usize, found: usize },
    #[error("unknown level `{0}`")]
    UnknownLevel(String),
    #[error(transparent)]
    Table(#[from] LieError),
}

/// Which constraints accompany the Jacobi equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    /// Jacobi only.
    Base,
    /// No zero rows and perfectness.
    SimpleNecessary,
    /// The fsl₂ units on every standard pair, plus no zero rows.
    Taut,
    /// Taut together with perfectness.
    TautSimple,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Base, Level::SimpleNecessary, Level::Taut, Level::TautSimple];

    fn rows(self) -> bool {
        self != Level::Base
    }

    fn perfect(self) -> bool {
        matches!(self, Level::SimpleNecessary | Level::TautSimple)
    }

    fn units(self) -> bool {
        matches!(self, Level::Taut | Level::TautSimple)
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Base => "base",
            Level::SimpleNecessary => "simple",
            Level::Taut => "taut",
            Level::TautSimple => "taut-simple",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        Level::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| SearchError::UnknownLevel(s.to_string()))
    }
}

/// Index of the variable for the unordered pair `{a, b}` of distinct roots.
pub fn pair_var(n: usize, a: u32, b: u32) -> u32 {
    let d = (1u32 << n) - 1;
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    debug_assert!(a >= 1 && b <= d && a != b);
    // Rows 1..a-1 contribute (d - r) variables each.
    let before = (a - 1) * d - (a - 1) * a / 2;
    before + (b - a - 1)
}

/// Inverse of [`pair_var`].
pub fn var_pair(n: usize, v: u32) -> (u32, u32) {
    let d = (1u32 << n) - 1;
    let mut rest = v;
    for a in 1..d {
        let width = d - a;
        if rest < width {
            return (a, a + 1 + rest);
        }
        rest -= width;
    }
    panic!("variable {v} out of range for n = {n}");
}

pub fn num_vars(n: usize) -> usize {
    let d = (1usize << n) - 1;
    d * (d - 1) / 2
}

fn check_n(n: usize) -> Result<(), SearchError> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(SearchError::NOutOfRange(n))
    }
}

/// The Jacobi equation of a basis triple, or `None` when it vanishes
/// identically (repeated roots, or `γ = α + β`).
pub fn jacobi_equation(n: usize, a: u32, b: u32, c: u32) -> Option<Equation> {
    if a == b || b == c || a == c || a ^ b ^ c == 0 {
        return None;
    }
    let v = |x: u32, y: u32| pair_var(n, x, y);
    // [e_a,[e_b,e_c]] + [e_b,[e_c,e_a]] + [e_c,[e_a,e_b]], all landing on e_{a+b+c}.
    Some(Equation::new(
        [
            (v(b, c), v(a, b ^ c)),
            (v(c, a), v(b, c ^ a)),
            (v(a, b), v(c, a ^ b)),
        ],
        false,
    ))
}

pub fn generate_constraints(n: usize, level: Level) -> Result<QuadSystem, SearchError> {
    check_n(n)?;
    let d = (1u32 << n) - 1;
    let mut sys = QuadSystem::new(num_vars(n));
    for a in 1..=d {
        for b in a + 1..=d {
            for c in b + 1..=d {
                if let Some(eq) = jacobi_equation(n, a, b, c) {
                    sys.push_equation(eq);
                }
            }
        }
    }
    if level.rows() {
        for a in 1..=d {
            sys.at_least_one
                .push((1..=d).filter(|&b| b != a).map(|b| pair_var(n, a, b)).collect());
        }
    }
    if level.perfect() {
        // e_α ∈ [L, L] needs some pair {β, α+β} with T(β, α+β) = 1.
        for a in 1..=d {
            sys.at_least_one.push(
                (1..=d)
                    .filter(|&b| b != a && b < (a ^ b))
                    .map(|b| pair_var(n, b, a ^ b))
                    .collect(),
            );
        }
    }
    if level.units() {
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (1u32 << i, 1u32 << j);
                for (p, q) in [(x, y), (x, x | y), (y, x | y)] {
                    sys.fixed.push((pair_var(n, p, q), true));
                }
            }
        }
    }
    Ok(sys)
}

pub fn solution_to_table(n: usize, assignment: &[bool]) -> Result<ThinTable, SearchError> {
    check_n(n)?;
    let expected = num_vars(n);
    if assignment.len() != expected {
        return Err(SearchError::IncompleteAssignment { expected, found: assignment.len() });
    }
    Ok(ThinTable::from_fn(n, |a, b| assignment[pair_var(n, a, b) as usize])?)
}

/// Inverse of [`solution_to_table`] for full tables.
pub fn table_to_assignment(t: &ThinTable) -> Vec<bool> {
    (0..num_vars(t.n()) as u32)
        .map(|v| {
            let (a, b) = var_pair(t.n(), v);
            t.get(a, b)
        })
        .collect()
}

/// Enumerates all solutions, sequentially, in deterministic order.
pub fn enumerate_solutions(
    sys: &QuadSystem,
    limit: Option<u64>,
    on_solution: impl FnMut(&[bool]),
) -> u64 {
    quad::enumerate_solutions(sys, limit, on_solution)
}

/// Enumerates on the rayon pool; the result order matches the sequential run.
pub fn enumerate_solutions_parallel(sys: &QuadSystem, limit: Option<u64>) -> Vec<Vec<bool>> {
    let depth = (rayon::current_num_threads().max(1) * 4).ilog2() as usize + 2;
    quad::enumerate_solutions_parallel(sys, depth, limit)
}

/// All tables of a level, decoded; parallel when `parallel` is set.
pub fn search_tables(n: usize, level: Level, parallel: bool) -> Result<Vec<ThinTable>, SearchError> {
    let sys = generate_constraints(n, level)?;
    let assignments = if parallel {
        enumerate_solutions_parallel(&sys, None)
    } else {
        let mut out = Vec::new();
        enumerate_solutions(&sys, None, |x| out.push(x.to_vec()));
        out
    };
    assignments.iter().map(|x| solution_to_table(n, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Spreadsheet-style column names for the 7×7 grid of `n = 3` entries.
    fn letter_name(a: u32, b: u32) -> String {
        let idx = 7 * (a - 1) + (b - 1);
        let letter = |i: u32| char::from(b'A' + i as u8);
        if idx < 26 {
            letter(idx).to_string()
        } else {
            format!("{}{}", letter(idx / 26 - 1), letter(idx % 26))
        }
    }

    fn named(eq: &Equation) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = eq
            .monomials
            .iter()
            .map(|&(x, y)| {
                let (a, b) = var_pair(3, x);
                let (c, d) = var_pair(3, y);
                let mut pair = [letter_name(a, b), letter_name(c, d)];
                pair.sort();
                (pair[0].clone(), pair[1].clone())
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn letter_names_match_diagonal_convention() {
        let diag: Vec<String> = (1..=7).map(|a| letter_name(a, a)).collect();
        assert_eq!(diag, ["A", "I", "Q", "Y", "AG", "AO", "AW"]);
    }

    #[test]
    fn pair_var_round_trip() {
        for n in 2..=6 {
            let mut seen = 0;
            let d = (1u32 << n) - 1;
            for a in 1..=d {
                for b in a + 1..=d {
                    let v = pair_var(n, a, b);
                    assert_eq!(v, seen);
                    assert_eq!(var_pair(n, v), (a, b));
                    assert_eq!(pair_var(n, b, a), v);
                    seen += 1;
                }
            }
            assert_eq!(seen as usize, num_vars(n));
        }
    }

    #[test]
    fn basis_triple_equation_n3() {
        let eq = jacobi_equation(3, 0b001, 0b010, 0b100).unwrap();
        let expect = vec![
            ("B".to_string(), "R".to_string()),
            ("D".to_string(), "L".to_string()),
            ("F".to_string(), "K".to_string()),
        ];
        assert_eq!(named(&eq), expect);
    }

    #[test]
    fn taut_units_n3() {
        let sys = generate_constraints(3, Level::Taut).unwrap();
        let names: Vec<String> = sys
            .fixed
            .iter()
            .map(|&(v, _)| {
                let (a, b) = var_pair(3, v);
                letter_name(a, b)
            })
            .collect();
        for unit in ["B", "C", "J"] {
            assert!(names.contains(&unit.to_string()), "missing {unit}");
        }
        assert_eq!(sys.fixed.len(), 9);
    }

    #[test]
    fn equation_counts() {
        assert_eq!(generate_constraints(2, Level::Base).unwrap().equations.len(), 0);
        assert_eq!(generate_constraints(3, Level::Base).unwrap().equations.len(), 28);
        assert_eq!(generate_constraints(4, Level::Base).unwrap().equations.len(), 420);
        assert!(matches!(generate_constraints(1, Level::Base), Err(SearchError::NOutOfRange(1))));
        assert!(matches!(generate_constraints(7, Level::Base), Err(SearchError::NOutOfRange(7))));
    }

    #[test]
    fn n2_taut_is_fsl2() {
        let sys = generate_constraints(2, Level::Taut).unwrap();
        let mut sols = Vec::new();
        assert_eq!(enumerate_solutions(&sys, None, |x| sols.push(x.to_vec())), 1);
        let t = solution_to_table(2, &sols[0]).unwrap();
        assert_eq!(t, ThinTable::from_fn(2, |_, _| true).unwrap());
    }

    #[test]
    fn n2_base_matches_truth_table() {
        let sys = generate_constraints(2, Level::Base).unwrap();
        let brute = (0u32..8)
            .filter(|bits| {
                let x: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
                solution_to_table(2, &x).unwrap().is_lie_algebra()
            })
            .count() as u64;
        assert_eq!(enumerate_solutions(&sys, None, |_| {}), brute);
    }

    #[test]
    fn zero_assignment_is_abelian() {
        let t = solution_to_table(3, &[false; 21]).unwrap();
        assert_eq!(t, ThinTable::abelian(3).unwrap());
        assert!(generate_constraints(3, Level::Base)
            .unwrap()
            .is_satisfied_by(&[false; 21]));
        assert!(matches!(
            solution_to_table(3, &[true; 5]),
            Err(SearchError::IncompleteAssignment { expected: 21, found: 5 })
        ));
    }

    #[test]
    fn level_names_parse() {
        for l in Level::ALL {
            assert_eq!(l.name().parse::<Level>().unwrap(), l);
        }
        assert!("nope".parse::<Level>().is_err());
    }
}
