//! Boolean polynomial systems of degree at most two over GF(2), with an
//! exhaustive DPLL-style enumerator.
//!
//! The enumerator assigns variables on a trail, substitutes them into every
//! equation and clause that mentions them, and propagates:
//! an equation with one undetermined monomial left fixes that monomial, and
//! an at-least-one clause with one open literal left forces it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A product `x_a · x_b`; `a == b` encodes the linear monomial `x_a`.
pub type Monomial = (u32, u32);

/// `Σ monomials + constant ≡ 0 (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub monomials: Vec<Monomial>,
    pub constant: bool,
}

impl Equation {
    /// Normalizes `x·x` to `x`, orders each pair, and cancels repeats mod 2.
    pub fn new(monomials: impl IntoIterator<Item = Monomial>, constant: bool) -> Self {
        let mut set = BTreeSet::new();
        for (a, b) in monomials {
            let m = if a <= b { (a, b) } else { (b, a) };
            if !set.remove(&m) {
                set.insert(m);
            }
        }
        Self { monomials: set.into_iter().collect(), constant }
    }

    /// Zero equation with no monomials and constant 0.
    pub fn is_trivial(&self) -> bool {
        self.monomials.is_empty() && !self.constant
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.monomials
            .iter()
            .fold(self.constant, |acc, &(a, b)| acc ^ (x[a as usize] & x[b as usize]))
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().flat_map(|&(a, b)| if a == b { vec![a] } else { vec![a, b] })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSystem {
    pub num_vars: usize,
    pub equations: Vec<Equation>,
    /// Each set must contain at least one variable equal to 1.
    pub at_least_one: Vec<Vec<u32>>,
    /// Unit assignments.
    pub fixed: Vec<(u32, bool)>,
}

impl QuadSystem {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, ..Self::default() }
    }

    /// Adds an equation unless it is trivially `0 = 0` or already present.
    pub fn push_equation(&mut self, eq: Equation) {
        if !eq.is_trivial() {
            self.equations.push(eq);
        }
    }

    /// Sorts and removes duplicate equations.
    pub fn dedup(&mut self) {
        self.equations.sort();
        self.equations.dedup();
    }

    pub fn is_satisfied_by(&self, x: &[bool]) -> bool {
        x.len() == self.num_vars
            && self.equations.iter().all(|e| !e.eval(x))
            && self.at_least_one.iter().all(|c| c.iter().any(|&v| x[v as usize]))
            && self.fixed.iter().all(|&(v, b)| x[v as usize] == b)
    }

    /// Number of satisfying assignments by plain truth-table evaluation.
    pub fn brute_force_count(&self) -> u64 {
        assert!(self.num_vars <= 24, "truth table too large");
        let mut x = vec![false; self.num_vars];
        let mut count = 0;
        for bits in 0u64..1 << self.num_vars {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = bits >> i & 1 == 1;
            }
            if self.is_satisfied_by(&x) {
                count += 1;
            }
        }
        count
    }
}

const UNSET: u8 = 2;

struct Prepared {
    num_vars: usize,
    equations: Vec<Equation>,
    clauses: Vec<Vec<u32>>,
    var_eqs: Vec<Vec<u32>>,
    var_clauses: Vec<Vec<u32>>,
}

impl Prepared {
    fn new(sys: &QuadSystem) -> Self {
        let n = sys.num_vars;
        let mut var_eqs = vec![Vec::new(); n];
        for (i, e) in sys.equations.iter().enumerate() {
            let vars: BTreeSet<u32> = e.vars().collect();
            for v in vars {
                var_eqs[v as usize].push(i as u32);
            }
        }
        let mut var_clauses = vec![Vec::new(); n];
        for (i, c) in sys.at_least_one.iter().enumerate() {
            for &v in c {
                var_clauses[v as usize].push(i as u32);
            }
        }
        Self {
            num_vars: n,
            equations: sys.equations.clone(),
            clauses: sys.at_least_one.clone(),
            var_eqs,
            var_clauses,
        }
    }
}

struct Solver<'a> {
    p: &'a Prepared,
    value: Vec<u8>,
    trail: Vec<u32>,
    head: usize,
}

impl<'a> Solver<'a> {
    fn new(p: &'a Prepared) -> Self {
        Self { p, value: vec![UNSET; p.num_vars], trail: Vec::new(), head: 0 }
    }

    #[inline]
    fn set(&mut self, v: u32, b: bool) -> bool {
        match self.value[v as usize] {
            UNSET => {
                self.value[v as usize] = b as u8;
                self.trail.push(v);
                true
            }
            cur => cur == b as u8,
        }
    }

    fn undo(&mut self, mark: usize) {
        for &v in &self.trail[mark..] {
            self.value[v as usize] = UNSET;
        }
        self.trail.truncate(mark);
        self.head = mark;
    }

    fn check_equation(&mut self, ei: usize) -> bool {
        let eq = &self.p.equations[ei];
        let mut parity = eq.constant;
        let mut open = 0;
        let mut last = (0u32, 0u32);
        for &(a, b) in &eq.monomials {
            let va = self.value[a as usize];
            let vb = self.value[b as usize];
            if va == 0 || vb == 0 {
                continue;
            }
            if va == 1 && vb == 1 {
                parity = !parity;
            } else {
                open += 1;
                if open > 1 {
                    return true;
                }
                last = (a, b);
            }
        }
        match open {
            0 => !parity,
            _ => {
                // The open monomial must equal `parity`.
                let (a, b) = last;
                if a == b {
                    self.set(a, parity)
                } else if self.value[a as usize] == 1 {
                    self.set(b, parity)
                } else if self.value[b as usize] == 1 {
                    self.set(a, parity)
                } else if parity {
                    self.set(a, true) && self.set(b, true)
                } else {
                    true
                }
            }
        }
    }

    fn check_clause(&mut self, ci: usize) -> bool {
        let mut open = None;
        let mut open_count = 0;
        for &v in &self.p.clauses[ci] {
            match self.value[v as usize] {
                1 => return true,
                0 => {}
                _ => {
                    open_count += 1;
                    open = Some(v);
                }
            }
        }
        match open_count {
            0 => false,
            1 => self.set(open.expect("one open literal"), true),
            _ => true,
        }
    }

    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let v = self.trail[self.head] as usize;
            self.head += 1;
            for k in 0..self.p.var_eqs[v].len() {
                let ei = self.p.var_eqs[v][k] as usize;
                if !self.check_equation(ei) {
                    return false;
                }
            }
            for k in 0..self.p.var_clauses[v].len() {
                let ci = self.p.var_clauses[v][k] as usize;
                if !self.check_clause(ci) {
                    return false;
                }
            }
        }
        true
    }

    /// Full consistency pass used at the root, where nothing is on the trail yet.
    fn initial(&mut self, fixed: &[(u32, bool)]) -> bool {
        for &(v, b) in fixed {
            if !self.set(v, b) {
                return false;
            }
        }
        for ei in 0..self.p.equations.len() {
            if !self.check_equation(ei) {
                return false;
            }
        }
        for ci in 0..self.p.clauses.len() {
            if !self.check_clause(ci) {
                return false;
            }
        }
        self.propagate()
    }

    fn assign_and_propagate(&mut self, v: u32, b: bool) -> bool {
        self.set(v, b) && self.propagate()
    }

    /// Unassigned variable with the most occurrences in unresolved equations,
    /// ties broken by lowest index; falls back to the lowest unassigned one.
    fn choose(&self) -> Option<u32> {
        let mut score = vec![0u32; self.p.num_vars];
        let mut any = false;
        for e in &self.p.equations {
            let mut unresolved = false;
            for &(a, b) in &e.monomials {
                let (va, vb) = (self.value[a as usize], self.value[b as usize]);
                if (va == UNSET || vb == UNSET) && va != 0 && vb != 0 {
                    unresolved = true;
                    break;
                }
            }
            if !unresolved {
                continue;
            }
            for v in e.vars() {
                if self.value[v as usize] == UNSET {
                    score[v as usize] += 1;
                    any = true;
                }
            }
        }
        if any {
            let mut best = 0usize;
            for v in 1..self.p.num_vars {
                if score[v] > score[best] {
                    best = v;
                }
            }
            return Some(best as u32);
        }
        self.value.iter().position(|&x| x == UNSET).map(|v| v as u32)
    }

    fn solution(&self) -> Vec<bool> {
        self.value.iter().map(|&x| x == 1).collect()
    }

    /// Enumerates the subtree below the current state. Returns false when the
    /// visitor asked to stop.
    fn enumerate(&mut self, visit: &mut dyn FnMut(Vec<bool>) -> bool) -> bool {
        let Some(v) = self.choose() else {
            return visit(self.solution());
        };
        for b in [false, true] {
            let mark = self.trail.len();
            if self.assign_and_propagate(v, b) && !self.enumerate(visit) {
                self.undo(mark);
                return false;
            }
            self.undo(mark);
        }
        true
    }

    /// Counts the subtree, skipping over variables that no open equation or
    /// clause mentions.
    fn count(&mut self) -> u128 {
        if self.all_resolved() {
            let free = self.value.iter().filter(|&&x| x == UNSET).count();
            return 1u128 << free;
        }
        let v = self.choose().expect("unresolved constraint has an open variable");
        let mut total = 0;
        for b in [false, true] {
            let mark = self.trail.len();
            if self.assign_and_propagate(v, b) {
                total += self.count();
            }
            self.undo(mark);
        }
        total
    }

    fn all_resolved(&self) -> bool {
        let clauses_done = self
            .p
            .clauses
            .iter()
            .all(|c| c.iter().any(|&v| self.value[v as usize] == 1));
        clauses_done
            && self.p.equations.iter().all(|e| {
                e.monomials.iter().all(|&(a, b)| {
                    let (va, vb) = (self.value[a as usize], self.value[b as usize]);
                    va == 0 || vb == 0 || (va == 1 && vb == 1)
                })
            })
    }

    /// Collects the decision paths at depth `depth` (or shallower leaves).
    fn split(&mut self, depth: usize, path: &mut Vec<(u32, bool)>, out: &mut Vec<Vec<(u32, bool)>>) {
        if depth == 0 {
            out.push(path.clone());
            return;
        }
        let Some(v) = self.choose() else {
            out.push(path.clone());
            return;
        };
        for b in [false, true] {
            let mark = self.trail.len();
            if self.assign_and_propagate(v, b) {
                path.push((v, b));
                self.split(depth - 1, path, out);
                path.pop();
            }
            self.undo(mark);
        }
    }
}

/// Visits every satisfying assignment once, in a fixed order (branch 0 before
/// 1). Stops after `limit` solutions when given. Returns the number visited.
pub fn enumerate_solutions(
    sys: &QuadSystem,
    limit: Option<u64>,
    mut on_solution: impl FnMut(&[bool]),
) -> u64 {
    let p = Prepared::new(sys);
    let mut s = Solver::new(&p);
    if !s.initial(&sys.fixed) {
        return 0;
    }
    let mut count = 0u64;
    if limit == Some(0) {
        return 0;
    }
    s.enumerate(&mut |x| {
        on_solution(&x);
        count += 1;
        limit.is_none_or(|l| count < l)
    });
    count
}

/// Parallel enumeration: the tree is cut after `split_depth` decisions and
/// the subtrees run on the rayon pool. Solutions come back in the same order
/// as [`enumerate_solutions`].
pub fn enumerate_solutions_parallel(
    sys: &QuadSystem,
    split_depth: usize,
    limit: Option<u64>,
) -> Vec<Vec<bool>> {
    let p = Prepared::new(sys);
    let mut root = Solver::new(&p);
    if !root.initial(&sys.fixed) {
        return Vec::new();
    }
    let mut paths = Vec::new();
    root.split(split_depth, &mut Vec::new(), &mut paths);
    let base_mark = root.trail.clone();
    let chunks: Vec<Vec<Vec<bool>>> = paths
        .par_iter()
        .map(|path| {
            let mut s = Solver::new(&p);
            for &v in &base_mark {
                s.set(v, root.value[v as usize] == 1);
            }
            s.head = s.trail.len();
            for &(v, b) in path {
                let ok = s.assign_and_propagate(v, b);
                debug_assert!(ok, "replayed path must stay consistent");
            }
            let mut out = Vec::new();
            s.enumerate(&mut |x| {
                out.push(x);
                limit.is_none_or(|l| (out.len() as u64) < l)
            });
            out
        })
        .collect();
    let mut all: Vec<Vec<bool>> = chunks.into_iter().flatten().collect();
    if let Some(l) = limit {
        all.truncate(l as usize);
    }
    all
}

/// Number of satisfying assignments, without materializing them.
pub fn count_solutions(sys: &QuadSystem) -> u128 {
    let p = Prepared::new(sys);
    let mut s = Solver::new(&p);
    if !s.initial(&sys.fixed) {
        return 0;
    }
    s.count()
}
