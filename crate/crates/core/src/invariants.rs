//! Counting 2-nilpotent and toral elements, and the resulting fingerprints.
//!
//! With `X = Σ λ_α ad(e_α)`, an element is 2-nilpotent when `X² = 0` and
//! toral when `X² = X`. Both loci are cut out by quadratic equations in the
//! `λ_α`, counted here by linear elimination plus branching. The zero element
//! satisfies both, so counts are at least 1.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::ones;
use crate::liealg::ThinTable;
use crate::quad::{self, Equation, QuadSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("dimension {0} is too large for exhaustive counting (limit {BRUTE_FORCE_MAX_DIM})")]
    TooLarge(usize),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
}

pub const BRUTE_FORCE_MAX_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocusMode {
    Nilpotent2,
    Toral,
}

impl LocusMode {
    pub fn name(self) -> &'static str {
        match self {
            LocusMode::Nilpotent2 => "nilpotent2",
            LocusMode::Toral => "toral",
        }
    }
}

impl fmt::Display for LocusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LocusMode {
    type Err = InvariantError;

    fn from_str(s: &str) -> Result<Self, InvariantError> {
        match s {
            "nilpotent2" => Ok(LocusMode::Nilpotent2),
            "toral" => Ok(LocusMode::Toral),
            _ => Err(InvariantError::UnknownMode(s.to_string())),
        }
    }
}

/// Entries of `X²` (or `X² + X`) as equations in one variable per basis vector.
pub fn build_locus_system(t: &ThinTable, mode: LocusMode) -> QuadSystem {
    let d = t.dim();
    // x_entry[r][c] = Some(a) when X_{r,c} = λ_a.
    let entry = |r: usize, c: usize| -> Option<u32> {
        let a = t.sum_index(r, c)?;
        t.bit(a, c).then_some(a as u32)
    };
    let mut sys = QuadSystem::new(d);
    for r in 0..d {
        for c in 0..d {
            let mut monomials = Vec::new();
            for k in 0..d {
                if let (Some(a), Some(b)) = (entry(r, k), entry(k, c)) {
                    monomials.push((a, b));
                }
            }
            if mode == LocusMode::Toral {
                if let Some(a) = entry(r, c) {
                    monomials.push((a, a));
                }
            }
            sys.push_equation(Equation::new(monomials, false));
        }
    }
    sys.dedup();
    sys
}

/// Quadratic polynomial over at most 64 variables: `Σ quad + lin + c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Poly {
    quad: Vec<(u8, u8)>,
    lin: u64,
    c: bool,
}

impl Poly {
    fn from_equation(e: &Equation) -> Self {
        let mut quad = Vec::new();
        let mut lin = 0u64;
        for &(a, b) in &e.monomials {
            if a == b {
                lin ^= 1 << a;
            } else {
                quad.push((a as u8, b as u8));
            }
        }
        quad.sort_unstable();
        Poly { quad, lin, c: e.constant }
    }

    fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.lin == 0 && !self.c
    }

    /// Substitutes `x_v = Σ_{z ∈ mask} x_z + k`.
    fn substitute(&mut self, v: usize, mask: u64, k: bool) {
        if self.lin >> v & 1 == 1 {
            self.lin ^= 1 << v ^ mask;
            self.c ^= k;
        }
        if !self.quad.iter().any(|&(a, b)| a as usize == v || b as usize == v) {
            return;
        }
        let mut toggles: Vec<(u8, u8)> = Vec::with_capacity(self.quad.len() + 8);
        for &(a, b) in &self.quad {
            let other = if a as usize == v {
                b
            } else if b as usize == v {
                a
            } else {
                toggles.push((a, b));
                continue;
            };
            // other · (mask + k)
            if k {
                self.lin ^= 1 << other;
            }
            for z in ones(mask) {
                let z = z as u8;
                if z == other {
                    self.lin ^= 1 << z;
                } else {
                    toggles.push((z.min(other), z.max(other)));
                }
            }
        }
        toggles.sort_unstable();
        self.quad.clear();
        let mut i = 0;
        while i < toggles.len() {
            let mut j = i;
            while j < toggles.len() && toggles[j] == toggles[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                self.quad.push(toggles[i]);
            }
            i = j;
        }
    }
}

/// Polys with the set of still-unassigned variables.
#[derive(Clone)]
struct State {
    polys: Vec<Poly>,
    free: u64,
}

impl State {
    /// Eliminates linear polynomials until none remain. Returns false on `1 = 0`.
    fn simplify(&mut self) -> bool {
        loop {
            let mut pivots: Vec<(u64, bool)> = Vec::new();
            let mut keep = Vec::with_capacity(self.polys.len());
            for p in self.polys.drain(..) {
                if !p.quad.is_empty() {
                    keep.push(p);
                    continue;
                }
                let (mut lin, mut c) = (p.lin, p.c);
                for &(row, rc) in &pivots {
                    if lin >> row.trailing_zeros() & 1 == 1 {
                        lin ^= row;
                        c ^= rc;
                    }
                }
                if lin == 0 {
                    if c {
                        return false;
                    }
                    continue;
                }
                let pv = lin.trailing_zeros();
                for entry in pivots.iter_mut() {
                    if entry.0 >> pv & 1 == 1 {
                        entry.0 ^= lin;
                        entry.1 ^= c;
                    }
                }
                pivots.push((lin, c));
            }
            self.polys = keep;
            if pivots.is_empty() {
                return true;
            }
            for (row, c) in pivots {
                let v = row.trailing_zeros() as usize;
                let mask = row & !(1u64 << v);
                self.free &= !(1u64 << v);
                for p in self.polys.iter_mut() {
                    p.substitute(v, mask, c);
                }
            }
            self.polys.retain(|p| !p.is_zero());
            if self.polys.iter().any(|p| p.quad.is_empty() && p.lin == 0 && p.c) {
                return false;
            }
            self.polys.sort_unstable();
            self.polys.dedup();
        }
    }

    fn branch_var(&self) -> usize {
        let mut score = [0u32; 64];
        for p in &self.polys {
            for &(a, b) in &p.quad {
                score[a as usize] += 1;
                score[b as usize] += 1;
            }
        }
        let mut best = None;
        for v in ones(self.free) {
            if best.is_none_or(|b: usize| score[v] > score[b]) {
                best = Some(v);
            }
        }
        best.expect("open polynomials have free variables")
    }

    fn assign(&self, v: usize, value: bool) -> State {
        let mut next = self.clone();
        next.free &= !(1u64 << v);
        for p in next.polys.iter_mut() {
            p.substitute(v, 0, value);
        }
        next
    }

    fn count(mut self, parallel_depth: usize) -> u128 {
        if !self.simplify() {
            return 0;
        }
        if self.polys.is_empty() {
            return 1u128 << self.free.count_ones();
        }
        let v = self.branch_var();
        let children = [self.assign(v, false), self.assign(v, true)];
        if parallel_depth > 0 {
            children.into_par_iter().map(|s| s.count(parallel_depth - 1)).sum()
        } else {
            children.into_iter().map(|s| s.count(0)).sum()
        }
    }
}

/// Exact number of solutions of a quadratic system.
///
/// Systems over at most 64 variables without side clauses are handled by
/// Gaussian elimination of linear equations followed by branching on the
/// variable in the most quadratic monomials; others go to the DPLL counter.
pub fn count_solutions(sys: &QuadSystem) -> u128 {
    count_solutions_with(sys, 0)
}

/// As [`count_solutions`], splitting the first `parallel_depth` branch
/// levels across the rayon pool.
pub fn count_solutions_with(sys: &QuadSystem, parallel_depth: usize) -> u128 {
    if sys.num_vars > 64 || !sys.at_least_one.is_empty() {
        return quad::count_solutions(sys);
    }
    let mut polys: Vec<Poly> = sys.equations.iter().map(Poly::from_equation).collect();
    for &(v, b) in &sys.fixed {
        polys.push(Poly { quad: Vec::new(), lin: 1 << v, c: b });
    }
    polys.retain(|p| !p.is_zero());
    let free = if sys.num_vars == 64 { u64::MAX } else { (1u64 << sys.num_vars) - 1 };
    State { polys, free }.count(parallel_depth)
}

/// Counts elements by walking all `2^d` coordinate vectors in Gray-code order.
pub fn brute_force_count(t: &ThinTable, mode: LocusMode) -> Result<u64, InvariantError> {
    let d = t.dim();
    if d > BRUTE_FORCE_MAX_DIM {
        return Err(InvariantError::TooLarge(d));
    }
    let ads: Vec<Vec<u64>> = t.adjoint_matrices().iter().map(|m| m.rows().to_vec()).collect();
    let mut x = vec![0u64; d];
    let test = |x: &[u64]| -> bool {
        x.iter().all(|&row| {
            let sq = ones(row).fold(0u64, |acc, k| acc ^ x[k]);
            match mode {
                LocusMode::Nilpotent2 => sq == 0,
                LocusMode::Toral => sq == row,
            }
        })
    };
    let mut count = 1; // the zero element
    for step in 1u64..1 << d {
        let a = step.trailing_zeros() as usize;
        for (row, add) in x.iter_mut().zip(&ads[a]) {
            *row ^= add;
        }
        if test(&x) {
            count += 1;
        }
    }
    Ok(count)
}

pub fn count_locus(t: &ThinTable, mode: LocusMode) -> u64 {
    let depth = if t.dim() > 20 { 6 } else { 0 };
    count_solutions_with(&build_locus_system(t, mode), depth) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub nilpotent2: u64,
    pub toral: u64,
    pub derived_dim: usize,
    pub der_alg_dim: usize,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={} nil2={} toral={} derived={} der={}",
            self.dim, self.nilpotent2, self.toral, self.derived_dim, self.der_alg_dim
        )
    }
}

pub fn fingerprint(t: &ThinTable) -> Fingerprint {
    Fingerprint {
        dim: t.dim(),
        nilpotent2: count_locus(t, LocusMode::Nilpotent2),
        toral: count_locus(t, LocusMode::Toral),
        derived_dim: t.derived_subalgebra().dim(),
        der_alg_dim: t.derivation_algebra_dim(),
    }
}
