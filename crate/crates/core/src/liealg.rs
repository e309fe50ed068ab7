//! Thin tables and the Lie algebras they define.
//!
//! A thin table over GF(2)ⁿ has one basis vector `e_α` per nonzero root
//! `α ∈ GF(2)ⁿ`, and `[e_α, e_β] = T(α,β)·e_{α+β}`. Roots are integers whose
//! bit `i` is the coefficient of the standard root `α_{i+1}`; root addition
//! is XOR. Basis vectors are indexed in ascending root order.
//!
//! Tables may also be restricted to a bracket-closed set of roots
//! ([`ThinTable::subalgebra_table`]); restricted tables keep the original
//! labels, so indices and roots no longer differ by one.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, ones, Gf2Matrix, Gf2Vector, SubspaceBasis, WideEchelon};

/// Largest `n` a table may have (dimension 63 fits one machine word).
pub const MAX_N: usize = 6;

const NO_INDEX: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("n = {0} is out of range (expected 2..={MAX_N})")]
    NOutOfRange(usize),
    #[error("root {root} is not a nonzero vector of GF(2)^{n}")]
    InvalidRoot { root: u32, n: usize },
    #[error("symmetry violated at ({a}, {b})")]
    Asymmetric { a: u32, b: u32 },
    #[error("nonzero diagonal entry at root {0}")]
    NonzeroDiagonal(u32),
    #[error("expected {expected} rows/columns, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("root set is not closed: [e_{a}, e_{b}] leaves it")]
    NotClosed { a: u32, b: u32 },
    #[error("elements belong to different tables")]
    TableMismatch,
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("json: {0}")]
    Json(String),
}

/// A nonzero root of GF(2)ⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootIndex(u32);

impl RootIndex {
    pub fn new(value: u32, n: usize) -> Result<Self, LieError> {
        if value == 0 || n > MAX_N || value >= 1 << n {
            Err(LieError::InvalidRoot { root: value, n })
        } else {
            Ok(Self(value))
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// `|α|`, the parity of the number of nonzero coordinates.
    #[inline]
    pub fn norm(self) -> bool {
        self.0.count_ones() & 1 == 1
    }

    #[inline]
    pub fn inner(self, other: Self) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }

    /// `α + β`, or `None` when the sum is zero.
    #[inline]
    pub fn sum(self, other: Self) -> Option<Self> {
        let s = self.0 ^ other.0;
        (s != 0).then_some(Self(s))
    }
}

impl fmt::Display for RootIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parity of the popcount: `|α|`.
#[inline]
pub fn norm(a: u32) -> bool {
    a.count_ones() & 1 == 1
}

/// Standard inner product `(α, β)`.
#[inline]
pub fn inner(a: u32, b: u32) -> bool {
    (a & b).count_ones() & 1 == 1
}

/// Symmetric zero-diagonal bit matrix of structure constants.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThinTable {
    n: usize,
    roots: Vec<u32>,
    index: Vec<u8>,
    rows: Vec<u64>,
}

fn check_n(n: usize) -> Result<(), LieError> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(LieError::NOutOfRange(n))
    }
}

impl ThinTable {
    /// Full table on all `2ⁿ − 1` roots from packed rows (bit `j` of row `i`
    /// is `T(root_i, root_j)`).
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self, LieError> {
        check_n(n)?;
        Self::with_roots(n, (1..1u32 << n).collect(), rows)
    }

    /// Table on an explicit ascending set of roots.
    pub fn with_roots(n: usize, roots: Vec<u32>, rows: Vec<u64>) -> Result<Self, LieError> {
        check_n(n)?;
        let mut index = vec![NO_INDEX; 1 << n];
        for (i, &r) in roots.iter().enumerate() {
            if r == 0 || r >= 1 << n || index[r as usize] != NO_INDEX {
                return Err(LieError::InvalidRoot { root: r, n });
            }
            if i > 0 && roots[i - 1] > r {
                return Err(LieError::Parse {
                    line: 0,
                    column: 0,
                    message: "roots must be listed in ascending order".into(),
                });
            }
            index[r as usize] = i as u8;
        }
        let d = roots.len();
        if rows.len() != d {
            return Err(LieError::Shape { expected: d, found: rows.len() });
        }
        if rows.iter().any(|&r| r & !gf2::low_mask(d) != 0) {
            return Err(LieError::Shape { expected: d, found: 64 - rows.iter().map(|r| r.leading_zeros()).min().unwrap_or(64) as usize });
        }
        let t = Self { n, roots, index, rows };
        t.validate()?;
        Ok(t)
    }

    /// Full table from a predicate on root pairs; the predicate is evaluated
    /// for `α < β` only and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(u32, u32) -> bool) -> Result<Self, LieError> {
        check_n(n)?;
        let d = (1usize << n) - 1;
        let mut rows = vec![0u64; d];
        for i in 0..d {
            for j in i + 1..d {
                if f(i as u32 + 1, j as u32 + 1) {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        Self::from_rows(n, rows)
    }

    /// The abelian table (all structure constants zero).
    pub fn abelian(n: usize) -> Result<Self, LieError> {
        check_n(n)?;
        Self::from_rows(n, vec![0; (1 << n) - 1])
    }

    fn validate(&self) -> Result<(), LieError> {
        for (i, &row) in self.rows.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(LieError::NonzeroDiagonal(self.roots[i]));
            }
            for j in ones(row) {
                if self.rows[j] >> i & 1 == 0 {
                    return Err(LieError::Asymmetric { a: self.roots[i], b: self.roots[j] });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    /// True when the table covers every nonzero root.
    pub fn is_full(&self) -> bool {
        self.roots.len() == (1 << self.n) - 1
    }

    #[inline]
    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    #[inline]
    pub fn root(&self, i: usize) -> u32 {
        self.roots[i]
    }

    #[inline]
    pub fn index_of(&self, root: u32) -> Option<usize> {
        match self.index.get(root as usize) {
            Some(&i) if i != NO_INDEX => Some(i as usize),
            _ => None,
        }
    }

    /// Index of `root_i + root_j`, if that root belongs to the table.
    #[inline]
    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(self.roots[i] ^ self.roots[j])
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// `T(α, β)` by root value; false for roots outside the table.
    pub fn get(&self, a: u32, b: u32) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.bit(i, j),
            _ => false,
        }
    }

    /// `[e_i, e_j]` on basis indices: the index of the result, or `None` for zero.
    #[inline]
    pub fn bracket_basis(&self, i: usize, j: usize) -> Option<usize> {
        if self.bit(i, j) {
            self.sum_index(i, j)
        } else {
            None
        }
    }

    pub fn zero_element(&self) -> LieElement<'_> {
        LieElement { table: self, coords: Gf2Vector::zero(self.dim()) }
    }

    pub fn basis_element(&self, i: usize) -> LieElement<'_> {
        LieElement { table: self, coords: Gf2Vector::unit(self.dim(), i) }
    }

    pub fn element(&self, coords: Gf2Vector) -> Result<LieElement<'_>, LieError> {
        if coords.dim() != self.dim() {
            return Err(LieError::Shape { expected: self.dim(), found: coords.dim() });
        }
        Ok(LieElement { table: self, coords })
    }

    /// Bilinear bracket on packed coordinate vectors.
    pub(crate) fn bracket_bits(&self, x: u64, y: u64) -> u64 {
        let mut out = 0u64;
        for i in ones(x) {
            for j in ones(self.rows[i] & y) {
                if let Some(k) = self.sum_index(i, j) {
                    out ^= 1 << k;
                }
            }
        }
        out
    }

    pub fn bracket<'a>(
        &'a self,
        x: &LieElement<'_>,
        y: &LieElement<'_>,
    ) -> Result<LieElement<'a>, LieError> {
        if !self.owns(x) || !self.owns(y) {
            return Err(LieError::TableMismatch);
        }
        let bits = self.bracket_bits(x.coords.bits(), y.coords.bits());
        let coords = Gf2Vector::from_bits(self.dim(), bits).expect("bracket stays in range");
        Ok(LieElement { table: self, coords })
    }

    fn owns(&self, x: &LieElement<'_>) -> bool {
        std::ptr::eq(self, x.table) || self == x.table
    }

    /// Basis triples `(α, β, γ)` where the Jacobi identity fails.
    ///
    /// Triples with a repeated root vanish identically once the table is
    /// symmetric with zero diagonal, so only distinct triples are checked.
    pub fn jacobi_violations(&self) -> Vec<(RootIndex, RootIndex, RootIndex)> {
        let d = self.dim();
        let mut out = Vec::new();
        let nested = |a: usize, b: usize, c: usize| -> Option<usize> {
            self.bracket_basis(b, c).and_then(|bc| self.bracket_basis(a, bc))
        };
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut residual = 0u64;
                    for t in [nested(i, j, k), nested(j, k, i), nested(k, i, j)].into_iter().flatten() {
                        residual ^= 1 << t;
                    }
                    if residual != 0 {
                        out.push((
                            RootIndex(self.roots[i]),
                            RootIndex(self.roots[j]),
                            RootIndex(self.roots[k]),
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn is_lie_algebra(&self) -> bool {
        self.jacobi_violations().is_empty()
    }

    /// `ad(e_α)` for every basis vector, in index order.
    pub fn adjoint_matrices(&self) -> Vec<Gf2Matrix> {
        (0..self.dim()).map(|i| self.adjoint(i)).collect()
    }

    pub fn adjoint(&self, i: usize) -> Gf2Matrix {
        let d = self.dim();
        let mut rows = vec![0u64; d];
        for j in ones(self.rows[i]) {
            if let Some(k) = self.sum_index(i, j) {
                rows[k] |= 1 << j;
            }
        }
        Gf2Matrix::from_rows(d, rows).expect("adjoint fits table dimension")
    }

    /// Diagonal of `ad(e_i)²`: bit `j` is `T(α,β)·T(α,α+β)` for `β = root_j`.
    pub fn square_diagonal(&self, i: usize) -> u64 {
        let mut diag = 0u64;
        for j in ones(self.rows[i]) {
            if let Some(k) = self.sum_index(i, j) {
                if self.bit(i, k) {
                    diag |= 1 << j;
                }
            }
        }
        diag
    }

    pub fn derived_subalgebra(&self) -> SubspaceBasis {
        let mut span = 0u64;
        for i in 0..self.dim() {
            for j in ones(self.rows[i]) {
                if let Some(k) = self.sum_index(i, j) {
                    span |= 1 << k;
                }
            }
        }
        SubspaceBasis::from_bits(self.dim(), ones(span).map(|k| 1u64 << k))
    }

    /// Roots `γ` with `e_γ ∈ [L, L]`.
    pub fn derived_roots(&self) -> Vec<u32> {
        self.derived_subalgebra()
            .pivots()
            .into_iter()
            .map(|k| self.roots[k])
            .collect()
    }

    pub fn has_zero_row(&self) -> bool {
        self.rows.contains(&0)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().is_full()
    }

    /// Every standard pair `α_i, α_j` spans a copy of fsl₂ with `α_i + α_j`.
    pub fn is_taut(&self) -> bool {
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| {
                let (a, b) = (1u32 << i, 1u32 << j);
                self.get(a, b) && self.get(a, a | b) && self.get(b, a | b)
            })
        })
    }

    /// Restriction to a bracket-closed set of roots, keeping the labels.
    pub fn subalgebra_table(&self, roots: &[u32]) -> Result<ThinTable, LieError> {
        let mut sorted = roots.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut keep = 0u64;
        for &r in &sorted {
            let i = self.index_of(r).ok_or(LieError::InvalidRoot { root: r, n: self.n })?;
            keep |= 1 << i;
        }
        for i in ones(keep) {
            for j in ones(self.rows[i] & keep) {
                let closed = self.sum_index(i, j).is_some_and(|k| keep >> k & 1 == 1);
                if !closed {
                    return Err(LieError::NotClosed { a: self.roots[i], b: self.roots[j] });
                }
            }
        }
        let old: Vec<usize> = ones(keep).collect();
        let rows = old
            .iter()
            .map(|&i| {
                old.iter()
                    .enumerate()
                    .fold(0u64, |acc, (new_j, &j)| acc | (self.rows[i] >> j & 1) << new_j)
            })
            .collect();
        ThinTable::with_roots(self.n, sorted, rows)
    }

    /// Dimension of the derivation algebra `Der(L)`.
    ///
    /// An unknown entry `D(γ, β)` only meets unknowns of the same weight
    /// `γ + β`, so the linear system splits into one block per weight with at
    /// most `d` unknowns each.
    pub fn derivation_algebra_dim(&self) -> usize {
        let d = self.dim();
        let mut total = 0;
        for w in 0..1u32 << self.n {
            // Unknown for column c is D(root_c + w, root_c).
            let mut col_of = vec![usize::MAX; d];
            let mut unknowns = 0;
            for c in 0..d {
                let row_root = self.roots[c] ^ w;
                if w == 0 || self.index_of(row_root).is_some() {
                    col_of[c] = unknowns;
                    unknowns += 1;
                }
            }
            if unknowns == 0 {
                continue;
            }
            let mut block = SubspaceBasis::zero(unknowns);
            for a in 0..d {
                for b in a + 1..d {
                    let delta = w ^ self.roots[a] ^ self.roots[b];
                    if self.index_of(delta).is_none() {
                        continue;
                    }
                    let mut eq = 0u64;
                    // T(α,β)·D(δ, α+β)
                    if self.bit(a, b) {
                        let ab = self.sum_index(a, b).expect("closed table");
                        eq ^= 1 << col_of[ab];
                    }
                    // T(δ+β, β)·D(δ+β, α)
                    if let Some(g) = self.index_of(delta ^ self.roots[b]) {
                        if self.bit(g, b) {
                            eq ^= 1 << col_of[a];
                        }
                    }
                    // T(α, δ+α)·D(δ+α, β)
                    if let Some(g) = self.index_of(delta ^ self.roots[a]) {
                        if self.bit(a, g) {
                            eq ^= 1 << col_of[b];
                        }
                    }
                    block.insert_bits(eq);
                }
            }
            total += unknowns - block.dim();
        }
        total
    }

    /// Same quantity as [`Self::derivation_algebra_dim`], from the full
    /// `d²`-unknown system with one equation per basis pair and output root.
    pub fn derivation_algebra_dim_dense(&self) -> usize {
        let d = self.dim();
        let var = |row: usize, col: usize| row * d + col;
        let mut ech = WideEchelon::new(d * d);
        for a in 0..d {
            for b in a + 1..d {
                for out in 0..d {
                    let mut eq = ech.empty_row();
                    let mut toggle = |v: usize| eq[v / 64] ^= 1 << (v % 64);
                    // D[e_a, e_b] at e_out
                    if let Some(ab) = self.bracket_basis(a, b) {
                        toggle(var(out, ab));
                    }
                    // [D e_a, e_b] at e_out: D(g, a) with [e_g, e_b] = e_out
                    for g in 0..d {
                        if self.bracket_basis(g, b) == Some(out) {
                            toggle(var(g, a));
                        }
                        if self.bracket_basis(a, g) == Some(out) {
                            toggle(var(g, b));
                        }
                    }
                    ech.insert(eq);
                }
            }
        }
        d * d - ech.rank()
    }

    /// Searches the span of the vectors `diag(ad(e_α)²)` for every coordinate
    /// function `α ↦ (α, α_i)`. On success returns, for each `i`, a set of
    /// roots whose squares sum to that coordinate function.
    pub fn verify_thin_decomposition(&self) -> Option<Vec<Vec<u32>>> {
        let d = self.dim();
        // Echelon rows paired with the set of generators that produced them.
        let mut basis: Vec<(u64, u64)> = Vec::new();
        let reduce = |basis: &[(u64, u64)], mut v: u64, mut combo: u64| {
            for &(row, rc) in basis {
                if v >> row.trailing_zeros() & 1 == 1 {
                    v ^= row;
                    combo ^= rc;
                }
            }
            (v, combo)
        };
        for a in 0..d {
            let (v, combo) = reduce(&basis, self.square_diagonal(a), 1 << a);
            if v != 0 {
                let p = v.trailing_zeros();
                for entry in basis.iter_mut() {
                    if entry.0 >> p & 1 == 1 {
                        entry.0 ^= v;
                        entry.1 ^= combo;
                    }
                }
                basis.push((v, combo));
            }
        }
        let mut witnesses = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let target = (0..d).fold(0u64, |acc, c| acc | ((self.roots[c] >> i & 1) as u64) << c);
            let (rest, combo) = reduce(&basis, target, 0);
            if rest != 0 {
                return None;
            }
            witnesses.push(ones(combo).map(|k| self.roots[k]).collect());
        }
        Some(witnesses)
    }

    /// Checks the fsl₂-bound lemma for every non-nilpotent `e_α`: with
    /// `χ(t) = t^r (t+1)^{2s}` and `s > 0`, some `e_β` completes `e_α` to an
    /// fsl₂, `s(s+1) ≥ 2ⁿ − 2` and `s ≤ 2ⁿ⁻²`. Returns the offending roots.
    pub fn fsl2_bound_violations(&self) -> Vec<u32> {
        let lower = (1u64 << self.n) - 2;
        let upper = 1u64 << (self.n - 2);
        (0..self.dim())
            .filter(|&i| {
                let s = (self.square_diagonal(i).count_ones() / 2) as u64;
                s > 0 && (s * (s + 1) < lower || s > upper)
            })
            .map(|i| self.roots[i])
            .collect()
    }

    /// Canonical text form: `n = <n>`, an optional `roots =` line for
    /// restricted tables, then one row of space-separated bits per root.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n = {}", self.n).unwrap();
        if !self.is_full() {
            let roots: Vec<String> = self.roots.iter().map(u32::to_string).collect();
            writeln!(s, "roots = {}", roots.join(" ")).unwrap();
        }
        for &row in &self.rows {
            let bits: Vec<&str> =
                (0..self.dim()).map(|j| if row >> j & 1 == 1 { "1" } else { "0" }).collect();
            writeln!(s, "{}", bits.join(" ")).unwrap();
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, LieError> {
        let err = |line: usize, column: usize, message: &str| LieError::Parse {
            line,
            column,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

        let (ln, header) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
        let n = parse_assignment(header, "n")
            .ok_or_else(|| err(ln, 1, "expected `n = <int>`"))?
            .parse::<usize>()
            .map_err(|_| err(ln, 1, "n is not an integer"))?;
        check_n(n).map_err(|e| err(ln, 1, &e.to_string()))?;

        let mut roots: Vec<u32> = (1..1u32 << n).collect();
        let mut body: Vec<(usize, &str)> = lines.collect();
        if let Some(&(ln, l)) = body.first() {
            if let Some(list) = parse_assignment(l, "roots") {
                roots = list
                    .split_whitespace()
                    .map(|tok| tok.parse::<u32>().map_err(|_| err(ln, 1, "bad root label")))
                    .collect::<Result<_, _>>()?;
                body.remove(0);
            }
        }
        let d = roots.len();
        if body.len() != d {
            let line = body.get(d).map_or(ln + body.len() + 1, |&(l, _)| l);
            return Err(err(line, 1, &format!("expected {d} rows, found {}", body.len())));
        }
        let mut rows = Vec::with_capacity(d);
        for (ln, l) in body {
            let mut row = 0u64;
            let mut count = 0;
            for (col, tok) in tokens_with_columns(l) {
                match tok {
                    "0" => {}
                    "1" => {
                        if count < 64 {
                            row |= 1 << count;
                        }
                    }
                    _ => return Err(err(ln, col, &format!("expected 0 or 1, found `{tok}`"))),
                }
                count += 1;
            }
            if count != d {
                return Err(err(ln, l.len() + 1, &format!("expected {d} entries, found {count}")));
            }
            rows.push(row);
        }
        Self::with_roots(n, roots, rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TableJson::from(self)).expect("table serializes")
    }

    pub fn parse_json(text: &str) -> Result<Self, LieError> {
        let j: TableJson = serde_json::from_str(text).map_err(|e| LieError::Json(e.to_string()))?;
        j.try_into()
    }

    /// Parses either format, choosing JSON when the input starts with `{`.
    pub fn parse_any(text: &str) -> Result<Self, LieError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

fn parse_assignment<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let (lhs, rhs) = line.split_once('=')?;
    (lhs.trim() == key).then(|| rhs.trim())
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let column = offset + start + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((column, tok))
    })
}

impl fmt::Debug for ThinTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<u32>>,
    rows: Vec<Vec<u8>>,
}

impl From<&ThinTable> for TableJson {
    fn from(t: &ThinTable) -> Self {
        let rows = t
            .rows
            .iter()
            .map(|&r| (0..t.dim()).map(|j| (r >> j & 1) as u8).collect())
            .collect();
        TableJson { n: t.n, roots: (!t.is_full()).then(|| t.roots.clone()), rows }
    }
}

impl TryFrom<TableJson> for ThinTable {
    type Error = LieError;

    fn try_from(j: TableJson) -> Result<Self, LieError> {
        check_n(j.n)?;
        let roots = j.roots.unwrap_or_else(|| (1..1u32 << j.n).collect());
        let d = roots.len();
        if j.rows.len() != d {
            return Err(LieError::Shape { expected: d, found: j.rows.len() });
        }
        let mut rows = Vec::with_capacity(d);
        for (i, r) in j.rows.iter().enumerate() {
            if r.len() != d {
                return Err(LieError::Shape { expected: d, found: r.len() });
            }
            let mut bits = 0u64;
            for (c, &b) in r.iter().enumerate() {
                match b {
                    0 => {}
                    1 => bits |= 1 << c,
                    _ => {
                        return Err(LieError::Json(format!("row {i}, column {c}: entry {b} is not 0/1")))
                    }
                }
            }
            rows.push(bits);
        }
        ThinTable::with_roots(j.n, roots, rows)
    }
}

/// An element `Σ λ_α e_α` of the algebra of a table.
#[derive(Clone, Copy)]
pub struct LieElement<'a> {
    table: &'a ThinTable,
    coords: Gf2Vector,
}

impl<'a> LieElement<'a> {
    pub fn table(&self) -> &'a ThinTable {
        self.table
    }

    pub fn coords(&self) -> Gf2Vector {
        self.coords
    }

    pub fn add(&self, other: &LieElement<'_>) -> Result<LieElement<'a>, LieError> {
        if !self.table.owns(other) {
            return Err(LieError::TableMismatch);
        }
        let coords = self.coords.add(&other.coords).expect("same table dimension");
        Ok(LieElement { table: self.table, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

impl PartialEq for LieElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.table.owns(other) && self.coords == other.coords
    }
}

impl fmt::Debug for LieElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.coords.ones().map(|i| format!("e{}", self.table.roots[i])).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fsl2() -> ThinTable {
        ThinTable::from_fn(2, |_, _| true).unwrap()
    }

    #[test]
    fn root_arithmetic() {
        let a = RootIndex::new(0b0101, 4).unwrap();
        let b = RootIndex::new(0b0011, 4).unwrap();
        assert!(!a.norm());
        assert!(a.inner(b));
        assert_eq!(a.sum(b).unwrap().value(), 0b0110);
        assert!(a.sum(a).is_none());
        assert!(RootIndex::new(0, 3).is_err());
        assert!(RootIndex::new(8, 3).is_err());
    }

    #[test]
    fn fsl2_bracket() {
        let t = fsl2();
        let x = t.basis_element(0);
        let y = t.basis_element(1);
        assert_eq!(t.bracket(&x, &y).unwrap(), t.basis_element(2));
        let sum = x.add(&y).unwrap();
        assert!(t.bracket(&sum, &sum).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_foreign_elements() {
        let t = fsl2();
        let other = ThinTable::abelian(2).unwrap();
        let x = other.basis_element(0);
        assert_eq!(t.bracket(&x, &x).unwrap_err(), LieError::TableMismatch);
    }

    #[test]
    fn validation_catches_bad_tables() {
        assert!(matches!(
            ThinTable::from_rows(2, vec![0b010, 0b000, 0]),
            Err(LieError::Asymmetric { a: 1, b: 2 })
        ));
        assert!(matches!(
            ThinTable::from_rows(2, vec![0b001, 0, 0]),
            Err(LieError::NonzeroDiagonal(1))
        ));
        assert!(matches!(ThinTable::abelian(7), Err(LieError::NOutOfRange(7))));
    }

    #[test]
    fn all_ones_table_jacobi() {
        assert!(fsl2().jacobi_violations().is_empty());
        let t3 = ThinTable::from_fn(3, |_, _| true).unwrap();
        assert!(!t3.jacobi_violations().is_empty());
    }

    #[test]
    fn fsl2_adjoints_match_hand_computation() {
        let ads = fsl2().adjoint_matrices();
        // indices 0,1,2 = roots 1,2,3
        assert_eq!(ads[0], Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (1, 2) | (2, 1))));
        assert_eq!(ads[1], Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (0, 2) | (2, 0))));
        assert_eq!(ads[2], Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (0, 1) | (1, 0))));
        assert!(ThinTable::abelian(3).unwrap().adjoint_matrices().iter().all(Gf2Matrix::is_zero));
    }

    #[test]
    fn derived_subalgebra_edge_cases() {
        assert!(fsl2().derived_subalgebra().is_full());
        assert!(ThinTable::abelian(3).unwrap().derived_subalgebra().is_zero());
    }

    #[test]
    fn subalgebra_of_full_set_is_identity() {
        let t = fsl2();
        assert_eq!(t.subalgebra_table(&[1, 2, 3]).unwrap(), t);
        assert!(matches!(t.subalgebra_table(&[1, 2]), Err(LieError::NotClosed { .. })));
        let ab = ThinTable::abelian(3).unwrap();
        let sub = ab.subalgebra_table(&[5, 2]).unwrap();
        assert_eq!(sub.roots(), &[2, 5]);
        assert_eq!(ThinTable::parse_text(&sub.to_text()).unwrap(), sub);
    }

    #[test]
    fn derivation_dims_small() {
        assert_eq!(fsl2().derivation_algebra_dim(), 5);
        assert_eq!(fsl2().derivation_algebra_dim_dense(), 5);
        let ab = ThinTable::abelian(3).unwrap();
        assert_eq!(ab.derivation_algebra_dim(), 49);
        assert_eq!(ab.derivation_algebra_dim_dense(), 49);
    }

    #[test]
    fn thin_decomposition_edge_cases() {
        assert!(ThinTable::abelian(3).unwrap().verify_thin_decomposition().is_none());
        let w = fsl2().verify_thin_decomposition().unwrap();
        let t = fsl2();
        for (i, set) in w.iter().enumerate() {
            let sum = set
                .iter()
                .fold(0u64, |acc, &r| acc ^ t.square_diagonal(t.index_of(r).unwrap()));
            let target = (0..3).fold(0u64, |acc, c| acc | ((t.root(c) >> i & 1) as u64) << c);
            assert_eq!(sum, target);
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let t = fsl2();
        let text = t.to_text();
        assert_eq!(text, "n = 2\n0 1 1\n1 0 1\n1 1 0\n");
        assert_eq!(ThinTable::parse_text(&text).unwrap(), t);
        assert_eq!(ThinTable::parse_json(&t.to_json()).unwrap(), t);
        assert_eq!(ThinTable::parse_any(&t.to_json()).unwrap(), t);

        let bad = "n = 2\n0 1 1\n1 0 x\n1 1 0\n";
        assert_eq!(
            ThinTable::parse_text(bad).unwrap_err(),
            LieError::Parse { line: 3, column: 5, message: "expected 0 or 1, found `x`".into() }
        );
        let short = "n = 2\n0 1 1\n1 0\n1 1 0\n";
        assert!(matches!(ThinTable::parse_text(short), Err(LieError::Parse { line: 3, .. })));
        let asym = "n = 2\n0 1 1\n0 0 1\n1 1 0\n";
        assert!(matches!(ThinTable::parse_text(asym), Err(LieError::Asymmetric { .. })));
        assert!(matches!(ThinTable::parse_text("m = 2"), Err(LieError::Parse { line: 1, .. })));
    }

    #[test]
    fn random_elements_satisfy_jacobi_on_valid_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in [fsl2(), ThinTable::abelian(4).unwrap()] {
            let d = t.dim();
            for _ in 0..1000 {
                let mut pick = || rng.gen::<u64>() & gf2::low_mask(d);
                let (x, y, z) = (pick(), pick(), pick());
                let j = t.bracket_bits(x, t.bracket_bits(y, z))
                    ^ t.bracket_bits(y, t.bracket_bits(z, x))
                    ^ t.bracket_bits(z, t.bracket_bits(x, y));
                assert_eq!(j, 0);
            }
        }
    }
}
