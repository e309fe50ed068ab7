//! Relabeling thin tables by GL(n,2) and choosing orbit representatives.
//!
//! A linear map `g` of the root space sends a thin table `T` to
//! `(g·T)(α, β) = T(g⁻¹α, g⁻¹β)`. Tables in one orbit define isomorphic
//! algebras. The canonical form is the orbit element whose row-major bit
//! string (ascending roots, `0 < 1`) is lexicographically smallest.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fixtures::sha256_hex;
use crate::invariants::{fingerprint, Fingerprint};
use crate::liealg::{LieError, ThinTable};

pub const MAX_CANON_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("n = {0} is out of range for group enumeration")]
    NOutOfRange(usize),
    #[error("element of GL({group},2) applied to a table with n = {table}")]
    DimensionMismatch { group: usize, table: usize },
    #[error("only full tables can be relabeled")]
    RestrictedTable,
    #[error("tables of different rank ({0} and {1}) cannot be classified together")]
    MixedN(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Table(#[from] LieError),
}

/// An invertible `n × n` matrix over GF(2), stored by rows: bit `c` of
/// `rows[r]` is entry `(r, c)`. It maps a root `v` to `g·v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gl2Element {
    n: usize,
    rows: Vec<u32>,
}

impl Gl2Element {
    pub fn identity(n: usize) -> Self {
        Self { n, rows: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self, CanonError> {
        if rows.len() != n || rows.iter().any(|&r| r >= 1 << n) {
            return Err(CanonError::Singular);
        }
        let g = Self { n, rows };
        if g.rank() != n {
            return Err(CanonError::Singular);
        }
        Ok(g)
    }

    /// The element sending the standard root `α_{i+1}` to `images[i]`.
    pub fn from_images(n: usize, images: &[u32]) -> Result<Self, CanonError> {
        let rows = (0..n)
            .map(|r| {
                images.iter().enumerate().fold(0u32, |acc, (c, &img)| acc | (img >> r & 1) << c)
            })
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (r, &row)| acc | ((row & v).count_ones() & 1) << r)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let images: Vec<u32> = (0..self.n).map(|i| self.apply(other.apply(1 << i))).collect();
        Self::from_images(self.n, &images).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Self {
        // The inverse sends g(α_i) back to α_i; build it from a table of images.
        let mut preimage = vec![0u32; 1 << self.n];
        for v in 0..1u32 << self.n {
            preimage[self.apply(v) as usize] = v;
        }
        let images: Vec<u32> = (0..self.n).map(|i| preimage[1 << i]).collect();
        Self::from_images(self.n, &images).expect("inverse of invertible map")
    }

    fn rank(&self) -> usize {
        let mut basis: Vec<u32> = Vec::new();
        for &r in &self.rows {
            let mut v = r;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
            }
        }
        basis.len()
    }
}

/// Order of GL(n,2).
pub fn gl_order(n: usize) -> u64 {
    (0..n).map(|i| (1u64 << n) - (1u64 << i)).product()
}

/// Iterator over GL(n,2), choosing basis images in increasing order.
pub struct GlElements {
    n: usize,
    images: Vec<u32>,
    done: bool,
}

impl GlElements {
    fn in_span(images: &[u32], v: u32) -> bool {
        // The span of k independent vectors has 2^k elements; test by subset sums.
        (0u32..1 << images.len()).any(|mask| {
            images
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &x)| if mask >> i & 1 == 1 { acc ^ x } else { acc })
                == v
        })
    }

    /// Smallest admissible image for position `images.len()` that is ≥ `from`.
    fn next_free(&self, from: u32) -> Option<u32> {
        (from..1u32 << self.n).find(|&v| !Self::in_span(&self.images, v))
    }

    fn fill(&mut self) -> bool {
        while self.images.len() < self.n {
            match self.next_free(1) {
                Some(v) => self.images.push(v),
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.images.pop() {
            if let Some(v) = self.next_free(last + 1) {
                self.images.push(v);
                return self.fill();
            }
        }
        false
    }
}

impl Iterator for GlElements {
    type Item = Gl2Element;

    fn next(&mut self) -> Option<Gl2Element> {
        if self.done {
            return None;
        }
        let g = Gl2Element::from_images(self.n, &self.images).expect("independent images");
        if !self.advance() {
            self.done = true;
        }
        Some(g)
    }
}

pub fn gl_elements(n: usize) -> Result<GlElements, CanonError> {
    if !(2..=MAX_CANON_N).contains(&n) {
        return Err(CanonError::NOutOfRange(n));
    }
    let mut it = GlElements { n, images: Vec::new(), done: false };
    it.fill();
    Ok(it)
}

/// `(g·T)(α, β) = T(g⁻¹α, g⁻¹β)`.
pub fn act(g: &Gl2Element, t: &ThinTable) -> Result<ThinTable, CanonError> {
    if g.n != t.n() {
        return Err(CanonError::DimensionMismatch { group: g.n, table: t.n() });
    }
    if !t.is_full() {
        return Err(CanonError::RestrictedTable);
    }
    let h = g.inverse();
    Ok(relabel(t, |v| h.apply(v)))
}

/// Table `(a, b) ↦ T(h(a), h(b))` for a bijection `h` of the roots.
fn relabel(t: &ThinTable, h: impl Fn(u32) -> u32) -> ThinTable {
    ThinTable::from_fn(t.n(), |a, b| t.get(h(a), h(b))).expect("relabeling keeps symmetry")
}

/// Row `a` of a relabeled table as a lexicographic key: column 1 in the most
/// significant bit.
#[inline]
fn row_key(t: &ThinTable, hvals: &[u32], a: usize) -> u64 {
    let i = hvals[a] as usize - 1;
    let row = t.rows()[i];
    let mut key = 0u64;
    for b in 1..hvals.len() {
        let j = hvals[b] as usize - 1;
        key |= (row >> j & 1) << (64 - b);
    }
    key
}

/// Sort key of a table in the lexicographic order of canonical forms.
pub fn table_key(t: &ThinTable) -> Vec<u64> {
    let identity: Vec<u32> = (0..1u32 << t.n()).collect();
    (1..identity.len()).map(|a| row_key(t, &identity, a)).collect()
}

/// Exact lexicographic minimum over the orbit.
///
/// The relabeling `h` is built one basis image at a time. Once `h(α_1), …,
/// h(α_k)` are fixed, the entries of row 1 in columns below `2^k` are known,
/// and they form a prefix of the bit string. Only partial maps attaining the
/// smallest such prefix can lead to the minimum, so the others are dropped
/// at every level. The survivors are then compared on their full strings.
pub fn canonical_form(t: &ThinTable) -> Result<ThinTable, CanonError> {
    let n = t.n();
    if n > MAX_CANON_N {
        return Err(CanonError::NOutOfRange(n));
    }
    if !t.is_full() {
        return Err(CanonError::RestrictedTable);
    }
    let h = canonical_relabeling(t);
    Ok(relabel(t, |v| h[v as usize]))
}

/// Values of `h` on all roots (index 0 holds 0) for a minimizing relabeling.
fn canonical_relabeling(t: &ThinTable) -> Vec<u32> {
    let n = t.n();
    let mut frontier: Vec<Vec<u32>> = vec![vec![0]];
    for k in 0..n {
        let half = 1usize << k;
        let mut best_chunk = u64::MAX;
        let mut next: Vec<Vec<u32>> = Vec::new();
        for hvals in &frontier {
            let used = hvals.iter().fold(0u64, |acc, &v| acc | 1 << v);
            for c in 1..1u32 << n {
                if used >> c & 1 == 1 {
                    continue;
                }
                let mut ext = hvals.clone();
                ext.extend(hvals.iter().map(|&v| v ^ c));
                // Row 1, columns half..2·half, read most significant first.
                let r1 = t.rows()[ext[1] as usize - 1];
                let mut chunk = 0u64;
                for b in half..2 * half {
                    chunk = chunk << 1 | (r1 >> (ext[b] - 1) & 1);
                }
                if chunk < best_chunk {
                    best_chunk = chunk;
                    next.clear();
                }
                if chunk == best_chunk {
                    next.push(ext);
                }
            }
        }
        frontier = next;
    }
    let d = (1usize << n) - 1;
    let mut best: Option<(Vec<u64>, usize)> = None;
    for (idx, hvals) in frontier.iter().enumerate() {
        match &mut best {
            None => {
                let key = (1..=d).map(|a| row_key(t, hvals, a)).collect();
                best = Some((key, idx));
            }
            Some((bkey, bidx)) => {
                // Compare row by row, stopping at the first difference.
                for a in 1..=d {
                    let r = row_key(t, hvals, a);
                    if r != bkey[a - 1] {
                        if r < bkey[a - 1] {
                            bkey[a - 1] = r;
                            for a2 in a + 1..=d {
                                bkey[a2 - 1] = row_key(t, hvals, a2);
                            }
                            *bidx = idx;
                        }
                        break;
                    }
                }
            }
        }
    }
    let (_, idx) = best.expect("frontier is never empty");
    frontier.swap_remove(idx)
}

/// Orbit minimum by scanning the whole group. Slow; for checking.
pub fn brute_force_canonical_form(t: &ThinTable) -> Result<ThinTable, CanonError> {
    let mut best: Option<(Vec<u64>, ThinTable)> = None;
    for g in gl_elements(t.n())? {
        let image = act(&g, t)?;
        let key = table_key(&image);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, image));
        }
    }
    Ok(best.expect("group is nonempty").1)
}

/// SHA-256 of the canonical text form.
pub fn table_hash(t: &ThinTable) -> String {
    sha256_hex(t.to_text().as_bytes())
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitClass {
    pub hash: String,
    #[serde(skip)]
    pub canonical: ThinTable,
    /// Indices of the input tables in this class.
    pub members: Vec<usize>,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub classes: Vec<OrbitClass>,
    /// Groups of class indices whose fingerprints agree although their
    /// canonical forms differ; isomorphism between them is left open.
    pub unresolved: Vec<Vec<usize>>,
}

/// Partitions tables into GL(n,2) orbits, ordered by canonical form.
pub fn classify(tables: &[ThinTable]) -> Result<Classification, CanonError> {
    if let Some(first) = tables.first() {
        if let Some(other) = tables.iter().find(|t| t.n() != first.n()) {
            return Err(CanonError::MixedN(first.n(), other.n()));
        }
    }
    let canon: Vec<ThinTable> =
        tables.par_iter().map(canonical_form).collect::<Result<_, _>>()?;
    let mut groups: BTreeMap<Vec<u64>, (ThinTable, Vec<usize>)> = BTreeMap::new();
    for (i, c) in canon.into_iter().enumerate() {
        groups.entry(table_key(&c)).or_insert_with(|| (c, Vec::new())).1.push(i);
    }
    let classes: Vec<OrbitClass> = groups
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(canonical, members)| OrbitClass {
            hash: table_hash(&canonical),
            fingerprint: fingerprint(&canonical),
            canonical,
            members,
        })
        .collect();
    let mut by_fp: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        by_fp.entry(c.fingerprint).or_default().push(i);
    }
    let unresolved = by_fp.into_values().filter(|g| g.len() > 1).collect();
    Ok(Classification { classes, unresolved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_n1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(n: usize, rng: &mut ChaCha8Rng) -> Gl2Element {
        loop {
            let rows = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
            if let Ok(g) = Gl2Element::from_rows(n, rows) {
                return g;
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_elements(2).unwrap().count(), 6);
        assert_eq!(gl_elements(3).unwrap().count(), 168);
        assert_eq!(gl_elements(4).unwrap().count() as u64, gl_order(4));
        assert_eq!(gl_order(4), 20_160);
        assert!(gl_elements(6).is_err());
    }

    #[test]
    fn elements_are_distinct_and_invertible() {
        let all: Vec<Gl2Element> = gl_elements(3).unwrap().collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for g in &all {
            assert_eq!(g.compose(&g.inverse()), Gl2Element::identity(3));
        }
    }

    #[test]
    fn fsl2_is_invariant() {
        let t = ThinTable::from_fn(2, |_, _| true).unwrap();
        for g in gl_elements(2).unwrap() {
            assert_eq!(act(&g, &t).unwrap(), t);
        }
    }

    #[test]
    fn identity_action_and_errors() {
        let t = build_n1(4).unwrap();
        assert_eq!(act(&Gl2Element::identity(4), &t).unwrap(), t);
        assert!(matches!(
            act(&Gl2Element::identity(3), &t),
            Err(CanonError::DimensionMismatch { group: 3, table: 4 })
        ));
        assert!(Gl2Element::from_rows(2, vec![1, 1]).is_err());
    }

    #[test]
    fn canonical_form_matches_brute_force_on_small_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n1 = build_n1(3).unwrap();
        let mut tables = vec![n1.clone(), ThinTable::abelian(3).unwrap()];
        for _ in 0..5 {
            tables.push(act(&random_element(3, &mut rng), &n1).unwrap());
        }
        for t in &tables {
            assert_eq!(canonical_form(t).unwrap(), brute_force_canonical_form(t).unwrap());
        }
    }

    #[test]
    fn classify_edge_cases() {
        let t = build_n1(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let moved = act(&random_element(3, &mut rng), &t).unwrap();
        let c = classify(&[t.clone(), moved]).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].members, vec![0, 1]);
        assert_eq!(classify(&[t.clone()]).unwrap().classes.len(), 1);
        assert!(matches!(
            classify(&[t, build_n1(4).unwrap()]),
            Err(CanonError::MixedN(3, 4))
        ));
    }
}
