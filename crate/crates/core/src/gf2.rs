//! Exact linear algebra over GF(2) on bit-packed vectors and square matrices.
//!
//! Vectors and matrix rows are packed into a single `u64` word: bit `i` holds
//! coordinate `i`. Every algebra handled by this crate has dimension at most
//! 63, so one word per row is enough. [`WideEchelon`] covers the few places
//! that need longer rows (dense linear systems with `d²` unknowns).

use std::fmt;

use thiserror::Error;

/// Largest dimension a packed vector or matrix can have.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("bits set beyond dimension {dim}")]
    DirtyPadding { dim: usize },
}

#[inline]
pub(crate) fn low_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Iterator over the indices of set bits, lowest first.
#[derive(Clone)]
pub struct Ones(u64);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

#[inline]
pub fn ones(bits: u64) -> Ones {
    Ones(bits)
}

fn check_dim(dim: usize) -> Result<(), Gf2Error> {
    if dim > MAX_DIM {
        Err(Gf2Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

/// A vector in GF(2)^dim.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    dim: usize,
    bits: u64,
}

impl Gf2Vector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} too large");
        Self { dim, bits: 0 }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim && dim <= MAX_DIM, "unit vector {i} out of range for dim {dim}");
        Self { dim, bits: 1 << i }
    }

    pub fn from_bits(dim: usize, bits: u64) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if bits & !low_mask(dim) != 0 {
            return Err(Gf2Error::DirtyPadding { dim });
        }
        Ok(Self { dim, bits })
    }

    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(dim);
        for i in indices {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.dim);
        self.bits >> i & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim);
        self.bits ^= 1 << i;
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn ones(&self) -> Ones {
        Ones(self.bits)
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.dim != other.dim {
            return Err(Gf2Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(Self { dim: self.dim, bits: self.bits ^ other.bits })
    }

    pub fn dot(&self, other: &Self) -> Result<bool, Gf2Error> {
        if self.dim != other.dim {
            return Err(Gf2Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(parity(self.bits & other.bits))
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        write!(f, "]")
    }
}

/// A square matrix over GF(2); row `r`, bit `c` is the entry `(r, c)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    dim: usize,
    rows: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} too large");
        Self { dim, rows: vec![0; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for (i, row) in m.rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        m
    }

    pub fn from_rows(dim: usize, rows: Vec<u64>) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if rows.len() != dim {
            return Err(Gf2Error::DimensionMismatch { expected: dim, found: rows.len() });
        }
        if rows.iter().any(|r| r & !low_mask(dim) != 0) {
            return Err(Gf2Error::DirtyPadding { dim });
        }
        Ok(Self { dim, rows })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(dim);
        for r in 0..dim {
            for c in 0..dim {
                if f(r, c) {
                    m.rows[r] |= 1 << c;
                }
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> c & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.dim && c < self.dim);
        if value {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.dim && c < self.dim);
        self.rows[r] ^= 1 << c;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.dim);
        for (r, &row) in self.rows.iter().enumerate() {
            for c in ones(row) {
                t.rows[c] |= 1 << r;
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.same_dim(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Ok(Self { dim: self.dim, rows })
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            *a ^= b;
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.same_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|&row| ones(row).fold(0u64, |acc, k| acc ^ other.rows[k]))
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if self.dim != v.dim {
            return Err(Gf2Error::DimensionMismatch { expected: self.dim, found: v.dim });
        }
        Ok(Gf2Vector { dim: self.dim, bits: self.apply_bits(v.bits) })
    }

    #[inline]
    pub(crate) fn apply_bits(&self, v: u64) -> u64 {
        let mut out = 0u64;
        for (r, &row) in self.rows.iter().enumerate() {
            out |= ((row & v).count_ones() as u64 & 1) << r;
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, &row)| row & !(1 << r) == 0)
    }

    /// Diagonal entries as a vector.
    pub fn diagonal(&self) -> Gf2Vector {
        let bits = self
            .rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (r, &row)| acc | (row & (1 << r)));
        Gf2Vector { dim: self.dim, bits }
    }

    pub fn rank(&self) -> usize {
        SubspaceBasis::from_bits(self.dim, self.rows.iter().copied()).dim()
    }

    fn same_dim(&self, other: &Self) -> Result<(), Gf2Error> {
        if self.dim != other.dim {
            Err(Gf2Error::DimensionMismatch { expected: self.dim, found: other.dim })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix({})", self.dim)?;
        for &row in &self.rows {
            for c in 0..self.dim {
                write!(f, "{}", row >> c & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A subspace of GF(2)^ambient held in reduced row-echelon form.
///
/// The pivot of a row is its lowest set bit. Rows are sorted by pivot and each
/// pivot column is set in exactly one row, so two bases of the same subspace
/// are bitwise equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient: usize,
    rows: Vec<u64>,
}

impl SubspaceBasis {
    pub fn zero(ambient: usize) -> Self {
        assert!(ambient <= MAX_DIM);
        Self { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        assert!(ambient <= MAX_DIM);
        Self { ambient, rows: (0..ambient).map(|i| 1u64 << i).collect() }
    }

    pub fn span<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a Gf2Vector>) -> Self {
        let mut b = Self::zero(ambient);
        for v in vectors {
            assert_eq!(v.dim, ambient, "vector dimension does not match ambient space");
            b.insert_bits(v.bits);
        }
        b
    }

    pub(crate) fn from_bits(ambient: usize, rows: impl IntoIterator<Item = u64>) -> Self {
        let mut b = Self::zero(ambient);
        for r in rows {
            b.insert_bits(r);
        }
        b
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn rows(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        self.rows.iter().map(move |&bits| Gf2Vector { dim: self.ambient, bits })
    }

    pub(crate) fn row_bits(&self) -> &[u64] {
        &self.rows
    }

    /// Pivot column of each row, strictly increasing.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.trailing_zeros() as usize).collect()
    }

    #[inline]
    pub(crate) fn reduce_bits(&self, mut v: u64) -> u64 {
        for &row in &self.rows {
            if v >> row.trailing_zeros() & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        v.dim == self.ambient && self.reduce_bits(v.bits) == 0
    }

    pub fn insert(&mut self, v: &Gf2Vector) -> bool {
        assert_eq!(v.dim, self.ambient, "vector dimension does not match ambient space");
        self.insert_bits(v.bits)
    }

    /// Adds `v` to the span; returns false when it was already inside.
    pub(crate) fn insert_bits(&mut self, v: u64) -> bool {
        let v = self.reduce_bits(v);
        if v == 0 {
            return false;
        }
        let p = v.trailing_zeros();
        for row in self.rows.iter_mut() {
            if *row >> p & 1 == 1 {
                *row ^= v;
            }
        }
        let at = self.rows.partition_point(|r| r.trailing_zeros() < p);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|&r| other.reduce_bits(r) == 0)
    }

    /// The annihilator `{v : w·v = 0 for all w in self}`.
    pub fn annihilator(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.resize(self.ambient, 0);
        let m = Gf2Matrix { dim: self.ambient, rows };
        rank_and_nullspace(&m).1
    }
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

pub fn mat_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
    a.mul(b)
}

pub fn mat_vec(m: &Gf2Matrix, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
    m.mul_vec(v)
}

/// Rank of `m` together with a basis of its kernel `{v : m·v = 0}`.
pub fn rank_and_nullspace(m: &Gf2Matrix) -> (usize, SubspaceBasis) {
    let row_space = SubspaceBasis::from_bits(m.dim, m.rows.iter().copied());
    let pivot_mask = row_space.rows.iter().fold(0u64, |acc, r| acc | (r & r.wrapping_neg()));
    let free = low_mask(m.dim) & !pivot_mask;
    let mut kernel = SubspaceBasis::zero(m.dim);
    for f in ones(free) {
        // Each reduced row reads e_p + (free part); row·v = 0 fixes v_p.
        let mut v = 1u64 << f;
        for &row in &row_space.rows {
            if row >> f & 1 == 1 {
                v |= row & row.wrapping_neg();
            }
        }
        kernel.insert_bits(v);
    }
    (row_space.dim(), kernel)
}

/// Smallest subspace containing `seed` and mapped into itself by every generator.
pub fn spin(generators: &[Gf2Matrix], seed: &SubspaceBasis) -> Result<SubspaceBasis, Gf2Error> {
    for g in generators {
        if g.dim != seed.ambient {
            return Err(Gf2Error::DimensionMismatch { expected: seed.ambient, found: g.dim });
        }
    }
    let columns: Vec<Gf2Matrix> = generators.iter().map(Gf2Matrix::transpose).collect();
    Ok(spin_with_columns(&columns, seed.clone()))
}

/// Spin using generators given in transposed (column) form, so that `g·v` is a
/// XOR of columns.
pub(crate) fn spin_with_columns(columns: &[Gf2Matrix], mut space: SubspaceBasis) -> SubspaceBasis {
    let mut queue: Vec<u64> = space.rows.clone();
    while let Some(v) = queue.pop() {
        for g in columns {
            let w = ones(v).fold(0u64, |acc, c| acc ^ g.rows[c]);
            if space.insert_bits(w) {
                if space.is_full() {
                    return space;
                }
                queue.push(w);
            }
        }
    }
    space
}

/// Echelon basis for rows of arbitrary width, used for dense linear systems.
#[derive(Clone, Debug)]
pub struct WideEchelon {
    width: usize,
    words: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl WideEchelon {
    pub fn new(width: usize) -> Self {
        Self { width, words: width.div_ceil(64), rows: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row builder with the right number of words.
    pub fn empty_row(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    /// Reduces `row` against the basis and keeps it if independent.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        assert_eq!(row.len(), self.words);
        for (pivot, basis_row) in &self.rows {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (a, b) in row.iter_mut().zip(basis_row) {
                    *a ^= b;
                }
            }
        }
        match row.iter().position(|&w| w != 0) {
            None => false,
            Some(w) => {
                let pivot = w * 64 + row[w].trailing_zeros() as usize;
                self.rows.push((pivot, row));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Gf2Matrix {
        Gf2Matrix::from_rows(dim, (0..dim).map(|_| rng.gen::<u64>() & low_mask(dim)).collect())
            .unwrap()
    }

    fn naive_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Gf2Matrix {
        Gf2Matrix::from_fn(a.dim(), |r, c| {
            (0..a.dim()).fold(false, |acc, k| acc ^ (a.get(r, k) & b.get(k, c)))
        })
    }

    fn fsl2_e_alpha() -> Gf2Matrix {
        Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (1, 2) | (2, 1)))
    }

    #[test]
    fn identity_times_m_is_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&mut rng, 11);
        assert_eq!(mat_mul(&Gf2Matrix::identity(11), &m).unwrap(), m);
    }

    #[test]
    fn fsl2_adjoint_square_is_diag_011() {
        let e = fsl2_e_alpha();
        let sq = mat_mul(&e, &e).unwrap();
        assert_eq!(sq, Gf2Matrix::from_fn(3, |r, c| r == c && r > 0));
    }

    #[test]
    fn mul_matches_naive_at_dim_8() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 8);
            let b = random_matrix(&mut rng, 8);
            assert_eq!(mat_mul(&a, &b).unwrap(), naive_mul(&a, &b));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Gf2Matrix::identity(3);
        let b = Gf2Matrix::identity(4);
        assert_eq!(
            mat_mul(&a, &b).unwrap_err(),
            Gf2Error::DimensionMismatch { expected: 3, found: 4 }
        );
        assert!(mat_vec(&a, &Gf2Vector::zero(5)).is_err());
        assert!(Gf2Matrix::from_rows(2, vec![0b100, 0]).is_err());
        assert!(Gf2Vector::from_bits(3, 0b1000).is_err());
    }

    #[test]
    fn zero_matrix_kills_everything() {
        let v = Gf2Vector::from_bits(6, 0b101101).unwrap();
        assert!(mat_vec(&Gf2Matrix::zero(6), &v).unwrap().is_zero());
    }

    #[test]
    fn fsl2_adjoint_moves_beta_to_alpha_plus_beta() {
        // Index 0 ↔ α, 1 ↔ β, 2 ↔ α+β.
        let out = mat_vec(&fsl2_e_alpha(), &Gf2Vector::unit(3, 1)).unwrap();
        assert_eq!(out, Gf2Vector::unit(3, 2));
    }

    #[test]
    fn mat_vec_matches_naive_dot_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 13);
            let v = Gf2Vector::from_bits(13, rng.gen::<u64>() & low_mask(13)).unwrap();
            let out = mat_vec(&m, &v).unwrap();
            for r in 0..13 {
                let expect = (0..13).fold(false, |acc, c| acc ^ (m.get(r, c) & v.get(c)));
                assert_eq!(out.get(r), expect);
            }
        }
    }

    #[test]
    fn rank_nullspace_edge_cases() {
        let (r, k) = rank_and_nullspace(&Gf2Matrix::identity(9));
        assert_eq!((r, k.dim()), (9, 0));
        let (r, k) = rank_and_nullspace(&Gf2Matrix::zero(9));
        assert_eq!((r, k.dim()), (0, 9));
        let (r, k) = rank_and_nullspace(&fsl2_e_alpha());
        assert_eq!(r, 2);
        assert_eq!(k, SubspaceBasis::span(3, &[Gf2Vector::unit(3, 0)]));
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [1, 5, 17, 40, 63, 64] {
            for _ in 0..10 {
                let mut m = random_matrix(&mut rng, dim);
                // make it singular-ish
                if dim > 2 {
                    let r0 = m.rows()[0] ^ m.rows()[1];
                    m.rows[2] = r0;
                }
                let (rank, kernel) = rank_and_nullspace(&m);
                assert_eq!(rank + kernel.dim(), dim);
                for v in kernel.rows() {
                    assert!(mat_vec(&m, &v).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn echelon_form_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vs: Vec<Gf2Vector> = (0..12)
            .map(|_| Gf2Vector::from_bits(20, rng.gen::<u64>() & low_mask(20)).unwrap())
            .collect();
        let b = SubspaceBasis::span(20, &vs);
        let pivots = b.pivots();
        assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in pivots.iter().enumerate() {
            for (j, row) in b.rows().enumerate() {
                assert_eq!(row.get(p), i == j);
            }
        }
        for v in &vs {
            assert!(b.contains(v));
        }
        for row in b.rows() {
            assert!(b.contains(&row));
        }
    }

    #[test]
    fn spin_edge_cases() {
        let e = fsl2_e_alpha();
        let full = SubspaceBasis::full(3);
        assert_eq!(spin(&[e.clone()], &full).unwrap(), full);
        // fsl2 generators move e_α to everything.
        let gens = vec![
            e,
            Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (0, 2) | (2, 0))),
            Gf2Matrix::from_fn(3, |r, c| matches!((r, c), (0, 1) | (1, 0))),
        ];
        let seed = SubspaceBasis::span(3, &[Gf2Vector::unit(3, 0)]);
        assert!(spin(&gens, &seed).unwrap().is_full());
        // abelian: every subspace invariant
        let zeros = vec![Gf2Matrix::zero(3); 3];
        assert_eq!(spin(&zeros, &seed).unwrap(), seed);
    }

    #[test]
    fn annihilator_is_orthogonal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let vs: Vec<Gf2Vector> = (0..4)
                .map(|_| Gf2Vector::from_bits(10, rng.gen::<u64>() & low_mask(10)).unwrap())
                .collect();
            let b = SubspaceBasis::span(10, &vs);
            let ann = b.annihilator();
            assert_eq!(b.dim() + ann.dim(), 10);
            for w in b.rows() {
                for v in ann.rows() {
                    assert!(!w.dot(&v).unwrap());
                }
            }
        }
    }

    #[test]
    fn wide_echelon_rank() {
        let mut e = WideEchelon::new(130);
        let mut r = e.empty_row();
        r[2] = 1;
        assert!(e.insert(r.clone()));
        assert!(!e.insert(r.clone()));
        r[0] = 5;
        assert!(e.insert(r));
        assert_eq!(e.rank(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(dim: usize) -> impl Strategy<Value = Gf2Matrix> {
            proptest::collection::vec(any::<u64>(), dim)
                .prop_map(move |rows| {
                    Gf2Matrix::from_rows(dim, rows.into_iter().map(|r| r & low_mask(dim)).collect())
                        .unwrap()
                })
        }

        proptest! {
            #[test]
            fn rank_of_transpose(m in (1usize..=64).prop_flat_map(matrix)) {
                prop_assert_eq!(m.rank(), m.transpose().rank());
                prop_assert_eq!(m.transpose().transpose(), m);
            }

            #[test]
            fn associativity_against_naive(
                (a, b, c) in (1usize..=16).prop_flat_map(|d| (matrix(d), matrix(d), matrix(d)))
            ) {
                let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
                let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(&left, &right);
                prop_assert_eq!(&left, &naive_mul(&naive_mul(&a, &b), &c));
            }

            #[test]
            fn spin_is_invariant_idempotent_monotone(
                gens in proptest::collection::vec(matrix(12), 1..4),
                seed_bits in any::<u64>(),
                extra_bits in any::<u64>(),
            ) {
                let small = SubspaceBasis::from_bits(12, [seed_bits & low_mask(12)]);
                let large = SubspaceBasis::from_bits(12, [seed_bits & low_mask(12), extra_bits & low_mask(12)]);
                let s = spin(&gens, &small).unwrap();
                prop_assert!(small.is_subspace_of(&s));
                for g in &gens {
                    for v in s.rows() {
                        prop_assert!(s.contains(&mat_vec(g, &v).unwrap()));
                    }
                }
                prop_assert_eq!(&spin(&gens, &s).unwrap(), &s);
                prop_assert!(s.is_subspace_of(&spin(&gens, &large).unwrap()));
            }
        }
    }
}
