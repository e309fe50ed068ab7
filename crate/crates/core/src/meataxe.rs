//! Simplicity of thin Lie algebras through their adjoint module.
//!
//! A subspace is an ideal exactly when it is invariant under every
//! `ad(e_α)`, so simplicity is irreducibility of the adjoint module. A cheap
//! closure test on root spaces finds monomial ideals; Norton's test settles
//! the rest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{self, ones, spin_with_columns, Gf2Matrix, SubspaceBasis};
use crate::liealg::ThinTable;

/// Kernels larger than this are not enumerated; another element is drawn.
const MAX_NULLITY: usize = 10;
const MAX_ATTEMPTS: usize = 400;
const BRUTE_FORCE_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeataxeError {
    #[error("no usable singular element found after {0} attempts")]
    Indeterminate(usize),
    #[error("module needs at least one generator and positive dimension")]
    EmptyModule,
    #[error("generators have inconsistent dimensions")]
    DimensionMismatch,
    #[error("dimension {0} is too large for exhaustive ideal search")]
    TooLarge(usize),
}

/// A module given by the matrices of a generating set.
#[derive(Debug, Clone)]
pub struct ModuleAction {
    dim: usize,
    generators: Vec<Gf2Matrix>,
}

impl ModuleAction {
    pub fn new(generators: Vec<Gf2Matrix>) -> Result<Self, MeataxeError> {
        let dim = generators.first().ok_or(MeataxeError::EmptyModule)?.dim();
        if dim == 0 {
            return Err(MeataxeError::EmptyModule);
        }
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(MeataxeError::DimensionMismatch);
        }
        Ok(Self { dim, generators })
    }

    pub fn adjoint(t: &ThinTable) -> Result<Self, MeataxeError> {
        Self::new(t.adjoint_matrices())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Gf2Matrix] {
        &self.generators
    }

    /// Nonzero, proper and mapped into itself by every generator.
    pub fn is_proper_submodule(&self, w: &SubspaceBasis) -> bool {
        !w.is_zero()
            && !w.is_full()
            && w.ambient_dim() == self.dim
            && self.generators.iter().all(|g| {
                w.row_bits().iter().all(|&v| w.reduce_bits(g.apply_bits(v)) == 0)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible(SubspaceBasis),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    /// A proper ideal; zero only for the one-dimensional algebra.
    NotSimple(SubspaceBasis),
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple)
    }
}

/// Smallest union of root spaces that contains `e_α` and is an ideal.
fn monomial_closure(t: &ThinTable, start: usize) -> u64 {
    let mut set = 1u64 << start;
    let mut frontier = set;
    while frontier != 0 {
        let mut next = 0u64;
        for b in ones(frontier) {
            for g in ones(t.rows()[b]) {
                if let Some(k) = t.sum_index(b, g) {
                    next |= 1 << k;
                }
            }
        }
        frontier = next & !set;
        set |= next;
    }
    set
}

/// A proper ideal spanned by root vectors, if one exists.
pub fn monomial_ideal(t: &ThinTable) -> Option<SubspaceBasis> {
    let full = gf2::low_mask(t.dim());
    (0..t.dim())
        .map(|a| monomial_closure(t, a))
        .find(|&s| s != full)
        .map(|s| SubspaceBasis::from_bits(t.dim(), ones(s).map(|k| 1u64 << k)))
}

/// Every root vector generates the whole algebra as an ideal. Necessary for
/// simplicity, not sufficient.
pub fn monomial_simple(t: &ThinTable) -> bool {
    monomial_ideal(t).is_none()
}

struct Norton<'a> {
    m: &'a ModuleAction,
    columns: Vec<Gf2Matrix>,
}

impl Norton<'_> {
    fn spin_vec(&self, v: u64) -> SubspaceBasis {
        spin_with_columns(&self.columns, SubspaceBasis::from_bits(self.m.dim, [v]))
    }

    /// Spin under the transposed generators, whose columns are the rows of
    /// the originals.
    fn spin_dual(&self, v: u64) -> SubspaceBasis {
        spin_with_columns(&self.m.generators, SubspaceBasis::from_bits(self.m.dim, [v]))
    }

    /// Runs the test for one singular element. `None` means it was unusable.
    fn try_element(&self, theta: &Gf2Matrix) -> Option<Irreducibility> {
        let (_, kernel) = gf2::rank_and_nullspace(theta);
        let k = kernel.dim();
        if k == 0 || k > MAX_NULLITY {
            return None;
        }
        let basis = kernel.row_bits();
        let mut v = 0u64;
        for step in 1u64..1 << k {
            v ^= basis[step.trailing_zeros() as usize];
            let w = self.spin_vec(v);
            if !w.is_full() {
                return Some(Irreducibility::Reducible(w));
            }
        }
        let (_, dual_kernel) = gf2::rank_and_nullspace(&theta.transpose());
        let w = dual_kernel.row_bits()[0];
        let dual = self.spin_dual(w);
        if !dual.is_full() {
            return Some(Irreducibility::Reducible(dual.annihilator()));
        }
        Some(Irreducibility::Irreducible)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Gf2Matrix {
        let gens = &self.m.generators;
        let mut theta = Gf2Matrix::zero(self.m.dim);
        let terms = rng.gen_range(1..=4);
        for _ in 0..terms {
            let len = rng.gen_range(1..=3);
            let mut word = gens[rng.gen_range(0..gens.len())].clone();
            for _ in 1..len {
                word = word.mul_unchecked(&gens[rng.gen_range(0..gens.len())]);
            }
            theta.add_assign_unchecked(&word);
        }
        if rng.gen::<bool>() {
            theta.add_assign_unchecked(&Gf2Matrix::identity(self.m.dim));
        }
        theta
    }
}

/// Norton's irreducibility test.
///
/// For a singular `θ` in the enveloping algebra: the module is reducible iff
/// some nonzero vector of `ker θ` spins to a proper subspace, or a nonzero
/// vector of `ker θᵀ` spins to a proper subspace of the dual. All of
/// `ker θ` is tried, so only elements of small nullity are used. The
/// generators themselves are tried first, then random sums of short words,
/// sometimes shifted by the identity.
pub fn is_irreducible(m: &ModuleAction, seed: u64) -> Result<Irreducibility, MeataxeError> {
    let norton = Norton { m, columns: m.generators.iter().map(Gf2Matrix::transpose).collect() };
    let verified = |r: Irreducibility| {
        if let Irreducibility::Reducible(w) = &r {
            assert!(m.is_proper_submodule(w), "witness failed verification");
        }
        r
    };
    for g in &m.generators {
        if let Some(r) = norton.try_element(g) {
            return Ok(verified(r));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let theta = norton.random_element(&mut rng);
        if let Some(r) = norton.try_element(&theta) {
            return Ok(verified(r));
        }
    }
    Err(MeataxeError::Indeterminate(m.generators.len() + MAX_ATTEMPTS))
}

pub fn is_simple(t: &ThinTable, seed: u64) -> Result<Simplicity, MeataxeError> {
    let d = t.dim();
    if d <= 1 {
        return Ok(Simplicity::NotSimple(SubspaceBasis::zero(d)));
    }
    if t.rows().iter().all(|&r| r == 0) {
        return Ok(Simplicity::NotSimple(SubspaceBasis::from_bits(d, [1u64])));
    }
    if let Some(ideal) = monomial_ideal(t) {
        return Ok(Simplicity::NotSimple(ideal));
    }
    Ok(match is_irreducible(&ModuleAction::adjoint(t)?, seed)? {
        Irreducibility::Irreducible => Simplicity::Simple,
        Irreducibility::Reducible(w) => Simplicity::NotSimple(w),
    })
}

/// Exhaustive ideal search: simple iff nonabelian of dimension > 1 and every
/// nonzero element generates the whole algebra as an ideal.
pub fn brute_force_simple(t: &ThinTable) -> Result<bool, MeataxeError> {
    let d = t.dim();
    if d > BRUTE_FORCE_MAX_DIM {
        return Err(MeataxeError::TooLarge(d));
    }
    if d <= 1 || t.rows().iter().all(|&r| r == 0) {
        return Ok(false);
    }
    let columns: Vec<Gf2Matrix> = t.adjoint_matrices().iter().map(Gf2Matrix::transpose).collect();
    Ok((1u64..1 << d).all(|v| {
        spin_with_columns(&columns, SubspaceBasis::from_bits(d, [v])).is_full()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fsl2() -> ThinTable {
        ThinTable::from_fn(2, |_, _| true).unwrap()
    }

    fn block_diag(a: &Gf2Matrix, b: &Gf2Matrix) -> Gf2Matrix {
        let (da, db) = (a.dim(), b.dim());
        Gf2Matrix::from_fn(da + db, |r, c| {
            if r < da && c < da {
                a.get(r, c)
            } else if r >= da && c >= da {
                b.get(r - da, c - da)
            } else {
                false
            }
        })
    }

    #[test]
    fn fsl2_is_irreducible_and_simple() {
        let m = ModuleAction::adjoint(&fsl2()).unwrap();
        assert_eq!(is_irreducible(&m, 1).unwrap(), Irreducibility::Irreducible);
        assert!(monomial_simple(&fsl2()));
        assert!(is_simple(&fsl2(), 0).unwrap().is_simple());
        assert!(brute_force_simple(&fsl2()).unwrap());
    }

    #[test]
    fn direct_sum_is_reducible_with_3_dim_witness() {
        let ads = fsl2().adjoint_matrices();
        let mut gens: Vec<Gf2Matrix> =
            ads.iter().map(|a| block_diag(a, &Gf2Matrix::zero(3))).collect();
        gens.extend(ads.iter().map(|a| block_diag(&Gf2Matrix::zero(3), a)));
        let m = ModuleAction::new(gens).unwrap();
        match is_irreducible(&m, 7).unwrap() {
            Irreducibility::Reducible(w) => {
                assert_eq!(w.dim(), 3);
                assert!(m.is_proper_submodule(&w));
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn zero_row_fails_monomial_filter() {
        // Only [e1, e2] = e3, so e3 is central.
        let t = ThinTable::from_fn(2, |a, b| (a, b) == (1, 2)).unwrap();
        assert!(t.has_zero_row());
        assert!(!monomial_simple(&t));
        assert!(!is_simple(&t, 0).unwrap().is_simple());
        assert!(!brute_force_simple(&t).unwrap());
    }

    #[test]
    fn abelian_is_not_simple() {
        let t = ThinTable::abelian(3).unwrap();
        match is_simple(&t, 0).unwrap() {
            Simplicity::NotSimple(w) => assert_eq!(w.dim(), 1),
            Simplicity::Simple => panic!("abelian algebra reported simple"),
        }
    }

    #[test]
    fn bad_modules_are_rejected() {
        assert_eq!(ModuleAction::new(vec![]).unwrap_err(), MeataxeError::EmptyModule);
        assert_eq!(
            ModuleAction::new(vec![Gf2Matrix::zero(2), Gf2Matrix::zero(3)]).unwrap_err(),
            MeataxeError::DimensionMismatch
        );
    }

    #[test]
    fn verdicts_are_deterministic() {
        let ads = fsl2().adjoint_matrices();
        let gens: Vec<Gf2Matrix> = ads.iter().map(|a| block_diag(a, a)).collect();
        let m = ModuleAction::new(gens).unwrap();
        let first = is_irreducible(&m, 42).unwrap();
        assert_eq!(is_irreducible(&m, 42).unwrap(), first);
        assert!(matches!(first, Irreducibility::Reducible(_)));
    }
}
