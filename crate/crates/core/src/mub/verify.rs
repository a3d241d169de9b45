//! MUB verification: an exact checker over cyclotomic integers and an
//! independent floating-point checker, driven by the same pair loop.
//!
//! Conditions, for scaled vectors `u`, `v`:
//! - same basis, same vector: `⟨u|u⟩ = 1`
//! - same basis, different vectors: `⟨u|v⟩ = 0`
//! - different bases: `|⟨u|v⟩|² = 1/d`
//!
//! The exact checker never takes square roots: with `S` the unscaled inner
//! product it tests `S = n_u`, `S = 0` and `S·conj(S) = n_u·n_v/d`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::{inner_product, FloatMubSet, FloatVector, MubError, MubSet};
use crate::cyclotomic::{Cyclotomic, ZeroTest};
use crate::FLOAT_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerifyMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairFailureKind {
    NotNormalized,
    NotOrthogonal,
    NotUnbiased,
}

impl PairFailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairFailureKind::NotNormalized => "not normalized",
            PairFailureKind::NotOrthogonal => "not orthogonal",
            PairFailureKind::NotUnbiased => "not unbiased",
        }
    }
}

/// A failing pair `(basis, index)` / `(other_basis, other_index)`, with
/// `(basis, index) ≤ (other_basis, other_index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairFailure {
    pub basis: usize,
    pub index: usize,
    pub other_basis: usize,
    pub other_index: usize,
    pub kind: PairFailureKind,
}

impl PairFailure {
    pub fn coords(&self) -> (usize, usize, usize, usize) {
        (self.basis, self.index, self.other_basis, self.other_index)
    }
}

impl fmt::Display for PairFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) vs ({}, {}): {}",
            self.basis,
            self.index,
            self.other_basis,
            self.other_index,
            self.kind.as_str()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeFailure {
    /// A basis does not hold exactly `d` vectors.
    BasisSize { basis: usize, len: usize },
    /// More than `d + 1` bases, impossible for mutually unbiased bases.
    TooManyBases { count: usize, dim: usize },
}

impl fmt::Display for ShapeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ShapeFailure::BasisSize { basis, len } => {
                write!(f, "basis {basis} has {len} vectors")
            }
            ShapeFailure::TooManyBases { count, dim } => {
                write!(f, "{count} bases exceed d + 1 = {}", dim + 1)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MubReport {
    pub shape: Vec<ShapeFailure>,
    /// Sorted.
    pub pairs: Vec<PairFailure>,
}

impl MubReport {
    pub fn passed(&self) -> bool {
        self.shape.is_empty() && self.pairs.is_empty()
    }

    pub fn failing_pairs(&self) -> Vec<(usize, usize, usize, usize)> {
        self.pairs.iter().map(PairFailure::coords).collect()
    }
}

/// Verdict for one vector pair; implemented by the exact and float checkers.
pub trait PairCheck: Sync {
    fn dim(&self) -> usize;
    fn num_bases(&self) -> usize;
    fn basis_len(&self, basis: usize) -> usize;
    fn check(
        &self,
        basis: usize,
        index: usize,
        other_basis: usize,
        other_index: usize,
    ) -> Result<Option<PairFailureKind>, MubError>;
}

/// All `(b, c)` with `b ≤ c`; each is an independent unit of work.
pub fn basis_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|b| (b..k).map(move |c| (b, c))).collect()
}

pub fn shape_failures<C: PairCheck + ?Sized>(checker: &C) -> Vec<ShapeFailure> {
    let d = checker.dim();
    let mut out: Vec<_> = (0..checker.num_bases())
        .filter(|&b| checker.basis_len(b) != d)
        .map(|b| ShapeFailure::BasisSize {
            basis: b,
            len: checker.basis_len(b),
        })
        .collect();
    if checker.num_bases() > d + 1 {
        out.push(ShapeFailure::TooManyBases {
            count: checker.num_bases(),
            dim: d,
        });
    }
    out
}

/// Every vector pair between bases `b` and `c` (`b ≤ c`), in order.
pub fn check_basis_pair<C: PairCheck + ?Sized>(
    checker: &C,
    b: usize,
    c: usize,
) -> Result<Vec<PairFailure>, MubError> {
    let mut out = Vec::new();
    for i in 0..checker.basis_len(b) {
        let start = if b == c { i } else { 0 };
        for j in start..checker.basis_len(c) {
            if let Some(kind) = checker.check(b, i, c, j)? {
                out.push(PairFailure {
                    basis: b,
                    index: i,
                    other_basis: c,
                    other_index: j,
                    kind,
                });
            }
        }
    }
    Ok(out)
}

/// Sequential driver over all basis pairs.
pub fn verify_with<C: PairCheck + ?Sized>(checker: &C) -> Result<MubReport, MubError> {
    let mut pairs = Vec::new();
    for (b, c) in basis_pairs(checker.num_bases()) {
        pairs.extend(check_basis_pair(checker, b, c)?);
    }
    pairs.sort();
    Ok(MubReport {
        shape: shape_failures(checker),
        pairs,
    })
}

pub fn verify_mubs(set: &MubSet, mode: VerifyMode) -> Result<MubReport, MubError> {
    match mode {
        VerifyMode::Exact => verify_with(&ExactChecker::new(set)),
        VerifyMode::Float => verify_float_set(&set.to_float()),
    }
}

pub fn verify_float_set(set: &FloatMubSet) -> Result<MubReport, MubError> {
    verify_with(&FloatChecker::new(set))
}

/// Exact checker: cyclotomic inner products and zero tests modulo `Φ_M`.
pub struct ExactChecker<'a> {
    set: &'a MubSet,
    zero: ZeroTest,
}

impl<'a> ExactChecker<'a> {
    pub fn new(set: &'a MubSet) -> Self {
        Self {
            set,
            zero: ZeroTest::new(set.root_order()),
        }
    }
}

impl PairCheck for ExactChecker<'_> {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn num_bases(&self) -> usize {
        self.set.len()
    }

    fn basis_len(&self, basis: usize) -> usize {
        self.set.bases()[basis].len()
    }

    fn check(&self, b: usize, i: usize, c: usize, j: usize) -> Result<Option<PairFailureKind>, MubError> {
        let (u, v) = (self.set.vector(b, i), self.set.vector(c, j));
        let s = inner_product(u, v)?;
        let n_u = i64::try_from(u.norm_sq()).expect("norm too large");
        let fail = if b == c && i == j {
            (!self.zero.is_zero(&(&s - &Cyclotomic::from_int(n_u)))).then_some(PairFailureKind::NotNormalized)
        } else if b == c {
            (!self.zero.is_zero(&s)).then_some(PairFailureKind::NotOrthogonal)
        } else {
            let (nu, nv) = (u.norm_sq(), v.norm_sq());
            let d = self.set.dim() as u64;
            let prod = nu.checked_mul(nv).expect("norm product overflow");
            if prod % d != 0 {
                return Err(MubError::NonIntegerTarget {
                    n_u: nu,
                    n_v: nv,
                    dim: self.set.dim(),
                });
            }
            let target = (prod / d) as i64;
            let ok = match s.as_single_root() {
                // a single root of unity times its conjugate is 1
                Some(_) => target == 1,
                None => self
                    .zero
                    .is_zero(&(&(&s * &s.conj()) - &Cyclotomic::from_int(target))),
            };
            (!ok).then_some(PairFailureKind::NotUnbiased)
        };
        Ok(fail)
    }
}

/// Floating-point checker on complex amplitudes, tolerance [`FLOAT_TOL`].
pub struct FloatChecker<'a> {
    set: &'a FloatMubSet,
}

impl<'a> FloatChecker<'a> {
    pub fn new(set: &'a FloatMubSet) -> Self {
        Self { set }
    }
}

fn float_inner(u: &FloatVector, v: &FloatVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 0;
    for &(p, a) in &u.amps {
        while k < v.amps.len() && v.amps[k].0 < p {
            k += 1;
        }
        if k < v.amps.len() && v.amps[k].0 == p {
            acc += a * v.amps[k].1.conj();
        }
    }
    acc
}

impl PairCheck for FloatChecker<'_> {
    fn dim(&self) -> usize {
        self.set.dim
    }

    fn num_bases(&self) -> usize {
        self.set.bases.len()
    }

    fn basis_len(&self, basis: usize) -> usize {
        self.set.bases[basis].len()
    }

    fn check(&self, b: usize, i: usize, c: usize, j: usize) -> Result<Option<PairFailureKind>, MubError> {
        let (u, v) = (&self.set.bases[b][i], &self.set.bases[c][j]);
        let raw = float_inner(u, v);
        let sq = raw.norm_sqr() / (u.norm_sq as f64 * v.norm_sq as f64);
        let (target, kind) = if b == c && i == j {
            (1.0, PairFailureKind::NotNormalized)
        } else if b == c {
            (0.0, PairFailureKind::NotOrthogonal)
        } else {
            (1.0 / self.set.dim as f64, PairFailureKind::NotUnbiased)
        };
        Ok(((sq - target).abs() >= FLOAT_TOL).then_some(kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::dft;
    use crate::latin::{complete_mols_prime_power, cyclic_square, MolsSet};
    use crate::mub::{build_mubs, MubBasis, MubProvenance, MubVector};
    use crate::net::net_from_mols;
    use alloc::vec;

    fn example_set() -> MubSet {
        let net = net_from_mols(&MolsSet::new(2, vec![cyclic_square(2)]).unwrap());
        build_mubs(&net, &dft(2)).unwrap()
    }

    #[test]
    fn example_passes_both_modes() {
        let set = example_set();
        assert!(verify_mubs(&set, VerifyMode::Exact).unwrap().passed());
        assert!(verify_mubs(&set, VerifyMode::Float).unwrap().passed());
    }

    #[test]
    fn tampered_vector_is_pinpointed() {
        let mut set = example_set();
        // B_1's first vector (1, 1, 0, 0) becomes (1, -1, 0, 0)
        set.vector_mut(0, 0).set_exponent(1, 1);
        let exact = verify_mubs(&set, VerifyMode::Exact).unwrap();
        let float = verify_mubs(&set, VerifyMode::Float).unwrap();
        assert_eq!(exact.failing_pairs(), vec![(0, 0, 0, 1)]);
        assert_eq!(exact.pairs, float.pairs);
        assert_eq!(exact.pairs[0].kind, PairFailureKind::NotOrthogonal);
    }

    #[test]
    fn single_basis_passes() {
        let net = net_from_mols(&complete_mols_prime_power(5).unwrap());
        let set = build_mubs(&net, &dft(5)).unwrap();
        let one = MubSet::new(25, 5, vec![set.bases()[3].clone()], MubProvenance::Imported).unwrap();
        assert!(verify_mubs(&one, VerifyMode::Exact).unwrap().passed());
    }

    #[test]
    fn non_integer_target_is_an_error() {
        let v = |p| MubVector::new(3, 1, 1, vec![(p, 0)]).unwrap();
        let basis = MubBasis::new(vec![v(0), v(1), v(2)]);
        let set = MubSet::new(3, 1, vec![basis.clone(), basis], MubProvenance::Imported).unwrap();
        assert_eq!(
            verify_mubs(&set, VerifyMode::Exact),
            Err(MubError::NonIntegerTarget {
                n_u: 1,
                n_v: 1,
                dim: 3
            })
        );
        // the float oracle just reports the cross pairs as biased
        let r = verify_mubs(&set, VerifyMode::Float).unwrap();
        assert_eq!(r.pairs.len(), 9);
    }

    #[test]
    fn shape_problems() {
        let mut set = example_set();
        let short = MubBasis::new(set.bases()[0].vectors()[..3].to_vec());
        set = MubSet::new(4, 2, vec![short], MubProvenance::Imported).unwrap();
        let r = verify_mubs(&set, VerifyMode::Exact).unwrap();
        assert_eq!(r.shape, vec![ShapeFailure::BasisSize { basis: 0, len: 3 }]);
        assert!(r.pairs.is_empty());
    }

    #[test]
    fn norm_mismatch_fails_normalization() {
        let mut bases: Vec<MubBasis> = example_set().bases().to_vec();
        let v = &bases[0].vectors()[0];
        let bad = MubVector::new(4, 2, 3, v.amps().to_vec()).unwrap();
        let mut vs = bases[0].vectors().to_vec();
        vs[0] = bad;
        bases[0] = MubBasis::new(vs);
        let set = MubSet::new(4, 2, bases, MubProvenance::Imported).unwrap();
        let exact = verify_mubs(&set, VerifyMode::Exact);
        // 3·2/4 is not an integer
        assert!(matches!(exact, Err(MubError::NonIntegerTarget { .. })));
        let float = verify_mubs(&set, VerifyMode::Float).unwrap();
        assert!(float.pairs.contains(&PairFailure {
            basis: 0,
            index: 0,
            other_basis: 0,
            other_index: 0,
            kind: PairFailureKind::NotNormalized
        }));
    }
}
