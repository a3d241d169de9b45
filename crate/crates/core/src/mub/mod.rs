//! Mutually unbiased bases built from a net and a generalized Hadamard matrix.
//!
//! Each row `h_l` of an `s × s` Hadamard matrix is embedded along each
//! incidence vector `m_{bi}` of a `(k, s)`-net: the `r`-th entry of `h_l` is
//! placed at the `r`-th smallest support position of `m_{bi}`. Block `b`
//! of the net yields one orthonormal basis of `C^{s²}` (after scaling by
//! `1/√s`), and bases from different blocks are mutually unbiased.
//!
//! Vectors are sparse with root-of-unity amplitudes and an implicit scale
//! `1/√norm_sq`, so everything stays exact.

mod verify;

pub use verify::{
    basis_pairs, check_basis_pair, shape_failures, verify_float_set, verify_mubs, verify_with, ExactChecker,
    FloatChecker, MubReport, PairCheck, PairFailure, PairFailureKind, ShapeFailure, VerifyMode,
};

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::lcm_u32;
use crate::cyclotomic::Cyclotomic;
use crate::hadamard::{verify_hadamard, GenHadamard};
use crate::net::{verify_net, IncidenceVector, Net};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MubError {
    #[error("incidence vector of weight {weight} cannot carry {len} entries")]
    WeightMismatch { weight: usize, len: usize },
    #[error("net has s = {net} but the Hadamard matrix has size {hadamard}")]
    SizeMismatch { net: usize, hadamard: usize },
    #[error("input {0} fails verification")]
    UnverifiedInput(&'static str),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("unbiasedness target {n_u}*{n_v}/{dim} is not an integer")]
    NonIntegerTarget { n_u: u64, n_v: u64, dim: usize },
    #[error("empty MUB set")]
    EmptyInput,
    #[error("invalid vector: {0}")]
    InvalidVector(&'static str),
}

/// Sparse vector `(1/√norm_sq) · Σ_p ω_M^{e_p} |p⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MubVector {
    dim: usize,
    root_order: u32,
    norm_sq: u64,
    /// `(position, exponent)`, positions strictly increasing.
    amps: Vec<(usize, u32)>,
}

impl MubVector {
    /// Sorts `amps` by position and rejects duplicates, out-of-range
    /// positions or exponents, and a zero norm.
    pub fn new(
        dim: usize,
        root_order: u32,
        norm_sq: u64,
        mut amps: Vec<(usize, u32)>,
    ) -> Result<Self, MubError> {
        if root_order == 0 {
            return Err(MubError::InvalidVector("root order must be positive"));
        }
        if norm_sq == 0 {
            return Err(MubError::InvalidVector("norm_sq must be positive"));
        }
        amps.sort_unstable_by_key(|&(p, _)| p);
        if amps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(MubError::InvalidVector("duplicate position"));
        }
        if amps.iter().any(|&(p, _)| p >= dim) {
            return Err(MubError::InvalidVector("position out of range"));
        }
        if amps.iter().any(|&(_, e)| e >= root_order) {
            return Err(MubError::InvalidVector("exponent out of range"));
        }
        Ok(Self {
            dim,
            root_order,
            norm_sq,
            amps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn norm_sq(&self) -> u64 {
        self.norm_sq
    }

    pub fn amps(&self) -> &[(usize, u32)] {
        &self.amps
    }

    /// Exponent at `position`, if it is in the support.
    pub fn exponent_at(&self, position: usize) -> Option<u32> {
        self.amps
            .binary_search_by_key(&position, |&(p, _)| p)
            .ok()
            .map(|k| self.amps[k].1)
    }

    /// Replaces the exponent of the `slot`-th support entry (reduced mod the root order).
    pub fn set_exponent(&mut self, slot: usize, exponent: u32) {
        self.amps[slot].1 = exponent % self.root_order;
    }

    pub fn lift(&self, root_order: u32) -> Self {
        assert!(
            root_order.is_multiple_of(self.root_order),
            "cannot lift root order"
        );
        let f = root_order / self.root_order;
        Self {
            root_order,
            amps: self.amps.iter().map(|&(p, e)| (p, e * f)).collect(),
            ..self.clone()
        }
    }

    /// Dense amplitudes, scale included.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.dim];
        let scale = 1.0 / fsqrt(self.norm_sq as f64);
        for &(p, e) in &self.amps {
            out[p] = root_approx(self.root_order, e) * scale;
        }
        out
    }
}

fn fsqrt(x: f64) -> f64 {
    num_complex::ComplexFloat::sqrt(x)
}

pub(crate) fn root_approx(m: u32, e: u32) -> Complex64 {
    Complex64::from_polar(1.0, core::f64::consts::TAU * f64::from(e) / f64::from(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MubBasis {
    vectors: Vec<MubVector>,
}

impl MubBasis {
    pub fn new(vectors: Vec<MubVector>) -> Self {
        Self { vectors }
    }

    pub fn vectors(&self) -> &[MubVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// How a [`MubSet`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MubProvenance {
    NetHadamard,
    Tensor,
    Imported,
}

impl MubProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            MubProvenance::NetHadamard => "net+hadamard",
            MubProvenance::Tensor => "tensor",
            MubProvenance::Imported => "imported",
        }
    }
}

/// `k` bases of `C^d` sharing one root order. Construction checks shape
/// only; see [`verify_mubs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MubSet {
    dim: usize,
    root_order: u32,
    bases: Vec<MubBasis>,
    provenance: MubProvenance,
}

impl MubSet {
    /// Lifts every vector to the common root order `root_order`.
    pub fn new(
        dim: usize,
        root_order: u32,
        bases: Vec<MubBasis>,
        provenance: MubProvenance,
    ) -> Result<Self, MubError> {
        let mut lifted = Vec::with_capacity(bases.len());
        for basis in bases {
            let mut vs = Vec::with_capacity(basis.len());
            for v in basis.vectors {
                if v.dim != dim {
                    return Err(MubError::DimMismatch(v.dim, dim));
                }
                if !root_order.is_multiple_of(v.root_order) {
                    return Err(MubError::InvalidVector("root order does not divide the set's"));
                }
                vs.push(v.lift(root_order));
            }
            lifted.push(MubBasis::new(vs));
        }
        Ok(Self {
            dim,
            root_order,
            bases: lifted,
            provenance,
        })
    }

    /// The single basis `{1}` of `C^1`, the identity for [`tensor_mubs`].
    pub fn trivial() -> Self {
        let v = MubVector::new(1, 1, 1, alloc::vec![(0, 0)]).unwrap();
        Self {
            dim: 1,
            root_order: 1,
            bases: alloc::vec![MubBasis::new(alloc::vec![v])],
            provenance: MubProvenance::NetHadamard,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn bases(&self) -> &[MubBasis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn provenance(&self) -> MubProvenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: MubProvenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn vector(&self, basis: usize, index: usize) -> &MubVector {
        &self.bases[basis].vectors[index]
    }

    pub fn vector_mut(&mut self, basis: usize, index: usize) -> &mut MubVector {
        &mut self.bases[basis].vectors[index]
    }

    /// The same set with complex amplitudes, for the floating-point verifier.
    pub fn to_float(&self) -> FloatMubSet {
        FloatMubSet {
            dim: self.dim,
            bases: self
                .bases
                .iter()
                .map(|b| {
                    b.vectors
                        .iter()
                        .map(|v| FloatVector {
                            norm_sq: v.norm_sq,
                            amps: v
                                .amps
                                .iter()
                                .map(|&(p, e)| (p, root_approx(v.root_order, e)))
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// A vector `(1/√norm_sq) · Σ_p a_p |p⟩` with arbitrary complex `a_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatVector {
    pub norm_sq: u64,
    /// `(position, amplitude)`, positions strictly increasing.
    pub amps: Vec<(usize, Complex64)>,
}

/// MUB set with floating-point amplitudes; only the float verifier applies.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMubSet {
    pub dim: usize,
    pub bases: Vec<Vec<FloatVector>>,
}

/// `h ↑ m`: the `r`-th entry of `h` goes to the `r`-th smallest support
/// position of `m`. The result has `norm_sq = weight(m)`.
pub fn embed(h: &[u32], root_order: u32, m: &IncidenceVector) -> Result<MubVector, MubError> {
    let support = m.support();
    if support.len() != h.len() {
        return Err(MubError::WeightMismatch {
            weight: support.len(),
            len: h.len(),
        });
    }
    let amps = support
        .into_iter()
        .zip(h)
        .map(|(p, &e)| (p, e % root_order))
        .collect();
    MubVector::new(m.len(), root_order, h.len() as u64, amps)
}

/// One basis per net block: `{ h_l ↑ m_{bi} }` with `i` outer and `l` inner.
///
/// Both inputs are verified first.
pub fn build_mubs(net: &Net, h: &GenHadamard) -> Result<MubSet, MubError> {
    if net.s() != h.size() {
        return Err(MubError::SizeMismatch {
            net: net.s(),
            hadamard: h.size(),
        });
    }
    if !verify_net(net).passed() {
        return Err(MubError::UnverifiedInput("net"));
    }
    if !verify_hadamard(h).passed() {
        return Err(MubError::UnverifiedInput("hadamard"));
    }
    let bases = net
        .blocks()
        .iter()
        .map(|block| {
            let vectors = block
                .iter()
                .flat_map(|m| h.rows().map(move |row| embed(row, h.root_order(), m)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(MubBasis::new(vectors))
        })
        .collect::<Result<Vec<_>, MubError>>()?;
    MubSet::new(net.dim(), h.root_order(), bases, MubProvenance::NetHadamard)
}

/// Unscaled inner product `S = Σ_p ω^{e_u(p) − e_v(p)}` over the common
/// support, conjugating the second argument. The physical inner product is
/// `S / √(norm_sq_u · norm_sq_v)`.
pub fn inner_product(u: &MubVector, v: &MubVector) -> Result<Cyclotomic, MubError> {
    if u.dim != v.dim {
        return Err(MubError::DimMismatch(u.dim, v.dim));
    }
    let m = lcm_u32(u.root_order, v.root_order);
    let (fu, fv) = (m / u.root_order, m / v.root_order);
    let mut s = Cyclotomic::zero(m);
    let (mut a, mut b) = (u.amps.iter().peekable(), v.amps.iter().peekable());
    while let (Some(&&(pu, eu)), Some(&&(pv, ev))) = (a.peek(), b.peek()) {
        match pu.cmp(&pv) {
            core::cmp::Ordering::Less => {
                a.next();
            }
            core::cmp::Ordering::Greater => {
                b.next();
            }
            core::cmp::Ordering::Equal => {
                s.add_root((eu * fu + m - (ev * fv) % m) % m, 1);
                a.next();
                b.next();
            }
        }
    }
    Ok(s)
}

/// Tensor combiner: basis `t` of the result is `A_t ⊗ B_t`, with `A`'s vector
/// index outer and position `p_A·d_B + p_B`. Yields `min(k_A, k_B)` bases; a
/// one-dimensional factor repeats its single basis and acts as the identity.
pub fn tensor_mubs(a: &MubSet, b: &MubSet) -> Result<MubSet, MubError> {
    if a.is_empty() || b.is_empty() {
        return Err(MubError::EmptyInput);
    }
    let k = match (a.dim, b.dim) {
        (1, 1) => a.len().max(b.len()),
        (1, _) => b.len(),
        (_, 1) => a.len(),
        _ => a.len().min(b.len()),
    };
    let m = lcm_u32(a.root_order, b.root_order);
    let (fa, fb) = (m / a.root_order, m / b.root_order);
    let dim = a.dim * b.dim;
    let bases = (0..k)
        .map(|t| {
            let ba = &a.bases[t.min(a.len() - 1)];
            let bb = &b.bases[t.min(b.len() - 1)];
            let vectors = ba
                .vectors
                .iter()
                .flat_map(|u| {
                    bb.vectors.iter().map(move |v| {
                        let mut amps = Vec::with_capacity(u.amps.len() * v.amps.len());
                        for &(pu, eu) in &u.amps {
                            for &(pv, ev) in &v.amps {
                                amps.push((pu * b.dim + pv, (eu * fa + ev * fb) % m));
                            }
                        }
                        MubVector::new(dim, m, u.norm_sq * v.norm_sq, amps)
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(MubBasis::new(vectors))
        })
        .collect::<Result<Vec<_>, MubError>>()?;
    MubSet::new(dim, m, bases, MubProvenance::Tensor)
}

impl fmt::Display for MubVector {
    /// Entries written as `1`, `-1`, `i`, `-i`, or `w{M}^{e}`, zeros as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/sqrt({}) (", self.norm_sq)?;
        for p in 0..self.dim {
            if p > 0 {
                f.write_str(", ")?;
            }
            match self.exponent_at(p) {
                None => f.write_str("0")?,
                Some(e) => write_root(f, self.root_order, e)?,
            }
        }
        f.write_str(")")
    }
}

fn write_root(f: &mut fmt::Formatter<'_>, m: u32, e: u32) -> fmt::Result {
    let e = e % m;
    if e == 0 {
        f.write_str("1")
    } else if 2 * e == m {
        f.write_str("-1")
    } else if 4 * e == m {
        f.write_str("i")
    } else if 4 * e == 3 * m {
        f.write_str("-i")
    } else {
        write!(f, "w{m}^{e}")
    }
}
