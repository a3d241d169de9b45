//! Generalized Hadamard matrices with root-of-unity entries.
//!
//! Entry `(k, l)` is `ω_m^{exponents[k][l]}`, so every entry has modulus one
//! by construction and `H H† = s·I` can be checked exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{gcd, lcm_u32};
use crate::cyclotomic::{Cyclotomic, ZeroTest};

/// Largest matrix size accepted by [`char_table`].
pub const MAX_CHAR_TABLE_SIZE: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error("matrix must be {size}x{size}")]
    Shape { size: usize },
    #[error("exponent {exponent} out of range for root order {root_order}")]
    ExponentRange { exponent: u32, root_order: u32 },
    #[error("sizes and orders must be positive")]
    Zero,
    #[error("character table of order {0} exceeds {MAX_CHAR_TABLE_SIZE}")]
    TooLarge(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenHadamard {
    size: usize,
    root_order: u32,
    exponents: Vec<u32>,
}

impl GenHadamard {
    /// Checks shape and exponent range only; see [`verify_hadamard`].
    pub fn new(root_order: u32, rows: &[Vec<u32>]) -> Result<Self, HadamardError> {
        let size = rows.len();
        if size == 0 || root_order == 0 {
            return Err(HadamardError::Zero);
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(HadamardError::Shape { size });
        }
        if let Some(&exponent) = rows.iter().flatten().find(|&&e| e >= root_order) {
            return Err(HadamardError::ExponentRange { exponent, root_order });
        }
        Ok(Self {
            size,
            root_order,
            exponents: rows.concat(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.exponents[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.exponents[row * self.size..(row + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.chunks(self.size)
    }

    /// Reduces the root order to the smallest one the exponents need.
    fn normalized(mut self) -> Self {
        let g = self
            .exponents
            .iter()
            .fold(u64::from(self.root_order), |g, &e| gcd(g, u64::from(e))) as u32;
        if g > 1 {
            self.root_order /= g;
            self.exponents.iter_mut().for_each(|e| *e /= g);
        }
        self
    }

    /// Entries as complex numbers, row-major.
    pub fn approx(&self) -> Vec<Complex64> {
        let m = f64::from(self.root_order);
        self.exponents
            .iter()
            .map(|&e| Complex64::from_polar(1.0, core::f64::consts::TAU * f64::from(e) / m))
            .collect()
    }
}

/// Fourier matrix, entry `(k, l) = ω_s^{k·l}` for `k, l = 0, …, s-1`.
pub fn dft(s: usize) -> GenHadamard {
    assert!(s >= 1, "size must be positive");
    let exponents = (0..s * s).map(|k| ((k / s) * (k % s) % s) as u32).collect();
    GenHadamard {
        size: s,
        root_order: s as u32,
        exponents,
    }
}

/// Kronecker product; row `(k₁, k₂)` flattens to `k₁·s_B + k₂`.
pub fn tensor_hadamard(a: &GenHadamard, b: &GenHadamard) -> GenHadamard {
    let m = lcm_u32(a.root_order, b.root_order);
    let (fa, fb) = (m / a.root_order, m / b.root_order);
    let s = a.size * b.size;
    let exponents = (0..s * s)
        .map(|k| {
            let (r, c) = (k / s, k % s);
            let ea = a.get(r / b.size, c / b.size) * fa;
            let eb = b.get(r % b.size, c % b.size) * fb;
            (ea + eb) % m
        })
        .collect();
    GenHadamard {
        size: s,
        root_order: m,
        exponents,
    }
    .normalized()
}

/// Character table of `Z_{n₁} × … × Z_{n_t}`, i.e. `dft(n₁) ⊗ … ⊗ dft(n_t)`.
pub fn char_table(orders: &[u32]) -> Result<GenHadamard, HadamardError> {
    if orders.contains(&0) {
        return Err(HadamardError::Zero);
    }
    let total = orders
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(u64::from(n)))
        .unwrap_or(u64::MAX);
    if total > MAX_CHAR_TABLE_SIZE {
        return Err(HadamardError::TooLarge(total));
    }
    Ok(orders
        .iter()
        .fold(dft(1), |acc, &n| tensor_hadamard(&acc, &dft(n as usize))))
}

/// Row pairs `(r, r')`, `r ≤ r'`, whose inner product is wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HadamardReport {
    pub failing_pairs: Vec<(usize, usize)>,
}

impl HadamardReport {
    pub fn passed(&self) -> bool {
        self.failing_pairs.is_empty()
    }
}

/// Exact check of `H H† = s·I`, one cyclotomic sum per row pair.
pub fn verify_hadamard(h: &GenHadamard) -> HadamardReport {
    let m = h.root_order;
    let zt = ZeroTest::new(m);
    let size = Cyclotomic::from_int(h.size as i64);
    let mut failing_pairs = Vec::new();
    for r in 0..h.size {
        for r2 in r..h.size {
            let mut sum = Cyclotomic::zero(m);
            for (&a, &b) in h.row(r).iter().zip(h.row(r2)) {
                sum.add_root((a + m - b) % m, 1);
            }
            let ok = if r == r2 {
                zt.is_zero(&(&sum - &size.lift(m)))
            } else {
                zt.is_zero(&sum)
            };
            if !ok {
                failing_pairs.push((r, r2));
            }
        }
    }
    HadamardReport { failing_pairs }
}

/// `max |(H H† − s·I)_{rr'}|` in double precision.
pub fn float_deviation(h: &GenHadamard) -> f64 {
    let a = h.approx();
    let s = h.size;
    let mut worst = 0.0f64;
    for r in 0..s {
        for r2 in 0..s {
            let dot: Complex64 = (0..s).map(|l| a[r * s + l] * a[r2 * s + l].conj()).sum();
            let target = if r == r2 { s as f64 } else { 0.0 };
            worst = worst.max((dot - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// An all-ones matrix of size `s` (rank one; fails verification for `s ≥ 2`).
pub fn all_ones(s: usize) -> GenHadamard {
    GenHadamard {
        size: s,
        root_order: 1,
        exponents: vec![0; s * s],
    }
}
