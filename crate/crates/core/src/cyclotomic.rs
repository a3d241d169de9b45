//! Exact arithmetic in `Z[ω_m]`, the integer combinations of m-th roots of unity.
//!
//! Elements are stored in the group ring: a vector of `m` integers where
//! entry `e` is the multiplicity of `ω_m^e`. This keeps addition and
//! multiplication trivially exact. The representation is not unique
//! (`1 + ω_3 + ω_3²` is zero), so equality and the zero test reduce the
//! vector, read as a polynomial in `x`, modulo the cyclotomic polynomial
//! `Φ_m` with exact integer remainders.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::arith::{divisors, lcm_u32};

const OVERFLOW: &str = "cyclotomic coefficient overflow";

/// Polynomial with exact integer coefficients, `coeffs[i]` multiplying `x^i`.
///
/// Always trimmed: the leading coefficient is nonzero unless the polynomial
/// is zero, in which case `coeffs` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = -1;
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).expect(OVERFLOW);
                out[i + j] = out[i + j].checked_add(t).expect(OVERFLOW);
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder by a monic divisor; exact over the integers.
    ///
    /// Panics if `divisor` is not monic.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (k, &d) in divisor.coeffs.iter().enumerate() {
                let t = c.checked_mul(d).expect(OVERFLOW);
                rem[i - dd + k] = rem[i - dd + k].checked_sub(t).expect(OVERFLOW);
            }
        }
        (Self::new(quot), Self::new(rem))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => {}
                _ => write!(f, "{a}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// The m-th cyclotomic polynomial `Φ_m`.
///
/// Computed bottom-up over the divisors of `m` by exact division
/// `Φ_d = (x^d - 1) / Π_{e | d, e < d} Φ_e`.
pub fn cyclo_poly(m: u32) -> IntPolynomial {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    let divs = divisors(u64::from(m));
    let mut table: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for &d in &divs {
        let mut denom = IntPolynomial::new(vec![1]);
        for (&e, phi) in table.iter() {
            if d % e == 0 {
                denom = denom.mul(phi);
            }
        }
        let (q, r) = IntPolynomial::x_pow_minus_one(d as usize).div_rem_monic(&denom);
        debug_assert!(r.is_zero());
        table.insert(d, q);
    }
    table.remove(&u64::from(m)).unwrap()
}

/// An element of `Z[ω_m]` in group-ring form.
///
/// `PartialEq` compares values, not representations.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "root order must be positive");
        Self {
            order,
            coeffs: vec![0; order as usize],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self {
            order: 1,
            coeffs: vec![n],
        }
    }

    /// `ω_m^e`, with `e` reduced modulo `m`.
    pub fn root(order: u32, exponent: i64) -> Self {
        let mut out = Self::zero(order);
        let e = exponent.rem_euclid(i64::from(order)) as usize;
        out.coeffs[e] = 1;
        out
    }

    /// Builds an element from raw group-ring coefficients; `coeffs.len()` is the order.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "root order must be positive");
        Self {
            order: coeffs.len() as u32,
            coeffs,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `count` copies of `ω_m^e` in place.
    pub fn add_root(&mut self, exponent: u32, count: i64) {
        let slot = &mut self.coeffs[(exponent % self.order) as usize];
        *slot = slot.checked_add(count).expect(OVERFLOW);
    }

    /// Re-expresses `self` at an order that is a multiple of the current one,
    /// mapping `ω_m^e` to `ω_M^{e·M/m}`.
    pub fn lift(&self, order: u32) -> Self {
        assert!(
            order.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            order
        );
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut out = Self::zero(order);
        for (e, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[e * step] = c;
        }
        out
    }

    fn lift_pair(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm_u32(a.order, b.order);
        (a.lift(m), b.lift(m))
    }

    /// Complex conjugation: `ω^e ↦ ω^{-e}`.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut out = Self::zero(self.order);
        for (e, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(m - e) % m] = c;
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| c.checked_mul(k).expect(OVERFLOW))
                .collect(),
        }
    }

    /// True when every group-ring coefficient is zero. Sufficient, not
    /// necessary, for the value to be zero.
    pub fn is_trivially_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Exact zero test by reduction modulo `Φ_m`.
    pub fn is_zero(&self) -> bool {
        if self.is_trivially_zero() {
            return true;
        }
        ZeroTest::new(self.order).is_zero(self)
    }

    /// The exponent `e` when the representation is exactly one copy of `ω^e`.
    pub fn as_single_root(&self) -> Option<u32> {
        let mut found = None;
        for (e, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(e as u32),
                _ => return None,
            }
        }
        found
    }

    /// Double-precision value `Σ c_e · e^{2πi e/m}`.
    pub fn approx(&self) -> Complex64 {
        let m = f64::from(self.order);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| Complex64::from_polar(1.0, core::f64::consts::TAU * e as f64 / m) * c as f64)
            .sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> Option<i64>) -> Self {
        let (a, b) = Self::lift_pair(self, other);
        Self {
            order: a.order,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f(x, y).expect(OVERFLOW))
                .collect(),
        }
    }

    fn convolve(&self, other: &Self) -> Self {
        let (a, b) = Self::lift_pair(self, other);
        let m = a.order as usize;
        let mut out = Self::zero(a.order);
        for (i, &x) in a.coeffs.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.coeffs.iter().enumerate().filter(|(_, &y)| y != 0) {
                let t = x.checked_mul(y).expect(OVERFLOW);
                let slot = &mut out.coeffs[(i + j) % m];
                *slot = slot.checked_add(t).expect(OVERFLOW);
            }
        }
        out
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, i64::checked_add)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, i64::checked_sub)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.convolve(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "w{}^{e}", self.order)?,
                _ => write!(f, "{a}*w{}^{e}", self.order)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Zero tester for a fixed root order, holding `Φ_M` so repeated tests
/// skip recomputing it.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    order: u32,
    phi: IntPolynomial,
}

impl ZeroTest {
    pub fn new(order: u32) -> Self {
        Self {
            order,
            phi: cyclo_poly(order),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `a` must have an order dividing the tester's order.
    pub fn is_zero(&self, a: &Cyclotomic) -> bool {
        if a.is_trivially_zero() {
            return true;
        }
        let lifted;
        let a = if a.order == self.order {
            a
        } else {
            lifted = a.lift(self.order);
            &lifted
        };
        let phi = self.phi.coeffs();
        let deg = phi.len() - 1;
        let mut r = a.coeffs.clone();
        for i in (deg..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for (k, &p) in phi.iter().enumerate() {
                let t = c.checked_mul(p).expect(OVERFLOW);
                r[i - deg + k] = r[i - deg + k].checked_sub(t).expect(OVERFLOW);
            }
        }
        r[..deg.min(r.len())].iter().all(|&c| c == 0)
    }
}
