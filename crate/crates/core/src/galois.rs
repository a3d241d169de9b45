//! Finite fields `GF(p^e)` as polynomials over `Z_p` modulo a monic irreducible.
//!
//! Fields are small (at most 2^16 elements) and elements are plain
//! coefficient vectors, which is all the Latin square constructions need.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::arith::is_prime;

/// Largest field order accepted by [`GField::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{e} exceeds {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, e: u32 },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for a field of order {order}")]
    OutOfRange { index: usize, order: usize },
}

/// Element of a [`GField`]: `e` coefficients in `[0, p)`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GFElem(Vec<u32>);

impl GFElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GField {
    p: u32,
    e: u32,
    /// Monic, `e + 1` coefficients, low degree first.
    modulus: Vec<u32>,
}

impl GField {
    /// The field of order `p^e` whose modulus is the lexicographically
    /// smallest monic irreducible of degree `e`, comparing coefficients
    /// from the constant term upwards.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if p > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge { p, e });
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match p.checked_pow(e) {
            Some(q) if q <= MAX_FIELD_ORDER => {}
            _ => return Err(FieldError::TooLarge { p, e }),
        }
        let p = p as u32;
        let modulus = (0..p.pow(e))
            .map(|n| {
                // c_0 is the most significant digit of n
                let mut c = vec![0u32; e as usize + 1];
                let mut rest = n;
                for k in (0..e as usize).rev() {
                    c[k] = rest % p;
                    rest /= p;
                }
                c[e as usize] = 1;
                c
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists for every degree");
        Ok(Self { p, e, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.e)
    }

    /// Coefficients of the modulus, low degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> GFElem {
        GFElem(vec![0; self.e as usize])
    }

    pub fn one(&self) -> GFElem {
        let mut c = vec![0; self.e as usize];
        c[0] = 1;
        GFElem(c)
    }

    pub fn is_zero(&self, a: &GFElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GFElem, b: &GFElem) -> GFElem {
        GFElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &GFElem) -> GFElem {
        GFElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &GFElem, b: &GFElem) -> GFElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &GFElem, b: &GFElem) -> GFElem {
        let e = self.e as usize;
        let p = u64::from(self.p);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (k, &m) in self.modulus.iter().enumerate() {
                let t = c * u64::from(m) % p;
                prod[i - e + k] = (prod[i - e + k] + p - t) % p;
            }
        }
        GFElem(prod[..e].iter().map(|&c| c as u32).collect())
    }

    pub fn pow(&self, a: &GFElem, mut n: u64) -> GFElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse as `a^{q-2}`.
    pub fn inv(&self, a: &GFElem) -> Result<GFElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    /// The element whose base-`p` digits (least significant first) are the
    /// coefficients of `1, x, x², …`.
    pub fn index(&self, i: usize) -> Result<GFElem, FieldError> {
        let order = self.order();
        if i >= order {
            return Err(FieldError::OutOfRange { index: i, order });
        }
        let p = self.p as usize;
        let mut rest = i;
        Ok(GFElem(
            (0..self.e)
                .map(|_| {
                    let d = rest % p;
                    rest /= p;
                    d as u32
                })
                .collect(),
        ))
    }

    /// Inverse of [`GField::index`].
    pub fn rank(&self, a: &GFElem) -> usize {
        a.0.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GFElem> + '_ {
        (0..self.order()).map(|i| self.index(i).unwrap())
    }
}

/// Remainder of `f` by the monic `g` over `Z_p`; both low degree first.
fn rem_mod_p(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = u64::from(p);
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    if r.len() <= dg {
        return f.to_vec();
    }
    for i in (dg..r.len()).rev() {
        let c = r[i] % p;
        if c == 0 {
            continue;
        }
        for (k, &m) in g.iter().enumerate() {
            let t = c * u64::from(m) % p;
            r[i - dg + k] = (r[i - dg + k] + p - t) % p;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive test: `f` (monic, degree `e`) has no monic factor of degree `1..=e/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() - 1;
    for k in 1..=e / 2 {
        for n in 0..p.pow(k as u32) {
            let mut g = vec![0u32; k + 1];
            let mut rest = n;
            for c in g.iter_mut().take(k) {
                *c = rest % p;
                rest /= p;
            }
            g[k] = 1;
            if rem_mod_p(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &GField, i: usize) -> GFElem {
        f.index(i).unwrap()
    }

    #[test]
    fn construction() {
        let f = GField::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(GField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(GField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // [1,0,1,1] < [1,1,0,1] low-degree-first, so x³ + x² + 1 wins over x³ + x + 1.
        assert_eq!(GField::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(GField::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(GField::new(1, 1), Err(FieldError::NotPrime(1)));
        assert_eq!(GField::new(2, 17), Err(FieldError::TooLarge { p: 2, e: 17 }));
        assert!(GField::new(2, 16).is_ok());
        assert_eq!(GField::new(3, 0), Err(FieldError::ZeroDegree));
    }

    #[test]
    fn quadratics_over_z2() {
        // x², x² + 1, x² + x are reducible; only x² + x + 1 survives.
        let irreducible: Vec<_> = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
            .iter()
            .filter(|f| is_irreducible(&f[..], 2))
            .collect();
        assert_eq!(irreducible, [&[1, 1, 1]]);
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = GField::new(3, 1).unwrap();
        assert_eq!(f3.add(&el(&f3, 2), &el(&f3, 2)), el(&f3, 1));
        assert_eq!(f3.mul(&el(&f3, 2), &el(&f3, 2)), el(&f3, 1));
        assert_eq!(f3.inv(&el(&f3, 2)).unwrap(), el(&f3, 2));

        let f4 = GField::new(2, 2).unwrap();
        let x = el(&f4, 2);
        let x1 = el(&f4, 3);
        assert_eq!(x.coeffs(), &[0, 1]);
        assert_eq!(x1.coeffs(), &[1, 1]);
        assert_eq!(f4.add(&x, &x), f4.zero());
        assert_eq!(f4.mul(&x, &x1), f4.one());
        assert_eq!(f4.inv(&x).unwrap(), x1);
        assert_eq!(f4.mul(&x, &f4.one()), x);

        let f5 = GField::new(5, 1).unwrap();
        assert_eq!(f5.inv(&f5.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(f5.index(5), Err(FieldError::OutOfRange { index: 5, order: 5 }));
    }

    #[test]
    fn index_rank_round_trip() {
        for (p, e) in [(2, 4), (3, 2), (5, 1), (7, 2)] {
            let f = GField::new(p, e).unwrap();
            for i in 0..f.order() {
                assert_eq!(f.rank(&f.index(i).unwrap()), i);
            }
        }
    }
}
