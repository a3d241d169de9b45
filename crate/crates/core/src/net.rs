//! Incidence vectors and `(k, s)`-nets.
//!
//! A net is `k` blocks of `s` incidence vectors over `d = s²` points: vectors
//! in one block have disjoint supports, vectors from different blocks share
//! exactly one point. Nets and MOLS are interchangeable: rows, columns and
//! the symbol classes of each square give the blocks.
//!
//! Indices are 0-based. Point `i·s + j` is cell `(i, j)` of the grid.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::latin::{LatinError, LatinSquare, MolsSet};

/// 0/1 vector of length `d`, stored as packed 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidenceVector {
    len: usize,
    words: Vec<u64>,
}

impl IncidenceVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Panics if a position is out of range.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in support {
            v.set(p, true);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (p, &b) in bits.iter().enumerate() {
            v.set(p, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters; `None` on any other character.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (p, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(p, true),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, p: usize) -> bool {
        assert!(p < self.len, "position {p} out of range");
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn set(&mut self, p: usize, bit: bool) {
        assert!(p < self.len, "position {p} out of range");
        let mask = 1u64 << (p % 64);
        if bit {
            self.words[p / 64] |= mask;
        } else {
            self.words[p / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, p: usize) {
        let b = self.get(p);
        self.set(p, !b);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Sorted positions of the ones, `j_1 < j_2 < …`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&p| self.get(p)).collect()
    }

    /// Size of the support intersection. Both vectors must have equal length.
    pub fn dot(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|p| if self.get(p) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for IncidenceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// `k` blocks of incidence vectors over `s²` points. Construction does not
/// validate; use [`verify_net`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net {
    s: usize,
    blocks: Vec<Vec<IncidenceVector>>,
}

impl Net {
    pub fn new(s: usize, blocks: Vec<Vec<IncidenceVector>>) -> Self {
        Self { s, blocks }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        self.s * self.s
    }

    pub fn blocks(&self) -> &[Vec<IncidenceVector>] {
        &self.blocks
    }

    pub fn vector(&self, block: usize, index: usize) -> &IncidenceVector {
        &self.blocks[block][index]
    }

    pub fn blocks_mut(&mut self) -> &mut [Vec<IncidenceVector>] {
        &mut self.blocks
    }
}

/// One failed net condition. Coordinates are `(block, index)`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NetViolation {
    /// A block does not hold exactly `s` vectors.
    BlockSize { block: usize, len: usize },
    /// A vector does not have length `s²`.
    Length { block: usize, index: usize, len: usize },
    /// A vector does not have weight `s`.
    Weight {
        block: usize,
        index: usize,
        weight: usize,
    },
    /// Two vectors of one block overlap.
    SameBlock {
        block: usize,
        first: usize,
        second: usize,
        dot: usize,
    },
    /// Two vectors of different blocks do not meet in exactly one point.
    CrossBlock {
        block: usize,
        index: usize,
        other_block: usize,
        other_index: usize,
        dot: usize,
    },
}

impl fmt::Display for NetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NetViolation::BlockSize { block, len } => {
                write!(f, "block {block} has {len} vectors")
            }
            NetViolation::Length { block, index, len } => {
                write!(f, "vector ({block}, {index}) has length {len}")
            }
            NetViolation::Weight {
                block,
                index,
                weight,
            } => write!(f, "vector ({block}, {index}) has weight {weight}"),
            NetViolation::SameBlock {
                block,
                first,
                second,
                dot,
            } => write!(
                f,
                "vectors ({block}, {first}) and ({block}, {second}) overlap in {dot} points"
            ),
            NetViolation::CrossBlock {
                block,
                index,
                other_block,
                other_index,
                dot,
            } => write!(
                f,
                "vectors ({block}, {index}) and ({other_block}, {other_index}) meet in {dot} points, expected 1"
            ),
        }
    }
}

/// Sorted list of violations; empty means the net is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetReport {
    pub violations: Vec<NetViolation>,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks shape, weights, disjointness within blocks and single
/// intersections across blocks, listing every violation.
pub fn verify_net(net: &Net) -> NetReport {
    let s = net.s;
    let d = s * s;
    let mut violations = Vec::new();
    for (b, block) in net.blocks.iter().enumerate() {
        if block.len() != s {
            violations.push(NetViolation::BlockSize {
                block: b,
                len: block.len(),
            });
        }
        for (i, v) in block.iter().enumerate() {
            if v.len() != d {
                violations.push(NetViolation::Length {
                    block: b,
                    index: i,
                    len: v.len(),
                });
            } else if v.weight() != s {
                violations.push(NetViolation::Weight {
                    block: b,
                    index: i,
                    weight: v.weight(),
                });
            }
        }
    }
    let ok_len = |v: &IncidenceVector| v.len() == d;
    for (b, block) in net.blocks.iter().enumerate() {
        for (i, u) in block.iter().enumerate().filter(|(_, u)| ok_len(u)) {
            for (j, v) in block.iter().enumerate().skip(i + 1).filter(|(_, v)| ok_len(v)) {
                let dot = u.dot(v);
                if dot != 0 {
                    violations.push(NetViolation::SameBlock {
                        block: b,
                        first: i,
                        second: j,
                        dot,
                    });
                }
            }
            for (c, other) in net.blocks.iter().enumerate().skip(b + 1) {
                for (j, v) in other.iter().enumerate().filter(|(_, v)| ok_len(v)) {
                    let dot = u.dot(v);
                    if dot != 1 {
                        violations.push(NetViolation::CrossBlock {
                            block: b,
                            index: i,
                            other_block: c,
                            other_index: j,
                            dot,
                        });
                    }
                }
            }
        }
    }
    violations.sort();
    NetReport { violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("a net needs at least 2 blocks to define rows and columns, found {0}")]
    TooFewBlocks(usize),
    #[error("net fails verification with {0} violations")]
    Unverified(usize),
    #[error("blocks 0 and 1 do not coordinatize the points")]
    Inconsistent,
    #[error(transparent)]
    Mols(#[from] LatinError),
}

/// The `(w + 2, s)`-net of a MOLS set: rows, then columns, then one block
/// per square whose vector `v` selects the cells holding symbol `v`.
pub fn net_from_mols(mols: &MolsSet) -> Net {
    let s = mols.order();
    let d = s * s;
    let by = |f: &dyn Fn(usize) -> usize| -> Vec<IncidenceVector> {
        let mut block = vec![IncidenceVector::zeros(d); s];
        for p in 0..d {
            block[f(p)].set(p, true);
        }
        block
    };
    let mut blocks = vec![by(&|p| p / s), by(&|p| p % s)];
    for sq in mols.squares() {
        blocks.push(by(&|p| sq.cells()[p] as usize));
    }
    debug_assert!(s < 2 || blocks.len() <= s + 1);
    Net::new(s, blocks)
}

/// Reads the squares back from a verified net, using block 0 as rows and
/// block 1 as columns.
pub fn mols_from_net(net: &Net) -> Result<MolsSet, NetError> {
    if net.k() < 2 {
        return Err(NetError::TooFewBlocks(net.k()));
    }
    let report = verify_net(net);
    if !report.passed() {
        return Err(NetError::Unverified(report.violations.len()));
    }
    let s = net.s;
    let d = s * s;
    // which vector of each block covers each point
    let owner = |block: &[IncidenceVector]| -> Vec<usize> {
        let mut o = vec![usize::MAX; d];
        for (i, v) in block.iter().enumerate() {
            for p in v.support() {
                o[p] = i;
            }
        }
        o
    };
    let rows = owner(&net.blocks[0]);
    let cols = owner(&net.blocks[1]);
    let mut cell_of_point = vec![usize::MAX; d];
    let mut seen = vec![false; d];
    for p in 0..d {
        let (r, c) = (rows[p], cols[p]);
        if r >= s || c >= s || core::mem::replace(&mut seen[r * s + c], true) {
            return Err(NetError::Inconsistent);
        }
        cell_of_point[p] = r * s + c;
    }
    let squares = net.blocks[2..]
        .iter()
        .map(|block| {
            let sym = owner(block);
            let mut cells = vec![0u32; d];
            for p in 0..d {
                cells[cell_of_point[p]] = sym[p] as u32;
            }
            LatinSquare::new(s, cells)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MolsSet::new(s, squares)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{complete_mols_prime_power, cyclic_square};

    fn example_net() -> Net {
        let mols = MolsSet::new(2, vec![cyclic_square(2)]).unwrap();
        net_from_mols(&mols)
    }

    fn bits(net: &Net) -> Vec<Vec<alloc::string::String>> {
        net.blocks()
            .iter()
            .map(|b| b.iter().map(|v| v.to_bit_string()).collect())
            .collect()
    }

    #[test]
    fn three_two_net_table() {
        let net = example_net();
        assert_eq!(bits(&net), [["1100", "0011"], ["1010", "0101"], ["1001", "0110"]]);
        assert!(verify_net(&net).passed());
    }

    #[test]
    fn rows_and_columns_only() {
        for s in 1..6 {
            let net = net_from_mols(&MolsSet::empty(s));
            assert_eq!(net.k(), 2);
            assert!(verify_net(&net).passed());
            assert!(mols_from_net(&net).unwrap().is_empty());
        }
    }

    #[test]
    fn complete_net_order_three() {
        let net = net_from_mols(&complete_mols_prime_power(3).unwrap());
        assert_eq!((net.k(), net.dim()), (4, 9));
        let all: Vec<_> = net.blocks().iter().flatten().collect();
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(|v| v.weight() == 3));
        assert!(verify_net(&net).passed());
    }

    #[test]
    fn flipped_bit_is_reported() {
        let mut net = example_net();
        net.blocks_mut()[0][0].flip(0);
        let report = verify_net(&net);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            NetViolation::Weight {
                block: 0,
                index: 0,
                ..
            } | NetViolation::CrossBlock {
                block: 0,
                index: 0,
                ..
            }
        )));
        assert_eq!(
            mols_from_net(&net),
            Err(NetError::Unverified(report.violations.len()))
        );
    }

    #[test]
    fn single_block_passes() {
        let block = vec![
            IncidenceVector::from_support(4, &[0, 1]),
            IncidenceVector::from_support(4, &[2, 3]),
        ];
        assert!(verify_net(&Net::new(2, vec![block])).passed());
        assert_eq!(
            mols_from_net(&Net::new(2, vec![])),
            Err(NetError::TooFewBlocks(0))
        );
    }

    #[test]
    fn reads_back_the_square() {
        let mols = mols_from_net(&example_net()).unwrap();
        let rows: Vec<Vec<u32>> = mols.squares()[0].rows().map(|r| r.to_vec()).collect();
        assert_eq!(rows, [[0, 1], [1, 0]]);
    }

    #[test]
    fn bit_strings() {
        let v = IncidenceVector::from_bit_str("101000001").unwrap();
        assert_eq!(v.support(), [0, 2, 8]);
        assert_eq!(v.weight(), 3);
        assert!(IncidenceVector::from_bit_str("10x").is_none());
        let long = IncidenceVector::from_support(130, &[0, 64, 129]);
        assert_eq!(long.support(), [0, 64, 129]);
        assert_eq!(long.dot(&IncidenceVector::from_support(130, &[64, 129])), 2);
    }
}
