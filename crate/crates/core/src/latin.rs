//! Latin squares and sets of mutually orthogonal Latin squares (MOLS).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::arith::{divisors, factorize, prime_power};
use crate::galois::{FieldError, GField};

/// Row or column of a square, used to point at Latin violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Col(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("square {square} is not {order}x{order}")]
    Shape { square: usize, order: usize },
    #[error("square {square}: symbol {symbol} out of range")]
    SymbolOutOfRange { square: usize, symbol: u32 },
    #[error("square {square} is not Latin: {line} repeats a symbol")]
    NotLatin { square: usize, line: Line },
    #[error("squares {first} and {second} are not orthogonal: pair ({}, {}) repeats", .pair.0, .pair.1)]
    NotOrthogonal {
        first: usize,
        second: usize,
        pair: (u32, u32),
    },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("{count} squares of order {order} exceed the maximum of order - 1")]
    TooManySquares { order: usize, count: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("empty MOLS set")]
    EmptyInput,
    #[error("order must be positive")]
    ZeroOrder,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An `s × s` array over `{0, …, s-1}` with every row and column a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    /// Validates a row-major cell vector.
    pub fn new(order: usize, cells: Vec<u32>) -> Result<Self, LatinError> {
        let sq = Self { order, cells };
        sq.check(0)?;
        Ok(sq)
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, LatinError> {
        let order = rows.len();
        if order == 0 {
            return Err(LatinError::ZeroOrder);
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(LatinError::Shape { square: 0, order });
        }
        Self::new(order, rows.concat())
    }

    /// Reports the first violation, tagging it with `square` as the index.
    fn check(&self, square: usize) -> Result<(), LatinError> {
        let s = self.order;
        if s == 0 {
            return Err(LatinError::ZeroOrder);
        }
        if self.cells.len() != s * s {
            return Err(LatinError::Shape { square, order: s });
        }
        if let Some(&symbol) = self.cells.iter().find(|&&v| v as usize >= s) {
            return Err(LatinError::SymbolOutOfRange { square, symbol });
        }
        let mut seen = vec![false; s];
        for i in 0..s {
            seen.iter_mut().for_each(|b| *b = false);
            for j in 0..s {
                let v = self.get(i, j) as usize;
                if core::mem::replace(&mut seen[v], true) {
                    return Err(LatinError::NotLatin {
                        square,
                        line: Line::Row(i),
                    });
                }
            }
        }
        for j in 0..s {
            seen.iter_mut().for_each(|b| *b = false);
            for i in 0..s {
                let v = self.get(i, j) as usize;
                if core::mem::replace(&mut seen[v], true) {
                    return Err(LatinError::NotLatin {
                        square,
                        line: Line::Col(j),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.order + col]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks(self.order)
    }

    pub fn transpose(&self) -> Self {
        let s = self.order;
        let cells = (0..s * s).map(|k| self.get(k % s, k / s)).collect();
        Self { order: s, cells }
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = digits(self.order.saturating_sub(1));
        for row in self.rows() {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

fn digits(mut n: usize) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}

/// `L[i][j] = (i + j) mod s`.
pub fn cyclic_square(s: usize) -> LatinSquare {
    assert!(s >= 1, "order must be positive");
    let cells = (0..s * s).map(|k| ((k / s + k % s) % s) as u32).collect();
    LatinSquare { order: s, cells }
}

/// First ordered symbol pair that occurs twice when `a` is superimposed on `b`.
pub fn repeated_pair(a: &LatinSquare, b: &LatinSquare) -> Result<Option<(u32, u32)>, LatinError> {
    if a.order != b.order {
        return Err(LatinError::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    let s = a.order;
    let mut seen = vec![false; s * s];
    for (&x, &y) in a.cells.iter().zip(&b.cells) {
        if core::mem::replace(&mut seen[x as usize * s + y as usize], true) {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Two squares are orthogonal when all `s²` superimposed pairs are distinct.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool, LatinError> {
    Ok(repeated_pair(a, b)?.is_none())
}

/// Pairwise orthogonal Latin squares of a common order; at most `s - 1`
/// squares when `s ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolsSet {
    order: usize,
    squares: Vec<LatinSquare>,
}

impl MolsSet {
    /// Verifies every square and every pair; all-or-nothing.
    pub fn new(order: usize, squares: Vec<LatinSquare>) -> Result<Self, LatinError> {
        if order == 0 {
            return Err(LatinError::ZeroOrder);
        }
        for (t, sq) in squares.iter().enumerate() {
            if sq.order != order {
                return Err(LatinError::Shape { square: t, order });
            }
            sq.check(t)?;
        }
        if order >= 2 && squares.len() > order - 1 {
            return Err(LatinError::TooManySquares {
                order,
                count: squares.len(),
            });
        }
        for a in 0..squares.len() {
            for b in a + 1..squares.len() {
                if let Some(pair) = repeated_pair(&squares[a], &squares[b])? {
                    return Err(LatinError::NotOrthogonal {
                        first: a,
                        second: b,
                        pair,
                    });
                }
            }
        }
        Ok(Self { order, squares })
    }

    /// Builds from nested rows, `squares[t][i][j]`.
    pub fn from_nested(order: usize, squares: &[Vec<Vec<u32>>]) -> Result<Self, LatinError> {
        let mut out = Vec::with_capacity(squares.len());
        for (t, rows) in squares.iter().enumerate() {
            if rows.len() != order || rows.iter().any(|r| r.len() != order) {
                return Err(LatinError::Shape { square: t, order });
            }
            out.push(LatinSquare {
                order,
                cells: rows.concat(),
            });
        }
        Self::new(order, out)
    }

    pub fn empty(order: usize) -> Self {
        Self {
            order,
            squares: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Keeps the first `w` squares.
    pub fn truncated(&self, w: usize) -> Self {
        Self {
            order: self.order,
            squares: self.squares.iter().take(w).cloned().collect(),
        }
    }
}

/// The `q - 1` squares `L_a[i][j] = a·i + j` over `GF(q)`, for `a = 1, …, q-1`
/// in index order, with rows, columns and symbols labelled by
/// [`GField::index`].
pub fn complete_mols_prime_power(q: u64) -> Result<MolsSet, LatinError> {
    let (p, e) = prime_power(q)
        .filter(|_| q >= 2)
        .ok_or(LatinError::NotPrimePower(q))?;
    let field = GField::new(p, e)?;
    let n = field.order();
    let elems: Vec<_> = field.elements().collect();
    let squares = (1..n)
        .map(|a| {
            let cells = (0..n * n)
                .map(|k| {
                    let ai = field.mul(&elems[a], &elems[k / n]);
                    field.rank(&field.add(&ai, &elems[k % n])) as u32
                })
                .collect();
            LatinSquare { order: n, cells }
        })
        .collect();
    MolsSet::new(n, squares)
}

/// Direct product of two MOLS sets: `min(w₁, w₂)` squares of order `s₁·s₂`.
///
/// Cell `(i₁·s₂ + i₂, j₁·s₂ + j₂)` of square `t` holds `A_t[i₁][j₁]·s₂ + B_t[i₂][j₂]`.
pub fn macneish_product(a: &MolsSet, b: &MolsSet) -> Result<MolsSet, LatinError> {
    if a.is_empty() || b.is_empty() {
        return Err(LatinError::EmptyInput);
    }
    let (s1, s2) = (a.order, b.order);
    let s = s1 * s2;
    let squares = a
        .squares
        .iter()
        .zip(&b.squares)
        .map(|(x, y)| {
            let cells = (0..s * s)
                .map(|k| {
                    let (i, j) = (k / s, k % s);
                    x.get(i / s2, j / s2) * s2 as u32 + y.get(i % s2, j % s2)
                })
                .collect();
            LatinSquare { order: s, cells }
        })
        .collect();
    MolsSet::new(s, squares)
}

/// Where a MOLS count comes from, ordered from most to least concrete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MolsProvenance {
    /// Built here from complete prime-power sets and direct products.
    Constructive,
    /// Uses at least one imported, verified table.
    Imported,
    /// Relies on an existence result with no concrete squares.
    CitedExistence,
}

impl MolsProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            MolsProvenance::Constructive => "constructive",
            MolsProvenance::Imported => "imported",
            MolsProvenance::CitedExistence => "cited-existence",
        }
    }

    /// A product is only as concrete as its least concrete factor.
    fn join(self, other: Self) -> Self {
        self.max(other)
    }
}

/// Smallest order at which six MOLS are known to exist (Wilson).
pub const SIX_MOLS_FROM_ORDER: usize = 76;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CitedMols {
    pub count: usize,
    pub source: String,
}

/// Imported tables and non-constructive table entries consulted by
/// [`mols_lower_bound`].
#[derive(Clone, Debug, Default)]
pub struct MolsTables {
    sets: BTreeMap<usize, MolsSet>,
    cited: BTreeMap<usize, CitedMols>,
}

impl MolsTables {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps the largest verified set per order.
    pub fn add_set(&mut self, set: MolsSet) {
        match self.sets.get(&set.order) {
            Some(old) if old.len() >= set.len() => {}
            _ => {
                self.sets.insert(set.order, set);
            }
        }
    }

    /// A cited lower bound `N_MOLS(order) ≥ count`; never yields squares.
    pub fn add_cited(
        &mut self,
        order: usize,
        count: usize,
        source: impl Into<String>,
    ) -> Result<(), LatinError> {
        if order < 2 {
            return Err(LatinError::ZeroOrder);
        }
        if count > order - 1 {
            return Err(LatinError::TooManySquares { order, count });
        }
        if self.cited.get(&order).is_none_or(|c| c.count < count) {
            self.cited.insert(
                order,
                CitedMols {
                    count,
                    source: source.into(),
                },
            );
        }
        Ok(())
    }

    pub fn set(&self, order: usize) -> Option<&MolsSet> {
        self.sets.get(&order)
    }

    pub fn sets(&self) -> impl Iterator<Item = &MolsSet> {
        self.sets.values()
    }

    pub fn cited(&self) -> impl Iterator<Item = (usize, &CitedMols)> {
        self.cited.iter().map(|(&k, v)| (k, v))
    }
}

/// How a concrete MOLS set of the constructible count is assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MolsRecipe {
    PrimePower(u64),
    Imported(usize),
    Product(alloc::boxed::Box<MolsRecipe>, alloc::boxed::Box<MolsRecipe>),
}

impl MolsRecipe {
    pub fn build(&self, tables: &MolsTables) -> Result<MolsSet, LatinError> {
        match self {
            MolsRecipe::PrimePower(q) => complete_mols_prime_power(*q),
            MolsRecipe::Imported(s) => tables.set(*s).cloned().ok_or(LatinError::EmptyInput),
            MolsRecipe::Product(a, b) => {
                let (a, b) = (a.build(tables)?, b.build(tables)?);
                let w = a.len().min(b.len());
                macneish_product(&a.truncated(w), &b.truncated(w))
            }
        }
    }
}

impl fmt::Display for MolsRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MolsRecipe::PrimePower(q) => write!(f, "GF({q})"),
            MolsRecipe::Imported(s) => write!(f, "imported({s})"),
            MolsRecipe::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

/// Lower bound on the number of MOLS of order `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolsBound {
    pub order: usize,
    /// Best count from any source.
    pub count: usize,
    pub provenance: MolsProvenance,
    /// Best count for which concrete squares can be produced.
    pub constructible: usize,
    /// `Constructive` or `Imported`.
    pub constructible_provenance: MolsProvenance,
    pub recipe: MolsRecipe,
    /// Source note for cited counts.
    pub cited_source: Option<String>,
}

#[derive(Clone)]
struct BoundNode {
    best: (usize, MolsProvenance),
    cited_source: Option<String>,
    constructible: (usize, MolsProvenance, MolsRecipe),
}

/// Lower bound on `N_MOLS(s)` for `s ≥ 2`.
///
/// Takes the maximum over complete prime-power sets, imported tables,
/// cited existence (six MOLS from order 76 onwards, plus cited table
/// entries), and direct products over every factorization `s = a·b`.
pub fn mols_lower_bound(s: usize, tables: &MolsTables) -> MolsBound {
    assert!(s >= 2, "MOLS bounds need order >= 2");
    let mut memo = BTreeMap::new();
    let node = bound_node(s as u64, tables, &mut memo);
    MolsBound {
        order: s,
        count: node.best.0,
        provenance: node.best.1,
        constructible: node.constructible.0,
        constructible_provenance: node.constructible.1,
        recipe: node.constructible.2,
        cited_source: node.cited_source,
    }
}

fn better(cand: (usize, MolsProvenance), cur: (usize, MolsProvenance)) -> bool {
    cand.0 > cur.0 || (cand.0 == cur.0 && cand.1 < cur.1)
}

fn bound_node(s: u64, tables: &MolsTables, memo: &mut BTreeMap<u64, BoundNode>) -> BoundNode {
    if let Some(n) = memo.get(&s) {
        return n.clone();
    }
    let su = s as usize;
    // Every order has at least one Latin square; a prime power gives q - 1.
    let (mut constructible, mut recipe) = match prime_power(s) {
        Some(_) => (
            (s as usize - 1, MolsProvenance::Constructive),
            MolsRecipe::PrimePower(s),
        ),
        None => {
            // the product of prime-power factors is always available
            let f = factorize(s);
            let mut it = f.iter().map(|&(p, e)| p.pow(e));
            let first = it.next().unwrap();
            let r = it.fold(MolsRecipe::PrimePower(first), |acc, q| {
                MolsRecipe::Product(acc.into(), MolsRecipe::PrimePower(q).into())
            });
            let w = f.iter().map(|&(p, e)| p.pow(e) as usize - 1).min().unwrap();
            ((w, MolsProvenance::Constructive), r)
        }
    };
    if let Some(set) = tables.set(su) {
        let cand = (set.len(), MolsProvenance::Imported);
        if better(cand, constructible) {
            constructible = cand;
            recipe = MolsRecipe::Imported(su);
        }
    }
    for a in divisors(s) {
        let b = s / a;
        if a == 1 || a > b {
            continue;
        }
        let na = bound_node(a, tables, memo);
        let nb = bound_node(b, tables, memo);
        let (ca, cb) = (&na.constructible, &nb.constructible);
        let cand = (ca.0.min(cb.0), ca.1.join(cb.1));
        if better(cand, constructible) {
            constructible = cand;
            recipe = MolsRecipe::Product(ca.2.clone().into(), cb.2.clone().into());
        }
    }

    let mut best = constructible;
    let mut cited_source = None;
    if su >= SIX_MOLS_FROM_ORDER && better((6, MolsProvenance::CitedExistence), best) {
        best = (6, MolsProvenance::CitedExistence);
        cited_source = Some(String::from("six MOLS exist for every order >= 76 (Wilson)"));
    }
    if let Some(c) = tables.cited.get(&su) {
        if better((c.count, MolsProvenance::CitedExistence), best) {
            best = (c.count, MolsProvenance::CitedExistence);
            cited_source = Some(c.source.clone());
        }
    }
    for a in divisors(s) {
        let b = s / a;
        if a == 1 || a > b {
            continue;
        }
        let na = bound_node(a, tables, memo);
        let nb = bound_node(b, tables, memo);
        let cand = (na.best.0.min(nb.best.0), na.best.1.join(nb.best.1));
        if better(cand, best) {
            best = cand;
            cited_source = na.cited_source.clone().or(nb.cited_source.clone());
        }
    }
    let node = BoundNode {
        best,
        cited_source,
        constructible: (constructible.0, constructible.1, recipe),
    };
    memo.insert(s, node.clone());
    node
}
