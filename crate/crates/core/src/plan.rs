//! Planner: how many mutually unbiased bases can be obtained in dimension `d`.
//!
//! A dimension is split multiplicatively into parts, each part being
//! - a prime power `q` with `q + 1` bases (known to exist, not built here),
//! - a square `s²` with `N_MOLS(s) + 2` bases from the net construction, or
//! - a dimension covered by an imported, verified MUB set.
//!
//! Parts combine by tensoring, which keeps the minimum count. The search
//! runs over every factorization tree, memoized by divisor. Two answers
//! are reported: the best count from any source, and the best count for
//! which every part has a concrete artifact.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{divisors, exact_sqrt, factorize, prime_power};
use crate::latin::{mols_lower_bound, MolsBound, MolsProvenance as Provenance, MolsTables};

/// Largest dimension the planner accepts.
pub const MAX_PLAN_DIM: u64 = 1_000_000_000;

/// Floor on `N_MUB(d)` for every `d ≥ 2`.
pub const MUB_FLOOR: usize = 3;

/// A fact the planner may lean on. Non-effective entries never contribute
/// to a count; they are listed for reference only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnowledgeEntry {
    pub id: &'static str,
    pub statement: &'static str,
    pub effective: bool,
}

pub const KNOWLEDGE: &[KnowledgeEntry] = &[
    KnowledgeEntry {
        id: "prime-power-complete",
        statement: "N_MUB(q) = q + 1 for every prime power q",
        effective: true,
    },
    KnowledgeEntry {
        id: "three-mubs-floor",
        statement: "N_MUB(d) >= 3 for every d >= 2",
        effective: true,
    },
    KnowledgeEntry {
        id: "six-mols-from-76",
        statement: "N_MOLS(s) >= 6 for every s >= 76 (Wilson)",
        effective: true,
    },
    KnowledgeEntry {
        id: "cited-table",
        statement: "user-supplied N_MOLS lower bounds without squares",
        effective: true,
    },
    KnowledgeEntry {
        id: "mols-growth-1/91",
        statement: "N_MOLS(s) >= s^(1/91)/3 for all large s (Chowla, Erdos, Straus)",
        effective: false,
    },
    KnowledgeEntry {
        id: "mols-growth-1/17",
        statement: "N_MOLS(s) >= s^(1/17) for all large s (Wilson)",
        effective: false,
    },
    KnowledgeEntry {
        id: "mols-growth-1/14.8",
        statement: "N_MOLS(s) >= s^(1/14.8) for all large s",
        effective: false,
    },
    KnowledgeEntry {
        id: "square-mub-growth",
        statement: "N_MUB(s^2) >= s^(1/14.8) for all but finitely many s",
        effective: false,
    },
];

/// Imports consulted by the planner.
#[derive(Clone, Debug, Default)]
pub struct PlanImports {
    pub mols: MolsTables,
    /// Dimension → number of bases in an imported, verified MUB set.
    pub mubs: BTreeMap<u64, usize>,
}

impl PlanImports {
    pub fn add_mubs(&mut self, dim: u64, count: usize) {
        let slot = self.mubs.entry(dim).or_insert(0);
        *slot = (*slot).max(count);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanNode {
    PrimePower {
        q: u64,
        count: usize,
    },
    Square {
        s: u64,
        count: usize,
        provenance: Provenance,
        mols: Box<MolsBound>,
    },
    ImportedMubs {
        dim: u64,
        count: usize,
    },
    Tensor {
        parts: Vec<PlanNode>,
        count: usize,
    },
}

impl PlanNode {
    pub fn count(&self) -> usize {
        match self {
            PlanNode::PrimePower { count, .. }
            | PlanNode::Square { count, .. }
            | PlanNode::ImportedMubs { count, .. }
            | PlanNode::Tensor { count, .. } => *count,
        }
    }

    pub fn dim(&self) -> u64 {
        match self {
            PlanNode::PrimePower { q, .. } => *q,
            PlanNode::Square { s, .. } => s * s,
            PlanNode::ImportedMubs { dim, .. } => *dim,
            PlanNode::Tensor { parts, .. } => parts.iter().map(PlanNode::dim).product(),
        }
    }

    /// Provenance of the parts that attain the count; for a tensor, the
    /// least concrete among the parts with the minimal count.
    pub fn provenance(&self) -> Provenance {
        match self {
            PlanNode::PrimePower { .. } => Provenance::CitedExistence,
            PlanNode::Square { provenance, .. } => *provenance,
            PlanNode::ImportedMubs { .. } => Provenance::Imported,
            PlanNode::Tensor { parts, count } => parts
                .iter()
                .filter(|p| p.count() == *count)
                .map(PlanNode::provenance)
                .max()
                .unwrap_or(Provenance::Constructive),
        }
    }

    pub fn leaves(&self) -> Vec<&PlanNode> {
        match self {
            PlanNode::Tensor { parts, .. } => parts.iter().flat_map(PlanNode::leaves).collect(),
            leaf => alloc::vec![leaf],
        }
    }

    fn tensor(a: PlanNode, b: PlanNode) -> PlanNode {
        let count = a.count().min(b.count());
        let mut parts = Vec::new();
        for n in [a, b] {
            match n {
                PlanNode::Tensor { parts: p, .. } => parts.extend(p),
                leaf => parts.push(leaf),
            }
        }
        PlanNode::Tensor { parts, count }
    }

    fn rank(&self) -> (usize, core::cmp::Reverse<Provenance>) {
        (self.count(), core::cmp::Reverse(self.provenance()))
    }
}

impl fmt::Display for PlanNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanNode::PrimePower { q, count } => {
                write!(f, "{q} -> {count} (prime power, cited-existence)")
            }
            PlanNode::Square {
                s,
                count,
                provenance,
                mols,
            } => write!(
                f,
                "{s}^2 -> {count} (net from {} MOLS of order {s}, {})",
                count - 2,
                match (provenance, &mols.cited_source) {
                    (Provenance::CitedExistence, Some(src)) => src.as_str(),
                    (p, _) => p.as_str(),
                }
            ),
            PlanNode::ImportedMubs { dim, count } => {
                write!(f, "{dim} -> {count} (imported MUB set)")
            }
            PlanNode::Tensor { parts, count } => {
                f.write_str("[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "] -> {count}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub d: u64,
    /// Best count from any source, after the floor of [`MUB_FLOOR`].
    pub best_count: usize,
    /// Witness for `best_count` before the floor.
    pub best: PlanNode,
    pub floor_applied: bool,
    /// Best count where every part is built or imported.
    pub best_constructible_count: Option<usize>,
    pub constructible: Option<PlanNode>,
    /// `min (p^e + 1)` over the prime-power factors of `d`.
    pub prime_power_count: usize,
}

impl Plan {
    pub fn best_provenance(&self) -> Provenance {
        if self.floor_applied {
            Provenance::CitedExistence
        } else {
            self.best.provenance()
        }
    }

    /// Knowledge-base ids behind the best count.
    pub fn cited_facts(&self) -> Vec<&'static str> {
        let mut ids = Vec::new();
        for leaf in self.best.leaves() {
            match leaf {
                PlanNode::PrimePower { .. } => ids.push("prime-power-complete"),
                PlanNode::Square { mols, .. } if mols.provenance == Provenance::CitedExistence => {
                    let from_table = mols
                        .cited_source
                        .as_deref()
                        .is_some_and(|s| !s.contains("Wilson"));
                    ids.push(if from_table {
                        "cited-table"
                    } else {
                        "six-mols-from-76"
                    });
                }
                _ => {}
            }
        }
        if self.floor_applied {
            ids.push("three-mubs-floor");
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

struct Planner<'a> {
    imports: &'a PlanImports,
    best: BTreeMap<u64, PlanNode>,
    constructible: BTreeMap<u64, Option<PlanNode>>,
    mols: BTreeMap<u64, MolsBound>,
}

impl Planner<'_> {
    fn mols(&mut self, s: u64) -> MolsBound {
        let tables = &self.imports.mols;
        self.mols
            .entry(s)
            .or_insert_with(|| mols_lower_bound(s as usize, tables))
            .clone()
    }

    fn square_leaf(&mut self, d: u64, constructible: bool) -> Option<PlanNode> {
        let s = exact_sqrt(d).filter(|&s| s >= 2)?;
        let mols = self.mols(s);
        let (w, provenance) = if constructible {
            (mols.constructible, mols.constructible_provenance)
        } else {
            (mols.count, mols.provenance)
        };
        Some(PlanNode::Square {
            s,
            count: w + 2,
            provenance,
            mols: Box::new(mols),
        })
    }

    fn import_leaf(&self, d: u64) -> Option<PlanNode> {
        self.imports
            .mubs
            .get(&d)
            .map(|&count| PlanNode::ImportedMubs { dim: d, count })
    }

    fn splits(d: u64) -> impl Iterator<Item = (u64, u64)> {
        divisors(d)
            .into_iter()
            .filter(move |&a| a > 1 && a * a <= d)
            .map(move |a| (a, d / a))
    }

    fn best(&mut self, d: u64) -> PlanNode {
        if let Some(n) = self.best.get(&d) {
            return n.clone();
        }
        let mut cands = Vec::new();
        if prime_power(d).is_some() {
            cands.push(PlanNode::PrimePower {
                q: d,
                count: d as usize + 1,
            });
        }
        cands.extend(self.square_leaf(d, false));
        cands.extend(self.import_leaf(d));
        for (a, b) in Self::splits(d) {
            let (na, nb) = (self.best(a), self.best(b));
            cands.push(PlanNode::tensor(na, nb));
        }
        let node = pick(cands).expect("every d >= 2 has a prime-power factorization");
        self.best.insert(d, node.clone());
        node
    }

    fn constructible(&mut self, d: u64) -> Option<PlanNode> {
        if let Some(n) = self.constructible.get(&d) {
            return n.clone();
        }
        let mut cands = Vec::new();
        cands.extend(self.square_leaf(d, true));
        cands.extend(self.import_leaf(d));
        for (a, b) in Self::splits(d) {
            if let (Some(na), Some(nb)) = (self.constructible(a), self.constructible(b)) {
                cands.push(PlanNode::tensor(na, nb));
            }
        }
        let node = pick(cands);
        self.constructible.insert(d, node.clone());
        node
    }
}

/// Highest count, then most concrete provenance; first candidate wins ties.
fn pick(cands: Vec<PlanNode>) -> Option<PlanNode> {
    let mut best: Option<PlanNode> = None;
    for c in cands {
        if best.as_ref().is_none_or(|b| c.rank() > b.rank()) {
            best = Some(c);
        }
    }
    best
}

/// Plans dimension `d` (`2 ≤ d ≤ 10^9`).
pub fn plan(d: u64, imports: &PlanImports) -> Plan {
    assert!((2..=MAX_PLAN_DIM).contains(&d), "dimension out of range");
    let mut planner = Planner {
        imports,
        best: BTreeMap::new(),
        constructible: BTreeMap::new(),
        mols: BTreeMap::new(),
    };
    let best = planner.best(d);
    let constructible = planner.constructible(d);
    let prime_power_count = factorize(d)
        .into_iter()
        .map(|(p, e)| p.pow(e) as usize + 1)
        .min()
        .unwrap();
    let floor_applied = best.count() < MUB_FLOOR;
    Plan {
        d,
        best_count: best.count().max(MUB_FLOOR),
        best,
        floor_applied,
        best_constructible_count: constructible.as_ref().map(PlanNode::count),
        constructible,
        prime_power_count,
    }
}

/// One-line summary, e.g. `d = 4: best 5 (cited-existence), constructible 3, reduce-to-prime-powers 5`.
pub fn summary(p: &Plan) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let label = match p.best_provenance() {
        Provenance::Constructive => "constructible",
        Provenance::Imported => "constructible from imports",
        Provenance::CitedExistence => "cited-existence",
    };
    let _ = write!(
        out,
        "d = {}: best {} ({label}), constructible ",
        p.d, p.best_count
    );
    let _ = match p.best_constructible_count {
        Some(c) => write!(out, "{c}"),
        None => write!(out, "none"),
    };
    let _ = write!(out, ", reduce-to-prime-powers {}", p.prime_power_count);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> PlanImports {
        PlanImports::default()
    }

    #[test]
    fn four() {
        let p = plan(4, &none());
        assert_eq!(p.best_count, 5);
        assert_eq!(p.best_provenance(), Provenance::CitedExistence);
        assert_eq!(p.best_constructible_count, Some(3));
        assert_eq!(p.prime_power_count, 5);
        assert_eq!(
            summary(&p),
            "d = 4: best 5 (cited-existence), constructible 3, reduce-to-prime-powers 5"
        );
        assert_eq!(p.cited_facts(), ["prime-power-complete"]);
    }

    #[test]
    fn seventy_eight_squared() {
        let p = plan(78 * 78, &none());
        assert_eq!(p.best_count, 8);
        assert_eq!(p.prime_power_count, 5);
        assert_eq!(p.best_provenance(), Provenance::CitedExistence);
        assert_eq!(p.cited_facts(), ["six-mols-from-76"]);
        // MacNeish over 2·3·13 only gives one square
        assert_eq!(p.best_constructible_count, Some(3));
    }

    #[test]
    fn mixed_without_import() {
        let p = plan(26 * 26 * 7, &none());
        assert_eq!(p.best_count, 5);
        assert_eq!(p.prime_power_count, 5);
        assert_eq!(p.best_constructible_count, None);
    }

    #[test]
    fn mixed_with_cited_table() {
        let mut imp = none();
        imp.mols.add_cited(26, 4, "table").unwrap();
        let p = plan(26 * 26 * 7, &imp);
        assert_eq!(p.best_count, 6);
        assert_eq!(p.best_provenance(), Provenance::CitedExistence);
        assert_eq!(p.cited_facts(), ["cited-table", "prime-power-complete"]);
    }

    #[test]
    fn primes_and_small() {
        let p = plan(2, &none());
        assert_eq!((p.best_count, p.best_constructible_count), (3, None));
        let p = plan(6, &none());
        assert_eq!((p.best_count, p.prime_power_count), (3, 3));
        let p = plan(36, &none());
        // 6^2: one MOLS of order 6 -> 3, prime powers 4·9 -> 5
        assert_eq!((p.best_count, p.best_constructible_count), (5, Some(3)));
        let p = plan(144, &none());
        // 12^2: two MOLS of order 12 -> 4; 16·9 -> min(17, 10) = 10
        assert_eq!((p.best_count, p.best_constructible_count), (10, Some(4)));
    }

    #[test]
    fn imported_mubs_complete_a_plan() {
        let mut imp = none();
        imp.add_mubs(7, 8);
        imp.mols.add_cited(26, 4, "table").unwrap();
        let p = plan(7, &imp);
        assert_eq!(p.best_constructible_count, Some(8));
        let p = plan(26 * 26 * 7, &imp);
        assert_eq!(p.best_constructible_count, Some(3));
    }
}
