//! JSON file formats. Every import re-verifies its object and either
//! returns it whole or fails; nothing partially valid gets through.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use mubkit_core::hadamard::verify_hadamard;
use mubkit_core::latin::{are_orthogonal, LatinError};
use mubkit_core::mub::{FloatMubSet, FloatVector, MubBasis, MubProvenance, MubReport, VerifyMode};
use mubkit_core::net::verify_net;
use mubkit_core::{GenHadamard, IncidenceVector, LatinSquare, MolsSet, MubSet, MubVector, Net, FLOAT_TOL};

use crate::parallel::verify_mubs_jobs;

/// At most this many failures are spelled out in an error message.
const SHOWN_FAILURES: usize = 20;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
    #[error("{0}")]
    NotLatin(LatinError),
    #[error("{0}")]
    NotOrthogonal(LatinError),
    #[error("{what} failed verification ({} failures): {}", .failures.len(), shown(.failures))]
    VerificationFailed {
        what: &'static str,
        failures: Vec<String>,
    },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn shown(failures: &[String]) -> String {
    let mut s = failures[..failures.len().min(SHOWN_FAILURES)].join("; ");
    if failures.len() > SHOWN_FAILURES {
        s.push_str(&format!("; ... and {} more", failures.len() - SHOWN_FAILURES));
    }
    s
}

impl FormatError {
    /// 1 for objects that parse but fail verification, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            FormatError::NotLatin(_)
            | FormatError::NotOrthogonal(_)
            | FormatError::VerificationFailed { .. } => 1,
            _ => 2,
        }
    }

    fn invalid(what: &'static str, detail: impl ToString) -> Self {
        FormatError::Invalid {
            what,
            detail: detail.to_string(),
        }
    }
}

impl From<LatinError> for FormatError {
    fn from(e: LatinError) -> Self {
        match e {
            LatinError::NotLatin { .. } | LatinError::SymbolOutOfRange { .. } => FormatError::NotLatin(e),
            LatinError::NotOrthogonal { .. } | LatinError::TooManySquares { .. } => {
                FormatError::NotOrthogonal(e)
            }
            other => FormatError::invalid("MOLS", other),
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn read_file(path: &str) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_string(),
        source,
    })
}

// ---- MOLS ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MolsFile {
    pub order: usize,
    /// `squares[t][i][j]`.
    pub squares: Vec<Vec<Vec<u32>>>,
}

impl MolsFile {
    pub fn from_set(set: &MolsSet) -> Self {
        Self {
            order: set.order(),
            squares: set
                .squares()
                .iter()
                .map(|sq| sq.rows().map(<[u32]>::to_vec).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// Every problem with the squares: shape and Latin violations per
    /// square, then every non-orthogonal pair among the Latin ones.
    pub fn problems(&self) -> Vec<String> {
        let s = self.order;
        let mut out = Vec::new();
        let mut good = Vec::new();
        for (t, rows) in self.squares.iter().enumerate() {
            if rows.len() != s || rows.iter().any(|r| r.len() != s) {
                out.push(format!("square {t} is not {s}x{s}"));
                continue;
            }
            match LatinSquare::from_rows(rows) {
                Ok(sq) => good.push((t, sq)),
                Err(e) => out.push(retag(e, t).to_string()),
            }
        }
        for (a, (ta, x)) in good.iter().enumerate() {
            for (tb, y) in &good[a + 1..] {
                if !are_orthogonal(x, y).unwrap_or(false) {
                    out.push(format!("squares {ta} and {tb} are not orthogonal"));
                }
            }
        }
        if s >= 2 && self.squares.len() > s - 1 {
            out.push(format!(
                "{} squares of order {s} exceed the maximum of {}",
                self.squares.len(),
                s - 1
            ));
        }
        out
    }

    pub fn to_set(&self) -> Result<MolsSet, FormatError> {
        if self.order == 0 {
            return Err(FormatError::invalid("MOLS", "order must be positive"));
        }
        Ok(MolsSet::from_nested(self.order, &self.squares)?)
    }
}

fn retag(e: LatinError, t: usize) -> LatinError {
    match e {
        LatinError::NotLatin { line, .. } => LatinError::NotLatin { square: t, line },
        LatinError::SymbolOutOfRange { symbol, .. } => LatinError::SymbolOutOfRange { square: t, symbol },
        LatinError::Shape { order, .. } => LatinError::Shape { square: t, order },
        other => other,
    }
}

pub fn import_mols(text: &str) -> Result<MolsSet, FormatError> {
    MolsFile::parse(text)?.to_set()
}

pub fn export_mols(set: &MolsSet) -> String {
    MolsFile::from_set(set).to_json()
}

// ---- nets ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetFile {
    pub s: usize,
    pub k: usize,
    /// Each vector as a 0/1 string of length `s²`.
    pub blocks: Vec<Vec<String>>,
}

impl NetFile {
    pub fn from_net(net: &Net) -> Self {
        Self {
            s: net.s(),
            k: net.k(),
            blocks: net
                .blocks()
                .iter()
                .map(|b| b.iter().map(IncidenceVector::to_bit_string).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// The net as written, without verification.
    pub fn to_net(&self) -> Result<Net, FormatError> {
        if self.k != self.blocks.len() {
            return Err(FormatError::invalid(
                "net",
                format!("k = {} but {} blocks given", self.k, self.blocks.len()),
            ));
        }
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(b, block)| {
                block
                    .iter()
                    .enumerate()
                    .map(|(i, bits)| {
                        IncidenceVector::from_bit_str(bits).ok_or_else(|| {
                            FormatError::invalid("net", format!("vector ({b}, {i}) is not a 0/1 string"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Net::new(self.s, blocks))
    }
}

pub fn import_net(text: &str) -> Result<Net, FormatError> {
    let net = NetFile::parse(text)?.to_net()?;
    let report = verify_net(&net);
    if !report.passed() {
        return Err(FormatError::VerificationFailed {
            what: "net",
            failures: report.violations.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(net)
}

pub fn export_net(net: &Net) -> String {
    NetFile::from_net(net).to_json()
}

// ---- Hadamard matrices ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HadamardFile {
    pub size: usize,
    pub root_order: u32,
    pub exponents: Vec<Vec<u32>>,
}

impl HadamardFile {
    pub fn from_matrix(h: &GenHadamard) -> Self {
        Self {
            size: h.size(),
            root_order: h.root_order(),
            exponents: h.rows().map(<[u32]>::to_vec).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_matrix(&self) -> Result<GenHadamard, FormatError> {
        if self.size != self.exponents.len() {
            return Err(FormatError::invalid(
                "hadamard",
                format!("size = {} but {} rows given", self.size, self.exponents.len()),
            ));
        }
        GenHadamard::new(self.root_order, &self.exponents).map_err(|e| FormatError::invalid("hadamard", e))
    }
}

pub fn import_hadamard(text: &str) -> Result<GenHadamard, FormatError> {
    let h = HadamardFile::parse(text)?.to_matrix()?;
    let report = verify_hadamard(&h);
    if !report.passed() {
        return Err(FormatError::VerificationFailed {
            what: "hadamard",
            failures: report
                .failing_pairs
                .iter()
                .map(|(r, r2)| format!("rows {r} and {r2}"))
                .collect(),
        });
    }
    Ok(h)
}

pub fn export_hadamard(h: &GenHadamard) -> String {
    HadamardFile::from_matrix(h).to_json()
}

// ---- MUB sets ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MubFile {
    pub dim: usize,
    /// Required when any vector uses `amps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_order: Option<u32>,
    pub bases: Vec<Vec<VectorFile>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub norm_sq: u64,
    /// `[position, exponent]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amps: Option<Vec<(usize, u32)>>,
    /// `[position, re, im]` triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amps_float: Option<Vec<(usize, f64, f64)>>,
}

/// A verified MUB set read from a file.
#[derive(Clone, Debug)]
pub enum LoadedMubs {
    Exact(MubSet),
    /// Arbitrary phases; only the float verifier applies.
    FloatOnly(FloatMubSet),
}

impl LoadedMubs {
    pub fn dim(&self) -> usize {
        match self {
            LoadedMubs::Exact(m) => m.dim(),
            LoadedMubs::FloatOnly(f) => f.dim,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LoadedMubs::Exact(m) => m.len(),
            LoadedMubs::FloatOnly(f) => f.bases.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> &'static str {
        match self {
            LoadedMubs::Exact(m) => m.provenance().as_str(),
            LoadedMubs::FloatOnly(_) => "float-verified only",
        }
    }
}

/// Unverified contents of a MUB file.
#[derive(Clone, Debug)]
pub enum ParsedMubs {
    Exact(MubSet),
    Float(FloatMubSet),
}

impl MubFile {
    pub fn from_set(set: &MubSet) -> Self {
        Self {
            dim: set.dim(),
            root_order: Some(set.root_order()),
            bases: set
                .bases()
                .iter()
                .map(|b| {
                    b.vectors()
                        .iter()
                        .map(|v| VectorFile {
                            norm_sq: v.norm_sq(),
                            amps: Some(v.amps().to_vec()),
                            amps_float: None,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_float_set(set: &FloatMubSet) -> Self {
        Self {
            dim: set.dim,
            root_order: None,
            bases: set
                .bases
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|v| VectorFile {
                            norm_sq: v.norm_sq,
                            amps: None,
                            amps_float: Some(v.amps.iter().map(|&(p, a)| (p, a.re, a.im)).collect()),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// Builds the set without verifying it. Files where any vector uses
    /// `amps_float` become float sets, with exact amplitudes converted.
    pub fn to_parsed(&self) -> Result<ParsedMubs, FormatError> {
        let bad = |detail: String| FormatError::invalid("MUB set", detail);
        let mut float = false;
        for (b, basis) in self.bases.iter().enumerate() {
            for (i, v) in basis.iter().enumerate() {
                match (&v.amps, &v.amps_float) {
                    (Some(_), None) => {}
                    (None, Some(_)) => float = true,
                    _ => {
                        return Err(bad(format!(
                            "vector ({b}, {i}) needs exactly one of amps, amps_float"
                        )))
                    }
                }
            }
        }
        let needs_root = self.bases.iter().flatten().any(|v| v.amps.is_some());
        let m = match self.root_order {
            Some(0) => return Err(bad("root_order must be positive".into())),
            Some(m) => m,
            None if needs_root => return Err(bad("root_order is required with amps".into())),
            None => 1,
        };
        if !float {
            let bases = self
                .bases
                .iter()
                .enumerate()
                .map(|(b, basis)| {
                    let vectors = basis
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            let amps = v.amps.clone().unwrap_or_default();
                            MubVector::new(self.dim, m, v.norm_sq, amps)
                                .map_err(|e| bad(format!("vector ({b}, {i}): {e}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(MubBasis::new(vectors))
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            let set =
                MubSet::new(self.dim, m, bases, MubProvenance::Imported).map_err(|e| bad(e.to_string()))?;
            return Ok(ParsedMubs::Exact(set));
        }
        let mut bases = Vec::with_capacity(self.bases.len());
        for (b, basis) in self.bases.iter().enumerate() {
            let mut vs = Vec::with_capacity(basis.len());
            for (i, v) in basis.iter().enumerate() {
                let mut amps: Vec<(usize, Complex64)> = match (&v.amps, &v.amps_float) {
                    (Some(a), _) => a
                        .iter()
                        .map(|&(p, e)| {
                            let t = std::f64::consts::TAU * f64::from(e % m) / f64::from(m);
                            (p, Complex64::from_polar(1.0, t))
                        })
                        .collect(),
                    (_, Some(a)) => a.iter().map(|&(p, re, im)| (p, Complex64::new(re, im))).collect(),
                    _ => unreachable!(),
                };
                amps.sort_by_key(|&(p, _)| p);
                if v.norm_sq == 0 {
                    return Err(bad(format!("vector ({b}, {i}): norm_sq must be positive")));
                }
                if amps.windows(2).any(|w| w[0].0 == w[1].0) || amps.iter().any(|&(p, _)| p >= self.dim) {
                    return Err(bad(format!("vector ({b}, {i}): bad positions")));
                }
                if amps.iter().any(|(_, a)| !a.re.is_finite() || !a.im.is_finite()) {
                    return Err(bad(format!("vector ({b}, {i}): non-finite amplitude")));
                }
                vs.push(FloatVector {
                    norm_sq: v.norm_sq,
                    amps,
                });
            }
            bases.push(vs);
        }
        Ok(ParsedMubs::Float(FloatMubSet { dim: self.dim, bases }))
    }
}

fn report_failures(report: &MubReport) -> Vec<String> {
    report
        .shape
        .iter()
        .map(ToString::to_string)
        .chain(report.pairs.iter().map(ToString::to_string))
        .collect()
}

/// Amplitudes of a float set that are not of unit modulus.
pub fn non_unit_amplitudes(set: &FloatMubSet) -> Vec<String> {
    let mut out = Vec::new();
    for (b, basis) in set.bases.iter().enumerate() {
        for (i, v) in basis.iter().enumerate() {
            for &(p, a) in &v.amps {
                if (a.norm() - 1.0).abs() >= FLOAT_TOL {
                    out.push(format!(
                        "vector ({b}, {i}) has amplitude of modulus {} at position {p}",
                        a.norm()
                    ));
                }
            }
        }
    }
    out
}

/// Parses and re-verifies: exactly for root-of-unity amplitudes, in
/// double precision otherwise.
pub fn import_mubs(text: &str, jobs: usize) -> Result<LoadedMubs, FormatError> {
    match MubFile::parse(text)?.to_parsed()? {
        ParsedMubs::Exact(set) => {
            let report = verify_mubs_jobs(&set, VerifyMode::Exact, jobs)
                .map_err(|e| FormatError::invalid("MUB set", e))?;
            if !report.passed() {
                return Err(FormatError::VerificationFailed {
                    what: "MUB set",
                    failures: report_failures(&report),
                });
            }
            Ok(LoadedMubs::Exact(set))
        }
        ParsedMubs::Float(set) => {
            let mut failures = non_unit_amplitudes(&set);
            let report = crate::parallel::verify_float_jobs(&set, jobs)
                .map_err(|e| FormatError::invalid("MUB set", e))?;
            failures.extend(report_failures(&report));
            if !failures.is_empty() {
                return Err(FormatError::VerificationFailed {
                    what: "MUB set",
                    failures,
                });
            }
            Ok(LoadedMubs::FloatOnly(set))
        }
    }
}

pub fn export_mubs(set: &MubSet) -> String {
    MubFile::from_set(set).to_json()
}

// ---- cited MOLS tables ----

/// Lower bounds on MOLS counts known from the literature, without squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitedFile {
    pub cited_mols: Vec<CitedEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitedEntry {
    pub order: usize,
    pub count: usize,
    pub source: String,
}

impl CitedFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mubkit_core::hadamard::dft;
    use mubkit_core::latin::{complete_mols_prime_power, cyclic_square};
    use mubkit_core::mub::build_mubs;
    use mubkit_core::net::net_from_mols;

    fn d4_set() -> MubSet {
        let net = net_from_mols(&MolsSet::new(2, vec![cyclic_square(2)]).unwrap());
        build_mubs(&net, &dft(2)).unwrap()
    }

    #[test]
    fn mols_round_trip() {
        let set = complete_mols_prime_power(4).unwrap();
        assert_eq!(import_mols(&export_mols(&set)).unwrap(), set);
    }

    #[test]
    fn mols_rejections() {
        let e = import_mols(r#"{"order":2,"squares":[[[0,1],[0,1]]]}"#).unwrap_err();
        assert!(matches!(e, FormatError::NotLatin(_)), "{e}");
        let e = import_mols(r#"{"order":3,"squares":[[[0,1,2],[1,2,0],[2,0,1]],[[0,1,2],[1,2,0],[2,0,1]]]}"#)
            .unwrap_err();
        assert!(matches!(e, FormatError::NotOrthogonal(_)), "{e}");
        assert!(matches!(import_mols("{"), Err(FormatError::Parse(_))));
        let f =
            MolsFile::parse(r#"{"order":2,"squares":[[[0,1],[0,1]],[[0,1],[1,0]],[[1,0],[0,1]]]}"#).unwrap();
        assert_eq!(
            f.problems(),
            [
                "square 0 is not Latin: column 0 repeats a symbol",
                "squares 1 and 2 are not orthogonal",
                "3 squares of order 2 exceed the maximum of 1"
            ]
        );
    }

    #[test]
    fn net_round_trip_and_rejection() {
        let net = net_from_mols(&complete_mols_prime_power(3).unwrap());
        let text = export_net(&net);
        assert_eq!(import_net(&text).unwrap(), net);
        let bad = r#"{"s":2,"k":2,"blocks":[["1100","0011"],["1100","0011"]]}"#;
        match import_net(bad) {
            Err(FormatError::VerificationFailed { failures, .. }) => assert_eq!(failures.len(), 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            import_net(r#"{"s":2,"k":1,"blocks":[["11x0","0011"]]}"#),
            Err(FormatError::Invalid { .. })
        ));
    }

    #[test]
    fn mub_round_trip() {
        let set = d4_set();
        let text = export_mubs(&set);
        match import_mubs(&text, 1).unwrap() {
            LoadedMubs::Exact(back) => {
                assert_eq!(back.bases(), set.bases());
                assert_eq!(export_mubs(&back), text);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_import() {
        // The d = 4 set with every amplitude of the second basis multiplied by
        // e^{i·0.3}: still unbiased, but no longer roots of unity.
        let mut file = MubFile::from_float_set(&d4_set().to_float());
        let phase = Complex64::from_polar(1.0, 0.3);
        for v in &mut file.bases[1] {
            for a in v.amps_float.as_mut().unwrap() {
                let z = Complex64::new(a.1, a.2) * phase;
                (a.1, a.2) = (z.re, z.im);
            }
        }
        let loaded = import_mubs(&file.to_json(), 2).unwrap();
        assert_eq!(loaded.provenance(), "float-verified only");
        assert_eq!((loaded.dim(), loaded.len()), (4, 3));

        file.bases[0][0].amps_float.as_mut().unwrap()[0].1 = 2.0;
        match import_mubs(&file.to_json(), 1) {
            Err(FormatError::VerificationFailed { failures, .. }) => {
                assert!(failures[0].contains("modulus 2"), "{failures:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_mubs_rejected() {
        let mut set = d4_set();
        set.vector_mut(0, 0).set_exponent(0, 1);
        let e = import_mubs(&export_mubs(&set), 1).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().starts_with("MUB set failed verification"), "{e}");
    }

    #[test]
    fn hadamard_round_trip() {
        let h = dft(5);
        assert_eq!(import_hadamard(&export_hadamard(&h)).unwrap(), h);
        let e = import_hadamard(r#"{"size":2,"root_order":1,"exponents":[[0,0],[0,0]]}"#).unwrap_err();
        assert_eq!(
            e.to_string(),
            "hadamard failed verification (1 failures): rows 0 and 1"
        );
    }
}
