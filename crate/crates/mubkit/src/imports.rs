//! Loading a directory of tables for the planner.
//!
//! Every `*.json` file is read in name order and classified by its
//! top-level keys: `squares` (a MOLS set), `bases` (a MUB set) or
//! `cited_mols` (cited lower bounds without squares). Sets are verified
//! before they count.

use std::path::Path;

use serde_json::Value;

use mubkit_core::plan::PlanImports;

use crate::format::{import_mols, import_mubs, CitedFile, FormatError};

/// One accepted file, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImportNote {
    pub file: String,
    pub summary: String,
}

#[derive(Debug, Default)]
pub struct LoadedImports {
    pub imports: PlanImports,
    pub notes: Vec<ImportNote>,
}

pub fn load_imports(dir: &Path, jobs: usize) -> Result<LoadedImports, FormatError> {
    let io = |source| FormatError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = LoadedImports::default();
    for path in files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = crate::format::read_file(&path.to_string_lossy())?;
        let in_file = |e: FormatError| match e {
            FormatError::Parse(m) => FormatError::Parse(format!("{name}: {m}")),
            FormatError::Invalid { what, detail } => FormatError::Invalid {
                what,
                detail: format!("{name}: {detail}"),
            },
            other => other,
        };
        let value: Value =
            serde_json::from_str(&text).map_err(|e| in_file(FormatError::Parse(e.to_string())))?;
        let summary = if value.get("squares").is_some() {
            let set = import_mols(&text).map_err(in_file)?;
            let s = format!("{} MOLS of order {}", set.len(), set.order());
            out.imports.mols.add_set(set);
            s
        } else if value.get("bases").is_some() {
            let set = import_mubs(&text, jobs).map_err(in_file)?;
            out.imports.add_mubs(set.dim() as u64, set.len());
            format!(
                "{} MUBs in dimension {} ({})",
                set.len(),
                set.dim(),
                set.provenance()
            )
        } else if value.get("cited_mols").is_some() {
            let cited = CitedFile::parse(&text).map_err(in_file)?;
            let mut parts = Vec::new();
            for c in cited.cited_mols {
                out.imports
                    .mols
                    .add_cited(c.order, c.count, c.source.clone())
                    .map_err(|e| {
                        in_file(FormatError::Invalid {
                            what: "cited table",
                            detail: e.to_string(),
                        })
                    })?;
                parts.push(format!("N_MOLS({}) >= {} ({})", c.order, c.count, c.source));
            }
            format!("cited: {}", parts.join(", "))
        } else {
            return Err(in_file(FormatError::Invalid {
                what: "import",
                detail: "expected a MOLS set, a MUB set or a cited table".into(),
            }));
        };
        out.notes.push(ImportNote { file: name, summary });
    }
    Ok(out)
}
