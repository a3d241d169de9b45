use std::path::PathBuf;

use mubkit::format::{import_mols, import_mubs};
use mubkit::imports::load_imports;
use mubkit::LoadedMubs;
use mubkit_core::latin::{are_orthogonal, LatinSquare};

fn table(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../tables")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

const BASE: [[u32; 5]; 5] = [
    [0, 13, 6, 2, 1],
    [0, 4, 7, 8, 18],
    [0, 5, 12, 6, 4],
    [0, 16, 18, 3, 12],
    [0, 12, 2, 10, 7],
];

/// The difference matrix of `tables/README.md`; `None` is a blank.
fn qdm() -> Vec<[Option<u32>; 6]> {
    let mut cols = Vec::new();
    for t in 0..6 {
        for base in &BASE {
            let mut col = [None; 6];
            for (i, cell) in col.iter_mut().enumerate() {
                let r = (i + 6 - t) % 6;
                *cell = (r != 0).then(|| base[r - 1]);
            }
            cols.push(col);
        }
    }
    cols.push([Some(0); 6]);
    cols
}

#[test]
fn order_26_difference_matrix() {
    let cols = qdm();
    for i in 0..6 {
        assert_eq!(cols.iter().filter(|c| c[i].is_none()).count(), 5);
        for j in i + 1..6 {
            let mut diffs: Vec<u32> = cols
                .iter()
                .filter_map(|c| Some((c[i]? + 21 - c[j]?) % 21))
                .collect();
            diffs.sort_unstable();
            assert_eq!(diffs, (0..21).collect::<Vec<_>>(), "rows {i}, {j}");
        }
    }
}

#[test]
fn order_26_table_is_the_developed_matrix() {
    let mut squares = vec![vec![vec![u32::MAX; 26]; 26]; 4];
    let mut put = |b: [u32; 6]| {
        for (t, sq) in squares.iter_mut().enumerate() {
            let cell = &mut sq[b[0] as usize][b[1] as usize];
            assert_eq!(*cell, u32::MAX, "cell filled twice");
            *cell = b[t + 2];
        }
    };
    for (c, col) in qdm().iter().enumerate() {
        for g in 0..21 {
            put(col.map(|x| x.map_or(21 + (c % 5) as u32, |x| (x + g) % 21)));
        }
    }
    for r in 0..5 {
        for s in 0..5 {
            put([0, 1, 2, 3, 4, 5].map(|a: u32| {
                21 + match a {
                    0 => r,
                    1 => s,
                    _ => (r + (a - 1) * s) % 5,
                }
            }));
        }
    }
    let built: Vec<LatinSquare> = squares
        .iter()
        .map(|s| LatinSquare::from_rows(s).unwrap())
        .collect();
    let file = import_mols(&table("mols-26.json")).unwrap();
    assert_eq!(file.squares(), &built[..]);
    for a in 0..4 {
        for b in a + 1..4 {
            assert!(are_orthogonal(&built[a], &built[b]).unwrap());
        }
    }
}

#[test]
fn mub_7_table() {
    match import_mubs(&table("mub-7.json"), 1).unwrap() {
        LoadedMubs::Exact(set) => assert_eq!((set.dim(), set.len()), (7, 8)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn repository_tables_load() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables");
    let loaded = load_imports(&dir, 1).unwrap();
    assert_eq!(loaded.imports.mols.set(26).map(|s| s.len()), Some(4));
    assert_eq!(loaded.imports.mubs.get(&7), Some(&8));
    assert_eq!(loaded.notes.len(), 2);
}
