//! Embedded example layouts and their reference testing-target matrices.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::effects::CellLayout;
use crate::error::{Error, Result};
use crate::exactlin::{rat, RatMatrix};

const LAYOUTS: &str = include_str!("../fixtures/layouts.toml");
const TABLE1: &str = include_str!("../fixtures/table1.toml");

#[derive(Deserialize)]
struct LayoutEntry {
    counts: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct TableFile {
    entry: Vec<TableRow>,
}

#[derive(Deserialize)]
struct TableRow {
    layout: String,
    t: u8,
    m: u8,
    columns: Vec<Vec<Vec<i64>>>,
}

/// Reference `G_tm` for one layout: the Type `t` A-effect SS tests
/// `G' η` in model `m`.
#[derive(Clone, Debug)]
pub struct TargetEntry {
    pub layout: String,
    pub t: u8,
    pub m: u8,
    /// 9 x 2, cells in lexicographic order.
    pub g: RatMatrix,
}

/// Names of the embedded layouts, in order.
pub const LAYOUT_NAMES: [&str; 3] = ["N0", "N1", "N2"];

pub fn layouts() -> Result<BTreeMap<String, CellLayout>> {
    let parsed: BTreeMap<String, LayoutEntry> = toml::from_str(LAYOUTS).map_err(|e| Error::Fixture(e.to_string()))?;
    parsed
        .into_iter()
        .map(|(name, entry)| {
            let rows: Vec<&[usize]> = entry.counts.iter().map(Vec::as_slice).collect();
            Ok((name, CellLayout::two_factor(&rows)?))
        })
        .collect()
}

pub fn layout(name: &str) -> Result<CellLayout> {
    layouts()?.remove(name).ok_or_else(|| Error::Fixture(format!("no layout named {name}")))
}

pub fn table1() -> Result<Vec<TargetEntry>> {
    let parsed: TableFile = toml::from_str(TABLE1).map_err(|e| Error::Fixture(e.to_string()))?;
    parsed
        .entry
        .into_iter()
        .map(|row| {
            let cols: Vec<Vec<_>> =
                row.columns.iter().map(|grid| grid.iter().flatten().map(|&v| rat(v)).collect()).collect();
            let nrows = cols.first().map_or(0, Vec::len);
            Ok(TargetEntry { layout: row.layout, t: row.t, m: row.m, g: RatMatrix::from_columns(nrows, &cols)? })
        })
        .collect()
}
