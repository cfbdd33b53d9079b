//! Headerless CSV matrices of exact rationals.

use anyhow::{anyhow, Context, Result};
use rmfm::exactlin::{parse_rat, RatMatrix};

pub fn read_matrix(path: &str) -> Result<RatMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse_matrix(&text).with_context(|| format!("parsing {path}"))
}

pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| anyhow!("line {line}: {s:?} is not a number")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(RatMatrix::from_rows(rows)?)
}
