//! Headered CSV with one column per factor and a `y` response column.

use std::fmt;
use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rmfm::effects::CellLayout;
use rmfm::exactlin::{parse_rat, Rat};
use rmfm::hypothesis::ResponseVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    /// 0-based level index per factor.
    pub levels: Vec<usize>,
    pub y: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub factor_names: Vec<String>,
    /// Level labels per factor, in level order.
    pub levels: Vec<Vec<String>>,
    /// Observations in input order.
    pub rows: Vec<Observation>,
}

/// Integer labels sort numerically, anything else lexicographically.
fn order_labels(mut labels: Vec<String>) -> Vec<String> {
    labels.sort();
    labels.dedup();
    if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<i64>().expect("checked above"));
    }
    labels
}

impl Dataset {
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().context("reading header")?.clone();
        let y_col = header.iter().position(|h| h == "y").ok_or_else(|| anyhow!("header has no `y` column"))?;
        let factor_cols: Vec<usize> = (0..header.len()).filter(|&c| c != y_col).collect();
        if factor_cols.is_empty() {
            bail!("header has no factor columns");
        }
        let factor_names: Vec<String> = factor_cols.iter().map(|&c| header[c].to_string()).collect();

        let mut raw = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| match e.position() {
                Some(pos) => anyhow!("line {}: {e}", pos.line()),
                None => anyhow!("{e}"),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let y = parse_rat(&record[y_col])
                .ok_or_else(|| anyhow!("line {line}: response {:?} is not a number", &record[y_col]))?;
            let mut labels = Vec::with_capacity(factor_cols.len());
            for (&c, name) in factor_cols.iter().zip(&factor_names) {
                if record[c].is_empty() {
                    bail!("line {line}: empty level for factor {name}");
                }
                labels.push(record[c].to_string());
            }
            raw.push((labels, y));
        }
        if raw.is_empty() {
            bail!("no observations");
        }

        let levels: Vec<Vec<String>> =
            (0..factor_names.len()).map(|k| order_labels(raw.iter().map(|(l, _)| l[k].clone()).collect())).collect();
        let rows = raw
            .into_iter()
            .map(|(labels, y)| {
                let idx = labels
                    .iter()
                    .zip(&levels)
                    .map(|(l, ls)| ls.iter().position(|x| x == l).expect("label collected above"))
                    .collect();
                Observation { levels: idx, y }
            })
            .collect();
        let ds = Dataset { factor_names, levels, rows };
        ds.layout()?;
        Ok(ds)
    }

    pub fn from_path(path: &str) -> Result<Self> {
        let file = std::fs::File::open(path).with_context(|| format!("opening {path}"))?;
        Self::from_reader(file).with_context(|| format!("reading {path}"))
    }

    pub fn nfactors(&self) -> usize {
        self.factor_names.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    fn cell(&self, obs: &Observation) -> usize {
        obs.levels.iter().zip(self.dims()).fold(0, |acc, (&l, m)| acc * m + l)
    }

    pub fn layout(&self) -> Result<CellLayout> {
        let dims = self.dims();
        let mut counts = vec![0; dims.iter().product()];
        for obs in &self.rows {
            counts[self.cell(obs)] += 1;
        }
        CellLayout::new(dims, counts).map_err(|e| anyhow!("invalid layout: {e}"))
    }

    /// Responses grouped by cell in lexicographic cell order, input order
    /// within a cell.
    pub fn response(&self) -> ResponseVector {
        let mut order: Vec<&Observation> = self.rows.iter().collect();
        order.sort_by_key(|o| self.cell(o));
        ResponseVector::new(order.into_iter().map(|o| o.y.clone()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = self.factor_names.iter().map(String::as_str).collect();
        header.push("y");
        w.write_record(&header).expect("in-memory write");
        for obs in &self.rows {
            let mut rec: Vec<String> = obs.levels.iter().zip(&self.levels).map(|(&l, ls)| ls[l].clone()).collect();
            rec.push(format_decimal(&obs.y));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

/// Terminating decimals as decimals, everything else as `p/q`.
pub fn format_decimal(r: &Rat) -> String {
    let mut den = r.denom().clone();
    let mut places = 0usize;
    let (two, five, ten) = (BigInt::from(2), BigInt::from(5), BigInt::from(10));
    let mut scale = BigInt::one();
    while (&den % &two).is_zero() || (&den % &five).is_zero() {
        if (&den % &two).is_zero() {
            den /= &two;
        }
        if (&den % &five).is_zero() {
            den /= &five;
        }
        places += 1;
        scale *= &ten;
    }
    if !den.is_one() {
        return r.to_string();
    }
    if places == 0 {
        return r.numer().to_string();
    }
    let scaled = (r * Rat::from_integer(scale)).to_integer();
    let neg = scaled < BigInt::zero();
    let digits = scaled.magnitude().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}
