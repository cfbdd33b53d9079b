//! The `anova` report: SS, df, F, p and the testing target per SS type.

use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use rmfm::effects::{
    contrast_matrix, effect_model_matrix, incidence, model_matrix, ContrastScheme, EffectId, EffectSet,
};
use rmfm::exactlin::{parse_rat, projector, rat_to_f64, Projector, Rat, RatMatrix, Subspace};
use rmfm::hypothesis::{type_ss, SsType, TestResult};

use crate::dataset::Dataset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelChoice {
    Saturated,
    Additive,
    AOnly,
    Custom(EffectSet),
}

impl ModelChoice {
    /// `saturated`, `additive`, `a-only`, or `custom:` followed by effect
    /// names or bit strings (`custom:I,A,B` or `custom:00,10,01`).
    pub fn parse(s: &str, nfactors: usize) -> Result<Self> {
        match s {
            "saturated" => Ok(ModelChoice::Saturated),
            "additive" => Ok(ModelChoice::Additive),
            "a-only" => Ok(ModelChoice::AOnly),
            _ => {
                let list = s.strip_prefix("custom:").ok_or_else(|| anyhow!("unknown model {s:?}"))?;
                let effects = list.split(',').map(|t| parse_effect(t.trim(), nfactors)).collect::<Result<Vec<_>>>()?;
                Ok(ModelChoice::Custom(EffectSet::new(effects)?))
            }
        }
    }

    pub fn effect_set(&self, nfactors: usize) -> EffectSet {
        match self {
            ModelChoice::Saturated => EffectSet::saturated(nfactors),
            ModelChoice::Additive => EffectSet::additive(nfactors),
            ModelChoice::AOnly => {
                EffectSet::new([EffectId::intercept(nfactors), EffectId::main(0, nfactors)]).expect("nonempty")
            }
            ModelChoice::Custom(set) => set.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelChoice::Saturated => "saturated".into(),
            ModelChoice::Additive => "additive".into(),
            ModelChoice::AOnly => "a-only".into(),
            ModelChoice::Custom(set) => format!("custom:{}", set.bit_strings()),
        }
    }
}

/// An effect by letters (`A`, `AB`, `I`) or bit string (`10`).
pub fn parse_effect(s: &str, nfactors: usize) -> Result<EffectId> {
    let effect = if !s.is_empty() && s.chars().all(|c| c == '0' || c == '1') {
        EffectId::from_bits(s)?
    } else {
        EffectId::from_name(s, nfactors)?
    };
    if effect.nfactors() != nfactors {
        bail!("effect {s} does not match {nfactors} factors");
    }
    Ok(effect)
}

pub fn parse_types(s: &str) -> Result<Vec<SsType>> {
    if s == "all" {
        return Ok(SsType::ALL.to_vec());
    }
    let t: u8 = s.parse().map_err(|_| anyhow!("SS type must be 1, 2, 3 or all, got {s:?}"))?;
    Ok(vec![SsType::from_number(t)?])
}

/// Reads a JSON object mapping factor names to contrast rows. Entries are
/// integers or strings such as `"1/2"`. Factors not listed keep the
/// default contrasts.
pub fn load_contrasts(path: &str, ds: &Dataset) -> Result<ContrastScheme> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let map = value.as_object().ok_or_else(|| anyhow!("{path}: expected a JSON object"))?;
    for name in map.keys() {
        if !ds.factor_names.contains(name) {
            bail!("{path}: unknown factor {name:?}");
        }
    }
    let mut mats = Vec::new();
    for (name, m) in ds.factor_names.iter().zip(ds.dims()) {
        let c = match map.get(name) {
            None => contrast_matrix(m, &ContrastScheme::Helmert)?,
            Some(rows) => parse_matrix(rows).with_context(|| format!("{path}: factor {name}"))?,
        };
        rmfm::effects::validate_contrast(&c, m).with_context(|| format!("{path}: factor {name}"))?;
        mats.push(c);
    }
    Ok(ContrastScheme::UserSupplied(mats))
}

fn parse_matrix(v: &Value) -> Result<RatMatrix> {
    let rows = v.as_array().ok_or_else(|| anyhow!("expected an array of rows"))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| anyhow!("expected a row array"))?
                .iter()
                .map(|e| {
                    let s = match e {
                        Value::Number(n) => n.to_string(),
                        Value::String(s) => s.clone(),
                        other => bail!("bad entry {other}"),
                    };
                    parse_rat(&s).ok_or_else(|| anyhow!("bad entry {s:?}"))
                })
                .collect::<Result<Vec<Rat>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::from_rows(parsed)?)
}

pub struct AnovaConfig {
    pub model: ModelChoice,
    pub effect: EffectId,
    pub types: Vec<SsType>,
    pub scheme: ContrastScheme,
}

pub struct Entry {
    pub effect: EffectId,
    pub ss_type: SsType,
    pub result: TestResult,
    /// What the SS tests about the cell means, in the chosen model.
    pub target: Subspace,
}

pub struct AnovaReport {
    pub model: String,
    pub factor_names: Vec<String>,
    pub levels: Vec<Vec<String>>,
    pub entries: Vec<Entry>,
}

pub fn run(ds: &Dataset, cfg: &AnovaConfig) -> Result<AnovaReport> {
    let layout = ds.layout()?;
    let f = ds.nfactors();
    let model = cfg.model.effect_set(f);
    if !model.contains(&cfg.effect) {
        bail!("effect {} is not in model {}", cfg.effect, cfg.model.label());
    }
    let y = ds.response();
    let k = incidence(&layout);
    let m = effect_model_matrix(&model, layout.dims(), &cfg.scheme)?;
    let mut entries = Vec::new();
    for &t in &cfg.types {
        let result = type_ss(t, &cfg.effect, &layout, &y, &cfg.scheme)?;
        let set = t.model_set(&cfg.effect);
        let full = projector(&model_matrix(&set, &layout, &cfg.scheme)?);
        let rest = match set.without(&cfg.effect) {
            Some(rest) => projector(&model_matrix(&rest, &layout, &cfg.scheme)?),
            None => Projector::zero(layout.n()),
        };
        let p = full.nested_difference(&rest)?;
        let target = rmfm::hypothesis::testing_target(&m, &k, &p)?;
        entries.push(Entry { effect: cfg.effect.clone(), ss_type: t, result, target });
    }
    Ok(AnovaReport {
        model: cfg.model.label(),
        factor_names: ds.factor_names.clone(),
        levels: ds.levels.clone(),
        entries,
    })
}

fn int_json(i: &BigInt) -> Value {
    i.to_i64().map_or_else(|| Value::String(i.to_string()), Value::from)
}

fn rat_json(r: &Rat) -> Value {
    json!({ "num": int_json(r.numer()), "den": int_json(r.denom()), "value": rat_to_f64(r) })
}

fn integer_columns(s: &Subspace) -> Vec<Vec<BigInt>> {
    let b = s.integer_basis();
    (0..b.ncols()).map(|j| b.column(j).iter().map(|v| v.to_integer()).collect()).collect()
}

impl AnovaReport {
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let r = &e.result;
                json!({
                    "effect": e.effect.name(),
                    "type": e.ss_type.number(),
                    "ss": rat_json(&r.ss_num),
                    "df": { "num": r.nu_num, "den": r.nu_den },
                    "ss_den": rat_json(&r.ss_den),
                    "f": r.f_value.as_ref().map_or(Value::Null, rat_json),
                    "p": r.p_value.map_or(Value::Null, Value::from),
                    "target_basis": integer_columns(&e.target)
                        .iter()
                        .map(|c| c.iter().map(int_json).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "estimable_dim": e.target.dim(),
                })
            })
            .collect();
        json!({ "model": self.model, "factors": self.factor_names, "entries": entries })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let dims: Vec<usize> = self.levels.iter().map(Vec::len).collect();
        let _ = writeln!(out, "model: {}", self.model);
        for (name, ls) in self.factor_names.iter().zip(&self.levels) {
            let _ = writeln!(out, "factor {name}: levels {}", ls.join(", "));
        }
        for e in &self.entries {
            let r = &e.result;
            let _ = writeln!(out);
            let _ = writeln!(out, "effect {} ({}) type {}", e.effect.name(), e.effect.bit_string(), e.ss_type.number());
            let _ = writeln!(out, "  SS        {} ({:.6})", r.ss_num, rat_to_f64(&r.ss_num));
            let _ = writeln!(out, "  df        {}", r.nu_num);
            let _ = writeln!(out, "  error SS  {} ({:.6}) on {} df", r.ss_den, rat_to_f64(&r.ss_den), r.nu_den);
            match &r.f_value {
                Some(fv) => {
                    let _ = writeln!(out, "  F         {} ({:.6})", fv, rat_to_f64(fv));
                }
                None => {
                    let _ = writeln!(out, "  F         undefined");
                }
            }
            match r.p_value {
                Some(p) => {
                    let _ = writeln!(out, "  p         {p:.6e}");
                }
                None => {
                    let _ = writeln!(out, "  p         undefined");
                }
            }
            let _ = writeln!(out, "  tests     {}-dimensional target", e.target.dim());
            for (i, col) in integer_columns(&e.target).iter().enumerate() {
                let _ = writeln!(out, "  g{}:", i + 1);
                out.push_str(&render_cells(col, &dims));
                if let Some(note) = marginal_contrast(col, &dims) {
                    let _ = writeln!(out, "    proportional to {note}");
                }
            }
        }
        out
    }
}

/// Cells as `a x b` arrays, one per combination of the remaining factors.
fn render_cells(v: &[BigInt], dims: &[usize]) -> String {
    let width = v.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
    let (rows, cols) = match dims {
        [a] => (1, *a),
        [a, b, ..] => (*a, *b),
        [] => (1, 1),
    };
    let rest: usize = dims.iter().skip(2).product();
    let mut out = String::new();
    for s in 0..rest {
        if rest > 1 {
            let _ = writeln!(out, "    slice {}:", s + 1);
        }
        for i in 0..rows {
            out.push_str("   ");
            for j in 0..cols {
                let _ = write!(out, " {:>width$}", v[(i * cols + j) * rest + s].to_string());
            }
            out.push('\n');
        }
    }
    out
}

/// `v` as a contrast among the marginal means of one factor, when it is
/// constant over every other factor.
fn marginal_contrast(v: &[BigInt], dims: &[usize]) -> Option<String> {
    let f = dims.len();
    for k in 0..f {
        let inner: usize = dims[k + 1..].iter().product();
        let coef_of = |idx: usize| (idx / inner) % dims[k];
        let mut coefs: BTreeMap<usize, BigInt> = BTreeMap::new();
        let consistent = v.iter().enumerate().all(|(idx, x)| match coefs.get(&coef_of(idx)) {
            Some(c) => c == x,
            None => {
                coefs.insert(coef_of(idx), x.clone());
                true
            }
        });
        if !consistent || coefs.values().all(Zero::is_zero) {
            continue;
        }
        let mut terms = String::new();
        for (level, c) in coefs.iter().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { " − " } else { " + " };
            let mag = c.abs();
            let coef = if mag == BigInt::from(1) { String::new() } else { mag.to_string() };
            let mean: String = (0..f).map(|q| if q == k { (level + 1).to_string() } else { "·".into() }).collect();
            let _ = write!(terms, "{sign}{coef}η̄{mean}");
        }
        let terms = match terms.strip_prefix(" + ") {
            Some(t) => t.to_string(),
            None => format!("−{}", &terms[" − ".len()..]),
        };
        return Some(terms);
    }
    None
}
