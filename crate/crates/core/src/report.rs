//! Study specifications, the summary table and CSV/JSON rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Extended, Result};
use crate::graph::{GraphModel, Site};
use crate::green::{classify_recurrence, green_lattice, Recurrence};
use crate::ids::ids_shift_distance;
use crate::perron::estimate_dimensions;
use crate::secular::{comb_resolvent_element, hidden_spectrum, model_norm};
use crate::thermo::{
    condensate_density_finite, condensate_schedule, critical_density, density_limit, finite_density,
    fixed_density_verdict, scaled_schedule_mu, two_point_finite, two_point_limit, BoseParams, TwoPointMethod,
    DIMENSION_NS,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Table,
    Norms,
    Green,
    IdsShift,
    Dims,
    RhoC,
    ScheduleConvergence,
    DensityLimit,
    FixedDensity,
}

impl StudyKind {
    pub const ALL: [StudyKind; 9] = [
        StudyKind::Table,
        StudyKind::Norms,
        StudyKind::Green,
        StudyKind::IdsShift,
        StudyKind::Dims,
        StudyKind::RhoC,
        StudyKind::ScheduleConvergence,
        StudyKind::DensityLimit,
        StudyKind::FixedDensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Table => "table",
            StudyKind::Norms => "norms",
            StudyKind::Green => "green",
            StudyKind::IdsShift => "ids-shift",
            StudyKind::Dims => "dims",
            StudyKind::RhoC => "rho-c",
            StudyKind::ScheduleConvergence => "schedule-convergence",
            StudyKind::DensityLimit => "density-limit",
            StudyKind::FixedDensity => "fixed-density",
        }
    }
}

impl FromStr for StudyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StudyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown study '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => invalid(format!("unknown format '{s}' (csv or json)")),
        }
    }
}

/// A validated study request.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySpec {
    pub kind: StudyKind,
    pub model: Option<GraphModel>,
    pub ns: Vec<usize>,
    pub beta: f64,
    pub big_d: f64,
    pub rho: Option<f64>,
    pub a: f64,
    pub tol: f64,
    pub format: Format,
}

const KEYS: [&str; 11] = ["study", "model", "n", "beta", "bigD", "rho", "a", "tol", "format", "out", "workers"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return invalid(format!("config line {}: unknown key '{k}'", i + 1));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| Error::Invalid(format!("{key}: '{v}' is not a number")))?;
    if x.is_nan() {
        return invalid(format!("{key} is NaN"));
    }
    Ok(x)
}

impl StudySpec {
    /// Builds a spec from `key → value` pairs (keys as in the config file)
    /// and checks every parameter against the study's preconditions.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<StudySpec> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let kind: StudyKind = get("study").ok_or_else(|| Error::Invalid("missing study".into()))?.parse()?;
        let model = get("model").map(GraphModel::parse).transpose()?;
        let ns = match get("n") {
            Some(v) if !v.trim().is_empty() => v
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("n: '{p}' is not a count"))))
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        let num = |k: &str, default: f64| get(k).map_or(Ok(default), |v| parse_num(k, v));
        let spec = StudySpec {
            kind,
            model,
            ns,
            beta: num("beta", 1.0)?,
            big_d: num("bigD", 0.5)?,
            rho: get("rho").map(|v| parse_num("rho", v)).transpose()?,
            a: num("a", 1.0)?,
            tol: num("tol", 1e-10)?,
            format: get("format").unwrap_or("csv").parse()?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let need_model = |what: &str| -> Result<GraphModel> {
            self.model.ok_or_else(|| Error::Invalid(format!("study {} needs --model ({what})", self.kind.name())))
        };
        let need_ns = |min: usize| -> Result<()> {
            if self.ns.len() < min {
                return invalid(format!("study {} needs at least {min} values of --n", self.kind.name()));
            }
            if self.ns.contains(&0) {
                return invalid("n values must be positive");
            }
            Ok(())
        };
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return invalid("beta must be positive: the Gibbs state needs a finite positive temperature");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return invalid("tol must lie in (0, 1)");
        }
        if !(self.big_d >= 0.0 && self.big_d.is_finite()) {
            return invalid("bigD must be finite and nonnegative: it is the condensate weight");
        }
        match self.kind {
            StudyKind::Table => {}
            StudyKind::Norms | StudyKind::RhoC => {
                need_model("an infinite catalog model")?;
            }
            StudyKind::Green => {
                need_model("an infinite catalog model")?;
                if self.ns.is_empty() {
                    return invalid("study green needs at least one site offset in --n");
                }
                if !(self.a >= 0.0 && self.a.is_finite()) {
                    return invalid("a is the offset of the spectral parameter above the norm and must be >= 0");
                }
            }
            StudyKind::IdsShift => {
                if !need_model("a comb")?.is_comb() {
                    return invalid("ids-shift compares a comb with its fiber copies; the model must be a comb");
                }
                need_ns(1)?;
            }
            StudyKind::Dims => {
                need_model("an infinite catalog model")?;
                need_ns(5)?;
            }
            StudyKind::ScheduleConvergence => {
                let m = need_model("a transient model")?;
                need_ns(1)?;
                if !matches!(m, GraphModel::HalfLineN | GraphModel::NComb(1) | GraphModel::NComb(2)) {
                    return invalid("schedule-convergence is proved for N and NComb(1|2) only");
                }
            }
            StudyKind::DensityLimit => {
                let m = need_model("NComb(1|2) or ZComb(d)")?;
                need_ns(1)?;
                if !matches!(m, GraphModel::NComb(1) | GraphModel::NComb(2) | GraphModel::ZComb(_)) {
                    return invalid("density-limit formulas exist for NComb(1|2) and ZComb(d) only");
                }
                if !(self.a > 0.0) {
                    return invalid("a is the scaled gap rate and must be positive");
                }
            }
            StudyKind::FixedDensity => {
                need_model("an infinite catalog model")?;
            }
        }
        if let Some(m) = self.model {
            if m.is_finite() && self.kind != StudyKind::Table {
                return invalid(format!("{m} is finite; studies run on infinite catalog models"));
            }
        }
        Ok(())
    }

    /// Canonical `key=value` text used for the spec hash.
    pub fn canonical(&self) -> String {
        let ns: Vec<String> = self.ns.iter().map(|n| n.to_string()).collect();
        format!(
            "study={}\nmodel={}\nn={}\nbeta={:e}\nbigD={:e}\nrho={}\na={:e}\ntol={:e}\n",
            self.kind.name(),
            self.model.map_or(String::new(), |m| m.to_string()),
            ns.join(","),
            self.beta,
            self.big_d,
            self.rho.map_or(String::new(), |r| format!("{r:e}")),
            self.a,
            self.tol,
        )
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}
impl From<Extended> for Cell {
    fn from(x: Extended) -> Self {
        match x {
            Extended::Finite(v) => Cell::Num(v),
            Extended::Infinite => Cell::Text("inf".into()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) if x.is_infinite() && *x > 0.0 => write!(f, "inf"),
            Cell::Num(x) => write!(f, "{x:.12e}"),
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Text(s) => write!(f, "{s}"),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Int(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Result of a study: named columns and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutput {
    pub study: StudyKind,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl StudyOutput {
    fn new(study: StudyKind, columns: &[&'static str]) -> Self {
        StudyOutput { study, columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a leading `# hopping v… spec=<sha256>` comment line.
    pub fn to_csv(&self, spec_hash: &str) -> Result<String> {
        let mut out = format!("# hopping v{VERSION} spec={spec_hash}\n");
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }

    /// JSON object with sorted keys.
    pub fn to_json(&self, spec_hash: &str) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "hopping_version": VERSION,
            "spec_hash": spec_hash,
            "study": self.study.name(),
            "rows": rows,
            "notes": self.notes,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, spec_hash: &str) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(spec_hash),
            Format::Json => Ok(self.to_json(spec_hash)),
        }
    }
}

fn bec_label(recurrence: Recurrence, d_g: f64, d_pf: f64) -> &'static str {
    if recurrence == Recurrence::Recurrent {
        return "no BEC states";
    }
    let diff = d_pf - d_g;
    if diff > 0.5 {
        "inf-BEC"
    } else if diff < -0.5 {
        "0-BEC"
    } else {
        "rho-BEC"
    }
}

/// Models of the summary table, in display order.
pub fn table_models() -> Vec<GraphModel> {
    vec![
        GraphModel::LineZ,
        GraphModel::LatticeZd(2),
        GraphModel::LatticeZd(3),
        GraphModel::LatticeZd(4),
        GraphModel::ZComb(1),
        GraphModel::ZComb(2),
        GraphModel::ZComb(3),
        GraphModel::HalfLineN,
        GraphModel::NComb(1),
        GraphModel::NComb(2),
    ]
}

/// Critical density, recurrence, dimensions and BEC column of every
/// catalog model. The star graph is listed but not computed.
pub fn run_table() -> Result<StudyOutput> {
    let mut out = StudyOutput::new(StudyKind::Table, &["model", "rho_c", "R/T", "d_G", "d_PF", "BEC", "verdict"]);
    for model in table_models() {
        let rho_c = critical_density(&model, 1.0)?;
        let rec = classify_recurrence(&model)?;
        let dims = estimate_dimensions(&model, &DIMENSION_NS)?;
        let rho_c_cell = match rho_c {
            Extended::Infinite => Cell::Text("inf".into()),
            Extended::Finite(v) => Cell::Text(format!("{v:.6}")),
        };
        let verdict = match rho_c {
            Extended::Infinite if rec == Recurrence::Transient => "rho_c infinite".to_string(),
            _ => {
                let rho = rho_c.finite().map_or(1.0, |r| r + 1.0);
                let v = fixed_density_verdict(&model, rho)?;
                v.regime.label().to_string()
            }
        };
        out.push(vec![
            Cell::Text(model.to_string()),
            rho_c_cell,
            Cell::Text(if rec == Recurrence::Recurrent { "R" } else { "T" }.into()),
            Cell::Text(format!("{:.2}", dims.d_g)),
            Cell::Text(format!("{:.2}", dims.d_pf)),
            Cell::Text(bec_label(rec, dims.d_g, dims.d_pf).into()),
            Cell::Text(verdict),
        ]);
    }
    out.push(vec![
        Cell::Text("star graph".into()),
        Cell::Text("external reference - not computed".into()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
    ]);
    out.notes.push(format!(
        "dimensions fitted over n = {:?}; verdict is the fixed-density regime at rho = rho_c + 1",
        DIMENSION_NS
    ));
    out.notes.push("NComb(d), d >= 3, is omitted: its PF weight is not supported".into());
    Ok(out)
}

fn root_site(model: &GraphModel) -> Site {
    Site::root(model)
}

/// Site at distance `k` from the root along the first base direction.
fn base_site(model: &GraphModel, k: i64) -> Site {
    let mut s = root_site(model);
    s.base[0] = k;
    s
}

/// Runs a validated study.
pub fn run_study(spec: &StudySpec) -> Result<StudyOutput> {
    spec.validate()?;
    let model = spec.model;
    let m = || model.expect("validated");
    match spec.kind {
        StudyKind::Table => run_table(),
        StudyKind::Norms => {
            let model = m();
            let mut out = StudyOutput::new(StudyKind::Norms, &["model", "comb_norm", "fiber_norm", "gap", "hidden"]);
            if model.is_comb() {
                let r = hidden_spectrum(&model, spec.tol)?;
                out.push(vec![
                    model.to_string().into(),
                    r.comb_norm.into(),
                    r.base_disjoint_norm.into(),
                    r.gap.into(),
                    r.present.into(),
                ]);
            } else {
                let norm = model_norm(&model)?;
                out.push(vec![model.to_string().into(), norm.into(), norm.into(), 0.0.into(), false.into()]);
            }
            Ok(out)
        }
        StudyKind::Green => {
            let model = m();
            let mut out = StudyOutput::new(StudyKind::Green, &["k", "lambda", "green"]);
            let lambda = model_norm(&model)? + spec.a;
            let o = root_site(&model);
            for &k in &spec.ns {
                let x = base_site(&model, k as i64);
                let g = if model.is_comb() {
                    if spec.a == 0.0 && classify_recurrence(&model)? == Recurrence::Recurrent {
                        Extended::Infinite
                    } else {
                        Extended::Finite(comb_resolvent_element(&model, lambda, &o, &x, spec.tol)?)
                    }
                } else {
                    green_lattice(&model, lambda, &o, &x)?
                };
                out.push(vec![k.into(), lambda.into(), g.into()]);
            }
            Ok(out)
        }
        StudyKind::IdsShift => {
            let model = m();
            let gap = hidden_spectrum(&model, spec.tol)?.gap;
            let mut out = StudyOutput::new(StudyKind::IdsShift, &["n", "delta", "distance"]);
            for &n in &spec.ns {
                out.push(vec![n.into(), (-gap).into(), ids_shift_distance(&model, n)?.into()]);
            }
            Ok(out)
        }
        StudyKind::Dims => {
            let model = m();
            let e = estimate_dimensions(&model, &spec.ns)?;
            let mut out =
                StudyOutput::new(StudyKind::Dims, &["model", "d_G", "d_PF", "n_min", "n_max", "residual", "reliable"]);
            out.push(vec![
                model.to_string().into(),
                e.d_g.into(),
                e.d_pf.into(),
                e.fit_range.0.into(),
                e.fit_range.1.into(),
                e.fit_residual.into(),
                e.reliable.into(),
            ]);
            Ok(out)
        }
        StudyKind::RhoC => {
            let model = m();
            let mut out = StudyOutput::new(StudyKind::RhoC, &["model", "beta", "rho_c"]);
            out.push(vec![model.to_string().into(), spec.beta.into(), critical_density(&model, spec.beta)?.into()]);
            Ok(out)
        }
        StudyKind::ScheduleConvergence => {
            let model = m();
            let o = root_site(&model);
            let limit = two_point_limit(&model, spec.beta, spec.big_d, &o, &o)?;
            let mut out = StudyOutput::new(
                StudyKind::ScheduleConvergence,
                &["n", "mu_n", "gap_n", "rho_n", "cond_state", "cond_weight", "two_point", "limit", "rel_error"],
            );
            for &n in &spec.ns {
                let s = condensate_schedule(&model, n, spec.big_d)?;
                let p = BoseParams::new(spec.beta, s.mu)?;
                let tp = two_point_finite(&model, n, p, &o, &o, TwoPointMethod::Auto)?;
                let c = condensate_density_finite(&model, n, s.mu)?;
                out.push(vec![
                    n.into(),
                    s.mu.into(),
                    s.gap.into(),
                    finite_density(&model, n, p)?.into(),
                    c.state_side.into(),
                    c.weight_side.into(),
                    tp.into(),
                    limit.total().into(),
                    (tp / limit.total() - 1.0).into(),
                ]);
            }
            out.notes.push(format!(
                "limit = f_reg part {:.12e} + resolvent part {:.12e} + condensate {:.12e}",
                limit.f_reg_part, limit.resolvent_part, limit.condensate_part
            ));
            Ok(out)
        }
        StudyKind::DensityLimit => {
            let model = m();
            let limit = density_limit(&model, spec.a)?;
            let mut out =
                StudyOutput::new(StudyKind::DensityLimit, &["n", "a", "mu_n", "rho_n", "limit", "rel_error"]);
            for &n in &spec.ns {
                let mu = scaled_schedule_mu(&model, n, spec.a)?;
                let rho = finite_density(&model, n, BoseParams::new(1.0, mu)?)?;
                out.push(vec![n.into(), spec.a.into(), mu.into(), rho.into(), limit.into(), (rho / limit - 1.0).into()]);
            }
            Ok(out)
        }
        StudyKind::FixedDensity => {
            let model = m();
            let rho = match spec.rho {
                Some(r) => r,
                None => critical_density(&model, 1.0)?.finite().map_or(1.0, |r| r + 1.0),
            };
            let v = fixed_density_verdict(&model, rho)?;
            let mut out = StudyOutput::new(
                StudyKind::FixedDensity,
                &["model", "rho", "rho_c", "recurrence", "d_G", "d_PF", "regime", "coefficient"],
            );
            let (dg, dp) = v.dims.as_ref().map_or((f64::NAN, f64::NAN), |d| (d.d_g, d.d_pf));
            out.push(vec![
                model.to_string().into(),
                rho.into(),
                v.rho_c.into(),
                format!("{:?}", v.recurrence).into(),
                dg.into(),
                dp.into(),
                v.regime.label().into(),
                v.coefficient.map_or(Cell::Text("divergent".into()), Cell::Num),
            ]);
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(&str, &str)]) -> Result<StudySpec> {
        let map = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        StudySpec::from_map(&map)
    }

    #[test]
    fn config_parsing() {
        let map = parse_config("# comment\nstudy = norms\nmodel=NComb(2)  # trailing\n\n").unwrap();
        assert_eq!(map["study"], "norms");
        assert_eq!(map["model"], "NComb(2)");
        assert!(parse_config("bogus=1").is_err());
        assert!(parse_config("study").is_err());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(spec(&[("study", "ids-shift"), ("model", "N"), ("n", "10")]).is_err());
        assert!(spec(&[("study", "dims"), ("model", "N"), ("n", "1,2,3")]).is_err());
        assert!(spec(&[("study", "norms"), ("model", "N"), ("beta", "-1")]).is_err());
        assert!(spec(&[("study", "nope")]).is_err());
        assert!(spec(&[("study", "norms")]).is_err());
        assert!(spec(&[("study", "table")]).is_ok());
    }

    #[test]
    fn norms_json() {
        let s = spec(&[("study", "norms"), ("model", "NComb(2)"), ("format", "json")]).unwrap();
        let out = run_study(&s).unwrap();
        let text = out.render(s.format, &s.hash()).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let row = &v["rows"][0];
        assert_eq!(row["hidden"], json!(true));
        assert!((row["comb_norm"].as_f64().unwrap() - 4.057532704563875).abs() < 1e-9);
        assert!(row["gap"].as_f64().unwrap() > 0.05);
    }

    #[test]
    fn ids_shift_csv() {
        let s = spec(&[("study", "ids-shift"), ("model", "ZComb(1)"), ("n", "25,50,100")]).unwrap();
        let text = run_study(&s).unwrap().to_csv(&s.hash()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# hopping v") && lines[0].contains(&s.hash()));
        assert_eq!(lines[1], "n,delta,distance");
        assert_eq!(lines.len(), 5);
    }
}
