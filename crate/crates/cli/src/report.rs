//! Rendering of a single field's results as text, canonical JSON, or a CSV
//! row.

use std::fmt::Write as _;

use genbound::algorithms::{Algorithm, AlgorithmResult, Field};
use genbound::closed_form_bounds::BoundReport;
use genbound::numberfield::Ideal;
use serde_json::{json, Map, Value};

pub const JSON_VERSION: u64 = 1;
pub const CSV_VERSION: &str = "1";

pub const CSV_HEADER: [&str; 20] = [
    "version",
    "line",
    "poly",
    "poly_hash",
    "n",
    "log_disc",
    "disc_source",
    "T",
    "T1",
    "T2",
    "cap_T0",
    "bach401",
    "teasynt_general",
    "coro2",
    "two_step",
    "three_step",
    "ratio_T1_T",
    "ratio_T1_logdisc2",
    "elapsed_s",
    "errors",
];

/// Everything computed for one field.
#[derive(Debug, Default)]
pub struct FieldReport {
    pub poly: String,
    pub hash: String,
    pub n: Option<usize>,
    pub r1: usize,
    pub r2: usize,
    pub log_disc: Option<f64>,
    pub disc: Option<String>,
    pub disc_source: Option<&'static str>,
    pub irreducibility: Option<&'static str>,
    pub skipped_primes: Vec<u64>,
    pub results: Vec<AlgorithmResult>,
    pub closed_forms: Option<BoundReport>,
    pub ideals: Option<Vec<Ideal>>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

impl FieldReport {
    pub fn from_field(field: &Field) -> Self {
        let inv = field.invariants();
        FieldReport {
            poly: field.poly().to_string(),
            hash: field.hash().to_string(),
            n: Some(inv.n),
            r1: inv.r1,
            r2: inv.r2,
            log_disc: Some(inv.log_disc),
            disc: inv.disc_exact.as_ref().map(|d| d.to_string()),
            disc_source: Some(inv.disc_source.as_str()),
            irreducibility: Some(match inv.irreducibility {
                genbound::numberfield::Irreducibility::Proven => "proven",
                genbound::numberfield::Irreducibility::Unverified => "unverified",
            }),
            skipped_primes: field.table().skipped_primes(),
            warnings: field.warnings(),
            ..Default::default()
        }
    }

    pub fn result(&self, a: Algorithm) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == a)
    }

    fn total_elapsed(&self) -> f64 {
        self.results.iter().map(|r| r.elapsed.as_secs_f64()).sum()
    }
}

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    json!(rounded)
}

/// Same rounding applied to every float inside `v`.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

fn result_json(r: &AlgorithmResult) -> Value {
    let mut m = Map::new();
    m.insert("T".into(), json!(r.t));
    m.insert("ideal_count".into(), json!(r.ideal_count));
    m.insert("elapsed_s".into(), num(r.elapsed.as_secs_f64()));
    m.insert("flags".into(), json!(r.flags));
    if let Some(c) = &r.certificate {
        m.insert("certificate".into(), canonical(serde_json::to_value(c).unwrap_or(Value::Null)));
    }
    Value::Object(m)
}

pub fn to_json(rep: &FieldReport) -> Value {
    let mut field = Map::new();
    field.insert("poly".into(), json!(rep.poly));
    field.insert("hash".into(), json!(rep.hash));
    field.insert("n".into(), json!(rep.n));
    field.insert("r1".into(), json!(rep.r1));
    field.insert("r2".into(), json!(rep.r2));
    field.insert("log_disc".into(), rep.log_disc.map(num).unwrap_or(Value::Null));
    field.insert("disc".into(), json!(rep.disc));
    field.insert("disc_source".into(), json!(rep.disc_source));
    field.insert("irreducibility".into(), json!(rep.irreducibility));
    field.insert("skipped_primes".into(), json!(rep.skipped_primes));

    let mut top = Map::new();
    top.insert("version".into(), json!(JSON_VERSION));
    top.insert("field".into(), Value::Object(field));
    for r in &rep.results {
        top.insert(r.algorithm.as_str().into(), result_json(r));
    }
    if let Some(b) = &rep.closed_forms {
        top.insert("closed_forms".into(), canonical(serde_json::to_value(b).unwrap_or(Value::Null)));
    }
    if let Some(ideals) = &rep.ideals {
        let list: Vec<Value> =
            ideals.iter().map(|i| json!({"p": i.p, "f": i.f, "norm": i.norm})).collect();
        top.insert("ideals".into(), Value::Array(list));
    }
    top.insert("warnings".into(), json!(rep.warnings));
    top.insert("errors".into(), json!(rep.errors));
    Value::Object(top)
}

pub fn render_json(rep: &FieldReport) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(rep)).unwrap_or_default();
    s.push('\n');
    s
}

fn g12(x: f64) -> String {
    match num(x) {
        Value::Number(n) => n.to_string(),
        _ => String::new(),
    }
}

pub fn render_text(rep: &FieldReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field           {}", rep.poly);
    let _ = writeln!(s, "hash            {}", rep.hash);
    if let Some(n) = rep.n {
        let _ = writeln!(s, "degree          {n} (r1 = {}, r2 = {})", rep.r1, rep.r2);
    }
    if let Some(l) = rep.log_disc {
        let disc = rep.disc.as_deref().map(|d| format!(", disc = {d}")).unwrap_or_default();
        let _ = writeln!(s, "log |disc|      {} ({}{disc})", g12(l), rep.disc_source.unwrap_or("?"));
    }
    for r in &rep.results {
        let name = match r.algorithm {
            Algorithm::Bdydf => "T   (bdydf)",
            Algorithm::Multistep => "T1  (multistep)",
            Algorithm::Simplified => "T2  (simplified)",
        };
        let _ = write!(
            s,
            "{name:<16}{:<10} ideals = {:<8} {:.3}s",
            r.t,
            r.ideal_count,
            r.elapsed.as_secs_f64()
        );
        if let Some(c) = &r.certificate {
            let _ = write!(s, "  [N = {}, δ = {}, q = {:.3e}]", c.n, g12(c.delta), c.q_value);
        }
        s.push('\n');
        for f in &r.flags {
            if !rep.warnings.contains(f) {
                let _ = writeln!(s, "                  note: {f}");
            }
        }
    }
    if let Some(b) = &rep.closed_forms {
        let _ = writeln!(s, "closed forms");
        let _ = writeln!(s, "  teasynt       {}", g12(b.teasynt_general));
        if let Some(v) = b.teasynt_large_disc {
            let _ = writeln!(s, "  teasynt large {}", g12(v));
        }
        let _ = writeln!(s, "  coro2         {}", g12(b.coro2));
        let _ = writeln!(s, "  4.01 log²Δ    {}", g12(b.bach401));
        let _ = writeln!(s, "  two step      {}", g12(b.two_step));
        let _ = writeln!(s, "  three step    {}", g12(b.three_step));
        let _ = writeln!(s, "  cap T0        {}", g12(b.cap_t0));
    }
    if let Some(ideals) = &rep.ideals {
        let _ = writeln!(s, "generators ({})", ideals.len());
        for i in ideals {
            let _ = writeln!(s, "  p = {:<10} f = {:<3} norm = {}", i.p, i.f, i.norm);
        }
    }
    for w in &rep.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    for e in &rep.errors {
        let _ = writeln!(s, "error: {e}");
    }
    s
}

pub fn csv_row(line: usize, rep: &FieldReport) -> Vec<String> {
    let t = |a| rep.result(a).map(|r| r.t);
    let opt = |v: Option<f64>| v.map(g12).unwrap_or_default();
    let int = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let (tb, t1, t2) = (t(Algorithm::Bdydf), t(Algorithm::Multistep), t(Algorithm::Simplified));
    let cf = rep.closed_forms.as_ref();
    let ratio = match (t1, tb) {
        (Some(a), Some(b)) if b > 0 => Some(a as f64 / b as f64),
        _ => None,
    };
    let ratio_log = match (t1, rep.log_disc) {
        (Some(a), Some(l)) => Some(a as f64 / (l * l)),
        _ => None,
    };
    vec![
        CSV_VERSION.to_string(),
        line.to_string(),
        rep.poly.clone(),
        rep.hash.clone(),
        rep.n.map(|n| n.to_string()).unwrap_or_default(),
        opt(rep.log_disc),
        rep.disc_source.unwrap_or("").to_string(),
        int(tb),
        int(t1),
        int(t2),
        opt(cf.map(|b| b.cap_t0)),
        opt(cf.map(|b| b.bach401)),
        opt(cf.map(|b| b.teasynt_general)),
        opt(cf.map(|b| b.coro2)),
        opt(cf.map(|b| b.two_step)),
        opt(cf.map(|b| b.three_step)),
        opt(ratio),
        opt(ratio_log),
        g12(rep.total_elapsed()),
        rep.errors.join("; "),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(5.0).to_string(), "5.0");
    }

    #[test]
    fn canonical_json_round_trips() {
        let v = canonical(json!({"b": 1.0 / 3.0, "a": [2.0f64.sqrt(), 7], "c": {"z": 1e-300}}));
        let s = serde_json::to_string_pretty(&v).unwrap();
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
