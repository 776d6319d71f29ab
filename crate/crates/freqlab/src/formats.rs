//! On-disk formats: frequency and polynomial JSON files, report JSON views
//! and CSV tables. All JSON objects have sorted keys, so identical inputs
//! give byte-identical files.

use std::path::Path;
use std::sync::Arc;

use freqlab_core::diagnostics::{HyperIndex, SInterval, StripReport, TProfile};
use freqlab_core::dirichlet::{
    CRational, DirichletPolynomial, NormEstimate, NormMethod, QmcEstimate, SupEstimate,
};
use freqlab_core::energy::{RepCounts, SubsetSup};
use freqlab_core::exactreal::{AtomKind, FormalEnclosure, Rational, RegistryBuilder};
use freqlab_core::frequency::{DensityProfile, Frequency, TailEstimate};
use freqlab_core::lambda::{Bound, BoundMethod, BoundValue, LambdaBoundReport};
use freqlab_core::verify::VerifyReport;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::spec::{FrequencySpec, RationalText};

pub const FREQUENCY_SCHEMA: &str = "freqlab/frequency/v1";
pub const POLYNOMIAL_SCHEMA: &str = "freqlab/polynomial/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AtomView {
    Unit {
        id: u32,
    },
    LogPrime {
        id: u32,
        p: u64,
    },
    Formal {
        id: u32,
        label: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<RationalText>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<RationalText>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<RationalText>,
        provenance: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryView {
    pub precision: u32,
    pub precision_cap: u32,
    pub atoms: Vec<AtomView>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueView {
    pub expr: String,
    /// (atom id, coefficient)
    pub coeffs: Vec<(u32, RationalText)>,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyFile {
    pub schema: String,
    pub freqlab_version: String,
    #[serde(default)]
    pub config: Option<RunConfig>,
    #[serde(default)]
    pub spec: Option<FrequencySpec>,
    pub provenance: String,
    pub registry: RegistryView,
    pub values: Vec<ValueView>,
}

pub fn frequency_file(
    f: &Frequency,
    spec: Option<FrequencySpec>,
    config: Option<RunConfig>,
) -> FrequencyFile {
    let reg = f.registry();
    let atoms = reg
        .atoms()
        .iter()
        .map(|a| match &a.kind {
            AtomKind::Unit => AtomView::Unit { id: a.id },
            AtomKind::LogPrime(p) => AtomView::LogPrime { id: a.id, p: *p },
            AtomKind::Formal { label, enclosure } => {
                let (anchor, lo, hi) = match enclosure {
                    FormalEnclosure::Anchored(x) => (Some(RationalText(x.clone())), None, None),
                    FormalEnclosure::Fixed(l, h) => (
                        None,
                        Some(RationalText(l.clone())),
                        Some(RationalText(h.clone())),
                    ),
                };
                AtomView::Formal {
                    id: a.id,
                    label: label.clone(),
                    anchor,
                    lo,
                    hi,
                    provenance: a.provenance.clone(),
                }
            }
        })
        .collect();
    let values = f
        .values()
        .iter()
        .map(|v| ValueView {
            expr: reg.format(v),
            coeffs: v
                .coeffs()
                .iter()
                .map(|(a, c)| (*a, RationalText(c.clone())))
                .collect(),
            approx: v.approx(),
        })
        .collect();
    FrequencyFile {
        schema: FREQUENCY_SCHEMA.into(),
        freqlab_version: crate::config::VERSION.into(),
        config,
        spec,
        provenance: f.provenance().into(),
        registry: RegistryView {
            precision: reg.precision(),
            precision_cap: reg.precision_cap(),
            atoms,
        },
        values,
    }
}

/// Rebuild a frequency from its file form at the given working precision.
pub fn frequency_from_file(file: &FrequencyFile, precision: u32, cap: u32) -> CliResult<Frequency> {
    if file.schema != FREQUENCY_SCHEMA {
        return Err(CliError::Schema(format!(
            "unsupported frequency schema {:?} (expected {FREQUENCY_SCHEMA})",
            file.schema
        )));
    }
    let mut b = RegistryBuilder::new().precision(precision, cap);
    for (pos, atom) in file.registry.atoms.iter().enumerate() {
        let (want, got) = match atom {
            AtomView::Unit { id } => (*id, 0),
            AtomView::LogPrime { id, p } => (*id, b.log_prime(*p)),
            AtomView::Formal {
                id,
                label,
                anchor,
                lo,
                hi,
                provenance,
            } => {
                let enc = match (anchor, lo, hi) {
                    (Some(a), None, None) => FormalEnclosure::Anchored(a.0.clone()),
                    (None, Some(l), Some(h)) => FormalEnclosure::Fixed(l.0.clone(), h.0.clone()),
                    _ => return Err(CliError::Schema(format!("registry.atoms[{pos}]: a formal atom needs either `anchor` or both `lo` and `hi`"))),
                };
                (*id, b.formal(label, enc, provenance)?)
            }
        };
        if want != got || (pos == 0) != matches!(atom, AtomView::Unit { .. }) {
            return Err(CliError::Schema(format!(
                "registry.atoms[{pos}]: atoms must be listed in id order starting with the unit"
            )));
        }
    }
    let reg = b.build();
    let values = file
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            reg.value(v.coeffs.iter().map(|(a, c)| (*a, c.0.clone())).collect())
                .map_err(|e| CliError::Schema(format!("values[{i}]: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Frequency::new(reg, values, file.provenance.clone())?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let p = e.path().to_string();
        let inner = e.into_inner();
        CliError::Schema(format!(
            "{}:{}:{}: at `{p}`: {inner}",
            path.display(),
            inner.line(),
            inner.column()
        ))
    })
}

pub fn read_frequency(
    path: &Path,
    precision: u32,
    cap: u32,
) -> CliResult<(Frequency, FrequencyFile)> {
    let file: FrequencyFile = read_json(path)?;
    let f = frequency_from_file(&file, precision, cap)?;
    Ok((f, file))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermView {
    pub index: usize,
    pub re: RationalText,
    #[serde(default = "zero_text")]
    pub im: RationalText,
}

fn zero_text() -> RationalText {
    RationalText(Rational::from_integer(0.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFile {
    #[serde(default = "poly_schema")]
    pub schema: String,
    pub terms: Vec<TermView>,
}

fn poly_schema() -> String {
    POLYNOMIAL_SCHEMA.into()
}

pub fn read_polynomial(path: &Path, f: &Arc<Frequency>) -> CliResult<DirichletPolynomial> {
    let file: PolynomialFile = read_json(path)?;
    if file.schema != POLYNOMIAL_SCHEMA {
        return Err(CliError::Schema(format!(
            "unsupported polynomial schema {:?}",
            file.schema
        )));
    }
    let terms = file
        .terms
        .into_iter()
        .map(|t| (t.index, Complex::new(t.re.0, t.im.0)))
        .collect();
    Ok(DirichletPolynomial::new(f.clone(), terms)?)
}

pub fn polynomial_json(d: &DirichletPolynomial) -> Value {
    let reg = d.frequency().registry();
    let terms: Vec<Value> = d
        .terms()
        .iter()
        .map(|(i, c): &(usize, CRational)| json!({"index": i, "value": reg.format(&d.frequency().values()[*i]), "re": c.re.to_string(), "im": c.im.to_string()}))
        .collect();
    json!({ "terms": terms })
}

pub fn tail_json(t: &TailEstimate) -> Value {
    json!({
        "sequence": t.sequence.iter().map(|(j, v)| json!([j, v])).collect::<Vec<_>>(),
        "window": t.window,
        "tail_max": t.tail_max,
    })
}

pub fn density_json(d: &DensityProfile) -> Value {
    json!({
        "l_estimate": d.l_estimate(),
        "block_ratio": tail_json(&d.block_ratio),
        "index_ratio_tail_max": d.index_ratio_tail_max,
    })
}

pub fn bound_value_json(v: &BoundValue) -> Value {
    match v {
        BoundValue::Power { base, exponent } => {
            json!({"base": base.to_string(), "exponent": exponent.to_string(), "approx": v.value()})
        }
        BoundValue::Numeric(x) => json!({"approx": x}),
    }
}

pub fn bound_json(b: &Bound) -> Value {
    let mut m = json!({
        "method": b.method.tag(),
        "value": bound_value_json(&b.value),
        "caveats": b.caveats.iter().map(|c| c.tag()).collect::<Vec<_>>(),
    });
    match &b.method {
        BoundMethod::Interpolated {
            from_p,
            from_q,
            alpha,
        } => {
            m["from"] = json!({"p": from_p.to_string(), "q": from_q.to_string(), "alpha": alpha.to_string()});
        }
        BoundMethod::Ascent { restarts } => m["restarts"] = json!(restarts),
        _ => {}
    }
    m
}

pub fn lambda_json(r: &LambdaBoundReport) -> Value {
    json!({
        "set": r.set,
        "set_size": r.set_size,
        "p": r.p.to_string(),
        "q": r.q.to_string(),
        "lower": bound_json(&r.lower),
        "upper": r.upper.as_ref().map(bound_json),
        "witness": r.witness.as_ref().map(polynomial_json),
        "consistent": r.is_consistent(),
    })
}

pub fn subset_sup_json(s: &SubsetSup) -> Value {
    json!({
        "k": s.k,
        "subset": s.subset,
        "energy": s.energy.to_string(),
        "ratio_pow": s.ratio_pow().to_string(),
        "ratio": if s.subset.is_empty() { Value::Null } else { json!(s.ratio()) },
        "exact": s.exact,
        "truncated": s.truncated,
    })
}

pub fn t_profile_json(t: &TProfile) -> Value {
    json!({
        "p": t.p.to_string(),
        "q": t.q.to_string(),
        "caveats": t.caveats.iter().map(|c| c.tag()).collect::<Vec<_>>(),
        "entries": t.entries.iter().map(|e| json!({
            "j": e.j,
            "size": e.size,
            "lower": e.lower,
            "upper": e.upper,
            "lower_bound": bound_value_json(&e.lower_bound),
            "upper_bound": bound_value_json(&e.upper_bound),
            "lower_method": e.lower_method,
            "exact": e.exact,
        })).collect::<Vec<_>>(),
        "lower_tail_max": t.lower_tail.tail_max,
        "upper_tail_max": t.upper_tail.tail_max,
        "window": t.lower_tail.window,
    })
}

pub fn hyper_json(h: &HyperIndex) -> Value {
    json!({
        "k": h.k,
        "profile": tail_json(&h.profile),
        "tail_exact": h.tail_exact,
        "threshold": h.threshold,
        "verdict": h.verdict.tag(),
        "growth_guard": h.growth_guard,
    })
}

pub fn s_interval_json(s: &SInterval) -> Value {
    json!({
        "p": s.p.to_string(),
        "lower": s.lower,
        "upper": s.upper,
        "lower_source": s.lower_source,
        "upper_source": s.upper_source,
        "caveats": s.caveats.iter().map(|c| c.tag()).collect::<Vec<_>>(),
    })
}

pub fn strip_json(r: &StripReport) -> Value {
    json!({
        "frequency": r.frequency,
        "density": density_json(&r.density),
        "t_profiles": r.t_profiles.iter().map(t_profile_json).collect::<Vec<_>>(),
        "s_intervals": r.s_intervals.iter().map(s_interval_json).collect::<Vec<_>>(),
        "p0_bracket": [r.p0_bracket.0.to_string(), r.p0_bracket.1.to_string()],
        "hyper_index": r.hyper_index.iter().map(hyper_json).collect::<Vec<_>>(),
    })
}

pub fn qmc_json(q: &QmcEstimate) -> Value {
    json!({
        "p": q.p,
        "moment": q.moment,
        "moment_se": q.moment_se,
        "norm": q.norm,
        "lo": q.lo,
        "hi": q.hi,
        "points": q.points,
        "shifts": q.shifts,
    })
}

pub fn norm_json(n: &NormEstimate) -> Value {
    json!({
        "value": n.value,
        "lo": n.lo,
        "hi": n.hi,
        "method": match n.method { NormMethod::ExactEvenMoment => "exact-even-moment", NormMethod::Qmc => "qmc" },
        "moment": n.moment.as_ref().map(|m| m.to_string()),
        "qmc": n.qmc.as_ref().map(qmc_json),
        "caveats": if n.method == NormMethod::Qmc { vec!["numeric-only"] } else { vec![] },
    })
}

pub fn sup_json(s: &SupEstimate) -> Value {
    json!({"lower_bound": s.lower_bound, "argmax": s.argmax, "caveats": ["numeric-only"]})
}

pub fn verify_json(r: &VerifyReport) -> Value {
    json!({
        "frequency": r.frequency,
        "violations": r.violations(),
        "passed": r.passed(),
        "rows": r.rows.iter().map(|x| json!({
            "check": x.check.name(),
            "instance": x.instance,
            "margin": x.margin,
            "exact": x.exact,
            "passed": x.passed,
            "caveat_free": x.caveat_free,
        })).collect::<Vec<_>>(),
    })
}

/// Serialize with a trailing newline; keys are already sorted.
pub fn to_json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn with_record(config: &RunConfig, schema: &'static str, body: Value) -> Value {
    let mut v = serde_json::to_value(config.record(schema)).expect("config serializes");
    v["result"] = body;
    v
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))
}

pub fn rep_counts_csv(rc: &RepCounts, f: &Frequency) -> CliResult<Vec<u8>> {
    let reg = f.registry();
    let entries = rc.entries(reg)?;
    csv_bytes(
        &["sum", "approx", "count"],
        entries
            .iter()
            .map(|(v, c)| vec![reg.format(v), format!("{}", v.approx()), c.to_string()]),
    )
}

pub fn t_profile_csv(t: &TProfile) -> CliResult<Vec<u8>> {
    csv_bytes(
        &["j", "size", "lower", "upper", "lower_method", "exact"],
        t.entries.iter().map(|e| {
            vec![
                e.j.to_string(),
                e.size.to_string(),
                e.lower.to_string(),
                e.upper.to_string(),
                e.lower_method.into(),
                e.exact.to_string(),
            ]
        }),
    )
}

pub fn hyper_csv(h: &HyperIndex) -> CliResult<Vec<u8>> {
    csv_bytes(
        &["j", "h"],
        h.profile
            .sequence
            .iter()
            .map(|(j, v)| vec![j.to_string(), v.to_string()]),
    )
}

pub fn density_csv(d: &DensityProfile) -> CliResult<Vec<u8>> {
    csv_bytes(
        &["j", "log_size_over_j"],
        d.block_ratio
            .sequence
            .iter()
            .map(|(j, v)| vec![j.to_string(), v.to_string()]),
    )
}

pub fn s_intervals_csv(s: &[SInterval]) -> CliResult<Vec<u8>> {
    csv_bytes(
        &["p", "lower", "upper", "upper_source"],
        s.iter().map(|x| {
            vec![
                x.p.to_string(),
                x.lower.to_string(),
                x.upper.to_string(),
                x.upper_source.clone(),
            ]
        }),
    )
}

pub fn verify_csv(r: &VerifyReport) -> CliResult<Vec<u8>> {
    csv_bytes(
        &[
            "check",
            "instance",
            "margin",
            "exact",
            "passed",
            "caveat_free",
        ],
        r.rows.iter().map(|x| {
            vec![
                x.check.name().into(),
                x.instance.clone(),
                x.margin.to_string(),
                x.exact.to_string(),
                x.passed.to_string(),
                x.caveat_free.to_string(),
            ]
        }),
    )
}
