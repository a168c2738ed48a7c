//! Batch runner behind the `yangkit` binary: suite selection, report
//! assembly and the tuple translation table.

use crate::drinfeld::{check_cnm_weights, translation_offsets, CNM_BUDGET};
use crate::isom::{
    check_end_to_end, check_natural_j_vanishes, check_pbw_identities, check_spin_identities, verify_transport, Route,
    TransportInput,
};
use crate::liealg::{build_lie_algebra, check_casimir, check_tensor_identities, Series, Spec};
use crate::report::{CheckReport, Status, Witness};
use crate::rmatrix::{check_intertwiner_natural, check_qybe, check_r_identities, check_universal_truncation};
use crate::scalar::{fmt_q, DEFAULT_ORDER, Q};
use crate::yangrep::{
    check_current_relations, check_j_relations, check_minimal_relations, check_rtt_relations, fundamental_j_rep,
    natural_current_rep, natural_j_rep, rtt_natural_rep, rtt_spin_rep, DEFAULT_RS_MAX, DEFAULT_TRIPLE_BUDGET,
};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

pub const REPORT_VERSION: u32 = 1;
pub const INTERTWINER_BOUND: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Liealg,
    PbwIdentities,
    Qybe,
    Presentations,
    Isomorphisms,
    Drinfeld,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Liealg, Suite::PbwIdentities, Suite::Qybe, Suite::Presentations, Suite::Isomorphisms, Suite::Drinfeld];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Liealg => "liealg",
            Suite::PbwIdentities => "pbw-identities",
            Suite::Qybe => "qybe",
            Suite::Presentations => "presentations",
            Suite::Isomorphisms => "isomorphisms",
            Suite::Drinfeld => "drinfeld",
        }
    }

    /// Suites whose checks do not involve zeta run once per spec.
    fn uses_zeta(self) -> bool {
        !matches!(self, Suite::Liealg | Suite::PbwIdentities)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(ConfigError::Format(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error(
        "unknown suite {0:?} (expected one of liealg, pbw-identities, qybe, presentations, isomorphisms, drinfeld)"
    )]
    UnknownSuite(String),
    #[error("unknown format {0:?} (expected json or text)")]
    Format(String),
    #[error("no spec selected")]
    NoSpec,
    #[error("no suite selected")]
    NoSuite,
    #[error("zeta must be nonzero")]
    ZeroZeta,
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("order must be at least 2, got {0}")]
    Order(usize),
    #[error("r/s budget must be at least 1")]
    Budget,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub specs: Vec<(Series, usize)>,
    pub zetas: Vec<Q>,
    pub order: usize,
    pub rs_max: usize,
    pub suites: Vec<Suite>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            specs: Vec::new(),
            zetas: vec![Q::from_integer(1.into())],
            order: DEFAULT_ORDER,
            rs_max: DEFAULT_RS_MAX,
            suites: Vec::new(),
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    fn resolve(&self) -> Result<Vec<Spec>, ConfigError> {
        if self.specs.is_empty() {
            return Err(ConfigError::NoSpec);
        }
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuite);
        }
        if self.zetas.is_empty() || self.zetas.iter().any(|z| z.is_zero()) {
            return Err(ConfigError::ZeroZeta);
        }
        if self.order < 2 {
            return Err(ConfigError::Order(self.order));
        }
        if self.rs_max == 0 {
            return Err(ConfigError::Budget);
        }
        let mut out: Vec<Spec> = Vec::new();
        for &(s, n) in &self.specs {
            let spec = build_lie_algebra(s, n).map_err(|e| ConfigError::Spec(e.to_string()))?;
            if !out.iter().any(|x| x.name() == spec.name()) {
                out.push(spec);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub specs: Vec<String>,
    pub zetas: Vec<String>,
    pub order: usize,
    pub rs_max: usize,
    pub suites: Vec<Suite>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    pub id: String,
    pub paper_anchor: String,
    pub status: Status,
    pub instances: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_tags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, serde_json::Value>,
}

impl Record {
    fn from_check(suite: Suite, spec: &Spec, zeta: Option<&Q>, r: CheckReport) -> Self {
        Record {
            suite,
            spec: spec.name(),
            zeta: zeta.map(fmt_q),
            id: r.check_id,
            paper_anchor: r.anchor,
            status: r.status,
            instances: r.instances,
            failures: r.failures,
            failed_tags: r.failed_tags,
            witness: r.witness,
            info: r.info,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub translation_tables: BTreeMap<String, TranslationTable>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let header = ["suite", "spec", "zeta", "check", "status", "instances", "anchor"];
        let rows: Vec<[String; 7]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.suite.to_string(),
                    r.spec.clone(),
                    r.zeta.clone().unwrap_or_else(|| "-".into()),
                    r.id.clone(),
                    r.status.to_string(),
                    r.instances.to_string(),
                    r.paper_anchor.clone(),
                ]
            })
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "yangkit {} (report version {})", self.tool_version, self.report_version);
        out.push_str(&aligned(&header, &rows));
        for r in self.records.iter().filter(|r| r.status != Status::Pass) {
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "{} {} {}: {} = {}", r.suite, r.spec, r.id, w.location, w.value);
            }
        }
        for t in self.translation_tables.values() {
            out.push('\n');
            out.push_str(&t.to_text());
        }
        let s = &self.summary;
        let _ = writeln!(out, "\n{} passed, {} failed, {} errors", s.pass, s.fail, s.error);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

fn aligned<const K: usize>(header: &[&str; K], rows: &[[String; K]]) -> String {
    let mut w = [0usize; K];
    for (k, h) in header.iter().enumerate() {
        w[k] = h.chars().count();
    }
    for r in rows {
        for k in 0..K {
            w[k] = w[k].max(r[k].chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, c) in cells.iter().enumerate() {
            if k + 1 == K {
                s.push_str(c);
            } else {
                let pad = w[k] - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(|c| c.as_str()).collect()));
    }
    out
}

/// One substitution Q_i(u) = P_k(u + s) per RTT node k = i + 1, at zeta = 1.
#[derive(Debug, Clone, Serialize)]
pub struct TranslationRow {
    pub k: usize,
    pub node: usize,
    pub offset: String,
    pub formula: String,
    pub substitution: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslationTable {
    pub spec: String,
    pub rows: Vec<TranslationRow>,
}

impl TranslationTable {
    pub fn to_text(&self) -> String {
        let header = ["k", "node", "offset", "formula", "substitution"];
        let rows: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| [r.k.to_string(), r.node.to_string(), r.offset.clone(), r.formula.clone(), r.substitution.clone()])
            .collect();
        format!("translation table {}\n{}", self.spec, aligned(&header, &rows))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes") + "\n"
    }
}

pub fn emit_translation_table(spec: &Spec) -> TranslationTable {
    let rows = translation_offsets(spec)
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let formula = match (i, spec.series) {
                (0, Series::B) => "kappa + 1/4".to_string(),
                (0, _) => "kappa".to_string(),
                _ => format!("(n + kappa - {i})/2"),
            };
            let k = i + 1;
            TranslationRow {
                k,
                node: i,
                offset: fmt_q(&s),
                substitution: format!("Q_{i}(u) = P_{k}(u + {})", fmt_q(&s)),
                formula,
            }
        })
        .collect();
    TranslationTable { spec: spec.name(), rows }
}

fn liealg_checks(spec: &Spec) -> Vec<CheckReport> {
    vec![check_tensor_identities(spec), check_casimir(spec)]
}

fn qybe_checks(spec: &Spec, zeta: &Q) -> Vec<CheckReport> {
    vec![
        check_qybe(spec, zeta),
        check_r_identities(spec, zeta),
        check_universal_truncation(spec, zeta),
        check_intertwiner_natural(spec, zeta, INTERTWINER_BOUND),
    ]
}

fn presentation_checks(spec: &Spec, zeta: &Q, cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let mut j = check_j_relations(&natural_j_rep(spec, zeta), DEFAULT_TRIPLE_BUDGET);
    j.check_id = format!("{}-natural", j.check_id);
    out.push(j);
    let zero = Q::zero();
    for i in spec.allowed_fundamental_nodes() {
        // a = 0 keeps the module away from the natural special cases
        match fundamental_j_rep(spec, zeta, i, &zero) {
            Ok((rep, _)) => {
                let mut r = check_j_relations(&rep, DEFAULT_TRIPLE_BUDGET);
                r.check_id = format!("{}-fundamental-{i}", r.check_id);
                out.push(r);
            }
            Err(e) => {
                let mut r = CheckReport::new(format!("j-relations-fundamental-{i}"), "P:fundrepYang");
                r.error(e.to_string());
                out.push(r);
            }
        }
    }
    let cur = natural_current_rep(spec, zeta, 2 * cfg.rs_max);
    out.push(check_current_relations(&cur, cfg.rs_max, cfg.rs_max));
    out.push(check_minimal_relations(&cur));
    let mut r = check_rtt_relations(&rtt_natural_rep(spec, zeta, cfg.order));
    r.check_id = format!("{}-natural", r.check_id);
    out.push(r);
    for i in spin_nodes(spec) {
        match rtt_spin_rep(spec, zeta, i, cfg.order) {
            Ok(rep) => {
                let mut r = check_rtt_relations(&rep);
                r.check_id = format!("{}-spin-{i}", r.check_id);
                out.push(r);
            }
            Err(e) => {
                let mut r = CheckReport::new(format!("rtt-relations-spin-{i}"), "Lemma spin");
                r.error(e.to_string());
                out.push(r);
            }
        }
        out.push(check_spin_identities(spec, zeta, i, cfg.order));
    }
    out
}

fn spin_nodes(spec: &Spec) -> Vec<usize> {
    match spec.series {
        Series::B => vec![0],
        Series::D => vec![0, 1],
        Series::C => vec![],
    }
}

fn isomorphism_checks(spec: &Spec, zeta: &Q, cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = vec![check_natural_j_vanishes(spec, zeta)];
    let tag = |mut r: CheckReport, what: &str| {
        r.check_id = format!("{}-{what}", r.check_id);
        r
    };
    let nat = rtt_natural_rep(spec, zeta, cfg.order);
    out.push(tag(verify_transport(&TransportInput::Rtt(&nat), Route::RttJCur), "natural"));
    for i in spin_nodes(spec) {
        if let Ok(rep) = rtt_spin_rep(spec, zeta, i, cfg.order) {
            out.push(tag(verify_transport(&TransportInput::Rtt(&rep), Route::RttJCur), &format!("spin-{i}")));
        }
    }
    let jn = natural_j_rep(spec, zeta);
    out.push(tag(verify_transport(&TransportInput::J(&jn), Route::JCur), "natural"));
    for i in spec.allowed_fundamental_nodes() {
        if let Ok((rep, _)) = fundamental_j_rep(spec, zeta, i, &Q::zero()) {
            out.push(tag(verify_transport(&TransportInput::J(&rep), Route::JCur), &format!("fundamental-{i}")));
        }
    }
    out
}

fn drinfeld_checks(spec: &Spec, zeta: &Q, cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = vec![check_end_to_end(spec, zeta, cfg.order)];
    for m in 1..=spec.n.min(2) {
        if spec.big_n.pow(m as u32) <= CNM_BUDGET {
            out.push(check_cnm_weights(spec, zeta, m, cfg.order));
        }
    }
    out
}

fn run_one(suite: Suite, spec: &Spec, zeta: Option<&Q>, cfg: &SuiteConfig) -> Vec<Record> {
    let checks = match (suite, zeta) {
        (Suite::Liealg, _) => liealg_checks(spec),
        (Suite::PbwIdentities, _) => vec![check_pbw_identities(spec)],
        (Suite::Qybe, Some(z)) => qybe_checks(spec, z),
        (Suite::Presentations, Some(z)) => presentation_checks(spec, z, cfg),
        (Suite::Isomorphisms, Some(z)) => isomorphism_checks(spec, z, cfg),
        (Suite::Drinfeld, Some(z)) => drinfeld_checks(spec, z, cfg),
        _ => Vec::new(),
    };
    checks.into_iter().map(|r| Record::from_check(suite, spec, zeta, r)).collect()
}

/// Runs every selected suite over the selected specs and zetas.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    let specs = cfg.resolve()?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut jobs: Vec<(Suite, &Spec, Option<&Q>)> = Vec::new();
    for &suite in &suites {
        for spec in &specs {
            if suite.uses_zeta() {
                for z in &cfg.zetas {
                    jobs.push((suite, spec, Some(z)));
                }
            } else {
                jobs.push((suite, spec, None));
            }
        }
    }
    // jobs are already in (suite, spec, zeta) order; collect preserves it
    let records: Vec<Record> = jobs.par_iter().flat_map_iter(|&(s, spec, z)| run_one(s, spec, z, cfg)).collect();
    let mut summary = Summary::default();
    for r in &records {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Error => summary.error += 1,
        }
    }
    let mut translation_tables = BTreeMap::new();
    if suites.contains(&Suite::Drinfeld) {
        for spec in &specs {
            translation_tables.insert(spec.name(), emit_translation_table(spec));
        }
    }
    Ok(Report {
        report_version: REPORT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho {
            specs: specs.iter().map(|s| s.name()).collect(),
            zetas: cfg.zetas.iter().map(fmt_q).collect(),
            order: cfg.order,
            rs_max: cfg.rs_max,
            suites,
        },
        records,
        translation_tables,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn cfg(specs: Vec<(Series, usize)>, suites: Vec<Suite>) -> SuiteConfig {
        SuiteConfig { specs, suites, ..SuiteConfig::default() }
    }

    #[test]
    fn qybe_suite_b2() {
        let r = run_suite(&cfg(vec![(Series::B, 2)], vec![Suite::Qybe])).unwrap();
        assert!(r.passed());
        assert_eq!(r.records.iter().filter(|x| x.id == "qybe").count(), 1);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn config_errors() {
        assert_eq!(run_suite(&cfg(vec![], vec![Suite::Qybe])).unwrap_err(), ConfigError::NoSpec);
        assert_eq!(run_suite(&cfg(vec![(Series::B, 2)], vec![])).unwrap_err(), ConfigError::NoSuite);
        let mut c = cfg(vec![(Series::B, 2)], vec![Suite::Qybe]);
        c.zetas = vec![Q::zero()];
        assert_eq!(run_suite(&c).unwrap_err(), ConfigError::ZeroZeta);
        assert!(matches!("qyb".parse::<Suite>(), Err(ConfigError::UnknownSuite(_))));
        assert!(matches!(run_suite(&cfg(vec![(Series::D, 1)], vec![Suite::Liealg])), Err(ConfigError::Spec(_))));
    }

    #[test]
    fn failing_record_sets_exit_one() {
        let mut r = run_suite(&cfg(vec![(Series::C, 1)], vec![Suite::Liealg])).unwrap();
        assert_eq!(r.exit_code(), 0);
        r.summary.fail = 1;
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn translation_tables() {
        let so5 = build_lie_algebra(Series::B, 2).unwrap();
        let t = emit_translation_table(&so5);
        let offs: Vec<&str> = t.rows.iter().map(|r| r.offset.as_str()).collect();
        assert_eq!(offs, ["7/4", "5/4"]);
        let sp4 = build_lie_algebra(Series::C, 2).unwrap();
        assert_eq!(emit_translation_table(&sp4).rows[0].offset, "3");
        let so4 = build_lie_algebra(Series::D, 2).unwrap();
        assert_eq!(emit_translation_table(&so4).rows[0].offset, "1");
        assert!(t.to_text().contains("Q_1(u) = P_2(u + 5/4)"));
    }

    #[test]
    fn drinfeld_suite_c2_has_table() {
        let r = run_suite(&cfg(vec![(Series::C, 2)], vec![Suite::Drinfeld])).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.translation_tables["sp4"].rows.len(), 2);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut c = cfg(vec![(Series::C, 1), (Series::B, 1)], vec![Suite::Liealg, Suite::Qybe]);
        c.zetas = vec![qi(1), qi(2)];
        let a = run_suite(&c).unwrap().to_json();
        let b = run_suite(&c).unwrap().to_json();
        assert_eq!(a, b);
        let t = run_suite(&c).unwrap().to_text();
        assert!(t.contains("qybe") && t.contains("passed"));
    }
}
