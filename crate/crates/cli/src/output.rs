//! JSON reports and CSV plot data.

use crate::run::Entry;
use cfield::identities::{fmt_complex, CValue};
use cfield::{Complex64, ErrorBudget};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hash::Hasher;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
#[serde(untagged)]
enum Record<'a> {
    Report {
        schema: u32,
        command: &'a str,
        params: BTreeMap<&'a str, &'a str>,
        lhs: CValue,
        rhs: CValue,
        abs_err: f64,
        rel_err: f64,
        budget: ErrorBudget,
        wall_ms: f64,
        k_cutoff: i64,
        s_cutoff: f64,
        #[serde(skip_serializing_if = "BTreeMap::is_empty")]
        extra: &'a BTreeMap<String, f64>,
        #[serde(skip_serializing_if = "<[String]>::is_empty")]
        notes: &'a [String],
        tol: f64,
        pass: bool,
    },
    Failure {
        schema: u32,
        command: &'a str,
        params: BTreeMap<&'a str, &'a str>,
        error: &'a str,
        tol: f64,
        pass: bool,
    },
}

/// Parameters as given on the command line, plus whatever the library
/// recorded; the command line wins on a clash.
fn params(e: &Entry) -> BTreeMap<&str, &str> {
    let mut p: BTreeMap<&str, &str> = BTreeMap::new();
    if let Ok(r) = &e.result {
        p.extend(r.params.iter().map(|(k, v)| (k.as_str(), v.as_str())));
    }
    p.extend(e.params.iter().map(|(k, v)| (k.as_str(), v.as_str())));
    p
}

fn record(e: &Entry) -> Record<'_> {
    match &e.result {
        Ok(r) => Record::Report {
            schema: SCHEMA,
            command: &e.command,
            params: params(e),
            lhs: r.lhs,
            rhs: r.rhs,
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            budget: r.budget,
            wall_ms: r.wall_ms,
            k_cutoff: r.k_cutoff,
            s_cutoff: r.s_cutoff,
            extra: &r.extra,
            notes: &r.notes,
            tol: e.tol,
            pass: e.passes(),
        },
        Err(msg) => Record::Failure { schema: SCHEMA, command: &e.command, params: params(e), error: msg, tol: e.tol, pass: false },
    }
}

pub fn json(entries: &[Entry]) -> String {
    let records: Vec<Record> = entries.iter().map(record).collect();
    let mut s = serde_json::to_string_pretty(&records).expect("records are plain data");
    s.push('\n');
    s
}

/// FNV-1a (64 bit) of the command and its sorted `name=value` pairs.
pub fn param_hash(command: &str, params: &BTreeMap<&str, &str>) -> String {
    let mut h = fnv::FnvHasher::default();
    h.write(command.as_bytes());
    for (k, v) in params {
        h.write(b";");
        h.write(k.as_bytes());
        h.write(b"=");
        h.write(v.as_bytes());
    }
    format!("{:016x}", h.finish())
}

/// Shortest round-trip form, independent of locale.
fn num(x: f64) -> String {
    format!("{x:e}")
}

/// One row per completed report; runs that ended in an error have no
/// error to plot and are left out.
pub fn plotdata(entries: &[Entry]) -> String {
    let mut s = String::from("param_hash,rel_err,wall_ms,K,S\n");
    for e in entries {
        if let Ok(r) = &e.result {
            let _ = writeln!(s, "{},{},{},{},{}", param_hash(&e.command, &params(e)), num(r.rel_err), num(r.wall_ms), r.k_cutoff, num(r.s_cutoff));
        }
    }
    s
}

pub fn profile(rows: &[(i64, f64, Complex64)]) -> String {
    let mut s = String::from("k,s,value\n");
    for &(k, t, v) in rows {
        let _ = writeln!(s, "{k},{},{}", num(t), fmt_complex(v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_vectors() {
        // FNV-1a of "" and "a" as published with the algorithm.
        assert_eq!(format!("{:016x}", fnv::FnvHasher::default().finish()), "cbf29ce484222325");
        let mut h = fnv::FnvHasher::default();
        h.write(b"a");
        assert_eq!(format!("{:016x}", h.finish()), "af63dc4c8601ec8c");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1e-300, 3.0, 123456.789, 5e-324] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.25), "2.5e-1");
    }

    #[test]
    fn empty_plotdata_is_header_only() {
        assert_eq!(plotdata(&[]), "param_hash,rel_err,wall_ms,K,S\n");
    }
}
