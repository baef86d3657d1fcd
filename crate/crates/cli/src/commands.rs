//! Subcommand bodies. Each returns an [`Outcome`]; an `Err` means the input
//! was malformed.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use serde::Serialize;
use serde_json::{json, Value};

use iwasawa::chern::chern_report;
use iwasawa::cohomology::{betti_numbers, frolicher_pages};
use iwasawa::corpus;
use iwasawa::field::{format_rational, QuadElem, Rational};
use iwasawa::heisenberg::{
    construct_iwasawa, extract_iwasawa, q4_to_k2, validate_lattice, HeisError, HeisLattice,
};
use iwasawa::hodge::{
    cm_report, endomorphism_algebra, enumerate_elliptic_subtori, h20_02_dim, picard_number,
    torus_from_klattice, TorusJ,
};
use iwasawa::verifier::{
    check_roundtrip, run_check, run_suite, Check, Verdict, VerificationReport,
};

use crate::schema::{corpus_document, Document};

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
    Malformed,
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn new(ok: bool, json: Value, text: String) -> Self {
        let status = if ok { Status::Success } else { Status::Failure };
        Outcome { status, json, text }
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn wrong_kind(doc: &Document, wanted: &str) -> anyhow::Error {
    anyhow!("expected a {wanted} document, got kind {:?}", doc.kind())
}

fn vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn rational_matrix(m: &[Vec<Rational>]) -> String {
    m.iter().map(|r| format!("  {}\n", vector(r))).collect()
}

fn k_matrix(m: &[Vec<QuadElem>]) -> String {
    m.iter()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("  [{}]\n", parts.join(", "))
        })
        .collect()
}

/// Validates a Heisenberg document; `Ok(Err(_))` carries a non-cocompact verdict.
fn validated(doc: &Document) -> Result<std::result::Result<HeisLattice, HeisError>> {
    let Document::Heisenberg(h) = doc else {
        return Err(wrong_kind(doc, "heisenberg"));
    };
    match validate_lattice(&h.points()) {
        Ok(l) => Ok(Ok(l)),
        Err(e @ HeisError::NotCocompact { .. }) => Ok(Err(e)),
        Err(e) => Err(e.into()),
    }
}

/// A lattice from a Heisenberg or construct document.
fn lattice_of(doc: &Document) -> Result<HeisLattice> {
    match doc {
        Document::Heisenberg(h) => Ok(validate_lattice(&h.points())?),
        Document::Construct(c) => {
            let (delta, gamma, field) = c.parts()?;
            Ok(construct_iwasawa(&delta, &gamma, field)?)
        }
        other => Err(wrong_kind(other, "heisenberg or construct")),
    }
}

fn not_cocompact(e: HeisError) -> Outcome {
    let msg = e.to_string();
    Outcome::new(
        false,
        json!({ "valid": false, "error": msg }),
        format!("invalid lattice: {msg}\n"),
    )
}

pub fn lattice_validate(doc: &Document) -> Result<Outcome> {
    let l = match validated(doc)? {
        Ok(l) => l,
        Err(e) => return Ok(not_cocompact(e)),
    };
    let json = json!({
        "valid": true,
        "d": l.field().d(),
        "generators": l.generators().len(),
        "delta": to_json(l.delta()),
        "gamma": to_json(l.gamma()),
        "cocycle_matrix": to_json(&l.cocycle_matrix()),
    });
    let text = format!(
        "valid cocompact lattice over {}\n{} generators\nDelta basis:\n{}Gamma basis:\n{}cocycle on Delta basis:\n{}",
        l.field(),
        l.generators().len(),
        rational_matrix(l.delta().basis()),
        rational_matrix(l.gamma().basis()),
        k_matrix(l.cocycle_matrix()),
    );
    Ok(Outcome::new(true, json, text))
}

pub fn iwasawa_extract(doc: &Document) -> Result<Outcome> {
    let l = match validated(doc)? {
        Ok(l) => l,
        Err(e) => return Ok(not_cocompact(e)),
    };
    let data = extract_iwasawa(&l);
    let text = format!(
        "K = {}\nDelta basis:\n{}Gamma basis:\n{}q on Delta basis:\n{}",
        data.field,
        rational_matrix(data.delta.basis()),
        rational_matrix(data.gamma.basis()),
        k_matrix(&data.cocycle_on_basis()),
    );
    Ok(Outcome::new(true, to_json(&data), text))
}

pub fn iwasawa_construct(doc: &Document) -> Result<Outcome> {
    let Document::Construct(c) = doc else {
        return Err(wrong_kind(doc, "construct"));
    };
    let (delta, gamma, field) = c.parts()?;
    match construct_iwasawa(&delta, &gamma, field) {
        Ok(l) => {
            let json = json!({
                "constructed": true,
                "generators": to_json(&l.generators()),
                "delta": to_json(l.delta()),
                "gamma": to_json(l.gamma()),
            });
            let mut text = format!(
                "constructed lattice with {} generators:\n",
                l.generators().len()
            );
            for g in l.generators() {
                let _ = writeln!(text, "  ({}, {}, {})", g.a, g.b, g.c);
            }
            Ok(Outcome::new(true, json, text))
        }
        Err(HeisError::CocycleConditionViolated {
            i,
            j,
            first,
            second,
            value,
        }) => {
            let json = json!({
                "constructed": false,
                "violation": {
                    "i": i,
                    "j": j,
                    "first": first.iter().map(format_rational).collect::<Vec<_>>(),
                    "second": second.iter().map(format_rational).collect::<Vec<_>>(),
                    "q": to_json(&value),
                },
            });
            let k2 = |v: &[Rational]| {
                let (a, b) = q4_to_k2(field, v);
                format!("({a}, {b})")
            };
            let text = format!(
                "cocycle condition violated: q({}, {}) = {} is not in Gamma\n",
                k2(&first),
                k2(&second),
                value
            );
            Ok(Outcome::new(false, json, text))
        }
        Err(e) => Err(e.into()),
    }
}

/// The torus of a torus document, or the base torus ℂ²/Delta of a lattice.
fn torus_of(doc: &Document) -> Result<TorusJ> {
    match doc {
        Document::Torus(t) => t.torus(),
        Document::Heisenberg(_) | Document::Construct(_) => {
            let l = lattice_of(doc)?;
            Ok(torus_from_klattice(l.delta(), l.field())?)
        }
        other => Err(wrong_kind(other, "torus, heisenberg or construct")),
    }
}

pub fn torus_endos(doc: &Document) -> Result<Outcome> {
    let t = torus_of(doc)?;
    let e = endomorphism_algebra(&t);
    let mut text = format!("dim End(T) ⊗ Q = {} (g = {})\n", e.dim(), t.g());
    if let Some(k) = e.quadratic_field() {
        let _ = writeln!(text, "CM field {k}");
    }
    for (n, m) in e.basis.iter().enumerate() {
        let _ = write!(text, "basis element {n}:\n{}", rational_matrix(m));
    }
    let json = json!({
        "g": t.g(),
        "dim": e.dim(),
        "cm_field": e.quadratic_field().map(|k| k.d()),
        "basis": to_json(&e)["basis"],
    });
    Ok(Outcome::new(true, json, text))
}

pub fn torus_picard(doc: &Document) -> Result<Outcome> {
    let t = torus_of(doc)?;
    let (rho, h20) = (picard_number(&t), h20_02_dim(&t));
    let json = json!({ "g": t.g(), "picard": rho, "h20_02": h20 });
    Ok(Outcome::new(
        true,
        json,
        format!("g = {}\npicard = {rho}\nh20_02 = {h20}\n", t.g()),
    ))
}

pub fn torus_cm(doc: &Document) -> Result<Outcome> {
    let t = torus_of(doc)?;
    let r = cm_report(&t)?;
    let text = format!(
        "g = {} (evaluated on genus {})\npicard = {} maximal: {}\nh20_02 = {} rational: {}\nend_dim = {} maximal: {}\nconditions agree: {}\ncm: {}\n",
        r.g,
        r.evaluated_genus,
        r.picard,
        r.maximal_picard,
        r.h20_02,
        r.rational_h20_02,
        r.end_dim,
        r.maximal_end,
        r.consistent,
        r.verdict()
    );
    Ok(Outcome::new(r.consistent, to_json(&r), text))
}

pub fn torus_subtori(doc: &Document, height: u32) -> Result<Outcome> {
    let t = torus_of(doc)?;
    let subs = enumerate_elliptic_subtori(&t, height)?;
    let mut text = format!("{} elliptic subtori at height <= {height}\n", subs.len());
    for s in &subs {
        let _ = writeln!(
            text,
            "  line {}  witness {}  index {}",
            vector(&s.line),
            vector(&s.witness),
            s.witness_index
        );
    }
    let json = json!({ "height": height, "count": subs.len(), "subtori": to_json(&subs) });
    Ok(Outcome::new(true, json, text))
}

fn algebra_of(doc: &Document) -> Result<iwasawa::cohomology::CEAlgebra> {
    match doc {
        Document::CeAlgebra(a) => a.algebra(),
        other => Err(wrong_kind(other, "ce-algebra")),
    }
}

pub fn cohomology_betti(doc: &Document) -> Result<Outcome> {
    let b = betti_numbers(&algebra_of(doc)?);
    let euler: i64 = b
        .iter()
        .enumerate()
        .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum();
    let line: Vec<String> = b.iter().map(|x| x.to_string()).collect();
    let json = json!({ "betti": b, "euler_characteristic": euler });
    Ok(Outcome::new(true, json, format!("{}\n", line.join(" "))))
}

pub fn cohomology_frolicher(doc: &Document, r_max: usize) -> Result<Outcome> {
    let r = frolicher_pages(&algebra_of(doc)?, r_max)?;
    let mut text = String::new();
    for p in &r.pages {
        let _ = writeln!(text, "E{} total {}", p.r, p.total());
    }
    let betti_total: usize = r.betti.iter().sum();
    let _ = writeln!(
        text,
        "limit E{} total {} (sum of Betti numbers {betti_total})",
        r.limit.r,
        r.limit.total()
    );
    let _ = writeln!(text, "degenerates at E1: {}", r.degenerates_at_e1());
    let mut json = to_json(&r);
    json["degenerates_at_e1"] = json!(r.degenerates_at_e1());
    Ok(Outcome::new(true, json, text))
}

pub fn chern_check(doc: &Document, height: u32) -> Result<Outcome> {
    let l = lattice_of(doc)?;
    let r = chern_report(&extract_iwasawa(&l), height)?;
    let zero = r.restrictions.iter().filter(|x| x.zero).count();
    let text = format!(
        "alternating: {}\nK-bilinear: {}\nnondegenerate: {}\nvalues in Gamma: {}\nzero on {zero} of {} elliptic subtori at height <= {height}\n{}\n",
        r.type_check.alternating,
        r.type_check.k_bilinear,
        r.nondegenerate,
        r.values_in_gamma,
        r.restrictions.len(),
        if r.pass() { "pass" } else { "FAIL" }
    );
    Ok(Outcome::new(r.pass(), to_json(&r), text))
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Malformed => "malformed",
    }
}

/// `which` is `all` or a check name. Timings are zeroed unless requested so
/// that output is reproducible.
pub fn verify(doc: &Document, which: &str, height: u32, timings: bool) -> Result<Outcome> {
    let checks: Vec<Check> = if which == "all" {
        Check::ALL.to_vec()
    } else {
        vec![which
            .parse()
            .map_err(|e: String| anyhow!("{e} (known: all, {})", names()))?]
    };
    let mut reports: Vec<VerificationReport> = match (doc, checks.as_slice()) {
        (Document::Construct(c), [Check::Roundtrip]) => {
            let (delta, gamma, field) = c.parts()?;
            vec![check_roundtrip(&delta, &gamma, field)]
        }
        _ => {
            let l = lattice_of(doc)?;
            if checks.len() == 1 {
                vec![run_check(checks[0], &l, height)]
            } else {
                run_suite(&l, height)
            }
        }
    };
    if !timings {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let width = reports.iter().map(|r| r.check.len()).max().unwrap_or(0);
    let mut text = String::new();
    for r in &reports {
        let _ = write!(
            text,
            "{:<width$}  {:<9}  {}",
            r.check,
            verdict_word(r.verdict),
            r.claim
        );
        if timings {
            let _ = write!(text, "  [{} ms]", r.elapsed_ms);
        }
        text.push('\n');
        if r.verdict != Verdict::Pass {
            let _ = writeln!(text, "    witnesses: {}", r.witnesses);
        }
    }
    let status = if reports.iter().any(|r| r.verdict == Verdict::Malformed) {
        Status::Malformed
    } else if reports.iter().all(|r| r.verdict == Verdict::Pass) {
        Status::Success
    } else {
        Status::Failure
    };
    Ok(Outcome {
        status,
        json: to_json(&reports),
        text,
    })
}

fn names() -> String {
    Check::ALL
        .iter()
        .map(|c| c.name())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn corpus_list() -> Outcome {
    let entries: Vec<(&str, &str)> = corpus::NAMES
        .iter()
        .map(|&n| (n, corpus_document(n).expect("bundled name").kind()))
        .collect();
    let width = entries.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let text = entries
        .iter()
        .map(|(n, k)| format!("{n:<width$}  {k}\n"))
        .collect();
    let json = Value::Array(
        entries
            .iter()
            .map(|(n, k)| json!({ "name": n, "kind": k }))
            .collect(),
    );
    Outcome::new(true, json, text)
}

/// The document itself; emitted as JSON in both output modes.
pub fn corpus_emit(doc: &Document) -> Result<Outcome> {
    let json = to_json(doc);
    let text = serde_json::to_string_pretty(&json)? + "\n";
    Ok(Outcome::new(true, json, text))
}
