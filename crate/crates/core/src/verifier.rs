//! Named checks composing the other modules on a given lattice.
//!
//! A check never decides anything itself beyond comparing module outputs
//! with expected values; every failing verdict carries the values that
//! disagreed.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chern::{chern_form, restrict_to_subtorus, verify_holomorphic_type};
use crate::cohomology::{self, betti_numbers, frolicher_pages, is_closed, is_exact};
use crate::field::{QuadField, Rational};
use crate::heisenberg::{
    construct_iwasawa, extract_iwasawa, split_over_line, HeisError, HeisLattice,
};
use crate::hodge::{self, TorusJ};
use crate::zlattice::ZLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The input violated a precondition of the check.
    Malformed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub check: String,
    pub claim: String,
    pub verdict: Verdict,
    pub witnesses: Value,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    BasePicard,
    CommonCm,
    LineSplitting,
    Roundtrip,
    CeModel,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::BasePicard,
        Check::CommonCm,
        Check::LineSplitting,
        Check::Roundtrip,
        Check::CeModel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::BasePicard => "base-picard",
            Check::CommonCm => "common-cm",
            Check::LineSplitting => "line-splitting",
            Check::Roundtrip => "roundtrip",
            Check::CeModel => "ce-model",
        }
    }

    pub fn claim(self) -> &'static str {
        match self {
            Check::BasePicard => "the base torus ℂ²/Delta has maximal Picard number 4 and a rational (2,0)+(0,2) part of dimension 2",
            Check::CommonCm => "the fibre and the two factors of the isogeny decomposition of the base have complex multiplication by the same field K",
            Check::LineSplitting => "the cocycle is of type (2,0) and the bundle splits over every K-line of bounded height",
            Check::Roundtrip => "(Delta, Gamma, q) determines the lattice exactly when q(Λ²Delta) ⊆ Gamma",
            Check::CeModel => "the Chevalley–Eilenberg model has Betti numbers 1 4 8 10 8 4 1 and a Frölicher sequence that does not degenerate at E₁",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

fn run(check: Check, body: impl FnOnce() -> (Verdict, Value)) -> VerificationReport {
    let start = Instant::now();
    let (verdict, witnesses) = body();
    VerificationReport {
        check: check.name().to_string(),
        claim: check.claim().to_string(),
        verdict,
        witnesses,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report data")
}

/// Picard number 4 and h20_02 = 2 on the base torus.
pub fn check_base_picard(l: &HeisLattice) -> VerificationReport {
    match hodge::torus_from_klattice(l.delta(), l.field()) {
        Ok(t) => check_base_picard_torus(&t),
        Err(e) => run(Check::BasePicard, || {
            (
                Verdict::Fail,
                json!({ "delta_rank": l.delta().rank(), "error": e.to_string() }),
            )
        }),
    }
}

/// The picard part of [`check_base_picard`] for an arbitrary surface.
pub fn check_base_picard_torus(t: &TorusJ) -> VerificationReport {
    run(Check::BasePicard, || {
        let picard = hodge::picard_number(t);
        let h20 = hodge::h20_02_dim(t);
        let ok = t.g() == 2 && picard == 4 && h20 == 2;
        (
            pass_if(ok),
            json!({ "g": t.g(), "picard": picard, "h20_02": h20, "expected_picard": 4, "expected_h20_02": 2 }),
        )
    })
}

fn curve_report(name: &str, gamma: &ZLattice, field: QuadField) -> (bool, Value) {
    let order = hodge::multiplier_order(gamma, field);
    let j_field = hodge::torus_from_klattice(gamma, field)
        .map(|e| hodge::endomorphism_algebra(&e).quadratic_field());
    let ok =
        matches!(&order, Ok(o) if o.field == field) && matches!(j_field, Ok(Some(f)) if f == field);
    let w = json!({
        "curve": name,
        "lattice": to_json(gamma),
        "order_field": order.as_ref().map(|o| o.field.to_string()).map_err(|e| e.to_string()),
        "conductor": order.as_ref().map(|o| o.conductor.to_string()).ok(),
        "end_algebra_field": match &j_field {
            Ok(Some(f)) => Value::String(f.to_string()),
            Ok(None) => Value::Null,
            Err(e) => Value::String(e.to_string()),
        },
    });
    (ok, w)
}

/// CM fields of the fibre E = ℂ/Gamma and of the factors E′, E″ of the base.
/// Each field is computed twice: from the multiplier order of the lattice
/// and from the endomorphism algebra of the J-model.
pub fn check_common_cm(l: &HeisLattice) -> VerificationReport {
    run(Check::CommonCm, || {
        let field = l.field();
        let t = match hodge::torus_from_klattice(l.delta(), field) {
            Ok(t) => t,
            Err(e) => return (Verdict::Fail, json!({ "error": e.to_string() })),
        };
        let dec = match hodge::decompose_isogeny(&t) {
            Ok(d) => d,
            Err(e) => return (Verdict::Fail, json!({ "error": e.to_string() })),
        };
        let curves = [
            curve_report("fibre", l.gamma(), field),
            curve_report("first factor", &dec.curves[0], field),
            curve_report("second factor", &dec.curves[1], field),
        ];
        let ok = curves.iter().all(|(ok, _)| *ok);
        (
            pass_if(ok),
            json!({
                "field": field.to_string(),
                "isogeny_degree": dec.degree.to_string(),
                "curves": curves.iter().map(|(_, w)| w.clone()).collect::<Vec<_>>(),
            }),
        )
    })
}

/// Type check of the cocycle, then zero restriction and abelian lift over
/// every K-line of height ≤ `height`.
pub fn check_line_splitting(l: &HeisLattice, height: u32) -> VerificationReport {
    let data = extract_iwasawa(l);
    let lines = hodge::torus_from_klattice(&data.delta, data.field)
        .and_then(|t| hodge::enumerate_elliptic_subtori(&t, height));
    match lines {
        Ok(subs) => {
            let vs: Vec<Vec<Rational>> = subs.into_iter().map(|s| s.witness).collect();
            check_line_splitting_for(l, &vs)
        }
        Err(e) => run(Check::LineSplitting, || {
            (Verdict::Malformed, json!({ "error": e.to_string() }))
        }),
    }
}

/// [`check_line_splitting`] on explicitly given lines K·v.
pub fn check_line_splitting_for(l: &HeisLattice, vectors: &[Vec<Rational>]) -> VerificationReport {
    run(Check::LineSplitting, || {
        let data = extract_iwasawa(l);
        let form = chern_form(&data);
        let cert = verify_holomorphic_type(&form);
        let mut ok = cert.pass;
        let mut lines = Vec::new();
        for v in vectors {
            let split = match split_over_line(&data, v) {
                Ok(s) => s,
                Err(e @ (HeisError::ZeroVector | HeisError::Lattice(_))) => {
                    return (
                        Verdict::Malformed,
                        json!({ "line": to_json(&rationals(v)), "error": e.to_string() }),
                    );
                }
                Err(e) => return (Verdict::Fail, json!({ "error": e.to_string() })),
            };
            let m = match hodge::line_sublattice(data.field, &data.delta, v) {
                Ok(m) => m,
                Err(e) => return (Verdict::Malformed, json!({ "error": e.to_string() })),
            };
            let restricted_zero = match restrict_to_subtorus(&form, &m) {
                Ok(r) => r.is_zero(),
                Err(e) => {
                    return (
                        Verdict::Fail,
                        json!({ "line": to_json(&rationals(v)), "error": e.to_string() }),
                    )
                }
            };
            let line = hodge::line_representative(data.field, v).expect("nonzero vector");
            ok &= restricted_zero && split.holds();
            lines.push(json!({
                "line": rationals(&line),
                "witness": rationals(v),
                "restricted_form_zero": restricted_zero,
                "bracket_zero": split.is_abelian(),
                "restricted_q_zero": split.q_vanishes(),
                "split_torus": { "base": to_json(&m), "fibre": to_json(&data.gamma) },
            }));
        }
        (
            pass_if(ok),
            json!({
                "type_check": to_json(&cert),
                "line_count": lines.len(),
                "lines": lines,
            }),
        )
    })
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(crate::field::format_rational).collect()
}

/// Builds a lattice from (Delta, Gamma, K) and extracts the data back.
pub fn check_roundtrip(delta: &ZLattice, gamma: &ZLattice, field: QuadField) -> VerificationReport {
    run(Check::Roundtrip, || {
        match construct_iwasawa(delta, gamma, field) {
            Ok(l) => {
                let data = extract_iwasawa(&l);
                let q_before = chern_form(&crate::heisenberg::IwasawaData {
                    field,
                    delta: delta.clone(),
                    gamma: gamma.clone(),
                })
                .matrix();
                let q_after = data.cocycle_on_basis();
                let same = &data.delta == delta
                    && &data.gamma == gamma
                    && q_before == q_after
                    && q_after == l.cocycle_matrix();
                (
                    pass_if(same),
                    json!({
                        "delta_equal": &data.delta == delta,
                        "gamma_equal": &data.gamma == gamma,
                        "q_equal": q_before == q_after,
                        "generators": l.generators().len(),
                    }),
                )
            }
            Err(HeisError::CocycleConditionViolated {
                i,
                j,
                first,
                second,
                value,
            }) => (
                Verdict::Fail,
                json!({
                    "pair": [i, j],
                    "first": rationals(&first),
                    "second": rationals(&second),
                    "q": to_json(&value),
                    "gamma": to_json(gamma),
                }),
            ),
            Err(e) => (Verdict::Malformed, json!({ "error": e.to_string() })),
        }
    })
}

/// Betti numbers, duality, Euler characteristic, b₁ = rank Delta, the
/// closed and exact certificates and Frölicher non-degeneracy.
pub fn check_ce_model(delta_rank: usize) -> VerificationReport {
    run(Check::CeModel, || {
        let alg = cohomology::iwasawa_model();
        let betti = betti_numbers(&alg);
        let expected = vec![1usize, 4, 8, 10, 8, 4, 1];
        let duality = betti.iter().eq(betti.iter().rev());
        let euler: i64 = betti
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        let flipped = betti_numbers(&cohomology::iwasawa_model_signed(-1));

        let e = |names: &[&str]| {
            names.iter().fold(alg.one(), |acc, n| {
                acc.wedge(&alg.named(n).expect("model generator"))
                    .expect("same algebra")
            })
        };
        let omega = e(&["alpha", "alphabar"])
            .add(&e(&["beta", "betabar"]))
            .and_then(|x| x.wedge(&e(&["gamma", "gammabar"])))
            .expect("same algebra");
        let tau = e(&["alpha", "beta", "alphabar", "betabar"]);
        let primitive = e(&["gamma", "alphabar", "betabar"]);
        let omega_closed = is_closed(&omega);
        let primitive_ok = primitive.d() == tau;
        let tau_exact = is_exact(&tau).is_some_and(|y| y.d() == tau);

        let fro = frolicher_pages(&alg, 3).expect("bigraded model");
        let total: usize = betti.iter().sum();
        let e1 = fro.pages[0].total();
        let limit_matches = (0..betti.len()).all(|k| fro.limit.total_in_degree(k) == betti[k]);
        let monotone = fro.pages.windows(2).all(|w| w[1].total() <= w[0].total());

        let ok = betti == expected
            && duality
            && euler == 0
            && betti[1] == delta_rank
            && flipped == betti
            && omega_closed
            && primitive_ok
            && tau_exact
            && e1 > total
            && limit_matches
            && monotone;
        (
            pass_if(ok),
            json!({
                "betti": betti,
                "expected_betti": expected,
                "poincare_duality": duality,
                "euler_characteristic": euler,
                "b1": betti[1],
                "delta_rank": delta_rank,
                "flipped_sign_betti": flipped,
                "omega": omega.to_string(),
                "omega_closed": omega_closed,
                "tau": tau.to_string(),
                "tau_primitive": primitive.to_string(),
                "primitive_verified": primitive_ok,
                "tau_exact": tau_exact,
                "frolicher_totals": fro.pages.iter().map(|p| p.total()).collect::<Vec<_>>(),
                "frolicher_limit_total": fro.limit.total(),
                "betti_total": total,
            }),
        )
    })
}

/// Runs `check` on the lattice; the round trip uses the lattice's own data.
pub fn run_check(check: Check, l: &HeisLattice, height: u32) -> VerificationReport {
    match check {
        Check::BasePicard => check_base_picard(l),
        Check::CommonCm => check_common_cm(l),
        Check::LineSplitting => check_line_splitting(l, height),
        Check::Roundtrip => check_roundtrip(l.delta(), l.gamma(), l.field()),
        Check::CeModel => check_ce_model(l.delta().rank()),
    }
}

/// All checks, run concurrently, reported in [`Check::ALL`] order.
pub fn run_suite(l: &HeisLattice, height: u32) -> Vec<VerificationReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = Check::ALL
            .into_iter()
            .map(|c| s.spawn(move || run_check(c, l, height)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check worker"))
            .collect()
    })
}

pub fn summary_table(reports: &[VerificationReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.check.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!("{:<width$}  {:<9}  {:>8}\n", "check", "verdict", "ms");
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Malformed => "malformed",
        };
        out.push_str(&format!(
            "{:<width$}  {:<9}  {:>8}\n",
            r.check, verdict, r.elapsed_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::rational;

    fn gaussian() -> HeisLattice {
        corpus::heisenberg_lattices().remove(0).1
    }

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    /// A lattice record that never went through validation.
    fn corrupted(delta: ZLattice) -> HeisLattice {
        let l = gaussian();
        HeisLattice { delta, ..l }
    }

    #[test]
    fn suite_passes_on_corpus() {
        for (name, l) in corpus::heisenberg_lattices() {
            let reports = run_suite(&l, 1);
            let names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
            assert_eq!(names, Check::ALL.map(|c| c.name()));
            for r in reports {
                assert_eq!(r.verdict, Verdict::Pass, "{name}: {}", r.witnesses);
            }
        }
    }

    #[test]
    fn base_picard_negative_controls() {
        let rank3 =
            ZLattice::from_generators(4, &[q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0])])
                .unwrap();
        let r = check_base_picard(&corrupted(rank3));
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses["delta_rank"], 3);

        let r = check_base_picard_torus(&corpus::non_cm_product());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses["picard"], 2);
    }

    #[test]
    fn common_cm_fields() {
        let ls = corpus::heisenberg_lattices();
        let r = check_common_cm(&ls[1].1);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.witnesses["field"], "Q(sqrt(-3))");
        let r = check_common_cm(&ls[2].1);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.witnesses["field"], "Q(sqrt(-1))");
    }

    #[test]
    fn line_splitting_counts_and_zero_vector() {
        let l = gaussian();
        let r1 = check_line_splitting(&l, 1);
        let r2 = check_line_splitting(&l, 2);
        assert_eq!(r1.verdict, Verdict::Pass);
        assert_eq!(r2.verdict, Verdict::Pass);
        assert!(r2.witnesses["line_count"].as_u64() > r1.witnesses["line_count"].as_u64());
        let r = check_line_splitting_for(&l, &[q(&[0, 0, 0, 0])]);
        assert_eq!(r.verdict, Verdict::Malformed);
    }

    #[test]
    fn roundtrip_cases() {
        let gi = QuadField::gaussian();
        let z4 = ZLattice::standard(4);
        let z2 = ZLattice::standard(2);
        assert_eq!(check_roundtrip(&z4, &z2, gi).verdict, Verdict::Pass);
        assert_eq!(
            check_roundtrip(&z4.scaled(&rational(2)), &z2, gi).verdict,
            Verdict::Pass
        );
        let r = check_roundtrip(&z4, &z2.scaled(&rational(2)), gi);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses["first"], json!(["1", "0", "0", "0"]));
        assert_eq!(r.witnesses["second"], json!(["0", "0", "1", "0"]));
        assert_eq!(r.witnesses["q"]["a"], "1");
    }

    #[test]
    fn ce_model_and_controls() {
        let r = check_ce_model(4);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.witnesses);
        assert_eq!(check_ce_model(3).verdict, Verdict::Fail);

        let ab = cohomology::abelian_model(6, true).unwrap();
        assert_eq!(betti_numbers(&ab), vec![1, 6, 15, 20, 15, 6, 1]);
        assert!(frolicher_pages(&ab, 2).unwrap().degenerates_at_e1());
    }

    #[test]
    fn reports_are_deterministic() {
        let l = gaussian();
        let strip = |mut r: VerificationReport| {
            r.elapsed_ms = 0;
            serde_json::to_string(&r).unwrap()
        };
        let a: Vec<String> = run_suite(&l, 1).into_iter().map(strip).collect();
        let b: Vec<String> = run_suite(&l, 1).into_iter().map(strip).collect();
        assert_eq!(a, b);
        let back: VerificationReport = serde_json::from_str(&a[0]).unwrap();
        assert_eq!(back.check, "base-picard");
    }

    #[test]
    fn check_names_parse() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("lemma".parse::<Check>().is_err());
    }
}
