//! Bundled example inputs.

use crate::cohomology::{self, CEAlgebra};
use crate::field::{ratio, rational, QuadField, Rational, RealAlgField};
use crate::heisenberg::{validate_lattice, HeisLattice, HeisPoint};
use crate::hodge::{torus_from_klattice, TorusJ};
use crate::zlattice::ZLattice;

#[derive(Debug, Clone)]
pub enum CorpusEntry {
    /// Group generators of a lattice in the Heisenberg group.
    Lattice(Vec<HeisPoint>),
    /// (Delta, Gamma, K) input for the lattice constructor.
    Construct {
        delta: ZLattice,
        gamma: ZLattice,
        field: QuadField,
    },
    /// A full lattice in K^g.
    KTorus {
        lattice: ZLattice,
        field: QuadField,
    },
    /// A torus given by its complex structure.
    JTorus(TorusJ),
    Algebra(CEAlgebra),
}

pub const NAMES: &[&str] = &[
    "gaussian",
    "eisenstein",
    "gaussian-scaled",
    "gaussian-refined",
    "half-generator",
    "construct-gaussian",
    "construct-violating",
    "construct-scaled",
    "gaussian-curve",
    "eisenstein-curve",
    "sqrt2-curve",
    "non-cm-curve",
    "non-cm-product",
    "iwasawa-ce",
    "abelian-ce",
    "heisenberg3-ce",
];

/// Names of the entries that are Heisenberg lattices.
pub const LATTICES: &[&str] = &[
    "gaussian",
    "eisenstein",
    "gaussian-scaled",
    "gaussian-refined",
    "half-generator",
];

fn pt(
    f: QuadField,
    a: (Rational, Rational),
    b: (Rational, Rational),
    c: (Rational, Rational),
) -> HeisPoint {
    HeisPoint::new(f.elem(a.0, a.1), f.elem(b.0, b.1), f.elem(c.0, c.1)).expect("one field")
}

fn zero() -> (Rational, Rational) {
    (rational(0), rational(0))
}

/// Points (x,0,0), (0,x,0), (0,0,x) for x running over `basis`.
fn standard_generators(
    f: QuadField,
    abelian: &[(Rational, Rational)],
    central: &[(Rational, Rational)],
) -> Vec<HeisPoint> {
    let mut gens = Vec::new();
    for x in abelian {
        gens.push(pt(f, x.clone(), zero(), zero()));
    }
    for x in abelian {
        gens.push(pt(f, zero(), x.clone(), zero()));
    }
    for x in central {
        gens.push(pt(f, zero(), zero(), x.clone()));
    }
    gens
}

fn gaussian_basis(scale: i64) -> Vec<(Rational, Rational)> {
    vec![
        (rational(scale), rational(0)),
        (rational(0), rational(scale)),
    ]
}

fn eisenstein_basis() -> Vec<(Rational, Rational)> {
    // 1 and (−1 + √−3)/2
    vec![(rational(1), rational(0)), (ratio(-1, 2), ratio(1, 2))]
}

fn lattice(m: usize, rows: &[&[i64]]) -> ZLattice {
    let gens: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rational(x)).collect())
        .collect();
    ZLattice::from_generators(m, &gens).expect("consistent dimensions")
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    let gi = QuadField::gaussian();
    let eis = QuadField::eisenstein();
    let half = ratio(1, 2);
    Some(match name {
        "gaussian" => CorpusEntry::Lattice(standard_generators(
            gi,
            &gaussian_basis(1),
            &gaussian_basis(1),
        )),
        "eisenstein" => CorpusEntry::Lattice(standard_generators(
            eis,
            &eisenstein_basis(),
            &eisenstein_basis(),
        )),
        "gaussian-scaled" => CorpusEntry::Lattice(standard_generators(
            gi,
            &gaussian_basis(2),
            &gaussian_basis(1),
        )),
        "gaussian-refined" => {
            let mut gens = standard_generators(gi, &gaussian_basis(1), &gaussian_basis(1));
            let h = (half.clone(), half.clone());
            gens.push(pt(gi, h.clone(), h, zero()));
            CorpusEntry::Lattice(gens)
        }
        "half-generator" => {
            let mut gens = standard_generators(gi, &gaussian_basis(1), &gaussian_basis(1));
            gens[0] = pt(gi, (half, rational(0)), zero(), zero());
            CorpusEntry::Lattice(gens)
        }
        "construct-gaussian" => CorpusEntry::Construct {
            delta: ZLattice::standard(4),
            gamma: ZLattice::standard(2),
            field: gi,
        },
        "construct-violating" => CorpusEntry::Construct {
            delta: ZLattice::standard(4),
            gamma: lattice(2, &[&[2, 0], &[0, 2]]),
            field: gi,
        },
        "construct-scaled" => CorpusEntry::Construct {
            delta: ZLattice::standard(4).scaled(&rational(2)),
            gamma: ZLattice::standard(2),
            field: gi,
        },
        "gaussian-curve" => CorpusEntry::KTorus {
            lattice: ZLattice::standard(2),
            field: gi,
        },
        "eisenstein-curve" => CorpusEntry::KTorus {
            lattice: ZLattice::from_generators(
                2,
                &[
                    vec![rational(1), rational(0)],
                    vec![ratio(1, 2), ratio(1, 2)],
                ],
            )
            .expect("ℚ² vectors"),
            field: eis,
        },
        "sqrt2-curve" => CorpusEntry::KTorus {
            lattice: ZLattice::standard(2),
            field: QuadField::new(2).expect("squarefree"),
        },
        "non-cm-curve" => CorpusEntry::JTorus(non_cm_curve()),
        "non-cm-product" => CorpusEntry::JTorus(non_cm_product()),
        "iwasawa-ce" => CorpusEntry::Algebra(cohomology::iwasawa_model()),
        "abelian-ce" => {
            CorpusEntry::Algebra(cohomology::abelian_model(6, true).expect("six generators"))
        }
        "heisenberg3-ce" => CorpusEntry::Algebra(
            cohomology::ce_from_nilpotent_algebra(&cohomology::heisenberg3_constants())
                .expect("nilpotent"),
        ),
        _ => return None,
    })
}

/// ℂ/(ℤ + ℤτ) with τ = √2 + i, whose endomorphism algebra is ℚ.
pub fn non_cm_curve() -> TorusJ {
    let (f, s2) = RealAlgField::sqrt_of(2).expect("2 is squarefree");
    TorusJ::elliptic(&s2, &f.one()).expect("Im τ > 0")
}

/// The non-CM curve times ℂ/(ℤ + ℤτ′), τ′ = √2 + 2i; the factors are not isogenous.
pub fn non_cm_product() -> TorusJ {
    let (f, s2) = RealAlgField::sqrt_of(2).expect("2 is squarefree");
    let other = TorusJ::elliptic(&s2, &f.from_rational(rational(2))).expect("Im τ′ > 0");
    non_cm_curve().product(&other).expect("same field")
}

/// Validated Heisenberg lattices of the corpus, in [`LATTICES`] order.
pub fn heisenberg_lattices() -> Vec<(&'static str, HeisLattice)> {
    LATTICES
        .iter()
        .map(|&name| match entry(name) {
            Some(CorpusEntry::Lattice(gens)) => (
                name,
                validate_lattice(&gens).expect("bundled lattice is valid"),
            ),
            _ => unreachable!("{name} is a lattice entry"),
        })
        .collect()
}

/// Tori of the corpus: base tori of the bundled lattices, CM curves and the
/// two non-CM examples.
pub fn tori() -> Vec<(String, TorusJ)> {
    let mut out: Vec<(String, TorusJ)> = heisenberg_lattices()
        .into_iter()
        .map(|(name, l)| {
            let t = torus_from_klattice(l.delta(), l.field()).expect("Delta has full rank");
            (format!("{name}-base"), t)
        })
        .collect();
    for name in [
        "gaussian-curve",
        "eisenstein-curve",
        "sqrt2-curve",
        "non-cm-curve",
        "non-cm-product",
    ] {
        let t = match entry(name) {
            Some(CorpusEntry::KTorus { lattice, field }) => {
                torus_from_klattice(&lattice, field).expect("full lattice")
            }
            Some(CorpusEntry::JTorus(t)) => t,
            _ => unreachable!("{name} is a torus entry"),
        };
        out.push((name.to_string(), t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            assert!(entry(name).is_some(), "{name}");
        }
        assert!(entry("nope").is_none());
    }

    #[test]
    fn lattices_validate() {
        let ls = heisenberg_lattices();
        assert_eq!(ls.len(), LATTICES.len());
        for (_, l) in &ls {
            assert_eq!(l.delta().rank(), 4);
            assert_eq!(l.gamma().rank(), 2);
        }
        let refined = &ls[3].1;
        let half = ratio(1, 2);
        assert!(refined
            .delta()
            .member(&[half.clone(), half.clone(), half.clone(), half])
            .unwrap());
    }
}
