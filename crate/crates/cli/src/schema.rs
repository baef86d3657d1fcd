//! Input documents: one JSON object with a `kind` tag and a `version`.
//!
//! Rationals are strings `"p/q"` or `"n"`. An element a + b√−d of K is the
//! pair `[a, b]`. Lattices are lists of generator rows in ℚ coordinates, with
//! K² written as (a₀, a₁, b₀, b₁).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use iwasawa::cohomology::{CEAlgebra, CEAlgebraSpec, Generator};
use iwasawa::corpus::{self, CorpusEntry};
use iwasawa::field::{
    format_rational, parse_rational, QuadElem, QuadField, Rational, RealAlgField,
};
use iwasawa::heisenberg::HeisPoint;
use iwasawa::hodge::{torus_from_klattice, TorusJ};
use iwasawa::zlattice::ZLattice;

pub const VERSION: u32 = 1;
pub const CORPUS_DIR_VAR: &str = "IWASAWA_CORPUS_DIR";

/// A rational written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(D::Error::custom)
    }
}

/// The squarefree d > 0 of K = ℚ(√−d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disc(pub QuadField);

impl Serialize for Disc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0.d())
    }
}

impl<'de> Deserialize<'de> for Disc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = i64::deserialize(d)?;
        QuadField::new(n).map(Disc).map_err(D::Error::custom)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|x| x.0.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub a: [Q; 2],
    pub b: [Q; 2],
    pub c: [Q; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealFieldDoc {
    /// Monic minimal polynomial, ascending coefficients.
    pub minpoly: Vec<Q>,
    /// Isolating interval of the chosen real root.
    pub interval: [Q; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergDoc {
    pub kind: String,
    pub version: u32,
    pub d: Disc,
    pub generators: Vec<PointDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructDoc {
    pub kind: String,
    pub version: u32,
    pub d: Disc,
    pub delta: Vec<Vec<Q>>,
    pub gamma: Vec<Vec<Q>>,
}

/// Either `klattice` with `d`, or `field` with `J`. Entries of J are
/// coefficient lists in the power basis of the field generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDoc {
    pub kind: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Disc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub klattice: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<RealFieldDoc>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<Vec<Q>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CeAlgebraDoc {
    pub kind: String,
    pub version: u32,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<(String, String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Document {
    Heisenberg(HeisenbergDoc),
    Construct(ConstructDoc),
    Torus(TorusDoc),
    CeAlgebra(CeAlgebraDoc),
}

pub const KINDS: [&str; 4] = ["heisenberg", "construct", "torus", "ce-algebra"];

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Heisenberg(_) => KINDS[0],
            Document::Construct(_) => KINDS[1],
            Document::Torus(_) => KINDS[2],
            Document::CeAlgebra(_) => KINDS[3],
        }
    }

    fn version(&self) -> u32 {
        match self {
            Document::Heisenberg(x) => x.version,
            Document::Construct(x) => x.version,
            Document::Torus(x) => x.version,
            Document::CeAlgebra(x) => x.version,
        }
    }
}

#[derive(Deserialize)]
struct KindOnly {
    kind: Option<String>,
}

fn typed<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            anyhow!("schema error: {inner}")
        } else {
            anyhow!("schema error at {path}: {inner}")
        }
    })
}

/// Parses and schema-checks a document. Errors name the field path and the
/// line and column of the offending value.
pub fn parse_document(text: &str) -> Result<Document> {
    let head: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| anyhow!("syntax error: {e}"))?;
    let kind = serde_json::from_value::<KindOnly>(serde_json::Value::Object(head))
        .ok()
        .and_then(|k| k.kind)
        .ok_or_else(|| {
            anyhow!(
                "schema error: missing string field `kind` (one of {})",
                KINDS.join(", ")
            )
        })?;
    let doc = match kind.as_str() {
        "heisenberg" => Document::Heisenberg(typed(text)?),
        "construct" => Document::Construct(typed(text)?),
        "torus" => Document::Torus(typed(text)?),
        "ce-algebra" => Document::CeAlgebra(typed(text)?),
        other => bail!(
            "schema error at kind: unknown kind {other:?} (expected one of {})",
            KINDS.join(", ")
        ),
    };
    if doc.version() != VERSION {
        bail!(
            "schema error at version: unsupported version {} (expected {VERSION})",
            doc.version()
        );
    }
    Ok(doc)
}

/// Resolves `corpus:NAME` or reads a file. With `IWASAWA_CORPUS_DIR` set,
/// `corpus:NAME` prefers `$IWASAWA_CORPUS_DIR/NAME.json` when it exists.
pub fn load_input(source: &str) -> Result<Document> {
    if let Some(name) = source.strip_prefix("corpus:") {
        if let Some(dir) = std::env::var_os(CORPUS_DIR_VAR) {
            let path = Path::new(&dir).join(format!("{name}.json"));
            if path.exists() {
                return load_file(&path);
            }
        }
        return corpus_document(name).ok_or_else(|| anyhow!("unknown corpus entry {name:?}"));
    }
    load_file(Path::new(source))
}

fn load_file(path: &Path) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_document(&text).with_context(|| format!("in {}", path.display()))
}

fn lattice(rows: &[Vec<Q>], dim: usize, at: &str) -> Result<ZLattice> {
    let gens: Vec<Vec<Rational>> = rows.iter().map(|r| unq(r)).collect();
    ZLattice::from_generators(dim, &gens).with_context(|| format!("at {at}"))
}

fn k_elem(f: QuadField, p: &[Q; 2]) -> QuadElem {
    f.elem(p[0].0.clone(), p[1].0.clone())
}

impl HeisenbergDoc {
    pub fn points(&self) -> Vec<HeisPoint> {
        let f = self.d.0;
        self.generators
            .iter()
            .map(|g| {
                HeisPoint::new(k_elem(f, &g.a), k_elem(f, &g.b), k_elem(f, &g.c))
                    .expect("one field")
            })
            .collect()
    }
}

impl ConstructDoc {
    pub fn parts(&self) -> Result<(ZLattice, ZLattice, QuadField)> {
        Ok((
            lattice(&self.delta, 4, "delta")?,
            lattice(&self.gamma, 2, "gamma")?,
            self.d.0,
        ))
    }
}

impl TorusDoc {
    pub fn torus(&self) -> Result<TorusJ> {
        match (&self.klattice, &self.d, &self.field, &self.j) {
            (Some(rows), Some(d), None, None) => {
                let dim = rows.first().map_or(0, |r| r.len());
                let l = lattice(rows, dim, "klattice")?;
                torus_from_klattice(&l, d.0).context("at klattice")
            }
            (None, None, Some(fd), Some(j)) => {
                let f = RealAlgField::new(
                    unq(&fd.minpoly),
                    fd.interval[0].0.clone(),
                    fd.interval[1].0.clone(),
                )
                .context("at field")?;
                let mut m = Vec::with_capacity(j.len());
                for (r, row) in j.iter().enumerate() {
                    let mut out = Vec::with_capacity(row.len());
                    for (c, x) in row.iter().enumerate() {
                        out.push(f.elem(unq(x)).with_context(|| format!("at J[{r}][{c}]"))?);
                    }
                    m.push(out);
                }
                TorusJ::new(m).context("at J")
            }
            _ => bail!("schema error: a torus needs either `klattice` and `d`, or `field` and `J`"),
        }
    }
}

impl CeAlgebraDoc {
    pub fn algebra(&self) -> Result<CEAlgebra> {
        let spec = CEAlgebraSpec {
            generators: self.generators.clone(),
            d: self.d.clone(),
        };
        CEAlgebra::from_spec(&spec).context("in ce-algebra")
    }
}

fn point_doc(p: &HeisPoint) -> PointDoc {
    let pr = |x: &QuadElem| [Q(x.a.clone()), Q(x.b.clone())];
    PointDoc {
        a: pr(&p.a),
        b: pr(&p.b),
        c: pr(&p.c),
    }
}

fn rows(l: &ZLattice) -> Vec<Vec<Q>> {
    l.basis().iter().map(|v| qs(v)).collect()
}

fn klattice_document(lattice: &ZLattice, field: QuadField) -> Document {
    Document::Torus(TorusDoc {
        kind: KINDS[2].into(),
        version: VERSION,
        d: Some(Disc(field)),
        klattice: Some(rows(lattice)),
        field: None,
        j: None,
    })
}

/// A K-lattice document when the torus has one, otherwise the J-model.
pub fn torus_document(t: &TorusJ) -> Document {
    if let Some(b) = t.backing() {
        return klattice_document(&b.lattice, b.field);
    }
    let f = t.field();
    let (lo, hi) = f.interval();
    Document::Torus(TorusDoc {
        kind: KINDS[2].into(),
        version: VERSION,
        d: None,
        klattice: None,
        field: Some(RealFieldDoc {
            minpoly: qs(f.minpoly()),
            interval: [Q(lo.clone()), Q(hi.clone())],
        }),
        j: Some(
            t.j()
                .iter()
                .map(|r| r.iter().map(|x| qs(x.coeffs())).collect())
                .collect(),
        ),
    })
}

pub fn corpus_document(name: &str) -> Option<Document> {
    Some(match corpus::entry(name)? {
        CorpusEntry::Lattice(gens) => Document::Heisenberg(HeisenbergDoc {
            kind: KINDS[0].into(),
            version: VERSION,
            d: Disc(gens[0].field()),
            generators: gens.iter().map(point_doc).collect(),
        }),
        CorpusEntry::Construct {
            delta,
            gamma,
            field,
        } => Document::Construct(ConstructDoc {
            kind: KINDS[1].into(),
            version: VERSION,
            d: Disc(field),
            delta: rows(&delta),
            gamma: rows(&gamma),
        }),
        CorpusEntry::KTorus { lattice, field } => klattice_document(&lattice, field),
        CorpusEntry::JTorus(t) => torus_document(&t),
        CorpusEntry::Algebra(alg) => {
            let spec = alg.to_spec();
            Document::CeAlgebra(CeAlgebraDoc {
                kind: KINDS[3].into(),
                version: VERSION,
                generators: spec.generators,
                d: spec.d,
            })
        }
    })
}
