//! JSON algebra documents: parsing, validation against the declared
//! generators, and conversion to and from the core types.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use kapranov::coalgebra::{Coderivation, Variant};
use kapranov::linfty::Dgla;
use kapranov::maps::{Multilinear, Symmetry};
use kapranov::prelie::{Chirality, PreLieAlgebra};
use kapranov::scalar::{format_scalar, parse_scalar};
use kapranov::{AltMap, GradedSpace, Scalar, SymMap, TensorMap, Vector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "prelie-left")]
    PreLieLeft,
    #[serde(rename = "prelie-right")]
    PreLieRight,
    #[serde(rename = "dgla")]
    Dgla,
    #[serde(rename = "linfty")]
    Linfty,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::PreLieLeft => "prelie-left",
            Kind::PreLieRight => "prelie-right",
            Kind::Dgla => "dgla",
            Kind::Linfty => "linfty",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constant {
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub gen: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub input: String,
    pub output: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorEntry {
    pub arity: usize,
    pub terms: Vec<Constant>,
}

/// On-disk form. For `dgla` documents `product` lists the bracket; for
/// `linfty` documents the structure is given by `taylor` and every arity
/// not listed is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub kind: Kind,
    pub generators: Vec<GeneratorDecl>,
    #[serde(default, alias = "bracket", skip_serializing_if = "Vec::is_empty")]
    pub product: Vec<Constant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub taylor: Vec<TaylorEntry>,
}

#[derive(Debug)]
pub enum InputError {
    Io(String),
    Parse(String),
    Semantic(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(s) => write!(f, "cannot read input: {s}"),
            InputError::Parse(s) => write!(f, "parse error: {s}"),
            InputError::Semantic(s) => write!(f, "semantic error: {s}"),
        }
    }
}

/// A loaded and checked document.
#[derive(Debug, Clone)]
pub enum Algebra {
    PreLie(PreLieAlgebra),
    Dgla(Dgla),
    Linfty(Coderivation),
}

#[derive(Debug, Clone)]
pub struct Input {
    pub digest: String,
    pub kind: Kind,
    pub algebra: Algebra,
}

pub const BUILTINS: [(&str, &str); 3] = [
    ("fixture", include_str!("../../../fixtures/w4_theta.json")),
    ("w4-theta", include_str!("../../../fixtures/w4_theta.json")),
    ("sl2", include_str!("../../../fixtures/sl2.json")),
];

/// Reads a document from a path, or one of the shipped fixtures by name
/// when no such file exists.
pub fn load(source: &str) -> Result<Input, InputError> {
    let bytes = match std::fs::read(source) {
        Ok(b) => b,
        Err(e) => match BUILTINS.iter().find(|(n, _)| *n == source) {
            Some((_, text)) => text.as_bytes().to_vec(),
            None => return Err(InputError::Io(format!("{source}: {e}"))),
        },
    };
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = std::str::from_utf8(&bytes).map_err(|e| InputError::Parse(format!("input is not UTF-8: {e}")))?;
    let doc: AlgebraDocument = serde_json::from_str(text)
        .map_err(|e| InputError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let algebra = build(&doc)?;
    Ok(Input { digest, kind: doc.kind, algebra })
}

struct Resolver {
    space: Arc<GradedSpace>,
    index: HashMap<String, usize>,
}

impl Resolver {
    fn new(doc: &AlgebraDocument) -> Result<Self, InputError> {
        let mut index = HashMap::new();
        for (i, g) in doc.generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(InputError::Semantic(format!("generator {i} has an empty name")));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(InputError::Semantic(format!("generator {:?} declared twice", g.name)));
            }
        }
        let space = GradedSpace::new(doc.generators.iter().map(|g| (g.name.clone(), g.degree)))
            .map_err(|e| InputError::Semantic(e.to_string()))?
            .arc();
        Ok(Self { space, index })
    }

    fn gen(&self, name: &str, place: &str) -> Result<usize, InputError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| InputError::Semantic(format!("undeclared generator {name:?} in {place}")))
    }

    fn coeff(&self, s: &str, place: &str) -> Result<Scalar, InputError> {
        parse_scalar(s).map_err(|_| InputError::Parse(format!("invalid coefficient {s:?} in {place}")))
    }

    fn fill<S: Symmetry>(&self, map: &mut Multilinear<S>, entries: &[Constant], what: &str) -> Result<(), InputError> {
        for (k, c) in entries.iter().enumerate() {
            let place = format!("{what} entry {k}");
            if c.inputs.len() != map.arity() {
                return Err(InputError::Semantic(format!(
                    "{place} has {} inputs, expected {}",
                    c.inputs.len(),
                    map.arity()
                )));
            }
            let ins = c.inputs.iter().map(|n| self.gen(n, &place)).collect::<Result<Vec<_>, _>>()?;
            let out = self.gen(&c.output, &place)?;
            let x = self.coeff(&c.coeff, &place)?;
            map.add(&ins, &Vector::term(out, x))
                .map_err(|e| InputError::Semantic(format!("{place} ({} -> {}): {e}", c.inputs.join(","), c.output)))?;
        }
        Ok(())
    }

    fn differential(&self, entries: &[DifferentialEntry]) -> Result<Option<SymMap>, InputError> {
        if entries.is_empty() {
            return Ok(None);
        }
        let mut d = SymMap::on(&self.space, 1, 1);
        for (k, e) in entries.iter().enumerate() {
            let place = format!("differential entry {k}");
            let x = self.gen(&e.input, &place)?;
            let mut v = Vector::zero();
            for t in &e.output {
                v.add_term(self.gen(&t.gen, &place)?, self.coeff(&t.coeff, &place)?);
            }
            d.add(&[x], &v).map_err(|err| InputError::Semantic(format!("{place} ({}): {err}", e.input)))?;
        }
        Ok(Some(d))
    }
}

fn build(doc: &AlgebraDocument) -> Result<Algebra, InputError> {
    let r = Resolver::new(doc)?;
    let sp = r.space.clone();
    let semantic = |e: kapranov::Error| InputError::Semantic(e.to_string());
    match doc.kind {
        Kind::PreLieLeft | Kind::PreLieRight => {
            if !doc.taylor.is_empty() {
                return Err(InputError::Semantic("taylor coefficients are only allowed in linfty documents".into()));
            }
            let mut p = TensorMap::on(&sp, 2, 0);
            r.fill(&mut p, &doc.product, "product")?;
            let chirality = if doc.kind == Kind::PreLieLeft { Chirality::Left } else { Chirality::Right };
            let d = r.differential(&doc.differential)?;
            Ok(Algebra::PreLie(PreLieAlgebra::new(&sp, chirality, p, d).map_err(semantic)?))
        }
        Kind::Dgla => {
            if !doc.taylor.is_empty() {
                return Err(InputError::Semantic("taylor coefficients are only allowed in linfty documents".into()));
            }
            let mut b = AltMap::on(&sp, 2, 0);
            r.fill(&mut b, &doc.product, "bracket")?;
            let d = r.differential(&doc.differential)?.unwrap_or_else(|| SymMap::on(&sp, 1, 1));
            Ok(Algebra::Dgla(Dgla::new(&sp, d, b).map_err(semantic)?))
        }
        Kind::Linfty => {
            if !doc.product.is_empty() || !doc.differential.is_empty() {
                return Err(InputError::Semantic("linfty documents give their structure in taylor".into()));
            }
            let top = doc.taylor.iter().map(|t| t.arity).max().unwrap_or(1);
            let mut q = Coderivation::zero(&sp, Variant::Reduced, 1, top);
            for t in &doc.taylor {
                if t.arity == 0 {
                    return Err(InputError::Semantic("taylor arity 0 is not allowed for a reduced structure".into()));
                }
                let mut m = q.coefficient(t.arity).clone();
                r.fill(&mut m, &t.terms, &format!("taylor arity {}", t.arity))?;
                q.set_coefficient(m).map_err(semantic)?;
            }
            Ok(Algebra::Linfty(q))
        }
    }
}

/// Structure constants of a map, one per nonzero coefficient, in canonical
/// order.
pub fn constants<S: Symmetry>(map: &Multilinear<S>) -> Vec<Constant> {
    let (src, tgt) = (map.source(), map.target());
    let mut out = Vec::new();
    for (m, v) in map.entries() {
        for (g, c) in v.iter() {
            out.push(Constant {
                inputs: m.iter().map(|&i| src.name(i).to_string()).collect(),
                output: tgt.name(g).to_string(),
                coeff: format_scalar(c),
            });
        }
    }
    out
}

fn generators(sp: &GradedSpace) -> Vec<GeneratorDecl> {
    (0..sp.dim()).map(|i| GeneratorDecl { name: sp.name(i).to_string(), degree: sp.degree(i) }).collect()
}

fn differential_entries(d: &SymMap) -> Vec<DifferentialEntry> {
    let sp = d.source();
    d.entries()
        .map(|(m, v)| DifferentialEntry {
            input: sp.name(m[0]).to_string(),
            output: v.iter().map(|(g, c)| Term { gen: sp.name(g).to_string(), coeff: format_scalar(c) }).collect(),
        })
        .collect()
}

pub fn linfty_document(q: &Coderivation) -> AlgebraDocument {
    let taylor = (1..=q.max_arity())
        .filter(|&n| !q.coefficient(n).is_zero())
        .map(|n| TaylorEntry { arity: n, terms: constants(q.coefficient(n)) })
        .collect();
    AlgebraDocument {
        kind: Kind::Linfty,
        generators: generators(q.space()),
        product: Vec::new(),
        differential: Vec::new(),
        taylor,
    }
}

pub fn prelie_document(l: &PreLieAlgebra) -> AlgebraDocument {
    AlgebraDocument {
        kind: if l.chirality() == Chirality::Left { Kind::PreLieLeft } else { Kind::PreLieRight },
        generators: generators(l.space()),
        product: constants(l.product()),
        differential: l.differential().map(differential_entries).unwrap_or_default(),
        taylor: Vec::new(),
    }
}

pub fn dgla_document(l: &Dgla) -> AlgebraDocument {
    AlgebraDocument {
        kind: Kind::Dgla,
        generators: generators(l.space()),
        product: constants(l.bracket()),
        differential: differential_entries(l.differential()),
        taylor: Vec::new(),
    }
}
