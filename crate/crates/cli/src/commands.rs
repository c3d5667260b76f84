//! The command verbs. Each builds its structure from the loaded document,
//! calls into the core library and assembles a report.

use std::fmt;

use kapranov::coalgebra::{Coderivation, Variant};
use kapranov::linfty::{
    check_linfty, contraction_from_cohomology, find_splitting, h_injectivity, is_homotopy_abelian, transfer,
    verify_certificate, Dgla, LInftyStructure, SplittingOutcome, Status, WitnessCheck,
};
use kapranov::prelie::{
    kapranov, kapranov_splitting, verify_compact_recursion_with, KapranovTower, PreLieAlgebra, TowerVariant,
};
use kapranov::scalar::{format_scalar, sign};
use kapranov::{GradedSpace, SymMap};
use serde_json::{json, Value};

use crate::document::{linfty_document, AlgebraDocument, Algebra, Input, InputError};
use crate::report::{self, names, Report, EXHAUSTIVE, TRUNCATED};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Kapranov,
    CheckLinfty,
    Splitting,
    CeCohomology,
    MinimalModel,
    HomotopyAbelian,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Kapranov => "kapranov",
            Command::CheckLinfty => "check-linfty",
            Command::Splitting => "splitting",
            Command::CeCohomology => "ce-cohomology",
            Command::MinimalModel => "minimal-model",
            Command::HomotopyAbelian => "homotopy-abelian",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub max_arity: usize,
    pub variant: TowerVariant,
}

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Usage(String),
    Module(kapranov::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => e.fmt(f),
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Module(e) => e.fmt(f),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<kapranov::Error> for CliError {
    fn from(e: kapranov::Error) -> Self {
        CliError::Module(e)
    }
}

pub struct Outcome {
    pub report: Report,
    /// Set when the run passed or was supported.
    pub success: bool,
    /// The tower as a linfty document, for `kapranov`.
    pub tower: Option<AlgebraDocument>,
}

struct Body {
    verdict: String,
    success: bool,
    semantics: &'static str,
    details: Value,
}

fn pass(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

fn status(ok: bool, n: usize) -> String {
    if ok {
        format!("SUPPORTED({n})")
    } else {
        "REFUTED".to_string()
    }
}

fn variant_name(v: TowerVariant) -> &'static str {
    match v {
        TowerVariant::Plain => "plain",
        TowerVariant::Alternating => "alternating",
    }
}

fn derivation_of(l: &PreLieAlgebra) -> SymMap {
    l.differential().cloned().unwrap_or_else(|| SymMap::on(l.space(), 1, 1))
}

/// The L∞[1] structure a command acts on: the Kapranov tower for pre-Lie
/// documents, the décalage for dg Lie algebras, the document itself for
/// linfty documents. Always truncated at `n`.
struct Structure {
    q: Coderivation,
    prelie: Option<(PreLieAlgebra, KapranovTower)>,
}

fn structure(input: &Input, n: usize, variant: TowerVariant) -> Result<Structure, CliError> {
    Ok(match &input.algebra {
        Algebra::PreLie(l) => {
            let t = kapranov(l, &derivation_of(l), n, variant)?;
            Structure { q: t.coder.clone(), prelie: Some((l.clone(), t)) }
        }
        Algebra::Dgla(l) => Structure { q: LInftyStructure::from_dgla(l, n)?.q().clone(), prelie: None },
        Algebra::Linfty(q) => Structure { q: q.with_max_arity(n), prelie: None },
    })
}

pub fn run(cmd: Command, input: &Input, opts: &Options) -> Result<Outcome, CliError> {
    let n = opts.max_arity;
    if n == 0 {
        return Err(CliError::Usage("--max-arity must be at least 1".into()));
    }
    let mut tower = None;
    let body = match cmd {
        Command::Validate => validate(input, n)?,
        Command::Kapranov => {
            let Algebra::PreLie(l) = &input.algebra else {
                return Err(CliError::Usage(format!("kapranov needs a prelie document, got {}", input.kind)));
            };
            let (b, doc) = kapranov_cmd(l, n, opts.variant)?;
            tower = Some(doc);
            b
        }
        Command::CheckLinfty => {
            let s = structure(input, n, opts.variant)?;
            let r = check_linfty(&s.q, n)?;
            let failing: Vec<usize> = r.failures.iter().map(|f| f.arity()).collect();
            Body {
                verdict: pass(r.passed()),
                success: r.passed(),
                semantics: EXHAUSTIVE,
                details: json!({
                    "structure": report::coder(&s.q),
                    "failing_arities": failing,
                    "lowest_failing_arity": r.lowest_failing_arity(),
                }),
            }
        }
        Command::Splitting => splitting_cmd(&structure(input, n, opts.variant)?, n)?,
        Command::CeCohomology => {
            let s = structure(input, n, opts.variant)?;
            let r = h_injectivity(&s.q, n)?;
            Body {
                verdict: status(r.injective(), n),
                success: r.injective(),
                semantics: TRUNCATED,
                details: json!({
                    "reduced": report::dims(&r.reduced),
                    "nonreduced": report::dims(&r.nonreduced),
                    "kernel": report::dims(&r.kernel),
                    "injective": r.injective(),
                }),
            }
        }
        Command::MinimalModel => {
            let s = structure(input, n, opts.variant)?;
            let c = contraction_from_cohomology(s.q.coefficient(1))?;
            let t = transfer(&s.q, &c, n)?;
            let h = c.cohomology.clone();
            Body {
                verdict: status(t.massey_vanishing(), n),
                success: t.massey_vanishing(),
                semantics: TRUNCATED,
                details: json!({
                    "cohomology": generators(&h),
                    "minimal_model": report::coder(t.minimal.q()),
                    "nonvanishing_arities": t.nonvanishing_arities(),
                    "massey_vanishing": t.massey_vanishing(),
                }),
            }
        }
        Command::HomotopyAbelian => homotopy_abelian(&structure(input, n, opts.variant)?, n)?,
        Command::Oracle => oracle(input, n, opts.variant)?,
    };
    let report = Report {
        command: cmd.name().to_string(),
        kind: input.kind.to_string(),
        input_sha256: input.digest.clone(),
        max_arity: n,
        semantics: body.semantics.to_string(),
        verdict: body.verdict,
        details: body.details,
        timing_ms: None,
    };
    Ok(Outcome { report, success: body.success, tower })
}

fn generators(sp: &GradedSpace) -> Value {
    Value::Array((0..sp.dim()).map(|g| json!({"name": sp.name(g), "degree": sp.degree(g)})).collect())
}

fn validate(input: &Input, n: usize) -> Result<Body, CliError> {
    let (ok, details) = match &input.algebra {
        Algebra::PreLie(l) => {
            let r = l.check_prelie();
            let sp = l.space();
            let triples = |v: &[(usize, usize, usize)]| -> Vec<Vec<String>> {
                v.iter().map(|&(x, y, z)| names(sp, &[x, y, z])).collect()
            };
            let mut d = json!({
                "associator_failures": triples(&r.associator_failures),
                "jacobi_failures": triples(&r.jacobi_failures),
                "prelie": r.passed(),
            });
            let mut ok = r.passed();
            if let (true, Some(dd)) = (r.passed(), l.differential()) {
                let dr = l.check_derivation(dd)?;
                let pairs: Vec<Vec<String>> = dr.bracket_failures.iter().map(|&(x, y)| names(sp, &[x, y])).collect();
                d["differential"] = json!({
                    "bracket_derivation": dr.is_bracket_derivation(),
                    "bracket_failures": pairs,
                    "squares_to_zero": dr.squares_to_zero,
                    "product_derivation": dr.is_product_derivation(),
                });
                ok &= dr.passed();
            }
            (ok, d)
        }
        Algebra::Dgla(l) => {
            let r = l.check_axioms();
            let sp = l.space();
            (
                r.passed(),
                json!({
                    "d_squared_failures": r.d_squared.iter().map(|&x| sp.name(x)).collect::<Vec<_>>(),
                    "leibniz_failures": r.leibniz.iter().map(|&(x, y)| names(sp, &[x, y])).collect::<Vec<_>>(),
                    "jacobi_failures": r.jacobi.iter().map(|&(x, y, z)| names(sp, &[x, y, z])).collect::<Vec<_>>(),
                }),
            )
        }
        Algebra::Linfty(q) => {
            let r = check_linfty(q, n)?;
            (
                r.passed(),
                json!({
                    "failing_arities": r.failures.iter().map(|f| f.arity()).collect::<Vec<_>>(),
                    "lowest_failing_arity": r.lowest_failing_arity(),
                }),
            )
        }
    };
    Ok(Body { verdict: pass(ok), success: ok, semantics: EXHAUSTIVE, details })
}

fn kapranov_cmd(l: &PreLieAlgebra, n: usize, variant: TowerVariant) -> Result<(Body, AlgebraDocument), CliError> {
    let d = derivation_of(l);
    let t = kapranov(l, &d, n, variant)?;
    let rec = verify_compact_recursion_with(l, &t, variant)?;
    let sp = l.space();
    let q = check_linfty(&t.coder, n)?;
    let details = json!({
        "variant": variant_name(variant),
        "tower": report::coder(&t.coder),
        "compact_recursion": {
            "passed": rec.passed(),
            "failures": rec.failures.iter().map(|&(x, a)| json!({"generator": sp.name(x), "arity": a})).collect::<Vec<_>>(),
        },
        "square_zero_up_to_n": q.passed(),
    });
    let body = Body { verdict: pass(rec.passed()), success: rec.passed(), semantics: EXHAUSTIVE, details };
    Ok((body, linfty_document(&t.coder)))
}

fn witness_check(sp: &GradedSpace, c: &WitnessCheck) -> Value {
    json!({
        "passed": c.passed(),
        "ev1_failures": c.ev1_failures.iter().map(|&v| sp.name(v)).collect::<Vec<_>>(),
        "dg_failures": c.dg_failures.iter().map(|&(v, a)| json!({"generator": sp.name(v), "arity": a})).collect::<Vec<_>>(),
    })
}

/// The `σ ± ∇` witness of a Kapranov tower, or the reason it does not
/// apply.
fn kapranov_witness(s: &Structure) -> Option<Value> {
    let (l, t) = s.prelie.as_ref()?;
    let label = match t.variant {
        TowerVariant::Plain => "sigma_plus_nabla",
        TowerVariant::Alternating => "sigma_minus_nabla",
    };
    Some(match kapranov_splitting(l, t) {
        Ok(w) => json!({"form": label, "check": witness_check(l.space(), &w.check)}),
        Err(e) => json!({"form": label, "error": e.to_string()}),
    })
}

fn splitting_cmd(s: &Structure, n: usize) -> Result<Body, CliError> {
    let sp = s.q.space().clone();
    let out = find_splitting(&s.q, n)?;
    let mut details = match &out {
        SplittingOutcome::Feasible(w) => json!({
            "feasible": true,
            "witness": w.maps.iter().enumerate().map(|(v, m)| json!({"generator": sp.name(v), "map": report::coder(m)})).collect::<Vec<_>>(),
        }),
        SplittingOutcome::Infeasible(c) => json!({
            "feasible": false,
            "certificate": {
                "lowest_arity": c.lowest_arity(),
                "verified": verify_certificate(&s.q, c)?,
                "entries": c.entries.iter().map(|(v, m, g, x)| json!({
                    "generator": sp.name(*v),
                    "monomial": names(&sp, m),
                    "output": sp.name(*g),
                    "coeff": format_scalar(x),
                })).collect::<Vec<_>>(),
            },
        }),
    };
    if let Some(w) = kapranov_witness(s) {
        details["kapranov_witness"] = w;
    }
    Ok(Body { verdict: status(out.is_feasible(), n), success: out.is_feasible(), semantics: TRUNCATED, details })
}

fn homotopy_abelian(s: &Structure, n: usize) -> Result<Body, CliError> {
    let v = is_homotopy_abelian(&s.q, n)?;
    let supported = v.status == Status::Supported(n);
    let cert_arity = match &v.splitting {
        SplittingOutcome::Infeasible(c) => Some(c.lowest_arity()),
        SplittingOutcome::Feasible(_) => None,
    };
    let massey = v.transfer.nonvanishing_arities();
    let refuted_at = cert_arity.into_iter().chain(massey.first().copied()).min();
    let mut details = json!({
        "splitting": {"feasible": v.splitting.is_feasible(), "certificate_arity": cert_arity},
        "ce_injectivity": {"injective": v.injectivity.injective(), "kernel": report::dims(&v.injectivity.kernel)},
        "minimal_model": {"massey_vanishing": v.transfer.massey_vanishing(), "nonvanishing_arities": massey},
        "consistent": v.consistent,
        "refuted_at_arity": refuted_at,
    });
    if let Some(w) = kapranov_witness(s) {
        details["kapranov_witness"] = w;
    }
    Ok(Body { verdict: status(supported, n), success: supported, semantics: TRUNCATED, details })
}

/// Recomputes `Q•Q` by composing the coalgebra actions directly.
fn square_by_composition(q: &Coderivation, n: usize) -> Result<Coderivation, CliError> {
    let q = q.with_max_arity(n);
    Ok(Coderivation::corestrict(q.space(), Variant::Reduced, 2, n, |m| q.expand(&q.expand_tuple(m)?))?)
}

fn decalage_oracle(l: &Dgla, n: usize) -> Result<bool, CliError> {
    let q = LInftyStructure::from_dgla(l, n.max(2))?;
    let q = q.q();
    let sp = l.space();
    for x in 0..sp.dim() {
        let want = l.differential().eval(&[x])?.scaled(&sign(1));
        if q.coefficient(1).eval(&[x])? != want {
            return Ok(false);
        }
        for y in 0..sp.dim() {
            let want = l.bracket().eval(&[x, y])?.scaled(&sign(sp.degree(x)));
            if q.coefficient(2).eval(&[x, y])? != want {
                return Ok(false);
            }
        }
    }
    Ok((3..=q.max_arity()).all(|k| q.coefficient(k).is_zero()))
}

fn oracle(input: &Input, n: usize, variant: TowerVariant) -> Result<Body, CliError> {
    let s = structure(input, n, variant)?;
    let mut checks = serde_json::Map::new();
    let direct = s.q.with_max_arity(n).nr_product(&s.q.with_max_arity(n))?;
    let composed = square_by_composition(&s.q, n)?;
    let agree = (1..=n).all(|k| direct.coefficient(k) == composed.coefficient(k));
    checks.insert("nr_product_vs_composition".into(), json!(agree));
    if let Algebra::Dgla(l) = &input.algebra {
        checks.insert("decalage_formula".into(), json!(decalage_oracle(l, n)?));
    }
    if let Some((l, t)) = &s.prelie {
        let other = match variant {
            TowerVariant::Plain => TowerVariant::Alternating,
            TowerVariant::Alternating => TowerVariant::Plain,
        };
        let u = kapranov(l, &t.derivation, n, other)?;
        checks.insert("alternating_is_sign_twist".into(), json!(u.coder == t.coder.alternate_signs()));
        checks.insert("compact_recursion".into(), json!(verify_compact_recursion_with(l, t, variant)?.passed()));
    }
    if check_linfty(&s.q, n)?.passed() {
        checks.insert("three_checks_agree".into(), json!(is_homotopy_abelian(&s.q, n)?.consistent));
    }
    let ok = checks.values().all(|v| v == &Value::Bool(true));
    Ok(Body { verdict: pass(ok), success: ok, semantics: EXHAUSTIVE, details: json!({"checks": checks}) })
}
