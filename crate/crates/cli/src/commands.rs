//! The subcommands as pure functions from documents to reports.

use std::time::Instant;

use higgs_core::cones::{brute_ray_set, weight_cone, RayEngine, ORACLE_MAX_DIM};
use higgs_core::jordan_holder::{decompose_with, factor_is_stable, reassemble, FactorLabel};
use higgs_core::scalar::{dot_int, format_ratio};
use higgs_core::stability::{prepare, verdict_simplified_resolved, Alpha, Certificate, Status, Verdict};
use higgs_core::sweep::{equivalence_sweep, InstanceResult, SweepReport};
use higgs_core::{bundle::degree_coefficients, Error, Group, HiggsPair, HiggsPattern, Rat};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::doc::{alpha_string, flag_from, flag_to_json, support_to_json, InputError, PairDocument, SweepDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

/// A report and the exit code that goes with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, exit: EXIT_OK }
    }

    /// An input error report for `command`.
    pub fn input_error(command: &str, err: &InputError) -> Outcome {
        Outcome {
            report: json!({ "command": command, "diagnostics": [err.to_json()] }),
            exit: EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    General,
    Simplified,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Simplified => "simplified",
            Mode::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        [Mode::General, Mode::Simplified, Mode::Both].into_iter().find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub alpha: Option<Alpha>,
    pub strict_sections: bool,
    pub timing: bool,
    pub budget: Option<u64>,
}

pub fn certificate_json(cert: &Certificate, alpha: Rat) -> Value {
    json!({
        "kind": cert.kind.name(),
        "flag": flag_to_json(&cert.flag),
        "ray": cert.lambda,
        "value": format_ratio(&cert.value),
        "alpha": format_ratio(&alpha),
    })
}

fn verdict_json(v: &Verdict, alpha: Rat) -> Value {
    json!({
        "verdict": v.status.name(),
        "certificate": v.certificate.as_ref().map(|c| certificate_json(c, alpha)),
    })
}

fn engine_json(mode: &str, counts: Value, elapsed: Option<u128>) -> Value {
    let mut engine = Map::new();
    engine.insert("mode".into(), json!(mode));
    engine.insert("instance_counts".into(), counts);
    if let Some(ms) = elapsed {
        engine.insert("elapsed_ms".into(), json!(ms));
    }
    Value::Object(engine)
}

fn internal(command: &str, err: &Error) -> Outcome {
    Outcome {
        report: json!({ "command": command, "diagnostics": [{ "field": "", "message": err.to_string() }] }),
        exit: EXIT_INTERNAL,
    }
}

fn resolve_input(doc: &PairDocument, opts: &Options) -> Result<(HiggsPair, Alpha, Rat), InputError> {
    let (pair, doc_alpha) = doc.to_pair(opts.strict_sections)?;
    let alpha = opts.alpha.unwrap_or(doc_alpha);
    let a = alpha.resolve(&pair);
    if !num_traits::Zero::is_zero(&a) && !pair.group.admits_alpha() {
        return Err(InputError::new("alpha", Error::NonzeroAlphaUnsupported.to_string()));
    }
    Ok((pair, alpha, a))
}

pub fn cmd_check(doc: &PairDocument, mode: Mode, opts: &Options) -> Outcome {
    let start = Instant::now();
    let (pair, alpha, a) = match resolve_input(doc, opts) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error("check", &e),
    };
    let mut report = Map::new();
    report.insert("command".into(), json!("check"));
    report.insert("input".into(), PairDocument::from_pair(&pair, Some(alpha)).to_json());
    report.insert("alpha".into(), json!(format_ratio(&a)));
    report.insert("mode".into(), json!(mode.name()));

    let mut counts = Map::new();
    let general = if mode != Mode::Simplified {
        let engine = RayEngine::new();
        let prepared = match prepare(&engine, &pair) {
            Ok(p) => p,
            Err(e) => return internal("check", &e),
        };
        counts.insert("flags".into(), json!(prepared.flags.len()));
        counts.insert("cones".into(), json!(engine.len()));
        Some(prepared.verdict(pair.degrees(), a))
    } else {
        None
    };
    let simplified = if mode != Mode::General {
        Some(verdict_simplified_resolved(&pair, a))
    } else {
        None
    };
    if let Some(v) = &general {
        report.insert("general".into(), verdict_json(v, a));
    }
    if let Some(v) = &simplified {
        report.insert("simplified".into(), verdict_json(v, a));
    }
    let main = general.as_ref().or(simplified.as_ref()).expect("at least one checker ran");
    report.insert("verdict".into(), json!(main.status.name()));
    report.insert(
        "certificate".into(),
        main.certificate.as_ref().map_or(Value::Null, |c| certificate_json(c, a)),
    );

    let mut exit = EXIT_OK;
    let mut diagnostics = Vec::new();
    if let (Some(g), Some(s)) = (&general, &simplified) {
        let semistable = g.status.is_semistable() == s.status.is_semistable();
        let stable = (g.status == Status::Stable) == (s.status == Status::Stable);
        report.insert("agreement".into(), json!({ "semistable": semistable, "stable": stable }));
        report.insert(
            "polystable_probe".into(),
            json!({
                "general": g.status.is_polystable(),
                "simplified": s.status.is_polystable(),
                "agree": g.status.is_polystable() == s.status.is_polystable(),
            }),
        );
        if !(semistable && stable) {
            exit = EXIT_INTERNAL;
            diagnostics.push(json!({ "field": "", "message": "general and simplified checkers disagree" }));
        }
    }
    report.insert("diagnostics".into(), Value::Array(diagnostics));
    report.insert(
        "engine".into(),
        engine_json(mode.name(), Value::Object(counts), opts.timing.then(|| start.elapsed().as_millis())),
    );
    Outcome {
        report: Value::Object(report),
        exit,
    }
}

fn instance_json(r: &InstanceResult) -> Value {
    json!({
        "pair": PairDocument::from_pair(&r.pair, Some(Alpha::Value(r.alpha))).to_json(),
        "general": verdict_json(&r.general, r.alpha),
        "simplified": verdict_json(&r.simplified, r.alpha),
    })
}

fn matrix_json(m: &[[u64; 2]; 2]) -> Value {
    json!({
        "both": m[1][1],
        "general_only": m[1][0],
        "simplified_only": m[0][1],
        "neither": m[0][0],
    })
}

fn rate(agree: u64, total: u64) -> Value {
    if total == 0 {
        Value::Null
    } else {
        json!(format_ratio(&Rat::new(agree as i64, total as i64)))
    }
}

pub fn sweep_report_json(report: &SweepReport, spec_doc: &SweepDocument, cones: usize, timing: bool) -> Value {
    let p = &report.polystable;
    let agree_ss = report.semistable[0][0] + report.semistable[1][1];
    let agree_st = report.stable[0][0] + report.stable[1][1];
    json!({
        "command": "sweep",
        "spec": spec_doc.to_json(),
        "instances": report.instances,
        "infeasible_skipped": report.infeasible,
        "agreement": {
            "semistable": matrix_json(&report.semistable),
            "stable": matrix_json(&report.stable),
            "semistable_rate": rate(agree_ss, report.instances),
            "stable_rate": rate(agree_st, report.instances),
        },
        "disagreements": report.disagreements.iter().map(instance_json).collect::<Vec<_>>(),
        "polystable_probe": {
            "both": p.both,
            "neither": p.neither,
            "general_only": p.general_only,
            "simplified_only": p.simplified_only,
            "agreement_rate": rate(p.both + p.neither, p.total()),
            "simplified_polystable_not_general_semistable": p.simplified_polystable_not_semistable,
            "disagreements": p.disagreements.iter().map(instance_json).collect::<Vec<_>>(),
        },
        "engine": engine_json(
            "both",
            json!({ "instances": report.instances, "cones": cones }),
            timing.then_some(report.elapsed_ms),
        ),
    })
}

pub fn cmd_sweep(doc: &SweepDocument, opts: &Options) -> Outcome {
    let spec = match doc.to_spec(opts.budget) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error("sweep", &e),
    };
    let engine = RayEngine::new();
    let report = match equivalence_sweep(&spec, &engine, |_| {}) {
        Ok(r) => r,
        Err(e @ (Error::BudgetExceeded { .. } | Error::InvalidPair(_))) => {
            let field = if matches!(e, Error::BudgetExceeded { .. }) { "budget" } else { "n_max" };
            return Outcome::input_error("sweep", &InputError::new(field, e.to_string()));
        }
        Err(e) => return internal("sweep", &e),
    };
    let mut value = sweep_report_json(&report, doc, engine.len(), opts.timing);
    let failed = !report.fully_agrees() || report.polystable.simplified_polystable_not_semistable > 0;
    let diagnostics: Vec<Value> = if failed {
        vec![json!({ "field": "", "message": "general and simplified checkers disagree" })]
    } else {
        vec![]
    };
    value["diagnostics"] = Value::Array(diagnostics);
    Outcome {
        report: value,
        exit: if failed { EXIT_INTERNAL } else { EXIT_OK },
    }
}

pub fn cmd_rays(doc: &PairDocument, flag_override: Option<&[Vec<usize>]>, opts: &Options) -> Outcome {
    let (pair, alpha, a) = match resolve_input(doc, opts) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error("rays", &e),
    };
    let k = pair.rank();
    let flag = match flag_override.or(doc.flag.as_deref()) {
        None => return Outcome::input_error("rays", &InputError::new("flag", "a flag is required")),
        Some(pieces) => match flag_from(pieces, k, "flag") {
            Ok(f) => f,
            Err(e) => return Outcome::input_error("rays", &e),
        },
    };
    if let Err(e) = flag.validate(k, pair.pairing()) {
        return Outcome::input_error("rays", &InputError::new("flag", e.to_string()));
    }
    let cone = weight_cone(&pair, &flag);
    let engine = RayEngine::new();
    let rays = match engine.rays(&cone) {
        Ok(r) => r,
        Err(e) => return internal("rays", &e),
    };
    let d = degree_coefficients(pair.degrees(), &flag, a);
    let values = |vs: &[Vec<i64>]| -> Vec<Value> {
        vs.iter()
            .map(|v| json!({ "ray": v, "value": format_ratio(&dot_int(&d, v)) }))
            .collect()
    };
    let mut exit = EXIT_OK;
    let oracle = if cone.dim <= ORACLE_MAX_DIM {
        match brute_ray_set(&cone) {
            Ok(o) => {
                let agrees = o == *rays;
                if !agrees {
                    exit = EXIT_INTERNAL;
                }
                json!({ "rays": o.rays, "lineality": o.lineality, "agrees": agrees })
            }
            Err(e) => return internal("rays", &e),
        }
    } else {
        json!({ "skipped": format!("dimension {} exceeds {ORACLE_MAX_DIM}", cone.dim) })
    };
    Outcome {
        report: json!({
            "command": "rays",
            "input": PairDocument::from_pair(&pair, Some(alpha)).to_json(),
            "alpha": format_ratio(&a),
            "flag": flag_to_json(&flag),
            "cone": { "dim": cone.dim, "inequalities": cone.ineqs, "equalities": cone.eqs },
            "lineality": rays.lineality,
            "rays": rays.rays,
            "degree_values": values(&rays.rays),
            "lineality_values": values(&rays.lineality),
            "oracle": oracle,
            "diagnostics": if exit == EXIT_OK { json!([]) } else { json!([{ "field": "", "message": "ray enumeration disagrees with the oracle" }]) },
        }),
        exit,
    }
}

/// Complex dimension of the complexified group.
pub fn complex_group_dim(group: Group, n: u64) -> Result<u64, Error> {
    match group {
        Group::Sp2nR | Group::Sp2nC => Ok(n * (2 * n + 1)),
        Group::SLnC => Ok(n * n - 1),
        Group::GLnR => Err(Error::NonSemisimpleGroup { group: group.name().into() }),
    }
}

/// `χ = d + r(1 − g)` for a bundle of rank `r` and degree `d`.
pub fn euler_char(rank: i64, degree: i64, genus: i64) -> i64 {
    degree + rank * (1 - genus)
}

pub fn expected_dimension(group: Group, n: u64, genus: u32) -> Result<u64, Error> {
    let dim = complex_group_dim(group, n)?;
    if genus < 2 {
        return Err(Error::GenusTooSmall(genus));
    }
    Ok((u64::from(genus) - 1) * dim)
}

pub fn cmd_dim(group: &str, n: u64, genus: u32, euler: Option<(i64, i64)>) -> Outcome {
    let g = match crate::doc::parse_group(group, "group") {
        Ok(g) => g,
        Err(e) => return Outcome::input_error("dim", &e),
    };
    if n == 0 {
        return Outcome::input_error("dim", &InputError::new("n", "must be at least 1"));
    }
    let dimension = match expected_dimension(g, n, genus) {
        Ok(d) => d,
        Err(e) => {
            let field = if matches!(e, Error::GenusTooSmall(_)) { "genus" } else { "group" };
            let mut message = e.to_string();
            if g == Group::GLnR {
                message.push_str("; the formula (g-1) dim G needs a semisimple group");
            }
            return Outcome::input_error("dim", &InputError::new(field, message));
        }
    };
    let mut report = json!({
        "command": "dim",
        "group": g.name(),
        "n": n,
        "genus": genus,
        "complex_group_dim": complex_group_dim(g, n).expect("checked above"),
        "dimension": dimension,
        "diagnostics": [],
    });
    if let Some((rank, degree)) = euler {
        report["euler_char"] = json!({
            "rank": rank,
            "degree": degree,
            "genus": genus,
            "value": euler_char(rank, degree, i64::from(genus)),
        });
    }
    Outcome::ok(report)
}

fn label_json(label: FactorLabel) -> Value {
    match label {
        FactorLabel::SpR(m) => json!({ "type": "SpR", "m": m }),
        FactorLabel::Un(m) => json!({ "type": "Un", "m": m }),
        FactorLabel::Upq(p, q) => json!({ "type": "Upq", "p": p, "q": q }),
    }
}

/// SHA-256 of the canonical JSON of a pair.
pub fn pair_hash(pair: &HiggsPair) -> String {
    let text = serde_json::to_string(&PairDocument::from_pair(pair, None).to_json()).expect("serializes");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn cmd_jh(doc: &PairDocument, opts: &Options) -> Outcome {
    let (pair, alpha, a) = match resolve_input(doc, opts) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error("jh", &e),
    };
    let engine = RayEngine::new();
    let dec = match decompose_with(&engine, &pair, Alpha::Value(a)) {
        Ok(d) => d,
        Err(e @ Error::NotPolystable { .. }) => {
            let v = verdict_simplified_resolved(&pair, a);
            let mut out = Outcome::input_error("jh", &InputError::new("", e.to_string()));
            out.report["verdict"] = json!(v.status.name());
            out.report["certificate"] = v.certificate.as_ref().map_or(Value::Null, |c| certificate_json(c, a));
            return out;
        }
        Err(e @ Error::InvalidPair(_)) => return Outcome::input_error("jh", &InputError::new("group", e.to_string())),
        Err(e) => return internal("jh", &e),
    };
    let mut exit = EXIT_OK;
    let mut factors = Vec::new();
    for f in &dec.factors {
        let stable = match factor_is_stable(&engine, f, a) {
            Ok(s) => s,
            Err(e) => return internal("jh", &e),
        };
        if !stable {
            exit = EXIT_INTERNAL;
        }
        let (beta, gamma) = match f.embedded_pair.pattern {
            HiggsPattern::SymPair { beta, gamma } => (beta, gamma),
            HiggsPattern::Endo(_) => unreachable!("factors are Sp2nR pairs"),
        };
        factors.push(json!({
            "label": f.label.to_string(),
            "group": label_json(f.label),
            "indices": f.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "degrees": f.embedded_pair.degrees(),
            "beta_supp": support_to_json(beta),
            "gamma_supp": support_to_json(gamma),
            "stable": stable,
        }));
    }
    let back = reassemble(&dec);
    let matches = back == pair;
    if !matches {
        exit = EXIT_INTERNAL;
    }
    Outcome {
        report: json!({
            "command": "jh",
            "input": PairDocument::from_pair(&pair, Some(alpha)).to_json(),
            "alpha": alpha_string(Alpha::Value(a)),
            "factors": factors,
            "notes": dec.notes,
            "reassembly": { "matches": matches, "hash": pair_hash(&back), "input_hash": pair_hash(&pair) },
            "diagnostics": if exit == EXIT_OK { json!([]) } else { json!([{ "field": "", "message": "decomposition failed its own checks" }]) },
        }),
        exit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_table() {
        assert_eq!(expected_dimension(Group::Sp2nR, 1, 2).unwrap(), 3);
        assert_eq!(expected_dimension(Group::Sp2nR, 2, 2).unwrap(), 10);
        assert_eq!(expected_dimension(Group::SLnC, 2, 3).unwrap(), 6);
        assert_eq!(expected_dimension(Group::SLnC, 3, 2).unwrap(), 8);
        assert!(matches!(expected_dimension(Group::GLnR, 2, 2), Err(Error::NonSemisimpleGroup { .. })));
        assert!(matches!(expected_dimension(Group::SLnC, 2, 1), Err(Error::GenusTooSmall(1))));
        assert_eq!(euler_char(2, 0, 2), -2);
    }

    #[test]
    fn modes_parse() {
        assert_eq!(Mode::parse("both"), Some(Mode::Both));
        assert_eq!(Mode::parse("fast"), None);
    }
}
