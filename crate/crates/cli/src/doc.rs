//! Input documents: parsing with field-path diagnostics, and the canonical
//! serialization of pairs.

use std::fmt;

use higgs_core::bundle::{default_pairing, validate_pair, HiggsPattern};
use higgs_core::scalar::{format_ratio, parse_ratio};
use higgs_core::stability::Alpha;
use higgs_core::sweep::{PatternFamily, SweepSpec, DEFAULT_BUDGET};
use higgs_core::{CoordinateFlag, Error, Group, HiggsPair, Rat, Subset, Support, Twist, MAX_SUMMANDS};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// A problem with an input document, located by a field path such as
/// `beta_supp[2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "field": self.field, "message": self.message })
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwistField {
    Degree(i64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub group: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistField>,
    pub degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supp: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_supp: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_supp: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<usize>>,
    /// Pieces of a coordinate flag, used by `rays`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Vec<Vec<usize>>>,
}

/// Deserializes JSON text, reporting the path of the first bad field.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { String::new() } else { path };
        InputError::new(field, e.into_inner().to_string())
    })
}

pub fn parse_group(s: &str, field: &str) -> Result<Group, InputError> {
    Group::parse(s).ok_or_else(|| {
        InputError::new(
            field,
            format!("unknown group {s:?}; expected one of Sp2nC, SLnC, Sp2nR, GLnR"),
        )
    })
}

pub fn parse_alpha(s: &str, field: &str) -> Result<Alpha, InputError> {
    if s.trim() == "mu" {
        return Ok(Alpha::Mu);
    }
    parse_ratio::<Rat>(s)
        .map(Alpha::Value)
        .ok_or_else(|| InputError::new(field, format!("expected a rational \"p/q\" or \"mu\", got {s:?}")))
}

pub fn alpha_string(alpha: Alpha) -> String {
    match alpha {
        Alpha::Mu => "mu".into(),
        Alpha::Value(a) => format_ratio(&a),
    }
}

fn support_from(entries: &[[usize; 2]], k: usize, field: &str) -> Result<Support, InputError> {
    let mut s = Support::EMPTY;
    for (i, &[a, b]) in entries.iter().enumerate() {
        if a == 0 || b == 0 || a > k || b > k {
            return Err(InputError::new(
                format!("{field}[{i}]"),
                format!("indices are 1-based and at most {k}, got [{a}, {b}]"),
            ));
        }
        s.insert(a - 1, b - 1);
    }
    Ok(s)
}

pub fn support_to_json(s: Support) -> Vec<[usize; 2]> {
    s.entries().map(|(a, b)| [a + 1, b + 1]).collect()
}

/// Reads a flag given as 1-based pieces.
pub fn flag_from(pieces: &[Vec<usize>], k: usize, field: &str) -> Result<CoordinateFlag, InputError> {
    let mut out = Vec::with_capacity(pieces.len());
    for (j, piece) in pieces.iter().enumerate() {
        if let Some(&bad) = piece.iter().find(|&&i| i == 0 || i > k) {
            return Err(InputError::new(
                format!("{field}[{j}]"),
                format!("indices are 1-based and at most {k}, got {bad}"),
            ));
        }
        let zero_based: Vec<usize> = piece.iter().map(|i| i - 1).collect();
        out.push(Subset::from_indices(&zero_based));
    }
    Ok(CoordinateFlag::new(out))
}

pub fn flag_to_json(flag: &CoordinateFlag) -> Vec<Vec<usize>> {
    flag.piece_indices()
        .into_iter()
        .map(|p| p.into_iter().map(|i| i + 1).collect())
        .collect()
}

fn validation_field(err: &Error, group: Group) -> &'static str {
    let pattern_field = if group.uses_endo_pattern() { "supp" } else { "beta_supp" };
    match err {
        Error::SymmetryViolation(msg) | Error::SectionInfeasible(msg) => {
            if msg.starts_with("gamma") {
                "gamma_supp"
            } else {
                pattern_field
            }
        }
        Error::IndexOutOfRange { .. } => pattern_field,
        Error::PairingViolation(msg) if msg.contains("degrees") => "degrees",
        Error::PairingViolation(_) | Error::LengthMismatch { .. } => "pairing",
        Error::InvalidPair(msg) if msg.contains("determinant") => "degrees",
        Error::InvalidPair(msg) if msg.contains("twist") => "twist",
        _ => "",
    }
}

impl PairDocument {
    /// Builds and validates the pair, and resolves the alpha field
    /// (default 0).
    pub fn to_pair(&self, strict_sections: bool) -> Result<(HiggsPair, Alpha), InputError> {
        let group = parse_group(&self.group, "group")?;
        if self.n == 0 {
            return Err(InputError::new("n", "must be at least 1"));
        }
        let k = group.summands(self.n);
        if k > MAX_SUMMANDS {
            return Err(InputError::new(
                "n",
                format!("{group} with n = {} has {k} summands, more than {MAX_SUMMANDS}", self.n),
            ));
        }
        if self.degrees.len() != k {
            return Err(InputError::new(
                "degrees",
                format!("{group} with n = {} needs {k} degrees, got {}", self.n, self.degrees.len()),
            ));
        }
        let pattern = if group.uses_endo_pattern() {
            for (name, f) in [("beta_supp", &self.beta_supp), ("gamma_supp", &self.gamma_supp)] {
                if f.is_some() {
                    return Err(InputError::new(name, format!("{group} takes \"supp\", not {name}")));
                }
            }
            HiggsPattern::Endo(support_from(self.supp.as_deref().unwrap_or(&[]), k, "supp")?)
        } else {
            if self.supp.is_some() {
                return Err(InputError::new("supp", "Sp2nR takes \"beta_supp\" and \"gamma_supp\""));
            }
            HiggsPattern::SymPair {
                beta: support_from(self.beta_supp.as_deref().unwrap_or(&[]), k, "beta_supp")?,
                gamma: support_from(self.gamma_supp.as_deref().unwrap_or(&[]), k, "gamma_supp")?,
            }
        };
        let mut pair = HiggsPair::new(group, self.degrees.clone(), pattern);

        let genus = self.genus.unwrap_or(Twist::default().genus);
        pair.twist = match &self.twist {
            None => Twist::canonical(genus),
            Some(TwistField::Named(s)) if s == "K" => Twist::canonical(genus),
            Some(TwistField::Named(s)) => {
                return Err(InputError::new("twist", format!("expected an integer degree or \"K\", got {s:?}")))
            }
            Some(TwistField::Degree(ell)) => Twist {
                ell: *ell,
                genus,
                is_canonical: false,
            },
        };

        if let Some(p) = &self.pairing {
            if p.len() != k {
                return Err(InputError::new("pairing", format!("needs {k} entries, got {}", p.len())));
            }
            if let Some(&bad) = p.iter().find(|&&i| i == 0 || i > k) {
                return Err(InputError::new("pairing", format!("indices are 1-based and at most {k}, got {bad}")));
            }
            if !group.is_paired() {
                return Err(InputError::new("pairing", format!("{group} takes no pairing")));
            }
            pair.bundle.pairing = Some(p.iter().map(|i| i - 1).collect());
        }

        let alpha = match &self.alpha {
            None => Alpha::Value(Rat::from_integer(0)),
            Some(s) => parse_alpha(s, "alpha")?,
        };
        validate_pair(&pair, strict_sections)
            .map_err(|e| InputError::new(validation_field(&e, group), e.to_string()))?;
        if let Alpha::Value(a) = alpha {
            if !num_traits::Zero::is_zero(&a) && !group.admits_alpha() {
                return Err(InputError::new("alpha", Error::NonzeroAlphaUnsupported.to_string()));
            }
        }
        Ok((pair, alpha))
    }

    /// The canonical document of a pair. Optional fields are written only
    /// when they differ from the defaults.
    pub fn from_pair(pair: &HiggsPair, alpha: Option<Alpha>) -> PairDocument {
        let k = pair.rank();
        let n = match pair.group {
            Group::Sp2nC => k / 2,
            _ => k,
        };
        let (supp, beta_supp, gamma_supp) = match pair.pattern {
            HiggsPattern::Endo(s) => (Some(support_to_json(s)), None, None),
            HiggsPattern::SymPair { beta, gamma } => (None, Some(support_to_json(beta)), Some(support_to_json(gamma))),
        };
        let pairing = pair
            .pairing()
            .filter(|p| *p != default_pairing(k).as_slice())
            .map(|p| p.iter().map(|i| i + 1).collect());
        PairDocument {
            group: pair.group.name().to_string(),
            n,
            genus: Some(pair.twist.genus),
            twist: Some(if pair.twist.is_canonical {
                TwistField::Named("K".into())
            } else {
                TwistField::Degree(pair.twist.ell)
            }),
            degrees: pair.degrees().to_vec(),
            alpha: alpha.map(alpha_string),
            supp,
            beta_supp,
            gamma_supp,
            pairing,
            flag: None,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("documents serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDocument {
    pub group: String,
    #[serde(default = "one")]
    pub n_min: usize,
    pub n_max: usize,
    pub d_min: i64,
    pub d_max: i64,
    #[serde(default = "zero_twist")]
    pub twists: Vec<i64>,
    #[serde(default = "one_u32")]
    pub genus: u32,
    #[serde(default = "zero_alpha")]
    pub alphas: Vec<String>,
    /// `all`, `symmetric` or `budget_limited`.
    #[serde(default = "all_patterns")]
    pub patterns: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default)]
    pub strict_sections: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

fn one() -> usize {
    1
}
fn one_u32() -> u32 {
    1
}
fn zero_twist() -> Vec<i64> {
    vec![0]
}
fn zero_alpha() -> Vec<String> {
    vec!["0".into()]
}
fn all_patterns() -> String {
    "all".into()
}

impl SweepDocument {
    pub fn to_spec(&self, budget_override: Option<u64>) -> Result<SweepSpec, InputError> {
        let group = parse_group(&self.group, "group")?;
        let mut spec = SweepSpec::new(group, self.n_max, (self.d_min, self.d_max));
        spec.n_min = self.n_min;
        if self.n_max >= 1 && group.summands(self.n_max) > MAX_SUMMANDS {
            return Err(InputError::new(
                "n_max",
                format!("{group} with n = {} has more than {MAX_SUMMANDS} summands", self.n_max),
            ));
        }
        spec.twists = self.twists.clone();
        spec.genus = self.genus;
        spec.alphas = self
            .alphas
            .iter()
            .enumerate()
            .map(|(i, a)| parse_alpha(a, &format!("alphas[{i}]")))
            .collect::<Result<_, _>>()?;
        for (i, a) in spec.alphas.iter().enumerate() {
            if let Alpha::Value(v) = a {
                if !num_traits::Zero::is_zero(v) && !group.admits_alpha() {
                    return Err(InputError::new(format!("alphas[{i}]"), Error::NonzeroAlphaUnsupported.to_string()));
                }
            }
        }
        spec.patterns = match (self.patterns.as_str(), self.cap) {
            ("all", None) => PatternFamily::All,
            ("symmetric", None) => PatternFamily::SymmetricOnly,
            ("budget_limited", Some(cap)) => PatternFamily::BudgetLimited { cap },
            ("budget_limited", None) => return Err(InputError::new("cap", "budget_limited needs a cap")),
            ("all" | "symmetric", Some(_)) => {
                return Err(InputError::new("cap", "a cap only applies to budget_limited patterns"))
            }
            (other, _) => {
                return Err(InputError::new(
                    "patterns",
                    format!("expected all, symmetric or budget_limited, got {other:?}"),
                ))
            }
        };
        spec.strict_sections = self.strict_sections;
        spec.budget = budget_override.or(self.budget).unwrap_or(DEFAULT_BUDGET);
        Ok(spec)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_round_trip() {
        let text = r#"{"group":"Sp2nR","n":2,"degrees":[1,-1],"beta_supp":[[1,2],[2,1]],"gamma_supp":[[1,1]],"alpha":"1/2"}"#;
        let doc: PairDocument = from_json(text).unwrap();
        let (pair, alpha) = doc.to_pair(false).unwrap();
        let again = PairDocument::from_pair(&pair, Some(alpha));
        let (pair2, alpha2) = again.to_pair(false).unwrap();
        assert_eq!(pair, pair2);
        assert_eq!(alpha, alpha2);
    }

    #[test]
    fn field_paths() {
        let doc: PairDocument = from_json(r#"{"group":"SLnC","n":3,"degrees":[1,-1]}"#).unwrap();
        assert_eq!(doc.to_pair(false).unwrap_err().field, "degrees");
        let err = from_json::<PairDocument>(r#"{"group":"SLnC","n":2,"degrees":[1,"x"]}"#).unwrap_err();
        assert_eq!(err.field, "degrees[1]");
        let doc: PairDocument =
            from_json(r#"{"group":"Sp2nR","n":2,"degrees":[0,0],"beta_supp":[[1,2]]}"#).unwrap();
        assert_eq!(doc.to_pair(false).unwrap_err().field, "beta_supp");
        let doc: PairDocument = from_json(r#"{"group":"Sp2nC","n":1,"degrees":[1,-1],"supp":[[1,3]]}"#).unwrap();
        assert_eq!(doc.to_pair(false).unwrap_err().field, "supp[0]");
        let doc: PairDocument = from_json(r#"{"group":"SLnC","n":2,"degrees":[0,0],"alpha":"1"}"#).unwrap();
        assert_eq!(doc.to_pair(false).unwrap_err().field, "alpha");
    }
}
