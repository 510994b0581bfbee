//! JSON model descriptions and the polynomial expression grammar used inside them.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := [sign] coeff ('*' factor)* | [sign] factor ('*' factor)*
//! factor := name ('^' posint)?
//! coeff  := integer | integer '/' posint
//! ```
//!
//! Whitespace is insignificant and `0` denotes zero. Factors may come in any order;
//! parsed terms are normalized with Koszul signs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{normalize_word, Element, GeneratorTable};
use crate::cdga::{validate, FreeCdga, Issue, PresentedCdga, ValidationReport};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Where the text came from, e.g. `differential of c`.
    pub context: String,
    /// Character offset within that text (or line:column for JSON errors).
    pub position: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.context, self.position, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

/// On-disk description of a presented CDGA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    table: &'a GeneratorTable,
    context: &'a str,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(text: &str, table: &'a GeneratorTable, context: &'a str) -> Self {
        Self {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            table,
            context,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or_else(|| self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()), |&(i, _)| i)
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError {
            context: self.context.to_string(),
            position: self.offset().to_string(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn sign(&mut self) -> bool {
        match self.peek() {
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        digits.parse().ok()
    }

    fn name(&mut self) -> Option<(usize, String)> {
        if !self.peek().is_some_and(is_name_start) {
            return None;
        }
        let at = self.offset();
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        Some((at, self.chars[start..self.pos].iter().map(|&(_, c)| c).collect()))
    }

    fn factor(&mut self) -> std::result::Result<(usize, u32), ParseError> {
        let (at, name) = self.name().ok_or_else(|| self.error("generator name"))?;
        let id = self.table.id_of(&name).ok_or_else(|| ParseError {
            context: self.context.to_string(),
            position: at.to_string(),
            message: format!("unknown generator `{name}`"),
        })?;
        let mut exp = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer().ok_or_else(|| self.error("positive integer exponent"))?;
            exp = u32::try_from(&e).ok().filter(|&e| e > 0).ok_or_else(|| ParseError {
                context: self.context.to_string(),
                position: self.offset().to_string(),
                message: format!("exponent {e} is not a positive 32-bit integer"),
            })?;
        }
        Ok((id, exp))
    }

    fn term(&mut self) -> std::result::Result<Element, ParseError> {
        let negative = self.sign();
        let mut coeff = Rational::one();
        let mut word = Vec::new();
        if let Some(num) = self.integer() {
            let mut c = Rational::from_integer(num);
            if self.peek() == Some('/') {
                self.pos += 1;
                let den = self
                    .integer()
                    .ok_or_else(|| self.error("positive integer denominator"))?;
                if den.is_zero() {
                    return Err(ParseError {
                        context: self.context.to_string(),
                        position: self.offset().to_string(),
                        message: "denominator must be positive".into(),
                    });
                }
                c = Rational::new(c.numer().clone(), den);
            }
            coeff = c;
            if self.peek() == Some('*') {
                self.pos += 1;
                word.push(self.factor()?);
            }
        } else {
            word.push(self.factor()?);
        }
        while self.peek() == Some('*') {
            self.pos += 1;
            word.push(self.factor()?);
        }
        if negative {
            coeff = -coeff;
        }
        match normalize_word(&word, self.table).expect("ids resolved from the table") {
            None => Ok(Element::zero()),
            Some((neg, m)) => Ok(Element::term(m, if neg { -coeff } else { coeff })),
        }
    }

    fn expression(&mut self) -> std::result::Result<Element, ParseError> {
        if self.chars.is_empty() {
            return Err(self.error("expression"));
        }
        let mut out = self.term()?;
        while let Some(c) = self.peek() {
            let negative = match c {
                '+' => false,
                '-' | '\u{2212}' => true,
                _ => return Err(self.error("`+`, `-` or `*`")),
            };
            self.pos += 1;
            let t = self.term()?;
            if negative {
                out -= &t;
            } else {
                out += &t;
            }
        }
        Ok(out)
    }
}

/// Parses a polynomial expression over the generators of `table`.
pub fn parse_expression(text: &str, table: &GeneratorTable, context: &str) -> std::result::Result<Element, ParseError> {
    Parser::new(text, table, context).expression()
}

fn json_error(context: &str, e: &serde_json::Error) -> ParseError {
    ParseError {
        context: context.to_string(),
        position: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

impl ModelDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text).map_err(|e| json_error("model description", &e))?)
    }

    /// Deterministic pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    pub fn table(&self) -> Result<GeneratorTable> {
        let mut table = GeneratorTable::new();
        for g in &self.generators {
            table.push(&g.name, g.degree)?;
        }
        Ok(table)
    }

    /// Builds the algebra without running [`validate`]. Differentials that are not
    /// listed stay unassigned so validation can report them.
    pub fn to_cdga(&self) -> Result<PresentedCdga> {
        let table = self.table()?;
        let mut free = FreeCdga::new(table.clone());
        for (name, expr) in &self.differential {
            let id = table
                .id_of(name)
                .ok_or_else(|| Error::UnknownGeneratorName(name.clone()))?;
            let d = parse_expression(expr, &table, &format!("differential of {name}"))?;
            free.set_differential(id, d)?;
        }
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| parse_expression(r, &table, &format!("relation {i}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let a = PresentedCdga::new(free, relations).map_err(|e| match e {
            Error::RelationNotHomogeneous(relation) => Error::Validation(ValidationReport {
                max_degree: 0,
                issues: vec![Issue::RelationNotHomogeneous { relation }],
                notes: vec![],
            }),
            Error::RelationDegreeTooLow { index, degree } => Error::Validation(ValidationReport {
                max_degree: 0,
                issues: vec![Issue::RelationDegreeTooLow {
                    relation: index,
                    degree,
                }],
                notes: vec![],
            }),
            other => other,
        })?;
        Ok(a.with_name(self.name.clone()))
    }

    pub fn from_cdga(a: &PresentedCdga) -> Self {
        let table = a.table();
        Self {
            name: a.name().to_string(),
            generators: table
                .iter()
                .map(|g| GeneratorSpec {
                    name: g.name.clone(),
                    degree: g.degree,
                })
                .collect(),
            differential: table
                .iter()
                .filter_map(|g| {
                    a.free_part()
                        .differential_of(g.id)
                        .map(|d| (g.name.clone(), d.display(table).to_string()))
                })
                .collect(),
            relations: a.relations().iter().map(|r| r.display(table).to_string()).collect(),
        }
    }
}

/// Degree through which [`validate`] covers every generator and relation.
pub fn full_validation_degree(a: &PresentedCdga) -> u32 {
    let table = a.table();
    let rel = a.relations().iter().filter_map(|r| r.degree(table)).max().unwrap_or(0);
    table.max_degree().max(rel).max(1)
}

/// Parses and validates a JSON model description.
pub fn parse_model(text: &str) -> Result<PresentedCdga> {
    let a = ModelDescription::from_json(text)?.to_cdga()?;
    let report = validate(&a, full_validation_degree(&a))?;
    if report.passed() {
        Ok(a)
    } else {
        Err(Error::Validation(report))
    }
}

/// A Lie algebra over the rationals: basis names and brackets `[left, right] = value`,
/// with `value` a linear expression in the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieDescription {
    pub name: String,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub value: String,
}

impl LieDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text).map_err(|e| json_error("Lie algebra description", &e))?)
    }
}

/// Twisted differential for `ks-check`: expressions over base and fiber generators
/// (fiber names are renamed if they clash, see [`crate::ks::KsExtension`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDescription {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
}

impl TwistDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text).map_err(|e| json_error("twist description", &e))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;

    fn table() -> GeneratorTable {
        GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("x", 2)]).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn expressions_normalize_signs() {
        let t = table();
        let ba = parse_expression("b*a", &t, "t").unwrap();
        let ab = parse_expression("a*b", &t, "t").unwrap();
        assert_eq!(ba, -ab);
        assert!(parse_expression("a*a", &t, "t").unwrap().is_zero());
        assert!(parse_expression("0", &t, "t").unwrap().is_zero());
    }

    #[test]
    fn coefficients_and_powers() {
        let t = table();
        let e = parse_expression(" -1/2 * x^2 + 3*a*b - x*x ", &t, "t").unwrap();
        let x2 = Monomial::from_canonical(vec![(2, 2)]);
        let ab = Monomial::from_canonical(vec![(0, 1), (1, 1)]);
        assert_eq!(e.coefficient(&x2), q(-3, 2));
        assert_eq!(e.coefficient(&ab), q(3, 1));
        let e = parse_expression("2 − a*b + -3", &t, "t").unwrap();
        assert_eq!(e.coefficient(&Monomial::one()), q(-1, 1));
    }

    #[test]
    fn display_round_trips() {
        let t = table();
        for text in ["a*b - 1/3*x^2 + x", "0", "-x", "7", "-2/5*a*x"] {
            let e = parse_expression(text, &t, "t").unwrap();
            let printed = e.display(&t).to_string();
            assert_eq!(parse_expression(&printed, &t, "t").unwrap(), e, "{text} -> {printed}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let t = table();
        let err = parse_expression("a*+b", &t, "differential of c").unwrap_err();
        assert_eq!(err.position, "2");
        assert!(err.message.contains("generator name"));
        let err = parse_expression("a*z", &t, "ctx").unwrap_err();
        assert!(err.message.contains("unknown generator `z`"));
        assert!(parse_expression("", &t, "ctx").is_err());
        assert!(parse_expression("a b", &t, "ctx").is_err());
        assert!(parse_expression("1/0", &t, "ctx").is_err());
        assert!(parse_expression("x^0", &t, "ctx").is_err());
    }

    #[test]
    fn heisenberg_description() {
        let text = r#"{"name": "heisenberg",
            "generators": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}, {"name": "c", "degree": 1}],
            "differential": {"a": "0", "b": "0", "c": "a*b"}}"#;
        let a = parse_model(text).unwrap();
        assert_eq!(a.table().len(), 3);
        assert_eq!(a.name(), "heisenberg");
    }

    #[test]
    fn degree_mismatch_is_a_validation_error() {
        let text = r#"{"name": "bad",
            "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
            "differential": {"x": "0", "y": "x"}}"#;
        let Err(Error::Validation(report)) = parse_model(text) else {
            panic!("expected validation error");
        };
        assert!(report.has_issue(|i| matches!(i, Issue::DegreeMismatch { generator, .. } if generator == "y")));

        let ok = r#"{"name": "ok",
            "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
            "differential": {"x": "0", "y": "x^2"}}"#;
        assert!(parse_model(ok).is_ok());
    }

    #[test]
    fn bad_relation_is_a_validation_error() {
        let text = r#"{"name": "bad",
            "generators": [{"name": "a", "degree": 1}, {"name": "x", "degree": 2}],
            "differential": {"a": "0", "x": "0"},
            "relations": ["a + x"]}"#;
        assert!(matches!(parse_model(text), Err(Error::Validation(_))));
    }

    #[test]
    fn description_round_trip() {
        let text = r#"{"name": "cp2",
            "generators": [{"name": "e", "degree": 2}],
            "differential": {"e": "0"},
            "relations": ["e^3"]}"#;
        let a = parse_model(text).unwrap();
        let desc = ModelDescription::from_cdga(&a);
        let b = parse_model(&desc.to_json()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_json_reports_line() {
        let err = parse_model("{\n  \"name\": 3\n}").unwrap_err();
        let Error::Parse(p) = err else {
            panic!("expected parse error")
        };
        assert!(p.position.starts_with("line 2"));
    }
}
