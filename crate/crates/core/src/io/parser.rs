//! Recursive-descent parser for `.ring` presentation files and for standalone expressions.
//!
//! ```text
//! variety P2 dim 2
//! generators: h:1
//! relations: h^3
//! chern_tangent: 1 + 3*h + 3*h^2
//! diagonal: h^2 (x) 1 + h (x) h + 1 (x) h^2
//! point: h^2
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, Rational, VarList};

use super::ringfile::{RingFile, TensorTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message} (expected {})", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

/// Generator names the pipeline uses for exceptional classes.
pub const RESERVED_NAMES: [&str; 2] = ["e", "f"];

const SECTIONS: [&str; 5] = ["generators", "relations", "chern_tangent", "diagonal", "point"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Tensor,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Tensor => "`(x)`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn error(pos: Pos, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: li + 1,
                column: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
                continue;
            }
            if c == '(' {
                if chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&')') {
                    out.push((Tok::Tensor, pos));
                    i += 3;
                    continue;
                }
                return Err(error(pos, "unexpected `(`", &["`(x)`"]));
            }
            if "*^+-/:,".contains(c) {
                out.push((Tok::Sym(c), pos));
                i += 1;
                continue;
            }
            return Err(error(
                pos,
                format!("unexpected character `{c}`"),
                &["identifier", "integer", "`*`", "`^`", "`+`", "`-`", "`(x)`"],
            ));
        }
        out.push((
            Tok::Newline,
            Pos {
                line: li + 1,
                column: chars.len() + 1,
            },
        ));
    }
    let last = text.lines().count().max(1);
    out.push((
        Tok::Eof,
        Pos {
            line: last + usize::from(text.ends_with('\n')),
            column: 1,
        },
    ));
    Ok(out)
}

/// A term with the position of every factor, before names are resolved.
#[derive(Clone, Debug)]
struct RawTerm {
    pos: Pos,
    coeff: Rational,
    factors: Vec<(String, u32, Pos)>,
}

impl RawTerm {
    fn into_term(self) -> Term {
        Term {
            coeff: self.coeff,
            factors: self.factors.into_iter().map(|(n, e, _)| (n, e)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
struct RawExpr {
    pos: Pos,
    terms: Vec<RawTerm>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        error(self.pos(), format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect_sym(&mut self, c: char) -> Result<Pos, ParseError> {
        if *self.peek() == Tok::Sym(c) {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[&format!("`{c}`")]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(BigInt, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let p = self.bump().1;
                Ok((n, p))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32, ParseError> {
        let (n, p) = self.expect_int(what)?;
        u32::try_from(&n).map_err(|_| error(p, format!("{what} {n} is too large"), &["a small integer"]))
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn at_section_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if SECTIONS.contains(&s.as_str())) && *self.peek_at(1) == Tok::Sym(':')
    }

    /// `rational | name [^ int]`
    fn atom(&mut self, term: &mut RawTerm) -> Result<(), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let mut r = Rational::from_integer(n);
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    let (d, p) = self.expect_int("denominator")?;
                    if d.is_zero() {
                        return Err(error(p, "zero denominator", &["nonzero integer"]));
                    }
                    r /= Rational::from_integer(d);
                }
                term.coeff *= r;
                Ok(())
            }
            Tok::Ident(name) => {
                let p = self.bump().1;
                let exp = if *self.peek() == Tok::Sym('^') {
                    self.bump();
                    self.small_int("exponent")?
                } else {
                    1
                };
                term.factors.push((name, exp, p));
                Ok(())
            }
            _ => Err(self.unexpected(&["integer", "generator name"])),
        }
    }

    /// `atom (* atom)*`
    fn term(&mut self, sign: i32) -> Result<RawTerm, ParseError> {
        let mut t = RawTerm {
            pos: self.pos(),
            coeff: Rational::from_integer(sign.into()),
            factors: Vec::new(),
        };
        self.atom(&mut t)?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            self.atom(&mut t)?;
        }
        Ok(t)
    }

    /// Leading sign then `term ((+|-) term)*`; yields each signed term to `f`.
    fn signed_sequence<T>(&mut self, mut item: impl FnMut(&mut Self, i32) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        let mut sign = 1;
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                sign = -1;
            }
            Tok::Sym('+') => {
                self.bump();
            }
            _ => {}
        }
        out.push(item(self, sign)?);
        loop {
            let sign = match self.peek() {
                Tok::Sym('+') => 1,
                Tok::Sym('-') => -1,
                _ => break,
            };
            self.bump();
            out.push(item(self, sign)?);
        }
        Ok(out)
    }

    fn expression(&mut self) -> Result<RawExpr, ParseError> {
        let pos = self.pos();
        let terms = self.signed_sequence(|p, s| p.term(s))?;
        Ok(RawExpr { pos, terms })
    }

    fn tensor_expression(&mut self) -> Result<Vec<(RawTerm, RawTerm)>, ParseError> {
        self.signed_sequence(|p, s| {
            let left = p.term(s)?;
            if *p.peek() != Tok::Tensor {
                return Err(p.unexpected(&["`(x)`", "`*`"]));
            }
            p.bump();
            let right = p.term(1)?;
            Ok((left, right))
        })
    }

    fn end_of_item(&self) -> bool {
        matches!(self.peek(), Tok::Newline | Tok::Eof | Tok::Sym(','))
    }

    fn expect_end_of_item(&self, expected: &str) -> Result<(), ParseError> {
        if self.end_of_item() {
            Ok(())
        } else {
            Err(self.unexpected(&[expected, "`,`", "end of line"]))
        }
    }

    /// Items separated by commas or line breaks, up to the next section header.
    fn section_items<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Sym(',')) {
                self.bump();
            }
            if *self.peek() == Tok::Eof || self.at_section_start() {
                return Ok(out);
            }
            out.push(item(self)?);
        }
    }
}

fn pattern_section(name: &str) -> String {
    format!("`{name}:`")
}

/// Parse a `.ring` document. Names, degrees and homogeneity are checked here so that every
/// failure carries a position.
pub fn parse_ring_file(text: &str) -> Result<RingFile, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    p.skip_newlines();
    match p.peek() {
        Tok::Ident(s) if s == "variety" => {
            p.bump();
        }
        _ => return Err(p.unexpected(&["`variety`"])),
    }
    let (name, _) = p.expect_ident("variety name")?;
    match p.peek() {
        Tok::Ident(s) if s == "dim" => {
            p.bump();
        }
        _ => return Err(p.unexpected(&["`dim`"])),
    }
    let dimension = p.small_int("dimension")? as usize;
    if !matches!(p.peek(), Tok::Newline | Tok::Eof) {
        return Err(p.unexpected(&["end of line"]));
    }

    let mut generators: Option<Vec<(String, u32, Pos)>> = None;
    let mut relations: Option<Vec<RawExpr>> = None;
    let mut chern: Option<RawExpr> = None;
    let mut diagonal: Option<Vec<(RawTerm, RawTerm)>> = None;
    let mut point: Option<RawExpr> = None;
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        if !p.at_section_start() {
            let expected: Vec<String> = SECTIONS.iter().map(|s| pattern_section(s)).collect();
            let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
            return Err(p.unexpected(&refs));
        }
        let (section, spos) = p.expect_ident("section name")?;
        p.expect_sym(':')?;
        let duplicate = || error(spos, format!("section `{section}` appears twice"), &["a different section"]);
        match section.as_str() {
            "generators" => {
                if generators.is_some() {
                    return Err(duplicate());
                }
                generators = Some(p.section_items(|p| {
                    let (g, gp) = p.expect_ident("generator name")?;
                    p.expect_sym(':')?;
                    let deg = p.small_int("generator degree")?;
                    p.expect_end_of_item("next generator")?;
                    Ok((g, deg, gp))
                })?);
            }
            "relations" => {
                if relations.is_some() {
                    return Err(duplicate());
                }
                relations = Some(p.section_items(|p| {
                    let e = p.expression()?;
                    p.expect_end_of_item("`+`, `-` or `*`")?;
                    Ok(e)
                })?);
            }
            "chern_tangent" | "point" => {
                let slot = if section == "point" { &mut point } else { &mut chern };
                if slot.is_some() {
                    return Err(duplicate());
                }
                let mut items = p.section_items(|p| {
                    let e = p.expression()?;
                    p.expect_end_of_item("`+`, `-` or `*`")?;
                    Ok(e)
                })?;
                if items.len() != 1 {
                    return Err(error(spos, format!("section `{section}` needs exactly one expression"), &["one expression"]));
                }
                *slot = items.pop();
            }
            "diagonal" => {
                if diagonal.is_some() {
                    return Err(duplicate());
                }
                let mut items = p.section_items(|p| {
                    let e = p.tensor_expression()?;
                    p.expect_end_of_item("`+`, `-` or `(x)`")?;
                    Ok(e)
                })?;
                if items.len() != 1 {
                    return Err(error(spos, "section `diagonal` needs exactly one expression", &["one expression"]));
                }
                diagonal = items.pop();
            }
            _ => unreachable!("at_section_start checked the name"),
        }
    }

    let eof = p.pos();
    let missing = |s: &str| error(eof, format!("missing section `{s}:`"), &[&pattern_section(s)]);
    let generators = generators.ok_or_else(|| missing("generators"))?;
    let chern = chern.ok_or_else(|| missing("chern_tangent"))?;
    let diagonal = diagonal.ok_or_else(|| missing("diagonal"))?;
    let point = point.ok_or_else(|| missing("point"))?;
    let relations = relations.unwrap_or_default();

    let mut degrees: BTreeMap<String, u32> = BTreeMap::new();
    for (g, d, gp) in &generators {
        if RESERVED_NAMES.contains(&g.as_str()) {
            return Err(error(*gp, format!("generator name `{g}` is reserved"), &["a name other than e or f"]));
        }
        if *d == 0 {
            return Err(error(*gp, format!("generator `{g}` must have positive degree"), &["degree ≥ 1"]));
        }
        if degrees.insert(g.clone(), *d).is_some() {
            return Err(error(*gp, format!("duplicate generator `{g}`"), &["a new generator name"]));
        }
    }
    let names: Vec<String> = degrees.keys().map(|s| format!("`{s}`")).collect();
    let term_degree = |t: &RawTerm| -> Result<u32, ParseError> {
        let mut deg = 0;
        for (n, e, fp) in &t.factors {
            let d = degrees.get(n).ok_or_else(|| ParseError {
                line: fp.line,
                column: fp.column,
                message: format!("unknown generator `{n}`"),
                expected: names.clone(),
            })?;
            deg += d * e;
        }
        Ok(deg)
    };
    for r in &relations {
        let mut seen: Vec<(u32, &RawTerm)> = Vec::new();
        for t in &r.terms {
            seen.push((term_degree(t)?, t));
        }
        let first = seen[0].0;
        if let Some((d, t)) = seen.iter().find(|(d, _)| *d != first) {
            let per_term: Vec<String> = seen
                .iter()
                .map(|(d, t)| format!("`{}` has degree {d}", (*t).clone().into_term()))
                .collect();
            return Err(ParseError {
                line: r.pos.line,
                column: t.pos.column,
                message: format!(
                    "inhomogeneous relation at line {} (term of degree {d} after degree {first}: {})",
                    r.pos.line,
                    per_term.join(", ")
                ),
                expected: vec![format!("terms of degree {first}")],
            });
        }
        if first == 0 {
            return Err(error(r.pos, format!("relation at line {} has degree 0", r.pos.line), &["a relation of positive degree"]));
        }
    }
    for t in chern.terms.iter().chain(&point.terms) {
        term_degree(t)?;
    }
    for (l, r) in &diagonal {
        term_degree(l)?;
        term_degree(r)?;
    }

    Ok(RingFile {
        name,
        dimension,
        generators: generators.into_iter().map(|(g, d, _)| (g, d)).collect(),
        relations: relations
            .into_iter()
            .map(|e| e.terms.into_iter().map(RawTerm::into_term).collect())
            .collect(),
        chern_tangent: chern.terms.into_iter().map(RawTerm::into_term).collect(),
        diagonal: diagonal
            .into_iter()
            .map(|(l, r)| TensorTerm {
                coeff: l.coeff * r.coeff,
                left: l.factors.into_iter().map(|(n, e, _)| (n, e)).collect(),
                right: r.factors.into_iter().map(|(n, e, _)| (n, e)).collect(),
            })
            .collect(),
        point: point.terms.into_iter().map(RawTerm::into_term).collect(),
    })
}

/// Parse a single expression over the display names of `vars` (for example `h0*e + 2*f`).
pub fn parse_expression(text: &str, vars: &Arc<VarList>) -> Result<Polynomial, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    p.skip_newlines();
    let e = p.expression()?;
    p.skip_newlines();
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["`+`", "`-`", "`*`", "end of input"]));
    }
    let names: Vec<String> = vars.gens().iter().map(|g| format!("`{}`", g.display_name())).collect();
    let mut out = Polynomial::zero(vars);
    for t in e.terms {
        let mut mono = Polynomial::constant(vars, Rational::one());
        for (n, exp, fp) in &t.factors {
            let i = vars.position_display(n).ok_or_else(|| ParseError {
                line: fp.line,
                column: fp.column,
                message: format!("unknown generator `{n}`"),
                expected: names.clone(),
            })?;
            mono = &mono * &Polynomial::var(vars, i).pow(*exp);
        }
        out = &out + &mono.scale(&t.coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Generator};

    const P2: &str = "variety P2 dim 2\ngenerators: h:1\nrelations: h^3\nchern_tangent: 1 + 3*h + 3*h^2\ndiagonal: h^2 (x) 1 + h (x) h + 1 (x) h^2\npoint: h^2\n";

    #[test]
    fn plane_document() {
        let rf = parse_ring_file(P2).unwrap();
        assert_eq!(rf.name, "P2");
        assert_eq!(rf.dimension, 2);
        assert_eq!(rf.generators, vec![("h".to_string(), 1)]);
        assert_eq!(rf.relations.len(), 1);
        assert_eq!(rf.diagonal.len(), 3);
    }

    #[test]
    fn inhomogeneous_relation_is_positioned() {
        let text = "variety X dim 2\ngenerators: h:1\nrelations: h^2 + h\nchern_tangent: 1\ndiagonal: 1 (x) 1\npoint: h^2\n";
        let err = parse_ring_file(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.column, 18);
        assert!(err.message.starts_with("inhomogeneous relation at line 3"), "{}", err.message);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn syntax_errors_carry_expectations() {
        let cases = [
            ("variety X dim\n", 1, 14),
            ("variety X dim 1\ngenerators: h:1\nrelations: h^\n", 3, 14),
            ("variety X dim 1\ngenerators: h\n", 2, 14),
            ("variety X dim 1\ngenerators: h:1\ndiagonal: h 1\n", 3, 13),
            ("variety X dim 1\ngenerators: h:1\npoint: h ? 2\n", 3, 10),
            ("variety X dim 1\ngenerators: e:1\nchern_tangent: 1\ndiagonal: 1 (x) 1\npoint: e\n", 2, 13),
            ("variety X dim 1\ngenerators: h:1\nrelations: k^2\nchern_tangent: 1\ndiagonal: 1 (x) 1\npoint: h\n", 3, 12),
        ];
        for (text, line, column) in cases {
            let err = parse_ring_file(text).unwrap_err();
            assert_eq!((err.line, err.column), (line, column), "{text:?}: {err}");
            assert!(!err.expected.is_empty(), "{text:?}");
        }
    }

    #[test]
    fn missing_sections_and_comments() {
        let err = parse_ring_file("variety X dim 1 # a curve\ngenerators: h:1\n").unwrap_err();
        assert!(err.message.contains("chern_tangent"));
        let with_comments = P2.replace("relations: h^3", "# the cubic\nrelations:\n  h^3   # only one\n");
        assert_eq!(parse_ring_file(&with_comments).unwrap(), parse_ring_file(P2).unwrap());
    }

    #[test]
    fn standalone_expressions() {
        let v = VarList::new(vec![Generator::slotted("h", 0, 1), Generator::new("e", 1)]).unwrap();
        let p = parse_expression("-3/2*h0*e + e^2 - 2", &v).unwrap();
        let h0 = Polynomial::var(&v, 0);
        let e = Polynomial::var(&v, 1);
        let want = &(&(&h0 * &e).scale(&crate::poly::ratio(-3, 2)) + &e.pow(2)) - &Polynomial::constant(&v, rat(2));
        assert_eq!(p, want);
        assert_eq!(parse_expression(&p.to_string(), &v).unwrap(), p);
        let err = parse_expression("h1*e", &v).unwrap_err();
        assert_eq!(err.column, 1);
        assert!(parse_expression("e +", &v).is_err());
    }
}
