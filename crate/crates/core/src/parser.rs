//! Text syntax for manifold expressions.
//!
//! ```text
//! expr    := term { "#" term } ;
//! term    := [count "*"] primary ;
//! primary := atom ["~"] | "(" expr ")" | "reverse" "(" expr ")" ;
//! atom    := "S4" | "CP2" | "S2xS2" | "T4" | "K3"
//!          | "Hyp(" int ")" | "Cover(" int "," int ")"
//!          | "Surface(" key "=" value { "," key "=" value } ")" ;
//! ```
//!
//! A `~` after an atom reverses its orientation, so `CP2~` is CP2 with the
//! opposite orientation. Surface keys are `c1sq`, `chi_h` (both required),
//! `minimal`, `ample_K`, `spin` (`yes|no|unknown`) and `sc` (simply connected,
//! default `yes`). Whitespace between tokens is ignored.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::manifold::{
    normalize, Atom, AtomKind, DomainError, Manifold, ManifoldExpr, SurfaceSpec,
};
use crate::scalar::Tri;

/// Syntax error at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: BTreeSet<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)?;
        if !self.expected.is_empty() {
            let list: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, " (expected {})", list.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("domain error at byte {position}: {source}")]
    Domain {
        position: usize,
        #[source]
        source: DomainError,
    },
}

impl ExprError {
    pub fn position(&self) -> usize {
        match self {
            ExprError::Parse(p) => p.position,
            ExprError::Domain { position, .. } => *position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse::<i64>().map_err(|_| ParseError {
                position: start,
                message: "integer literal out of range".into(),
                expected: BTreeSet::new(),
            })?;
            out.push((start, Tok::Int(n)));
        } else if b"#*()~,=-".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("non-empty remainder");
            return Err(ParseError {
                position: i,
                message: format!("unexpected character `{ch}`"),
                expected: BTreeSet::new(),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

const ATOM_NAMES: [&str; 8] = ["S4", "CP2", "S2xS2", "T4", "K3", "Hyp", "Cover", "Surface"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<I: IntoIterator<Item = S>, S: Into<String>>(&self, expected: I) -> ExprError {
        let expected: BTreeSet<String> = expected.into_iter().map(Into::into).collect();
        ExprError::Parse(ParseError {
            position: self.pos(),
            message: format!("unexpected {}", self.peek().describe()),
            expected,
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error([format!("`{c}`")]))
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let negative = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.error(["integer"])),
        }
    }

    fn unsigned(&mut self) -> Result<(usize, u32), ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => match u32::try_from(n) {
                Ok(v) => {
                    self.bump();
                    Ok((pos, v))
                }
                Err(_) => Err(ExprError::Parse(ParseError {
                    position: pos,
                    message: format!("{n} does not fit in 32 bits"),
                    expected: BTreeSet::new(),
                })),
            },
            _ => Err(self.error(["integer"])),
        }
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ExprError> {
        let mut parts = vec![self.term()?];
        while *self.peek() == Tok::Sym('#') {
            self.bump();
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            ManifoldExpr::ConnectedSum(parts)
        })
    }

    fn term(&mut self) -> Result<ManifoldExpr, ExprError> {
        if let Tok::Int(_) = self.peek() {
            let (_, count) = self.unsigned()?;
            self.expect_sym('*')?;
            let p = self.primary()?;
            return Ok(p.repeat(count));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ManifoldExpr, ExprError> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "reverse" => {
                self.bump();
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e.reversed())
            }
            Tok::Ident(name) if ATOM_NAMES.contains(&name.as_str()) => {
                self.bump();
                let kind = self.atom_args(&name, start)?;
                let reversed = if *self.peek() == Tok::Sym('~') {
                    self.bump();
                    true
                } else {
                    false
                };
                Ok(ManifoldExpr::Atom(Atom::new(kind, reversed)))
            }
            _ => Err(self.error(
                ATOM_NAMES
                    .iter()
                    .map(|s| s.to_string())
                    .chain(["count", "`(`", "reverse"].map(String::from)),
            )),
        }
    }

    fn atom_args(&mut self, name: &str, start: usize) -> Result<AtomKind, ExprError> {
        let domain = |source: DomainError| ExprError::Domain {
            position: start,
            source,
        };
        match name {
            "S4" => Ok(AtomKind::S4),
            "CP2" => Ok(AtomKind::CP2),
            "S2xS2" => Ok(AtomKind::S2xS2),
            "T4" => Ok(AtomKind::T4),
            "K3" => Ok(AtomKind::Hypersurface(4)),
            "Hyp" => {
                self.expect_sym('(')?;
                let (_, d) = self.unsigned()?;
                self.expect_sym(')')?;
                AtomKind::hypersurface(d).map_err(domain)
            }
            "Cover" => {
                self.expect_sym('(')?;
                let (_, p) = self.unsigned()?;
                self.expect_sym(',')?;
                let (_, d) = self.unsigned()?;
                self.expect_sym(')')?;
                AtomKind::cyclic_cover(p, d).map_err(domain)
            }
            "Surface" => self.surface(start),
            _ => unreachable!("atom names are filtered by the caller"),
        }
    }

    fn surface(&mut self, start: usize) -> Result<AtomKind, ExprError> {
        const KEYS: [&str; 6] = ["c1sq", "chi_h", "minimal", "ample_K", "spin", "sc"];
        self.expect_sym('(')?;
        let mut c1sq = None;
        let mut chi_h = None;
        let mut minimal = None;
        let mut ample_k = None;
        let mut spin = None;
        let mut sc = None;
        loop {
            let key_pos = self.pos();
            let key = match self.peek().clone() {
                Tok::Ident(k) if KEYS.contains(&k.as_str()) => {
                    self.bump();
                    k
                }
                _ => return Err(self.error(KEYS.map(|k| format!("`{k}`")))),
            };
            self.expect_sym('=')?;
            let duplicate = match key.as_str() {
                "c1sq" => c1sq.replace(self.int()?).is_some(),
                "chi_h" => chi_h.replace(self.int()?).is_some(),
                "minimal" => minimal.replace(self.flag()?).is_some(),
                "ample_K" => ample_k.replace(self.flag()?).is_some(),
                "sc" => sc.replace(self.flag()?).is_some(),
                _ => spin.replace(self.tri()?).is_some(),
            };
            if duplicate {
                return Err(ExprError::Parse(ParseError {
                    position: key_pos,
                    message: format!("duplicate key `{key}`"),
                    expected: BTreeSet::new(),
                }));
            }
            if *self.peek() == Tok::Sym(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_sym(')')?;
        let missing = |k: &str| ExprError::Domain {
            position: start,
            source: DomainError(format!("Surface requires `{k}`")),
        };
        let c1sq = c1sq.ok_or_else(|| missing("c1sq"))?;
        let chi_h = chi_h.ok_or_else(|| missing("chi_h"))?;
        let ample_k = ample_k.unwrap_or(false);
        let minimal = minimal.unwrap_or(ample_k);
        let spec = SurfaceSpec::new(
            c1sq,
            chi_h,
            minimal,
            ample_k,
            spin.unwrap_or(Tri::Unknown),
            sc.unwrap_or(true),
        )
        .map_err(|source| ExprError::Domain {
            position: start,
            source,
        })?;
        Ok(AtomKind::AbstractSurface(spec))
    }

    fn word(&mut self, allowed: &[&str]) -> Result<String, ExprError> {
        match self.peek().clone() {
            Tok::Ident(w) if allowed.contains(&w.as_str()) => {
                self.bump();
                Ok(w)
            }
            _ => Err(self.error(allowed.iter().map(|s| s.to_string()))),
        }
    }

    fn flag(&mut self) -> Result<bool, ExprError> {
        let w = self.word(&["yes", "no", "true", "false"])?;
        Ok(w == "yes" || w == "true")
    }

    fn tri(&mut self) -> Result<Tri, ExprError> {
        let w = self.word(&["yes", "no", "unknown"])?;
        Ok(match w.as_str() {
            "yes" => Tri::Yes,
            "no" => Tri::No,
            _ => Tri::Unknown,
        })
    }
}

/// Parses `text` into a raw expression tree.
pub fn parse_expr(text: &str) -> Result<ManifoldExpr, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(["`#`", "end of input"]));
    }
    Ok(e)
}

/// Parses `text` and returns its canonical form.
pub fn parse(text: &str) -> Result<Manifold, ExprError> {
    parse_expr(text).map(|e| normalize(&e))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn format_kind(kind: &AtomKind) -> String {
    match kind {
        AtomKind::S4 => "S4".into(),
        AtomKind::CP2 => "CP2".into(),
        AtomKind::S2xS2 => "S2xS2".into(),
        AtomKind::T4 => "T4".into(),
        AtomKind::Hypersurface(4) => "K3".into(),
        AtomKind::Hypersurface(d) => format!("Hyp({d})"),
        AtomKind::CyclicCover { p, d } => format!("Cover({p},{d})"),
        AtomKind::AbstractSurface(s) => format!(
            "Surface(c1sq={}, chi_h={}, minimal={}, ample_K={}, spin={}, sc={})",
            s.c1sq(),
            s.chi_h(),
            yes_no(s.minimal()),
            yes_no(s.ample_k()),
            s.spin(),
            yes_no(s.simply_connected())
        ),
    }
}

/// Text form of a single atom.
pub fn format_atom(atom: &Atom) -> String {
    let base = format_kind(atom.kind());
    match (atom.is_reversed(), atom.kind()) {
        (false, _) => base,
        (true, AtomKind::CP2) => "CP2~".into(),
        (true, _) => format!("reverse({base})"),
    }
}

/// Text form of a canonical expression; `parse(&format(m)) == Ok(m)`.
pub fn format(m: &Manifold) -> String {
    if m.is_s4() {
        return "S4".into();
    }
    m.atoms()
        .iter()
        .map(|(a, n)| match n {
            1 => format_atom(a),
            n => format!("{n}*{}", format_atom(a)),
        })
        .collect::<Vec<_>>()
        .join(" # ")
}
