//! Lattice expressions such as `U + U(3) + A2*2` or `[-4 1; 1 -2]`.
//!
//! ```text
//! expr  := term ('+' term)*
//! term  := block ('*' INT)?
//! block := NAME ('(' args ')')? | '<' INT '>' | '[' rows ']'
//! ```

use std::fmt;

use thiserror::Error;

use crate::exactmath::{Int, IntMatrix};
use crate::lattice::catalog::{self, LatticeData};
use crate::lattice::{Lattice, LatticeError, LatticeInvariants};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeExpr {
    Block { name: String, args: Vec<i64> },
    /// `<k>`
    RankOne(i64),
    Sum(Vec<LatticeExpr>),
    Repeat(Box<LatticeExpr>, u32),
    LiteralGram(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl ExprError {
    fn syntax(position: usize, expected: impl Into<String>) -> Self {
        ExprError::Syntax {
            position,
            expected: expected.into(),
        }
    }
}

pub fn parse(src: &str) -> Result<LatticeExpr, ExprError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(ExprError::syntax(p.pos, "'+', '*' or end of input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::syntax(self.pos, format!("'{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<LatticeExpr, ExprError> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            LatticeExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<LatticeExpr, ExprError> {
        let b = self.block()?;
        if self.eat(b'*') {
            self.skip_ws();
            let at = self.pos;
            let n = self.int()?;
            let n = u32::try_from(n)
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| ExprError::syntax(at, "a positive repeat count"))?;
            return Ok(LatticeExpr::Repeat(Box::new(b), n));
        }
        Ok(b)
    }

    fn block(&mut self) -> Result<LatticeExpr, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(b'<') => {
                self.pos += 1;
                self.skip_ws();
                let k = self.int()?;
                self.expect(b'>')?;
                Ok(LatticeExpr::RankOne(k))
            }
            Some(b'[') => {
                self.pos += 1;
                self.rows()
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = self.src[start..self.pos].to_string();
                let mut args = Vec::new();
                if self.eat(b'(') {
                    self.skip_ws();
                    args.push(self.int()?);
                    while self.eat(b',') {
                        self.skip_ws();
                        args.push(self.int()?);
                    }
                    self.expect(b')')?;
                }
                Ok(LatticeExpr::Block { name, args })
            }
            _ => Err(ExprError::syntax(self.pos, "a lattice name, '<' or '['")),
        }
    }

    fn rows(&mut self) -> Result<LatticeExpr, ExprError> {
        let mut rows = vec![Vec::new()];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                Some(b';') => {
                    self.pos += 1;
                    rows.push(Vec::new());
                }
                Some(b',') => self.pos += 1,
                Some(c) if c == b'-' || c.is_ascii_digit() => {
                    let v = self.int()?;
                    rows.last_mut().expect("nonempty").push(v);
                }
                _ => return Err(ExprError::syntax(self.pos, "an integer, ';' or ']'")),
            }
        }
        if rows.iter().any(Vec::is_empty) {
            return Err(ExprError::syntax(self.pos, "nonempty matrix rows"));
        }
        Ok(LatticeExpr::LiteralGram(rows))
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(ExprError::syntax(start, "an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ExprError::syntax(start, "an integer that fits in 64 bits"))
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Block { name, args } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    let a: Vec<String> = args.iter().map(i64::to_string).collect();
                    write!(f, "({})", a.join(","))?;
                }
                Ok(())
            }
            LatticeExpr::RankOne(k) => write!(f, "<{k}>"),
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            LatticeExpr::Repeat(b, n) => write!(f, "{b}*{n}"),
            LatticeExpr::LiteralGram(rows) => {
                let r: Vec<String> = rows
                    .iter()
                    .map(|row| row.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "[{}]", r.join("; "))
            }
        }
    }
}

/// Splits `A2`, `D4`, `E8` into family letter and index.
fn indexed_name(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let family = chars.next()?;
    if !matches!(family, 'A' | 'D' | 'E') {
        return None;
    }
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((family, rest.parse().ok()?))
}

fn root_lattice(family: char, n: usize) -> Result<Lattice, LatticeError> {
    match family {
        'A' => catalog::a(n),
        'D' => catalog::d(n),
        _ => catalog::e(n),
    }
}

fn usize_arg(x: i64) -> Result<usize, LatticeError> {
    usize::try_from(x).map_err(|_| LatticeError::InvalidArgument(format!("{x} is not a count")))
}

fn scaled(l: Lattice, args: &[i64], name: &str) -> Result<LatticeData, LatticeError> {
    match args {
        [] => Ok(LatticeData::Gram(l)),
        [n] => Ok(LatticeData::Gram(l.rescale(*n)?)),
        _ => Err(LatticeError::InvalidArgument(format!(
            "{name} takes at most one scale argument"
        ))),
    }
}

fn evaluate_block(name: &str, args: &[i64]) -> Result<LatticeData, LatticeError> {
    if let Some((family, n)) = indexed_name(name) {
        return scaled(root_lattice(family, n)?, args, name);
    }
    match (name, args) {
        ("U", []) => Ok(LatticeData::Gram(catalog::hyperbolic(1)?)),
        ("U", [n]) => Ok(LatticeData::Gram(catalog::hyperbolic(*n)?)),
        ("A" | "D" | "E", [n]) => {
            Ok(LatticeData::Gram(root_lattice(name.chars().next().unwrap_or('A'), usize_arg(*n)?)?))
        }
        ("N", _) => scaled(catalog::nikulin(), args, name),
        ("H5", _) => scaled(catalog::h5(), args, name),
        ("K7", _) => scaled(catalog::k7(), args, name),
        ("S", [r, a, d]) => {
            let d = u8::try_from(*d)
                .ok()
                .filter(|&d| d <= 1)
                .ok_or_else(|| LatticeError::InvalidArgument("δ must be 0 or 1".into()))?;
            let (_, l) = catalog::s_lattice(usize_arg(*r)?, usize_arg(*a)?, d)?;
            Ok(LatticeData::Gram(l))
        }
        ("OmegaPerp", [m]) => Ok(catalog::omega_perp(usize_arg(*m)? as u64)?.1),
        ("Omega", [m]) => catalog::omega(usize_arg(*m)? as u64),
        _ => {
            let shown = LatticeExpr::Block {
                name: name.to_string(),
                args: args.to_vec(),
            };
            Err(LatticeError::UnknownName(shown.to_string()))
        }
    }
}

impl LatticeExpr {
    pub fn evaluate(&self) -> Result<LatticeData, LatticeError> {
        let data = match self {
            LatticeExpr::Block { name, args } => evaluate_block(name, args)?,
            LatticeExpr::RankOne(k) => LatticeData::Gram(catalog::rank_one(*k)?),
            LatticeExpr::LiteralGram(rows) => {
                let rows: Vec<Vec<Int>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                    .collect();
                let gram = IntMatrix::from_rows(rows).map_err(|_| LatticeError::NotSymmetric)?;
                LatticeData::Gram(Lattice::new(gram)?)
            }
            LatticeExpr::Repeat(b, n) => {
                let one = b.evaluate()?;
                (1..*n).fold(one.clone(), |acc, _| acc.direct_sum(&one))
            }
            LatticeExpr::Sum(terms) => {
                let mut it = terms.iter();
                let first = it
                    .next()
                    .ok_or(LatticeError::Empty)?
                    .evaluate()?;
                it.try_fold(first, |acc, t| Ok::<_, LatticeError>(acc.direct_sum(&t.evaluate()?)))?
            }
        };
        Ok(match data {
            LatticeData::Gram(l) => LatticeData::Gram(l.with_name(self.to_string())),
            other => other,
        })
    }

    /// The summands with sums and repeats flattened, and catalog aliases
    /// (`S(r,a,d)`, `OmegaPerp(m)`) replaced by their block expressions.
    /// Each block is in a canonical spelling (`A(2)` becomes `A2`, `U(1)`
    /// becomes `U`).
    pub fn blocks(&self) -> Result<Vec<LatticeExpr>, LatticeError> {
        let mut out = Vec::new();
        self.collect_blocks(&mut out)?;
        Ok(out)
    }

    fn collect_blocks(&self, out: &mut Vec<LatticeExpr>) -> Result<(), LatticeError> {
        match self {
            LatticeExpr::Sum(terms) => {
                for t in terms {
                    t.collect_blocks(out)?;
                }
            }
            LatticeExpr::Repeat(b, n) => {
                for _ in 0..*n {
                    b.collect_blocks(out)?;
                }
            }
            LatticeExpr::Block { name, args } => {
                let alias = match (name.as_str(), args.as_slice()) {
                    ("S", [r, a, d]) => {
                        let d = u8::try_from(*d).map_err(|_| {
                            LatticeError::InvalidArgument("δ must be 0 or 1".into())
                        })?;
                        Some(catalog::s_lattice(usize_arg(*r)?, usize_arg(*a)?, d)?.0)
                    }
                    ("OmegaPerp", [m]) => catalog::omega_perp(usize_arg(*m)? as u64)?
                        .0
                        .map(str::to_string),
                    _ => None,
                };
                match alias {
                    Some(src) => parse(&src)
                        .expect("catalog expressions parse")
                        .collect_blocks(out)?,
                    None => out.push(self.canonical_block()),
                }
            }
            _ => out.push(self.clone()),
        }
        Ok(())
    }

    fn canonical_block(&self) -> LatticeExpr {
        let LatticeExpr::Block { name, args } = self else {
            return self.clone();
        };
        match (name.as_str(), args.as_slice()) {
            ("U", [1]) => LatticeExpr::Block {
                name: "U".into(),
                args: vec![],
            },
            ("A" | "D" | "E", [n, rest @ ..]) => LatticeExpr::Block {
                name: format!("{name}{n}"),
                args: rest.to_vec(),
            },
            ("N" | "H5" | "K7", [1]) => LatticeExpr::Block {
                name: name.clone(),
                args: vec![],
            },
            (_, [1]) if indexed_name(name).is_some() => LatticeExpr::Block {
                name: name.clone(),
                args: vec![],
            },
            _ => self.clone(),
        }
    }
}

/// Parses and evaluates `src`, requiring a Gram matrix.
pub fn make_named(src: &str) -> Result<Lattice, ExprError> {
    match parse(src)?.evaluate()? {
        LatticeData::Gram(l) => Ok(l),
        LatticeData::Invariants(_) => Err(LatticeError::NoGram(src.trim().to_string()).into()),
    }
}

/// Parses and evaluates `src` to a lattice or, for blocks known only by
/// their invariants, to those invariants.
pub fn evaluate(src: &str) -> Result<LatticeData, ExprError> {
    Ok(parse(src)?.evaluate()?)
}

pub fn evaluate_invariants(src: &str) -> Result<LatticeInvariants, ExprError> {
    Ok(evaluate(src)?.invariants())
}
