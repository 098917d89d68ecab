//! Field specifications (`Q`, `F(5)`, `F(4):w^2+w+1`, `Q(t)`) and element
//! expressions such as `(t^2+1)/(t-3)` or `3/4 + 2*w`.

use num_bigint::BigInt;

use super::{Elem, Field, FieldKind, Val};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::Parse("division by a non-invertible element".into()))?;
                acc = acc * inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Elem> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u64 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse(
                    "expected a nonnegative integer exponent".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Elem> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.field.from_bigint(&n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.field
                    .symbol_value(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown symbol {name} in {}", self.field)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(crate) fn parse_elem(field: &Field, s: &str) -> Result<Elem> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        field,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

impl Field {
    /// Value of a named generator anywhere in the tower, embedded here.
    pub(crate) fn symbol_value(&self, name: &str) -> Option<Elem> {
        match self.kind() {
            FieldKind::Rational => None,
            FieldKind::Finite(ff) => (ff.k > 1 && ff.symbol == name).then(|| self.generator()),
            FieldKind::RationalFunction { coeff, var } => {
                if var == name {
                    Some(self.generator())
                } else {
                    coeff.symbol_value(name).map(|c| self.lift_coeff(&c))
                }
            }
            FieldKind::Quadratic(q) => {
                if q.symbol == name {
                    Some(self.generator())
                } else {
                    q.base.symbol_value(name).map(|b| self.lift(&b))
                }
            }
        }
    }

    /// Embed an element of a subfield of the tower.
    pub fn embed(&self, e: &Elem) -> Elem {
        if e.field() == self {
            return e.clone();
        }
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => self.lift_coeff(&coeff.embed(e)),
            FieldKind::Quadratic(q) => self.lift(&q.base.embed(e)),
            _ => panic!("{} is not a subfield of {}", e.field(), self),
        }
    }
}

/// Parse a field specification.
pub fn parse_field_spec(spec: &str) -> Result<Field> {
    let s = spec.trim();
    if let Some(stripped) = s.strip_suffix(')') {
        if let Some(open) = stripped.rfind('(') {
            let var = &stripped[open + 1..];
            let prefix = &stripped[..open];
            if !prefix.is_empty()
                && !var.is_empty()
                && var.chars().next().unwrap().is_alphabetic()
                && var.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                let coeff = parse_field_spec(prefix)?;
                return Field::rational_functions(&coeff, var);
            }
        }
    }
    if s == "Q" || s == "QQ" {
        return Ok(Field::rationals());
    }
    let rest = s
        .strip_prefix("GF(")
        .or_else(|| s.strip_prefix("F("))
        .ok_or_else(|| Error::Parse(format!("unrecognized field spec {s:?}")))?;
    let close = rest
        .find(')')
        .ok_or_else(|| Error::Parse(format!("unrecognized field spec {s:?}")))?;
    let q: u64 = rest[..close]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad field size in {s:?}")))?;
    let tail = rest[close + 1..].trim();
    if tail.is_empty() {
        return Field::finite(q);
    }
    let modulus = tail
        .strip_prefix(':')
        .ok_or_else(|| Error::Parse(format!("unexpected {tail:?} in {s:?}")))?;
    let prime = Field::finite(q)?;
    let p = prime.characteristic();
    let fp = Field::finite(p)?;
    let symbol = tokenize(modulus)?
        .into_iter()
        .find_map(|t| match t {
            Tok::Ident(n) => Some(n),
            _ => None,
        })
        .ok_or_else(|| Error::Parse("modulus needs a variable".into()))?;
    let ring = Field::rational_functions(&fp, &symbol)?;
    let m = parse_elem(&ring, modulus)?;
    let (num, den) = ring.fraction_parts(&m);
    if den.len() != 1 {
        return Err(Error::Parse("modulus must be a polynomial".into()));
    }
    let coeffs: Vec<u64> = num
        .iter()
        .map(|c| match &c.val {
            Val::Fin(v) => v[0],
            _ => unreachable!(),
        })
        .collect();
    let f = Field::finite_with_modulus(p, coeffs, &symbol)?;
    if f.size() != Some(q) {
        return Err(Error::Parse(format!(
            "modulus degree does not match F({q})"
        )));
    }
    Ok(f)
}
