//! JSON literals for extensions and quaternion algebras.
//!
//! An extension is `"split"` or a monic quadratic in `x` over the base,
//! e.g. `"x^2-2"` or `"x^2+x+t"`. A quaternion algebra is
//! `{"F": .., "ext": .., "E": {"alpha": .., "beta": ..}, "a": ..}` with the
//! parameters written over K (generator named by `"symbol"`, default `w`),
//! or, for split K, by its two components over F.

use serde::{Deserialize, Serialize};

use crate::corestriction::split_quaternion;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldKind};
use crate::quaternion::Quaternion;

/// `K = base[x]/(x^2 - alpha x - beta)` from `"x^2-a*x-b"`, or `base × base`.
pub fn parse_extension(base: &Field, ext: &str, symbol: &str) -> Result<Field> {
    if ext.trim() == "split" {
        return Field::split(base, symbol);
    }
    let (alpha, beta) = match base.kind() {
        FieldKind::Rational | FieldKind::Finite(_) => {
            let ring = Field::rational_functions(base, "x")?;
            let p = ring.parse_elem(ext)?;
            let (num, den) = ring.fraction_parts(&p);
            if den.len() != 1 || num.len() != 3 || !(num[2].clone() / den[0].clone()).is_one() {
                return Err(not_monic(ext));
            }
            (-(num[1].clone() / den[0].clone()), -(num[0].clone() / den[0].clone()))
        }
        _ => {
            // interpolate p(0), p(1), p(c) and check a fourth value
            let c = base.generator();
            let at = |v: &Elem| base.parse_elem(&substitute_x(ext, &v.to_string()));
            let n = at(&base.zero())?;
            let s1 = at(&base.one())? - n.clone();
            let sc = at(&c)? - n.clone();
            let lead = (sc - c.clone() * s1.clone()) / (c.clone() * c.clone() - c.clone());
            let m = s1 - lead.clone();
            let d = c.clone() * c.clone() + base.one();
            let pd = at(&d)?;
            if !lead.is_one() || pd != d.clone() * d.clone() + m.clone() * d + n.clone() {
                return Err(not_monic(ext));
            }
            (-m, -n)
        }
    };
    Field::quadratic(base, &alpha, &beta, symbol)
}

fn not_monic(ext: &str) -> Error {
    Error::Parse(format!("expected a monic quadratic in x, got {ext:?}"))
}

/// Replace the standalone variable `x` by `(value)`.
fn substitute_x(expr: &str, value: &str) -> String {
    let chars: Vec<char> = expr.chars().collect();
    let mut out = String::new();
    for (i, &ch) in chars.iter().enumerate() {
        let ident = |j: Option<&char>| j.is_some_and(|c| c.is_alphanumeric() || *c == '_');
        if ch == 'x' && !ident(i.checked_sub(1).and_then(|j| chars.get(j))) && !ident(chars.get(i + 1)) {
            out.push('(');
            out.push_str(value);
            out.push(')');
        } else {
            out.push(ch);
        }
    }
    out
}

/// Inverse of [`parse_extension`].
pub fn extension_string(k: &Field) -> String {
    if k.is_split() {
        return "split".into();
    }
    format!("x^2-({})*x-({})", k.quad_alpha(), k.quad_beta())
}

/// `{"F": "Q", "ext": "x^2-2", "symbol": "r"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtLiteral {
    #[serde(rename = "F")]
    pub f: String,
    pub ext: String,
    #[serde(default = "default_symbol")]
    pub symbol: String,
}

impl ExtLiteral {
    pub fn to_field(&self) -> Result<Field> {
        parse_extension(&Field::parse(&self.f)?, &self.ext, &self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ELiteral {
    pub alpha: String,
    pub beta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLiteral {
    #[serde(rename = "E")]
    pub e: ELiteral,
    pub a: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionLiteral {
    #[serde(rename = "F")]
    pub f: String,
    /// Absent: the algebra lives over F itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<String>,
    #[serde(default = "default_symbol")]
    pub symbol: String,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<ELiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// For split K: the two quaternion algebras over F.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentLiteral>>,
}

fn default_symbol() -> String {
    "w".into()
}

fn component(f: &Field, c: &ComponentLiteral) -> Result<Quaternion> {
    Quaternion::new(f, &f.parse_elem(&c.e.alpha)?, &f.parse_elem(&c.e.beta)?, &f.parse_elem(&c.a)?)
}

impl QuaternionLiteral {
    pub fn base_field(&self) -> Result<Field> {
        let f = Field::parse(&self.f)?;
        match &self.ext {
            Some(ext) => parse_extension(&f, ext, &self.symbol),
            None => Ok(f),
        }
    }

    pub fn to_quaternion(&self) -> Result<Quaternion> {
        let k = self.base_field()?;
        if let Some(cs) = &self.components {
            if cs.len() != 2 || !k.is_split() {
                return Err(Error::Parse("components need ext \"split\" and two entries".into()));
            }
            let f = k.base().unwrap();
            return split_quaternion(&k, &component(f, &cs[0])?, &component(f, &cs[1])?);
        }
        let (Some(e), Some(a)) = (&self.e, &self.a) else {
            return Err(Error::Parse("quaternion needs E and a, or components".into()));
        };
        Quaternion::new(&k, &k.parse_elem(&e.alpha)?, &k.parse_elem(&e.beta)?, &k.parse_elem(a)?)
    }

    pub fn from_quaternion(q: &Quaternion) -> Self {
        let k = q.base();
        let (f, ext, symbol) = match k.base() {
            Some(f) => (f.spec(), Some(extension_string(k)), k.symbols().last().cloned().unwrap_or_else(default_symbol)),
            None => (k.spec(), None, default_symbol()),
        };
        QuaternionLiteral {
            f,
            ext,
            symbol,
            e: Some(ELiteral { alpha: q.alpha().to_string(), beta: q.beta().to_string() }),
            a: Some(q.a().to_string()),
            components: None,
        }
    }

    /// Split-K literal from two algebras over F given as `(alpha, beta, a)`.
    pub fn split(f: &str, c1: [&str; 3], c2: [&str; 3]) -> Self {
        let comp = |c: [&str; 3]| ComponentLiteral {
            e: ELiteral { alpha: c[0].into(), beta: c[1].into() },
            a: c[2].into(),
        };
        QuaternionLiteral {
            f: f.into(),
            ext: Some("split".into()),
            symbol: default_symbol(),
            e: None,
            a: None,
            components: Some(vec![comp(c1), comp(c2)]),
        }
    }
}

/// Parse a list of element strings over `f`.
pub fn parse_vector(f: &Field, v: &[String]) -> Result<Vec<Elem>> {
    v.iter().map(|s| f.parse_elem(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extensions_round_trip() {
        let q = Field::rationals();
        let k = parse_extension(&q, "x^2-2", "r").unwrap();
        assert_eq!(k.quad_beta(), q.from_i64(2));
        assert_eq!(parse_extension(&q, &extension_string(&k), "r").unwrap(), k);
        let f2t = Field::parse("F(2)(t)").unwrap();
        let k2 = parse_extension(&f2t, "x^2+x+t", "w").unwrap();
        assert_eq!(k2.quad_alpha(), f2t.one());
        assert!(parse_extension(&q, "2*x^2-1", "r").is_err());
        assert!(parse_extension(&q, "split", "e").unwrap().is_split());
    }

    #[test]
    fn quaternion_literals() {
        let lit: QuaternionLiteral = serde_json::from_str(
            r#"{"F": "Q", "ext": "x^2-2", "symbol": "r", "E": {"alpha": "0", "beta": "-1"}, "a": "-1"}"#,
        )
        .unwrap();
        let h = lit.to_quaternion().unwrap();
        assert_eq!(QuaternionLiteral::from_quaternion(&h).to_quaternion().unwrap(), h);
        let s = QuaternionLiteral::split("Q(t)", ["0", "-1", "-1"], ["0", "t", "2"]);
        let qs = s.to_quaternion().unwrap();
        assert!(qs.base().is_split());
        assert_eq!(QuaternionLiteral::from_quaternion(&qs).to_quaternion().unwrap(), qs);
    }
}
