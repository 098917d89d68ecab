//! Exact base fields and quadratic etale extensions.
//!
//! A [`Field`] is a cheap, shareable handle to a [`FieldKind`]. Elements
//! ([`Elem`]) carry their field; combining elements of different fields is a
//! programmer error and panics.

mod finite;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub use finite::FiniteField;
pub use parse::parse_field_spec;

/// Internal element representation. Always kept in canonical form so that
/// structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Val {
    Rat(BigRational),
    /// Coefficients of a polynomial of degree < k over F_p, length exactly k.
    Fin(Vec<u64>),
    /// Reduced fraction; denominator monic, numerator trimmed. Zero is `([], [1])`.
    RatFn(Vec<Val>, Vec<Val>),
    /// `a + b·w` over the base of a quadratic extension.
    Quad(Box<(Val, Val)>),
}

#[derive(Debug, PartialEq)]
pub struct QuadraticExt {
    pub(crate) base: Field,
    pub(crate) alpha: Val,
    pub(crate) beta: Val,
    pub(crate) symbol: String,
    pub(crate) split: bool,
    pub(crate) is_field: bool,
}

#[derive(Debug, PartialEq)]
pub enum FieldKind {
    Rational,
    Finite(FiniteField),
    RationalFunction { coeff: Field, var: String },
    Quadratic(QuadraticExt),
}

#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

#[derive(Clone)]
pub struct Elem {
    field: Field,
    val: Val,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val && self.field == other.field
    }
}
impl Eq for Elem {}

impl std::hash::Hash for Elem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.val.hash(state)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_val(&self.val))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_val(&self.val))
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rational))
    }

    /// The field with `q = p^k` elements, using the lexicographically first
    /// monic irreducible modulus when `k > 1`.
    pub fn finite(q: u64) -> Result<Field> {
        Ok(Field(Arc::new(FieldKind::Finite(FiniteField::new(
            q, None, "g",
        )?))))
    }

    /// `F_{p^k}` with an explicit monic modulus given as coefficients (low to high).
    pub fn finite_with_modulus(p: u64, modulus: Vec<u64>, symbol: &str) -> Result<Field> {
        Ok(Field(Arc::new(FieldKind::Finite(
            FiniteField::with_modulus(p, modulus, symbol)?,
        ))))
    }

    pub fn rational_functions(coeff: &Field, var: &str) -> Result<Field> {
        match coeff.kind() {
            FieldKind::Rational | FieldKind::Finite(_) => {}
            _ => {
                return Err(Error::Unsupported(
                    "rational functions need Q or a finite coefficient field".into(),
                ))
            }
        }
        if coeff.symbols().iter().any(|s| s == var) {
            return Err(Error::Parse(format!("variable {var} already in use")));
        }
        Ok(Field(Arc::new(FieldKind::RationalFunction {
            coeff: coeff.clone(),
            var: var.to_string(),
        })))
    }

    /// `K = F[X]/(X^2 - alpha X - beta)`. Fails with `NotEtale` when the
    /// polynomial is inseparable.
    pub fn quadratic(base: &Field, alpha: &Elem, beta: &Elem, symbol: &str) -> Result<Field> {
        assert_eq!(&alpha.field, base, "alpha must lie in the base field");
        assert_eq!(&beta.field, base, "beta must lie in the base field");
        if matches!(base.kind(), FieldKind::Quadratic(_)) {
            return Err(Error::Unsupported("towers of quadratic extensions".into()));
        }
        if base.symbols().iter().any(|s| s == symbol) {
            return Err(Error::Parse(format!("symbol {symbol} already in use")));
        }
        let separable = if base.characteristic() == 2 {
            !alpha.is_zero()
        } else {
            !(alpha.clone() * alpha.clone() + base.from_i64(4) * beta.clone()).is_zero()
        };
        if !separable {
            return Err(Error::NotEtale(format!(
                "X^2 - ({alpha})X - ({beta}) is inseparable"
            )));
        }
        // X^2 - aX - b has a root iff X^2 + (-a)X + (-b) does.
        let root = base.quadratic_root(&(-alpha.clone()), &(-beta.clone()))?;
        Ok(Field(Arc::new(FieldKind::Quadratic(QuadraticExt {
            base: base.clone(),
            alpha: alpha.val.clone(),
            beta: beta.val.clone(),
            symbol: symbol.to_string(),
            split: false,
            is_field: root.is_none(),
        }))))
    }

    /// The split algebra `F x F`, presented as `F[w]/(w^2 - w)` with `w = (0, 1)`.
    pub fn split(base: &Field, symbol: &str) -> Result<Field> {
        if matches!(base.kind(), FieldKind::Quadratic(_)) {
            return Err(Error::Unsupported("towers of quadratic extensions".into()));
        }
        Ok(Field(Arc::new(FieldKind::Quadratic(QuadraticExt {
            base: base.clone(),
            alpha: base.one().val,
            beta: base.zero().val,
            symbol: symbol.to_string(),
            split: true,
            is_field: false,
        }))))
    }

    pub fn parse(spec: &str) -> Result<Field> {
        parse_field_spec(spec)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    /// Is this a field (as opposed to the split algebra, or a reducible presentation)?
    pub fn is_field(&self) -> bool {
        match self.kind() {
            FieldKind::Quadratic(q) => q.is_field,
            _ => true,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Rational => 0,
            FieldKind::Finite(ff) => ff.p,
            FieldKind::RationalFunction { coeff, .. } => coeff.characteristic(),
            FieldKind::Quadratic(q) => q.base.characteristic(),
        }
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::Finite(ff) => Some(ff.size()),
            FieldKind::Quadratic(q) => q.base.size().map(|s| s * s),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Base field of a quadratic extension.
    pub fn base(&self) -> Option<&Field> {
        match self.kind() {
            FieldKind::Quadratic(q) => Some(&q.base),
            _ => None,
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind(), FieldKind::Quadratic(q) if q.split)
    }

    /// All symbols usable in element expressions, innermost first.
    pub fn symbols(&self) -> Vec<String> {
        match self.kind() {
            FieldKind::Rational => vec![],
            FieldKind::Finite(ff) if ff.k > 1 => vec![ff.symbol.clone()],
            FieldKind::Finite(_) => vec![],
            FieldKind::RationalFunction { coeff, var } => {
                let mut s = coeff.symbols();
                s.push(var.clone());
                s
            }
            FieldKind::Quadratic(q) => {
                let mut s = q.base.symbols();
                s.push(q.symbol.clone());
                s
            }
        }
    }

    pub fn spec(&self) -> String {
        match self.kind() {
            FieldKind::Rational => "Q".into(),
            FieldKind::Finite(ff) => ff.spec(),
            FieldKind::RationalFunction { coeff, var } => format!("{}({})", coeff.spec(), var),
            FieldKind::Quadratic(q) => {
                if q.split {
                    format!("{} x {}", q.base.spec(), q.base.spec())
                } else {
                    let a = q.base.fmt_val(&q.alpha);
                    let b = q.base.fmt_val(&q.beta);
                    format!(
                        "{}[{}]/({}^2 - ({})*{} - ({}))",
                        q.base.spec(),
                        q.symbol,
                        q.symbol,
                        a,
                        q.symbol,
                        b
                    )
                }
            }
        }
    }

    fn wrap(&self, val: Val) -> Elem {
        Elem {
            field: self.clone(),
            val,
        }
    }

    pub fn zero(&self) -> Elem {
        self.wrap(self.zero_val())
    }

    pub fn one(&self) -> Elem {
        self.wrap(self.one_val())
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        self.wrap(self.int_val(n))
    }

    /// Image of a rational number; panics in characteristic p when the
    /// denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Elem {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        n * d
            .inv()
            .expect("denominator vanishes in this characteristic")
    }

    /// The distinguished generator: `w` of a quadratic extension, the
    /// variable of a rational function field, or the modulus root of `F_{p^k}`.
    pub fn generator(&self) -> Elem {
        match self.kind() {
            FieldKind::Rational => panic!("Q has no generator"),
            FieldKind::Finite(ff) => {
                assert!(ff.k > 1, "prime field has no generator");
                let mut v = vec![0; ff.k];
                v[1] = 1;
                self.wrap(Val::Fin(v))
            }
            FieldKind::RationalFunction { coeff, .. } => self.wrap(Val::RatFn(
                vec![coeff.zero_val(), coeff.one_val()],
                vec![coeff.one_val()],
            )),
            FieldKind::Quadratic(q) => {
                self.wrap(Val::Quad(Box::new((q.base.zero_val(), q.base.one_val()))))
            }
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        parse::parse_elem(self, s)
    }

    // ----- extension structure -----

    /// `a + b·w` in a quadratic extension.
    pub fn quad(&self, a: &Elem, b: &Elem) -> Elem {
        let q = self.quad_ext();
        assert_eq!(a.field, q.base);
        assert_eq!(b.field, q.base);
        self.wrap(Val::Quad(Box::new((a.val.clone(), b.val.clone()))))
    }

    /// Embed a base-field element into a quadratic extension.
    pub fn lift(&self, a: &Elem) -> Elem {
        let q = self.quad_ext();
        self.quad(a, &q.base.zero())
    }

    pub fn quad_alpha(&self) -> Elem {
        let q = self.quad_ext();
        q.base.wrap(q.alpha.clone())
    }

    pub fn quad_beta(&self) -> Elem {
        let q = self.quad_ext();
        q.base.wrap(q.beta.clone())
    }

    /// The functional `s(a + b·w) = b` on a quadratic extension.
    pub fn s_functional(&self, x: &Elem) -> Elem {
        assert_eq!(&x.field, self);
        x.coords().1
    }

    /// Nonzero `kappa` with `conj(kappa) = -kappa`: `2w - alpha`, or 1 in
    /// characteristic 2.
    pub fn kappa(&self) -> Elem {
        let q = self.quad_ext();
        if self.characteristic() == 2 {
            self.one()
        } else {
            self.quad(&-q.base.wrap(q.alpha.clone()), &q.base.from_i64(2))
        }
    }

    pub(crate) fn quad_ext(&self) -> &QuadraticExt {
        match self.kind() {
            FieldKind::Quadratic(q) => q,
            _ => panic!("not a quadratic extension: {}", self.spec()),
        }
    }

    /// Split-algebra element from its two components.
    pub fn split_pair(&self, a: &Elem, b: &Elem) -> Elem {
        assert!(self.is_split());
        // (a, b) = a·1 + (b - a)·w
        self.quad(a, &(b.clone() - a.clone()))
    }

    // ----- enumeration and sampling -----

    /// All elements of a finite field (or finite split algebra).
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self.kind() {
            FieldKind::Finite(ff) => {
                Some(ff.all_vals().into_iter().map(|v| self.wrap(v)).collect())
            }
            FieldKind::Quadratic(q) => {
                let base = q.base.elements()?;
                let mut out = Vec::with_capacity(base.len() * base.len());
                for b in &base {
                    for a in &base {
                        out.push(self.quad(a, b));
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Small elements used by bounded searches: integers of absolute value at
    /// most `height` over Q, every element of a finite field, polynomials of
    /// degree at most `height` with small coefficients over function fields.
    pub fn small_elements(&self, height: u32) -> Vec<Elem> {
        match self.kind() {
            FieldKind::Rational => {
                let h = height as i64;
                let mut out = vec![self.zero()];
                for n in 1..=h {
                    out.push(self.from_i64(n));
                    out.push(self.from_i64(-n));
                }
                out
            }
            FieldKind::Finite(_) => self.elements().unwrap(),
            FieldKind::RationalFunction { coeff, .. } => {
                let cs = coeff.small_elements(1);
                let t = self.generator();
                let mut out = vec![self.zero()];
                let mut power = self.one();
                for _ in 0..=height {
                    let mut next = Vec::new();
                    for p in &out {
                        for c in &cs {
                            next.push(p.clone() + self.lift_coeff(c) * power.clone());
                        }
                    }
                    out = next;
                    power = power * t.clone();
                }
                out.sort_by_key(|e| e.complexity());
                out.dedup();
                out
            }
            FieldKind::Quadratic(q) => {
                let bs = q.base.small_elements(height);
                let mut out = Vec::new();
                for b in &bs {
                    for a in &bs {
                        out.push(self.quad(a, b));
                    }
                }
                out.sort_by_key(|e| e.complexity());
                out
            }
        }
    }

    /// Embed a coefficient into a rational function field.
    pub fn lift_coeff(&self, c: &Elem) -> Elem {
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => {
                assert_eq!(&c.field, coeff);
                self.wrap(self.fn_from_poly(vec![c.val.clone()]))
            }
            _ => panic!("not a rational function field"),
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Elem {
        match self.kind() {
            FieldKind::Rational => {
                let n = rng.gen_range(-height..=height);
                let d = rng.gen_range(1..=height.clamp(1, 4));
                self.wrap(Val::Rat(BigRational::new(n.into(), d.into())))
            }
            FieldKind::Finite(ff) => {
                let v = (0..ff.k).map(|_| rng.gen_range(0..ff.p)).collect();
                self.wrap(Val::Fin(v))
            }
            FieldKind::RationalFunction { coeff, .. } => {
                let deg = rng.gen_range(0..=2);
                let num: Vec<Elem> = (0..=deg).map(|_| coeff.random(rng, height)).collect();
                let ddeg = rng.gen_range(0..=1);
                let mut den: Vec<Elem> = (0..ddeg).map(|_| coeff.random(rng, height)).collect();
                den.push(coeff.one());
                let t = self.generator();
                let eval = |cs: &[Elem]| {
                    cs.iter()
                        .rev()
                        .fold(self.zero(), |acc, c| acc * t.clone() + self.lift_coeff(c))
                };
                let d = eval(&den);
                if d.is_zero() {
                    return eval(&num);
                }
                eval(&num) / d
            }
            FieldKind::Quadratic(q) => {
                let a = q.base.random(rng, height);
                let b = q.base.random(rng, height);
                self.quad(&a, &b)
            }
        }
    }

    // ----- value-level arithmetic -----

    pub(crate) fn zero_val(&self) -> Val {
        match self.kind() {
            FieldKind::Rational => Val::Rat(BigRational::zero()),
            FieldKind::Finite(ff) => Val::Fin(vec![0; ff.k]),
            FieldKind::RationalFunction { coeff, .. } => Val::RatFn(vec![], vec![coeff.one_val()]),
            FieldKind::Quadratic(q) => Val::Quad(Box::new((q.base.zero_val(), q.base.zero_val()))),
        }
    }

    pub(crate) fn one_val(&self) -> Val {
        match self.kind() {
            FieldKind::Rational => Val::Rat(BigRational::one()),
            FieldKind::Finite(ff) => {
                let mut v = vec![0; ff.k];
                v[0] = 1;
                Val::Fin(v)
            }
            FieldKind::RationalFunction { coeff, .. } => {
                Val::RatFn(vec![coeff.one_val()], vec![coeff.one_val()])
            }
            FieldKind::Quadratic(q) => Val::Quad(Box::new((q.base.one_val(), q.base.zero_val()))),
        }
    }

    fn int_val(&self, n: &BigInt) -> Val {
        match self.kind() {
            FieldKind::Rational => Val::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Finite(ff) => {
                let p = BigInt::from(ff.p);
                let r = n.mod_floor(&p).to_u64().unwrap();
                let mut v = vec![0; ff.k];
                v[0] = r;
                Val::Fin(v)
            }
            FieldKind::RationalFunction { coeff, .. } => {
                let c = coeff.int_val(n);
                self.fn_from_poly(vec![c])
            }
            FieldKind::Quadratic(q) => Val::Quad(Box::new((q.base.int_val(n), q.base.zero_val()))),
        }
    }

    pub(crate) fn is_zero_val(&self, v: &Val) -> bool {
        match v {
            Val::Rat(r) => r.is_zero(),
            Val::Fin(c) => c.iter().all(|&x| x == 0),
            Val::RatFn(n, _) => n.is_empty(),
            Val::Quad(ab) => {
                let q = self.quad_ext();
                q.base.is_zero_val(&ab.0) && q.base.is_zero_val(&ab.1)
            }
        }
    }

    pub(crate) fn add_val(&self, a: &Val, b: &Val) -> Val {
        match (self.kind(), a, b) {
            (FieldKind::Rational, Val::Rat(x), Val::Rat(y)) => Val::Rat(x + y),
            (FieldKind::Finite(ff), Val::Fin(x), Val::Fin(y)) => Val::Fin(ff.add(x, y)),
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n1, d1), Val::RatFn(n2, d2)) => {
                if d1 == d2 {
                    let n = poly::add(coeff, n1, n2);
                    return self.fn_normalize(n, d1.clone());
                }
                let n = poly::add(coeff, &poly::mul(coeff, n1, d2), &poly::mul(coeff, n2, d1));
                self.fn_normalize(n, poly::mul(coeff, d1, d2))
            }
            (FieldKind::Quadratic(q), Val::Quad(x), Val::Quad(y)) => Val::Quad(Box::new((
                q.base.add_val(&x.0, &y.0),
                q.base.add_val(&x.1, &y.1),
            ))),
            _ => panic!("value does not belong to {}", self.spec()),
        }
    }

    pub(crate) fn neg_val(&self, a: &Val) -> Val {
        match (self.kind(), a) {
            (FieldKind::Rational, Val::Rat(x)) => Val::Rat(-x),
            (FieldKind::Finite(ff), Val::Fin(x)) => Val::Fin(ff.neg(x)),
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => {
                Val::RatFn(poly::neg(coeff, n), d.clone())
            }
            (FieldKind::Quadratic(q), Val::Quad(x)) => {
                Val::Quad(Box::new((q.base.neg_val(&x.0), q.base.neg_val(&x.1))))
            }
            _ => panic!("value does not belong to {}", self.spec()),
        }
    }

    pub(crate) fn mul_val(&self, a: &Val, b: &Val) -> Val {
        match (self.kind(), a, b) {
            (FieldKind::Rational, Val::Rat(x), Val::Rat(y)) => Val::Rat(x * y),
            (FieldKind::Finite(ff), Val::Fin(x), Val::Fin(y)) => Val::Fin(ff.mul(x, y)),
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n1, d1), Val::RatFn(n2, d2)) => {
                if n1.is_empty() || n2.is_empty() {
                    return self.zero_val();
                }
                let n = poly::mul(coeff, n1, n2);
                let d = poly::mul(coeff, d1, d2);
                if d.len() == 1 {
                    return Val::RatFn(n, d);
                }
                self.fn_normalize(n, d)
            }
            (FieldKind::Quadratic(q), Val::Quad(x), Val::Quad(y)) => {
                let bf = &q.base;
                let ac = bf.mul_val(&x.0, &y.0);
                let bd = bf.mul_val(&x.1, &y.1);
                let ad = bf.mul_val(&x.0, &y.1);
                let bc = bf.mul_val(&x.1, &y.0);
                // w^2 = alpha w + beta
                let c0 = bf.add_val(&ac, &bf.mul_val(&bd, &q.beta));
                let c1 = bf.add_val(&bf.add_val(&ad, &bc), &bf.mul_val(&bd, &q.alpha));
                Val::Quad(Box::new((c0, c1)))
            }
            _ => panic!("value does not belong to {}", self.spec()),
        }
    }

    pub(crate) fn inv_val(&self, a: &Val) -> Option<Val> {
        if self.is_zero_val(a) {
            return None;
        }
        match (self.kind(), a) {
            (FieldKind::Rational, Val::Rat(x)) => Some(Val::Rat(x.recip())),
            (FieldKind::Finite(ff), Val::Fin(x)) => Some(Val::Fin(ff.inv(x))),
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => {
                Some(self.fn_normalize_with(coeff, d.clone(), n.clone()))
            }
            (FieldKind::Quadratic(q), Val::Quad(_)) => {
                let e = self.wrap(a.clone());
                let n = e.norm();
                let ninv = n.inv()?;
                let conj = e.conj();
                let _ = q;
                Some((conj * self.lift(&ninv)).val)
            }
            _ => panic!("value does not belong to {}", self.spec()),
        }
    }

    fn fn_from_poly(&self, num: Vec<Val>) -> Val {
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => {
                let n = poly::trim(coeff, num);
                Val::RatFn(n, vec![coeff.one_val()])
            }
            _ => unreachable!(),
        }
    }

    fn fn_normalize(&self, n: Vec<Val>, d: Vec<Val>) -> Val {
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => self.fn_normalize_with(coeff, n, d),
            _ => unreachable!(),
        }
    }

    fn fn_normalize_with(&self, coeff: &Field, n: Vec<Val>, d: Vec<Val>) -> Val {
        let n = poly::trim(coeff, n);
        let d = poly::trim(coeff, d);
        assert!(!d.is_empty(), "zero denominator");
        if n.is_empty() {
            return Val::RatFn(vec![], vec![coeff.one_val()]);
        }
        let g = poly::gcd(coeff, &n, &d);
        let (mut n, mut d) = if g.len() > 1 {
            (poly::divrem(coeff, &n, &g).0, poly::divrem(coeff, &d, &g).0)
        } else {
            (n, d)
        };
        let lc = d.last().unwrap().clone();
        if lc != coeff.one_val() {
            let inv = coeff.inv_val(&lc).unwrap();
            n = poly::scale(coeff, &n, &inv);
            d = poly::scale(coeff, &d, &inv);
        }
        Val::RatFn(n, d)
    }

    // ----- formatting -----

    pub(crate) fn fmt_val(&self, v: &Val) -> String {
        match (self.kind(), v) {
            (FieldKind::Rational, Val::Rat(r)) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (FieldKind::Finite(ff), Val::Fin(c)) => ff.fmt(c),
            (FieldKind::RationalFunction { coeff, var }, Val::RatFn(n, d)) => {
                let ns = poly::fmt(coeff, n, var);
                if d.len() == 1 {
                    ns
                } else {
                    format!("({})/({})", ns, poly::fmt(coeff, d, var))
                }
            }
            (FieldKind::Quadratic(q), Val::Quad(ab)) => {
                let terms = vec![
                    (
                        q.base.fmt_val(&ab.0),
                        String::new(),
                        q.base.is_zero_val(&ab.0),
                    ),
                    (
                        q.base.fmt_val(&ab.1),
                        q.symbol.clone(),
                        q.base.is_zero_val(&ab.1),
                    ),
                ];
                join_terms(&terms)
            }
            _ => panic!("value does not belong to {}", self.spec()),
        }
    }

    // ----- roots and squares -----

    /// A root of `X^2 + bX + c` in this field, if one exists.
    pub fn quadratic_root(&self, b: &Elem, c: &Elem) -> Result<Option<Elem>> {
        if let Some(elems) = self.elements() {
            for x in elems {
                if (x.clone() * x.clone() + b.clone() * x.clone() + c.clone()).is_zero() {
                    return Ok(Some(x));
                }
            }
            return Ok(None);
        }
        if self.characteristic() != 2 {
            let disc = b.clone() * b.clone() - self.from_i64(4) * c.clone();
            return Ok(self
                .sqrt(&disc)?
                .map(|s| (s - b.clone()) * self.from_i64(2).inv().unwrap()));
        }
        if b.is_zero() {
            return self.sqrt(c);
        }
        // X = bY, Y^2 + Y = c / b^2
        let r = c.clone() / (b.clone() * b.clone());
        Ok(self.artin_schreier_root(&r)?.map(|y| y * b.clone()))
    }

    /// A square root, if one exists.
    pub fn sqrt(&self, a: &Elem) -> Result<Option<Elem>> {
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        match (self.kind(), &a.val) {
            (FieldKind::Rational, Val::Rat(r)) => {
                Ok(rational_sqrt(r).map(|s| self.wrap(Val::Rat(s))))
            }
            (FieldKind::Finite(_), _) | (FieldKind::Quadratic(_), _) if self.is_finite() => {
                let q = self.size().unwrap();
                if self.characteristic() == 2 {
                    return Ok(Some(a.pow(q / 2)));
                }
                for x in self.elements().unwrap() {
                    if x.clone() * x.clone() == *a {
                        return Ok(Some(x));
                    }
                }
                Ok(None)
            }
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => {
                let prod = poly::mul(coeff, n, d);
                match poly::sqrt(coeff, &prod)? {
                    Some(s) => {
                        let sv = self.fn_from_poly(s);
                        let dv = self.fn_from_poly(d.clone());
                        Ok(Some(self.wrap(sv) / self.wrap(dv)))
                    }
                    None => Ok(None),
                }
            }
            _ => Err(Error::Unsupported(format!(
                "square roots in {}",
                self.spec()
            ))),
        }
    }

    pub fn is_square(&self, a: &Elem) -> Result<bool> {
        Ok(self.sqrt(a)?.is_some())
    }

    /// A solution of `Y^2 + Y = r` in characteristic 2.
    pub fn artin_schreier_root(&self, r: &Elem) -> Result<Option<Elem>> {
        assert_eq!(self.characteristic(), 2);
        if let Some(elems) = self.elements() {
            return Ok(elems
                .into_iter()
                .find(|y| (y.clone() * y.clone() + y.clone()) == *r));
        }
        match (self.kind(), &r.val) {
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(p, q)) => {
                // Y = u/v reduced forces q = v^2 and p = u^2 + u v.
                let v = match poly::sqrt(coeff, q)? {
                    Some(v) => v,
                    None => return Ok(None),
                };
                let u = poly::artin_schreier_poly(coeff, &v, p)?;
                Ok(u.map(|u| self.wrap(self.fn_from_poly(u)) / self.wrap(self.fn_from_poly(v))))
            }
            _ => Err(Error::Unsupported(format!(
                "Artin-Schreier roots in {}",
                self.spec()
            ))),
        }
    }

    /// In characteristic 2, write `c = sum_j beta_j a_j^2` over a fixed
    /// p-basis `beta` of the field over its subfield of squares; returns the
    /// `a_j`. The p-basis is `[1]` for perfect fields and `[1, t]` for `F_{2^k}(t)`.
    pub fn square_parts(&self, c: &Elem) -> Result<Vec<Elem>> {
        assert_eq!(self.characteristic(), 2);
        if self.is_finite() {
            return Ok(vec![self.sqrt(c)?.unwrap()]);
        }
        match (self.kind(), &c.val) {
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => {
                let prod = poly::mul(coeff, n, d);
                let size = coeff.size().unwrap();
                let mut even = Vec::new();
                let mut odd = Vec::new();
                for (i, cv) in prod.iter().enumerate() {
                    let root = coeff.wrap(cv.clone()).pow(size / 2).val;
                    if i % 2 == 0 {
                        even.push(root);
                    } else {
                        odd.push(root);
                    }
                }
                let den = self.wrap(self.fn_from_poly(d.clone()));
                Ok(vec![
                    self.wrap(self.fn_from_poly(even)) / den.clone(),
                    self.wrap(self.fn_from_poly(odd)) / den,
                ])
            }
            _ => Err(Error::Unsupported(format!(
                "square decomposition over {}",
                self.spec()
            ))),
        }
    }

    // ----- rational function helpers -----

    /// Numerator and denominator polynomials (coefficients low to high).
    pub fn fraction_parts(&self, a: &Elem) -> (Vec<Elem>, Vec<Elem>) {
        match (self.kind(), &a.val) {
            (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => (
                n.iter().map(|v| coeff.wrap(v.clone())).collect(),
                d.iter().map(|v| coeff.wrap(v.clone())).collect(),
            ),
            _ => panic!("not a rational function field"),
        }
    }

    pub fn from_fraction(&self, num: &[Elem], den: &[Elem]) -> Elem {
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => {
                let n = num.iter().map(|e| e.val.clone()).collect();
                let d = den.iter().map(|e| e.val.clone()).collect();
                self.wrap(self.fn_normalize_with(coeff, n, d))
            }
            _ => panic!("not a rational function field"),
        }
    }

    pub fn coeff_field(&self) -> Option<&Field> {
        match self.kind() {
            FieldKind::RationalFunction { coeff, .. } => Some(coeff),
            _ => None,
        }
    }
}

fn needs_parens(s: &str) -> bool {
    s.char_indices()
        .any(|(i, c)| c == '+' || (c == '-' && i > 0))
}

/// Join `(coefficient, monomial, is_zero)` terms into a parseable sum.
pub(crate) fn join_terms(terms: &[(String, String, bool)]) -> String {
    let mut out = String::new();
    for (coef, mono, zero) in terms {
        if *zero {
            continue;
        }
        let body = if mono.is_empty() {
            coef.clone()
        } else if coef == "1" {
            mono.clone()
        } else if coef == "-1" {
            format!("-{mono}")
        } else if needs_parens(coef) {
            format!("({coef})*{mono}")
        } else {
            format!("{coef}*{mono}")
        };
        if out.is_empty() {
            out = body;
        } else if let Some(rest) = body.strip_prefix('-') {
            if mono.is_empty() && needs_parens(&body) {
                out.push_str(&format!(" + ({body})"));
            } else {
                out.push_str(" - ");
                out.push_str(rest);
            }
        } else if mono.is_empty() && needs_parens(&body) {
            out.push_str(&format!(" + ({body})"));
        } else {
            out.push_str(" + ");
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

pub(crate) fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_val(&self.val)
    }

    pub fn is_one(&self) -> bool {
        self.val == self.field.one_val()
    }

    pub fn inv(&self) -> Option<Elem> {
        self.field.inv_val(&self.val).map(|v| self.field.wrap(v))
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Elem {
        self.clone() * self.clone()
    }

    /// The rational value, for elements of Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.val {
            Val::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Coordinates `(a, b)` of `a + b·w` in a quadratic extension.
    pub fn coords(&self) -> (Elem, Elem) {
        let q = self.field.quad_ext();
        match &self.val {
            Val::Quad(ab) => (q.base.wrap(ab.0.clone()), q.base.wrap(ab.1.clone())),
            _ => unreachable!(),
        }
    }

    /// Nontrivial automorphism of a quadratic extension: `w -> alpha - w`.
    pub fn conj(&self) -> Elem {
        let (a, b) = self.coords();
        let alpha = self.field.quad_alpha();
        // a + b(alpha - w)
        self.field.quad(&(a + b.clone() * alpha), &(-b))
    }

    /// `x + conj(x)`, as a base-field element.
    pub fn trace(&self) -> Elem {
        let s = self.clone() + self.conj();
        let (a, b) = s.coords();
        debug_assert!(b.is_zero());
        a
    }

    /// `x * conj(x)`, as a base-field element.
    pub fn norm(&self) -> Elem {
        let (a, b) = self.coords();
        let alpha = self.field.quad_alpha();
        let beta = self.field.quad_beta();
        a.clone() * a.clone() + a * b.clone() * alpha - b.clone() * b * beta
    }

    /// Is this element of a quadratic extension in the image of the base?
    pub fn in_base(&self) -> bool {
        self.coords().1.is_zero()
    }

    /// The two components of an element of the split algebra.
    pub fn split_components(&self) -> (Elem, Elem) {
        assert!(self.field.is_split());
        let (a, b) = self.coords();
        (a.clone(), a + b)
    }

    /// Base-field value of an element known to lie in the base.
    pub fn to_base(&self) -> Option<Elem> {
        let (a, b) = self.coords();
        if b.is_zero() {
            Some(a)
        } else {
            None
        }
    }

    /// Rough size used to order search candidates deterministically.
    pub fn complexity(&self) -> u64 {
        fn val_cx(f: &Field, v: &Val) -> u64 {
            match (f.kind(), v) {
                (FieldKind::Rational, Val::Rat(r)) => {
                    (r.numer().magnitude().bits() + r.denom().magnitude().bits()) * 4
                        + if r.is_negative() { 1 } else { 0 }
                }
                (FieldKind::Finite(_), Val::Fin(c)) => c.iter().rev().fold(0, |a, &x| a * 64 + x),
                (FieldKind::RationalFunction { coeff, .. }, Val::RatFn(n, d)) => {
                    let mut s = (n.len() + d.len()) as u64 * 1000;
                    for c in n.iter().chain(d.iter()) {
                        s += val_cx(coeff, c);
                    }
                    s
                }
                (FieldKind::Quadratic(q), Val::Quad(ab)) => {
                    val_cx(&q.base, &ab.0) + 3 * val_cx(&q.base, &ab.1)
                }
                _ => 0,
            }
        }
        val_cx(&self.field, &self.val)
    }
}

fn check_same(a: &Elem, b: &Elem) {
    if !Arc::ptr_eq(&a.field.0, &b.field.0) && a.field != b.field {
        panic!(
            "mixing elements of different fields: {} and {}",
            a.field.spec(),
            b.field.spec()
        );
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                check_same(&self, &rhs);
                let f: fn(&Field, &Val, &Val) -> Val = $body;
                let v = f(&self.field, &self.val, &rhs.val);
                Elem {
                    field: self.field,
                    val: v,
                }
            }
        }
        impl<'a> $tr<&'a Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                check_same(self, rhs);
                let f: fn(&Field, &Val, &Val) -> Val = $body;
                let v = f(&self.field, &self.val, &rhs.val);
                Elem {
                    field: self.field.clone(),
                    val: v,
                }
            }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                check_same(&self, rhs);
                let f: fn(&Field, &Val, &Val) -> Val = $body;
                let v = f(&self.field, &self.val, &rhs.val);
                Elem {
                    field: self.field,
                    val: v,
                }
            }
        }
    };
}

binop!(Add, add, |f, a, b| f.add_val(a, b));
binop!(Sub, sub, |f, a, b| f.add_val(a, &f.neg_val(b)));
binop!(Mul, mul, |f, a, b| f.mul_val(a, b));
binop!(Div, div, |f, a, b| f.mul_val(
    a,
    &f.inv_val(b).expect("division by a non-invertible element")
));

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let v = self.field.neg_val(&self.val);
        Elem {
            field: self.field,
            val: v,
        }
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem {
            field: self.field.clone(),
            val: self.field.neg_val(&self.val),
        }
    }
}

impl AddAssign<&Elem> for Elem {
    fn add_assign(&mut self, rhs: &Elem) {
        check_same(self, rhs);
        self.val = self.field.add_val(&self.val, &rhs.val);
    }
}

impl SubAssign<&Elem> for Elem {
    fn sub_assign(&mut self, rhs: &Elem) {
        check_same(self, rhs);
        self.val = self.field.add_val(&self.val, &self.field.neg_val(&rhs.val));
    }
}

impl MulAssign<&Elem> for Elem {
    fn mul_assign(&mut self, rhs: &Elem) {
        check_same(self, rhs);
        self.val = self.field.mul_val(&self.val, &rhs.val);
    }
}

/// Exact rational helper used by oracles and tests.
pub fn q(n: i64, d: i64) -> Elem {
    let f = Field::rationals();
    f.wrap(Val::Rat(BigRational::new(n.into(), d.into())))
}

#[allow(dead_code)]
pub(crate) fn rational(n: i64) -> BigRational {
    rat(n)
}
