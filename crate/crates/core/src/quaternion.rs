//! Quaternion algebras `(E/B, a) = E ⊕ E z` with `E = B[e]/(e^2 - alpha e - beta)`,
//! `z^2 = a` and `z l = iota(l) z`, over a field or a split algebra `B`.
//!
//! Elements are coordinate vectors in the basis `1, e, z, ez`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::form::QuadraticForm;
use crate::linalg;
use crate::oracle::{self, IsotropyVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatElem(pub [Elem; 4]);

impl QuatElem {
    pub fn coords(&self) -> &[Elem; 4] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Coordinates of `e, z, ez`.
    pub fn pure_part(&self) -> [Elem; 3] {
        [self.0[1].clone(), self.0[2].clone(), self.0[3].clone()]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for QuatElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion {
    base: Field,
    alpha: Elem,
    beta: Elem,
    a: Elem,
}

/// Outcome of the split test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitVerdict {
    /// A nonzero element of reduced norm 0.
    Split(QuatElem),
    Division(String),
    Unknown,
}

impl Quaternion {
    pub fn new(base: &Field, alpha: &Elem, beta: &Elem, a: &Elem) -> Result<Self> {
        let disc_unit = if base.characteristic() == 2 {
            alpha.inv().is_some()
        } else {
            (alpha.clone() * alpha.clone() + base.from_i64(4) * beta.clone()).inv().is_some()
        };
        if !disc_unit {
            return Err(Error::NotEtale(format!(
                "x^2 - ({alpha})x - ({beta}) over {base}"
            )));
        }
        if a.inv().is_none() {
            return Err(Error::ZeroParameter(format!("a = {a} is not invertible")));
        }
        Ok(Quaternion { base: base.clone(), alpha: alpha.clone(), beta: beta.clone(), a: a.clone() })
    }

    /// Hamilton's quaternions `(-1, -1)` over `base`.
    pub fn hamilton(base: &Field) -> Result<Self> {
        Self::new(base, &base.zero(), &base.from_i64(-1), &base.from_i64(-1))
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn alpha(&self) -> &Elem {
        &self.alpha
    }

    pub fn beta(&self) -> &Elem {
        &self.beta
    }

    pub fn a(&self) -> &Elem {
        &self.a
    }

    pub fn elem(&self, c: [Elem; 4]) -> QuatElem {
        for x in &c {
            assert_eq!(x.field(), &self.base, "quaternion coordinate outside the base");
        }
        QuatElem(c)
    }

    pub fn from_strs(&self, c: &[&str]) -> Result<QuatElem> {
        if c.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: c.len() });
        }
        let v: Vec<Elem> = c.iter().map(|s| self.base.parse_elem(s)).collect::<Result<_>>()?;
        Ok(QuatElem([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]))
    }

    pub fn scalar(&self, c: &Elem) -> QuatElem {
        let z = self.base.zero();
        self.elem([c.clone(), z.clone(), z.clone(), z])
    }

    pub fn one(&self) -> QuatElem {
        self.scalar(&self.base.one())
    }

    pub fn zero(&self) -> QuatElem {
        self.scalar(&self.base.zero())
    }

    pub fn basis(&self) -> Vec<QuatElem> {
        (0..4)
            .map(|i| {
                let mut c = [self.base.zero(), self.base.zero(), self.base.zero(), self.base.zero()];
                c[i] = self.base.one();
                QuatElem(c)
            })
            .collect()
    }

    // E = B[e] arithmetic on pairs (p, q) = p + q e
    fn e_mul(&self, x: (&Elem, &Elem), y: (&Elem, &Elem)) -> (Elem, Elem) {
        let (p, q) = x;
        let (r, s) = y;
        let qs = q.clone() * s.clone();
        (
            p.clone() * r.clone() + qs.clone() * self.beta.clone(),
            p.clone() * s.clone() + q.clone() * r.clone() + qs * self.alpha.clone(),
        )
    }

    fn e_conj(&self, x: (&Elem, &Elem)) -> (Elem, Elem) {
        (x.0.clone() + x.1.clone() * self.alpha.clone(), -x.1.clone())
    }

    pub fn add(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        QuatElem(std::array::from_fn(|i| x.0[i].clone() + y.0[i].clone()))
    }

    pub fn sub(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        QuatElem(std::array::from_fn(|i| x.0[i].clone() - y.0[i].clone()))
    }

    pub fn scale(&self, c: &Elem, x: &QuatElem) -> QuatElem {
        QuatElem(std::array::from_fn(|i| c.clone() * x.0[i].clone()))
    }

    /// `(l1 + l2 z)(m1 + m2 z) = (l1 m1 + a l2 iota(m2)) + (l1 m2 + l2 iota(m1)) z`.
    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let c = &x.0;
        let d = &y.0;
        let l1 = (&c[0], &c[1]);
        let l2 = (&c[2], &c[3]);
        let m1 = (&d[0], &d[1]);
        let m2 = (&d[2], &d[3]);
        let im1 = self.e_conj(m1);
        let im2 = self.e_conj(m2);
        let p1 = self.e_mul(l1, m1);
        let p2 = self.e_mul(l2, (&im2.0, &im2.1));
        let p3 = self.e_mul(l1, m2);
        let p4 = self.e_mul(l2, (&im1.0, &im1.1));
        QuatElem([
            p1.0 + self.a.clone() * p2.0,
            p1.1 + self.a.clone() * p2.1,
            p3.0 + p4.0,
            p3.1 + p4.1,
        ])
    }

    /// Reduced trace as a base scalar: `Trd(1) = 2`, `Trd(e) = alpha`,
    /// `Trd(z) = Trd(ez) = 0`.
    pub fn trd(&self, x: &QuatElem) -> Elem {
        x.0[0].clone() + x.0[0].clone() + self.alpha.clone() * x.0[1].clone()
    }

    /// Canonical involution `sigma(x) = Trd(x) - x`.
    pub fn sigma(&self, x: &QuatElem) -> QuatElem {
        self.sub(&self.scalar(&self.trd(x)), x)
    }

    /// Reduced norm `x sigma(x)` as a base scalar.
    pub fn nrd(&self, x: &QuatElem) -> Elem {
        let p = self.mul(x, &self.sigma(x));
        debug_assert!(p.0[1..].iter().all(|c| c.is_zero()), "x sigma(x) is not scalar");
        p.0[0].clone()
    }

    /// `N_E(x0, x1) - a N_E(x2, x3)` with `N_E(p, q) = p^2 + alpha pq - beta q^2`.
    pub fn norm_form(&self) -> QuadraticForm {
        let b = &self.base;
        let z = b.zero();
        let al = self.alpha.clone();
        let mb = -self.beta.clone();
        let na = -self.a.clone();
        let upper = vec![
            vec![b.one(), al.clone(), z.clone(), z.clone()],
            vec![z.clone(), mb.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), na.clone(), na.clone() * al],
            vec![z.clone(), z.clone(), z, na * mb],
        ];
        QuadraticForm::new(b, upper).expect("upper triangular")
    }

    /// Structure constants: `table[i][j]` is the product of basis elements.
    pub fn mult_table(&self) -> Vec<Vec<QuatElem>> {
        let basis = self.basis();
        basis.iter().map(|x| basis.iter().map(|y| self.mul(x, y)).collect()).collect()
    }

    pub fn is_split(&self) -> SplitVerdict {
        match oracle::isotropy(&self.norm_form()) {
            IsotropyVerdict::Isotropic(w) => {
                SplitVerdict::Split(QuatElem([w[0].clone(), w[1].clone(), w[2].clone(), w[3].clone()]))
            }
            IsotropyVerdict::Anisotropic(m) => SplitVerdict::Division(m),
            IsotropyVerdict::Unknown(_) => SplitVerdict::Unknown,
        }
    }

    /// An element with `Trd(x) = p`, `Nrd(x) = q` outside `B·1`.
    ///
    /// Writing `x = x_p + y/s` with `Trd(x_p) = p` and `Trd(y) = 0`, the
    /// condition is a zero with `s != 0` of the homogeneous form
    /// `Nrd(y) + b(x_p, y) s + (Nrd(x_p) - q) s^2` on `ker Trd ⊕ B`.
    /// Returns `Ok(None)` when that form is proven anisotropic.
    pub fn embed_quadratic_algebra(&self, p: &Elem, q: &Elem) -> Result<Option<QuatElem>> {
        let b = &self.base;
        let xp = if b.characteristic() == 2 {
            let c1 = p.clone() * self.alpha.inv().unwrap();
            self.elem([b.zero(), c1, b.zero(), b.zero()])
        } else {
            self.scalar(&(p.clone() * b.from_i64(2).inv().unwrap()))
        };
        let trd_row = vec![vec![b.from_i64(2), self.alpha.clone(), b.zero(), b.zero()]];
        let tz = linalg::kernel(b, &trd_row, 4);
        let nf = self.norm_form();
        // basis of the 4-dim space: tz[0..3] then x_p (s-coordinate)
        let mut vecs: Vec<Vec<Elem>> = tz.clone();
        vecs.push(xp.0.to_vec());
        let base_form = nf.pullback(&vecs);
        let mut upper = base_form.upper().clone();
        upper[3][3] = upper[3][3].clone() - q.clone();
        let phi = QuadraticForm::new(b, upper)?;
        let verdict = oracle::isotropy(&phi);
        let w = match verdict {
            IsotropyVerdict::Isotropic(w) => w,
            IsotropyVerdict::Anisotropic(_) => return Ok(None),
            IsotropyVerdict::Unknown(h) => {
                return Err(Error::BudgetExhausted(format!("embedding search at height {h}")))
            }
        };
        let mut zeros = vec![w.clone()];
        if w[3].is_zero() {
            // move along lines through the zero to reach s != 0
            for i in [3usize, 0, 1, 2] {
                let mut d = vec![b.zero(); 4];
                d[i] = b.one();
                d[3] = b.one();
                let bw = phi.pol(&w, &d);
                if bw.is_zero() {
                    continue;
                }
                let t = -phi.eval(&d) / bw;
                zeros.push(oracle::add(&d, &oracle::scale(&w, &t)));
            }
        }
        for z in zeros {
            if z[3].is_zero() {
                continue;
            }
            let inv = z[3].inv().unwrap();
            let mut x = xp.clone();
            for k in 0..3 {
                let c = z[k].clone() * inv.clone();
                x = self.add(&x, &self.scale(&c, &QuatElem(vec_to4(&tz[k]))));
            }
            if x.0[1..].iter().any(|c| !c.is_zero()) {
                debug_assert_eq!(self.trd(&x), *p);
                debug_assert_eq!(self.nrd(&x), *q);
                return Ok(Some(x));
            }
        }
        Err(Error::BudgetExhausted("no zero with s != 0 outside the scalars".into()))
    }
}

fn vec_to4(v: &[Elem]) -> [Elem; 4] {
    [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
}

/// Which condition a quadratic subalgebra witness is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// A quadratic F-algebra linearly disjoint from K.
    Quadratic,
    /// A quadratic étale F-algebra linearly disjoint from K.
    Etale,
}

/// Check that `x` in a quaternion algebra over `K` (a quadratic extension or
/// split algebra over F) generates a quadratic F-algebra `F[x]` disjoint
/// from K: `Trd(x), Nrd(x)` lie in F and `{1, x}` is K-independent (for
/// split K, in both components). For [`Condition::Etale`] the discriminant
/// must be nonzero (char not 2) or the trace nonzero (char 2).
pub fn validate_subalgebra(q: &Quaternion, x: &QuatElem, cond: Condition) -> Result<(Elem, Elem)> {
    let k = q.base();
    if k.base().is_none() {
        return Err(Error::Precondition("the quaternion algebra must live over K".into()));
    }
    let t = q.trd(x).to_base().ok_or_else(|| Error::ValueNotInF(format!("Trd = {}", q.trd(x))))?;
    let n = q.nrd(x).to_base().ok_or_else(|| Error::ValueNotInF(format!("Nrd = {}", q.nrd(x))))?;
    let pure = x.pure_part();
    let independent = if k.is_split() {
        let c0 = pure.iter().any(|c| !c.split_components().0.is_zero());
        let c1 = pure.iter().any(|c| !c.split_components().1.is_zero());
        c0 && c1
    } else {
        pure.iter().any(|c| !c.is_zero())
    };
    if !independent {
        return Err(Error::InvalidWitness("1 and x are K-dependent".into()));
    }
    if cond == Condition::Etale {
        let f = k.base().unwrap();
        let separable = if f.characteristic() == 2 {
            !t.is_zero()
        } else {
            !(t.clone() * t.clone() - f.from_i64(4) * n.clone()).is_zero()
        };
        if !separable {
            return Err(Error::InvalidWitness("F[x] is not étale".into()));
        }
    }
    Ok((t, n))
}

/// Search for a witness of a disjoint quadratic subalgebra among elements
/// with coordinates in a small set (`0, ±1, ±w` and sums over infinite
/// fields; every element over finite fields, where `Ok(None)` is a proof).
pub fn find_disjoint_quadratic_subalgebra(
    q: &Quaternion,
    cond: Condition,
    extra: &[QuatElem],
) -> Result<Option<QuatElem>> {
    for x in extra {
        if validate_subalgebra(q, x, cond).is_ok() {
            return Ok(Some(x.clone()));
        }
    }
    let k = q.base();
    let (scalars, exhaustive) = match k.elements() {
        Some(els) if els.len() <= 16 => (els, true),
        _ => {
            let w = k.generator();
            let one = k.one();
            (
                vec![k.zero(), one.clone(), -one.clone(), w.clone(), -w.clone(), one + w],
                false,
            )
        }
    };
    let m = scalars.len();
    let total = m.pow(4);
    for mut idx in 0..total {
        let mut c: [Elem; 4] = std::array::from_fn(|_| k.zero());
        for slot in c.iter_mut().rev() {
            *slot = scalars[idx % m].clone();
            idx /= m;
        }
        let x = QuatElem(c);
        if validate_subalgebra(q, &x, cond).is_ok() {
            return Ok(Some(x));
        }
    }
    if exhaustive {
        Ok(None)
    } else {
        Err(Error::BudgetExhausted("small-coordinate subalgebra search".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn algebras() -> Vec<Quaternion> {
        let q = Field::rationals();
        let f2 = Field::finite(2).unwrap();
        let f3 = Field::finite(3).unwrap();
        let qt = Field::parse("Q(t)").unwrap();
        let f2t = Field::parse("F(2)(t)").unwrap();
        let k = Field::quadratic(&q, &q.zero(), &q.from_i64(2), "r").unwrap();
        let split = Field::split(&q, "e").unwrap();
        vec![
            Quaternion::hamilton(&q).unwrap(),
            Quaternion::new(&f2, &f2.one(), &f2.one(), &f2.one()).unwrap(),
            Quaternion::new(&f3, &f3.zero(), &f3.from_i64(2), &f3.from_i64(2)).unwrap(),
            Quaternion::new(&qt, &qt.zero(), &qt.from_i64(-1), &qt.generator()).unwrap(),
            Quaternion::new(&f2t, &f2t.one(), &f2t.generator(), &f2t.generator()).unwrap(),
            Quaternion::hamilton(&k).unwrap(),
            Quaternion::new(&split, &split.zero(), &split.split_pair(&q.from_i64(-1), &q.from_i64(3)), &split.split_pair(&q.from_i64(2), &q.from_i64(-1))).unwrap(),
        ]
    }

    #[test]
    fn construction_errors() {
        let f2 = Field::finite(2).unwrap();
        assert!(matches!(Quaternion::new(&f2, &f2.zero(), &f2.one(), &f2.one()), Err(Error::NotEtale(_))));
        let q = Field::rationals();
        assert!(matches!(Quaternion::new(&q, &q.zero(), &q.one(), &q.zero()), Err(Error::ZeroParameter(_))));
    }

    #[test]
    fn associativity_and_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for h in algebras() {
            let b = h.basis();
            for x in &b {
                for y in &b {
                    for z in &b {
                        assert_eq!(h.mul(&h.mul(x, y), z), h.mul(x, &h.mul(y, z)));
                    }
                }
                assert_eq!(h.mul(&h.one(), x), *x);
            }
            let f = h.base().clone();
            let nf = h.norm_form();
            assert!(nf.classify().unwrap().nonsingular || !f.is_field());
            for _ in 0..60 {
                let x = QuatElem(std::array::from_fn(|_| f.random(&mut rng, 5)));
                let y = QuatElem(std::array::from_fn(|_| f.random(&mut rng, 5)));
                // Cayley-Hamilton
                let x2 = h.mul(&x, &x);
                let ch = h.add(&h.sub(&x2, &h.scale(&h.trd(&x), &x)), &h.scalar(&h.nrd(&x)));
                assert!(ch.is_zero());
                assert_eq!(h.sigma(&h.sigma(&x)), x);
                let xy = h.mul(&x, &y);
                assert_eq!(h.nrd(&xy), h.nrd(&x) * h.nrd(&y));
                assert_eq!(h.trd(&xy), h.trd(&h.mul(&y, &x)));
                assert_eq!(nf.eval(&x.0), h.nrd(&x));
            }
        }
    }

    #[test]
    fn hamilton_examples() {
        let q = Field::rationals();
        let h = Quaternion::hamilton(&q).unwrap();
        assert_eq!(h.norm_form(), QuadraticForm::diagonal(&q, &[q.one(), q.one(), q.one(), q.one()]));
        let x = h.from_strs(&["1", "1", "0", "0"]).unwrap();
        assert_eq!((h.trd(&x), h.nrd(&x)), (q.from_i64(2), q.from_i64(2)));
        assert!(matches!(h.is_split(), SplitVerdict::Division(_)));
        let i = h.embed_quadratic_algebra(&q.zero(), &q.one()).unwrap().unwrap();
        assert_eq!((h.trd(&i), h.nrd(&i)), (q.zero(), q.one()));
        assert_eq!(h.embed_quadratic_algebra(&q.zero(), &q.from_i64(-1)).unwrap(), None);
        let k = Field::quadratic(&q, &q.zero(), &q.from_i64(2), "r").unwrap();
        let hk = Quaternion::hamilton(&k).unwrap();
        assert!(matches!(hk.is_split(), SplitVerdict::Division(_)));
        let i = hk.from_strs(&["0", "1", "0", "0"]).unwrap();
        assert!(validate_subalgebra(&hk, &i, Condition::Etale).is_ok());
    }

    #[test]
    fn char2_examples() {
        let f2 = Field::finite(2).unwrap();
        let h = Quaternion::new(&f2, &f2.one(), &f2.one(), &f2.one()).unwrap();
        let x = h.from_strs(&["1", "0", "1", "0"]).unwrap();
        assert!(h.nrd(&x).is_zero());
        assert!(matches!(h.is_split(), SplitVerdict::Split(_)));
        // idempotent in a split algebra
        let e = h.embed_quadratic_algebra(&f2.one(), &f2.zero()).unwrap().unwrap();
        assert_eq!(h.mul(&e, &e), e);
        // split quaternions over F_4 as a K-algebra
        let f4 = Field::quadratic(&f2, &f2.one(), &f2.one(), "w").unwrap();
        let hk = Quaternion::new(&f4, &f4.one(), &f4.generator(), &f4.one()).unwrap();
        let z = hk.from_strs(&["0", "0", "1", "0"]).unwrap();
        assert!(validate_subalgebra(&hk, &z, Condition::Quadratic).is_ok());
        assert!(validate_subalgebra(&hk, &z, Condition::Etale).is_err());
        let x = find_disjoint_quadratic_subalgebra(&hk, Condition::Etale, &[]).unwrap().unwrap();
        assert!(!hk.trd(&x).is_zero());
    }
}
