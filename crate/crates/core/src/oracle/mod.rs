//! Isotropy oracles and Witt decomposition.
//!
//! The dispatcher is complete over finite fields and Q, uses Springer's
//! theorem at a few places of Q(t) and F_q(t) (q odd), real places and the
//! transfer to Q over quadratic number fields, and falls back to bounded
//! search everywhere else.

pub mod finite;
pub mod function;
pub mod rational;
pub mod search;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldKind};
use crate::form::QuadraticForm;
use crate::linalg;

pub use rational::{hilbert_symbol_q, Place};

/// Default height for bounded searches started by the dispatcher.
pub const DEFAULT_HEIGHT: u32 = 2;
/// Maximal number of candidate vectors a bounded search evaluates.
pub const SEARCH_CAP: u64 = 300_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotropyVerdict {
    Isotropic(Vec<Elem>),
    /// Method tag describing the anisotropy certificate.
    Anisotropic(String),
    /// Search height spent without a decision.
    Unknown(u32),
}

impl IsotropyVerdict {
    /// Wrap a witness after re-checking it.
    pub fn isotropic(phi: &QuadraticForm, w: Vec<Elem>) -> Self {
        assert!(w.iter().any(|x| !x.is_zero()), "zero witness");
        assert!(phi.eval(&w).is_zero(), "witness does not evaluate to zero");
        IsotropyVerdict::Isotropic(w)
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self, IsotropyVerdict::Isotropic(_))
    }

    pub fn is_anisotropic(&self) -> bool {
        matches!(self, IsotropyVerdict::Anisotropic(_))
    }

    pub fn witness(&self) -> Option<&[Elem]> {
        match self {
            IsotropyVerdict::Isotropic(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            IsotropyVerdict::Isotropic(w) => serde_json::json!({
                "verdict": "isotropic",
                "witness": w.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            IsotropyVerdict::Anisotropic(m) => {
                serde_json::json!({"verdict": "anisotropic", "method": m})
            }
            IsotropyVerdict::Unknown(h) => serde_json::json!({"verdict": "unknown", "height": h}),
        }
    }
}

pub fn isotropy(phi: &QuadraticForm) -> IsotropyVerdict {
    isotropy_with_height(phi, DEFAULT_HEIGHT)
}

pub fn isotropy_with_height(phi: &QuadraticForm, height: u32) -> IsotropyVerdict {
    let f = phi.field();
    if phi.dim() == 0 {
        return IsotropyVerdict::Anisotropic("zero-dimensional".into());
    }
    if !f.is_field() {
        return IsotropyVerdict::Unknown(0);
    }
    if let Ok(class) = phi.classify() {
        if let Some(r) = class.rad_basis.first() {
            return IsotropyVerdict::isotropic(phi, r.clone());
        }
    }
    if f.is_finite() {
        let els = f.elements().unwrap();
        return match search::scan_zero(phi, &els, u64::MAX).0 {
            Some(w) => IsotropyVerdict::isotropic(phi, w),
            None => IsotropyVerdict::Anisotropic("finite-enumeration".into()),
        };
    }
    if phi.dim() == 2 {
        if let Some(v) = binary_isotropy(phi) {
            return v;
        }
    }
    match f.kind() {
        FieldKind::Rational => hasse_minkowski(phi),
        FieldKind::RationalFunction { .. } if f.characteristic() != 2 => {
            function::springer_oracle(phi, height)
        }
        FieldKind::Quadratic(_) if f.base() == Some(&Field::rationals()) => {
            quadratic_number_field(phi, height)
        }
        _ => bounded_search(phi, height),
    }
}

/// Exhaustive projective search over coordinates from `small_elements(h)`
/// for `h = 1..=height`, within [`SEARCH_CAP`] evaluations. The first
/// nonzero coordinate runs over the small elements up to sign, since
/// normalizing it to 1 would leave the small range.
pub fn bounded_search(phi: &QuadraticForm, height: u32) -> IsotropyVerdict {
    let f = phi.field();
    let mut budget = SEARCH_CAP;
    for h in 1..=height.max(1) {
        let mut scalars = f.small_elements(h);
        scalars.retain(|x| !x.is_zero());
        // leading coordinates up to sign
        let mut leads: Vec<Elem> = Vec::new();
        for x in &scalars {
            if !leads.contains(&-x.clone()) {
                leads.push(x.clone());
            }
        }
        if let Some(i) = leads.iter().position(|x| x.is_one()) {
            let one = leads.remove(i);
            leads.insert(0, one);
        }
        scalars.insert(0, f.zero());
        let (w, used) = search::scan_with_leads(&scalars, &leads, phi.dim(), budget, |v| {
            phi.eval(v).is_zero()
        });
        if let Some(w) = w {
            return IsotropyVerdict::isotropic(phi, w);
        }
        budget = budget.saturating_sub(used);
        if budget == 0 {
            break;
        }
    }
    IsotropyVerdict::Unknown(height)
}

/// Orthogonal basis of a form in characteristic not 2. Returns the values
/// `phi(v_k)` and the vectors `v_k`. Pivots are chosen by smallest value
/// complexity, which keeps rational function coefficients short.
pub fn diagonalize(phi: &QuadraticForm) -> Result<(Vec<Elem>, Vec<Vec<Elem>>)> {
    let f = phi.field();
    if f.characteristic() == 2 {
        return Err(Error::Unsupported(
            "diagonalization in characteristic 2".into(),
        ));
    }
    let n = phi.dim();
    let mut rest: Vec<Vec<Elem>> = (0..n).map(|i| crate::form::unit(f, n, i)).collect();
    let mut diag = Vec::new();
    let mut vecs = Vec::new();
    while !rest.is_empty() {
        let pivot = (0..rest.len())
            .filter(|&i| !phi.eval(&rest[i]).is_zero())
            .min_by_key(|&i| phi.eval(&rest[i]).complexity());
        let p = match pivot {
            Some(i) => i,
            None => {
                let pair = (0..rest.len()).find_map(|i| {
                    ((i + 1)..rest.len())
                        .find(|&j| !phi.pol(&rest[i], &rest[j]).is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    Some((i, j)) => {
                        let s = add(&rest[i], &rest[j]);
                        rest[i] = s;
                        i
                    }
                    None => {
                        // totally isotropic radical part
                        for r in rest.drain(..) {
                            diag.push(f.zero());
                            vecs.push(r);
                        }
                        break;
                    }
                }
            }
        };
        let v = rest.remove(p);
        let d = phi.eval(&v);
        let two_d_inv = (d.clone() + d.clone()).inv().unwrap();
        for r in rest.iter_mut() {
            let c = phi.pol(r, &v) * two_d_inv.clone();
            if !c.is_zero() {
                *r = sub(r, &scale(&v, &c));
            }
        }
        diag.push(d);
        vecs.push(v);
    }
    Ok((diag, vecs))
}

pub(crate) fn add(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub(crate) fn sub(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub(crate) fn scale(a: &[Elem], c: &Elem) -> Vec<Elem> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

/// Combination `sum c_k v_k`.
pub(crate) fn combine(coeffs: &[Elem], vecs: &[Vec<Elem>], n: usize, f: &Field) -> Vec<Elem> {
    let mut out = vec![f.zero(); n];
    for (c, v) in coeffs.iter().zip(vecs) {
        if !c.is_zero() {
            out = add(&out, &scale(v, c));
        }
    }
    out
}

/// Hasse-Minkowski over Q, with a witness when isotropic.
pub fn hasse_minkowski(phi: &QuadraticForm) -> IsotropyVerdict {
    let f = phi.field();
    assert_eq!(f, &Field::rationals());
    let (diag, vecs) = diagonalize(phi).expect("characteristic 0");
    if let Some(i) = diag.iter().position(|d| d.is_zero()) {
        return IsotropyVerdict::isotropic(phi, vecs[i].clone());
    }
    let factorable = diag.iter().all(|d| {
        let r = d.as_rational().unwrap();
        rational::try_prime_factors(r.numer()).is_some() && rational::try_prime_factors(r.denom()).is_some()
    });
    if !factorable {
        return match bounded_search(phi, 2) {
            IsotropyVerdict::Isotropic(w) => IsotropyVerdict::Isotropic(w),
            _ => IsotropyVerdict::Unknown(2),
        };
    }
    // rescale each basis vector so that its value is a squarefree integer
    let mut ints: Vec<BigInt> = Vec::new();
    let mut scaled: Vec<Vec<Elem>> = Vec::new();
    for (d, v) in diag.iter().zip(&vecs) {
        let (s, k) = rational::squarefree_decomposition(d.as_rational().unwrap());
        ints.push(s);
        scaled.push(scale(v, &f.from_rational(&k).inv().unwrap()));
    }
    if let Some(place) = rational::hasse_minkowski_diag(&ints) {
        return IsotropyVerdict::Anisotropic(format!("hasse-minkowski at {place}"));
    }
    match rational::rational_witness(&ints) {
        Some(c) => {
            let coeffs: Vec<Elem> = c.iter().map(|r| f.from_rational(r)).collect();
            let w = combine(&coeffs, &scaled, phi.dim(), f);
            IsotropyVerdict::isotropic(phi, w)
        }
        None => match bounded_search(phi, 6) {
            IsotropyVerdict::Isotropic(w) => IsotropyVerdict::Isotropic(w),
            _ => IsotropyVerdict::Unknown(6),
        },
    }
}

/// Sign of `a + b sqrt(d)` for rationals `a, b` and a positive nonsquare `d`.
fn sign_surd(a: &BigRational, b: &BigRational, d: &BigRational) -> i8 {
    let sg = |x: &BigRational| -> i8 {
        if x.is_zero() {
            0
        } else if x.is_positive() {
            1
        } else {
            -1
        }
    };
    let (sa, sb) = (sg(a), sg(b));
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2 d, never equal as d is no square
    if a * a > b * b * d {
        sa
    } else {
        sb
    }
}

/// Signs of an element of `Q[w]/(w^2 - alpha w - beta)` under the two real
/// embeddings, if the discriminant is positive.
fn real_signs(x: &Elem) -> Option<[i8; 2]> {
    let k = x.field();
    let alpha = k.quad_alpha().as_rational()?.clone();
    let beta = k.quad_beta().as_rational()?.clone();
    let disc = &alpha * &alpha + BigRational::from_integer(4.into()) * &beta;
    if !disc.is_positive() {
        return None;
    }
    let (a, b) = x.coords();
    let (a, b) = (a.as_rational()?.clone(), b.as_rational()?.clone());
    // w = (alpha +- sqrt(disc)) / 2
    let half = BigRational::new(1.into(), 2.into());
    let ra = &a + &b * &alpha * &half;
    let rb = &b * &half;
    Some([
        sign_surd(&ra, &rb, &disc),
        sign_surd(&ra, &(-rb.clone()), &disc),
    ])
}

/// Semi-decision over a quadratic number field.
/// `[a, b, c]` is isotropic iff `a = 0` or `aX^2 + bX + c` has a root.
/// `None` when root finding is unavailable over the field.
fn binary_isotropy(phi: &QuadraticForm) -> Option<IsotropyVerdict> {
    let f = phi.field();
    let (a, b, c) = (phi.coeff(0, 0), phi.coeff(0, 1), phi.coeff(1, 1));
    if a.is_zero() {
        return Some(IsotropyVerdict::isotropic(phi, vec![f.one(), f.zero()]));
    }
    match f.quadratic_root(&(b.clone() / a.clone()), &(c.clone() / a.clone())) {
        Ok(Some(r)) => Some(IsotropyVerdict::isotropic(phi, vec![r, f.one()])),
        Ok(None) => Some(IsotropyVerdict::Anisotropic("binary-root".into())),
        Err(_) => None,
    }
}

fn quadratic_number_field(phi: &QuadraticForm, height: u32) -> IsotropyVerdict {
    if let Ok((diag, _)) = diagonalize(phi) {
        let signs: Option<Vec<[i8; 2]>> = diag.iter().map(real_signs).collect();
        if let Some(signs) = signs {
            for place in 0..2 {
                let s: Vec<i8> = signs.iter().map(|x| x[place]).collect();
                if s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0) {
                    return IsotropyVerdict::Anisotropic(format!("definite at real place {place}"));
                }
            }
        }
    }
    if let Ok(t) = crate::transfer::transfer(phi) {
        if let Ok(i) = witt_index(&t) {
            if i < 2 {
                return IsotropyVerdict::Anisotropic("transfer-index".into());
            }
        }
    }
    bounded_search(phi, height)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittSummary {
    pub radical_dim: usize,
    pub hyperbolic_count: usize,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    /// Dimension of the quadratic radical.
    pub radical_dim: usize,
    /// Dimension of the polar radical.
    pub polar_radical_dim: usize,
    pub hyperbolic_count: usize,
    pub anisotropic_kernel: QuadraticForm,
    /// Columns: radical basis, then hyperbolic pairs `u_i, v_i`, then a
    /// basis of the kernel.
    pub change_of_basis: Vec<Vec<Elem>>,
}

impl WittDecomposition {
    pub fn witt_index(&self) -> usize {
        self.hyperbolic_count + self.radical_dim
    }

    pub fn summary(&self) -> WittSummary {
        WittSummary {
            radical_dim: self.radical_dim,
            hyperbolic_count: self.hyperbolic_count,
            kernel_dim: self.anisotropic_kernel.dim(),
        }
    }

    /// The model form `0 ⟂ m H ⟂ kernel` that `phi` pulls back to.
    pub fn model(&self) -> QuadraticForm {
        let f = self.anisotropic_kernel.field();
        let mut m = QuadraticForm::zero_form(f, self.radical_dim);
        for _ in 0..self.hyperbolic_count {
            m = m.orthogonal_sum(&QuadraticForm::hyperbolic_plane(f));
        }
        m.orthogonal_sum(&self.anisotropic_kernel)
    }
}

pub fn witt_decompose(phi: &QuadraticForm) -> Result<WittDecomposition> {
    witt_decompose_with(phi, &isotropy)
}

pub fn witt_decompose_with(
    phi: &QuadraticForm,
    oracle: &dyn Fn(&QuadraticForm) -> IsotropyVerdict,
) -> Result<WittDecomposition> {
    let f = phi.field();
    let n = phi.dim();
    let class = phi.classify()?;
    let rad = class.rad_basis.clone();
    let mut rest: Vec<Vec<Elem>> = linalg::extend_to_basis(f, &rad, n)[rad.len()..].to_vec();
    let mut pairs: Vec<Vec<Elem>> = Vec::new();
    loop {
        let restricted = phi.pullback(&rest);
        let u = match oracle(&restricted) {
            IsotropyVerdict::Isotropic(c) => combine(&c, &rest, n, f),
            IsotropyVerdict::Anisotropic(_) => break,
            IsotropyVerdict::Unknown(h) => {
                return Err(Error::OracleIncomplete(format!(
                    "no isotropy decision over {} (height {h})",
                    f
                )))
            }
        };
        let r = rest
            .iter()
            .find(|r| !phi.pol(&u, r).is_zero())
            .ok_or_else(|| {
                Error::InternalContradiction("isotropic vector in the radical".into())
            })?;
        let v = scale(r, &phi.pol(&u, r).inv().unwrap());
        let v = sub(&v, &scale(&u, &phi.eval(&v)));
        let projected: Vec<Vec<Elem>> = rest
            .iter()
            .map(|x| {
                let x1 = sub(x, &scale(&u, &phi.pol(x, &v)));
                sub(&x1, &scale(&v, &phi.pol(x, &u)))
            })
            .collect();
        let idx = linalg::independent_subset(&projected);
        rest = idx.into_iter().map(|i| projected[i].clone()).collect();
        pairs.push(u);
        pairs.push(v);
    }
    let kernel = phi.pullback(&rest);
    let mut cols = rad.clone();
    cols.extend(pairs.iter().cloned());
    cols.extend(rest.iter().cloned());
    let d = WittDecomposition {
        radical_dim: rad.len(),
        polar_radical_dim: class.rad_polar_basis.len(),
        hyperbolic_count: pairs.len() / 2,
        anisotropic_kernel: kernel,
        change_of_basis: cols,
    };
    if linalg::rank(&d.change_of_basis) != n || !phi.pulls_back_to(&d.change_of_basis, &d.model()) {
        return Err(Error::InternalContradiction(
            "Witt decomposition fails to verify".into(),
        ));
    }
    Ok(d)
}

pub fn witt_index(phi: &QuadraticForm) -> Result<usize> {
    Ok(witt_decompose(phi)?.witt_index())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn qd(cs: &[i64]) -> QuadraticForm {
        let f = Field::rationals();
        QuadraticForm::diagonal(&f, &cs.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>())
    }

    #[test]
    fn dispatcher_examples() {
        let f3 = Field::finite(3).unwrap();
        let phi = QuadraticForm::diagonal(&f3, &[f3.one(), f3.one()]);
        assert!(isotropy(&phi).is_anisotropic());
        assert!(isotropy(&qd(&[1, 1, 1, 1])).is_anisotropic());
        assert!(isotropy(&qd(&[1, -2])).is_anisotropic());
        assert!(isotropy(&qd(&[1, 1, 1, 1, 1, -7])).is_isotropic());
        assert!(isotropy(&qd(&[-1, -1, -1, -2, -5, -10])).is_anisotropic());
        assert_eq!(
            isotropy(&qd(&[1, -1])),
            IsotropyVerdict::Isotropic(vec![q(1, 1), q(1, 1)])
        );
        let h = QuadraticForm::hyperbolic_plane(&Field::rationals());
        assert!(isotropy(&h).is_isotropic());
    }

    #[test]
    fn bounded_search_examples() {
        let f = Field::rationals();
        let h = QuadraticForm::hyperbolic_plane(&f);
        assert_eq!(
            bounded_search(&h, 1),
            IsotropyVerdict::Isotropic(vec![f.zero(), f.one()])
        );
        assert_eq!(
            bounded_search(&qd(&[1, 1]), 10),
            IsotropyVerdict::Unknown(10)
        );
        assert_eq!(
            bounded_search(&qd(&[1, 1, -3]), 2),
            IsotropyVerdict::Unknown(2)
        );
    }

    #[test]
    fn hm_witnesses_found_by_search() {
        // hasse_minkowski isotropic implies bounded search finds a zero
        let cases: Vec<Vec<i64>> = vec![
            vec![1, 1, -2],
            vec![1, 2, -3],
            vec![3, -5, 2],
            vec![1, 1, 1, -3],
            vec![2, 3, -5, 7],
        ];
        for c in cases {
            let phi = qd(&c);
            assert!(hasse_minkowski(&phi).is_isotropic(), "{c:?}");
            assert!(bounded_search(&phi, 10).is_isotropic(), "{c:?}");
        }
    }

    #[test]
    fn witt_examples() {
        let f = Field::rationals();
        let d = witt_decompose(&QuadraticForm::hyperbolic_plane(&f)).unwrap();
        assert_eq!((d.hyperbolic_count, d.anisotropic_kernel.dim()), (1, 0));
        let f5 = Field::finite(5).unwrap();
        let phi = QuadraticForm::diagonal(&f5, &[f5.one(), f5.one(), f5.one(), f5.one()]);
        assert_eq!(witt_decompose(&phi).unwrap().hyperbolic_count, 2);
        // radical vectors count toward the index
        let f2 = Field::finite(2).unwrap();
        let s = QuadraticForm::diagonal(&f2, &[f2.one(), f2.one()]);
        let d = witt_decompose(&s).unwrap();
        assert_eq!(
            (d.radical_dim, d.hyperbolic_count, d.witt_index()),
            (1, 0, 1)
        );
        // adding a hyperbolic plane raises the index by one
        for cs in [vec![1, 1, 1], vec![1, -1, 3], vec![2, 3, -5, 7]] {
            let phi = qd(&cs);
            let i = witt_index(&phi).unwrap();
            let j = witt_index(&phi.orthogonal_sum(&QuadraticForm::hyperbolic_plane(&f))).unwrap();
            assert_eq!(j, i + 1);
        }
    }

    #[test]
    fn real_place_certificate() {
        let qf = Field::rationals();
        let k = Field::quadratic(&qf, &qf.zero(), &qf.from_i64(2), "r").unwrap();
        let phi = QuadraticForm::diagonal(&k, &[k.one(), k.one()]);
        assert!(isotropy(&phi).is_anisotropic());
        // <1, -1 - r> is definite at r = -sqrt 2 only: 1 and -1 + sqrt 2 > 0
        let r = k.generator();
        let psi = QuadraticForm::diagonal(&k, &[k.one(), -k.one() - r.clone()]);
        assert!(
            matches!(isotropy(&psi), IsotropyVerdict::Anisotropic(m) if m.starts_with("definite"))
        );
        // <1, -2> becomes isotropic over Q(sqrt 2)
        let h = QuadraticForm::diagonal(&k, &[k.one(), k.from_i64(-2)]);
        assert!(isotropy(&h).is_isotropic());
    }
}
