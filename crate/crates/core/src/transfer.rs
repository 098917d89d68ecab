//! Transfer of quadratic forms along a quadratic extension `K/F`, and the
//! constructive descent: a form `psi` over F with `psi_K` a subform of
//! `phi` and `dim psi = i0(s_* phi)`.

use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::form::{unit, QuadraticForm};
use crate::linalg;
use crate::oracle::{self, add, combine, scale, IsotropyVerdict};

/// `s_*(phi)(x) = s(phi(x))` on the F-space underlying the K-space of
/// `phi`, with F-basis `b_1, w b_1, b_2, w b_2, ...`.
pub fn transfer(phi: &QuadraticForm) -> Result<QuadraticForm> {
    let k = phi.field();
    let f = k
        .base()
        .ok_or_else(|| Error::Precondition("transfer needs a form over a quadratic extension".into()))?;
    if k.is_split() {
        return Err(Error::SplitK);
    }
    let g = phi.pullback(&realification_basis(k, phi.dim()));
    let upper = g.upper().iter().map(|r| r.iter().map(|x| k.s_functional(x)).collect()).collect();
    QuadraticForm::new(f, upper)
}

/// The K-vectors `b_1, w b_1, ..., b_n, w b_n`.
pub fn realification_basis(k: &Field, n: usize) -> Vec<Vec<Elem>> {
    let w = k.generator();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = unit(k, n, i);
        out.push(e.clone());
        out.push(scale(&e, &w));
    }
    out
}

/// K-vector with F-coordinates `x` in the basis of [`realification_basis`].
pub fn to_k_vector(k: &Field, x: &[Elem]) -> Vec<Elem> {
    x.chunks(2).map(|c| k.quad(&c[0], &c[1])).collect()
}

/// F-coordinates of a K-vector.
pub fn to_f_coords(x: &[Elem]) -> Vec<Elem> {
    x.iter()
        .flat_map(|c| {
            let (a, b) = c.coords();
            [a, b]
        })
        .collect()
}

/// One round of the descent: `u, v, lambda, w` as K-vectors in the ambient
/// coordinates of the input form. The final round of odd index only has `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentStep {
    pub u: Vec<Elem>,
    pub v: Option<Vec<Elem>>,
    pub lambda: Option<Elem>,
    pub w: Option<Vec<Elem>>,
    /// `i0(s_* phi')` of the form handled in this round.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentResult {
    pub psi: QuadraticForm,
    /// Columns: images in `phi`'s K-space of the basis vectors of `psi_K`.
    pub embedding: Vec<Vec<Elem>>,
    /// Hyperbolic planes of `phi` over K, which descend as hyperbolic planes.
    pub hyperbolic_over_k: usize,
    pub transfer_index: usize,
    pub steps: Vec<DescentStep>,
}

fn strs(v: &[Elem]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

impl DescentResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "psi": crate::form::FormLiteral::from_form(&self.psi),
            "embedding": self.embedding.iter().map(|c| strs(c)).collect::<Vec<_>>(),
            "hyperbolic_over_k": self.hyperbolic_over_k,
            "transfer_index": self.transfer_index,
            "steps": self.steps.iter().map(|s| json!({
                "index": s.index,
                "u": strs(&s.u),
                "v": s.v.as_ref().map(|v| strs(v)),
                "lambda": s.lambda.as_ref().map(|l| l.to_string()),
                "w": s.w.as_ref().map(|w| strs(w)),
            })).collect::<Vec<_>>(),
        })
    }
}

type Oracle<'a> = &'a dyn Fn(&QuadraticForm) -> IsotropyVerdict;

pub fn descend(phi: &QuadraticForm) -> Result<DescentResult> {
    descend_with(phi, &oracle::isotropy)
}

/// Descent with a caller-supplied isotropy oracle, used both over K (for the
/// anisotropic part) and over F (for the transferred forms).
pub fn descend_with(phi: &QuadraticForm, oracle: Oracle) -> Result<DescentResult> {
    let k = phi.field();
    let f = k
        .base()
        .ok_or_else(|| Error::Precondition("descent needs a form over a quadratic extension".into()))?
        .clone();
    if k.is_split() {
        return Err(Error::SplitK);
    }
    if !phi.classify()?.nonsingular {
        return Err(Error::Precondition("descent needs a nonsingular form".into()));
    }
    let n = phi.dim();
    let wk = oracle::witt_decompose_with(phi, oracle)?;
    let m = wk.hyperbolic_count;
    let mut psi = QuadraticForm::zero_form(&f, 0);
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    for i in 0..m {
        psi = psi.orthogonal_sum(&QuadraticForm::hyperbolic_plane(&f));
        cols.push(wk.change_of_basis[2 * i].clone());
        cols.push(wk.change_of_basis[2 * i + 1].clone());
    }
    let mut basis: Vec<Vec<Elem>> = wk.change_of_basis[2 * m..].to_vec();
    let mut steps = Vec::new();
    let mut expected: Option<usize> = None;
    loop {
        let cur = phi.pullback(&basis);
        let t = transfer(&cur)?;
        let idx = oracle::witt_decompose_with(&t, oracle)?.witt_index();
        if let Some(e) = expected {
            if idx != e {
                return Err(Error::InternalContradiction(format!(
                    "index of the complement is {idx}, expected {e}"
                )));
            }
        }
        if idx == 0 {
            break;
        }
        let u_f = isotropic_vector(&t, oracle)?;
        let u_loc = to_k_vector(k, &u_f);
        let u = combine(&u_loc, &basis, n, k);
        let phi_u = phi.eval(&u).to_base().ok_or_else(|| {
            Error::InternalContradiction("phi(u) outside F for u isotropic under s_*".into())
        })?;
        if phi_u.is_zero() {
            return Err(Error::InternalContradiction("anisotropic part has a zero".into()));
        }
        if idx == 1 {
            psi = psi.orthogonal_sum(&QuadraticForm::diagonal(&f, &[phi_u]));
            cols.push(u.clone());
            steps.push(DescentStep { u, v: None, lambda: None, w: None, index: 1 });
            break;
        }
        let v_loc = pick_v(&cur, &u_loc)?;
        let lambda = k.generator();
        let lv = scale(&v_loc, &lambda);
        // W = U^perp for s_* phi, U = span_F(u, lambda v)
        let bt = t.polar_matrix();
        let rows = vec![
            linalg::mat_vec(&bt, &u_f),
            linalg::mat_vec(&bt, &to_f_coords(&lv)),
        ];
        let w_basis = linalg::kernel(&f, &rows, t.dim());
        let tw = t.pullback(&w_basis);
        let start = isotropic_vector(&tw, oracle)?;
        let spanning = tw.isotropic_spanning_set(&start)?;
        let w_loc = spanning
            .iter()
            .map(|c| to_k_vector(k, &combine(c, &w_basis, t.dim(), &f)))
            .find(|x| !cur.pol(&u_loc, x).is_zero())
            .ok_or_else(|| Error::InternalContradiction("polar(u, .) vanishes on W".into()))?;
        let w = combine(&w_loc, &basis, n, k);
        let bw = phi.pol(&u, &w).to_base();
        let pw = phi.eval(&w).to_base();
        let (bw, pw) = match (bw, pw) {
            (Some(b), Some(p)) if !b.is_zero() => (b, p),
            _ => return Err(Error::InternalContradiction("psi_1 is not defined over F".into())),
        };
        if linalg::rank(&vec![u_loc.clone(), w_loc.clone()]) != 2 {
            return Err(Error::InternalContradiction("u and w are K-dependent".into()));
        }
        let psi1 = QuadraticForm::new(&f, vec![vec![phi_u, bw], vec![f.zero(), pw]])?;
        psi = psi.orthogonal_sum(&psi1);
        cols.push(u.clone());
        cols.push(w.clone());
        steps.push(DescentStep {
            u,
            v: Some(combine(&v_loc, &basis, n, k)),
            lambda: Some(lambda),
            w: Some(w),
            index: idx,
        });
        // K-orthogonal complement of span_K(u, w) in the current space
        let gram = cur.polar_matrix();
        let rows = vec![linalg::mat_vec(&gram, &u_loc), linalg::mat_vec(&gram, &w_loc)];
        let comp = linalg::kernel(k, &rows, cur.dim());
        if comp.len() + 2 != cur.dim() {
            return Err(Error::InternalContradiction("span(u, w) is singular".into()));
        }
        basis = comp.iter().map(|c| combine(c, &basis, n, k)).collect();
        expected = Some(idx - 2);
    }
    let transfer_index = oracle::witt_decompose_with(&transfer(phi)?, oracle)?.witt_index();
    let result = DescentResult { psi, embedding: cols, hyperbolic_over_k: m, transfer_index, steps };
    verify_descent(phi, &result)?;
    Ok(result)
}

/// Re-check the postconditions: `dim psi = i0(s_* phi)`, `psi` nondegenerate,
/// the embedding is K-injective and `phi(U x) = psi_K(x)`.
pub fn verify_descent(phi: &QuadraticForm, r: &DescentResult) -> Result<()> {
    let k = phi.field();
    if r.psi.dim() != r.transfer_index {
        return Err(Error::InternalContradiction(format!(
            "dim psi = {} but i0(s_* phi) = {}",
            r.psi.dim(),
            r.transfer_index
        )));
    }
    if r.psi.dim() > 0 && !r.psi.classify()?.nondegenerate {
        return Err(Error::InternalContradiction("psi is degenerate".into()));
    }
    if linalg::rank(&r.embedding) != r.embedding.len() {
        return Err(Error::InternalContradiction("embedding is not injective".into()));
    }
    if !phi.pulls_back_to(&r.embedding, &r.psi.base_change(k)) {
        return Err(Error::InternalContradiction("psi_K is not a subform via the embedding".into()));
    }
    Ok(())
}

/// An isotropic vector, preferring basis vectors, then the oracle.
fn isotropic_vector(t: &QuadraticForm, oracle: Oracle) -> Result<Vec<Elem>> {
    let f = t.field();
    for i in 0..t.dim() {
        let e = unit(f, t.dim(), i);
        if t.eval(&e).is_zero() {
            return Ok(e);
        }
    }
    match oracle(t) {
        IsotropyVerdict::Isotropic(w) => Ok(w),
        IsotropyVerdict::Anisotropic(_) => {
            Err(Error::InternalContradiction("positive index but anisotropic".into()))
        }
        IsotropyVerdict::Unknown(h) => {
            Err(Error::OracleIncomplete(format!("no isotropic vector found (height {h})")))
        }
    }
}

/// `v` with `b(u, v) = 1` and `v` outside `K u`.
fn pick_v(cur: &QuadraticForm, u: &[Elem]) -> Result<Vec<Elem>> {
    let k = cur.field();
    let n = cur.dim();
    let mut fallback = None;
    for j in 0..n {
        let e = unit(k, n, j);
        let b = cur.pol(u, &e);
        if b.is_zero() {
            continue;
        }
        let v = scale(&e, &b.inv().unwrap());
        if linalg::rank(&vec![u.to_vec(), v.clone()]) == 2 {
            return Ok(v);
        }
        fallback.get_or_insert(v);
    }
    let v0 = fallback.ok_or_else(|| Error::InternalContradiction("u lies in the radical".into()))?;
    let perp = linalg::kernel(k, &vec![linalg::mat_vec(&cur.polar_matrix(), u)], n);
    let z = perp
        .into_iter()
        .find(|z| linalg::rank(&vec![u.to_vec(), z.clone()]) == 2)
        .ok_or_else(|| Error::InternalContradiction("no v outside K u".into()))?;
    Ok(add(&v0, &z))
}

/// Descend a form whose transfer is hyperbolic; returns whether `phi` is
/// isometric to `psi_K` through a bijective embedding.
pub fn descends_fully(phi: &QuadraticForm) -> Result<bool> {
    let t = transfer(phi)?;
    let d = oracle::witt_decompose(&t)?;
    if d.radical_dim != 0 || 2 * d.hyperbolic_count != t.dim() {
        return Err(Error::Precondition("s_* phi is not hyperbolic".into()));
    }
    let r = descend(phi)?;
    Ok(r.psi.dim() == phi.dim() && linalg::rank(&r.embedding) == phi.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> Field {
        let q = Field::rationals();
        Field::quadratic(&q, &q.zero(), &q.from_i64(2), "r").unwrap()
    }

    #[test]
    fn transfer_examples() {
        let k = q2();
        let q = k.base().unwrap().clone();
        let t = transfer(&QuadraticForm::diagonal(&k, &[k.one()])).unwrap();
        assert_eq!(t.upper(), &vec![vec![q.zero(), q.from_i64(2)], vec![q.zero(), q.zero()]]);
        let r = k.generator();
        let t = transfer(&QuadraticForm::diagonal(&k, &[-r])).unwrap();
        assert_eq!(t, QuadraticForm::diagonal(&q, &[q.from_i64(-1), q.from_i64(-2)]));
        let f2 = Field::finite(2).unwrap();
        let f4 = Field::quadratic(&f2, &f2.one(), &f2.one(), "w").unwrap();
        let t = transfer(&QuadraticForm::diagonal(&f4, &[f4.one()])).unwrap();
        assert_eq!(t, QuadraticForm::diagonal(&f2, &[f2.zero(), f2.one()]));
        let split = Field::split(&q, "e").unwrap();
        assert_eq!(transfer(&QuadraticForm::diagonal(&split, &[split.one()])), Err(Error::SplitK));
    }

    #[test]
    fn descent_examples() {
        let k = q2();
        let q = k.base().unwrap().clone();
        let n = QuadraticForm::diagonal(&k, &[k.one(), k.one(), k.one(), k.one()]);
        let r = descend(&n).unwrap();
        assert_eq!((r.psi.dim(), r.transfer_index), (4, 4));
        assert_eq!(r.steps.len(), 2);
        assert!(descends_fully(&n).unwrap());

        let phi = QuadraticForm::diagonal(&k, &[k.one(), -k.generator()]);
        let r = descend(&phi).unwrap();
        assert_eq!(r.psi, QuadraticForm::diagonal(&q, &[q.one()]));
        assert_eq!(r.embedding, vec![vec![k.one(), k.zero()]]);
        assert!(matches!(descends_fully(&phi), Err(Error::Precondition(_))));

        let h = QuadraticForm::hyperbolic_plane(&k);
        assert!(descends_fully(&h).unwrap());
        assert_eq!(descend(&h).unwrap().psi, QuadraticForm::hyperbolic_plane(&q));

        // anisotropic with anisotropic transfer: <1 + r> is not in F after s
        let phi = QuadraticForm::diagonal(&k, &[k.one() + k.generator()]);
        let r = descend(&phi).unwrap();
        assert_eq!(r.psi.dim(), 0);
    }

    #[test]
    fn descent_over_finite_fields() {
        for (p, alpha, beta) in [(2u64, 1i64, 1i64), (3, 0, 2), (5, 0, 2)] {
            let f = Field::finite(p).unwrap();
            let k = Field::quadratic(&f, &f.from_i64(alpha), &f.from_i64(beta), "w").unwrap();
            let els = k.elements().unwrap();
            for a in els.iter().filter(|x| !x.is_zero()).take(6) {
                for b in els.iter().filter(|x| !x.is_zero()).step_by(3).take(4) {
                    let phi = QuadraticForm::binary(&k, a, b)
                        .orthogonal_sum(&QuadraticForm::binary(&k, b, a));
                    if !phi.classify().unwrap().nonsingular {
                        continue;
                    }
                    let r = descend(&phi).unwrap();
                    verify_descent(&phi, &r).unwrap();
                    if p == 2 && r.psi.dim() % 2 == 1 {
                        assert!(!r.psi.classify().unwrap().nonsingular);
                    }
                }
            }
        }
    }
}
