//! Quadratic forms in every characteristic.
//!
//! A form of dimension n is stored as an upper-triangular coefficient matrix
//! `M`, with `phi(x) = sum_{i <= j} M[i][j] x_i x_j`. The polar matrix is
//! `M + M^T`, which is alternating in characteristic 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    upper: Matrix,
}

impl std::fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticForm[{}]{:?}", self.field, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormClass {
    pub nonsingular: bool,
    pub regular: bool,
    pub nondegenerate: bool,
    /// Basis of the radical of the polar form.
    pub rad_polar_basis: Vec<Vec<Elem>>,
    /// Basis of the quadratic radical (isotropic vectors of the polar radical).
    pub rad_basis: Vec<Vec<Elem>>,
}

/// Outcome of an isometric embedding search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Embedding {
    /// Columns are the images of the basis vectors of the embedded form.
    Found(Vec<Vec<Elem>>),
    /// Exhaustive enumeration over a finite field found nothing.
    ProvenNone,
}

impl QuadraticForm {
    pub fn new(field: &Field, upper: Matrix) -> Result<Self> {
        let n = upper.len();
        for (i, row) in upper.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.field(), field, "coefficient outside the form's field");
                if j < i && !x.is_zero() {
                    return Err(Error::Parse(
                        "coefficient matrix must be upper triangular".into(),
                    ));
                }
            }
        }
        Ok(QuadraticForm {
            field: field.clone(),
            upper,
        })
    }

    /// Build from arbitrary (not necessarily upper) coefficients by folding
    /// the lower triangle onto the upper one.
    pub fn from_coefficients(field: &Field, m: &Matrix) -> Result<Self> {
        let n = m.len();
        let mut upper = vec![vec![field.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                upper[a][b] = upper[a][b].clone() + m[i][j].clone();
            }
        }
        Self::new(field, upper)
    }

    pub fn diagonal(field: &Field, coeffs: &[Elem]) -> Self {
        let n = coeffs.len();
        let mut upper = vec![vec![field.zero(); n]; n];
        for (i, c) in coeffs.iter().enumerate() {
            upper[i][i] = c.clone();
        }
        QuadraticForm {
            field: field.clone(),
            upper,
        }
    }

    /// The form `xy`.
    pub fn hyperbolic_plane(field: &Field) -> Self {
        QuadraticForm {
            field: field.clone(),
            upper: vec![
                vec![field.zero(), field.one()],
                vec![field.zero(), field.zero()],
            ],
        }
    }

    /// The binary form `[a, b] = a x^2 + xy + b y^2`.
    pub fn binary(field: &Field, a: &Elem, b: &Elem) -> Self {
        QuadraticForm {
            field: field.clone(),
            upper: vec![vec![a.clone(), field.one()], vec![field.zero(), b.clone()]],
        }
    }

    pub fn zero_form(field: &Field, n: usize) -> Self {
        QuadraticForm {
            field: field.clone(),
            upper: vec![vec![field.zero(); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Elem {
        &self.upper[i][j]
    }

    fn check_dim(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Elem]) -> Result<Elem> {
        self.check_dim(x)?;
        Ok(self.eval(x))
    }

    pub(crate) fn eval(&self, x: &[Elem]) -> Elem {
        let mut acc = self.field.zero();
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            let mut row = self.field.zero();
            for j in i..self.dim() {
                if !self.upper[i][j].is_zero() && !x[j].is_zero() {
                    row += &(self.upper[i][j].clone() * x[j].clone());
                }
            }
            acc += &(row * x[i].clone());
        }
        acc
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.pol(x, y))
    }

    pub(crate) fn pol(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let mut acc = self.field.zero();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let c = &self.upper[i][j];
                if c.is_zero() {
                    continue;
                }
                // b(x, y) = sum_{i<=j} M_ij (x_i y_j + x_j y_i)
                let t = x[i].clone() * y[j].clone() + x[j].clone() * y[i].clone();
                if !t.is_zero() {
                    acc += &(c.clone() * t);
                }
            }
        }
        acc
    }

    /// The symmetric polar matrix `M + M^T`.
    pub fn polar_matrix(&self) -> Matrix {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.upper[i][i].clone() + self.upper[i][i].clone()
                        } else if i < j {
                            self.upper[i][j].clone()
                        } else {
                            self.upper[j][i].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The form `x -> phi(sum_k x_k v_k)` on the span of `vectors`, without
    /// an independence check.
    pub fn pullback(&self, vectors: &[Vec<Elem>]) -> QuadraticForm {
        let m = vectors.len();
        let mut upper = vec![vec![self.field.zero(); m]; m];
        for i in 0..m {
            upper[i][i] = self.eval(&vectors[i]);
            for j in (i + 1)..m {
                upper[i][j] = self.pol(&vectors[i], &vectors[j]);
            }
        }
        QuadraticForm {
            field: self.field.clone(),
            upper,
        }
    }

    /// Restriction to the subspace spanned by `basis`.
    pub fn restrict(&self, basis: &[Vec<Elem>]) -> Result<QuadraticForm> {
        for v in basis {
            self.check_dim(v)?;
        }
        if linalg::rank(&basis.to_vec()) < basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(self.pullback(basis))
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.field, other.field);
        let (n, m) = (self.dim(), other.dim());
        let mut upper = vec![vec![self.field.zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                upper[i][j] = self.upper[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                upper[n + i][n + j] = other.upper[i][j].clone();
            }
        }
        QuadraticForm {
            field: self.field.clone(),
            upper,
        }
    }

    pub fn scale(&self, c: &Elem) -> Result<QuadraticForm> {
        if c.is_zero() {
            return Err(Error::ZeroParameter("scaling factor".into()));
        }
        let upper = self
            .upper
            .iter()
            .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
            .collect();
        Ok(QuadraticForm {
            field: self.field.clone(),
            upper,
        })
    }

    /// The same coefficients read in an extension field.
    pub fn base_change(&self, ext: &Field) -> QuadraticForm {
        let upper = self
            .upper
            .iter()
            .map(|r| r.iter().map(|x| ext.embed(x)).collect())
            .collect();
        QuadraticForm {
            field: ext.clone(),
            upper,
        }
    }

    /// Is `phi(U x) = other(x)` for all x, where `U` has the given columns?
    pub fn pulls_back_to(&self, columns: &[Vec<Elem>], other: &QuadraticForm) -> bool {
        columns.len() == other.dim() && self.pullback(columns) == *other
    }

    pub fn classify(&self) -> Result<FormClass> {
        let n = self.dim();
        let rad_polar = linalg::kernel(&self.field, &self.polar_matrix(), n);
        let rad = self.quadratic_radical(&rad_polar)?;
        let nonsingular = rad_polar.is_empty();
        let regular = rad.is_empty();
        Ok(FormClass {
            nonsingular,
            regular,
            nondegenerate: regular && rad_polar.len() <= 1,
            rad_polar_basis: rad_polar,
            rad_basis: rad,
        })
    }

    /// Zeros of the form on the polar radical, which form a subspace.
    fn quadratic_radical(&self, rad_polar: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        if rad_polar.is_empty() {
            return Ok(vec![]);
        }
        if self.field.characteristic() != 2 {
            return Ok(rad_polar.to_vec());
        }
        // phi(sum c_i r_i) = sum c_i^2 phi(r_i) on the polar radical.
        let values: Vec<Elem> = rad_polar.iter().map(|r| self.eval(r)).collect();
        let m = values.len();
        let n = self.dim();
        let combine = |coeffs: &[Elem]| -> Vec<Elem> {
            let mut v = vec![self.field.zero(); n];
            for (c, r) in coeffs.iter().zip(rad_polar) {
                for k in 0..n {
                    v[k] = v[k].clone() + c.clone() * r[k].clone();
                }
            }
            v
        };
        match values
            .iter()
            .map(|c| self.field.square_parts(c))
            .collect::<Result<Vec<_>>>()
        {
            Ok(parts) => {
                let width = parts[0].len();
                let rows: Matrix = (0..width)
                    .map(|j| parts.iter().map(|p| p[j].clone()).collect())
                    .collect();
                let ker = linalg::kernel(&self.field, &rows, m);
                let vecs: Vec<Vec<Elem>> = ker.iter().map(|c| combine(c)).collect();
                Ok(vecs)
            }
            Err(Error::Unsupported(msg)) => {
                // Small radicals over imperfect fields: solve directly.
                let nonzero: Vec<usize> = (0..m).filter(|&i| !values[i].is_zero()).collect();
                let mut out: Vec<Vec<Elem>> = (0..m)
                    .filter(|i| values[*i].is_zero())
                    .map(|i| rad_polar[i].clone())
                    .collect();
                match nonzero.len() {
                    0 | 1 => Ok(out),
                    2 => {
                        let (a, b) = (&values[nonzero[0]], &values[nonzero[1]]);
                        // c1^2 a + c2^2 b = 0 with c2 = 1 needs a / b to be a square.
                        if let Some(s) = self.field.sqrt(&(b.clone() / a.clone()))? {
                            let mut coeffs = vec![self.field.zero(); m];
                            coeffs[nonzero[0]] = s;
                            coeffs[nonzero[1]] = self.field.one();
                            out.push(combine(&coeffs));
                        }
                        Ok(out)
                    }
                    _ => Err(Error::Unsupported(msg)),
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Search for an injective linear map `U` with `self(U x) = psi(x)`.
    ///
    /// Over finite fields the search is exhaustive and may prove that no
    /// embedding exists. Otherwise candidate images run over tuples of
    /// small elements with iterative deepening up to `height`, and running
    /// out of candidates yields `BudgetExhausted`.
    pub fn isometric_embedding(&self, psi: &QuadraticForm, height: u32) -> Result<Embedding> {
        assert_eq!(self.field, psi.field);
        if psi.dim() > self.dim() {
            return Ok(Embedding::ProvenNone);
        }
        if self.field.is_finite() {
            let cands = all_vectors(&self.field, self.dim());
            return Ok(match self.embed_search(psi, &cands) {
                Some(cols) => Embedding::Found(cols),
                None => Embedding::ProvenNone,
            });
        }
        for h in 1..=height {
            let scalars = self.field.small_elements(h);
            let cands = tuples(&scalars, self.dim(), 200_000);
            if let Some(cols) = self.embed_search(psi, &cands) {
                return Ok(Embedding::Found(cols));
            }
        }
        Err(Error::BudgetExhausted(format!(
            "isometric embedding up to height {height}"
        )))
    }

    fn embed_search(&self, psi: &QuadraticForm, cands: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
        let values: Vec<Elem> = cands.iter().map(|c| self.eval(c)).collect();
        let mut chosen: Vec<usize> = Vec::new();
        self.embed_rec(psi, cands, &values, &mut chosen)
            .then(|| chosen.iter().map(|&i| cands[i].clone()).collect())
    }

    fn embed_rec(
        &self,
        psi: &QuadraticForm,
        cands: &[Vec<Elem>],
        values: &[Elem],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let k = chosen.len();
        if k == psi.dim() {
            return true;
        }
        for (idx, cand) in cands.iter().enumerate() {
            if values[idx] != psi.upper[k][k] {
                continue;
            }
            if !chosen
                .iter()
                .enumerate()
                .all(|(i, &c)| self.pol(&cands[c], cand) == psi.upper[i][k])
            {
                continue;
            }
            let mut rows: Matrix = chosen.iter().map(|&c| cands[c].clone()).collect();
            rows.push(cand.clone());
            if linalg::rank(&rows) < k + 1 {
                continue;
            }
            chosen.push(idx);
            if self.embed_rec(psi, cands, values, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// A basis of isotropic vectors of a regular form, built from one
    /// isotropic vector `v`: every `x` with `b(v, x) != 0` yields the
    /// isotropic vector `x - phi(x) b(v, x)^{-1} v`, and vectors orthogonal
    /// to `v` are reached through `x + w` with `b(v, w) = 1`.
    pub fn isotropic_spanning_set(&self, v: &[Elem]) -> Result<Vec<Vec<Elem>>> {
        self.check_dim(v)?;
        if v.iter().all(|x| x.is_zero()) || !self.eval(v).is_zero() {
            return Err(Error::NotIsotropic);
        }
        let class = self.classify()?;
        if !class.regular {
            return Err(Error::Precondition("form must be regular".into()));
        }
        let n = self.dim();
        let basis: Vec<Vec<Elem>> = (0..n).map(|i| unit(&self.field, n, i)).collect();
        let k = basis
            .iter()
            .position(|e| !self.pol(v, e).is_zero())
            .ok_or_else(|| {
                Error::InternalContradiction("isotropic vector in the radical".into())
            })?;
        let scale = self.pol(v, &basis[k]).inv().unwrap();
        let w: Vec<Elem> = basis[k].iter().map(|x| x.clone() * scale.clone()).collect();
        let project = |x: &[Elem]| -> Vec<Elem> {
            let c = self.eval(x) * self.pol(v, x).inv().unwrap();
            x.iter()
                .zip(v)
                .map(|(xi, vi)| xi.clone() - c.clone() * vi.clone())
                .collect()
        };
        let mut cands = vec![v.to_vec(), project(&w)];
        for e in &basis {
            if !self.pol(v, e).is_zero() {
                cands.push(project(e));
            } else {
                let xw: Vec<Elem> = e
                    .iter()
                    .zip(&w)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect();
                cands.push(project(&xw));
            }
        }
        let picked = linalg::independent_subset(&cands);
        let out: Vec<Vec<Elem>> = picked.into_iter().map(|i| cands[i].clone()).collect();
        if out.len() != n || out.iter().any(|x| !self.eval(x).is_zero()) {
            return Err(Error::InternalContradiction(
                "isotropic vectors fail to span".into(),
            ));
        }
        Ok(out)
    }
}

pub(crate) fn unit(field: &Field, n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

fn all_vectors(field: &Field, n: usize) -> Vec<Vec<Elem>> {
    let els = field.elements().expect("finite field");
    let count = els.len().pow(n as u32);
    (1..count)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let e = els[idx % els.len()].clone();
                    idx /= els.len();
                    e
                })
                .collect()
        })
        .collect()
}

/// Nonzero tuples of the given scalars, ordered by total complexity, capped.
pub(crate) fn tuples(scalars: &[Elem], n: usize, cap: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for t in &out {
            for s in scalars {
                let mut u = t.clone();
                u.push(s.clone());
                next.push(u);
            }
        }
        next.truncate(cap);
        out = next;
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out.sort_by_key(|v| v.iter().map(|x| x.complexity()).sum::<u64>());
    out
}

/// JSON form literal: `{"field": "Q", "dim": 2, "upper": [["1","0"],["0","1"]]}`
/// or with the shorthand `"diag": ["1","1"]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FormLiteral {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<String>>,
}

impl FormLiteral {
    pub fn to_form(&self) -> Result<QuadraticForm> {
        let field = Field::parse(&self.field)?;
        self.to_form_over(&field)
    }

    pub fn to_form_over(&self, field: &Field) -> Result<QuadraticForm> {
        let form = match (&self.upper, &self.diag) {
            (Some(rows), None) => {
                let m = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| field.parse_elem(s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                QuadraticForm::new(field, m)?
            }
            (None, Some(d)) => {
                let cs = d
                    .iter()
                    .map(|s| field.parse_elem(s))
                    .collect::<Result<Vec<_>>>()?;
                QuadraticForm::diagonal(field, &cs)
            }
            _ => {
                return Err(Error::Parse(
                    "form needs exactly one of upper or diag".into(),
                ))
            }
        };
        if let Some(n) = self.dim {
            if n != form.dim() {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: form.dim(),
                });
            }
        }
        Ok(form)
    }

    pub fn from_form(form: &QuadraticForm) -> Self {
        FormLiteral {
            field: form.field.spec(),
            dim: Some(form.dim()),
            upper: Some(
                form.upper
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect())
                    .collect(),
            ),
            diag: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;
    use proptest::prelude::*;

    fn fq(n: i64) -> Elem {
        q(n, 1)
    }

    #[test]
    fn polar_examples() {
        let f2 = Field::finite(2).unwrap();
        let phi = QuadraticForm::binary(&f2, &f2.one(), &f2.one());
        let e1 = unit(&f2, 2, 0);
        let e2 = unit(&f2, 2, 1);
        assert!(phi.polar(&e1, &e2).unwrap().is_one());
        let x = vec![f2.one(), f2.one()];
        assert!(phi.polar(&x, &x).unwrap().is_zero());
        let qf = Field::rationals();
        let id = QuadraticForm::diagonal(&qf, &[fq(1), fq(1)]);
        assert_eq!(
            id.polar_matrix(),
            vec![vec![fq(2), fq(0)], vec![fq(0), fq(2)]]
        );
        assert!(matches!(
            id.evaluate(&[fq(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let qf = Field::rationals();
        let h = QuadraticForm::hyperbolic_plane(&qf);
        assert!(h.classify().unwrap().nonsingular);

        let f2 = Field::finite(2).unwrap();
        let x2 = QuadraticForm::diagonal(&f2, &[f2.one()]);
        let c = x2.classify().unwrap();
        assert!(c.regular && c.nondegenerate && !c.nonsingular);

        let s = QuadraticForm::diagonal(&f2, &[f2.one(), f2.one()]);
        let c = s.classify().unwrap();
        assert!(!c.regular);
        assert_eq!(c.rad_basis, vec![vec![f2.one(), f2.one()]]);

        // x^2 + t y^2 over F_2(t) is regular, x^2 + t^2 y^2 is not
        let f2t = Field::parse("F(2)(t)").unwrap();
        let t = f2t.generator();
        let a = QuadraticForm::diagonal(&f2t, &[f2t.one(), t.clone()]);
        assert!(a.classify().unwrap().regular);
        let b = QuadraticForm::diagonal(&f2t, &[f2t.one(), t.square()]);
        let cb = b.classify().unwrap();
        assert_eq!(cb.rad_basis.len(), 1);
        assert!(b.eval(&cb.rad_basis[0]).is_zero());
    }

    #[test]
    fn restrict_scale_base_change() {
        let qf = Field::rationals();
        let phi = QuadraticForm::diagonal(&qf, &[fq(1), fq(1), fq(1)]);
        let r = phi.restrict(&[unit(&qf, 3, 0)]).unwrap();
        assert_eq!(r, QuadraticForm::diagonal(&qf, &[fq(1)]));
        assert_eq!(
            phi.restrict(&[unit(&qf, 3, 0), unit(&qf, 3, 0)]),
            Err(Error::DependentBasis)
        );
        // scale(xy, c) is isometric to xy via x -> c^{-1} x
        let h = QuadraticForm::hyperbolic_plane(&qf);
        let hs = h.scale(&fq(5)).unwrap();
        let cols = vec![vec![q(1, 5), fq(0)], vec![fq(0), fq(1)]];
        assert!(hs.pulls_back_to(&cols, &h));
        let k = Field::quadratic(&qf, &fq(0), &fq(2), "w").unwrap();
        let bc = phi.base_change(&k);
        assert_eq!(bc.field(), &k);
        assert_eq!(bc.coeff(0, 0), &k.one());
    }

    #[test]
    fn embedding_examples() {
        let qf = Field::rationals();
        let phi = QuadraticForm::diagonal(&qf, &[fq(1), fq(1)]);
        let psi = QuadraticForm::diagonal(&qf, &[fq(1)]);
        match phi.isometric_embedding(&psi, 3).unwrap() {
            Embedding::Found(cols) => assert!(phi.pulls_back_to(&cols, &psi)),
            _ => panic!(),
        }
        let f3 = Field::finite(3).unwrap();
        let phi3 = QuadraticForm::diagonal(&f3, &[f3.one(), f3.one()]);
        let psi3 = QuadraticForm::diagonal(&f3, &[f3.from_i64(2)]);
        match phi3.isometric_embedding(&psi3, 1).unwrap() {
            Embedding::Found(cols) => {
                assert_eq!(cols, vec![vec![f3.one(), f3.one()]]);
            }
            _ => panic!(),
        }
        // <1,1> does not contain a hyperbolic plane over F_3
        let h3 = QuadraticForm::hyperbolic_plane(&f3);
        assert_eq!(
            phi3.isometric_embedding(&h3, 1).unwrap(),
            Embedding::ProvenNone
        );
        // <1,1> over Q does not represent 3: budget exhausted, not proven
        let psi = QuadraticForm::diagonal(&qf, &[fq(3)]);
        assert!(matches!(
            phi.isometric_embedding(&psi, 2),
            Err(Error::BudgetExhausted(_))
        ));
    }

    #[test]
    fn spanning_set_examples() {
        let qf = Field::rationals();
        let h = QuadraticForm::hyperbolic_plane(&qf);
        let s = h.isotropic_spanning_set(&unit(&qf, 2, 0)).unwrap();
        assert_eq!(s.len(), 2);
        let d = QuadraticForm::diagonal(&qf, &[fq(1), fq(-1)]);
        let s = d.isotropic_spanning_set(&[fq(1), fq(1)]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|v| d.eval(v).is_zero()));
        // both isotropic lines of <1,-1> occur
        assert!(s.iter().any(|v| v[0] == v[1]) && s.iter().any(|v| v[0] == -v[1].clone()));
        let f5 = Field::finite(5).unwrap();
        let d5 = QuadraticForm::diagonal(&f5, &[f5.one(), f5.one()]);
        let v = vec![f5.from_i64(2), f5.one()];
        let s = d5.isotropic_spanning_set(&v).unwrap();
        assert_eq!(linalg::rank(&s), 2);
        assert_eq!(
            d.isotropic_spanning_set(&[fq(1), fq(0)]),
            Err(Error::NotIsotropic)
        );
    }

    #[test]
    fn class_flags_chain() {
        for spec in ["F(2)", "F(3)", "F(4)"] {
            let f = Field::parse(spec).unwrap();
            let els = f.elements().unwrap();
            for a in &els {
                for b in &els {
                    for c in &els {
                        let phi = QuadraticForm::new(
                            &f,
                            vec![vec![a.clone(), b.clone()], vec![f.zero(), c.clone()]],
                        )
                        .unwrap();
                        let k = phi.classify().unwrap();
                        assert!(!k.nonsingular || k.nondegenerate);
                        assert!(!k.nondegenerate || k.regular);
                        if f.characteristic() != 2 {
                            assert!(k.nonsingular == k.regular && k.regular == k.nondegenerate);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn polar_is_bilinear_and_matches_values(
            m in proptest::collection::vec(-5i64..5, 9),
            x in proptest::collection::vec(-5i64..5, 3),
            y in proptest::collection::vec(-5i64..5, 3),
            p in 0usize..3,
        ) {
            let field = [Field::rationals(), Field::finite(2).unwrap(), Field::finite(5).unwrap()][p].clone();
            let e = |v: i64| field.from_i64(v);
            let mat: Matrix = (0..3).map(|i| (0..3).map(|j| e(m[3 * i + j])).collect()).collect();
            let phi = QuadraticForm::from_coefficients(&field, &mat).unwrap();
            let xv: Vec<Elem> = x.iter().map(|&v| e(v)).collect();
            let yv: Vec<Elem> = y.iter().map(|&v| e(v)).collect();
            let s: Vec<Elem> = xv.iter().zip(&yv).map(|(a, b)| a.clone() + b.clone()).collect();
            let lhs = phi.eval(&s);
            let rhs = phi.eval(&xv) + phi.eval(&yv) + phi.pol(&xv, &yv);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(phi.pol(&xv, &xv), phi.eval(&xv) * e(2));
            let sx: Vec<Elem> = xv.iter().map(|a| a.clone() * e(3)).collect();
            prop_assert_eq!(phi.eval(&sx), phi.eval(&xv) * e(9));
        }
    }
}
