//! Clifford algebras of quadratic forms by structure constants, in every
//! characteristic. Monomials `e_S` are indexed by bitmasks and kept in
//! increasing index order, using `e_i^2 = φ(e_i)` and
//! `e_j e_i = b(e_i, e_j) - e_i e_j`.

use serde_json::json;

use crate::algebra::Algebra;
use crate::corestriction::{f_matrix, m2_is_zero, m2_mul, AlbertData, TensorAlgebra, M2};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::form::QuadraticForm;
use crate::linalg;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    form: QuadraticForm,
    algebra: Algebra,
}

type Comb = Vec<(usize, Elem)>;

fn push(out: &mut Comb, mask: usize, c: Elem) {
    if c.is_zero() {
        return;
    }
    if let Some(p) = out.iter().position(|(m, _)| *m == mask) {
        let s = out[p].1.clone() + c;
        if s.is_zero() {
            out.remove(p);
        } else {
            out[p].1 = s;
        }
    } else {
        out.push((mask, c));
    }
}

/// `e_S e_j` in normal form.
fn times_generator(phi: &QuadraticForm, polar: &[Vec<Elem>], s: usize, j: usize) -> Comb {
    let f = phi.field();
    if s == 0 {
        return vec![(1 << j, f.one())];
    }
    let last = usize::BITS as usize - 1 - s.leading_zeros() as usize;
    let rest = s & !(1 << last);
    if last < j {
        return vec![(s | 1 << j, f.one())];
    }
    if last == j {
        return vec![(rest, phi.coeff(j, j).clone())].into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    // e_R e_last e_j = b(last, j) e_R - (e_R e_j) e_last
    let mut out: Comb = Vec::new();
    push(&mut out, rest, polar[last][j].clone());
    for (m, c) in times_generator(phi, polar, rest, j) {
        for (m2, c2) in times_generator(phi, polar, m, last) {
            push(&mut out, m2, -(c.clone() * c2));
        }
    }
    out
}

impl CliffordAlgebra {
    pub fn new(phi: &QuadraticForm) -> Result<Self> {
        let n = phi.dim();
        if n > MAX_DIM {
            return Err(Error::DimensionCap(n));
        }
        let f = phi.field();
        let polar = phi.polar_matrix();
        let size = 1usize << n;
        let mut table = vec![vec![vec![]; size]; size];
        for s in 0..size {
            for t in 0..size {
                let mut cur: Comb = vec![(s, f.one())];
                for j in 0..n {
                    if t >> j & 1 == 1 {
                        let mut next = Vec::new();
                        for (m, c) in &cur {
                            for (m2, c2) in times_generator(phi, &polar, *m, j) {
                                push(&mut next, m2, c.clone() * c2);
                            }
                        }
                        cur = next;
                    }
                }
                cur.sort_by_key(|(m, _)| *m);
                table[s][t] = cur;
            }
        }
        let mut unit = vec![f.zero(); size];
        unit[0] = f.one();
        Ok(CliffordAlgebra { form: phi.clone(), algebra: Algebra::new(f, table, unit) })
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Masks of the even monomials, in increasing order.
    pub fn even_masks(&self) -> Vec<usize> {
        (0..self.dim()).filter(|m| m.count_ones() % 2 == 0).collect()
    }

    /// The even Clifford algebra `C_0` on the even monomials.
    pub fn even_part(&self) -> Algebra {
        let masks = self.even_masks();
        let pos = |m: usize| masks.iter().position(|&x| x == m).unwrap();
        let table = masks
            .iter()
            .map(|&s| {
                masks
                    .iter()
                    .map(|&t| {
                        self.algebra
                            .basis_product(s, t)
                            .iter()
                            .map(|(m, c)| (pos(*m), c.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let f = self.form.field();
        let mut unit = vec![f.zero(); masks.len()];
        unit[0] = f.one();
        Algebra::new(f, table, unit)
    }

    /// Basis of the center of `C_0`, computed as the centralizer of the
    /// degree-two monomials that generate it.
    pub fn even_center(&self) -> Vec<Vec<Elem>> {
        let c0 = self.even_part();
        let masks = self.even_masks();
        let gens: Vec<Vec<Elem>> = masks
            .iter()
            .enumerate()
            .filter(|(_, m)| m.count_ones() == 2)
            .map(|(i, _)| c0.basis_vector(i))
            .collect();
        c0.centralizer(&gens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"form_dim": self.form.dim(), "algebra": self.algebra.to_json()})
    }
}

pub fn clifford(phi: &QuadraticForm) -> Result<CliffordAlgebra> {
    CliffordAlgebra::new(phi)
}

/// Arf invariant / discriminant: `Some(e)` with `e` a nontrivial idempotent
/// in the center of `C_0` (coordinates over the even monomials) when the
/// invariant is trivial, `None` otherwise.
pub fn arf_trivial(phi: &QuadraticForm) -> Result<Option<Vec<Elem>>> {
    let n = phi.dim();
    if n == 0 || n % 2 == 1 || n > MAX_DIM {
        return Err(Error::Precondition("expected a form of even dimension 2..=6".into()));
    }
    if !phi.classify()?.nonsingular {
        return Err(Error::Precondition("form must be nonsingular".into()));
    }
    let c = CliffordAlgebra::new(phi)?;
    let c0 = c.even_part();
    let z = c.even_center();
    if z.len() != 2 {
        return Err(Error::InternalContradiction(format!("center of C_0 has dim {}", z.len())));
    }
    let f = phi.field();
    let one = c0.unit().to_vec();
    // a central element outside F·1
    let u = z
        .iter()
        .find(|v| linalg::rank(&vec![one.clone(), (*v).clone()]) == 2)
        .unwrap()
        .clone();
    let u2 = c0.mul(&u, &u);
    // u^2 = p + r u
    let cols = linalg::transpose(&vec![one.clone(), u.clone()]);
    let pr = linalg::solve(f, &cols, &u2)?;
    let (p, r) = (pr[0].clone(), pr[1].clone());
    // roots of X^2 - rX - p
    let Some(rho) = f.quadratic_root(&(-r.clone()), &(-p))? else {
        return Ok(None);
    };
    let rho2 = r - rho.clone();
    let d = rho.clone() - rho2.clone();
    let Some(dinv) = d.inv() else {
        return Err(Error::InternalContradiction("center of C_0 is not étale".into()));
    };
    // e = (u - rho2) / (rho - rho2)
    let e: Vec<Elem> = u
        .iter()
        .zip(&one)
        .map(|(a, b)| (a.clone() - rho2.clone() * b.clone()) * dinv.clone())
        .collect();
    debug_assert_eq!(c0.mul(&e, &e), e);
    Ok(Some(e))
}

/// The norm form `x^2 + b xy + q1 q2 y^2` of `C_0(ψ) = F[e1 e2]` for a
/// binary form `ψ = q1 x^2 + b xy + q2 y^2`; `q1 ψ` is isometric to it.
pub fn even_norm_form(psi: &QuadraticForm) -> Result<QuadraticForm> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: psi.dim() });
    }
    let f = psi.field();
    let (q1, b, q2) = (psi.coeff(0, 0).clone(), psi.coeff(0, 1).clone(), psi.coeff(1, 1).clone());
    QuadraticForm::new(f, vec![vec![f.one(), b], vec![f.zero(), q1 * q2]])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordIsoReport {
    pub rank: usize,
    pub even_diagonal: bool,
    pub entries_in_cor: bool,
}

impl CliffordIsoReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"rank": self.rank, "even_diagonal": self.even_diagonal, "entries_in_cor": self.entries_in_cor})
    }
}

/// Extend `f` to the monomials of `C(V^s, φ)`, check the defining relations,
/// and compute the F-rank of the 64 images inside `M_2` of the tensor algebra.
pub fn clifford_iso_check(t: &TensorAlgebra, data: &AlbertData) -> Result<CliffordIsoReport> {
    let f = t.f();
    let n = data.vs_basis.len();
    let gens: Vec<M2> = data.vs_basis.iter().map(|x| f_matrix(t, &data.kappa, x)).collect();
    let polar = data.albert.polar_matrix();
    let scalar_m2 = |c: &Elem| -> M2 {
        let s = t.scalar(&t.k().lift(c));
        [s.clone(), t.zero(), t.zero(), s]
    };
    for i in 0..n {
        for j in i..n {
            let lhs = if i == j {
                m2_mul(t, &gens[i], &gens[i])
            } else {
                let a = m2_mul(t, &gens[i], &gens[j]);
                let b = m2_mul(t, &gens[j], &gens[i]);
                std::array::from_fn(|k| t.add(&a[k], &b[k]))
            };
            let rhs = if i == j { scalar_m2(data.albert.coeff(i, i)) } else { scalar_m2(&polar[i][j]) };
            if lhs != rhs {
                return Err(Error::RelationViolation(format!("generators {i}, {j}")));
            }
        }
    }
    let mut images: Vec<M2> = Vec::with_capacity(1 << n);
    images.push(scalar_m2(&f.one()));
    for s in 1usize..(1 << n) {
        let last = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        images.push(m2_mul(t, &images[s & !(1 << last)], &gens[last]));
    }
    let mut even_diagonal = true;
    let mut entries_in_cor = true;
    let rows: Vec<Vec<Elem>> = images
        .iter()
        .enumerate()
        .map(|(s, m)| {
            if s.count_ones() % 2 == 0 {
                even_diagonal &= m2_is_zero(&[m[1].clone(), m[2].clone(), t.zero(), t.zero()]);
            }
            entries_in_cor &= m.iter().all(|e| t.switch(e) == *e);
            m.iter().flat_map(|e| t.realify(e)).collect()
        })
        .collect();
    let rank = linalg::rank(&rows);
    if rank < 1 << n {
        return Err(Error::RankDeficient { expected: 1 << n, got: rank });
    }
    Ok(CliffordIsoReport { rank, even_diagonal, entries_in_cor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corestriction::albert_form;
    use crate::field::Field;
    use crate::quaternion::Quaternion;

    #[test]
    fn small_clifford_algebras() {
        for f in [Field::rationals(), Field::finite(2).unwrap(), Field::finite(3).unwrap()] {
            let a = f.from_i64(-1);
            let c = clifford(&QuadraticForm::diagonal(&f, &[a.clone()])).unwrap();
            assert_eq!(c.dim(), 2);
            assert_eq!(c.algebra().mul(&[f.zero(), f.one()], &[f.zero(), f.one()]), vec![a, f.zero()]);
            let h = clifford(&QuadraticForm::hyperbolic_plane(&f)).unwrap();
            assert!(h.algebra().is_associative());
            assert!(arf_trivial(&QuadraticForm::hyperbolic_plane(&f)).unwrap().is_some());
            let phi = QuadraticForm::new(
                &f,
                vec![
                    vec![f.one(), f.one(), f.zero()],
                    vec![f.zero(), f.from_i64(2), f.one()],
                    vec![f.zero(), f.zero(), f.from_i64(-1)],
                ],
            )
            .unwrap();
            let c3 = clifford(&phi).unwrap();
            assert!(c3.algebra().is_associative() && c3.algebra().is_unital());
            assert_eq!(c3.even_part().dim(), 4);
        }
        let q = Field::rationals();
        assert!(arf_trivial(&QuadraticForm::diagonal(&q, &[q.one(), q.one()])).unwrap().is_none());
        assert!(matches!(clifford(&QuadraticForm::zero_form(&q, 7)), Err(Error::DimensionCap(7))));
    }

    #[test]
    fn binary_even_norm_form() {
        let q = Field::rationals();
        let psi = QuadraticForm::binary(&q, &q.from_i64(3), &q.from_i64(5));
        let n = even_norm_form(&psi).unwrap();
        let scaled = psi.scale(&q.from_i64(3)).unwrap();
        let cols = vec![vec![q.from_i64(3), q.zero()], vec![q.zero(), q.one()]];
        assert!(n.pulls_back_to(&cols, &scaled));
    }

    #[test]
    fn albert_clifford_hamilton() {
        let f = Field::rationals();
        let k = Field::quadratic(&f, &f.zero(), &f.from_i64(2), "r").unwrap();
        let t = TensorAlgebra::new(&Quaternion::hamilton(&k).unwrap()).unwrap();
        let data = albert_form(&t).unwrap();
        assert!(arf_trivial(&data.albert).unwrap().is_some());
        let rep = clifford_iso_check(&t, &data).unwrap();
        assert_eq!(rep.rank, 64);
        assert!(rep.even_diagonal && rep.entries_in_cor);
    }
}
