//! Springer's theorem over `k(t)` with `char k != 2`: a diagonal form
//! `sum u_i t^{e_i}` (units `u_i` at a place) is anisotropic over the
//! completion iff both residue forms, split by the parity of `e_i`, are
//! anisotropic over the residue field. Anisotropy at one place implies
//! anisotropy over `k(t)`.

use super::{bounded_search, diagonalize, isotropy, IsotropyVerdict};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::form::QuadraticForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnPlace {
    /// The place `t = a` for a constant `a`.
    Finite(Elem),
    Infinity,
}

impl std::fmt::Display for FnPlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FnPlace::Finite(a) if a.is_zero() => f.write_str("t"),
            FnPlace::Finite(a) => write!(f, "t-({a})"),
            FnPlace::Infinity => f.write_str("inf"),
        }
    }
}

/// `p(t + a)` for a polynomial given low to high.
fn shift(p: &[Elem], a: &Elem) -> Vec<Elem> {
    let mut out: Vec<Elem> = Vec::new();
    for c in p.iter().rev() {
        // out = out * (t + a) + c
        let mut next = vec![c.field().zero(); out.len() + 1];
        for (i, x) in out.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + x.clone();
            next[i] = next[i].clone() + x.clone() * a.clone();
        }
        next[0] = next[0].clone() + c.clone();
        out = next;
    }
    out
}

/// Valuation and residue (leading unit) of a nonzero element at a place.
pub fn valuation_residue(x: &Elem, place: &FnPlace) -> (i64, Elem) {
    let f = x.field();
    let (num, den) = f.fraction_parts(x);
    match place {
        FnPlace::Finite(a) => {
            let (n, d) = (shift(&num, a), shift(&den, a));
            let on = n.iter().position(|c| !c.is_zero()).unwrap();
            let od = d.iter().position(|c| !c.is_zero()).unwrap();
            (on as i64 - od as i64, n[on].clone() / d[od].clone())
        }
        FnPlace::Infinity => {
            let dn = num.len() as i64 - 1;
            let dd = den.len() as i64 - 1;
            (
                dd - dn,
                num.last().unwrap().clone() / den.last().unwrap().clone(),
            )
        }
    }
}

/// Springer reduction of `phi` at `place`.
///
/// Returns `Anisotropic` when both residue forms are anisotropic,
/// `Isotropic` when a residue witness lifts exactly (always the case for
/// coefficients `c t^e`), and `Unknown(0)` otherwise.
pub fn springer_reduce(phi: &QuadraticForm, place: &FnPlace) -> Result<IsotropyVerdict> {
    let f = phi.field();
    let k = f
        .coeff_field()
        .ok_or_else(|| Error::Precondition("Springer reduction needs k(t)".into()))?;
    if k.characteristic() == 2 {
        return Err(Error::Precondition("residue characteristic 2".into()));
    }
    let (diag, vecs) = diagonalize(phi)?;
    if let Some(i) = diag.iter().position(|d| d.is_zero()) {
        return Ok(IsotropyVerdict::isotropic(phi, vecs[i].clone()));
    }
    let data: Vec<(i64, Elem)> = diag.iter().map(|d| valuation_residue(d, place)).collect();
    let mut residue_verdicts = Vec::new();
    for parity in [0i64, 1] {
        let idx: Vec<usize> = (0..data.len())
            .filter(|&i| data[i].0.rem_euclid(2) == parity)
            .collect();
        let units: Vec<Elem> = idx.iter().map(|&i| data[i].1.clone()).collect();
        let res = QuadraticForm::diagonal(k, &units);
        residue_verdicts.push((idx, isotropy(&res)));
    }
    if residue_verdicts.iter().all(|(_, v)| v.is_anisotropic()) {
        return Ok(IsotropyVerdict::Anisotropic(format!("springer at {place}")));
    }
    // lift x_i = xbar_i t^{-floor(e_i/2)} (t^{+} at infinity is the same power of t)
    let t = f.generator();
    for (idx, v) in &residue_verdicts {
        if let IsotropyVerdict::Isotropic(xbar) = v {
            let mut coeffs = vec![f.zero(); diag.len()];
            for (pos, &i) in idx.iter().enumerate() {
                let e = data[i].0;
                let power = match place {
                    FnPlace::Infinity => (e + 1).div_euclid(2),
                    FnPlace::Finite(_) => -e.div_euclid(2),
                };
                let tp = if power >= 0 {
                    t.pow(power as u64)
                } else {
                    t.pow((-power) as u64).inv().unwrap()
                };
                coeffs[i] = f.lift_coeff(&xbar[pos]) * tp;
            }
            let w = super::combine(&coeffs, &vecs, phi.dim(), f);
            if phi.eval(&w).is_zero() {
                return Ok(IsotropyVerdict::isotropic(phi, w));
            }
        }
    }
    Ok(IsotropyVerdict::Unknown(0))
}

/// Places tried by the dispatcher, in order.
pub fn default_places(f: &Field) -> Vec<FnPlace> {
    let k = f.coeff_field().expect("rational function field");
    let mut out = vec![FnPlace::Finite(k.zero()), FnPlace::Infinity];
    for a in [1, -1, 2, -2] {
        let c = k.from_i64(a);
        if !c.is_zero() && !out.contains(&FnPlace::Finite(c.clone())) {
            out.push(FnPlace::Finite(c));
        }
    }
    out
}

pub(super) fn springer_oracle(phi: &QuadraticForm, height: u32) -> IsotropyVerdict {
    for place in default_places(phi.field()) {
        match springer_reduce(phi, &place) {
            Ok(v @ (IsotropyVerdict::Anisotropic(_) | IsotropyVerdict::Isotropic(_))) => return v,
            _ => {}
        }
    }
    bounded_search(phi, height)
}
