//! Dense univariate polynomials over a coefficient field, coefficients low to high.

use super::{Field, Val};
use crate::error::{Error, Result};
use crate::linalg;

pub(crate) fn trim(c: &Field, mut a: Vec<Val>) -> Vec<Val> {
    while a.last().is_some_and(|x| c.is_zero_val(x)) {
        a.pop();
    }
    a
}

pub(crate) fn add(c: &Field, a: &[Val], b: &[Val]) -> Vec<Val> {
    let n = a.len().max(b.len());
    let zero = c.zero_val();
    let out = (0..n)
        .map(|i| c.add_val(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(c, out)
}

pub(crate) fn neg(c: &Field, a: &[Val]) -> Vec<Val> {
    a.iter().map(|x| c.neg_val(x)).collect()
}

pub(crate) fn scale(c: &Field, a: &[Val], s: &Val) -> Vec<Val> {
    trim(c, a.iter().map(|x| c.mul_val(x, s)).collect())
}

pub(crate) fn mul(c: &Field, a: &[Val], b: &[Val]) -> Vec<Val> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![c.zero_val(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if c.is_zero_val(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = c.mul_val(x, y);
            out[i + j] = c.add_val(&out[i + j], &t);
        }
    }
    trim(c, out)
}

pub(crate) fn divrem(c: &Field, a: &[Val], b: &[Val]) -> (Vec<Val>, Vec<Val>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = c.inv_val(b.last().unwrap()).unwrap();
    if r.len() <= db {
        return (vec![], trim(c, r));
    }
    let mut qt = vec![c.zero_val(); r.len() - db];
    while r.len() > db {
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        if !c.is_zero_val(&top) {
            let f = c.mul_val(&top, &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                let t = c.mul_val(&f, bi);
                r[shift + i] = c.add_val(&r[shift + i], &c.neg_val(&t));
            }
            qt[shift] = f;
        }
        r.pop();
    }
    (trim(c, qt), trim(c, r))
}

fn monic(c: &Field, a: &[Val]) -> Vec<Val> {
    match a.last() {
        None => vec![],
        Some(l) => scale(c, a, &c.inv_val(l).unwrap()),
    }
}

pub(crate) fn gcd(c: &Field, a: &[Val], b: &[Val]) -> Vec<Val> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(c, &x, &y);
        x = y;
        y = r;
    }
    monic(c, &x)
}

pub(crate) fn fmt(c: &Field, a: &[Val], var: &str) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let terms: Vec<(String, String, bool)> = a
        .iter()
        .enumerate()
        .rev()
        .map(|(i, x)| {
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            (c.fmt_val(x), mono, c.is_zero_val(x))
        })
        .collect();
    super::join_terms(&terms)
}

/// Square root of a polynomial, if it is a square.
pub(crate) fn sqrt(c: &Field, a: &[Val]) -> Result<Option<Vec<Val>>> {
    if a.is_empty() {
        return Ok(Some(vec![]));
    }
    let deg = a.len() - 1;
    if deg % 2 == 1 {
        return Ok(None);
    }
    if c.characteristic() == 2 {
        let size = c
            .size()
            .ok_or_else(|| Error::Unsupported("imperfect coefficient field".into()))?;
        let mut out = Vec::new();
        for (i, x) in a.iter().enumerate() {
            if i % 2 == 1 {
                if !c.is_zero_val(x) {
                    return Ok(None);
                }
            } else {
                out.push(c.wrap(x.clone()).pow(size / 2).val);
            }
        }
        return Ok(Some(trim(c, out)));
    }
    let lead = c.wrap(a[deg].clone());
    let l = match c.sqrt(&lead)? {
        Some(l) => l,
        None => return Ok(None),
    };
    // Determine coefficients of s from the top: s = sum s_i x^i, deg s = deg/2.
    let m = deg / 2;
    let mut s = vec![c.zero_val(); m + 1];
    s[m] = l.val.clone();
    let two_l_inv = c
        .inv_val(&c.mul_val(&c.int_val(&2.into()), &l.val))
        .unwrap();
    for k in (0..m).rev() {
        // coefficient of x^(m + k) in s^2 must match a[m + k]
        let idx = m + k;
        let mut acc = c.zero_val();
        for i in (k + 1)..=m {
            let j = idx - i;
            if j > k && j <= m {
                acc = c.add_val(&acc, &c.mul_val(&s[i], &s[j]));
            }
        }
        let diff = c.add_val(&a[idx], &c.neg_val(&acc));
        s[k] = c.mul_val(&diff, &two_l_inv);
    }
    let s = trim(c, s);
    if mul(c, &s, &s) == trim(c, a.to_vec()) {
        Ok(Some(s))
    } else {
        Ok(None)
    }
}

/// Solve `u^2 + v u = p` for a polynomial `u` over `F_{2^k}`. The map
/// `u -> u^2 + v u` is F_2-linear in the coefficients, so this is linear
/// algebra over F_2.
pub(crate) fn artin_schreier_poly(c: &Field, v: &[Val], p: &[Val]) -> Result<Option<Vec<Val>>> {
    let q = c
        .size()
        .ok_or_else(|| Error::Unsupported("Artin-Schreier over imperfect coefficients".into()))?;
    let kdeg = q.trailing_zeros() as usize;
    let dv = v.len().saturating_sub(1);
    let dp = p.len().saturating_sub(1);
    let du = dv.max(dp / 2 + 1) + 1;
    let f2 = Field::finite(2)?;
    // F_2-basis of F_{2^k}: 1, g, g^2, ...
    let basis: Vec<Val> = if kdeg == 1 {
        vec![c.one_val()]
    } else {
        let g = c.generator();
        (0..kdeg).map(|i| g.pow(i as u64).val).collect()
    };
    let coords = |x: &Val| -> Vec<u64> {
        match x {
            Val::Fin(cs) => cs.clone(),
            _ => unreachable!(),
        }
    };
    let out_len = (2 * du + 1).max(du + dv + 1).max(dp + 1);
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for i in 0..du {
        for b in &basis {
            let mut u = vec![c.zero_val(); i + 1];
            u[i] = b.clone();
            let img = add(c, &mul(c, &u, &u), &mul(c, v, &u));
            let mut col = Vec::with_capacity(out_len * kdeg);
            for d in 0..out_len {
                let x = img.get(d).cloned().unwrap_or_else(|| c.zero_val());
                col.extend(coords(&x));
            }
            cols.push(col);
        }
    }
    let rows = out_len * kdeg;
    let mut target = Vec::with_capacity(rows);
    for d in 0..out_len {
        let x = p.get(d).cloned().unwrap_or_else(|| c.zero_val());
        target.extend(coords(&x));
    }
    let a: Vec<Vec<super::Elem>> = (0..rows)
        .map(|r| cols.iter().map(|col| f2.from_i64(col[r] as i64)).collect())
        .collect();
    let b: Vec<super::Elem> = target.iter().map(|&x| f2.from_i64(x as i64)).collect();
    let sol = match linalg::solve(&f2, &a, &b) {
        Ok(s) => s,
        Err(Error::NoSolution) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut u = vec![c.zero_val(); du];
    for i in 0..du {
        for (j, bv) in basis.iter().enumerate() {
            if sol[i * kdeg + j].is_one() {
                u[i] = c.add_val(&u[i], bv);
            }
        }
    }
    Ok(Some(trim(c, u)))
}
