//! Complete isotropy decisions over finite fields.

use crate::field::Field;
use crate::form::QuadraticForm;

/// Classification without enumeration: every form of dimension at least 3
/// is isotropic (Chevalley-Warning); dimension 1 needs a zero coefficient;
/// a binary form `[a, b, c]` is isotropic iff `a = 0` or `aX^2 + bX + c` has
/// a root, decided by Euler's criterion or the Artin-Schreier trace.
pub fn structured_isotropic(phi: &QuadraticForm) -> bool {
    let f = phi.field();
    assert!(f.is_finite());
    match phi.dim() {
        0 => false,
        1 => phi.coeff(0, 0).is_zero(),
        2 => {
            let (a, b, c) = (phi.coeff(0, 0), phi.coeff(0, 1), phi.coeff(1, 1));
            if a.is_zero() || c.is_zero() {
                return true;
            }
            let q = f.size().unwrap();
            if f.characteristic() != 2 {
                let disc = b.clone() * b.clone() - f.from_i64(4) * a.clone() * c.clone();
                disc.is_zero() || disc.pow((q - 1) / 2).is_one()
            } else if b.is_zero() {
                // aX^2 + c = a (X + sqrt(c/a))^2 in a perfect field
                true
            } else {
                // X = (b/a) Y turns it into Y^2 + Y + ac/b^2
                let r = a.clone() * c.clone() / (b.clone() * b.clone());
                absolute_trace(f, &r).is_zero()
            }
        }
        _ => true,
    }
}

/// Trace from `F_{2^k}` to `F_2`: `r + r^2 + ... + r^(2^(k-1))`.
fn absolute_trace(f: &Field, r: &crate::field::Elem) -> crate::field::Elem {
    let k = f.size().unwrap().trailing_zeros();
    let mut acc = f.zero();
    let mut p = r.clone();
    for _ in 0..k {
        acc += &p;
        p = p.square();
    }
    acc
}
