//! Projective enumeration shared by the finite-field oracle and bounded search.

use crate::field::Elem;
use crate::form::QuadraticForm;

/// Visit every vector of `scalars^n` whose first nonzero coordinate is 1, in
/// lexicographic order (coordinates compared by their index in `scalars`,
/// which must start with 0 and contain 1). Stops when `f` returns true or
/// after `cap` visits; returns the accepted vector and the visit count.
pub fn projective_scan<F>(scalars: &[Elem], n: usize, cap: u64, f: F) -> (Option<Vec<Elem>>, u64)
where
    F: FnMut(&[Elem]) -> bool,
{
    let one = scalars[0].field().one();
    scan_with_leads(scalars, &[one], n, cap, f)
}

/// Like [`projective_scan`], with the first nonzero coordinate running over
/// `leads` instead of being fixed to 1.
pub fn scan_with_leads<F>(
    scalars: &[Elem],
    leads: &[Elem],
    n: usize,
    cap: u64,
    mut f: F,
) -> (Option<Vec<Elem>>, u64)
where
    F: FnMut(&[Elem]) -> bool,
{
    assert!(scalars[0].is_zero());
    let field = scalars[0].field().clone();
    let mut visits = 0u64;
    // lexicographic: vectors with more leading zeros come first
    for pos in (0..n).rev() {
        for lead in leads {
            let free = n - pos - 1;
            let mut idx = vec![0usize; free];
            let mut v = vec![field.zero(); n];
            v[pos] = lead.clone();
            loop {
                for (k, &i) in idx.iter().enumerate() {
                    v[pos + 1 + k] = scalars[i].clone();
                }
                visits += 1;
                if f(&v) {
                    return (Some(v), visits);
                }
                if visits >= cap {
                    return (None, visits);
                }
                // odometer, rightmost fastest
                let mut k = free;
                let mut wrapped = true;
                while k > 0 {
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < scalars.len() {
                        wrapped = false;
                        break;
                    }
                    idx[k] = 0;
                }
                if wrapped {
                    break;
                }
            }
        }
    }
    (None, visits)
}

/// Smallest projective zero of `phi` with coordinates in `scalars`.
pub fn scan_zero(phi: &QuadraticForm, scalars: &[Elem], cap: u64) -> (Option<Vec<Elem>>, u64) {
    projective_scan(scalars, phi.dim(), cap, |v| phi.eval(v).is_zero())
}
