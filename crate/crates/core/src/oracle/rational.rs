//! Local-global isotropy over Q: Hilbert symbols, Hasse-Minkowski, and
//! witness construction for forms proven isotropic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Prime factors of |n| (n nonzero), ascending, without multiplicity.
/// Panics when a factor exceeds `u64`; see [`try_prime_factors`].
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    try_prime_factors(n).expect("prime factor beyond u64 or factorization incomplete")
}

/// `None` when the factorization is incomplete or a prime exceeds `u64`.
pub fn try_prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let m = n.abs().to_biguint()?;
    if m <= num_bigint::BigUint::one() {
        return Some(Vec::new());
    }
    let (found, rest) = num_prime::nt_funcs::factors(m, None);
    if rest.is_some() {
        return None;
    }
    found.keys().map(|p| p.to_u64()).collect()
}

/// Write `r = s * k^2` with `s` a squarefree integer; returns `(s, k)`.
pub fn squarefree_decomposition(r: &BigRational) -> (BigInt, BigRational) {
    assert!(!r.is_zero());
    let m = r.numer() * r.denom();
    let mut s = if m.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut k = BigInt::one();
    for p in prime_factors(&m) {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        let mut t = m.abs();
        while (&t % &bp).is_zero() {
            t /= &bp;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &bp;
        }
        k *= bp.pow(e / 2);
    }
    // r = m / d^2 = s k^2 / d^2
    (s, BigRational::new(k, r.denom().clone()))
}

fn val_unit(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while (&n % &bp).is_zero() {
        n /= &bp;
        e += 1;
    }
    (e, n)
}

/// Legendre symbol of a unit modulo an odd prime.
fn legendre(a: &BigInt, p: u64) -> i8 {
    let bp = BigInt::from(p);
    let r = a.mod_floor(&bp).modpow(&BigInt::from((p - 1) / 2), &bp);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod_small(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// The local Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol_q(a: &BigRational, b: &BigRational, place: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    // n/d and n*d share a square class
    hilbert_int(&(a.numer() * a.denom()), &(b.numer() * b.denom()), place)
}

fn hilbert_int(a: &BigInt, b: &BigInt, place: Place) -> i8 {
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = val_unit(a, 2);
            let (be, v) = val_unit(b, 2);
            let eps = |x: &BigInt| ((mod_small(x, 4) + 3) / 2) % 2; // (x-1)/2 mod 2
            let omega = |x: &BigInt| {
                let r = mod_small(x, 8);
                u64::from(r == 3 || r == 5)
            };
            let e = eps(&u) * eps(&v) + al as u64 * omega(&v) + be as u64 * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = val_unit(a, p);
            let (be, v) = val_unit(b, p);
            let mut s: i8 = 1;
            if (al * be) % 2 == 1 && (p % 4 == 3) {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// Is the nonzero integer `d` a square in `Q_v`?
fn is_local_square(d: &BigInt, place: Place) -> bool {
    match place {
        Place::Infinity => d.is_positive(),
        Place::Prime(p) => {
            let (v, u) = val_unit(d, p);
            v % 2 == 0 && if p == 2 { mod_small(&u, 8) == 1 } else { legendre(&u, p) == 1 }
        }
    }
}

/// Places at which a diagonal form with squarefree integer entries can fail
/// to be isotropic: infinity, 2 and the primes dividing an entry.
pub fn relevant_places(ds: &[BigInt]) -> Vec<Place> {
    let mut ps: Vec<u64> = vec![2];
    for d in ds {
        ps.extend(prime_factors(d));
    }
    ps.sort_unstable();
    ps.dedup();
    let mut out = vec![Place::Infinity];
    out.extend(ps.into_iter().map(Place::Prime));
    out
}

/// Is the diagonal form with squarefree integer entries isotropic over Q_v?
pub fn locally_isotropic(ds: &[BigInt], place: Place) -> bool {
    match ds.len() {
        0 | 1 => false,
        2 => is_local_square(&(-&ds[0] * &ds[1]), place),
        3 => {
            let (a, b, c) = (&ds[0], &ds[1], &ds[2]);
            hilbert_int(&(-a * c), &(-b * c), place) == 1
        }
        4 => {
            let d: BigInt = ds.iter().product();
            if !is_local_square(&d, place) {
                return true;
            }
            let mut eps = 1i8;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    eps *= hilbert_int(&ds[i], &ds[j], place);
                }
            }
            let m1 = -BigInt::one();
            eps == hilbert_int(&m1, &m1, place)
        }
        _ => match place {
            Place::Infinity => {
                ds.iter().any(|d| d.is_positive()) && ds.iter().any(|d| d.is_negative())
            }
            Place::Prime(_) => true,
        },
    }
}

/// Hasse-Minkowski: a regular diagonal form over Q is isotropic iff it is
/// isotropic at every place. Returns the first place where it fails.
pub fn hasse_minkowski_diag(ds: &[BigInt]) -> Option<Place> {
    if ds.len() < 2 {
        return Some(Place::Infinity);
    }
    relevant_places(ds)
        .into_iter()
        .find(|&v| !locally_isotropic(ds, v))
}

/// A nonzero integer zero of `sum ds[i] x_i^2`, for squarefree integer
/// entries known to give an isotropic form. Returns `None` only if the
/// search cap is reached.
pub fn rational_witness(ds: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = ds.len();
    let zero = BigRational::zero;
    if n == 2 {
        let r = crate::field::int_sqrt(&(-&ds[0] * &ds[1]))?;
        return Some(vec![
            BigRational::from_integer(r),
            BigRational::from_integer(ds[0].clone()),
        ]);
    }
    // a zero coefficient never occurs: entries are squarefree nonzero
    if n == 3 {
        return ternary_witness(ds);
    }
    // a two-dimensional hyperbolic subform gives a witness immediately
    for i in 0..n {
        for j in (i + 1)..n {
            if let Some(r) = crate::field::int_sqrt(&(-&ds[i] * &ds[j])) {
                let mut w = vec![zero(); n];
                w[i] = BigRational::from_integer(r);
                w[j] = BigRational::from_integer(ds[i].clone());
                return Some(w);
            }
        }
    }
    // an isotropic ternary subform
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let sub = [ds[i].clone(), ds[j].clone(), ds[k].clone()];
                if hasse_minkowski_diag(&sub).is_none() {
                    let t = ternary_witness(&sub)?;
                    let mut w = vec![zero(); n];
                    w[i] = t[0].clone();
                    w[j] = t[1].clone();
                    w[k] = t[2].clone();
                    return Some(w);
                }
            }
        }
    }
    // merge the first two coordinates: t = d0 x^2 + d1 y^2
    for h in 1i64..60 {
        for x in 0..=h {
            let ys = if x == h { vec![0] } else { vec![h - x, x - h] };
            for y in ys {
                let (bx, by) = (BigInt::from(x), BigInt::from(y));
                let t = &ds[0] * &bx * &bx + &ds[1] * &by * &by;
                if t.is_zero() {
                    let mut w = vec![zero(); n];
                    w[0] = BigRational::from_integer(bx);
                    w[1] = BigRational::from_integer(by);
                    return Some(w);
                }
                let (ts, k) = squarefree_decomposition(&BigRational::from_integer(t));
                let mut rest = vec![ts];
                rest.extend(ds[2..].iter().cloned());
                if hasse_minkowski_diag(&rest).is_some() {
                    continue;
                }
                let sub = rational_witness(&rest)?;
                // t = ts k^2, so (x, y) * sub[0] / k has value ts sub[0]^2
                let scale = sub[0].clone() / k;
                let mut w = vec![
                    BigRational::from_integer(bx) * scale.clone(),
                    BigRational::from_integer(by) * scale,
                ];
                w.extend(sub[1..].iter().cloned());
                if w.iter().all(|c| c.is_zero()) {
                    continue;
                }
                return Some(w);
            }
        }
    }
    None
}

/// Zero of `a x^2 + b y^2 + c z^2` (squarefree entries, locally isotropic
/// everywhere): a short search for small points, then Legendre descent.
fn ternary_witness(ds: &[BigInt]) -> Option<Vec<BigRational>> {
    let (a, b, c) = (&ds[0], &ds[1], &ds[2]);
    for x in 0..=8i64 {
        let bx = BigInt::from(x);
        for y in 0..=8i64 {
            if x == 0 && y == 0 {
                continue;
            }
            let by = BigInt::from(y);
            let q = BigRational::new(-(a * &bx * &bx + b * &by * &by), c.clone());
            if q.is_negative() {
                continue;
            }
            if let (Some(zn), Some(zd)) = (crate::field::int_sqrt(q.numer()), crate::field::int_sqrt(q.denom())) {
                return Some(vec![
                    BigRational::from_integer(bx),
                    BigRational::from_integer(by),
                    BigRational::new(zn, zd),
                ]);
            }
        }
    }
    // multiply by -a: (a x)^2 = (-ab) y^2 + (-ac) z^2
    let (sa, ka) = squarefree_decomposition(&BigRational::from_integer(-(a * b)));
    let (sb, kb) = squarefree_decomposition(&BigRational::from_integer(-(a * c)));
    let (x0, y0, z0) = legendre_solve(&sa, &sb)?;
    // (-ab) = sa ka^2, so y = y0 / ka; likewise for z
    let ar = BigRational::from_integer(a.clone());
    Some(vec![
        BigRational::from_integer(x0) / ar,
        BigRational::from_integer(y0) / ka,
        BigRational::from_integer(z0) / kb,
    ])
}

/// Nontrivial integer solution of `x^2 = a y^2 + b z^2` for squarefree
/// nonzero `a, b`, by Lagrange's descent on `|b|`.
fn legendre_solve(a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt, BigInt)> {
    let (zero, one) = (BigInt::zero(), BigInt::one());
    if a.is_one() {
        return Some((one.clone(), one, zero));
    }
    if b.is_one() {
        return Some((one.clone(), zero, one));
    }
    if (a + b).is_zero() {
        return Some((zero, one.clone(), one));
    }
    if a.abs() > b.abs() {
        let (x, y, z) = legendre_solve(b, a)?;
        return Some((x, z, y));
    }
    if a.is_negative() && b.is_negative() {
        return None;
    }
    // t^2 = a mod b with |t| <= |b|/2
    let bm = b.abs();
    let mut t = sqrt_mod_squarefree(&a.mod_floor(&bm), &bm)?;
    if &t * 2 > bm {
        t -= &bm;
    }
    let num = &t * &t - a;
    if num.is_zero() {
        // a = t^2 is a square, impossible for squarefree a != 1
        return None;
    }
    let (m, k) = squarefree_decomposition(&BigRational::new(num, b.clone()));
    let (x1, y1, z1) = legendre_solve(a, &m)?;
    // (t + sqrt a)(x1 + y1 sqrt a) has norm b m^2 k^2 z1^2
    let x = &t * &x1 + a * &y1;
    let y = &x1 + &t * &y1;
    let z = BigRational::from_integer(m * z1) * k;
    // clear the denominator of k
    let d = z.denom().clone();
    Some((x * &d, y * &d, z.numer().clone()))
}

/// A square root of `r` modulo the squarefree `n > 0`, via Tonelli-Shanks and CRT.
fn sqrt_mod_squarefree(r: &BigInt, n: &BigInt) -> Option<BigInt> {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for p in prime_factors(n) {
        let rp = (r.mod_floor(&BigInt::from(p))).to_u64().unwrap();
        let s = BigInt::from(sqrt_mod_prime(rp, p)?);
        let bp = BigInt::from(p);
        // acc + modulus * u = s (mod p)
        let inv = modulus.mod_floor(&bp).modpow(&(&bp - 2u32), &bp);
        let u = ((&s - &acc) * inv).mod_floor(&bp);
        acc += &modulus * u;
        modulus *= bp;
    }
    Some(acc)
}

fn sqrt_mod_prime(r: u64, p: u64) -> Option<u64> {
    if p == 2 || r == 0 {
        return Some(r % p);
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut out = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                out = mul(out, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        out
    };
    if pow(r, (p - 1) / 2) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow(z, (p - 1) / 2) == p - 1)?;
    let (mut m, mut c, mut t, mut x) = (s, pow(z, q), pow(r, q), pow(r, (q + 1) / 2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let b = pow(c, 1 << (m - i - 1));
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        x = mul(x, b);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn legendre_descent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut solved = 0;
        while solved < 40 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let v: i64 = rng.gen_range(-5000..5000);
                squarefree_decomposition(&r(if v == 0 { 7 } else { v })).0
            };
            let ds = [pick(&mut rng), pick(&mut rng), pick(&mut rng)];
            if hasse_minkowski_diag(&ds).is_some() {
                continue;
            }
            let w = ternary_witness(&ds).expect("locally isotropic conic has a point");
            let v: BigRational = ds.iter().zip(&w).map(|(d, x)| BigRational::from_integer(d.clone()) * x * x).sum();
            assert!(v.is_zero() && w.iter().any(|x| !x.is_zero()), "{ds:?}");
            solved += 1;
        }
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol_q(&r(-1), &r(-1), Place::Infinity), -1);
        assert_eq!(hilbert_symbol_q(&r(-1), &r(-1), Place::Prime(3)), 1);
        assert_eq!(hilbert_symbol_q(&r(-1), &r(-1), Place::Prime(2)), -1);
        for v in [
            Place::Infinity,
            Place::Prime(2),
            Place::Prime(3),
            Place::Prime(7),
        ] {
            assert_eq!(hilbert_symbol_q(&r(1), &r(-7), v), 1);
        }
        assert_eq!(hilbert_symbol_q(&r(2), &r(3), Place::Prime(3)), -1);
    }

    #[test]
    fn hilbert_reciprocity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut pick = || loop {
                let n: i64 = rng.gen_range(-50..=50);
                let d: i64 = rng.gen_range(1..=50);
                if n != 0 {
                    return BigRational::new(n.into(), d.into());
                }
            };
            let (a, b) = (pick(), pick());
            let mut ds = vec![
                squarefree_decomposition(&a).0,
                squarefree_decomposition(&b).0,
            ];
            ds.push(BigInt::from(2));
            let prod: i32 = relevant_places(&ds)
                .into_iter()
                .map(|v| hilbert_symbol_q(&a, &b, v) as i32)
                .product();
            assert_eq!(prod, 1, "({a}, {b})");
        }
    }

    #[test]
    fn local_global_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(hasse_minkowski_diag(&b(&[1, 1, 1, 1])).is_some());
        assert!(hasse_minkowski_diag(&b(&[1, -2])).is_some());
        assert!(hasse_minkowski_diag(&b(&[1, -1])).is_none());
        assert!(hasse_minkowski_diag(&b(&[1, 1, 1, 1, 1, -7])).is_none());
        assert!(hasse_minkowski_diag(&b(&[-1, -1, -1, -2, -5, -10])).is_some());
        // x^2 + y^2 - 3 z^2 fails at 2 and 3
        assert_eq!(hasse_minkowski_diag(&b(&[1, 1, -3])), Some(Place::Prime(2)));
        assert!(!locally_isotropic(&b(&[1, 1, -3]), Place::Prime(3)));
        assert!(locally_isotropic(&b(&[1, 1, -3]), Place::Prime(5)));
        // x^2 + y^2 + z^2 - 7 w^2: 7 is not a sum of three squares in Q_2
        assert_eq!(
            hasse_minkowski_diag(&b(&[1, 1, 1, -7])),
            Some(Place::Prime(2))
        );
        assert!(hasse_minkowski_diag(&b(&[1, 1, 1, -3])).is_none());
        for ds in [
            b(&[1, 1, 1, -3]),
            b(&[1, 1, -2]),
            b(&[1, 1, 1, 1, 1, -7]),
            b(&[2, 3, -5, 7, -11]),
        ] {
            let w = rational_witness(&ds).unwrap();
            let v: BigRational = ds
                .iter()
                .zip(&w)
                .map(|(d, x)| BigRational::from_integer(d.clone()) * x * x)
                .sum();
            assert!(v.is_zero());
            assert!(w.iter().any(|x| !x.is_zero()));
        }
    }
}
