use crate::error::{Error, Result};

/// `F_p[X]/(modulus)` with a monic irreducible modulus of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    pub(crate) p: u64,
    pub(crate) k: usize,
    /// Monic, low to high, length `k + 1`.
    pub(crate) modulus: Vec<u64>,
    pub(crate) symbol: String,
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl FiniteField {
    pub fn new(q: u64, modulus: Option<Vec<u64>>, symbol: &str) -> Result<Self> {
        let (p, k) =
            prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
        if p > u32::MAX as u64 {
            return Err(Error::Unsupported("characteristic too large".into()));
        }
        let modulus = match modulus {
            Some(m) => m,
            None if k == 1 => vec![0, 1],
            None => first_irreducible(p, k),
        };
        Self::with_modulus(p, modulus, symbol)
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>, symbol: &str) -> Result<Self> {
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 {
            return Err(Error::Parse(
                "modulus must be monic of positive degree".into(),
            ));
        }
        if prime_power(p) != Some((p, 1)) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::Parse("modulus is reducible".into()));
        }
        Ok(FiniteField {
            p,
            k,
            modulus,
            symbol: symbol.to_string(),
        })
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn spec(&self) -> String {
        if self.k == 1 {
            format!("F({})", self.p)
        } else {
            format!("F({}):{}", self.size(), self.fmt_poly(&self.modulus))
        }
    }

    pub(crate) fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let k = self.k;
        if k == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % p) as u64];
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // reduce by the monic modulus from the top
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u128 % p) % p;
            }
        }
        prod[..k].iter().map(|&x| x as u64).collect()
    }

    pub(crate) fn inv(&self, a: &[u64]) -> Vec<u64> {
        // a^(q-2)
        let mut e = self.size() - 2;
        let mut base = a.to_vec();
        let mut acc = vec![0; self.k];
        acc[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn all_vals(&self) -> Vec<super::Val> {
        let q = self.size();
        (0..q)
            .map(|mut n| {
                let mut v = vec![0; self.k];
                for c in v.iter_mut() {
                    *c = n % self.p;
                    n /= self.p;
                }
                super::Val::Fin(v)
            })
            .collect()
    }

    pub(crate) fn fmt(&self, c: &[u64]) -> String {
        if self.k == 1 {
            return c[0].to_string();
        }
        self.fmt_poly(c)
    }

    fn fmt_poly(&self, c: &[u64]) -> String {
        let terms: Vec<(String, String, bool)> = c
            .iter()
            .enumerate()
            .rev()
            .map(|(i, &x)| {
                let mono = match i {
                    0 => String::new(),
                    1 => self.symbol.clone(),
                    _ => format!("{}^{}", self.symbol, i),
                };
                (x.to_string(), mono, x == 0)
            })
            .collect();
        super::join_terms(&terms)
    }
}

fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * mi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=k/2
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for mut n in 0..count {
            let mut f = vec![0; d + 1];
            for c in f.iter_mut().take(d) {
                *c = n % p;
                n /= p;
            }
            f[d] = 1;
            if poly_rem(p, m, &f).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for mut n in 0..count {
        let mut f = vec![0; k + 1];
        for c in f.iter_mut().take(k) {
            *c = n % p;
            n /= p;
        }
        f[k] = 1;
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
