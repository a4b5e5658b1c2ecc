//! Arithmetic in the residue field `F_q = F_p[t]/(g)` and the choice of `g`.

/// Polynomial over `F_p`, coefficients low to high, not necessarily trimmed.
pub type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero mod p");
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = ((acc as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        k >>= 1;
    }
    acc
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let mut r = a.to_vec();
    let dm = deg(m).expect("zero modulus");
    let lead_inv = inv_mod_p(m[dm], p);
    while let Some(dr) = deg(&r) {
        if dr < dm {
            break;
        }
        let c = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        for i in 0..=dm {
            let t = (c as u128 * m[i] as u128 % p as u128) as u64;
            let k = dr - dm + i;
            r[k] = (r[k] + p - t) % p;
        }
    }
    trim(r)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while deg(&b).is_some() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut k: u128, m: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let mut b = poly_rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        k >>= 1;
    }
    acc
}

/// Rabin-style irreducibility test for a monic polynomial of degree `f`.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = match deg(g) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if f == 1 {
        return true;
    }
    let x: FpPoly = vec![0, 1];
    let mut xp = x.clone();
    for i in 1..=f / 2 {
        xp = poly_powmod(&xp, p as u128, g, p);
        let mut d = xp.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        let gc = poly_gcd(g, &trim(d), p);
        if deg(&gc) != Some(0) {
            return false;
        }
        let _ = i;
    }
    true
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether the class of `t` generates `(F_p[t]/g)^×`.
pub fn is_primitive(g: &[u64], p: u64) -> bool {
    let f = deg(g).unwrap_or(0) as u32;
    let order = (p as u128).pow(f) - 1;
    let x: FpPoly = vec![0, 1];
    prime_factors(order)
        .into_iter()
        .all(|r| poly_powmod(&x, order / r, g, p) != vec![1])
}

/// The lexicographically first monic primitive polynomial of degree `f`
/// over `F_p` (a Conway-style choice; `f = 1` gives `t`).
pub fn default_modulus(p: u64, f: usize) -> FpPoly {
    if f == 1 {
        return vec![0, 1];
    }
    let total = (p as u128).pow(f as u32);
    for idx in 0..total {
        let mut g = vec![0u64; f + 1];
        let mut r = idx;
        for c in g.iter_mut().take(f) {
            *c = (r % p as u128) as u64;
            r /= p as u128;
        }
        g[f] = 1;
        if g[0] != 0 && is_irreducible(&g, p) && is_primitive(&g, p) {
            return g;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Element arithmetic in `F_q` given the modulus `g`.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub p: u64,
    pub f: usize,
    pub modulus: FpPoly,
}

impl ResidueField {
    pub fn new(p: u64, modulus: FpPoly) -> Self {
        let f = deg(&modulus).unwrap_or(0).max(1);
        ResidueField { p, f, modulus }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn normalize(&self, a: &[u64]) -> Vec<u64> {
        let r = if self.f == 1 {
            vec![a.first().copied().unwrap_or(0) % self.p]
        } else {
            poly_rem(a, &self.modulus, self.p)
        };
        let mut r = r;
        r.resize(self.f, 0);
        r
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.normalize(&poly_mul(a, b, self.p))
    }

    pub fn pow(&self, a: &[u64], k: u128) -> Vec<u64> {
        if self.f == 1 {
            return vec![pow_mod(a[0], (k % u64::MAX as u128) as u64, self.p)];
        }
        let mut r = poly_powmod(a, k, &self.modulus, self.p);
        r.resize(self.f, 0);
        r
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        self.normalize(a).iter().all(|&c| c == 0)
    }

    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.q() as u128 - 2)
    }

    /// Enumerate all elements of `F_q` in a fixed order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let p = self.p;
        let f = self.f;
        (0..self.q()).map(move |mut idx| {
            let mut v = vec![0u64; f];
            for c in v.iter_mut() {
                *c = idx % p;
                idx /= p;
            }
            v
        })
    }

    /// A generator of `F_q^×`; with the default modulus this is `t`.
    pub fn generator(&self) -> Vec<u64> {
        let q = self.q() as u128;
        let factors = prime_factors(q - 1);
        self.elements()
            .filter(|a| !self.is_zero(a))
            .find(|a| factors.iter().all(|&r| self.pow(a, (q - 1) / r) != self.one()))
            .expect("F_q^x is cyclic")
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.f];
        v[0] = 1;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_are_primitive() {
        for (p, f) in [(2, 2), (3, 2), (3, 3), (5, 2), (7, 3)] {
            let g = default_modulus(p, f);
            assert_eq!(g.len(), f + 1);
            assert!(is_irreducible(&g, p));
            assert!(is_primitive(&g, p));
        }
        // x^2 + x + 2 is the first primitive quadratic over F_3 in this order
        assert_eq!(default_modulus(3, 2), vec![2, 1, 1]);
    }

    #[test]
    fn reducible_detected() {
        // x^2 + 1 over F_5 has roots 2, 3
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 0, 1], 3));
    }

    #[test]
    fn residue_inverse() {
        let k = ResidueField::new(3, default_modulus(3, 2));
        for a in k.elements().filter(|a| !k.is_zero(a)) {
            assert_eq!(k.mul(&a, &k.inv(&a)), k.one());
        }
        let g = k.generator();
        assert_eq!(k.pow(&g, 8), k.one());
        assert_ne!(k.pow(&g, 4), k.one());
    }
}
