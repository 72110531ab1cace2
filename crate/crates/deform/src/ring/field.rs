//! Finite fields GF(p^m) with elements stored as base-p digit indices.

use crate::error::{Error, Result};

/// Largest field order supported; elements must fit in 16 bits.
pub const MAX_ORDER: u64 = 1 << 16;
const TABLE_LIMIT: u32 = 1024;

/// GF(p^m). An element is the integer `sum d_i p^i` built from its
/// coefficient digits `d_i` in the polynomial basis `1, x, .., x^{m-1}`.
#[derive(Debug)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    poly: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_tab: Option<Vec<u16>>,
    mul_tab: Option<Vec<u16>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

// Dense polynomials over GF(p), lowest coefficient first.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db] as u64, p as u64 - 2, p as u64);
    while r.len() > db {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv) % p as u64;
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            let s = (c * bi as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - s) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// Trial division by every monic polynomial of degree at most deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    let deg = match f.len() {
        0 => return false,
        n => n - 1,
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut div = digits(v, p, d);
            div.push(1);
            if poly_rem(&f, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree m, enumerating the lower
/// coefficients as base-p digits of 0, 1, 2, ...
pub fn find_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for v in 0..count {
        let mut f = digits(v, p, m as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Field {
    /// Build GF(p^m). `poly` must be monic irreducible of degree m when m > 1.
    pub fn new(p: u32, m: u32, poly: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidRing("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(Error::InvalidRing(format!("field order {p}^{m} is too large")));
        }
        let q = q64 as u32;
        let poly = match poly {
            Some(f) => {
                let mut f = f;
                poly_trim(&mut f);
                if f.len() != m as usize + 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidRing(format!(
                        "polynomial {f:?} does not have degree {m} over GF({p})"
                    )));
                }
                if f[m as usize] != 1 {
                    return Err(Error::InvalidRing("polynomial must be monic".into()));
                }
                if m > 1 && !is_irreducible(&f, p) {
                    return Err(Error::ReduciblePolynomial(f));
                }
                f
            }
            None if m == 1 => vec![0, 1],
            None => find_irreducible(p, m),
        };
        let mut field = Field {
            p,
            m,
            q,
            poly,
            exp: Vec::new(),
            log: Vec::new(),
            add_tab: None,
            mul_tab: None,
        };
        if m > 1 {
            field.build_log_tables();
        }
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    fn poly_mul_slow(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let p = self.p as u64;
        let da = digits(a as u64, self.p, m);
        let db = digits(b as u64, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let r = poly_rem(&prod, &self.poly, self.p);
        self.from_digits(&r)
    }

    fn build_log_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let mut gen = 0;
        for cand in 2..self.q {
            let ok = factors.iter().all(|&l| self.pow_slow(cand, order / l) != 1);
            if ok {
                gen = cand;
                break;
            }
        }
        assert!(gen != 0, "multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * self.q as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.poly_mul_slow(x, gen);
        }
        for i in order as usize..exp.len() {
            exp[i] = exp[i - order as usize];
        }
        self.exp = exp;
        self.log = log;
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul_slow(acc, b);
            }
            b = self.poly_mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as u32, b as u32) as u16;
                mul[a * q + b] = self.mul_slow(a as u32, b as u32) as u16;
            }
        }
        self.add_tab = Some(add);
        self.mul_tab = Some(mul);
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.p, self.m as usize)
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        let mut v = 0u32;
        for &c in d.iter().rev() {
            v = v * self.p + c % self.p;
        }
        v
    }

    /// Image of an integer under Z -> GF(p) -> GF(p^m).
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[s as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_tab {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_tab {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.m == 1 {
            return Some(pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32);
        }
        let order = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((order - l) % order) as usize])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Least n >= 1 with a^n = 1; `None` for zero.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// A primitive n-th root of unity, found by scanning elements in index order.
    pub fn root_of_unity(&self, n: u64) -> Option<u32> {
        if (self.q as u64 - 1) % n != 0 {
            return None;
        }
        (1..self.q).find(|&a| self.element_order(a) == Some(n))
    }

    /// Multiplication row for a fixed factor, for use in elimination loops.
    pub fn mul_row(&self, f: u32) -> Option<&[u16]> {
        self.mul_tab
            .as_ref()
            .map(|t| &t[(f * self.q) as usize..((f + 1) * self.q) as usize])
    }

    /// dst += f * src, entrywise.
    pub fn axpy(&self, dst: &mut [u32], f: u32, src: &[u32]) {
        if f == 0 {
            return;
        }
        match (&self.add_tab, self.mul_row(f)) {
            (Some(add), Some(mrow)) => {
                let q = self.q as usize;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let t = mrow[s as usize] as usize;
                        *d = add[*d as usize * q + t] as u32;
                    }
                }
            }
            _ => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add(*d, self.mul(f, s));
                    }
                }
            }
        }
    }

    pub fn scale(&self, v: &mut [u32], f: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, f);
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(5) && is_prime(7919));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }

    #[test]
    fn irreducible_search_is_deterministic() {
        assert_eq!(find_irreducible(5, 2), vec![2, 0, 1]);
        assert!(is_irreducible(&[2, 4, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert_eq!(find_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn gf25_arith() {
        let f = Field::new(5, 2, None).unwrap();
        for a in 1..25 {
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
        }
        let z = f.root_of_unity(6).unwrap();
        assert_eq!(f.pow(z, 6), 1);
        assert_ne!(f.pow(z, 2), 1);
        assert_ne!(f.pow(z, 3), 1);
    }

    #[test]
    fn slow_and_table_paths_agree() {
        let f = Field::new(3, 3, None).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(251, 2, None).unwrap();
        assert!(f.mul_tab.is_none());
        let a = f.from_digits(&[3, 7]);
        let b = f.inv(a).unwrap();
        assert_eq!(f.mul(a, b), 1);
    }

    #[test]
    fn rejects_reducible() {
        assert_eq!(
            Field::new(5, 2, Some(vec![1, 0, 1])),
            Err(Error::ReduciblePolynomial(vec![1, 0, 1]))
        );
    }
}
