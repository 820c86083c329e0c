//! Finite fields `F_{p^m}` with elements encoded as integers in `[0, q)`.
//!
//! An element `d_0 + d_1 a + ... + d_{m-1} a^{m-1}` (with `a` a root of the
//! defining modulus) is encoded as `d_0 + d_1 p + ... + d_{m-1} p^{m-1}`, so the
//! prime subfield is `[0, p)` and the encodings of 0 and 1 are 0 and 1.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest field order for which log/exp tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;
const ADD_TABLE_ORDER: u64 = 1 << 10;

#[derive(Debug, Clone)]
pub struct Gf {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, low degree first (length m + 1).
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// Univariate polynomials over F_p, low degree first, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv_lead = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r[r.len() - 1] as u128 * inv_lead as u128 % p as u128) as u64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (factor as u128 * bc as u128 % p as u128) as u64;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut d = vec![0; len];
    for slot in d.iter_mut() {
        *slot = code % p;
        code /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

/// Irreducibility over F_p by trial division against every monic polynomial of
/// degree at most `deg / 2`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let poly = trim(poly.to_vec());
    if poly.len() < 2 {
        return false;
    }
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(&poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `m` over F_p, scanning the
/// lower coefficients `(c_0, ..., c_{m-1})` as base-p integers in increasing order.
pub fn canonical_modulus(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for code in 0..count {
        let mut cand = digits(code, p, m as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Gf {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(alloc::format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        if m == 1 {
            return Ok(Gf { p, m, q: p, modulus: vec![0, 1], exp: Vec::new(), log: Vec::new(), add: Vec::new() });
        }
        Self::with_modulus(p, canonical_modulus(p, m))
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let modulus = trim(modulus);
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        let m = (modulus.len() - 1) as u32;
        let q = checked_pow(p, m)
            .filter(|&q| q <= MAX_TABLE_ORDER)
            .ok_or_else(|| Error::Unsupported(alloc::format!("field GF({p}^{m}) too large")))?;
        let mut gf = Gf { p, m, q, modulus, exp: Vec::new(), log: Vec::new(), add: Vec::new() };
        if m == 1 {
            return Ok(gf);
        }
        gf.build_tables();
        Ok(gf)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let m = self.m as usize;
        if q <= ADD_TABLE_ORDER {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, self.p, m);
                for b in 0..q {
                    let db = digits(b, self.p, m);
                    let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
                    add[(a * q + b) as usize] = undigits(&s, self.p) as u32;
                }
            }
            self.add = add;
        }
        for g in 2..q {
            let mut exp = vec![0u32; (q - 1) as usize];
            let mut cur = 1u64;
            let mut order = 0u64;
            loop {
                exp[order as usize] = cur as u32;
                cur = self.poly_mulmod(cur, g);
                order += 1;
                if cur == 1 || order >= q - 1 {
                    break;
                }
            }
            if cur == 1 && order == q - 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    fn poly_mulmod(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        let p = self.p;
        let da = digits(a, p, m);
        let db = digits(b, p, m);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, p);
        let mut r = r;
        r.resize(m, 0);
        undigits(&r, p)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if !self.add.is_empty() {
            return self.add[(a * self.q + b) as usize] as u64;
        }
        let m = self.m as usize;
        let s: Vec<u64> = digits(a, self.p, m)
            .iter()
            .zip(digits(b, self.p, m))
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        undigits(&s, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let m = self.m as usize;
        let s: Vec<u64> = digits(a, self.p, m).iter().map(|&x| (self.p - x) % self.p).collect();
        undigits(&s, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q - 1)) as usize] as u64
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.m == 1 {
            return Some(pow_mod(a, self.p - 2, self.p));
        }
        let l = self.log[a as usize] as u64;
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u64)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn from_int(&self, v: i64) -> u64 {
        let p = self.p as i128;
        (((v as i128) % p + p) % p) as u64
    }

    /// The `m` base-p digits of an element (coefficients in the generator `a`).
    pub fn digits(&self, a: u64) -> Vec<u64> {
        digits(a, self.p, self.m as usize)
    }

    /// Evaluate this field's modulus-defined generator image: returns a table
    /// mapping each element of `self` into `target`, a field of the same
    /// characteristic whose degree is a multiple of ours.
    pub fn embedding_into(&self, target: &Gf) -> Result<Vec<u64>> {
        if target.p != self.p || !target.m.is_multiple_of(self.m) {
            return Err(Error::InvalidInput("no field embedding between these degrees".into()));
        }
        // Image of the generator: a root of our modulus in the target.
        let root = if self.m == 1 {
            0
        } else {
            (0..target.q)
                .find(|&x| {
                    let mut acc = 0u64;
                    for &c in self.modulus.iter().rev() {
                        acc = target.add(target.mul(acc, x), c);
                    }
                    acc == 0
                })
                .ok_or_else(|| Error::InvalidInput("modulus has no root in target".into()))?
        };
        let mut table = Vec::with_capacity(self.q as usize);
        for a in 0..self.q {
            let d = self.digits(a);
            let mut acc = 0u64;
            for &c in d.iter().rev() {
                acc = target.add(target.mul(acc, root), c);
            }
            table.push(acc);
        }
        Ok(table)
    }
}
