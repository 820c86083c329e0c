//! Coefficient rings: finite fields and truncated discrete valuation rings.
//!
//! Every ring element is carried as a canonical `u64` code:
//! - prime field `F_p`: the integer in `[0, p)`;
//! - extension field `F_{p^m}`: base-p digits of the coordinate vector;
//! - `Z/p^k`: the integer in `[0, p^k)`;
//! - `F_{p^m}[t]/(t^k)`: `c_0 + c_1 q + ... + c_{k-1} q^{k-1}` with `q = p^m`
//!   and `c_i` the field codes of the `t^i` coefficients.
//!
//! [`RingElem`] pairs a code with its parent ring for the checked API.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf::{is_prime, Gf};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    PrimeField { p: u64 },
    ExtField { p: u64, m: u32, modulus: Vec<u64> },
    /// `Z/p^k`, uniformizer `p`.
    MixedDvr { p: u64, k: u32 },
    /// `F_{p^m}[t]/(t^k)`, uniformizer `t`.
    EquiDvr { p: u64, m: u32, k: u32 },
}

/// Normalized valuation at finite precision; `Top` means zero at precision `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Top,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Top => write!(f, "top"),
        }
    }
}

struct Inner {
    kind: RingKind,
    /// The field itself, or the residue field of a DVR.
    field: Gf,
    precision: u32,
    /// Number of elements.
    size: u64,
}

/// A coefficient ring. Cheap to clone; equality compares the ring descriptor.
#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| Error::Unsupported(format!("ring with {base}^{exp} elements is too large")))?;
    }
    Ok(acc)
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        Ring::galois_field(p, 1)
    }

    /// `F_{p^m}` with the canonical (first irreducible) modulus.
    pub fn galois_field(p: u64, m: u32) -> Result<Ring> {
        let field = Gf::new(p, m)?;
        let size = field.order();
        let kind = if m == 1 {
            RingKind::PrimeField { p }
        } else {
            RingKind::ExtField { p, m, modulus: field.modulus().to_vec() }
        };
        Ok(Ring(Arc::new(Inner { kind, field, precision: 1, size })))
    }

    /// `Z/p^k`.
    pub fn zmod(p: u64, k: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        let size = checked_pow(p, k)?;
        let field = Gf::new(p, 1)?;
        Ok(Ring(Arc::new(Inner { kind: RingKind::MixedDvr { p, k }, field, precision: k, size })))
    }

    /// `F_{p^m}[t]/(t^k)`.
    pub fn power_series(p: u64, m: u32, k: u32) -> Result<Ring> {
        if k == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        let field = Gf::new(p, m)?;
        let size = checked_pow(field.order(), k)?;
        Ok(Ring(Arc::new(Inner { kind: RingKind::EquiDvr { p, m, k }, field, precision: k, size })))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn characteristic_of_residue(&self) -> u64 {
        self.0.field.characteristic()
    }

    /// Truncation precision `k` (1 for fields).
    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    pub fn residue_order(&self) -> u64 {
        self.0.field.order()
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.kind, RingKind::PrimeField { .. } | RingKind::ExtField { .. })
    }

    pub fn is_dvr(&self) -> bool {
        !self.is_field()
    }

    /// The underlying finite field (the ring itself, or the residue field).
    pub fn gf(&self) -> &Gf {
        &self.0.field
    }

    pub fn residue_field(&self) -> Ring {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => self.clone(),
            RingKind::MixedDvr { p, .. } => Ring::prime_field(*p).expect("validated prime"),
            RingKind::EquiDvr { p, m, .. } => Ring::galois_field(*p, *m).expect("validated field"),
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// The uniformizer.
    pub fn pi(&self) -> Result<u64> {
        match &self.0.kind {
            RingKind::MixedDvr { p, k } => Ok(if *k > 1 { *p } else { 0 }),
            RingKind::EquiDvr { k, .. } => Ok(if *k > 1 { self.residue_order() } else { 0 }),
            _ => Err(Error::NotDvr),
        }
    }

    pub fn from_int(&self, v: i64) -> u64 {
        match &self.0.kind {
            RingKind::MixedDvr { .. } => {
                let n = self.0.size as i128;
                (((v as i128) % n + n) % n) as u64
            }
            _ => self.0.field.from_int(v),
        }
    }

    fn coeffs(&self, a: u64) -> Vec<u64> {
        let q = self.residue_order();
        let k = self.0.precision as usize;
        let mut out = vec![0u64; k];
        let mut a = a;
        for slot in out.iter_mut() {
            *slot = a % q;
            a /= q;
        }
        out
    }

    fn from_coeffs(&self, c: &[u64]) -> u64 {
        let q = self.residue_order();
        c.iter().rev().fold(0u64, |acc, &x| acc * q + x)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => self.0.field.add(a, b),
            RingKind::MixedDvr { .. } => {
                let s = a + b;
                if s >= self.0.size {
                    s - self.0.size
                } else {
                    s
                }
            }
            RingKind::EquiDvr { .. } => {
                let f = &self.0.field;
                let (ca, cb) = (self.coeffs(a), self.coeffs(b));
                let s: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| f.add(x, y)).collect();
                self.from_coeffs(&s)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => self.0.field.neg(a),
            RingKind::MixedDvr { .. } => {
                if a == 0 {
                    0
                } else {
                    self.0.size - a
                }
            }
            RingKind::EquiDvr { .. } => {
                let f = &self.0.field;
                let c: Vec<u64> = self.coeffs(a).iter().map(|&x| f.neg(x)).collect();
                self.from_coeffs(&c)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => self.0.field.mul(a, b),
            RingKind::MixedDvr { .. } => ((a as u128 * b as u128) % self.0.size as u128) as u64,
            RingKind::EquiDvr { .. } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let f = &self.0.field;
                let (ca, cb) = (self.coeffs(a), self.coeffs(b));
                let k = ca.len();
                let mut out = vec![0u64; k];
                for i in 0..k {
                    if ca[i] == 0 {
                        continue;
                    }
                    for j in 0..k - i {
                        out[i + j] = f.add(out[i + j], f.mul(ca[i], cb[j]));
                    }
                }
                self.from_coeffs(&out)
            }
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64 % self.0.size.max(2);
        if self.0.size == 1 {
            return 0;
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.residue(a) != 0
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => {
                self.0.field.inv(a).ok_or(Error::NonUnit)
            }
            RingKind::MixedDvr { .. } => {
                let n = self.0.size as i128;
                let (mut old_r, mut r) = (a as i128, n);
                let (mut old_s, mut s) = (1i128, 0i128);
                while r != 0 {
                    let qt = old_r / r;
                    (old_r, r) = (r, old_r - qt * r);
                    (old_s, s) = (s, old_s - qt * s);
                }
                Ok(((old_s % n + n) % n) as u64)
            }
            RingKind::EquiDvr { .. } => {
                let f = &self.0.field;
                let c = self.coeffs(a);
                let k = c.len();
                let inv0 = f.inv(c[0]).ok_or(Error::NonUnit)?;
                let mut b = vec![0u64; k];
                b[0] = inv0;
                for n in 1..k {
                    let mut acc = 0u64;
                    for i in 1..=n {
                        acc = f.add(acc, f.mul(c[i], b[n - i]));
                    }
                    b[n] = f.neg(f.mul(inv0, acc));
                }
                Ok(self.from_coeffs(&b))
            }
        }
    }

    /// `v(a)`; only defined on DVR-kind rings.
    pub fn valuation(&self, a: u64) -> Result<Valuation> {
        if self.is_field() {
            return Err(Error::NotDvr);
        }
        Ok(match self.val(a) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Top,
        })
    }

    /// Valuation with fields treated as precision-1 DVRs; `None` for zero.
    pub fn val(&self, a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => Some(0),
            RingKind::MixedDvr { p, .. } => {
                let mut v = 0;
                let mut x = a;
                while x.is_multiple_of(*p) {
                    x /= p;
                    v += 1;
                }
                Some(v)
            }
            RingKind::EquiDvr { .. } => self.coeffs(a).iter().position(|&c| c != 0).map(|v| v as u32),
        }
    }

    /// Writes `a = pi^v * u` with `u` a unit whose representative has no digits
    /// at or beyond position `k - v`. Returns `None` for zero.
    pub fn split_unit(&self, a: u64) -> Option<(u32, u64)> {
        let v = self.val(a)?;
        let d = self.pi_digits(a);
        let mut shifted = vec![0u64; d.len()];
        for i in v as usize..d.len() {
            shifted[i - v as usize] = d[i];
        }
        Some((v, self.from_pi_digits(&shifted)))
    }

    /// Image in the residue field.
    pub fn residue(&self, a: u64) -> u64 {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => a,
            RingKind::MixedDvr { p, .. } => a % p,
            RingKind::EquiDvr { .. } => a % self.residue_order(),
        }
    }

    /// Canonical lift of a residue-field code.
    pub fn lift(&self, r: u64) -> u64 {
        r
    }

    /// pi-adic digits as residue-field codes, length `k`: base-p digits for
    /// `Z/p^k`, t-coefficients for `F_q[t]/(t^k)`, `[a]` for fields.
    pub fn pi_digits(&self, a: u64) -> Vec<u64> {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => vec![a],
            RingKind::MixedDvr { p, k } => {
                let mut out = vec![0u64; *k as usize];
                let mut x = a;
                for slot in out.iter_mut() {
                    *slot = x % p;
                    x /= p;
                }
                out
            }
            RingKind::EquiDvr { .. } => self.coeffs(a),
        }
    }

    /// Inverse of [`Ring::pi_digits`]; digits beyond the precision are dropped.
    pub fn from_pi_digits(&self, d: &[u64]) -> u64 {
        let k = self.0.precision as usize;
        let base = self.residue_order();
        let take = d.len().min(k);
        d[..take].iter().rev().fold(0u64, |acc, &x| acc * base + x)
    }

    pub fn elements(&self) -> core::ops::Range<u64> {
        0..self.0.size
    }

    pub fn ring_elem(&self, code: u64) -> RingElem {
        RingElem { ring: self.clone(), code: code % self.0.size }
    }

    /// Unramified extension of residue degree `m`, with the embedding of `self`.
    pub fn extend_unramified(&self, m: u32) -> Result<(Ring, RingMap)> {
        if m == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let target = match &self.0.kind {
            RingKind::PrimeField { p } => Ring::galois_field(*p, m)?,
            RingKind::ExtField { p, m: m0, .. } => Ring::galois_field(*p, m0 * m)?,
            RingKind::MixedDvr { p, k } => {
                if m == 1 {
                    self.clone()
                } else if *k == 1 {
                    Ring::power_series(*p, m, 1)?
                } else {
                    return Err(Error::Unsupported(
                        "unramified extensions of Z/p^k with k > 1 and degree > 1".into(),
                    ));
                }
            }
            RingKind::EquiDvr { p, m: m0, k } => Ring::power_series(*p, m0 * m, *k)?,
        };
        let table = self.gf().embedding_into(target.gf())?;
        let map = RingMap { source: self.clone(), target: target.clone(), table, stride: 1 };
        Ok((target, map))
    }

    /// Degree-2 ramified extension `t -> s^2` (equal characteristic only).
    pub fn extend_ramified_sqrt(&self) -> Result<(Ring, RingMap)> {
        match &self.0.kind {
            RingKind::EquiDvr { p, m, k } => {
                let target = Ring::power_series(*p, *m, 2 * k)?;
                let table = (0..self.residue_order()).collect();
                Ok((target.clone(), RingMap { source: self.clone(), target, table, stride: 2 }))
            }
            _ => Err(Error::Unsupported(
                "ramified extensions are only modelled for F_q[t]/(t^k)".into(),
            )),
        }
    }

    pub fn display_elem(&self, a: u64) -> String {
        match &self.0.kind {
            RingKind::PrimeField { .. } | RingKind::MixedDvr { .. } => a.to_string(),
            RingKind::ExtField { .. } => display_field_code(&self.0.field, a),
            RingKind::EquiDvr { .. } => {
                let c = self.coeffs(a);
                let mut parts = Vec::new();
                for (i, &ci) in c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    let coef = display_field_code(&self.0.field, ci);
                    let compound = coef.contains('+');
                    let part = match (i, coef.as_str()) {
                        (0, _) => coef.clone(),
                        (_, "1") => t_power(i),
                        _ if compound => format!("({coef})*{}", t_power(i)),
                        _ => format!("{coef}*{}", t_power(i)),
                    };
                    parts.push(part);
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    /// Parses `GF(p)`, `GF(q)`, `GF(p,m)`, `Zmod(p^k)`, `GF(..)[[t]]/t^k`.
    pub fn parse(text: &str) -> Result<Ring> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |m: &str| Error::Parse { line: 1, column: 1, message: format!("ring descriptor `{text}`: {m}") };
        if let Some(rest) = s.strip_prefix("Zmod(") {
            let body = rest.strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
            let (p, k) = match body.split_once('^') {
                Some((p, k)) => (p, k),
                None => (body, "1"),
            };
            let p: u64 = p.parse().map_err(|_| err("bad prime"))?;
            let k: u32 = k.parse().map_err(|_| err("bad precision"))?;
            return Ring::zmod(p, k);
        }
        let rest = s.strip_prefix("GF(").ok_or_else(|| err("expected `GF(` or `Zmod(`"))?;
        let close = rest.find(')').ok_or_else(|| err("missing `)`"))?;
        let (body, tail) = (&rest[..close], &rest[close + 1..]);
        let (p, m) = match body.split_once(',') {
            Some((p, m)) => {
                let p: u64 = p.parse().map_err(|_| err("bad prime"))?;
                let m: u32 = m.parse().map_err(|_| err("bad degree"))?;
                (p, m)
            }
            None => {
                let q: u64 = body.parse().map_err(|_| err("bad field order"))?;
                prime_power(q).ok_or_else(|| err("field order is not a prime power"))?
            }
        };
        if tail.is_empty() {
            return Ring::galois_field(p, m);
        }
        let k = tail
            .strip_prefix("[[t]]/t^")
            .or_else(|| tail.strip_prefix("[[t]]/(t^").and_then(|x| x.strip_suffix(')')))
            .ok_or_else(|| err("expected `[[t]]/t^k`"))?;
        let k: u32 = k.parse().map_err(|_| err("bad precision"))?;
        Ring::power_series(p, m, k)
    }
}

fn t_power(i: usize) -> String {
    if i == 1 {
        "t".into()
    } else {
        format!("t^{i}")
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut m = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        m += 1;
    }
    (x == 1).then_some((p, m))
}

fn display_field_code(f: &Gf, a: u64) -> String {
    if f.degree() == 1 {
        return a.to_string();
    }
    let d = f.digits(a);
    let mut parts = Vec::new();
    for (i, &di) in d.iter().enumerate() {
        if di == 0 {
            continue;
        }
        parts.push(match (i, di) {
            (0, _) => di.to_string(),
            (1, 1) => "a".into(),
            (1, _) => format!("{di}*a"),
            (_, 1) => format!("a^{i}"),
            _ => format!("{di}*a^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            RingKind::PrimeField { p } => write!(f, "GF({p})"),
            RingKind::ExtField { p, m, .. } => write!(f, "GF({p},{m})"),
            RingKind::MixedDvr { p, k } => write!(f, "Zmod({p}^{k})"),
            RingKind::EquiDvr { p, m, k } => {
                if *m == 1 {
                    write!(f, "GF({p})[[t]]/t^{k}")
                } else {
                    write!(f, "GF({p},{m})[[t]]/t^{k}")
                }
            }
        }
    }
}

/// Ring homomorphism realizing an extension of coefficient rings.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: Ring,
    pub target: Ring,
    /// Embedding of the (residue) field.
    table: Vec<u64>,
    /// Uniformizer exponent: `pi_source -> pi_target^stride`.
    stride: u32,
}

impl RingMap {
    pub fn identity(ring: &Ring) -> RingMap {
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            table: (0..ring.residue_order()).collect(),
            stride: 1,
        }
    }

    /// Composite embedding of a field into an extension field.
    pub fn field_embedding(source: &Ring, target: &Ring) -> Result<RingMap> {
        if !source.is_field() || !target.is_field() {
            return Err(Error::InvalidInput("field embedding between non-fields".into()));
        }
        let table = source.gf().embedding_into(target.gf())?;
        Ok(RingMap { source: source.clone(), target: target.clone(), table, stride: 1 })
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    pub fn apply(&self, a: u64) -> u64 {
        match self.source.kind() {
            RingKind::PrimeField { .. } | RingKind::ExtField { .. } => self.table[a as usize],
            RingKind::MixedDvr { .. } if self.source == self.target => a,
            _ => {
                let d = self.source.pi_digits(a);
                let mut out = vec![0u64; self.target.precision() as usize];
                for (i, &di) in d.iter().enumerate() {
                    let pos = i * self.stride as usize;
                    if pos < out.len() {
                        out[pos] = self.table[di as usize];
                    }
                }
                self.target.from_pi_digits(&out)
            }
        }
    }
}

/// A ring element together with its parent, for the checked arithmetic API.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    ring: Ring,
    code: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Inv,
}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Checked binary arithmetic; `Inv` ignores `b`'s value but still checks its parent.
    pub fn arith(&self, b: &RingElem, op: RingOp) -> Result<RingElem> {
        if self.ring != b.ring {
            return Err(Error::RingMismatch);
        }
        let r = &self.ring;
        let code = match op {
            RingOp::Add => r.add(self.code, b.code),
            RingOp::Sub => r.sub(self.code, b.code),
            RingOp::Mul => r.mul(self.code, b.code),
            RingOp::Inv => r.inv(self.code)?,
        };
        Ok(RingElem { ring: r.clone(), code })
    }

    pub fn inv(&self) -> Result<RingElem> {
        Ok(RingElem { ring: self.ring.clone(), code: self.ring.inv(self.code)? })
    }

    pub fn valuation(&self) -> Result<Valuation> {
        self.ring.valuation(self.code)
    }

    pub fn residue(&self) -> RingElem {
        let f = self.ring.residue_field();
        RingElem { code: self.ring.residue(self.code), ring: f }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.display_elem(self.code))
    }
}
