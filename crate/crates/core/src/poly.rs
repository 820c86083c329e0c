//! Sparse multivariate polynomials over a [`Ring`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingMap};

/// Exponent vector, ordered graded reverse-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Ring,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring, nvars: usize) -> MultiPoly {
        MultiPoly { ring: ring.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, nvars: usize, c: u64) -> MultiPoly {
        let mut p = MultiPoly::zero(ring, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(ring: &Ring, nvars: usize, i: usize) -> MultiPoly {
        MultiPoly::monomial(ring, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: u64) -> MultiPoly {
        let mut p = MultiPoly::zero(ring, m.0.len());
        p.add_term(m, c);
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; like terms are combined.
    pub fn from_terms(ring: &Ring, nvars: usize, terms: &[(u64, Vec<u32>)]) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(ring, nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(Monomial(e.clone()), *c);
        }
        Ok(p)
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(ring: &Ring, coeffs: &[u64]) -> MultiPoly {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(ring, n);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c == 0 {
            return;
        }
        let r = &self.ring;
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = r.add(*v, c);
                if s == 0 {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Leading term for the grevlex order.
    pub fn leading(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            Some(d) => it.all(|e| e == d),
            None => true,
        }
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        self.filter_terms(|m, _| m.degree() == d)
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial, u64) -> bool) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, &c)| keep(m, c)).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// Variables that occur with nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    fn check(&self, other: &MultiPoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let r = &self.ring;
        let mut out = MultiPoly::zero(r, self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.add_term(m1.mul(m2), r.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let r = &self.ring;
        let mut out = MultiPoly::zero(r, self.nvars);
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), r.mul(v, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> MultiPoly {
        let r = &self.ring;
        let mut out = MultiPoly::zero(r, self.nvars);
        for (m2, &v) in &self.terms {
            out.add_term(m.mul(m2), r.mul(v, c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.ring, self.nvars, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let r = &self.ring;
        let mut out = MultiPoly::zero(r, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, r.mul(c, r.from_int(e as i64)));
        }
        out
    }

    /// Replaces every variable `x_i` by `images[i]`; all images share one ring and arity.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: images.len() });
        }
        let target_n = match images.first() {
            Some(g) => g.nvars,
            None => 0,
        };
        for g in images {
            if g.ring != self.ring {
                return Err(Error::RingMismatch);
            }
            if g.nvars != target_n {
                return Err(Error::ArityMismatch { expected: target_n, found: g.nvars });
            }
        }
        let r = &self.ring;
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|g| vec![MultiPoly::constant(r, target_n, 1), g.clone()]).collect();
        let mut out = MultiPoly::zero(r, target_n);
        for (m, &c) in &self.terms {
            let mut t = MultiPoly::constant(r, target_n, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            for (m2, &c2) in &t.terms {
                out.add_term(m2.clone(), c2);
            }
        }
        Ok(out)
    }

    /// Substitutes constants for some variables, keeping the arity.
    pub fn fix_vars(&self, values: &[(usize, u64)]) -> MultiPoly {
        let r = &self.ring;
        let mut out = MultiPoly::zero(r, self.nvars);
        for (m, &c) in &self.terms {
            let mut m2 = m.clone();
            let mut c2 = c;
            for &(i, v) in values {
                let e = m2.0[i];
                if e > 0 {
                    c2 = r.mul(c2, r.pow(v, e as u64));
                    m2.0[i] = 0;
                }
            }
            out.add_term(m2, c2);
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let r = &self.ring;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = r.mul(t, r.pow(point[i], e as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = r.add(acc, t);
        }
        acc
    }

    /// Re-indexes variables: `x_i -> x_{positions[i]}` in `nvars` variables.
    pub fn embed_vars(&self, nvars: usize, positions: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring, nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] += x;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Sets `x_i = 1` and removes that variable.
    pub fn dehomogenize(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring, self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(i);
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Homogenizes with a new variable inserted at position `i`.
    pub fn homogenize(&self, i: usize) -> MultiPoly {
        let d = self.degree().unwrap_or(0);
        let mut out = MultiPoly::zero(&self.ring, self.nvars + 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(i, d - m.degree());
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Applies a coefficient map into another ring.
    pub fn map_coeffs(&self, target: &Ring, f: impl Fn(u64) -> u64) -> MultiPoly {
        let mut out = MultiPoly::zero(target, self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn apply_map(&self, map: &RingMap) -> Result<MultiPoly> {
        if map.source != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.map_coeffs(&map.target, |c| map.apply(c)))
    }

    /// Coefficient-wise residue: the special-fibre equation.
    pub fn reduce_mod_pi(&self) -> MultiPoly {
        let f = self.ring.residue_field();
        let r = self.ring.clone();
        self.map_coeffs(&f, move |c| r.residue(c))
    }

    /// Minimum coefficient valuation; `None` for the zero polynomial.
    pub fn content_valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(|&c| self.ring.val(c)).min()
    }

    /// Scales so the leading coefficient is 1 (field coefficients).
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) => match self.ring.inv(c) {
                Ok(ci) => self.scale(ci),
                Err(_) => self.clone(),
            },
            None => self.clone(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let r = &self.ring;
        let mut out = String::new();
        for (idx, (m, &c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            let neg = r.neg(c);
            // Prefer "- 2*x" over "+ 7*x" when the negation has a shorter representative.
            let (sign, mag) = if !r.is_field() && neg < c || (r.is_field() && r.gf().degree() == 1 && neg < c) {
                ("-", neg)
            } else {
                ("+", c)
            };
            let coef = r.display_elem(mag);
            let compound = coef.contains(' ');
            let body = if mono.is_empty() {
                if compound { format!("({coef})") } else { coef }
            } else if mag == 1 {
                mono.join("*")
            } else if compound {
                format!("({coef})*{}", mono.join("*"))
            } else {
                format!("{coef}*{}", mono.join("*"))
            };
            if idx == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Default variable names `x0, x1, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.nvars)))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.ring)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on ring or arity mismatch; use [`MultiPoly::try_add`] for checked input.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial operands must share ring and arity")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial operands must share ring and arity")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial operands must share ring and arity")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let r = &self.ring;
        MultiPoly {
            ring: r.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), r.neg(c))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn f3() -> Ring {
        Ring::prime_field(3).unwrap()
    }

    #[test]
    fn grevlex_order() {
        // x*z < y^2 in grevlex (last variable exponent decides)
        let xz = Monomial(vec![1, 0, 1]);
        let yy = Monomial(vec![0, 2, 0]);
        assert!(xz < yy);
        assert!(Monomial(vec![0, 0, 3]) > Monomial(vec![2, 0, 0]));
        assert!(Monomial(vec![1, 0, 0]) > Monomial(vec![0, 1, 0]));
    }

    #[test]
    fn derivative_of_diagonal_conic() {
        let r = f3();
        let f = MultiPoly::from_terms(&r, 3, &[(1, vec![2, 0, 0]), (1, vec![0, 2, 0]), (1, vec![0, 0, 2])]).unwrap();
        assert_eq!(f.partial(0), MultiPoly::monomial(&r, Monomial::var(3, 0), 2));
    }

    #[test]
    fn char_two_derivative_collapses() {
        let r = Ring::prime_field(2).unwrap();
        let f = MultiPoly::monomial(&r, Monomial(vec![2]), 1);
        assert!(f.partial(0).is_zero());
    }

    #[test]
    fn substitute_zero() {
        let r = Ring::zmod(3, 3).unwrap();
        let f = MultiPoly::from_terms(&r, 3, &[(1, vec![1, 1, 0]), (r.from_int(-3), vec![0, 0, 2])]).unwrap();
        let imgs = [MultiPoly::var(&r, 3, 0), MultiPoly::var(&r, 3, 1), MultiPoly::zero(&r, 3)];
        let g = f.substitute(&imgs).unwrap();
        assert_eq!(g.to_string(), "x0*x1");
        assert!(matches!(f.substitute(&imgs[..2]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn reduce_mod_pi_examples() {
        let r = Ring::zmod(3, 3).unwrap();
        let f = MultiPoly::from_terms(&r, 3, &[(1, vec![1, 1, 0]), (r.from_int(-3), vec![0, 0, 2])]).unwrap();
        assert_eq!(f.reduce_mod_pi().to_string(), "x0*x1");
        assert_eq!(*f.reduce_mod_pi().ring(), f3());
        let r5 = Ring::zmod(3, 5).unwrap();
        let g = MultiPoly::from_terms(&r5, 3, &[(1, vec![1, 1, 0]), (r5.from_int(-9), vec![0, 0, 2])]).unwrap();
        assert_eq!(g.reduce_mod_pi().to_string(), "x0*x1");
        let r2 = Ring::zmod(3, 2).unwrap();
        assert!(MultiPoly::monomial(&r2, Monomial::var(1, 0), 3).reduce_mod_pi().is_zero());
    }

    #[test]
    fn display_signs() {
        let r = Ring::zmod(3, 3).unwrap();
        let f = MultiPoly::from_terms(&r, 3, &[(1, vec![1, 1, 0]), (r.from_int(-3), vec![0, 0, 2])]).unwrap();
        assert_eq!(f.to_string(), "x0*x1 - 3*x2^2");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = MultiPoly::var(&f3(), 1, 0);
        let b = MultiPoly::var(&Ring::prime_field(5).unwrap(), 1, 0);
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
        let c = MultiPoly::var(&f3(), 2, 0);
        assert!(matches!(a.try_mul(&c), Err(Error::ArityMismatch { .. })));
    }
}
