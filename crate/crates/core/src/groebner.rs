//! Buchberger's algorithm over finite fields, with Gebauer-Möller pair
//! pruning, normal selection strategy, and reduced bases.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::ring::Ring;

/// Largest supported number of variables in Gröbner computations.
pub const MAX_VARS: usize = 16;

/// Default cap on reduction steps before giving up.
pub const DEFAULT_STEP_BUDGET: u64 = 5_000_000;

type Exp = [u16; MAX_VARS];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    /// Block order: grevlex on the flagged variables first, then grevlex on the rest.
    /// Elements of a basis free of the flagged variables generate the elimination ideal.
    Eliminate(Vec<bool>),
}

#[derive(Clone, Copy)]
struct Term {
    e: Exp,
    c: u64,
}

#[derive(Clone)]
struct GPoly {
    /// Descending in the active order.
    terms: Vec<Term>,
}

struct Ctx<'a> {
    ring: &'a Ring,
    nvars: usize,
    /// Variable blocks, compared in sequence.
    blocks: Vec<Vec<usize>>,
    steps: u64,
    budget: u64,
}

fn divides(a: &Exp, b: &Exp, n: usize) -> bool {
    (0..n).all(|i| a[i] <= b[i])
}

fn lcm(a: &Exp, b: &Exp, n: usize) -> Exp {
    let mut e = [0u16; MAX_VARS];
    for i in 0..n {
        e[i] = a[i].max(b[i]);
    }
    e
}

fn coprime(a: &Exp, b: &Exp, n: usize) -> bool {
    (0..n).all(|i| a[i] == 0 || b[i] == 0)
}

fn sub_exp(a: &Exp, b: &Exp, n: usize) -> Exp {
    let mut e = [0u16; MAX_VARS];
    for i in 0..n {
        e[i] = a[i] - b[i];
    }
    e
}

fn add_exp(a: &Exp, b: &Exp, n: usize) -> Exp {
    let mut e = [0u16; MAX_VARS];
    for i in 0..n {
        e[i] = a[i] + b[i];
    }
    e
}

impl Ctx<'_> {
    fn new<'a>(ring: &'a Ring, nvars: usize, order: &MonomialOrder, budget: u64) -> Ctx<'a> {
        let blocks = match order {
            MonomialOrder::Grevlex => vec![(0..nvars).collect()],
            MonomialOrder::Eliminate(mask) => {
                let first: Vec<usize> = (0..nvars).filter(|&i| mask[i]).collect();
                let rest: Vec<usize> = (0..nvars).filter(|&i| !mask[i]).collect();
                vec![first, rest]
            }
        };
        Ctx { ring, nvars, blocks, steps: 0, budget }
    }

    fn cmp(&self, a: &Exp, b: &Exp) -> Ordering {
        for block in &self.blocks {
            let da: u32 = block.iter().map(|&i| a[i] as u32).sum();
            let db: u32 = block.iter().map(|&i| b[i] as u32).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
            for &i in block.iter().rev() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
        }
        Ordering::Equal
    }

    fn from_poly(&self, f: &MultiPoly) -> GPoly {
        let mut terms: Vec<Term> = f
            .terms()
            .map(|(m, c)| {
                let mut e = [0u16; MAX_VARS];
                for (i, &x) in m.0.iter().enumerate() {
                    e[i] = x as u16;
                }
                Term { e, c }
            })
            .collect();
        terms.sort_by(|a, b| self.cmp(&b.e, &a.e));
        GPoly { terms }
    }

    fn to_poly(&self, g: &GPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        for t in &g.terms {
            out.add_term(Monomial(t.e[..self.nvars].iter().map(|&x| x as u32).collect()), t.c);
        }
        out
    }

    fn monic(&self, g: &mut GPoly) {
        if let Some(lead) = g.terms.first() {
            let inv = self.ring.inv(lead.c).expect("field coefficient");
            for t in g.terms.iter_mut() {
                t.c = self.ring.mul(t.c, inv);
            }
        }
    }

    /// `a - c * x^m * b`, both descending.
    fn sub_mul(&self, a: &GPoly, c: u64, m: &Exp, b: &GPoly) -> GPoly {
        let r = self.ring;
        let n = self.nvars;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let bt = b.terms.get(j).map(|t| Term { e: add_exp(&t.e, m, n), c: r.neg(r.mul(c, t.c)) });
            match (a.terms.get(i), bt) {
                (Some(at), Some(bt)) => match self.cmp(&at.e, &bt.e) {
                    Ordering::Greater => {
                        out.push(*at);
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(bt);
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = r.add(at.c, bt.c);
                        if s != 0 {
                            out.push(Term { e: at.e, c: s });
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(at), None) => {
                    out.push(*at);
                    i += 1;
                }
                (None, Some(bt)) => {
                    out.push(bt);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        GPoly { terms: out }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget, needed: self.steps });
        }
        Ok(())
    }

    /// Full normal form of `f` modulo the (monic) polynomials `basis[idx]`.
    fn reduce(&mut self, f: &GPoly, basis: &[GPoly], idx: &[usize]) -> Result<GPoly> {
        let n = self.nvars;
        let mut p = f.clone();
        let mut rem: Vec<Term> = Vec::new();
        while let Some(lead) = p.terms.first().copied() {
            let div = idx.iter().map(|&k| &basis[k]).find(|g| divides(&g.terms[0].e, &lead.e, n));
            match div {
                Some(g) => {
                    self.tick()?;
                    let m = sub_exp(&lead.e, &g.terms[0].e, n);
                    p = self.sub_mul(&p, lead.c, &m, g);
                }
                None => {
                    rem.push(lead);
                    p.terms.remove(0);
                }
            }
        }
        Ok(GPoly { terms: rem })
    }

    fn spoly(&self, f: &GPoly, g: &GPoly) -> GPoly {
        let n = self.nvars;
        let l = lcm(&f.terms[0].e, &g.terms[0].e, n);
        let mf = sub_exp(&l, &f.terms[0].e, n);
        let mg = sub_exp(&l, &g.terms[0].e, n);
        let zero = GPoly { terms: Vec::new() };
        let a = self.sub_mul(&zero, self.ring.neg(1), &mf, f);
        self.sub_mul(&a, 1, &mg, g)
    }

    fn buchberger(&mut self, input: &[GPoly]) -> Result<Vec<GPoly>> {
        let n = self.nvars;
        let mut polys: Vec<GPoly> = Vec::new();
        let mut g_idx: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for f in input {
            let mut h = self.reduce(f, &polys, &g_idx)?;
            if h.terms.is_empty() {
                continue;
            }
            self.monic(&mut h);
            polys.push(h);
            let hi = polys.len() - 1;
            self.update(&polys, &mut g_idx, &mut pairs, hi);
        }
        while !pairs.is_empty() {
            // Normal strategy: smallest lcm first.
            let (best, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let la = lcm(&polys[a.0].terms[0].e, &polys[a.1].terms[0].e, n);
                    let lb = lcm(&polys[b.0].terms[0].e, &polys[b.1].terms[0].e, n);
                    self.cmp(&la, &lb)
                })
                .expect("nonempty");
            let (i, j) = pairs.swap_remove(best);
            let s = self.spoly(&polys[i], &polys[j]);
            let mut h = self.reduce(&s, &polys, &g_idx)?;
            if h.terms.is_empty() {
                continue;
            }
            self.monic(&mut h);
            if h.terms[0].e[..n].iter().all(|&x| x == 0) {
                return Ok(vec![h]);
            }
            polys.push(h);
            let hi = polys.len() - 1;
            self.update(&polys, &mut g_idx, &mut pairs, hi);
        }
        let basis: Vec<GPoly> = g_idx.iter().map(|&k| polys[k].clone()).collect();
        self.interreduce(basis)
    }

    /// Gebauer-Möller installation of a new basis element `h`.
    fn update(&self, polys: &[GPoly], g_idx: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, h: usize) {
        let n = self.nvars;
        let lt = |k: usize| polys[k].terms[0].e;
        let lh = lt(h);
        let mut c: Vec<usize> = g_idx.clone();
        let mut d: Vec<usize> = Vec::new();
        while let Some(g1) = c.pop() {
            let l1 = lcm(&lh, &lt(g1), n);
            let redundant = !coprime(&lh, &lt(g1), n)
                && c.iter().chain(d.iter()).any(|&g2| divides(&lcm(&lh, &lt(g2), n), &l1, n));
            if !redundant {
                d.push(g1);
            }
        }
        let e: Vec<(usize, usize)> = d.into_iter().filter(|&g| !coprime(&lh, &lt(g), n)).map(|g| (g, h)).collect();
        pairs.retain(|&(g1, g2)| {
            let l12 = lcm(&lt(g1), &lt(g2), n);
            !(divides(&lh, &l12, n) && lcm(&lt(g1), &lh, n) != l12 && lcm(&lh, &lt(g2), n) != l12)
        });
        pairs.extend(e);
        g_idx.retain(|&g| !divides(&lh, &lt(g), n));
        g_idx.push(h);
    }

    fn interreduce(&mut self, mut basis: Vec<GPoly>) -> Result<Vec<GPoly>> {
        let n = self.nvars;
        basis.sort_by(|a, b| self.cmp(&a.terms[0].e, &b.terms[0].e));
        let mut minimal: Vec<GPoly> = Vec::new();
        for g in basis {
            if !minimal.iter().any(|m| divides(&m.terms[0].e, &g.terms[0].e, n)) {
                minimal.push(g);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<usize> = (0..minimal.len()).filter(|&j| j != k).collect();
            let lead = GPoly { terms: vec![minimal[k].terms[0]] };
            let tail = GPoly { terms: minimal[k].terms[1..].to_vec() };
            let mut r = self.reduce(&tail, &minimal, &others)?;
            let mut terms = lead.terms;
            terms.append(&mut r.terms);
            let mut g = GPoly { terms };
            self.monic(&mut g);
            out.push(g);
        }
        out.sort_by(|a, b| self.cmp(&a.terms[0].e, &b.terms[0].e));
        Ok(out)
    }
}

/// Ideal in a polynomial ring over a finite field, with a cached reduced basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    nvars: usize,
    gens: Vec<MultiPoly>,
    order: MonomialOrder,
    budget: u64,
    basis: OnceCell<Vec<MultiPoly>>,
}

impl Ideal {
    pub fn new(ring: &Ring, nvars: usize, gens: Vec<MultiPoly>) -> Result<Ideal> {
        Ideal::with_order(ring, nvars, gens, MonomialOrder::Grevlex)
    }

    pub fn with_order(ring: &Ring, nvars: usize, gens: Vec<MultiPoly>, order: MonomialOrder) -> Result<Ideal> {
        if !ring.is_field() {
            return Err(Error::InvalidInput("Gröbner bases are computed over fields".into()));
        }
        if nvars > MAX_VARS {
            return Err(Error::Unsupported(alloc::format!("more than {MAX_VARS} variables")));
        }
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if g.nvars() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: g.nvars() });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), nvars, gens, order, budget: DEFAULT_STEP_BUDGET, basis: OnceCell::new() })
    }

    pub fn with_budget(mut self, budget: u64) -> Ideal {
        self.budget = budget;
        self.basis = OnceCell::new();
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Reduced Gröbner basis (monic, sorted by leading monomial).
    pub fn groebner(&self) -> Result<&[MultiPoly]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let mut ctx = Ctx::new(&self.ring, self.nvars, &self.order, self.budget);
        let input: Vec<GPoly> = self.gens.iter().map(|g| ctx.from_poly(g)).collect();
        let gb = ctx.buchberger(&input)?;
        let polys = gb.iter().map(|g| ctx.to_poly(g)).collect();
        Ok(self.basis.get_or_init(|| polys))
    }

    /// Leading exponent vectors of the reduced basis in the ideal's order.
    fn leading_exps(&self) -> Result<Vec<Vec<u32>>> {
        let ctx = Ctx::new(&self.ring, self.nvars, &self.order, self.budget);
        Ok(self
            .groebner()?
            .iter()
            .map(|g| ctx.from_poly(g).terms[0].e[..self.nvars].iter().map(|&x| x as u32).collect())
            .collect())
    }

    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if f.nvars() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: f.nvars() });
        }
        let basis = self.groebner()?;
        let mut ctx = Ctx::new(&self.ring, self.nvars, &self.order, self.budget);
        let gb: Vec<GPoly> = basis.iter().map(|g| ctx.from_poly(g)).collect();
        let idx: Vec<usize> = (0..gb.len()).collect();
        let r = ctx.reduce(&ctx.from_poly(f), &gb, &idx)?;
        Ok(ctx.to_poly(&r))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(|g| g.is_constant()))
    }

    /// Krull dimension of the affine zero set; `None` for the unit ideal.
    pub fn dimension(&self) -> Result<Option<usize>> {
        if self.is_unit()? {
            return Ok(None);
        }
        let lead = self.leading_exps()?;
        let n = self.nvars;
        let supports: Vec<u32> = lead
            .iter()
            .map(|e| e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u32, |acc, (i, _)| acc | (1 << i)))
            .collect();
        let mut best = 0;
        for s in 0u32..(1u32 << n) {
            let size = s.count_ones() as usize;
            if size > best && supports.iter().all(|&m| m & !s != 0) {
                best = size;
            }
        }
        Ok(Some(best))
    }

    /// Generators of `I ∩ k[remaining variables]` (still in all `nvars` variables).
    pub fn eliminate(&self, vars: &[usize]) -> Result<Vec<MultiPoly>> {
        let mut mask = vec![false; self.nvars];
        for &v in vars {
            mask[v] = true;
        }
        let elim = Ideal::with_order(&self.ring, self.nvars, self.gens.clone(), MonomialOrder::Eliminate(mask))?
            .with_budget(self.budget);
        Ok(elim.groebner()?.iter().filter(|g| vars.iter().all(|&v| g.degree_in(v) == 0)).cloned().collect())
    }

    /// Ideal with extra generators appended.
    pub fn extend(&self, more: &[MultiPoly]) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(more.iter().cloned());
        Ok(Ideal::with_order(&self.ring, self.nvars, gens, self.order.clone())?.with_budget(self.budget))
    }

    /// Decides whether `g` is a nonzerodivisor modulo the ideal, via `(I : g) = I`.
    pub fn is_nonzerodivisor(&self, g: &MultiPoly) -> Result<bool> {
        if self.contains(g)? {
            return self.is_unit();
        }
        for k in self.colon(g)? {
            if !self.contains(&k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators of the colon ideal `(I : g)`, computed from `I ∩ (g)`.
    pub fn colon(&self, g: &MultiPoly) -> Result<Vec<MultiPoly>> {
        let n = self.nvars;
        let lift = |f: &MultiPoly| {
            let positions: Vec<usize> = (1..=n).collect();
            f.embed_vars(n + 1, &positions)
        };
        let s = MultiPoly::var(&self.ring, n + 1, 0);
        let one_minus_s = &MultiPoly::constant(&self.ring, n + 1, 1) - &s;
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|f| &s * &lift(f)).collect();
        gens.push(&one_minus_s * &lift(g));
        let big = Ideal::new(&self.ring, n + 1, gens)?.with_budget(self.budget);
        let inter = big.eliminate(&[0])?;
        let mut out = Vec::new();
        for h in inter {
            let h = h.dehomogenize(0);
            let q = divide_exact(&h, g).ok_or_else(|| {
                Error::InvalidInput("intersection element not divisible by the colon element".into())
            })?;
            out.push(q);
        }
        Ok(out)
    }
}

/// Exact quotient `h / g`, or `None` if `g` does not divide `h`.
pub fn divide_exact(h: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let ring = h.ring();
    let (lm, lc) = g.leading()?;
    let lm = lm.clone();
    let inv = ring.inv(lc).ok()?;
    let mut rem = h.clone();
    let mut q = MultiPoly::zero(ring, h.nvars());
    while let Some((m, c)) = rem.leading() {
        if !lm.divides(m) {
            return None;
        }
        let qm = lm.quotient(m);
        let qc = ring.mul(c, inv);
        rem = &rem - &g.mul_monomial(&qm, qc);
        q.add_term(qm, qc);
    }
    Some(q)
}

/// Sorted, deduplicated leading monomials, handy for diagnostics.
pub fn leading_monomials(basis: &[MultiPoly]) -> BTreeSet<Monomial> {
    basis.iter().filter_map(|g| g.leading().map(|(m, _)| m.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use alloc::string::{String, ToString};

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    fn ideal(ring: &Ring, gens: &[&str]) -> Ideal {
        let names = xyz();
        Ideal::new(ring, 3, gens.iter().map(|g| parse_poly(g, ring, &names).unwrap()).collect()).unwrap()
    }

    #[test]
    fn membership_and_units() {
        let f3 = Ring::prime_field(3).unwrap();
        let i = ideal(&f3, &["x", "y"]);
        assert!(!i.is_unit().unwrap());
        assert!(i.contains(&parse_poly("x+y", &f3, &xyz()).unwrap()).unwrap());
        assert!(ideal(&f3, &["x", "x+1"]).is_unit().unwrap());
    }

    #[test]
    fn conic_with_two_hyperplanes() {
        let f5 = Ring::prime_field(5).unwrap();
        let i = ideal(&f5, &["x^2+y^2+z^2", "x", "y"]);
        let gb: Vec<String> = i.groebner().unwrap().iter().map(|g| g.display_with(&xyz())).collect();
        let mut gb = gb;
        gb.sort();
        assert_eq!(gb, ["x", "y", "z^2"]);
        assert!(!i.contains(&parse_poly("z", &f5, &xyz()).unwrap()).unwrap());
    }

    #[test]
    fn dimensions() {
        let f3 = Ring::prime_field(3).unwrap();
        let xy = parse_poly("x*y", &f3, &xyz()[..2]).unwrap();
        assert_eq!(Ideal::new(&f3, 2, vec![xy]).unwrap().dimension().unwrap(), Some(1));
        assert_eq!(ideal(&f3, &["1"]).dimension().unwrap(), None);
        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(ideal(&f5, &["x^2+y^2+z^2"]).dimension().unwrap(), Some(2));
    }

    #[test]
    fn elimination_and_colon() {
        let f3 = Ring::prime_field(3).unwrap();
        // x = y^2, z = y^3: eliminating y yields z^2 - x^3.
        let i = ideal(&f3, &["x - y^2", "z - y^3"]);
        let e = i.eliminate(&[1]).unwrap();
        let target = parse_poly("z^2 - x^3", &f3, &xyz()).unwrap();
        assert!(Ideal::new(&f3, 3, e).unwrap().contains(&target).unwrap());
        // x is a zero divisor modulo (x*y), y + 1 is not.
        let j = ideal(&f3, &["x*y"]);
        assert!(!j.is_nonzerodivisor(&parse_poly("x", &f3, &xyz()).unwrap()).unwrap());
        assert!(j.is_nonzerodivisor(&parse_poly("x + y + 1", &f3, &xyz()).unwrap()).unwrap());
    }
}
