//! Exhaustive zero-set enumeration over finite fields: the independent oracle
//! for every smoothness and transversality verdict.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ring::{Ring, RingMap};

/// Default cap on the number of candidate points scanned.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Affine,
    Projective,
}

/// Points over `field`; projective points have first nonzero coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub field: Ring,
    pub points: Vec<Vec<u64>>,
    pub projective: bool,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        let q = if self.projective { normalize_projective(&self.field, p) } else { p.to_vec() };
        self.points.binary_search(&q).is_ok()
    }
}

/// Scales a projective point so its first nonzero coordinate is 1.
pub fn normalize_projective(field: &Ring, p: &[u64]) -> Vec<u64> {
    match p.iter().find(|&&c| c != 0) {
        Some(&c) => {
            let ci = field.inv(c).expect("nonzero field element");
            p.iter().map(|&x| field.mul(x, ci)).collect()
        }
        None => p.to_vec(),
    }
}

/// Compiled evaluator: terms as (coefficient, [(var, exponent)]).
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(f: &MultiPoly) -> Compiled {
        let terms = f
            .terms()
            .map(|(m, c)| (c, m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect()))
            .collect();
        Compiled { terms }
    }

    fn vanishes(&self, ring: &Ring, pt: &[u64]) -> bool {
        let mut acc = 0;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                let x = pt[i];
                if x == 0 {
                    t = 0;
                    break;
                }
                t = ring.mul(t, if e == 1 { x } else { ring.pow(x, e as u64) });
            }
            acc = ring.add(acc, t);
        }
        acc == 0
    }
}

/// Common zeros of `polys` over the degree-`ext_degree` extension of their field.
pub fn enumerate_zeros(polys: &[MultiPoly], nvars: usize, mode: Mode, ext_degree: u32, budget: u64) -> Result<PointSet> {
    let base = match polys.first() {
        Some(f) => f.ring().clone(),
        None => return Err(Error::InvalidInput("enumeration needs a field; pass it via enumerate_zeros_over".into())),
    };
    enumerate_zeros_over(&base, polys, nvars, mode, ext_degree, budget)
}

/// As [`enumerate_zeros`], with the base field given explicitly (allows an empty list).
pub fn enumerate_zeros_over(
    base: &Ring,
    polys: &[MultiPoly],
    nvars: usize,
    mode: Mode,
    ext_degree: u32,
    budget: u64,
) -> Result<PointSet> {
    if !base.is_field() {
        return Err(Error::InvalidInput("enumeration runs over fields only".into()));
    }
    for f in polys {
        if f.ring() != base {
            return Err(Error::RingMismatch);
        }
        if f.nvars() != nvars {
            return Err(Error::ArityMismatch { expected: nvars, found: f.nvars() });
        }
    }
    let (field, map) = if ext_degree == 1 {
        (base.clone(), RingMap::identity(base))
    } else {
        base.extend_unramified(ext_degree)?
    };
    let mapped: Vec<MultiPoly> = polys.iter().map(|f| f.apply_map(&map)).collect::<Result<_>>()?;

    // Generators c*x_i force x_i = 0.
    let mut forced_zero = vec![false; nvars];
    for f in &mapped {
        if f.num_terms() == 1 {
            let (m, _) = f.leading().expect("nonzero");
            let vars = f.support_vars();
            if vars.len() == 1 && m.degree() >= 1 {
                forced_zero[vars[0]] = true;
            }
        }
        if f.is_constant() && !f.is_zero() {
            return Ok(PointSet { field, points: Vec::new(), projective: mode == Mode::Projective });
        }
    }
    let free: Vec<usize> = (0..nvars).filter(|&i| !forced_zero[i]).collect();
    let q = field.size();
    let needed = count_candidates(q, free.len(), mode, &forced_zero);
    if needed > budget {
        return Err(Error::BudgetExceeded { budget, needed });
    }
    let compiled: Vec<Compiled> = mapped.iter().map(Compiled::new).collect();
    let mut points = Vec::new();
    let mut pt = vec![0u64; nvars];
    let mut check = |pt: &[u64]| {
        if compiled.iter().all(|c| c.vanishes(&field, pt)) {
            points.push(pt.to_vec());
        }
    };
    match mode {
        Mode::Affine => scan(&free, q, &mut pt, &mut check),
        Mode::Projective => {
            for (k, &lead) in free.iter().enumerate() {
                pt.iter_mut().for_each(|x| *x = 0);
                pt[lead] = 1;
                scan(&free[k + 1..], q, &mut pt, &mut check);
            }
        }
    }
    points.sort();
    points.dedup();
    Ok(PointSet { field, points, projective: mode == Mode::Projective })
}

fn count_candidates(q: u64, free: usize, mode: Mode, _forced: &[bool]) -> u64 {
    let pow = |e: usize| (0..e).fold(1u64, |acc, _| acc.saturating_mul(q));
    match mode {
        Mode::Affine => pow(free),
        Mode::Projective => (0..free).fold(0u64, |acc, k| acc.saturating_add(pow(k))),
    }
}

/// Visits every assignment of `vars` over a field of order `q` (odometer order).
fn scan(vars: &[usize], q: u64, pt: &mut [u64], visit: &mut impl FnMut(&[u64])) {
    for &v in vars {
        pt[v] = 0;
    }
    loop {
        visit(pt);
        let mut k = vars.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let v = vars[k];
            pt[v] += 1;
            if pt[v] < q {
                break;
            }
            pt[v] = 0;
        }
    }
}

/// All points of affine or projective space over `field` (`nvars` coordinates).
pub fn all_points(field: &Ring, nvars: usize, mode: Mode, budget: u64) -> Result<Vec<Vec<u64>>> {
    Ok(enumerate_zeros_over(field, &[], nvars, mode, 1, budget)?.points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{indexed_names, parse_poly};

    fn names(v: &[&str]) -> Vec<alloc::string::String> {
        v.iter().map(|s| (*s).into()).collect()
    }

    #[test]
    fn conic_over_f3() {
        let r = Ring::prime_field(3).unwrap();
        let f = parse_poly("x^2+y^2+z^2", &r, &names(&["x", "y", "z"])).unwrap();
        let pts = enumerate_zeros(&[f], 3, Mode::Projective, 1, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(pts.points, vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 1], vec![1, 2, 2]]);
    }

    #[test]
    fn conic_over_f2_is_a_line() {
        let r = Ring::prime_field(2).unwrap();
        let f = parse_poly("x^2+y^2+z^2", &r, &names(&["x", "y", "z"])).unwrap();
        let pts = enumerate_zeros(&[f], 3, Mode::Projective, 1, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.points.iter().all(|p| (p[0] + p[1] + p[2]) % 2 == 0));
    }

    #[test]
    fn empty_list_gives_everything() {
        let r = Ring::prime_field(3).unwrap();
        assert_eq!(all_points(&r, 2, Mode::Affine, 100).unwrap().len(), 9);
        assert_eq!(all_points(&r, 3, Mode::Projective, 100).unwrap().len(), 13);
    }

    #[test]
    fn extension_points_and_budget() {
        let r = Ring::prime_field(3).unwrap();
        // x^2 + 1 has no root over F_3 but two over F_9.
        let f = parse_poly("x0^2 + 1", &r, &indexed_names("x", 0, 1)).unwrap();
        assert!(enumerate_zeros(core::slice::from_ref(&f), 1, Mode::Affine, 1, 100).unwrap().is_empty());
        assert_eq!(enumerate_zeros(core::slice::from_ref(&f), 1, Mode::Affine, 2, 100).unwrap().len(), 2);
        assert!(matches!(
            enumerate_zeros(&[f], 1, Mode::Affine, 2, 5),
            Err(Error::BudgetExceeded { budget: 5, needed: 9 })
        ));
    }
}
