//! Good hyperplane sections over a DVR: special-fibre hyperplanes transversal to every
//! stratum of the reduced special fibre, lifted to `A`, with a generic-fibre check and a
//! fallback to unramified extensions of the residue field.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::enumerate::{all_points, enumerate_zeros_over, Mode};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{Monomial, MultiPoly};
use crate::ring::{Ring, RingMap};
use crate::shadow::to_shadow;
use crate::smooth::{
    check_snc, is_smooth, is_transversal, jacobian_minors_in, singular_points, SchemeModel, SmoothOptions,
    SmoothnessCertificate, SncVerdict, Space, Verdict,
};

/// A hyperplane `sum a_i x_i = 0` over `A` with some unit coefficient, scaled so the
/// first unit coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneA {
    ring: Ring,
    coeffs: Vec<u64>,
}

impl HyperplaneA {
    pub fn new(ring: &Ring, coeffs: &[u64]) -> Result<HyperplaneA> {
        let first = coeffs
            .iter()
            .position(|&a| ring.is_unit(a))
            .ok_or_else(|| Error::InvalidInput("hyperplane coefficients all lie in the maximal ideal".into()))?;
        let inv = ring.inv(coeffs[first])?;
        Ok(HyperplaneA { ring: ring.clone(), coeffs: coeffs.iter().map(|&a| ring.mul(a, inv)).collect() })
    }

    /// Lifts a nonzero residue hyperplane by canonical representatives.
    pub fn lift(ring: &Ring, h: &[u64]) -> Result<HyperplaneA> {
        let lifted: Vec<u64> = h.iter().map(|&c| ring.lift(c)).collect();
        HyperplaneA::new(ring, &lifted)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient-wise residue.
    pub fn specialize(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&a| self.ring.residue(a)).collect()
    }

    pub fn poly(&self) -> MultiPoly {
        MultiPoly::linear(&self.ring, &self.coeffs)
    }

    pub fn residue_poly(&self) -> MultiPoly {
        MultiPoly::linear(&self.ring.residue_field(), &self.specialize())
    }
}

impl fmt::Display for HyperplaneA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&a| self.ring.display_elem(a)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A projective model over `A` with declared components of its reduced special fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedModel {
    pub x: SchemeModel,
    pub components: Vec<SchemeModel>,
    pub proper: bool,
}

impl StratifiedModel {
    /// Checks that every component is smooth and that the components cover the
    /// special fibre pointwise over the residue field.
    pub fn new(x: SchemeModel, components: Vec<SchemeModel>, proper: bool, opts: &SmoothOptions) -> Result<StratifiedModel> {
        if x.space != Space::Projective {
            return Err(Error::InvalidInput("stratified models live in projective space".into()));
        }
        let field = x.ring.residue_field();
        for (i, y) in components.iter().enumerate() {
            if y.ring != field || y.nvars != x.nvars || y.space != Space::Projective {
                return Err(Error::InvalidInput(format!("component {} is not a subscheme of the special fibre's ambient space", i + 1)));
            }
            if !is_smooth(y, opts)?.verdict.is_smooth() {
                return Err(Error::InvalidInput(format!("component {} is not smooth", i + 1)));
            }
        }
        let model = StratifiedModel { x, components, proper };
        let fibre = enumerate_zeros_over(&field, &model.special_fibre().gens, model.x.nvars, Mode::Projective, 1, opts.point_budget)?;
        let mut union = Vec::new();
        for y in &model.components {
            union.extend(enumerate_zeros_over(&field, &y.gens, y.nvars, Mode::Projective, 1, opts.point_budget)?.points);
        }
        union.sort();
        union.dedup();
        let mut pts = fibre.points.clone();
        pts.sort();
        if pts != union {
            return Err(Error::InvalidInput(format!(
                "components cover {} residue points but the special fibre has {}",
                union.len(),
                pts.len()
            )));
        }
        Ok(model)
    }

    pub fn ring(&self) -> &Ring {
        &self.x.ring
    }

    pub fn nvars(&self) -> usize {
        self.x.nvars
    }

    /// `X_s`: the generators reduced modulo `pi`.
    pub fn special_fibre(&self) -> SchemeModel {
        let gens = self.x.gens.iter().map(|g| g.reduce_mod_pi()).collect();
        SchemeModel { ring: self.x.ring.residue_field(), nvars: self.x.nvars, space: Space::Projective, gens }
    }

    /// Base change along an unramified extension of `A`.
    pub fn base_change(&self, map: &RingMap) -> Result<StratifiedModel> {
        let x = self.x.base_change(map)?;
        let fmap = RingMap::field_embedding(&self.x.ring.residue_field(), &map.target.residue_field())?;
        let components = self.components.iter().map(|y| y.base_change(&fmap)).collect::<Result<_>>()?;
        Ok(StratifiedModel { x, components, proper: self.proper })
    }
}

/// `Y_I`, the intersection of the components indexed by `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub indices: Vec<usize>,
    pub model: SchemeModel,
    pub empty: bool,
}

fn is_empty_projective(x: &SchemeModel) -> Result<bool> {
    for (_, gens) in x.charts() {
        if !Ideal::new(&x.ring, x.nvars - 1, gens)?.is_unit()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All intersections of components, by size then lexicographically; empty ones flagged.
pub fn strata(model: &StratifiedModel) -> Result<Vec<Stratum>> {
    let mut out = Vec::new();
    for indices in crate::smooth::all_strata(model.components.len()) {
        let mut s = model.components[indices[0]].clone();
        for &i in &indices[1..] {
            s = s.intersect(&model.components[i])?;
        }
        let empty = is_empty_projective(&s)?;
        out.push(Stratum { indices, model: s, empty });
    }
    Ok(out)
}

/// Auxiliary primes for reducing integer lifts of `Z/p^k` coefficients.
pub const AUX_PRIMES: [u64; 3] = [10007, 10009, 10037];

/// Smoothness of the generic fibre of a projective `A`-scheme for the canonical lift
/// of its coefficients. Over `F_q[[t]]/(t^k)` the lift is polynomial in `t` and the
/// check runs with `t` as a variable; over `Z/p^k` the lift uses balanced integer
/// representatives and is reduced modulo [`AUX_PRIMES`] (smooth modulo one of them
/// implies smooth over `Q`, hence over `K`).
pub fn generic_fibre_verdict(x: &SchemeModel, budget: u64) -> Result<Verdict> {
    match x.ring.kind() {
        crate::ring::RingKind::MixedDvr { .. } => integer_lift_verdict(x, budget),
        _ => shadow_verdict(x, budget),
    }
}

fn integer_lift_verdict(x: &SchemeModel, budget: u64) -> Result<Verdict> {
    let size = x.ring.size();
    let mut last = Verdict::Smooth;
    for &l in &AUX_PRIMES {
        let fl = Ring::prime_field(l)?;
        let gens: Vec<MultiPoly> = x
            .gens
            .iter()
            .map(|g| {
                g.map_coeffs(&fl, |a| {
                    if a > size / 2 {
                        (l - (size - a) % l) % l
                    } else {
                        a % l
                    }
                })
            })
            .collect();
        let model = SchemeModel::projective(&fl, x.nvars, gens)?;
        let opts = SmoothOptions { step_budget: budget, ..SmoothOptions::default() };
        last = is_smooth(&model, &opts)?.verdict;
        if last.is_smooth() {
            return Ok(last);
        }
    }
    Ok(last)
}

/// Per chart, the relative singular locus must be empty once `t` is inverted.
fn shadow_verdict(x: &SchemeModel, budget: u64) -> Result<Verdict> {
    let n = x.nvars;
    let field = x.ring.residue_field();
    let c = x.gens.len();
    let nv = n + 1;
    let pi = n - 1;
    let w = MultiPoly::var(&field, nv, n);
    let invert_pi = &MultiPoly::constant(&field, nv, 1) - &(&w * &MultiPoly::var(&field, nv, pi));
    let positions: Vec<usize> = (0..n - 1).collect();
    let xvars: Vec<usize> = (0..n - 1).collect();
    let mut witness = crate::smooth::SingularWitness::default();
    for i in 0..n {
        let gens: Vec<MultiPoly> = x.gens.iter().map(|g| to_shadow(&g.dehomogenize(i), nv, &positions, pi)).collect();
        let mut lgens = gens.clone();
        lgens.push(invert_pi.clone());
        let l = Ideal::new(&field, nv, lgens)?.with_budget(budget);
        let dim = match l.dimension()? {
            None => continue,
            Some(d) => d,
        };
        // One dimension comes from pi itself.
        let expected = (n - 1).saturating_sub(c);
        if c > n - 1 || dim != expected + 1 {
            return Ok(Verdict::WrongCodimension { expected, found: dim.saturating_sub(1) });
        }
        let sing = l.extend(&jacobian_minors_in(&gens, &field, nv, &xvars))?;
        if !sing.is_unit()? {
            witness.charts.push((Some(i), sing.groebner()?.to_vec()));
        }
    }
    Ok(if witness.charts.is_empty() { Verdict::Smooth } else { Verdict::SingularAt(witness) })
}

/// How condition (ii), transversality on the generic fibre, was settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenericRoute {
    /// Implied by condition (i) for proper models.
    ImpliedByProperness,
    /// Checked on the canonical lift (see [`generic_fibre_verdict`]).
    Lift(Verdict),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneVerdict {
    pub hyperplane: HyperplaneA,
    /// Transversality certificates for the nonempty strata checked, in order.
    pub strata: Vec<(Vec<usize>, SmoothnessCertificate)>,
    pub failed_stratum: Option<Vec<usize>>,
    /// Absent when condition (i) already failed.
    pub generic: Option<GenericRoute>,
    pub good: bool,
}

fn check_hyperplane(model: &StratifiedModel, strata: &[Stratum], h: &HyperplaneA, opts: &SmoothOptions) -> Result<HyperplaneVerdict> {
    let field = model.ring().residue_field();
    let hs = SchemeModel::projective(&field, model.nvars(), vec![h.residue_poly()])?;
    let mut certs = Vec::new();
    for s in strata.iter().filter(|s| !s.empty) {
        let cert = is_transversal(&s.model, &hs, opts)?;
        let ok = cert.verdict.is_smooth();
        certs.push((s.indices.clone(), cert));
        if !ok {
            return Ok(HyperplaneVerdict {
                hyperplane: h.clone(),
                strata: certs,
                failed_stratum: Some(s.indices.clone()),
                generic: None,
                good: false,
            });
        }
    }
    let generic = if model.proper {
        GenericRoute::ImpliedByProperness
    } else {
        GenericRoute::Lift(generic_fibre_verdict(&model.x.with_extra(&[h.poly()])?, opts.step_budget)?)
    };
    let good = match &generic {
        GenericRoute::ImpliedByProperness => true,
        GenericRoute::Lift(v) => v.is_smooth(),
    };
    Ok(HyperplaneVerdict { hyperplane: h.clone(), strata: certs, failed_stratum: None, generic: Some(generic), good })
}

/// Condition (i) on every stratum, then condition (ii) unless the model is proper.
pub fn is_good_hyperplane(model: &StratifiedModel, h: &HyperplaneA, opts: &SmoothOptions) -> Result<HyperplaneVerdict> {
    if h.ring() != model.ring() || h.coeffs().len() != model.nvars() {
        return Err(Error::InvalidInput("hyperplane does not match the model".into()));
    }
    check_hyperplane(model, &strata(model)?, h, opts)
}

/// Independent re-check of the conclusions for a chosen hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reverification {
    pub strata_transversal: bool,
    /// `H_s` misses every singular point of `X_s` over the scanned extensions.
    pub avoids_singular_points: bool,
    /// Special fibre of `X . H`.
    pub special_fibre: SmoothnessCertificate,
    /// Generic fibre of `X . H`, for the canonical lift.
    pub generic_fibre: Verdict,
    /// `H_s` together with the components of `X_{s,red}`.
    pub snc: SncVerdict,
}

impl Reverification {
    pub fn passes(&self) -> bool {
        self.strata_transversal
            && self.avoids_singular_points
            && self.special_fibre.verdict.is_smooth()
            && self.generic_fibre.is_smooth()
            && self.snc.is_snc()
    }
}

/// Re-checks a hyperplane with both oracles (Gröbner and enumeration up to `ext_bound`).
pub fn reverify(model: &StratifiedModel, h: &HyperplaneA, ext_bound: u32) -> Result<Reverification> {
    let opts = SmoothOptions::both(ext_bound);
    let field = model.ring().residue_field();
    let hpoly = h.residue_poly();
    let hs = SchemeModel::projective(&field, model.nvars(), vec![hpoly.clone()])?;
    let mut strata_transversal = true;
    for s in strata(model)?.iter().filter(|s| !s.empty) {
        strata_transversal &= is_transversal(&s.model, &hs, &opts)?.verdict.is_smooth();
    }
    let xs = model.special_fibre();
    let mut avoids_singular_points = true;
    for m in 1..=ext_bound {
        let (_, bad) = singular_points(&xs, m, opts.point_budget)?;
        let map = if m == 1 { RingMap::identity(&field) } else { field.extend_unramified(m)?.1 };
        let hm = hpoly.apply_map(&map)?;
        avoids_singular_points &= bad.iter().all(|p| hm.eval(p) != 0);
    }
    let special_fibre = is_smooth(&xs.with_extra(&[hpoly])?, &opts)?;
    let generic_fibre = generic_fibre_verdict(&model.x.with_extra(&[h.poly()])?, opts.step_budget)?;
    let mut comps = model.components.clone();
    comps.push(hs);
    let snc = check_snc(&comps, &opts)?;
    Ok(Reverification { strata_transversal, avoids_singular_points, special_fibre, generic_fibre, snc })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    /// Degree of the residue field extension scanned.
    pub degree: u32,
    pub candidates: u64,
    pub good: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperplaneSearch {
    Found {
        degree: u32,
        /// First good hyperplane in scan order, over the extended ring.
        hyperplane: HyperplaneA,
        /// Every good hyperplane at that level.
        good_locus: Vec<HyperplaneA>,
        levels: Vec<LevelStats>,
    },
    Exhausted { levels: Vec<LevelStats> },
}

impl HyperplaneSearch {
    pub fn levels(&self) -> &[LevelStats] {
        match self {
            HyperplaneSearch::Found { levels, .. } | HyperplaneSearch::Exhausted { levels } => levels,
        }
    }
}

/// Scans all residue hyperplanes (canonical forms, in enumeration order), lifting each
/// and testing it; on failure retries over unramified extensions of degree
/// `ell, ell^2, ..., ell^max_ext`.
pub fn find_good_hyperplane(model: &StratifiedModel, ell: u32, max_ext: u32, opts: &SmoothOptions) -> Result<HyperplaneSearch> {
    if ell < 2 {
        return Err(Error::InvalidInput("ell must be at least 2".into()));
    }
    let mut levels = Vec::new();
    for j in 0..=max_ext {
        let degree = ell.checked_pow(j).ok_or_else(|| Error::InvalidInput("extension degree overflows".into()))?;
        let level = if degree == 1 { model.clone() } else { model.base_change(&model.ring().extend_unramified(degree)?.1)? };
        let ring = level.ring().clone();
        let field = ring.residue_field();
        let st = strata(&level)?;
        let cands = all_points(&field, level.nvars(), Mode::Projective, opts.point_budget)?;
        let mut good = Vec::new();
        for h in &cands {
            let h = HyperplaneA::lift(&ring, h)?;
            if check_hyperplane(&level, &st, &h, opts)?.good {
                good.push(h);
            }
        }
        levels.push(LevelStats { degree, candidates: cands.len() as u64, good: good.len() as u64 });
        if let Some(first) = good.first().cloned() {
            return Ok(HyperplaneSearch::Found { degree, hyperplane: first, good_locus: good, levels });
        }
    }
    Ok(HyperplaneSearch::Exhausted { levels })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypersurfaceSearch {
    Found { form: MultiPoly, tested: u64 },
    Exhausted { tested: u64 },
}

/// How to pick candidate forms when exhaustive search is over budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub size: u64,
    pub seed: u64,
}

pub(crate) fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// A degree-`d` form over the residue field whose zero set is transversal to every
/// nonempty intersection of `components`. Exhaustive over forms with first nonzero
/// coefficient 1 when `q^(#monomials)` fits the budget, otherwise over a seeded sample.
pub fn find_good_hypersurface(
    components: &[SchemeModel],
    d: u32,
    budget: u64,
    sampling: Option<Sampling>,
    opts: &SmoothOptions,
) -> Result<HypersurfaceSearch> {
    let first = components.first().ok_or_else(|| Error::InvalidInput("no components".into()))?;
    let field = first.ring.clone();
    if !field.is_field() || d == 0 {
        return Err(Error::InvalidInput("forms need a residue field and positive degree".into()));
    }
    let nvars = first.nvars;
    let mut st = Vec::new();
    for indices in crate::smooth::all_strata(components.len()) {
        let mut s = components[indices[0]].clone();
        for &i in &indices[1..] {
            s = s.intersect(&components[i])?;
        }
        if !is_empty_projective(&s)? {
            st.push(s);
        }
    }
    let monos = monomials_of_degree(nvars, d);
    let q = field.size();
    let total = q.checked_pow(monos.len() as u32);
    let form_of = |mut idx: u64| {
        let mut f = MultiPoly::zero(&field, nvars);
        for m in &monos {
            f.add_term(m.clone(), idx % q);
            idx /= q;
        }
        f
    };
    let test = |f: &MultiPoly| -> Result<bool> {
        let h = SchemeModel::projective(&field, nvars, vec![f.clone()])?;
        for s in &st {
            if !is_transversal(s, &h, opts)?.verdict.is_smooth() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut tested = 0;
    match (total, sampling) {
        (Some(total), _) if total <= budget => {
            for idx in 1..total {
                let f = form_of(idx);
                // Canonical representative: the last (leading) coefficient is 1.
                if f.leading().map(|(_, c)| c) != Some(1) {
                    continue;
                }
                tested += 1;
                if test(&f)? {
                    return Ok(HypersurfaceSearch::Found { form: f, tested });
                }
            }
        }
        (_, Some(s)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            for _ in 0..s.size {
                let mut f = MultiPoly::zero(&field, nvars);
                for m in &monos {
                    f.add_term(m.clone(), rng.next_u64() % q);
                }
                if f.is_zero() {
                    continue;
                }
                tested += 1;
                if test(&f)? {
                    return Ok(HypersurfaceSearch::Found { form: f, tested });
                }
            }
        }
        (total, None) => return Err(Error::BudgetExceeded { budget, needed: total.unwrap_or(u64::MAX) }),
    }
    Ok(HypersurfaceSearch::Exhausted { tested })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{indexed_names, parse_poly};
    use crate::smooth::Method;

    fn names() -> Vec<String> {
        indexed_names("x", 0, 3)
    }

    fn e5(proper: bool) -> StratifiedModel {
        let a = Ring::zmod(3, 3).unwrap();
        let f = a.residue_field();
        let x = SchemeModel::projective(&a, 3, vec![parse_poly("x0*x1 - 3*x2^2", &a, &names()).unwrap()]).unwrap();
        let y1 = SchemeModel::projective(&f, 3, vec![parse_poly("x0", &f, &names()).unwrap()]).unwrap();
        let y2 = SchemeModel::projective(&f, 3, vec![parse_poly("x1", &f, &names()).unwrap()]).unwrap();
        StratifiedModel::new(x, vec![y1, y2], proper, &SmoothOptions::default()).unwrap()
    }

    #[test]
    fn specialize_and_lift() {
        let a = Ring::zmod(3, 3).unwrap();
        assert_eq!(HyperplaneA::new(&a, &[1, 3, 0]).unwrap().specialize(), [1, 0, 0]);
        assert_eq!(HyperplaneA::new(&a, &[3, 1, 0]).unwrap().specialize(), [0, 1, 0]);
        assert_eq!(HyperplaneA::new(&a, &[1, 1, 1]).unwrap().specialize(), [1, 1, 1]);
        assert!(HyperplaneA::new(&a, &[3, 9, 0]).is_err());
        let f = a.residue_field();
        let all = all_points(&f, 3, Mode::Projective, 100).unwrap();
        assert_eq!(all.len(), 13);
        for h in all {
            assert_eq!(HyperplaneA::lift(&a, &h).unwrap().specialize(), h);
        }
        let e = Ring::power_series(3, 1, 2).unwrap();
        assert_eq!(HyperplaneA::lift(&e, &[1, 2, 0]).unwrap().coeffs(), [1, 2, 0]);
    }

    #[test]
    fn strata_of_two_lines() {
        let st = strata(&e5(true)).unwrap();
        let idx: Vec<Vec<usize>> = st.iter().map(|s| s.indices.clone()).collect();
        assert_eq!(idx, [vec![0], vec![1], vec![0, 1]]);
        assert!(st.iter().all(|s| !s.empty));
        let pts = enumerate_zeros_over(&st[2].model.ring, &st[2].model.gens, 3, Mode::Projective, 1, 100).unwrap();
        assert_eq!(pts.points, [vec![0, 0, 1]]);
    }

    #[test]
    fn e5_verdicts() {
        let m = e5(true);
        let a = m.ring().clone();
        let opts = SmoothOptions::both(2);
        let good = is_good_hyperplane(&m, &HyperplaneA::new(&a, &[0, 0, 1]).unwrap(), &opts).unwrap();
        assert!(good.good);
        assert_eq!(good.generic, Some(GenericRoute::ImpliedByProperness));
        let bad = is_good_hyperplane(&m, &HyperplaneA::new(&a, &[1, 0, 0]).unwrap(), &opts).unwrap();
        assert_eq!(bad.failed_stratum, Some(vec![0]));
        let bad = is_good_hyperplane(&m, &HyperplaneA::new(&a, &[1, 1, 0]).unwrap(), &opts).unwrap();
        assert_eq!(bad.failed_stratum, Some(vec![0, 1]));
        let open = e5(false);
        let v = is_good_hyperplane(&open, &HyperplaneA::new(&a, &[0, 0, 1]).unwrap(), &opts).unwrap();
        assert_eq!(v.generic, Some(GenericRoute::Lift(Verdict::Smooth)));
        assert!(reverify(&m, &HyperplaneA::new(&a, &[0, 0, 1]).unwrap(), 2).unwrap().passes());
    }

    #[test]
    fn generic_fibre_detects_tangency() {
        // x0 x1 - 3 x2^2 meets x0 + x1 - 2 x2 = 0 where x0 x1 = 3 x2^2 and x0 + x1 = 2 x2:
        // discriminant 4 - 12 = -8, a unit, so the section stays smooth; the conic
        // x0 x1 - x2^2 is tangent to x0 + x1 - 2 x2 at (1:1:1) on both fibres.
        let a = Ring::zmod(3, 3).unwrap();
        let h = parse_poly("x0 + x1 - 2*x2", &a, &names()).unwrap();
        let good = SchemeModel::projective(&a, 3, vec![parse_poly("x0*x1 - 3*x2^2", &a, &names()).unwrap(), h.clone()]).unwrap();
        assert!(generic_fibre_verdict(&good, 1_000_000).unwrap().is_smooth());
        let bad = SchemeModel::projective(&a, 3, vec![parse_poly("x0*x1 - x2^2", &a, &names()).unwrap(), h]).unwrap();
        assert!(!generic_fibre_verdict(&bad, 1_000_000).unwrap().is_smooth());
    }

    #[test]
    fn conic_section_exists_over_f2() {
        let f = Ring::prime_field(2).unwrap();
        let conic = SchemeModel::projective(&f, 3, vec![parse_poly("x0*x1 + x2^2", &f, &names()).unwrap()]).unwrap();
        match find_good_hypersurface(core::slice::from_ref(&conic), 2, 1 << 20, None, &SmoothOptions::default()).unwrap() {
            HypersurfaceSearch::Found { form, .. } => {
                let h = SchemeModel::projective(&f, 3, vec![form]).unwrap();
                let cert = is_transversal(&conic, &h, &SmoothOptions { method: Method::Enumeration, ..SmoothOptions::both(4) }).unwrap();
                assert!(cert.verdict.is_smooth());
            }
            other => panic!("{other:?}"),
        }
    }
}
