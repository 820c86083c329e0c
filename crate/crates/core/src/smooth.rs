//! Smoothness, transversality and simple-normal-crossing certificates for
//! complete intersections, decided by the Jacobian criterion chart by chart and
//! cross-checked by exhaustive enumeration.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::enumerate::{enumerate_zeros_over, Mode, DEFAULT_POINT_BUDGET};
use crate::error::{Error, Result};
use crate::groebner::{Ideal, DEFAULT_STEP_BUDGET};
use crate::poly::MultiPoly;
use crate::ring::{Ring, RingMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Affine,
    Projective,
}

/// A complete intersection `V(gens)` in affine space `A^n` or projective space `P^{n-1}`
/// (`n = nvars`). Codimension is the number of generators. Smoothness checks
/// require field coefficients; models over a DVR are used for classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeModel {
    pub ring: Ring,
    pub nvars: usize,
    pub space: Space,
    pub gens: Vec<MultiPoly>,
}

impl SchemeModel {
    pub fn new(ring: &Ring, nvars: usize, space: Space, gens: Vec<MultiPoly>) -> Result<SchemeModel> {
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if g.nvars() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: g.nvars() });
            }
            if space == Space::Projective && !g.is_homogeneous() {
                return Err(Error::InvalidInput(format!("generator {g} is not homogeneous")));
            }
        }
        Ok(SchemeModel { ring: ring.clone(), nvars, space, gens })
    }

    pub fn projective(ring: &Ring, nvars: usize, gens: Vec<MultiPoly>) -> Result<SchemeModel> {
        SchemeModel::new(ring, nvars, Space::Projective, gens)
    }

    pub fn affine(ring: &Ring, nvars: usize, gens: Vec<MultiPoly>) -> Result<SchemeModel> {
        SchemeModel::new(ring, nvars, Space::Affine, gens)
    }

    pub fn codim(&self) -> usize {
        self.gens.len()
    }

    pub fn ambient_dim(&self) -> usize {
        match self.space {
            Space::Affine => self.nvars,
            Space::Projective => self.nvars - 1,
        }
    }

    /// The scheme cut out by both generator lists.
    pub fn intersect(&self, other: &SchemeModel) -> Result<SchemeModel> {
        if self.space != other.space || self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        SchemeModel::new(&self.ring, self.nvars, self.space, gens)
    }

    pub fn with_extra(&self, extra: &[MultiPoly]) -> Result<SchemeModel> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        SchemeModel::new(&self.ring, self.nvars, self.space, gens)
    }

    /// Affine charts: `(chart index, generators in the chart variables)`.
    /// Projective chart `i` sets `x_i = 1`; the affine model has one chart.
    pub fn charts(&self) -> Vec<(Option<usize>, Vec<MultiPoly>)> {
        match self.space {
            Space::Affine => vec![(None, self.gens.clone())],
            Space::Projective => (0..self.nvars)
                .map(|i| (Some(i), self.gens.iter().map(|g| g.dehomogenize(i)).collect()))
                .collect(),
        }
    }

    fn chart_nvars(&self) -> usize {
        self.ambient_dim()
    }

    pub fn base_change(&self, map: &RingMap) -> Result<SchemeModel> {
        let gens = self.gens.iter().map(|g| g.apply_map(map)).collect::<Result<Vec<_>>>()?;
        SchemeModel::new(&map.target, self.nvars, self.space, gens)
    }
}

/// Determinant of a square polynomial matrix by cofactor expansion.
pub fn determinant(m: &[Vec<MultiPoly>], ring: &Ring, nvars: usize) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::constant(ring, nvars, 1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(ring, nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][j] * &determinant(&minor, ring, nvars);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `c x c` minors of the Jacobian of `gens` (`c = gens.len()`).
pub fn jacobian_minors(gens: &[MultiPoly], ring: &Ring, nvars: usize) -> Vec<MultiPoly> {
    let all: Vec<usize> = (0..nvars).collect();
    jacobian_minors_in(gens, ring, nvars, &all)
}

/// Maximal minors of the Jacobian restricted to the columns `vars` (relative Jacobian).
pub fn jacobian_minors_in(gens: &[MultiPoly], ring: &Ring, nvars: usize, vars: &[usize]) -> Vec<MultiPoly> {
    let c = gens.len();
    let jac: Vec<Vec<MultiPoly>> = gens.iter().map(|g| vars.iter().map(|&i| g.partial(i)).collect()).collect();
    let mut out = Vec::new();
    for cols in subsets(vars.len(), c) {
        let sub: Vec<Vec<MultiPoly>> = jac.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let d = determinant(&sub, ring, nvars);
        if !d.is_zero() {
            out.push(d);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Groebner,
    Enumeration,
    Both,
}

/// Evidence of singularity: per-chart singular-locus bases and/or enumerated points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SingularWitness {
    /// `(chart, reduced Gröbner basis of the singular locus)` for nonempty charts.
    pub charts: Vec<(Option<usize>, Vec<MultiPoly>)>,
    /// Singular points found by enumeration, with the degree of the field they live in.
    pub points: Vec<(u32, Vec<u64>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Smooth,
    SingularAt(SingularWitness),
    WrongCodimension { expected: usize, found: usize },
}

impl Verdict {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Verdict::Smooth)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Smooth => "Smooth",
            Verdict::SingularAt(_) => "SingularAt",
            Verdict::WrongCodimension { .. } => "WrongCodimension",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessCertificate {
    pub verdict: Verdict,
    pub method: Method,
    /// Largest extension degree scanned by the enumeration oracle (0 if unused).
    pub ext_bound: u32,
    /// Number of points of the scheme seen by enumeration, per extension degree.
    pub points_checked: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothOptions {
    pub method: Method,
    pub ext_bound: u32,
    pub point_budget: u64,
    pub step_budget: u64,
}

impl Default for SmoothOptions {
    fn default() -> Self {
        SmoothOptions { method: Method::Groebner, ext_bound: 3, point_budget: DEFAULT_POINT_BUDGET, step_budget: DEFAULT_STEP_BUDGET }
    }
}

impl SmoothOptions {
    pub fn both(ext_bound: u32) -> Self {
        SmoothOptions { method: Method::Both, ext_bound, ..Default::default() }
    }

    pub fn enumeration(ext_bound: u32) -> Self {
        SmoothOptions { method: Method::Enumeration, ext_bound, ..Default::default() }
    }
}

/// Singular-locus ideals per nonempty chart. Errors with `NotCompleteIntersection`
/// when a chart has the wrong dimension.
pub fn singular_locus(x: &SchemeModel) -> Result<Vec<(Option<usize>, Ideal)>> {
    singular_locus_with_budget(x, DEFAULT_STEP_BUDGET)
}

fn singular_locus_with_budget(x: &SchemeModel, budget: u64) -> Result<Vec<(Option<usize>, Ideal)>> {
    let n = x.chart_nvars();
    let c = x.codim();
    let mut out = Vec::new();
    for (chart, gens) in x.charts() {
        let base = Ideal::new(&x.ring, n, gens.clone())?.with_budget(budget);
        let dim = match base.dimension()? {
            None => continue,
            Some(d) => d,
        };
        if c > n || dim != n - c {
            return Err(Error::NotCompleteIntersection { expected: n.saturating_sub(c), found: dim });
        }
        let minors = jacobian_minors(&gens, &x.ring, n);
        out.push((chart, base.extend(&minors)?));
    }
    Ok(out)
}

fn groebner_verdict(x: &SchemeModel, budget: u64) -> Result<Verdict> {
    let loci = match singular_locus_with_budget(x, budget) {
        Ok(l) => l,
        Err(Error::NotCompleteIntersection { expected, found }) => {
            return Ok(Verdict::WrongCodimension { expected, found })
        }
        Err(e) => return Err(e),
    };
    let mut witness = SingularWitness::default();
    for (chart, ideal) in loci {
        if !ideal.is_unit()? {
            witness.charts.push((chart, ideal.groebner()?.to_vec()));
        }
    }
    Ok(if witness.charts.is_empty() { Verdict::Smooth } else { Verdict::SingularAt(witness) })
}

/// Rank of a matrix over a finite field.
pub fn matrix_rank(field: &Ring, rows: &mut [Vec<u64>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = field.mul(rows[r][col], inv);
                for k in col..ncols {
                    let v = field.mul(f, rows[rank][k]);
                    rows[r][k] = field.sub(rows[r][k], v);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Points of `x` over the degree-`m` extension where the Jacobian has rank below the codimension.
pub fn singular_points(x: &SchemeModel, m: u32, budget: u64) -> Result<(u64, Vec<Vec<u64>>)> {
    let mode = match x.space {
        Space::Affine => Mode::Affine,
        Space::Projective => Mode::Projective,
    };
    let pts = enumerate_zeros_over(&x.ring, &x.gens, x.nvars, mode, m, budget)?;
    let field = pts.field.clone();
    let map = if m == 1 { RingMap::identity(&x.ring) } else { x.ring.extend_unramified(m)?.1 };
    let jac: Vec<Vec<MultiPoly>> = x
        .gens
        .iter()
        .map(|g| {
            let g = g.apply_map(&map).expect("same ring");
            (0..x.nvars).map(|i| g.partial(i)).collect()
        })
        .collect();
    let c = x.codim();
    let mut bad = Vec::new();
    for p in &pts.points {
        let mut rows: Vec<Vec<u64>> = jac.iter().map(|row| row.iter().map(|d| d.eval(p)).collect()).collect();
        if matrix_rank(&field, &mut rows) < c {
            bad.push(p.clone());
        }
    }
    Ok((pts.len() as u64, bad))
}

fn enumeration_verdict(x: &SchemeModel, ext_bound: u32, budget: u64) -> Result<(Verdict, Vec<u64>)> {
    let mut counts = Vec::new();
    for m in 1..=ext_bound {
        let (count, bad) = singular_points(x, m, budget)?;
        counts.push(count);
        if !bad.is_empty() {
            let witness = SingularWitness { charts: Vec::new(), points: bad.into_iter().map(|p| (m, p)).collect() };
            return Ok((Verdict::SingularAt(witness), counts));
        }
    }
    Ok((Verdict::Smooth, counts))
}

/// Smoothness of a complete intersection of the expected codimension.
pub fn is_smooth(x: &SchemeModel, opts: &SmoothOptions) -> Result<SmoothnessCertificate> {
    match opts.method {
        Method::Groebner => Ok(SmoothnessCertificate {
            verdict: groebner_verdict(x, opts.step_budget)?,
            method: Method::Groebner,
            ext_bound: 0,
            points_checked: Vec::new(),
        }),
        Method::Enumeration => {
            let (verdict, points_checked) = enumeration_verdict(x, opts.ext_bound, opts.point_budget)?;
            Ok(SmoothnessCertificate { verdict, method: Method::Enumeration, ext_bound: opts.ext_bound, points_checked })
        }
        Method::Both => {
            let g = groebner_verdict(x, opts.step_budget)?;
            let (e, points_checked) = enumeration_verdict(x, opts.ext_bound, opts.point_budget)?;
            if g.is_smooth() != e.is_smooth() {
                return Err(Error::OracleDisagreement(format!(
                    "Gröbner verdict {} but enumeration verdict {} (extension degree <= {})",
                    g.label(),
                    e.label(),
                    opts.ext_bound
                )));
            }
            let verdict = match (g, e) {
                (Verdict::SingularAt(mut w), Verdict::SingularAt(we)) => {
                    w.points = we.points;
                    Verdict::SingularAt(w)
                }
                (g, _) => g,
            };
            Ok(SmoothnessCertificate { verdict, method: Method::Both, ext_bound: opts.ext_bound, points_checked })
        }
    }
}

/// Transversality of `x` and `l`: their intersection is smooth of the summed codimension
/// (an empty intersection counts as transversal).
pub fn is_transversal(x: &SchemeModel, l: &SchemeModel, opts: &SmoothOptions) -> Result<SmoothnessCertificate> {
    is_smooth(&x.intersect(l)?, opts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SncVerdict {
    Snc,
    /// The first stratum (component indices) that is not smooth of the expected codimension.
    FailsAt { stratum: Vec<usize>, verdict: Verdict },
}

impl SncVerdict {
    pub fn is_snc(&self) -> bool {
        matches!(self, SncVerdict::Snc)
    }
}

/// Every intersection of components is smooth of the summed codimension, or empty.
pub fn check_snc(components: &[SchemeModel], opts: &SmoothOptions) -> Result<SncVerdict> {
    let k = components.len();
    for size in 1..=k {
        for stratum in subsets(k, size) {
            let mut model = components[stratum[0]].clone();
            for &i in &stratum[1..] {
                model = model.intersect(&components[i])?;
            }
            let cert = is_smooth(&model, opts)?;
            if !cert.verdict.is_smooth() {
                return Ok(SncVerdict::FailsAt { stratum, verdict: cert.verdict });
            }
        }
    }
    Ok(SncVerdict::Snc)
}

/// SNC for divisors `{base, g_i = 0}` on a smooth base scheme.
pub fn check_snc_on(base: &SchemeModel, divisors: &[MultiPoly], opts: &SmoothOptions) -> Result<SncVerdict> {
    let comps: Vec<SchemeModel> = divisors
        .iter()
        .map(|d| SchemeModel::new(&base.ring, base.nvars, base.space, vec![d.clone()]))
        .collect::<Result<_>>()?;
    let k = comps.len();
    for size in 1..=k {
        for stratum in subsets(k, size) {
            let extra: Vec<MultiPoly> = stratum.iter().map(|&i| divisors[i].clone()).collect();
            let cert = is_smooth(&base.with_extra(&extra)?, opts)?;
            if !cert.verdict.is_smooth() {
                return Ok(SncVerdict::FailsAt { stratum, verdict: cert.verdict });
            }
        }
    }
    Ok(SncVerdict::Snc)
}

/// Index sets of all nonempty subsets of `0..k`, by size then lexicographically.
pub fn all_strata(k: usize) -> Vec<Vec<usize>> {
    (1..=k).flat_map(|s| subsets(k, s)).collect()
}

/// Short human-readable summary of a certificate.
pub fn describe(cert: &SmoothnessCertificate) -> String {
    let m = match cert.method {
        Method::Groebner => "groebner",
        Method::Enumeration => "enumeration",
        Method::Both => "both",
    };
    format!("{} (method={m})", cert.verdict.label())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{indexed_names, parse_poly};
    use alloc::string::ToString;

    fn model(p: u64, space: Space, vars: &[&str], gens: &[&str]) -> SchemeModel {
        let r = Ring::prime_field(p).unwrap();
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = gens.iter().map(|g| parse_poly(g, &r, &names).unwrap()).collect();
        SchemeModel::new(&r, vars.len(), space, gens).unwrap()
    }

    #[test]
    fn conic_is_smooth_in_odd_characteristic() {
        let x = model(5, Space::Projective, &["x", "y", "z"], &["x^2+y^2+z^2"]);
        assert!(is_smooth(&x, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
    }

    #[test]
    fn node_is_singular_at_origin() {
        let x = model(3, Space::Affine, &["x", "y"], &["x*y"]);
        let loci = singular_locus(&x).unwrap();
        let gb = loci[0].1.groebner().unwrap();
        let names = indexed_names("x", 0, 2);
        let shown: Vec<String> = gb.iter().map(|g| g.display_with(&names)).collect();
        assert_eq!(shown, ["x1", "x0"]);
    }

    #[test]
    fn crossing_lines_are_singular_at_their_meet() {
        let x = model(3, Space::Projective, &["x0", "x1", "x2"], &["x0*x1"]);
        let cert = is_smooth(&x, &SmoothOptions::both(1)).unwrap();
        match cert.verdict {
            Verdict::SingularAt(w) => assert_eq!(w.points, vec![(1, vec![0, 0, 1])]),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn char_two_conic_is_singular_everywhere() {
        let x = model(2, Space::Projective, &["x", "y", "z"], &["x^2+y^2+z^2"]);
        let cert = is_smooth(&x, &SmoothOptions::both(1)).unwrap();
        match cert.verdict {
            Verdict::SingularAt(w) => assert_eq!(w.points.len(), 3),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn smooth_quadric_surface() {
        let x = model(5, Space::Projective, &["x0", "x1", "x2", "x3"], &["x0*x1 - x2*x3"]);
        assert!(is_smooth(&x, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
    }

    #[test]
    fn conic_and_lines() {
        let conic = model(5, Space::Projective, &["x", "y", "z"], &["x^2+y^2+z^2"]);
        let line = model(5, Space::Projective, &["x", "y", "z"], &["z"]);
        assert!(is_transversal(&conic, &line, &SmoothOptions::both(2)).unwrap().verdict.is_smooth());
        let r = Ring::prime_field(5).unwrap();
        let mut tangent = 0;
        for l in crate::enumerate::all_points(&r, 3, Mode::Projective, 100).unwrap() {
            let lm = SchemeModel::projective(&r, 3, vec![MultiPoly::linear(&r, &l)]).unwrap();
            let g = is_transversal(&conic, &lm, &SmoothOptions::default()).unwrap();
            let e = is_transversal(&lm, &conic, &SmoothOptions::enumeration(2)).unwrap();
            assert_eq!(g.verdict.is_smooth(), e.verdict.is_smooth());
            if !g.verdict.is_smooth() {
                tangent += 1;
            }
        }
        assert_eq!(tangent, 6);
    }

    #[test]
    fn snc_examples() {
        let vars = ["x0", "x1", "x2"];
        let a = model(3, Space::Projective, &vars, &["x0"]);
        let b = model(3, Space::Projective, &vars, &["x1"]);
        let c = model(3, Space::Projective, &vars, &["x0+x1"]);
        let o = SmoothOptions::both(1);
        assert!(check_snc(&[a.clone(), b.clone()], &o).unwrap().is_snc());
        assert!(!check_snc(&[a.clone(), a.clone()], &o).unwrap().is_snc());
        match check_snc(&[a, b, c], &o).unwrap() {
            SncVerdict::FailsAt { stratum, .. } => assert_eq!(stratum, vec![0, 1, 2]),
            v => panic!("unexpected {v:?}"),
        }
    }
}
