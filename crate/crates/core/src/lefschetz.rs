//! Lefschetz pencils over finite fields by exhaustive tangency tables, and their
//! lifting to a DVR through the special fibre.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bertini::generic_fibre_verdict;
use crate::enumerate::normalize_projective;
use crate::error::{Error, Result};
use crate::germ::{classify_field_point, FieldGerm};
use crate::poly::MultiPoly;
use crate::quadsing::{classify_point, ClassifyOptions, SingularityVerdict};
use crate::ring::{Ring, RingMap};
use crate::smooth::{is_smooth, is_transversal, singular_points, SchemeModel, SmoothOptions, SmoothnessCertificate, Space, Verdict};

/// The line `{f0 + t f_inf}` in the space of degree-`d` forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    pub d: u32,
    pub f0: MultiPoly,
    pub finf: MultiPoly,
}

impl Pencil {
    pub fn new(f0: MultiPoly, finf: MultiPoly) -> Result<Pencil> {
        if f0.ring() != finf.ring() {
            return Err(Error::RingMismatch);
        }
        if f0.nvars() != finf.nvars() {
            return Err(Error::ArityMismatch { expected: f0.nvars(), found: finf.nvars() });
        }
        let d = f0.degree().ok_or_else(|| Error::InvalidInput("pencil forms must be nonzero".into()))?;
        if d == 0 || !f0.is_homogeneous() || !finf.is_homogeneous() || finf.degree() != Some(d) {
            return Err(Error::InvalidInput("pencil forms must be homogeneous of the same positive degree".into()));
        }
        let ring = f0.ring().clone();
        let field = ring.residue_field();
        let (a, b) = (f0.reduce_mod_pi(), finf.reduce_mod_pi());
        if proportional(&field, &a, &b) {
            return Err(Error::InvalidInput("pencil forms are proportional modulo the maximal ideal".into()));
        }
        Ok(Pencil { d, f0, finf })
    }

    pub fn ring(&self) -> &Ring {
        self.f0.ring()
    }

    pub fn nvars(&self) -> usize {
        self.f0.nvars()
    }

    /// Member at `param`, over the field the parameter lives in.
    pub fn member(&self, param: Param) -> Result<MultiPoly> {
        match param {
            Param::Infinity => Ok(self.finf.clone()),
            Param::Finite { degree, t } => {
                let map = ext_map(self.ring(), degree)?;
                let a = self.f0.apply_map(&map)?;
                let b = self.finf.apply_map(&map)?;
                Ok(&a + &b.scale(t))
            }
        }
    }

    /// Coefficient-wise residue.
    pub fn specialize(&self) -> Result<Pencil> {
        Pencil::new(self.f0.reduce_mod_pi(), self.finf.reduce_mod_pi())
    }

    /// Coefficient-wise lift of a residue pencil.
    pub fn lift(&self, ring: &Ring) -> Result<Pencil> {
        Pencil::new(self.f0.map_coeffs(ring, |c| ring.lift(c)), self.finf.map_coeffs(ring, |c| ring.lift(c)))
    }
}

impl fmt::Display for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.f0, self.finf)
    }
}

fn proportional(field: &Ring, a: &MultiPoly, b: &MultiPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    let (m, ca) = a.leading().expect("nonzero");
    let cb = b.coeff(m);
    let lambda = field.mul(cb, field.inv(ca).expect("field"));
    a.scale(lambda) == *b
}

/// A point of the parameter line: `t` in `F_{q^degree}` (not in a smaller field), or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Param {
    Finite { degree: u32, t: u64 },
    Infinity,
}

impl Param {
    pub fn degree(&self) -> u32 {
        match self {
            Param::Finite { degree, .. } => *degree,
            Param::Infinity => 1,
        }
    }

    pub fn label(&self, base: &Ring) -> String {
        match self {
            Param::Infinity => "inf".into(),
            Param::Finite { degree: 1, t } => base.display_elem(*t),
            Param::Finite { degree, t } => match ext_field(base, *degree) {
                Ok(f) => format!("{} in {}", f.display_elem(*t), f),
                Err(_) => format!("#{t} in degree {degree}"),
            },
        }
    }
}

pub(crate) fn ext_map(base: &Ring, m: u32) -> Result<RingMap> {
    if m == 1 {
        Ok(RingMap::identity(base))
    } else {
        Ok(base.extend_unramified(m)?.1)
    }
}

fn ext_field(base: &Ring, m: u32) -> Result<Ring> {
    Ok(ext_map(base, m)?.target.clone())
}

/// Elements of `top` lying in a proper subfield containing `base`; `rel` is `[top : base]`.
fn old_elements(base: &Ring, rel: u32) -> Result<Vec<BTreeSet<u64>>> {
    let top = ext_field(base, rel)?;
    let mut out = Vec::new();
    for e in (1..rel).filter(|e| rel.is_multiple_of(*e)) {
        let sub = ext_field(base, e)?;
        let emb = RingMap::field_embedding(&sub, &top)?;
        out.push(sub.elements().map(|a| emb.apply(a)).collect());
    }
    Ok(out)
}

fn is_old(old: &[BTreeSet<u64>], p: &[u64]) -> bool {
    old.iter().any(|s| p.iter().all(|c| s.contains(c)))
}

/// Parameters of degree exactly `m` over the base field, infinity first at `m = 1`.
pub fn params_of_degree(base: &Ring, m: u32) -> Result<Vec<Param>> {
    let field = ext_field(base, m)?;
    let old = old_elements(base, m)?;
    let mut out = Vec::new();
    if m == 1 {
        out.push(Param::Infinity);
    }
    for t in field.elements() {
        if !is_old(&old, &[t]) {
            out.push(Param::Finite { degree: m, t });
        }
    }
    Ok(out)
}

/// Singular behaviour of one section `X . {g = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSingularities {
    /// Singular points off the declared singular points of `X`, each with the degree
    /// (over the base field) of the field it was found in.
    pub points: Vec<(u32, Vec<u64>)>,
    pub verdicts: Vec<FieldGerm>,
    /// Declared singular points of `X` on the section, with the germ of the section there.
    pub declared_on: Vec<(usize, FieldGerm)>,
    /// The section has the wrong dimension (the member contains a component of `X`).
    pub wrong_dimension: bool,
}

impl SectionSingularities {
    /// Exactly one new singular point, ordinary quadratic.
    pub fn one_ordinary_point(&self) -> bool {
        self.points.len() == 1 && self.verdicts.iter().all(|v| v.is_ordinary_quadratic())
    }
}

/// Singularities of `X . {g = 0}`, where `g` is defined over `F_{q^m}`: `None` when the
/// section is transversal (Gröbner certificate), else the singular points found over
/// the fields `F_{q^{jm}}`, `jm <= ext_bound`, and their germ types.
pub fn section_singularities(
    x: &SchemeModel,
    declared: &[Vec<u64>],
    g: &MultiPoly,
    m: u32,
    ext_bound: u32,
    opts: &SmoothOptions,
) -> Result<Option<SectionSingularities>> {
    let base = x.ring.clone();
    let map = ext_map(&base, m)?;
    let xm = x.base_change(&map)?;
    let model = xm.with_extra(core::slice::from_ref(g))?;
    let groebner = SmoothOptions { method: crate::smooth::Method::Groebner, ..*opts };
    let verdict = is_smooth(&model, &groebner)?.verdict;
    if verdict.is_smooth() {
        return Ok(None);
    }
    let mfield = map.target.clone();
    let wrong_dimension = matches!(verdict, Verdict::WrongCodimension { .. });
    let mut out = SectionSingularities { points: Vec::new(), verdicts: Vec::new(), declared_on: Vec::new(), wrong_dimension };
    for (i, p) in declared.iter().enumerate() {
        let pm: Vec<u64> = p.iter().map(|&c| map.apply(c)).collect();
        if g.eval(&pm) == 0 {
            out.declared_on.push((i, classify_field_point(&model.gens, Space::Projective, &pm)?));
        }
    }
    let mut j = 1;
    while j * m <= ext_bound.max(m) {
        let (_, bad) = singular_points(&model, j, opts.point_budget)?;
        let jmap = ext_map(&mfield, j)?;
        let jfield = jmap.target.clone();
        let old = old_elements(&mfield, j)?;
        let decl: Vec<Vec<u64>> = declared
            .iter()
            .map(|p| normalize_projective(&jfield, &p.iter().map(|&c| jmap.apply(map.apply(c))).collect::<Vec<_>>()))
            .collect();
        let gens: Vec<MultiPoly> = model.gens.iter().map(|f| f.apply_map(&jmap)).collect::<Result<_>>()?;
        for p in bad {
            if is_old(&old, &p) || decl.contains(&p) {
                continue;
            }
            out.verdicts.push(classify_field_point(&gens, Space::Projective, &p)?);
            out.points.push((j * m, p));
        }
        j += 1;
    }
    Ok(Some(out))
}

/// The base locus `{f0 = f_inf = 0}`.
pub fn axis_of(p: &Pencil) -> Result<SchemeModel> {
    SchemeModel::projective(p.ring(), p.nvars(), vec![p.f0.clone(), p.finf.clone()])
}

/// Knobs shared by the pencil checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LefschetzOptions {
    /// Members and singular points are scanned over `F_{q^m}`, `m <= ext_bound`.
    pub ext_bound: u32,
    pub smooth: SmoothOptions,
    /// Cap on candidate pencils per field in a search.
    pub max_candidates: u64,
}

impl Default for LefschetzOptions {
    fn default() -> Self {
        LefschetzOptions { ext_bound: 2, smooth: SmoothOptions::default(), max_candidates: 2000 }
    }
}

/// One row of the tangency table of `X` against degree-`d` forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub form: MultiPoly,
    pub section: Option<SectionSingularities>,
}

impl TableEntry {
    pub fn is_tangent(&self) -> bool {
        self.section.is_some()
    }

    /// The section has exactly one singular point, rational and ordinary quadratic.
    pub fn in_open_stratum(&self) -> bool {
        match &self.section {
            Some(s) => !s.wrong_dimension && s.declared_on.is_empty() && s.one_ordinary_point() && s.points[0].0 == 1,
            None => false,
        }
    }

    pub fn row(&self) -> String {
        match &self.section {
            None => format!("{} ; transversal ; - ; -", self.form),
            Some(s) => {
                let pts: Vec<String> = s.points.iter().map(|(m, p)| format!("{m}:{p:?}")).collect();
                let vs: Vec<String> = s.verdicts.iter().map(|v| v.label().to_string()).collect();
                let status = if s.wrong_dimension { "contains a component" } else { "tangent" };
                format!("{} ; {status} ; {} ; {}", self.form, pts.join(" "), vs.join(" "))
            }
        }
    }
}

/// Degree-`d` forms over `field` whose leading coefficient is 1.
pub fn canonical_forms(field: &Ring, nvars: usize, d: u32, budget: u64) -> Result<Vec<MultiPoly>> {
    let monos = crate::bertini::monomials_of_degree(nvars, d);
    let q = field.size();
    let total = q.checked_pow(monos.len() as u32).filter(|&t| t <= budget);
    let total = total.ok_or(Error::BudgetExceeded { budget, needed: q.saturating_pow(monos.len() as u32) })?;
    let mut out = Vec::new();
    for mut idx in 1..total {
        let mut f = MultiPoly::zero(field, nvars);
        for m in &monos {
            f.add_term(m.clone(), idx % q);
            idx /= q;
        }
        if f.leading().map(|(_, c)| c) == Some(1) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Every canonical degree-`d` form against `X` (a projective scheme over a finite field):
/// transversal or tangent, with the singular points of the section over `F_{q^m}`,
/// `m <= ext_bound`. Rows are in enumeration order.
pub fn dual_table(x: &SchemeModel, d: u32, ext_bound: u32, budget: u64) -> Result<Vec<TableEntry>> {
    if !x.ring.is_field() || x.space != Space::Projective {
        return Err(Error::InvalidInput("tangency tables need a projective scheme over a finite field".into()));
    }
    let opts = SmoothOptions { point_budget: budget, ..SmoothOptions::default() };
    canonical_forms(&x.ring, x.nvars, d, budget)?
        .into_iter()
        .map(|form| {
            let section = section_singularities(x, &[], &form, 1, ext_bound, &opts)?;
            Ok(TableEntry { form, section })
        })
        .collect()
}

/// A member of a pencil whose section of `X` is not transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadMember {
    pub param: Param,
    pub section: SectionSingularities,
}

/// Members over `F_{q^m}`, `m <= ext_bound`, whose sections are not transversal, and the
/// number of members scanned.
pub fn singular_members(
    x: &SchemeModel,
    declared: &[Vec<u64>],
    pencil: &Pencil,
    opts: &LefschetzOptions,
) -> Result<(u64, Vec<BadMember>)> {
    let mut scanned = 0;
    let mut out = Vec::new();
    for m in 1..=opts.ext_bound.max(1) {
        for param in params_of_degree(&x.ring, m)? {
            scanned += 1;
            let g = pencil.member(param)?;
            if let Some(section) = section_singularities(x, declared, &g, m, opts.ext_bound, &opts.smooth)? {
                out.push(BadMember { param, section });
            }
        }
    }
    Ok((scanned, out))
}

/// Outcome of checking the Lefschetz conditions for one pencil on `X`, whose only
/// singular points are the declared ordinary quadratic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzReport {
    pub pencil: Pencil,
    pub declared: Vec<Vec<u64>>,
    pub ext_bound: u32,
    pub axis_avoids_declared: bool,
    pub axis: SmoothnessCertificate,
    pub scanned: u64,
    pub sigma: Vec<BadMember>,
    /// (i) axis condition, (ii) members outside the bad set, (iii) bad members have one
    /// ordinary quadratic point, (iv) declared points stay ordinary quadratic.
    pub conditions: [bool; 4],
}

impl LefschetzReport {
    pub fn is_lefschetz(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }

    /// First failing condition, numbered from 1.
    pub fn failed_condition(&self) -> Option<usize> {
        self.conditions.iter().position(|&c| !c).map(|i| i + 1)
    }
}

/// Checks the pencil against `X` over the fields `F_{q^m}`, `m <= opts.ext_bound`.
/// Members outside the computed bad set are transversal and miss the declared points by
/// construction; a member containing a component of `X` is a failure of (ii).
/// With no declared points every bad member must have exactly one new singular point;
/// otherwise a bad member through a declared point may have none.
pub fn is_lefschetz(x: &SchemeModel, declared: &[Vec<u64>], pencil: &Pencil, opts: &LefschetzOptions) -> Result<LefschetzReport> {
    if pencil.ring() != &x.ring || pencil.nvars() != x.nvars {
        return Err(Error::RingMismatch);
    }
    let axis_avoids_declared = declared.iter().all(|p| pencil.f0.eval(p) != 0 || pencil.finf.eval(p) != 0);
    let axis = is_transversal(x, &axis_of(pencil)?, &opts.smooth)?;
    let (scanned, sigma) = singular_members(x, declared, pencil, opts)?;
    let c1 = axis_avoids_declared && axis.verdict.is_smooth();
    let c2 = sigma.iter().all(|b| !b.section.wrong_dimension);
    let c3 = sigma.iter().all(|b| {
        let s = &b.section;
        let ordinary = s.verdicts.iter().all(|v| v.is_ordinary_quadratic());
        if s.declared_on.is_empty() {
            s.points.len() == 1 && ordinary
        } else {
            s.points.len() <= 1 && ordinary
        }
    });
    let c4 = sigma.iter().all(|b| b.section.declared_on.iter().all(|(_, v)| v.is_ordinary_quadratic()));
    Ok(LefschetzReport {
        pencil: pencil.clone(),
        declared: declared.to_vec(),
        ext_bound: opts.ext_bound,
        axis_avoids_declared,
        axis,
        scanned,
        sigma,
        conditions: [c1, c2, c3, c4],
    })
}

/// The rows of a tangency table as sorted text.
pub fn table_rows(table: &[TableEntry]) -> Vec<String> {
    let mut rows: Vec<String> = table.iter().map(TableEntry::row).collect();
    rows.sort();
    rows
}

/// Lines in the space of degree-`d` forms, as reduced row echelon pairs `(f0, f_inf)`,
/// in a fixed order; at most `limit` of them.
pub fn candidate_pencils(field: &Ring, nvars: usize, d: u32, limit: u64) -> Result<Vec<Pencil>> {
    let monos = crate::bertini::monomials_of_degree(nvars, d);
    let n = monos.len();
    let q = field.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // (row, monomial) slots left free by the pivots
            let slots: Vec<(usize, usize)> =
                (i + 1..n).filter(|&k| k != j).map(|k| (0, k)).chain((j + 1..n).map(|k| (1, k))).collect();
            let total = q.checked_pow(slots.len() as u32).unwrap_or(u64::MAX);
            for mut idx in 0..total {
                if out.len() as u64 >= limit {
                    return Ok(out);
                }
                let mut rows = [MultiPoly::zero(field, nvars), MultiPoly::zero(field, nvars)];
                rows[0].add_term(monos[i].clone(), 1);
                rows[1].add_term(monos[j].clone(), 1);
                for &(r, k) in &slots {
                    rows[r].add_term(monos[k].clone(), idx % q);
                    idx /= q;
                }
                let [f0, f1] = rows;
                out.push(Pencil::new(f0, f1)?);
            }
        }
    }
    Ok(out)
}

/// Candidates scanned over one field of a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PencilLevel {
    pub degree: u32,
    pub candidates: u64,
    pub passing: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PencilSearch {
    /// `degree` is that of the extension of the base field the pencil lives over.
    Found { degree: u32, pencil: Pencil, report: LefschetzReport, levels: Vec<PencilLevel> },
    Exhausted { levels: Vec<PencilLevel> },
}

impl PencilSearch {
    pub fn levels(&self) -> &[PencilLevel] {
        match self {
            PencilSearch::Found { levels, .. } | PencilSearch::Exhausted { levels } => levels,
        }
    }
}

fn map_residue_point(map: &RingMap, source: &Ring, p: &[u64]) -> Vec<u64> {
    let target = &map.target;
    let field = target.residue_field();
    let q: Vec<u64> = p.iter().map(|&c| target.residue(map.apply(source.lift(c)))).collect();
    normalize_projective(&field, &q)
}

/// Extension degrees `1, ell, ell^2, ...` up to `max_ext`.
fn levels(ell: u32, max_ext: u32) -> Vec<u32> {
    let mut out = vec![1];
    if ell >= 2 {
        let mut deg = ell;
        while deg <= max_ext {
            out.push(deg);
            deg = deg.saturating_mul(ell);
        }
    }
    out
}

/// The first candidate pencil of degree-`d` forms passing [`is_lefschetz`], over the base
/// field, then over its extensions of degree `ell^j <= max_ext`.
pub fn find_pencil(
    x: &SchemeModel,
    declared: &[Vec<u64>],
    d: u32,
    ell: u32,
    max_ext: u32,
    opts: &LefschetzOptions,
) -> Result<PencilSearch> {
    if !x.ring.is_field() || x.space != Space::Projective {
        return Err(Error::InvalidInput("pencil search needs a projective scheme over a finite field".into()));
    }
    let mut stats = Vec::new();
    for degree in levels(ell, max_ext) {
        let map = ext_map(&x.ring, degree)?;
        let xm = x.base_change(&map)?;
        let decl: Vec<Vec<u64>> = declared.iter().map(|p| map_residue_point(&map, &x.ring, p)).collect();
        let mut level = PencilLevel { degree, candidates: 0, passing: 0 };
        for pencil in candidate_pencils(&xm.ring, x.nvars, d, opts.max_candidates)? {
            level.candidates += 1;
            let report = is_lefschetz(&xm, &decl, &pencil, opts)?;
            if report.is_lefschetz() {
                level.passing += 1;
                stats.push(level);
                return Ok(PencilSearch::Found { degree, pencil, report, levels: stats });
            }
        }
        stats.push(level);
    }
    Ok(PencilSearch::Exhausted { levels: stats })
}

/// Verification of a lifted pencil over `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DvrPencilCheck {
    /// The axis meets the generic fibre transversally.
    pub axis_generic: Verdict,
    /// Rational members outside the bad set, checked on the generic fibre.
    pub members_generic: Vec<(Param, Verdict)>,
    /// Rational bad members: each singular point of the special-fibre section with the
    /// type of the section over `A` there.
    pub reductions: Vec<(Param, Vec<u64>, SingularityVerdict)>,
}

impl DvrPencilCheck {
    pub fn passes(&self) -> bool {
        self.axis_generic.is_smooth()
            && self.members_generic.iter().all(|(_, v)| v.is_smooth())
            && self.reductions.iter().all(|(_, _, v)| matches!(v, SingularityVerdict::OrdinaryQuadratic(_)))
    }
}

/// Checks the lift of a residue pencil that passed [`is_lefschetz`] on the special fibre.
/// Bad members of degree above 1 are recorded as undecidable reductions.
pub fn verify_lift(x: &SchemeModel, pencil: &Pencil, residue: &LefschetzReport, opts: &LefschetzOptions) -> Result<DvrPencilCheck> {
    let ring = x.ring.clone();
    let budget = opts.smooth.point_budget;
    let axis_generic = generic_fibre_verdict(&x.with_extra(&[pencil.f0.clone(), pencil.finf.clone()])?, budget)?;
    let member_over_a = |param: Param| -> MultiPoly {
        match param {
            Param::Infinity => pencil.finf.clone(),
            Param::Finite { t, .. } => &pencil.f0 + &pencil.finf.scale(ring.lift(t)),
        }
    };
    let bad: BTreeSet<Param> = residue.sigma.iter().map(|b| b.param).collect();
    let mut members_generic = Vec::new();
    for param in params_of_degree(&ring.residue_field(), 1)? {
        if !bad.contains(&param) {
            members_generic.push((param, generic_fibre_verdict(&x.with_extra(&[member_over_a(param)])?, budget)?));
        }
    }
    let classify = ClassifyOptions::default();
    let mut reductions = Vec::new();
    for b in &residue.sigma {
        if b.param.degree() != 1 {
            reductions.push((b.param, Vec::new(), SingularityVerdict::Undecidable("member not defined over the residue field".into())));
            continue;
        }
        let mut eqs = x.gens.clone();
        eqs.push(member_over_a(b.param));
        for (m, p) in &b.section.points {
            let v = if *m == 1 {
                classify_point(&eqs, Space::Projective, p, &classify)?
            } else {
                SingularityVerdict::Undecidable(format!("singular point over the degree-{m} extension"))
            };
            reductions.push((b.param, p.clone(), v));
        }
        for (i, _) in &b.section.declared_on {
            let p = &residue.declared[*i];
            reductions.push((b.param, p.clone(), classify_point(&eqs, Space::Projective, p, &classify)?));
        }
    }
    Ok(DvrPencilCheck { axis_generic, members_generic, reductions })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DvrPencilLevel {
    pub degree: u32,
    pub candidates: u64,
    pub residue_passing: u64,
    pub lift_passing: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DvrPencilSearch {
    Found {
        degree: u32,
        pencil: Pencil,
        residue: LefschetzReport,
        check: DvrPencilCheck,
        levels: Vec<DvrPencilLevel>,
    },
    Exhausted { levels: Vec<DvrPencilLevel> },
}

impl DvrPencilSearch {
    pub fn levels(&self) -> &[DvrPencilLevel] {
        match self {
            DvrPencilSearch::Found { levels, .. } | DvrPencilSearch::Exhausted { levels } => levels,
        }
    }
}

/// A pencil over `A` for a projective `X` whose special fibre is singular only at the
/// declared (residue-field) ordinary quadratic points: residue pencils passing
/// [`is_lefschetz`] on the special fibre are lifted coefficient-wise and checked by
/// [`verify_lift`]; extensions of degree `ell^j <= max_ext` are tried in turn.
pub fn find_pencil_dvr(
    x: &SchemeModel,
    declared: &[Vec<u64>],
    d: u32,
    ell: u32,
    max_ext: u32,
    opts: &LefschetzOptions,
) -> Result<DvrPencilSearch> {
    if !x.ring.is_dvr() || x.space != Space::Projective {
        return Err(Error::InvalidInput("expected a projective scheme over a DVR".into()));
    }
    let field = x.ring.residue_field();
    let mut stats = Vec::new();
    for degree in levels(ell, max_ext) {
        let map = ext_map(&x.ring, degree)?;
        let xa = x.base_change(&map)?;
        let ra = xa.ring.clone();
        let xs = SchemeModel::projective(&ra.residue_field(), xa.nvars, xa.gens.iter().map(|g| g.reduce_mod_pi()).collect())?;
        let decl: Vec<Vec<u64>> = declared.iter().map(|p| map_residue_point(&map, &field, p)).collect();
        let mut level = DvrPencilLevel { degree, candidates: 0, residue_passing: 0, lift_passing: 0 };
        for p in candidate_pencils(&xs.ring, xs.nvars, d, opts.max_candidates)? {
            level.candidates += 1;
            let residue = is_lefschetz(&xs, &decl, &p, opts)?;
            if !residue.is_lefschetz() {
                continue;
            }
            level.residue_passing += 1;
            let pencil = p.lift(&ra)?;
            let check = verify_lift(&xa, &pencil, &residue, opts)?;
            if check.passes() {
                level.lift_passing += 1;
                stats.push(level);
                return Ok(DvrPencilSearch::Found { degree, pencil, residue, check, levels: stats });
            }
        }
        stats.push(level);
    }
    Ok(DvrPencilSearch::Exhausted { levels: stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{indexed_names, parse_poly};

    fn plane(ring: &Ring, text: &str) -> SchemeModel {
        SchemeModel::projective(ring, 3, vec![parse_poly(text, ring, &indexed_names("x", 0, 3)).unwrap()]).unwrap()
    }

    fn form(ring: &Ring, n: usize, text: &str) -> MultiPoly {
        parse_poly(text, ring, &indexed_names("x", 0, n)).unwrap()
    }

    #[test]
    fn conic_table_has_one_tangent_per_point() {
        let f = Ring::prime_field(5).unwrap();
        let table = dual_table(&plane(&f, "x0^2 + x1^2 + x2^2"), 1, 2, 1 << 20).unwrap();
        assert_eq!(table.len(), 31);
        let tangent: Vec<&TableEntry> = table.iter().filter(|e| e.is_tangent()).collect();
        assert_eq!(tangent.len(), 6);
        assert!(tangent.iter().all(|e| e.in_open_stratum()));
        assert_eq!(table_rows(&table).len(), 31);
    }

    #[test]
    fn quadric_surface_dual_is_a_quadric() {
        let f = Ring::prime_field(3).unwrap();
        let x = SchemeModel::projective(&f, 4, vec![form(&f, 4, "x0*x1 - x2*x3")]).unwrap();
        let table = dual_table(&x, 1, 1, 1 << 20).unwrap();
        assert_eq!(table.len(), 40);
        assert_eq!(table.iter().filter(|e| e.is_tangent()).count(), 16);
    }

    #[test]
    fn external_point_pencil_is_lefschetz() {
        let f = Ring::prime_field(5).unwrap();
        let x = plane(&f, "x0^2 + x1^2 + x2^2");
        let p = Pencil::new(form(&f, 3, "x1 - 2*x0"), form(&f, 3, "x2 - x0")).unwrap();
        let opts = LefschetzOptions::default();
        let (scanned, bad) = singular_members(&x, &[], &p, &opts).unwrap();
        assert_eq!(scanned, 6 + 20);
        assert_eq!(bad.len(), 2);
        assert!(bad.iter().all(|b| b.param.degree() == 1 && b.section.one_ordinary_point()));
        let report = is_lefschetz(&x, &[], &p, &opts).unwrap();
        assert!(report.is_lefschetz(), "{report:?}");
        // the bad members are exactly the tangent lines among the members
        let table = dual_table(&x, 1, 2, 1 << 20).unwrap();
        for t in params_of_degree(&f, 1).unwrap() {
            let g = p.member(t).unwrap();
            let (_, c) = g.leading().unwrap();
            let g = g.scale(f.inv(c).unwrap());
            let entry = table.iter().find(|e| e.form == g).unwrap();
            assert_eq!(entry.is_tangent(), bad.iter().any(|b| b.param == t));
        }
    }

    #[test]
    fn axis_on_the_conic_fails_first_condition() {
        let f = Ring::prime_field(5).unwrap();
        let x = plane(&f, "x0^2 + x1^2 + x2^2");
        // (1:2:0) lies on the conic
        let p = Pencil::new(form(&f, 3, "x1 - 2*x0"), form(&f, 3, "x2")).unwrap();
        let report = is_lefschetz(&x, &[], &p, &LefschetzOptions::default()).unwrap();
        assert_eq!(report.failed_condition(), Some(1));
    }

    #[test]
    fn proportional_forms_rejected() {
        let f = Ring::prime_field(5).unwrap();
        assert!(Pencil::new(form(&f, 3, "x0 + x1"), form(&f, 3, "2*x0 + 2*x1")).is_err());
        assert!(Pencil::new(form(&f, 3, "x0"), form(&f, 3, "x1^2")).is_err());
    }

    #[test]
    fn nodal_cubic_axis_through_node() {
        let f = Ring::prime_field(5).unwrap();
        let x = plane(&f, "x1^2*x2 - x0^3 - x0^2*x2");
        let node = vec![vec![0, 0, 1]];
        let opts = LefschetzOptions::default();
        let p = Pencil::new(form(&f, 3, "x0"), form(&f, 3, "x1")).unwrap();
        let report = is_lefschetz(&x, &node, &p, &opts).unwrap();
        assert!(!report.axis_avoids_declared);
        assert_eq!(report.failed_condition(), Some(1));
        match find_pencil(&x, &node, 1, 2, 1, &opts).unwrap() {
            PencilSearch::Found { report, .. } => {
                assert!(report.is_lefschetz());
                let through: Vec<&BadMember> = report.sigma.iter().filter(|b| !b.section.declared_on.is_empty()).collect();
                assert_eq!(through.len(), 1);
            }
            PencilSearch::Exhausted { levels } => panic!("no pencil: {levels:?}"),
        }
    }

    #[test]
    fn two_lines_degenerating_from_a_conic() {
        let a = Ring::zmod(3, 4).unwrap();
        let x = plane(&a, "x0*x1 - 9*x2^2");
        let opts = LefschetzOptions::default();
        match find_pencil_dvr(&x, &[vec![0, 0, 1]], 1, 2, 1, &opts).unwrap() {
            DvrPencilSearch::Found { pencil, residue, check, .. } => {
                assert!(residue.is_lefschetz());
                assert!(check.passes());
                assert!(check.reductions.iter().any(|(_, p, _)| p == &vec![0, 0, 1]));
                assert!(is_lefschetz(&plane(&a.residue_field(), "x0*x1"), &[vec![0, 0, 1]], &pencil.specialize().unwrap(), &opts)
                    .unwrap()
                    .is_lefschetz());
            }
            DvrPencilSearch::Exhausted { levels } => panic!("no pencil: {levels:?}"),
        }
    }
}
