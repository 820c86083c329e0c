//! Blow-up of an ordinary quadratic singularity at its maximal ideal
//! `<x_1, ..., x_{n+1}, pi>`, written out chart by chart, with independent checks
//! of every claimed property and the iteration to strict semi-stable reduction.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::enumerate::{enumerate_zeros_over, Mode};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::parse::indexed_names;
use crate::poly::MultiPoly;
use crate::quadsing::{classify_point, ClassifyOptions, LocalModel, OqCase, SingularityVerdict};
use crate::ring::{Ring, RingMap};
use crate::shadow::to_shadow;
use crate::smooth::{
    is_smooth, matrix_rank, singular_locus, singular_points, Method, SchemeModel, SingularWitness,
    SmoothOptions, SmoothnessCertificate, Space, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChartName {
    /// `{U_i != 0}`, 1-based.
    U(usize),
    T,
}

impl fmt::Display for ChartName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartName::U(i) => write!(f, "U_{i}"),
            ChartName::T => f.write_str("T"),
        }
    }
}

/// An affine chart of the blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub name: ChartName,
    /// Variable names: `u_1..u_{n+1}` with `u_i` replaced by `x_i`, then `t` (for `U_i`).
    pub names: Vec<String>,
    pub relations: Vec<MultiPoly>,
    /// Index in `relations` of the equation that is not `x_i t - pi`.
    pub main: usize,
    /// Images of `x_1, ..., x_{n+1}, pi` in chart coordinates.
    pub gluing: Vec<MultiPoly>,
}

impl Chart {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Variable generating the pull-back of the blown-up ideal, `None` for `pi`.
    pub fn generator(&self) -> Option<usize> {
        match self.name {
            ChartName::U(i) => Some(i - 1),
            ChartName::T => None,
        }
    }

    /// Index of `t`, for `U_i` charts.
    pub fn t_index(&self) -> Option<usize> {
        match self.name {
            ChartName::U(_) => Some(self.nvars() - 1),
            ChartName::T => None,
        }
    }

    pub fn generator_label(&self) -> String {
        match self.generator() {
            Some(i) => self.names[i].clone(),
            None => "pi".into(),
        }
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display_with(&self.names)).collect()
    }

    /// Relations reduced modulo `pi`, over the residue field.
    pub fn special_fibre(&self) -> Vec<MultiPoly> {
        self.relations.iter().map(|r| r.reduce_mod_pi()).collect()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {{{}}}", self.name, self.relation_strings().join(", "))
    }
}

/// `a / pi^s` with the low digits dropped; an exact quotient whenever `v(a) >= s`.
fn shift_down(ring: &Ring, a: u64, s: usize) -> u64 {
    let d = ring.pi_digits(a);
    ring.from_pi_digits(&d[s.min(d.len())..])
}

/// The `n + 2` charts of the blow-up of a normalized model.
pub fn blow_up(m: &LocalModel) -> Result<Vec<Chart>> {
    if !m.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let order = m.order()?;
    let r = &m.ring;
    let n = m.n;
    let nv = n + 1;
    let pi = r.pi()?;
    let mut charts = Vec::with_capacity(n + 2);
    for i in 1..=nv {
        let slot = i - 1;
        let mut names = indexed_names("u", 1, nv);
        names[slot] = format!("x{i}");
        names.push("t".into());
        let cv = nv + 1;
        let var = |k: usize| MultiPoly::var(r, cv, k);
        let one = MultiPoly::constant(r, cv, 1);
        let t = var(nv);
        let link = &(&var(slot) * &t) - &MultiPoly::constant(r, cv, pi);
        // u_k for k != i, and 1 at slot i.
        let mut images: Vec<MultiPoly> = (0..nv).map(var).collect();
        images[slot] = one.clone();
        let (relations, main) = match m.case {
            OqCase::NonDegenerate => {
                let q = m.form.substitute(&images)?;
                let coeff = shift_down(r, m.c, 2);
                let main = &q - &(&t * &t).scale(coeff);
                (vec![main, link], 0)
            }
            OqCase::DegenerateChar2 => {
                let coeff = shift_down(r, m.b, 1);
                let p = m.form.substitute(&images[..n])?;
                let main = if i == nv {
                    &(&p + &one) + &t.scale(coeff)
                } else {
                    let un = var(n);
                    &(&p + &(&un * &un)) + &(&t * &un).scale(coeff)
                };
                (vec![link, main], 1)
            }
        };
        let mut gluing: Vec<MultiPoly> = (0..nv).map(|k| if k == slot { var(slot) } else { &var(slot) * &var(k) }).collect();
        gluing.push(&var(slot) * &t);
        charts.push(Chart { name: ChartName::U(i), names, relations, main, gluing });
    }
    let var = |k: usize| MultiPoly::var(r, nv, k);
    let main = match m.case {
        OqCase::NonDegenerate => {
            let coeff = shift_down(r, m.c, 2);
            &m.form - &MultiPoly::constant(r, nv, coeff)
        }
        OqCase::DegenerateChar2 => {
            let coeff = shift_down(r, m.b, 1);
            let positions: Vec<usize> = (0..n).collect();
            let un = var(n);
            &(&m.form.embed_vars(nv, &positions) + &(&un * &un)) + &un.scale(coeff)
        }
    };
    let mut gluing: Vec<MultiPoly> = (0..nv).map(|k| var(k).scale(pi)).collect();
    gluing.push(MultiPoly::constant(r, nv, pi));
    charts.push(Chart { name: ChartName::T, names: indexed_names("u", 1, nv), relations: vec![main], main: 0, gluing });
    debug_assert!(order >= 1);
    Ok(charts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupOptions {
    pub smooth: SmoothOptions,
    pub classify: ClassifyOptions,
}

impl Default for BlowupOptions {
    fn default() -> Self {
        BlowupOptions { smooth: SmoothOptions::both(2), classify: ClassifyOptions::default() }
    }
}

/// Certificates for the special fibre of one chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartReport {
    pub name: ChartName,
    /// Strict transform `{t = 0}` (absent on `T`).
    pub strict_transform: Option<SmoothnessCertificate>,
    /// Exceptional fibre `{x_i = 0}`; on `T` the whole fibre, certified away from the origin.
    pub exceptional: SmoothnessCertificate,
    /// Strict transform meets exceptional fibre (absent on `T`).
    pub intersection: Option<SmoothnessCertificate>,
    /// Special-fibre points where the local shape `pi = x_i t` (or smoothness) was checked.
    pub shape_points: u64,
    /// Points failing the shape check, with the extension degree they live in.
    pub shape_failures: Vec<(u32, Vec<u64>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// `x~` is a regular point: the blow-up has strict semi-stable reduction.
    SemiStable,
    /// `x~` is again ordinary quadratic.
    Continue(LocalModel),
    /// `x~` has an unexpected type.
    Stuck(SingularityVerdict),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupReport {
    pub model: LocalModel,
    pub charts: Vec<Chart>,
    pub chart_reports: Vec<ChartReport>,
    /// Type of the origin of the `T` chart.
    pub x_tilde: SingularityVerdict,
    pub outcome: Outcome,
    /// Residue-field points compared across overlapping charts.
    pub shared_points: u64,
}

impl BlowupReport {
    pub fn strict_transform_smooth(&self) -> bool {
        self.chart_reports.iter().filter_map(|c| c.strict_transform.as_ref()).all(|c| c.verdict.is_smooth())
    }

    pub fn exceptional_smooth_away(&self) -> bool {
        self.chart_reports.iter().all(|c| c.exceptional.verdict.is_smooth())
    }

    pub fn transversal(&self) -> bool {
        self.chart_reports.iter().filter_map(|c| c.intersection.as_ref()).all(|c| c.verdict.is_smooth())
    }

    pub fn semistable_away(&self) -> bool {
        self.chart_reports.iter().all(|c| c.shape_failures.is_empty())
    }

    pub fn order_in(&self) -> u32 {
        self.model.order().unwrap_or(0)
    }

    pub fn order_out(&self) -> Option<u32> {
        match &self.outcome {
            Outcome::Continue(m) => m.order().ok(),
            _ => None,
        }
    }

    /// The next order is `r - 2` (resp. `q - 1`), or the outcome is terminal exactly when that is 0.
    pub fn order_drop_ok(&self) -> bool {
        let step = match self.model.case {
            OqCase::NonDegenerate => 2,
            OqCase::DegenerateChar2 => 1,
        };
        let expected = self.order_in().saturating_sub(step);
        match &self.outcome {
            Outcome::SemiStable => expected == 0,
            Outcome::Continue(m) => m.order().ok() == Some(expected) && expected > 0,
            Outcome::Stuck(_) => false,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.strict_transform_smooth()
            && self.exceptional_smooth_away()
            && self.transversal()
            && self.semistable_away()
            && self.order_drop_ok()
    }
}

fn combine(g: Option<Verdict>, e: Option<(Verdict, Vec<u64>)>, opts: &SmoothOptions) -> Result<SmoothnessCertificate> {
    let (ev, counts) = match e {
        Some((v, c)) => (Some(v), c),
        None => (None, Vec::new()),
    };
    let verdict = match (g, ev) {
        (Some(g), Some(e)) => {
            if g.is_smooth() != e.is_smooth() {
                return Err(Error::OracleDisagreement(format!(
                    "Gröbner verdict {} but enumeration verdict {} away from the origin",
                    g.label(),
                    e.label()
                )));
            }
            match (g, e) {
                (Verdict::SingularAt(mut w), Verdict::SingularAt(we)) => {
                    w.points = we.points;
                    Verdict::SingularAt(w)
                }
                (g, _) => g,
            }
        }
        (Some(g), None) => g,
        (None, Some(e)) => e,
        (None, None) => unreachable!(),
    };
    let ext_bound = if opts.method == Method::Groebner { 0 } else { opts.ext_bound };
    Ok(SmoothnessCertificate { verdict, method: opts.method, ext_bound, points_checked: counts })
}

/// Smoothness of an affine complete intersection outside the origin.
pub fn smooth_away_from_origin(x: &SchemeModel, opts: &SmoothOptions) -> Result<SmoothnessCertificate> {
    let g = if opts.method != Method::Enumeration { Some(groebner_away(x, opts.step_budget)?) } else { None };
    let e = if opts.method != Method::Groebner {
        let mut counts = Vec::new();
        let mut found = None;
        for m in 1..=opts.ext_bound {
            let (count, bad) = singular_points(x, m, opts.point_budget)?;
            counts.push(count);
            let bad: Vec<(u32, Vec<u64>)> = bad.into_iter().filter(|p| p.iter().any(|&c| c != 0)).map(|p| (m, p)).collect();
            if !bad.is_empty() {
                found = Some(bad);
                break;
            }
        }
        let v = match found {
            Some(points) => Verdict::SingularAt(SingularWitness { charts: Vec::new(), points }),
            None => Verdict::Smooth,
        };
        Some((v, counts))
    } else {
        None
    };
    combine(g, e, opts)
}

fn groebner_away(x: &SchemeModel, budget: u64) -> Result<Verdict> {
    let loci = match singular_locus(x) {
        Ok(l) => l,
        Err(Error::NotCompleteIntersection { expected, found }) => return Ok(Verdict::WrongCodimension { expected, found }),
        Err(e) => return Err(e),
    };
    let n = x.nvars;
    let ring = &x.ring;
    let positions: Vec<usize> = (0..n).collect();
    let mut witness = SingularWitness::default();
    for (chart, ideal) in loci {
        if ideal.is_unit()? {
            continue;
        }
        let basis = ideal.groebner()?.to_vec();
        let lifted: Vec<MultiPoly> = basis.iter().map(|f| f.embed_vars(n + 1, &positions)).collect();
        let w = MultiPoly::var(ring, n + 1, n);
        for j in 0..n {
            // The singular locus misses {u_j != 0} iff adding 1 - w u_j gives the unit ideal.
            let rab = &MultiPoly::constant(ring, n + 1, 1) - &(&w * &MultiPoly::var(ring, n + 1, j));
            let mut gens = lifted.clone();
            gens.push(rab);
            if !Ideal::new(ring, n + 1, gens)?.with_budget(budget).is_unit()? {
                witness.charts.push((chart, basis.clone()));
                break;
            }
        }
    }
    Ok(if witness.charts.is_empty() { Verdict::Smooth } else { Verdict::SingularAt(witness) })
}

/// Local shape at a special-fibre point of a chart: on `U_i`, the main relation
/// together with whichever of `x_i`, `t` vanish has independent differentials (so
/// `pi = x_i t` with `x_i, t` part of a parameter system); on `T`, smoothness.
fn shape_ok(chart: &Chart, field: &Ring, grad: &[MultiPoly], p: &[u64]) -> bool {
    let nv = chart.nvars();
    let mut rows = vec![grad.iter().map(|d| d.eval(p)).collect::<Vec<u64>>()];
    if let (Some(g), Some(t)) = (chart.generator(), chart.t_index()) {
        for k in [g, t] {
            if p[k] == 0 {
                let mut e = vec![0u64; nv];
                e[k] = 1;
                rows.push(e);
            }
        }
    }
    let want = rows.len();
    matrix_rank(field, &mut rows) == want
}

fn shape_check(chart: &Chart, opts: &SmoothOptions) -> Result<(u64, Vec<(u32, Vec<u64>)>)> {
    let fibre = chart.special_fibre();
    let base = fibre[0].ring().clone();
    let nv = chart.nvars();
    let mut count = 0;
    let mut bad = Vec::new();
    for m in 1..=opts.ext_bound.max(1) {
        let pts = enumerate_zeros_over(&base, &fibre, nv, Mode::Affine, m, opts.point_budget)?;
        let map = if m == 1 { RingMap::identity(&base) } else { base.extend_unramified(m)?.1 };
        let main = fibre[chart.main].apply_map(&map)?;
        let grad: Vec<MultiPoly> = (0..nv).map(|k| main.partial(k)).collect();
        for p in &pts.points {
            if chart.name == ChartName::T && p.iter().all(|&c| c == 0) {
                continue;
            }
            count += 1;
            if !shape_ok(chart, &pts.field, &grad, p) {
                bad.push((m, p.clone()));
            }
        }
    }
    Ok((count, bad))
}

/// Homogeneous coordinates `[U_1 : ... : U_{n+1} : T]` and the values of `x` at a
/// residue-field point of the special fibre of a chart.
fn to_blowup_point(chart: &Chart, field: &Ring, p: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let nv = chart.nvars();
    match chart.name {
        ChartName::U(i) => {
            let g = i - 1;
            let xi = p[g];
            let mut proj: Vec<u64> = p[..nv - 1].to_vec();
            proj[g] = 1;
            let x: Vec<u64> = proj.iter().map(|&u| field.mul(xi, u)).collect();
            proj.push(p[nv - 1]);
            (proj, x)
        }
        ChartName::T => {
            let mut proj = p.to_vec();
            proj.push(1);
            (proj, vec![0; nv])
        }
    }
}

fn from_blowup_point(chart: &Chart, field: &Ring, proj: &[u64], x: &[u64]) -> Option<Vec<u64>> {
    let nv = proj.len() - 1;
    let pivot = match chart.name {
        ChartName::U(i) => i - 1,
        ChartName::T => nv,
    };
    let inv = field.inv(proj[pivot]).ok()?;
    let mut out: Vec<u64> = proj.iter().map(|&c| field.mul(c, inv)).collect();
    match chart.name {
        ChartName::U(_) => out[pivot] = x[pivot],
        ChartName::T => {
            out.pop();
        }
    }
    Some(out)
}

/// `(on strict transform, on exceptional fibre, local shape ok)` at a chart point.
fn local_label(chart: &Chart, field: &Ring, grad: &[MultiPoly], p: &[u64]) -> (bool, bool, bool) {
    match (chart.generator(), chart.t_index()) {
        (Some(g), Some(t)) => (p[t] == 0, p[g] == 0, shape_ok(chart, field, grad, p)),
        _ => (false, true, p.iter().all(|&c| c == 0) || shape_ok(chart, field, grad, p)),
    }
}

/// Maps every residue-field point of each chart's special fibre into the other
/// charts containing it and compares membership and local labels.
fn check_overlaps(charts: &[Chart]) -> Result<u64> {
    let fibres: Vec<Vec<MultiPoly>> = charts.iter().map(|c| c.special_fibre()).collect();
    let field = fibres[0][0].ring().clone();
    let grads: Vec<Vec<MultiPoly>> = charts
        .iter()
        .zip(&fibres)
        .map(|(c, f)| (0..c.nvars()).map(|k| f[c.main].partial(k)).collect())
        .collect();
    let mut shared = 0;
    for (a, chart) in charts.iter().enumerate() {
        let pts = enumerate_zeros_over(&field, &fibres[a], chart.nvars(), Mode::Affine, 1, u64::MAX)?;
        for p in &pts.points {
            let (proj, x) = to_blowup_point(chart, &field, p);
            let label = local_label(chart, &field, &grads[a], p);
            for (b, other) in charts.iter().enumerate().skip(a + 1) {
                let Some(q) = from_blowup_point(other, &field, &proj, &x) else { continue };
                shared += 1;
                if fibres[b].iter().any(|f| f.eval(&q) != 0) {
                    return Err(Error::ChartInconsistency(format!(
                        "point {p:?} of {} maps to {q:?} off the special fibre of {}",
                        chart.name, other.name
                    )));
                }
                let other_label = local_label(other, &field, &grads[b], &q);
                if other_label != label {
                    return Err(Error::ChartInconsistency(format!(
                        "{} and {} disagree at {p:?} / {q:?}",
                        chart.name, other.name
                    )));
                }
            }
        }
    }
    Ok(shared)
}

fn field_model(chart: &Chart, gens: Vec<MultiPoly>) -> Result<SchemeModel> {
    let ring = gens[0].ring().clone();
    SchemeModel::affine(&ring, chart.nvars(), gens)
}

/// Certifies the special fibre of each chart and classifies `x~`.
pub fn analyze_charts(m: &LocalModel, charts: &[Chart], opts: &BlowupOptions) -> Result<BlowupReport> {
    let mut chart_reports = Vec::with_capacity(charts.len());
    for chart in charts {
        let fibre = chart.special_fibre();
        let main = fibre[chart.main].clone();
        let field = main.ring().clone();
        let nv = chart.nvars();
        let (strict, exceptional, intersection) = match (chart.generator(), chart.t_index()) {
            (Some(g), Some(t)) => {
                let xg = MultiPoly::var(&field, nv, g);
                let tv = MultiPoly::var(&field, nv, t);
                let strict = is_smooth(&field_model(chart, vec![main.clone(), tv.clone()])?, &opts.smooth)?;
                let exc = is_smooth(&field_model(chart, vec![main.clone(), xg.clone()])?, &opts.smooth)?;
                let inter = is_smooth(&field_model(chart, vec![main, xg, tv])?, &opts.smooth)?;
                (Some(strict), exc, Some(inter))
            }
            _ => (None, smooth_away_from_origin(&field_model(chart, vec![main])?, &opts.smooth)?, None),
        };
        let (shape_points, shape_failures) = shape_check(chart, &opts.smooth)?;
        chart_reports.push(ChartReport {
            name: chart.name,
            strict_transform: strict,
            exceptional,
            intersection,
            shape_points,
            shape_failures,
        });
    }
    let shared_points = check_overlaps(charts)?;
    let t = charts.last().ok_or_else(|| Error::InvalidInput("no charts".into()))?;
    let rel = &t.relations[t.main];
    let x_tilde = if m.ring.is_unit(rel.constant_term()) {
        // The T-chart origin is off the special fibre; the fibre there is certified smooth above.
        SingularityVerdict::Smooth
    } else {
        classify_point(core::slice::from_ref(rel), Space::Affine, &vec![0; t.nvars()], &opts.classify)?
    };
    let outcome = match &x_tilde {
        SingularityVerdict::Smooth => Outcome::SemiStable,
        SingularityVerdict::OrdinaryQuadratic(next) => {
            let mut next = next.clone();
            next.provenance = m.provenance.clone();
            Outcome::Continue(next)
        }
        other => Outcome::Stuck(other.clone()),
    };
    Ok(BlowupReport { model: m.clone(), charts: charts.to_vec(), chart_reports, x_tilde, outcome, shared_points })
}

/// Reads every coefficient of a mixed-characteristic model as `pi`-adic digits over
/// `F_p[[t]]/(t^k)`; equal-characteristic models are returned unchanged.
pub fn equal_char_twin(m: &LocalModel) -> Result<LocalModel> {
    let r = &m.ring;
    if !matches!(r.kind(), crate::ring::RingKind::MixedDvr { .. }) {
        return Ok(m.clone());
    }
    let twin = Ring::power_series(r.characteristic_of_residue(), 1, r.precision())?;
    let conv = |a: u64| twin.from_pi_digits(&r.pi_digits(a));
    let form = m.form.map_coeffs(&twin, conv);
    match m.case {
        OqCase::NonDegenerate => LocalModel::nondegenerate(form, conv(m.c)),
        OqCase::DegenerateChar2 => LocalModel::degenerate(form, conv(m.b), conv(m.c)),
    }
}

/// Outcome of the invertibility and isomorphism checks for one chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationCheck {
    pub chart: ChartName,
    pub generator: String,
    /// The pull-back of `<x_1, ..., x_{n+1}, pi>` is generated by `generator`.
    pub principal: bool,
    /// `generator` is a nonzerodivisor (exact colon-ideal test).
    pub nonzerodivisor: bool,
    /// The defining relation of the local model maps into the chart ideal.
    pub forward: bool,
    /// After inverting `generator`, the chart relations map into the local model.
    pub inverse: bool,
    /// Both substitutions compose to the identity after inverting `generator`.
    pub round_trip: bool,
    /// The chart matches the chart of the equal-characteristic twin.
    pub matches_twin: bool,
}

impl PresentationCheck {
    pub fn passes(&self) -> bool {
        self.failed_condition().is_none()
    }

    pub fn failed_condition(&self) -> Option<&'static str> {
        if !self.matches_twin {
            Some("chart differs from its equal-characteristic twin")
        } else if !self.principal {
            Some("pull-back of the blown-up ideal is not principal")
        } else if !self.nonzerodivisor {
            Some("generator is a zero divisor")
        } else if !self.forward || !self.inverse || !self.round_trip {
            Some("chart is not isomorphic to the model after inverting the generator")
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub checks: Vec<PresentationCheck>,
    /// Checks ran on the equal-characteristic twin (mixed characteristic input).
    pub via_twin: bool,
}

impl PresentationReport {
    pub fn passes(&self) -> bool {
        self.checks.len() >= 2 && self.checks.iter().all(|c| c.passes())
    }
}

fn same_shape(a: &Chart, b: &Chart) -> bool {
    let support = |p: &MultiPoly| p.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>();
    a.name == b.name
        && a.relations.len() == b.relations.len()
        && a.relations.iter().zip(&b.relations).all(|(x, y)| support(x) == support(y))
}

/// Checks, in the `pi`-variable shadow, that each chart has an invertible pull-back of
/// the blown-up ideal and agrees with the local model once its generator is inverted.
pub fn verify_presentation(m: &LocalModel, charts: &[Chart]) -> Result<PresentationReport> {
    let twin = equal_char_twin(m)?;
    let via_twin = twin.ring != m.ring;
    let twin_charts = if via_twin { blow_up(&twin)? } else { charts.to_vec() };
    let field = twin.ring.residue_field();
    let nv = twin.nvars();
    let nb = nv + 2;
    let bpos: Vec<usize> = (0..nv).collect();
    let f_b = to_shadow(&twin.realization(), nb, &bpos, nv);
    let bvar = |k: usize| MultiPoly::var(&field, nb, k);
    let mut checks = Vec::new();
    for (given, chart) in charts.iter().zip(&twin_charts) {
        let matches_twin = !via_twin || same_shape(given, chart);
        let cn = chart.nvars();
        let ns = cn + 2;
        let cpos: Vec<usize> = (0..cn).collect();
        let sh = |p: &MultiPoly| to_shadow(p, ns, &cpos, cn);
        let cvar = |k: usize| MultiPoly::var(&field, ns, k);
        let rels: Vec<MultiPoly> = given_or_twin(given, chart, via_twin).iter().map(sh).collect();
        let images: Vec<MultiPoly> = chart.gluing.iter().map(sh).collect();
        let gen = match chart.generator() {
            Some(g) => cvar(g),
            None => cvar(cn),
        };
        let j = Ideal::new(&field, ns, rels.clone())?;
        let with_gen = j.extend(core::slice::from_ref(&gen))?;
        let mut principal = true;
        for im in &images {
            principal &= with_gen.contains(im)?;
        }
        principal &= j.extend(&images)?.contains(&gen)?;
        let nonzerodivisor = j.is_nonzerodivisor(&gen)?;
        // phi: model coordinates (x, pi, w) -> chart coordinates (.., pi, w').
        let mut phi: Vec<MultiPoly> = images[..nv].to_vec();
        phi.push(cvar(cn));
        phi.push(cvar(cn + 1));
        let forward = j.contains(&f_b.substitute(&phi)?)?;
        // psi: chart coordinates -> model coordinates with w = 1/generator.
        let g_b = match chart.generator() {
            Some(g) => bvar(g),
            None => bvar(nv),
        };
        let w = bvar(nv + 1);
        let mut psi: Vec<MultiPoly> = Vec::with_capacity(ns);
        for k in 0..cn {
            psi.push(match (chart.generator(), chart.t_index()) {
                (Some(g), _) if k == g => bvar(g),
                (_, Some(t)) if k == t => &bvar(nv) * &w,
                _ => &bvar(k) * &w,
            });
        }
        psi.push(bvar(nv));
        psi.push(w.clone());
        let one_b = MultiPoly::constant(&field, nb, 1);
        let lb = Ideal::new(&field, nb, vec![f_b.clone(), &(&w * &g_b) - &one_b])?;
        let mut inverse = true;
        for rel in &rels {
            inverse &= lb.contains(&rel.substitute(&psi)?)?;
        }
        let one_c = MultiPoly::constant(&field, ns, 1);
        let lc = j.extend(&[&(&cvar(cn + 1) * &gen) - &one_c])?;
        let mut round_trip = true;
        for k in 0..=nv {
            let back = phi[k].substitute(&psi)?;
            round_trip &= lb.contains(&(&back - &bvar(k)))?;
        }
        for k in 0..=cn {
            let there = psi[k].substitute(&phi)?;
            round_trip &= lc.contains(&(&there - &cvar(k)))?;
        }
        checks.push(PresentationCheck {
            chart: given.name,
            generator: given.generator_label(),
            principal,
            nonzerodivisor,
            forward,
            inverse,
            round_trip,
            matches_twin,
        });
    }
    if charts.len() != twin_charts.len() {
        return Err(Error::ChartInconsistency(format!("expected {} charts, found {}", twin_charts.len(), charts.len())));
    }
    Ok(PresentationReport { checks, via_twin })
}

fn given_or_twin<'a>(given: &'a Chart, twin: &'a Chart, via_twin: bool) -> &'a [MultiPoly] {
    if via_twin {
        &twin.relations
    } else {
        &given.relations
    }
}

/// The chain of blow-ups from a normalized model to strict semi-stable reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub steps: Vec<BlowupReport>,
    pub presentations: Vec<PresentationReport>,
}

impl Resolution {
    pub fn blowups(&self) -> usize {
        self.steps.len()
    }

    /// Orders of the successive singular points, starting with the input.
    pub fn orders(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.steps.iter().map(|s| s.order_in()).collect();
        if let Some(last) = self.steps.last().and_then(|s| s.order_out()) {
            out.push(last);
        }
        out
    }

    pub fn terminated(&self) -> bool {
        matches!(self.steps.last().map(|s| &s.outcome), Some(Outcome::SemiStable))
    }

    pub fn all_ok(&self) -> bool {
        self.terminated()
            && self.steps.iter().all(|s| s.all_ok())
            && self.presentations.iter().all(|p| p.passes())
    }
}

/// Blows up repeatedly at `x~` until it is regular.
pub fn resolve(m: &LocalModel, opts: &BlowupOptions) -> Result<Resolution> {
    if !m.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let order = m.order()? as usize;
    let guard = match m.case {
        OqCase::NonDegenerate => order / 2 + 1,
        OqCase::DegenerateChar2 => order + 1,
    };
    let mut res = Resolution { steps: Vec::new(), presentations: Vec::new() };
    let mut current = m.clone();
    loop {
        if res.steps.len() >= guard {
            return Err(Error::NonTermination { steps: guard });
        }
        let charts = blow_up(&current)?;
        res.presentations.push(verify_presentation(&current, &charts)?);
        let report = analyze_charts(&current, &charts, opts)?;
        let next = match &report.outcome {
            Outcome::Continue(next) => Some(next.clone()),
            _ => None,
        };
        res.steps.push(report);
        match next {
            Some(n) => current = n,
            None => return Ok(res),
        }
    }
}

fn cert_line(c: &SmoothnessCertificate) -> String {
    let method = match c.method {
        Method::Groebner => "groebner",
        Method::Enumeration => "enumeration",
        Method::Both => "groebner+enumeration",
    };
    let pts: Vec<String> = c.points_checked.iter().map(|p| p.to_string()).collect();
    if pts.is_empty() {
        format!("{} [{method}]", c.verdict.label())
    } else {
        format!("{} [{method}, points {}]", c.verdict.label(), pts.join("/"))
    }
}

/// Stable multi-line rendering of a resolution: charts, certificates, order chain.
pub fn format_trace(res: &Resolution) -> String {
    let mut out = String::new();
    for (k, (step, pres)) in res.steps.iter().zip(&res.presentations).enumerate() {
        out.push_str(&format!("step {}: {}\n", k + 1, step.model));
        for (chart, (rep, chk)) in step.charts.iter().zip(step.chart_reports.iter().zip(&pres.checks)) {
            out.push_str(&format!("  chart {}: {{{}}}\n", chart.name, chart.relation_strings().join(", ")));
            if let Some(c) = &rep.strict_transform {
                out.push_str(&format!("    strict transform: {}\n", cert_line(c)));
            }
            let label = if chart.name == ChartName::T { "exceptional fibre off origin" } else { "exceptional fibre" };
            out.push_str(&format!("    {label}: {}\n", cert_line(&rep.exceptional)));
            if let Some(c) = &rep.intersection {
                out.push_str(&format!("    intersection: {}\n", cert_line(c)));
            }
            out.push_str(&format!(
                "    local shape: {} points, {} failures\n",
                rep.shape_points,
                rep.shape_failures.len()
            ));
            let verdict = match chk.failed_condition() {
                None => "pass".to_string(),
                Some(why) => format!("FAIL ({why})"),
            };
            out.push_str(&format!("    presentation: generator {}, {verdict}\n", chk.generator));
        }
        out.push_str(&format!("  x~: {}\n", step.x_tilde.label()));
    }
    let orders: Vec<String> = res.orders().iter().map(|o| o.to_string()).collect();
    out.push_str(&format!("orders: {}\n", orders.join(" -> ")));
    out.push_str(&format!(
        "blow-ups: {}, terminal: {}\n",
        res.blowups(),
        if res.terminated() { "semi-stable" } else { "no" }
    ));
    out
}
