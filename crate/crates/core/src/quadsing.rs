//! Ordinary quadratic singularities over a truncated DVR: normal forms
//! `Q(x) - c` and, in residue characteristic 2, `P(x) + x_{n+1}^2 + b x_{n+1} + c`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::enumerate::{all_points, Mode, DEFAULT_POINT_BUDGET};
use crate::error::{Error, Result};
use crate::germ::{
    is_nondegenerate_quadric, kernel, linear_part, localize, polar_matrix, reduce_to_hypersurface, solve_unit_pivot,
    truncate, Reduced, DEFAULT_JET_BOUND,
};
use crate::parse::{indexed_names, parse_elem, parse_poly};
use crate::poly::{Monomial, MultiPoly};
use crate::ring::{Ring, RingMap, Valuation};
use crate::smooth::{is_transversal, SchemeModel, SmoothOptions, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OqCase {
    /// `Q(x_1..x_{n+1}) - c` with `Q` nondegenerate.
    NonDegenerate,
    /// `P(x_1..x_n) + x_{n+1}^2 + b x_{n+1} + c`, residue characteristic 2, `n` even.
    DegenerateChar2,
}

/// Normal form of an ordinary quadratic singularity over a DVR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalModel {
    pub ring: Ring,
    pub case: OqCase,
    /// Dimension of the special fibre at the point.
    pub n: usize,
    /// `Q` in `n + 1` variables (nondegenerate case) or `P` in `n` variables.
    pub form: MultiPoly,
    /// Linear coefficient of `x_{n+1}` (degenerate case; zero otherwise).
    pub b: u64,
    pub c: u64,
    /// Base changes and coordinate changes applied by [`normalize`].
    pub provenance: Vec<String>,
}

impl LocalModel {
    /// Builds and validates a nondegenerate model `Q - c`.
    pub fn nondegenerate(q: MultiPoly, c: u64) -> Result<LocalModel> {
        let m = LocalModel {
            ring: q.ring().clone(),
            case: OqCase::NonDegenerate,
            n: q.nvars().saturating_sub(1),
            form: q,
            b: 0,
            c,
            provenance: Vec::new(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds and validates a degenerate model `P + x^2 + b x + c`.
    pub fn degenerate(p: MultiPoly, b: u64, c: u64) -> Result<LocalModel> {
        let m = LocalModel {
            ring: p.ring().clone(),
            case: OqCase::DegenerateChar2,
            n: p.nvars(),
            form: p,
            b,
            c,
            provenance: Vec::new(),
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let r = &self.ring;
        if !r.is_dvr() {
            return Err(Error::NotDvr);
        }
        let f = &self.form;
        if !f.is_zero() && (!f.is_homogeneous() || f.degree() != Some(2)) {
            return Err(Error::InvalidInput(format!("{f} is not a quadratic form")));
        }
        match self.case {
            OqCase::NonDegenerate => {
                if self.form.nvars() == 0 {
                    return Err(Error::InvalidInput("quadratic form needs at least one variable".into()));
                }
                if r.is_unit(self.c) {
                    return Err(Error::InvalidInput("c must lie in the maximal ideal".into()));
                }
            }
            OqCase::DegenerateChar2 => {
                if r.characteristic_of_residue() != 2 || !self.n.is_multiple_of(2) {
                    return Err(Error::InvalidInput("degenerate models need residue characteristic 2 and even n".into()));
                }
                if r.is_unit(self.b) || r.is_unit(self.c) {
                    return Err(Error::InvalidInput("b and c must lie in the maximal ideal".into()));
                }
                if !discriminant_visible(r, self.b, self.c) {
                    return Err(Error::InvalidInput("b^2 - 4c vanishes at this precision".into()));
                }
            }
        }
        if !is_nondegenerate_quadric(&self.residue_quadric())? {
            return Err(Error::InvalidInput(format!("residue quadric {} is singular", self.residue_quadric())));
        }
        Ok(())
    }

    /// Number of variables of the realization, `n + 1`.
    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// The defining polynomial in `n + 1` variables.
    pub fn realization(&self) -> MultiPoly {
        let r = &self.ring;
        let nv = self.nvars();
        match self.case {
            OqCase::NonDegenerate => &self.form - &MultiPoly::constant(r, nv, self.c),
            OqCase::DegenerateChar2 => {
                let p = self.form.embed_vars(nv, &(0..self.n).collect::<Vec<_>>());
                let mut f = p;
                f.add_term(Monomial({
                    let mut e = vec![0; nv];
                    e[self.n] = 2;
                    e
                }), 1);
                f.add_term(Monomial::var(nv, self.n), self.b);
                f.add_term(Monomial::one(nv), self.c);
                f
            }
        }
    }

    /// Quadratic part of the realization, reduced to the residue field.
    pub fn residue_quadric(&self) -> MultiPoly {
        self.realization().homogeneous_part(2).reduce_mod_pi()
    }

    /// `r = v(c)` (nondegenerate) or `q = v(b)` (degenerate).
    pub fn order(&self) -> Result<u32> {
        let x = match self.case {
            OqCase::NonDegenerate => self.c,
            OqCase::DegenerateChar2 => self.b,
        };
        match self.ring.valuation(x)? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Top => Err(Error::PrecisionExhausted { precision: self.ring.precision() }),
        }
    }

    /// The unit `eta` with `c = eta pi^r`, or `epsilon` with `b = epsilon pi^q`.
    pub fn unit(&self) -> Result<u64> {
        let x = match self.case {
            OqCase::NonDegenerate => self.c,
            OqCase::DegenerateChar2 => self.b,
        };
        self.ring.split_unit(x).map(|(_, u)| u).ok_or(Error::PrecisionExhausted { precision: self.ring.precision() })
    }

    /// Ready for blow-up: `r` even (nondegenerate) or `c = 0` (degenerate).
    pub fn is_normalized(&self) -> bool {
        match self.case {
            OqCase::NonDegenerate => self.order().map(|r| r % 2 == 0).unwrap_or(false),
            OqCase::DegenerateChar2 => self.c == 0,
        }
    }

    fn var_names(&self) -> Vec<String> {
        indexed_names("x", 1, self.nvars())
    }

    /// Text form, e.g. `oq(case=i, n=1, Q=x1*x2, c=25)`.
    pub fn to_literal(&self) -> String {
        let names = self.var_names();
        let r = &self.ring;
        match self.case {
            OqCase::NonDegenerate => format!(
                "oq(case=i, n={}, Q={}, c={})",
                self.n,
                self.form.display_with(&names),
                r.display_elem(self.c)
            ),
            OqCase::DegenerateChar2 => format!(
                "oq(case=ii, n={}, P={}, b={}, c={})",
                self.n,
                self.form.display_with(&names[..self.n]),
                r.display_elem(self.b),
                r.display_elem(self.c)
            ),
        }
    }

    /// Parses the text form over the given ring.
    pub fn parse_literal(text: &str, ring: &Ring) -> Result<LocalModel> {
        let err = |m: String| Error::Parse { line: 1, column: 1, message: m };
        let t = text.trim();
        let body = t
            .strip_prefix("oq(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err(format!("expected `oq(...)`, found `{t}`")))?;
        let mut case = None;
        let mut n = None;
        let mut form = None;
        let mut b = "0".to_string();
        let mut c = None;
        for part in body.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| err(format!("expected key=value, found `{}`", part.trim())))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            match k {
                "case" => case = Some(v),
                "n" => n = Some(v.parse::<usize>().map_err(|_| err(format!("bad n `{v}`")))?),
                "Q" | "P" => form = Some((k.to_string(), v)),
                "b" => b = v,
                "c" => c = Some(v),
                _ => return Err(err(format!("unknown key `{k}`"))),
            }
        }
        let case = case.ok_or_else(|| err("missing case".into()))?;
        let c = parse_elem(&c.ok_or_else(|| err("missing c".into()))?, ring)?;
        let (key, formtext) = form.ok_or_else(|| err("missing Q or P".into()))?;
        match case.as_str() {
            "i" => {
                if key != "Q" {
                    return Err(err("case i takes Q".into()));
                }
                let n = n.unwrap_or(0);
                let names = single_letter_aliases(indexed_names("x", 1, n + 1));
                let q = parse_poly(&formtext, ring, &names.0)?;
                let q = names.1.rename(&q, n + 1);
                let q = shrink_if_needed(q, n + 1)?;
                LocalModel::nondegenerate(q, c)
            }
            "ii" => {
                if key != "P" {
                    return Err(err("case ii takes P".into()));
                }
                let n = n.ok_or_else(|| err("case ii needs n".into()))?;
                let names = single_letter_aliases(indexed_names("x", 1, n));
                let p = parse_poly(&formtext, ring, &names.0)?;
                let p = names.1.rename(&p, n);
                let b = parse_elem(&b, ring)?;
                LocalModel::degenerate(p, b, c)
            }
            other => Err(err(format!("unknown case `{other}`"))),
        }
    }
}

/// `b^2 - 4c` is nonzero in the DVR. With `c = 0` this only needs `b != 0`, even when
/// `b^2` itself falls below the truncation.
fn discriminant_visible(r: &Ring, b: u64, c: u64) -> bool {
    if c == 0 {
        return b != 0;
    }
    r.sub(r.mul(b, b), r.mul(r.from_int(4), c)) != 0
}

/// Accepts `x, y, z, w` as aliases for `x1..x4` in literals.
struct Aliases {
    count: usize,
}

impl Aliases {
    fn rename(&self, p: &MultiPoly, n: usize) -> MultiPoly {
        // Alias variables occupy slots n..n+4 and map onto x1..x4.
        let mut out = MultiPoly::zero(p.ring(), n);
        for (m, c) in p.terms() {
            let mut e = m.0[..n].to_vec();
            for a in 0..self.count {
                let k = m.0[n + a];
                if k > 0 && a < n {
                    e[a] += k;
                }
            }
            out.add_term(Monomial(e), c);
        }
        out
    }
}

fn single_letter_aliases(mut names: Vec<String>) -> (Vec<String>, Aliases) {
    let letters = ["x", "y", "z", "w"];
    for l in letters {
        names.push(l.to_string());
    }
    (names, Aliases { count: letters.len() })
}

fn shrink_if_needed(q: MultiPoly, nv: usize) -> Result<MultiPoly> {
    if q.nvars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: q.nvars() });
    }
    Ok(q)
}

impl fmt::Display for LocalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularityVerdict {
    Smooth,
    OrdinaryQuadratic(LocalModel),
    NotOrdinary(String),
    Undecidable(String),
}

impl SingularityVerdict {
    pub fn label(&self) -> String {
        match self {
            SingularityVerdict::Smooth => "Smooth".into(),
            SingularityVerdict::OrdinaryQuadratic(m) => {
                let case = match m.case {
                    OqCase::NonDegenerate => "i",
                    OqCase::DegenerateChar2 => "ii",
                };
                match m.order() {
                    Ok(r) => format!("OrdinaryQuadratic case={case} order={r}"),
                    Err(_) => format!("OrdinaryQuadratic case={case} order=top"),
                }
            }
            SingularityVerdict::NotOrdinary(why) => format!("NotOrdinary ({why})"),
            SingularityVerdict::Undecidable(why) => format!("Undecidable ({why})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub jet_bound: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { jet_bound: DEFAULT_JET_BOUND }
    }
}

/// Classifies the point `point` (residue coordinates) of `V(eqs)` over a DVR.
pub fn classify_point(eqs: &[MultiPoly], space: Space, point: &[u64], opts: &ClassifyOptions) -> Result<SingularityVerdict> {
    let ring = eqs.first().ok_or_else(|| Error::InvalidInput("no equations".into()))?.ring().clone();
    if !ring.is_dvr() {
        return Err(Error::NotDvr);
    }
    if eqs.iter().any(|e| e.degree().unwrap_or(0) > opts.jet_bound) {
        return Ok(SingularityVerdict::Undecidable(format!("equations exceed the jet bound {}", opts.jet_bound)));
    }
    let local = localize(eqs, space, point)?;
    let f = match reduce_to_hypersurface(&local, opts.jet_bound) {
        Ok(Reduced::Smooth) => return Ok(SingularityVerdict::Smooth),
        Ok(Reduced::Hypersurface(f)) => f,
        Err(Error::NotHypersurface) => return Ok(SingularityVerdict::NotOrdinary("embedding codimension at least 2".into())),
        Err(e) => return Err(e),
    };
    classify_at_origin(&f, opts)
}

/// Classifies the origin of `V(f)`, where `f(0)` lies in the maximal ideal.
pub fn classify_at_origin(f: &MultiPoly, opts: &ClassifyOptions) -> Result<SingularityVerdict> {
    let ring = f.ring().clone();
    let field = ring.residue_field();
    if ring.is_unit(f.constant_term()) {
        return Err(Error::PointNotOnFibre);
    }
    if linear_part(f).iter().any(|&c| ring.is_unit(c)) {
        return Ok(SingularityVerdict::Smooth);
    }
    let nv = f.nvars();
    let polar = polar_matrix(f);
    let polar_res: Vec<Vec<u64>> = polar.iter().map(|row| row.iter().map(|&c| ring.residue(c)).collect()).collect();
    let mut tmp = polar_res.clone();
    let full_rank = crate::smooth::matrix_rank(&field, &mut tmp) == nv;
    if full_rank {
        return classify_nondegenerate(f, opts);
    }
    let q2 = f.homogeneous_part(2).reduce_mod_pi();
    if field.characteristic_of_residue() == 2 && nv % 2 == 1 && is_nondegenerate_quadric(&q2)? {
        let ker = kernel(&field, &polar_res);
        if ker.len() != 1 {
            return Ok(SingularityVerdict::NotOrdinary("polar form has a radical of dimension > 1".into()));
        }
        return classify_degenerate(f, &ker[0], opts);
    }
    if q2.is_zero() {
        return Ok(SingularityVerdict::NotOrdinary("no quadratic term in the residue equation".into()));
    }
    Ok(SingularityVerdict::NotOrdinary(format!("residue quadratic part {q2} is degenerate")))
}

fn classify_nondegenerate(f: &MultiPoly, _opts: &ClassifyOptions) -> Result<SingularityVerdict> {
    let ring = f.ring().clone();
    let nv = f.nvars();
    let grad: Vec<MultiPoly> = (0..nv).map(|i| f.partial(i)).collect();
    let hess: Vec<Vec<MultiPoly>> = grad.iter().map(|g| (0..nv).map(|j| g.partial(j)).collect()).collect();
    // Newton iteration for the critical point; the Hessian is invertible at every step.
    let mut a = vec![0u64; nv];
    let guard = 2 * ring.precision() as usize + 4;
    let mut found = false;
    for _ in 0..guard {
        let g: Vec<u64> = grad.iter().map(|p| p.eval(&a)).collect();
        if g.iter().all(|&x| x == 0) {
            found = true;
            break;
        }
        let h: Vec<Vec<u64>> = hess.iter().map(|row| row.iter().map(|p| p.eval(&a)).collect()).collect();
        let delta = solve_unit_pivot(&ring, &h, &g).ok_or_else(|| Error::InvalidInput("Hessian not invertible".into()))?;
        for i in 0..nv {
            a[i] = ring.sub(a[i], delta[i]);
        }
    }
    if !found {
        return Ok(SingularityVerdict::Undecidable("critical point iteration did not stabilize".into()));
    }
    let images: Vec<MultiPoly> =
        (0..nv).map(|j| &MultiPoly::var(&ring, nv, j) + &MultiPoly::constant(&ring, nv, a[j])).collect();
    let g = f.substitute(&images)?;
    let c = ring.neg(g.constant_term());
    if c == 0 {
        return Ok(SingularityVerdict::Undecidable(format!(
            "constant term vanishes at precision {}",
            ring.precision()
        )));
    }
    let q = g.homogeneous_part(2);
    Ok(SingularityVerdict::OrdinaryQuadratic(LocalModel::nondegenerate(q, c)?))
}

fn classify_degenerate(f: &MultiPoly, w: &[u64], opts: &ClassifyOptions) -> Result<SingularityVerdict> {
    let ring = f.ring().clone();
    let nv = f.nvars();
    let p = w.iter().position(|&c| c != 0).expect("nonzero kernel vector");
    let field = ring.residue_field();
    let inv = field.inv(w[p])?;
    let w: Vec<u64> = w.iter().map(|&c| field.mul(c, inv)).collect();
    // New coordinates (y_1..y_{n}, z): x_j = y_j + w_j z for j != p, x_p = z.
    let others: Vec<usize> = (0..nv).filter(|&j| j != p).collect();
    let z = MultiPoly::var(&ring, nv, nv - 1);
    let mut images = vec![MultiPoly::zero(&ring, nv); nv];
    for (k, &j) in others.iter().enumerate() {
        images[j] = &MultiPoly::var(&ring, nv, k) + &z.scale(ring.lift(w[j]));
    }
    images[p] = z.clone();
    let g = f.substitute(&images)?;
    let n = nv - 1;
    let jet = opts.jet_bound;
    // Chord iteration for y = phi(z) solving the y-gradient, as polynomials in z.
    let h0: Vec<Vec<u64>> = {
        let pm = polar_matrix(&g);
        (0..n).map(|i| (0..n).map(|j| pm[i][j]).collect()).collect()
    };
    let zvar = MultiPoly::var(&ring, 1, 0);
    let mut phi: Vec<MultiPoly> = vec![MultiPoly::zero(&ring, 1); n];
    let grad: Vec<MultiPoly> = (0..n).map(|i| g.partial(i)).collect();
    let guard = ring.precision() as usize + jet as usize + 4;
    let mut stable = false;
    for _ in 0..guard {
        let mut subst = phi.clone();
        subst.push(zvar.clone());
        let gv: Vec<MultiPoly> = grad.iter().map(|d| d.substitute(&subst).map(|e| truncate(&e, jet))).collect::<Result<_>>()?;
        // Solve h0 * delta = gv coefficientwise in z.
        let mut next = phi.clone();
        for d in 0..=jet {
            let mono = Monomial(vec![d]);
            let rhs: Vec<u64> = gv.iter().map(|e| e.coeff(&mono)).collect();
            if rhs.iter().all(|&x| x == 0) {
                continue;
            }
            let delta = solve_unit_pivot(&ring, &h0, &rhs).ok_or_else(|| Error::InvalidInput("degenerate P block".into()))?;
            for i in 0..n {
                next[i].add_term(mono.clone(), ring.neg(delta[i]));
            }
        }
        if next == phi {
            stable = true;
            break;
        }
        phi = next;
    }
    if !stable {
        return Ok(SingularityVerdict::Undecidable("splitting iteration did not stabilize".into()));
    }
    let mut subst = phi.clone();
    subst.push(zvar);
    let gz = truncate(&g.substitute(&subst)?, jet);
    if gz.terms().any(|(m, c)| m.0[0] >= 3 && c != 0) {
        return Ok(SingularityVerdict::Undecidable("terms of degree >= 3 in the isolated variable".into()));
    }
    let lambda = gz.coeff(&Monomial(vec![2]));
    let b = gz.coeff(&Monomial(vec![1]));
    let c = gz.constant_term();
    let linv = ring.inv(lambda)?;
    let pform = g.filter_terms(|m, _| m.degree() == 2 && m.0[nv - 1] == 0).dehomogenize_last().scale(linv);
    let (b, c) = (ring.mul(b, linv), ring.mul(c, linv));
    if !discriminant_visible(&ring, b, c) {
        return Ok(SingularityVerdict::Undecidable(format!(
            "b^2 - 4c vanishes at precision {}",
            ring.precision()
        )));
    }
    Ok(SingularityVerdict::OrdinaryQuadratic(LocalModel::degenerate(pform, b, c)?))
}

impl MultiPoly {
    /// Removes the last variable, which must not occur.
    fn dehomogenize_last(&self) -> MultiPoly {
        self.dehomogenize(self.nvars() - 1)
    }
}

/// Makes a model ready for blow-up: a ramified quadratic base change when the
/// nondegenerate order is odd, a root shift killing `c` in the degenerate case.
pub fn normalize(m: &LocalModel) -> Result<(LocalModel, Option<RingMap>)> {
    match m.case {
        OqCase::NonDegenerate => {
            let r = m.order()?;
            if r % 2 == 0 {
                return Ok((m.clone(), None));
            }
            let (target, map) = m.ring.extend_ramified_sqrt()?;
            let q = m.form.apply_map(&map)?;
            let mut out = LocalModel::nondegenerate(q, map.apply(m.c))?;
            out.provenance = m.provenance.clone();
            out.provenance.push(format!("ramified base change to {target} (pi = s^2)"));
            Ok((out, Some(map)))
        }
        OqCase::DegenerateChar2 => {
            if m.c == 0 {
                return Ok((m.clone(), None));
            }
            let r = &m.ring;
            if r.size() > DEFAULT_POINT_BUDGET {
                return Err(Error::BudgetExceeded { budget: DEFAULT_POINT_BUDGET, needed: r.size() });
            }
            let root = r
                .elements()
                .find(|&z| r.add(r.add(r.mul(z, z), r.mul(m.b, z)), m.c) == 0)
                .ok_or_else(|| Error::Unsupported("x^2 + bx + c has no root at this precision".into()))?;
            let b = r.add(m.b, r.add(root, root));
            let mut out = LocalModel::degenerate(m.form.clone(), b, 0)?;
            out.provenance = m.provenance.clone();
            out.provenance.push(format!("shift x{} -> x{} + {}", m.n + 1, m.n + 1, r.display_elem(root)));
            Ok((out, None))
        }
    }
}

/// Sufficient condition for the section `{g = 0}` through the singular point to keep it
/// ordinary quadratic: `g` has nonzero linear residue and `{g = 0}` is transversal to
/// the residue quadric in projective space.
pub fn hyperplane_preserves_oq(m: &LocalModel, g: &MultiPoly) -> Result<bool> {
    if g.nvars() != m.nvars() {
        return Err(Error::ArityMismatch { expected: m.nvars(), found: g.nvars() });
    }
    let gbar = if g.ring().is_field() { g.homogeneous_part(1) } else { g.homogeneous_part(1).reduce_mod_pi() };
    if gbar.is_zero() {
        return Ok(false);
    }
    let quadric = m.residue_quadric();
    if gbar.ring() != quadric.ring() {
        return Err(Error::RingMismatch);
    }
    let q = SchemeModel::projective(quadric.ring(), m.nvars(), vec![quadric.clone()])?;
    let h = SchemeModel::projective(quadric.ring(), m.nvars(), vec![gbar])?;
    Ok(is_transversal(&q, &h, &SmoothOptions::default())?.verdict.is_smooth())
}

/// All residue hyperplanes through the point (up to scalar) that preserve the singularity type.
pub fn good_hyperplane_locus_at_singularity(m: &LocalModel) -> Result<Vec<Vec<u64>>> {
    let field = m.ring.residue_field();
    let mut good = Vec::new();
    for coeffs in all_points(&field, m.nvars(), Mode::Projective, DEFAULT_POINT_BUDGET)? {
        let g = MultiPoly::linear(&field, &coeffs);
        if hyperplane_preserves_oq(m, &g)? {
            good.push(coeffs);
        }
    }
    Ok(good)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(n: usize) -> Vec<String> {
        indexed_names("x", 0, n)
    }

    #[test]
    fn nodal_model_order_two() {
        let r = Ring::zmod(3, 5).unwrap();
        let f = parse_poly("x0*x1 - 9*x2^2", &r, &xs(3)).unwrap();
        let v = classify_point(&[f], Space::Projective, &[0, 0, 1], &ClassifyOptions::default()).unwrap();
        match v {
            SingularityVerdict::OrdinaryQuadratic(m) => {
                assert_eq!(m.case, OqCase::NonDegenerate);
                assert_eq!(m.c, 9);
                assert_eq!(m.order().unwrap(), 2);
                assert_eq!(m.to_literal(), "oq(case=i, n=1, Q=x1*x2, c=9)");
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn diagonal_quadric_order_one() {
        let r = Ring::zmod(5, 3).unwrap();
        let f = parse_poly("x0^2 + x1^2 + x2^2 - 5", &r, &xs(3)).unwrap();
        match classify_point(&[f], Space::Affine, &[0, 0, 0], &ClassifyOptions::default()).unwrap() {
            SingularityVerdict::OrdinaryQuadratic(m) => {
                assert_eq!(m.order().unwrap(), 1);
                assert!(!m.is_normalized());
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn smooth_point() {
        let r = Ring::zmod(5, 2).unwrap();
        let f = parse_poly("x0 - 5*x1^2", &r, &xs(2)).unwrap();
        assert_eq!(classify_point(&[f], Space::Affine, &[0, 0], &ClassifyOptions::default()).unwrap(), SingularityVerdict::Smooth);
    }

    #[test]
    fn point_off_fibre() {
        let r = Ring::zmod(5, 2).unwrap();
        let f = parse_poly("x0*x1 - 5", &r, &xs(2)).unwrap();
        assert_eq!(classify_point(&[f], Space::Affine, &[1, 1], &ClassifyOptions::default()), Err(Error::PointNotOnFibre));
    }

    #[test]
    fn orders_and_precision() {
        let r = Ring::power_series(2, 1, 4).unwrap();
        let p = parse_poly("x1*x2", &r, &indexed_names("x", 1, 2)).unwrap();
        let m = LocalModel::degenerate(p, r.pi().unwrap(), 0).unwrap();
        assert_eq!(m.order().unwrap(), 1);
        let z = Ring::zmod(3, 3).unwrap();
        let q = parse_poly("x1*x2", &z, &indexed_names("x", 1, 2)).unwrap();
        let m = LocalModel::nondegenerate(q, z.from_int(27)).unwrap();
        assert_eq!(m.order(), Err(Error::PrecisionExhausted { precision: 3 }));
    }

    #[test]
    fn normalization() {
        let r = Ring::power_series(3, 1, 3).unwrap();
        let q = parse_poly("x1*x2", &r, &indexed_names("x", 1, 2)).unwrap();
        let m = LocalModel::nondegenerate(q.clone(), r.pi().unwrap()).unwrap();
        let (n, map) = normalize(&m).unwrap();
        assert!(map.is_some());
        assert_eq!(n.order().unwrap(), 2);
        let even = LocalModel::nondegenerate(q, r.pow(r.pi().unwrap(), 2)).unwrap();
        assert_eq!(normalize(&even).unwrap().0, even);

        let r2 = Ring::power_series(2, 1, 4).unwrap();
        let t = r2.pi().unwrap();
        let p = parse_poly("x1*x2", &r2, &indexed_names("x", 1, 2)).unwrap();
        let m = LocalModel::degenerate(p, t, r2.pow(t, 3)).unwrap();
        let (n, _) = normalize(&m).unwrap();
        assert_eq!(n.c, 0);
        assert_eq!(n.order().unwrap(), 1);
        let z = Ring::zmod(5, 3).unwrap();
        let q = parse_poly("x1*x2", &z, &indexed_names("x", 1, 2)).unwrap();
        assert!(matches!(normalize(&LocalModel::nondegenerate(q, 5).unwrap()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn degenerate_classification_round_trip() {
        let r = Ring::power_series(2, 1, 4).unwrap();
        let t = r.pi().unwrap();
        let p = parse_poly("x1*x2", &r, &indexed_names("x", 1, 2)).unwrap();
        let m = LocalModel::degenerate(p, t, 0).unwrap();
        let v = classify_point(&[m.realization()], Space::Affine, &[0, 0, 0], &ClassifyOptions::default()).unwrap();
        assert_eq!(v, SingularityVerdict::OrdinaryQuadratic(m.clone()));
        let lit = m.to_literal();
        assert_eq!(lit, "oq(case=ii, n=2, P=x1*x2, b=t, c=0)");
        assert_eq!(LocalModel::parse_literal(&lit, &r).unwrap(), m);
    }

    #[test]
    fn literal_with_letter_variables() {
        let r = Ring::zmod(5, 4).unwrap();
        let m = LocalModel::parse_literal("oq(case=i,n=1,Q=xy,c=pi^2)", &r).unwrap();
        assert_eq!(m.to_literal(), "oq(case=i, n=1, Q=x1*x2, c=25)");
        assert_eq!(m.unit().unwrap(), 1);
    }

    #[test]
    fn preserves_oq_on_diagonal_conic() {
        let f5 = Ring::zmod(5, 2).unwrap();
        let names = indexed_names("x", 1, 3);
        let q = parse_poly("x1^2 + x2^2 + x3^2", &f5, &names).unwrap();
        let m = LocalModel::nondegenerate(q, 5).unwrap();
        let f = Ring::prime_field(5).unwrap();
        assert!(hyperplane_preserves_oq(&m, &parse_poly("x3", &f, &names).unwrap()).unwrap());
        assert!(!hyperplane_preserves_oq(&m, &parse_poly("x1 + 2*x2", &f, &names).unwrap()).unwrap());
        assert!(!hyperplane_preserves_oq(&m, &MultiPoly::zero(&f, 3)).unwrap());
        assert_eq!(good_hyperplane_locus_at_singularity(&m).unwrap().len(), 25);
    }
}
