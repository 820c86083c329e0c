//! Line-oriented scheme descriptions:
//!
//! ```text
//! ring: Zmod(3^3)
//! ambient: P2
//! eq f1 = x0*x1 - 3*x2^2
//! component Y1 = x0
//! oq at (0:0:1) expect case=i order=1
//! proper: true
//! budget points=1000000
//! ```
//!
//! Blank lines and `#` comments are ignored. Components are written over the residue field.

use std::fmt;

use dvrgeom_core::parse::{indexed_names, parse_elem, parse_poly_at};
use dvrgeom_core::poly::MultiPoly;
use dvrgeom_core::quadsing::{classify_point, ClassifyOptions, OqCase, SingularityVerdict};
use dvrgeom_core::ring::Ring;
use dvrgeom_core::smooth::{is_smooth, SchemeModel, SmoothOptions, Space};

use crate::error::{input, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub points: u64,
    pub ext: u32,
    pub jet: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { points: 1_000_000, ext: 2, jet: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredOq {
    /// Residue-field coordinates.
    pub point: Vec<u64>,
    pub case: OqCase,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeFile {
    pub ring: Ring,
    pub space: Space,
    /// Dimension of the ambient space.
    pub dim: usize,
    pub equations: Vec<(String, MultiPoly)>,
    pub components: Vec<(String, MultiPoly)>,
    pub oq_points: Vec<DeclaredOq>,
    pub proper: bool,
    pub budget: Budget,
}

impl SchemeFile {
    pub fn nvars(&self) -> usize {
        match self.space {
            Space::Projective => self.dim + 1,
            Space::Affine => self.dim,
        }
    }

    pub fn names(&self) -> Vec<String> {
        match self.space {
            Space::Projective => indexed_names("x", 0, self.nvars()),
            Space::Affine => indexed_names("x", 1, self.nvars()),
        }
    }

    pub fn model(&self) -> Result<SchemeModel, CliError> {
        let gens = self.equations.iter().map(|(_, f)| f.clone()).collect();
        Ok(SchemeModel::new(&self.ring, self.nvars(), self.space, gens)?)
    }

    pub fn component_models(&self) -> Result<Vec<SchemeModel>, CliError> {
        let field = self.ring.residue_field();
        self.components
            .iter()
            .map(|(_, f)| Ok(SchemeModel::new(&field, self.nvars(), self.space, vec![f.clone()])?))
            .collect()
    }

    pub fn declared_points(&self) -> Vec<Vec<u64>> {
        self.oq_points.iter().map(|d| d.point.clone()).collect()
    }

    pub fn smooth_options(&self) -> SmoothOptions {
        SmoothOptions { ext_bound: self.budget.ext, point_budget: self.budget.points, ..SmoothOptions::default() }
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions { jet_bound: self.budget.jet }
    }

    pub fn parse(text: &str) -> Result<SchemeFile, CliError> {
        let mut ring = None;
        let mut ambient = None;
        let mut equations = Vec::new();
        let mut components = Vec::new();
        let mut oq_lines = Vec::new();
        let mut proper = false;
        let mut budget = Budget::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let offset = content.len() - content.trim_start().len();
            let content = content.trim();
            if let Some(v) = content.strip_prefix("ring:") {
                ring = Some(Ring::parse(v.trim()).map_err(|e| input(line, e.to_string()))?);
            } else if let Some(v) = content.strip_prefix("ambient:") {
                ambient = Some(parse_ambient(v.trim()).ok_or_else(|| input(line, format!("bad ambient `{}`", v.trim())))?);
            } else if let Some(v) = content.strip_prefix("proper:") {
                proper = match v.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(input(line, format!("expected true or false, found `{other}`"))),
                };
            } else if let Some(v) = content.strip_prefix("budget") {
                for kv in v.split_whitespace() {
                    let (k, val) = kv.split_once('=').ok_or_else(|| input(line, format!("bad budget entry `{kv}`")))?;
                    let bad = || input(line, format!("bad budget value `{val}`"));
                    match k {
                        "points" => budget.points = val.parse().map_err(|_| bad())?,
                        "ext" => budget.ext = val.parse().map_err(|_| bad())?,
                        "jet" => budget.jet = val.parse().map_err(|_| bad())?,
                        _ => return Err(input(line, format!("unknown budget key `{k}`"))),
                    }
                }
            } else if let Some(v) = content.strip_prefix("eq ") {
                equations.push((line, offset + 3, v.to_string()));
            } else if let Some(v) = content.strip_prefix("component ") {
                components.push((line, offset + 10, v.to_string()));
            } else if let Some(v) = content.strip_prefix("oq at ") {
                oq_lines.push((line, v.to_string()));
            } else {
                return Err(input(line, format!("unrecognized line `{content}`")));
            }
        }
        let ring = ring.ok_or_else(|| input(0, "missing `ring:` line"))?;
        let (space, dim) = ambient.ok_or_else(|| input(0, "missing `ambient:` line"))?;
        let mut file = SchemeFile {
            ring: ring.clone(),
            space,
            dim,
            equations: Vec::new(),
            components: Vec::new(),
            oq_points: Vec::new(),
            proper,
            budget,
        };
        let names = file.names();
        let field = ring.residue_field();
        for (line, col, text) in equations {
            file.equations.push(named_poly(&text, &ring, &names, line, col)?);
        }
        for (line, col, text) in components {
            file.components.push(named_poly(&text, &field, &names, line, col)?);
        }
        for (line, text) in oq_lines {
            file.oq_points.push(parse_oq(&text, &field, line)?);
        }
        if file.equations.is_empty() {
            return Err(input(0, "no equations"));
        }
        Ok(file)
    }

    /// Re-checks the declared components (smooth) and ordinary quadratic points.
    pub fn verify(&self) -> Result<(), CliError> {
        let opts = self.smooth_options();
        for ((name, _), c) in self.components.iter().zip(self.component_models()?) {
            if !is_smooth(&c, &opts)?.verdict.is_smooth() {
                return Err(CliError::Mismatch(format!("component {name} is not smooth")));
            }
        }
        if self.oq_points.is_empty() {
            return Ok(());
        }
        let gens: Vec<MultiPoly> = self.equations.iter().map(|(_, f)| f.clone()).collect();
        for d in &self.oq_points {
            let label = point_label(&self.ring.residue_field(), &d.point);
            let found = if self.ring.is_dvr() {
                match classify_point(&gens, self.space, &d.point, &self.classify_options())? {
                    SingularityVerdict::OrdinaryQuadratic(m) if m.case == d.case => m.order().ok(),
                    v => return Err(CliError::Mismatch(format!("{label} is {}", v.label()))),
                }
            } else {
                let g = dvrgeom_core::germ::classify_field_point(&gens, self.space, &d.point)?;
                if !g.is_ordinary_quadratic() {
                    return Err(CliError::Mismatch(format!("{label} is {}", g.label())));
                }
                Some(d.order)
            };
            if found != Some(d.order) {
                return Err(CliError::Mismatch(format!("{label} has order {found:?}, expected {}", d.order)));
            }
        }
        Ok(())
    }
}

fn parse_ambient(v: &str) -> Option<(Space, usize)> {
    let (space, n) = match v.split_at(1) {
        ("P", n) => (Space::Projective, n),
        ("A", n) => (Space::Affine, n),
        _ => return None,
    };
    let n: usize = n.parse().ok()?;
    (n >= 1).then_some((space, n))
}

fn named_poly(text: &str, ring: &Ring, names: &[String], line: usize, col: usize) -> Result<(String, MultiPoly), CliError> {
    let (name, body) = text.split_once('=').ok_or_else(|| input(line, "expected `name = polynomial`"))?;
    let name = name.trim();
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(input(line, format!("bad name `{name}`")));
    }
    let f = parse_poly_at(body, ring, names, line, col + name.len() + 2)?;
    Ok((name.to_string(), f))
}

fn parse_oq(text: &str, field: &Ring, line: usize) -> Result<DeclaredOq, CliError> {
    let (pt, rest) = text.split_once("expect").ok_or_else(|| input(line, "expected `oq at (..) expect case=.. order=..`"))?;
    let point = parse_point(pt, field).map_err(|m| input(line, m))?;
    let (mut case, mut order) = (None, None);
    for kv in rest.split_whitespace() {
        match kv.split_once('=') {
            Some(("case", "i")) => case = Some(OqCase::NonDegenerate),
            Some(("case", "ii")) => case = Some(OqCase::DegenerateChar2),
            Some(("order", v)) => order = Some(v.parse().map_err(|_| input(line, format!("bad order `{v}`")))?),
            _ => return Err(input(line, format!("unexpected `{kv}`"))),
        }
    }
    Ok(DeclaredOq {
        point,
        case: case.ok_or_else(|| input(line, "missing case"))?,
        order: order.ok_or_else(|| input(line, "missing order"))?,
    })
}

/// `(a:b:c)` (projective) or `(a,b)` (affine) over the residue field.
pub fn parse_point(text: &str, field: &Ring) -> Result<Vec<u64>, String> {
    let t = text.trim();
    let body = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| format!("bad point `{t}`"))?;
    let sep = if body.contains(':') { ':' } else { ',' };
    body.split(sep).map(|c| parse_elem(c.trim(), field).map_err(|e| e.to_string())).collect()
}

pub fn point_label(field: &Ring, p: &[u64]) -> String {
    let coords: Vec<String> = p.iter().map(|&c| field.display_elem(c)).collect();
    format!("({})", coords.join(":"))
}

impl fmt::Display for SchemeFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let letter = if self.space == Space::Projective { "P" } else { "A" };
        writeln!(f, "ring: {}", self.ring)?;
        writeln!(f, "ambient: {letter}{}", self.dim)?;
        for (name, g) in &self.equations {
            writeln!(f, "eq {name} = {}", g.display_with(&names))?;
        }
        for (name, g) in &self.components {
            writeln!(f, "component {name} = {}", g.display_with(&names))?;
        }
        let field = self.ring.residue_field();
        for d in &self.oq_points {
            let case = if d.case == OqCase::NonDegenerate { "i" } else { "ii" };
            writeln!(f, "oq at {} expect case={case} order={}", point_label(&field, &d.point), d.order)?;
        }
        writeln!(f, "proper: {}", self.proper)?;
        writeln!(f, "budget points={} ext={} jet={}", self.budget.points, self.budget.ext, self.budget.jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E5: &str = "ring: Zmod(3^3)\nambient: P2\neq f1 = x0*x1 - 3*x2^2\ncomponent Y1 = x0\ncomponent Y2 = x1\noq at (0:0:1) expect case=i order=1\nproper: true\nbudget points=1000000\n";

    #[test]
    fn canonical_text_round_trips() {
        let file = SchemeFile::parse(E5).unwrap();
        assert_eq!(file.nvars(), 3);
        assert_eq!(file.components.len(), 2);
        let printed = file.to_string();
        assert_eq!(SchemeFile::parse(&printed).unwrap(), file);
        assert_eq!(SchemeFile::parse(&printed).unwrap().to_string(), printed);
        file.verify().unwrap();
    }

    #[test]
    fn wrong_declarations_fail_loudly() {
        let wrong_order = E5.replace("order=1", "order=2");
        assert!(matches!(SchemeFile::parse(&wrong_order).unwrap().verify(), Err(CliError::Mismatch(_))));
        let singular_component = E5.replace("component Y2 = x1", "component Y2 = x1^2 - x0^2");
        assert!(matches!(SchemeFile::parse(&singular_component).unwrap().verify(), Err(CliError::Mismatch(_))));
    }

    #[test]
    fn errors_name_the_line() {
        let bad = E5.replace("x0*x1 - 3*x2^2", "x0**");
        match SchemeFile::parse(&bad) {
            Err(CliError::Core(dvrgeom_core::error::Error::Parse { line, column, .. })) => {
                assert_eq!(line, 3);
                assert!(column > 8);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(SchemeFile::parse("ring: Zmod(3^3)\nambient: Q2\n"), Err(CliError::Input { line: 2, .. })));
    }
    proptest::proptest! {
        #[test]
        fn printed_files_parse_back(coeffs in proptest::collection::vec(0i64..27, 6), order in 1u32..3, ext in 1u32..4) {
            let monos = ["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"];
            let terms: Vec<String> = coeffs.iter().zip(monos).map(|(c, m)| format!("{c}*{m}")).collect();
            let text = format!(
                "ring: Zmod(3^3)\nambient: P2\neq g = {}\ncomponent Y = x0 + x1\noq at (1:2:0) expect case=ii order={order}\nbudget ext={ext}\n",
                terms.join(" + ")
            );
            let file = SchemeFile::parse(&text).unwrap();
            let printed = file.to_string();
            proptest::prop_assert_eq!(SchemeFile::parse(&printed).unwrap(), file);
        }
    }
}
