use std::path::Path;

use dvrgeom_core::bertini::{
    find_good_hyperplane, find_good_hypersurface, generic_fibre_verdict, reverify, HyperplaneSearch, HypersurfaceSearch,
    LevelStats, Sampling, StratifiedModel,
};
use dvrgeom_core::blowup::{format_trace, resolve, BlowupOptions, Outcome};
use dvrgeom_core::germ::{classify_field_point, FieldGerm};
use dvrgeom_core::lefschetz::{
    dual_table, find_pencil, find_pencil_dvr, is_lefschetz, verify_lift, DvrPencilCheck, DvrPencilSearch, LefschetzOptions,
    LefschetzReport, Pencil, PencilSearch,
};
use dvrgeom_core::parse::parse_poly_at;
use dvrgeom_core::poly::MultiPoly;
use dvrgeom_core::quadsing::{classify_point, normalize, LocalModel, SingularityVerdict};
use dvrgeom_core::ring::Ring;
use dvrgeom_core::smooth::{describe, is_smooth, Method, SchemeModel, SmoothOptions, Space, Verdict};

use crate::error::CliError;
use crate::report::{Report, Status};
use crate::scheme_file::{parse_point, point_label, SchemeFile};

pub fn load(path: &Path) -> Result<SchemeFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let file = SchemeFile::parse(&text)?;
    file.verify()?;
    Ok(file)
}

fn echo(r: &mut Report, file: &SchemeFile) {
    let names = file.names();
    let letter = if file.space == Space::Projective { "P" } else { "A" };
    r.field("ring", &file.ring).field("ambient", format!("{letter}{}", file.dim));
    r.list("equations", file.equations.iter().map(|(n, f)| format!("{n} = {}", f.display_with(&names))));
    if !file.components.is_empty() {
        r.list("components", file.components.iter().map(|(n, f)| format!("{n} = {}", f.display_with(&names))));
    }
    if !file.oq_points.is_empty() {
        let field = file.ring.residue_field();
        r.list("declared", file.oq_points.iter().map(|d| point_label(&field, &d.point)));
    }
}

fn special_fibre(x: &SchemeModel) -> Result<SchemeModel, CliError> {
    let field = x.ring.residue_field();
    Ok(SchemeModel::new(&field, x.nvars, x.space, x.gens.iter().map(|g| g.reduce_mod_pi()).collect())?)
}

fn both(file: &SchemeFile) -> SmoothOptions {
    SmoothOptions { method: Method::Both, ..file.smooth_options() }
}

fn cert_text(c: &dvrgeom_core::smooth::SmoothnessCertificate) -> String {
    let pts: Vec<String> = c.points_checked.iter().map(|p| p.to_string()).collect();
    if pts.is_empty() {
        describe(c)
    } else {
        format!("{} points={}", describe(c), pts.join("/"))
    }
}

fn singular_points_text(field: &Ring, v: &Verdict) -> Vec<String> {
    match v {
        Verdict::SingularAt(w) => w.points.iter().map(|(m, p)| format!("degree {m}: {}", ext_point(field, *m, p))).collect(),
        _ => Vec::new(),
    }
}

fn ext_point(field: &Ring, m: u32, p: &[u64]) -> String {
    match m {
        1 => point_label(field, p),
        _ => match field.extend_unramified(m) {
            Ok((f, _)) => point_label(&f, p),
            Err(_) => format!("{p:?}"),
        },
    }
}

pub fn check_smooth(file: &SchemeFile) -> Result<Report, CliError> {
    let mut r = Report::new("check-smooth");
    echo(&mut r, file);
    let x = file.model()?;
    let opts = both(file);
    let field = file.ring.residue_field();
    if file.ring.is_field() {
        let cert = is_smooth(&x, &opts)?;
        r.field("certificate", cert_text(&cert)).field("oracles", "agree");
        r.list("singular points", singular_points_text(&field, &cert.verdict));
        let status = if cert.verdict.is_smooth() { Status::Positive } else { Status::Negative };
        return Ok(r.finish(status));
    }
    let xs = special_fibre(&x)?;
    let cert = is_smooth(&xs, &opts)?;
    r.field("special fibre", cert_text(&cert)).field("oracles", "agree");
    r.list("singular points", singular_points_text(&field, &cert.verdict));
    let generic = generic_fibre_verdict(&x, opts.step_budget)?;
    r.field("generic fibre", generic.label());
    let status = if cert.verdict.is_smooth() && generic.is_smooth() { Status::Positive } else { Status::Negative };
    Ok(r.finish(status))
}

pub fn classify(file: &SchemeFile, point: &str) -> Result<Report, CliError> {
    let mut r = Report::new("classify");
    echo(&mut r, file);
    let field = file.ring.residue_field();
    let p = parse_point(point, &field).map_err(CliError::Usage)?;
    r.field("point", point_label(&field, &p));
    let gens: Vec<MultiPoly> = file.equations.iter().map(|(_, f)| f.clone()).collect();
    if file.ring.is_field() {
        let g = classify_field_point(&gens, file.space, &p)?;
        let status = match &g {
            FieldGerm::NotOrdinary(why) => {
                r.field("verdict", format!("NotOrdinary ({why})"));
                Status::Negative
            }
            FieldGerm::Smooth => {
                r.field("verdict", "Smooth");
                Status::Positive
            }
            FieldGerm::OrdinaryQuadratic { n, .. } => {
                r.field("verdict", format!("OrdinaryQuadratic n={n}"));
                Status::Positive
            }
        };
        return Ok(r.finish(status));
    }
    let v = classify_point(&gens, file.space, &p, &file.classify_options())?;
    r.field("verdict", v.label());
    if let SingularityVerdict::OrdinaryQuadratic(m) = &v {
        r.field("local model", m);
    }
    let status = match v {
        SingularityVerdict::Smooth | SingularityVerdict::OrdinaryQuadratic(_) => Status::Positive,
        SingularityVerdict::NotOrdinary(_) => Status::Negative,
        SingularityVerdict::Undecidable(_) => Status::Undecidable,
    };
    Ok(r.finish(status))
}

pub fn resolve_literal(literal: &str, ring: &str, trace: bool) -> Result<Report, CliError> {
    let mut r = Report::new("resolve");
    let ring = Ring::parse(ring)?;
    let model = LocalModel::parse_literal(literal, &ring)?;
    r.field("ring", &ring).field("model", &model);
    let model = if model.is_normalized() {
        model
    } else {
        let (m, _) = normalize(&model)?;
        r.field("normalized", &m);
        m
    };
    let res = resolve(&model, &BlowupOptions::default())?;
    let n = res.blowups();
    let terminal = match res.steps.last().map(|s| &s.outcome) {
        Some(Outcome::SemiStable) => "SemiStable".to_string(),
        Some(Outcome::Continue(m)) => format!("Continue ({m})"),
        Some(Outcome::Stuck(v)) => format!("Stuck ({})", v.label()),
        None => "none".to_string(),
    };
    let orders: Vec<String> = res.orders().iter().map(|o| o.to_string()).collect();
    r.field("orders", orders.join(" -> "));
    r.field("checks", if res.all_ok() { "pass" } else { "fail" });
    r.field("summary", format!("{n} blow-up{}; terminal {terminal}", if n == 1 { "" } else { "s" }));
    if trace {
        r.list("trace", format_trace(&res).lines());
    }
    let status = if res.all_ok() { Status::Positive } else { Status::Negative };
    Ok(r.finish(status))
}

fn level_lines(levels: &[LevelStats]) -> Vec<String> {
    levels.iter().map(|l| format!("degree {}: {} candidates, {} good", l.degree, l.candidates, l.good)).collect()
}

fn stratified(file: &SchemeFile) -> Result<StratifiedModel, CliError> {
    if file.components.is_empty() {
        return Err(CliError::Usage("this command needs `component` lines".into()));
    }
    Ok(StratifiedModel::new(file.model()?, file.component_models()?, file.proper, &file.smooth_options())?)
}

pub fn find_hyperplane(file: &SchemeFile, ell: u32, max_ext: u32) -> Result<Report, CliError> {
    let mut r = Report::new("find-hyperplane");
    echo(&mut r, file);
    r.field("proper", file.proper).field("ell", ell).field("max ext", max_ext);
    let model = stratified(file)?;
    let opts = file.smooth_options();
    match find_good_hyperplane(&model, ell, max_ext, &opts)? {
        HyperplaneSearch::Found { degree, hyperplane, good_locus, levels } => {
            r.list("levels", level_lines(&levels));
            r.field("degree", degree).field("hyperplane", &hyperplane);
            r.list("good hyperplanes", good_locus.iter());
            let level = if degree == 1 {
                model
            } else {
                model.base_change(&model.ring().extend_unramified(degree)?.1)?
            };
            let check = reverify(&level, &hyperplane, file.budget.ext)?;
            r.field("strata transversal", check.strata_transversal);
            r.field("avoids singular points", check.avoids_singular_points);
            r.field("special fibre of X.H", cert_text(&check.special_fibre));
            r.field("generic fibre of X.H", check.generic_fibre.label());
            r.field("snc", check.snc.is_snc());
            r.field("reverification", if check.passes() { "pass" } else { "fail" });
            Ok(r.finish(if check.passes() { Status::Positive } else { Status::Negative }))
        }
        HyperplaneSearch::Exhausted { levels } => {
            r.list("levels", level_lines(&levels));
            r.field("hyperplane", "none within the extension bound");
            Ok(r.finish(Status::Undecidable))
        }
    }
}

fn lefschetz_opts(file: &SchemeFile, ext_bound: u32) -> LefschetzOptions {
    LefschetzOptions { ext_bound, smooth: file.smooth_options(), ..LefschetzOptions::default() }
}

fn residue_report(r: &mut Report, field: &Ring, rep: &LefschetzReport) {
    let conds: Vec<String> = rep.conditions.iter().map(|&c| if c { "pass" } else { "fail" }.to_string()).collect();
    r.field("conditions", conds.join(" "));
    r.field("axis", describe(&rep.axis)).field("members scanned", rep.scanned);
    r.list(
        "singular members",
        rep.sigma.iter().map(|b| {
            let pts: Vec<String> = b.section.points.iter().map(|(m, p)| ext_point(field, *m, p)).collect();
            let vs: Vec<&str> = b.section.verdicts.iter().map(|v| v.label()).collect();
            format!("t={} points [{}] germs [{}]", b.param.label(field), pts.join(" "), vs.join(" "))
        }),
    );
}

fn lift_report(r: &mut Report, field: &Ring, check: &DvrPencilCheck) {
    r.field("axis generic fibre", check.axis_generic.label());
    let bad = check.members_generic.iter().filter(|(_, v)| !v.is_smooth()).count();
    r.field("generic members", format!("{} checked, {bad} singular", check.members_generic.len()));
    r.list(
        "reductions",
        check.reductions.iter().map(|(t, p, v)| format!("t={} at {}: {}", t.label(field), point_label(field, p), v.label())),
    );
    r.field("lift", if check.passes() { "pass" } else { "fail" });
}

pub fn find_pencil_cmd(file: &SchemeFile, d: u32, ell: u32, max_ext: u32, ext_bound: Option<u32>) -> Result<Report, CliError> {
    let mut r = Report::new("find-pencil");
    echo(&mut r, file);
    let opts = lefschetz_opts(file, ext_bound.unwrap_or(file.budget.ext));
    r.field("d", d).field("ell", ell).field("max ext", max_ext).field("ext bound", opts.ext_bound);
    let x = file.model()?;
    let declared = file.declared_points();
    if file.ring.is_field() {
        return Ok(match find_pencil(&x, &declared, d, ell, max_ext, &opts)? {
            PencilSearch::Found { degree, pencil, report, levels } => {
                r.list("levels", levels.iter().map(|l| format!("degree {}: {} candidates, {} passing", l.degree, l.candidates, l.passing)));
                let field = report.pencil.ring().clone();
                r.field("degree", degree).field("pencil", display_pencil(&pencil, file));
                residue_report(&mut r, &field, &report);
                r.finish(Status::Positive)
            }
            PencilSearch::Exhausted { levels } => {
                r.list("levels", levels.iter().map(|l| format!("degree {}: {} candidates, {} passing", l.degree, l.candidates, l.passing)));
                r.field("pencil", "none within the bounds");
                r.finish(Status::Undecidable)
            }
        });
    }
    let lines = |levels: &[dvrgeom_core::lefschetz::DvrPencilLevel]| -> Vec<String> {
        levels
            .iter()
            .map(|l| format!("degree {}: {} candidates, {} pass on the special fibre, {} lift", l.degree, l.candidates, l.residue_passing, l.lift_passing))
            .collect()
    };
    Ok(match find_pencil_dvr(&x, &declared, d, ell, max_ext, &opts)? {
        DvrPencilSearch::Found { degree, pencil, residue, check, levels } => {
            r.list("levels", lines(&levels));
            let field = pencil.ring().residue_field();
            r.field("degree", degree).field("pencil", display_pencil(&pencil, file));
            residue_report(&mut r, &field, &residue);
            lift_report(&mut r, &field, &check);
            r.finish(Status::Positive)
        }
        DvrPencilSearch::Exhausted { levels } => {
            r.list("levels", lines(&levels));
            r.field("pencil", "none within the bounds");
            r.finish(Status::Undecidable)
        }
    })
}

fn display_pencil(p: &Pencil, file: &SchemeFile) -> String {
    let names = file.names();
    format!("<{}, {}>", p.f0.display_with(&names), p.finf.display_with(&names))
}

/// `<f0, finf>` over the ring of the file.
pub fn parse_pencil(text: &str, file: &SchemeFile) -> Result<Pencil, CliError> {
    let t = text.trim();
    let body = t
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| CliError::Usage(format!("expected `<f0, finf>`, found `{t}`")))?;
    let (a, b) = body.split_once(',').ok_or_else(|| CliError::Usage("expected two forms separated by a comma".into()))?;
    let names = file.names();
    let f0 = parse_poly_at(a, &file.ring, &names, 1, 2)?;
    let finf = parse_poly_at(b, &file.ring, &names, 1, a.len() + 3)?;
    Ok(Pencil::new(f0, finf)?)
}

pub fn verify_pencil(file: &SchemeFile, pencil: &str, ext_bound: Option<u32>) -> Result<Report, CliError> {
    let mut r = Report::new("verify-pencil");
    echo(&mut r, file);
    let pencil = parse_pencil(pencil, file)?;
    let opts = lefschetz_opts(file, ext_bound.unwrap_or(file.budget.ext));
    r.field("pencil", display_pencil(&pencil, file)).field("ext bound", opts.ext_bound);
    let x = file.model()?;
    let declared = file.declared_points();
    let field = file.ring.residue_field();
    if file.ring.is_field() {
        let rep = is_lefschetz(&x, &declared, &pencil, &opts)?;
        residue_report(&mut r, &field, &rep);
        r.field("lefschetz", rep.is_lefschetz());
        return Ok(r.finish(if rep.is_lefschetz() { Status::Positive } else { Status::Negative }));
    }
    let xs = special_fibre(&x)?;
    let rep = is_lefschetz(&xs, &declared, &pencil.specialize()?, &opts)?;
    residue_report(&mut r, &field, &rep);
    if !rep.is_lefschetz() {
        r.field("lefschetz", false);
        return Ok(r.finish(Status::Negative));
    }
    let check = verify_lift(&x, &pencil, &rep, &opts)?;
    lift_report(&mut r, &field, &check);
    r.field("lefschetz", check.passes());
    let undecided = check.reductions.iter().any(|(_, _, v)| matches!(v, SingularityVerdict::Undecidable(_)));
    let status = match (check.passes(), undecided) {
        (true, _) => Status::Positive,
        (false, true) => Status::Undecidable,
        (false, false) => Status::Negative,
    };
    Ok(r.finish(status))
}

pub fn table(file: &SchemeFile, d: u32, ext_bound: Option<u32>) -> Result<Report, CliError> {
    let mut r = Report::new("table");
    echo(&mut r, file);
    let ext = ext_bound.unwrap_or(file.budget.ext);
    r.field("d", d).field("ext bound", ext);
    let x = file.model()?;
    let x = if x.ring.is_field() { x } else { special_fibre(&x)? };
    let rows = dual_table(&x, d, ext, file.budget.points)?;
    let tangent = rows.iter().filter(|e| e.is_tangent()).count();
    let open = rows.iter().filter(|e| e.in_open_stratum()).count();
    r.field("forms", rows.len()).field("tangent", tangent).field("open stratum", open);
    let names = file.names();
    r.list(
        "rows",
        rows.iter().map(|e| {
            let row = e.row();
            let rest = row.split_once(" ; ").map(|(_, rest)| rest).unwrap_or("");
            format!("{} ; {rest}", e.form.display_with(&names))
        }),
    );
    Ok(r.finish(Status::Positive))
}

pub fn find_hypersurface(file: &SchemeFile, d: u32, sample: Option<u64>, seed: Option<u64>) -> Result<Report, CliError> {
    let mut r = Report::new("find-hypersurface");
    echo(&mut r, file);
    let sampling = match (sample, seed) {
        (Some(size), Some(seed)) => Some(Sampling { size, seed }),
        (Some(_), None) => return Err(CliError::Usage("--sample requires --seed".into())),
        (None, _) => None,
    };
    r.field("d", d);
    if let Some(s) = sampling {
        r.field("sample", s.size).field("seed", s.seed);
    }
    let components = if file.components.is_empty() {
        let x = file.model()?;
        vec![if x.ring.is_field() { x } else { special_fibre(&x)? }]
    } else {
        file.component_models()?
    };
    let names = file.names();
    Ok(match find_good_hypersurface(&components, d, file.budget.points, sampling, &file.smooth_options())? {
        HypersurfaceSearch::Found { form, tested } => {
            r.field("tested", tested).field("form", form.display_with(&names));
            r.finish(Status::Positive)
        }
        HypersurfaceSearch::Exhausted { tested } => {
            r.field("tested", tested).field("form", "none");
            r.finish(Status::Undecidable)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> SchemeFile {
        let f = SchemeFile::parse(text).unwrap();
        f.verify().unwrap();
        f
    }

    #[test]
    fn classify_reports_order_two() {
        let f = file("ring: Zmod(3^5)\nambient: P2\neq f = x0*x1 - 9*x2^2\n");
        let r = classify(&f, "(0:0:1)").unwrap();
        assert!(r.to_text().contains("verdict: OrdinaryQuadratic case=i order=2\n"));
        assert_eq!(r.status(), Status::Positive);
    }

    #[test]
    fn pencil_literal_round_trips() {
        let f = file("ring: GF(5)\nambient: P2\neq c = x0^2 + x1^2 + x2^2\n");
        let p = parse_pencil("<x0, x1 + 2*x2>", &f).unwrap();
        assert_eq!(display_pencil(&p, &f), "<x0, x1 + 2*x2>");
        assert!(parse_pencil("<x0, x0>", &f).is_err());
    }
}
