//! Local germs at a point: translation to the origin, elimination of auxiliary
//! equations with a unit linear term, and the quadratic-cone test over a field.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::ring::Ring;
use crate::smooth::{is_smooth, SchemeModel, SmoothOptions, Space};

/// Default total-degree bound for jets handled by the local classifiers.
pub const DEFAULT_JET_BOUND: u32 = 4;

/// Drops terms of total degree above `d`.
pub fn truncate(f: &MultiPoly, d: u32) -> MultiPoly {
    f.filter_terms(|m, _| m.degree() <= d)
}

/// Homogeneous linear coefficients `[coeff of x_0, ...]`.
pub fn linear_part(f: &MultiPoly) -> Vec<u64> {
    (0..f.nvars()).map(|i| f.coeff(&Monomial::var(f.nvars(), i))).collect()
}

/// Polar matrix of the degree-2 part: `M_ij = coeff(x_i x_j)` off the diagonal, `2 coeff(x_i^2)` on it.
pub fn polar_matrix(f: &MultiPoly) -> Vec<Vec<u64>> {
    let n = f.nvars();
    let r = f.ring();
    let mut m = vec![vec![0u64; n]; n];
    for (mono, c) in f.terms() {
        if mono.degree() != 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mono.0[i] > 0).collect();
        if idx.len() == 1 {
            m[idx[0]][idx[0]] = r.add(c, c);
        } else {
            m[idx[0]][idx[1]] = c;
            m[idx[1]][idx[0]] = c;
        }
    }
    m
}

/// Solves `M x = b` over a local ring using unit pivots; `None` if the residue matrix is singular.
pub fn solve_unit_pivot(ring: &Ring, m: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().zip(b).map(|(row, &bi)| {
        let mut r = row.clone();
        r.push(bi);
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| ring.is_unit(a[r][col]))?;
        a.swap(col, piv);
        let inv = ring.inv(a[col][col]).ok()?;
        for k in col..=n {
            a[col][k] = ring.mul(a[col][k], inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for k in col..=n {
                    let v = ring.mul(f, a[col][k]);
                    a[r][k] = ring.sub(a[r][k], v);
                }
            }
        }
    }
    Some(a.iter().map(|row| row[n]).collect())
}

/// A basis of the kernel of a matrix over a field.
pub fn kernel(field: &Ring, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        let inv = field.inv(a[rank][col]).expect("nonzero");
        for k in 0..cols {
            a[rank][k] = field.mul(a[rank][k], inv);
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for k in 0..cols {
                    let v = field.mul(f, a[rank][k]);
                    a[r][k] = field.sub(a[r][k], v);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(a[r][fc]);
            }
            v
        })
        .collect()
}

/// Outcome of reducing a complete-intersection germ to a hypersurface germ.
#[derive(Debug, Clone)]
pub enum Reduced {
    /// The residue Jacobian has full rank: the germ is smooth.
    Smooth,
    /// A single equation at the origin of `f.nvars()` variables.
    Hypersurface(MultiPoly),
}

/// Moves the point to the origin of an affine chart.
/// `point` holds residue-field coordinates (projective or affine per `space`).
pub fn localize(eqs: &[MultiPoly], space: Space, point: &[u64]) -> Result<Vec<MultiPoly>> {
    let ring = eqs.first().ok_or_else(|| Error::InvalidInput("no equations".into()))?.ring().clone();
    let field = ring.residue_field();
    let nvars = eqs[0].nvars();
    if point.len() != nvars {
        return Err(Error::ArityMismatch { expected: nvars, found: point.len() });
    }
    let (chart_eqs, coords): (Vec<MultiPoly>, Vec<u64>) = match space {
        Space::Affine => (eqs.to_vec(), point.to_vec()),
        Space::Projective => {
            let i = point.iter().position(|&c| c != 0).ok_or_else(|| Error::InvalidInput("zero projective point".into()))?;
            let inv = field.inv(point[i])?;
            let mut coords: Vec<u64> = point.iter().map(|&c| field.mul(c, inv)).collect();
            coords.remove(i);
            (eqs.iter().map(|g| g.dehomogenize(i)).collect(), coords)
        }
    };
    for g in &chart_eqs {
        if g.reduce_mod_pi().eval(&coords) != 0 {
            return Err(Error::PointNotOnFibre);
        }
    }
    let n = coords.len();
    let images: Vec<MultiPoly> = (0..n)
        .map(|j| &MultiPoly::var(&ring, n, j) + &MultiPoly::constant(&ring, n, ring.lift(coords[j])))
        .collect();
    chart_eqs.iter().map(|g| g.substitute(&images)).collect()
}

/// Reduces translated equations to one hypersurface equation by solving the
/// auxiliary equations (those with independent unit linear parts) for pivot
/// variables, truncating at total degree `jet`.
pub fn reduce_to_hypersurface(eqs: &[MultiPoly], jet: u32) -> Result<Reduced> {
    let ring = eqs[0].ring().clone();
    let field = ring.residue_field();
    let n = eqs[0].nvars();
    // Greedy choice of auxiliary equations with independent residue linear parts.
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut aux: Vec<usize> = Vec::new();
    let mut main: Option<usize> = None;
    for (j, e) in eqs.iter().enumerate() {
        let mut row: Vec<u64> = linear_part(e).iter().map(|&c| ring.residue(c)).collect();
        for (pc, prow) in &echelon {
            if row[*pc] != 0 {
                let f = row[*pc];
                for k in 0..n {
                    row[k] = field.sub(row[k], field.mul(f, prow[k]));
                }
            }
        }
        match row.iter().position(|&c| c != 0) {
            Some(pc) => {
                let inv = field.inv(row[pc])?;
                let row: Vec<u64> = row.iter().map(|&c| field.mul(c, inv)).collect();
                echelon.push((pc, row));
                aux.push(j);
            }
            None => {
                if main.is_some() {
                    return Err(Error::NotHypersurface);
                }
                main = Some(j);
            }
        }
    }
    let Some(main) = main else { return Ok(Reduced::Smooth) };
    if aux.is_empty() {
        return Ok(Reduced::Hypersurface(eqs[main].clone()));
    }
    // Row-reduce the auxiliary equations over the ring so each has its own unit pivot.
    let mut rows: Vec<MultiPoly> = aux.iter().map(|&j| eqs[j].clone()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    for r in 0..rows.len() {
        let lin = linear_part(&rows[r]);
        let pc = (0..n).find(|&c| !pivots.contains(&c) && ring.is_unit(lin[c])).ok_or(Error::NotHypersurface)?;
        let inv = ring.inv(lin[pc])?;
        rows[r] = rows[r].scale(inv);
        for o in 0..rows.len() {
            if o != r {
                let c = linear_part(&rows[o])[pc];
                if c != 0 {
                    rows[o] = &rows[o] - &rows[r].scale(c);
                }
            }
        }
        pivots.push(pc);
    }
    // Fixed-point iteration for the pivot variables; converges in the (m, x)-adic filtration.
    let mut images: Vec<MultiPoly> = (0..n).map(|j| MultiPoly::var(&ring, n, j)).collect();
    for &p in &pivots {
        images[p] = MultiPoly::zero(&ring, n);
    }
    let guard = ring.precision() as usize + jet as usize + 4;
    let mut converged = false;
    for _ in 0..guard {
        let mut next = images.clone();
        for (r, &p) in pivots.iter().enumerate() {
            let rest = &rows[r] - &MultiPoly::var(&ring, n, p);
            next[p] = truncate(&-&rest.substitute(&images)?, jet);
        }
        if next == images {
            converged = true;
            break;
        }
        images = next;
    }
    if !converged {
        return Err(Error::PrecisionExhausted { precision: ring.precision() });
    }
    let f = truncate(&eqs[main].substitute(&images)?, jet);
    let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = MultiPoly::zero(&ring, keep.len());
    for (m, c) in f.terms() {
        let e: Vec<u32> = keep.iter().map(|&k| m.0[k]).collect();
        out.add_term(Monomial(e), c);
    }
    Ok(Reduced::Hypersurface(out))
}

/// Whether the quadratic form defines a nonsingular quadric in projective space.
pub fn is_nondegenerate_quadric(q: &MultiPoly) -> Result<bool> {
    let n = q.nvars();
    if n == 0 {
        return Ok(true);
    }
    if q.is_zero() || !q.is_homogeneous() || q.degree() != Some(2) {
        return Ok(false);
    }
    let x = SchemeModel::projective(q.ring(), n, vec![q.clone()])?;
    Ok(is_smooth(&x, &SmoothOptions::default())?.verdict.is_smooth())
}

/// Classification of a germ over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldGerm {
    Smooth,
    /// The equation starts in degree 2 and its quadratic part defines a nonsingular quadric.
    OrdinaryQuadratic { n: usize, quadric: MultiPoly },
    NotOrdinary(String),
}

impl FieldGerm {
    pub fn is_ordinary_quadratic(&self) -> bool {
        matches!(self, FieldGerm::OrdinaryQuadratic { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            FieldGerm::Smooth => "smooth",
            FieldGerm::OrdinaryQuadratic { .. } => "ordinary-quadratic",
            FieldGerm::NotOrdinary(_) => "not-ordinary",
        }
    }
}

/// Classifies the point of `V(eqs)` over a field: smooth, ordinary quadratic, or neither.
pub fn classify_field_point(eqs: &[MultiPoly], space: Space, point: &[u64]) -> Result<FieldGerm> {
    let ring = eqs.first().ok_or_else(|| Error::InvalidInput("no equations".into()))?.ring();
    if !ring.is_field() {
        return Err(Error::InvalidInput("field classifier needs field coefficients".into()));
    }
    let local = localize(eqs, space, point)?;
    let f = match reduce_to_hypersurface(&local, 2) {
        Ok(Reduced::Smooth) => return Ok(FieldGerm::Smooth),
        Ok(Reduced::Hypersurface(f)) => f,
        Err(Error::NotHypersurface) => return Ok(FieldGerm::NotOrdinary("embedding codimension at least 2".into())),
        Err(e) => return Err(e),
    };
    if linear_part(&f).iter().any(|&c| c != 0) {
        return Ok(FieldGerm::Smooth);
    }
    let q = f.homogeneous_part(2);
    if q.is_zero() {
        return Ok(FieldGerm::NotOrdinary("equation vanishes to order at least 3".into()));
    }
    if is_nondegenerate_quadric(&q)? {
        Ok(FieldGerm::OrdinaryQuadratic { n: f.nvars() - 1, quadric: q })
    } else {
        Ok(FieldGerm::NotOrdinary(format!("quadratic part {q} defines a singular quadric")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn node_of_plane_cubic() {
        let f5 = Ring::prime_field(5).unwrap();
        let f = parse_poly("y^2*z - x^3 - x^2*z", &f5, &names(&["x", "y", "z"])).unwrap();
        let g = classify_field_point(core::slice::from_ref(&f), Space::Projective, &[0, 0, 1]).unwrap();
        assert!(g.is_ordinary_quadratic());
        assert_eq!(classify_field_point(core::slice::from_ref(&f), Space::Projective, &[0, 1, 0]).unwrap(), FieldGerm::Smooth);
        // A line through the node tangent to a branch (y = x) leaves a triple root.
        let tangent = parse_poly("y - x", &f5, &names(&["x", "y", "z"])).unwrap();
        let v = classify_field_point(&[f.clone(), tangent], Space::Projective, &[0, 0, 1]).unwrap();
        assert!(matches!(v, FieldGerm::NotOrdinary(_)));
        let generic = parse_poly("y - 2*x", &f5, &names(&["x", "y", "z"])).unwrap();
        let v = classify_field_point(&[f, generic], Space::Projective, &[0, 0, 1]).unwrap();
        assert!(matches!(v, FieldGerm::OrdinaryQuadratic { n: 0, .. }));
    }

    #[test]
    fn cusp_is_not_ordinary() {
        let f5 = Ring::prime_field(5).unwrap();
        let f = parse_poly("y^2 - x^3", &f5, &names(&["x", "y"])).unwrap();
        assert!(matches!(classify_field_point(&[f], Space::Affine, &[0, 0]).unwrap(), FieldGerm::NotOrdinary(_)));
    }

    #[test]
    fn nonlinear_auxiliary_equation() {
        let f3 = Ring::prime_field(3).unwrap();
        let n = names(&["x", "y", "z"]);
        let f = parse_poly("x^2 + y^2 + z^2", &f3, &n).unwrap();
        // z = x^2 leaves x^2 + y^2 + x^4, still a node in the (x, y)-plane.
        let g = parse_poly("z - x^2", &f3, &n).unwrap();
        let v = classify_field_point(&[f, g], Space::Affine, &[0, 0, 0]).unwrap();
        assert!(matches!(v, FieldGerm::OrdinaryQuadratic { n: 1, .. }));
    }

    #[test]
    fn unit_pivot_solver() {
        let r = Ring::zmod(5, 3).unwrap();
        // [[1, 5], [5, 2]] x = [1, 0]
        let x = solve_unit_pivot(&r, &[vec![1, 5], vec![5, 2]], &[1, 0]).unwrap();
        assert_eq!(r.add(x[0], r.mul(5, x[1])), 1);
        assert_eq!(r.add(r.mul(5, x[0]), r.mul(2, x[1])), 0);
        assert!(solve_unit_pivot(&r, &[vec![5]], &[1]).is_none());
    }
}
