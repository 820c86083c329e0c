//! Equal-characteristic surrogate of an `A`-algebra: `pi` becomes a polynomial
//! variable over the residue field and each coefficient is replaced by its
//! `pi`-adic digit expansion. Gröbner computations over `A` itself are avoided
//! this way; for `F_q[[t]]/(t^k)` the surrogate is exact up to the truncation.

use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{Monomial, MultiPoly};

/// Rewrites `f` over the residue field, sending variable `j` to slot `positions[j]`
/// and `pi` to slot `pi_slot` of an `nvars`-variable ring.
pub fn to_shadow(f: &MultiPoly, nvars: usize, positions: &[usize], pi_slot: usize) -> MultiPoly {
    let ring = f.ring();
    let field = ring.residue_field();
    let mut out = MultiPoly::zero(&field, nvars);
    for (m, c) in f.terms() {
        let mut e = vec![0u32; nvars];
        for (j, &k) in m.0.iter().enumerate() {
            e[positions[j]] += k;
        }
        for (i, d) in ring.pi_digits(c).into_iter().enumerate() {
            if d != 0 {
                let mut ei = e.clone();
                ei[pi_slot] += i as u32;
                out.add_term(Monomial(ei), d);
            }
        }
    }
    out
}

/// Same as [`to_shadow`] with variables kept in place and `pi` appended last.
pub fn to_shadow_appended(f: &MultiPoly) -> MultiPoly {
    let n = f.nvars();
    let positions: Vec<usize> = (0..n).collect();
    to_shadow(f, n + 1, &positions, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{indexed_names, parse_poly};
    use crate::ring::Ring;

    #[test]
    fn digits_become_powers_of_pi() {
        let r = Ring::zmod(5, 3).unwrap();
        let f = parse_poly("x0^2 - 30", &r, &indexed_names("x", 0, 1)).unwrap();
        let s = to_shadow_appended(&f);
        // -30 = 95 = 4*5 + 3*25 mod 125; 4 and 3 print as -1 and -2
        let names = indexed_names("y", 0, 2);
        assert_eq!(s.display_with(&names), "y0^2 - 2*y1^2 - y1");
    }

    #[test]
    fn equal_characteristic_is_faithful() {
        let r = Ring::power_series(2, 1, 4).unwrap();
        let f = parse_poly("x0*x1 + t*x1 + t^3", &r, &indexed_names("x", 0, 2)).unwrap();
        let s = to_shadow(&f, 3, &[1, 2], 0);
        assert_eq!(s.display_with(&indexed_names("z", 0, 3)), "z0^3 + z0*z2 + z1*z2");
    }
}
