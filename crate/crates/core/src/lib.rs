//! Algebraic geometry over finite fields and truncated discrete valuation rings:
//! smoothness certificates, Bertini-type hyperplane search, classification and
//! blow-up resolution of ordinary quadratic singularities, and Lefschetz pencils.

#![no_std]

extern crate alloc;

pub mod error;
pub mod gf;
pub mod ring;
pub mod poly;
pub mod parse;
pub mod enumerate;
pub mod groebner;
pub mod smooth;
pub mod germ;
pub mod quadsing;
pub mod shadow;
pub mod blowup;
pub mod bertini;
pub mod lefschetz;

pub use error::{Error, Result};
pub use poly::{Monomial, MultiPoly};
pub use ring::{Ring, RingElem, RingKind, RingMap, Valuation};
