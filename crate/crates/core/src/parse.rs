//! Text grammar for polynomials and ring elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*        juxtaposition multiplies
//! factor := atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are the supplied variable names, `pi` (the uniformizer of a
//! DVR), `t` (the uniformizer of `F_q[[t]]/t^k`) and `a` (the generator of an
//! extension field). A word made of single-letter variable names is read as
//! their product, so `xy` means `x*y` when `x` and `y` are variables.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ring::{Ring, RingKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a Ring,
    names: &'a [String],
    line: usize,
    col0: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<u128>().map_err(|_| Error::Parse {
                line,
                column: col0 + col,
                message: format!("integer literal `{s}` is too large"),
            })?;
            out.push((Tok::Num(v), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Parse { line, column: col0 + col, message: format!("unexpected character `{c}`") })
            }
        };
        out.push((t, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, column: self.col0 + self.toks[self.pos].1, message: message.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Num(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.pos += 1;
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.pos += 1;
            match *self.peek() {
                Tok::Num(e) if e <= 1000 => {
                    self.pos += 1;
                    Ok(base.pow(e as u32))
                }
                _ => self.err(format!("expected a small exponent, found {}", self.describe())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.nvars();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.ring, n, reduce_int(self.ring, v)))
            }
            Tok::Ident(s) => {
                let p = self.ident(&s)?;
                self.pos += 1;
                Ok(p)
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err(format!("expected `)`, found {}", self.describe()));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err(format!("expected a term, found {}", self.describe())),
        }
    }

    fn ident(&self, s: &str) -> Result<MultiPoly> {
        let n = self.nvars();
        let r = self.ring;
        if let Some(i) = self.names.iter().position(|x| x == s) {
            return Ok(MultiPoly::var(r, n, i));
        }
        if let Some(c) = named_constant(r, s) {
            return Ok(MultiPoly::constant(r, n, c));
        }
        let letters: Option<Vec<usize>> =
            s.chars().map(|ch| self.names.iter().position(|x| *x == ch.to_string())).collect();
        match letters {
            Some(idx) if s.len() > 1 => {
                let mut p = MultiPoly::constant(r, n, 1);
                for i in idx {
                    p = &p * &MultiPoly::var(r, n, i);
                }
                Ok(p)
            }
            _ => self.err(format!("unknown identifier `{s}`")),
        }
    }
}

fn reduce_int(ring: &Ring, v: u128) -> u64 {
    let modulus = match ring.kind() {
        RingKind::MixedDvr { .. } => ring.size() as u128,
        _ => ring.characteristic_of_residue() as u128,
    };
    ring.from_int((v % modulus) as i64)
}

fn named_constant(ring: &Ring, s: &str) -> Option<u64> {
    match (s, ring.kind()) {
        ("pi", _) => ring.pi().ok(),
        ("t", RingKind::EquiDvr { .. }) => ring.pi().ok(),
        ("a", RingKind::ExtField { p, .. }) => Some(*p),
        ("a", RingKind::EquiDvr { p, m, .. }) if *m > 1 => Some(*p),
        _ => None,
    }
}

/// Parses a polynomial in the given variables.
pub fn parse_poly(text: &str, ring: &Ring, names: &[String]) -> Result<MultiPoly> {
    parse_poly_at(text, ring, names, 1, 0)
}

/// As [`parse_poly`], reporting errors at `line` with columns offset by `col0`.
pub fn parse_poly_at(text: &str, ring: &Ring, names: &[String], line: usize, col0: usize) -> Result<MultiPoly> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser { toks, pos: 0, ring, names, line, col0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {}", p.describe()));
    }
    Ok(e)
}

/// Parses a constant of the ring (`3`, `1 + 2*t`, `pi^2`, `a + 1`).
pub fn parse_elem(text: &str, ring: &Ring) -> Result<u64> {
    let p = parse_poly(text, ring, &[])?;
    Ok(p.constant_term())
}

/// Variable names `prefix0, prefix1, ...` starting at `start`.
pub fn indexed_names(prefix: &str, start: usize, count: usize) -> Vec<String> {
    (start..start + count).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let r = Ring::zmod(3, 3).unwrap();
        let names = indexed_names("x", 0, 3);
        let f = parse_poly("x0*x1 - 3*x2^2", &r, &names).unwrap();
        assert_eq!(f.to_string(), "x0*x1 - 3*x2^2");
        assert_eq!(parse_poly(&f.to_string(), &r, &names).unwrap(), f);
    }

    #[test]
    fn malformed_input_reports_position() {
        let r = Ring::prime_field(3).unwrap();
        let names = indexed_names("x", 0, 1);
        match parse_poly("x0**", &r, &names) {
            Err(Error::Parse { line: 1, column: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x0 + y", &r, &names), Err(Error::Parse { column: 6, .. })));
        assert!(matches!(parse_poly("(x0", &r, &names), Err(Error::Parse { .. })));
    }

    #[test]
    fn juxtaposition_and_constants() {
        let r = Ring::zmod(5, 4).unwrap();
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let f = parse_poly("xy - pi^2", &r, &names).unwrap();
        assert_eq!(f, parse_poly("x*y - 25", &r, &names).unwrap());
        let e = Ring::power_series(3, 1, 3).unwrap();
        assert_eq!(parse_elem("1 + 2t + t^2", &e).unwrap(), 1 + 2 * 3 + 9);
        assert_eq!(parse_elem("-1", &r).unwrap(), 624);
        let f9 = Ring::galois_field(3, 2).unwrap();
        assert_eq!(parse_elem("a^2", &f9).unwrap(), 2);
    }
}
