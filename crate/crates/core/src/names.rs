//! Parser for the lattice names produced by the constructors, so that named
//! lattices such as `T(2,2,2)`, `U^2+<-4>`, `E8(-1)` or `Lambda` can be
//! rebuilt from their names alone.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := atom postfix*
//! postfix := '(' int ')' | '^' uint
//! atom    := 'U' | 'U3' | 'E8' | 'E8-' | 'Lambda' | '0' | '<' int '>'
//!          | 'T(' int ',' int ',' int ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};

/// Builds the lattice a name denotes. The returned lattice carries the
/// trimmed input as its name.
pub fn parse(name: &str) -> Result<Lattice> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        s: compact.as_bytes(),
        pos: 0,
        src: name,
    };
    let l = p.expr()?;
    if p.pos != p.s.len() {
        return Err(p.err());
    }
    Ok(l.with_name(name.trim()))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::BadName(self.src.to_string())
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<BigInt>().ok())
            .ok_or_else(|| self.err())
    }

    fn small(&mut self) -> Result<i64> {
        i64::try_from(self.integer()?).map_err(|_| self.err())
    }

    fn expr(&mut self) -> Result<Lattice> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.direct_sum(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Lattice> {
        let mut acc = self.atom()?;
        loop {
            if self.eat(b'(') {
                let m = self.integer()?;
                self.expect(b')')?;
                acc = acc.twist_big(&m)?;
            } else if self.eat(b'^') {
                let e = self.small()?;
                if e < 0 {
                    return Err(self.err());
                }
                acc = acc.power(e as usize);
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom(&mut self) -> Result<Lattice> {
        if self.keyword("Lambda") {
            return Ok(lattice::k3_lattice());
        }
        if self.keyword("U3") {
            return Ok(lattice::torus_lattice());
        }
        if self.keyword("E8-") {
            return lattice::e8(-1);
        }
        if self.keyword("E8") {
            return lattice::e8(1);
        }
        if self.keyword("U") {
            return Ok(lattice::hyperbolic());
        }
        if self.keyword("T(") {
            let k = self.small()?;
            self.expect(b',')?;
            let m = self.small()?;
            self.expect(b',')?;
            let n = self.small()?;
            self.expect(b')')?;
            return lattice::twisted_t(k, m, n);
        }
        if self.eat(b'<') {
            let n = self.integer()?;
            self.expect(b'>')?;
            return Ok(lattice::rank1_big(&n));
        }
        if self.eat(b'0') {
            return Ok(Lattice::zero());
        }
        if self.eat(b'(') {
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        Err(self.err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::*;

    fn same_gram(name: &str, l: &Lattice) {
        assert_eq!(parse(name).unwrap().gram(), l.gram(), "{name}");
    }

    #[test]
    fn constructor_names_round_trip() {
        let cases = vec![
            hyperbolic(),
            e8(1).unwrap(),
            e8(-1).unwrap(),
            rank1(-6),
            torus_lattice(),
            k3_lattice(),
            twisted_t(2, 3, 4).unwrap(),
            u2_plus(5).unwrap(),
            hyperbolic().twist(2).unwrap().power(2).direct_sum(&rank1(-4)),
            u2_plus(2).unwrap().twist(3).unwrap(),
            e8(-1).unwrap().twist(-1).unwrap(),
        ];
        for l in cases {
            same_gram(l.name(), &l);
        }
    }

    #[test]
    fn aliases() {
        same_gram("E8-", &e8(-1).unwrap());
        same_gram("T( 1, 1, 1 )", &u2_plus(1).unwrap());
        assert_eq!(parse("U^3").unwrap().rank(), 6);
    }

    #[test]
    fn garbage_rejected() {
        for bad in ["", "V", "T(1,1)", "<>", "U+", "U(0)", "((U)"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
