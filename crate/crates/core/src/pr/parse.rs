use crate::pr::term::{PrTerm, WellFormedError};
use crate::Nat;

/// Parse failure, with the byte offset the parser had reached.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {at}: {message}")]
    Syntax { at: usize, message: String },
    #[error("arity violation at byte {at}: {source}")]
    Arity {
        at: usize,
        #[source]
        source: WellFormedError,
    },
    #[error("term nesting exceeds depth {limit}")]
    TooDeep { limit: usize },
}

const MAX_DEPTH: usize = 4096;

/// Parses the canonical syntax `Z | S | P[i,n] | C[outer; inner; ...] | R[base; step]`.
/// Whitespace between tokens is ignored everywhere.
pub fn parse(input: &str) -> Result<PrTerm, ParseError> {
    let mut p = Parser { bytes: input.as_bytes(), pos: 0 };
    let term = p.term(0)?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.syntax("trailing input after term"));
    }
    Ok(term)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax { at: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.syntax(&format!("expected '{}', found '{}'", byte as char, b as char))),
            None => Err(self.syntax(&format!("expected '{}', found end of input", byte as char))),
        }
    }

    fn nat(&mut self) -> Result<Nat, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit-only string parses as Nat"))
    }

    fn term(&mut self, depth: usize) -> Result<PrTerm, ParseError> {
        if depth >= MAX_DEPTH {
            return Err(ParseError::TooDeep { limit: MAX_DEPTH });
        }
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'Z') => {
                self.pos += 1;
                Ok(PrTerm::zero())
            }
            Some(b'S') => {
                self.pos += 1;
                Ok(PrTerm::succ())
            }
            Some(b'P') => {
                self.pos += 1;
                self.expect(b'[')?;
                let index = self.nat()?;
                self.expect(b',')?;
                let of = self.nat()?;
                self.expect(b']')?;
                PrTerm::proj(index, of).map_err(|source| ParseError::Arity { at, source })
            }
            Some(b'C') => {
                self.pos += 1;
                self.expect(b'[')?;
                let outer = self.term(depth + 1)?;
                let mut inners = Vec::new();
                while self.peek() == Some(b';') {
                    self.pos += 1;
                    inners.push(self.term(depth + 1)?);
                }
                self.expect(b']')?;
                PrTerm::comp(outer, inners).map_err(|source| ParseError::Arity { at, source })
            }
            Some(b'R') => {
                self.pos += 1;
                self.expect(b'[')?;
                let base = self.term(depth + 1)?;
                self.expect(b';')?;
                let step = self.term(depth + 1)?;
                self.expect(b']')?;
                PrTerm::prim_rec(base, step).map_err(|source| ParseError::Arity { at, source })
            }
            Some(b) => Err(self.syntax(&format!("expected a term, found '{}'", b as char))),
            None => Err(self.syntax("expected a term, found end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use crate::pr::term::TermKind;

    #[test]
    fn atoms() {
        assert_eq!(parse("Z").unwrap(), PrTerm::zero());
        assert_eq!(parse("  S  ").unwrap(), PrTerm::succ());
    }

    #[test]
    fn composite() {
        let t = parse("C[S; P[1,1]]").unwrap();
        match t.kind() {
            TermKind::Comp { outer, inners } => {
                assert_eq!(**outer, PrTerm::succ());
                assert_eq!(inners.len(), 1);
            }
            other => panic!("expected composition, got {other:?}"),
        }
    }

    #[test]
    fn whitespace_insensitive() {
        let tight = parse("R[P[1,1];C[S;P[2,3]]]").unwrap();
        let loose = parse(" R [ P[ 1 , 1 ] ;\n C[ S ; P[2, 3] ] ] ").unwrap();
        assert_eq!(tight, loose);
        assert_eq!(tight.to_string(), "R[P[1,1]; C[S; P[2,3]]]");
    }

    #[test]
    fn arity_violation_names_node() {
        let err = parse("P[3,2]").unwrap_err();
        match err {
            ParseError::Arity { source, .. } => {
                assert!(source.to_string().contains("P[3,2]"), "got: {source}");
            }
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse("C[S; ]").unwrap_err();
        match err {
            ParseError::Syntax { at, .. } => assert_eq!(at, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse(""), Err(ParseError::Syntax { at: 0, .. })));
        assert!(matches!(parse("Z Z"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn mismatched_arity_in_comp() {
        // S is unary; two inners can never satisfy it.
        let err = parse("C[S; Z; Z]").unwrap_err();
        assert!(matches!(err, ParseError::Arity { .. }));
    }

    #[test]
    fn proj_zero_index_rejected() {
        assert!(matches!(parse("P[0,1]"), Err(ParseError::Arity { .. })));
    }

    #[test]
    fn print_parse_roundtrip_spot() {
        let add = parse("R[P[1,1]; C[S; P[2,3]]]").unwrap();
        assert_eq!(parse(&add.to_string()).unwrap(), add);
        assert_eq!(add.arity(), &nat(2));
    }
}
