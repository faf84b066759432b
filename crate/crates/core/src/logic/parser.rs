//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence, tightest first: `~`, `&`, `|`, `->`, `<->`. Conjunction and
//! disjunction associate to the left, implication and biconditional to the
//! right.

use super::{Atom, Formula};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_owned())
            }
            _ => {
                let found = text[start..]
                    .chars()
                    .next()
                    .map(|c| format!("`{c}`"))
                    .unwrap_or_default();
                return Err(Error::Syntax {
                    position: start,
                    expected: vec!["a formula token".into()],
                    found,
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if t != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let (position, tok) = &self.tokens[self.pos];
        Error::Syntax {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.implies()?;
        if *self.peek() == Token::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Token::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Token::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "a binary connective"]));
                }
                self.bump();
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(match name.as_str() {
                    "T" => Formula::True,
                    "F" => Formula::False,
                    _ => Formula::Atom(Atom(name)),
                })
            }
            _ => Err(self.error(&["an atom", "`T`", "`F`", "`~`", "`(`"])),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Token::End {
        return Err(p.error(&["a binary connective", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(n: &str) -> Formula {
        Formula::atom(n).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_formula("~O -> S").unwrap(),
            Formula::implies(Formula::not(atom("O")), atom("S"))
        );
        assert_eq!(
            parse_formula("~O & ~S").unwrap(),
            Formula::and(Formula::not(atom("O")), Formula::not(atom("S")))
        );
        assert_eq!(
            parse_formula("A -> B -> C").unwrap(),
            Formula::implies(atom("A"), Formula::implies(atom("B"), atom("C")))
        );
    }

    // Expected shapes for mixed-precedence inputs, written out by hand.
    #[test]
    fn precedence_table() {
        let (a, b, c) = (atom("a"), atom("b"), atom("c"));
        let table = [
            (
                "a & b | c",
                Formula::or(Formula::and(a.clone(), b.clone()), c.clone()),
            ),
            (
                "a | b & c",
                Formula::or(a.clone(), Formula::and(b.clone(), c.clone())),
            ),
            (
                "a & b & c",
                Formula::and(Formula::and(a.clone(), b.clone()), c.clone()),
            ),
            (
                "a | b -> c",
                Formula::implies(Formula::or(a.clone(), b.clone()), c.clone()),
            ),
            (
                "a -> b <-> c",
                Formula::iff(Formula::implies(a.clone(), b.clone()), c.clone()),
            ),
            (
                "a <-> b <-> c",
                Formula::iff(a.clone(), Formula::iff(b.clone(), c.clone())),
            ),
            ("~a & b", Formula::and(Formula::not(a.clone()), b.clone())),
            ("~(a & b)", Formula::not(Formula::and(a.clone(), b.clone()))),
            ("~~a", Formula::not(Formula::not(a.clone()))),
            (
                "(a -> b) -> c",
                Formula::implies(Formula::implies(a.clone(), b.clone()), c.clone()),
            ),
            ("T|F", Formula::or(Formula::True, Formula::False)),
            ("  x_1\t&\ny2 ", Formula::and(atom("x_1"), atom("y2"))),
        ];
        for (text, expected) in table {
            assert_eq!(parse_formula(text).unwrap(), expected, "{text}");
        }
    }

    #[test]
    fn syntax_errors_carry_position_and_expectation() {
        match parse_formula("O & ") {
            Err(Error::Syntax {
                position,
                expected,
                found,
            }) => {
                assert_eq!(position, 4);
                assert!(expected.iter().any(|e| e == "an atom"));
                assert_eq!(found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        match parse_formula("(O | S") {
            Err(Error::Syntax {
                position, expected, ..
            }) => {
                assert_eq!(position, 6);
                assert!(expected.contains(&"`)`".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("O S"),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_formula("O - S"),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_formula(""),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse_formula("O # S"),
            Err(Error::Syntax { position: 2, .. })
        ));
    }
}
