//! Surface syntax for potentials: `1 + 2*r^2 + 3/2*r^4`, whitespace-insensitive.

use std::collections::BTreeMap;
use std::fmt;

use heattrace::exactalg::Rational;
use heattrace::parametrix::PotentialSpec;
use heattrace::Error as CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// `position` is a byte offset into the input.
    Syntax {
        position: usize,
        message: String,
    },
    Empty,
    OddPowerRejected(u32),
    NonPositiveLeading(String),
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { position, message } => {
                write!(f, "syntax error at position {position}: {message}")
            }
            ParseError::Empty => write!(f, "empty potential"),
            ParseError::OddPowerRejected(p) => {
                write!(
                    f,
                    "odd power r^{p} rejected: only even powers give a smooth V(|x|)"
                )
            }
            ParseError::NonPositiveLeading(c) => {
                write!(f, "leading coefficient must be positive, got {c}")
            }
            ParseError::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ParseError {}

/// `digits` or `digits/digits`.
fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(num) || !all_digits(den) || den.bytes().all(|b| b == b'0') {
        return None;
    }
    text.parse().ok()
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.text.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let start = self.offset();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == '/' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        parse_rational(&s).ok_or(ParseError::Syntax {
            position: start,
            message: format!("malformed rational '{s}'"),
        })
    }

    fn power(&mut self) -> Result<u32, ParseError> {
        // after 'r'
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.offset();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "expected a nonnegative integer exponent".into(),
        })
    }
}

/// Coefficient map of `text`, before any validation of the potential.
pub fn parse_terms(text: &str) -> Result<BTreeMap<u32, Rational>, ParseError> {
    let mut lex = Lexer::new(text);
    if lex.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
    let mut first = true;
    while lex.peek().is_some() {
        let negative = match lex.peek() {
            Some('+') => {
                lex.bump();
                false
            }
            Some('-') => {
                lex.bump();
                true
            }
            _ if first => false,
            Some(c) => return lex.error(format!("expected '+' or '-', found '{c}'")),
            None => unreachable!(),
        };
        first = false;
        let (coeff, power) = match lex.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = lex.number()?;
                if lex.peek() == Some('*') {
                    lex.bump();
                    if lex.bump() != Some('r') {
                        lex.pos -= 1;
                        return lex.error("expected 'r' after '*'");
                    }
                    (c, lex.power()?)
                } else {
                    (c, 0)
                }
            }
            Some('r') => {
                lex.bump();
                (Rational::from_integer(1.into()), lex.power()?)
            }
            Some(c) => return lex.error(format!("unexpected '{c}'")),
            None => return lex.error("expected a term"),
        };
        let coeff = if negative { -coeff } else { coeff };
        *terms
            .entry(power)
            .or_insert_with(|| Rational::from_integer(0.into())) += coeff;
    }
    Ok(terms)
}

/// Parse and validate a potential on `R^dim`.
pub fn parse_potential(text: &str, dim: usize) -> Result<PotentialSpec, ParseError> {
    let terms = parse_terms(text)?;
    PotentialSpec::new(dim, terms).map_err(|e| match e {
        CoreError::OddPower(p) => ParseError::OddPowerRejected(p),
        CoreError::NonPositiveLeading(c) => ParseError::NonPositiveLeading(c),
        other => ParseError::Invalid(other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use heattrace::exactalg::{int, rat};

    #[test]
    fn fixture_expression() {
        let v = parse_potential("1 + 2*r^2 + 3*r^4", 3).unwrap();
        assert_eq!(v.coeff(0), int(1));
        assert_eq!(v.coeff(2), int(2));
        assert_eq!(v.coeff(4), int(3));
        assert_eq!(v.degree(), 4);
        let w = parse_potential("  3/2*r^4-r^2+ 7 ", 1).unwrap();
        assert_eq!(w.coeff(4), rat(3, 2));
        assert_eq!(w.coeff(2), int(-1));
        assert_eq!(parse_potential("r^2", 3).unwrap().leading(), &int(1));
    }

    #[test]
    fn rejections() {
        assert_eq!(parse_potential("r^3", 3), Err(ParseError::OddPowerRejected(3)));
        assert_eq!(parse_potential("2*r", 3), Err(ParseError::OddPowerRejected(1)));
        assert!(matches!(
            parse_potential("-1*r^4 + 1", 3),
            Err(ParseError::NonPositiveLeading(_))
        ));
        assert_eq!(parse_potential("   ", 3), Err(ParseError::Empty));
        assert_eq!(
            parse_potential("1 + 2*x^2", 3),
            Err(ParseError::Syntax {
                position: 6,
                message: "expected 'r' after '*'".into()
            })
        );
        assert!(matches!(
            parse_potential("1 r^2", 3),
            Err(ParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_potential("1/0*r^2", 3),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(parse_potential("r^", 3), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_potential("5", 3), Err(ParseError::Invalid(_))));
    }
}
