//! Parser for polynomial expressions such as `x^2*y - 3*y*x + 1`.
//!
//! ```text
//! expr   := sign? term (sign term)*
//! term   := factor ('*' factor)*
//! factor := INTEGER | NAME ('^' INTEGER)?
//! NAME   := [A-Za-z_][A-Za-z0-9_']*
//! ```
//!
//! Whitespace is ignored. Generator order inside a term is preserved, so the
//! same syntax serves free algebras.

use std::fmt;

/// One parsed term: integer coefficient times an ordered product of powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: i64,
    pub factors: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based column inside the expression.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

/// 1-based column of the first occurrence of `name` as a whole identifier.
pub fn name_column(src: &str, name: &str) -> Option<usize> {
    let ident = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '\'';
    let chars: Vec<char> = src.chars().collect();
    let target: Vec<char> = name.chars().collect();
    (0..chars.len()).find(|&i| {
        chars[i..].starts_with(&target)
            && (i == 0 || !ident(chars[i - 1]))
            && chars.get(i + target.len()).map_or(true, |&c| !ident(c))
    })
    .map(|i| i + 1)
}

pub fn parse(src: &str) -> Result<Vec<Term>, ExprError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let terms = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(terms)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn column(&self) -> usize {
        // columns count characters, not bytes
        self.pos + 1
    }

    fn error(&self, msg: &str) -> ExprError {
        let found = self
            .chars
            .get(self.pos)
            .map(|c| format!(" (found '{c}')"))
            .unwrap_or_else(|| " (at end of input)".to_string());
        ExprError {
            column: self.column(),
            message: format!("{msg}{found}"),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>, ExprError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let mut t = self.term()?;
            if negative {
                t.coefficient = -t.coefficient;
            }
            terms.push(t);
            self.skip_ws();
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let mut t = Term {
            coefficient: 1,
            factors: Vec::new(),
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    t.coefficient = t
                        .coefficient
                        .checked_mul(n)
                        .ok_or_else(|| self.error("coefficient overflow"))?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                    let name = self.name();
                    self.skip_ws();
                    let exp = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.skip_ws();
                        let e = self.integer()?;
                        u32::try_from(e).map_err(|_| self.error("exponent out of range"))?
                    } else {
                        1
                    };
                    if exp > 0 {
                        t.factors.push((name, exp));
                    }
                }
                _ => return Err(self.error("expected a number or generator name")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok(t);
            }
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ExprError {
            column: start + 1,
            message: "integer out of range".into(),
        })
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms_in_order() {
        let t = parse("x^2*y - 3*y*x + 1").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].factors, vec![("x".into(), 2), ("y".into(), 1)]);
        assert_eq!(t[1].coefficient, -3);
        assert_eq!(t[1].factors, vec![("y".into(), 1), ("x".into(), 1)]);
        assert_eq!(t[2].factors, vec![]);
        assert_eq!(parse("-u").unwrap().len(), 1);
        assert_eq!(parse("-u").unwrap()[0].coefficient, -1);
    }

    #[test]
    fn reports_column() {
        let e = parse("x^2 * * y").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse("x^").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse("x y").is_err());
    }
}
