//! Text grammar for field elements.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power | power)*
//! power  := atom ['^' ['-'] integer]
//! atom   := integer | 'a' integer | '(' expr ')'
//! ```
//!
//! Integers are read mod 2, juxtaposition multiplies (`a1a2`, `a1 (1+a2)`),
//! and `a<k>` is the `k`-th indeterminate, `k >= 1`.

use pflab_core::{Field, FieldElement};
use std::fmt;

const MAX_EXPONENT: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    /// 0-based character column.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at column {} in \"{}\"", self.message, self.pos + 1, self.input)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    /// The input with a caret under the offending column.
    pub fn pointer(&self) -> String {
        format!("{}\n{}^", self.input, " ".repeat(self.pos))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    /// 0-based index with the column of the `a`.
    Var(usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Divisor column for error reporting.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

impl Expr {
    /// Number of indeterminates mentioned: the largest `k` in `a<k>`.
    pub fn nvars(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i, _) => i + 1,
            Expr::Add(l, r) | Expr::Mul(l, r) | Expr::Div(l, r, _) => l.nvars().max(r.nvars()),
            Expr::Pow(b, _, _) => b.nvars(),
        }
    }

    fn first_var_beyond(&self, n: usize) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i, pos) => (*i >= n).then_some(*pos),
            Expr::Add(l, r) | Expr::Mul(l, r) | Expr::Div(l, r, _) => {
                l.first_var_beyond(n).or_else(|| r.first_var_beyond(n))
            }
            Expr::Pow(b, _, _) => b.first_var_beyond(n),
        }
    }

    /// Evaluates in `field`. Fails on division by zero or an indeterminate
    /// outside the field.
    pub fn eval(&self, field: Field, input: &str) -> Result<FieldElement, ParseError> {
        let err = |pos: usize, message: String| ParseError { input: input.to_string(), pos, message };
        if let Some(pos) = self.first_var_beyond(field.nvars) {
            return Err(err(pos, format!("indeterminate outside a1..a{}", field.nvars)));
        }
        self.eval_in(field, &err)
    }

    fn eval_in(&self, field: Field, err: &dyn Fn(usize, String) -> ParseError) -> Result<FieldElement, ParseError> {
        Ok(match self {
            Expr::Const(true) => field.one(),
            Expr::Const(false) => field.zero(),
            Expr::Var(i, _) => field.var(*i),
            Expr::Add(l, r) => &l.eval_in(field, err)? + &r.eval_in(field, err)?,
            Expr::Mul(l, r) => &l.eval_in(field, err)? * &r.eval_in(field, err)?,
            Expr::Div(l, r, pos) => {
                let d = r.eval_in(field, err)?;
                l.eval_in(field, err)?.checked_div(&d).map_err(|_| err(*pos, "division by zero".into()))?
            }
            Expr::Pow(b, k, pos) => {
                let base = b.eval_in(field, err)?;
                let p = base.pow(k.unsigned_abs() as u32);
                if *k < 0 {
                    p.inv().map_err(|_| err(*pos, "zero raised to a negative power".into()))?
                } else {
                    p
                }
            }
        })
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { input: self.input.to_string(), pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            value = value.saturating_mul(10).saturating_add(d as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return self.error(start, "expected an integer");
        }
        Ok((value, start))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        while matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
            acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some('/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    acc = Expr::Div(Box::new(acc), Box::new(self.power()?), at);
                }
                Some(c) if c == 'a' || c == '(' || c.is_ascii_digit() => {
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        let (k, at) = self.integer()?;
        if k > MAX_EXPONENT {
            return self.error(at, format!("exponent larger than {MAX_EXPONENT}"));
        }
        let k = k as i64;
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }, start))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    let pos = self.pos;
                    return self.error(pos, format!("unclosed parenthesis opened at column {}", open + 1));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('a') => {
                let var_at = self.pos;
                self.pos += 1;
                if !self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    let pos = self.pos;
                    return self.error(pos, "expected an index after 'a'");
                }
                let (k, _) = self.integer()?;
                if k == 0 {
                    return self.error(var_at, "indeterminates are numbered from a1");
                }
                if k > 64 {
                    return self.error(var_at, "at most 64 indeterminates are supported");
                }
                Ok(Expr::Var(k as usize - 1, var_at))
            }
            Some(c) if c.is_ascii_digit() => {
                let (k, _) = self.integer()?;
                Ok(Expr::Const(k % 2 == 1))
            }
            Some(c) => {
                let pos = self.pos;
                self.error(pos, format!("unexpected '{c}'"))
            }
            None => {
                let pos = self.pos;
                self.error(pos, "unexpected end of input")
            }
        }
    }
}

/// Parses the grammar without fixing the field.
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { input, chars: input.chars().collect(), pos: 0 };
    if p.peek().is_none() {
        return p.error(0, "empty expression");
    }
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        let pos = p.pos;
        let message = if c == ')' { "unmatched ')'".to_string() } else { format!("unexpected '{c}'") };
        return p.error(pos, message);
    }
    Ok(e)
}

/// The field for a set of expressions: `n` if given, otherwise the largest
/// index mentioned, and never fewer than two indeterminates.
pub fn infer_field(exprs: &[&Expr], n: Option<usize>) -> Field {
    Field::new(n.unwrap_or_else(|| exprs.iter().map(|e| e.nvars()).max().unwrap_or(0).max(2)))
}

/// Parses and evaluates a single element.
pub fn parse_element(input: &str, n: Option<usize>) -> Result<FieldElement, ParseError> {
    let e = parse_expr(input)?;
    e.eval(infer_field(&[&e], n), input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        parse_element(s, None).unwrap().to_string()
    }

    #[test]
    fn grammar() {
        assert_eq!(show("a1^3+a2 / a1"), "(a1^4+a2)/a1");
        assert_eq!(show("(a1^3+a2)/a1"), parse_element("a1^2 + a2/a1", None).unwrap().to_string());
        assert_eq!(show("a1a2"), show("a1*a2"));
        assert_eq!(show("a1 (1 + a2)"), show("a1*a2 + a1"));
        assert_eq!(show("3 + a1 - 2"), show("1+a1"));
        assert_eq!(show("-a1"), "a1");
        assert_eq!(show("a1^-2"), show("1/a1^2"));
        assert_eq!(parse_element("a3", None).unwrap().nvars(), 3);
        assert_eq!(parse_element("1", None).unwrap().nvars(), 2);
        assert_eq!(parse_element("a1", Some(4)).unwrap().nvars(), 4);
    }

    #[test]
    fn precedence() {
        let f = Field::new(2);
        let (a1, a2) = (f.var(0), f.var(1));
        assert_eq!(parse_element("a1 + a2^2 * a1", None).unwrap(), &a1 + &(&a2.square() * &a1));
        assert_eq!(parse_element("a1 / a2 * a2", None).unwrap(), a1);
    }

    #[test]
    fn error_positions() {
        let pos = |s: &str, n: Option<usize>| parse_element(s, n).unwrap_err().pos;
        assert_eq!(pos("a1 + ", None), 5);
        assert_eq!(pos("a1 + b", None), 5);
        assert_eq!(pos("(a1 + a2", None), 8);
        assert_eq!(pos("a1)", None), 2);
        assert_eq!(pos("a0", None), 0);
        assert_eq!(pos("a1 / (a2 + a2)", None), 5);
        assert_eq!(pos("a1 + a3", Some(2)), 5);
        assert_eq!(pos("a", None), 1);
        assert_eq!(pos("a1^x", None), 3);
        assert_eq!(pos("", None), 0);
        let e = parse_element("a1 + b", None).unwrap_err();
        assert_eq!(e.to_string(), "unexpected 'b' at column 6 in \"a1 + b\"");
        assert_eq!(e.pointer(), "a1 + b\n     ^");
    }
}
