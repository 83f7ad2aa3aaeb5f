//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' atom)?
//! atom   := number | ident | func '(' expr ')' | '(' expr ')' | '-' atom
//! func   := sin | cos | exp | ln | sqrt
//! ident  := t | x | y | z
//! ```
//!
//! `-` directly followed by a numeric literal yields a negative constant,
//! which keeps print/parse round trips structural. Exponents must reduce to
//! a constant.

use super::{BinaryOp, Coord, Expr, Node, UnaryOp};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { position: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownIdentifier { position, .. } => *position,
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::from_node(Node::Binary(op, lhs, rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::from_node(Node::Binary(op, lhs, rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let exponent = self.atom()?;
        let value = if exponent.is_constant_tree() {
            exponent.evaluate(&super::Point4::new(0.0f64, 0.0, 0.0, 0.0)).ok()
        } else {
            None
        };
        match value {
            Some(c) if c.is_finite() => Ok(Expr::from_node(Node::Pow(base, c))),
            _ => Err(ParseError::Syntax { position: at, message: "exponent must be a finite constant".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
                    let c = self.number()?;
                    return Ok(Expr::constant(-c));
                }
                let inner = self.atom()?;
                Ok(Expr::from_node(Node::Unary(UnaryOp::Neg, inner)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::constant(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        text.parse::<f64>().map_err(|_| ParseError::Syntax { position: start, message: format!("malformed number `{text}`") })
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if let Some(c) = Coord::from_name(name) {
            return Ok(Expr::var(c));
        }
        if let Some(op) = UnaryOp::from_function_name(name) {
            if !self.eat(b'(') {
                return Err(self.syntax(format!("expected `(` after `{name}`")));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.syntax("expected `)`"));
            }
            return Ok(Expr::from_node(Node::Unary(op, arg)));
        }
        Err(ParseError::UnknownIdentifier { position: start, name: name.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_call() {
        let e = parse_expression("sin(z)").unwrap();
        assert_eq!(e.node(), &Node::Unary(UnaryOp::Sin, Expr::z()));
    }

    #[test]
    fn sum_of_squares_shape() {
        let e = parse_expression("x^2+y^2").unwrap();
        let want = Expr::from_node(Node::Binary(
            BinaryOp::Add,
            Expr::from_node(Node::Pow(Expr::x(), 2.0)),
            Expr::from_node(Node::Pow(Expr::y(), 2.0)),
        ));
        assert_eq!(e, want);
    }

    #[test]
    fn precedence_and_associativity() {
        // left-assoc: (x - y) - z
        let e = parse_expression("x - y - z").unwrap();
        match e.node() {
            Node::Binary(BinaryOp::Sub, lhs, rhs) => {
                assert_eq!(rhs, &Expr::z());
                assert!(matches!(lhs.node(), Node::Binary(BinaryOp::Sub, _, _)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_expression("1 + 2 * 3 ^ 2").unwrap();
        assert_eq!(e.evaluate(&super::super::Point4::new(0.0, 0.0, 0.0, 0.0)).unwrap(), 19.0);
    }

    #[test]
    fn exponent_forms() {
        assert!(parse_expression("x^-1").is_ok());
        assert!(parse_expression("x^(1/2)").is_ok());
        assert!(parse_expression("x^2.5e0").is_ok());
        assert!(matches!(parse_expression("x^y"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expression("x + * y") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expression("2*w") {
            Err(ParseError::UnknownIdentifier { position, name }) => {
                assert_eq!(position, 2);
                assert_eq!(name, "w");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expression("sin(x").is_err());
        assert!(parse_expression("").is_err());
        assert!(parse_expression("x y").is_err());
        assert!(parse_expression("tan(x)").is_err());
    }
}
