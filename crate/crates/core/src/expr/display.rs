//! Infix printing. The output re-parses to a structurally equal tree.

use std::fmt;

use super::{BinaryOp, Expr, Node, UnaryOp};

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(c) if *c < 0.0 => PREC_NEG,
        Node::Const(_) | Node::Var(_) => PREC_ATOM,
        Node::Unary(UnaryOp::Neg, _) => PREC_NEG,
        Node::Unary(..) => PREC_ATOM,
        Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => PREC_SUM,
        Node::Binary(..) => PREC_PRODUCT,
        Node::Pow(..) => PREC_POW,
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c == 0.0 {
        // -0 would re-parse as Neg(0); print it as 0
        return f.write_str("0");
    }
    write!(f, "{c}")
}

fn write_at_least(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) >= min {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write_const(f, *c),
            Node::Var(v) => f.write_str(v.name()),
            Node::Unary(UnaryOp::Neg, a) => {
                // `-<number>` re-parses as a constant, and `-x^2` as (-x)^2,
                // so anything but a variable or call gets parenthesised.
                let bare = match a.node() {
                    Node::Var(_) => true,
                    Node::Unary(op, _) => *op != UnaryOp::Neg,
                    _ => false,
                };
                if bare {
                    write!(f, "-{a}")
                } else {
                    write!(f, "-({a})")
                }
            }
            Node::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Node::Binary(op, a, b) => {
                let (sym, lhs_min, rhs_min) = match op {
                    BinaryOp::Add => (" + ", PREC_SUM, PREC_PRODUCT),
                    BinaryOp::Sub => (" - ", PREC_SUM, PREC_PRODUCT),
                    BinaryOp::Mul => ("*", PREC_PRODUCT, PREC_NEG),
                    BinaryOp::Div => ("/", PREC_PRODUCT, PREC_NEG),
                };
                write_at_least(f, a, lhs_min)?;
                f.write_str(sym)?;
                write_at_least(f, b, rhs_min)
            }
            Node::Pow(a, c) => {
                write_at_least(f, a, PREC_ATOM)?;
                f.write_str("^")?;
                if *c < 0.0 {
                    f.write_str("(")?;
                    write_const(f, *c)?;
                    f.write_str(")")
                } else {
                    write_const(f, *c)
                }
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn round_trip(e: &Expr) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap_or_else(|err| panic!("`{text}`: {err}"));
        assert_eq!(&back, e, "printed as `{text}`");
    }

    #[test]
    fn prints_readably() {
        assert_eq!(parse_expression("x^2+y^2").unwrap().to_string(), "x^2 + y^2");
        assert_eq!(parse_expression("-(x*y)").unwrap().to_string(), "-(x*y)");
        assert_eq!(parse_expression("sin(z)*(x-y)").unwrap().to_string(), "sin(z)*(x - y)");
    }

    #[test]
    fn awkward_shapes_round_trip() {
        for s in [
            "x - (y - z)",
            "x/(y*z)",
            "x/(y/z)",
            "-2*x",
            "-(2)",
            "(-x)^2",
            "-x^2",
            "x^-1.5",
            "(-2)^3",
            "2^x^2",
            "--x",
            "-(-3)",
            "x*-y",
            "1e-300*x",
            "0.1+0.2",
        ] {
            if let Ok(e) = parse_expression(s) {
                round_trip(&e);
            }
        }
    }

    #[test]
    fn built_trees_round_trip() {
        let pieces = [
            Expr::from_node(Node::Unary(UnaryOp::Neg, Expr::constant(2.0))),
            Expr::from_node(Node::Unary(UnaryOp::Neg, Expr::constant(-2.0))),
            Expr::from_node(Node::Pow(Expr::constant(-2.0), 2.0)),
            Expr::from_node(Node::Binary(BinaryOp::Mul, Expr::x(), Expr::constant(-1.0))),
            Expr::from_node(Node::Binary(BinaryOp::Sub, Expr::x(), Expr::constant(-1.0))),
            Expr::from_node(Node::Pow(Expr::from_node(Node::Unary(UnaryOp::Neg, Expr::x())), 3.0)),
            Expr::from_node(Node::Unary(UnaryOp::Neg, Expr::from_node(Node::Pow(Expr::x(), 2.0)))),
            Expr::constant(f64::MIN_POSITIVE),
            Expr::constant(1.0 / 3.0),
        ];
        for e in &pieces {
            round_trip(e);
        }
    }
}
