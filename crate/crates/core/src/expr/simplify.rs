use super::{BinaryOp, Expr, Node, UnaryOp};

fn binary(op: BinaryOp, a: &Expr, b: &Expr) -> Expr {
    Expr::from_node(Node::Binary(op, a.clone(), b.clone()))
}

fn strip_neg(e: &Expr) -> Option<&Expr> {
    match e.node() {
        Node::Unary(UnaryOp::Neg, inner) => Some(inner),
        _ => None,
    }
}

/// Splits `c * e` into `(c, e)`; anything else is `(1, e)`.
fn split_coeff(e: &Expr) -> (f64, Expr) {
    match e.node() {
        Node::Binary(BinaryOp::Mul, a, b) => match a.as_const() {
            Some(c) => (c, b.clone()),
            None => (1.0, e.clone()),
        },
        Node::Unary(UnaryOp::Neg, inner) => {
            let (c, rest) = split_coeff(inner);
            (-c, rest)
        }
        _ => (1.0, e.clone()),
    }
}

pub(super) fn add(a: &Expr, b: &Expr) -> Expr {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::constant(x + y);
    }
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if let Some(inner) = strip_neg(b) {
        return sub(a, inner);
    }
    if let Some(c) = b.as_const() {
        if c < 0.0 {
            return sub(a, &Expr::constant(-c));
        }
    }
    if let Some(inner) = strip_neg(a) {
        return sub(b, inner);
    }
    let (ca, ra) = split_coeff(a);
    let (cb, rb) = split_coeff(b);
    if ra == rb {
        return mul(&Expr::constant(ca + cb), &ra);
    }
    binary(BinaryOp::Add, a, b)
}

pub(super) fn sub(a: &Expr, b: &Expr) -> Expr {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::constant(x - y);
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return neg(b);
    }
    if a == b {
        return Expr::zero();
    }
    if let Some(inner) = strip_neg(b) {
        return add(a, inner);
    }
    let (ca, ra) = split_coeff(a);
    let (cb, rb) = split_coeff(b);
    if ra == rb {
        return mul(&Expr::constant(ca - cb), &ra);
    }
    binary(BinaryOp::Sub, a, b)
}

pub(super) fn mul(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::constant(x * y);
    }
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    if b.as_const().is_some() {
        return mul(b, a);
    }
    if let Some(inner) = strip_neg(a) {
        return neg(&mul(inner, b));
    }
    if let Some(inner) = strip_neg(b) {
        return neg(&mul(a, inner));
    }
    if let Some(c) = a.as_const() {
        if c == -1.0 {
            return neg(b);
        }
        if let Node::Binary(BinaryOp::Mul, b1, b2) = b.node() {
            if let Some(c2) = b1.as_const() {
                return mul(&Expr::constant(c * c2), b2);
            }
        }
    } else if let Node::Binary(BinaryOp::Mul, b1, b2) = b.node() {
        // a * (c * u) -> c * (a * u)
        if let Some(c2) = b1.as_const() {
            return mul(&Expr::constant(c2), &mul(a, b2));
        }
    }
    if let Node::Binary(BinaryOp::Mul, a1, a2) = a.node() {
        if a1.as_const().is_some() {
            return mul(a1, &mul(a2, b));
        }
    }
    binary(BinaryOp::Mul, a, b)
}

pub(super) fn div(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return Expr::zero();
    }
    if b.is_one() {
        return a.clone();
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if y != 0.0 {
            return Expr::constant(x / y);
        }
    }
    if let Some(inner) = strip_neg(a) {
        return neg(&div(inner, b));
    }
    if let Some(inner) = strip_neg(b) {
        return neg(&div(a, inner));
    }
    if let Some(c) = b.as_const() {
        if c == -1.0 {
            return neg(a);
        }
    }
    binary(BinaryOp::Div, a, b)
}

pub(super) fn neg(a: &Expr) -> Expr {
    match a.node() {
        Node::Const(c) => Expr::constant(-c),
        Node::Unary(UnaryOp::Neg, inner) => inner.clone(),
        Node::Binary(BinaryOp::Sub, x, y) => binary(BinaryOp::Sub, y, x),
        Node::Binary(BinaryOp::Mul, x, y) if x.as_const().is_some() => {
            mul(&Expr::constant(-x.as_const().unwrap_or(0.0)), y)
        }
        _ => Expr::from_node(Node::Unary(UnaryOp::Neg, a.clone())),
    }
}

pub(super) fn pow(a: &Expr, exponent: f64) -> Expr {
    if exponent == 0.0 {
        return Expr::one();
    }
    if exponent == 1.0 {
        return a.clone();
    }
    if let Some(base) = a.as_const() {
        let integral = exponent.fract() == 0.0;
        if (base > 0.0 || (base < 0.0 && integral) || (base == 0.0 && exponent > 0.0)) && exponent.is_finite() {
            return Expr::constant(base.powf(exponent));
        }
    }
    if let Node::Pow(inner, e1) = a.node() {
        if e1.fract() == 0.0 && exponent.fract() == 0.0 {
            return pow(inner, e1 * exponent);
        }
    }
    Expr::from_node(Node::Pow(a.clone(), exponent))
}

pub(super) fn unary(op: UnaryOp, a: &Expr) -> Expr {
    if op == UnaryOp::Neg {
        return neg(a);
    }
    if let Some(c) = a.as_const() {
        let folded = match op {
            UnaryOp::Sin => Some(c.sin()),
            UnaryOp::Cos => Some(c.cos()),
            UnaryOp::Exp => Some(c.exp()),
            UnaryOp::Ln if c > 0.0 => Some(c.ln()),
            UnaryOp::Sqrt if c >= 0.0 => Some(c.sqrt()),
            _ => None,
        };
        if let Some(v) = folded {
            return Expr::constant(v);
        }
    }
    Expr::from_node(Node::Unary(op, a.clone()))
}

pub(super) fn simplify(e: &Expr) -> Expr {
    match e.node() {
        Node::Const(_) | Node::Var(_) => e.clone(),
        Node::Unary(op, a) => unary(*op, &simplify(a)),
        Node::Pow(a, c) => pow(&simplify(a), *c),
        Node::Binary(op, a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match op {
                BinaryOp::Add => add(&a, &b),
                BinaryOp::Sub => sub(&a, &b),
                BinaryOp::Mul => mul(&a, &b),
                BinaryOp::Div => div(&a, &b),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, Point4};

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn zero_times_anything_folds() {
        assert!(p("0*sin(z)").simplify().is_zero());
        assert!(p("sin(z)*0").simplify().is_zero());
    }

    #[test]
    fn additive_identity() {
        assert_eq!(p("x+0").simplify(), Expr::x());
        assert_eq!(p("0+x").simplify(), Expr::x());
    }

    #[test]
    fn self_difference_vanishes() {
        assert!(p("sin(x*y) - sin(x*y)").simplify().is_zero());
    }

    #[test]
    fn constants_fold() {
        assert_eq!(p("2*3+1").simplify().as_const(), Some(7.0));
        assert_eq!(p("(1/2)^2").simplify().as_const(), Some(0.25));
    }

    #[test]
    fn pythagorean_identity_is_not_folded() {
        let e = p("sin(z)^2 + cos(z)^2").simplify();
        assert!(e.as_const().is_none());
        let v: f64 = e.evaluate(&Point4::new(0.0, 0.0, 0.0, 0.7)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn like_terms_collect() {
        let e = Expr::x() * 2.0 + Expr::x() * 3.0;
        assert_eq!(e, Expr::x() * 5.0);
        assert!((Expr::y() * 2.0 - Expr::y() * 2.0).is_zero());
    }
}
