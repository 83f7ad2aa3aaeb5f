use std::collections::HashMap;

use super::{BinaryOp, Coord, Expr, Node, UnaryOp};

pub(super) fn differentiate(e: &Expr, c: Coord) -> Expr {
    let mut memo = HashMap::new();
    go(e, c, &mut memo)
}

// Shared subtrees are differentiated once; the memo is keyed by node address.
fn go(e: &Expr, c: Coord, memo: &mut HashMap<usize, Expr>) -> Expr {
    if !e.depends_on(c) {
        return Expr::zero();
    }
    if let Some(d) = memo.get(&e.ptr_id()) {
        return d.clone();
    }
    let d = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Var(v) => {
            if *v == c {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Unary(op, a) => {
            let da = go(a, c, memo);
            match op {
                UnaryOp::Neg => da.neg(),
                UnaryOp::Sin => a.cos().mul(&da),
                UnaryOp::Cos => a.sin().mul(&da).neg(),
                UnaryOp::Exp => e.mul(&da),
                UnaryOp::Ln => da.div(a),
                UnaryOp::Sqrt => da.div(&e.scale(2.0)),
            }
        }
        Node::Binary(op, a, b) => {
            let da = go(a, c, memo);
            let db = go(b, c, memo);
            match op {
                BinaryOp::Add => da.add(&db),
                BinaryOp::Sub => da.sub(&db),
                BinaryOp::Mul => da.mul(b).add(&a.mul(&db)),
                BinaryOp::Div => {
                    if db.is_zero() {
                        da.div(b)
                    } else {
                        da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
                    }
                }
            }
        }
        Node::Pow(a, k) => {
            let da = go(a, c, memo);
            a.powf(k - 1.0).scale(*k).mul(&da)
        }
    };
    memo.insert(e.ptr_id(), d.clone());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, Point4};

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        assert_eq!(p("sin(z)").diff(Coord::Z), p("cos(z)"));
    }

    #[test]
    fn derivative_of_sum_of_squares() {
        let d = p("x^2+y^2").diff(Coord::X);
        assert_eq!(d, Expr::x().scale(2.0));
    }

    #[test]
    fn time_free_expression_has_zero_time_derivative() {
        assert!(p("sin(x*y) + exp(z)/(1+x^2)").diff(Coord::T).is_zero());
    }

    #[test]
    fn quotient_and_chain_rules() {
        let e = p("ln(1 + x^2) + sqrt(2 + y) - exp(x*z)/(3 + cos(t))");
        let pt = Point4::new(0.3, 0.7, -0.4, 1.1);
        let (t, x, y, z) = (0.3f64, 0.7f64, -0.4f64, 1.1f64);
        let want_x = 2.0 * x / (1.0 + x * x) - z * (x * z).exp() / (3.0 + t.cos());
        let want_t = -(x * z).exp() * t.sin() / (3.0 + t.cos()).powi(2);
        let want_y = 0.5 / (2.0 + y).sqrt();
        assert!((e.diff(Coord::X).evaluate(&pt).unwrap() - want_x).abs() < 1e-14);
        assert!((e.diff(Coord::T).evaluate(&pt).unwrap() - want_t).abs() < 1e-14);
        assert!((e.diff(Coord::Y).evaluate(&pt).unwrap() - want_y).abs() < 1e-14);
    }
}
