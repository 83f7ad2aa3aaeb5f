use std::fmt;

use super::{BinaryOp, Coord, Expr, Node, UnaryOp};
use crate::Real;

/// A point of time-extended space `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4<T> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Point4<T> {
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        Point4 { t, x, y, z }
    }

    pub fn get(&self, c: Coord) -> T {
        match c {
            Coord::T => self.t,
            Coord::X => self.x,
            Coord::Y => self.y,
            Coord::Z => self.z,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [self.t.to_f64_lossy(), self.x.to_f64_lossy(), self.y.to_f64_lossy(), self.z.to_f64_lossy()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainError {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    /// Negative base with a non-integer exponent, or zero to a negative power.
    InvalidPower,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            DomainError::DivisionByZero => "division by zero",
            DomainError::LogOfNonPositive => "ln of a non-positive value",
            DomainError::SqrtOfNegative => "sqrt of a negative value",
            DomainError::InvalidPower => "power outside the real domain",
        };
        f.write_str(msg)
    }
}

/// Evaluation failed at a point; carries the offending subexpression.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{kind} in `{subexpr}` at (t={}, x={}, y={}, z={})", .point[0], .point[1], .point[2], .point[3])]
pub struct EvalError {
    pub kind: DomainError,
    pub subexpr: String,
    pub point: [f64; 4],
}

impl EvalError {
    pub(crate) fn new<T: Real>(kind: DomainError, subexpr: &Expr, p: &Point4<T>) -> Self {
        EvalError { kind, subexpr: subexpr.to_string(), point: p.to_f64() }
    }
}

pub(crate) fn apply_unary<T: Real>(op: UnaryOp, a: T) -> Result<T, DomainError> {
    Ok(match op {
        UnaryOp::Neg => -a,
        UnaryOp::Sin => a.sin(),
        UnaryOp::Cos => a.cos(),
        UnaryOp::Exp => a.exp(),
        UnaryOp::Ln => {
            if a <= T::zero() {
                return Err(DomainError::LogOfNonPositive);
            }
            a.ln()
        }
        UnaryOp::Sqrt => {
            if a < T::zero() {
                return Err(DomainError::SqrtOfNegative);
            }
            a.sqrt()
        }
    })
}

pub(crate) fn apply_binary<T: Real>(op: BinaryOp, a: T, b: T) -> Result<T, DomainError> {
    Ok(match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => {
            if b == T::zero() {
                return Err(DomainError::DivisionByZero);
            }
            a / b
        }
    })
}

pub(crate) fn apply_pow<T: Real>(base: T, exponent: f64) -> Result<T, DomainError> {
    let integral = exponent.fract() == 0.0 && exponent.abs() < f64::from(i32::MAX);
    if base == T::zero() && exponent < 0.0 {
        return Err(DomainError::InvalidPower);
    }
    if integral {
        return Ok(base.powi(exponent as i32));
    }
    if base < T::zero() {
        return Err(DomainError::InvalidPower);
    }
    Ok(base.powf(T::from_f64_lossy(exponent)))
}

impl Expr {
    /// Evaluates at `p` by direct recursion over the tree.
    ///
    /// For repeated evaluation of many expressions over a grid, compile a
    /// [`super::Tape`] instead; it shares common subexpressions.
    pub fn evaluate<T: Real>(&self, p: &Point4<T>) -> Result<T, EvalError> {
        match self.node() {
            Node::Const(c) => Ok(T::from_f64_lossy(*c)),
            Node::Var(v) => Ok(p.get(*v)),
            Node::Unary(op, a) => {
                let a = a.evaluate(p)?;
                apply_unary(*op, a).map_err(|k| EvalError::new(k, self, p))
            }
            Node::Binary(op, a, b) => {
                let (a, b) = (a.evaluate(p)?, b.evaluate(p)?);
                apply_binary(*op, a, b).map_err(|k| EvalError::new(k, self, p))
            }
            Node::Pow(a, c) => {
                let a = a.evaluate(p)?;
                apply_pow(a, *c).map_err(|k| EvalError::new(k, self, p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn at(s: &str, t: f64, x: f64, y: f64, z: f64) -> Result<f64, EvalError> {
        parse_expression(s).unwrap().evaluate(&Point4::new(t, x, y, z))
    }

    #[test]
    fn trivial_values() {
        assert_eq!(at("sin(z)", 0.0, 0.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(at("x^2+y^2", 0.0, 3.0, 4.0, 0.0).unwrap(), 25.0);
        // hand evaluation: 2*(1*2 - 3/3) = 2
        assert_eq!(at("2*(x*y - z/3)", 0.0, 1.0, 2.0, 3.0).unwrap(), 2.0);
    }

    #[test]
    fn reciprocal_at_zero_is_a_domain_error() {
        let err = at("1/x", 0.0, 0.0, 1.0, 1.0).unwrap_err();
        assert_eq!(err.kind, DomainError::DivisionByZero);
        assert_eq!(err.point, [0.0, 0.0, 1.0, 1.0]);
        assert!(err.subexpr.contains('/'));
    }

    #[test]
    fn real_domain_is_enforced() {
        assert_eq!(at("ln(x)", 0.0, -1.0, 0.0, 0.0).unwrap_err().kind, DomainError::LogOfNonPositive);
        assert_eq!(at("sqrt(x)", 0.0, -1.0, 0.0, 0.0).unwrap_err().kind, DomainError::SqrtOfNegative);
        assert_eq!(at("x^0.5", 0.0, -4.0, 0.0, 0.0).unwrap_err().kind, DomainError::InvalidPower);
        assert_eq!(at("x^(-1)", 0.0, 0.0, 0.0, 0.0).unwrap_err().kind, DomainError::InvalidPower);
        assert_eq!(at("x^3", 0.0, -2.0, 0.0, 0.0).unwrap(), -8.0);
        assert_eq!(at("x^(-2)", 0.0, -2.0, 0.0, 0.0).unwrap(), 0.25);
    }

    #[test]
    fn single_precision_evaluation() {
        let e = parse_expression("sin(z) + x*y").unwrap();
        let v: f32 = e.evaluate(&Point4::new(0.0f32, 2.0, 3.0, 0.5)).unwrap();
        assert!((v - (0.5f32.sin() + 6.0)).abs() < 1e-6);
    }
}
