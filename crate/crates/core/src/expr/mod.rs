//! Symbolic scalar expressions over the coordinates `t, x, y, z`.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Subtrees are shared
//! freely, so cloning is cheap and expressions can be evaluated from many
//! threads at once.
//!
//! Two construction layers exist:
//!
//! * [`Expr::from_node`] builds a node verbatim. The parser uses it, so
//!   `parse("0*sin(z)")` really is a product.
//! * The arithmetic builders ([`Expr::add`], [`Expr::mul`], the `std::ops`
//!   impls, [`Expr::sin`], ...) apply light local rewriting: constant
//!   folding, `0`/`1` identities, `e - e -> 0` and `0 * e -> 0`.
//!   Differentiation goes through them to keep derivative trees small.
//!
//! Canonical simplification is out of reach here: `sin(z)^2 + cos(z)^2` is
//! not folded to `1`. Identity checks are carried by numeric residuals.

mod diff;
mod display;
mod eval;
mod parse;
mod simplify;
mod tape;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use eval::{DomainError, EvalError, Point4};
pub use parse::{parse_expression, ParseError};
pub use tape::Tape;

/// One of the four coordinates of time-extended space, in the fixed order
/// `t < x < y < z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    T,
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::T, Coord::X, Coord::Y, Coord::Z];
    pub const SPATIAL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Coord> {
        Coord::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::T => "t",
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Coord> {
        match name {
            "t" => Some(Coord::T),
            "x" => Some(Coord::X),
            "y" => Some(Coord::Y),
            "z" => Some(Coord::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub fn from_function_name(name: &str) -> Option<UnaryOp> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "ln" => Some(UnaryOp::Ln),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A single tree node. Exponents of [`Node::Pow`] are always constants.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(Coord),
    Unary(UnaryOp, Expr),
    Binary(BinaryOp, Expr, Expr),
    Pow(Expr, f64),
}

struct Inner {
    node: Node,
    hash: u64,
    // bit i set when coordinate i occurs in the tree
    vars: u8,
}

/// Immutable symbolic expression.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

fn const_bits(c: f64) -> u64 {
    // +0 and -0 compare equal, so they must hash equal too.
    if c == 0.0 {
        0
    } else {
        c.to_bits()
    }
}

fn node_vars(node: &Node) -> u8 {
    match node {
        Node::Const(_) => 0,
        Node::Var(v) => 1 << v.index(),
        Node::Unary(_, a) | Node::Pow(a, _) => a.0.vars,
        Node::Binary(_, a, b) => a.0.vars | b.0.vars,
    }
}

fn node_hash(node: &Node) -> u64 {
    let mut h = DefaultHasher::new();
    match node {
        Node::Const(c) => {
            0u8.hash(&mut h);
            const_bits(*c).hash(&mut h);
        }
        Node::Var(v) => {
            1u8.hash(&mut h);
            v.hash(&mut h);
        }
        Node::Unary(op, a) => {
            2u8.hash(&mut h);
            op.hash(&mut h);
            a.0.hash.hash(&mut h);
        }
        Node::Binary(op, a, b) => {
            3u8.hash(&mut h);
            op.hash(&mut h);
            a.0.hash.hash(&mut h);
            b.0.hash.hash(&mut h);
        }
        Node::Pow(a, c) => {
            4u8.hash(&mut h);
            a.0.hash.hash(&mut h);
            const_bits(*c).hash(&mut h);
        }
    }
    h.finish()
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

// Constants are finite in practice; a NaN constant is only equal to itself by
// pointer.
impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl Expr {
    /// Builds a node exactly as given, without any rewriting.
    pub fn from_node(node: Node) -> Expr {
        let hash = node_hash(&node);
        let vars = node_vars(&node);
        Expr(Arc::new(Inner { node, hash, vars }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: f64) -> Expr {
        Expr::from_node(Node::Const(c))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn var(c: Coord) -> Expr {
        Expr::from_node(Node::Var(c))
    }

    pub fn t() -> Expr {
        Expr::var(Coord::T)
    }

    pub fn x() -> Expr {
        Expr::var(Coord::X)
    }

    pub fn y() -> Expr {
        Expr::var(Coord::Y)
    }

    pub fn z() -> Expr {
        Expr::var(Coord::Z)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Structurally the constant zero. Says nothing about expressions that
    /// merely evaluate to zero.
    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    /// True if the tree mentions coordinate `c`.
    pub fn depends_on(&self, c: Coord) -> bool {
        self.0.vars & (1 << c.index()) != 0
    }

    pub fn is_constant_tree(&self) -> bool {
        self.0.vars == 0
    }

    /// Number of nodes counting shared subtrees once per occurrence.
    pub fn tree_size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Unary(_, a) | Node::Pow(a, _) => 1 + a.tree_size(),
            Node::Binary(_, a, b) => 1 + a.tree_size() + b.tree_size(),
        }
    }

    /// Every constant in the tree is finite.
    pub fn constants_finite(&self) -> bool {
        match self.node() {
            Node::Const(c) => c.is_finite(),
            Node::Var(_) => true,
            Node::Unary(_, a) => a.constants_finite(),
            Node::Pow(a, c) => c.is_finite() && a.constants_finite(),
            Node::Binary(_, a, b) => a.constants_finite() && b.constants_finite(),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        simplify::add(self, other)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        simplify::sub(self, other)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        simplify::mul(self, other)
    }

    pub fn div(&self, other: &Expr) -> Expr {
        simplify::div(self, other)
    }

    pub fn neg(&self) -> Expr {
        simplify::neg(self)
    }

    pub fn powf(&self, exponent: f64) -> Expr {
        simplify::pow(self, exponent)
    }

    pub fn powi(&self, exponent: i32) -> Expr {
        simplify::pow(self, f64::from(exponent))
    }

    pub fn scale(&self, c: f64) -> Expr {
        simplify::mul(&Expr::constant(c), self)
    }

    pub fn sin(&self) -> Expr {
        simplify::unary(UnaryOp::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        simplify::unary(UnaryOp::Cos, self)
    }

    pub fn exp(&self) -> Expr {
        simplify::unary(UnaryOp::Exp, self)
    }

    pub fn ln(&self) -> Expr {
        simplify::unary(UnaryOp::Ln, self)
    }

    pub fn sqrt(&self) -> Expr {
        simplify::unary(UnaryOp::Sqrt, self)
    }

    pub fn recip(&self) -> Expr {
        simplify::div(&Expr::one(), self)
    }

    /// Sum of a sequence, simplified pairwise.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items.into_iter().fold(Expr::zero(), |acc, e| acc.add(&e))
    }

    /// Exact partial derivative.
    pub fn diff(&self, c: Coord) -> Expr {
        diff::differentiate(self, c)
    }

    /// Rebuilds the tree bottom-up through the simplifying builders.
    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }
}

/// Free-function form of [`Expr::diff`].
pub fn differentiate(e: &Expr, c: Coord) -> Expr {
    e.diff(c)
}

/// Free-function form of [`Expr::simplify`].
pub fn simplify(e: &Expr) -> Expr {
    e.simplify()
}

/// Free-function form of [`Expr::evaluate`].
pub fn evaluate<T: crate::Real>(e: &Expr, p: &Point4<T>) -> Result<T, EvalError> {
    e.evaluate(p)
}

impl Default for Expr {
    fn default() -> Expr {
        Expr::zero()
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Expr {
        Expr::constant(c)
    }
}

impl From<Coord> for Expr {
    fn from(c: Coord) -> Expr {
        Expr::var(c)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $builder:ident) => {
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                simplify::$builder(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                simplify::$builder(&self, rhs)
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                simplify::$builder(self, &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                simplify::$builder(self, rhs)
            }
        }
        impl std::ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                simplify::$builder(&self, &Expr::constant(rhs))
            }
        }
        impl std::ops::$trait<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                simplify::$builder(self, &Expr::constant(rhs))
            }
        }
        impl std::ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                simplify::$builder(&Expr::constant(self), &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                simplify::$builder(&Expr::constant(self), rhs)
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        simplify::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        simplify::neg(self)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::sum(iter)
    }
}
