use std::collections::HashMap;

use super::eval::{apply_binary, apply_pow, apply_unary};
use super::{BinaryOp, Coord, EvalError, Expr, Node, Point4, UnaryOp};
use crate::Real;

#[derive(Clone, Copy, Debug)]
enum Op {
    Const(f64),
    Var(Coord),
    Unary(UnaryOp, usize),
    Binary(BinaryOp, usize, usize),
    Pow(usize, f64),
}

/// A batch of expressions flattened into one straight-line program.
///
/// Structurally equal subtrees are stored once, so a batch of form
/// components that share factors evaluates each factor a single time per
/// point.
#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    sources: Vec<Expr>,
    outputs: Vec<usize>,
}

impl Tape {
    pub fn compile(exprs: &[Expr]) -> Tape {
        let mut tape = Tape { ops: Vec::new(), sources: Vec::new(), outputs: Vec::with_capacity(exprs.len()) };
        let mut seen: HashMap<Expr, usize> = HashMap::new();
        for e in exprs {
            let slot = tape.intern(e, &mut seen);
            tape.outputs.push(slot);
        }
        tape
    }

    fn intern(&mut self, e: &Expr, seen: &mut HashMap<Expr, usize>) -> usize {
        if let Some(&slot) = seen.get(e) {
            return slot;
        }
        let op = match e.node() {
            Node::Const(c) => Op::Const(*c),
            Node::Var(v) => Op::Var(*v),
            Node::Unary(op, a) => Op::Unary(*op, self.intern(a, seen)),
            Node::Binary(op, a, b) => {
                let ia = self.intern(a, seen);
                let ib = self.intern(b, seen);
                Op::Binary(*op, ia, ib)
            }
            Node::Pow(a, c) => Op::Pow(self.intern(a, seen), *c),
        };
        self.ops.push(op);
        self.sources.push(e.clone());
        let slot = self.ops.len() - 1;
        seen.insert(e.clone(), slot);
        slot
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Distinct subexpressions after sharing.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Evaluates every output at `p`. `scratch` is resized as needed and can
    /// be reused across calls.
    pub fn eval_into<T: Real>(&self, p: &Point4<T>, scratch: &mut Vec<T>, out: &mut [T]) -> Result<(), EvalError> {
        assert_eq!(out.len(), self.outputs.len(), "output slice length");
        scratch.clear();
        scratch.reserve(self.ops.len());
        for (i, op) in self.ops.iter().enumerate() {
            let value = match *op {
                Op::Const(c) => Ok(T::from_f64_lossy(c)),
                Op::Var(v) => Ok(p.get(v)),
                Op::Unary(op, a) => apply_unary(op, scratch[a]),
                Op::Binary(op, a, b) => apply_binary(op, scratch[a], scratch[b]),
                Op::Pow(a, c) => apply_pow(scratch[a], c),
            };
            match value {
                Ok(v) => scratch.push(v),
                Err(kind) => return Err(EvalError::new(kind, &self.sources[i], p)),
            }
        }
        for (o, &slot) in out.iter_mut().zip(&self.outputs) {
            *o = scratch[slot];
        }
        Ok(())
    }

    pub fn eval<T: Real>(&self, p: &Point4<T>) -> Result<Vec<T>, EvalError> {
        let mut out = vec![T::zero(); self.outputs.len()];
        self.eval_into(p, &mut Vec::new(), &mut out)?;
        Ok(out)
    }
}
