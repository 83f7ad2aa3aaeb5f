//! Seeded random expressions, forms and fields with bounded magnitude on
//! the sampling box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Coord, Expr};
use crate::forms::{Blade, Form, VectorField};

pub struct ExprGen {
    rng: ChaCha8Rng,
}

impl ExprGen {
    pub fn new(seed: u64) -> Self {
        ExprGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn coord(&mut self, spatial: bool) -> Coord {
        if spatial {
            Coord::SPATIAL[self.rng.gen_range(0..3)]
        } else {
            Coord::ALL[self.rng.gen_range(0..4)]
        }
    }

    fn small_int(&mut self) -> f64 {
        f64::from(self.rng.gen_range(-3i32..=3))
    }

    fn factor(&mut self, spatial: bool) -> Expr {
        let a = Expr::var(self.coord(spatial));
        match self.rng.gen_range(0..5) {
            0 | 1 => a,
            2 => {
                let b = Expr::var(self.coord(spatial));
                a.add(&b.scale(self.small_int())).sin()
            }
            3 => {
                let b = Expr::var(self.coord(spatial));
                a.sub(&b).cos()
            }
            _ => a.sin().exp(),
        }
    }

    fn sample(&mut self, spatial: bool) -> Expr {
        let terms = self.rng.gen_range(1..=3);
        Expr::sum((0..terms).map(|_| {
            let mut t = Expr::constant(self.small_int().max(1.0) * if self.rng.gen_bool(0.5) { 1.0 } else { -1.0 });
            for _ in 0..self.rng.gen_range(1..=2) {
                t = t.mul(&self.factor(spatial));
            }
            t
        }))
    }

    /// Sum of up to three products of at most two factors drawn from
    /// coordinates, `sin`, `cos` and `exp∘sin`.
    pub fn expr(&mut self) -> Expr {
        self.sample(false)
    }

    /// Like [`ExprGen::expr`] without `t`.
    pub fn spatial_expr(&mut self) -> Expr {
        self.sample(true)
    }

    pub fn form(&mut self, degree: usize) -> Form {
        let mut f = Form::zero(degree);
        for b in Blade::all_of_grade(degree) {
            if degree == 0 || self.rng.gen_bool(0.7) {
                f.add_term(b, self.expr());
            }
        }
        f
    }

    pub fn vector_field(&mut self) -> VectorField {
        VectorField::new([self.expr(), self.expr(), self.expr(), self.expr()])
    }

    pub fn degree(&mut self) -> usize {
        self.rng.gen_range(0..=3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: Vec<Expr> = (0..5).map({
            let mut g = ExprGen::new(7);
            move |_| g.expr()
        }).collect();
        let mut g = ExprGen::new(7);
        for e in &a {
            assert_eq!(*e, g.expr());
        }
        let mut h = ExprGen::new(8);
        assert!(a.iter().any(|e| *e != h.expr()));
    }

    #[test]
    fn spatial_draws_are_time_independent() {
        let mut g = ExprGen::new(1);
        for _ in 0..20 {
            assert!(!g.spatial_expr().depends_on(Coord::T));
        }
    }
}
