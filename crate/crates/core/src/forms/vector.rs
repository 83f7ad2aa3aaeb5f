use std::fmt;

use super::Form;
use crate::expr::{Coord, Expr};

/// A vector field on time-extended space with components ordered
/// `(t, x, y, z)`.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    c: [Expr; 4],
}

impl VectorField {
    pub fn new(c: [Expr; 4]) -> VectorField {
        VectorField { c }
    }

    pub fn zero() -> VectorField {
        VectorField::new([Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero()])
    }

    /// Spatial field with vanishing `t` component.
    pub fn spatial(v: [Expr; 3]) -> VectorField {
        let [x, y, z] = v;
        VectorField::new([Expr::zero(), x, y, z])
    }

    /// The suspension `∂_t + v` of a spatial field.
    pub fn suspended(v: &VectorField) -> VectorField {
        let mut out = v.clone();
        out.c[0] = Expr::one();
        out
    }

    /// The coordinate field `∂_c`.
    pub fn coordinate(c: Coord) -> VectorField {
        let mut out = VectorField::zero();
        out.c[c.index()] = Expr::one();
        out
    }

    pub fn component(&self, c: Coord) -> Expr {
        self.c[c.index()].clone()
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.c
    }

    pub fn spatial_components(&self) -> [Expr; 3] {
        [self.c[1].clone(), self.c[2].clone(), self.c[3].clone()]
    }

    /// Drops the `t` component.
    pub fn spatial_part(&self) -> VectorField {
        let mut out = self.clone();
        out.c[0] = Expr::zero();
        out
    }

    pub fn is_spatial(&self) -> bool {
        self.c[0].is_zero()
    }

    pub fn is_suspended(&self) -> bool {
        self.c[0].is_one()
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Expr) -> VectorField {
        VectorField::new([f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3])])
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        self.map(|e| f.mul(e))
    }

    pub fn simplify(&self) -> VectorField {
        self.map(Expr::simplify)
    }

    /// Directional derivative `X(f) = X^i ∂_i f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::sum(Coord::ALL.into_iter().map(|c| self.c[c.index()].mul(&f.diff(c))))
    }

    /// `v·∇f` using only the spatial components.
    pub fn apply_spatial(&self, f: &Expr) -> Expr {
        Expr::sum(Coord::SPATIAL.into_iter().map(|c| self.c[c.index()].mul(&f.diff(c))))
    }

    /// Lie bracket `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let mut c: [Expr; 4] = Default::default();
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = self.apply(&other.c[i]).sub(&other.apply(&self.c[i]));
        }
        VectorField::new(c)
    }

    /// Spatial divergence `∂_x X^x + ∂_y X^y + ∂_z X^z`.
    pub fn divergence(&self) -> Expr {
        Expr::sum(Coord::SPATIAL.into_iter().map(|c| self.c[c.index()].diff(c)))
    }

    /// Spatial curl of the `(x, y, z)` components, as a spatial field.
    pub fn curl(&self) -> VectorField {
        let [_, vx, vy, vz] = &self.c;
        VectorField::spatial([
            vz.diff(Coord::Y).sub(&vy.diff(Coord::Z)),
            vx.diff(Coord::Z).sub(&vz.diff(Coord::X)),
            vy.diff(Coord::X).sub(&vx.diff(Coord::Y)),
        ])
    }

    /// Euclidean dot product of the spatial parts.
    pub fn dot(&self, other: &VectorField) -> Expr {
        Expr::sum((1..4).map(|i| self.c[i].mul(&other.c[i])))
    }

    /// Cross product of the spatial parts.
    pub fn cross(&self, other: &VectorField) -> VectorField {
        let [_, a1, a2, a3] = &self.c;
        let [_, b1, b2, b3] = &other.c;
        VectorField::spatial([a2.mul(b3).sub(&a3.mul(b2)), a3.mul(b1).sub(&a1.mul(b3)), a1.mul(b2).sub(&a2.mul(b1))])
    }

    /// Spatial gradient of a scalar.
    pub fn gradient(f: &Expr) -> VectorField {
        VectorField::spatial([f.diff(Coord::X), f.diff(Coord::Y), f.diff(Coord::Z)])
    }

    /// Index lowering by the Euclidean metric on the spatial part.
    pub fn flat(&self) -> Form {
        Form::spatial_one_form(self.spatial_components())
    }

    pub fn exprs(&self) -> Vec<Expr> {
        self.c.to_vec()
    }
}

/// `v♭` for a spatial field under the Euclidean metric.
pub fn musical_flat(v: &VectorField) -> Form {
    v.flat()
}

impl std::ops::Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&rhs.c) {
            *a = Expr::add(a, b);
        }
        VectorField::new(c)
    }
}

impl std::ops::Add for VectorField {
    type Output = VectorField;
    fn add(self, rhs: VectorField) -> VectorField {
        &self + &rhs
    }
}

impl std::ops::Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&rhs.c) {
            *a = Expr::sub(a, b);
        }
        VectorField::new(c)
    }
}

impl std::ops::Sub for VectorField {
    type Output = VectorField;
    fn sub(self, rhs: VectorField) -> VectorField {
        &self - &rhs
    }
}

impl std::ops::Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.map(Expr::neg)
    }
}

impl std::ops::Neg for VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        -&self
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}, {})", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField{self}")
    }
}
