use std::collections::BTreeMap;
use std::fmt;

use super::{Blade, VectorField};
use crate::expr::{Coord, Expr, Node};

/// A differential form of fixed degree on time-extended space, stored as
/// sparse coefficients over sorted multi-indices. Absent entries are zero.
#[derive(Clone, PartialEq)]
pub struct Form {
    degree: usize,
    terms: BTreeMap<Blade, Expr>,
}

impl Form {
    pub fn zero(degree: usize) -> Form {
        Form { degree, terms: BTreeMap::new() }
    }

    pub fn scalar(f: impl Into<Expr>) -> Form {
        Form::zero(0).with(Blade::EMPTY, f.into())
    }

    /// The coordinate one-form `dc`.
    pub fn d_coord(c: Coord) -> Form {
        Form::zero(1).with(Blade::single(c), Expr::one())
    }

    pub fn dt() -> Form {
        Form::d_coord(Coord::T)
    }

    pub fn dx() -> Form {
        Form::d_coord(Coord::X)
    }

    pub fn dy() -> Form {
        Form::d_coord(Coord::Y)
    }

    pub fn dz() -> Form {
        Form::d_coord(Coord::Z)
    }

    /// `f dx^{c1} ∧ ... ∧ dx^{ck}` for coordinates in any order.
    pub fn monomial(f: impl Into<Expr>, coords: &[Coord]) -> Form {
        match Blade::from_coords(coords) {
            Some((b, s)) => Form::zero(coords.len()).with(b, f.into().scale(s)),
            None => Form::zero(coords.len()),
        }
    }

    /// One-form with spatial components `a_x dx + a_y dy + a_z dz`.
    pub fn spatial_one_form(a: [Expr; 3]) -> Form {
        let mut out = Form::zero(1);
        for (c, e) in Coord::SPATIAL.into_iter().zip(a) {
            out.add_term(Blade::single(c), e);
        }
        out
    }

    /// `a_x dy∧dz + a_y dz∧dx + a_z dx∧dy`.
    pub fn spatial_two_form(a: [Expr; 3]) -> Form {
        let [ax, ay, az] = a;
        Form::monomial(ax, &[Coord::Y, Coord::Z])
            + Form::monomial(ay, &[Coord::Z, Coord::X])
            + Form::monomial(az, &[Coord::X, Coord::Y])
    }

    /// `f dt∧dx∧dy∧dz`.
    pub fn volume(f: impl Into<Expr>) -> Form {
        Form::zero(4).with(Blade::VOLUME, f.into())
    }

    /// `f dx∧dy∧dz`.
    pub fn spatial_volume(f: impl Into<Expr>) -> Form {
        Form::zero(3).with(Blade::SPATIAL_VOLUME, f.into())
    }

    fn with(mut self, b: Blade, e: Expr) -> Form {
        self.add_term(b, e);
        self
    }

    /// Adds `e` to the coefficient of `b`. Blades of the wrong grade are a
    /// programming error.
    pub fn add_term(&mut self, b: Blade, e: Expr) {
        assert_eq!(b.grade(), self.degree, "blade {b} in a {}-form", self.degree);
        if e.is_zero() {
            return;
        }
        let sum = match self.terms.get(&b) {
            Some(old) => old.add(&e),
            None => e,
        };
        if sum.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, sum);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, b: Blade) -> Expr {
        self.terms.get(&b).cloned().unwrap_or_else(Expr::zero)
    }

    /// Coefficient of `dc1∧...∧dck` with coordinates in any order.
    pub fn component(&self, coords: &[Coord]) -> Expr {
        match Blade::from_coords(coords) {
            Some((b, s)) if b.grade() == self.degree => self.get(b).scale(s),
            _ => Expr::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Expr)> {
        self.terms.iter().map(|(b, e)| (*b, e))
    }

    pub fn exprs(&self) -> Vec<Expr> {
        self.terms.values().cloned().collect()
    }

    /// Structurally zero: no stored coefficient.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No `dt` in any stored blade.
    pub fn is_spatial(&self) -> bool {
        self.terms.keys().all(|b| b.is_spatial())
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Expr) -> Form {
        let mut out = Form::zero(self.degree);
        for (b, e) in &self.terms {
            out.add_term(*b, f(e));
        }
        out
    }

    pub fn scale(&self, f: &Expr) -> Form {
        self.map(|e| f.mul(e))
    }

    pub fn simplify(&self) -> Form {
        self.map(Expr::simplify)
    }

    /// Spatial part: drops every blade containing `dt`.
    pub fn spatial_part(&self) -> Form {
        let mut out = Form::zero(self.degree);
        for (b, e) in self.terms() {
            if b.is_spatial() {
                out.add_term(b, e.clone());
            }
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let degree = self.degree + other.degree;
        let mut out = Form::zero(degree);
        if degree > 4 {
            return out;
        }
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                if let Some((blade, s)) = a.wedge(*b) {
                    out.add_term(blade, ea.mul(eb).scale(s));
                }
            }
        }
        out
    }

    fn derivative(&self, coords: &[Coord]) -> Form {
        let mut out = Form::zero(self.degree + 1);
        if self.degree >= 4 {
            return out;
        }
        for (b, e) in &self.terms {
            for &c in coords {
                if b.contains(c) {
                    continue;
                }
                let de = e.diff(c);
                if de.is_zero() {
                    continue;
                }
                if let Some((nb, sign)) = Blade::single(c).wedge(*b) {
                    out.add_term(nb, de.scale(sign));
                }
            }
        }
        out
    }

    /// Full exterior derivative `d = d_M + dt ∧ ∂_t`.
    pub fn d(&self) -> Form {
        self.derivative(&Coord::ALL)
    }

    /// Spatial exterior derivative `d_M` (derivatives in x, y, z only).
    pub fn d_spatial(&self) -> Form {
        self.derivative(&Coord::SPATIAL)
    }

    pub fn exterior_derivative(&self, spatial_only: bool) -> Form {
        if spatial_only {
            self.d_spatial()
        } else {
            self.d()
        }
    }

    /// Interior product, contracting the first slot.
    pub fn interior(&self, x: &VectorField) -> Form {
        if self.degree == 0 {
            return Form::zero(0);
        }
        let mut out = Form::zero(self.degree - 1);
        for (b, e) in &self.terms {
            for (pos, c) in b.coords().enumerate() {
                let xc = x.component(c);
                if xc.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(b.without(c), xc.mul(e).scale(sign));
            }
        }
        out
    }

    /// Lie derivative by Cartan's formula `L_X = i(X) d + d i(X)`.
    pub fn lie(&self, x: &VectorField) -> Form {
        if self.degree == 0 {
            return Form::scalar(x.apply(&self.get(Blade::EMPTY)));
        }
        self.d().interior(x) + self.interior(x).d()
    }

    /// Spatial Lie derivative `i(X) d_M + d_M i(X)` for a spatial field.
    pub fn lie_spatial(&self, x: &VectorField) -> Form {
        if self.degree == 0 {
            return Form::scalar(x.apply_spatial(&self.get(Blade::EMPTY)));
        }
        self.d_spatial().interior(x) + self.interior(x).d_spatial()
    }

    /// Componentwise `∂_t`.
    pub fn dt_partial(&self) -> Form {
        self.map(|e| e.diff(Coord::T))
    }
}

impl std::ops::Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl std::ops::Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (b, e) in &rhs.terms {
            out.add_term(*b, e.clone());
        }
        out
    }
}

impl std::ops::Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map(Expr::neg)
    }
}

impl std::ops::Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

fn needs_parens(e: &Expr) -> bool {
    use crate::expr::BinaryOp;
    matches!(e.node(), Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..))
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (b, e)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let basis: Vec<String> = b.coords().map(|c| format!("d{}", c.name())).collect();
            let basis = basis.join("^");
            match (b.grade(), e.is_one(), needs_parens(e)) {
                (0, _, _) => write!(f, "{e}")?,
                (_, true, _) => f.write_str(&basis)?,
                (_, false, true) => write!(f, "({e}) {basis}")?,
                (_, false, false) => write!(f, "{e} {basis}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form<{}>({self})", self.degree)
    }
}
