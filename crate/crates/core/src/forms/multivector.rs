use std::collections::BTreeMap;
use std::fmt;

use super::{Blade, Form, VectorField};
use crate::expr::{Coord, Expr};

/// Antisymmetric contravariant tensor, stored like [`Form`] over sorted
/// multi-indices. Contractions with forms act on the first slot.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    degree: usize,
    terms: BTreeMap<Blade, Expr>,
}

pub type Bivector = Multivector;
pub type Trivector = Multivector;

impl Multivector {
    pub fn zero(degree: usize) -> Multivector {
        Multivector { degree, terms: BTreeMap::new() }
    }

    pub fn from_vector(v: &VectorField) -> Multivector {
        let mut out = Multivector::zero(1);
        for c in Coord::ALL {
            out.add_term(Blade::single(c), v.component(c));
        }
        out
    }

    pub fn to_vector(&self) -> VectorField {
        assert_eq!(self.degree, 1, "to_vector on a {}-vector", self.degree);
        VectorField::new(Coord::ALL.map(|c| self.get(Blade::single(c))))
    }

    /// Bivector from the upper triangle `p[i][j]`, `i < j`.
    pub fn bivector(p: &[[Expr; 4]; 4]) -> Bivector {
        let mut out = Multivector::zero(2);
        for i in 0..4 {
            for j in (i + 1)..4 {
                if let Some((b, s)) = Blade::from_coords(&[Coord::ALL[i], Coord::ALL[j]]) {
                    out.add_term(b, p[i][j].scale(s));
                }
            }
        }
        out
    }

    pub fn add_term(&mut self, b: Blade, e: Expr) {
        assert_eq!(b.grade(), self.degree, "blade {b} in a {}-vector", self.degree);
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

    /// Component with indices in any order, antisymmetrised.
    pub fn component(&self, coords: &[Coord]) -> Expr {
        match Blade::from_coords(coords) {
            Some((b, s)) if b.grade() == self.degree => self.get(b).scale(s),
            _ => Expr::zero(),
        }
    }

    /// `Λ^{ij}` of a bivector.
    pub fn entry(&self, i: Coord, j: Coord) -> Expr {
        self.component(&[i, j])
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Expr)> {
        self.terms.iter().map(|(b, e)| (*b, e))
    }

    pub fn exprs(&self) -> Vec<Expr> {
        self.terms.values().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Expr) -> Multivector {
        let mut out = Multivector::zero(self.degree);
        for (b, e) in &self.terms {
            out.add_term(*b, f(e));
        }
        out
    }

    pub fn scale(&self, f: &Expr) -> Multivector {
        self.map(|e| f.mul(e))
    }

    pub fn simplify(&self) -> Multivector {
        self.map(Expr::simplify)
    }

    pub fn wedge(&self, other: &Multivector) -> Multivector {
        let degree = self.degree + other.degree;
        let mut out = Multivector::zero(degree);
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

    /// `P(α)^j = α_i P^{ij}` for a bivector and a one-form.
    pub fn contract(&self, alpha: &Form) -> VectorField {
        assert_eq!(self.degree, 2, "contract needs a bivector");
        assert_eq!(alpha.degree(), 1, "contract needs a one-form");
        VectorField::new(Coord::ALL.map(|j| {
            Expr::sum(Coord::ALL.into_iter().map(|i| alpha.get(Blade::single(i)).mul(&self.entry(i, j))))
        }))
    }

    /// `P(α, β) = α_i β_j P^{ij}`.
    pub fn pair(&self, alpha: &Form, beta: &Form) -> Expr {
        let v = self.contract(alpha);
        Expr::sum(Coord::ALL.into_iter().map(|j| v.component(j).mul(&beta.get(Blade::single(j)))))
    }

    /// Lie derivative of a bivector along `e`:
    /// `(L_E Λ)^{ij} = E(Λ^{ij}) − Λ^{lj} ∂_l E^i − Λ^{il} ∂_l E^j`.
    pub fn lie_bivector(&self, e: &VectorField) -> Bivector {
        assert_eq!(self.degree, 2, "lie_bivector needs a bivector");
        let mut out = Multivector::zero(2);
        for b in Blade::all_of_grade(2) {
            let mut idx = b.coords();
            let (i, j) = match (idx.next(), idx.next()) {
                (Some(i), Some(j)) => (i, j),
                _ => continue,
            };
            let mut terms = vec![e.apply(&self.get(b))];
            for l in Coord::ALL {
                terms.push(self.entry(l, j).mul(&e.component(i).diff(l)).neg());
                terms.push(self.entry(i, l).mul(&e.component(j).diff(l)).neg());
            }
            out.add_term(b, Expr::sum(terms));
        }
        out
    }
}

impl std::ops::Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.degree, rhs.degree, "adding multivectors of different degree");
        let mut out = self.clone();
        for (b, e) in &rhs.terms {
            out.add_term(*b, e.clone());
        }
        out
    }
}

impl std::ops::Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl std::ops::Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.map(Expr::neg)
    }
}

impl std::ops::Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl std::ops::Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (b, e)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let basis: Vec<String> = b.coords().map(|c| format!("∂{}", c.name())).collect();
            write!(f, "({e}) {}", basis.join("^"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector<{}>({self})", self.degree)
    }
}
