use std::cmp::Ordering;
use std::fmt;

use crate::expr::Coord;

/// A sorted multi-index over `(t, x, y, z)`, stored as a bitmask with
/// `t` in bit 0 and `z` in bit 3.
///
/// Blades order by grade first, then lexicographically by their index
/// lists, so a 2-form iterates as `tx, ty, tz, xy, xz, yz`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u8);

impl Blade {
    pub const EMPTY: Blade = Blade(0);
    pub const VOLUME: Blade = Blade(0b1111);
    pub const SPATIAL_VOLUME: Blade = Blade(0b1110);

    pub fn from_bits(bits: u8) -> Blade {
        Blade(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(c: Coord) -> Blade {
        Blade(1 << c.index())
    }

    /// Builds a blade from distinct coordinates in any order, returning the
    /// sign of the sorting permutation. Repeated coordinates give `None`.
    pub fn from_coords(coords: &[Coord]) -> Option<(Blade, f64)> {
        let mut bits = 0u8;
        let mut inversions = 0;
        for (n, c) in coords.iter().enumerate() {
            let b = 1u8 << c.index();
            if bits & b != 0 {
                return None;
            }
            inversions += coords[..n].iter().filter(|p| p.index() > c.index()).count();
            bits |= b;
        }
        Some((Blade(bits), if inversions % 2 == 0 { 1.0 } else { -1.0 }))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, c: Coord) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn coords(self) -> impl Iterator<Item = Coord> {
        Coord::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn is_spatial(self) -> bool {
        !self.contains(Coord::T)
    }

    pub fn without(self, c: Coord) -> Blade {
        Blade(self.0 & !(1 << c.index()))
    }

    /// Number of indices of `self` strictly below `c`.
    pub fn count_below(self, c: Coord) -> usize {
        (self.0 & ((1u8 << c.index()) - 1)).count_ones() as usize
    }

    /// `dx^self ∧ dx^other` as `(blade, sign)`, or `None` if they overlap.
    pub fn wedge(self, other: Blade) -> Option<(Blade, f64)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: usize = other.coords().map(|c| self.grade() - self.count_below(c)).sum();
        Some((Blade(self.0 | other.0), if inversions % 2 == 0 { 1.0 } else { -1.0 }))
    }

    /// All blades of a grade, in canonical order.
    pub fn all_of_grade(grade: usize) -> Vec<Blade> {
        let mut v: Vec<Blade> = (0u8..16).map(Blade).filter(|b| b.grade() == grade).collect();
        v.sort();
        v
    }

    fn key(self) -> (usize, [u8; 4]) {
        let mut k = [u8::MAX; 4];
        for (slot, c) in k.iter_mut().zip(self.coords()) {
            *slot = c.index() as u8;
        }
        (self.grade(), k)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.coords().map(Coord::name).collect();
        f.write_str(&names.join(""))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Blade({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let names: Vec<String> = Blade::all_of_grade(2).iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["tx", "ty", "tz", "xy", "xz", "yz"]);
        assert!(Blade::single(Coord::Z) < Blade::from_coords(&[Coord::T, Coord::X]).unwrap().0);
    }

    #[test]
    fn wedge_signs() {
        let (x, y, z) = (Blade::single(Coord::X), Blade::single(Coord::Y), Blade::single(Coord::Z));
        assert_eq!(x.wedge(y).unwrap().1, 1.0);
        assert_eq!(y.wedge(x).unwrap().1, -1.0);
        let (zx, s) = z.wedge(x).unwrap();
        assert_eq!((zx.to_string(), s), ("xz".to_string(), -1.0));
        let xy = x.wedge(y).unwrap().0;
        // dz ∧ dx∧dy = dx∧dy∧dz
        assert_eq!(z.wedge(xy).unwrap().1, 1.0);
        assert!(x.wedge(x).is_none());
    }

    #[test]
    fn sorting_sign_matches_wedge() {
        let (b, s) = Blade::from_coords(&[Coord::Z, Coord::T, Coord::Y]).unwrap();
        assert_eq!(b.to_string(), "tyz");
        // (z,t,y) -> (t,y,z) needs two transpositions
        assert_eq!(s, 1.0);
        assert!(Blade::from_coords(&[Coord::X, Coord::X]).is_none());
    }
}
