use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point4, Tape};
use crate::Real;

use super::{Form, Multivector, VectorField};

const CHUNK: usize = 64;

/// Tensor-product sample grid over time-extended space.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid<T> {
    pub t: Vec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub z: Vec<T>,
}

/// `n` uniform points over `[0, 2π)`.
pub fn periodic_axis<T: Real>(n: usize) -> Vec<T> {
    let step = T::TAU() / T::from_usize(n.max(1)).unwrap_or_else(T::one);
    (0..n).map(|i| T::from_usize(i).unwrap_or_else(T::zero) * step).collect()
}

impl<T: Real> SampleGrid<T> {
    /// `t ∈ {0, 0.5, 1}` and `n` uniform points per spatial axis on `[0, 2π)`.
    pub fn uniform(n: usize) -> Self {
        let half = T::from_f64_lossy(0.5);
        SampleGrid { t: vec![T::zero(), half, T::one()], x: periodic_axis(n), y: periodic_axis(n), z: periodic_axis(n) }
    }

    pub fn with_times(mut self, t: Vec<T>) -> Self {
        self.t = t;
        self
    }

    pub fn len(&self) -> usize {
        self.t.len() * self.x.len() * self.y.len() * self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Point4<T>> + '_ {
        self.t.iter().flat_map(move |&t| {
            self.x.iter().flat_map(move |&x| {
                self.y.iter().flat_map(move |&y| self.z.iter().map(move |&z| Point4::new(t, x, y, z)))
            })
        })
    }

    pub fn points(&self) -> Result<PointSet<T>> {
        PointSet::new(self.iter().collect(), 0)
    }

    /// Keeps the points where `keep` holds; excluded points are counted.
    pub fn retain(&self, mut keep: impl FnMut(&Point4<T>) -> Result<bool>) -> Result<PointSet<T>> {
        let mut kept = Vec::with_capacity(self.len());
        let mut excluded = 0;
        for p in self.iter() {
            if keep(&p)? {
                kept.push(p);
            } else {
                excluded += 1;
            }
        }
        PointSet::new(kept, excluded)
    }
}

impl<T: Real> Default for SampleGrid<T> {
    fn default() -> Self {
        SampleGrid::uniform(8)
    }
}

/// Max and root-mean-square of absolute values over a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualNorm<T> {
    pub max: T,
    pub rms: T,
    pub samples: usize,
}

impl<T: Real> ResidualNorm<T> {
    pub fn zero() -> Self {
        ResidualNorm { max: T::zero(), rms: T::zero(), samples: 0 }
    }

    pub fn from_values(values: impl IntoIterator<Item = T>) -> Self {
        let mut max = T::zero();
        let mut sum_sq = T::zero();
        let mut n = 0usize;
        for v in values {
            let a = v.abs();
            if a.is_nan() || a > max {
                max = a;
            }
            sum_sq = sum_sq + a * a;
            n += 1;
        }
        let rms = if n == 0 { T::zero() } else { (sum_sq / T::from_usize(n).unwrap_or_else(T::one)).sqrt() };
        ResidualNorm { max, rms, samples: n }
    }

    /// Combines two disjoint samples.
    pub fn merge(self, other: Self) -> Self {
        let n = self.samples + other.samples;
        if n == 0 {
            return ResidualNorm::zero();
        }
        let w = |r: &Self| r.rms * r.rms * T::from_usize(r.samples).unwrap_or_else(T::zero);
        let rms = ((w(&self) + w(&other)) / T::from_usize(n).unwrap_or_else(T::one)).sqrt();
        let max = if self.max.is_nan() || other.max.is_nan() { T::nan() } else { self.max.max(other.max) };
        ResidualNorm { max, rms, samples: n }
    }

    pub fn within(&self, tol: T) -> bool {
        self.max <= tol
    }
}

/// Sample points retained after exclusions.
#[derive(Clone, Debug)]
pub struct PointSet<T> {
    points: Vec<Point4<T>>,
    excluded: usize,
}

impl<T: Real> PointSet<T> {
    pub fn new(points: Vec<Point4<T>>, excluded: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid { excluded });
        }
        Ok(PointSet { points, excluded })
    }

    pub fn points(&self) -> &[Point4<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    /// Subset of points satisfying `keep`, adding to the exclusion count.
    pub fn filter(&self, mut keep: impl FnMut(&Point4<T>) -> bool) -> Result<Self> {
        let kept: Vec<_> = self.points.iter().copied().filter(|p| keep(p)).collect();
        let excluded = self.excluded + self.points.len() - kept.len();
        PointSet::new(kept, excluded)
    }

    /// Values of every expression at every point, point-major.
    pub fn evaluate(&self, exprs: &[Expr], context: &str) -> Result<Vec<Vec<T>>> {
        let tape = Tape::compile(exprs);
        let chunks: Vec<Result<Vec<Vec<T>>>> = self
            .points
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut scratch = Vec::new();
                chunk
                    .iter()
                    .map(|p| {
                        let mut out = vec![T::zero(); exprs.len()];
                        tape.eval_into(p, &mut scratch, &mut out).map_err(|e| Error::eval(context, e))?;
                        Ok(out)
                    })
                    .collect()
            })
            .collect();
        let mut all = Vec::with_capacity(self.points.len());
        for c in chunks {
            all.extend(c?);
        }
        Ok(all)
    }

    /// Norm over every expression at every retained point.
    pub fn norm(&self, exprs: &[Expr], context: &str) -> Result<ResidualNorm<T>> {
        if exprs.is_empty() {
            return Ok(ResidualNorm::zero());
        }
        let tape = Tape::compile(exprs);
        let chunks: Vec<Result<ResidualNorm<T>>> = self
            .points
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut scratch = Vec::new();
                let mut out = vec![T::zero(); exprs.len()];
                let mut vals = Vec::with_capacity(chunk.len() * exprs.len());
                for p in chunk {
                    tape.eval_into(p, &mut scratch, &mut out).map_err(|e| Error::eval(context, e))?;
                    vals.extend_from_slice(&out);
                }
                Ok(ResidualNorm::from_values(vals))
            })
            .collect();
        let mut acc = ResidualNorm::zero();
        for c in chunks {
            acc = acc.merge(c?);
        }
        Ok(acc)
    }
}

/// Max/rms of all stored component values of a form over the points.
pub fn residual_norm<T: Real>(a: &Form, points: &PointSet<T>) -> Result<ResidualNorm<T>> {
    points.norm(&a.exprs(), &format!("{}-form residual", a.degree()))
}

pub fn scalar_residual<T: Real>(e: &Expr, points: &PointSet<T>) -> Result<ResidualNorm<T>> {
    points.norm(std::slice::from_ref(e), "scalar residual")
}

pub fn vector_residual<T: Real>(v: &VectorField, points: &PointSet<T>) -> Result<ResidualNorm<T>> {
    let exprs: Vec<Expr> = v.exprs().into_iter().filter(|e| !e.is_zero()).collect();
    points.norm(&exprs, "vector residual")
}

pub fn multivector_residual<T: Real>(m: &Multivector, points: &PointSet<T>) -> Result<ResidualNorm<T>> {
    points.norm(&m.exprs(), &format!("{}-vector residual", m.degree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Coord;

    #[test]
    fn default_grid_shape() {
        let g = SampleGrid::<f64>::default();
        assert_eq!(g.len(), 3 * 8 * 8 * 8);
        assert_eq!(g.x[0], 0.0);
        assert!((g.x[1] - std::f64::consts::TAU / 8.0).abs() < 1e-15);
    }

    #[test]
    fn norms_of_trivial_forms() {
        let pts = SampleGrid::<f64>::uniform(4).points().unwrap();
        let z = residual_norm(&Form::zero(2), &pts).unwrap();
        assert_eq!((z.max, z.rms), (0.0, 0.0));
        let dx = residual_norm(&Form::d_coord(Coord::X), &pts).unwrap();
        assert_eq!((dx.max, dx.rms), (1.0, 1.0));
    }

    #[test]
    fn merge_matches_single_pass() {
        let vals: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let whole = ResidualNorm::from_values(vals.iter().copied());
        let split = ResidualNorm::from_values(vals[..33].iter().copied())
            .merge(ResidualNorm::from_values(vals[33..].iter().copied()));
        assert_eq!(whole.max, split.max);
        assert!((whole.rms - split.rms).abs() < 1e-15);
        assert_eq!(split.samples, 100);
    }

    #[test]
    fn empty_after_exclusion_is_an_error() {
        let g = SampleGrid::<f64>::uniform(2);
        assert!(matches!(g.retain(|_| Ok(false)), Err(Error::EmptyGrid { excluded: 24 })));
    }

    #[test]
    fn parallel_norm_is_deterministic() {
        let pts = SampleGrid::<f64>::uniform(8).points().unwrap();
        let e = crate::expr::parse_expression("sin(x*y) + t*cos(z)").unwrap();
        let a = scalar_residual(&e, &pts).unwrap();
        let b = scalar_residual(&e, &pts).unwrap();
        assert_eq!(a.rms.to_bits(), b.rms.to_bits());
    }

    #[test]
    fn single_precision_norm() {
        let pts = SampleGrid::<f32>::uniform(4).points().unwrap();
        let r = residual_norm(&Form::d_coord(Coord::Y), &pts).unwrap();
        assert_eq!(r.max, 1.0f32);
    }
}
