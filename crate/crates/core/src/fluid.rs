//! Flow scenarios, the symplectic structure of an advected frozen-in field,
//! the symmetry hierarchy it generates, the Nambu bracket, Euler-flow
//! identities and the helicity integral.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Coord, Expr, Point4, Tape};
use crate::forms::{Form, PointSet, SampleGrid, VectorField};
use crate::report::{nonvanishing, vanishing, CheckRecord, Report, Tolerances};
use crate::Real;

/// A kinematic flow: velocity `v`, frozen-in field `B`, advected function
/// `φ`, seed Hamiltonian `h₁` and optional extras, with its sampling domain.
#[derive(Clone, Debug)]
pub struct FlowScenario<T> {
    pub name: String,
    pub v: VectorField,
    pub b: VectorField,
    pub phi: Expr,
    pub h1: Expr,
    pub p: Option<Expr>,
    pub lambdas: Vec<Expr>,
    pub phi_k: Vec<Expr>,
    pub grid: SampleGrid<T>,
    pub rho_floor: T,
    pub tol: Tolerances<T>,
}

impl<T: Real> FlowScenario<T> {
    pub fn new(name: impl Into<String>, v: [Expr; 3], b: [Expr; 3], phi: Expr, h1: Expr) -> Self {
        FlowScenario {
            name: name.into(),
            v: VectorField::spatial(v),
            b: VectorField::spatial(b),
            phi,
            h1,
            p: None,
            lambdas: Vec::new(),
            phi_k: Vec::new(),
            grid: SampleGrid::default(),
            rho_floor: T::from_f64_lossy(1e-6),
            tol: Tolerances::default(),
        }
    }

    pub fn with_pressure(mut self, p: Expr) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_grid(mut self, grid: SampleGrid<T>) -> Self {
        self.grid = grid;
        self
    }

    /// `∂_t + v`.
    pub fn suspended_velocity(&self) -> VectorField {
        VectorField::suspended(&self.v)
    }

    /// `ρ_φ = B(φ)`.
    pub fn rho(&self) -> Expr {
        self.b.apply_spatial(&self.phi)
    }

    /// Every grid point.
    pub fn all_points(&self) -> Result<PointSet<T>> {
        self.grid.points()
    }

    /// Grid points with `|ρ_φ| ≥ ρ_floor`.
    pub fn retained_points(&self) -> Result<PointSet<T>> {
        let tape = Tape::compile(&[self.rho()]);
        let mut scratch = Vec::new();
        let mut out = [T::zero()];
        self.grid.retain(|p| {
            tape.eval_into(p, &mut scratch, &mut out).map_err(|e| Error::eval("density", e))?;
            Ok(out[0].abs() >= self.rho_floor)
        })
    }

    /// `ρ_φ^{-1} ∇φ · (∇f × ∇g)`.
    pub fn nambu_bracket(&self, f: &Expr, g: &Expr) -> Expr {
        nambu_bracket(f, g, self)
    }

    /// `s ρ_φ^{-1} ∇φ × ∇f`, the divergence-free field generated by `f`.
    pub fn curl_field(&self, f: &Expr, sign: f64) -> VectorField {
        let rho = self.rho();
        VectorField::gradient(&self.phi).cross(&VectorField::gradient(f)).scale(&rho.recip().scale(sign))
    }
}

/// Residuals of the kinematic preconditions: incompressibility, frozen-in
/// `B`, advected `φ`, and the density floor.
pub fn verify_scenario<T: Real>(s: &FlowScenario<T>) -> Result<Report> {
    let pts = s.retained_points()?;
    let tol = s.tol.structural;
    let x = s.suspended_velocity();
    let mut rep = Report::new(&s.name);
    rep.push(vanishing("scenario.div_v", "∇·v = 0", &[s.v.divergence()], &pts, tol));
    rep.push(vanishing("scenario.div_b", "∇·B = 0", &[s.b.divergence()], &pts, tol));
    rep.push(vanishing("scenario.frozen_b", "∂_t B + [v, B] = 0", &x.bracket(&s.b).exprs(), &pts, tol));
    rep.push(vanishing("scenario.advected_phi", "∂_t φ + v(φ) = 0", &[x.apply(&s.phi)], &pts, tol));
    let rho = pts.evaluate(&[s.rho()], "density")?;
    let min_rho = rho.iter().map(|r| r[0].abs()).fold(T::infinity(), |a, b| a.min(b));
    rep.push(
        CheckRecord::nonzero(
            "scenario.density_floor",
            "|ρ_φ| ≥ ρ_floor",
            crate::forms::ResidualNorm { max: min_rho, rms: min_rho, samples: pts.len() },
            s.rho_floor,
            pts.excluded(),
        )
        .with_note(format!("{} of {} points excluded", pts.excluded(), s.grid.len())),
    );
    Ok(rep)
}

/// The symplectic structure built from `(v, B, φ)`.
#[derive(Clone, Debug)]
pub struct Symplectic {
    /// `ω = B_x dy∧dz + B_y dz∧dx + B_z dx∧dy`.
    pub omega: Form,
    /// `σ = i(v)ω − d_M φ`.
    pub sigma: Form,
    /// `Ω = ω + σ∧dt`.
    pub big_omega: Form,
    pub rho: Expr,
    /// `ρ dt∧dx∧dy∧dz`.
    pub mu: Form,
    /// `ρ dx∧dy∧dz`.
    pub mu_m: Form,
}

pub fn build_symplectic<T: Real>(s: &FlowScenario<T>) -> Result<Symplectic> {
    s.retained_points()?;
    let omega = Form::spatial_two_form(s.b.spatial_components());
    let sigma = omega.interior(&s.v) - Form::scalar(s.phi.clone()).d_spatial();
    let big_omega = &omega + &sigma.wedge(&Form::dt());
    let rho = s.rho();
    Ok(Symplectic {
        omega,
        sigma,
        big_omega,
        mu: Form::volume(rho.clone()),
        mu_m: Form::spatial_volume(rho.clone()),
        rho,
    })
}

/// Closure, Hamiltonian relation and volume identities of `Ω`.
pub fn check_symplectic<T: Real>(s: &FlowScenario<T>, sym: &Symplectic) -> Result<Vec<CheckRecord>> {
    let pts = s.retained_points()?;
    let tol = s.tol.structural;
    let x = s.suspended_velocity();
    let dphi = Form::scalar(s.phi.clone()).d();
    let half_sq = sym.big_omega.wedge(&sym.big_omega).scale(&Expr::constant(0.5));
    let mu_m_from_mu = sym.mu.interior(&VectorField::coordinate(Coord::T));
    let mu_m_wedge = Form::scalar(s.phi.clone()).d_spatial().wedge(&sym.omega);
    Ok(vec![
        vanishing("symplectic.closed", "dΩ = 0", &sym.big_omega.d().exprs(), &pts, tol),
        vanishing(
            "symplectic.hamiltonian",
            "i(∂_t+v)Ω = dφ",
            &(sym.big_omega.interior(&x) - dphi).exprs(),
            &pts,
            tol,
        ),
        vanishing("symplectic.volume", "½Ω∧Ω = ρ_φ dt∧dx∧dy∧dz", &(half_sq - sym.mu.clone()).exprs(), &pts, tol),
        vanishing("symplectic.spatial_volume", "i(∂_t)μ = μ_M", &(mu_m_from_mu - sym.mu_m.clone()).exprs(), &pts, tol),
        vanishing("symplectic.density", "d_Mφ∧ω = μ_M", &(mu_m_wedge - sym.mu_m.clone()).exprs(), &pts, tol),
        vanishing(
            "symplectic.invariant_volume",
            "L_{∂_t+v} μ = 0",
            &sym.mu.lie(&x).exprs(),
            &pts,
            s.tol.pipeline,
        ),
    ])
}

/// Residual of the symmetry condition
/// `[∂_t+v, ξ∂_t+u] = (ξ_t + v(ξ))(∂_t+v)` for `U = ξ∂_t + u`.
pub fn check_symmetry<T: Real>(u: &VectorField, s: &FlowScenario<T>, id: &str) -> Result<CheckRecord> {
    let pts = s.retained_points()?;
    let x = s.suspended_velocity();
    let xi = u.component(Coord::T);
    let residual = &x.bracket(u) - &x.scale(&x.apply(&xi));
    let rec = vanishing(id, "[∂_t+v, U] = (ξ_t + v(ξ))(∂_t+v)", &residual.exprs(), &pts, s.tol.pipeline);
    let verdict = if rec.pass { "symmetry" } else { "not a symmetry" };
    Ok(rec.with_note(verdict))
}

/// The symmetry hierarchy generated by `h₁`. Index `k` is stored at `k-1`.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    /// Resolved orientation `s`: `W_k = s ρ⁻¹ ∇φ × ∇h_k`.
    pub sign: f64,
    /// The level `k` whose bracket-generated field fixed `sign`, if any.
    pub sign_source: Option<usize>,
    pub u0: VectorField,
    pub w: Vec<VectorField>,
    pub h: Vec<Expr>,
    pub xi: Vec<Expr>,
    pub rho: Expr,
}

impl Hierarchy {
    pub fn depth(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self, k: usize) -> &VectorField {
        &self.w[k - 1]
    }

    pub fn h(&self, k: usize) -> &Expr {
        &self.h[k - 1]
    }

    pub fn xi(&self, k: usize) -> &Expr {
        &self.xi[k - 1]
    }
}

/// Builds `u₀ = −ρ⁻¹B`, `W₁ = ρ⁻¹∇h₁×∇φ`, `W₂ = [W₁, u₀]`,
/// `W_k = [W₁, W_{k−1}]`, `h₂ = ξ₁`, `h_k = W₁(h_{k−1})`, `ξ_k = −u₀(h_k)`,
/// and resolves the orientation against the cross-product formula.
pub fn build_hierarchy<T: Real>(s: &FlowScenario<T>, depth: usize) -> Result<Hierarchy> {
    if depth < 1 {
        return Err(Error::Invalid("hierarchy depth must be at least 1".into()));
    }
    let pts = s.retained_points()?;
    let x = s.suspended_velocity();
    let conserved = pts.norm(&[x.apply(&s.h1)], "h1 advection")?;
    if !(conserved.max <= s.tol.pipeline) {
        return Err(Error::NotConserved { what: "h1".into(), max: conserved.max.to_f64_lossy() });
    }
    let rho = s.rho();
    let u0 = s.b.scale(&rho.recip()).map(|e| e.neg());
    let w1 = VectorField::gradient(&s.h1).cross(&VectorField::gradient(&s.phi)).scale(&rho.recip());
    let mut w = vec![w1.clone()];
    let mut h = vec![s.h1.clone()];
    let mut xi = vec![u0.apply_spatial(&s.h1).neg()];
    for k in 2..=depth {
        let prev = w.last().cloned().unwrap_or_else(VectorField::zero);
        let wk = if k == 2 { w1.bracket(&u0) } else { w1.bracket(&prev) };
        let hk = if k == 2 { xi[0].clone() } else { w1.apply_spatial(&h[k - 2]) };
        xi.push(u0.apply_spatial(&hk).neg());
        w.push(wk);
        h.push(hk);
    }

    let mut sign = -1.0;
    let mut sign_source = None;
    for k in 2..=depth {
        let wk = &w[k - 1];
        let size = pts.norm(&wk.exprs(), "W_k")?;
        if size.max <= s.tol.structural {
            continue;
        }
        let c = s.curl_field(&h[k - 1], 1.0);
        let r_minus = pts.norm(&(wk + &c).exprs(), "orientation")?;
        let r_plus = pts.norm(&(wk - &c).exprs(), "orientation")?;
        sign = if r_plus.max < r_minus.max { 1.0 } else { -1.0 };
        sign_source = Some(k);
        break;
    }
    Ok(Hierarchy { sign, sign_source, u0, w, h, xi, rho })
}

/// Per-level residuals: cross-product formula, symmetry, volume
/// preservation, Clebsch form and conservation of `h_k`.
pub fn check_hierarchy<T: Real>(s: &FlowScenario<T>, hier: &Hierarchy) -> Result<Vec<CheckRecord>> {
    let pts = s.retained_points()?;
    let tol = s.tol.pipeline;
    let x = s.suspended_velocity();
    let mu_m = Form::spatial_volume(hier.rho.clone());
    let mut out = Vec::new();
    for k in 1..=hier.depth() {
        let wk = hier.w(k);
        let hk = hier.h(k);
        let curl = s.curl_field(hk, hier.sign);
        out.push(vanishing(format!("hierarchy.curl_formula.{k}"), "W_k = s ρ⁻¹ ∇φ × ∇h_k", &(wk - &curl).exprs(), &pts, tol));
        out.push(vanishing(format!("hierarchy.symmetry.{k}"), "[∂_t+v, W_k] = 0", &x.bracket(wk).exprs(), &pts, tol));
        out.push(vanishing(
            format!("hierarchy.volume_preserving.{k}"),
            "L_{W_k} μ_M = 0",
            &mu_m.lie_spatial(wk).exprs(),
            &pts,
            tol,
        ));
        let potential = VectorField::gradient(hk).scale(&s.phi);
        let clebsch = &wk.scale(&hier.rho) - &potential.curl().scale(&Expr::constant(hier.sign));
        out.push(vanishing(format!("hierarchy.clebsch.{k}"), "ρ_φ W_k = s ∇×(φ∇h_k)", &clebsch.exprs(), &pts, tol));
        out.push(vanishing(format!("hierarchy.conserved_h.{k}"), "(∂_t+v) h_k = 0", &[x.apply(hk)], &pts, tol));
    }
    Ok(out)
}

/// `{f, g}_φ = ρ_φ^{-1} ∇φ · (∇f × ∇g)`.
pub fn nambu_bracket<T: Real>(f: &Expr, g: &Expr, s: &FlowScenario<T>) -> Expr {
    let cross = VectorField::gradient(f).cross(&VectorField::gradient(g));
    VectorField::gradient(&s.phi).dot(&cross).div(&s.rho())
}

/// Closure of the hierarchy under the Lie bracket.
#[derive(Clone, Debug)]
pub struct Closure {
    /// `h_kl = {h_k, h_l}_φ`.
    pub h_kl: Expr,
    /// `W_kl = s ρ⁻¹ ∇φ × ∇h_kl`.
    pub w_kl: VectorField,
    pub checks: Vec<CheckRecord>,
}

/// Verifies `[W_k, W_l] = s W_kl` and antisymmetry of `h_kl`.
pub fn bracket_closure<T: Real>(s: &FlowScenario<T>, hier: &Hierarchy, k: usize, l: usize) -> Result<Closure> {
    if k == 0 || l == 0 || k > hier.depth() || l > hier.depth() {
        return Err(Error::Invalid(format!("levels ({k}, {l}) outside 1..={}", hier.depth())));
    }
    let pts = s.retained_points()?;
    let tol = s.tol.pipeline;
    let h_kl = nambu_bracket(hier.h(k), hier.h(l), s);
    let h_lk = nambu_bracket(hier.h(l), hier.h(k), s);
    let w_kl = s.curl_field(&h_kl, hier.sign);
    let lie = hier.w(k).bracket(hier.w(l));
    let residual = &lie - &w_kl.scale(&Expr::constant(hier.sign));
    let checks = vec![
        vanishing(format!("closure.bracket.{k}.{l}"), "[W_k, W_l] = s W_{h_kl}", &residual.exprs(), &pts, tol),
        vanishing(format!("closure.antisymmetry.{k}.{l}"), "h_kl + h_lk = 0", &[h_kl.add(&h_lk)], &pts, tol),
    ];
    Ok(Closure { h_kl, w_kl, checks })
}

/// The one-form `θ = (φ + p + ½v²) dt − v♭` of an Euler flow.
pub fn euler_theta<T: Real>(s: &FlowScenario<T>) -> Result<Form> {
    let p = s.p.clone().ok_or_else(|| Error::Invalid("euler check needs a pressure p".into()))?;
    let half_v2 = s.v.dot(&s.v).scale(0.5);
    Ok(Form::dt().scale(&s.phi.add(&p).add(&half_v2)) - s.v.flat())
}

/// Euler-flow identities with the vorticity `curl v` as the frozen field:
/// the momentum equation, frozen-in vorticity, `d(θ∧Ω) + Ω∧Ω = 0`, and the
/// relative invariances `L_{∂_t+v} θ = dχ`, `L_{∂_t+v}(θ∧Ω) = d(χΩ)`.
///
/// Since `i(∂_t+v)Ω = dφ`, the invariance holds with `χ = p − ½v²`; the
/// combination `φ + p − ½v²` is `i(∂_t+v)θ` and misses by `dφ`.
pub fn euler_check<T: Real>(s: &FlowScenario<T>) -> Result<(Form, Vec<CheckRecord>)> {
    let p = s.p.clone().ok_or_else(|| Error::Invalid("euler check needs a pressure p".into()))?;
    let theta = euler_theta(s)?;
    let pts = s.all_points()?;
    let tol = s.tol.pipeline;
    let x = s.suspended_velocity();

    let momentum = VectorField::spatial(
        Coord::SPATIAL.map(|c| s.v.component(c).diff(Coord::T).add(&s.v.apply_spatial(&s.v.component(c))).add(&p.diff(c))),
    );
    let vort = s.v.flat().d_spatial();
    let frozen = vort.dt_partial() + vort.lie_spatial(&s.v);

    let w = s.v.curl();
    let omega = Form::spatial_two_form(w.spatial_components());
    let sigma = omega.interior(&s.v) - Form::scalar(s.phi.clone()).d_spatial();
    let big_omega = &omega + &sigma.wedge(&Form::dt());
    let identity = theta.wedge(&big_omega).d() + big_omega.wedge(&big_omega);
    let chi = Form::scalar(p.sub(&s.v.dot(&s.v).scale(0.5)));
    let relative = theta.lie(&x) - chi.d();
    let relative3 = theta.wedge(&big_omega).lie(&x) - chi.wedge(&big_omega).d();

    let checks = vec![
        vanishing("euler.momentum", "∂_t v + (v·∇)v + ∇p = 0", &momentum.exprs(), &pts, tol),
        vanishing("euler.vorticity_frozen", "∂_t ω + L_v ω = 0, ω = d_M v♭", &frozen.exprs(), &pts, tol),
        vanishing("euler.potential", "Ω = −dθ", &(big_omega.clone() + theta.d()).exprs(), &pts, tol),
        vanishing("euler.helicity_identity", "d(θ∧Ω) + Ω∧Ω = 0", &identity.exprs(), &pts, tol),
        vanishing("euler.relative_invariance", "L_{∂_t+v} θ = d(p − ½v²)", &relative.exprs(), &pts, tol),
        vanishing(
            "euler.relative_invariance_3",
            "L_{∂_t+v}(θ∧Ω) = d((p − ½v²)Ω)",
            &relative3.exprs(),
            &pts,
            tol,
        ),
    ];
    Ok((theta, checks))
}

/// Midpoint-rule quadrature of `v♭ ∧ d_M v♭ = v·(∇×v) dx∧dy∧dz` over the
/// periodic box `[0, 2π)³` at `t = 0`.
pub fn helicity_integral<T: Real>(v: &VectorField, resolution: usize) -> Result<T> {
    if resolution == 0 {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let flat = v.flat();
    let density = flat.wedge(&flat.d_spatial()).get(crate::forms::Blade::SPATIAL_VOLUME);
    let tape = Tape::compile(&[density]);
    let n = resolution;
    let h = T::TAU() / T::from_usize(n).unwrap_or_else(T::one);
    let half = T::from_f64_lossy(0.5);
    let coord = |i: usize| (T::from_usize(i).unwrap_or_else(T::zero) + half) * h;
    let planes: Vec<Result<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut scratch = Vec::new();
            let mut out = [T::zero()];
            let mut sum = T::zero();
            for j in 0..n {
                for k in 0..n {
                    let p = Point4::new(T::zero(), coord(i), coord(j), coord(k));
                    tape.eval_into(&p, &mut scratch, &mut out).map_err(|e| Error::eval("helicity density", e))?;
                    sum = sum + out[0];
                }
            }
            Ok(sum)
        })
        .collect();
    let mut total = T::zero();
    for p in planes {
        total = total + p?;
    }
    Ok(total * h * h * h)
}

/// Records whether a set of expressions is nonzero somewhere; re-exported
/// for callers assembling their own checks.
pub fn visibly_nonzero<T: Real>(id: &str, eq: &str, exprs: &[Expr], pts: &PointSet<T>, threshold: T) -> CheckRecord {
    nonvanishing(id, eq, exprs, pts, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::forms::{residual_norm, vector_residual};

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn shear() -> FlowScenario<f64> {
        FlowScenario::new("shear", [p("sin(z)"), p("0"), p("0")], [p("1"), p("1"), p("0")], p("y"), p("z"))
            .with_pressure(p("0"))
    }

    fn rotation() -> FlowScenario<f64> {
        FlowScenario::new("rotation", [p("-y"), p("x"), p("0")], [p("0"), p("0"), p("1")], p("z"), p("(x^2+y^2)*z"))
            .with_pressure(p("(x^2+y^2)/2"))
    }

    #[test]
    fn catalog_flows_are_valid() {
        for s in [shear(), rotation()] {
            let rep = verify_scenario(&s).unwrap();
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn compressible_flow_fails_divergence() {
        let s = FlowScenario::<f64>::new("bad", [p("x"), p("0"), p("0")], [p("0"), p("0"), p("1")], p("z"), p("z"));
        let rep = verify_scenario(&s).unwrap();
        let div = rep.get("scenario.div_v").unwrap();
        assert!(!div.pass);
        assert_eq!(div.max, 1.0);
    }

    #[test]
    fn shear_symplectic_form() {
        let s = shear();
        let sym = build_symplectic(&s).unwrap();
        // dy∧dz + dz∧dx + (−sin z dz − dy)∧dt
        let want = Form::spatial_two_form([p("1"), p("1"), p("0")])
            + (Form::dz().scale(&p("sin(z)")).map(|e| e.neg()) - Form::dy()).wedge(&Form::dt());
        let pts = s.all_points().unwrap();
        assert!(residual_norm(&(sym.big_omega.clone() - want), &pts).unwrap().max < 1e-15);
        assert_eq!(sym.rho, Expr::one());
        assert!(check_symplectic(&s, &sym).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn rotation_volume() {
        let sym = build_symplectic(&rotation()).unwrap();
        assert_eq!(sym.mu, Form::volume(1.0));
    }

    #[test]
    fn symmetry_classification() {
        let s = shear();
        assert!(check_symmetry(&s.suspended_velocity(), &s, "self").unwrap().pass);
        assert!(check_symmetry(&VectorField::coordinate(Coord::X), &s, "dx").unwrap().pass);
        let zx = VectorField::spatial([p("z"), p("0"), p("0")]);
        assert!(check_symmetry(&zx, &s, "zx").unwrap().pass);
        let stretch = VectorField::spatial([p("x"), p("0"), p("0")]);
        let rec = check_symmetry(&stretch, &s, "xx").unwrap();
        assert!(!rec.pass);
        assert_eq!(rec.note.as_deref(), Some("not a symmetry"));
    }

    #[test]
    fn shear_hierarchy_truncates() {
        let s = shear();
        let hier = build_hierarchy(&s, 2).unwrap();
        assert_eq!(hier.u0, VectorField::spatial([p("-1"), p("-1"), p("0")]));
        assert_eq!(hier.w(1), &VectorField::spatial([p("-1"), p("0"), p("0")]));
        assert_eq!(hier.w(2), &VectorField::zero());
        assert_eq!(hier.sign, -1.0);
        assert_eq!(hier.sign_source, None);
    }

    #[test]
    fn rotation_hierarchy() {
        let s = rotation();
        let hier = build_hierarchy(&s, 3).unwrap();
        let pts = s.all_points().unwrap();
        let close = |a: &VectorField, b: [&str; 3]| vector_residual(&(a - &VectorField::spatial(b.map(p))), &pts).unwrap().max;
        assert!(close(hier.w(1), ["2*y*z", "-2*x*z", "0"]) < 1e-12);
        assert!(close(hier.w(2), ["2*y", "-2*x", "0"]) < 1e-12);
        assert!(close(hier.w(3), ["0", "0", "0"]) < 1e-12);
        assert_eq!(hier.sign, -1.0);
        assert_eq!(hier.sign_source, Some(2));
        let xi1: f64 = crate::expr::evaluate(hier.xi(1), &Point4::new(0.0, 1.0, 2.0, 3.0)).unwrap();
        assert!((xi1 - 5.0).abs() < 1e-12);
        for c in check_hierarchy(&s, &hier).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn unconserved_seed_is_rejected() {
        let s = FlowScenario::<f64>::new("r", [p("-y"), p("x"), p("0")], [p("0"), p("0"), p("1")], p("z"), p("x"));
        assert!(matches!(build_hierarchy(&s, 2), Err(Error::NotConserved { .. })));
        assert!(matches!(build_hierarchy(&rotation(), 0), Err(Error::Invalid(_))));
    }

    #[test]
    fn nambu_examples() {
        let s = rotation();
        assert_eq!(nambu_bracket(&Expr::x(), &Expr::y(), &s).simplify(), Expr::one());
        let f = p("sin(x*y) + z^2");
        let pts = s.all_points().unwrap();
        assert!(pts.norm(&[nambu_bracket(&f, &f, &s)], "diag").unwrap().max < 1e-14);
        let cas = pts.norm(&[nambu_bracket(&s.phi, &f, &s)], "casimir").unwrap();
        assert!(cas.max < 1e-14);
    }

    #[test]
    fn rotation_closure() {
        let s = rotation();
        let hier = build_hierarchy(&s, 2).unwrap();
        for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let c = bracket_closure(&s, &hier, k, l).unwrap();
            assert!(c.checks.iter().all(|r| r.pass), "{:?}", c.checks);
        }
        let diag = bracket_closure(&s, &hier, 1, 1).unwrap();
        let pts = s.all_points().unwrap();
        assert!(pts.norm(&[diag.h_kl], "h11").unwrap().max < 1e-12);
    }

    #[test]
    fn euler_examples() {
        for s in [shear(), rotation()] {
            let (_, checks) = euler_check(&s).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{}: {checks:?}", s.name);
        }
        let bad = shear().with_pressure(p("x"));
        let (_, checks) = euler_check(&bad).unwrap();
        let m = checks.iter().find(|c| c.id == "euler.momentum").unwrap();
        assert!(!m.pass);
        assert!((m.max - 1.0).abs() < 1e-15);
        let mut no_p = shear();
        no_p.p = None;
        assert!(euler_check(&no_p).is_err());
    }

    #[test]
    fn helicity_integrals() {
        let abc = VectorField::spatial([p("sin(z) + cos(y)"), p("sin(x) + cos(z)"), p("sin(y) + cos(x)")]);
        let got: f64 = helicity_integral(&abc, 32).unwrap();
        let want = 3.0 * std::f64::consts::TAU.powi(3);
        assert!((got - want).abs() / want < 1e-3, "{got} vs {want}");
        let grad = VectorField::gradient(&p("sin(x)*cos(y) + sin(z)"));
        let g: f64 = helicity_integral(&grad, 16).unwrap();
        assert!(g.abs() < 1e-9);
        let s: f64 = helicity_integral(&shear().v, 16).unwrap();
        assert!(s.abs() < 1e-12);
    }
}
