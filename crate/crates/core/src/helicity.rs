//! Invariant two-forms of the hierarchy, their potentials and gauges, and
//! the helicity densities built from them.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fluid::{FlowScenario, Hierarchy};
use crate::forms::{residual_norm, Blade, Form, PointSet, ResidualNorm, VectorField};
use crate::report::{record, vanishing, CheckRecord};
use crate::Real;

/// `Θ_k`, an absolute invariant of `∂_t + v`.
#[derive(Clone, Debug)]
pub struct InvariantTwoForm {
    pub k: usize,
    pub theta: Form,
    /// Spatial part `ω_k = −i(W_k)μ_M`.
    pub omega_k: Form,
    pub checks: Vec<CheckRecord>,
}

/// Builds `Θ_k` from `ω_k = −i(W_k)μ_M`, from `−s dφ∧dh_k`, and
/// componentwise from `ρ_φ`, `W_k`, `v`; the three must agree.
pub fn invariant_two_form<T: Real>(s: &FlowScenario<T>, hier: &Hierarchy, k: usize) -> Result<InvariantTwoForm> {
    check_level(hier, k)?;
    let pts = s.retained_points()?;
    let w = hier.w(k);
    let mu_m = Form::spatial_volume(hier.rho.clone());
    let omega_k = -mu_m.interior(w);
    let theta = &omega_k + &omega_k.interior(&s.v).wedge(&Form::dt());

    let exact = Form::scalar(s.phi.clone()).d().wedge(&Form::scalar(hier.h(k).clone()).d()).scale(&Expr::constant(-hier.sign));
    let rw = w.scale(&hier.rho);
    let by_components = Form::spatial_two_form((-&rw).spatial_components())
        + Form::spatial_one_form(s.v.cross(&rw).spatial_components()).wedge(&Form::dt());

    let tol = s.tol.pipeline;
    let mut worst = T::zero();
    for other in [&exact, &by_components] {
        let r = residual_norm(&(&theta - other), &pts)?;
        if !(r.max <= tol) {
            return Err(Error::Mismatch { what: format!("constructions of Θ_{k}"), max: r.max.to_f64_lossy() });
        }
        worst = worst.max(r.max);
    }

    let x = s.suspended_velocity();
    let checks = vec![
        CheckRecord::zero(
            format!("helicity.constructions.{k}"),
            "−i(W_k)μ_M + i(v)ω_k∧dt = −s dφ∧dh_k",
            ResidualNorm { max: worst, rms: worst, samples: pts.len() },
            tol,
            pts.excluded(),
        ),
        vanishing(format!("helicity.closed.{k}"), "dΘ_k = 0", &theta.d().exprs(), &pts, s.tol.structural),
        vanishing(format!("helicity.invariant.{k}"), "L_{∂_t+v} Θ_k = 0", &theta.lie(&x).exprs(), &pts, tol),
    ];
    Ok(InvariantTwoForm { k, theta, omega_k, checks })
}

/// `Θ_k ∧ Θ_l = 0`.
pub fn degeneracy_check<T: Real>(a: &InvariantTwoForm, b: &InvariantTwoForm, pts: &PointSet<T>, tol: T) -> CheckRecord {
    vanishing(format!("helicity.degenerate.{}.{}", a.k, b.k), "Θ_k∧Θ_l = 0", &a.theta.wedge(&b.theta).exprs(), pts, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `θ_k⁺ = φ dh_k`.
    Plus,
    /// `θ_k⁻ = −h_k dφ`.
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeClass {
    /// `χ` constant on the grid.
    Absolute,
    Relative,
}

/// A potential `θ_k = −(ψ_k dt + A_k)` of `Θ_k`, possibly gauged by `dλ`.
#[derive(Clone, Debug)]
pub struct PotentialOneForm {
    pub k: usize,
    pub orientation: Orientation,
    pub theta: Form,
    pub psi: Expr,
    pub a: Form,
    pub lambda: Option<Expr>,
    /// `∂_t λ + v(λ)`; zero when ungauged.
    pub chi: Expr,
    pub class: GaugeClass,
    /// `max |χ − mean χ|` over the retained grid.
    pub chi_spread: f64,
    pub checks: Vec<CheckRecord>,
}

impl PotentialOneForm {
    /// Spatial part of `θ`, equal to `∇λ − A_k`.
    pub fn spatial_potential(&self) -> VectorField {
        let f = self.theta.spatial_part();
        VectorField::spatial(crate::expr::Coord::SPATIAL.map(|c| f.component(&[c])))
    }

    fn label(&self) -> String {
        let o = match self.orientation {
            Orientation::Plus => "plus",
            Orientation::Minus => "minus",
        };
        if self.lambda.is_some() {
            format!("{}.{o}.gauged", self.k)
        } else {
            format!("{}.{o}", self.k)
        }
    }
}

/// The canonical potentials `φ dh_k` and `−h_k dφ`, with `dθ = −sΘ_k` and
/// `i(∂_t+v)θ = 0` checked.
pub fn potential_one_form<T: Real>(
    s: &FlowScenario<T>,
    hier: &Hierarchy,
    theta_k: &InvariantTwoForm,
    orientation: Orientation,
) -> Result<PotentialOneForm> {
    let k = theta_k.k;
    check_level(hier, k)?;
    let pts = s.retained_points()?;
    let hk = hier.h(k);
    let theta = match orientation {
        Orientation::Plus => Form::scalar(hk.clone()).d().scale(&s.phi),
        Orientation::Minus => Form::scalar(s.phi.clone()).d().scale(&hk.neg()),
    };
    let mut out = PotentialOneForm {
        k,
        orientation,
        psi: theta.component(&[crate::expr::Coord::T]).neg(),
        a: -theta.spatial_part(),
        theta,
        lambda: None,
        chi: Expr::zero(),
        class: GaugeClass::Absolute,
        chi_spread: 0.0,
        checks: Vec::new(),
    };
    let label = out.label();
    let potential = &out.theta.d() + &theta_k.theta.scale(&Expr::constant(hier.sign));
    let x = s.suspended_velocity();
    out.checks = vec![
        vanishing(format!("helicity.potential.{label}"), "dθ_k = −s Θ_k", &potential.exprs(), &pts, s.tol.pipeline),
        vanishing(
            format!("helicity.annihilated.{label}"),
            "i(∂_t+v)θ_k = 0",
            &out.theta.interior(&x).exprs(),
            &pts,
            s.tol.pipeline,
        ),
    ];
    Ok(out)
}

/// `θ + dλ`, with `χ = ∂_t λ + v(λ)` and the class decided by whether
/// `χ` is constant over the retained grid.
pub fn gauge_transform<T: Real>(s: &FlowScenario<T>, theta: &PotentialOneForm, lambda: &Expr) -> Result<PotentialOneForm> {
    let pts = s.retained_points()?;
    let x = s.suspended_velocity();
    let total = match &theta.lambda {
        Some(l) => l.add(lambda),
        None => lambda.clone(),
    };
    let gauged = &theta.theta + &Form::scalar(lambda.clone()).d();
    let chi = x.apply(&total);
    let values = pts.evaluate(std::slice::from_ref(&chi), "gauge χ")?;
    let n = T::from_usize(values.len()).unwrap_or_else(T::one);
    let mean = values.iter().fold(T::zero(), |a, v| a + v[0]) / n;
    let spread = values.iter().fold(T::zero(), |a, v| {
        let d = (v[0] - mean).abs();
        if d.is_nan() || d > a {
            d
        } else {
            a
        }
    });
    let class = if spread <= s.tol.pipeline { GaugeClass::Absolute } else { GaugeClass::Relative };

    let mut out = PotentialOneForm {
        k: theta.k,
        orientation: theta.orientation,
        psi: gauged.component(&[crate::expr::Coord::T]).neg(),
        a: -gauged.spatial_part(),
        theta: gauged,
        lambda: Some(total),
        chi: chi.clone(),
        class,
        chi_spread: spread.to_f64_lossy(),
        checks: theta.checks.clone(),
    };
    let label = out.label();
    let relative = out.theta.lie(&x) - Form::scalar(chi.clone()).d();
    let contract = |f: &Form| f.interior(&x).get(Blade::EMPTY);
    let split = contract(&out.theta).sub(&contract(&theta.theta)).sub(&chi.sub(&theta.chi));
    out.checks.push(vanishing(
        format!("helicity.relative_invariance.{label}"),
        "L_{∂_t+v}(θ + dλ) = dχ",
        &relative.exprs(),
        &pts,
        s.tol.pipeline,
    ));
    out.checks.push(vanishing(
        format!("helicity.decomposition.{label}"),
        "i(∂_t+v)(θ + dλ) − i(∂_t+v)θ = χ",
        &[split],
        &pts,
        s.tol.structural,
    ));
    Ok(out)
}

/// `θ_k ∧ Θ_l` and its density `H_kl = ρ_φ a_k·W_l`.
#[derive(Clone, Debug)]
pub struct HelicityDensity {
    pub k: usize,
    pub l: usize,
    pub three_form: Form,
    pub h: Expr,
    pub chi: Expr,
    pub class: GaugeClass,
    pub w_l: VectorField,
    pub rho: Expr,
    pub label: String,
    pub checks: Vec<CheckRecord>,
}

impl HelicityDensity {
    pub fn lagrangian(&self) -> bool {
        self.class == GaugeClass::Absolute
    }
}

/// Forms `θ_k ∧ Θ_l`; its `dx∧dy∧dz` coefficient equals `s H_kl`.
pub fn helicity_three_form<T: Real>(
    s: &FlowScenario<T>,
    hier: &Hierarchy,
    theta: &PotentialOneForm,
    big_theta: &InvariantTwoForm,
) -> Result<HelicityDensity> {
    let l = big_theta.k;
    check_level(hier, l)?;
    let pts = s.retained_points()?;
    let three_form = theta.theta.wedge(&big_theta.theta);
    let w_l = hier.w(l).clone();
    let h = hier.rho.mul(&theta.spatial_potential().dot(&w_l));
    let label = format!("{}.{l}", theta.label());
    let coef = three_form.get(Blade::SPATIAL_VOLUME).sub(&h.scale(hier.sign));
    let checks = vec![
        vanishing(format!("helicity.density.{label}"), "(θ_k∧Θ_l)_xyz = s ρ_φ a_k·W_l", &[coef], &pts, s.tol.pipeline),
        vanishing(format!("helicity.closed_three_form.{label}"), "d(θ_k∧Θ_l) = 0", &three_form.d().exprs(), &pts, s.tol.pipeline),
    ];
    Ok(HelicityDensity {
        k: theta.k,
        l,
        three_form,
        h,
        chi: theta.chi.clone(),
        class: theta.class,
        w_l,
        rho: hier.rho.clone(),
        label,
        checks,
    })
}

/// Symbolic `∂_t H + v·∇H`.
pub fn lagrangian_expr<T: Real>(s: &FlowScenario<T>, dens: &HelicityDensity) -> Expr {
    s.suspended_velocity().apply(&dens.h)
}

/// Symbolic `∂_t H + ∇·(H v − ρ_φ χ W_l)` and the advective form
/// `∂_t H + v·∇H − ρ_φ W_l(χ)`.
pub fn eulerian_exprs<T: Real>(s: &FlowScenario<T>, dens: &HelicityDensity) -> (Expr, Expr) {
    let flux = &s.v.scale(&dens.h) - &dens.w_l.scale(&dens.rho.mul(&dens.chi));
    let divergence = dens.h.diff(crate::expr::Coord::T).add(&flux.divergence());
    let advective = lagrangian_expr(s, dens).sub(&dens.rho.mul(&dens.w_l.apply_spatial(&dens.chi)));
    (divergence, advective)
}

pub fn lagrangian_residual<T: Real>(s: &FlowScenario<T>, dens: &HelicityDensity) -> Result<ResidualNorm<T>> {
    s.retained_points()?.norm(&[lagrangian_expr(s, dens)], "Lagrangian residual")
}

/// Divergence-form residual merged with the advective-form residual.
pub fn eulerian_residual<T: Real>(s: &FlowScenario<T>, dens: &HelicityDensity) -> Result<ResidualNorm<T>> {
    let (div, adv) = eulerian_exprs(s, dens);
    s.retained_points()?.norm(&[div, adv], "Eulerian residual")
}

/// Lagrangian and Eulerian conservation records. For a relative-class
/// potential the Lagrangian residual is the source `ρ_φ W_l(χ)`: it is
/// expected nonzero unless `W_l` is tangent to the level sets of `χ`.
pub fn conservation_checks<T: Real>(s: &FlowScenario<T>, dens: &HelicityDensity) -> Result<Vec<CheckRecord>> {
    let pts = s.retained_points()?;
    let tol = s.tol.pipeline;
    let label = &dens.label;
    let (div, adv) = eulerian_exprs(s, dens);
    let eulerian = vanishing(format!("helicity.eulerian.{label}"), "∂_t H + ∇·(H v − ρ_φ χ W_l) = 0", &[div], &pts, tol);
    let advective = vanishing(format!("helicity.eulerian_advective.{label}"), "∂_t H + v·∇H = ρ_φ W_l(χ)", &[adv], &pts, tol);

    let id = format!("helicity.lagrangian.{label}");
    let lag = lagrangian_residual(s, dens);
    let lag_rec = if dens.lagrangian() {
        record(id, "∂_t H + v·∇H = 0", lag, tol, pts.excluded())
    } else {
        let source = dens.rho.mul(&dens.w_l.apply_spatial(&dens.chi));
        let tangent = pts.norm(&[source], "tangency")?.max <= tol;
        match (lag, tangent) {
            (Ok(r), true) => CheckRecord::zero(id, "∂_t H + v·∇H = 0", r, tol, pts.excluded())
                .with_note("relative gauge with W_l tangent to the level sets of χ"),
            (Ok(r), false) => {
                let rec = CheckRecord::nonzero(id, "∂_t H + v·∇H = ρ_φ W_l(χ) ≠ 0", r, tol, pts.excluded());
                let note = if rec.pass && eulerian.pass {
                    "relative gauge: Lagrangian law broken, Eulerian law holds (kinematical distinction verified)"
                } else {
                    "relative gauge: source term ρ_φ W_l(χ)"
                };
                rec.with_note(note)
            }
            (Err(e), _) => CheckRecord::failed(id, "∂_t H + v·∇H", e.to_string()),
        }
    };
    Ok(vec![lag_rec, eulerian, advective])
}

/// `Σ_k = L_{W_k} Ω`, checked against `dφ∧dξ_k` and for closure and
/// invariance under `∂_t + v`.
pub fn sigma_form<T: Real>(s: &FlowScenario<T>, hier: &Hierarchy, big_omega: &Form, k: usize) -> Result<(Form, Vec<CheckRecord>)> {
    check_level(hier, k)?;
    let pts = s.retained_points()?;
    let tol = s.tol.pipeline;
    let sigma = big_omega.lie(hier.w(k));
    let expected = Form::scalar(s.phi.clone()).d().wedge(&Form::scalar(hier.xi(k).clone()).d());
    let x = s.suspended_velocity();
    let checks = vec![
        vanishing(format!("helicity.sigma.{k}"), "L_{W_k} Ω = dφ∧dξ_k", &(&sigma - &expected).exprs(), &pts, tol),
        vanishing(format!("helicity.sigma_closed.{k}"), "dΣ_k = 0", &sigma.d().exprs(), &pts, tol),
        vanishing(format!("helicity.sigma_invariant.{k}"), "L_{∂_t+v} Σ_k = 0", &sigma.lie(&x).exprs(), &pts, tol),
    ];
    Ok((sigma, checks))
}

fn check_level(hier: &Hierarchy, k: usize) -> Result<()> {
    if k == 0 || k > hier.depth() {
        return Err(Error::Invalid(format!("level {k} outside 1..={}", hier.depth())));
    }
    Ok(())
}
