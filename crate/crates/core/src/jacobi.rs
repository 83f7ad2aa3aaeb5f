//! Symplectic extensions `Ω_k` of the invariant two-forms, their inverse
//! bivectors, conformally symplectic pairs and the Jacobi structures they
//! define.

use crate::error::{Error, Result};
use crate::expr::{Coord, Expr, Tape};
use crate::fluid::{FlowScenario, Hierarchy, Symplectic};
use crate::forms::linalg::{self, Mat4};
use crate::forms::{Bivector, Blade, Form, Multivector, PointSet, ResidualNorm, Trivector, VectorField};
use crate::helicity::invariant_two_form;
use crate::report::{vanishing, CheckRecord};
use crate::Real;

/// `Ω_k = Θ_k + η_k∧dt` with `η_k = −d_M φ_k`, and its inverse `P_k`.
#[derive(Clone, Debug)]
pub struct SymplecticExtension<T> {
    pub k: usize,
    pub phi_k: Expr,
    pub big_omega: Form,
    /// `θ_k = −s φ dh_k`, for `k ≥ 1`.
    pub theta_k: Option<Form>,
    /// `θ̃_k = φ_k dt − θ_k`, for `k ≥ 1`.
    pub theta_tilde: Option<Form>,
    /// Pfaffian of the component matrix; `½Ω_k∧Ω_k = pf · dt∧dx∧dy∧dz`.
    pub pfaffian: Expr,
    pub p: Bivector,
    /// Retained points where `|pf| ≥ floor`.
    pub points: PointSet<T>,
    pub checks: Vec<CheckRecord>,
}

/// Component matrix `a_ij = Ω(∂_i, ∂_j)` of a two-form.
pub fn component_matrix(omega: &Form) -> [[Expr; 4]; 4] {
    let mut a: [[Expr; 4]; 4] = Default::default();
    for (i, ci) in Coord::ALL.into_iter().enumerate() {
        for (j, cj) in Coord::ALL.into_iter().enumerate() {
            if i != j {
                a[i][j] = omega.component(&[ci, cj]);
            }
        }
    }
    a
}

/// Pfaffian `a01 a23 − a02 a13 + a03 a12`.
pub fn pfaffian_expr(omega: &Form) -> Expr {
    let a = component_matrix(omega);
    a[0][1].mul(&a[2][3]).sub(&a[0][2].mul(&a[1][3])).add(&a[0][3].mul(&a[1][2]))
}

/// Closed-form inverse bivector of a nondegenerate two-form: the component
/// matrices satisfy `Ω P = I`.
pub fn inverse_bivector(omega: &Form) -> Bivector {
    let a = component_matrix(omega);
    let pf = pfaffian_expr(omega);
    let mut p: [[Expr; 4]; 4] = Default::default();
    let entry = |e: &Expr, sign: f64| e.scale(sign).div(&pf);
    p[0][1] = entry(&a[2][3], -1.0);
    p[0][2] = entry(&a[1][3], 1.0);
    p[0][3] = entry(&a[1][2], -1.0);
    p[1][2] = entry(&a[0][3], -1.0);
    p[1][3] = entry(&a[0][2], 1.0);
    p[2][3] = entry(&a[0][1], -1.0);
    Multivector::bivector(&p)
}

/// Extends `Θ_k` (or `ω` for `k = 0`) by a conserved `φ_k` and inverts it.
/// Points where `|pf(Ω_k)| < floor` are excluded.
pub fn extend_symplectic<T: Real>(
    s: &FlowScenario<T>,
    hier: &Hierarchy,
    sym: &Symplectic,
    k: usize,
    phi_k: &Expr,
    floor: T,
) -> Result<SymplecticExtension<T>> {
    let base = s.retained_points()?;
    let x = s.suspended_velocity();
    let conserved = base.norm(&[x.apply(phi_k)], "φ_k advection")?;
    if !(conserved.max <= s.tol.pipeline) {
        return Err(Error::NotConserved { what: format!("φ_{k} = {phi_k}"), max: conserved.max.to_f64_lossy() });
    }
    let theta = if k == 0 {
        &sym.omega + &sym.omega.interior(&s.v).wedge(&Form::dt())
    } else {
        invariant_two_form(s, hier, k)?.theta
    };
    let eta = -Form::scalar(phi_k.clone()).d_spatial();
    let big_omega = &theta + &eta.wedge(&Form::dt());
    let pfaffian = pfaffian_expr(&big_omega);

    let pf_tape = Tape::compile(std::slice::from_ref(&pfaffian));
    let mut bad = None;
    let points = base.filter(|p| match pf_tape.eval(p) {
        Ok(v) => v[0].abs() >= floor,
        Err(e) => {
            bad.get_or_insert(e);
            false
        }
    });
    if let Some(e) = bad {
        return Err(Error::eval("Pfaffian", e));
    }
    let points = match points {
        Ok(p) => p,
        Err(Error::EmptyGrid { .. }) => {
            return Err(Error::Degenerate(format!("Ω_{k} is degenerate at every sample point (|pf| < {floor})")))
        }
        Err(e) => return Err(e),
    };

    let p = inverse_bivector(&big_omega);
    let tol = s.tol.pipeline;
    let id = |name: &str| format!("jacobi.{name}.{k}");
    let mut checks = vec![
        vanishing(id("closed"), "dΩ_k = 0", &big_omega.d().exprs(), &points, tol),
        vanishing(
            id("hamiltonian"),
            "i(∂_t+v)Ω_k = dφ_k",
            &(big_omega.interior(&x) - Form::scalar(phi_k.clone()).d()).exprs(),
            &points,
            tol,
        ),
        vanishing(id("inverse_hamiltonian"), "P_k(dφ_k) = ∂_t+v", &(&p.contract(&Form::scalar(phi_k.clone()).d()) - &x).exprs(), &points, tol),
    ];
    checks.push(numeric_inverse_check(id("numeric_inverse"), &big_omega, &p, &points, tol)?);

    let (theta_k, theta_tilde) = if k == 0 {
        if *phi_k == s.phi {
            checks.push(vanishing(id("reproduces_omega"), "Ω_0 = Ω", &(&big_omega - &sym.big_omega).exprs(), &points, tol));
        }
        (None, None)
    } else {
        let w = hier.w(k);
        let n = VectorField::gradient(phi_k).map(Expr::neg);
        let wn = hier.rho.mul(&w.dot(&n));
        checks.push(vanishing(id("pfaffian"), "pf(Ω_k) = ρ_φ W_k·n_k", &[pfaffian.sub(&wn)], &points, tol));
        let half_sq = big_omega.wedge(&big_omega).scale(&Expr::constant(0.5));
        checks.push(vanishing(
            id("nondegenerate"),
            "½Ω_k∧Ω_k = ρ_φ (W_k·n_k) dt∧dx∧dy∧dz",
            &(half_sq - Form::volume(wn)).exprs(),
            &points,
            tol,
        ));

        // −(W·n)⁻¹ [W·∇ ∧ ∂_t + (W×v − ρ⁻¹n)·∇∧∇]
        let wdotn = w.dot(&n);
        let c = &w.cross(&s.v) - &n.scale(&hier.rho.recip());
        let mut m: [[Expr; 4]; 4] = Default::default();
        for (i, ci) in Coord::SPATIAL.into_iter().enumerate() {
            m[0][i + 1] = w.component(ci).div(&wdotn);
        }
        let [cx, cy, cz] = c.spatial_components();
        m[2][3] = cx.div(&wdotn).neg();
        m[1][3] = cy.div(&wdotn);
        m[1][2] = cz.div(&wdotn).neg();
        let by_formula = Multivector::bivector(&m);
        checks.push(vanishing(id("bivector_formula"), "P_k = −(W_k·n_k)⁻¹[W_k∧∂_t + (W_k×v − ρ⁻¹n_k)·∇∧∇]", &(&p - &by_formula).exprs(), &points, tol));

        let theta_k = Form::scalar(hier.h(k).clone()).d().scale(&s.phi.scale(-hier.sign));
        let theta_tilde = &Form::dt().scale(phi_k) - &theta_k;
        checks.push(vanishing(id("exact"), "Ω_k = −dθ̃_k", &(&big_omega + &theta_tilde.d()).exprs(), &points, tol));
        checks.push(vanishing(
            id("relative_invariance"),
            "L_{∂_t+v} θ̃_k = L_{∂_t+v} θ_k",
            &(theta_tilde.lie(&x) - theta_k.lie(&x)).exprs(),
            &points,
            tol,
        ));
        (Some(theta_k), Some(theta_tilde))
    };

    Ok(SymplecticExtension { k, phi_k: phi_k.clone(), big_omega, theta_k, theta_tilde, pfaffian, p, points, checks })
}

/// `d(θ̃_k∧Ω_l) + Ω_k∧Ω_l = 0` for `k, l ≥ 1`.
pub fn extension_identity<T: Real>(a: &SymplecticExtension<T>, b: &SymplecticExtension<T>, tol: T) -> Result<CheckRecord> {
    let tt = a
        .theta_tilde
        .as_ref()
        .ok_or_else(|| Error::Invalid("extension identity needs k ≥ 1".into()))?;
    let residual = tt.wedge(&b.big_omega).d() + a.big_omega.wedge(&b.big_omega);
    Ok(vanishing(
        format!("jacobi.extension_identity.{}.{}", a.k, b.k),
        "d(θ̃_k∧Ω_l) + Ω_k∧Ω_l = 0",
        &residual.exprs(),
        &a.points,
        tol,
    ))
}

/// Pointwise cross-check of `P` against numeric Gauss–Jordan inversion of
/// the component matrix of `Ω`.
fn numeric_inverse_check<T: Real>(id: String, omega: &Form, p: &Bivector, points: &PointSet<T>, tol: T) -> Result<CheckRecord> {
    let a = component_matrix(omega);
    let omega_exprs: Vec<Expr> = a.iter().flat_map(|row| row.iter().cloned()).collect();
    let eps = T::from_f64_lossy(1e-12);
    let mut inverses = Vec::with_capacity(points.len());
    for (pt, v) in points.points().iter().zip(points.evaluate(&omega_exprs, "two-form components")?) {
        let om: Mat4<T> = std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j]));
        inverses.push((om, linalg::invert(&om, eps).ok_or(Error::SingularMatrix { point: pt.to_f64() })?));
    }
    let p_exprs: Vec<Expr> = Coord::ALL.into_iter().flat_map(|i| Coord::ALL.map(|j| p.entry(i, j))).collect();
    let p_values = points.evaluate(&p_exprs, "bivector components")?;
    let diffs = inverses.iter().zip(&p_values).map(|((om, inv), v)| {
        let pm: Mat4<T> = std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j]));
        let identity = linalg::max_abs_diff(&linalg::matmul(om, &pm), &linalg::identity());
        linalg::max_abs_diff(inv, &pm).max(identity)
    });
    Ok(CheckRecord::zero(id, "Ω P = I, P = Ω⁻¹ (Gauss–Jordan)", ResidualNorm::from_values(diffs), tol, points.excluded()))
}

/// `Ω_kl = φ_k Ω_l` with Lee form `α_k = dφ_k / φ_k`.
#[derive(Clone, Debug)]
pub struct ConformalPair<T> {
    pub k: usize,
    pub l: usize,
    /// Conformal factor after any shift.
    pub phi_k: Expr,
    /// Constant added to make `φ_k` positive on the grid.
    pub shift: f64,
    pub big_omega: Form,
    pub alpha: Form,
    pub points: PointSet<T>,
    pub checks: Vec<CheckRecord>,
}

/// Conformally symplectic pair. A nonpositive `φ_k` is shifted by a
/// constant when `auto_shift` is set and rejected otherwise.
pub fn conformal_pair<T: Real>(
    s: &FlowScenario<T>,
    k: usize,
    phi_k: &Expr,
    ext_l: &SymplecticExtension<T>,
    auto_shift: bool,
) -> Result<ConformalPair<T>> {
    let points = ext_l.points.clone();
    let values = points.evaluate(std::slice::from_ref(phi_k), "φ_k")?;
    let (lo, hi) = values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v[0]), hi.max(v[0])));
    if phi_k.is_constant_tree() || hi - lo <= s.tol.structural {
        return Err(Error::Invalid(format!("conformal factor φ_{k} = {phi_k} is constant")));
    }
    let mut shift = 0.0;
    let mut factor = phi_k.clone();
    if lo <= T::zero() {
        if !auto_shift {
            return Err(Error::Invalid(format!("conformal factor φ_{k} is not positive (min {lo})")));
        }
        shift = (T::one() - lo).to_f64_lossy();
        factor = factor.add(&Expr::constant(shift));
    }

    let x = s.suspended_velocity();
    let conserved = points.norm(&[x.apply(&factor)], "φ_k advection")?;
    if !(conserved.max <= s.tol.pipeline) {
        return Err(Error::NotConserved { what: format!("φ_{k} = {phi_k}"), max: conserved.max.to_f64_lossy() });
    }

    let big_omega = ext_l.big_omega.scale(&factor);
    let dphi = Form::scalar(factor.clone()).d();
    let alpha = dphi.scale(&factor.recip());
    let tol = s.tol.pipeline;
    let l = ext_l.k;
    let id = |name: &str| format!("jacobi.{name}.{k}.{l}");
    let mut checks = vec![
        vanishing(id("conformal"), "dΩ_kl = α_k∧Ω_kl", &(big_omega.d() - alpha.wedge(&big_omega)).exprs(), &points, tol),
        vanishing(id("lee_closed"), "dα_k = 0", &alpha.d().exprs(), &points, tol),
    ];

    // Fields tangent to the level sets of φ_k: ∂_iφ ∂_j − ∂_jφ ∂_i.
    let tangents: Vec<VectorField> = Blade::all_of_grade(2)
        .into_iter()
        .map(|b| {
            let mut c = b.coords();
            let (i, j) = (c.next().unwrap_or(Coord::T), c.next().unwrap_or(Coord::X));
            let mut comps: [Expr; 4] = Default::default();
            comps[j.index()] = factor.diff(i);
            comps[i.index()] = factor.diff(j).neg();
            VectorField::new(comps)
        })
        .collect();
    let along: Vec<Expr> = tangents.iter().flat_map(|t| alpha.interior(t).exprs()).collect();
    checks.push(vanishing(id("level_set_tangent"), "α_k(X) = 0 for X tangent to φ_k = const", &along, &points, tol));
    let defect = alpha.wedge(&big_omega);
    let mut restricted = Vec::new();
    for a in 0..tangents.len() {
        for b in (a + 1)..tangents.len() {
            for c in (b + 1)..tangents.len() {
                restricted.extend(defect.interior(&tangents[a]).interior(&tangents[b]).interior(&tangents[c]).exprs());
            }
        }
    }
    checks.push(vanishing(
        id("level_set_restriction"),
        "(dΩ_kl − φ_k dΩ_l)|_{φ_k = const} = 0",
        &restricted,
        &points,
        tol,
    ));

    let mut pair = ConformalPair { k, l, phi_k: factor, shift, big_omega, alpha, points, checks };
    if shift != 0.0 {
        let note = format!("conformal factor shifted by {shift}");
        for c in &mut pair.checks {
            c.note = Some(note.clone());
        }
    }
    Ok(pair)
}

/// Jacobi structure `(Λ, E) = (φ_k⁻¹ P_l, −φ_k⁻² P_l(dφ_k))`.
#[derive(Clone, Debug)]
pub struct JacobiPair<T> {
    pub k: usize,
    pub l: usize,
    pub lambda: Bivector,
    pub e: VectorField,
    pub p_l: Bivector,
    pub phi_k: Expr,
    pub points: PointSet<T>,
    pub checks: Vec<CheckRecord>,
}

pub fn jacobi_pair<T: Real>(s: &FlowScenario<T>, conf: &ConformalPair<T>, ext_l: &SymplecticExtension<T>) -> Result<JacobiPair<T>> {
    let phi = &conf.phi_k;
    let lambda = ext_l.p.scale(&phi.recip());
    let e = ext_l.p.contract(&Form::scalar(phi.clone()).d()).scale(&phi.powi(2).recip().neg());
    let tol = s.tol.pipeline;
    let (k, l) = (conf.k, conf.l);
    let id = |name: &str| format!("jacobi.{name}.{k}.{l}");
    let points = conf.points.clone();

    let ll = schouten_bracket(&lambda, &lambda);
    let el = Multivector::from_vector(&e).wedge(&lambda).scale(&Expr::constant(2.0));
    let le = schouten_vector(&lambda, &e);
    let lee = conf.alpha.clone() + ext_l.big_omega.scale(phi).interior(&e);
    let mut pair = JacobiPair { k, l, lambda, e, p_l: ext_l.p.clone(), phi_k: phi.clone(), points, checks: Vec::new() };
    let unit = hamiltonian_vector_field(&Expr::one(), &pair);
    pair.checks = vec![
        vanishing(id("schouten"), "[Λ, Λ] = 2E∧Λ", &(&ll - &el).exprs(), &pair.points, tol),
        vanishing(id("schouten_vector"), "[Λ, E] = L_E Λ = 0", &le.exprs(), &pair.points, tol),
        vanishing(id("unit_field"), "V_1 = E", &(&unit - &pair.e).exprs(), &pair.points, tol),
        vanishing(id("lee_form"), "α_k = −i(E)Ω_kl", &lee.exprs(), &pair.points, tol),
    ];
    Ok(pair)
}

/// Schouten bracket of bivectors, componentwise:
/// `Σ_l (Λ1^{ij}_{,l} Λ2^{lk} + Λ2^{ij}_{,l} Λ1^{lk}) + cyclic(i, j, k)`.
/// For `Λ1 = Λ2` this is twice the Jacobiator of `Λ`.
pub fn schouten_bracket(a: &Bivector, b: &Bivector) -> Trivector {
    let mut out = Multivector::zero(3);
    for blade in Blade::all_of_grade(3) {
        let c: Vec<Coord> = blade.coords().collect();
        let mut terms = Vec::new();
        for (i, j, k) in [(c[0], c[1], c[2]), (c[1], c[2], c[0]), (c[2], c[0], c[1])] {
            for l in Coord::ALL {
                terms.push(a.entry(i, j).diff(l).mul(&b.entry(l, k)));
                terms.push(b.entry(i, j).diff(l).mul(&a.entry(l, k)));
            }
        }
        out.add_term(blade, Expr::sum(terms));
    }
    out
}

/// `[Λ, E] = L_E Λ`.
pub fn schouten_vector(lambda: &Bivector, e: &VectorField) -> Bivector {
    lambda.lie_bivector(e)
}

/// `{f, g} = Λ(df, dg) + f E(g) − g E(f)`.
pub fn jacobi_bracket<T>(f: &Expr, g: &Expr, pair: &JacobiPair<T>) -> Expr {
    let df = Form::scalar(f.clone()).d();
    let dg = Form::scalar(g.clone()).d();
    pair.lambda.pair(&df, &dg).add(&f.mul(&pair.e.apply(g))).sub(&g.mul(&pair.e.apply(f)))
}

/// `V_f = Λ(df) + f E`.
pub fn hamiltonian_vector_field<T>(f: &Expr, pair: &JacobiPair<T>) -> VectorField {
    &pair.lambda.contract(&Form::scalar(f.clone()).d()) + &pair.e.scale(f)
}

/// Residual of `V_f = P_l(d(f/φ_k))`.
pub fn hamiltonian_equivalence<T: Real>(f: &Expr, pair: &JacobiPair<T>, tol: T) -> CheckRecord {
    let direct = pair.p_l.contract(&Form::scalar(f.div(&pair.phi_k)).d());
    let v = hamiltonian_vector_field(f, pair);
    vanishing(
        format!("jacobi.hamiltonian_field.{}.{}", pair.k, pair.l),
        "Λ(df) + fE = P_l(d(f/φ_k))",
        &(&v - &direct).exprs(),
        &pair.points,
        tol,
    )
}

/// Antisymmetry, the Jacobi identity, and the Leibniz defect
/// `{f, gh} − g{f, h} − h{f, g} = gh E(f)` for one triple.
pub fn bracket_checks<T: Real>(f: &Expr, g: &Expr, h: &Expr, pair: &JacobiPair<T>, tol: T) -> Vec<CheckRecord> {
    let br = |a: &Expr, b: &Expr| jacobi_bracket(a, b, pair);
    let id = |name: &str| format!("jacobi.{name}.{}.{}", pair.k, pair.l);
    let jac = Expr::sum([br(f, &br(g, h)), br(g, &br(h, f)), br(h, &br(f, g))]);
    let leibniz = br(f, &g.mul(h)).sub(&g.mul(&br(f, h))).sub(&h.mul(&br(f, g)));
    let defect = g.mul(h).mul(&pair.e.apply(f));
    vec![
        vanishing(id("bracket_antisymmetric"), "{f, g} + {g, f} = 0", &[br(f, g).add(&br(g, f))], &pair.points, tol),
        vanishing(id("bracket_jacobi"), "{f, {g, h}} + cyclic = 0", &[jac], &pair.points, tol),
        vanishing(id("leibniz_defect"), "{f, gh} − g{f, h} − h{f, g} = gh E(f)", &[leibniz.sub(&defect)], &pair.points, tol),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::fluid::{build_hierarchy, build_symplectic};
    use crate::forms::{multivector_residual, SampleGrid};

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn rotation() -> FlowScenario<f64> {
        FlowScenario::new("rotation", [p("-y"), p("x"), p("0")], [p("0"), p("0"), p("1")], p("z"), p("(x^2+y^2)*z"))
            .with_grid(SampleGrid::uniform(5))
    }

    fn shear() -> FlowScenario<f64> {
        FlowScenario::new("shear", [p("sin(z)"), p("0"), p("0")], [p("1"), p("1"), p("0")], p("y"), p("z"))
            .with_grid(SampleGrid::uniform(5))
    }

    fn all_pass(cs: &[CheckRecord]) {
        for c in cs {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn inverse_of_canonical_form() {
        // dy∧dz + dz∧dx − dy∧dt
        let omega = Form::spatial_two_form([p("1"), p("1"), p("0")]) - Form::dy().wedge(&Form::dt());
        let pts = SampleGrid::<f64>::uniform(2).points().unwrap();
        let pb = inverse_bivector(&omega);
        let rec = numeric_inverse_check("inv".into(), &omega, &pb, &pts, 1e-12).unwrap();
        assert!(rec.pass, "{rec:?}");
        let degenerate = Form::dx().wedge(&Form::dy());
        assert!(matches!(
            numeric_inverse_check("inv".into(), &degenerate, &inverse_bivector(&degenerate), &pts, 1e-12),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn zeroth_extension_reproduces_omega() {
        let s = shear();
        let hier = build_hierarchy(&s, 2).unwrap();
        let sym = build_symplectic(&s).unwrap();
        let ext = extend_symplectic(&s, &hier, &sym, 0, &s.phi, 1e-6).unwrap();
        all_pass(&ext.checks);
        assert!(ext.checks.iter().any(|c| c.id == "jacobi.reproduces_omega.0"));
        assert!(ext.theta_tilde.is_none());
    }

    #[test]
    fn rotation_first_extension() {
        let s = rotation();
        let hier = build_hierarchy(&s, 2).unwrap();
        let sym = build_symplectic(&s).unwrap();
        let ext = extend_symplectic(&s, &hier, &sym, 1, &p("x*cos(t)+y*sin(t)+10"), 1e-6).unwrap();
        all_pass(&ext.checks);
        // W₁·n₁ vanishes on z = 0
        assert!(ext.points.excluded() > 0);
        let ext2 = extend_symplectic(&s, &hier, &sym, 2, &p("exp(z)"), 1e-6);
        assert!(matches!(ext2, Err(Error::Degenerate(_))), "{ext2:?}");
        assert!(matches!(extend_symplectic(&s, &hier, &sym, 1, &p("x"), 1e-6), Err(Error::NotConserved { .. })));
        let same = extend_symplectic(&s, &hier, &sym, 1, hier.h(1), 1e-6);
        assert!(matches!(same, Err(Error::Degenerate(_))));
        let rec = extension_identity(&ext, &ext, 1e-9).unwrap();
        assert!(rec.pass, "{rec:?}");
    }

    #[test]
    fn conformal_and_jacobi_pair() {
        let s = rotation();
        let hier = build_hierarchy(&s, 2).unwrap();
        let sym = build_symplectic(&s).unwrap();
        let ext0 = extend_symplectic(&s, &hier, &sym, 0, &s.phi, 1e-6).unwrap();
        let phi1 = p("x*cos(t)+y*sin(t)+10");
        let conf = conformal_pair(&s, 1, &phi1, &ext0, false).unwrap();
        all_pass(&conf.checks);
        assert_eq!(conf.shift, 0.0);
        let pair = jacobi_pair(&s, &conf, &ext0).unwrap();
        all_pass(&pair.checks);
        let f = p("x*y + z^2");
        assert!(hamiltonian_equivalence(&f, &pair, 1e-9).pass);
        all_pass(&bracket_checks(&f, &p("x + t*z"), &p("y*z"), &pair, 1e-9));
        let v = hamiltonian_vector_field(&phi1, &pair);
        let pts = &pair.points;
        assert!(pts.norm(&v.exprs(), "V").unwrap().max < 1e-9);
        assert!(pts.norm(&[jacobi_bracket(&f, &f, &pair)], "ff").unwrap().max < 1e-12);
        let unit = pts.norm(&[jacobi_bracket(&Expr::one(), &f, &pair)], "1f").unwrap();
        assert!(unit.max > 1e-3);
    }

    #[test]
    fn conformal_rejections_and_shift() {
        let s = rotation();
        let hier = build_hierarchy(&s, 2).unwrap();
        let sym = build_symplectic(&s).unwrap();
        let ext0 = extend_symplectic(&s, &hier, &sym, 0, &s.phi, 1e-6).unwrap();
        assert!(matches!(conformal_pair(&s, 1, &p("2"), &ext0, true), Err(Error::Invalid(_))));
        let z = p("z");
        assert!(matches!(conformal_pair(&s, 1, &z, &ext0, false), Err(Error::Invalid(_))));
        let conf = conformal_pair(&s, 1, &z, &ext0, true).unwrap();
        assert_eq!(conf.shift, 1.0);
        all_pass(&conf.checks);
        let ez = conformal_pair(&s, 1, &p("exp(z)"), &ext0, false).unwrap();
        let r = crate::forms::residual_norm(&(ez.alpha - Form::dz()), &ez.points).unwrap();
        assert!(r.max < 1e-15);
    }

    #[test]
    fn schouten_of_constant_and_hand_example() {
        let c = Multivector::bivector(&[
            [Expr::zero(), p("1"), p("2"), Expr::zero()],
            Default::default(),
            [Expr::zero(), Expr::zero(), Expr::zero(), p("3")],
            Default::default(),
        ]);
        assert!(schouten_bracket(&c, &c).is_zero());
        // Λ = x ∂y∧∂z: the only derivative is along x, and Λ^{x·} = 0.
        let mut m: [[Expr; 4]; 4] = Default::default();
        m[2][3] = p("x");
        let lam = Multivector::bivector(&m);
        let pts = SampleGrid::<f64>::uniform(3).points().unwrap();
        assert!(multivector_residual(&schouten_bracket(&lam, &lam), &pts).unwrap().max < 1e-15);
        // Λ = x ∂t∧∂y + ∂x∧∂z: [Λ,Λ]^{txz} gets Λ^{ty}_{,x} Λ^{xz}·2 cyclic term.
        let mut m: [[Expr; 4]; 4] = Default::default();
        m[0][2] = p("x");
        m[1][3] = p("1");
        let lam = Multivector::bivector(&m);
        let sb = schouten_bracket(&lam, &lam);
        // cyclic (y,z,t): Λ^{yz}... only Λ^{ty}_{,x} Λ^{x z} contributes, in the (t,y,z) slot
        let tyz = sb.component(&[Coord::T, Coord::Y, Coord::Z]);
        assert_eq!(tyz.simplify(), p("2"));
        assert_eq!(sb.terms().count(), 1);
    }
}
