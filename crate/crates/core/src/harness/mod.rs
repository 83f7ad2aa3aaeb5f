//! Scenario loading, the built-in catalog, and check orchestration.

pub mod catalog;
pub mod random;
mod scenario_file;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

pub use scenario_file::{load_scenario, parse_scenario};

use crate::error::{Error, Result};
use crate::expr::{Coord, Expr};
use crate::fluid::{self, FlowScenario, Hierarchy, Symplectic};
use crate::forms::{Blade, Form, PointSet, ResidualNorm, VectorField};
use crate::helicity::{self, Orientation};
use crate::jacobi;
use crate::report::{vanishing, CheckRecord, Report};
use random::ExprGen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Scenario,
    Symplectic,
    Hierarchy,
    Nambu,
    Euler,
    Helicity,
    Jacobi,
    Calculus,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Scenario,
        Group::Symplectic,
        Group::Hierarchy,
        Group::Nambu,
        Group::Euler,
        Group::Helicity,
        Group::Jacobi,
        Group::Calculus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Scenario => "scenario",
            Group::Symplectic => "symplectic",
            Group::Hierarchy => "hierarchy",
            Group::Nambu => "nambu",
            Group::Euler => "euler",
            Group::Helicity => "helicity",
            Group::Jacobi => "jacobi",
            Group::Calculus => "calculus",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Group> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown check group '{s}'")))
    }
}

/// Parses `all`, an empty string, or a comma-separated list of groups.
pub fn parse_selection(s: &str) -> Result<Vec<Group>> {
    let s = s.trim();
    if s == "all" {
        return Ok(Group::ALL.to_vec());
    }
    let mut groups: Vec<Group> =
        s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(Group::from_str).collect::<Result<_>>()?;
    groups.sort();
    groups.dedup();
    Ok(groups)
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub groups: Vec<Group>,
    pub depth: usize,
    pub seed: u64,
    /// Random forms and fields per calculus identity.
    pub random_cases: usize,
    /// Random functions per Jacobi-pair check.
    pub random_functions: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { groups: Group::ALL.to_vec(), depth: 2, seed: 0, random_cases: 50, random_functions: 10 }
    }
}

/// Objects shared by the check groups.
struct Context<'a> {
    s: &'a FlowScenario<f64>,
    opts: &'a RunOptions,
    sym: Result<Symplectic>,
    hier: Result<Hierarchy>,
}

/// Runs the selected groups. Construction errors become failed records.
pub fn run_checks(s: &FlowScenario<f64>, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let mut report = Report::new(&s.name);
    report.seed = opts.seed;
    let needs_hierarchy = opts.groups.iter().any(|g| {
        matches!(g, Group::Hierarchy | Group::Nambu | Group::Helicity | Group::Jacobi)
    });
    let ctx = Context {
        s,
        opts,
        sym: fluid::build_symplectic(s),
        hier: if needs_hierarchy {
            fluid::build_hierarchy(s, opts.depth)
        } else {
            Err(Error::Invalid("hierarchy not requested".into()))
        },
    };
    if needs_hierarchy {
        match &ctx.hier {
            Ok(h) => {
                report.sign = h.sign as i32;
                report.note(match h.sign_source {
                    Some(k) => format!("orientation s = {:+} resolved from W_{k}", h.sign),
                    None => format!("orientation s = {:+} by convention: W_k = 0 for 2 ≤ k ≤ {}", h.sign, h.depth()),
                });
            }
            Err(e) => report.note(format!("hierarchy unavailable: {e}")),
        }
    }

    let results: Vec<Vec<CheckRecord>> = opts.groups.par_iter().map(|g| run_group(&ctx, *g)).collect();
    for r in results {
        report.extend(r);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn run_group(ctx: &Context, g: Group) -> Vec<CheckRecord> {
    let out = match g {
        Group::Scenario => fluid::verify_scenario(ctx.s).map(|r| r.checks),
        Group::Symplectic => symplectic_group(ctx),
        Group::Hierarchy => hierarchy_group(ctx),
        Group::Nambu => nambu_group(ctx),
        Group::Euler => fluid::euler_check(ctx.s).map(|(_, c)| c),
        Group::Helicity => helicity_group(ctx),
        Group::Jacobi => jacobi_group(ctx),
        Group::Calculus => calculus_group(ctx),
    };
    out.unwrap_or_else(|e| vec![CheckRecord::failed(format!("{g}.build"), format!("construct {g} objects"), e.to_string())])
}

fn hierarchy<'c>(ctx: &'c Context) -> Result<&'c Hierarchy> {
    ctx.hier.as_ref().map_err(|e| Error::Invalid(format!("no hierarchy: {e}")))
}

fn symplectic<'c>(ctx: &'c Context) -> Result<&'c Symplectic> {
    ctx.sym.as_ref().map_err(|e| Error::Invalid(format!("no symplectic form: {e}")))
}

fn symplectic_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let sym = symplectic(ctx)?;
    let mut out = fluid::check_symplectic(ctx.s, sym)?;
    out.push(fluid::check_symmetry(&ctx.s.b, ctx.s, "symplectic.frozen_field_symmetry")?);
    Ok(out)
}

fn hierarchy_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    fluid::check_hierarchy(ctx.s, hierarchy(ctx)?)
}

fn nambu_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let s = ctx.s;
    let hier = hierarchy(ctx)?;
    let pts = s.retained_points()?;
    let mut out = Vec::new();
    for k in 1..=hier.depth() {
        for l in k..=hier.depth() {
            out.extend(fluid::bracket_closure(s, hier, k, l)?.checks);
        }
    }
    let mut gen = ExprGen::new(ctx.opts.seed ^ 0x4e41_4d42);
    let mut jacobi = Vec::new();
    let mut casimir = Vec::new();
    for _ in 0..3 {
        let (f, g, h) = (gen.expr(), gen.expr(), gen.expr());
        let br = |a: &Expr, b: &Expr| s.nambu_bracket(a, b);
        jacobi.push(vanishing(
            "nambu.jacobi",
            "{f, {g, h}_φ}_φ + cyclic = 0",
            &[Expr::sum([br(&f, &br(&g, &h)), br(&g, &br(&h, &f)), br(&h, &br(&f, &g))])],
            &pts,
            s.tol.pipeline,
        ));
        casimir.push(vanishing("nambu.casimir", "{φ, f}_φ = 0", &[br(&s.phi, &f)], &pts, s.tol.pipeline));
    }
    out.extend(worst_of(jacobi));
    out.extend(worst_of(casimir));
    Ok(out)
}

fn helicity_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let s = ctx.s;
    let hier = hierarchy(ctx)?;
    let pts = s.retained_points()?;
    let depth = hier.depth();
    let thetas: Vec<_> = (1..=depth).map(|k| helicity::invariant_two_form(s, hier, k)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for t in &thetas {
        out.extend(t.checks.iter().cloned());
    }
    for a in &thetas {
        for b in thetas.iter().filter(|b| b.k >= a.k) {
            out.push(helicity::degeneracy_check(a, b, &pts, s.tol.structural));
        }
    }
    for ta in &thetas {
        let mut potentials = Vec::new();
        for o in [Orientation::Plus, Orientation::Minus] {
            potentials.push(helicity::potential_one_form(s, hier, ta, o)?);
        }
        let plus = potentials[0].clone();
        for lambda in &s.lambdas {
            potentials.push(helicity::gauge_transform(s, &plus, lambda)?);
        }
        for pot in &potentials {
            out.extend(pot.checks.iter().cloned());
            for tb in &thetas {
                let dens = helicity::helicity_three_form(s, hier, pot, tb)?;
                out.extend(dens.checks.iter().cloned());
                out.extend(helicity::conservation_checks(s, &dens)?);
            }
        }
    }
    let sym = symplectic(ctx)?;
    for k in 1..=depth {
        out.extend(helicity::sigma_form(s, hier, &sym.big_omega, k)?.1);
    }
    Ok(out)
}

fn jacobi_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let s = ctx.s;
    let hier = hierarchy(ctx)?;
    let sym = symplectic(ctx)?;
    let tol = s.tol.pipeline;
    let floor = s.rho_floor;
    let ext0 = jacobi::extend_symplectic(s, hier, sym, 0, &s.phi, floor)?;
    let mut out = ext0.checks.clone();
    let mut extensions = Vec::new();
    let mut gen = ExprGen::new(ctx.opts.seed ^ 0x4a41_4342);

    for (i, phi_k) in s.phi_k.iter().enumerate() {
        let k = i + 1;
        if k <= hier.depth() {
            match jacobi::extend_symplectic(s, hier, sym, k, phi_k, floor) {
                Ok(ext) => {
                    out.extend(ext.checks.iter().cloned());
                    extensions.push(ext);
                }
                Err(e) => out.push(CheckRecord::failed(
                    format!("jacobi.extension.{k}"),
                    "Ω_k = Θ_k − d_Mφ_k∧dt nondegenerate",
                    e.to_string(),
                )),
            }
        }

        let conf = match jacobi::conformal_pair(s, k, phi_k, &ext0, true) {
            Ok(c) => c,
            Err(e) => {
                out.push(CheckRecord::failed(format!("jacobi.conformal.{k}.0"), "dΩ_kl = α_k∧Ω_kl", e.to_string()));
                continue;
            }
        };
        out.extend(conf.checks.iter().cloned());
        let pair = jacobi::jacobi_pair(s, &conf, &ext0)?;
        out.extend(pair.checks.iter().cloned());
        let n = ctx.opts.random_functions;
        out.extend(worst_of((0..n).map(|_| jacobi::hamiltonian_equivalence(&gen.expr(), &pair, tol)).collect()));
        let mut bracket = Vec::new();
        for _ in 0..2 {
            let (f, g, h) = (gen.expr(), gen.expr(), gen.expr());
            bracket.extend(jacobi::bracket_checks(&f, &g, &h, &pair, tol));
        }
        out.extend(worst_of(bracket));
    }

    for a in &extensions {
        for b in &extensions {
            out.push(jacobi::extension_identity(a, b, tol)?);
        }
    }
    Ok(out)
}

/// `(L_X α)_I = X(α_I) + Σ_r α_{I[r→j]} ∂_{i_r} X^j`, independent of
/// Cartan's formula.
pub fn lie_by_components(alpha: &Form, x: &VectorField) -> Form {
    let mut out = Form::zero(alpha.degree());
    for b in Blade::all_of_grade(alpha.degree()) {
        let idx: Vec<Coord> = b.coords().collect();
        let mut terms = vec![x.apply(&alpha.get(b))];
        for r in 0..idx.len() {
            for j in Coord::ALL {
                let mut swapped = idx.clone();
                swapped[r] = j;
                terms.push(alpha.component(&swapped).mul(&x.component(j).diff(idx[r])));
            }
        }
        out.add_term(b, Expr::sum(terms));
    }
    out
}

/// Worst record per id, preserving first-seen order.
fn worst_of(records: Vec<CheckRecord>) -> Vec<CheckRecord> {
    let mut out: Vec<(CheckRecord, usize)> = Vec::new();
    for r in records {
        match out.iter_mut().find(|(o, _)| o.id == r.id) {
            Some((o, n)) => {
                *n += 1;
                let worse = match (o.pass, r.pass) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => r.max > o.max || r.max.is_nan(),
                };
                if worse {
                    *o = r;
                }
            }
            None => out.push((r, 1)),
        }
    }
    out.into_iter()
        .map(|(r, n)| {
            if n > 1 && r.note.is_none() {
                r.with_note(format!("worst of {n} random draws"))
            } else {
                r
            }
        })
        .collect()
}

fn calculus_group(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let pts = ctx.s.all_points()?;
    calculus_checks(&pts, ctx.opts.seed, ctx.opts.random_cases, ctx.s.tol.pipeline)
}

/// `d∘d = 0`, graded Leibniz rule, Lie derivative by Cartan's formula
/// against the coordinate formula, and `i([X,Y]) = [L_X, i(Y)]` over
/// `cases` random forms and fields.
pub fn calculus_checks(pts: &PointSet<f64>, seed: u64, cases: usize, tol: f64) -> Result<Vec<CheckRecord>> {
    let mut gen = ExprGen::new(seed);
    let mut draws = Vec::with_capacity(cases);
    for _ in 0..cases {
        let p = gen.degree();
        let q = gen.degree().min(4 - p);
        draws.push((gen.form(p), gen.form(q), gen.vector_field(), gen.vector_field()));
    }
    let norms: Vec<[ResidualNorm<f64>; 4]> = draws
        .par_iter()
        .map(|(a, b, x, y)| -> Result<_> {
            let sign = if a.degree() % 2 == 0 { 1.0 } else { -1.0 };
            let leibniz = a.wedge(b).d() - a.d().wedge(b) - a.wedge(&b.d()).scale(&Expr::constant(sign));
            let cartan = a.lie(x) - lie_by_components(a, x);
            let interior = if a.degree() == 0 {
                Form::zero(0)
            } else {
                a.interior(&x.bracket(y)) - (a.interior(y).lie(x) - a.lie(x).interior(y))
            };
            Ok([
                pts.norm(&a.d().d().exprs(), "d∘d")?,
                pts.norm(&leibniz.exprs(), "Leibniz")?,
                pts.norm(&cartan.exprs(), "Cartan")?,
                pts.norm(&interior.exprs(), "interior bracket")?,
            ])
        })
        .collect::<Result<_>>()?;
    let identities = [
        ("calculus.d_squared", "d(dα) = 0"),
        ("calculus.leibniz", "d(α∧β) = dα∧β + (−1)^p α∧dβ"),
        ("calculus.cartan", "L_X α = i(X)dα + d i(X)α"),
        ("calculus.interior_bracket", "i([X, Y]) = L_X i(Y) − i(Y) L_X"),
    ];
    Ok(identities
        .iter()
        .enumerate()
        .map(|(i, (id, eq))| {
            let merged = norms.iter().fold(ResidualNorm::zero(), |acc, n| acc.merge(n[i]));
            CheckRecord::zero(*id, *eq, merged, tol, pts.excluded()).with_note(format!("{cases} random cases, seed {seed}"))
        })
        .collect())
}
