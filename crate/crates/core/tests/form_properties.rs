use flowforms::expr::Expr;
use flowforms::forms::{Form, SampleGrid};
use flowforms::harness::random::ExprGen;
use flowforms::harness::{lie_by_components, load_scenario};
use flowforms::Points;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn points() -> Points {
    SampleGrid::uniform(3).points().unwrap()
}

fn max(f: &Form, pts: &Points) -> f64 {
    pts.norm(&f.exprs(), "residual").unwrap().max
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut g = ExprGen::new(seed);
        let p = g.degree();
        let a = g.form(p);
        prop_assert!(max(&a.d().d(), &points()) <= TOL);
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>()) {
        let mut g = ExprGen::new(seed);
        let p = g.degree();
        let q = g.degree().min(4 - p);
        let (a, b) = (g.form(p), g.form(q));
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let r = a.wedge(&b).d() - a.d().wedge(&b) - a.wedge(&b.d()).scale(&Expr::constant(sign));
        prop_assert!(max(&r, &points()) <= TOL);
    }

    #[test]
    fn cartan_matches_coordinates(seed in any::<u64>()) {
        let mut g = ExprGen::new(seed);
        let p = g.degree();
        let a = g.form(p);
        let x = g.vector_field();
        prop_assert!(max(&(a.lie(&x) - lie_by_components(&a, &x)), &points()) <= TOL);
    }

    #[test]
    fn interior_of_bracket(seed in any::<u64>()) {
        let mut g = ExprGen::new(seed);
        let p = g.degree().max(1);
        let a = g.form(p);
        let (x, y) = (g.vector_field(), g.vector_field());
        let r = a.interior(&x.bracket(&y)) - (a.interior(&y).lie(&x) - a.lie(&x).interior(&y));
        prop_assert!(max(&r, &points()) <= TOL);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let mut g = ExprGen::new(seed);
        let p = g.degree();
        let q = g.degree().min(4 - p);
        let (a, b) = (g.form(p), g.form(q));
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        let r = a.wedge(&b) - b.wedge(&a).scale(&Expr::constant(sign));
        prop_assert!(max(&r, &points()) <= TOL);
    }

    #[test]
    fn nambu_bracket_satisfies_jacobi(seed in any::<u64>()) {
        let s = load_scenario("rotation").unwrap();
        let mut g = ExprGen::new(seed);
        let (f, gg, h) = (g.spatial_expr(), g.spatial_expr(), g.spatial_expr());
        let br = |a: &Expr, b: &Expr| s.nambu_bracket(a, b);
        let cyc = Expr::sum(vec![br(&f, &br(&gg, &h)), br(&gg, &br(&h, &f)), br(&h, &br(&f, &gg))]);
        let r = points().norm(&[cyc], "jacobi").unwrap().max;
        prop_assert!(r <= 1e-8, "{r}");
    }

    #[test]
    fn nambu_bracket_is_antisymmetric(seed in any::<u64>()) {
        let s = load_scenario("shear").unwrap();
        let mut g = ExprGen::new(seed);
        let (f, h) = (g.spatial_expr(), g.spatial_expr());
        let sum = s.nambu_bracket(&f, &h).add(&s.nambu_bracket(&h, &f));
        prop_assert!(points().norm(&[sum], "antisymmetry").unwrap().max <= TOL);
    }
}
