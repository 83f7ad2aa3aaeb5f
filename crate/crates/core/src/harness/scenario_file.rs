//! Flat `key = value` scenario files.

use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use super::catalog;
use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};
use crate::fluid::FlowScenario;
use crate::forms::SampleGrid;
use crate::report::Tolerances;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<Spanned<String>>,
    v: Option<Spanned<Vec<Spanned<String>>>>,
    #[serde(rename = "B")]
    b: Option<Spanned<Vec<Spanned<String>>>>,
    phi: Option<Spanned<String>>,
    h1: Option<Spanned<String>>,
    p: Option<Spanned<String>>,
    #[serde(default)]
    lambda: Vec<Spanned<String>>,
    #[serde(default)]
    phi_k: Vec<Spanned<String>>,
    grid_n: Option<Spanned<i64>>,
    tol: Option<Spanned<f64>>,
    rho_floor: Option<Spanned<f64>>,
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(src: &str, span: Range<usize>, message: impl Into<String>) -> Error {
    let (line, column) = line_col(src, span.start);
    Error::Input { line, column, message: message.into() }
}

fn expression(src: &str, key: &str, s: &Spanned<String>) -> Result<Expr> {
    let e = parse_expression(s.get_ref()).map_err(|e| {
        // +1 skips the opening quote
        let offset = s.span().start + 1 + e.position();
        at(src, offset..offset, format!("{key}: {e}"))
    })?;
    if !e.constants_finite() {
        return Err(at(src, s.span(), format!("{key}: non-finite constant in \"{}\"", s.get_ref())));
    }
    Ok(e)
}

fn triple(src: &str, key: &str, s: &Spanned<Vec<Spanned<String>>>) -> Result<[Expr; 3]> {
    let items = s.get_ref();
    if items.len() != 3 {
        return Err(at(src, s.span(), format!("{key} needs 3 components, found {}", items.len())));
    }
    Ok([expression(src, key, &items[0])?, expression(src, key, &items[1])?, expression(src, key, &items[2])?])
}

fn positive(src: &str, key: &str, s: &Spanned<f64>) -> Result<f64> {
    let v = *s.get_ref();
    if !v.is_finite() || v <= 0.0 {
        return Err(at(src, s.span(), format!("{key} must be a positive finite number")));
    }
    Ok(v)
}

/// Parses scenario text. `fallback_name` is used when the file has no
/// `name` key.
pub fn parse_scenario(src: &str, fallback_name: &str) -> Result<FlowScenario<f64>> {
    let raw: RawScenario = toml::from_str(src).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        at(src, span, e.message().trim().to_string())
    })?;
    let missing = |f: &str| Error::Invalid(format!("missing field {f}"));
    let v = triple(src, "v", raw.v.as_ref().ok_or_else(|| missing("v"))?)?;
    let b = triple(src, "B", raw.b.as_ref().ok_or_else(|| missing("B"))?)?;
    let phi = expression(src, "phi", raw.phi.as_ref().ok_or_else(|| missing("phi"))?)?;
    let h1 = expression(src, "h1", raw.h1.as_ref().ok_or_else(|| missing("h1"))?)?;
    let name = raw.name.map_or_else(|| fallback_name.to_string(), |n| n.into_inner());

    let mut s = FlowScenario::new(name, v, b, phi, h1);
    if let Some(p) = &raw.p {
        s.p = Some(expression(src, "p", p)?);
    }
    s.lambdas = raw.lambda.iter().map(|l| expression(src, "lambda", l)).collect::<Result<_>>()?;
    s.phi_k = raw.phi_k.iter().map(|l| expression(src, "phi_k", l)).collect::<Result<_>>()?;
    if let Some(n) = &raw.grid_n {
        let v = *n.get_ref();
        if !(1..=256).contains(&v) {
            return Err(at(src, n.span(), "grid_n must be between 1 and 256"));
        }
        s.grid = SampleGrid::uniform(v as usize);
    }
    if let Some(t) = &raw.tol {
        s.tol = Tolerances::uniform(positive(src, "tol", t)?);
    }
    if let Some(r) = &raw.rho_floor {
        s.rho_floor = positive(src, "rho_floor", r)?;
    }
    Ok(s)
}

/// Resolves a catalog name or reads a scenario file.
pub fn load_scenario(name_or_path: &str) -> Result<FlowScenario<f64>> {
    if let Some(src) = catalog::source(name_or_path) {
        return parse_scenario(src, name_or_path);
    }
    let path = Path::new(name_or_path);
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read scenario {name_or_path}: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&src, stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
name = "demo"
v = ["sin(z)", "0", "0"]   # shear
B = ["1", "1", "0"]
phi = "y"
h1 = "z"
lambda = ["x", "y"]
grid_n = 4
"#;

    #[test]
    fn parses_flat_file() {
        let s = parse_scenario(GOOD, "x").unwrap();
        assert_eq!(s.name, "demo");
        assert_eq!(s.lambdas.len(), 2);
        assert_eq!(s.grid.x.len(), 4);
        assert!(s.p.is_none());
    }

    #[test]
    fn missing_phi() {
        let src = GOOD.replace("phi = \"y\"\n", "");
        let err = parse_scenario(&src, "x").unwrap_err();
        assert!(err.to_string().contains("missing field phi"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_scenario("v = [\"1\", \"0\"\nphi = ", "x").unwrap_err();
        assert!(matches!(err, Error::Input { .. }), "{err}");
        let err = parse_scenario(&GOOD.replace("\"y\"", "\"y +\""), "x").unwrap_err();
        match err {
            Error::Input { line, column, .. } => assert_eq!((line, column), (5, 11)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn non_finite_constants_rejected() {
        let err = parse_scenario(&GOOD.replace("\"y\"", "\"y + 1e400\""), "x").unwrap_err();
        assert!(err.to_string().contains("non-finite"), "{err}");
    }

    #[test]
    fn unknown_keys_and_bad_shapes_rejected() {
        assert!(parse_scenario(&format!("{GOOD}\nfoo = 1\n"), "x").is_err());
        assert!(parse_scenario(&GOOD.replace("[\"1\", \"1\", \"0\"]", "[\"1\"]"), "x").is_err());
        assert!(parse_scenario(&GOOD.replace("grid_n = 4", "grid_n = 0"), "x").is_err());
    }

    #[test]
    fn catalog_names_resolve() {
        for name in catalog::names() {
            let s = load_scenario(name).unwrap();
            assert_eq!(s.name, *name);
        }
        assert!(load_scenario("/nonexistent/file.scn").is_err());
    }
}
