//! Built-in flows, stored in scenario-file syntax.

const SHEAR: &str = r#"# Steady shear v = sin(z) ∂x advecting B = ∂x + ∂y and φ = y.
name = "shear"
v = ["sin(z)", "0", "0"]
B = ["1", "1", "0"]
phi = "y"
h1 = "z"
p = "0"
lambda = ["x"]
phi_k = ["x - t*sin(z) + 2"]
"#;

const ROTATION: &str = r#"# Rigid rotation about the z axis with vertical frozen-in field.
name = "rotation"
v = ["-y", "x", "0"]
B = ["0", "0", "1"]
phi = "z"
h1 = "(x^2 + y^2)*z"
p = "(x^2 + y^2)/2"
lambda = ["x"]
phi_k = ["x*cos(t) + y*sin(t) + 10"]
"#;

const ABC: &str = r#"# Arnold–Beltrami–Childress flow, A = B = C = 1, with its vorticity
# (equal to v) as frozen-in field. It has no nontrivial advected function,
# so the kinematic checks fail by design; Euler and helicity integral hold.
name = "abc"
v = ["sin(z) + cos(y)", "sin(x) + cos(z)", "sin(y) + cos(x)"]
B = ["sin(z) + cos(y)", "sin(x) + cos(z)", "sin(y) + cos(x)"]
phi = "z"
h1 = "x"
p = "-((sin(z) + cos(y))^2 + (sin(x) + cos(z))^2 + (sin(y) + cos(x))^2)/2"
"#;

const ENTRIES: [(&str, &str); 3] = [("shear", SHEAR), ("rotation", ROTATION), ("abc", ABC)];

pub fn names() -> &'static [&'static str] {
    &["shear", "rotation", "abc"]
}

/// Scenario-file text of a catalog flow.
pub fn source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
