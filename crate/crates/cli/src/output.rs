use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Number, Value};

use powerspec::poly::RationalPolynomial;
use powerspec::spectrum::{FactoredSpectralFunction, SpectralFactor};

/// Float at 17 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn integer(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

pub fn polynomial(p: &RationalPolynomial) -> Value {
    object([
        ("coefficients", Value::Array(p.coefficients.iter().map(rational).collect())),
        ("text", Value::String(p.to_string())),
    ])
}

fn factor(f: &SpectralFactor, with_mu: bool) -> Value {
    let signs: String = f.witness.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
    let witness = object([
        ("char_poly", Value::String(f.witness.char_poly.to_string())),
        ("eigenvalue", float(f.witness.eigenvalue)),
        ("signs", Value::String(signs)),
        ("subgraph", Value::String(f.witness.subgraph.to_string())),
    ]);
    let mut fields = vec![
        ("residual", float(f.residual)),
        ("sigma_sq", float(f.sigma_sq)),
        ("witness", witness),
    ];
    if with_mu {
        fields.push(("mu", rational(&f.mu)));
    }
    Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

pub fn factored(f: &FactoredSpectralFunction) -> Value {
    object([
        ("k", Value::from(f.k)),
        ("mu0", rational(&f.mu0)),
        ("factors", Value::Array(f.nonzero_factors().map(|x| factor(x, true)).collect())),
        ("zero_clusters", Value::Array(f.zero_clusters().map(|x| factor(x, false)).collect())),
        ("degree_check", Value::Bool(f.degree_check)),
        ("condition_estimate", float(f.condition_estimate)),
        ("precision_bits", Value::from(f.precision_bits)),
        (
            "moment_checks",
            Value::Array(
                f.moment_checks
                    .iter()
                    .map(|m| object([("order", Value::from(m.order)), ("relative", float(m.relative))]))
                    .collect(),
            ),
        ),
        ("text", Value::String(f.to_string())),
    ])
}

pub fn factored_text(f: &FactoredSpectralFunction) -> String {
    let mut out = format!("{f}\n");
    out += &format!("mu0 = {}\n", f.mu0);
    for x in &f.factors {
        out += &format!(
            "  sigma^2 = {:<22.16} mu = {:<8} residual = {:.2e}\n",
            x.sigma_sq, x.mu.to_string(), x.residual
        );
    }
    out += &format!(
        "degree check: {}, condition estimate: {:.3e}, precision: {} bits\n",
        f.degree_check, f.condition_estimate, f.precision_bits
    );
    out
}
