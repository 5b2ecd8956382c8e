//! JSON encodings. Object keys are sorted by serde_json's default map, and
//! linear combinations are emitted in basis order, so output is
//! byte-stable.

use std::fmt::Display;

use anyhow::{bail, Context};
use bphz_core::valuation::KernelSpec;
use bphz_core::{LinComb, Scalar, SymbolicValue};
use serde_json::{json, Value};

/// Basis elements that serialise as a JSON key.
pub trait JsonKey {
    fn to_json(&self) -> Value;
}

macro_rules! display_key {
    ($($t:ty),*) => {$(
        impl JsonKey for $t {
            fn to_json(&self) -> Value {
                Value::String(self.to_string())
            }
        }
    )*};
}

display_key!(bphz_core::MultiIndex, bphz_core::MIForest, bphz_core::CanonDiagram, bphz_core::DiagForest);

impl<A: JsonKey, B: JsonKey> JsonKey for (A, B) {
    fn to_json(&self) -> Value {
        json!([self.0.to_json(), self.1.to_json()])
    }
}

pub fn scalar(s: &Scalar) -> Value {
    json!({"num": s.numer().to_string(), "den": s.denom().to_string()})
}

/// `[{key, num, den}, ...]`.
pub fn lincomb<B: Ord + Clone + JsonKey>(x: &LinComb<B>) -> Value {
    Value::Array(
        x.iter()
            .map(|(b, c)| json!({"key": b.to_json(), "num": c.numer().to_string(), "den": c.denom().to_string()}))
            .collect(),
    )
}

/// `[{key, value}, ...]` with the symbolic coefficient printed.
pub fn symbolic_lincomb<B: Ord + Clone + JsonKey>(x: &LinComb<B, SymbolicValue>) -> Value {
    Value::Array(x.iter().map(|(b, c)| json!({"key": b.to_json(), "value": c.to_string()})).collect())
}

pub fn symbolic(v: &SymbolicValue) -> Value {
    Value::String(v.to_string())
}

pub fn display<T: Display>(v: &T) -> Value {
    Value::String(v.to_string())
}

pub fn kernel_to_json(k: &KernelSpec) -> Value {
    json!({"d": k.dim(), "N": k.side(), "K": k.values()})
}

pub fn kernel_from_json(v: &Value) -> anyhow::Result<KernelSpec> {
    let field = |name: &str| v.get(name).with_context(|| format!("kernel is missing '{name}'"));
    let as_u32 = |name: &str| -> anyhow::Result<u32> {
        let x = field(name)?.as_u64().with_context(|| format!("'{name}' must be a positive integer"))?;
        u32::try_from(x).with_context(|| format!("'{name}' is too large"))
    };
    let d = as_u32("d")?;
    let side = as_u32("N")?;
    let Some(raw) = field("K")?.as_array() else { bail!("'K' must be an array") };
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_f64().with_context(|| format!("K[{i}] is not a number")))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    Ok(KernelSpec::new(d, side, values)?)
}

/// Pretty-printed, newline-terminated.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use bphz_core::lincomb::{int, ratio};
    use bphz_core::MultiIndex;

    #[test]
    fn lincomb_layout() {
        let mut x = LinComb::zero();
        x.add_term(MultiIndex::z(4, 2), ratio(-3, 2));
        x.add_term(MultiIndex::z(2, 1), int(5));
        let s = serde_json::to_string(&lincomb(&x)).unwrap();
        assert_eq!(s, r#"[{"den":"1","key":"z2","num":"5"},{"den":"2","key":"z4^2","num":"-3"}]"#);
    }

    #[test]
    fn kernel_round_trip() {
        let k = KernelSpec::new(1, 4, vec![1.5, 0.25, -0.5, 0.25]).unwrap();
        assert_eq!(kernel_from_json(&kernel_to_json(&k)).unwrap(), k);
        assert!(kernel_from_json(&json!({"d": 1, "N": 2, "K": [1.0]})).is_err());
        assert!(kernel_from_json(&json!({"d": 1, "K": [1.0]})).is_err());
    }
}
