//! Valuations Π_F and Π_M, symbolic and numeric, with the pairing-moment
//! oracle and the disconnected-subtraction recursion.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::bridge::{enumerate_pairings, lift_p, Outcome};
use crate::error::Error;
use crate::feynman::{CanonDiagram, DiagForest, Diagram};
use crate::lincomb::{LinComb, Scalar};
use crate::multiindex::{DegreeParams, MIForest, MultiIndex, Rule};
use crate::renorm::{valuation_character_f, valuation_character_m, RenormF, RenormM};
use crate::symbolic::{scalar_to_f64, Gen, SymbolicValue};

mod lattice;
pub mod series;

pub use lattice::{value_f_numeric, KernelSpec, MAX_PLACEMENTS};
pub use series::{
    counterterms, cumulant_series, phi4_report, renormalised_cumulants, resummation_check, shifted_series, Phi4Report,
};

/// Π_F(Γ) as a generator.
pub fn value_f_symbolic(g: &Diagram) -> SymbolicValue {
    SymbolicValue::pi_f(&g.canonicalize())
}

/// Π_F on a forest: the product over components.
pub fn value_f_forest_symbolic(f: &DiagForest) -> SymbolicValue {
    f.parts().iter().fold(SymbolicValue::one(), |acc, c| acc.mul(&SymbolicValue::pi_f(c)))
}

pub fn value_f_forest_numeric(f: &DiagForest, k: &KernelSpec) -> Result<f64, Error> {
    let mut acc = 1.0;
    for c in f.parts() {
        acc *= value_f_numeric(c.diagram(), k)?;
    }
    Ok(acc)
}

/// Π_M(z^β) = Π_F(𝒫 z^β), written in diagram generators.
pub fn value_m_symbolic(m: &MultiIndex) -> SymbolicValue {
    let mut acc = SymbolicValue::zero();
    for (c, n) in lift_p(m).iter() {
        acc = acc.add(&SymbolicValue::pi_f(c).scale(n));
    }
    acc
}

pub fn value_m_forest_symbolic(f: &MIForest) -> SymbolicValue {
    f.parts().iter().fold(SymbolicValue::one(), |acc, m| acc.mul(&value_m_symbolic(m)))
}

/// Π_M(z^β) numerically through the lift.
pub fn value_m_numeric(m: &MultiIndex, k: &KernelSpec) -> Result<f64, Error> {
    let mut acc = 0.0;
    for (c, n) in lift_p(m).iter() {
        acc += scalar_to_f64(n) * value_f_numeric(c.diagram(), k)?;
    }
    Ok(acc)
}

/// Gaussian moment of the product of Wick powers: every pairing, connected
/// or not, weighted by the value of the graph it produces.
pub fn moment_oracle(m: &MultiIndex, k: &KernelSpec) -> Result<f64, Error> {
    let mut total = 0.0;
    for (outcome, count) in enumerate_pairings(m, false, 0).counts {
        let v = match &outcome {
            Outcome::Forest(f) => value_f_forest_numeric(f, k)?,
            // An isolated vertex integrates to one.
            Outcome::Legged(g) => {
                let f = crate::feynman::forest_of(g.legs.len(), &g.edges);
                value_f_forest_numeric(&f, k)?
            }
        };
        total += count as f64 * v;
    }
    Ok(total)
}

/// Every way to split `m` into an unordered family of at least one
/// nonempty part, as nonincreasing part lists.
fn multiset_partitions(m: &MultiIndex) -> Vec<Vec<MultiIndex>> {
    fn subs(entries: &[(u32, u32)]) -> Vec<Vec<(u32, u32)>> {
        let mut out = alloc::vec![Vec::new()];
        for &(k, n) in entries {
            let mut next = Vec::new();
            for base in &out {
                for c in 0..=n {
                    let mut v = base.clone();
                    if c > 0 {
                        v.push((k, c));
                    }
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
    fn rec(rem: &MultiIndex, bound: Option<&MultiIndex>, cur: &mut Vec<MultiIndex>, out: &mut Vec<Vec<MultiIndex>>) {
        if rem.is_empty() {
            out.push(cur.clone());
            return;
        }
        let entries: Vec<(u32, u32)> = rem.entries().collect();
        for s in subs(&entries) {
            let Ok(part) = MultiIndex::new(s) else { continue };
            if bound.is_some_and(|b| &part > b) {
                continue;
            }
            let rest = rem.checked_div(&part).expect("sub-multiset divides");
            cur.push(part.clone());
            rec(&rest, Some(&part), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, None, &mut Vec::new(), &mut out);
    out
}

/// Number of ways to split the labelled vertices of `m` into blocks of the
/// given types: ∏_k multinomial(β(k); β_j(k)) / ∏ r_j!.
fn split_weight(m: &MultiIndex, parts: &[MultiIndex]) -> f64 {
    use crate::combinatorics::factorial;
    let mut num = BigUint::from(1u32);
    for (_, n) in m.entries() {
        num *= factorial(n as u64);
    }
    let mut den = BigUint::from(1u32);
    for p in parts {
        for (_, n) in p.entries() {
            den *= factorial(n as u64);
        }
    }
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|q| **q == parts[i]).count();
        den *= factorial(j as u64);
        i += j;
    }
    scalar_to_f64(&Scalar::new(num.into(), den.into()))
}

/// Π_M by its defining recursion: the full moment minus every proper
/// splitting into smaller connected blocks.
pub fn value_m_recursive(m: &MultiIndex, k: &KernelSpec) -> Result<f64, Error> {
    fn go(m: &MultiIndex, k: &KernelSpec, memo: &mut BTreeMap<MultiIndex, f64>) -> Result<f64, Error> {
        if let Some(&v) = memo.get(m) {
            return Ok(v);
        }
        let mut v = moment_oracle(m, k)?;
        for parts in multiset_partitions(m) {
            if parts.len() < 2 {
                continue;
            }
            let mut prod = split_weight(m, &parts);
            for p in &parts {
                prod *= go(p, k, memo)?;
            }
            v -= prod;
        }
        memo.insert(m.clone(), v);
        Ok(v)
    }
    go(m, k, &mut BTreeMap::new())
}

/// Rewrite every Π_M generator in terms of Π_F generators.
pub fn expand_pi_m(v: &SymbolicValue) -> SymbolicValue {
    v.substitute(|g| match g {
        Gen::PiM(m) => Some(value_m_symbolic(m)),
        _ => None,
    })
}

/// Π_M∘M̂_M z^β and Π_F∘M̂_F∘𝒫 z^β, both in diagram generators.
pub fn equivalence_sides(
    m: &MultiIndex,
    p: &DegreeParams,
    rule: Option<&Rule>,
) -> Result<(SymbolicValue, SymbolicValue), Error> {
    let h = m.half_edges();
    let chr_m = valuation_character_m(h);
    let mut em = RenormM::multi_index(p, rule);
    let mut lhs = SymbolicValue::zero();
    for (f, c) in em.bphz(m, &chr_m)?.iter() {
        let v = f.iter().fold(SymbolicValue::one(), |acc, x| acc.mul(&SymbolicValue::pi_m(x)));
        lhs = lhs.add(&c.mul(&v));
    }
    let chr_f = valuation_character_f(h);
    let mut ef = RenormF::diagram(p, rule);
    let mut rhs = SymbolicValue::zero();
    for (g, n) in lift_p(m).iter() {
        for (f, c) in ef.bphz(g, &chr_f)?.iter() {
            let v = f.iter().fold(SymbolicValue::one(), |acc, x: &CanonDiagram| acc.mul(&SymbolicValue::pi_f(x)));
            rhs = rhs.add(&c.mul(&v).scale(n));
        }
    }
    Ok((expand_pi_m(&lhs), rhs))
}

/// Numeric valuation of a symbolic expression whose generators are Π_F
/// classes, Π_M multi-indices and nothing else.
pub fn eval_numeric(v: &SymbolicValue, k: &KernelSpec) -> Result<f64, Error> {
    let mut cache: BTreeMap<Gen, f64> = BTreeMap::new();
    for (mono, _) in v.terms().iter() {
        for (g, _) in mono.factors() {
            if cache.contains_key(g) {
                continue;
            }
            let x = match g {
                Gen::PiF(c) => value_f_numeric(c.diagram(), k)?,
                Gen::PiM(m) => value_m_numeric(m, k)?,
                other => return Err(Error::Kernel(alloc::format!("no numeric value for {other}"))),
            };
            cache.insert(g.clone(), x);
        }
    }
    Ok(v.eval_f64(|g| cache[g]))
}

/// LinComb helper: Π_M on each forest, in Π_M generators.
pub fn pi_m_of(x: &LinComb<MIForest, SymbolicValue>) -> SymbolicValue {
    let mut acc = SymbolicValue::zero();
    for (f, c) in x.iter() {
        let v = f.parts().iter().fold(SymbolicValue::one(), |a, m| a.mul(&SymbolicValue::pi_m(m)));
        acc = acc.add(&c.mul(&v));
    }
    acc
}
