//! Cumulant series, counterterms and the quartic-model report.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::combinatorics::factorial;
use crate::error::Error;
use crate::lincomb::{int, LinComb, Scalar};
use crate::multiindex::{
    apply_d, coproduct_reduced, enumerate_multi_indices, is_populatable, phi4_couplings, upsilon, CouplingMap,
    DegreeParams, MIForest, MultiIndex, Rule,
};
use crate::renorm::{divergent_multi_indices, formal_valuation_m, valuation_character_m_on, RenormM};
use crate::symbolic::SymbolicValue;

fn big(n: num_bigint::BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Σ Υ(z^β)/Ŝ(z^β) z^β over populatable multi-indices obeying the rule,
/// up to `max_half_edges`.
pub fn cumulant_series(c: &CouplingMap, rule: &Rule, max_half_edges: u32) -> LinComb<MultiIndex, SymbolicValue> {
    let arities: Vec<u32> = rule.arities().collect();
    let mut out = LinComb::zero();
    for m in enumerate_multi_indices(&arities, max_half_edges) {
        if !is_populatable(&m, 0) {
            continue;
        }
        let v = upsilon(c, &m);
        if !v.is_zero() {
            let s = big(m.hat_sym_factor());
            out.add_term(m, v.scale(&(Scalar::from_integer(1.into()) / s)));
        }
    }
    out
}

/// ℓ(δ) = Π_M 𝒜_M δ with Π_M kept formal.
fn bphz_value(eng: &mut RenormM, delta: &MultiIndex) -> SymbolicValue {
    let mut acc = SymbolicValue::zero();
    for (f, c) in eng.antipode(delta).iter() {
        let v = f.iter().fold(SymbolicValue::one(), |a, m| a.mul(&formal_valuation_m(m)));
        acc = acc.add(&v.scale(c));
    }
    acc
}

/// γ_k for k in the rule and k = 0:
///
/// γ_k = -Σ_δ̌ Σ_δ ℓ(δ) ⟨D^k δ, δ̌⟩ / (k! Ŝ(δ̌) S(δ)) Υ(δ̌),
///
/// where δ̌ obeys the rule, carries `max_half_edges` half-edges at most and
/// is populatable with k free legs, and δ runs over the divergent sector.
pub fn counterterms(
    c: &CouplingMap,
    rule: &Rule,
    p: &DegreeParams,
    max_half_edges: u32,
) -> BTreeMap<u32, SymbolicValue> {
    let mut eng = RenormM::multi_index(p, Some(rule));
    let mut ks: BTreeSet<u32> = rule.arities().collect();
    ks.insert(0);
    let deltas: Vec<MultiIndex> = divergent_multi_indices(p, max_half_edges)
        .into_iter()
        .filter(|d| d.max_arity() <= rule.max_arity())
        .collect();
    let mut out = BTreeMap::new();
    for k in ks {
        let mut gamma = SymbolicValue::zero();
        for delta in &deltas {
            if delta.half_edges() + k > max_half_edges {
                continue;
            }
            let dk = apply_d(&LinComb::basis(delta.clone()), k);
            let mut ell = None;
            for (check, coef) in dk.iter() {
                if !check.obeys(rule) || !is_populatable(check, k) {
                    continue;
                }
                let y = upsilon(c, check);
                if y.is_zero() {
                    continue;
                }
                let l = ell.get_or_insert_with(|| bphz_value(&mut eng, delta)).clone();
                let pairing = coef * big(check.sym_factor());
                let den = big(factorial(k as u64) * check.hat_sym_factor() * delta.sym_factor());
                gamma = gamma.sub(&l.mul(&y).scale(&(pairing / den)));
            }
        }
        out.insert(k, gamma);
    }
    out
}

/// Σ Υ(m)/Ŝ(m) M̂_M(m) over populatable m obeying the rule with at most
/// `max_order` vertices, truncated at coupling order `max_order`.
pub fn renormalised_cumulants(
    c: &CouplingMap,
    rule: &Rule,
    p: &DegreeParams,
    max_order: u32,
) -> Result<LinComb<MIForest, SymbolicValue>, Error> {
    let arities: Vec<u32> = rule.arities().collect();
    let mut eng = RenormM::multi_index(p, Some(rule));
    let mut out: LinComb<MIForest, SymbolicValue> = LinComb::zero();
    for m in enumerate_multi_indices(&arities, max_order * rule.max_arity()) {
        if m.norm() > max_order || !is_populatable(&m, 0) {
            continue;
        }
        let y = upsilon(c, &m);
        if y.is_zero() {
            continue;
        }
        let weight = y.scale(&(int(1) / big(m.hat_sym_factor())));
        let chr = valuation_character_m_on(eng.reachable(&m));
        for (f, v) in eng.bphz(&m, &chr)?.iter() {
            let t = v.mul(&weight).truncate_coupling_order(max_order);
            if !t.is_zero() {
                out.add_term(MIForest::new(f.clone()), t);
            }
        }
    }
    Ok(out)
}

/// Σ_θ ∏_k (-α_k - γ_k)^θ(k) / θ(k)! z^θ - γ_0, keeping populatable θ over
/// the rule's arities, truncated at coupling order `max_order`.
pub fn shifted_series(
    c: &CouplingMap,
    gammas: &BTreeMap<u32, SymbolicValue>,
    rule: &Rule,
    max_order: u32,
) -> LinComb<MIForest, SymbolicValue> {
    let arities: Vec<u32> = rule.arities().collect();
    let shifted: BTreeMap<u32, SymbolicValue> = arities
        .iter()
        .map(|&k| {
            let a = c.get(&k).cloned().unwrap_or_else(SymbolicValue::zero);
            let g = gammas.get(&k).cloned().unwrap_or_else(SymbolicValue::zero);
            (k, a.add(&g).neg())
        })
        .collect();
    let mut out = LinComb::zero();
    for theta in enumerate_multi_indices(&arities, max_order * rule.max_arity()) {
        if theta.norm() > max_order || !is_populatable(&theta, 0) {
            continue;
        }
        let mut v = SymbolicValue::one();
        for (k, n) in theta.entries() {
            v = v.mul(&shifted[&k].pow(n)).truncate_coupling_order(max_order);
            v = v.scale(&(int(1) / big(factorial(n as u64))));
        }
        if !v.is_zero() {
            out.add_term(MIForest::single(theta), v);
        }
    }
    let g0 = gammas.get(&0).cloned().unwrap_or_else(SymbolicValue::zero).truncate_coupling_order(max_order);
    out.add_term(MIForest::unit(), g0.neg());
    out
}

/// Both sides of the resummation identity and whether they agree.
pub fn resummation_check(
    c: &CouplingMap,
    rule: &Rule,
    p: &DegreeParams,
    max_order: u32,
    counterterm_half_edges: u32,
) -> Result<(LinComb<MIForest, SymbolicValue>, LinComb<MIForest, SymbolicValue>, bool), Error> {
    let lhs = renormalised_cumulants(c, rule, p, max_order)?;
    let gammas = counterterms(c, rule, p, counterterm_half_edges);
    let rhs = shifted_series(c, &gammas, rule, max_order);
    let ok = lhs == rhs;
    Ok((lhs, rhs, ok))
}

/// 2^{3m} n! / (m! (n-2m)!).
fn quartic_coefficient(n: u32, m: u32) -> Scalar {
    let num = factorial(n as u64) << (3 * m as usize);
    big(num) / big(factorial(m as u64) * factorial((n - 2 * m) as u64))
}

fn trunk(n: u32, m: u32) -> MultiIndex {
    MultiIndex::new([(2, m), (4, n - 2 * m)]).expect("nonempty")
}

/// Closed form of Δ_M z_4^n over populatable trunks.
pub fn quartic_coproduct_closed_form(n: u32) -> LinComb<(MIForest, MultiIndex)> {
    let mut out = LinComb::zero();
    for m in 1..=n / 2 {
        let t = trunk(n, m);
        if is_populatable(&t, 0) {
            out.add_term((MIForest::power(&MultiIndex::z(3, 2), m as usize), t), quartic_coefficient(n, m));
        }
    }
    out
}

/// Closed form of M̂_M z_4^n.
pub fn quartic_bphz_closed_form(n: u32) -> LinComb<MIForest, SymbolicValue> {
    let z = MultiIndex::z(4, n);
    let mut out = LinComb::basis(MIForest::single(z.clone()));
    if n == 2 || n == 3 {
        out.add_term(MIForest::unit(), SymbolicValue::pi_m(&z).neg());
        return out;
    }
    let pi = SymbolicValue::pi_m(&MultiIndex::z(3, 2));
    for m in 1..=n / 2 {
        let t = trunk(n, m);
        if !is_populatable(&t, 0) {
            continue;
        }
        let sign = if m % 2 == 1 { int(-1) } else { int(1) };
        out.add_term(MIForest::single(t), pi.pow(m).scale(&(sign * quartic_coefficient(n, m))));
    }
    out
}

/// γ_0, γ_2, γ_4 of the quartic model.
pub fn quartic_expected_counterterms() -> BTreeMap<u32, SymbolicValue> {
    let a = SymbolicValue::coupling(4);
    let mut out = BTreeMap::new();
    out.insert(4, SymbolicValue::zero());
    out.insert(2, a.pow(2).mul(&SymbolicValue::pi_m(&MultiIndex::z(3, 2))).scale(&int(8)));
    let g0 = a
        .pow(2)
        .mul(&SymbolicValue::pi_m(&MultiIndex::z(4, 2)))
        .scale(&crate::lincomb::ratio(1, 2))
        .sub(&a.pow(3).mul(&SymbolicValue::pi_m(&MultiIndex::z(4, 3))).scale(&crate::lincomb::ratio(1, 6)));
    out.insert(0, g0);
    out
}

/// One row of the quartic report.
#[derive(Clone, Debug)]
pub struct QuarticRow {
    pub n: u32,
    pub coproduct: LinComb<(MIForest, MultiIndex)>,
    pub coproduct_ok: bool,
    pub antipode: LinComb<MIForest>,
    pub antipode_ok: bool,
    pub bphz: LinComb<MIForest, SymbolicValue>,
    pub bphz_ok: bool,
}

/// The quartic-model report: coproducts, antipodes and BPHZ maps of z_4^n
/// against their closed forms, the counterterms, and the resummation check.
#[derive(Clone, Debug)]
pub struct Phi4Report {
    pub rows: Vec<QuarticRow>,
    pub counterterms: BTreeMap<u32, SymbolicValue>,
    pub counterterms_ok: bool,
    pub resummation_order: u32,
    pub resummation_ok: bool,
}

impl Phi4Report {
    pub fn all_ok(&self) -> bool {
        self.counterterms_ok
            && self.resummation_ok
            && self.rows.iter().all(|r| r.coproduct_ok && r.antipode_ok && r.bphz_ok)
    }
}

pub fn phi4_report(p: &DegreeParams, max_n: u32) -> Result<Phi4Report, Error> {
    let rule = Rule::phi4();
    let mut eng = RenormM::multi_index(p, Some(&rule));
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let z = MultiIndex::z(4, n);
        let coproduct = coproduct_reduced(&z, p, Some(&rule));
        let antipode = crate::renorm::to_mi_forests(&eng.antipode(&z));
        let want_antipode =
            if n <= 3 { LinComb::term(MIForest::single(z.clone()), int(-1)) } else { LinComb::zero() };
        let chr = valuation_character_m_on(eng.reachable(&z));
        let bphz = crate::renorm::to_mi_forests(&eng.bphz(&z, &chr)?);
        rows.push(QuarticRow {
            n,
            coproduct_ok: coproduct == quartic_coproduct_closed_form(n),
            coproduct,
            antipode_ok: antipode == want_antipode,
            antipode,
            bphz_ok: bphz == quartic_bphz_closed_form(n),
            bphz,
        });
    }
    let c = phi4_couplings();
    let counterterms = counterterms(&c, &rule, p, 12);
    let counterterms_ok = counterterms == quartic_expected_counterterms();
    let order = 8;
    let (_, _, resummation_ok) = resummation_check(&c, &rule, p, order, 12)?;
    Ok(Phi4Report { rows, counterterms, counterterms_ok, resummation_order: order, resummation_ok })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

impl fmt::Display for Phi4Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<4} {:<10} {:<10} {:<10}", "n", "coproduct", "antipode", "bphz")?;
        for r in &self.rows {
            writeln!(f, "{:<4} {:<10} {:<10} {:<10}", r.n, mark(r.coproduct_ok), mark(r.antipode_ok), mark(r.bphz_ok))?;
        }
        for r in &self.rows {
            writeln!(f)?;
            writeln!(f, "Delta z4^{} = {}", r.n, show_pairs(&r.coproduct))?;
            writeln!(f, "A z4^{} = {}", r.n, r.antipode)?;
            writeln!(f, "M z4^{} = {}", r.n, show_symbolic(&r.bphz))?;
        }
        writeln!(f)?;
        for (k, g) in &self.counterterms {
            writeln!(f, "gamma_{k:<2} = {g}")?;
        }
        writeln!(f, "counterterms: {}", mark(self.counterterms_ok))?;
        writeln!(f, "resummation to order {}: {}", self.resummation_order, mark(self.resummation_ok))
    }
}

fn show_pairs(x: &LinComb<(MIForest, MultiIndex)>) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let parts: Vec<String> = x.iter().map(|((f, a), c)| alloc::format!("({c}) {f} (x) {a}")).collect();
    parts.join(" + ")
}

pub(crate) fn show_symbolic(x: &LinComb<MIForest, SymbolicValue>) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let parts: Vec<String> = x.iter().map(|(f, c)| alloc::format!("({c}) {f}")).collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::ratio;

    #[test]
    fn cumulant_coefficients() {
        let rule = Rule::phi4();
        let s = cumulant_series(&phi4_couplings(), &rule, 16);
        let a = SymbolicValue::coupling(4);
        assert_eq!(s.coeff(&MultiIndex::z(4, 2)), a.pow(2).scale(&ratio(1, 2)));
        assert_eq!(s.coeff(&MultiIndex::z(4, 3)), a.pow(3).scale(&ratio(-1, 6)));
        assert_eq!(s.len(), 3);
        assert!(cumulant_series(&CouplingMap::new(), &rule, 16).is_zero());
    }

    #[test]
    fn quartic_counterterms() {
        let p = DegreeParams::phi4_3();
        let got = counterterms(&phi4_couplings(), &Rule::phi4(), &p, 12);
        assert_eq!(got, quartic_expected_counterterms());
        // A larger truncation adds nothing.
        assert_eq!(counterterms(&phi4_couplings(), &Rule::phi4(), &p, 20), got);
    }

    #[test]
    fn resummation_to_order_six() {
        let p = DegreeParams::phi4_3();
        let (lhs, rhs, ok) = resummation_check(&phi4_couplings(), &Rule::phi4(), &p, 6, 12).unwrap();
        assert!(ok, "{}\n{}", show_symbolic(&lhs), show_symbolic(&rhs));
    }

    #[test]
    fn report_rows() {
        let r = phi4_report(&DegreeParams::phi4_3(), 5).unwrap();
        assert!(r.all_ok(), "{r}");
        let four = &r.rows[2];
        assert_eq!(four.n, 4);
        let z32 = MultiIndex::z(3, 2);
        assert_eq!(four.coproduct.coeff(&(MIForest::single(z32.clone()), MultiIndex::new([(2, 1), (4, 2)]).unwrap())), int(96));
        assert_eq!(four.coproduct.coeff(&(MIForest::power(&z32, 2), MultiIndex::z(2, 2))), int(768));
    }
}
