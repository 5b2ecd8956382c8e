//! Property suites run by `bphz verify`.

use std::collections::BTreeMap;

use bphz_core::bridge::{
    adjoint_phi_p_check, commuting_square_check, enumerate_pairings, insertion_morphism_check, lift_p,
    orbit_stabilizer_check, star_morphism_check,
};
use bphz_core::feynman::catalog::connected_diagrams_up_to;
use bphz_core::feynman::{coproduct_reduced_f, simultaneous_insert_f_restricted};
use bphz_core::multiindex::{enumerate_multi_indices, is_populatable};
use bphz_core::renorm::{divergent_diagrams, divergent_multi_indices, RenormF, RenormM};
use bphz_core::{CanonDiagram, DegreeParams, DiagForest, MultiIndex, Rule, Scalar};
use num_bigint::BigUint;

pub const SUITES: [&str; 6] = ["orbit-stabilizer", "populatable", "square", "adjointness", "morphism", "antipode"];

pub struct Settings {
    pub params: DegreeParams,
    pub rule: Option<Rule>,
    pub max_edges: u32,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(name: &str, s: &Settings) -> Option<SuiteReport> {
    Some(match name {
        "orbit-stabilizer" => orbit_stabilizer(s),
        "populatable" => populatable(s),
        "square" => square(s),
        "adjointness" => adjointness(s),
        "morphism" => morphism(s),
        "antipode" => antipode(s),
        _ => return None,
    })
}

fn big(n: &BigUint) -> Scalar {
    Scalar::from_integer(n.clone().into())
}

fn obeys(rule: Option<&Rule>, m: &MultiIndex) -> bool {
    rule.is_none_or(|r| m.obeys(r))
}

fn multi_indices(max_edges: u32) -> Vec<MultiIndex> {
    let h = 2 * max_edges;
    enumerate_multi_indices(&(1..=h).collect::<Vec<_>>(), h)
}

/// Forests from `pool` with total edge count at most `budget` and at most
/// `max_parts` parts.
fn forests(pool: &[CanonDiagram], budget: u32, max_parts: usize) -> Vec<DiagForest> {
    fn rec(
        pool: &[CanonDiagram],
        start: usize,
        budget: u32,
        max_parts: usize,
        cur: &mut Vec<CanonDiagram>,
        out: &mut Vec<DiagForest>,
    ) {
        if !cur.is_empty() {
            out.push(DiagForest::new(cur.clone()));
        }
        if cur.len() == max_parts {
            return;
        }
        for i in start..pool.len() {
            let e = pool[i].diagram().edge_count();
            if e <= budget {
                cur.push(pool[i].clone());
                rec(pool, i, budget - e, max_parts, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, 0, budget, max_parts, &mut Vec::new(), &mut out);
    out
}

fn orbit_stabilizer(s: &Settings) -> SuiteReport {
    let mut r = SuiteReport::new("orbit-stabilizer");
    for c in connected_diagrams_up_to(s.max_edges) {
        let g = c.diagram();
        r.record(orbit_stabilizer_check(g), || format!("S_M != N S_F on {c}"));
        r.record(adjoint_phi_p_check(g, &g.counting_map()), || format!("<Phi G, m> != <G, P m> on {c}"));
    }
    r
}

fn populatable(s: &Settings) -> SuiteReport {
    let mut r = SuiteReport::new("populatable");
    for m in multi_indices(s.max_edges) {
        for free in 0..=2 {
            let brute = !enumerate_pairings(&m, true, free).is_empty();
            r.record(is_populatable(&m, free) == brute, || format!("{m} with {free} free legs"));
        }
        // The lift exists exactly on populatable multi-indices.
        r.record(lift_p(&m).is_zero() != is_populatable(&m, 0), || format!("lift support on {m}"));
    }
    r
}

fn square(s: &Settings) -> SuiteReport {
    let mut r = SuiteReport::new("square");
    for m in multi_indices(s.max_edges) {
        if m.norm() > 4 || !is_populatable(&m, 0) || !obeys(s.rule.as_ref(), &m) {
            continue;
        }
        r.record(commuting_square_check(&m, &s.params, s.rule.as_ref()), || format!("square fails on {m}"));
    }
    r
}

fn adjointness(s: &Settings) -> SuiteReport {
    type Key = (DiagForest, CanonDiagram, CanonDiagram);
    let mut r = SuiteReport::new("adjointness");
    let (p, rule) = (&s.params, s.rule.as_ref());
    let all = connected_diagrams_up_to(s.max_edges);
    let graphs: Vec<&CanonDiagram> = all.iter().filter(|c| rule.is_none_or(|r| c.diagram().obeys(r))).collect();
    let divergent: Vec<CanonDiagram> = all.iter().filter(|c| c.is_divergent(p)).cloned().collect();
    let mut extract: BTreeMap<Key, Scalar> = BTreeMap::new();
    for g in &graphs {
        for ((f, q), c) in coproduct_reduced_f(g.diagram(), p, rule).iter() {
            let w = c * big(&f.sym_factor()) * big(q.aut_order());
            *extract.entry((f.clone(), q.clone(), (*g).clone())).or_default() += w;
        }
    }
    let mut insert: BTreeMap<Key, Scalar> = BTreeMap::new();
    for q in &graphs {
        let budget = s.max_edges - q.diagram().edge_count();
        for f in forests(&divergent, budget, q.diagram().vertex_count() as usize) {
            for (g, c) in simultaneous_insert_f_restricted(&f, q.diagram(), p, rule).iter() {
                *insert.entry((f.clone(), (*q).clone(), g.clone())).or_default() += c * big(g.aut_order());
            }
        }
    }
    extract.retain(|_, v| *v != Scalar::default());
    insert.retain(|_, v| *v != Scalar::default());
    let keys: std::collections::BTreeSet<&Key> = extract.keys().chain(insert.keys()).collect();
    for k in keys {
        let (a, b) = (extract.get(k), insert.get(k));
        r.record(a == b, || format!("{} (x) {} in {}: {a:?} vs {b:?}", k.0, k.1, k.2));
    }
    r
}

fn morphism(s: &Settings) -> SuiteReport {
    let mut r = SuiteReport::new("morphism");
    let rule = s.rule.as_ref();
    let all = connected_diagrams_up_to(s.max_edges);
    for g1 in &all {
        for g2 in &all {
            if g1.diagram().edge_count() + g2.diagram().edge_count() <= s.max_edges {
                r.record(insertion_morphism_check(g1.diagram(), g2.diagram(), rule), || {
                    format!("insertion of {g1} into {g2}")
                });
            }
        }
    }
    for g in &all {
        let budget = s.max_edges - g.diagram().edge_count();
        for f in forests(&all, budget, g.diagram().vertex_count() as usize) {
            r.record(star_morphism_check(&f, g.diagram(), rule), || format!("forest {f} into {g}"));
        }
    }
    r
}

fn antipode(s: &Settings) -> SuiteReport {
    let mut r = SuiteReport::new("antipode");
    let (p, rule) = (&s.params, s.rule.as_ref());
    let mut em = RenormM::multi_index(p, rule);
    for m in divergent_multi_indices(p, 2 * s.max_edges) {
        r.record(em.twisted_identity(&m).is_zero(), || format!("identity fails on {m}"));
    }
    let mut ef = RenormF::diagram(p, rule);
    for c in divergent_diagrams(p, 2 * s.max_edges) {
        r.record(ef.twisted_identity(&c).is_zero(), || format!("identity fails on {c}"));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use bphz_core::lincomb::int;

    #[test]
    fn every_suite_passes_on_small_inputs() {
        for rule in [None, Some(Rule::phi4())] {
            let s = Settings { params: DegreeParams::new(int(-1), 1).unwrap(), rule, max_edges: 4 };
            for name in SUITES {
                let rep = run(name, &s).unwrap();
                assert!(rep.passed(), "{name}: {:?}", rep.failures);
                assert!(rep.cases > 0, "{name} ran nothing");
            }
        }
        assert!(run("nope", &Settings { params: DegreeParams::phi4_3(), rule: None, max_edges: 1 }).is_none());
    }
}
