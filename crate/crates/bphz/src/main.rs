//! `bphz`: command-line access to every pipeline stage.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use bphz_core::bridge::{enumerate_pairings, lift_p, lift_p_forest, Outcome};
use bphz_core::feynman::{coproduct_reduced_f, insert_f, simultaneous_insert_f};
use bphz_core::multiindex::{coproduct_reduced, insert, simultaneous_insert, CouplingMap};
use bphz_core::renorm::{to_diag_forests, to_mi_forests, valuation_character_m_on, Character, RenormF, RenormM};
use bphz_core::valuation::{counterterms, eval_numeric, phi4_report, pi_m_of, value_f_forest_symbolic};
use bphz_core::{DegreeParams, LinComb, Rule, Scalar, SymbolicValue};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bphz::parse::{parse_expression, Expr};
use bphz::{json, verify};

#[derive(Parser)]
#[command(name = "bphz", version, about = "Exact BPHZ renormalisation on multi-indices and Feynman diagrams")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Hölder degree of the kernel, as an integer or p/q.
    #[arg(long, global = true, default_value = "-1", allow_hyphen_values = true)]
    ell: String,
    /// Spatial dimension.
    #[arg(long = "dim", global = true, default_value_t = 3)]
    dim: u32,
    /// Allowed vertex arities, comma separated (e.g. 2,4).
    #[arg(long, global = true)]
    rule: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced coproduct of a monomial or diagram.
    Coproduct(ExprArg),
    /// Twisted antipode of a monomial, forest or diagram.
    Antipode {
        #[command(flatten)]
        expr: ExprArg,
        /// Run the recursion on convergent diagrams too.
        #[arg(long)]
        ungated: bool,
    },
    /// BPHZ map with the formal valuation character.
    Bphz {
        #[command(flatten)]
        expr: ExprArg,
        /// Also evaluate the renormalised value on this lattice kernel (JSON {d, N, K}).
        #[arg(long)]
        kernel: Option<std::path::PathBuf>,
    },
    /// Insertion of the expression (or a forest, simultaneously) into another.
    Insert {
        #[command(flatten)]
        expr: ExprArg,
        /// The trunk receiving the insertion.
        #[arg(long)]
        into: String,
    },
    /// Lift a monomial or forest to diagrams, or project a diagram to its monomial.
    Lift(ExprArg),
    /// Degree and divergence of a monomial or diagram.
    Degree(ExprArg),
    /// Brute-force pairing counts for a monomial.
    Pairings {
        #[command(flatten)]
        expr: ExprArg,
        /// Half-edges left unpaired.
        #[arg(long, default_value_t = 0)]
        free_legs: u32,
        /// Keep disconnected pairings.
        #[arg(long)]
        all: bool,
    },
    /// Run a property suite.
    Verify {
        /// One of orbit-stabilizer, populatable, square, adjointness, morphism, antipode, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_edges: u32,
    },
    /// Counterterms gamma_k of the renormalised measure.
    Counterterms {
        /// Largest number of half-edges of the contributing multi-indices.
        #[arg(long, default_value_t = 12)]
        trunc: u32,
    },
    /// The quartic model report.
    Phi4 {
        #[arg(long, default_value_t = 6)]
        max_n: u32,
    },
}

#[derive(Args)]
struct ExprArg {
    /// Expression such as "z4^4", "z3^2 . z3^2" or "n=2; e=1-2,1-2,1-2".
    #[arg(long)]
    expr: String,
}

/// What a command produced: text, JSON, and whether it verified.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

struct Ctx {
    params: DegreeParams,
    rule: Option<Rule>,
}

fn parse_scalar(s: &str) -> anyhow::Result<Scalar> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n.trim().parse().with_context(|| format!("bad rational '{s}'"))?;
    let d: num_bigint::BigInt = d.trim().parse().with_context(|| format!("bad rational '{s}'"))?;
    if d == 0.into() {
        bail!("zero denominator in '{s}'");
    }
    Ok(Scalar::new(n, d))
}

fn parse_rule(s: &str) -> anyhow::Result<Rule> {
    let arities = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad arity '{x}' in rule")))
        .collect::<anyhow::Result<Vec<u32>>>()?;
    Ok(Rule::new(arities)?)
}

fn expr(e: &ExprArg) -> anyhow::Result<Expr> {
    parse_expression(&e.expr).map_err(|err| anyhow!("{err} in '{}'", e.expr))
}

fn lines<B: Ord + Clone + std::fmt::Display, C: bphz_core::Coefficient + std::fmt::Display>(x: &LinComb<B, C>) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let width = x.iter().map(|(_, c)| c.to_string().len()).max().unwrap_or(0);
    x.iter().fold(String::new(), |mut s, (b, c)| {
        let _ = writeln!(s, "{:>width$}  {b}", c.to_string());
        s
    })
}

fn pair_lines<A: Ord + Clone + std::fmt::Display, B: Ord + Clone + std::fmt::Display>(x: &LinComb<(A, B)>) -> String {
    let shown: LinComb<String> = x.map_basis(|(a, b)| format!("{a}  (x)  {b}"));
    lines(&shown)
}

fn coproduct(ctx: &Ctx, e: &ExprArg) -> anyhow::Result<Output> {
    let rule = ctx.rule.as_ref();
    Ok(match expr(e)? {
        Expr::MultiIndex(m) => {
            let x = coproduct_reduced(&m, &ctx.params, rule);
            Output::new(pair_lines(&x), json::lincomb(&x))
        }
        Expr::Diagram(g) => {
            let x = coproduct_reduced_f(&g, &ctx.params, rule);
            Output::new(pair_lines(&x), json::lincomb(&x))
        }
        _ => bail!("coproduct takes a single monomial or diagram"),
    })
}

fn antipode(ctx: &Ctx, e: &ExprArg, ungated: bool) -> anyhow::Result<Output> {
    let rule = ctx.rule.as_ref();
    Ok(match expr(e)? {
        Expr::MultiIndex(m) => {
            let mut eng = RenormM::multi_index(&ctx.params, rule);
            let x = to_mi_forests(&if ungated { eng.antipode_ungated(&m) } else { eng.antipode(&m) });
            Output::new(lines(&x), json::lincomb(&x))
        }
        Expr::MIForest(f) => {
            let x = to_mi_forests(&RenormM::multi_index(&ctx.params, rule).antipode_forest(f.parts()));
            Output::new(lines(&x), json::lincomb(&x))
        }
        Expr::Diagram(g) => {
            let mut eng = RenormF::diagram(&ctx.params, rule);
            let c = g.canonicalize();
            let x = to_diag_forests(&if ungated { eng.antipode_ungated(&c) } else { eng.antipode(&c) });
            Output::new(lines(&x), json::lincomb(&x))
        }
        Expr::DiagForest(f) => {
            let x = to_diag_forests(&RenormF::diagram(&ctx.params, rule).antipode_forest(f.parts()));
            Output::new(lines(&x), json::lincomb(&x))
        }
    })
}

fn bphz(ctx: &Ctx, e: &ExprArg, kernel: Option<&std::path::Path>) -> anyhow::Result<Output> {
    let rule = ctx.rule.as_ref();
    let kernel = match kernel {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            Some(json::kernel_from_json(&v)?)
        }
        None => None,
    };
    let (mut text, mut out, value) = match expr(e)? {
        Expr::MultiIndex(m) => {
            let mut eng = RenormM::multi_index(&ctx.params, rule);
            let chr = valuation_character_m_on(eng.reachable(&m));
            let x = to_mi_forests(&eng.bphz(&m, &chr)?);
            (lines(&x), json::symbolic_lincomb(&x), pi_m_of(&x))
        }
        Expr::Diagram(g) => {
            let mut eng = RenormF::diagram(&ctx.params, rule);
            let c = g.canonicalize();
            let keys = eng.reachable(&c);
            let max = keys.iter().map(|k| 2 * k.diagram().edge_count()).max().unwrap_or(0);
            let chr = Character::from_fn(keys, max, |k| SymbolicValue::pi_f(k));
            let x = to_diag_forests(&eng.bphz(&c, &chr)?);
            let value = x.iter().fold(SymbolicValue::zero(), |acc, (f, v)| acc.add(&v.mul(&value_f_forest_symbolic(f))));
            (lines(&x), json::symbolic_lincomb(&x), value)
        }
        _ => bail!("bphz takes a single monomial or diagram"),
    };
    let _ = writeln!(text, "value = {value}");
    let mut obj = json!({"terms": out.take(), "value": json::symbolic(&value)});
    if let Some(k) = kernel {
        let v = eval_numeric(&value, &k)?;
        let _ = writeln!(text, "numeric = {v:e}");
        obj["numeric"] = json!(v);
        obj["kernel"] = json::kernel_to_json(&k);
    }
    Ok(Output::new(text, obj))
}

fn do_insert(ctx: &Ctx, e: &ExprArg, into: &str) -> anyhow::Result<Output> {
    let rule = ctx.rule.as_ref();
    let trunk = parse_expression(into).map_err(|err| anyhow!("{err} in '{into}'"))?;
    Ok(match (expr(e)?, trunk) {
        (Expr::MultiIndex(b), Expr::MultiIndex(a)) => {
            let x = insert(&b, &a, rule);
            Output::new(lines(&x), json::lincomb(&x))
        }
        (Expr::MIForest(f), Expr::MultiIndex(a)) => {
            let x = simultaneous_insert(&f, &a, rule);
            Output::new(lines(&x), json::lincomb(&x))
        }
        (Expr::Diagram(g1), Expr::Diagram(g2)) => {
            let x = insert_f(&g1, &g2, rule);
            Output::new(lines(&x), json::lincomb(&x))
        }
        (Expr::DiagForest(f), Expr::Diagram(g)) => {
            let x = simultaneous_insert_f(&f, &g, rule);
            Output::new(lines(&x), json::lincomb(&x))
        }
        _ => bail!("insert needs a monomial or forest into a monomial, or a diagram or forest into a diagram"),
    })
}

fn lift(e: &ExprArg) -> anyhow::Result<Output> {
    Ok(match expr(e)? {
        Expr::MultiIndex(m) => {
            let x = lift_p(&m);
            Output::new(lines(&x), json::lincomb(&x))
        }
        Expr::MIForest(f) => {
            let x = lift_p_forest(&f);
            Output::new(lines(&x), json::lincomb(&x))
        }
        Expr::Diagram(g) => {
            let m = g.counting_map();
            Output::new(format!("{m}\n"), json::display(&m))
        }
        Expr::DiagForest(f) => {
            let m = f.counting_map();
            Output::new(format!("{m}\n"), json::display(&m))
        }
    })
}

fn degree(ctx: &Ctx, e: &ExprArg) -> anyhow::Result<Output> {
    let (deg, div, obeys) = match expr(e)? {
        Expr::MultiIndex(m) => (m.degree(&ctx.params), m.is_divergent(&ctx.params), ctx.rule.as_ref().map(|r| m.obeys(r))),
        Expr::Diagram(g) => (g.degree(&ctx.params), g.is_divergent(&ctx.params), ctx.rule.as_ref().map(|r| g.obeys(r))),
        _ => bail!("degree takes a single monomial or diagram"),
    };
    let mut text = format!("degree     {deg}\ndivergent  {div}\n");
    let mut obj = json!({"degree": json::scalar(&deg), "divergent": div});
    if let Some(o) = obeys {
        let _ = writeln!(text, "obeys rule {o}");
        obj["obeys_rule"] = json!(o);
    }
    Ok(Output::new(text, obj))
}

fn pairings(e: &ExprArg, free_legs: u32, all: bool) -> anyhow::Result<Output> {
    let Expr::MultiIndex(m) = expr(e)? else { bail!("pairings takes a single monomial") };
    let res = enumerate_pairings(&m, !all, free_legs);
    let mut rows: Vec<(String, u64)> = Vec::new();
    for (o, &n) in &res.counts {
        let key = match o {
            Outcome::Forest(f) => f.to_string(),
            Outcome::Legged(g) => {
                let edges: Vec<String> = g.edges.iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
                format!("legs={:?}; e={}", g.legs, edges.join(","))
            }
        };
        rows.push((key, n));
    }
    let width = rows.iter().map(|(_, n)| n.to_string().len()).max().unwrap_or(1);
    let mut text = String::new();
    for (k, n) in &rows {
        let _ = writeln!(text, "{n:>width$}  {k}");
    }
    let _ = writeln!(text, "total {}", res.total());
    let arr: Vec<Value> = rows.iter().map(|(k, n)| json!({"key": k, "count": n})).collect();
    Ok(Output::new(text, json!({"pairings": arr, "total": res.total()})))
}

fn run_verify(ctx: &Ctx, suite: &str, max_edges: u32) -> anyhow::Result<Output> {
    let names: Vec<&str> = if suite == "all" { verify::SUITES.to_vec() } else { vec![suite] };
    let settings = verify::Settings { params: ctx.params.clone(), rule: ctx.rule.clone(), max_edges };
    let mut text = String::new();
    let mut arr = Vec::new();
    let mut ok = true;
    for name in names {
        let Some(rep) = verify::run(name, &settings) else {
            bail!("unknown suite '{name}'; expected one of {} or all", verify::SUITES.join(", "));
        };
        ok &= rep.passed();
        let status = if rep.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(text, "{:<18} {status}  {} cases", rep.name, rep.cases);
        for f in rep.failures.iter().take(10) {
            let _ = writeln!(text, "    {f}");
        }
        arr.push(json!({"suite": rep.name, "passed": rep.passed(), "cases": rep.cases, "failures": rep.failures}));
    }
    Ok(Output { text, json: Value::Array(arr), ok })
}

/// Couplings α_k for every arity of the rule except the Gaussian k = 2.
fn couplings(rule: &Rule) -> CouplingMap {
    rule.arities().filter(|&k| k != 2).map(|k| (k, SymbolicValue::coupling(k))).collect()
}

fn run_counterterms(ctx: &Ctx, trunc: u32) -> anyhow::Result<Output> {
    let rule = ctx.rule.clone().unwrap_or_else(Rule::phi4);
    let g = counterterms(&couplings(&rule), &rule, &ctx.params, trunc);
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    for (k, v) in &g {
        let _ = writeln!(text, "gamma_{k:<3} = {v}");
        obj.insert(format!("gamma_{k}"), json::symbolic(v));
    }
    Ok(Output::new(text, Value::Object(obj)))
}

fn run_phi4(ctx: &Ctx, max_n: u32) -> anyhow::Result<Output> {
    if max_n < 2 {
        bail!("--max-n must be at least 2");
    }
    let rep = phi4_report(&ctx.params, max_n)?;
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "coproduct": json::lincomb(&r.coproduct),
                "coproduct_ok": r.coproduct_ok,
                "antipode": json::lincomb(&r.antipode),
                "antipode_ok": r.antipode_ok,
                "bphz": json::symbolic_lincomb(&r.bphz),
                "bphz_ok": r.bphz_ok,
            })
        })
        .collect();
    let gammas: serde_json::Map<String, Value> =
        rep.counterterms.iter().map(|(k, v)| (format!("gamma_{k}"), json::symbolic(v))).collect();
    let obj = json!({
        "rows": rows,
        "counterterms": gammas,
        "counterterms_ok": rep.counterterms_ok,
        "resummation_order": rep.resummation_order,
        "resummation_ok": rep.resummation_ok,
    });
    Ok(Output { text: rep.to_string(), json: obj, ok: rep.all_ok() })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Output> {
    let ell = parse_scalar(&cli.common.ell)?;
    let params = DegreeParams::new(ell, cli.common.dim)?;
    let rule = cli.common.rule.as_deref().map(parse_rule).transpose()?;
    let ctx = Ctx { params, rule };
    match &cli.command {
        Command::Coproduct(e) => coproduct(&ctx, e),
        Command::Antipode { expr, ungated } => antipode(&ctx, expr, *ungated),
        Command::Bphz { expr, kernel } => bphz(&ctx, expr, kernel.as_deref()),
        Command::Insert { expr, into } => do_insert(&ctx, expr, into),
        Command::Lift(e) => lift(e),
        Command::Degree(e) => degree(&ctx, e),
        Command::Pairings { expr, free_legs, all } => pairings(expr, *free_legs, *all),
        Command::Verify { suite, max_edges } => run_verify(&ctx, suite, *max_edges),
        Command::Counterterms { trunc } => run_counterterms(&ctx, *trunc),
        Command::Phi4 { max_n } => run_phi4(&ctx, *max_n),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            if cli.common.json {
                print!("{}", json::render(&out.json));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_scalar("-1/2").unwrap(), Scalar::new((-1).into(), 2.into()));
        assert_eq!(parse_scalar("3").unwrap(), Scalar::from_integer(3.into()));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn rules() {
        assert_eq!(parse_rule("2, 4").unwrap(), Rule::phi4());
        assert!(parse_rule("2,x").is_err());
    }

    #[test]
    fn quartic_couplings_skip_the_gaussian() {
        assert_eq!(couplings(&Rule::phi4()), bphz_core::multiindex::phi4_couplings());
    }
}
