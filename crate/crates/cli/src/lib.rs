//! Command-line front end. `run` parses arguments, dispatches to a subcommand
//! and returns the process exit code: 0 on success, 1 when a mathematical check
//! fails, 2 on invalid input.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use tamechow::acceptance;
use tamechow::chow::{
    chrelfinite_check, check_relation_vanishes, parse_modulus, random_relation_members, relative_chow, sk1_moore_check,
    Variant,
};
use tamechow::fields::arith::primes_up_to;
use tamechow::fields::{FieldSpec, FunctionField, GlobalField, NumberField, PrimePlace, QuadraticField, RationalField};
use tamechow::ksymbols::{boundary_k2, hilbert_product, k2q_components, weil_product, SteinbergSymbol};
use tamechow::lattice::{smith_normal_form, FinAbGroup, IntMatrix, Presentation};
use tamechow::reciprocity::{
    frobenius_order_check, real_frobenius_order_check, verify_rec_isomorphism, GaloisTarget,
};
use tamechow::sample::{self, DEFAULT_SEED};
use tamechow::Error;

pub const SCHEMA: &str = "tamechow/1";

/// Primes up to this bound get their classes listed by `raychow` and `rec`.
const LISTED_PRIME_BOUND: u64 = 50;

#[derive(Parser, Debug)]
#[command(name = "tamechow", version, about = "Relative Chow groups, ray class groups and tame symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Relative Chow group CH₀(X, D) of Spec O_k for a squarefree modulus.
    Raychow {
        /// Q or Qsqrt:<d>.
        #[arg(long, default_value = "Q")]
        field: String,
        /// Comma-separated places, or an integer n standing for n O_k.
        #[arg(long, default_value = "1")]
        modulus: String,
        #[arg(long, default_value = "narrow")]
        variant: String,
        /// Also run the exact-sequence and relation checks.
        #[arg(long)]
        check: bool,
        /// Random relation members tested by --check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Frobenius classes in Gal(Q(ζ_m)/Q) or its real subfield.
    Rec {
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value = "narrow")]
        variant: String,
        #[arg(long)]
        prime: Option<u64>,
        /// Verify the isomorphism and sweep Frobenius orders for p < 100.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Weil reciprocity over F_q(t): one symbol, or a random sweep.
    Weil {
        #[arg(long)]
        q: u64,
        /// A symbol "f;g" in t (and z, the generator of F_q, when q is not prime).
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tame decomposition of {a, b} in K₂(Q) and the Hilbert product formula.
    K2q {
        /// A symbol "a;b" of nonzero rationals; without it a random sweep runs.
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Smith normal form and cokernel of an integer matrix.
    Snf {
        /// "[[2,0],[0,3]]" or "2 0; 0 3".
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u32>,
        /// Include wall-clock times (output is then not reproducible).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Outcome of a subcommand: exit code and what to print.
struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(ok: bool, text: String, mut json: Value) -> Self {
        if let Value::Object(m) = &mut json {
            m.insert("schema".into(), SCHEMA.into());
            m.insert("passed".into(), ok.into());
        }
        Outcome { code: if ok { 0 } else { 1 }, text, json }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InfiniteCokernel { .. } | Error::RelationViolated(_) => 1,
        _ => 2,
    }
}

/// Runs the CLI with the given arguments (including the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let json = match &cli.command {
        Command::Raychow { common, .. }
        | Command::Rec { common, .. }
        | Command::Weil { common, .. }
        | Command::K2q { common, .. }
        | Command::Snf { common, .. }
        | Command::Selftest { common, .. } => common.json,
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Command) -> tamechow::Result<Outcome> {
    match cmd {
        Command::Raychow { field, modulus, variant, check, samples, common } => {
            let variant: Variant = variant.parse()?;
            match field.parse::<FieldSpec>()? {
                FieldSpec::Rational => raychow(&RationalField, &modulus, variant, check, samples, common.seed),
                FieldSpec::Quadratic(d) => {
                    raychow(&QuadraticField::new(d)?, &modulus, variant, check, samples, common.seed)
                }
                FieldSpec::Function(_) => Err(Error::Invalid(
                    "relative Chow groups over F_q(t) are infinite (degree map); use weil for function fields".into(),
                )),
            }
        }
        Command::Rec { modulus, variant, prime, verify, .. } => rec(modulus, variant.parse()?, prime, verify),
        Command::Weil { q, symbol, samples, common } => weil(q, symbol.as_deref(), samples, common.seed),
        Command::K2q { symbol, samples, common } => k2q(symbol.as_deref(), samples, common.seed),
        Command::Snf { matrix, .. } => snf(&matrix),
        Command::Selftest { only, timings, common } => selftest(only, timings, common.seed),
    }
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn group_text(g: &FinAbGroup) -> String {
    format!("[{}]", strs(g.invariant_factors()).join(", "))
}

fn raychow<F: NumberField>(
    field: &F,
    modulus: &str,
    variant: Variant,
    check: bool,
    samples: usize,
    seed: u64,
) -> tamechow::Result<Outcome> {
    let m = parse_modulus(field, modulus, variant)?;
    let g = relative_chow(field, &m)?;
    let mut text = String::new();
    let _ = writeln!(text, "field: {}", field.describe());
    let _ = writeln!(text, "modulus: {} ({variant})", m.describe(field));
    let _ = writeln!(text, "invariant_factors: {}", group_text(g.group()));
    let _ = writeln!(text, "order: {}", g.order());
    let _ = writeln!(text, "class_group: {}", group_text(field.class_group()));
    let _ = writeln!(text, "prime classes:");
    let mut classes = Vec::new();
    for p in primes_up_to(LISTED_PRIME_BOUND) {
        for (v, _) in field.places_over(p)? {
            if m.contains(&v) {
                continue;
            }
            let c = g.prime_class(&v)?;
            let order = g.group().element_order(&c);
            let name = field.place_to_string(&v);
            let _ = writeln!(text, "  {name}: [{}] order {order}", strs(&c).join(", "));
            classes.push(json!({"place": name, "class": strs(&c), "order": order.to_string()}));
        }
    }
    let mut ok = true;
    let mut json = json!({
        "command": "raychow",
        "field": field.describe(),
        "modulus": m.places().iter().map(|v| field.place_to_string(v)).collect::<Vec<_>>(),
        "variant": variant.to_string(),
        "group": serde_json::to_value(g.group()).expect("serializable"),
        "class_group": serde_json::to_value(field.class_group()).expect("serializable"),
        "prime_classes": classes,
    });
    if check {
        let r = chrelfinite_check(field, &m)?;
        let mut rng = sample::rng(seed);
        let mut vanishing = 0;
        for f in random_relation_members(field, &m, &mut rng, samples, 50) {
            if check_relation_vanishes(&f, &g)? {
                vanishing += 1;
            }
        }
        ok = r.passed() && vanishing == samples;
        let _ = writeln!(
            text,
            "exact sequence: kernel {} of local order {}, {}",
            r.kernel_order,
            r.local_order,
            if r.passed() { "ok" } else { "FAILED" }
        );
        let _ = writeln!(text, "relation members with vanishing class: {vanishing}/{samples}");
        json["checks"] = json!({
            "exact_sequence": r.passed(),
            "kernel_order": r.kernel_order.to_string(),
            "local_order": r.local_order.to_string(),
            "relations_vanishing": vanishing.to_string(),
            "relations_sampled": samples.to_string(),
        });
    }
    Ok(Outcome::new(ok, text, json))
}

fn rec(m: u64, variant: Variant, prime: Option<u64>, verify: bool) -> tamechow::Result<Outcome> {
    let md = parse_modulus(&RationalField, &m.to_string(), variant)?;
    let t = GaloisTarget::new(&md);
    let mut text = String::new();
    let _ = writeln!(text, "modulus: {m} ({variant})");
    let _ = writeln!(text, "galois_group: {}", group_text(t.group()));
    let frob = |p: u64| -> tamechow::Result<(String, Value)> {
        let f = t.frobenius(&PrimePlace::new(p)?)?;
        let order = t.group().element_order(&f.target_class);
        Ok((
            format!("  Frob_{p}: zeta -> zeta^{} class [{}] order {order}\n", f.residue, strs(&f.target_class).join(", ")),
            json!({"prime": p.to_string(), "residue": f.residue.to_string(), "class": strs(&f.target_class), "order": order.to_string()}),
        ))
    };
    let primes: Vec<u64> = match prime {
        Some(p) => vec![p],
        None => primes_up_to(LISTED_PRIME_BOUND).into_iter().filter(|p| !m.is_multiple_of(*p)).collect(),
    };
    let mut frobs = Vec::new();
    for p in primes {
        let (line, j) = frob(p)?;
        text.push_str(&line);
        frobs.push(j);
    }
    let mut json = json!({
        "command": "rec",
        "modulus": m.to_string(),
        "variant": variant.to_string(),
        "galois_group": serde_json::to_value(t.group()).expect("serializable"),
        "frobenius": frobs,
    });
    let mut ok = true;
    if verify {
        let r = verify_rec_isomorphism(&md)?;
        let mut bad_orders = Vec::new();
        for p in primes_up_to(99).into_iter().filter(|p| !m.is_multiple_of(*p)) {
            let good = match variant {
                Variant::Narrow => frobenius_order_check(p, m)?,
                Variant::Ordinary => real_frobenius_order_check(p, m)?,
            };
            if !good {
                bad_orders.push(p);
            }
        }
        ok = r.passed() && bad_orders.is_empty();
        let _ = writeln!(text, "chow_group: [{}]", strs(&r.chow_factors).join(", "));
        let _ = writeln!(text, "generators: {:?}", r.generators);
        let _ = writeln!(text, "isomorphism: {}", if r.passed() { "verified" } else { "FAILED" });
        let _ = writeln!(
            text,
            "frobenius orders vs cyclotomic factor degrees (p < 100): {}",
            if bad_orders.is_empty() { "ok".to_string() } else { format!("FAILED at {bad_orders:?}") }
        );
        json["verify"] = json!({
            "chow_factors": strs(&r.chow_factors),
            "target_factors": strs(&r.target_factors),
            "generators": r.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "isomorphism": r.passed(),
            "transport_failures": r.transport_failures.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "order_failures": bad_orders.iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome::new(ok, text, json))
}

fn weil(q: u64, symbol: Option<&str>, samples: usize, seed: u64) -> tamechow::Result<Outcome> {
    if let Some(s) = symbol {
        let k = FunctionField::new(q)?;
        let sym = SteinbergSymbol::parse(&k, s)?;
        let mut text = String::new();
        let mut comps = Vec::new();
        for (v, x) in boundary_k2(&k, &sym)? {
            let name = k.place_to_string(&v);
            let val = k.constants().element_to_string(x);
            let _ = writeln!(text, "  {name}: {val}");
            comps.push(json!({"place": name, "norm": val}));
        }
        let w = weil_product(&k, &sym)?;
        let _ = writeln!(text, "product: {}", k.constants().element_to_string(w));
        let json = json!({"command": "weil", "q": q.to_string(), "components": comps,
                          "product": k.constants().element_to_string(w)});
        return Ok(Outcome::new(w == 1, text, json));
    }
    let r = sk1_moore_check(q, samples, seed)?;
    let mut text = String::new();
    let _ = writeln!(text, "F_{q}(t): {} random symbols, {} with product != 1", r.samples, r.failures);
    if let Some(f) = &r.first_failure {
        let _ = writeln!(text, "first failure: {f}");
    }
    for (place, ok) in &r.norm_checks {
        let _ = writeln!(text, "norm from {place} onto F_{q}^x: {}", if *ok { "surjective" } else { "NOT surjective" });
    }
    let _ = writeln!(text, "{}", if r.passed() { "all products 1" } else { "FAILED" });
    let json = json!({
        "command": "weil",
        "q": q.to_string(),
        "seed": seed.to_string(),
        "samples": r.samples.to_string(),
        "failures": r.failures.to_string(),
        "norm_surjective": r.norm_checks.iter().map(|(p, ok)| json!({"place": p, "surjective": ok})).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(r.passed(), text, json))
}

fn k2q(symbol: Option<&str>, samples: usize, seed: u64) -> tamechow::Result<Outcome> {
    if let Some(s) = symbol {
        let sym = SteinbergSymbol::parse(&RationalField, s)?;
        let c = k2q_components(&sym)?;
        let h = hilbert_product(&sym.f, &sym.g)?;
        let mut text = String::new();
        let _ = writeln!(text, "symbol: {{{}, {}}}", sym.f, sym.g);
        let _ = writeln!(text, "sign (2-adic Hilbert symbol): {}", c.sign);
        for (p, t) in &c.odd {
            let _ = writeln!(text, "  d_{p} = {t} in F_{p}");
        }
        let _ = writeln!(text, "hilbert: inf {}, 2 {}", h.infinite, h.two);
        for (p, x) in &h.odd {
            let _ = writeln!(text, "  ({p}) {x}");
        }
        let _ = writeln!(text, "product: {}", h.product());
        let json = json!({
            "command": "k2q",
            "sign": c.sign.to_string(),
            "odd": c.odd.iter().map(|(p, t)| json!({"prime": p.to_string(), "tame": t.to_string()})).collect::<Vec<_>>(),
            "hilbert": {
                "infinite": h.infinite.to_string(),
                "two": h.two.to_string(),
                "odd": h.odd.iter().map(|(p, x)| json!({"prime": p.to_string(), "symbol": x.to_string()})).collect::<Vec<_>>(),
                "product": h.product().to_string(),
            },
        });
        return Ok(Outcome::new(h.product() == 1, text, json));
    }
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = sample::random_rational(&mut rng, 10_000);
        let b = sample::random_rational(&mut rng, 10_000);
        if hilbert_product(&a, &b)?.product() != 1 {
            failures.push(format!("{a};{b}"));
        }
    }
    let ok = failures.is_empty();
    let text = format!("{samples} random pairs, {} violate the product formula\n", failures.len());
    let json = json!({"command": "k2q", "samples": samples.to_string(), "seed": seed.to_string(), "failures": failures});
    Ok(Outcome::new(ok, text, json))
}

fn parse_matrix(s: &str) -> tamechow::Result<IntMatrix> {
    let bad = |msg: &str| Error::Parse(format!("matrix {s:?}: {msg}"));
    let rows: Vec<Vec<BigInt>> = if s.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| bad(&e.to_string()))?;
        let rows = v.as_array().ok_or_else(|| bad("expected a list of rows"))?;
        rows.iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("expected a list of rows"))?
                    .iter()
                    .map(|x| {
                        let t = match x {
                            Value::String(t) => t.clone(),
                            Value::Number(n) => n.to_string(),
                            _ => return Err(bad("entries must be integers")),
                        };
                        t.parse::<BigInt>().map_err(|_| bad("entries must be integers"))
                    })
                    .collect()
            })
            .collect::<tamechow::Result<_>>()?
    } else {
        s.split(';')
            .filter(|r| !r.trim().is_empty())
            .map(|r| {
                r.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<BigInt>().map_err(|_| bad("entries must be integers")))
                    .collect()
            })
            .collect::<tamechow::Result<_>>()?
    };
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad("rows have different lengths"));
    }
    IntMatrix::from_rows(&rows)
}

fn snf(matrix: &str) -> tamechow::Result<Outcome> {
    let a = parse_matrix(matrix)?;
    let s = smith_normal_form(&a);
    let diag = s.diagonal();
    let free_rank = a.rows() - s.rank;
    let torsion: Vec<BigInt> = diag.iter().take(s.rank).filter(|d| !num_traits::One::is_one(*d)).cloned().collect();
    let mut text = String::new();
    let _ = writeln!(text, "diagonal: [{}]", strs(&diag).join(", "));
    let _ = writeln!(text, "rank: {}", s.rank);
    let coker = if free_rank == 0 {
        let g = Presentation::new(a.rows(), a.clone()).quotient()?.group;
        let _ = writeln!(text, "cokernel: {} of order {}", group_text(&g), g.order());
        serde_json::to_value(&g).expect("serializable")
    } else {
        let _ = writeln!(text, "cokernel: Z^{free_rank} x [{}] (infinite)", strs(&torsion).join(", "));
        json!({"free_rank": free_rank.to_string(), "torsion": strs(&torsion)})
    };
    let _ = writeln!(text, "U:\n{}", s.u);
    let _ = writeln!(text, "V:\n{}", s.v);
    let rows = |m: &IntMatrix| (0..m.rows()).map(|i| strs(m.row(i))).collect::<Vec<_>>();
    let json = json!({
        "command": "snf",
        "diagonal": strs(&diag),
        "rank": s.rank.to_string(),
        "cokernel": coker,
        "u": rows(&s.u),
        "v": rows(&s.v),
    });
    Ok(Outcome::new(true, text, json))
}

fn selftest(only: Option<u32>, timings: bool, seed: u64) -> tamechow::Result<Outcome> {
    let all = acceptance::criteria();
    if let Some(id) = only {
        if !all.iter().any(|c| c.id == id) {
            return Err(Error::Invalid(format!("no criterion {id} (expected 1..={})", all.len())));
        }
    }
    let mut text = String::new();
    let mut items = Vec::new();
    let mut ok = true;
    for c in all.iter().filter(|c| only.is_none_or(|id| id == c.id)) {
        let r = c.run(seed);
        ok &= r.ok();
        let status = if r.ok() { "PASS" } else { "FAIL" };
        if timings {
            let _ = writeln!(text, "{}", r.line());
        } else {
            let _ = writeln!(text, "[{status}] {}. {}: {} (limit {}s)", r.id, r.name, r.detail, r.limit.as_secs());
        }
        let mut item = json!({"id": r.id.to_string(), "name": r.name, "passed": r.ok(), "detail": r.detail,
                              "limit_seconds": r.limit.as_secs().to_string()});
        if timings {
            item["elapsed_seconds"] = format!("{:.3}", r.elapsed.as_secs_f64()).into();
        }
        items.push(item);
    }
    let _ = writeln!(text, "{}", if ok { "all criteria passed" } else { "some criteria FAILED" });
    Ok(Outcome::new(ok, text, json!({"command": "selftest", "seed": seed.to_string(), "criteria": items})))
}
