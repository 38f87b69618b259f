//! kmarc: construct, verify and classify KM-arcs in PG(2,q), q = 2^h.

mod certificate;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use certificate::{verify_certificate, Certificate};
use kmarc_core::arcs::KMArc;
use kmarc_core::constructions::{
    admissible_search, construct_gw, construct_km, construct_q4, construct_q8, construct_q16,
    lunelli_sce, GwVariant, OPolynomial,
};
use kmarc_core::corpus::standard_corpus;
use kmarc_core::gf2e::FieldElement;
use kmarc_core::plane::ProjLine;
use kmarc_core::symmetry::{equivalent, is_elation_arc, is_translation_arc, stabilizer};
use kmarc_core::{Error, FieldCtx, Result};

#[derive(Parser)]
#[command(name = "kmarc", version, about = "KM-arcs in PG(2,q), q = 2^h")]
struct Cli {
    /// Worker threads (also read from KMARC_THREADS; 0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for the randomized subcommands (selftest)
    #[arg(long, global = true, default_value_t = 0x6b6d_6172_6373)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an arc from one of the families and write its certificate
    Construct(ConstructArgs),
    /// Re-derive every claim of a certificate from its points
    Verify {
        cert: PathBuf,
        /// Candidate budget for the stabilizer recomputation, if claimed
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exact stabilizer in PGammaL(3,q) by exhaustive frame search
    Stabilizer {
        cert: PathBuf,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Equivalence witness between two certificates, or a proof of absence
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Test one t-secant as a translation line
    Translation {
        cert: PathBuf,
        /// line coefficients as three comma-separated hex field elements
        #[arg(long)]
        line: String,
    },
    /// Canonical admissible tuples for the q/16 family
    Admissible {
        #[arg(long)]
        q: u64,
    },
    /// Existence/elation/translation table over the standard corpus
    Report {
        /// largest field degree to include (7 = PG(2,128))
        #[arg(long, default_value_t = 7)]
        max_h: u32,
    },
    /// Seeded randomized invariant checks (field axioms, spans, collineations)
    Selftest {
        #[arg(long, default_value_t = 10_000)]
        cases: u64,
    },
}

#[derive(Args)]
struct ConstructArgs {
    /// km, gw-a, gw-b, gw-c, q4, q8, q16, lunelli-sce
    #[arg(long)]
    family: String,
    /// field order q = 2^h of the target plane
    #[arg(long)]
    q: Option<u64>,
    /// override the irreducible modulus (hex bit mask)
    #[arg(long)]
    modulus: Option<String>,
    /// km: the type exponent (t = 2^i)
    #[arg(long)]
    i: Option<u32>,
    /// km: o-polynomial, xpow:<n> or lunelli-sce
    #[arg(long)]
    opoly: Option<String>,
    /// gw-*: certificate of the base arc
    #[arg(long)]
    base: Option<PathBuf>,
    /// q4: parameters
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 0)]
    aa: u8,
    #[arg(long, default_value_t = 0)]
    bb: u8,
    /// q8/q16: comma-separated hex alphas
    #[arg(long)]
    alphas: Option<String>,
    /// output certificate path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.threads > 0 {
        cli.threads
    } else {
        std::env::var("KMARC_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(0)
    };
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Budget { .. } => 3,
                Error::NotAKmArc(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Verify { cert, budget, json } => cmd_verify(&cert, budget, json),
        Command::Stabilizer { cert, budget, json } => cmd_stabilizer(&cert, budget, json),
        Command::Equiv { a, b, budget, json } => cmd_equiv(&a, &b, budget, json),
        Command::Translation { cert, line } => cmd_translation(&cert, &line),
        Command::Admissible { q } => cmd_admissible(q),
        Command::Report { max_h } => cmd_report(max_h),
        Command::Selftest { cases } => cmd_selftest(cli.seed, cases),
    }
}

fn degree_of(q: u64) -> Result<u32> {
    if q < 2 || !q.is_power_of_two() || q > 1 << 16 {
        return Err(Error::Argument(format!("q = {q} is not a supported power of two")));
    }
    Ok(q.trailing_zeros())
}

fn context_for(args: &ConstructArgs, required_q: Option<u64>) -> Result<FieldCtx> {
    let q = match (args.q, required_q) {
        (Some(q), Some(r)) if q != r => {
            return Err(Error::Argument(format!("this family requires q = {r}")));
        }
        (Some(q), _) => q,
        (None, Some(r)) => r,
        (None, None) => return Err(Error::Argument("--q is required".into())),
    };
    let h = degree_of(q)?;
    match &args.modulus {
        Some(m) => {
            let bits = u32::from_str_radix(m, 16)
                .map_err(|_| Error::Argument(format!("bad modulus hex {m:?}")))?;
            FieldCtx::with_modulus(h, bits)
        }
        None => FieldCtx::new(h),
    }
}

fn parse_element(ctx: &FieldCtx, s: &str) -> Result<FieldElement> {
    let e = FieldElement::from_hex(s)?;
    ctx.try_el(e.bits())
}

fn parse_elements(ctx: &FieldCtx, s: &str) -> Result<Vec<FieldElement>> {
    s.split(',').map(|part| parse_element(ctx, part.trim())).collect()
}

fn cmd_construct(args: ConstructArgs) -> Result<u8> {
    let mut params = BTreeMap::new();
    let family = args.family.clone();
    let (ctx, arc): (FieldCtx, KMArc) = match family.as_str() {
        "lunelli-sce" => {
            let ctx = context_for(&args, Some(16))?;
            (ctx, {
                let ctx2 = context_for(&args, Some(16))?;
                lunelli_sce(&ctx2)?
            })
        }
        "q4" => {
            let ctx = context_for(&args, None)?;
            let alpha = parse_element(
                &ctx,
                args.alpha.as_deref().ok_or_else(|| Error::Argument("--alpha required".into()))?,
            )?;
            let beta = parse_element(
                &ctx,
                args.beta.as_deref().ok_or_else(|| Error::Argument("--beta required".into()))?,
            )?;
            params.insert("alpha".into(), alpha.to_hex());
            params.insert("beta".into(), beta.to_hex());
            params.insert("a".into(), (args.aa & 1).to_string());
            params.insert("b".into(), (args.bb & 1).to_string());
            let arc = construct_q4(&ctx, alpha, beta, args.aa, args.bb)?;
            (ctx, arc)
        }
        "q8" => {
            let ctx = context_for(&args, None)?;
            let alphas = parse_elements(
                &ctx,
                args.alphas.as_deref().ok_or_else(|| Error::Argument("--alphas required".into()))?,
            )?;
            if alphas.len() != 3 {
                return Err(Error::Argument("q8 needs exactly three alphas".into()));
            }
            params.insert(
                "alphas".into(),
                alphas.iter().map(|a| a.to_hex()).collect::<Vec<_>>().join(","),
            );
            let arc = construct_q8(&ctx, [alphas[0], alphas[1], alphas[2]])?;
            (ctx, arc)
        }
        "q16" => {
            let ctx = context_for(&args, None)?;
            let alphas = match args.alphas.as_deref() {
                Some(s) => {
                    let v = parse_elements(&ctx, s)?;
                    if v.len() != 4 {
                        return Err(Error::Argument("q16 needs exactly four alphas".into()));
                    }
                    [v[0], v[1], v[2], v[3]]
                }
                None => {
                    let classes = admissible_search(&ctx);
                    match classes.first() {
                        Some(t) => t.alphas,
                        None => {
                            return Err(Error::Argument(format!(
                                "no admissible tuple exists in GF({})",
                                ctx.q()
                            )))
                        }
                    }
                }
            };
            params.insert(
                "alphas".into(),
                alphas.iter().map(|a| a.to_hex()).collect::<Vec<_>>().join(","),
            );
            let arc = construct_q16(&ctx, alphas)?;
            (ctx, arc)
        }
        "km" => {
            let ctx = context_for(&args, None)?;
            let i = args.i.ok_or_else(|| Error::Argument("--i required".into()))?;
            if i >= ctx.h() {
                return Err(Error::Argument("need i < h".into()));
            }
            let small = FieldCtx::new(ctx.h() - i)?;
            let spec = args.opoly.as_deref().unwrap_or("xpow:1");
            let g = parse_opoly(&small, spec)?;
            params.insert("i".into(), i.to_string());
            params.insert("opoly".into(), spec.to_string());
            let arc = construct_km(&ctx, &small, i, &g)?;
            (ctx, arc)
        }
        "gw-a" | "gw-b" | "gw-c" => {
            let ctx = context_for(&args, None)?;
            let base_path =
                args.base.as_ref().ok_or_else(|| Error::Argument("--base required".into()))?;
            let (small, base, _) = Certificate::load_arc(base_path)?;
            let variant = match family.as_str() {
                "gw-a" => GwVariant::A,
                "gw-b" => GwVariant::B,
                _ => GwVariant::C,
            };
            params.insert("base".into(), base_path.display().to_string());
            let arc = construct_gw(&ctx, &small, &base, variant)?;
            (ctx, arc)
        }
        other => return Err(Error::Argument(format!("unknown family {other:?}"))),
    };

    let provenance = format!(
        "construct --family {} --q {}{}",
        family,
        ctx.q(),
        params.iter().map(|(k, v)| format!(" --{k} {v}")).collect::<String>()
    );
    let cert = Certificate::from_arc(&ctx, &arc, &family, params, provenance)?;
    match &args.out {
        Some(path) => {
            cert.save(path)?;
            println!(
                "wrote {} ({} points, type {}, q = {})",
                path.display(),
                arc.len(),
                arc.t(),
                ctx.q()
            );
        }
        None => println!("{}", serde_json::to_string_pretty(&cert).unwrap()),
    }
    Ok(0)
}

fn parse_opoly(small: &FieldCtx, spec: &str) -> Result<OPolynomial> {
    if let Some(n) = spec.strip_prefix("xpow:") {
        let n: u32 = n
            .parse()
            .map_err(|_| Error::Argument(format!("bad o-polynomial exponent {n:?}")))?;
        return OPolynomial::monomial(small, n);
    }
    if spec == "lunelli-sce" {
        return OPolynomial::lunelli_sce(small);
    }
    Err(Error::Argument(format!("unknown o-polynomial spec {spec:?}")))
}

fn cmd_verify(path: &std::path::Path, budget: u64, json: bool) -> Result<u8> {
    let cert = Certificate::load(path)?;
    let outcome = verify_certificate(&cert, budget)?;
    if json {
        let doc = serde_json::json!({
            "ok": true,
            "t": outcome.t,
            "secant_count": outcome.secant_count,
            "histogram": outcome.histogram,
            "stabilizer_order": outcome.checked_stabilizer,
        });
        println!("{doc}");
    } else {
        println!(
            "ok: type {} with {} t-secants; histogram {:?}",
            outcome.t, outcome.secant_count, outcome.histogram
        );
        if let Some(order) = outcome.checked_stabilizer {
            println!("stabilizer order {order} confirmed");
        }
    }
    Ok(0)
}

fn cmd_stabilizer(path: &std::path::Path, budget: u64, json: bool) -> Result<u8> {
    let (ctx, arc, _) = Certificate::load_arc(path)?;
    let rep = stabilizer(&ctx, &arc, budget)?;
    let orbit_sizes: Vec<usize> = rep.orbits.iter().map(|o| o.len()).collect();
    if json {
        let gens: Vec<_> = rep
            .generators
            .iter()
            .map(|g| {
                let m = g.matrix();
                serde_json::json!({
                    "frobenius": g.frob(),
                    "matrix": (0..3).map(|i| (0..3).map(|j| m[i][j].to_hex()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "order": rep.order,
            "projectivity_order": rep.projectivity_order,
            "elation_order": rep.elation_order,
            "orbit_sizes": orbit_sizes,
            "generators": gens,
        });
        println!("{doc}");
    } else {
        println!("stabilizer order {}", rep.order);
        println!("projectivity subgroup order {}", rep.projectivity_order);
        println!("elation subgroup order {}", rep.elation_order);
        println!("orbit sizes {orbit_sizes:?}");
        println!("{} generators", rep.generators.len());
    }
    Ok(0)
}

fn cmd_equiv(a: &std::path::Path, b: &std::path::Path, budget: u64, json: bool) -> Result<u8> {
    let (ctx_a, arc_a, cert_a) = Certificate::load_arc(a)?;
    let (_ctx_b, arc_b, cert_b) = Certificate::load_arc(b)?;
    if cert_a.field.h != cert_b.field.h || cert_a.field.modulus != cert_b.field.modulus {
        return Err(Error::ContextMismatch);
    }
    match equivalent(&ctx_a, &arc_a, &arc_b, budget)? {
        Some(w) => {
            let m = w.matrix();
            if json {
                let doc = serde_json::json!({
                    "equivalent": true,
                    "frobenius": w.frob(),
                    "matrix": (0..3).map(|i| (0..3).map(|j| m[i][j].to_hex()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                println!("{doc}");
            } else {
                println!("equivalent: frobenius exponent {}", w.frob());
                for i in 0..3 {
                    println!("  [{} {} {}]", m[i][0].to_hex(), m[i][1].to_hex(), m[i][2].to_hex());
                }
            }
            Ok(0)
        }
        None => {
            if json {
                println!("{}", serde_json::json!({ "equivalent": false }));
            } else {
                println!("inequivalent (exhaustive search found no witness)");
            }
            Ok(1)
        }
    }
}

fn cmd_translation(path: &std::path::Path, line: &str) -> Result<u8> {
    let (ctx, arc, _) = Certificate::load_arc(path)?;
    let coeffs = parse_elements(&ctx, line)?;
    if coeffs.len() != 3 {
        return Err(Error::Argument("--line needs three coefficients".into()));
    }
    let l = ProjLine::new(&ctx, [coeffs[0], coeffs[1], coeffs[2]])?;
    let is_translation = is_translation_arc(&ctx, &arc, &l)?;
    println!(
        "{}",
        if is_translation { "translation line" } else { "not a translation line" }
    );
    Ok(u8::from(!is_translation))
}

fn cmd_admissible(q: u64) -> Result<u8> {
    let h = degree_of(q)?;
    let ctx = FieldCtx::new(h)?;
    let classes = admissible_search(&ctx);
    if classes.is_empty() {
        println!("no admissible tuple exists in GF({q})");
        return Ok(0);
    }
    for (i, t) in classes.iter().enumerate() {
        let alphas: Vec<String> = t.alphas.iter().map(|a| a.to_hex()).collect();
        let span: Vec<String> = t.span.basis().iter().map(|b| b.to_hex()).collect();
        println!("class {}: alphas ({}) span <{}>", i + 1, alphas.join(","), span.join(","));
    }
    Ok(0)
}

fn cmd_report(max_h: u32) -> Result<u8> {
    let corpus = standard_corpus(max_h)?;
    println!("{:<7} {:<5} {:<12} {:<9} {:<12} label", "q", "t", "family", "elation", "translation");
    for entry in &corpus {
        let ctx = &*entry.ctx;
        let report = is_elation_arc(ctx, &entry.arc)?;
        let translation = if entry.arc.t() > 2 {
            report.translation_lines.iter().any(|&(_, t)| t)
        } else {
            false
        };
        println!(
            "{:<7} {:<5} {:<12} {:<9} {:<12} {}",
            entry.q(),
            entry.arc.t(),
            entry.family,
            if report.is_elation_arc { "yes" } else { "no" },
            if translation { "yes" } else { "no" },
            entry.label
        );
    }
    Ok(0)
}

fn cmd_selftest(seed: u64, cases: u64) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for h in [7u32, 8] {
        let ctx = FieldCtx::new(h)?;
        let mask = ctx.q() - 1;
        for _ in 0..cases {
            let a = ctx.el(rng.gen::<u32>() & mask);
            let b = ctx.el(rng.gen::<u32>() & mask);
            let c = ctx.el(rng.gen::<u32>() & mask);
            assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
            assert_eq!(ctx.mul(a, b + c), ctx.mul(a, b) + ctx.mul(a, c));
            assert_eq!(ctx.trace_abs(a + b), ctx.trace_abs(a) ^ ctx.trace_abs(b));
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a)?), ctx.one());
            }
        }
    }
    println!("selftest ok: {} cases per degree at h = 7, 8 (seed {seed})", cases);
    Ok(0)
}
