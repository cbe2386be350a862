use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hankelfrac::exact::{Coeff, Integer, ModInt, Rational, Ring, TruncatedSeries};
use hankelfrac::exponent::{certified_cf, evaluate_series, mu_bound_from_rho};
use hankelfrac::hankel::{hankel_det, hankel_table, mod_p_scan, Determinant, DEFAULT_WINDOW};
use hankelfrac::hfrac::{hankel_from_hfrac, hfrac_expand};
use hankelfrac::mahler::{
    audit_approximation, build_approximant, degree_check, iterate_equation, prediction_inputs,
    q_growth_holds,
};
use hankelfrac::pade::{contact_order, pade_construct};
use hankelfrac::sequences::{describe, declared_bound, CoeffBound, EquationLiteral, SequenceSpec, NAMES};
use hankelfrac::verify::{fixture_info, run_fixture, FixtureOptions, FIXTURES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hankelfrac", version, about = "Hankel determinants, H-fractions and irrationality exponents of Mahler series")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sequence registry.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Hankel determinants.
    #[command(subcommand)]
    Hankel(HankelCmd),
    /// H-fraction expansions.
    #[command(subcommand)]
    Hfrac(HfracCmd),
    /// Padé approximants.
    #[command(subcommand)]
    Pade(PadeCmd),
    /// Iterated functional equations and explicit approximations.
    #[command(subcommand)]
    Mahler(MahlerCmd),
    /// Irrationality exponents.
    #[command(subcommand)]
    Mu(MuCmd),
    /// Run a verification fixture (`list` shows them).
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Source {
    /// Registry sequence name.
    #[arg(long, group = "source")]
    seq: Option<String>,
    /// Sequence spec as JSON, e.g. '{"kind":"product2","u":1,"C":[1],"D":[1]}'.
    #[arg(long, group = "source")]
    spec: Option<String>,
    /// Functional equation as JSON {A, B, C, D, d, c0?}.
    #[arg(long, group = "source")]
    eq: Option<String>,
    /// Random integer coefficients in [-3, 3] drawn from `--seed`.
    #[arg(long, group = "source")]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Source {
    fn spec(&self) -> Result<SequenceSpec> {
        if let Some(name) = &self.seq {
            return Ok(SequenceSpec::named(name));
        }
        if let Some(s) = &self.spec {
            return serde_json::from_str(s).context("parsing --spec");
        }
        if let Some(s) = &self.eq {
            let equation: EquationLiteral = serde_json::from_str(s).context("parsing --eq")?;
            return Ok(SequenceSpec::FunctionalEquation { equation });
        }
        bail!("one of --seq, --spec or --eq is required")
    }

    fn series(&self, n: usize) -> Result<TruncatedSeries<Integer>> {
        if self.random {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            return Ok(TruncatedSeries::from_i64s(Ring::Integer, &c));
        }
        Ok(self.spec()?.generate(n)?)
    }

    fn bound(&self) -> Result<CoeffBound> {
        if self.random {
            return Ok(CoeffBound::Constant(Integer::from(3)));
        }
        self.spec()?
            .declared_bound()
            .context("this sequence has no declared coefficient bound")
    }
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Registry names with descriptions and coefficient bounds.
    List,
    /// First `--order` coefficients.
    Gen {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand)]
enum HankelCmd {
    /// H_1^(k)..H_N^(k) with nonzero indices, gap ratio and rationality flag.
    Table {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Also reduce the table modulo this prime and scan it for periodicity.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
    },
    /// A single determinant H_n^(k).
    Det {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand)]
enum HfracCmd {
    /// Expansion of the first `--order` coefficients.
    Expand {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        delta: usize,
        #[arg(long)]
        levels: Option<usize>,
        /// Work over F_p instead of Q.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Compare the determinants read off the expansion with the Hankel table.
    Check52 {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand)]
enum PadeCmd {
    /// The [k-1/k] approximant of the series.
    Build {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand)]
enum MahlerCmd {
    /// The m-th iterate of the functional equation with its degree check.
    Iterate {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        m: usize,
    },
    /// p/q at 1/b from the i-th nonzero Hankel index and m iterations.
    Approximate {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// Measured vs predicted error exponents for m = 1..=--m.
    Audit {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Coefficients used for f(1/b); defaults to 1.3x the predicted exponent + 200.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

#[derive(Subcommand)]
enum MuCmd {
    /// f(1/b) from `--terms` coefficients with a rigorous tail bound.
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 1024)]
        terms: usize,
    },
    /// Certified continued fraction and the exponent estimate.
    Estimate {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 4096)]
        terms: usize,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Exponent bound (1 + rho) min(rho^2, d) from a gap ratio rho.
    Bound {
        /// Rational such as `1`, `3/2`.
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 2)]
        d: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Fixture name or alias, or `list`.
    fixture: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    b: Option<u64>,
}

/// Rendered result and whether every check in it passed.
struct Output {
    body: String,
    passed: bool,
}

impl Output {
    fn json(v: &impl Serialize) -> Result<Self> {
        Self::checked(v, true)
    }

    fn checked(v: &impl Serialize, passed: bool) -> Result<Self> {
        Ok(Output { body: serde_json::to_string_pretty(v)? + "\n", passed })
    }
}

fn prime(p: u64) -> Result<Ring> {
    let ring = Ring::Mod(p);
    if p < 2 || !ring.is_field() {
        bail!("--mod must be a prime, got {p}");
    }
    Ok(ring)
}

fn seq(cmd: SeqCmd) -> Result<Output> {
    match cmd {
        SeqCmd::List => {
            let rows: Vec<Value> = NAMES
                .iter()
                .map(|n| {
                    let bound = declared_bound(n).map(|b| format!("{b:?}"));
                    json!({"name": n, "description": describe(n), "bound": bound})
                })
                .collect();
            Output::json(&rows)
        }
        SeqCmd::Gen { src, order, modulus } => {
            let f = src.series(order)?;
            match modulus {
                Some(p) => {
                    prime(p)?;
                    Output::json(&f.reduce_mod(p))
                }
                None => Output::json(&f),
            }
        }
    }
}

fn table_csv(z: &[Integer], p: Option<(u64, &[ModInt])>) -> String {
    let mut out = String::from("n,H_n,H_n_mod_p\n");
    for (i, h) in z.iter().enumerate() {
        let r = p.map(|(_, t)| t[i].residue().to_string()).unwrap_or_default();
        out += &format!("{},{},{}\n", i + 1, h, r);
    }
    out
}

fn hankel(cmd: HankelCmd, format: Format) -> Result<Output> {
    match cmd {
        HankelCmd::Table { src, n, k, modulus, window } => {
            let f = src.series(k + 2 * n)?;
            let report = hankel_table(&f, n, k, window)?;
            let reduced = match modulus {
                Some(p) => {
                    prime(p)?;
                    let fp = f.reduce_mod(p).shift_down(k);
                    let (table, evidence) = mod_p_scan(&fp, n.max(4))?;
                    let table = table[..n].to_vec();
                    let agrees = report.table.iter().zip(&table).all(|(h, r)| ModInt::from_integer(h, p) == *r);
                    Some((p, table, evidence, agrees))
                }
                None => None,
            };
            let agrees = reduced.as_ref().map_or(true, |r| r.3);
            if format == Format::Csv {
                let body = table_csv(&report.table, reduced.as_ref().map(|r| (r.0, &r.1[..])));
                return Ok(Output { body, passed: agrees });
            }
            let mut v = serde_json::to_value(&report)?;
            if let Some((p, table, evidence, agrees)) = reduced {
                v["mod_p"] = json!({
                    "p": p,
                    "table": table.iter().map(|r| r.residue()).collect::<Vec<_>>(),
                    "matches_reduced_integer_table": agrees,
                    "periodicity": evidence,
                });
            }
            Output::checked(&v, agrees)
        }
        HankelCmd::Det { src, n, k, modulus } => {
            let f = src.series(k + 2 * n)?;
            let value = match modulus {
                Some(p) => {
                    prime(p)?;
                    hankel_det(&f.reduce_mod(p), n, k)?.to_string()
                }
                None => hankel_det(&f, n, k)?.to_string(),
            };
            Output::json(&json!({"n": n, "k": k, "ring": modulus.map_or(Ring::Integer, Ring::Mod), "value": value}))
        }
    }
}

fn expand<C: Coeff>(f: &TruncatedSeries<C>, delta: usize, levels: Option<usize>) -> Result<Output> {
    let h = hfrac_expand(f, delta, levels.unwrap_or(usize::MAX), false)?;
    let mut v = serde_json::to_value(&h)?;
    v["indices"] = json!(h.indices());
    v["hankel_coverage"] = json!(h.hankel_coverage());
    v["certified_levels"] = json!(h.certified_levels());
    v["level_periodicity"] = serde_json::to_value(h.level_periodicity())?;
    Output::json(&v)
}

fn check52<C: Determinant>(f: &TruncatedSeries<C>) -> Result<Output> {
    let h = hfrac_expand(f, 2, usize::MAX, false)?;
    let closed = hankel_from_hfrac(&h)?;
    let n = h.hankel_coverage().unwrap_or(f.order() / 2).min(f.order() / 2);
    let table = hankel_table(f, n, 0, DEFAULT_WINDOW)?;
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (s, value) in closed.iter().filter(|(s, _)| *s >= 1 && *s <= n) {
        compared += 1;
        if table.table[s - 1] != *value {
            mismatches.push(json!({"n": s, "closed_form": value.to_string(), "table": table.table[s - 1].to_string()}));
        }
    }
    let indices: Vec<usize> = h.indices().into_iter().skip(1).filter(|&s| s <= n).collect();
    let same_support = indices == table.nonzero_indices;
    let passed = mismatches.is_empty() && same_support;
    Output::checked(
        &json!({
            "ring": f.ring(),
            "checked_up_to": n,
            "compared": compared,
            "nonzero_indices_agree": same_support,
            "mismatches": mismatches,
            "passed": passed,
        }),
        passed,
    )
}

fn hfrac(cmd: HfracCmd) -> Result<Output> {
    match cmd {
        HfracCmd::Expand { src, order, delta, levels, modulus } => {
            let f = src.series(order)?;
            match modulus {
                Some(p) => {
                    prime(p)?;
                    expand(&f.reduce_mod(p), delta, levels)
                }
                None => expand(&f.to_rational(), delta, levels),
            }
        }
        HfracCmd::Check52 { src, order, modulus } => {
            let f = src.series(order)?;
            match modulus {
                Some(p) => {
                    prime(p)?;
                    check52(&f.reduce_mod(p))
                }
                None => check52(&f.to_rational()),
            }
        }
    }
}

fn pade_out<C: Determinant>(f: &TruncatedSeries<C>, k: usize) -> Result<Output> {
    let a = pade_construct(f, k)?;
    let mut v = serde_json::to_value(&a)?;
    v["contact_order"] = json!(contact_order(f, &a)?);
    Output::json(&v)
}

fn pade(cmd: PadeCmd) -> Result<Output> {
    let PadeCmd::Build { src, k, order, modulus } = cmd;
    let f = src.series(order)?;
    match modulus {
        Some(p) => {
            prime(p)?;
            pade_out(&f.reduce_mod(p), k)
        }
        None => pade_out(&f.to_rational(), k),
    }
}

fn mahler(cmd: MahlerCmd) -> Result<Output> {
    match cmd {
        MahlerCmd::Iterate { src, m } => {
            let (eq, _) = src.spec()?.equation()?;
            let it = iterate_equation(&eq, m)?;
            let check = degree_check(&eq, &it);
            let passed = check.holds();
            Output::checked(&json!({"iterate": it, "degree_check": check, "passed": passed}), passed)
        }
        MahlerCmd::Approximate { src, b, i, m, order } => {
            let (eq, _) = src.spec()?.equation()?;
            let f = src.series(order)?;
            Output::json(&build_approximant(&eq, &f, b, i, m)?)
        }
        MahlerCmd::Audit { src, b, i, m, order, terms, tolerance } => {
            let (eq, _) = src.spec()?.equation()?;
            let f = src.series(order)?;
            let inputs = prediction_inputs(&eq, &f, b, i)?;
            let terms = terms.unwrap_or((inputs.predicted_exponent(m) * 1.3 + 200.0) as usize);
            let x = evaluate_series(&src.series(terms)?, b, &src.bound()?)?;
            let mut records = Vec::new();
            let mut qs = Vec::new();
            for j in 1..=m {
                let app = build_approximant(&eq, &f, b, i, j)?;
                records.push(audit_approximation(&app, &x, &inputs, tolerance)?);
                qs.push(app.q);
            }
            let last = records.last().context("--m must be >= 1")?;
            let growth = q_growth_holds(&qs, eq.radix, 0.1);
            let passed = last.within_tolerance;
            Output::checked(
                &json!({"inputs": inputs, "terms": terms, "records": records, "q_growth": growth, "passed": passed}),
                passed,
            )
        }
    }
}

fn mu(cmd: MuCmd) -> Result<Output> {
    match cmd {
        MuCmd::Eval { src, b, terms } => Output::json(&evaluate_series(&src.series(terms)?, b, &src.bound()?)?),
        MuCmd::Estimate { src, b, terms, window } => {
            let x = evaluate_series(&src.series(terms)?, b, &src.bound()?)?;
            Output::json(&certified_cf(&x, window)?)
        }
        MuCmd::Bound { rho, d } => {
            let r: Rational = rho.parse().map_err(|e| anyhow::anyhow!("--rho: {e:?}"))?;
            let mu = mu_bound_from_rho(&r, d)?;
            Output::json(&json!({"rho": r.to_string(), "d": d, "mu_bound": mu.to_string()}))
        }
    }
}

fn verify(a: VerifyArgs) -> Result<Output> {
    if a.fixture == "list" {
        let rows: Vec<Value> = FIXTURES
            .iter()
            .map(|f| json!({"name": f.name, "alias": f.alias, "statement": f.statement}))
            .collect();
        return Output::json(&rows);
    }
    let info = fixture_info(&a.fixture).with_context(|| format!("unknown fixture `{}`", a.fixture))?;
    let opts = FixtureOptions { n: a.n, horizon: a.horizon, terms: a.terms, b: a.b };
    let report = run_fixture(info.name, &opts)?;
    let passed = report.passed;
    Output::checked(&report, passed)
}

fn run(cli: Cli) -> Result<Output> {
    let format = if cli.json { Format::Json } else { cli.format };
    if format == Format::Csv && !matches!(cli.cmd, Cmd::Hankel(HankelCmd::Table { .. })) {
        bail!("--format csv is only supported by `hankel table`");
    }
    match cli.cmd {
        Cmd::Seq(c) => seq(c),
        Cmd::Hankel(c) => hankel(c, format),
        Cmd::Hfrac(c) => hfrac(c),
        Cmd::Pade(c) => pade(c),
        Cmd::Mahler(c) => mahler(c),
        Cmd::Mu(c) => mu(c),
        Cmd::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|o| {
        match &out {
            Some(path) => std::fs::write(path, &o.body).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", o.body),
        }
        Ok(o.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let kind = match e.downcast_ref::<hankelfrac::Error>() {
                Some(err) => format!("{err:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
                None => "Usage".to_string(),
            };
            eprintln!("{}", json!({"error": kind, "message": format!("{e:#}")}));
            ExitCode::from(2)
        }
    }
}
