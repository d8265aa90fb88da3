use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncsheaf_core::domains::{base_open, build_w_tuple, exhaust, ComplexRegion, RealOpenSet, SetOp};
use ncsheaf_core::growth::{
    growth_fit, growth_fit_function, norm_weighted, seminorm_cn, sup_disk, GrowthConfig,
};
use ncsheaf_core::json::{self as j, JsonRegion, JsonScalar};
use ncsheaf_core::matrep::{
    derived_series, full_basis, pi_tilde, sigma_exact, strict_nilpotency_check, tri_mul, Generator,
    TriMatrixElement,
};
use ncsheaf_core::sheaf::{embed_u, glue, nc_mul, section_eval, tau_restrict, PolynomialDensity};
use ncsheaf_core::uea::{
    mul_by_rewriting, parse_rational, Field, GaussianRational, Polynomial, Rational,
};
use ncsheaf_core::{Error, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "ncsheaf",
    version,
    about = "Exact and numeric tools for U(aff(1)) and its function sheaves"
)]
struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Args)]
struct Pair {
    /// Left operand (path, `-` for stdin, or inline JSON).
    #[arg(long)]
    a: String,
    /// Right operand.
    #[arg(long)]
    b: String,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
}

#[derive(Subcommand)]
enum Command {
    /// PBW product.
    Mul(Pair),
    /// PBW product by word rewriting.
    OracleMul(Pair),
    /// Commutator [a, b].
    Bracket(Pair),
    /// Matrix function λ ↦ σ_{λ,q}(a) over the W-tuple of V.
    Rep {
        #[arg(long)]
        a: String,
        /// The open set V.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        q: usize,
    },
    /// Generator matrix σ_{r,q}(e1) or σ_{r,q}(e2).
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        generator: Generator,
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
    },
    #[command(subcommand)]
    Omega(OmegaCmd),
    #[command(subcommand)]
    Sheaf(SheafCmd),
    #[command(subcommand)]
    Tri(TriCmd),
    #[command(subcommand)]
    Norm(NormCmd),
    /// Growth exponent of s ↦ ‖exp(isB)‖.
    Growth {
        /// Numeric matrix, or a matrix of functions together with --k.
        #[arg(long)]
        matrix: String,
        /// Compact set for a matrix of functions.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, default_value = "1000")]
        smax: String,
        #[arg(long, default_value_t = 64)]
        npts: usize,
        /// Lower end of the grid.
        #[arg(long)]
        smin: Option<String>,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Enlarge a compact tuple K inside W so that the tuple condition holds.
    Exhaust {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        w: String,
    },
}

#[derive(Subcommand)]
enum OmegaCmd {
    Validate {
        #[arg(long = "in")]
        input: String,
    },
    Union {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Intersect {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Member {
        #[arg(long = "in")]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        q: usize,
    },
    Wtuple {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        q: usize,
    },
    /// Base open set around a complex center.
    Base {
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Subcommand)]
enum SheafCmd {
    Embed {
        #[arg(long)]
        a: String,
        #[arg(long = "in")]
        input: String,
    },
    Mul {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Restrict {
        /// The smaller open set.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        a: String,
    },
    /// Glue `{"sections": [..]}` over the cover given by their parents.
    Glue {
        #[arg(long = "in")]
        input: String,
    },
    Eval {
        #[arg(long)]
        a: String,
        #[arg(long)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Subcommand)]
enum TriCmd {
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Derived series of `{"generators": [..]}`, or of the full basis of order --p.
    Solvable {
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
    },
    Nilpotency {
        #[arg(long)]
        p: usize,
    },
}

#[derive(Subcommand)]
enum NormCmd {
    /// sup_K |f^(n)|.
    Cn(NormArgs),
    /// Σ_{k ≤ n} sup_K |f^(k)| / k!.
    Weighted(NormArgs),
    /// sup of |f| over a closed disk.
    Disk {
        #[arg(long)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: String,
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
    },
}

#[derive(Args)]
struct NormArgs {
    /// Polynomial coefficients.
    #[arg(long)]
    a: String,
    /// Compact set K.
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
}

fn load(src: &str) -> Result<Value> {
    let text = match src.trim_start().chars().next() {
        Some('{' | '[') => src.to_owned(),
        _ if src == "-" => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Format(format!("stdin: {e}")))?;
            s
        }
        _ => fs::read_to_string(src).map_err(|e| Error::Format(format!("{src}: {e}")))?,
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{src}: {e}")))?;
    j::untagged(v)
}

fn scalar_arg(s: &str) -> Result<Value> {
    match s.trim_start().chars().next() {
        Some('{' | '[' | '"') => {
            serde_json::from_str(s).map_err(|e| Error::Format(format!("`{s}`: {e}")))
        }
        _ => Ok(Value::String(s.to_owned())),
    }
}

fn decimal(s: &str, what: &str) -> Result<f64> {
    parse_rational(s)
        .map(|r| ncsheaf_core::uea::rational_to_f64(&r))
        .map_err(|e| Error::Format(format!("--{what}: {e}")))
}

fn complex_arg(s: &str) -> Result<GaussianRational> {
    GaussianRational::from_json(&scalar_arg(s)?)
}

/// Field of a document: explicit flag, then its own tags, then real.
fn field_of(flag: Option<FieldArg>, docs: &[&Value]) -> Result<Field> {
    if let Some(f) = flag {
        return Ok(f.into());
    }
    for d in docs {
        let tag = j::field_tag(d)?
            .or(j::space_tag(d)?)
            .or(d.get("parent").map(j::space_tag).transpose()?.flatten())
            .or(d.get("domains").map(j::space_tag).transpose()?.flatten());
        if let Some(t) = tag {
            return Ok(t);
        }
    }
    Ok(Field::Real)
}

fn pbw_op<S: JsonScalar>(a: &Value, b: &Value, which: &str) -> Result<Value> {
    let a = j::pbw_from_json::<S>(a)?;
    let b = j::pbw_from_json::<S>(b)?;
    let c = match which {
        "mul" => a.mul(&b),
        "oracle" => mul_by_rewriting(&a, &b),
        _ => a.bracket(&b),
    };
    Ok(j::pbw_to_json(&c))
}

fn rep<R: JsonRegion>(a: &Value, v: &Value, q: usize) -> Result<Value> {
    let a = j::pbw_from_json::<R::Scalar>(a)?;
    let v = j::omega_from_json::<R>(v)?;
    Ok(j::tri_to_json(&pi_tilde(&a, q, &v)?))
}

fn sigma<S: JsonScalar>(r: &Value, q: usize, g: Generator) -> Result<Value> {
    let r = S::from_json(r)?;
    Ok(j::exact_matrix_to_json(&sigma_exact(&r, q, g)))
}

fn omega_cmd<R: JsonRegion>(cmd: &OmegaCmd, docs: &[Value]) -> Result<Value> {
    match cmd {
        OmegaCmd::Validate { .. } => {
            let v = j::omega_from_json::<R>(&docs[0])?;
            v.validate()?;
            Ok(json!({"valid": true}))
        }
        OmegaCmd::Union { .. } | OmegaCmd::Intersect { .. } => {
            let a = j::omega_from_json::<R>(&docs[0])?;
            let b = j::omega_from_json::<R>(&docs[1])?;
            let op = if matches!(cmd, OmegaCmd::Union { .. }) {
                SetOp::Union
            } else {
                SetOp::Intersect
            };
            Ok(j::omega_to_json(&a.combine(&b, op)?))
        }
        OmegaCmd::Member { r, q, .. } => {
            let v = j::omega_from_json::<R>(&docs[0])?;
            let r = R::Scalar::from_json(&scalar_arg(r)?)?;
            Ok(json!({"member": v.member(&r, *q)}))
        }
        OmegaCmd::Wtuple { q, .. } => {
            let v = j::omega_from_json::<R>(&docs[0])?;
            Ok(j::tuple_to_json(&build_w_tuple(&v, *q)?))
        }
        OmegaCmd::Base { .. } => unreachable!("handled without a document"),
    }
}

fn sheaf_cmd<R: JsonRegion + PolynomialDensity>(cmd: &SheafCmd, docs: &[Value]) -> Result<Value> {
    match cmd {
        SheafCmd::Embed { .. } => {
            let a = j::pbw_from_json::<R::Scalar>(&docs[0])?;
            let v = j::omega_from_json::<R>(&docs[1])?;
            let s = embed_u(&a, &v)?;
            let mut out = j::section_to_json(&s);
            out["extension"] = json!(R::extension(&v).as_str());
            Ok(out)
        }
        SheafCmd::Mul { .. } => {
            let v = j::omega_from_json::<R>(&docs[0])?;
            let s = j::section_from_json::<R>(&docs[1])?;
            let t = j::section_from_json::<R>(&docs[2])?;
            Ok(j::section_to_json(&nc_mul(&v, &s, &t)?))
        }
        SheafCmd::Restrict { .. } => {
            let w = j::omega_from_json::<R>(&docs[0])?;
            let s = j::section_from_json::<R>(&docs[1])?;
            Ok(j::section_to_json(&tau_restrict(s.parent(), &w, &s)?))
        }
        SheafCmd::Glue { .. } => {
            let list = docs[0]
                .get("sections")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Format("expected {\"sections\": [..]}".into()))?;
            let sections = list
                .iter()
                .map(j::section_from_json::<R>)
                .collect::<Result<Vec<_>>>()?;
            let cover: Vec<_> = sections.iter().map(|s| s.parent().clone()).collect();
            Ok(j::section_to_json(&glue(&cover, &sections)?))
        }
        SheafCmd::Eval { q, x, .. } => {
            let s = j::section_from_json::<R>(&docs[0])?;
            let x = R::Scalar::from_json(&scalar_arg(x)?)?;
            Ok(json!({"value": section_eval(&s, *q, &x)?.to_json()}))
        }
    }
}

fn tri_mul_doc<R: JsonRegion>(a: &Value, b: &Value) -> Result<Value> {
    let a = j::tri_from_json::<R>(a)?;
    let b = j::tri_from_json::<R>(b)?;
    Ok(j::tri_to_json(&tri_mul(&a, &b)?))
}

fn solvable<S: JsonScalar>(doc: Option<&Value>, p: Option<usize>) -> Result<Value> {
    let gens = match (doc, p) {
        (Some(d), _) => d
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("expected {\"generators\": [..]}".into()))?
            .iter()
            .map(j::exact_matrix_from_json::<S>)
            .collect::<Result<Vec<_>>>()?,
        (None, Some(p)) => full_basis::<S>(p),
        (None, None) => return Err(Error::Format("give --in or --p".into())),
    };
    let series = derived_series(&gens)?;
    Ok(json!({"dims": series.dims(), "solvable": series.solvable}))
}

fn poly_doc<S: JsonScalar>(v: &Value) -> Result<Polynomial<S>> {
    match v.get("poly") {
        Some(p) => j::poly_from_json(p),
        None => j::poly_from_json(v),
    }
}

fn norm_cmd<S: JsonScalar>(cmd: &NormCmd, docs: &[Value]) -> Result<f64> {
    match cmd {
        NormCmd::Cn(args) | NormCmd::Weighted(args) => {
            let f = poly_doc::<S>(&docs[0])?;
            let k = j::compact_from_json(&docs[1])?;
            if matches!(cmd, NormCmd::Cn(_)) {
                seminorm_cn(&f, &k, args.n)
            } else {
                norm_weighted(&f, &k, args.n)
            }
        }
        NormCmd::Disk { center, radius, .. } => {
            let f = poly_doc::<S>(&docs[0])?;
            let c = complex_arg(center)?;
            let c = Complex64::new(
                ncsheaf_core::uea::rational_to_f64(&c.re),
                ncsheaf_core::uea::rational_to_f64(&c.im),
            );
            sup_disk(&f, c, decimal(radius, "radius")?)
        }
    }
}

/// Dispatches on the coefficient field.
macro_rules! by_field {
    ($f:expr, $real:expr, $complex:expr) => {
        match $f {
            Field::Real => $real,
            Field::Complex => $complex,
        }
    };
}

fn run(cli: &Cli) -> Result<Value> {
    Ok(match &cli.command {
        Command::Mul(p) | Command::OracleMul(p) | Command::Bracket(p) => {
            let which = match &cli.command {
                Command::Mul(_) => "mul",
                Command::OracleMul(_) => "oracle",
                _ => "bracket",
            };
            let (a, b) = (load(&p.a)?, load(&p.b)?);
            by_field!(
                field_of(p.field, &[&a, &b])?,
                pbw_op::<Rational>(&a, &b, which)?,
                pbw_op::<GaussianRational>(&a, &b, which)?
            )
        }
        Command::Rep { a, input, q } => {
            let (a, v) = (load(a)?, load(input)?);
            by_field!(
                field_of(None, &[&v, &a])?,
                rep::<RealOpenSet>(&a, &v, *q)?,
                rep::<ComplexRegion>(&a, &v, *q)?
            )
        }
        Command::Sigma {
            r,
            q,
            generator,
            field,
        } => {
            let r = scalar_arg(r)?;
            let f = match field {
                Some(f) => (*f).into(),
                None if r.is_object() => Field::Complex,
                None => Field::Real,
            };
            by_field!(
                f,
                sigma::<Rational>(&r, *q, *generator)?,
                sigma::<GaussianRational>(&r, *q, *generator)?
            )
        }
        Command::Omega(OmegaCmd::Base { center, p, eps }) => {
            let eps = parse_rational(eps).map_err(|e| Error::Format(format!("--eps: {e}")))?;
            j::omega_to_json(&base_open(&complex_arg(center)?, *p, &eps)?)
        }
        Command::Omega(cmd) => {
            let docs = match cmd {
                OmegaCmd::Validate { input }
                | OmegaCmd::Member { input, .. }
                | OmegaCmd::Wtuple { input, .. } => vec![load(input)?],
                OmegaCmd::Union { a, b } | OmegaCmd::Intersect { a, b } => {
                    vec![load(a)?, load(b)?]
                }
                OmegaCmd::Base { .. } => unreachable!(),
            };
            let refs: Vec<&Value> = docs.iter().collect();
            by_field!(
                field_of(None, &refs)?,
                omega_cmd::<RealOpenSet>(cmd, &docs)?,
                omega_cmd::<ComplexRegion>(cmd, &docs)?
            )
        }
        Command::Sheaf(cmd) => {
            let docs = match cmd {
                SheafCmd::Embed { a, input } => vec![load(a)?, load(input)?],
                SheafCmd::Mul { input, a, b } => vec![load(input)?, load(a)?, load(b)?],
                SheafCmd::Restrict { input, a } => vec![load(input)?, load(a)?],
                SheafCmd::Glue { input } => vec![load(input)?],
                SheafCmd::Eval { a, .. } => vec![load(a)?],
            };
            let mut refs: Vec<&Value> = docs.iter().collect();
            if let SheafCmd::Glue { .. } = cmd {
                refs = docs[0]
                    .get("sections")
                    .and_then(Value::as_array)
                    .map(|l| l.iter().collect())
                    .unwrap_or_default();
            }
            by_field!(
                field_of(None, &refs)?,
                sheaf_cmd::<RealOpenSet>(cmd, &docs)?,
                sheaf_cmd::<ComplexRegion>(cmd, &docs)?
            )
        }
        Command::Tri(TriCmd::Mul { a, b }) => {
            let (a, b) = (load(a)?, load(b)?);
            by_field!(
                field_of(None, &[&a, &b])?,
                tri_mul_doc::<RealOpenSet>(&a, &b)?,
                tri_mul_doc::<ComplexRegion>(&a, &b)?
            )
        }
        Command::Tri(TriCmd::Solvable { input, p, field }) => {
            let doc = input.as_deref().map(load).transpose()?;
            let f = field_of(*field, &doc.iter().collect::<Vec<_>>())?;
            by_field!(
                f,
                solvable::<Rational>(doc.as_ref(), *p)?,
                solvable::<GaussianRational>(doc.as_ref(), *p)?
            )
        }
        Command::Tri(TriCmd::Nilpotency { p }) => {
            json!({"p": p, "index": strict_nilpotency_check(*p)?})
        }
        Command::Norm(cmd) => {
            let (docs, flag) = match cmd {
                NormCmd::Cn(n) | NormCmd::Weighted(n) => {
                    (vec![load(&n.a)?, load(&n.input)?], n.field)
                }
                NormCmd::Disk { a, field, .. } => (vec![load(a)?], *field),
            };
            let value = by_field!(
                field_of(flag, &[&docs[0]])?,
                norm_cmd::<Rational>(cmd, &docs)?,
                norm_cmd::<GaussianRational>(cmd, &docs)?
            );
            json!({"value": j::num(value)})
        }
        Command::Growth {
            matrix,
            k,
            smax,
            npts,
            smin,
            csv,
        } => {
            let cfg = GrowthConfig {
                s_min: smin.as_deref().map(|s| decimal(s, "smin")).transpose()?,
                ..GrowthConfig::default()
            };
            let s_max = decimal(smax, "smax")?;
            let m = load(matrix)?;
            let report = if m.get("domains").is_some() {
                let k = k
                    .as_deref()
                    .ok_or_else(|| Error::Format("a matrix of functions needs --k".into()))?;
                let k = j::compact_from_json(&load(k)?)?;
                let b: TriMatrixElement<RealOpenSet> = j::tri_from_json(&m)?;
                growth_fit_function(&b, &k, s_max, *npts, &cfg)?
            } else {
                growth_fit(&j::numeric_from_json(&m)?, s_max, *npts, &cfg)?
            };
            if let Some(path) = csv {
                fs::write(path, report.to_csv())
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            }
            j::report_to_json(&report)
        }
        Command::Exhaust { input, w } => {
            let k = j::compact_tuple_from_json(&load(input)?)?;
            let w = j::tuple_from_json::<RealOpenSet>(&load(w)?)?;
            j::compact_tuple_to_json(&exhaust(&k, &w)?)
        }
    })
}

fn init_threads() {
    if let Some(n) = std::env::var("NCSHEAF_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(&cli) {
        Ok(doc) => {
            let text = format!("{}\n", j::tagged(doc));
            let written = match &cli.out {
                Some(path) => fs::write(path, text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("ncsheaf: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ncsheaf: {e}");
            ExitCode::from(if e.is_format() { 2 } else { 1 })
        }
    }
}
