use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pdescent_core::descent::{
    kernel_cokernel_report, quadratic_point_search, sel_p_dim_if_applicable, selmer_phi, selmer_phihat_dim,
    MillerFunction,
};
use pdescent_core::ellcurve::{Point, WeierstrassModel};
use pdescent_core::isogeny::IsogenyContext;
use pdescent_core::logpic::LogPic;
use pdescent_core::pairing::{psi_with, CurvePairing};
use pdescent_core::qfield::QuadField;
use pdescent_core::Error;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "pdescent", version, about = "Descent by a p-isogeny and the logarithmic class group pairing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduction types and the S1/S2 classification of places.
    Classify(Job),
    /// The Selmer group Sel^phi and the dual dimensions.
    Selmer(Job),
    /// The pairing <Q, R> of the first two --point arguments, on E'.
    Pairing(Job),
    /// psi(Q) for every --point.
    Psi(Job),
    /// Points of E' over quadratic fields with small rational x (curve over Q).
    Search(Job),
    /// Everything, plus the kernel-cokernel bounds for the given points.
    Report(Job),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Job {
    /// Field discriminant or squarefree d, K = Q(sqrt d); 1 for Q.
    #[arg(long = "D", default_value_t = 1, allow_hyphen_values = true)]
    d: i64,
    /// a-invariants of E' as "[a1,a2,a3,a4,a6]"; overrides --a1..--a6.
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// A label, echoed in the output only.
    #[arg(long)]
    label: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a3: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a4: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a6: String,
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// The point P of order p on E'.
    #[arg(long = "P", allow_hyphen_values = true)]
    pt: Option<String>,
    /// Further points of E', e.g. "(9/2, -1/2+35/4*sqrt(2))".
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
    #[arg(long, default_value_t = 10)]
    xbound: i64,
    /// Largest |disc K| considered by `search`.
    #[arg(long, default_value_t = 5000)]
    disc_bound: u64,
    /// Restrict `search` to imaginary quadratic fields.
    #[arg(long)]
    imaginary: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn field(d: i64) -> Result<QuadField, Error> {
    if d == 1 {
        Ok(QuadField::rationals())
    } else {
        QuadField::new(d)
    }
}

fn point(e: &WeierstrassModel, s: &str) -> Result<Point, Error> {
    let s = s.trim();
    if s.starts_with('(') || s.eq_ignore_ascii_case("O") {
        e.parse_point(s)
    } else {
        e.parse_point(&format!("({s})"))
    }
}

struct Inputs {
    e: WeierstrassModel,
    pt: Option<Point>,
    points: Vec<Point>,
}

fn inputs(job: &Job) -> Result<Inputs, Error> {
    let k = field(job.d)?;
    let e = match &job.curve {
        Some(c) => WeierstrassModel::parse(&k, c)?,
        None => {
            WeierstrassModel::parse(&k, &[&job.a1, &job.a2, &job.a3, &job.a4, &job.a6].map(|s| s.as_str()).join(","))?
        }
    };
    let pt = job.pt.as_deref().map(|s| point(&e, s)).transpose()?;
    let points = job.points.iter().map(|s| point(&e, s)).collect::<Result<_, _>>()?;
    Ok(Inputs { e, pt, points })
}

fn context(inp: &Inputs, p: u64) -> Result<IsogenyContext, Error> {
    let pt = inp.pt.as_ref().ok_or_else(|| Error::Input("--P is required".into()))?;
    IsogenyContext::new(&inp.e, pt, p)
}

fn require_hypotheses(ctx: &IsogenyContext) -> Result<(), Error> {
    match ctx.hypotheses.checks.iter().find(|h| !h.ok) {
        None => Ok(()),
        Some(h) => Err(Error::Hypothesis { name: h.name.to_string(), detail: h.detail.clone() }),
    }
}

struct Output {
    json: Value,
    text: String,
}

fn classify(ctx: &IsogenyContext) -> Output {
    let mut text = String::new();
    let _ = writeln!(text, "E' = {}\nE  = {}\nP  = {}, p = {}", ctx.e_prime, ctx.e, ctx.pt, ctx.p);
    let _ = writeln!(
        text,
        "{:<28} {:>8} {:>8} {:>4} {:>4} {:>6} {:>6}  class",
        "place", "E", "E'", "c", "c'", "a_phi", "a_phih"
    );
    for i in &ctx.places {
        let _ = writeln!(
            text,
            "{:<28} {:>8} {:>8} {:>4} {:>4} {:>6} {:>6}  {:?}",
            i.place.to_string(),
            i.ld.kodaira.to_string(),
            i.ld_prime.kodaira.to_string(),
            i.ld.c,
            i.ld_prime.c,
            i.a_phi,
            i.a_phihat,
            i.class
        );
    }
    let names = |v: &[pdescent_core::qfield::Place]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(text, "S1: {}\nS2: {}", names(&ctx.s1), names(&ctx.s2));
    for h in ctx.hypotheses.checks.iter().filter(|h| !h.ok) {
        let _ = writeln!(text, "hypothesis {} fails: {}", h.name, h.detail);
    }
    Output { json: ctx.to_json(), text }
}

fn selmer(ctx: &IsogenyContext) -> Result<Output, Error> {
    let sel = selmer_phi(ctx)?;
    let dual = selmer_phihat_dim(ctx, &sel)?;
    let selp = sel_p_dim_if_applicable(ctx)?;
    let mut json = sel.to_json();
    json["dims"] = json!({"sel_phi": sel.dim(), "sel_phihat": dual, "sel_p": selp});
    let mut text = String::new();
    let _ = writeln!(text, "dim Sel^phi = {}\ndim Sel^phihat = {}", sel.dim(), dual);
    if let Some(d) = selp {
        let _ = writeln!(text, "dim Sel^p = {}", d);
    }
    for x in &sel.basis {
        let _ = writeln!(text, "  {}", x);
    }
    Ok(Output { json, text })
}

fn psi_all(ctx: &IsogenyContext, points: &[Point]) -> Result<Output, Error> {
    let cp = CurvePairing::new(&ctx.e_prime)?;
    let lp = LogPic::new(&ctx.field, &ctx.s1)?;
    let f = MillerFunction::new(&ctx.e_prime, &ctx.pt, ctx.p)?;
    let mut rows = vec![];
    let mut text = String::new();
    for q in points {
        let d = psi_with(&cp, ctx, q)?;
        let shown = lp.display(&d)?;
        let _ = writeln!(text, "psi{} = {}", q, shown);
        rows.push(json!({
            "point": q.to_string(),
            "psi": shown,
            "divisor": d.to_json(&ctx.s1),
            "zero": lp.is_zero(&d),
            "kappa": f.kummer(q).value.to_string(),
        }));
    }
    Ok(Output { json: json!({"S1": ctx.s1.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "psi": rows}), text })
}

fn pairing(inp: &Inputs) -> Result<Output, Error> {
    let [q, r, ..] = inp.points.as_slice() else {
        return Err(Error::Input("pairing needs two --point arguments".into()));
    };
    let cp = CurvePairing::new(&inp.e)?;
    let lp = cp.logpic()?;
    let z = cp.bad_places();
    let res = cp.log_pairing(q, r)?;
    let shown = lp.display(&res.total)?;
    let mut json = res.to_json(&z);
    json["normal_form"] = json!(shown);
    let mut text = String::new();
    let _ = writeln!(text, "<{}, {}> = {}", q, r, res.total);
    let _ = writeln!(text, "  denominators: {}", res.denominator);
    for (v, c) in &res.fibral {
        let _ = writeln!(text, "  fibral at {}: {}", v, c);
    }
    let _ = writeln!(text, "  in logPic: {}", shown);
    Ok(Output { json, text })
}

fn search(job: &Job, inp: &Inputs, out: &mut dyn std::io::Write) -> Result<(), Error> {
    let pt = inp.pt.as_ref().ok_or_else(|| Error::Input("--P is required".into()))?;
    let hits = quadratic_point_search(&inp.e, pt, job.p, job.xbound, job.disc_bound, job.imaginary)?;
    for h in hits {
        let line = match job.format {
            Format::Json => {
                let mut v = serde_json::to_value(&h).expect("serializable");
                v["schema"] = json!(SCHEMA);
                v.to_string()
            }
            Format::Text => match (&h.psi, &h.error) {
                (Some(s), _) => format!("D = {:>6}  {}  psi = {}", h.disc, h.point, s),
                (None, Some(e)) => format!("D = {:>6}  {}  error: {}", h.disc, h.point, e),
                _ => format!("D = {:>6}  {}", h.disc, h.point),
            },
        };
        writeln!(out, "{}", line).map_err(|e| Error::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cmd: &Command, out: &mut dyn std::io::Write) -> Result<(), Error> {
    let job = match cmd {
        Command::Classify(j)
        | Command::Selmer(j)
        | Command::Pairing(j)
        | Command::Psi(j)
        | Command::Search(j)
        | Command::Report(j) => j,
    };
    let inp = inputs(job)?;
    if let Command::Search(_) = cmd {
        return search(job, &inp, out);
    }
    let (name, o) = match cmd {
        Command::Classify(_) => ("classify", classify(&context(&inp, job.p)?)),
        Command::Pairing(_) => ("pairing", pairing(&inp)?),
        Command::Selmer(_) => {
            let ctx = context(&inp, job.p)?;
            require_hypotheses(&ctx)?;
            ("selmer", selmer(&ctx)?)
        }
        Command::Psi(_) => {
            let ctx = context(&inp, job.p)?;
            require_hypotheses(&ctx)?;
            ("psi", psi_all(&ctx, &inp.points)?)
        }
        Command::Report(_) => {
            let ctx = context(&inp, job.p)?;
            require_hypotheses(&ctx)?;
            let c = classify(&ctx);
            let s = selmer(&ctx)?;
            let mut known = vec![ctx.pt.clone()];
            known.extend(inp.points.iter().cloned());
            let ps = psi_all(&ctx, &known)?;
            let kc = kernel_cokernel_report(&ctx, &known)?;
            let kc_json = serde_json::to_value(&kc).expect("serializable");
            let text = format!(
                "{}\n{}\n{}\ndim Sha[phi] <= {} (kappa rank {}, psi rank {}, dim logPic[p] = {})\n",
                c.text, s.text, ps.text, kc.sha_upper, kc.kappa_rank, kc.psi_rank, kc.logpic_torsion_dim
            );
            (
                "report",
                Output {
                    json: json!({"classify": c.json, "selmer": s.json, "psi": ps.json, "kernel_cokernel": kc_json}),
                    text,
                },
            )
        }
        Command::Search(_) => unreachable!(),
    };
    match job.format {
        Format::Json => {
            let v = json!({"schema": SCHEMA, "command": name, "label": job.label, "field_disc": field(job.d)?.disc(), "result": o.json});
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))
        }
        Format::Text => {
            if let Some(l) = &job.label {
                let _ = writeln!(out, "# {}", l);
            }
            write!(out, "{}", o.text)
        }
    }
    .map_err(|e| Error::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match &cli.command {
        Command::Classify(j)
        | Command::Selmer(j)
        | Command::Pairing(j)
        | Command::Psi(j)
        | Command::Search(j)
        | Command::Report(j) => j,
    };
    let mut buf: Vec<u8> = vec![];
    let res = run(&cli.command, &mut buf);
    match res {
        Ok(()) => {
            let written = match &job.out {
                Some(path) => std::fs::write(path, &buf),
                None => std::io::stdout().write_all(&buf),
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e @ Error::Hypothesis { .. }) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
