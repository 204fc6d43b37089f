use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use moonshine_core::elliptic::{
    self, count_points_bounded, e15_minimal, torsion_subgroup, twist14, twist15, WeierstrassCurve, DEFAULT_PRIME_BOUND,
};
use moonshine_core::lfunc::{self, LValueReport};
use moonshine_core::modfun::{fon_mt_3a, named_series, SeriesId, DEFAULT_MT_PREC};
use moonshine_core::onan::{self, SelmerOptions};
use moonshine_core::quadforms::{class_number, enumerate_reduced, hurwitz_number};
use moonshine_core::singmod::{self, TraceReport, DEFAULT_TOL};
use moonshine_core::{Error, QSeries, DD};

#[derive(Parser, Debug)]
#[command(
    name = "moonshine",
    version,
    about = "q-series, singular moduli and twisted elliptic curves for O'Nan moonshine"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Series precision: exponents below this are computed.
    #[arg(long, env = "MOONSHINE_PREC", default_value_t = DEFAULT_MT_PREC, global = true)]
    prec: i64,
    /// Tolerance for numerical rounding and L-values.
    #[arg(long, default_value_t = DEFAULT_TOL, global = true)]
    tol: f64,
    /// Largest prime accepted for point counting.
    #[arg(long, default_value_t = DEFAULT_PRIME_BOUND, global = true)]
    prime_bound: u64,
}

impl Global {
    fn echo(&self) -> Value {
        json!({ "prec": self.prec, "tol": self.tol, "prime_bound": self.prime_bound })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    E15,
    E14,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-expansion of a named series.
    #[command(allow_negative_numbers = true)]
    Qexp {
        #[arg(long = "fn", value_parser = parse_series)]
        id: SeriesId,
    },
    /// Class number h(D), optionally with the Hurwitz count and reduced forms.
    #[command(allow_negative_numbers = true)]
    Classnum {
        #[arg(short = 'D', long = "disc")]
        disc: i64,
        #[arg(long)]
        hurwitz: bool,
        #[arg(long)]
        forms: bool,
    },
    /// Trace of singular moduli, plain, genus-twisted or level-N skew.
    #[command(allow_negative_numbers = true)]
    Trace {
        #[arg(long = "fn", value_parser = parse_series)]
        id: SeriesId,
        #[arg(short = 'D', long = "disc")]
        disc: i64,
        #[arg(long)]
        level: Option<i64>,
        /// Positive fundamental D0 for the genus-twisted level-1 trace.
        #[arg(long)]
        twist: Option<i64>,
        /// Residue r (mod 2N) for the skew trace over Q_N(D, r) minus Q_N(D, -r).
        #[arg(long)]
        residue: Option<i64>,
    },
    /// McKay-Thompson series of O'Nan moonshine.
    #[command(name = "mt-series", allow_negative_numbers = true)]
    MtSeries {
        #[arg(long = "class", default_value = "3A")]
        class: String,
        /// Also print the coefficient C(D) for this discriminant.
        #[arg(short = 'D', long = "disc")]
        disc: Option<i64>,
    },
    /// Quadratic twists of the conductor-15 and conductor-14 curves.
    #[command(allow_negative_numbers = true)]
    Curve {
        #[arg(long, value_enum, ignore_case = true, default_value_t = Family::E15)]
        family: Family,
        /// Twisting discriminant D (1 for the untwisted curve).
        #[arg(long, default_value_t = 1)]
        twist: i64,
        /// Use the reduced minimal model (E15, twist 1 only).
        #[arg(long)]
        minimal: bool,
        /// Primes at which to report a_p.
        #[arg(long, value_delimiter = ',')]
        ap: Vec<u64>,
        /// Rational torsion subgroup.
        #[arg(long)]
        torsion: bool,
    },
    /// Central value L(E, 1) of E15 or one of its twists.
    #[command(allow_negative_numbers = true)]
    Lvalue {
        #[arg(long, value_enum, ignore_case = true, default_value_t = Family::E15)]
        family: Family,
        #[arg(long)]
        twist: Option<i64>,
    },
    /// Mod-5 Selmer criterion for E15 twisted by D.
    #[command(allow_negative_numbers = true)]
    Selmer {
        #[arg(short = 'D', long = "disc")]
        disc: i64,
        #[arg(long)]
        with_lvalue: bool,
        /// Skip the recomputation of C3A(D) from traces of singular moduli.
        #[arg(long)]
        no_cross_check: bool,
    },
    /// Selmer verdicts for every admissible D in a range, as JSON lines.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long)]
        from: i64,
        #[arg(long, default_value_t = -1)]
        to: i64,
        /// JSON-lines file; discriminants already present are skipped.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        with_lvalue: bool,
        #[arg(long)]
        no_cross_check: bool,
    },
}

fn parse_series(s: &str) -> Result<SeriesId, String> {
    SeriesId::parse(s).ok_or_else(|| {
        let names: Vec<&str> = SeriesId::ALL.iter().map(|id| id.name()).collect();
        format!("unknown series '{s}' (expected one of {})", names.join(", "))
    })
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &mut impl Write, g: &Global, text: &str, value: Value) -> CliResult<()> {
    match g.format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => writeln!(out, "{value}")?,
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> CliResult<()> {
    let g = &cli.global;
    if g.prec < 1 {
        return Err(CliError::Usage(format!("--prec must be positive, got {}", g.prec)));
    }
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    match &cli.command {
        Command::Qexp { id } => qexp(out, g, *id),
        Command::Classnum { disc, hurwitz, forms } => classnum(out, g, *disc, *hurwitz, *forms),
        Command::Trace { id, disc, level, twist, residue } => trace(out, g, *id, *disc, *level, *twist, *residue),
        Command::MtSeries { class, disc } => mt_series(out, g, class, *disc),
        Command::Curve { family, twist, minimal, ap, torsion } => {
            curve(out, g, *family, *twist, *minimal, ap, *torsion)
        }
        Command::Lvalue { family, twist } => lvalue(out, g, *family, *twist),
        Command::Selmer { disc, with_lvalue, no_cross_check } => {
            let opts = selmer_options(g, *with_lvalue, *no_cross_check);
            let v = onan::selmer_criterion(*disc, &opts)?;
            emit(out, g, &v.summary(), serde_json::to_value(&v).expect("verdict serializes"))
        }
        Command::Scan { from, to, out: path, with_lvalue, no_cross_check } => {
            let opts = selmer_options(g, *with_lvalue, *no_cross_check);
            scan(out, g, *from, *to, path.as_deref(), &opts)
        }
    }
}

fn series_terms(s: &QSeries) -> Value {
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!({ "exp": e.to_string(), "coeff": c.to_string() })).collect();
    json!(terms)
}

fn qexp(out: &mut impl Write, g: &Global, id: SeriesId) -> CliResult<()> {
    let s = named_series(id, g.prec)?;
    let value = json!({
        "fn": id.name(),
        "level": s.level,
        "weight": s.weight.to_string(),
        "terms": series_terms(&s.series),
        "options": g.echo(),
    });
    emit(out, g, &s.series.to_string(), value)
}

fn classnum(out: &mut impl Write, g: &Global, d: i64, hurwitz: bool, forms: bool) -> CliResult<()> {
    let h = class_number(d)?;
    let mut text = format!("h({d})={h}");
    let mut value = json!({ "D": d, "h": h, "options": g.echo() });
    if hurwitz {
        let hw = hurwitz_number(d)?;
        text.push_str(&format!("\nH({d})={hw}"));
        value["hurwitz"] = json!(hw.to_string());
    }
    if forms {
        let list = enumerate_reduced::<i64>(d)?;
        let prim: Vec<_> = list.primitive().collect();
        let shown: Vec<String> = prim.iter().map(|f| format!("({}, {}, {})", f.a, f.b, f.c)).collect();
        text.push_str(&format!("\nforms: {}", shown.join(" ")));
        value["forms"] = json!(prim.iter().map(|f| [f.a, f.b, f.c]).collect::<Vec<_>>());
    }
    emit(out, g, &text, value)
}

fn trace_value(r: &TraceReport<DD>) -> CliResult<String> {
    r.report.rounded.as_ref().map(|v| v.to_string()).ok_or_else(|| {
        CliError::Compute(Error::NonConvergent(format!("error bound {:e} too large to round", r.report.tail_bound)))
    })
}

fn trace(
    out: &mut impl Write,
    g: &Global,
    id: SeriesId,
    d: i64,
    level: Option<i64>,
    twist: Option<i64>,
    residue: Option<i64>,
) -> CliResult<()> {
    let n = level.unwrap_or(id.level());
    let (report, label) = match (twist, residue) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--twist and --residue are exclusive".into())),
        (Some(d0), None) => {
            if n != 1 {
                return Err(CliError::Usage("genus-twisted traces are level 1".into()));
            }
            (singmod::twisted_trace::<DD>(id, d, d0, g.tol)?, format!("tr_1({id}|{d}; chi_{d0})"))
        }
        (None, Some(r)) => (singmod::skew_trace::<DD>(id, n, d, r, g.tol)?, format!("tr_{n}({id}|{d}; r={r}, skew)")),
        (None, None) => (singmod::trace::<DD>(id, n, d, g.tol)?, format!("tr_{n}({id}|{d})")),
    };
    let v = trace_value(&report)?;
    let text = format!("{label}={v} (error bound {:.1e}, {} classes)", report.report.tail_bound, report.classes);
    let value = json!({
        "fn": id.name(),
        "D": d,
        "level": report.level,
        "twist": twist,
        "residue": residue,
        "value": v,
        "error_bound": report.report.tail_bound,
        "classes": report.classes,
        "convention": report.convention,
        "options": g.echo(),
    });
    emit(out, g, &text, value)
}

fn mt_series(out: &mut impl Write, g: &Global, class: &str, disc: Option<i64>) -> CliResult<()> {
    if !class.eq_ignore_ascii_case("3A") {
        return Err(CliError::Usage(format!("only class 3A is available, got '{class}'")));
    }
    let prec = match disc {
        Some(d) => g.prec.max(-d / 4 + 1),
        None => g.prec,
    };
    let mt = fon_mt_3a(prec)?;
    let mut text = format!("F0 = {}\nF1 = {}", mt.pair.comp0, mt.pair.comp1);
    let mut value = json!({
        "class": "3A",
        "comp0": series_terms(&mt.pair.comp0),
        "comp1": series_terms(&mt.pair.comp1),
        "working_prec": mt.work_prec,
        "options": g.echo(),
    });
    if let Some(d) = disc {
        let c = mt.coefficient(d)?;
        text.push_str(&format!("\nC3A({d})={c}"));
        value["D"] = json!(d);
        value["coefficient"] = json!(c.to_string());
    }
    emit(out, g, &text, value)
}

fn family_curve(family: Family, twist: i64, minimal: bool) -> CliResult<(WeierstrassCurve, String)> {
    if twist == 0 {
        return Err(CliError::Usage("--twist must be nonzero".into()));
    }
    let name = match family {
        Family::E15 => "E15",
        Family::E14 => "E14",
    };
    let label = if twist == 1 { name.to_string() } else { format!("{name} (x) {twist}") };
    if minimal {
        if family != Family::E15 || twist != 1 {
            return Err(CliError::Usage("--minimal is available for E15 with twist 1 only".into()));
        }
        return Ok((e15_minimal(), format!("{label} (minimal model)")));
    }
    let e = match family {
        Family::E15 => twist15(twist),
        Family::E14 => twist14(twist),
    };
    Ok((e, label))
}

fn curve(
    out: &mut impl Write,
    g: &Global,
    family: Family,
    twist: i64,
    minimal: bool,
    ap: &[u64],
    torsion: bool,
) -> CliResult<()> {
    let (e, label) = family_curve(family, twist, minimal)?;
    let disc = e.discriminant();
    let j = e.j_invariant()?;
    let mut lines = vec![
        format!("{label}: {e}"),
        format!("discriminant = {disc} = {}", elliptic::factor_string(&disc)),
        format!("j = {j}"),
    ];
    let mut value = json!({
        "family": format!("{family:?}"),
        "twist": twist,
        "model": [e.a1.to_string(), e.a2.to_string(), e.a3.to_string(), e.a4.to_string(), e.a6.to_string()],
        "discriminant": disc.to_string(),
        "j": j.to_string(),
        "options": g.echo(),
    });
    let mut rows = Vec::new();
    for &p in ap {
        let n = count_points_bounded(&e, p, g.prime_bound)?;
        let a = p as i64 + 1 - n as i64;
        let bad = elliptic::is_bad_prime(&e, p);
        let mark = if bad { " (bad for this model)" } else { "" };
        lines.push(format!("a_{p} = {a}; #E(F_{p}) = {n}{mark}"));
        rows.push(json!({ "p": p, "a_p": a, "points": n, "bad": bad }));
    }
    if !ap.is_empty() {
        value["ap"] = json!(rows);
    }
    if torsion {
        // Nagell-Lutz runs on the short model; the minimal model is isomorphic to it.
        let (t, note) = if e.is_short() {
            (torsion_subgroup(&e)?, "")
        } else {
            (torsion_subgroup(&twist15(1))?, " (points on the short model)")
        };
        lines.push(format!("torsion = {t}{note}"));
        value["torsion"] = json!(t.structure);
        value["torsion_points"] = json!(t.points.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
    emit(out, g, &lines.join("\n"), value)
}

fn lvalue_json(l: &LValueReport) -> Value {
    serde_json::to_value(l).expect("L-value serializes")
}

fn lvalue(out: &mut impl Write, g: &Global, family: Family, twist: Option<i64>) -> CliResult<()> {
    if family != Family::E15 {
        return Err(CliError::Usage("L-values are available for the E15 family only".into()));
    }
    let (l, label) = match twist {
        None | Some(1) => (lfunc::f15_l_value(g.tol)?, "E15".to_string()),
        Some(d) => (lfunc::twisted_l_value(SeriesId::F15, d, g.tol)?, format!("E15 (x) {d}")),
    };
    let sign = if l.sign > 0 { "+1" } else { "-1" };
    let text =
        format!("L({label}, 1) = {:.10} (sign {sign}, {} terms, tail {:.1e})", l.value, l.terms_used, l.tail_estimate);
    let mut value = lvalue_json(&l);
    value["curve"] = json!(label);
    value["options"] = g.echo();
    emit(out, g, &text, value)
}

fn selmer_options(g: &Global, with_lvalue: bool, no_cross_check: bool) -> SelmerOptions {
    SelmerOptions {
        prec: g.prec,
        tol: g.tol,
        prime_bound: g.prime_bound,
        cross_check: !no_cross_check,
        with_lvalue,
        l_tol: g.tol,
    }
}

/// Discriminants already recorded in a JSON-lines file; a torn last line is ignored.
fn recorded(path: &Path) -> CliResult<BTreeSet<i64>> {
    let mut done = BTreeSet::new();
    let Ok(f) = File::open(path) else {
        return Ok(done);
    };
    for line in BufReader::new(f).lines() {
        let line = line?;
        if let Ok(v) = serde_json::from_str::<Value>(&line) {
            if let Some(d) = v.get("D").and_then(Value::as_i64) {
                done.insert(d);
            }
        }
    }
    Ok(done)
}

fn scan(
    out: &mut impl Write,
    g: &Global,
    from: i64,
    to: i64,
    path: Option<&Path>,
    opts: &SelmerOptions,
) -> CliResult<()> {
    if to >= 0 {
        return Err(CliError::Usage(format!("--to must be negative, got {to}")));
    }
    match path {
        Some(path) => {
            let done = recorded(path)?;
            let file = OpenOptions::new().create(true).append(true).open(path)?;
            let mut w = BufWriter::new(file);
            let written = onan::scan_streaming(from, to, opts, &done, |v| {
                let line = serde_json::to_string(v).expect("verdict serializes");
                writeln!(w, "{line}")
                    .and_then(|_| w.flush())
                    .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
            })?;
            let skipped = onan::admissible_in(from, to).iter().filter(|d| done.contains(d)).count();
            let text = format!("{written} verdicts written to {} ({skipped} already present)", path.display());
            let value = json!({ "written": written, "skipped": skipped, "out": path.display().to_string(), "options": g.echo() });
            emit(out, g, &text, value)
        }
        None => {
            let format = g.format;
            onan::scan_streaming(from, to, opts, &BTreeSet::new(), |v| {
                let line = match format {
                    Format::Text => v.summary(),
                    Format::Json => serde_json::to_string(v).expect("verdict serializes"),
                };
                writeln!(out, "{line}").map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
            })?;
            Ok(())
        }
    }
}
