//! Command-line surface. Every subcommand prints text by default and one
//! JSON object `{command, ok, result}` with `--json`.
//!
//! Exit codes: 0 success or confirmed, 1 a check failed, 2 bad input.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cube::{enumerate_rectangles, rectangle_count, VertexSet};
use crate::driver::{self, Source};
use crate::error::Error;
use crate::forcing::{hyp_cert, rect_closure, HypOutcome};
use crate::hyperplanes::{
    builtin_tables, enumerate_hn_bounded, enumerate_hn_subsets, gen_g, orbit_size, SortedVector,
};
use crate::levels::{embed, enumerate_numrects, level, levels, realize, NumRect, WeightVector};
use crate::primitive::{extend_primitive, is_primitive};

#[derive(Parser, Debug)]
#[command(name = "oriented-cube", version, about = "Hyperplanes and sign forcing on the real affine cube")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or count the rectangles of C^n
    Rectangles {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: bool,
    },
    /// Print the levels S_0..S_|h|
    Levels {
        #[arg(long)]
        h: WeightVector,
    },
    /// Numerical rectangles of the given classes and whether they are realized
    Numrects {
        #[arg(long)]
        h: WeightVector,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        class: Vec<u8>,
    },
    /// Find a rectangle realizing a numerical rectangle
    Realize {
        #[arg(long)]
        h: WeightVector,
        #[arg(long)]
        rect: NumRect,
    },
    /// Embed S_a into S_b
    Embed {
        #[arg(long)]
        h: WeightVector,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
    },
    /// Check that every 3- and 4-rectangle is realized
    Primitive {
        #[arg(long)]
        h: WeightVector,
    },
    /// Extend a primitive vector by one coordinate g
    Extend {
        #[arg(long)]
        h: WeightVector,
        #[arg(long)]
        g: u32,
    },
    /// Certify the level hyperplane S_b(h)
    Force {
        #[arg(long)]
        h: WeightVector,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
    },
    /// Rectangle closure of a vertex set
    Closure {
        #[arg(long)]
        n: usize,
        /// Comma-separated vertices in subset notation, e.g. "∅,1,23"
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// Enumerate the hyperplane family H_n
    Hyperplanes {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Subsets)]
        method: Method,
        #[arg(long, default_value_t = driver::COEFF_BOUND)]
        bound: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Build G_n from an enumeration of H_{n-1}
    GenG {
        #[arg(long)]
        n: usize,
    },
    /// Print the transcribed tables
    Tables {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        csv: bool,
    },
    /// Certify every orbit of H_n and write the certificate store
    Certify {
        #[arg(long)]
        n: usize,
        /// Worker threads; 0 picks the number of cores
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value = "oriented-cube-store")]
        out: PathBuf,
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
    },
    /// Replay a stored report and its certificates
    Verify {
        #[arg(long)]
        report: PathBuf,
        /// JSON array of sorted vectors to use as the reference family
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Subsets,
    Bounded,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SourceArg {
    Subsets,
    Bounded,
    Builtin,
}

struct Reply {
    code: i32,
    text: String,
    result: Value,
}

fn reply<T: Serialize>(ok: bool, text: String, result: &T) -> Result<Reply, Fail> {
    Ok(Reply {
        code: if ok { 0 } else { 1 },
        text,
        result: serde_json::to_value(result).map_err(|e| Fail::Internal(e.to_string()))?,
    })
}

enum Fail {
    Usage(String),
    Internal(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Serialization(_) | Error::Overflow | Error::CheckFailed(_) => {
                Fail::Internal(e.to_string())
            }
            _ => Fail::Usage(e.to_string()),
        }
    }
}

fn flag(name: &str, e: impl std::fmt::Display) -> Fail {
    Fail::Usage(format!("--{name}: {e}"))
}

fn check_level(name: &str, h: &WeightVector, a: i64) -> Result<(), Fail> {
    if !(0..=h.total()).contains(&a) {
        return Err(flag(name, format!("level {a} outside 0..={} for {h}", h.total())));
    }
    Ok(())
}

fn check_n(name: &str, n: usize, max: usize) -> Result<(), Fail> {
    if !(1..=max).contains(&n) {
        return Err(flag(name, format!("{n} outside 1..={max}")));
    }
    Ok(())
}

/// `(n, vector, extra columns)`.
type CsvRow<'a> = (usize, &'a SortedVector, Vec<(&'a str, String)>);

fn vector_csv(rows: &[CsvRow]) -> Result<String, Fail> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string(), "vector".to_string()];
    if let Some((_, _, extra)) = rows.first() {
        header.extend(extra.iter().map(|(k, _)| k.to_string()));
    }
    let io = |e: csv::Error| Fail::Internal(e.to_string());
    w.write_record(&header).map_err(io)?;
    for (n, sv, extra) in rows {
        let entries: Vec<String> = sv.entries().iter().map(u32::to_string).collect();
        let mut rec = vec![n.to_string(), entries.join(" ")];
        rec.extend(extra.iter().map(|(_, v)| v.clone()));
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Fail::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Fail::Internal(e.to_string()))
}

fn lines<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
}

fn execute(cmd: Command) -> Result<Reply, Fail> {
    match cmd {
        Command::Rectangles { n, count } => {
            check_n("n", n, 16)?;
            if count {
                let c = rectangle_count(n);
                return reply(true, c.to_string(), &json!({ "n": n, "count": c }));
            }
            check_n("n", n, 8)?;
            let rects = enumerate_rectangles(n)?;
            let text = lines(rects.iter());
            reply(true, text, &json!({ "n": n, "count": rects.len(), "rectangles": rects }))
        }
        Command::Levels { h } => {
            let ls = levels(&h);
            let text = lines(ls.iter().enumerate().map(|(a, s)| format!("S_{a} = {s}")));
            reply(true, text, &json!({ "h": h, "levels": ls }))
        }
        Command::Numrects { h, class } => {
            if let Some(c) = class.iter().find(|c| !(1..=4).contains(*c)) {
                return Err(flag("class", format!("class {c} outside 1..=4")));
            }
            let realized = crate::levels::realized_numrects(&h)?;
            let rects = enumerate_numrects(&h, &class);
            let text = lines(rects.iter().map(|r| {
                let mark = if realized.contains(r) { "realized" } else { "not realized" };
                format!("{r} class {} {mark}", r.class())
            }));
            let rows: Vec<Value> = rects
                .iter()
                .map(|r| json!({ "rect": r, "class": r.class(), "realized": realized.contains(r) }))
                .collect();
            reply(true, text, &json!({ "h": h, "numrects": rows }))
        }
        Command::Realize { h, rect } => {
            for (name, x) in [("a", rect.a), ("b", rect.b), ("c", rect.c), ("d", rect.d)] {
                check_level("rect", &h, x).map_err(|_| flag("rect", format!("entry {name} = {x} outside 0..={}", h.total())))?;
            }
            let found = realize(&h, &rect)?;
            let text = match &found {
                Some(r) => format!("realized by {r}"),
                None => "not realizable".into(),
            };
            reply(found.is_some(), text, &json!({ "h": h, "rect": rect, "rectangle": found }))
        }
        Command::Embed { h, a, b } => {
            check_level("a", &h, a)?;
            check_level("b", &h, b)?;
            if a == b {
                return Err(flag("b", "must differ from --a"));
            }
            if level(&h, a).is_empty() {
                return Err(flag("a", format!("level S_{a} of {h} is empty")));
            }
            let cert = embed(&h, a, b)?;
            let text = match &cert {
                Some(c) => format!("embedded: S_{a} into S_{b} with {} tree edges", c.tree_edges.len()),
                None => format!("not embedded: S_{a} does not embed into S_{b}"),
            };
            reply(cert.is_some(), text, &json!({ "h": h, "a": a, "b": b, "embedded": cert.is_some(), "certificate": cert }))
        }
        Command::Primitive { h } => {
            let v = is_primitive(&h)?;
            let text = if v.primitive {
                "primitive".into()
            } else {
                format!("not primitive: {} unrealizable, first {}", v.counterexamples.len(), v.counterexamples[0])
            };
            reply(v.primitive, text, &v)
        }
        Command::Extend { h, g } => match extend_primitive(&h, g) {
            Ok(ext) => reply(true, format!("{ext} is primitive"), &json!({ "h": h, "g": g, "extended": ext, "primitive": true })),
            Err(Error::Precondition(m)) => Err(flag(if m.contains("g =") { "g" } else { "h" }, m)),
            Err(Error::CheckFailed(m)) => {
                reply(false, m.clone(), &json!({ "h": h, "g": g, "extended": h.extended(g)?, "primitive": false, "reason": m }))
            }
            Err(e) => Err(e.into()),
        },
        Command::Force { h, b } => {
            check_level("b", &h, b)?;
            if level(&h, b).is_empty() {
                return Err(flag("b", format!("level S_{b} of {h} is empty")));
            }
            let out = hyp_cert(&h, b)?;
            let text = match &out {
                HypOutcome::Certified(c) => format!(
                    "certified: {} zero vertices, spanned by {}, seed {} ({:+}), {} forcing steps, {} unseeded signings",
                    c.zero_set.len(),
                    c.c2.subset,
                    c.seed.vertex,
                    c.seed.sign,
                    c.c4.steps.len(),
                    c.signings_without_seed.count
                ),
                HypOutcome::Degenerate => "degenerate: the level closes to the whole cube".into(),
                HypOutcome::Failed { part, detail } => format!("failed at {part:?}: {detail}"),
            };
            reply(matches!(out, HypOutcome::Certified(_)), text, &out)
        }
        Command::Closure { n, set } => {
            check_n("n", n, 16)?;
            let s: VertexSet = set
                .iter()
                .map(|v| crate::cube::Vertex::parse_in(n, v.trim()).map_err(|e| flag("set", e)))
                .collect::<Result<_, _>>()?;
            let t = rect_closure(n, &s)?;
            let text = format!("{} ({} steps)", t.result, t.steps.len());
            reply(true, text, &t)
        }
        Command::Hyperplanes { n, method, bound, csv } => {
            let family: BTreeSet<SortedVector> = match method {
                Method::Subsets => {
                    check_n("n", n, 6)?;
                    enumerate_hn_subsets(n)?.family
                }
                Method::Bounded => {
                    check_n("n", n, 8)?;
                    enumerate_hn_bounded(n, bound)?
                }
            };
            let rows: Vec<_> = family
                .iter()
                .map(|sv| (n, sv, vec![("orbit_size", orbit_size(sv).to_string())]))
                .collect();
            let text = if csv { vector_csv(&rows)? } else { lines(family.iter()) + &format!("\n{} vectors", family.len()) };
            let sizes: Vec<String> = family.iter().map(|sv| orbit_size(sv).to_string()).collect();
            reply(true, text, &json!({ "n": n, "count": family.len(), "family": family, "orbitSizes": sizes }))
        }
        Command::GenG { n } => {
            if !(2..=7).contains(&n) {
                return Err(flag("n", format!("{n} outside 2..=7")));
            }
            let prev = enumerate_hn_subsets(n - 1)?.family;
            let g = gen_g(&prev)?;
            let text = lines(g.iter()) + &format!("\n{} vectors", g.len());
            reply(true, text, &json!({ "n": n, "count": g.len(), "family": g }))
        }
        Command::Tables { n, csv } => {
            if let Some(n) = n {
                check_n("n", n, 7)?;
            }
            let t = builtin_tables();
            let dims: Vec<usize> = n.map_or((1..=7).collect(), |n| vec![n]);
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for d in dims {
                let entries = if d == 7 { &t.h7_extras } else { &t.tables[&d] };
                for e in entries {
                    rows.push(json!({ "n": d, "raw": e.raw, "wellFormed": e.well_formed }));
                    let raw: Vec<String> = e.raw.iter().map(u32::to_string).collect();
                    text.push(if csv {
                        format!("{d},{},{}", raw.join(" "), e.well_formed)
                    } else {
                        format!("{d}: ({}){}", raw.join(","), if e.well_formed { "" } else { "  malformed" })
                    });
                }
            }
            if csv {
                text.insert(0, "n,vector,well_formed".into());
            }
            reply(true, text.join("\n"), &json!({ "rows": rows, "g7Count": t.g7_count }))
        }
        Command::Certify { n, jobs, out, source } => {
            check_n("n", n, driver::MAX_N)?;
            let source = match source {
                None => Source::default_for(n),
                Some(SourceArg::Subsets) if n == 7 => return Err(flag("source", "subsets is limited to n ≤ 6")),
                Some(SourceArg::Subsets) => Source::Subsets,
                Some(SourceArg::Bounded) => Source::Bounded,
                Some(SourceArg::Builtin) => Source::Builtin,
            };
            let c = driver::certify_all(n, source, jobs)?;
            let path = driver::write_store(&out, &c)?;
            let r = &c.report;
            let mut text = vec![format!(
                "{} orbits: {} axioms, {} certified, {} degenerate, {} failed",
                r.summary.orbits, r.summary.axioms, r.summary.certified, r.summary.degenerate, r.summary.failed
            )];
            for o in r.orbits.iter().filter(|o| !o.status.is_settled()) {
                text.push(format!("  {}: {:?}", o.vector, o.status));
            }
            text.push(r.verdict.statement.clone());
            text.push(format!("report: {}", path.display()));
            reply(
                r.verdict.confirmed,
                text.join("\n"),
                &json!({
                    "reportPath": path.display().to_string(),
                    "summary": r.summary,
                    "verdict": r.verdict,
                    "familyDiff": r.family.diff,
                }),
            )
        }
        Command::Verify { report, table } => {
            let reference = match table {
                None => None,
                Some(p) => {
                    let bytes = std::fs::read(&p).map_err(|e| flag("table", format!("{}: {e}", p.display())))?;
                    let f: BTreeSet<SortedVector> = serde_json::from_slice(&bytes).map_err(|e| flag("table", e))?;
                    Some(f)
                }
            };
            if !report.is_file() {
                return Err(flag("report", format!("{} is not a file", report.display())));
            }
            let v = driver::verify_report(&report, reference.as_ref())?;
            let mut text = vec![format!("{} certificates replayed", v.replayed)];
            text.extend(v.problems.iter().cloned());
            text.push(if v.ok { "verified".into() } else { "verification failed".into() });
            reply(v.ok, text.join("\n"), &v)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Rectangles { .. } => "rectangles",
        Command::Levels { .. } => "levels",
        Command::Numrects { .. } => "numrects",
        Command::Realize { .. } => "realize",
        Command::Embed { .. } => "embed",
        Command::Primitive { .. } => "primitive",
        Command::Extend { .. } => "extend",
        Command::Force { .. } => "force",
        Command::Closure { .. } => "closure",
        Command::Hyperplanes { .. } => "hyperplanes",
        Command::GenG { .. } => "gen-g",
        Command::Tables { .. } => "tables",
        Command::Certify { .. } => "certify",
        Command::Verify { .. } => "verify",
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(args) {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let json = parsed.json;
    let name = command_name(&parsed.command);
    match execute(parsed.command) {
        Ok(r) => {
            let _ = if json {
                let doc = json!({ "command": name, "ok": r.code == 0, "result": r.result });
                writeln!(out, "{doc}")
            } else {
                writeln!(out, "{}", r.text.trim_end())
            };
            r.code
        }
        Err(Fail::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Fail::Internal(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}
