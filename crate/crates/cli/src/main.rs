//! Command-line front end: every pipeline stage with text/JSON/DOT export and
//! stable exit codes (0 ok, 1 input or validation error, 2 theorem-check
//! failure, 3 limit exceeded).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kstates::diagram::{parse_diagram, validate, LinkDiagram, Segment};
use kstates::error::Error;
use kstates::irrstates::{construct_irreducible_state, level_partition};
use kstates::pipeline::Analysis;
use kstates::states::DEFAULT_STATE_LIMIT;
use kstates::theorems::{run_all, CheckReport, SegmentSelector};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "kstates", version, about = "Kauffman state lattices, knot modules and coefficient quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IrrMethod {
    Module,
    State,
    Both,
}

#[derive(clap::Args)]
struct Common {
    /// Diagram interchange document (JSON)
    file: PathBuf,
    /// Maximum number of states/submodules to enumerate
    #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
    limit: usize,
    /// Write output here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural validation: connectivity, curls, Euler count, primality
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate Kauffman states relative to a segment
    States {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export the state lattice (Hasse diagram)
    Lattice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Dimension vector, arrow flags and matrices of T(i)
    Rep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate submodule dimension vectors
    Submodules {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Join irreducibles: modules M(j,k) and/or states S(j,k)
    Irr {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = IrrMethod::Both)]
        method: IrrMethod,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export the coefficient quiver of T(i)
    Coeff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        segment: u32,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Run every theorem check for one segment or all segments
    Check {
        #[command(flatten)]
        common: Common,
        /// Segment id or "all"
        #[arg(long, default_value = "all")]
        segment: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include per-check wall times (non-deterministic output)
        #[arg(long)]
        timings: bool,
        /// Negative control: flip the marker flag of the given arrow (by
        /// canonical index) before running the checks; requires a single
        /// segment
        #[arg(long)]
        corrupt_flag: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit 2, which is reserved for theorem failures here
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::LimitExceeded { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn ensure_format(command: &'static str, format: Format, allowed: &[Format]) -> Result<(), Error> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::UnsupportedFormat {
            command,
            format: match format {
                Format::Text => "text",
                Format::Json => "json",
                Format::Dot => "dot",
            },
        })
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { common, format } => {
            ensure_format("validate", format, &[Format::Text, Format::Json])?;
            let d = load(&common.file)?;
            let report = validate(&d);
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        schema_version: u32,
                        name: &'a str,
                        ok: bool,
                        primality: bool,
                        findings: &'a [kstates::diagram::Finding],
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        name: d.name(),
                        ok: report.ok,
                        primality: report.primality,
                        findings: &report.findings,
                    })
                }
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "diagram: {}", d.name());
                    let _ = writeln!(s, "crossings: {}", d.crossing_count());
                    let _ = writeln!(s, "segments: {}", d.segments().len());
                    for f in &report.findings {
                        let sev = match f.severity {
                            kstates::diagram::Severity::Error => "error",
                            kstates::diagram::Severity::Warning => "warning",
                        };
                        let _ = writeln!(s, "{sev} [{}]: {}", f.code, f.message);
                    }
                    let _ = writeln!(s, "primality: {}", report.primality);
                    let _ = writeln!(s, "ok: {}", report.ok);
                    s
                }
            };
            emit(&common.output, &text)?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::States {
            common,
            segment,
            format,
        } => {
            ensure_format("states", format, &[Format::Text, Format::Json])?;
            let (d, a) = analyze(&common, segment)?;
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        count: usize,
                        states: Vec<Vec<(String, u8)>>,
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        count: a.lattice.len(),
                        states: a.lattice.states.iter().map(|s| s.to_pairs(&d)).collect(),
                    })
                }
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "{} states relative to segment {}", a.lattice.len(), segment);
                    for (k, st) in a.lattice.states.iter().enumerate() {
                        let pairs: Vec<String> = st
                            .to_pairs(&d)
                            .iter()
                            .map(|(id, c)| format!("({id},{c})"))
                            .collect();
                        let _ = writeln!(s, "{k}: {}", pairs.join(" "));
                    }
                    s
                }
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Lattice {
            common,
            segment,
            format,
        } => {
            ensure_format("lattice", format, &[Format::Dot, Format::Json])?;
            let (_d, a) = analyze(&common, segment)?;
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Cover {
                        lower: usize,
                        upper: usize,
                        label: u32,
                    }
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        size: usize,
                        min_index: usize,
                        max_index: usize,
                        covers: Vec<Cover>,
                        leq: Vec<Vec<bool>>,
                    }
                    let n = a.lattice.len();
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        size: n,
                        min_index: a.lattice.min_index,
                        max_index: a.lattice.max_index,
                        covers: a
                            .lattice
                            .covers
                            .iter()
                            .map(|c| Cover {
                                lower: c.lower,
                                upper: c.upper,
                                label: c.label.0,
                            })
                            .collect(),
                        leq: (0..n)
                            .map(|x| (0..n).map(|y| a.lattice.order.leq(x, y)).collect())
                            .collect(),
                    })
                }
                _ => a.lattice.to_dot(),
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Rep {
            common,
            segment,
            format,
        } => {
            ensure_format("rep", format, &[Format::Text, Format::Json, Format::Dot])?;
            let (d, a) = analyze(&common, segment)?;
            let text = match format {
                Format::Dot => a.rep.quiver.to_dot(&d),
                Format::Json => {
                    #[derive(Serialize)]
                    struct ArrowOut {
                        source: u32,
                        target: u32,
                        crossing: String,
                        corner: u8,
                        flag: u8,
                        matrix: Vec<Vec<u8>>,
                    }
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        dims: Vec<(u32, u32)>,
                        arrows: Vec<ArrowOut>,
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        dims: a.rep.dims.iter().map(|(j, v)| (j.0, v)).collect(),
                        arrows: a
                            .rep
                            .quiver
                            .arrows
                            .iter()
                            .map(|ar| ArrowOut {
                                source: ar.source.0,
                                target: ar.target.0,
                                crossing: d.crossings()[ar.crossing].id.clone(),
                                corner: ar.corner,
                                flag: ar.marker_flag as u8,
                                matrix: a.rep.arrow_matrix(ar),
                            })
                            .collect(),
                    })
                }
                Format::Text => {
                    let mut s = String::new();
                    let _ = writeln!(s, "T({segment}) of {}", d.name());
                    let dims: Vec<String> = a
                        .rep
                        .dims
                        .iter()
                        .map(|(j, v)| format!("d_{j}={v}"))
                        .collect();
                    let _ = writeln!(s, "dims: {} (total {})", dims.join(" "), a.rep.dims.total());
                    for ar in &a.rep.quiver.arrows {
                        let m = a.rep.arrow_matrix(ar);
                        let rows: Vec<String> = m
                            .iter()
                            .map(|r| {
                                r.iter()
                                    .map(|x| x.to_string())
                                    .collect::<Vec<_>>()
                                    .join(" ")
                            })
                            .collect();
                        let _ = writeln!(
                            s,
                            "{} -> {}  crossing {} corner {} flag {}  [{}]",
                            ar.source,
                            ar.target,
                            d.crossings()[ar.crossing].id,
                            ar.corner,
                            ar.marker_flag as u8,
                            rows.join("; ")
                        );
                    }
                    s
                }
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Submodules {
            common,
            segment,
            format,
        } => {
            ensure_format("submodules", format, &[Format::Text, Format::Json])?;
            let (_d, a) = analyze(&common, segment)?;
            let vectors = a.rep.enumerate_submodules(common.limit)?;
            let segs: Vec<u32> = a.rep.dims.iter().map(|(j, _)| j.0).collect();
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        segments: Vec<u32>,
                        count: usize,
                        vectors: Vec<Vec<u32>>,
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        segments: segs,
                        count: vectors.len(),
                        vectors: vectors
                            .iter()
                            .map(|v| v.iter().map(|(_, x)| x).collect())
                            .collect(),
                    })
                }
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "{} submodules of T({segment})", vectors.len());
                    let names: Vec<String> = segs.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "segments: {}", names.join(" "));
                    for (k, v) in vectors.iter().enumerate() {
                        let row: Vec<String> =
                            v.iter().map(|(_, x)| x.to_string()).collect();
                        let _ = writeln!(s, "{k}: {}", row.join(" "));
                    }
                    s
                }
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Irr {
            common,
            segment,
            method,
            format,
        } => {
            ensure_format("irr", format, &[Format::Text, Format::Json])?;
            let (d, a) = analyze(&common, segment)?;
            let min = a.lattice.min_state().clone();
            #[derive(Serialize)]
            struct IrrOut {
                j: u32,
                k: u32,
                #[serde(skip_serializing_if = "Option::is_none")]
                vector: Option<Vec<(u32, u32)>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                state: Option<Vec<(String, u8)>>,
            }
            let mut items = Vec::new();
            for (j, dj) in a.rep.dims.iter() {
                for k in 1..=dj {
                    let vector = if method != IrrMethod::State {
                        Some(
                            a.rep
                                .generate_mjk(j, k)?
                                .iter()
                                .map(|(s, v)| (s.0, v))
                                .collect(),
                        )
                    } else {
                        None
                    };
                    let state = if method != IrrMethod::Module {
                        let lv = level_partition(&d, &min, dj, j, k)?;
                        let st = construct_irreducible_state(&d, &a.regions, a.segment, &min, &lv)?;
                        Some(st.to_pairs(&d))
                    } else {
                        None
                    };
                    items.push(IrrOut {
                        j: j.0,
                        k,
                        vector,
                        state,
                    });
                }
            }
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        count: usize,
                        irreducibles: Vec<IrrOut>,
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        count: items.len(),
                        irreducibles: items,
                    })
                }
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "{} join irreducibles of L({segment})", items.len());
                    for it in &items {
                        let _ = write!(s, "({},{})", it.j, it.k);
                        if let Some(v) = &it.vector {
                            let nz: Vec<String> = v
                                .iter()
                                .filter(|(_, x)| *x > 0)
                                .map(|(j, x)| format!("e_{j}={x}"))
                                .collect();
                            let _ = write!(s, "  M: {}", nz.join(" "));
                        }
                        if let Some(st) = &it.state {
                            let pairs: Vec<String> =
                                st.iter().map(|(id, c)| format!("({id},{c})")).collect();
                            let _ = write!(s, "  S: {}", pairs.join(" "));
                        }
                        let _ = writeln!(s);
                    }
                    s
                }
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Coeff {
            common,
            segment,
            format,
        } => {
            ensure_format("coeff", format, &[Format::Dot, Format::Json])?;
            let (_d, a) = analyze(&common, segment)?;
            let cq = a.rep.coefficient_quiver()?;
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        schema_version: u32,
                        segment: u32,
                        vertices: Vec<(u32, u32)>,
                        arrows: Vec<((u32, u32), (u32, u32))>,
                    }
                    to_json(&Out {
                        schema_version: SCHEMA_VERSION,
                        segment,
                        vertices: cq.vertices.iter().map(|v| (v.segment.0, v.index)).collect(),
                        arrows: cq
                            .arrows
                            .iter()
                            .map(|ar| {
                                (
                                    (ar.source.segment.0, ar.source.index),
                                    (ar.target.segment.0, ar.target.index),
                                )
                            })
                            .collect(),
                    })
                }
                _ => cq.to_dot(),
            };
            emit(&common.output, &text)?;
            Ok(0)
        }
        Command::Check {
            common,
            segment,
            format,
            timings,
            corrupt_flag,
        } => {
            ensure_format("check", format, &[Format::Text, Format::Json])?;
            let d = load(&common.file)?;
            let report = validate(&d);
            if !report.ok {
                let first = report
                    .findings
                    .iter()
                    .find(|f| f.severity == kstates::diagram::Severity::Error)
                    .map(|f| f.message.clone())
                    .unwrap_or_default();
                return Err(Error::InvalidDiagram(first));
            }
            let selector = if segment == "all" {
                SegmentSelector::All
            } else {
                let id: u32 = segment
                    .parse()
                    .map_err(|_| Error::BadSelector(segment.clone()))?;
                let j = Segment(id);
                if !d.contains_segment(j) {
                    return Err(Error::UnknownSegment(j));
                }
                SegmentSelector::One(j)
            };
            let report = match (corrupt_flag, selector) {
                (None, selector) => run_all(&d, selector, common.limit)?,
                (Some(k), SegmentSelector::One(j)) => {
                    let mut a = Analysis::build(&d, j, common.limit)?;
                    // only arrows with a nonzero source dimension affect the
                    // feasible set or the coefficient quiver
                    let candidates: Vec<usize> = a
                        .rep
                        .quiver
                        .arrows
                        .iter()
                        .enumerate()
                        .filter(|(_, ar)| a.rep.dims.get(ar.source) > 0)
                        .map(|(ix, _)| ix)
                        .collect();
                    if candidates.is_empty() {
                        return Err(Error::BadSelector(
                            "no arrow with nonzero dimensions to corrupt".into(),
                        ));
                    }
                    let ix = candidates[k % candidates.len()];
                    a.rep.quiver.arrows[ix].marker_flag = !a.rep.quiver.arrows[ix].marker_flag;
                    let results = kstates::theorems::run_segment_checks(&a);
                    let overall = results.iter().all(|c| c.passed);
                    CheckReport {
                        segments: vec![kstates::theorems::SegmentChecks {
                            segment: j,
                            results,
                        }],
                        overall,
                    }
                }
                (Some(_), SegmentSelector::All) => {
                    return Err(Error::BadSelector(
                        "--corrupt-flag requires a single segment".into(),
                    ))
                }
            };
            let text = render_check_report(&report, format, timings);
            emit(&common.output, &text)?;
            Ok(if report.overall { 0 } else { 2 })
        }
    }
}

fn render_check_report(report: &CheckReport, format: Format, timings: bool) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct CheckOut {
                name: &'static str,
                passed: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<String>,
                #[serde(skip_serializing_if = "Option::is_none")]
                millis: Option<u128>,
            }
            #[derive(Serialize)]
            struct SegOut {
                segment: u32,
                checks: Vec<CheckOut>,
            }
            #[derive(Serialize)]
            struct Out {
                schema_version: u32,
                segments: Vec<SegOut>,
                overall: bool,
            }
            to_json(&Out {
                schema_version: SCHEMA_VERSION,
                segments: report
                    .segments
                    .iter()
                    .map(|s| SegOut {
                        segment: s.segment.0,
                        checks: s
                            .results
                            .iter()
                            .map(|c| CheckOut {
                                name: c.name,
                                passed: c.passed,
                                witness: c.witness.clone(),
                                millis: timings.then_some(c.elapsed.as_millis()),
                            })
                            .collect(),
                    })
                    .collect(),
                overall: report.overall,
            })
        }
        _ => {
            let mut s = String::new();
            for seg in &report.segments {
                let _ = writeln!(s, "segment {}:", seg.segment);
                for c in &seg.results {
                    let status = if c.passed { "pass" } else { "FAIL" };
                    let _ = write!(s, "  {:<28}{status}", c.name);
                    if timings {
                        let _ = write!(s, "  {} ms", c.elapsed.as_millis());
                    }
                    if let Some(w) = &c.witness {
                        let _ = write!(s, "  ({w})");
                    }
                    let _ = writeln!(s);
                }
            }
            let _ = writeln!(s, "overall: {}", if report.overall { "pass" } else { "FAIL" });
            s
        }
    }
}

/// Parses the file; all commands except `validate` also require a clean
/// validation report.
fn load(path: &PathBuf) -> Result<LinkDiagram, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_diagram(&text)
}

fn analyze(common: &Common, segment: u32) -> Result<(LinkDiagram, Analysis), Error> {
    let d = load(&common.file)?;
    let report = validate(&d);
    if !report.ok {
        let first = report
            .findings
            .iter()
            .find(|f| f.severity == kstates::diagram::Severity::Error)
            .map(|f| f.message.clone())
            .unwrap_or_default();
        return Err(Error::InvalidDiagram(first));
    }
    let a = Analysis::build(&d, Segment(segment), common.limit)?;
    Ok((d, a))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
