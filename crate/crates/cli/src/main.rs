use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::num::NonZeroU32;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clipseq_core::textio::{
    format_permutation_compact, parse_dissection, parse_permutation, parse_polygon,
    parse_triangulation, polygon_json, render_clip_steps, render_dissection, render_tree,
    render_triangulation, Polygon, RenderFormat, RenderOptions,
};
use clipseq_core::{
    build_triangulation, clip_sequence, decent_to_dissection, descending_runs, find_312, is_decent,
    post_order, to_binary_tree, up_down_pattern, verify_angulations, verify_clip_bijection,
    verify_dissection_bijection, verify_postorder, Bounds, Diagonal, ErrorClass, Permutation,
    RemovalKind, Triangulation, Undissector, VerificationReport, DEFAULT_UNDISSECT_LIMIT,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "clipseq",
    version,
    about = "Clip sequences, 312-avoiding permutations and polygon dissections"
)]
struct Cli {
    /// Emit one JSON object per line instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Directory for persisted inverse tables.
    #[arg(long, global = true, env = "CLIPSEQ_CACHE")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Object to process; read from --input or stdin (one per line) when absent.
    value: Option<String>,

    #[arg(long, conflicts_with = "value")]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Clip sequence of a triangulation, e.g. `clip "4; 1-3"`.
    Clip {
        #[command(flatten)]
        input: Input,
        /// Also list the triangle removed at each step.
        #[arg(long)]
        trace: bool,
    },
    /// Triangulation with the given clip sequence.
    Build {
        #[command(flatten)]
        input: Input,
    },
    /// Dual binary tree of a triangulation and its post-order.
    Tree {
        #[command(flatten)]
        input: Input,
    },
    /// Pattern properties of a permutation.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        decent: bool,
        #[arg(long)]
        avoiding: bool,
        /// Print the up/down pattern.
        #[arg(long)]
        pattern: bool,
    },
    /// Dissection of a decent 312-avoider, with the cell report.
    Dissect {
        #[command(flatten)]
        input: Input,
    },
    /// Decent 312-avoider of a dissection.
    Undissect {
        #[command(flatten)]
        input: Input,
        /// Largest permutation length for which an inverse table is built.
        #[arg(long, env = "CLIPSEQ_UNDISSECT_LIMIT", default_value_t = DEFAULT_UNDISSECT_LIMIT)]
        limit: usize,
    },
    /// List every object of a kind and size.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Polygon size for triangulations and dissections, permutation
        /// length otherwise.
        #[arg(long)]
        size: u32,
        /// Number of diagonals (dissections only); all counts when absent.
        #[arg(long)]
        diagonals: Option<u32>,
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Exhaustively check one of the bijections.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Smallest size checked (polygon size, or permutation length for
        /// `dissect`).
        #[arg(long)]
        from: Option<u32>,
        /// Largest size checked.
        #[arg(long)]
        to: Option<u32>,
        /// Descents per run (`angulation` only).
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Draw a polygon, its dual tree or its clip steps.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = View::Polygon)]
        view: View,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Panel size in pixels.
        #[arg(long, default_value_t = NonZeroU32::new(400).unwrap())]
        size: NonZeroU32,
        #[arg(long)]
        no_labels: bool,
        /// Triangle or cell to fill, as comma-separated labels; repeatable.
        #[arg(long)]
        highlight: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct BoundArgs {
    #[arg(long, env = Bounds::POLYGON_ENV)]
    max_polygon: Option<u32>,
    #[arg(long, env = Bounds::PERMUTATION_ENV)]
    max_permutation: Option<u32>,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        let mut b = Bounds::default();
        if let Some(p) = self.max_polygon {
            b.polygon = p;
        }
        if let Some(p) = self.max_permutation {
            b.permutation = p;
        }
        b
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Triangulations,
    Avoiders,
    Decent,
    Dissections,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Clip,
    Tree,
    Dissect,
    Angulation,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum View {
    Polygon,
    Tree,
    ClipSteps,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Svg,
    Dot,
}

/// Where the objects of one invocation come from.
#[derive(Debug, Clone, PartialEq, Eq)]
enum InputSource {
    Argument(String),
    File(PathBuf),
    Stdin,
}

impl InputSource {
    fn from_args(input: &Input) -> Self {
        match (&input.value, &input.input) {
            (Some(v), _) => InputSource::Argument(v.clone()),
            (None, Some(path)) => InputSource::File(path.clone()),
            (None, None) => InputSource::Stdin,
        }
    }

    /// Non-blank lines, each one object.
    fn items(&self) -> anyhow::Result<Vec<String>> {
        let text = match self {
            InputSource::Argument(v) => return Ok(vec![v.clone()]),
            InputSource::File(path) => std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?,
            InputSource::Stdin => {
                let mut lines = Vec::new();
                for line in io::stdin().lock().lines() {
                    lines.push(line.context("reading standard input")?);
                }
                lines.join("\n")
            }
        };
        Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect())
    }
}

/// One parsed invocation: exactly one subcommand with its input.
#[derive(Debug)]
struct CommandSpec {
    name: &'static str,
    command: Command,
    input: Option<InputSource>,
    json: bool,
    cache_dir: Option<PathBuf>,
}

impl CommandSpec {
    fn from_cli(cli: Cli) -> Self {
        let (name, input) = match &cli.command {
            Command::Clip { input, .. } => ("clip", Some(input)),
            Command::Build { input } => ("build", Some(input)),
            Command::Tree { input } => ("tree", Some(input)),
            Command::Check { input, .. } => ("check", Some(input)),
            Command::Dissect { input } => ("dissect", Some(input)),
            Command::Undissect { input, .. } => ("undissect", Some(input)),
            Command::Enumerate { .. } => ("enumerate", None),
            Command::Verify { .. } => ("verify", None),
            Command::Render { input, .. } => ("render", Some(input)),
        };
        CommandSpec {
            name,
            input: input.map(InputSource::from_args),
            command: cli.command,
            json: cli.json,
            cache_dir: cli.cache_dir,
        }
    }
}

/// Verification found counterexamples.
#[derive(Debug)]
struct VerificationFailed(Vec<String>);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed:")?;
        for line in &self.0 {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

impl std::error::Error for VerificationFailed {}

fn permutation_text(p: &Permutation) -> String {
    format_permutation_compact(p)
}

fn diagonals_json(n: u32, diagonals: &[Diagonal]) -> serde_json::Value {
    polygon_json(n, diagonals)
}

fn run(spec: CommandSpec, out: &mut dyn Write) -> anyhow::Result<()> {
    let items = match &spec.input {
        Some(source) => source.items()?,
        None => Vec::new(),
    };
    match &spec.command {
        Command::Enumerate {
            kind,
            size,
            diagonals,
            count_only,
            bounds,
        } => {
            return enumerate(
                *kind,
                *size,
                *diagonals,
                *count_only,
                bounds.bounds(),
                spec.json,
                out,
            )
        }
        Command::Verify {
            suite,
            from,
            to,
            j,
            bounds,
        } => return verify(*suite, *from, *to, *j, bounds.bounds(), spec.json, out),
        _ => {}
    }
    if items.is_empty() {
        bail!("{}: no input given", spec.name);
    }
    let undissector = match &spec.command {
        Command::Undissect { limit, .. } => {
            let u = Undissector::new(*limit);
            Some(match &spec.cache_dir {
                Some(dir) => u.with_cache_dir(dir),
                None => u,
            })
        }
        _ => None,
    };
    for item in &items {
        let text = match &spec.command {
            Command::Clip { trace, .. } => clip(item, *trace, spec.json)?,
            Command::Build { .. } => build(item, spec.json)?,
            Command::Tree { .. } => tree(item, spec.json)?,
            Command::Check {
                decent,
                avoiding,
                pattern,
                ..
            } => check(item, *decent, *avoiding, *pattern, spec.json)?,
            Command::Dissect { .. } => dissect(item, spec.json)?,
            Command::Undissect { .. } => {
                let d = parse_dissection(item)?;
                let p = undissector.as_ref().expect("built above").invert(&d)?;
                if spec.json {
                    json!({ "permutation": p }).to_string()
                } else {
                    permutation_text(&p)
                }
            }
            Command::Render {
                view,
                format,
                size,
                no_labels,
                highlight,
                ..
            } => {
                let opts = RenderOptions {
                    size: *size,
                    show_labels: !no_labels,
                    highlight: parse_highlights(highlight)?,
                    format: match format {
                        Format::Svg => RenderFormat::Svg,
                        Format::Dot => RenderFormat::Dot,
                    },
                };
                render(item, *view, &opts)?
            }
            Command::Enumerate { .. } | Command::Verify { .. } => unreachable!("handled above"),
        };
        writeln!(out, "{}", text.trim_end_matches('\n'))?;
    }
    Ok(())
}

fn clip(item: &str, trace: bool, json: bool) -> anyhow::Result<String> {
    let t = parse_triangulation(item)?;
    let (p, steps) = clip_sequence(&t)?;
    if json {
        let mut value = json!({ "permutation": p });
        if trace {
            value["steps"] = serde_json::to_value(steps.steps())?;
        }
        return Ok(value.to_string());
    }
    let mut s = permutation_text(&p);
    if trace {
        for (i, step) in steps.steps().iter().enumerate() {
            write!(
                s,
                "\nstep {}: clip {} triangle {}",
                i + 1,
                step.label,
                step.triangle
            )?;
        }
    }
    Ok(s)
}

fn build(item: &str, json: bool) -> anyhow::Result<String> {
    let t = build_triangulation(&parse_permutation(item)?)?;
    Ok(if json {
        diagonals_json(t.n_vertices(), t.diagonals()).to_string()
    } else {
        t.to_string()
    })
}

fn tree(item: &str, json: bool) -> anyhow::Result<String> {
    let t = parse_triangulation(item)?;
    let tree = to_binary_tree(&t);
    let order = post_order(&tree);
    if json {
        return Ok(json!({ "post_order": order, "nodes": tree.nodes() }).to_string());
    }
    let mut s = format!("post-order: {}\n", permutation_text(&order));
    s.push_str(&render_tree(&tree, &RenderOptions::default()));
    Ok(s)
}

fn check(
    item: &str,
    decent: bool,
    avoiding: bool,
    pattern: bool,
    json: bool,
) -> anyhow::Result<String> {
    let p = parse_permutation(item)?;
    let all = !(decent || avoiding || pattern);
    let witness = find_312(&p);
    let word = up_down_pattern(&p).to_string();
    if json {
        let mut value = json!({ "permutation": p });
        if all || avoiding {
            value["avoiding"] = json!(witness.is_none());
            if let Some(w) = &witness {
                value["witness"] =
                    json!({ "positions": w.positions.map(|i| i + 1), "values": w.values });
            }
        }
        if all || decent {
            value["decent"] = json!(is_decent(&p));
        }
        if all || pattern {
            value["pattern"] = json!(word);
        }
        return Ok(value.to_string());
    }
    let mut lines = Vec::new();
    if all || avoiding {
        lines.push(match &witness {
            None => "312-avoiding: yes".to_string(),
            Some(w) => format!("312-avoiding: no ({w})"),
        });
    }
    if all || decent {
        lines.push(format!(
            "decent: {}",
            if is_decent(&p) { "yes" } else { "no" }
        ));
    }
    if all || pattern {
        lines.push(format!("pattern: {word}"));
    }
    Ok(lines.join("\n"))
}

fn dissect(item: &str, json: bool) -> anyhow::Result<String> {
    let p = parse_permutation(item)?;
    let map = decent_to_dissection(&p)?;
    if json {
        let mut value = serde_json::to_value(&map)?;
        value["polygon"] = diagonals_json(map.dissection.n_vertices(), map.dissection.diagonals());
        return Ok(value.to_string());
    }
    let mut s = map.dissection.to_string();
    let runs = descending_runs(&p);
    for (i, (run, cell)) in runs.runs().iter().zip(&map.report.runs).enumerate() {
        let entries: Vec<String> = run.iter().map(u32::to_string).collect();
        let how = match cell.removed.kind {
            RemovalKind::Ear => "ear".to_string(),
            RemovalKind::Gap { identified: (a, b) } => format!("gap {a}~{b}"),
        };
        write!(
            s,
            "\nrun {}: {} -> cell {}, drops {} {} ({how})",
            i + 1,
            entries.join(" "),
            cell.cell,
            cell.removed.label,
            cell.removed.triangle
        )?;
    }
    Ok(s)
}

fn parse_highlights(items: &[String]) -> anyhow::Result<Vec<Vec<u32>>> {
    items
        .iter()
        .map(|h| {
            h.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u32>()
                        .with_context(|| format!("bad highlight {h:?}"))
                })
                .collect()
        })
        .collect()
}

/// Polygons render directly; a permutation is first built into its
/// triangulation.
fn render(item: &str, view: View, opts: &RenderOptions) -> anyhow::Result<String> {
    let polygon = if item.contains(';') || item.trim_start().starts_with('{') {
        parse_polygon(item)?
    } else {
        Polygon::Triangulation(build_triangulation(&parse_permutation(item)?)?)
    };
    let triangulation = |p: Polygon| -> anyhow::Result<Triangulation> {
        match p {
            Polygon::Triangulation(t) => Ok(t),
            Polygon::Dissection(d) => Ok(Triangulation::try_from(d)?),
        }
    };
    Ok(match view {
        View::Polygon => match &polygon {
            Polygon::Triangulation(t) => render_triangulation(t, opts),
            Polygon::Dissection(d) => render_dissection(d, opts),
        },
        View::Tree => render_tree(&to_binary_tree(&triangulation(polygon)?), opts),
        View::ClipSteps => {
            let t = triangulation(polygon)?;
            let (_, trace) = clip_sequence(&t)?;
            render_clip_steps(&t, &trace, opts)
        }
    })
}

fn enumerate(
    kind: Kind,
    size: u32,
    diagonals: Option<u32>,
    count_only: bool,
    bounds: Bounds,
    json: bool,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let mut count = 0u64;
    let mut emit = |line: String, out: &mut dyn Write| -> io::Result<()> {
        count += 1;
        if count_only {
            Ok(())
        } else {
            writeln!(out, "{line}")
        }
    };
    match kind {
        Kind::Triangulations => {
            for t in bounds.triangulations(size)? {
                let line = if json {
                    diagonals_json(t.n_vertices(), t.diagonals()).to_string()
                } else {
                    t.to_string()
                };
                emit(line, out)?;
            }
        }
        Kind::Avoiders | Kind::Decent => {
            let perms = if kind == Kind::Avoiders {
                bounds.avoiders(size)?
            } else {
                bounds.decent_avoiders(size)?
            };
            for p in perms {
                let line = if json {
                    serde_json::to_string(&p)?
                } else {
                    permutation_text(&p)
                };
                emit(line, out)?;
            }
        }
        Kind::Dissections => {
            let counts = match diagonals {
                Some(d) => d..=d,
                None => 0..=size.saturating_sub(3),
            };
            for d in counts {
                for x in bounds.dissections(size, d)? {
                    let line = if json {
                        diagonals_json(x.n_vertices(), x.diagonals()).to_string()
                    } else {
                        x.to_string()
                    };
                    emit(line, out)?;
                }
            }
        }
    }
    if count_only {
        if json {
            writeln!(out, "{}", json!({ "count": count }))?;
        } else {
            writeln!(out, "{count}")?;
        }
    }
    Ok(())
}

fn verify(
    suite: Suite,
    from: Option<u32>,
    to: Option<u32>,
    j: u32,
    bounds: Bounds,
    json: bool,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let (default_from, default_to, bound, what) = match suite {
        Suite::Clip | Suite::Tree => (3, 10, bounds.polygon, "polygon size"),
        Suite::Dissect => (2, 9, bounds.permutation, "permutation length"),
        Suite::Angulation => (1, 3, bounds.permutation, "permutation length"),
    };
    let from = from.unwrap_or(default_from);
    let to = to.unwrap_or(default_to);
    let largest = if suite == Suite::Angulation {
        (j + 1) * to
    } else {
        to
    };
    if largest > bound {
        return Err(clipseq_core::Error::BoundExceeded {
            what,
            value: largest,
            bound,
        }
        .into());
    }
    let mut failures = Vec::new();
    for size in from..=to {
        let report: VerificationReport = match suite {
            Suite::Clip => verify_clip_bijection(size),
            Suite::Tree => verify_postorder(size),
            Suite::Dissect => verify_dissection_bijection(size),
            Suite::Angulation => verify_angulations(j, size),
        };
        if json {
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
        } else {
            writeln!(out, "{report}")?;
        }
        failures.extend(
            report
                .failures
                .iter()
                .map(|f| format!("{}: {f}", report.scope)),
        );
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(VerificationFailed(failures).into())
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return 2;
    }
    match err.downcast_ref::<clipseq_core::Error>().map(|e| e.class()) {
        Some(ErrorClass::Internal) => 2,
        Some(ErrorClass::Bound) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let spec = CommandSpec::from_cli(cli);
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(spec, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Into::into)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
