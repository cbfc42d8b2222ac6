use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pentile::avc::{arrangements_of, display_greek, named_arrangement, named_avc, parse_avc, Arrangement, Avc};
use pentile::constructors::{
    boundary_word, earth_map, patches, platonic, pp, rotation_modification, simple_pentagonal_subdivisions,
    Chirality, SOLIDS,
};
use pentile::counting::{burnside_face_signs, count_beta_assignments, direct_orbit_count, opposite_edges};
use pentile::enumerator::{enumerate_quad_substrates, enumerate_tilings, verify_tiling, SearchConfig, SearchResult};
use pentile::export::{to_dot, to_svg};
use pentile::io::{load_tiling, save_tiling, PatchDocument, TilingDocument};
use pentile::label::Label;
use pentile::map::{canonical_code, MirrorPolicy, Tiling};
use pentile::transforms::{reduce_avc, reduce_tiling, split_tilings, LabelMap};

/// Corner-labeled pentagonal tilings of the sphere.
#[derive(Parser)]
#[command(name = "pentile", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named tiling and write it as a document.
    Construct(ConstructArgs),
    /// Find every tiling realizing an AVC.
    Enumerate(EnumerateArgs),
    /// Check a tiling against an AVC (exit 0 on pass, 1 on fail).
    Verify {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        avc: String,
    },
    /// Apply a label reduction to a tiling or an AVC.
    Reduce {
        #[arg(long)]
        map: String,
        #[arg(long, conflicts_with = "avc", required_unless_present = "avc")]
        tiling: Option<PathBuf>,
        #[arg(long)]
        avc: Option<String>,
        /// Where to write the reduced tiling; printed when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a tiling toward a finer AVC.
    Split {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        target_avc: String,
        /// Index into the target tile's arrangements, its letters, or a built-in name.
        #[arg(long)]
        arrangement: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit counts.
    Count(CountArgs),
    /// Quadrilateral maps with a given vertex degree census.
    Quads {
        #[arg(long)]
        faces: usize,
        /// Degree census as `DEG:COUNT,...`.
        #[arg(long)]
        census: String,
        #[arg(long)]
        forbid_adjacent_deg: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mirror::Unoriented)]
        mirror: Mirror,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical code of a tiling as lowercase hex.
    Canon {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long, value_enum, default_value_t = Mirror::Oriented)]
        mirror: Mirror,
    },
    /// Draw a tiling as SVG or Graphviz dot.
    Export {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long, required_unless_present = "dot")]
        svg: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mirror {
    Oriented,
    Unoriented,
}

impl From<Mirror> for MirrorPolicy {
    fn from(m: Mirror) -> Self {
        match m {
            Mirror::Oriented => MirrorPolicy::Oriented,
            Mirror::Unoriented => MirrorPolicy::Unoriented,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Platonic,
    Psub,
    Spsub,
    Earthmap,
    Rotmod,
    Patches,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    what: What,
    /// Solid name, or for spsub a quadrilateral tiling document.
    #[arg(long)]
    base: Option<String>,
    #[arg(long, default_value = "right")]
    chirality: Chirality,
    #[arg(long)]
    f: Option<usize>,
    #[arg(long, default_value_t = 1)]
    turns: usize,
    /// Output directory, or a `.json` file when there is one result.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EnumerateArgs {
    /// AVC text, a built-in name such as `2D36`, or `@FILE`.
    #[arg(long)]
    avc: String,
    /// Arrangement index, letters, a built-in name, or `all`.
    #[arg(long, default_value = "all")]
    arrangement: String,
    #[arg(long, value_enum, default_value_t = Mirror::Unoriented)]
    mirror: Mirror,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Stop after this many distinct classes.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CountTarget {
    /// Burnside count of ± face assignments.
    #[arg(long)]
    burnside: Option<String>,
    /// β placements on the edges opposite γ of a tiling document.
    #[arg(long)]
    beta: Option<PathBuf>,
    /// Direct orbit enumeration of ± face assignments.
    #[arg(long)]
    orbits: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    target: CountTarget,
    #[arg(long, value_enum, default_value_t = Mirror::Oriented)]
    mirror: Mirror,
    /// Upper bound on assignments listed by `--beta`.
    #[arg(long, default_value_t = 50_000_000)]
    max_raw: usize,
}

/// A failure with its exit code and a one-line reason.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "usage",
        message: message.into(),
    }
}

fn input(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        kind: "input",
        message: message.to_string(),
    }
}

fn internal(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        kind: "internal",
        message: message.to_string(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct(a) => construct(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Verify { tiling, avc } => {
            let t = load(&tiling)?;
            let avc = read_avc(&avc)?;
            let report = verify_tiling(&t, &avc, &[]);
            println!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Reduce { map, tiling, avc, out } => {
            let m: LabelMap = map.parse().map_err(input)?;
            if let Some(path) = tiling {
                let t = reduce_tiling(&load(&path)?, &m).map_err(input)?;
                let doc = TilingDocument::from_tiling(&t).with_meta("source", format!("reduce --map {map}"));
                emit(&doc, out.as_deref())?;
            } else if let Some(text) = avc {
                let r = reduce_avc(&read_avc(&text)?, &m).map_err(input)?;
                println!("{r}");
            }
            Ok(0)
        }
        Command::Split {
            tiling,
            map,
            target_avc,
            arrangement,
            out,
        } => {
            let t = load(&tiling)?;
            let m: LabelMap = map.parse().map_err(input)?;
            let avc = read_avc(&target_avc)?;
            let arr = pick_arrangements(&avc, &arrangement)?;
            let [arr] = arr.as_slice() else {
                return Err(usage("split needs a single arrangement"));
            };
            let found = split_tilings(&t, arr, &m, &avc).map_err(input)?;
            println!("{} splittings", found.len());
            if let Some(dir) = out {
                let docs: Vec<(String, TilingDocument)> = found
                    .iter()
                    .map(|s| named_doc(s, MirrorPolicy::Oriented, "split"))
                    .collect();
                write_docs(&dir, &docs)?;
            }
            Ok(0)
        }
        Command::Count(a) => count(a),
        Command::Quads {
            faces,
            census,
            forbid_adjacent_deg,
            mirror,
            jobs,
            out,
        } => {
            let census = parse_census(&census)?;
            let r = enumerate_quad_substrates(faces, &census, forbid_adjacent_deg, mirror.into(), jobs).map_err(input)?;
            println!("{} maps", r.len());
            if let Some(dir) = out {
                write_result(&dir, &r, "quads")?;
            }
            Ok(0)
        }
        Command::Canon { tiling, mirror } => {
            let t = load(&tiling)?;
            println!("{}", canonical_code(&t, mirror.into()).to_hex());
            Ok(0)
        }
        Command::Export { tiling, svg, dot } => {
            let t = load(&tiling)?;
            if let Some(p) = svg {
                write_file(&p, &to_svg(&t))?;
            }
            if let Some(p) = dot {
                write_file(&p, &to_dot(&t))?;
            }
            Ok(0)
        }
    }
}

fn load(path: &Path) -> Result<Tiling, Failure> {
    load_tiling(path).map_err(input)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(doc: &TilingDocument, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => save_tiling(p, doc).map_err(input),
        None => {
            println!("{}", doc.to_json());
            Ok(())
        }
    }
}

/// AVC text, a built-in name, or `@FILE`.
fn read_avc(spec: &str) -> Result<Avc, Failure> {
    let text = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?,
        None => spec.to_string(),
    };
    if let Some(a) = named_avc(text.trim()) {
        return Ok(a);
    }
    parse_avc(text.trim()).map_err(input)
}

fn pick_arrangements(avc: &Avc, spec: &str) -> Result<Vec<Arrangement>, Failure> {
    let all = arrangements_of(&avc.tile);
    if spec == "all" {
        return Ok(all);
    }
    if let Ok(i) = spec.parse::<usize>() {
        return all
            .get(i)
            .cloned()
            .map(|a| vec![a])
            .ok_or_else(|| usage(format!("arrangement index {i} out of range 0..{}", all.len())));
    }
    let a = named_arrangement(spec)
        .or_else(|| Arrangement::parse(spec))
        .ok_or_else(|| usage(format!("bad arrangement `{spec}`")))?;
    if a.multiset() != avc.tile_multiset() {
        return Err(usage(format!("arrangement {spec} does not match the tile")));
    }
    Ok(vec![a])
}

fn parse_census(spec: &str) -> Result<Vec<(usize, usize)>, Failure> {
    spec.split(',')
        .map(|part| {
            let (d, c) = part
                .split_once(':')
                .ok_or_else(|| usage(format!("census entry `{part}` is not DEG:COUNT")))?;
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| usage(format!("bad number `{s}`")));
            Ok((num(d)?, num(c)?))
        })
        .collect()
}

/// File name stem and document for one class.
fn named_doc(t: &Tiling, policy: MirrorPolicy, source: &str) -> (String, TilingDocument) {
    let hex = canonical_code(t, policy).to_hex();
    let stem = hex.chars().take(16).collect::<String>();
    let doc = TilingDocument::from_tiling(t)
        .with_meta("source", source)
        .with_meta("mirror", policy.name())
        .with_meta("code", hex);
    (stem, doc)
}

fn write_docs(dir: &Path, docs: &[(String, TilingDocument)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    let mut used = std::collections::BTreeSet::new();
    for (stem, doc) in docs {
        // Prefixes may collide; extend with a counter.
        let mut name = stem.clone();
        let mut k = 1;
        while !used.insert(name.clone()) {
            name = format!("{stem}-{k}");
            k += 1;
        }
        save_tiling(&dir.join(format!("{name}.json")), doc).map_err(input)?;
    }
    Ok(())
}

fn write_result(dir: &Path, r: &SearchResult, source: &str) -> Result<(), Failure> {
    let docs: Vec<(String, TilingDocument)> = r
        .tilings
        .values()
        .map(|t| named_doc(t, r.policy, source))
        .collect();
    write_docs(dir, &docs)?;
    let mut s = String::new();
    let _ = writeln!(s, "source: {source}");
    let _ = writeln!(s, "mirror: {}", r.policy.name());
    let _ = writeln!(s, "labeled: {}", r.len());
    let _ = writeln!(s, "unlabeled: {}", r.unlabeled_classes());
    let _ = writeln!(s, "exhaustive: {}", r.exhaustive);
    for (a, n) in &r.per_arrangement {
        let _ = writeln!(s, "arrangement {}: {n}", a.letters());
    }
    let _ = writeln!(s, "stats: {}", r.stats);
    write_file(&dir.join("summary.txt"), &s)?;
    if docs.len() != r.len() {
        return Err(internal("document count differs from class count"));
    }
    Ok(())
}

fn enumerate(a: EnumerateArgs) -> Outcome {
    let avc = read_avc(&a.avc)?;
    let arrangements = pick_arrangements(&avc, &a.arrangement)?;
    let mut cfg = SearchConfig::new(arrangements)
        .with_policy(a.mirror.into())
        .with_jobs(a.jobs.max(1));
    cfg.solution_cap = a.cap;
    let r = enumerate_tilings(&avc, &cfg).map_err(input)?;
    for t in r.tilings.values() {
        if !verify_tiling(t, &avc, &[]).passed() {
            return Err(internal("enumerated tiling fails verification"));
        }
    }
    write_result(&a.out, &r, &format!("enumerate {}", display_greek(&avc)))?;
    println!(
        "{} labeled / {} unlabeled ({}{})",
        r.len(),
        r.unlabeled_classes(),
        r.policy.name(),
        if r.exhaustive { "" } else { ", capped" }
    );
    Ok(0)
}

fn construct(a: ConstructArgs) -> Outcome {
    let solid = || a.base.clone().unwrap_or_else(|| "cube".to_string());
    let need_f = || a.f.ok_or_else(|| usage("--f is required"));
    let tilings: Vec<(String, Tiling)> = match a.what {
        What::Platonic => {
            let names: Vec<String> = match &a.base {
                Some(b) => vec![b.clone()],
                None => SOLIDS.iter().map(|s| s.to_string()).collect(),
            };
            names
                .into_iter()
                .map(|n| platonic(&n).map(|t| (n, t)))
                .collect::<Result<_, _>>()
                .map_err(input)?
        }
        What::Psub => {
            let n = solid();
            vec![(format!("pp-{n}"), pp(&n, a.chirality).map_err(input)?)]
        }
        What::Spsub => {
            let quads: Vec<Tiling> = match &a.base {
                Some(path) => vec![load(Path::new(path))?],
                None => enumerate_quad_substrates(18, &[(4, 12), (3, 8)], Some(3), MirrorPolicy::Oriented, 1)
                    .map_err(internal)?
                    .tilings
                    .into_values()
                    .collect(),
            };
            let mut out = Vec::new();
            for (qi, q) in quads.iter().enumerate() {
                for (si, s) in simple_pentagonal_subdivisions(q).map_err(input)?.into_iter().enumerate() {
                    out.push((format!("spsub-{qi}-{si}"), s));
                }
            }
            out
        }
        What::Earthmap => {
            let f = need_f()?;
            vec![(format!("earth-{f}"), earth_map(f).map_err(input)?)]
        }
        What::Rotmod => {
            let f = need_f()?;
            vec![(
                format!("rotmod-{f}-{}", a.turns),
                rotation_modification(f, a.turns).map_err(input)?,
            )]
        }
        What::Patches => {
            fs::create_dir_all(&a.out).map_err(|e| input(format!("{}: {e}", a.out.display())))?;
            for (i, p) in patches().iter().enumerate() {
                let doc = PatchDocument::from_piece(p, boundary_word(p));
                let text = serde_json::to_string_pretty(&doc).map_err(internal)?;
                write_file(&a.out.join(format!("patch-{}.json", i + 1)), &(text + "\n"))?;
            }
            println!("4 patches");
            return Ok(0);
        }
    };
    // A single result may go straight to a `.json` file.
    if let [(name, t)] = tilings.as_slice() {
        if a.out.extension().is_some_and(|e| e == "json") {
            let doc = TilingDocument::from_tiling(t).with_meta("source", format!("construct {name}"));
            save_tiling(&a.out, &doc).map_err(input)?;
            println!("1 tiling");
            return Ok(0);
        }
    }
    fs::create_dir_all(&a.out).map_err(|e| input(format!("{}: {e}", a.out.display())))?;
    for (name, t) in &tilings {
        let doc = TilingDocument::from_tiling(t).with_meta("source", format!("construct {name}"));
        save_tiling(&a.out.join(format!("{name}.json")), &doc).map_err(input)?;
    }
    println!("{} tilings", tilings.len());
    Ok(0)
}

fn count(a: CountArgs) -> Outcome {
    let t = a.target;
    if let Some(solid) = t.burnside {
        println!("{}", burnside_face_signs(&solid).map_err(input)?);
    } else if let Some(solid) = t.orbits {
        println!("{}", direct_orbit_count(&solid, |_| true).map_err(input)?);
    } else if let Some(path) = t.beta {
        let tiling = load(&path)?;
        let edges = opposite_edges(&tiling, Label::GAMMA);
        let c = count_beta_assignments(&tiling, &edges, a.mirror.into(), a.max_raw).map_err(input)?;
        println!(
            "{} classes ({} raw, {} symmetries, {})",
            c.classes,
            c.raw,
            c.group_order,
            c.policy.name()
        );
    }
    Ok(0)
}
