use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use flagtope::flags::{self, FlagFamily, LineArrangement};
use flagtope::lgv::{self, PathGraph, WeightMode};
use flagtope::matroid::{self, GroundSet, LatticePoint, PointSet, DEFAULT_ORACLE_BUDGET};
use flagtope::product::{self, SurveyMode, TreeCollection, WeightMatrix, DEFAULT_TREE_BUDGET};
use flagtope::schubert::{self, Permutation};
use flagtope::tiling::{self, Drawable, HoleyTriangle, RenderFormat, RhombusTiling};
use flagtope::Error;

#[derive(Parser)]
#[command(name = "flagtope", version, about = "Matroids of flag arrangements, rhombus tilings and triangulations of products of simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Independence queries in T(n,d).
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Rhombus tilings of holey triangles.
    #[command(subcommand)]
    Tile(TileCmd),
    /// Path-vector representations of T(n,3).
    #[command(subcommand)]
    Represent(RepresentCmd),
    /// Generic flag arrangements and their lines.
    #[command(subcommand)]
    Flags(FlagsCmd),
    /// Triangulations of a product of two simplices as spanning trees.
    #[command(subcommand)]
    Triangulate(TriangulateCmd),
    /// Rank arrays and vanishing criteria for Schubert structure constants.
    #[command(subcommand)]
    Schubert(SchubertCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Args)]
struct PointsArgs {
    /// Point set as a file path or inline JSON; bare point lists take --n and --d.
    #[arg(long)]
    points: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand)]
enum MatroidCmd {
    /// Exit 1 when dependent.
    Independent(PointsArgs),
    Rank(PointsArgs),
    Bases {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// The canonical overfull sub-simplex; exit 1 when there is none.
    Violation(PointsArgs),
}

#[derive(Args)]
struct HolesArgs {
    #[arg(long)]
    n: usize,
    /// Holes as a file path or inline JSON list of points.
    #[arg(long)]
    holes: String,
}

#[derive(Args)]
struct DrawArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Destination for SVG output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TileCmd {
    /// Exit 1 when not tileable.
    Check(HolesArgs),
    /// Tiling by bipartite matching; exit 1 when not tileable.
    Solve {
        #[command(flatten)]
        holes: HolesArgs,
        #[command(flatten)]
        draw: DrawArgs,
    },
    /// Tiling by sliding holes; exit 1 with the overfull simplex when not a basis.
    Slide {
        #[command(flatten)]
        holes: HolesArgs,
        #[command(flatten)]
        draw: DrawArgs,
    },
    /// Draws a tiling, or a holey triangle given --n and --holes.
    Render {
        #[arg(long, conflicts_with_all = ["n", "holes"])]
        tiling: Option<String>,
        #[arg(long, requires = "holes")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        holes: Option<String>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RepresentCmd {
    /// Path-vector matrix with random integer weights, or symbolic with --symbolic.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "symbolic")]
        seed: Option<u64>,
        #[arg(long)]
        symbolic: bool,
    },
    /// Independence by determinants of path vectors; exit 1 when dependent.
    Independent {
        #[command(flatten)]
        points: PointsArgs,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FlagsCmd {
    Random {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        seed: u64,
    },
    /// Whether the lines of the flags realize T(n,d); exit 1 otherwise.
    Check {
        #[arg(long)]
        flags: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
    },
    /// Rebuilds flags from a line arrangement, or from the lines of --flags.
    Reconstruct {
        #[arg(long, conflicts_with = "flags", required_unless_present = "flags")]
        lines: Option<String>,
        #[arg(long)]
        flags: Option<String>,
    },
    /// Lines of a random hyperplane arrangement against H(n,m); exit 1 on mismatch.
    Hyperplanes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SurveyModeArg {
    RandomSeeds,
    ExhaustiveWeightsGrid,
    TreeSearch,
}

#[derive(Subcommand)]
enum TriangulateCmd {
    /// Checks the three tree conditions; exit 1 when they fail.
    Verify {
        #[arg(long)]
        trees: String,
    },
    /// Regular triangulation from --weights or from seeded random weights.
    Regular {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
        weights: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pure trees, their locations and the derived colouring.
    Pure {
        #[arg(long)]
        trees: String,
    },
    /// Which bases of T(n,d) arise as pure locations; always exit 0.
    Survey {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value = "random-seeds")]
        mode: SurveyModeArg,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Required for random-seeds.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        parallel: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SchubertCmd {
    RankArray {
        /// One-line notation, e.g. 53124.
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verdict in the payload; always exit 0.
    Vanishing {
        /// Floors as JSON or text boards, by path or inline.
        #[arg(long)]
        floors: String,
        /// Permutations whose lengths are checked against binomial(n,2).
        #[arg(long, num_args = 1..)]
        perms: Vec<String>,
    },
    Parse {
        #[arg(long)]
        floors: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

struct Outcome {
    stdout: String,
    code: u8,
}

struct Failure {
    message: String,
    kind: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 };
        Failure { message: e.to_string(), kind: e.kind().to_string(), code }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), kind: "usage".into(), code: 2 }
}

type Run = std::result::Result<Outcome, Failure>;

fn ok<T: Serialize>(value: &T) -> Run {
    verdict(value, true)
}

fn verdict<T: Serialize>(value: &T, positive: bool) -> Run {
    Ok(Outcome { stdout: serde_json::to_string(value)? + "\n", code: if positive { 0 } else { 1 } })
}

fn text(s: String, positive: bool) -> Run {
    Ok(Outcome { stdout: s, code: if positive { 0 } else { 1 } })
}

/// Inline when the value starts with `[` or `{`, otherwise a path.
fn load(arg: &str) -> std::result::Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure {
        message: format!("cannot read {arg}: {e}"),
        kind: "io".into(),
        code: 2,
    })
}

fn load_points(args: &PointsArgs) -> std::result::Result<PointSet, Failure> {
    let raw = load(&args.points)?;
    let value: serde_json::Value = serde_json::from_str(&raw)?;
    let set = if value.is_array() {
        let (Some(n), Some(d)) = (args.n, args.d) else {
            return Err(usage("a bare point list needs --n and --d"));
        };
        PointSet::new(n, d, serde_json::from_value(value)?)
    } else {
        let set: PointSet = serde_json::from_value(value)?;
        if args.n.is_some_and(|n| n != set.n) || args.d.is_some_and(|d| d != set.d) {
            return Err(usage("--n/--d disagree with the point set"));
        }
        set
    };
    Ok(set)
}

fn load_holes(args: &HolesArgs) -> std::result::Result<HoleyTriangle, Failure> {
    let raw = load(&args.holes)?;
    let value: serde_json::Value = serde_json::from_str(&raw)?;
    let holes: Vec<LatticePoint> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        let set: PointSet = serde_json::from_value(value)?;
        if set.n != args.n || set.d != 3 {
            return Err(usage("--n disagrees with the hole set"));
        }
        set.points
    };
    Ok(HoleyTriangle::new(args.n, holes))
}

fn draw(obj: Drawable<'_>, json: &impl Serialize, draw: &DrawArgs) -> Run {
    match draw.format {
        Format::Json => ok(json),
        Format::Ascii => text(tiling::render(obj, RenderFormat::Ascii)?, true),
        Format::Svg => emit_svg(tiling::render(obj, RenderFormat::Svg)?, draw.out.as_deref()),
    }
}

fn emit_svg(svg: String, out: Option<&Path>) -> Run {
    match out {
        Some(path) => {
            std::fs::write(path, svg).map_err(|e| Failure {
                message: format!("cannot write {}: {e}", path.display()),
                kind: "io".into(),
                code: 2,
            })?;
            ok(&json!({ "written": path.display().to_string() }))
        }
        None => text(svg, true),
    }
}

fn matroid_cmd(cmd: MatroidCmd) -> Run {
    match cmd {
        MatroidCmd::Independent(args) => {
            let set = load_points(&args)?;
            let ground = GroundSet::new(set.n, set.d)?;
            let witness = matroid::find_violation(&ground, &set)?;
            let independent = witness.is_none();
            let word = if independent { "independent" } else { "dependent" };
            verdict(&json!({ "verdict": word, "witness": witness }), independent)
        }
        MatroidCmd::Rank(args) => {
            let set = load_points(&args)?;
            let ground = GroundSet::new(set.n, set.d)?;
            ok(&json!({ "rank": matroid::rank(&ground, &set)? }))
        }
        MatroidCmd::Bases { shape, budget, parallel } => {
            let ground = GroundSet::new(shape.n, shape.d)?;
            let bases: Vec<PointSet> = match parallel {
                Some(threads) => ground
                    .bases_parallel(budget, threads)?
                    .iter()
                    .map(|b| ground.point_set(b))
                    .collect(),
                None => matroid::enumerate_bases(&ground, budget)?,
            };
            let points: Vec<&Vec<LatticePoint>> = bases.iter().map(|b| &b.points).collect();
            ok(&json!({ "n": shape.n, "d": shape.d, "count": bases.len(), "bases": points }))
        }
        MatroidCmd::Violation(args) => {
            let set = load_points(&args)?;
            let ground = GroundSet::new(set.n, set.d)?;
            let witness = matroid::find_violation(&ground, &set)?;
            let found = witness.is_some();
            verdict(&json!({ "violation": witness }), found)
        }
    }
}

fn tile_cmd(cmd: TileCmd) -> Run {
    match cmd {
        TileCmd::Check(args) => {
            let h = load_holes(&args)?;
            let t = tiling::is_tileable(&h)?;
            verdict(&json!({ "tileable": t }), t)
        }
        TileCmd::Solve { holes, draw: d } => {
            let h = load_holes(&holes)?;
            match tiling::find_tiling(&h)? {
                Some(t) => draw(Drawable::Tiling(&t), &t, &d),
                None => {
                    let ground = GroundSet::new(h.n, 3)?;
                    let witness = matroid::find_violation(&ground, &h.point_set())?;
                    verdict(&json!({ "tileable": false, "witness": witness }), false)
                }
            }
        }
        TileCmd::Slide { holes, draw: d } => {
            let h = load_holes(&holes)?;
            match tiling::find_tiling_by_sliding(&h) {
                Ok(t) => draw(Drawable::Tiling(&t), &t, &d),
                Err(Error::NotBasis { witness }) => {
                    verdict(&json!({ "tileable": false, "witness": witness }), false)
                }
                Err(e) => Err(e.into()),
            }
        }
        TileCmd::Render { tiling: t, n, holes, format, out } => {
            let d = DrawArgs { format, out };
            if let Some(t) = t {
                let t: RhombusTiling = serde_json::from_str(&load(&t)?)?;
                t.validate()?;
                draw(Drawable::Tiling(&t), &t, &d)
            } else if let (Some(n), Some(holes)) = (n, holes) {
                let h = load_holes(&HolesArgs { n, holes })?;
                draw(Drawable::Holes(&h), &h, &d)
            } else {
                Err(usage("render needs --tiling or --n with --holes"))
            }
        }
    }
}

fn represent_cmd(cmd: RepresentCmd) -> Run {
    match cmd {
        RepresentCmd::Matrix { n, seed, symbolic } => {
            if symbolic {
                if n > lgv::SYMBOLIC_LIMIT {
                    return Err(Error::SymbolicTooLarge { n, limit: lgv::SYMBOLIC_LIMIT }.into());
                }
                let g = PathGraph::build(n, &WeightMode::Symbolic)?;
                let columns: Vec<_> =
                    g.symbolic_matrix().into_iter().map(|(p, v)| json!({ "point": p, "vector": v })).collect();
                ok(&json!({ "n": n, "mode": "symbolic", "columns": columns }))
            } else {
                let seed = seed.ok_or_else(|| usage("--seed is required"))?;
                let g = PathGraph::build(n, &WeightMode::Random { seed })?;
                let (points, matrix) = g.matrix()?;
                ok(&json!({ "n": n, "mode": "random", "seed": seed, "points": points, "matrix": matrix }))
            }
        }
        RepresentCmd::Independent { points, seed } => {
            let set = load_points(&points)?;
            let independent = lgv::lgv_independent_checked(set.n, &set, lgv::seed_triple(seed))?;
            let g = PathGraph::build(set.n, &WeightMode::Random { seed })?;
            let routing = g.routing_exists(&set)?;
            let word = if independent { "independent" } else { "dependent" };
            verdict(&json!({ "verdict": word, "routing": routing }), independent)
        }
    }
}

fn flags_cmd(cmd: FlagsCmd) -> Run {
    match cmd {
        FlagsCmd::Random { shape, seed } => ok(&flags::random_flag_family(shape.n, shape.d, seed)?),
        FlagsCmd::Check { flags: f, budget } => {
            let family: FlagFamily = serde_json::from_str(&load(&f)?)?;
            match flags::line_arrangement(&family) {
                Ok(arr) => {
                    let cmp = flags::matroid_equals_tnd(&arr, budget)?;
                    let equal = cmp.equal;
                    verdict(&json!({ "generic": equal, "comparison": cmp }), equal)
                }
                Err(e @ Error::NonGenericFamily { .. }) => {
                    verdict(&json!({ "generic": false, "reason": e.to_string() }), false)
                }
                Err(e) => Err(e.into()),
            }
        }
        FlagsCmd::Reconstruct { lines, flags: f } => {
            if let Some(l) = lines {
                let arr: LineArrangement = serde_json::from_str(&load(&l)?)?;
                ok(&json!({ "flags": flags::flags_from_arrangement(&arr)? }))
            } else {
                let f = f.ok_or_else(|| usage("reconstruct needs --lines or --flags"))?;
                let family: FlagFamily = serde_json::from_str(&load(&f)?)?;
                let arr = flags::line_arrangement(&family)?;
                let rebuilt = flags::flags_from_arrangement(&arr)?;
                let same = flags::line_arrangement(&rebuilt)?.same_lines(&arr);
                verdict(&json!({ "flags": rebuilt, "lines": arr, "round_trip": same }), same)
            }
        }
        FlagsCmd::Hyperplanes { n, m, seed } => {
            let h = flags::hyperplane_lines(n, m, seed)?;
            let normals: Vec<Vec<String>> =
                h.normals.iter().map(|r| r.iter().map(flagtope::linalg::format_rational).collect()).collect();
            let equal = h.comparison.equal;
            verdict(&json!({ "n": n, "m": m, "seed": seed, "normals": normals, "comparison": h.comparison }), equal)
        }
    }
}

fn load_trees(arg: &str) -> std::result::Result<TreeCollection, Failure> {
    Ok(serde_json::from_str(&load(arg)?)?)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> std::result::Result<T, Failure> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| usage(format!("cannot start {k} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn triangulate_cmd(cmd: TriangulateCmd) -> Run {
    match cmd {
        TriangulateCmd::Verify { trees } => {
            let c = load_trees(&trees)?;
            let v = product::verify_triangulation(&c)?;
            let valid = v.valid;
            verdict(&v, valid)
        }
        TriangulateCmd::Regular { shape, weights, seed } => {
            let (w, tri) = match (weights, seed) {
                (Some(w), _) => {
                    let w: WeightMatrix = serde_json::from_str(&load(&w)?)?;
                    let tri = product::regular_triangulation(shape.n, shape.d, &w)?;
                    (w, tri)
                }
                (None, Some(seed)) => product::random_regular_triangulation(shape.n, shape.d, seed)?,
                (None, None) => return Err(usage("regular needs --weights or --seed")),
            };
            let cells: Vec<String> = tri.iter().map(|t| t.cayley_cell().render()).collect();
            let collection = TreeCollection::from_trees(shape.n, shape.d, &tri);
            ok(&json!({ "weights": w, "triangulation": collection, "cells": cells }))
        }
        TriangulateCmd::Pure { trees } => {
            let c = load_trees(&trees)?;
            let parsed = c.parse()?;
            let pure = product::pure_trees(&parsed)?;
            let check = product::locations_form_basis(&parsed)?;
            let coloring = product::derived_coloring(&parsed)?;
            let poset = product::check_poset_coloring(&coloring);
            ok(&json!({
                "pure": pure,
                "locations": check.locations,
                "is_basis": check.is_basis,
                "coloring": coloring,
                "poset": poset,
            }))
        }
        TriangulateCmd::Survey { shape, mode, samples, seed, parallel } => {
            let mode = match mode {
                SurveyModeArg::RandomSeeds => SurveyMode::RandomSeeds,
                SurveyModeArg::ExhaustiveWeightsGrid => SurveyMode::ExhaustiveWeightsGrid,
                SurveyModeArg::TreeSearch => SurveyMode::TreeSearch,
            };
            if mode == SurveyMode::RandomSeeds && seed.is_none() {
                return Err(usage("random-seeds surveys need --seed"));
            }
            let budget = if mode == SurveyMode::TreeSearch { samples.max(DEFAULT_TREE_BUDGET) } else { samples };
            let report = with_threads(parallel, move || {
                product::survey_conjecture(shape.n, shape.d, mode, budget, seed.unwrap_or(0))
            })??;
            report.validate()?;
            ok(&report)
        }
    }
}

fn load_floors(arg: &str) -> std::result::Result<schubert::Floors, Failure> {
    let raw = if Path::new(arg).exists() { load(arg)? } else { arg.to_string() };
    Ok(schubert::parse_floor_boards(&raw)?)
}

fn schubert_cmd(cmd: SchubertCmd) -> Run {
    match cmd {
        SchubertCmd::RankArray { w, format } => {
            let w = Permutation::parse(&w)?;
            let r = schubert::rank_array(&w);
            match format {
                Format::Json => ok(&r),
                Format::Ascii => text(r.to_string(), true),
                Format::Svg => Err(usage("rank arrays render as json or ascii")),
            }
        }
        SchubertCmd::Vanishing { floors, perms } => {
            let f = load_floors(&floors)?;
            if !perms.is_empty() {
                let ws = perms.iter().map(|p| Permutation::parse(p)).collect::<flagtope::Result<Vec<_>>>()?;
                if ws.iter().any(|w| w.n() != f.n) {
                    return Err(usage("permutations and floors have different n"));
                }
                if !schubert::problem_dimension_ok(&ws)? {
                    return Err(usage("permutation lengths do not sum to binomial(n,2)"));
                }
            }
            ok(&schubert::vanishing_check(&f)?)
        }
        SchubertCmd::Parse { floors, format } => {
            let f = load_floors(&floors)?;
            match format {
                Format::Json => ok(&f),
                Format::Ascii => text(f.to_boards()?, true),
                Format::Svg => Err(usage("floors render as json or ascii")),
            }
        }
    }
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Matroid(c) => matroid_cmd(c),
        Command::Tile(c) => tile_cmd(c),
        Command::Represent(c) => represent_cmd(c),
        Command::Flags(c) => flags_cmd(c),
        Command::Triangulate(c) => triangulate_cmd(c),
        Command::Schubert(c) => schubert_cmd(c),
    }
}

fn report(f: &Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": f.message, "kind": f.kind }));
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let message: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(|l| l.trim().trim_start_matches("error: "))
                .filter(|l| !l.is_empty())
                .collect();
            return report(&usage(message.join(" ")));
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(f) => report(&f),
    }
}
