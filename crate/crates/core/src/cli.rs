//! The `conelab` command line.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 3 when an
//! internal invariant check fails.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog;
use crate::cone::{self, WalkOrder};
use crate::cusps::{cusp_orbits, CuspBounds};
use crate::enumeration::{check_box, nef_certificate, separating_walls, vectors_of_square};
use crate::error::{Error, Result};
use crate::isotropic::{enumerate_isotropic_lines, find_isotropic};
use crate::json;
use crate::lattice::{LatVec, Lattice};
use crate::render::{render_disk, render_svg, Scene};

#[derive(Debug, Parser)]
#[command(name = "conelab", version, about = "Walls, chambers, nef walks and cusps of hyperbolic lattices")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LatticeArg {
    /// Lattice description file (JSON) or catalog name.
    #[arg(long)]
    lattice: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bilinear form pair(x, y).
    Pair {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: LatVec,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        y: LatVec,
    },
    /// Quadratic form q(x).
    Quad {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: LatVec,
    },
    /// Exact inertia of the Gram matrix.
    Signature {
        #[command(flatten)]
        lattice: LatticeArg,
    },
    /// Primitive vectors of a given negative square in a box.
    Walls {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, default_value = "-2")]
        square: BigInt,
        #[arg(long)]
        bound: i64,
    },
    /// Walls separating x from h, with the nef certificate.
    Separating {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: LatVec,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        h: LatVec,
        /// Also report walls through x.
        #[arg(long)]
        non_strict: bool,
    },
    /// Isotropic vectors: first in scan order, all lines, or a randomized
    /// existence check on diagonal signature (1,4) lattices.
    Isotropic {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        /// List one representative per isotropic line in the box.
        #[arg(long)]
        all: bool,
        /// Sample this many random lattices diag(a, -b1, .., -b4), entries in 1..=9.
        #[arg(long)]
        meyer_check: Option<usize>,
    },
    /// Cusp orbits of isotropic lines under wall reflections.
    Cusps {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 2)]
        iso_bound: i64,
        #[arg(long, default_value_t = 1)]
        wall_bound: i64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Reflect an isotropic class until it is nef against h.
    NefWalk {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: LatVec,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        h: LatVec,
        /// Use the first separating wall instead of the greedy choice.
        #[arg(long)]
        first_found: bool,
    },
    /// Chamber graph around an interior base class.
    Chambers {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Base class; defaults to the first interior positive class in scan order.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        h: Option<LatVec>,
        #[arg(long)]
        radius: f64,
    },
    /// Poincaré disk picture of a rank-3 lattice.
    Render {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        wall: Vec<LatVec>,
        /// Labelled positive class, `label=1,2,3`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_labelled)]
        point: Vec<(String, LatVec)>,
        /// Labelled isotropic class, `label=1,0,0`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_labelled)]
        cusp: Vec<(String, LatVec)>,
        /// Draw the nef walk of this isotropic class (needs --trace-h).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, requires = "trace_h")]
        trace_x: Option<LatVec>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, requires = "trace_x")]
        trace_h: Option<LatVec>,
        #[arg(long, default_value_t = 240.0)]
        view: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List catalog lattices, or print one as a description file.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
}

/// Comma-separated integers without whitespace.
pub fn parse_vector(s: &str) -> std::result::Result<LatVec, String> {
    if s.is_empty() {
        return Err("empty vector".into());
    }
    s.split(',')
        .map(|c| {
            c.parse::<BigInt>()
                .map_err(|_| format!("{c:?} is not an integer"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(LatVec::new)
}

fn parse_labelled(s: &str) -> std::result::Result<(String, LatVec), String> {
    let (label, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected label=vector, got {s:?}"))?;
    Ok((label.to_string(), parse_vector(v)?))
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Resolves `--lattice`: an existing file is parsed as a description,
/// anything else is looked up in the catalog.
pub fn resolve_lattice(arg: &str) -> Result<Lattice> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        json::load_lattice(&text)
    } else {
        catalog::get_lattice(arg)
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn emit(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("values serialize");
    s.push('\n');
    s
}

fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Pair { lattice, x, y } => {
            let l = resolve_lattice(&lattice.lattice)?;
            Ok(emit(json!({"pair": json::int(&l.pair(&x, &y)?)})))
        }
        Command::Quad { lattice, x } => {
            let l = resolve_lattice(&lattice.lattice)?;
            Ok(emit(json!({"quad": json::int(&l.quad(&x)?)})))
        }
        Command::Signature { lattice } => {
            let l = resolve_lattice(&lattice.lattice)?;
            Ok(emit(json::signature(l.signature())))
        }
        Command::Walls { lattice, square, bound } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let vs = vectors_of_square(&l, &square, bound)?;
            Ok(emit(json!({
                "square": json::int(&square),
                "bound": bound,
                "vectors": json::vecs(&vs),
            })))
        }
        Command::Separating { lattice, x, h, non_strict } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let walls = separating_walls(&l, &x, &h, !non_strict)?;
            let cert = nef_certificate(&l, &x, &h)?;
            Ok(emit(json!({
                "strict": !non_strict,
                "walls": json::vecs(walls.iter().map(|w| w.vector())),
                "nef": cert.nef,
                "witness": cert.witness.map(|w| json::vec(w.vector())),
            })))
        }
        Command::Isotropic { lattice, bound, all, meyer_check } => {
            if let Some(count) = meyer_check {
                return Ok(emit(meyer_check_report(count, bound, cli.seed)?));
            }
            let arg = lattice.ok_or_else(|| Error::InvalidArgument("--lattice is required".into()))?;
            let l = resolve_lattice(&arg)?;
            if bound < 1 {
                return Err(Error::InvalidArgument(format!("bound {bound} must be >= 1")));
            }
            check_box(l.rank(), bound)?;
            let first = find_isotropic(&l, bound);
            let mut out = json!({
                "bound": bound,
                "first": first.as_ref().map(json::vec),
            });
            if all {
                out["lines"] = json::vecs(&enumerate_isotropic_lines(&l, bound));
            }
            Ok(emit(out))
        }
        Command::Cusps { lattice, iso_bound, wall_bound, depth } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let report = cusp_orbits(
                &l,
                CuspBounds {
                    iso_bound,
                    wall_bound,
                    bfs_depth: depth,
                },
            )?;
            for o in &report.orbits {
                o.verify(&l)?;
            }
            Ok(emit(json::cusp_report(&report)))
        }
        Command::NefWalk { lattice, x, h, first_found } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let order = if first_found { WalkOrder::FirstFound } else { WalkOrder::Greedy };
            let trace = cone::nef_walk(&l, &x, &h, order)?;
            trace.verify(&l)?;
            if !nef_certificate(&l, &trace.final_class, &h)?.nef {
                return Err(Error::InvariantBreach("walk ended at a non-nef class".into()));
            }
            Ok(emit(json::walk_trace(&trace)))
        }
        Command::Chambers { lattice, h, radius } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let h = match h {
                Some(h) => h,
                None => cone::find_interior_class(&l, 5)?.ok_or_else(|| {
                    Error::InvalidArgument("no interior class with sup-norm <= 5; pass --h".into())
                })?,
            };
            let g = cone::chamber_graph(&l, &h, radius)?;
            Ok(emit(json::chamber_graph(&g)))
        }
        Command::Render { lattice, wall, point, cusp, trace_x, trace_h, view, out } => {
            let l = resolve_lattice(&lattice.lattice)?;
            let mut scene = Scene::new(l, view)?;
            for w in wall {
                scene.add_wall(w)?;
            }
            for (label, v) in point {
                scene.add_point(label, v)?;
            }
            for (label, v) in cusp {
                scene.add_cusp(label, v)?;
            }
            if let (Some(x), Some(h)) = (trace_x, trace_h) {
                let trace = cone::nef_walk(scene.lattice(), &x, &h, WalkOrder::Greedy)?;
                scene.set_trace(trace)?;
            }
            match out {
                Some(path) => {
                    render_disk(&scene, &path)?;
                    Ok(String::new())
                }
                None => Ok(render_svg(&scene)),
            }
        }
        Command::Catalog { name } => match name {
            Some(n) => Ok(emit(json::lattice(&catalog::get_lattice(&n)?))),
            None => Ok(emit(json!({"lattices": catalog::names()}))),
        },
    }
}

/// Random diagonal lattices `diag(a, -b1, -b2, -b3, -b4)` with entries in
/// `1..=9`, each searched for an isotropic vector up to `bound`.
pub fn meyer_check_report(count: usize, bound: i64, seed: u64) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut largest = 0i64;
    for _ in 0..count {
        let mut diag = vec![rng.gen_range(1..=9i64)];
        diag.extend((0..4).map(|_| -rng.gen_range(1..=9i64)));
        let l = Lattice::diagonal("meyer", &diag)?;
        match find_isotropic(&l, bound) {
            Some(v) => {
                let s: i64 = v.sup_norm().try_into().unwrap_or(i64::MAX);
                largest = largest.max(s);
            }
            None => failures.push(json!(diag)),
        }
    }
    Ok(json!({
        "seed": seed,
        "checked": count,
        "bound": bound,
        "largest_sup_norm": largest,
        "failures": failures,
    }))
}
