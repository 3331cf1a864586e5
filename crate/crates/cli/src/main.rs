mod cache;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use icq::checks::{run_suite, Suite};
use icq::classical;
use icq::exactalg::{format_rational, QMatrix};
use icq::homspace::hom_basis;
use icq::icmod::{document_system, euler_characteristic, from_document, to_document, total_cohomology, Duality};
use icq::kl::{format_poly, KlTable};
use icq::pipeline::Pipeline;
use icq::quiver::{to_dot, to_json, to_text, Numbering};
use icq::rootsystem::{CartanType, Elem, WeylGroup};
use icq::schubert::{CohClass, CohRing};
use icq::soergel::BuildMode;

use cache::Cache;

#[derive(Parser)]
#[command(
    name = "icq",
    version,
    about = "Quivers with relations for principal blocks of category O"
)]
struct Cli {
    /// Cache directory [default: $XDG_CACHE_HOME/icq or ~/.cache/icq]
    #[arg(long, global = true, env = "ICQ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Recompute everything; neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// How the modules V_w are constructed.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Shortcut)]
    mode: Mode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Shortcut,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Elements of the Weyl group by length.
    Weyl {
        #[arg(long = "type")]
        ty: String,
    },
    /// Products with the generators and the invariant subalgebras.
    Cohomology {
        #[arg(long = "type")]
        ty: String,
        /// Print the full multiplication table.
        #[arg(long)]
        table: bool,
    },
    /// Graded dimensions of the modules V_w.
    Ih {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        element: Option<String>,
        /// Write the module (degrees, action matrices) as JSON; needs --element.
        #[arg(long, requires = "element")]
        dump: Option<PathBuf>,
    },
    /// A basis of graded homomorphisms V_from → V_to.
    Hom {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_negative_numbers = true)]
        degree: i32,
    },
    /// Kazhdan–Lusztig polynomial P_{from,to} and μ.
    Kl {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The quiver with relations.
    Quiver {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Classical vertex numbering and arrow normalization (A2 only).
        #[arg(long)]
        appendix_numbering: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant battery.
    Check {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Operations on IC-module documents.
    Icmod {
        #[command(subcommand)]
        op: IcmodOp,
    },
}

#[derive(Subcommand)]
enum IcmodOp {
    /// Exit status 1 unless the differential squares to zero.
    Validate { file: PathBuf },
    /// Cohomology of the total complex.
    Cohomology { file: PathBuf },
    /// Verdier dual.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Ctx {
    cache: Cache,
    mode: BuildMode,
}

impl Ctx {
    fn pipeline(&self, ct: CartanType) -> Result<Pipeline> {
        let (ring, family) = self.cache.load(ct, self.mode)?;
        Ok(Pipeline::from_parts(ring, family))
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    let xdg = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty());
    xdg.map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("icq"))
}

fn parse_type(s: &str) -> Result<CartanType> {
    Ok(s.parse()?)
}

fn parse_elem(g: &WeylGroup, s: &str) -> Result<Elem> {
    Ok(g.parse(s)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn matrix_text(m: &QMatrix) -> String {
    let mut s = String::new();
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(s, "  [{}]", cells.join(" "));
    }
    s
}

fn weyl(ty: &str) -> Result<String> {
    let g = WeylGroup::of_type(parse_type(ty)?)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: order {}, {} positive roots, longest element {}",
        g.root_system().cartan_type(),
        g.len(),
        g.root_system().positive_roots().len(),
        g.name(g.longest())
    );
    for l in 0..=g.max_length() {
        let names: Vec<String> = g.elements().filter(|&w| g.length(w) == l).map(|w| g.name(w)).collect();
        let _ = writeln!(s, "length {l}: {}", names.join(" "));
    }
    Ok(s)
}

fn cohomology(ctx: &Ctx, ty: &str, table: bool) -> Result<String> {
    let (ring, _) = ctx.cache.load(parse_type(ty)?, ctx.mode)?;
    let g = ring.group();
    let gens = g.generators();
    let mut s = String::new();
    let class = |w: Elem| CohClass::schubert(w).display(g);
    let cols: Vec<Elem> = if table { g.elements().collect() } else { gens.clone() };
    let header: Vec<String> = cols.iter().map(|&v| class(v)).collect();
    let _ = writeln!(s, "·\t{}", header.join("\t"));
    for u in g.elements() {
        let row: Vec<String> = cols.iter().map(|&v| ring.product(u, v).display(g)).collect();
        let _ = writeln!(s, "{}\t{}", class(u), row.join("\t"));
    }
    for i in 0..gens.len() {
        let basis: Vec<String> = ring.invariant_basis(i).iter().map(|&w| class(w)).collect();
        let _ = writeln!(s, "C^s{} = span{{{}}}", i + 1, basis.join(", "));
    }
    Ok(s)
}

fn ih(ctx: &Ctx, ty: &str, element: Option<&str>, dump: Option<&Path>) -> Result<String> {
    let ct = parse_type(ty)?;
    let (ring, family) = ctx.cache.load(ct, ctx.mode)?;
    let g = ring.group();
    let dims = |w: Elem| {
        let d: Vec<String> = family.module(w).graded_dims().values().map(usize::to_string).collect();
        d.join(" ")
    };
    let Some(name) = element else {
        let mut s = String::new();
        for w in g.elements() {
            let _ = writeln!(s, "{}: {}", g.name(w), dims(w));
        }
        return Ok(s);
    };
    let w = parse_elem(g, name)?;
    if let Some(path) = dump {
        let doc = module_document(&ring, &family, w);
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(format!("{}\n", dims(w)))
}

fn module_document(ring: &CohRing, family: &icq::soergel::ModuleFamily, w: Elem) -> Value {
    let g = ring.group();
    let m = family.module(w);
    let ct = g.root_system().cartan_type();
    let rows = |a: &QMatrix| -> Vec<Vec<String>> {
        a.to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    };
    let actions: serde_json::Map<String, Value> = g.elements().map(|v| (g.name(v), json!(rows(m.action(v))))).collect();
    let mult: serde_json::Map<String, Value> = family
        .multiplicities(w)
        .iter()
        .map(|&(y, n)| (g.name(y), json!(n)))
        .collect();
    json!({
        "system": {"type": ct.to_string(), "rank": ct.rank},
        "element": g.name(w),
        "degrees": m.degrees(),
        "actions": actions,
        "provenance": m.provenance(),
        "multiplicities": mult,
    })
}

fn hom(ctx: &Ctx, ty: &str, from: &str, to: &str, degree: i32) -> Result<String> {
    let (ring, family) = ctx.cache.load(parse_type(ty)?, ctx.mode)?;
    let g = ring.group();
    let (y, w) = (parse_elem(g, from)?, parse_elem(g, to)?);
    let basis = hom_basis(&ring, &family, y, w, degree);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Hom^{degree}(V[{}], V[{}]): dimension {}",
        g.name(y),
        g.name(w),
        basis.dim()
    );
    for (k, f) in basis.basis.iter().enumerate() {
        let _ = writeln!(s, "basis {}:", k + 1);
        s.push_str(&matrix_text(f));
    }
    Ok(s)
}

fn kl(ty: &str, from: &str, to: &str) -> Result<String> {
    let g = WeylGroup::of_type(parse_type(ty)?)?;
    let (y, w) = (parse_elem(&g, from)?, parse_elem(&g, to)?);
    let t = KlTable::compute(&g);
    let (ny, nw) = (g.name(y), g.name(w));
    Ok(format!(
        "P({ny}, {nw}) = {}\nmu({ny}, {nw}) = {}\n",
        format_poly(t.p(y, w)),
        t.mu(y, w)
    ))
}

fn quiver(ctx: &Ctx, ty: &str, format: Format, appendix_numbering: bool) -> Result<String> {
    let ct = parse_type(ty)?;
    let p = ctx.pipeline(ct)?;
    let (num, rels) = if appendix_numbering {
        let num = classical::numbering(p.group())?;
        let rels = classical::normalize(&p.ring, &p.family, &p.quiver, &p.relators)?;
        (num, rels)
    } else {
        (Numbering::canonical(p.quiver.vertex_count()), p.relators.clone())
    };
    Ok(match format {
        Format::Text => to_text(&p.quiver, &rels, &num),
        Format::Dot => to_dot(&p.quiver, &rels, &num),
        Format::Json => serde_json::to_string_pretty(&to_json(&p.quiver, &rels, &num))? + "\n",
    })
}

fn check(ctx: &Ctx, ty: &str, suite: &str, seed: u64) -> Result<(String, bool)> {
    let suite: Suite = suite.parse()?;
    let p = ctx.pipeline(parse_type(ty)?)?;
    let outcomes = run_suite(&p, suite, seed);
    let mut s = String::new();
    for o in &outcomes {
        let _ = writeln!(s, "{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let _ = writeln!(s, "{} checks, {failed} failed", outcomes.len());
    Ok((s, failed == 0))
}

fn read_document(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))
}

fn icmod(ctx: &Ctx, op: &IcmodOp) -> Result<(String, bool)> {
    let file = match op {
        IcmodOp::Validate { file } | IcmodOp::Cohomology { file } | IcmodOp::Dual { file, .. } => file,
    };
    let doc = read_document(file)?;
    let p = ctx.pipeline(document_system(&doc)?)?;
    let g = p.group();
    let m = from_document(g, &p.quiver, &doc)?;
    match op {
        IcmodOp::Validate { .. } => Ok(match m.d_squared_witness(&p.quiver) {
            None => ("valid\n".into(), true),
            Some(wit) => (
                format!(
                    "invalid: d² has entry {} at ({}, {}) in the block {} → {}\n",
                    format_rational(&wit.value),
                    wit.row,
                    wit.col,
                    g.name(wit.from),
                    g.name(wit.to)
                ),
                false,
            ),
        }),
        IcmodOp::Cohomology { .. } => {
            let dims = total_cohomology(&p.family, &p.quiver, &m)?;
            let mut s = String::new();
            for (n, d) in &dims {
                let _ = writeln!(s, "H^{n}: {d}");
            }
            let _ = writeln!(s, "euler characteristic: {}", euler_characteristic(&dims));
            Ok((s, true))
        }
        IcmodOp::Dual { out, .. } => {
            let d = Duality::build(&p.ring, &p.family, &p.quiver)?.dual(&p.quiver, &m)?;
            let text = serde_json::to_string_pretty(&to_document(g, &d))? + "\n";
            match out {
                Some(path) => {
                    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
                    Ok((String::new(), true))
                }
                None => Ok((text, true)),
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.or_else(default_cache_dir)
    };
    let ctx = Ctx {
        cache: Cache::new(dir),
        mode: match cli.mode {
            Mode::Shortcut => BuildMode::Shortcut,
            Mode::Full => BuildMode::FullWord,
        },
    };
    let (text, ok) = match &cli.command {
        Command::Weyl { ty } => (weyl(ty)?, true),
        Command::Cohomology { ty, table } => (cohomology(&ctx, ty, *table)?, true),
        Command::Ih { ty, element, dump } => (ih(&ctx, ty, element.as_deref(), dump.as_deref())?, true),
        Command::Hom { ty, from, to, degree } => (hom(&ctx, ty, from, to, *degree)?, true),
        Command::Kl { ty, from, to } => (kl(ty, from, to)?, true),
        Command::Quiver {
            ty,
            format,
            appendix_numbering,
            out,
        } => {
            let text = quiver(&ctx, ty, *format, *appendix_numbering)?;
            emit(out.as_deref(), &text)?;
            (String::new(), true)
        }
        Command::Check { ty, suite, seed } => check(&ctx, ty, suite, *seed)?,
        Command::Icmod { op } => icmod(&ctx, op)?,
    };
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
