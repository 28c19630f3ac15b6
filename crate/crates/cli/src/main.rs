//! `subfreeze`: command-line front end for the freezing-potential toolkit.

mod manifest;
mod sequence_expr;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use subfreeze::complexity::{entropy_bounds, kappa_sequence, perron_constant, ComplexityTable};
use subfreeze::gibbs::{check_rho_bound, conditional_weights, metropolis_runs, ChainConfig, FiniteSpecification, MAX_GIBBS_CONFIGS};
use subfreeze::potential::{
    build_cor53_sequence, build_thm34_sequence, build_thm51_sequence, build_thm52_sequence, generate_interaction,
    hofbauer_sequence, inverse_power_sequence, nogo_classify, FreezingSequence, TruncatedPotential,
};
use subfreeze::pressure::{
    beta_grid, default_beta_grid, detect_freeze, fit_slant, renewal_pressure, torus_pressure_2d, transfer_curve,
    PressureCurve, PressureMethod, SlackPolicy,
};
use subfreeze::subshift::{load_spec, spec_to_json, BoxRegion, Pattern, Subshift};
use subfreeze::tiling::{pin_decomposition, tile_decomposition, OdometerOffset};
use subfreeze::Error;

use manifest::RunManifest;

const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "subfreeze", version, about = "Freezing phase transitions at desk scale")]
struct Cli {
    /// Output directory for data files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: FREEZING_WORKERS, else all cores).
    #[arg(long, global = true, env = "FREEZING_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spec file operations.
    #[command(subcommand)]
    Spec(SpecCmd),
    /// Language operations.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Entropy bracket for a spec.
    Entropy(EntropyArgs),
    /// Freezing sequences.
    #[command(subcommand)]
    Potential(PotentialCmd),
    /// Pressure curves.
    #[command(subcommand)]
    Pressure(PressureCmd),
    /// Freeze detection on a saved curve.
    #[command(subcommand)]
    Freeze(FreezeCmd),
    /// Dyadic tiling of a one-dimensional word.
    Tile(TileArgs),
    /// Pin decomposition of a one-sided word.
    Pins(PinsArgs),
    /// Metropolis chains on a torus.
    Sample(SampleArgs),
    /// Summability verdict for a sequence expression.
    Nogo(NogoArgs),
    /// Finite Gibbs specifications.
    #[command(subcommand)]
    Gibbs(GibbsCmd),
}

#[derive(Subcommand)]
enum SpecCmd {
    /// Load, validate and re-emit a spec in canonical form.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum LangCmd {
    /// Exact block counts on ErgBox(n).
    Count {
        #[arg(long)]
        spec: PathBuf,
        /// Largest n, or a comma list.
        #[arg(long, default_value = "8")]
        n: String,
    },
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecipeName {
    Thm34,
    Thm51,
    Thm52,
    Cor53,
    Power,
    Hofbauer,
}

#[derive(Args, Clone)]
struct RecipeArgs {
    #[arg(long, value_enum, default_value = "thm34")]
    recipe: RecipeName,
    /// Dyadic depth of the complexity table (thm34, thm52).
    #[arg(long)]
    i_max: Option<usize>,
    /// Constant c (thm51, power); thm51 defaults to the Perron constant of the spec.
    #[arg(long)]
    c: Option<f64>,
    /// Exponent p (power).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Last index j of the thm52 table.
    #[arg(long, default_value_t = 1024)]
    j_max: usize,
    /// Hofbauer parameters.
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    #[arg(long, default_value_t = 5.0)]
    shift: f64,
}

#[derive(Subcommand)]
enum PotentialCmd {
    /// Tabulate a freezing sequence.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        recipe: RecipeArgs,
        #[arg(long, default_value_t = 64)]
        upto: usize,
    },
}

#[derive(Subcommand)]
enum PressureCmd {
    /// Pressure brackets over a β grid.
    Curve(CurveArgs),
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    recipe: RecipeArgs,
    /// Truncation radius.
    #[arg(long = "R", default_value_t = 10)]
    radius: usize,
    /// "default" or start:end:count (geometric, plus β = 0).
    #[arg(long, default_value = "default")]
    beta_grid: String,
    #[arg(long, default_value = "transfer-1d")]
    method: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Renewal table depth.
    #[arg(long, default_value_t = 1_000_000)]
    n_max: usize,
    /// Torus side.
    #[arg(long, default_value_t = 4)]
    torus_n: usize,
    /// Upper limit on |A|^(window size) for the transfer method.
    #[arg(long, default_value_t = subfreeze::pressure::MAX_TRANSFER_WINDOWS)]
    max_windows: usize,
    /// Upper limit on |A|^(n^2) for the torus method.
    #[arg(long, default_value_t = subfreeze::pressure::MAX_TORUS_CONFIGS)]
    max_torus: usize,
    #[arg(long, default_value = "curve.csv")]
    file: String,
}

#[derive(Subcommand)]
enum FreezeCmd {
    /// Fit the slant asymptote and report the β_c interval.
    Detect {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        tail_fraction: f64,
        /// Multiple of the fit standard error added to the slack.
        #[arg(long, default_value_t = 0.0)]
        se_multiplier: f64,
    },
}

#[derive(Args)]
struct TileArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Symbols of x, placed at positions 0, 1, ….
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 0)]
    offset: u64,
    #[arg(long, default_value_t = 20)]
    depth: u32,
    /// start:len of the window (default: the whole word).
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct PinsArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    recipe: RecipeArgs,
    #[arg(long = "R", default_value_t = 2)]
    radius: usize,
    #[arg(long)]
    beta: f64,
    /// Torus side.
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Independent chains with seeds seed, seed+1, ….
    #[arg(long, default_value_t = 1)]
    chains: u64,
    #[arg(long, default_value_t = 0)]
    telemetry_every: u64,
}

#[derive(Args)]
struct NogoArgs {
    /// e.g. "1/n^2", "0.5/n^1.5", "log^2n/n", "thm51:0.5", "hofbauer:3:5", "values:3,2,1".
    #[arg(long)]
    sequence: String,
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Subcommand)]
enum GibbsCmd {
    /// Exact conditional weights on a small box.
    Weights {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Interaction truncation level.
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        /// Side of the box Λ = [0, side)^d.
        #[arg(long = "box", default_value_t = 3)]
        side: usize,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Boundary symbol filling the collar.
        #[arg(long, default_value = "0")]
        boundary: String,
        #[arg(long, default_value_t = MAX_GIBBS_CONFIGS)]
        max_configs: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.workers {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
        #[cfg(not(feature = "parallel"))]
        let _ = w;
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Guard { .. } | Error::NonConvergent { .. } => EXIT_GUARD,
        _ => EXIT_INPUT,
    }
}

struct Run<'a> {
    out: &'a Path,
    manifest: RunManifest,
}

impl<'a> Run<'a> {
    fn new(out: &'a Path, command: &str) -> Result<Self, Error> {
        std::fs::create_dir_all(out)?;
        Ok(Run {
            out,
            manifest: RunManifest::new(command),
        })
    }

    fn spec(&mut self, path: &Path) -> Result<Arc<Subshift>, Error> {
        let text = std::fs::read(path)?;
        self.manifest.spec_hash = Some(manifest::sha256_hex(&text));
        Ok(Arc::new(Subshift::new(load_spec(path)?)?))
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.manifest.param(key, value);
    }

    fn write(&mut self, name: &str, fill: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<PathBuf, Error> {
        let path = self.out.join(name);
        {
            let mut w = BufWriter::new(File::create(&path)?);
            fill(&mut w)?;
            w.flush()?;
        }
        self.manifest.record_output(&path)?;
        Ok(path)
    }

    fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf, Error> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    fn finish(mut self) -> Result<(), Error> {
        self.manifest.finish();
        let path = self.out.join("manifest.json");
        let mut f = File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &self.manifest)?;
        writeln!(f)?;
        Ok(())
    }
}

fn dispatch(cli: &Cli) -> Result<(), Error> {
    let out = cli.out.as_path();
    match &cli.command {
        Command::Spec(SpecCmd::Validate { spec }) => {
            let mut run = Run::new(out, "spec validate")?;
            let s = run.spec(spec)?;
            let canonical = spec_to_json(s.spec());
            run.write("spec.json", |w| Ok(w.write_all(canonical.as_bytes())?))?;
            println!("valid: d = {}, |A| = {}", s.dim(), s.alphabet_size());
            run.finish()
        }
        Command::Lang(LangCmd::Count { spec, n }) => {
            let mut run = Run::new(out, "lang count")?;
            let s = run.spec(spec)?;
            let ns = parse_ns(n)?;
            run.param("n", &ns);
            let table = ComplexityTable::build(&s, ns.iter().copied())?;
            run.write("counts.csv", |w| table.write_csv(w))?;
            for &m in &ns {
                println!("{m}\t{}", table.get(m).expect("tabulated"));
            }
            run.finish()
        }
        Command::Entropy(a) => {
            let mut run = Run::new(out, "entropy")?;
            let s = run.spec(&a.spec)?;
            run.param("n_max", a.n_max);
            let e = entropy_bounds(&s, a.n_max)?;
            let (h, conditional) = e.reference();
            run.write_json(
                "entropy.json",
                &json!({
                    "estimate": e,
                    "reference": h,
                    "conditional": conditional,
                }),
            )?;
            println!("h in [{}, {}]", subfreeze::fmt_sig(e.lower), subfreeze::fmt_sig(e.upper));
            run.finish()
        }
        Command::Potential(PotentialCmd::Build { spec, recipe, upto }) => {
            let mut run = Run::new(out, "potential build")?;
            let s = run.spec(spec)?;
            let seq = build_recipe(&s, recipe, &mut run)?;
            run.param("upto", upto);
            run.write("sequence.csv", |w| seq.write_csv(w, *upto))?;
            run.write_json(
                "sequence.json",
                &json!({
                    "recipe": seq.recipe,
                    "asymptotic_class": seq.class.label(),
                    "repaired": seq.repaired,
                    "conditional": seq.conditional,
                    "extrapolated_from": seq.extrapolated_from,
                }),
            )?;
            println!("{} a_0 = {}", seq.class.label(), subfreeze::fmt_sig(seq.value(0)));
            run.finish()
        }
        Command::Pressure(PressureCmd::Curve(a)) => pressure_curve(out, a),
        Command::Freeze(FreezeCmd::Detect {
            curve,
            tail_fraction,
            se_multiplier,
        }) => {
            let mut run = Run::new(out, "freeze detect")?;
            let bytes = std::fs::read(curve)?;
            run.manifest.input_hash = Some(manifest::sha256_hex(&bytes));
            run.param("tail_fraction", tail_fraction);
            run.param("se_multiplier", se_multiplier);
            let c = PressureCurve::read_csv(bytes.as_slice())?;
            let fit = fit_slant(&c, *tail_fraction)?;
            let policy = SlackPolicy {
                fit_se_multiplier: *se_multiplier,
                extra: 0.0,
            };
            let report = detect_freeze(&c, &fit, &policy);
            run.write_json("freeze.json", &json!({ "report": report, "fit": fit }))?;
            match report.beta_c() {
                Some((lo, hi)) if report.is_frozen() => println!("FrozenBeyond beta_c in [{lo}, {hi}]"),
                Some(_) => println!("affine everywhere (no transition)"),
                None => println!("NotDetected"),
            }
            run.finish()
        }
        Command::Tile(a) => {
            let mut run = Run::new(out, "tile")?;
            let s = run.spec(&a.spec)?;
            if s.dim() != 1 {
                return Err(Error::input("tile takes a one-dimensional spec"));
            }
            let cells = s.alphabet().parse_word(&a.word)?;
            let x = Pattern::word(&cells);
            let offset = OdometerOffset::new(vec![a.offset], a.depth)?;
            let window = match &a.window {
                Some(w) => {
                    let (start, len) = parse_pair(w)?;
                    BoxRegion::new(vec![start], vec![len as usize])
                }
                None => x.region(),
            };
            run.param("offset", a.offset);
            run.param("depth", a.depth);
            run.param("window", (&window.origin, &window.dims));
            let t = tile_decomposition(&s, &x, &offset, &window)?;
            run.write_json("tiling.json", &t)?;
            println!("{} tiles, {} margin points", t.tiles.len(), t.margin.len());
            run.finish()
        }
        Command::Pins(a) => {
            let mut run = Run::new(out, "pins")?;
            let s = run.spec(&a.spec)?;
            let cells = s.alphabet().parse_word(&a.word)?;
            let p = pin_decomposition(&s, &cells)?;
            run.write_json("pins.json", &json!({ "pins": p, "gaps": p.gaps(), "superpins": p.superpin_count() }))?;
            println!("{} pins, {} superpins", p.pins.len(), p.superpin_count());
            run.finish()
        }
        Command::Sample(a) => {
            let mut run = Run::new(out, "sample")?;
            let s = run.spec(&a.spec)?;
            let seq = Arc::new(build_recipe(&s, &a.recipe, &mut run)?);
            for (k, v) in [
                ("R", a.radius as f64),
                ("beta", a.beta),
                ("n", a.n as f64),
                ("steps", a.steps as f64),
                ("burn_in", a.burn_in as f64),
                ("seed", a.seed as f64),
                ("chains", a.chains as f64),
            ] {
                run.param(k, v);
            }
            let pot = TruncatedPotential::new(s, seq, a.radius);
            let cfg = ChainConfig {
                burn_in: a.burn_in,
                telemetry_every: a.telemetry_every,
                ..Default::default()
            };
            let seeds: Vec<u64> = (0..a.chains.max(1)).map(|i| a.seed + i).collect();
            let states = metropolis_runs(&pot, a.beta, a.n, a.steps, &seeds, &cfg)?;
            let summary: Vec<_> = states
                .iter()
                .map(|c| {
                    json!({
                        "seed": c.seed,
                        "algorithm": c.algorithm,
                        "steps": c.steps,
                        "accepted": c.accepted,
                        "samples": c.samples,
                        "energy": c.energy,
                        "inadmissible_mass": c.inadmissible_mass(),
                        "symbol_frequencies": c.symbol_frequencies(),
                    })
                })
                .collect();
            run.write_json("chains.json", &summary)?;
            if a.telemetry_every > 0 {
                for c in &states {
                    run.write(&format!("telemetry_{}.csv", c.seed), |w| c.write_telemetry(w))?;
                }
            }
            for c in &states {
                println!("seed {}: inadmissible mass {}", c.seed, subfreeze::fmt_sig(c.inadmissible_mass()));
            }
            run.finish()
        }
        Command::Nogo(a) => {
            let mut run = Run::new(out, "nogo")?;
            run.param("sequence", &a.sequence);
            run.param("d", a.d);
            let seq = sequence_expr::parse(&a.sequence)?;
            let report = nogo_classify(&seq, a.d);
            run.write_json("nogo.json", &report)?;
            println!("{:?}: {}", report.verdict, report.reason);
            run.finish()
        }
        Command::Gibbs(GibbsCmd::Weights {
            spec,
            recipe,
            n_max,
            side,
            beta,
            boundary,
            max_configs,
        }) => {
            let mut run = Run::new(out, "gibbs weights")?;
            let s = run.spec(spec)?;
            let seq = build_recipe(&s, recipe, &mut run)?;
            run.param("n_max", n_max);
            run.param("box", side);
            run.param("beta", beta);
            run.param("boundary", boundary);
            let d = s.dim();
            let vol = side.pow(d as u32);
            let total = (s.alphabet_size() as f64).powi(vol as i32);
            if total > *max_configs as f64 {
                return Err(Error::guard("Gibbs configurations |A|^|Λ|", total, *max_configs as f64));
            }
            let y_sym = s.alphabet().parse_index(boundary)?;
            let inter = Arc::new(generate_interaction(&seq, s.clone(), *n_max));
            let region = BoxRegion::new(vec![0; d], vec![*side; d]);
            let y = Pattern::filled(&region.expand(FiniteSpecification::collar(&inter)), y_sym);
            let fs = FiniteSpecification::new(inter, region, y, *beta)?;
            let weights = conditional_weights(&fs)?;
            let rho = check_rho_bound(&fs)?;
            let rows: Vec<_> = weights
                .iter()
                .map(|(p, w)| json!({ "pattern": s.alphabet().render(p.cells()), "weight": w }))
                .collect();
            run.write_json("weights.json", &json!({ "weights": rows, "rho_check": rho }))?;
            println!("{} weights, rho bound holds: {}", weights.len(), rho.holds);
            run.finish()
        }
    }
}

fn pressure_curve(out: &Path, a: &CurveArgs) -> Result<(), Error> {
    let mut run = Run::new(out, "pressure curve")?;
    let s = run.spec(&a.spec)?;
    let seq = Arc::new(build_recipe(&s, &a.recipe, &mut run)?);
    let method: PressureMethod = a.method.parse()?;
    let grid = parse_grid(&a.beta_grid)?;
    run.param("R", a.radius);
    run.param("beta_grid", &a.beta_grid);
    run.param("method", method.as_str());
    run.param("tol", a.tol);
    let curve = match method {
        PressureMethod::Transfer1d => {
            let width = if s.is_one_sided() { a.radius + 1 } else { 2 * a.radius + 1 };
            let windows = (s.alphabet_size() as f64).powi(width as i32);
            if windows > a.max_windows as f64 {
                return Err(Error::guard("transfer windows |A|^width", windows, a.max_windows as f64));
            }
            let pot = TruncatedPotential::new(s, seq, a.radius);
            transfer_curve(&pot, &grid, a.tol)?
        }
        PressureMethod::Renewal => {
            run.param("n_max", a.n_max);
            let pts = subfreeze::par::map(grid.clone(), |b| renewal_pressure(&s, &seq, b, a.n_max));
            PressureCurve::new(pts.into_iter().collect::<Result<Vec<_>, _>>()?, "renewal")
        }
        PressureMethod::Torus2d => {
            run.param("torus_n", a.torus_n);
            let configs = (s.alphabet_size() as f64).powi((a.torus_n * a.torus_n) as i32);
            if configs > a.max_torus as f64 {
                return Err(Error::guard("torus configurations |A|^(n^2)", configs, a.max_torus as f64));
            }
            let pot = TruncatedPotential::new(s, seq, a.radius);
            let pts = grid
                .iter()
                .map(|&b| torus_pressure_2d(&pot, b, a.torus_n))
                .collect::<Result<Vec<_>, _>>()?;
            PressureCurve::new(pts, "torus-2d")
        }
    };
    run.write(&a.file, |w| curve.write_csv(w))?;
    println!("{} points written to {}", curve.points.len(), out.join(&a.file).display());
    run.finish()
}

fn build_recipe(spec: &Subshift, r: &RecipeArgs, run: &mut Run) -> Result<FreezingSequence, Error> {
    let d = spec.dim();
    let default_depth = if d == 1 { 8 } else { 4 };
    let seq = match r.recipe {
        RecipeName::Thm34 => {
            let i_max = r.i_max.unwrap_or(default_depth);
            let table = ComplexityTable::build(spec, (0..=i_max).map(|i| 1usize << i))?;
            let (h, _) = entropy_bounds(spec, 1usize << i_max.min(4))?.reference();
            run.param("i_max", i_max);
            run.param("h_ref", h);
            build_thm34_sequence(&table, h, i_max)?
        }
        RecipeName::Thm51 => {
            let c = match r.c {
                Some(c) => c,
                None => {
                    if d != 1 {
                        return Err(Error::input("thm51 needs --c for d > 1"));
                    }
                    let (h, _) = entropy_bounds(spec, 16)?.reference();
                    let table = ComplexityTable::build(spec, 1..=64)?;
                    perron_constant(&table, h).max(f64::MIN_POSITIVE)
                }
            };
            run.param("c", c);
            build_thm51_sequence(c)?
        }
        RecipeName::Thm52 => {
            let need = (usize::BITS - 1 - r.j_max.max(1).leading_zeros()) as usize;
            let i_max = r.i_max.unwrap_or(default_depth).max(need);
            let (h, _) = entropy_bounds(spec, 1usize << default_depth.min(4))?.reference();
            let kappa = kappa_sequence(spec, i_max, h)?;
            run.param("i_max", i_max);
            run.param("j_max", r.j_max);
            build_thm52_sequence(&kappa, r.j_max)?
        }
        RecipeName::Cor53 => build_cor53_sequence(),
        RecipeName::Power => {
            let c = r.c.unwrap_or(1.0);
            run.param("c", c);
            run.param("p", r.p);
            inverse_power_sequence(c, r.p)?
        }
        RecipeName::Hofbauer => {
            run.param("gamma", r.gamma);
            run.param("shift", r.shift);
            hofbauer_sequence(r.gamma, r.shift)?
        }
    };
    run.param("recipe", &seq.recipe);
    Ok(seq)
}

fn parse_ns(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::input(format!("bad --n value '{s}'"));
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
    } else {
        let n: usize = s.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok((1..=n).collect())
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    if s == "default" {
        return Ok(default_beta_grid());
    }
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::input(format!("beta grid must be 'default' or start:end:count, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let end: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if !(start > 0.0 && end >= start && count >= 1) {
        return Err(bad());
    }
    Ok(beta_grid(start, end, count))
}

fn parse_pair(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::input(format!("expected start:len, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let len: i64 = b.parse().map_err(|_| bad())?;
    if len <= 0 {
        return Err(bad());
    }
    Ok((a.parse().map_err(|_| bad())?, len))
}
