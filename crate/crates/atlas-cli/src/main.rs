//! Command-line front end: evaluation, tracing, zero tables, theorem
//! verification, strip partitioning, the involution lab, rendering, and
//! report generation.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use atlas_core::document::AtlasDocument;
use atlas_core::geom::Rect;
use atlas_core::grid::{FieldGrid, GridWindow};
use atlas_core::involution::{argument_terms, build_involution, verify_involution};
use atlas_core::series::{specfile::parse_descriptor, SeriesSpec, SpecMap};
use atlas_core::trace::classify_poly_below;
use atlas_core::verify::run_suite;
use atlas_core::zeros::{build_merge_tree, locate_spec_zeros, Target};
use atlas_core::{domains, Tolerances};

mod cache;
mod render;
mod report;

#[derive(Parser)]
#[command(name = "atlas", version, about = "Geometry of mappings by general Dirichlet series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Evaluation tolerance (absolute).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Target significant digits (sets the evaluation tolerance to 10^-d).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Layered key = value tolerance config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cache directory (also honored from ATLAS_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArgs {
    /// Window as sigma_min,sigma_max,t_min,t_max.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    window: Rect,
    /// Grid resolution nx,ny (defaults to a 0.05 cell size).
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the function (or a derivative) at one point.
    Eval {
        #[arg(long)]
        spec: String,
        /// Point as re,im.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
        /// Derivative order (0, 1, or 2).
        #[arg(long, default_value_t = 0)]
        derivative: u32,
    },
    /// Trace level sets over a window and write the document.
    Trace {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        window: WindowArgs,
        /// Circle radii to trace alongside the real-axis pre-image.
        #[arg(long, value_delimiter = ',')]
        circles: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Locate zeros in a window and write the table.
    Zeros {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        window: WindowArgs,
        /// Target: f, f1 (first derivative), or f2.
        #[arg(long, default_value = "f")]
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every theorem check over a window; exit 0 only if none fail.
    Verify {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, value_delimiter = ',')]
        circles: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Partition one strip into fundamental domains.
    Partition {
        #[arg(long)]
        spec: String,
        /// Strip index k.
        #[arg(long)]
        strip: i64,
        /// Window (defaults to a spec-dependent desk window).
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
        window: Option<Rect>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Interior samples per domain for the conformal-evidence check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Build and verify the zero-pair involution on an off-line pair.
    Involution {
        #[arg(long, default_value = "dh")]
        spec: String,
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
        window: Option<Rect>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also compute the prime argument-term series at this delta.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a document to SVG.
    Render {
        #[arg(long)]
        doc: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Layers: comma list of curves,zeros,domains,arcs or "all".
        #[arg(long, default_value = "all")]
        layers: String,
    },
    /// Print a text summary of a document.
    Report {
        #[arg(long)]
        doc: PathBuf,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected re,im".into());
    }
    let re: f64 = parts[0].trim().parse().map_err(|_| "bad real part")?;
    let im: f64 = parts[1].trim().parse().map_err(|_| "bad imaginary part")?;
    Ok(Complex64::new(re, im))
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| "expected four numbers".to_string())?;
    if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
        return Err("expected sigma_min,sigma_max,t_min,t_max".into());
    }
    Ok(Rect::new(v[0], v[1], v[2], v[3]))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| "expected nx,ny".to_string())?;
    if v.len() != 2 {
        return Err("expected nx,ny".into());
    }
    Ok((v[0], v[1]))
}

fn window_of(args: &WindowArgs) -> Result<GridWindow> {
    Ok(match args.grid {
        Some((nx, ny)) => GridWindow::new(args.window, nx, ny)?,
        None => GridWindow::with_cell_size(args.window, 0.05),
    })
}

fn write_doc(doc: &AtlasDocument, out: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(doc)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn write_svg(doc: &AtlasDocument, svg: Option<&PathBuf>, layers: render::Layers) -> Result<()> {
    if let Some(path) = svg {
        let text = render::render_svg(doc, layers)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let mut cfg = Tolerances::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        cfg.apply_text(&text).map_err(|e| anyhow!(e))?;
    }
    if let Some(d) = cli.precision {
        cfg.eval = 10f64.powi(-(d.min(14) as i32));
    }
    if let Some(t) = cli.tol {
        cfg.eval = t;
    }
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("ATLAS_CACHE_DIR").map(PathBuf::from));

    match cli.command {
        Command::Eval { spec, s, derivative } => {
            let spec = parse_descriptor(&spec)?;
            let r = match derivative {
                0 => spec.eval(s, cfg.eval)?,
                d => spec.eval_derivative(s, d, cfg.eval)?,
            };
            println!(
                "value = {:+.15e} {:+.15e}i",
                r.value.re, r.value.im
            );
            println!("error_bound = {:.3e}", r.error_bound);
            println!("terms_used = {}", r.terms_used);
            println!("method = {}", serde_json::to_string(&r.method)?);
            Ok(0)
        }
        Command::Trace {
            spec,
            window,
            circles,
            out,
            svg,
        } => {
            let sp = parse_descriptor(&spec)?;
            let gw = window_of(&window)?;
            let art = run_suite(&sp, gw, &circles, &cfg)?;
            let mut doc = AtlasDocument::new(sp.id(), cfg);
            doc.window = Some(gw);
            doc.curves = art.curves;
            doc.zeros = art.zeros;
            doc.strips = art.strips;
            println!(
                "traced {} curves, located {} zeros, {} strips",
                doc.curves.len(),
                doc.zeros.len(),
                doc.strips.len()
            );
            write_doc(&doc, out.as_ref())?;
            write_svg(&doc, svg.as_ref(), render::Layers::default())?;
            Ok(0)
        }
        Command::Zeros {
            spec,
            window,
            target,
            out,
        } => {
            let sp = parse_descriptor(&spec)?;
            let gw = window_of(&window)?;
            let target = match target.as_str() {
                "f" => Target::F,
                "f1" | "fprime" => Target::FPrime,
                "f2" => Target::FDoublePrime,
                other => bail!("unknown target `{other}`"),
            };
            let key = cache::cache_key(
                sp.id(),
                &format!("{target:?}"),
                gw.rect,
                cfg.eval,
                &cfg,
            );
            let zeros = match cache_dir.as_deref().and_then(|d| cache::load(d, &key)) {
                Some(z) => {
                    eprintln!("cache hit {key}");
                    z
                }
                None => {
                    let z = locate_spec_zeros(&sp, target, gw.rect, cfg.eval, &cfg)?;
                    if let Some(dir) = cache_dir.as_deref() {
                        cache::store(dir, &key, &z)?;
                    }
                    z
                }
            };
            for z in &zeros {
                println!(
                    "{:+.12} {:+.12}  order {}  residual {:.2e}",
                    z.location.re, z.location.im, z.order, z.residual
                );
            }
            let mut doc = AtlasDocument::new(sp.id(), cfg);
            doc.window = Some(gw);
            doc.zeros = zeros;
            write_doc(&doc, out.as_ref())?;
            Ok(0)
        }
        Command::Verify {
            spec,
            window,
            circles,
            out,
            svg,
        } => {
            let sp = parse_descriptor(&spec)?;
            let gw = window_of(&window)?;
            let radii = if circles.is_empty() {
                vec![0.5, 1.0, 2.0]
            } else {
                circles
            };
            let art = run_suite(&sp, gw, &radii, &cfg)?;
            let mut doc = AtlasDocument::new(sp.id(), cfg);
            doc.window = Some(gw);
            doc.curves = art.curves;
            doc.zeros = art.zeros;
            doc.strips = art.strips;
            doc.reports = art.reports;
            let mut failed = false;
            for r in &doc.reports {
                println!("{}", report::report_line(r));
                failed |= r.verdict == atlas_core::Verdict::Fail;
            }
            write_doc(&doc, out.as_ref())?;
            write_svg(&doc, svg.as_ref(), render::Layers::default())?;
            Ok(if failed { 2 } else { 0 })
        }
        Command::Partition {
            spec,
            strip,
            window,
            out,
            svg,
            samples,
        } => {
            let sp = parse_descriptor(&spec)?;
            let rect = window.unwrap_or_else(|| default_window(sp.id()));
            let gw = GridWindow::with_cell_size(rect, 0.05);
            let art = run_suite(&sp, gw, &[], &cfg)?;
            let record = art
                .strips
                .iter()
                .find(|s| s.k == strip)
                .ok_or_else(|| anyhow!("strip {strip} not found in the window"))?;
            let map = SpecMap {
                spec: &sp,
                tol: cfg.eval,
                shift: 0,
            };
            let grid = FieldGrid::fill(&map, gw, cfg.eval);
            let (tree, doms) =
                partition_pipeline(&sp, &map, &grid, record, &art, rect, &cfg)?;
            println!("strip {strip}: {} fundamental domains", doms.len());
            let mut doc = AtlasDocument::new(sp.id(), cfg);
            doc.window = Some(gw);
            doc.curves = art.curves;
            doc.zeros = art.zeros;
            doc.strips = art.strips;
            doc.merge_trees = vec![tree];
            let mut failed = false;
            for d in &doms {
                let rep = domains::verify_fundamental(&map, d, samples, &cfg)?;
                println!("{}", report::report_line(&rep));
                failed |= rep.verdict == atlas_core::Verdict::Fail;
                doc.reports.push(rep);
            }
            doc.domains = doms;
            write_doc(&doc, out.as_ref())?;
            write_svg(&doc, svg.as_ref(), render::Layers::default())?;
            Ok(if failed { 2 } else { 0 })
        }
        Command::Involution {
            spec,
            window,
            samples,
            delta,
            out,
        } => {
            let sp = parse_descriptor(&spec)?;
            let rect = window.unwrap_or_else(|| {
                if sp.id() == "dh" {
                    Rect::new(-4.0, 6.0, 74.0, 96.0)
                } else {
                    default_window(sp.id())
                }
            });
            let gw = GridWindow::with_cell_size(rect, 0.05);
            let art = run_suite(&sp, gw, &[], &cfg)?;
            // Functional-equation pair: same height, Re summing to 1, off
            // the critical line.
            let f_zeros: Vec<_> = art
                .zeros
                .iter()
                .filter(|z| z.target == Target::F)
                .collect();
            let mut pair = None;
            'outer: for a in &f_zeros {
                if (a.location.re - 0.5).abs() < 1e-4 {
                    continue;
                }
                for b in &f_zeros {
                    if (a.location.re + b.location.re - 1.0).abs() < 1e-6
                        && (a.location.im - b.location.im).abs() < 1e-6
                        && a.location.re > b.location.re
                    {
                        pair = Some((**a).clone().location_pair((**b).clone()));
                        break 'outer;
                    }
                }
            }
            let Some((z1, z2)) = pair else {
                bail!("no off-critical-line functional-equation pair found in the window");
            };
            println!("pair: {} and {}", z1.location, z2.location);
            let k = z1
                .strip
                .ok_or_else(|| anyhow!("pair has no strip assignment"))?;
            let record = art
                .strips
                .iter()
                .find(|s| s.k == k)
                .ok_or_else(|| anyhow!("strip {k} missing"))?;
            let map = SpecMap {
                spec: &sp,
                tol: cfg.eval,
                shift: 0,
            };
            let grid = FieldGrid::fill(&map, gw, cfg.eval);
            let (tree, doms) =
                partition_pipeline(&sp, &map, &grid, record, &art, rect, &cfg)?;
            let find_dom = |z: Complex64| {
                doms.iter()
                    .find(|d| d.interior_zero.map(|w| (w - z).norm() < 1e-9).unwrap_or(false))
                    .cloned()
                    .ok_or_else(|| anyhow!("no domain contains the zero {z}"))
            };
            let d1 = find_dom(z1.location)?;
            let d2 = find_dom(z2.location)?;
            let own: Vec<Complex64> = d1
                .image_slit
                .branch_values
                .iter()
                .chain(d2.image_slit.branch_values.iter())
                .copied()
                .collect();
            let foreign: Vec<Complex64> = art
                .zeros
                .iter()
                .filter(|z| z.target == Target::FPrime)
                .filter_map(|z| sp.jet(z.location, 1e-8).ok().map(|j| j.f()))
                .filter(|w| !own.iter().any(|o| (o - w).norm() < 1e-6))
                .collect();
            let inv = build_involution(&map, z1.location, z2.location, d1, d2, &foreign, &cfg)?;
            let (rep, mut lab, _) = verify_involution(&inv, samples, &cfg)?;
            lab.spec_id = sp.id().to_string();
            println!("{}", report::report_line(&rep));
            println!(
                "max residuals: involution {:.3e}, value {:.3e}, ratio deviation {:.3e}",
                lab.max_involution_residual, lab.max_value_residual, lab.max_phi_deviation
            );
            if let Some(delta) = delta {
                if sp.multiplicative {
                    let series = argument_terms(&sp, z1.location.im, delta, 10_000)?;
                    println!(
                        "argument terms: {} primes, max tail |term| {:.3e}, envelope holds: {}",
                        series.primes.len(),
                        series.max_tail_term,
                        series.envelope_holds
                    );
                } else {
                    println!("spec is not multiplicative; no argument-term series");
                }
            }
            let failed = rep.verdict == atlas_core::Verdict::Fail;
            let mut doc = AtlasDocument::new(sp.id(), cfg);
            doc.window = Some(gw);
            doc.merge_trees = vec![tree];
            doc.domains = vec![inv.domain1.clone(), inv.domain2.clone()];
            doc.reports = vec![rep];
            doc.lab = Some(lab);
            write_doc(&doc, out.as_ref())?;
            Ok(if failed { 2 } else { 0 })
        }
        Command::Render { doc, out, layers } => {
            let text = std::fs::read_to_string(&doc)
                .with_context(|| format!("reading {}", doc.display()))?;
            let document: AtlasDocument = serde_json::from_str(&text)?;
            let svg = render::render_svg(&document, render::Layers::parse(&layers))?;
            std::fs::write(&out, svg)?;
            eprintln!("wrote {}", out.display());
            Ok(0)
        }
        Command::Report { doc } => {
            let text = std::fs::read_to_string(&doc)
                .with_context(|| format!("reading {}", doc.display()))?;
            let document: AtlasDocument = serde_json::from_str(&text)?;
            print!("{}", report::summarize(&document));
            Ok(0)
        }
    }
}

fn default_window(spec_id: &str) -> Rect {
    match spec_id {
        "dh" => Rect::new(-4.0, 6.0, 74.0, 96.0),
        "combo:7" => Rect::new(-4.0, 6.0, 26.0, 44.0),
        _ => Rect::new(-6.0, 6.0, 0.0, 40.0),
    }
}

/// Shared strip pipeline: merge tree then partition.
fn partition_pipeline(
    _spec: &SeriesSpec,
    map: &SpecMap<'_>,
    grid: &FieldGrid,
    record: &atlas_core::StripRecord,
    art: &atlas_core::verify::SuiteArtifacts,
    rect: Rect,
    cfg: &Tolerances,
) -> Result<(atlas_core::MergeTree, Vec<atlas_core::FundamentalDomain>)> {
    let strip_zeros: Vec<_> = art
        .zeros
        .iter()
        .filter(|z| z.target == Target::F && z.strip == Some(record.k))
        .cloned()
        .collect();
    let lower = art
        .curves
        .iter()
        .find(|c| Some(&c.id) == record.lower_curve.as_ref())
        .ok_or_else(|| anyhow!("strip lower curve missing"))?
        .points
        .clone();
    let upper = art
        .curves
        .iter()
        .find(|c| Some(&c.id) == record.upper_curve.as_ref())
        .ok_or_else(|| anyhow!("strip upper curve missing"))?
        .points
        .clone();
    let in_strip =
        move |s: Complex64| classify_poly_below(&lower, s) && !classify_poly_below(&upper, s);
    let tree = build_merge_tree(
        map,
        grid,
        &in_strip,
        record.k,
        &strip_zeros,
        record.partial,
        cfg.eval,
        cfg,
    )?;
    let doms = domains::partition_strip(map, record, &art.curves, &art.zeros, &tree, rect, cfg)?;
    Ok((tree, doms))
}

trait PairExt {
    fn location_pair(self, other: atlas_core::ZeroRecord)
        -> (atlas_core::ZeroRecord, atlas_core::ZeroRecord);
}

impl PairExt for atlas_core::ZeroRecord {
    fn location_pair(
        self,
        other: atlas_core::ZeroRecord,
    ) -> (atlas_core::ZeroRecord, atlas_core::ZeroRecord) {
        (self, other)
    }
}
