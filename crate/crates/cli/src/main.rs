mod input;
mod materialize;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use cellsheaf::complex::{CellRegion, SimplicialComplex};
use cellsheaf::euler::{euler_global, euler_global_compact, euler_integral};
use cellsheaf::functors::*;
use cellsheaf::linalg::{format_rational, parse_vector};
use cellsheaf::microlocal::{characteristic_cycle, index_pairing};
use cellsheaf::{corpus, SheafComplex};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use input::Usage;
use report::{graded_report, sheaf_report, table, Report};

#[derive(Parser)]
#[command(name = "cellsheaf", version, about = "Exact constructible-sheaf calculus on simplicial complexes")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct SheafInput {
    /// Sheaf complex file.
    #[arg(long)]
    sheaf: PathBuf,
    /// Complex file, overriding the one named by the sheaf.
    #[arg(long)]
    complex: Option<PathBuf>,
}

impl SheafInput {
    fn load(&self) -> Result<SheafComplex> {
        let base = self.complex.as_deref().map(input::complex).transpose()?;
        input::sheaf(&self.sheaf, base.as_ref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that complexes, sheaves, maps and cycles load and are well formed.
    Validate {
        #[arg(long)]
        complex: Vec<PathBuf>,
        #[arg(long)]
        sheaf: Vec<PathBuf>,
        #[arg(long)]
        map: Vec<PathBuf>,
        #[arg(long)]
        cycle: Vec<PathBuf>,
    },
    /// Derived sections over an open region (default: the sheaf's domain).
    Cohomology {
        #[command(flatten)]
        input: SheafInput,
        /// Cells of the open region.
        #[arg(long, num_args = 1..)]
        region: Vec<String>,
    },
    /// Compactly supported cohomology.
    CohomologyC {
        #[command(flatten)]
        input: SheafInput,
    },
    /// Verdier dual.
    Dual {
        #[command(flatten)]
        input: SheafInput,
    },
    /// Graded dimensions of Ext(source, target).
    Ext {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Cohomology with supports in a locally closed region.
    LocalCohomology {
        #[command(flatten)]
        input: SheafInput,
        /// Cells of the support.
        #[arg(long, num_args = 1.., required = true)]
        support: Vec<String>,
        #[arg(long, value_enum, default_value_t = Route::Cone)]
        route: Route,
    },
    /// Rf_* (or Rf_! with --proper) along a map, the point, or the inclusion of the sheaf's domain.
    Pushforward {
        #[arg(long)]
        sheaf: PathBuf,
        #[command(flatten)]
        along: Along,
        #[arg(long)]
        proper: bool,
    },
    /// f^* (or f^! with --shriek) along a map, or restriction to a region.
    Pullback {
        #[arg(long)]
        sheaf: PathBuf,
        #[arg(long, conflicts_with = "region")]
        map: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        region: Vec<String>,
        #[arg(long, requires = "map")]
        shriek: bool,
    },
    /// Euler characteristics and the local Euler function.
    Euler {
        #[command(flatten)]
        input: SheafInput,
    },
    /// Characteristic cycle: a multiplicity per conormal chamber.
    Cc {
        #[command(flatten)]
        input: SheafInput,
    },
    /// Index pairing of a cycle with a generic covector.
    Pair {
        #[arg(long)]
        cycle: PathBuf,
        /// Comma-separated rationals, e.g. "1,-2/3".
        #[arg(long, allow_hyphen_values = true)]
        covector: String,
    },
    /// Run the invariant suite on bundled corpus items.
    Verify {
        /// Corpus item names.
        items: Vec<String>,
        #[arg(long, conflicts_with = "items")]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random covectors per sheaf for the index theorem.
        #[arg(long, default_value_t = 20)]
        covectors: usize,
    },
    /// Write the bundled corpus as JSON files.
    Corpus {
        /// Target directory (default: $CELLSHEAF_CORPUS_DIR, then ./corpus).
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Only list the items.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct Along {
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    to_point: bool,
    /// Inclusion of the sheaf's domain into its complex.
    #[arg(long)]
    inclusion: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Cone,
    Support,
    Ext,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|r| emit(&cli, &r).map(|_| r)) {
        Ok(r) if r.violation => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(cellsheaf::Error::NonGeneric(_)) = cause.downcast_ref::<cellsheaf::Error>() {
            return 3;
        }
    }
    2
}

fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&r.json)? + "\n",
        Format::Table => r.table.clone() + "\n",
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Usage(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn region_or_domain(f: &SheafComplex, names: &[String]) -> Result<CellRegion> {
    if names.is_empty() {
        Ok(f.domain().clone())
    } else {
        input::region(f.base(), names)
    }
}

fn run(cmd: &Command) -> Result<Report> {
    Ok(match cmd {
        Command::Validate { complex, sheaf, map, cycle } => validate(complex, sheaf, map, cycle)?,
        Command::Cohomology { input, region } => {
            let f = input.load()?;
            let u = region_or_domain(&f, region)?;
            graded_report(&derived_sections(&u, &f)?, json!({ "region": u.names(f.base()) }))
        }
        Command::CohomologyC { input } => graded_report(&derived_sections_compact(&input.load()?)?, json!({})),
        Command::Dual { input } => sheaf_report(&verdier_dual(&input.load()?)),
        Command::Ext { source, target, complex } => {
            let base = match complex {
                Some(p) => input::complex(p)?,
                None => input::sheaf(source, None)?.base().clone(),
            };
            let (f, g) = (input::sheaf(source, Some(&base))?, input::sheaf(target, Some(&base))?);
            graded_report(&hyperext(&f, &g)?, json!({}))
        }
        Command::LocalCohomology { input, support, route } => {
            let f = input.load()?;
            let z = input::region(f.base(), support)?;
            let dims = match route {
                Route::Cone => local_cohomology(&z, &f)?,
                Route::Support => local_cohomology_by_support(&z, &f)?,
                Route::Ext => local_cohomology_by_ext(&z, &f)?,
            };
            graded_report(&dims, json!({ "support": z.names(f.base()) }))
        }
        Command::Pushforward { sheaf, along, proper } => {
            let (f, m) = match &along.map {
                Some(p) => {
                    let m = input::map(p)?;
                    (input::sheaf(sheaf, Some(m.source()))?, m)
                }
                None => {
                    let f = input::sheaf(sheaf, None)?;
                    let m = if along.to_point {
                        SimplicialMap::to_point(f.base(), f.domain())
                    } else if along.inclusion {
                        SimplicialMap::inclusion(f.base(), f.domain())?
                    } else {
                        bail!(Usage("pushforward needs --map, --to-point or --inclusion".into()))
                    };
                    (f, m)
                }
            };
            let g = if *proper { pushforward_proper(&m, &f)? } else { pushforward_derived(&m, &f)? };
            sheaf_report(&g)
        }
        Command::Pullback { sheaf, map, region, shriek } => match map {
            Some(p) => {
                let m = input::map(p)?;
                let g = input::sheaf(sheaf, Some(m.target()))?;
                sheaf_report(&if *shriek { upper_shriek(&m, &g)? } else { pullback(&m, &g)? })
            }
            None if !region.is_empty() => {
                let f = input::sheaf(sheaf, None)?;
                sheaf_report(&f.restrict(&input::region(f.base(), region)?)?)
            }
            None => bail!(Usage("pullback needs --map or --region".into())),
        },
        Command::Euler { input } => {
            let f = input.load()?;
            let chi = f.chi_local();
            let (e, ec, int) = (euler_global(&f)?, euler_global_compact(&f)?, euler_integral(&chi));
            let x = f.base();
            let mut t = table(&["cell", "local Euler characteristic"], (0..x.num_cells()).map(|c| [x.cell_name(c), chi.get(c).to_string()]));
            t += &format!("\nχ = {e}, χ_c = {ec}, ∫χ_local = {int}");
            Report::new(json!({ "euler": e, "euler_compact": ec, "integral": int, "chi_local": chi.to_json() }), t)
        }
        Command::Cc { input } => {
            let cc = characteristic_cycle(&input.load()?)?;
            let json = cc.to_json();
            let rows = json["chambers"].as_array().expect("chamber list").iter().map(|e| {
                let cell: Vec<&str> = e["cell"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
                let signs: Vec<String> = e["signs"].as_object().unwrap().iter().map(|(v, s)| format!("{v}:{}", s.as_str().unwrap())).collect();
                let witness: Vec<&str> = e["witness"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
                let signs = if signs.is_empty() { "zero".to_string() } else { signs.join(" ") };
                [cell.join(","), signs, witness.join(","), e["multiplicity"].to_string()]
            });
            let t = table(&["cell", "signs", "witness", "multiplicity"], rows);
            Report::new(json, t)
        }
        Command::Pair { cycle, covector } => {
            let cc = input::cycle(cycle)?;
            let xi = parse_vector(covector)?;
            let p = index_pairing(&cc, &xi)?;
            let xi: Vec<String> = xi.iter().map(format_rational).collect();
            Report::new(json!({ "covector": xi, "pairing": p }), p.to_string())
        }
        Command::Verify { items, all, seed, covectors } => {
            let names: Vec<String> = if *all { corpus::NAMES.iter().map(|s| s.to_string()).collect() } else { items.clone() };
            if names.is_empty() {
                bail!(Usage("verify needs item names or --all".into()));
            }
            let items = names
                .iter()
                .map(|n| corpus::item(n).ok_or_else(|| Usage(format!("unknown corpus item {n:?}; known: {}", corpus::NAMES.join(", ")))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let certs: Vec<verify::Certificate> = items.par_iter().map(|it| verify::verify(it, *seed, *covectors)).collect();
            let ok = certs.iter().all(verify::Certificate::passed);
            let mut t = format!("seed {seed}\n");
            for c in &certs {
                let rows = c.checks.iter().map(|k| {
                    [k.name.to_string(), k.sheaf.clone().unwrap_or_default(), if k.passed { "pass" } else { "FAIL" }.to_string(), k.detail.clone()]
                });
                t += &format!("{}: {}\n", c.item, if c.passed() { "passed" } else { "FAILED" });
                t += &table(&["check", "sheaf", "result", "detail"], rows);
                t.push('\n');
            }
            let json = json!({ "seed": seed, "passed": ok, "certificates": certs.iter().map(verify::Certificate::to_json).collect::<Vec<_>>() });
            Report { json, table: t.trim_end().to_string(), violation: !ok }
        }
        Command::Corpus { dir, list } => {
            if *list {
                let rows = corpus::all().into_iter().map(|it| {
                    let names: Vec<&str> = it.sheaves.iter().map(|(s, _)| s.as_str()).collect();
                    [it.name.clone(), format!("{:?}", it.complex.f_vector()), names.join(" ")]
                });
                let t = table(&["item", "f-vector", "sheaves"], rows);
                let json: Value = corpus::all()
                    .into_iter()
                    .map(|it| (it.name, json!(it.sheaves.iter().map(|(s, _)| s).collect::<Vec<_>>())))
                    .collect::<serde_json::Map<_, _>>()
                    .into();
                Report::new(json, t)
            } else {
                let dir = dir.clone().unwrap_or_else(input::corpus_dir);
                let files = materialize::materialize(&dir)?;
                let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
                let t = format!("wrote {} files to {}", names.len(), dir.display());
                Report::new(json!({ "dir": dir.display().to_string(), "files": names }), t)
            }
        }
    })
}

fn validate(complexes: &[PathBuf], sheaves: &[PathBuf], maps: &[PathBuf], cycles: &[PathBuf]) -> Result<Report> {
    if complexes.is_empty() && sheaves.is_empty() && maps.is_empty() && cycles.is_empty() {
        bail!(Usage("nothing to validate".into()));
    }
    let mut results: Vec<(String, &str, Result<String>)> = Vec::new();
    let describe = |x: &SimplicialComplex| format!("f-vector {:?}, Euler characteristic {}", x.f_vector(), x.euler_characteristic());
    for p in complexes {
        results.push((p.display().to_string(), "complex", input::complex(p).map(|x| describe(&x))));
    }
    for p in sheaves {
        let r = input::sheaf(p, None).and_then(|f| {
            f.validate()?;
            Ok(format!("degrees {}..{} on {} cells", f.min_degree(), f.max_degree(), f.domain().len()))
        });
        results.push((p.display().to_string(), "sheaf", r));
    }
    for p in maps {
        let r = input::map(p).map(|m| format!("{} → {} vertices", m.source().num_vertices(), m.target().num_vertices()));
        results.push((p.display().to_string(), "map", r));
    }
    for p in cycles {
        let r = input::cycle(p).map(|c| format!("{} nonzero chambers", c.values().iter().filter(|&&m| m != 0).count()));
        results.push((p.display().to_string(), "cycle", r));
    }
    // A missing file is a usage error, not an invalid object.
    for (_, _, r) in &results {
        if let Err(e) = r {
            if e.chain().any(|c| c.downcast_ref::<Usage>().is_some()) {
                bail!(Usage(format!("{e:#}")));
            }
        }
    }
    let violation = results.iter().any(|(_, _, r)| r.is_err());
    let entries: Vec<Value> = results
        .iter()
        .map(|(p, kind, r)| match r {
            Ok(d) => json!({ "path": p, "kind": kind, "valid": true, "detail": d }),
            Err(e) => json!({ "path": p, "kind": kind, "valid": false, "detail": format!("{e:#}") }),
        })
        .collect();
    let rows = results.iter().map(|(p, kind, r)| {
        let (v, d) = match r {
            Ok(d) => ("valid", d.clone()),
            Err(e) => ("INVALID", format!("{e:#}")),
        };
        [p.clone(), kind.to_string(), v.to_string(), d]
    });
    let t = table(&["path", "kind", "result", "detail"], rows);
    Ok(Report { json: json!({ "valid": !violation, "objects": entries }), table: t, violation })
}
