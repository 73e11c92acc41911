// SPDX-License-Identifier: Apache-2.0
//! `nvcluster` command-line driver.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nvcluster::analysis::compare_designs;
use nvcluster::clustering::{apply_plan, nv_cluster_limited, ClusterPlan};
use nvcluster::intermit::{monte_carlo, paired_monte_carlo, HarvesterModel, MonteCarloConfig, PowerTrace};
use nvcluster::netlist::{emit_bench, parse_bench, FfKind, Netlist};
use nvcluster::pglib::{enumerate_pg_functions, PgLibrary};
use nvcluster::tech::{TechParams, DEFAULT_TECH};

use report::{Header, Row};

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Analysis(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Analysis(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Analysis(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "nvcluster", version, about = "Non-volatile logic clustering toolchain")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a netlist and report element counts.
    Validate { bench: PathBuf },
    /// Print the polymorphic-gate function library.
    Libdump(LibOpts),
    /// Cluster a netlist and write the plan and transformed netlist.
    Synth {
        bench: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        lib: LibOpts,
    },
    /// Cost and vulnerability reports for baseline and clustered designs.
    Analyze {
        #[arg(required = true)]
        bench: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        lib: LibOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Simulate intermittent execution under a harvested supply.
    Simulate {
        bench: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        lib: LibOpts,
        #[command(flatten)]
        sim: SimOpts,
    },
    /// One CSV row per benchmark found in the given files or directories.
    Sweep {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        lib: LibOpts,
    },
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Technology file (defaults to the built-in one).
    #[arg(long)]
    tech: Option<PathBuf>,
    /// Output directory, created if absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct LibOpts {
    /// Largest majority base in the library (3 or 5).
    #[arg(long, default_value_t = 5)]
    max_base: usize,
    /// Disallow output inversion.
    #[arg(long)]
    no_inversion: bool,
    /// Cap on cone leaves (defaults to the library's widest function).
    #[arg(long)]
    max_leaves: Option<usize>,
}

#[derive(Args, Clone)]
struct SimOpts {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e9)]
    horizon_ns: f64,
    /// Boundary jitter as a fraction of the shorter adjacent segment.
    #[arg(long, default_value_t = 0.1)]
    jitter: f64,
    /// Input vectors per trial.
    #[arg(long, default_value_t = 1000)]
    workload: usize,
    #[arg(long, default_value_t = 470.0)]
    capacitance_nf: f64,
    #[arg(long, default_value_t = 10.0)]
    harvest_ua: f64,
    #[arg(long, default_value_t = 110.0)]
    load_ua: f64,
    #[arg(long, default_value_t = 4.5)]
    v_on: f64,
    #[arg(long, default_value_t = 2.0)]
    v_off: f64,
    #[arg(long, default_value_t = 5.0)]
    v_max: f64,
    /// Use this `start_ns,end_ns,state` trace instead of the capacitor model.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Also run the all-NVFF baseline on the same traces.
    #[arg(long)]
    paired: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Validate { bench } => cmd_validate(&bench),
        Command::Libdump(lib) => cmd_libdump(&lib),
        Command::Synth { bench, common, lib } => cmd_synth(&bench, &common, &lib),
        Command::Analyze { bench, common, lib, format } => cmd_analyze(&bench, &common, &lib, format),
        Command::Simulate { bench, common, lib, sim } => cmd_simulate(&bench, &common, &lib, &sim),
        Command::Sweep { paths, common, lib } => cmd_sweep(&paths, &common, &lib),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_bench(path: &Path) -> Result<Netlist, Failure> {
    let text = read_text(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "netlist".into());
    parse_bench(&name, &text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// Technology parameters and the header derived from their source text.
fn load_tech(opts: &CommonOpts) -> Result<(TechParams, Header), Failure> {
    let text = match &opts.tech {
        Some(p) => read_text(p)?,
        None => DEFAULT_TECH.to_string(),
    };
    let tech = TechParams::parse(&text).map_err(|e| {
        let src = opts
            .tech
            .as_ref()
            .map_or("built-in tech".into(), |p| p.display().to_string());
        Failure::Parse(format!("{src}: {e}"))
    })?;
    Ok((tech, Header::new(&text)))
}

fn library(opts: &LibOpts) -> Result<PgLibrary, Failure> {
    enumerate_pg_functions(opts.max_base, !opts.no_inversion).map_err(|e| Failure::Usage(e.to_string()))
}

fn plan_for(netlist: &Netlist, lib: &PgLibrary, opts: &LibOpts) -> Result<ClusterPlan, Failure> {
    let max_leaves = opts.max_leaves.unwrap_or(lib.max_arity());
    nv_cluster_limited(netlist, lib, max_leaves).map_err(|e| Failure::Analysis(e.to_string()))
}

fn out_dir(opts: &CommonOpts) -> Result<PathBuf, Failure> {
    let dir = opts.out.clone().unwrap_or_else(|| PathBuf::from("nvcluster-out"));
    fs::create_dir_all(&dir).map_err(|e| Failure::Analysis(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Analysis(format!("{}: {e}", path.display())))
}

fn cmd_validate(bench: &Path) -> Outcome {
    let n = load_bench(bench)?;
    let nv = n.count_ffs(FfKind::NvFf);
    let le = n.count_ffs(FfKind::LeFf);
    let mut line = format!(
        "inputs={} outputs={} dffs={}",
        n.inputs().len(),
        n.outputs().len(),
        n.count_ffs(FfKind::Dff)
    );
    if nv + le > 0 {
        line.push_str(&format!(" nvffs={nv} leffs={le}"));
    }
    println!("{line} gates={} OK", n.gates().len());
    Ok(())
}

fn cmd_libdump(opts: &LibOpts) -> Outcome {
    print!("{}", library(opts)?.dump());
    Ok(())
}

fn cmd_synth(bench: &Path, common: &CommonOpts, lib_opts: &LibOpts) -> Outcome {
    let n = load_bench(bench)?;
    let (_, header) = load_tech(common)?;
    let lib = library(lib_opts)?;
    let plan = plan_for(&n, &lib, lib_opts)?;
    let out = apply_plan(&n, &plan).map_err(|e| Failure::Analysis(e.to_string()))?;
    let dir = out_dir(common)?;
    let summary = format!("leff={} nvff={}", plan.leff_count(), plan.nvff_count());

    write(&dir.join(format!("{}.plan", n.name())), &plan.dump(&n))?;
    write(&dir.join(format!("{}.nv.bench", n.name())), &emit_bench(&out))?;
    let mut text = header.text();
    text.push_str(&format!("circuit {}\n{summary}\n", n.name()));
    for (ff, cell) in plan.cell_names() {
        text.push_str(&format!("{ff} {cell}\n"));
    }
    write(&dir.join(format!("{}.summary.txt", n.name())), &text)?;
    println!("{summary}");
    Ok(())
}

fn analyze_one(n: &Netlist, tech: &TechParams, lib: &PgLibrary, opts: &LibOpts) -> Result<Row, Failure> {
    let plan = plan_for(n, lib, opts)?;
    let cmp = compare_designs(n, &plan, tech).map_err(|e| Failure::Analysis(e.to_string()))?;
    Ok(Row::new(n, &plan, cmp))
}

fn cmd_analyze(benches: &[PathBuf], common: &CommonOpts, lib_opts: &LibOpts, format: Format) -> Outcome {
    let (tech, header) = load_tech(common)?;
    let lib = library(lib_opts)?;
    let mut rows = Vec::new();
    for b in benches {
        let n = load_bench(b)?;
        rows.push(analyze_one(&n, &tech, &lib, lib_opts)?);
    }
    let (text, ext) = match format {
        Format::Text => (report::analysis_text(&header, &rows), "txt"),
        Format::Json => (report::analysis_json(&header, &rows), "json"),
        Format::Csv => (report::analysis_csv(&rows), "csv"),
    };
    if common.out.is_some() {
        let dir = out_dir(common)?;
        write(&dir.join(format!("analysis.{ext}")), &text)?;
    }
    print!("{text}");
    Ok(())
}

fn collect_benches(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "bench"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cmd_sweep(paths: &[PathBuf], common: &CommonOpts, lib_opts: &LibOpts) -> Outcome {
    let (tech, _) = load_tech(common)?;
    let lib = library(lib_opts)?;
    let mut rows = Vec::new();
    for b in collect_benches(paths)? {
        let n = load_bench(&b)?;
        rows.push(analyze_one(&n, &tech, &lib, lib_opts)?);
    }
    let text = report::analysis_csv(&rows);
    if common.out.is_some() {
        write(&out_dir(common)?.join("sweep.csv"), &text)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_simulate(bench: &Path, common: &CommonOpts, lib_opts: &LibOpts, sim: &SimOpts) -> Outcome {
    let original = load_bench(bench)?;
    let (tech, header) = load_tech(common)?;
    let model = HarvesterModel {
        capacitance_nf: sim.capacitance_nf,
        harvest_ua: sim.harvest_ua,
        load_ua: sim.load_ua,
        v_on: sim.v_on,
        v_off: sim.v_off,
        v_max: sim.v_max,
    };
    let cfg = MonteCarloConfig {
        model,
        horizon: sim.horizon_ns,
        jitter: sim.jitter,
        trials: sim.trials,
        workload_len: sim.workload,
        master_seed: sim.seed,
    };
    let trace = match &sim.trace {
        Some(p) => Some(PowerTrace::from_csv(&read_text(p)?).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let base_trace = match &trace {
        Some(t) => t.clone(),
        None => nvcluster::intermit::generate_trace(&model, sim.horizon_ns)
            .map_err(|e| Failure::Usage(e.to_string()))?,
    };

    // Designs that already embed logic are simulated as given.
    let already_mapped = original.count_ffs(FfKind::LeFf) > 0;
    if already_mapped && sim.paired {
        return Err(Failure::Usage("--paired needs a netlist without LEFF elements".into()));
    }
    let sim_err = |e: nvcluster::intermit::IntermitError| Failure::Analysis(e.to_string());
    let clu_err = |e: nvcluster::clustering::ClusterError| Failure::Analysis(e.to_string());
    let (clustered, baseline) = if already_mapped {
        (original.clone(), None)
    } else {
        let lib = library(lib_opts)?;
        let plan = plan_for(&original, &lib, lib_opts)?;
        let c = apply_plan(&original, &plan).map_err(clu_err)?;
        let b = apply_plan(&original, &ClusterPlan::all_nvff(&original)).map_err(clu_err)?;
        (c, Some(b))
    };
    let dvt = |n: &Netlist| {
        nvcluster::analysis::sensitive_paths(n, &tech)
            .map(|r| r.dvt)
            .map_err(|e| Failure::Analysis(e.to_string()))
    };

    let dir = out_dir(common)?;
    write(&dir.join("trace.csv"), &base_trace.to_csv())?;
    let clustered_dvt = dvt(&clustered)?;
    if sim.paired {
        let baseline = baseline.expect("built above");
        let r = paired_monte_carlo(&baseline, &clustered, &tech, &cfg, Some(&base_trace)).map_err(sim_err)?;
        let baseline_dvt = dvt(&baseline)?;
        write(&dir.join("paired.csv"), &report::paired_csv(&r))?;
        write(
            &dir.join("results.json"),
            &report::paired_json(&header, original.name(), &cfg, baseline_dvt, clustered_dvt, &r),
        )?;
        let a = &r.aggregate;
        println!(
            "trials={} baseline_losses={:.6} clustered_losses={:.6} loss_reduction_ci=[{:.6},{:.6}]",
            a.trials, a.baseline.losses.mean, a.clustered.losses.mean, a.loss_reduction.lo, a.loss_reduction.hi
        );
    } else {
        let r = monte_carlo(&clustered, &tech, &cfg, Some(&base_trace)).map_err(sim_err)?;
        write(
            &dir.join("results.json"),
            &report::single_json(&header, original.name(), &cfg, clustered_dvt, &r),
        )?;
        let a = &r.aggregate;
        println!(
            "trials={} losses={:.6} forward_progress={:.6} dvt={:.6}",
            a.trials, a.losses.mean, a.forward_progress.mean, clustered_dvt
        );
    }
    Ok(())
}
