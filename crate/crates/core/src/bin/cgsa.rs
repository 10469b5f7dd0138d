use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cgsa::benchmarks::reference_table_json;
use cgsa::estimators::Strategy;
use cgsa::harness::{
    annotate_sweep, resolve_reference, run_convergence, run_estimate, run_estimator_comparison, run_sweep,
    write_convergence, write_records, ExperimentConfig, Method, OutputFormat, SEED_ENV,
};
use cgsa::quadrature::write_sweep_csv;
use cgsa::Error;

#[derive(Parser)]
#[command(name = "cgsa", version, about = "Sobol' indices on constrained input domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Indices from one run at the largest N (or one quadrature grid).
    Estimate(Opts),
    /// RMSE against a reference over the sample size schedule.
    Converge(Opts),
    /// Quadrature over a list of constraint parameters.
    Sweep(Opts),
    /// DLR vs modified-Sobol' main effects on shared designs.
    Compare(Opts),
    /// Print the stored reference table as JSON.
    References {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Opts {
    /// JSON experiment configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    /// Model parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    model_param: Option<Vec<f64>>,
    #[arg(long)]
    constraint: Option<String>,
    /// Constraint parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    param: Option<Vec<f64>>,
    #[arg(long)]
    method: Option<Method>,
    /// `dlr` (pooled) or `sk` (modified Sobol').
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Single sample size; replaces the schedule.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    /// N_y.
    #[arg(long)]
    bins: Option<usize>,
    /// N'_z.
    #[arg(long)]
    nz_aux: Option<usize>,
    #[arg(long)]
    grid_k: Option<usize>,
    /// Restrict quadrature grids to the bounding box of the domain.
    #[arg(long)]
    bracket: bool,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Offset of the first low-discrepancy point.
    #[arg(long)]
    skip: Option<u64>,
    /// Reference case id.
    #[arg(long)]
    reference: Option<String>,
    /// Sweep parameter values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

impl Opts {
    fn resolve(self) -> cgsa::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(m) = self.model {
            if self.model_param.is_none() && m != c.model {
                c.model_params.clear();
            }
            c.model = m;
        }
        if let Some(p) = self.model_param {
            c.model_params = p;
        }
        if let Some(k) = self.constraint {
            if self.param.is_none() && k != c.constraint {
                c.constraint_params.clear();
            }
            c.constraint = k;
        }
        if let Some(p) = self.param {
            c.constraint_params = p;
        }
        if let Some(m) = self.method {
            c.method = m;
        }
        if let Some(s) = self.strategy {
            c.strategy = s;
        }
        if let Some(s) = self.schedule {
            c.schedule = s;
        }
        if let Some(n) = self.n {
            c.schedule = vec![n];
        }
        c.bins = self.bins.or(c.bins);
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = v; })*};
        }
        set!(nz_aux, grid_k, replicates, seed, skip, format);
        c.bracket |= self.bracket;
        c.reference = self.reference.or(c.reference);
        if let Some(v) = self.values {
            c.sweep_values = v;
        }
        c.out = self.out.or(c.out);
        c.apply_seed_env()?;
        Ok(c)
    }
}

fn output(config: &ExperimentConfig) -> cgsa::Result<Box<dyn Write>> {
    Ok(match &config.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> cgsa::Result<()> {
    match cli.command {
        Command::Estimate(o) => {
            let c = o.resolve()?;
            let records = run_estimate(&c)?.records(&c);
            let mut w = output(&c)?;
            write_records(&records, c.format, &mut w)?;
            w.flush()?;
        }
        Command::Converge(o) => {
            let c = o.resolve()?;
            let r = resolve_reference(&c)?;
            let report = run_convergence(&c, &r)?;
            for s in &report.series {
                if let Some(f) = s.fit {
                    eprintln!("{}: slope {:.3}", s.index, f.slope);
                }
            }
            let mut w = output(&c)?;
            write_convergence(&[&report], c.format, &mut w)?;
            w.flush()?;
        }
        Command::Sweep(o) => {
            let c = o.resolve()?;
            let rows = run_sweep(&c)?;
            for note in annotate_sweep(&c, &rows) {
                eprintln!("{note}");
            }
            let dim = c.builtin_model()?.dimension();
            let mut w = output(&c)?;
            match c.format {
                OutputFormat::Csv => write_sweep_csv(&rows, dim, &mut w)?,
                OutputFormat::Json => {
                    serde_json::to_writer_pretty(&mut w, &rows)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
        }
        Command::Compare(o) => {
            let c = o.resolve()?;
            let r = resolve_reference(&c)?;
            let cmp = run_estimator_comparison(&c, &r)?;
            eprintln!("{}", cmp.summary);
            let mut w = output(&c)?;
            write_convergence(&[&cmp.dlr, &cmp.modified], c.format, &mut w)?;
            w.flush()?;
        }
        Command::References { out } => {
            let text = reference_table_json()?;
            match out {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => writeln!(io::stdout().lock(), "{text}")?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cgsa: {e}");
            if matches!(e, Error::Config { .. }) && e.to_string().contains("seed") {
                eprintln!("(the seed may come from {SEED_ENV})");
            }
            ExitCode::from(match e {
                Error::Config { .. } | Error::Unknown { .. } | Error::InvalidParameter(_) => 2,
                _ => 1,
            })
        }
    }
}
