use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hsps_mdi::decoy::GainTable;
use hsps_mdi::keyrate::{rate_from_gains, simulated_gains};
use hsps_mdi::optics::Basis;
use hsps_mdi::runner::{
    channel_tables, cutoff_distance, emit_csv, emit_gnuplot, optimize_mu_prime, parse_config, parse_distances,
    parse_scenarios, scan, ScanConfig,
};

#[derive(Parser)]
#[command(version, about = "MDI-QKD with heralded single-photon sources")]
struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Comma-separated scenarios, e.g. `W0,H1@0.9,H2`.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `START:STOP:STEP` or a comma-separated list, in km.
    #[arg(long, global = true)]
    distances: Option<String>,
    /// Photon-number cutoff of every series.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Whitespace-separated blocks instead of CSV.
    #[arg(long, global = true)]
    gnuplot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimized key rate against distance for each scenario.
    Scan,
    /// Dump the relay's yield table at one distance.
    Yields {
        #[arg(long, default_value_t = 0.0)]
        distance: f64,
        #[arg(long, default_value = "Z")]
        basis: Basis,
    },
    /// Run the estimator on a gain table CSV (`basis,x,y,class,gain,qber`).
    Bound {
        #[arg(long)]
        gains: PathBuf,
        #[arg(long)]
        mu_prime: f64,
        /// Weak intensity; defaults to the scenario's policy.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Optimize `mu'` at one distance.
    Optimize {
        #[arg(long)]
        distance: f64,
        /// Also write the simulated gain records at the optimum.
        #[arg(long)]
        gains_out: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> hsps_mdi::Result<ScanConfig> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(File::open(path)?)?,
        None => ScanConfig::default(),
    };
    if let Some(s) = &cli.scenario {
        cfg.scenarios = parse_scenarios(s, cfg.heralding.efficiency())?;
    }
    if let Some(d) = &cli.distances {
        cfg.distances = parse_distances(d)?;
    }
    if let Some(n) = cli.cutoff {
        cfg.link = cfg.link.to_builder().cutoff(n).photon_cap(cfg.link.photon_cap().max(2 * n)).build()?;
    }
    Ok(cfg)
}

fn sink(out: &Option<PathBuf>) -> hsps_mdi::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> hsps_mdi::Result<()> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Scan => {
            let points = scan(&cfg)?;
            let out = sink(&cli.out)?;
            if cli.gnuplot {
                emit_gnuplot(&points, out)?;
            } else {
                emit_csv(&points, out)?;
            }
            for sc in &cfg.scenarios {
                match cutoff_distance(&points, sc) {
                    Some(d) => eprintln!("{sc}: cutoff {d} km"),
                    None => eprintln!("{sc}: no positive rate"),
                }
            }
        }
        Command::Yields { distance, basis } => {
            let link = cfg.link.at_distance(*distance)?;
            hsps_mdi::optics::yield_table(&link, *basis)?.write_csv(sink(&cli.out)?)?;
        }
        Command::Bound { gains, mu_prime, mu } => {
            let table = GainTable::read_csv(File::open(gains)?)?;
            let settings = cfg.rate_settings();
            let mut points = Vec::new();
            for sc in cfg.scenarios.iter().filter(|s| !s.kind().is_asymptotic()) {
                let mu = mu.unwrap_or_else(|| sc.weak_intensity(*mu_prime, cfg.mu_fixed));
                points.push(rate_from_gains(sc, &table, None, mu, *mu_prime, cfg.link.cutoff(), &settings)?);
            }
            emit_csv(&points, sink(&cli.out)?)?;
        }
        Command::Optimize { distance, gains_out } => {
            let tables = channel_tables(&cfg.link, &[*distance])?;
            let mut points = Vec::new();
            let mut gains = GainTable::new();
            for sc in &cfg.scenarios {
                let p = optimize_mu_prime(sc, &tables[0], &cfg)?;
                if gains_out.is_some() {
                    let sim = simulated_gains(sc, &tables[0], p.mu, p.mu_prime, cfg.heralding.dark_rate())?;
                    for rec in sim.records() {
                        if gains.get(rec.basis, rec.alice_intensity, rec.bob_intensity, rec.trigger_class).is_none() {
                            gains.insert(*rec)?;
                        }
                    }
                }
                points.push(p);
            }
            emit_csv(&points, sink(&cli.out)?)?;
            if let Some(path) = gains_out {
                gains.write_csv(BufWriter::new(File::create(path)?))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
