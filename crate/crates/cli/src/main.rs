use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rmfm::dominance::check_dominance;
use rmfm::effects::ContrastScheme;
use rmfm_cli::anova::{self, AnovaConfig, ModelChoice};
use rmfm_cli::dataset::Dataset;
use rmfm_cli::matrix_file::read_matrix;
use rmfm_cli::verify::{self, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "rmfm", version, about = "Exact RMFM sums of squares, testing targets and F tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// SS, df, F, p and testing target of one effect for each SS type.
    Anova {
        /// Headered CSV: one column per factor plus `y`.
        #[arg(long)]
        data: String,
        /// saturated, additive, a-only, or custom:<effects>, e.g. custom:I,A,B
        #[arg(long, default_value = "saturated")]
        model: String,
        /// Effect letters (A, B, AB) or bit string (10).
        #[arg(long, default_value = "A")]
        effect: String,
        /// 1, 2, 3 or all.
        #[arg(long = "type", default_value = "all")]
        ss_type: String,
        /// `helmert` or a JSON file of per-factor contrast rows.
        #[arg(long, default_value = "helmert")]
        contrasts: String,
        #[arg(long, value_enum, default_value = "table")]
        output: Output,
    },
    /// Run a verification suite: table1, prop1, prop2 (dominance), prop3, fdist.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        factors: Option<usize>,
        /// Levels per factor, e.g. 2,3,2.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Check numerator dominance for user-supplied X, H and L (headerless CSV).
    Dominance {
        #[arg(long)]
        x: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        l: String,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Anova { data, model, effect, ss_type, contrasts, output } => {
            let ds = Dataset::from_path(&data)?;
            let f = ds.nfactors();
            let scheme = match contrasts.as_str() {
                "helmert" | "paper" => ContrastScheme::Helmert,
                path => anova::load_contrasts(path, &ds)?,
            };
            let cfg = AnovaConfig {
                model: ModelChoice::parse(&model, f)?,
                effect: anova::parse_effect(&effect, f)?,
                types: anova::parse_types(&ss_type)?,
                scheme,
            };
            let report = anova::run(&ds, &cfg)?;
            match output {
                Output::Table => print!("{}", report.to_table()),
                Output::Json => println!("{}", serde_json::to_string_pretty(&report.to_json())?),
            }
            Ok(true)
        }
        Command::Verify { suite, seed, trials, factors, dims } => {
            let cfg = VerifyConfig { suite: Suite::parse(&suite)?, seed, trials, factors, dims };
            let report = verify::run(&cfg)?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Dominance { x, h, l } => {
            let r =
                check_dominance(&read_matrix(&x)?, &read_matrix(&h)?, &read_matrix(&l)?).map_err(|e| anyhow!("{e}"))?;
            let b = r.df_bounds;
            println!("sp(P_X L) = sp(H)            {}", r.span_recovered);
            println!("sp(L) in sp(H) + sp(X)perp   {}", r.containment);
            println!("X'P_H X - X'P_L X is nnd     {}", r.nnd_holds);
            println!("df {} = {} <= {} <= {}         {}", b.nu_h, b.nu_pxl, b.nu_l, b.upper, b.holds());
            println!("ncp gap:\n{}", r.ncp_gap);
            Ok(r.all_hold())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
