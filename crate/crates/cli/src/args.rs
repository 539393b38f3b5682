use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use spinring_core::scan::DEFAULT_TOLERANCE;
use spinring_core::{ModelBuilder, ModelSpec, SitePair};

/// Environment variable naming the directory used when `--out` is absent.
pub const OUT_DIR_ENV: &str = "SPINRING_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "spinring",
    version,
    about = "Thermal entanglement in small XX spin rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence of a pair against scaled temperature tau = T/|J|.
    Curve(CommonArgs),
    /// Critical temperature of a pair.
    Tc(CommonArgs),
    /// Reduced two-site density matrix at one temperature.
    Rho(CommonArgs),
    /// Critical temperature for a list of field strengths.
    Sweep(CommonArgs),
    /// Data behind the uniform-field and impurity-field figures.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed forms against exact diagonalization on the calibration grid.
    Calibrate(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2a,
    Fig2b,
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; defaults to $SPINRING_OUT_DIR/<command>.<ext> or stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// key = value file mirroring the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sites: Option<usize>,
    /// Coupling J (J > 0 antiferromagnetic).
    #[arg(long, allow_hyphen_values = true)]
    pub coupling: Option<f64>,
    /// Weight of the sigma^z sigma^z term (0 = XX model).
    #[arg(long, allow_hyphen_values = true)]
    pub zz_weight: Option<f64>,
    /// Per-site field b_n; repeat or give a comma list.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub field: Vec<f64>,
    /// Same field b on every site.
    #[arg(long, allow_hyphen_values = true)]
    pub uniform_field: Option<f64>,
    /// Field B·|J| on the last site only.
    #[arg(long, allow_hyphen_values = true)]
    pub impurity_field: Option<f64>,
    /// cyclic or open.
    #[arg(long)]
    pub boundary: Option<String>,
    /// Pair of sites, 1-based, e.g. 1,3.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long)]
    pub tau_start: Option<f64>,
    #[arg(long)]
    pub tau_stop: Option<f64>,
    #[arg(long)]
    pub tau_count: Option<usize>,
    /// Temperature bracket t_low,t_high; defaults to (0.01, 5)·|J|.
    #[arg(long)]
    pub bracket: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Temperature for `rho`.
    #[arg(long, allow_hyphen_values = true)]
    pub temperature: Option<f64>,
    /// Field strengths for `sweep` and the impurity figures (comma list).
    #[arg(long, allow_hyphen_values = true)]
    pub strengths: Option<String>,
    /// Engine field per unit strength for `sweep`: uniform or impurity.
    #[arg(long)]
    pub layout: Option<String>,
    /// Multiplier from strength to engine field in `sweep` (uniform layout).
    #[arg(long, allow_hyphen_values = true)]
    pub field_scale: Option<f64>,
    /// Use a tau-grid scan before bisecting (curves that vanish at low T).
    #[arg(long)]
    pub scan: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepLayout {
    Uniform { scale: f64 },
    Impurity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub figure: Option<FigureId>,
    pub model: Option<ModelSpec>,
    pub coupling_override: Option<f64>,
    pub pair: SitePair,
    pub grid: TauGrid,
    pub bracket: Option<(f64, f64)>,
    pub tol: f64,
    pub temperature: Option<f64>,
    pub strengths: Option<Vec<f64>>,
    pub layout: SweepLayout,
    pub scan: bool,
    pub output: Output,
}

/// Values from the config file, keyed without leading dashes.
fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected 'key = value'", path.display(), lineno + 1))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key == "field" {
            let entry: &mut String = map.entry(key).or_default();
            if !entry.is_empty() {
                entry.push(',');
            }
            entry.push_str(v.trim());
        } else {
            map.insert(key, v.trim().to_string());
        }
    }
    Ok(map)
}

const RUN_KEYS: &[&str] = &[
    "pair",
    "tau-start",
    "tau-stop",
    "tau-count",
    "bracket",
    "tol",
    "temperature",
    "strengths",
    "layout",
    "field-scale",
    "scan",
    "format",
    "out",
];

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("'{}' is not a number", p.trim()))
        })
        .collect()
}

fn parse_pair(s: &str) -> Result<SitePair> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        bail!("pair must look like '1,2', got '{s}'");
    };
    let a: usize = a.parse().map_err(|_| anyhow!("bad site '{a}'"))?;
    let b: usize = b.parse().map_err(|_| anyhow!("bad site '{b}'"))?;
    if a == 0 || b == 0 {
        bail!("pair sites are 1-based");
    }
    Ok(SitePair::new(a - 1, b - 1)?)
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| anyhow!("invalid value '{s}' for '{key}'"))
}

impl RunConfig {
    pub fn resolve(command: &str, figure: Option<FigureId>, args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        for key in file.keys() {
            if !RUN_KEYS.contains(&key.as_str()) && !ModelBuilder::is_model_key(key) {
                bail!("unknown config key '{key}'");
            }
        }
        let get = |key: &str| file.get(key).map(String::as_str);

        let mut builder = ModelBuilder::default();
        for (key, value) in &file {
            if ModelBuilder::is_model_key(key) {
                builder
                    .set(key, value)
                    .with_context(|| format!("config key '{key}'"))?;
            }
        }
        // Flags override the file.
        if let Some(n) = args.sites {
            builder.sites = Some(n);
        }
        if let Some(j) = args.coupling {
            builder.coupling = Some(j);
        }
        if let Some(d) = args.zz_weight {
            builder.zz_weight = Some(d);
        }
        let flag_field =
            !args.field.is_empty() || args.uniform_field.is_some() || args.impurity_field.is_some();
        if flag_field {
            builder.fields = args.field.clone();
            builder.uniform_field = args.uniform_field;
            builder.impurity_field = args.impurity_field;
        }
        if let Some(b) = &args.boundary {
            builder.boundary = Some(b.parse()?);
        }

        let model = if figure.is_some() {
            None
        } else {
            Some(builder.build().context("invalid model")?)
        };
        let coupling_override = args.coupling.or(builder.coupling);

        let pair = match args.pair.as_deref().or(get("pair")) {
            Some(s) => parse_pair(s)?,
            None => SitePair::new(0, 1)?,
        };

        let grid = TauGrid {
            start: match args.tau_start {
                Some(v) => v,
                None => get("tau-start")
                    .map(|s| parse_num("tau-start", s))
                    .transpose()?
                    .unwrap_or(0.02),
            },
            stop: match args.tau_stop {
                Some(v) => v,
                None => get("tau-stop")
                    .map(|s| parse_num("tau-stop", s))
                    .transpose()?
                    .unwrap_or(3.0),
            },
            count: match args.tau_count {
                Some(v) => v,
                None => get("tau-count")
                    .map(|s| parse_num("tau-count", s))
                    .transpose()?
                    .unwrap_or(150),
            },
        };
        if grid.count < 2 {
            bail!("tau count must be at least 2");
        }
        if !(grid.start > 0.0 && grid.start < grid.stop) {
            bail!("tau grid needs 0 < start < stop");
        }

        let bracket = match args.bracket.as_deref().or(get("bracket")) {
            Some(s) => {
                let v = parse_list(s)?;
                let [lo, hi] = v.as_slice() else {
                    bail!("bracket must be 't_low,t_high'");
                };
                Some((*lo, *hi))
            }
            None => None,
        };
        let tol = match args.tol {
            Some(t) => t,
            None => get("tol")
                .map(|s| parse_num("tol", s))
                .transpose()?
                .unwrap_or(DEFAULT_TOLERANCE),
        };
        let temperature = match args.temperature {
            Some(t) => Some(t),
            None => get("temperature")
                .map(|s| parse_num("temperature", s))
                .transpose()?,
        };
        let strengths = args
            .strengths
            .as_deref()
            .or(get("strengths"))
            .map(parse_list)
            .transpose()?;
        let scale = match args.field_scale {
            Some(s) => s,
            None => get("field-scale")
                .map(|s| parse_num("field-scale", s))
                .transpose()?
                .unwrap_or(1.0),
        };
        let layout = match args
            .layout
            .as_deref()
            .or(get("layout"))
            .unwrap_or("uniform")
        {
            "uniform" => SweepLayout::Uniform { scale },
            "impurity" => SweepLayout::Impurity,
            other => bail!("unknown layout '{other}' (uniform or impurity)"),
        };
        let scan = args.scan || matches!(get("scan"), Some("true" | "1" | "yes"));

        let format = match args.output.format {
            Some(f) => f,
            None => match get("format") {
                Some(s) => Format::from_str(s, true).map_err(|e| anyhow!(e))?,
                None => Format::Csv,
            },
        };
        let out = args
            .output
            .out
            .clone()
            .or_else(|| get("out").map(PathBuf::from));

        Ok(Self {
            command: command.to_string(),
            figure,
            model,
            coupling_override,
            pair,
            grid,
            bracket,
            tol,
            temperature,
            strengths,
            layout,
            scan,
            output: Output {
                format,
                path: resolve_out(out, command, figure, format),
            },
        })
    }
}

pub fn resolve_out(
    explicit: Option<PathBuf>,
    command: &str,
    figure: Option<FigureId>,
    format: Format,
) -> Option<PathBuf> {
    explicit.or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV)?;
        let stem = match figure {
            Some(id) => format!("{command}-{id}"),
            None => command.to_string(),
        };
        Some(PathBuf::from(dir).join(format!("{stem}.{}", format.extension())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_one_based() {
        assert_eq!(parse_pair("1,3").unwrap(), SitePair::new(0, 2).unwrap());
        assert!(parse_pair("0,1").is_err());
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("2,2").is_err());
    }

    #[test]
    fn flags_build_a_model() {
        let args = CommonArgs {
            sites: Some(3),
            coupling: Some(-1.0),
            impurity_field: Some(2.0),
            ..Default::default()
        };
        let cfg = RunConfig::resolve("curve", None, &args).unwrap();
        assert_eq!(cfg.model.unwrap().fields(), &[0.0, 0.0, 2.0]);
        assert_eq!(
            cfg.grid,
            TauGrid {
                start: 0.02,
                stop: 3.0,
                count: 150
            }
        );
        assert_eq!(cfg.output.format, Format::Csv);
    }

    #[test]
    fn grid_validation() {
        let mut args = CommonArgs {
            sites: Some(2),
            coupling: Some(1.0),
            tau_count: Some(1),
            ..Default::default()
        };
        assert!(RunConfig::resolve("curve", None, &args).is_err());
        args.tau_count = Some(10);
        args.tau_start = Some(2.0);
        args.tau_stop = Some(1.0);
        assert!(RunConfig::resolve("curve", None, &args).is_err());
    }
}
