//! Argument handling: flags, the key=value config file (flags win), and the
//! inline generator spec.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use driftkit::detectors::{D3Config, OcddConfig};
use driftkit::evaluation::{DetectorConfig, UpdateMode};
use driftkit::learners::HoeffdingConfig;
use driftkit::streams::{
    gen_hyperplane, gen_rbf_switch, gen_sea, load_arff, load_csv, strip_tags, CsvOptions,
    DriftPoint, DriftSchedule, HyperplaneSpec, RbfSwitchSpec, SeaSpec, Transition,
};
use driftkit::suds::SelectorKind;
use driftkit::Sample;

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Dataset file (.csv or .arff); label in the last column.
    #[arg(long, conflicts_with = "generate")]
    pub input: Option<PathBuf>,
    /// Inline generator spec, e.g.
    /// "sea,length=20000,noise=0.1,drifts=5000;12000:gradual:500".
    #[arg(long)]
    pub generate: Option<String>,
    /// The CSV file has a header row.
    #[arg(long)]
    pub header: bool,
    /// Plain-text key=value configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Detector: d3 | ocdd.
    #[arg(long)]
    pub detector: Option<String>,
    /// Selector: baseline | suds.
    #[arg(long)]
    pub selector: Option<String>,
    /// Window size.
    #[arg(long)]
    pub w: Option<usize>,
    /// New-window fraction (D3) or outlier threshold (OCDD).
    #[arg(long)]
    pub rho: Option<f64>,
    /// D3 separability threshold.
    #[arg(long)]
    pub tau: Option<f64>,
    /// OCDD one-class SVM nu.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Explicit RBF width for OCDD (default: the scale convention).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Update mode: prequential | retrain-only.
    #[arg(long)]
    pub update_mode: Option<String>,
    /// Harness repeats; per-repeat seeds are seed + repeat index.
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: tsv | md.
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads for independent runs (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated window sizes (default: the published grid).
    #[arg(long)]
    pub w_list: Option<String>,
    /// Comma-separated rho values.
    #[arg(long)]
    pub rho_list: Option<String>,
    /// Comma-separated tau values (D3).
    #[arg(long)]
    pub tau_list: Option<String>,
    /// Comma-separated nu values (OCDD).
    #[arg(long)]
    pub nu_list: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct RecomputeArgs {
    /// Table with header `dataset method accuracy annotated total [group]`,
    /// tab-separated; accuracy in percent.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: tsv | md.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Markdown,
}

/// Everything a run or sweep needs, after merging flags and config file.
pub struct Resolved {
    pub dataset_name: String,
    pub stream: Vec<Sample<f64>>,
    pub detector_is_d3: bool,
    pub suds: bool,
    pub w: Option<usize>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub nu: Option<f64>,
    pub gamma: Option<f64>,
    pub update_mode: UpdateMode,
    pub repeats: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: usize,
}

impl Resolved {
    pub fn detector_config(&self) -> Result<DetectorConfig> {
        Ok(if self.detector_is_d3 {
            let mut c = D3Config::default();
            if let Some(w) = self.w {
                c.w = w;
            }
            if let Some(rho) = self.rho {
                c.rho = rho;
            }
            if let Some(tau) = self.tau {
                c.tau = tau;
            }
            c.validate()?;
            DetectorConfig::D3(c)
        } else {
            let mut c = OcddConfig::default();
            if let Some(w) = self.w {
                c.w = w;
            }
            if let Some(rho) = self.rho {
                c.rho = rho;
            }
            if let Some(nu) = self.nu {
                c.nu = nu;
            }
            c.gamma = self.gamma;
            c.validate()?;
            DetectorConfig::Ocdd(c)
        })
    }

    pub fn selector(&self) -> SelectorKind {
        match (self.detector_is_d3, self.suds) {
            (true, false) => SelectorKind::BaselineD3,
            (true, true) => SelectorKind::SudsD3,
            (false, false) => SelectorKind::BaselineOcdd,
            (false, true) => SelectorKind::SudsOcdd,
        }
    }

    pub fn classifier(&self) -> HoeffdingConfig {
        HoeffdingConfig::default()
    }
}

pub fn resolve(args: &RunArgs) -> Result<Resolved> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let get = |key: &str| file.get(key).cloned();

    let detector = args
        .detector
        .clone()
        .or_else(|| get("detector"))
        .unwrap_or_else(|| "d3".into());
    let detector_is_d3 = match detector.as_str() {
        "d3" => true,
        "ocdd" => false,
        other => bail!("invalid detector `{other}` (expected d3 or ocdd)"),
    };

    let selector = args
        .selector
        .clone()
        .or_else(|| get("selector"))
        .unwrap_or_else(|| "baseline".into());
    let suds = match selector.as_str() {
        "baseline" => false,
        "suds" => true,
        other => bail!("invalid selector `{other}` (expected baseline or suds)"),
    };

    let update_mode = match args
        .update_mode
        .clone()
        .or_else(|| get("update-mode"))
        .unwrap_or_else(|| "prequential".into())
        .as_str()
    {
        "prequential" => UpdateMode::PrequentialUpdate,
        "retrain-only" => UpdateMode::RetrainOnly,
        other => bail!("invalid update mode `{other}` (expected prequential or retrain-only)"),
    };

    let format = parse_format(
        &args
            .format
            .clone()
            .or_else(|| get("format"))
            .unwrap_or_else(|| "tsv".into()),
    )?;

    let parse_from_file = |key: &str| -> Result<Option<f64>> {
        get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| anyhow!("config key `{key}` has a non-numeric value `{v}`"))
            })
            .transpose()
    };

    let repeats = match args.repeats {
        Some(r) => r,
        None => get("repeats")
            .map(|v| v.parse::<usize>().context("config key `repeats`"))
            .transpose()?
            .unwrap_or(1),
    };
    if repeats < 1 {
        bail!("repeats must be at least 1");
    }
    let seed = match args.seed {
        Some(s) => s,
        None => get("seed")
            .map(|v| v.parse::<u64>().context("config key `seed`"))
            .transpose()?
            .unwrap_or(0),
    };
    let w = match args.w {
        Some(w) => Some(w),
        None => get("w")
            .map(|v| v.parse::<usize>().context("config key `w`"))
            .transpose()?,
    };
    let rho = match args.rho {
        Some(v) => Some(v),
        None => parse_from_file("rho")?,
    };
    let tau = match args.tau {
        Some(v) => Some(v),
        None => parse_from_file("tau")?,
    };
    let nu = match args.nu {
        Some(v) => Some(v),
        None => parse_from_file("nu")?,
    };
    let gamma = match args.gamma {
        Some(v) => Some(v),
        None => parse_from_file("gamma")?,
    };
    let jobs = match args.jobs {
        Some(j) => j,
        None => get("jobs")
            .map(|v| v.parse::<usize>().context("config key `jobs`"))
            .transpose()?
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(usize::from)
                    .unwrap_or(1)
            }),
    };
    if jobs < 1 {
        bail!("jobs must be at least 1");
    }

    let header = args.header || get("header").map(|v| v == "true").unwrap_or(false);
    let input = args
        .input
        .clone()
        .or_else(|| get("input").map(PathBuf::from));
    let generate = args.generate.clone().or_else(|| get("generate"));

    let (dataset_name, stream) = match (&input, &generate) {
        (Some(_), Some(_)) => bail!("--input and --generate are mutually exclusive"),
        (Some(path), None) => load_stream(path, header)?,
        (None, Some(spec)) => parse_generator(spec, seed)?,
        (None, None) => bail!("one of --input or --generate is required"),
    };

    Ok(Resolved {
        dataset_name,
        stream,
        detector_is_d3,
        suds,
        w,
        rho,
        tau,
        nu,
        gamma,
        update_mode,
        repeats,
        seed,
        out: args.out.clone().or_else(|| get("out").map(PathBuf::from)),
        format,
        jobs,
    })
}

pub fn parse_format(value: &str) -> Result<OutputFormat> {
    match value {
        "tsv" => Ok(OutputFormat::Tsv),
        "md" => Ok(OutputFormat::Markdown),
        other => bail!("invalid format `{other}` (expected tsv or md)"),
    }
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let content =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), i + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn load_stream(path: &Path, header: bool) -> Result<(String, Vec<Sample<f64>>)> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let extension = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    let stream = if extension == "arff" {
        load_arff(path)?
    } else {
        load_csv(path, &CsvOptions { has_header: header })?
    };
    Ok((name, stream))
}

/// Inline generator specs: `kind[,key=value]*`. List-valued keys use `;`
/// separators; drift entries are `IDX`, `IDX:abrupt` or `IDX:gradual:WIDTH`.
pub fn parse_generator(spec: &str, default_seed: u64) -> Result<(String, Vec<Sample<f64>>)> {
    let mut parts = spec.split(',').map(str::trim);
    let kind = parts.next().unwrap_or_default().to_string();
    if kind.is_empty() {
        bail!("empty generator spec");
    }
    let mut keys: BTreeMap<String, String> = BTreeMap::new();
    for part in parts {
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("generator spec field `{part}` is not key=value"))?;
        keys.insert(key.trim().to_string(), value.trim().to_string());
    }

    let length: usize = parse_key(&keys, "length")?.unwrap_or(10_000);
    let seed: u64 = parse_key(&keys, "seed")?.unwrap_or(default_seed);
    let schedule = match keys.get("drifts") {
        Some(value) => parse_drifts(value)?,
        None => DriftSchedule::none(),
    };

    let tagged = match kind.as_str() {
        "sea" => {
            let spec = SeaSpec {
                length,
                seed,
                noise: parse_key(&keys, "noise")?.unwrap_or(0.1),
                thresholds: match keys.get("thresholds") {
                    Some(v) => parse_list(v)?,
                    None => SeaSpec::default().thresholds,
                },
                schedule,
            };
            gen_sea::<f64>(&spec)?
        }
        "hyperplane" => {
            let spec = HyperplaneSpec {
                dim: parse_key(&keys, "dim")?.unwrap_or(5),
                length,
                seed,
                drift_rate: parse_key(&keys, "rate")?.unwrap_or(0.001),
                flip_probability: parse_key(&keys, "flip")?.unwrap_or(0.1),
                schedule,
            };
            gen_hyperplane::<f64>(&spec)?
        }
        "rbf" => {
            let k: usize = parse_key(&keys, "k")?.unwrap_or(2);
            let radius: f64 = parse_key(&keys, "radius")?.unwrap_or(1.0);
            let sigma: f64 = parse_key(&keys, "sigma")?.unwrap_or(0.1);
            let mut spec = RbfSwitchSpec::ring(k, radius, sigma, length, seed);
            spec.noise = parse_key(&keys, "noise")?.unwrap_or(0.0);
            spec.noise_scale = parse_key(&keys, "noise_scale")?.unwrap_or(50.0);
            spec.schedule = schedule;
            gen_rbf_switch::<f64>(&spec)?
        }
        other => bail!("unknown generator `{other}` (expected sea, hyperplane or rbf)"),
    };
    Ok((kind, strip_tags(&tagged)))
}

fn parse_key<T: std::str::FromStr>(
    keys: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    keys.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| anyhow!("generator key `{key}` has an invalid value `{v}`"))
        })
        .transpose()
}

fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(';')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("invalid list element `{v}`"))
        })
        .collect()
}

fn parse_drifts(value: &str) -> Result<DriftSchedule> {
    let mut points = Vec::new();
    for entry in value.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let fields: Vec<&str> = entry.split(':').collect();
        let at_index: usize = fields[0]
            .parse()
            .map_err(|_| anyhow!("invalid drift index `{}`", fields[0]))?;
        let transition = match fields.get(1).copied() {
            None | Some("abrupt") => Transition::Abrupt,
            Some("gradual") => {
                let width: usize = fields
                    .get(2)
                    .ok_or_else(|| anyhow!("gradual drift entry `{entry}` is missing a width"))?
                    .parse()
                    .map_err(|_| anyhow!("invalid gradual width in `{entry}`"))?;
                Transition::Gradual { width }
            }
            Some(other) => bail!("unknown transition `{other}` in drift entry `{entry}`"),
        };
        points.push(DriftPoint {
            at_index,
            transition,
        });
    }
    Ok(DriftSchedule { points })
}

/// Comma-separated numeric grid flag.
pub fn parse_grid<T: std::str::FromStr>(value: &str, flag: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| anyhow!("invalid value `{v}` in --{flag}"))
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        bail!("--{flag} must not be empty");
    }
    Ok(items)
}
