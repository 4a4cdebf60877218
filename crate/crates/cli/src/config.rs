use std::fmt;
use std::fs;
use std::path::PathBuf;

use affinelens::enumerate::slice_network;
use affinelens::{HPolytope, Network, Parallelism, Tolerances};

use crate::CommonArgs;

#[derive(Debug)]
pub enum CliError {
    Mismatch(String),
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Mismatch(_) => 1,
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mismatch(m) | Self::Usage(m) | Self::Numerical(m) => f.write_str(m),
        }
    }
}

pub struct RunConfig {
    pub network: Network,
    pub network_label: String,
    pub domain: HPolytope,
    pub domain_label: String,
    pub seed: Option<Vec<f64>>,
    pub parallelism: Parallelism,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub strict: bool,
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

pub fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("{what}: {s:?} is not a finite number")))
        })
        .collect()
}

fn box_domain(spec: &[String]) -> Result<(HPolytope, String), CliError> {
    let d: usize = spec[0]
        .parse()
        .ok()
        .filter(|d| *d > 0)
        .ok_or_else(|| CliError::Usage(format!("--box: dimension {:?} is not a positive integer", spec[0])))?;
    let h = match spec.get(1) {
        Some(s) => s
            .parse::<f64>()
            .ok()
            .filter(|h| h.is_finite() && *h > 0.0)
            .ok_or_else(|| CliError::Usage(format!("--box: half-width {s:?} is not a positive number")))?,
        None => 1.0,
    };
    let poly = HPolytope::cube(d, h).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((poly, format!("box:{d}:{h}")))
}

pub fn network_path(args: &CommonArgs) -> Result<&str, CliError> {
    args.network
        .as_deref()
        .ok_or_else(|| CliError::Usage("--network is required".into()))
}

impl RunConfig {
    pub fn load(args: &CommonArgs) -> Result<Self, CliError> {
        if args.workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let path = network_path(args)?;
        let mut network = Network::from_json(&read(path)?).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        let mut network_label = path.to_string();

        if let Some(s) = &args.slice {
            let base = parse_floats(&s[0], "--slice BASE")?;
            let d1 = parse_floats(&s[1], "--slice DIR1")?;
            let d2 = parse_floats(&s[2], "--slice DIR2")?;
            network = slice_network(&network, &base, &d1, &d2)?;
            network_label = format!("{path} (sliced)");
        }

        let (domain, domain_label) = match (&args.domain, &args.box_) {
            (Some(p), _) => (
                HPolytope::from_json(&read(p)?).map_err(|e| CliError::Usage(format!("{p}: {e}")))?,
                p.clone(),
            ),
            (None, Some(spec)) => box_domain(spec)?,
            (None, None) if args.slice.is_some() => box_domain(&["2".to_string()])?,
            (None, None) => return Err(CliError::Usage("one of --domain or --box is required".into())),
        };
        if domain.dim() != network.input_dim() {
            return Err(CliError::Usage(format!(
                "domain has dimension {} but the network expects {}",
                domain.dim(),
                network.input_dim()
            )));
        }
        let seed = args
            .seed_point
            .as_deref()
            .map(|s| parse_floats(s, "--seed-point"))
            .transpose()?;

        let out = PathBuf::from(&args.out);
        fs::create_dir_all(&out).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
        Ok(Self {
            network,
            network_label,
            domain,
            domain_label,
            seed,
            parallelism: Parallelism::from_workers(args.workers),
            tolerances: Tolerances::from_env(),
            out,
            strict: args.strict,
        })
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

pub fn read_report(path: &str) -> Result<affinelens::report::EnumerationReport, CliError> {
    affinelens::report::EnumerationReport::from_json(&read(path)?).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}
