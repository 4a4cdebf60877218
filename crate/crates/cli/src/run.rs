use std::fs;
use std::path::Path;

use affinelens::analysis::{label_regions, region_statistics, render_svg_2d, RenderSpec};
use affinelens::oracle::{enumerate_patterns_bruteforce, grid_sample_patterns, EXHAUSTIVE_CAP};
use affinelens::report::EnumerationReport;
use affinelens::{EnumerationResult, Enumerator};

use crate::config::{read_report, CliError, RunConfig};
use crate::CommonArgs;

fn enumerate_with(cfg: &RunConfig) -> Result<EnumerationResult, CliError> {
    let enumerator = Enumerator::new(&cfg.network, cfg.tolerances, cfg.parallelism)?;
    let result = enumerator.find_cpas(&cfg.domain, cfg.seed.as_deref())?;
    for (l, n) in result.per_layer_counts.iter().enumerate() {
        eprintln!("layer {}: {n} regions", l + 1);
    }
    Ok(result)
}

fn check_strict(cfg: &RunConfig, result: &EnumerationResult) -> Result<(), CliError> {
    let skipped = result.stats.skipped_candidates;
    if skipped > 0 {
        eprintln!("warning: {skipped} candidate regions skipped after LP failures; completeness not verified");
        if cfg.strict {
            return Err(CliError::Mismatch(format!("{skipped} skipped candidates under --strict")));
        }
    }
    Ok(())
}

pub fn enumerate(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(args)?;
    let result = enumerate_with(&cfg)?;
    let report = EnumerationReport::new(&cfg.network_label, &cfg.domain_label, &result);
    let path = cfg.write("report.json", &report.to_json())?;
    println!("regions: {}", result.regions.len());
    println!("report: {}", path.display());
    check_strict(&cfg, &result)
}

pub fn verify(args: &CommonArgs, report_path: Option<&str>, resolution: Option<usize>) -> Result<(), CliError> {
    let cfg = RunConfig::load(args)?;
    let neurons = cfg.network.neuron_count();
    if neurons > EXHAUSTIVE_CAP {
        return Err(CliError::Usage(format!(
            "{neurons} activation neurons exceed the verification cap of {EXHAUSTIVE_CAP}"
        )));
    }
    let mut report = match report_path {
        Some(p) => read_report(p)?,
        None => {
            let result = enumerate_with(&cfg)?;
            check_strict(&cfg, &result)?;
            EnumerationReport::new(&cfg.network_label, &cfg.domain_label, &result)
        }
    };
    let oracle = enumerate_patterns_bruteforce(&cfg.network, &cfg.domain, cfg.tolerances, cfg.parallelism)?;
    let cmp = report.attach_oracle(&oracle).clone();
    let path = cfg.write("report.json", &report.to_json())?;
    println!("oracle patterns: {}", cmp.pattern_count);
    println!("report regions: {}", report.regions.len());
    println!("missing: {}  extra: {}", cmp.missing.len(), cmp.extra.len());
    println!("report: {}", path.display());

    let mut grid_misses = 0;
    if let Some(res) = resolution {
        let grid = grid_sample_patterns(&cfg.network, &cfg.domain, res)?;
        let keys = report.sign_keys();
        grid_misses = grid.patterns.iter().filter(|p| !keys.contains(&p.to_bitstring())).count();
        println!("grid patterns: {} ({} absent from the report)", grid.len(), grid_misses);
    }
    if !cmp.matches || grid_misses > 0 {
        return Err(CliError::Mismatch("report does not match the oracle".into()));
    }
    println!("match: true");
    Ok(())
}

pub fn render(args: &CommonArgs, mode: &str, band: f64, width: u32, height: u32, color_seed: u64) -> Result<(), CliError> {
    let cfg = RunConfig::load(args)?;
    if cfg.domain.dim() != 2 {
        return Err(CliError::Usage(format!(
            "render needs a 2D domain; got dimension {} (use --slice BASE DIR1 DIR2)",
            cfg.domain.dim()
        )));
    }
    let spec = RenderSpec {
        mode: mode.parse()?,
        width,
        height,
        color_seed,
        band,
    };
    let result = enumerate_with(&cfg)?;
    let labeled = label_regions(&cfg.network, &result)?;
    let svg = render_svg_2d(&labeled, &spec)?;
    let path = cfg.write("render.svg", &svg)?;
    println!("regions: {}", result.regions.len());
    println!("svg: {}", path.display());
    check_strict(&cfg, &result)
}

fn csv(counts: &[usize]) -> String {
    let mut out = String::from("layer,count\n");
    for (i, c) in counts.iter().enumerate() {
        out.push_str(&format!("{},{c}\n", i + 1));
    }
    out
}

pub fn stats(args: &CommonArgs, report_path: Option<&str>) -> Result<(), CliError> {
    let (text, out) = match report_path {
        Some(p) => {
            let report = read_report(p)?;
            let text = csv(&report.per_layer_counts);
            fs::create_dir_all(&args.out).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", args.out)))?;
            let out = Path::new(&args.out).join("counts.csv");
            fs::write(&out, &text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))?;
            (text, out)
        }
        None => {
            let cfg = RunConfig::load(args)?;
            let result = enumerate_with(&cfg)?;
            let text = region_statistics(&result).to_csv();
            let out = cfg.write("counts.csv", &text)?;
            check_strict(&cfg, &result)?;
            (text, out)
        }
    };
    print!("{text}");
    eprintln!("csv: {}", out.display());
    Ok(())
}
