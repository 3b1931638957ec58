use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use rotlab_core::circle::{convergence_table_circle, ghys_check_with, CircleLift, GhysOptions};
use rotlab_core::io::{
    parse_lift_spec, read_symplectic, CaseError, GhysCase, RunInfo, SpCase, SpTolerances, SuiteReport,
};
use rotlab_core::symplectic::{
    canonical_path, convergence_table_sp, eigenvalue_rotation_number, main_theorem_check_with, random_symplectic,
    sigma_sp_with, SectionPolicy, SymplecticMatrix, TheoremOptions, DEFAULT_PATH_SAMPLES,
};
use rotlab_core::translation::ConvergenceRow;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSource {
    pub n: usize,
    pub count: u64,
    pub scale: f64,
}

pub enum SpInput {
    Random(RandomSource),
    Files(Vec<PathBuf>),
}

pub enum ConvergeInput {
    Spec(String),
    Matrix(PathBuf),
}

/// Parse `n=N,count=C[,scale=S]`.
pub fn parse_random(s: &str) -> Result<RandomSource> {
    let mut out = RandomSource {
        n: 0,
        count: 0,
        scale: 0.5,
    };
    for part in s.split(',') {
        let (key, value) = part
            .split_once('=')
            .with_context(|| format!("expected key=value in `{s}`, got `{part}`"))?;
        let bad = || format!("invalid value `{value}` for `{key}`");
        match key.trim() {
            "n" => out.n = value.trim().parse().with_context(bad)?,
            "count" => out.count = value.trim().parse().with_context(bad)?,
            "scale" => out.scale = value.trim().parse().with_context(bad)?,
            other => bail!("unknown key `{other}` in `{s}`"),
        }
    }
    if out.n == 0 || out.count == 0 {
        bail!("`{s}` needs positive n and count");
    }
    if !(out.scale >= 0.0 && out.scale.is_finite()) {
        bail!("scale must be a finite non-negative number");
    }
    Ok(out)
}

/// Evaluate `f` on every item across threads; results keep input order.
fn run_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let done: Vec<Vec<(usize, R)>> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            break local;
                        }
                        local.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        workers.into_iter().map(|w| w.join().expect("worker panicked")).collect()
    });
    for (i, r) in done.into_iter().flatten() {
        slots[i] = Some(r);
    }
    slots.into_iter().map(|r| r.expect("every case ran")).collect()
}

fn run_info(start: Instant) -> RunInfo {
    RunInfo {
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        wall_time: start.elapsed().as_secs_f64(),
    }
}

fn write_report<T: Serialize>(dir: &Path, name: &str, report: &T) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create `{}`", dir.display()))?;
    let path = dir.join(name);
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(&path, json + "\n").with_context(|| format!("cannot write `{}`", path.display()))?;
    Ok(path)
}

fn split_results<C>(results: Vec<(String, std::result::Result<C, String>)>) -> (Vec<C>, Vec<CaseError>) {
    let mut cases = Vec::new();
    let mut errors = Vec::new();
    for (index, (label, r)) in results.into_iter().enumerate() {
        match r {
            Ok(c) => cases.push(c),
            Err(message) => errors.push(CaseError { index, label, message }),
        }
    }
    (cases, errors)
}

fn finish<C: rotlab_core::io::CaseRecord + Serialize>(
    cfg: &RunConfig,
    name: &str,
    report: SuiteReport<C>,
) -> Result<bool> {
    let path = write_report(&cfg.output_dir, name, &report)?;
    for e in &report.errors {
        eprintln!("case {} ({}): {}", e.index, e.label, e.message);
    }
    let s = &report.summary;
    println!(
        "{}: {} passed, {} failed, max diff_mod1 {:.3e}, max |cocycle| {} -> {}",
        name,
        s.pass_count,
        s.fail_count,
        s.max_diff_mod1,
        s.max_sigma_abs,
        path.display()
    );
    Ok(report.all_passed())
}

pub fn ghys(cfg: &RunConfig, specs: &[String]) -> Result<bool> {
    let start = Instant::now();
    let lifts = specs
        .iter()
        .map(|s| parse_lift_spec(s).with_context(|| format!("malformed lift spec `{s}`")))
        .collect::<Result<Vec<CircleLift>>>()?;
    let opts = GhysOptions {
        window: cfg.window,
        n: cfg.n,
        n_iter: cfg.n_iter_circle,
        doublings: None,
    };
    let jobs: Vec<(&String, &CircleLift)> = specs.iter().zip(&lifts).collect();
    let results = run_parallel(&jobs, |(spec, g)| {
        let r = ghys_check_with(g, &opts)
            .map(|r| GhysCase::new(spec, &r, cfg.window, cfg.n, cfg.n_iter_circle, cfg.tolerances.diff_mod1))
            .map_err(|e| e.to_string());
        (spec.to_string(), r)
    });
    let (cases, errors) = split_results(results);
    finish(cfg, "ghys_report.json", SuiteReport::new(cases, errors, run_info(start)))
}

fn sp_case(cfg: &RunConfig, g: &SymplecticMatrix) -> rotlab_core::Result<SpCase> {
    let opts = TheoremOptions {
        window: cfg.window,
        n: cfg.n,
        k_max: cfg.k_max,
    };
    let report = main_theorem_check_with(g, &opts)?;
    let eigen = eigenvalue_rotation_number(g).ok().map(|c| c.value);
    let sigma = sigma_sp_with(g, g, cfg.k_max, SectionPolicy::Snap)?;
    let tol = SpTolerances {
        diff_mod1: cfg.tolerances.diff_mod1,
        sigma_residual: cfg.tolerances.sigma_residual,
    };
    Ok(SpCase::new(g, &report, eigen, sigma, tol))
}

pub fn sp(cfg: &RunConfig, input: SpInput) -> Result<bool> {
    let start = Instant::now();
    let jobs: Vec<(String, SymplecticMatrix)> = match input {
        SpInput::Random(r) => (0..r.count)
            .map(|i| {
                let seed = cfg.seed.wrapping_add(i);
                let g = random_symplectic(r.n, seed, r.scale).context("cannot generate a random matrix")?;
                Ok((format!("random n={} seed={seed}", r.n), g))
            })
            .collect::<Result<_>>()?,
        SpInput::Files(paths) => paths
            .iter()
            .map(|p| {
                let g = read_symplectic(p, cfg.tolerances.sympl).with_context(|| format!("`{}`", p.display()))?;
                Ok((p.display().to_string(), g))
            })
            .collect::<Result<_>>()?,
    };
    let results = run_parallel(&jobs, |(label, g)| (label.clone(), sp_case(cfg, g).map_err(|e| e.to_string())));
    let (cases, errors) = split_results(results);
    finish(cfg, "sp_report.json", SuiteReport::new(cases, errors, run_info(start)))
}

pub fn converge(cfg: &RunConfig, target: ConvergeInput) -> Result<bool> {
    let rows: Vec<ConvergenceRow> = match &target {
        ConvergeInput::Spec(s) => {
            let g = parse_lift_spec(s).with_context(|| format!("malformed lift spec `{s}`"))?;
            convergence_table_circle(&g, cfg.k_max)?
        }
        ConvergeInput::Matrix(p) => {
            let g = read_symplectic(p, cfg.tolerances.sympl).with_context(|| format!("`{}`", p.display()))?;
            convergence_table_sp(&canonical_path(&g, DEFAULT_PATH_SAMPLES)?, cfg.k_max)?
        }
    };
    let mut csv = String::from("k,estimate,error_bound\n");
    for r in &rows {
        csv += &format!("{},{:.17e},{:.17e}\n", r.k, r.estimate, r.error_bound);
    }
    std::fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("cannot create `{}`", cfg.output_dir.display()))?;
    let path = cfg.output_dir.join("converge.csv");
    std::fs::write(&path, &csv).with_context(|| format!("cannot write `{}`", path.display()))?;
    std::io::stdout().write_all(csv.as_bytes())?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_source_syntax() {
        assert_eq!(
            parse_random("n=2,count=20").unwrap(),
            RandomSource {
                n: 2,
                count: 20,
                scale: 0.5
            }
        );
        assert_eq!(parse_random("count=3, n=1, scale=0.8").unwrap().scale, 0.8);
        for bad in ["n=1", "n=0,count=3", "n=1,count=x", "n=1,count=2,size=3", "n1,count=2"] {
            assert!(parse_random(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<u64> = (0..97).collect();
        assert_eq!(run_parallel(&items, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!(run_parallel(&Vec::<u64>::new(), |x| *x).is_empty());
    }
}
