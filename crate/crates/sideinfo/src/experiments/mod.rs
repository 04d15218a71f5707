//! Experiment drivers. Each turns its configuration section into an
//! [`Artifacts`] bundle; [`run`] adds the header and the thread pool.
//!
//! Work is split into independent units (slope points, trial blocks,
//! Monte-Carlo shards) that carry their own random streams, mapped in
//! parallel and collected in index order, so the bytes written do not
//! depend on the number of workers.

mod gap;
mod mds;
mod rd;
mod transform;

use std::path::{Path, PathBuf};

use sideinfo_core::model::{DiscreteInstance, GroupTable};

use crate::config::{Experiment, InstanceRef, RunConfig};
use crate::error::{CliError, Result};
use crate::instance_file::InstanceFile;
use crate::output::{self, sha256_hex, Artifacts, Header};
use crate::presets::builtin_instance;

pub use rd::sweep;

/// `(label, sha256 digest)` of every instance file read.
pub type Digests = Vec<(String, String)>;

/// An instance ready for the solvers, with the label used in the rows.
pub struct LoadedInstance {
    pub label: String,
    pub instance: DiscreteInstance,
    pub group: Option<GroupTable>,
}

/// Resolves `r`; relative file paths are taken from `base`. Returns the
/// instances and the digests of the files read.
pub fn load_instances(r: &InstanceRef, seed: u64, base: &Path) -> Result<(Vec<LoadedInstance>, Digests)> {
    if let Some(file) = &r.file {
        let path = base.join(file);
        let bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        let parsed: InstanceFile = serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let (instance, group) = parsed.to_instance()?;
        let label = file.display().to_string();
        let digest = sha256_hex(&bytes);
        return Ok((
            vec![LoadedInstance {
                label: label.clone(),
                instance,
                group,
            }],
            vec![(label, digest)],
        ));
    }
    let name = r
        .builtin
        .as_deref()
        .ok_or_else(|| CliError::Config("instance: `builtin` or `file` is required".into()))?;
    let instances = (0..r.count)
        .map(|i| {
            let (instance, group) = builtin_instance(name, seed, i)?;
            let label = if name == "random" {
                format!("random-{i}")
            } else {
                name.to_owned()
            };
            Ok(LoadedInstance {
                label,
                instance,
                group,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((instances, Vec::new()))
}

fn execute(config: &RunConfig, base: &Path) -> Result<(Digests, Artifacts)> {
    let seed = config.seed;
    match &config.experiment {
        Experiment::RdCurves(e) => rd::rd_curves(e, seed, base),
        Experiment::CheckTheorem1(e) => rd::theorem1(e, seed, base),
        Experiment::CheckTheorem3(e) => rd::theorem3(e, seed, base),
        Experiment::MdsDemo(e) => Ok((Vec::new(), mds::mds_demo(e, seed)?)),
        Experiment::DftDemo(e) => Ok((Vec::new(), transform::dft_demo(e, seed)?)),
        Experiment::TwoStage(e) => Ok((Vec::new(), transform::two_stage(e, seed)?)),
        Experiment::RateGap(e) => Ok((Vec::new(), gap::rate_gap(e, seed)?)),
        Experiment::PenaltyCheck(e) => Ok((Vec::new(), gap::penalty_check(e)?)),
    }
}

/// Runs `config` on a pool of `config.jobs` workers (all cores when unset).
/// `base` anchors relative instance paths.
pub fn run(config: &RunConfig, base: &Path) -> Result<(Header, Artifacts)> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let (inputs, artifacts) = pool.install(|| execute(config, base))?;
    Ok((Header::new(config, &inputs), artifacts))
}

/// [`run`], then writes the artifacts into `out`. A failed enforced check
/// still writes everything before returning
/// [`CliError::Verification`].
pub fn run_to_dir(config: &RunConfig, base: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let (header, artifacts) = run(config, base)?;
    let paths = output::write(out, config.format, &header, &artifacts)?;
    let failed = artifacts.failed_checks();
    if !failed.is_empty() {
        let names: Vec<String> = failed
            .iter()
            .map(|c| format!("{} = {} (limit {})", c.name, c.value, c.limit))
            .collect();
        return Err(CliError::Verification(names.join("; ")));
    }
    Ok(paths)
}
