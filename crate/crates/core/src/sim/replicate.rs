use rayon::prelude::*;

use super::{ReplicationStats, RngStream};
use crate::error::{Error, Result};

/// Runs `reps` independent replications, replication `r` drawing from
/// `RngStream::new(master_seed, r)`, and returns results in replication order.
///
/// Replications execute in parallel; the output does not depend on the
/// schedule.
pub fn replicate<T, F>(experiment: F, reps: u64, master_seed: u64) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut RngStream) -> Result<T> + Sync,
{
    if reps == 0 {
        return Err(Error::domain("need at least one replication"));
    }
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut stream = RngStream::new(master_seed, r);
            experiment(r, &mut stream).map_err(|e| Error::Replication {
                index: r,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Per-metric statistics over replications of an experiment that returns a
/// fixed-length metric vector. Non-finite metric values are skipped.
pub fn run_replications<F>(
    experiment: F,
    reps: u64,
    master_seed: u64,
) -> Result<Vec<ReplicationStats>>
where
    F: Fn(u64, &mut RngStream) -> Result<Vec<f64>> + Sync,
{
    let runs = replicate(experiment, reps, master_seed)?;
    let width = runs[0].len();
    if runs.iter().any(|r| r.len() != width) {
        return Err(Error::domain(
            "replications returned different numbers of metrics",
        ));
    }
    Ok((0..width)
        .map(|k| {
            runs.iter()
                .map(|r| r[k])
                .filter(|x| x.is_finite())
                .collect()
        })
        .collect())
}
