//! Multi-threaded sweeps. Chunks of every point run as independent
//! tasks; tallies are merged in chunk order, so the table is identical to
//! the sequential one for any thread count.

use polar_rsma_core::montecarlo::{
    chunk_count, chunk_len, point_seed, simulate_chunk, tabulate, ResultTable, SweepSpec, Tally,
};
use polar_rsma_core::scenario::Scenario;
use polar_rsma_core::Result;
use rayon::prelude::*;

pub const THREADS_ENV: &str = "POLAR_RSMA_THREADS";

/// Worker cap from `POLAR_RSMA_THREADS`; `None` when unset or invalid.
pub fn threads_from_env() -> Option<usize> {
    let raw = std::env::var(THREADS_ENV).ok()?;
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Some(n),
        _ => {
            log::warn!("ignoring {THREADS_ENV}={raw:?}: expected a positive integer");
            None
        }
    }
}

pub fn run_sweep_parallel(spec: &SweepSpec, sc: &Scenario, threads: Option<usize>) -> Result<ResultTable> {
    spec.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| polar_rsma_core::Error::Numerical(format!("thread pool: {e}")))?;
    let points = spec.points();
    let chunks = chunk_count(spec.trials);
    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|p| (0..chunks).map(move |k| (p, k))).collect();
    let results: Vec<Result<Vec<Tally>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, k)| {
                let pt = &points[p];
                let seed = point_seed(spec.master_seed, pt.snr_db, pt.chi);
                simulate_chunk(sc, pt, &spec.schemes, seed, k, chunk_len(spec.trials, k))
            })
            .collect()
    });

    let mut table = ResultTable::default();
    let mut it = results.into_iter();
    for point in &points {
        let mut acc: Option<Vec<Tally>> = None;
        let mut failure = None;
        for _ in 0..chunks {
            match it.next().expect("one result per job") {
                Ok(part) if failure.is_none() => match acc.as_mut() {
                    None => acc = Some(part),
                    Some(a) => a.iter_mut().zip(&part).for_each(|(x, y)| x.merge(y)),
                },
                Ok(_) => {}
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        match failure {
            Some(e) => table.failures.push((*point, e.to_string())),
            None => tabulate(sc, point, &spec.schemes, &acc.expect("at least one chunk"), &mut table),
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polar_rsma_core::config::SystemConfig;
    use polar_rsma_core::montecarlo::{run_sweep, Scheme};

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let sc = Scenario::new(SystemConfig::default()).unwrap().with_single_pol().unwrap();
        let spec = SweepSpec {
            snr_grid_db: vec![10.0, 20.0],
            chi_grid: vec![0.01],
            xi_grid: vec![0.0, 0.3],
            trials: 9000,
            master_seed: 4,
            schemes: Scheme::ALL.to_vec(),
        };
        let seq = run_sweep(&spec, &sc).unwrap();
        for threads in [Some(1), Some(3)] {
            let par = run_sweep_parallel(&spec, &sc, threads).unwrap();
            assert_eq!(par, seq);
        }
    }
}
