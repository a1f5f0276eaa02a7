//! Threads, wall-clock time and disk storage for the stitching pipeline.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use drat_stitch_core::stitcher::{Clock, LevelExecutor, NodeId, ProofStore};
use drat_stitch_core::Refutation;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

use crate::io::{parse_drat, write_drat};

/// Runs level jobs on a dedicated pool of `jobs` threads.
pub struct PoolExecutor {
    pool: ThreadPool,
}

impl PoolExecutor {
    pub fn new(jobs: usize) -> Result<PoolExecutor, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .thread_name(|i| format!("stitch-{i}"))
            .build()?;
        Ok(PoolExecutor { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl LevelExecutor for PoolExecutor {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        self.pool.install(|| items.into_par_iter().map(f).collect())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WallClock {
    start: Instant,
}

impl WallClock {
    pub fn start() -> WallClock {
        WallClock {
            start: Instant::now(),
        }
    }
}

impl Clock for WallClock {
    fn now(&self) -> Duration {
        self.start.elapsed()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpillError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: spilled proof no longer parses: {reason}", .path.display())]
    Corrupt { path: PathBuf, reason: String },
    #[error("no proof stored for node {0}")]
    Missing(NodeId),
}

/// Keeps refutations with fewer than `threshold` steps in memory and writes the rest
/// as DRAT files into a private directory below the given one. The directory is
/// removed on drop.
pub struct SpillStore {
    dir: tempfile::TempDir,
    threshold: usize,
    memory: BTreeMap<NodeId, Refutation>,
    spilled: BTreeMap<NodeId, PathBuf>,
}

impl SpillStore {
    pub fn new(parent: &Path, threshold: usize) -> std::io::Result<SpillStore> {
        fs::create_dir_all(parent)?;
        let dir = tempfile::Builder::new().prefix("drat-stitch-").tempdir_in(parent)?;
        Ok(SpillStore {
            dir,
            threshold,
            memory: BTreeMap::new(),
            spilled: BTreeMap::new(),
        })
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn spilled(&self) -> usize {
        self.spilled.len()
    }
}

impl ProofStore for SpillStore {
    type Error = SpillError;

    fn put(&mut self, node: NodeId, proof: Refutation) -> Result<(), SpillError> {
        if proof.len() < self.threshold {
            self.memory.insert(node, proof);
            return Ok(());
        }
        let path = self.dir.path().join(format!("node-{node}.drat"));
        let io = |source| SpillError::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(&path).map_err(io)?;
        write_drat(&proof, file).map_err(io)?;
        self.spilled.insert(node, path);
        Ok(())
    }

    fn take(&mut self, node: NodeId) -> Result<Refutation, SpillError> {
        if let Some(p) = self.memory.remove(&node) {
            return Ok(p);
        }
        let path = self.spilled.remove(&node).ok_or(SpillError::Missing(node))?;
        let text = fs::read(&path).map_err(|source| SpillError::Io {
            path: path.clone(),
            source,
        })?;
        let _ = fs::remove_file(&path);
        parse_drat(&text).map_err(|e| SpillError::Corrupt {
            path,
            reason: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use drat_stitch_core::{Clause, ProofStep};

    #[test]
    fn pool_keeps_order() {
        let pool = PoolExecutor::new(4).unwrap();
        assert_eq!(pool.threads(), 4);
        let out = pool.map((0..100).collect(), |x: u32| x * 2);
        assert_eq!(out, (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn spill_round_trip() {
        let parent = tempfile::tempdir().unwrap();
        let mut store = SpillStore::new(parent.path(), 2).unwrap();
        let small: Refutation = vec![ProofStep::add(Clause::empty())].into();
        let big: Refutation = vec![
            ProofStep::add(Clause::from_ints(&[2, -1])),
            ProofStep::delete(Clause::from_ints(&[2, -1])),
            ProofStep::add(Clause::empty()),
        ]
        .into();
        store.put(1, small.clone()).unwrap();
        store.put(2, big.clone()).unwrap();
        assert_eq!(store.spilled(), 1);
        assert_eq!(store.take(2).unwrap(), big);
        assert_eq!(store.take(1).unwrap(), small);
        assert!(matches!(store.take(1), Err(SpillError::Missing(1))));
        let dir = store.path().to_path_buf();
        drop(store);
        assert!(!dir.exists());
    }
}
