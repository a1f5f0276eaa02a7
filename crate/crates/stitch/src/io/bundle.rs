//! Loading an instance together with its per-cube refutations.

use std::fs;
use std::path::{Path, PathBuf};

use drat_stitch_core::{Cube, Literal, ProofBundle, Refutation};
use rayon::prelude::*;
use walkdir::WalkDir;

use super::cube_name::{cube_from_filename, CubeNameError, PROOF_EXTENSION};
use super::dimacs::{parse_dimacs, DimacsError};
use super::drat::{parse_drat, DratError};

/// Where the sub-problem refutations come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofSource {
    /// Every `*.proof` file below the directory, cube encoded in the file name.
    Directory(PathBuf),
    /// Cubes from the `a` lines of an iCNF file, paired in order with the proof paths
    /// listed one per line in `manifest`. Relative paths are resolved against the
    /// manifest's directory.
    Icnf { cubes: PathBuf, manifest: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("cannot read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Cnf { path: PathBuf, source: DimacsError },
    #[error("{}: {source}", .path.display())]
    CubeName { path: PathBuf, source: CubeNameError },
    #[error("unreadable proof {}: {reason}", .path.display())]
    UnreadableProof { path: PathBuf, reason: String },
    #[error("cube {cube} is given by both {} and {}", .first.display(), .second.display())]
    DuplicateCube {
        cube: Cube,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("{}: line {line}: {reason}", .path.display())]
    Icnf {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{} lists {proofs} proofs for {cubes} cubes", .manifest.display())]
    ManifestMismatch {
        manifest: PathBuf,
        cubes: usize,
        proofs: usize,
    },
}

impl BundleError {
    /// Problems with the bundle's content rather than with reading it.
    pub fn is_semantic(&self) -> bool {
        matches!(self, BundleError::DuplicateCube { .. })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, BundleError> {
    fs::read(path).map_err(|source| BundleError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_formula(path: &Path) -> Result<drat_stitch_core::Formula, BundleError> {
    parse_dimacs(&read(path)?)
        .map(|d| d.formula)
        .map_err(|source| BundleError::Cnf {
            path: path.to_path_buf(),
            source,
        })
}

pub fn load_proof(path: &Path) -> Result<Refutation, BundleError> {
    let text = fs::read(path).map_err(|e| BundleError::UnreadableProof {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_drat(&text).map_err(|e: DratError| BundleError::UnreadableProof {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

pub fn load_bundle(cnf: &Path, source: &ProofSource) -> Result<ProofBundle, BundleError> {
    let instance = load_formula(cnf)?;
    let located = match source {
        ProofSource::Directory(dir) => proof_files(dir)?,
        ProofSource::Icnf { cubes, manifest } => icnf_entries(cubes, manifest)?,
    };
    for (i, (cube, path)) in located.iter().enumerate() {
        if let Some((_, first)) = located[..i].iter().find(|(c, _)| c == cube) {
            return Err(BundleError::DuplicateCube {
                cube: cube.clone(),
                first: first.clone(),
                second: path.clone(),
            });
        }
    }
    let entries = located
        .into_par_iter()
        .map(|(cube, path)| load_proof(&path).map(|p| (cube, p)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProofBundle { instance, entries })
}

/// `*.proof` files below `dir` in path order.
fn proof_files(dir: &Path) -> Result<Vec<(Cube, PathBuf)>, BundleError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| BundleError::Io {
            path: e.path().unwrap_or(dir).to_path_buf(),
            source: e.into(),
        })?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != PROOF_EXTENSION) {
            continue;
        }
        let cube = cube_from_filename(path).map_err(|source| BundleError::CubeName {
            path: path.to_path_buf(),
            source,
        })?;
        out.push((cube, path.to_path_buf()));
    }
    Ok(out)
}

/// Cubes of the `a ℓ₁ … ℓₖ 0` lines. Other lines are ignored.
pub fn parse_icnf_cubes(text: &[u8], path: &Path) -> Result<Vec<Cube>, BundleError> {
    let mut cubes = Vec::new();
    for (i, raw) in text.split(|&b| b == b'\n').enumerate() {
        let raw = String::from_utf8_lossy(raw);
        let mut tokens = raw.split_ascii_whitespace();
        if tokens.next() != Some("a") {
            continue;
        }
        let error = |reason: String| BundleError::Icnf {
            path: path.to_path_buf(),
            line: i + 1,
            reason,
        };
        let mut literals = Vec::new();
        let mut terminated = false;
        for token in tokens {
            if terminated {
                return Err(error(format!("{token:?} after the terminating 0")));
            }
            let value: i32 = token
                .parse()
                .map_err(|_| error(format!("{token:?} is not a literal")))?;
            match Literal::new(value) {
                Some(l) => literals.push(l),
                None => terminated = true,
            }
        }
        if !terminated {
            return Err(error("cube is not terminated by 0".into()));
        }
        cubes.push(Cube::new(literals).map_err(|e| error(format!("variable {} decided twice", e.0)))?);
    }
    Ok(cubes)
}

fn icnf_entries(cubes: &Path, manifest: &Path) -> Result<Vec<(Cube, PathBuf)>, BundleError> {
    let cube_list = parse_icnf_cubes(&read(cubes)?, cubes)?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let listing = read(manifest)?;
    let proofs: Vec<PathBuf> = String::from_utf8_lossy(&listing)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect();
    if proofs.len() != cube_list.len() {
        return Err(BundleError::ManifestMismatch {
            manifest: manifest.to_path_buf(),
            cubes: cube_list.len(),
            proofs: proofs.len(),
        });
    }
    Ok(cube_list.into_iter().zip(proofs).collect())
}
