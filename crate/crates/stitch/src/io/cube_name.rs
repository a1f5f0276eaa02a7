//! Cube-encoding proof file names: `1_-2.proof` is the sub-problem that decided 1, then -2.

use std::path::Path;

use drat_stitch_core::{Cube, Literal};

pub const PROOF_EXTENSION: &str = "proof";
/// Name of a refutation of the whole instance, produced without splitting.
pub const ROOT_PROOF: &str = "root.proof";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubeNameError {
    #[error("{0:?} does not name a cube (expected e.g. `1_-2.proof`)")]
    BadCubeFilename(String),
    #[error("{0:?} decides a variable twice")]
    DuplicateVariableInCube(String),
}

pub fn cube_from_filename(path: &Path) -> Result<Cube, CubeNameError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let bad = || CubeNameError::BadCubeFilename(name.clone());
    if name == ROOT_PROOF {
        return Ok(Cube::root());
    }
    let stem = name
        .strip_suffix(PROOF_EXTENSION)
        .and_then(|s| s.strip_suffix('.'))
        .ok_or_else(bad)?;
    let literals = stem
        .split('_')
        .map(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            part.parse::<i32>().ok().and_then(Literal::new)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Cube::new(literals).map_err(|_| CubeNameError::DuplicateVariableInCube(name.clone()))
}

pub fn filename_from_cube(cube: &Cube) -> String {
    if cube.depth() == 0 {
        return ROOT_PROOF.to_string();
    }
    let parts: Vec<String> = cube.literals().iter().map(|l| l.to_string()).collect();
    format!("{}.{PROOF_EXTENSION}", parts.join("_"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use drat_stitch_core::lit::lit;
    use proptest::prelude::*;

    fn cube(name: &str) -> Result<Cube, CubeNameError> {
        cube_from_filename(Path::new(name))
    }

    #[test]
    fn examples() {
        let c = cube("1_-2.proof").unwrap();
        assert_eq!(c.literals(), &[lit(1), lit(-2)]);
        assert_eq!(c.depth(), 2);
        assert_eq!(cube("some/dir/-7.proof").unwrap().literals(), &[lit(-7)]);
        assert_eq!(
            cube("1_1.proof"),
            Err(CubeNameError::DuplicateVariableInCube("1_1.proof".into()))
        );
        assert_eq!(cube("root.proof").unwrap(), Cube::root());
    }

    #[test]
    fn bad_names() {
        for name in ["1.drat", "0.proof", "1__2.proof", "+1.proof", "a.proof", ".proof", "1_.proof", "--1.proof", "1.proofx"] {
            assert!(matches!(cube(name), Err(CubeNameError::BadCubeFilename(_))), "{name}");
        }
    }

    proptest! {
        #[test]
        fn round_trip(vars in prop::sample::subsequence((1..40i32).collect::<Vec<_>>(), 0..6), signs in prop::collection::vec(any::<bool>(), 6)) {
            let lits: Vec<Literal> = vars.iter().zip(&signs).map(|(&v, &s)| lit(if s { v } else { -v })).collect();
            let c = Cube::new(lits).unwrap();
            prop_assert_eq!(cube(&filename_from_cube(&c)).unwrap(), c);
        }
    }
}
