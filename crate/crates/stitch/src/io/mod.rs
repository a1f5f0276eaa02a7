//! File formats: DIMACS CNF, ASCII DRAT, cube file names and iCNF cube lists.

mod bundle;
mod cube_name;
mod dimacs;
mod drat;

pub use bundle::{load_bundle, load_formula, load_proof, parse_icnf_cubes, BundleError, ProofSource};
pub use cube_name::{cube_from_filename, filename_from_cube, CubeNameError, PROOF_EXTENSION, ROOT_PROOF};
pub use dimacs::{parse_dimacs, write_dimacs, Dimacs, DimacsError};
pub use drat::{drat_to_string, parse_drat, write_drat, DratError};
