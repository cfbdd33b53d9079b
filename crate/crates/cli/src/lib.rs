//! Library side of the `rmfm` command: dataset parsing, ANOVA reports and
//! verification runs.

pub mod anova;
pub mod dataset;
pub mod matrix_file;
pub mod verify;
