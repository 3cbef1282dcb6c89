//! File formats for the command-line workbench: models, assignments,
//! proofs and countermodels, all JSON with formulas and sequents embedded
//! as grammar text so fixtures stay diff-able.

pub mod formats;
