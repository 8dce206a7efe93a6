//! Configuration, run orchestration, file emitters and reproduction recipes
//! for the `hessmap` command.

pub mod config;
pub mod emit;
pub mod repro;
pub mod run;
pub mod tables;

pub use config::{parse_config, RunConfig};
pub use repro::{run_recipe, Recipe, ReproReport};
pub use run::{run, RunReport};
