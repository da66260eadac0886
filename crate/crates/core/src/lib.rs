pub mod analysis;
pub mod scalars;
pub mod hopf;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod cocycle;
pub mod models;
pub mod twisted;
pub mod cli;
