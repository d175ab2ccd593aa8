//! Shipped benchmark environments and the environment file format.

pub mod circular;
pub mod file;
pub mod grid;

pub use circular::circular;
pub use file::{builtin, resolve, EnvFile, MdpSpec, TableSpec};
pub use grid::{paper_grid, paper_grid_spec, GridSpec};
