//! File formats, the bundled material library, and shared helpers behind the
//! `farc` binary.
//!
//! The numerics live in `farc-core`; this crate carries everything that
//! touches the outside world: CSV schemas, the fit-report JSON document,
//! grid-spec parsing for the CLI, and the five bundled building materials.

pub mod gridspec;
pub mod io;
pub mod materials;
pub mod report;
