//! One module per subcommand; each takes its parsed arguments, does the
//! work, and writes the results table plus metadata sidecar.

pub mod bench;
pub mod fit;
pub mod simulate;
