//! JSON front end for `weylcm`: wire formats and one function per subcommand.

pub mod commands;
pub mod wire;
