//! Example groups shipped with the crate.

use crate::config::{parse_config, JobConfig};
use crate::error::ConfigError;

pub const BUNDLED: &[(&str, &str)] = &[
    ("z2", include_str!("../groups/z2.gs")),
    ("f2", include_str!("../groups/f2.gs")),
    ("dinf", include_str!("../groups/dinf.gs")),
    ("s3", include_str!("../groups/s3.gs")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled config by name (`z2`, `f2`, `dinf`, `s3`).
pub fn config(name: &str) -> Result<JobConfig, ConfigError> {
    let text = text(name).ok_or_else(|| ConfigError {
        line: 0,
        column: 0,
        msg: format!("no bundled group named {name:?}"),
    })?;
    parse_config(text, &format!("{name}.gs"))
}
