//! Library side of the `jackfac` command-line tool: rendering of results,
//! the verification suites and the on-disk cache.

pub mod cache;
pub mod commands;
pub mod suites;

/// Output format shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// `compute`, read from and written to `cache` when one is configured.
pub(crate) fn cached<T, F>(cache: Option<&cache::Cache>, key: &str, compute: F) -> jackfac::Result<T>
where
    T: serde::Serialize + serde::de::DeserializeOwned,
    F: FnOnce() -> jackfac::Result<T>,
{
    match cache {
        Some(c) => c.get_or_compute(key, compute),
        None => compute(),
    }
}
