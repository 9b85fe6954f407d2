//! Fixture loading shared by the benchmarks.

use shimura_core::JobConfig;
use std::path::PathBuf;

pub fn fixture(name: &str) -> JobConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    JobConfig::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_parse() {
        for name in ["cubic.cfg", "sqrt65.cfg", "rational_d6_n5.cfg", "sqrt5_d31.cfg"] {
            super::fixture(name);
        }
    }
}
