//! Optional `key=value` settings file. Recognized keys: `budget`,
//! `threads`, `timing` (`true`/`false`). Blank lines and `#` comments are
//! ignored. Command-line flags take precedence over the environment, which
//! takes precedence over the file.

use std::path::Path;

use crate::CliError;

#[derive(Debug, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub budget: Option<u64>,
    pub threads: Option<usize>,
    pub timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        FileConfig::parse(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<FileConfig, String> {
        let mut cfg = FileConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || format!("line {}: invalid value {value:?} for {key}", i + 1);
            match key {
                "budget" => cfg.budget = Some(value.parse().map_err(|_| bad())?),
                "threads" => cfg.threads = Some(value.parse().map_err(|_| bad())?),
                "timing" => cfg.timing = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(format!("line {}: unknown key {key:?}", i + 1)),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let cfg = FileConfig::parse("# campaign\nbudget = 5000\n\nthreads=2\ntiming=false\n").unwrap();
        assert_eq!(
            cfg,
            FileConfig {
                budget: Some(5000),
                threads: Some(2),
                timing: Some(false)
            }
        );
        assert!(FileConfig::parse("budget=lots").is_err());
        assert!(FileConfig::parse("colour=blue").is_err());
        assert!(FileConfig::parse("budget").is_err());
    }
}
