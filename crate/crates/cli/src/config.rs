//! Optional `key = value` configuration file. Command-line flags always
//! win; the file only supplies defaults for tolerances and grid shapes.

use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut values = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key = value", path.display(), idx + 1);
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key {key} = {raw}: {e}"),
            },
        }
    }

    /// Flag value if given, else the config key, else the fallback.
    pub fn resolve<T: std::str::FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
        fallback: T,
    ) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        Ok(self.get(key)?.unwrap_or(fallback))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_and_resolves() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# defaults\ntol = 1e-9\nseed=7\nkappa_steps = 11").unwrap();
        let cfg = FileConfig::load(Some(f.path())).unwrap();
        assert_eq!(cfg.get::<f64>("tol").unwrap(), Some(1e-9));
        assert_eq!(cfg.resolve(None, "seed", 42u64).unwrap(), 7);
        assert_eq!(cfg.resolve(Some(3u64), "seed", 42u64).unwrap(), 3);
        assert_eq!(cfg.resolve(None, "jobs", 4usize).unwrap(), 4);
        assert!(cfg.get::<f64>("kappa_steps").is_ok());
    }

    #[test]
    fn rejects_malformed_lines() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "tol 1e-9").unwrap();
        assert!(FileConfig::load(Some(f.path())).is_err());
    }
}
