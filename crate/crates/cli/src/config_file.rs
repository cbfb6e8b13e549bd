//! Simple `key=value` defaults file. Flags always override file values.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                ));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// Flag value if present, else the config entry, else the default.
    pub fn resolve<T: FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: Option<T>,
    ) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(raw) = self.values.get(key) {
            return raw
                .parse::<T>()
                .map_err(|_| format!("config key {key}: cannot parse {raw:?}"));
        }
        default.ok_or_else(|| format!("missing required option --{key}"))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_and_resolves() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# comment\nreps = 1000\nseed=9").unwrap();
        let cfg = ConfigFile::load(file.path()).unwrap();
        assert_eq!(cfg.resolve::<usize>(None, "reps", None).unwrap(), 1000);
        assert_eq!(cfg.resolve::<u64>(Some(3), "seed", None).unwrap(), 3);
        assert_eq!(cfg.resolve::<u64>(None, "seed", None).unwrap(), 9);
        assert_eq!(cfg.resolve::<f64>(None, "p", Some(0.5)).unwrap(), 0.5);
        assert!(cfg.resolve::<f64>(None, "p", None).is_err());
    }
}
