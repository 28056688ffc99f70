use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parses `key = value` lines; `#` starts a comment. Dashes in keys are read as underscores.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "config line {}: expected key=value, got `{}`",
                i + 1,
                raw.trim()
            );
        };
        let key = key.trim().replace('-', "_");
        if key.is_empty() {
            bail!("config line {}: empty key", i + 1);
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

/// Config file values, consumed key by key so leftovers can be reported.
#[derive(Debug, Default)]
pub struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Ok(FileConfig(load(p)?)),
            None => Ok(FileConfig::default()),
        }
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let from_file = self.0.remove(key);
        if let Some(v) = flag {
            return Ok(v);
        }
        match from_file {
            Some(text) => text
                .parse()
                .map_err(|e| anyhow::anyhow!("config key `{key}`: cannot parse `{text}`: {e}")),
            None => Ok(default),
        }
    }

    pub fn finish(self) -> Result<()> {
        if let Some(key) = self.0.keys().next() {
            bail!("unknown config key `{key}`");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let mut cfg = FileConfig(parse("bins = 7\n# comment\nmax-radius=2 # inline\n").unwrap());
        assert_eq!(cfg.pick("bins", Some(4usize), 5).unwrap(), 4);
        assert_eq!(cfg.pick("max_radius", None, 3usize).unwrap(), 2);
        assert_eq!(cfg.pick("top_k", None, 500usize).unwrap(), 500);
        cfg.finish().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("bins 5").is_err());
        let mut cfg = FileConfig(parse("bins = five\nextra = 1").unwrap());
        assert!(cfg.pick("bins", None, 5usize).is_err());
        assert!(cfg.finish().is_err());
    }
}
