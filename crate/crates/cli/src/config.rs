//! `key=value` scenario files. Keys: n, tau, alpha, d, r, lambda.

use std::collections::BTreeMap;

const KEYS: [&str; 6] = ["n", "tau", "alpha", "d", "r", "lambda"];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut values = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value", idx + 1));
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(format!("line {}: unknown key `{key}`", idx + 1));
        }
        values.insert(key.to_string(), value.trim().to_string());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_known_keys() {
        let cfg = parse_config("# fig 2\nn = 20\nlambda=10\n\nalpha=1/8,1\n").unwrap();
        assert_eq!(cfg["n"], "20");
        assert_eq!(cfg["lambda"], "10");
        assert_eq!(cfg["alpha"], "1/8,1");
        assert!(parse_config("bitrate=3").is_err());
        assert!(parse_config("n 20").is_err());
    }
}
