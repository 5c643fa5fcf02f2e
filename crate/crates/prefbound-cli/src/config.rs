//! Optional `key=value` config files. Precedence is flags over config file
//! over defaults; the resolved configuration is echoed as `#` comment
//! lines at the top of every CSV output.

use std::collections::BTreeMap;

use crate::CliError;

/// Keys mirror the long flag names.
pub const KNOWN_KEYS: &[&str] = &[
    "A",
    "I",
    "d",
    "K",
    "ball-mode",
    "trials",
    "seed",
    "out",
    "jobs",
    "bound-scale",
];

/// Parse `key=value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut values = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::InvalidArgument(format!(
                "config line {} is not key=value: '{raw}'",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::InvalidArgument(format!(
                "config line {}: unknown key '{key}' (known: {})",
                lineno + 1,
                KNOWN_KEYS.join(", ")
            )));
        }
        values.insert(key.to_string(), value.trim().to_string());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let text = "# a comment\n\nA = 3:6\nseed=99\nball-mode = exact\n";
        let values = parse_config(text).unwrap();
        assert_eq!(values["A"], "3:6");
        assert_eq!(values["seed"], "99");
        assert_eq!(values["ball-mode"], "exact");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(parse_config("speed=9").is_err());
        assert!(parse_config("just a line").is_err());
    }

    proptest! {
        /// Arbitrary bytes never panic the config parser.
        #[test]
        fn parser_never_panics(s in "\\PC*") {
            let _ = parse_config(&s);
        }
    }
}
