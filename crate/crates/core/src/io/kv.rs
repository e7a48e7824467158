//! `key = value` text with `#` comments; blank lines separate blocks.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub(crate) fn parse_blocks(text: &str) -> Result<Vec<Vec<Entry>>> {
    let mut blocks = Vec::new();
    let mut current: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if content.is_empty() {
            if raw.trim().is_empty() && !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty key".into(),
            });
        }
        if let Some(prev) = current.iter().find(|e| e.key == key) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key '{key}' (first set on line {})", prev.line),
            });
        }
        current.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    Ok(blocks)
}

impl Entry {
    pub fn error(&self, message: impl std::fmt::Display) -> Error {
        Error::Parse {
            line: self.line,
            message: format!("{}: {message}", self.key),
        }
    }

    pub fn f64(&self) -> Result<f64> {
        match self.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(format!("'{}' is not a finite number", self.value))),
        }
    }

    pub fn positive(&self) -> Result<f64> {
        let v = self.f64()?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.error("must be positive"))
        }
    }

    pub fn usize(&self) -> Result<usize> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("'{}' is not a non-negative integer", self.value)))
    }

    pub fn u64(&self) -> Result<u64> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("'{}' is not a non-negative integer", self.value)))
    }

    pub fn bool(&self) -> Result<bool> {
        match self.value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.error(format!("'{other}' is not true or false"))),
        }
    }

    pub fn parsed<T: std::str::FromStr<Err = Error>>(&self) -> Result<T> {
        self.value.parse().map_err(|e: Error| self.error(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_and_comments() {
        let text = "# head\na = 1\nb=two # note\n\n\nc = 3\n";
        let blocks = parse_blocks(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0][1].value, "two");
        assert_eq!(blocks[1][0].line, 6);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            parse_blocks("a = 1\nnonsense\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_blocks("a = 1\na = 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn numbers_use_dot_decimals() {
        let e = Entry {
            key: "x".into(),
            value: "0,5".into(),
            line: 1,
        };
        assert!(e.f64().is_err());
        let e = Entry {
            key: "x".into(),
            value: "0.5".into(),
            line: 1,
        };
        assert_eq!(e.f64().unwrap(), 0.5);
    }
}
