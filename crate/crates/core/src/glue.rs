use core::fmt;
use core::str::FromStr;

const CAP: usize = 15;

/// A glue label. The empty label is the null glue, written `-`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GlueLabel {
    len: u8,
    bytes: [u8; CAP],
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GlueError {
    #[error("glue label `{0}` is longer than 15 bytes")]
    TooLong(alloc::string::String),
    #[error("glue label must be non-empty printable ASCII without whitespace, got `{0}`")]
    Invalid(alloc::string::String),
}

impl GlueLabel {
    pub const NULL: GlueLabel = GlueLabel { len: 0, bytes: [0; CAP] };

    pub fn new(s: &str) -> Result<Self, GlueError> {
        if s == "-" {
            return Ok(Self::NULL);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_graphic()) {
            return Err(GlueError::Invalid(s.into()));
        }
        if s.len() > CAP {
            return Err(GlueError::TooLong(s.into()));
        }
        let mut bytes = [0; CAP];
        bytes[..s.len()].copy_from_slice(s.as_bytes());
        Ok(GlueLabel { len: s.len() as u8, bytes })
    }

    /// Label for a small digit, `0..=9`.
    pub const fn digit(d: u8) -> Self {
        let mut bytes = [0; CAP];
        bytes[0] = b'0' + d;
        GlueLabel { len: 1, bytes }
    }

    pub fn bit(b: bool) -> Self {
        Self::digit(b as u8)
    }

    pub fn is_null(&self) -> bool {
        self.len == 0
    }

    pub fn as_str(&self) -> &str {
        if self.len == 0 {
            "-"
        } else {
            core::str::from_utf8(&self.bytes[..self.len as usize]).unwrap_or("?")
        }
    }

    /// Two glues bond iff both are non-null and equal.
    pub fn matches(&self, other: &GlueLabel) -> bool {
        !self.is_null() && self == other
    }

    /// Numeric value of a single-digit label.
    pub fn digit_value(&self) -> Option<u8> {
        match self.len {
            1 if self.bytes[0].is_ascii_digit() => Some(self.bytes[0] - b'0'),
            _ => None,
        }
    }

    pub fn as_bit(&self) -> Option<bool> {
        match self.digit_value() {
            Some(0) => Some(false),
            Some(1) => Some(true),
            _ => None,
        }
    }
}

impl FromStr for GlueLabel {
    type Err = GlueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GlueLabel::new(s)
    }
}

impl fmt::Display for GlueLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for GlueLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_never_matches() {
        let n = GlueLabel::NULL;
        assert!(!n.matches(&n));
        assert_eq!(GlueLabel::new("-").unwrap(), n);
        assert_eq!(n.as_str(), "-");
    }

    #[test]
    fn equal_labels_match() {
        let a = GlueLabel::new("1").unwrap();
        assert!(a.matches(&GlueLabel::digit(1)));
        assert!(!a.matches(&GlueLabel::digit(0)));
        assert_eq!(GlueLabel::new("S").unwrap().digit_value(), None);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(GlueLabel::new("").is_err());
        assert!(GlueLabel::new("a b").is_err());
        assert!(GlueLabel::new("abcdefghijklmnopq").is_err());
    }
}
