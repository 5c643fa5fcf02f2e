//! Inclusive `start:stop:step` integer ranges for sweep axes.

use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl RangeSpec {
    pub fn new(start: usize, stop: usize, step: usize) -> Result<Self, CliError> {
        if step == 0 {
            return Err(CliError::InvalidArgument(
                "range step must be at least 1".into(),
            ));
        }
        if start > stop {
            return Err(CliError::InvalidArgument(format!(
                "range start {start} exceeds stop {stop}"
            )));
        }
        Ok(RangeSpec { start, stop, step })
    }

    pub fn single(value: usize) -> Self {
        RangeSpec {
            start: value,
            stop: value,
            step: 1,
        }
    }

    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step).collect()
    }

    pub fn len(&self) -> usize {
        (self.stop - self.start) / self.step + 1
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees start ≤ stop
    }
}

impl FromStr for RangeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |field: &str| -> Result<usize, CliError> {
            field.trim().parse::<usize>().map_err(|_| {
                CliError::InvalidArgument(format!(
                    "range '{s}' has non-integer component '{field}'"
                ))
            })
        };
        match parts.as_slice() {
            [v] => {
                let v = parse(v)?;
                Ok(RangeSpec::single(v))
            }
            [a, b] => RangeSpec::new(parse(a)?, parse(b)?, 1),
            [a, b, c] => RangeSpec::new(parse(a)?, parse(b)?, parse(c)?),
            _ => Err(CliError::InvalidArgument(format!(
                "range '{s}' must be 'start', 'start:stop' or 'start:stop:step'"
            ))),
        }
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_all_three_forms() {
        assert_eq!("5".parse::<RangeSpec>().unwrap(), RangeSpec::single(5));
        assert_eq!(
            "3:6".parse::<RangeSpec>().unwrap(),
            RangeSpec::new(3, 6, 1).unwrap()
        );
        assert_eq!(
            "3:9:2".parse::<RangeSpec>().unwrap().values(),
            vec![3, 5, 7, 9]
        );
    }

    #[test]
    fn rejects_malformed_ranges() {
        assert!("".parse::<RangeSpec>().is_err());
        assert!("a:b".parse::<RangeSpec>().is_err());
        assert!("3:2".parse::<RangeSpec>().is_err());
        assert!("1:5:0".parse::<RangeSpec>().is_err());
        assert!("1:2:3:4".parse::<RangeSpec>().is_err());
        assert!("-1:4".parse::<RangeSpec>().is_err());
    }

    #[test]
    fn len_matches_values() {
        for spec in ["1", "2:7", "1:10:3", "4:4:9"] {
            let r: RangeSpec = spec.parse().unwrap();
            assert_eq!(r.len(), r.values().len(), "{spec}");
        }
    }

    proptest! {
        /// Untrusted input never panics the parser.
        #[test]
        fn parser_never_panics(s in "\\PC*") {
            let _ = s.parse::<RangeSpec>();
        }

        #[test]
        fn parse_display_round_trip(start in 0usize..500, span in 0usize..500, step in 1usize..40) {
            let r = RangeSpec::new(start, start + span, step).unwrap();
            let back: RangeSpec = r.to_string().parse().unwrap();
            prop_assert_eq!(r, back);
        }
    }
}
