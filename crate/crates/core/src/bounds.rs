//! Enumeration caps shared by every exhaustive operation.

use std::fmt;
use std::str::FromStr;

use crate::axioms::DEFAULT_WITNESS_CAP;
use crate::code::DEFAULT_WORD_BOUND;
use crate::error::TgsError;
use crate::ideal::DEFAULT_IDEAL_CARRIER_BOUND;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest carrier whose ideals are enumerated.
    pub carrier: usize,
    /// Largest word space or code any scan may touch.
    pub words: u128,
    /// Witnesses kept per axiom.
    pub witnesses: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            carrier: DEFAULT_IDEAL_CARRIER_BOUND,
            words: DEFAULT_WORD_BOUND,
            witnesses: DEFAULT_WITNESS_CAP,
        }
    }
}

/// Parses `carrier=12,words=1048576,witnesses=32`; omitted keys keep their
/// defaults.
impl FromStr for Bounds {
    type Err = TgsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = Bounds::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| TgsError::Usage(format!("bound `{part}` is not key=value")))?;
            let bad = || TgsError::Usage(format!("bound `{key}` has invalid value `{value}`"));
            match key.trim() {
                "carrier" => b.carrier = value.trim().parse().map_err(|_| bad())?,
                "words" => b.words = value.trim().parse().map_err(|_| bad())?,
                "witnesses" => b.witnesses = value.trim().parse().map_err(|_| bad())?,
                other => return Err(TgsError::Usage(format!("unknown bound `{other}`"))),
            }
        }
        Ok(b)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "carrier={},words={},witnesses={}",
            self.carrier, self.words, self.witnesses
        )
    }
}

/// `x` with 12 significant digits, fixed notation.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0.00000000000".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99… → 10.0…)
    let significant = s
        .trim_start_matches(['-', '0', '.'])
        .chars()
        .filter(char::is_ascii_digit)
        .count();
    if significant > 12 && decimals > 0 {
        let d = decimals - 1;
        format!("{x:.d$}")
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, as a float.
pub fn round_sig12(x: f64) -> f64 {
    fmt_sig12(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_bounds() {
        assert_eq!("".parse::<Bounds>().unwrap(), Bounds::default());
        let b: Bounds = "words=100, carrier=4".parse().unwrap();
        assert_eq!(
            (b.carrier, b.words, b.witnesses),
            (4, 100, DEFAULT_WITNESS_CAP)
        );
        assert!("words=x".parse::<Bounds>().is_err());
        assert!("depth=3".parse::<Bounds>().is_err());
        assert!("words".parse::<Bounds>().is_err());
        let b: Bounds = "carrier=5,words=7,witnesses=1".parse().unwrap();
        assert_eq!(b.to_string().parse::<Bounds>().unwrap(), b);
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig12(8f64.ln() / 3f64.ln()), "1.89278926071");
        assert_eq!(fmt_sig12(1.0), "1.00000000000");
        assert_eq!(fmt_sig12(3.0 / 7.0), "0.428571428571");
        assert_eq!(fmt_sig12(0.0), "0.00000000000");
        assert_eq!(fmt_sig12(123.0), "123.000000000");
        assert_eq!(fmt_sig12(9.9999999999999), "10.0000000000");
        assert_eq!(round_sig12(3.0 / 7.0), 0.428571428571);
    }
}
