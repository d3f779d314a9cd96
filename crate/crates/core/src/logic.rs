//! Logic levels, voltages and the behavioral primitive gates.
//!
//! Ternary signals take the levels `0`, `1`, `2`, mapped onto `0`, `Vdd/2`
//! and `Vdd`. Binary signals (carries, threshold-detector outputs, MUX2
//! controls) only ever use the two rail levels `0` and `2`, so a binary
//! value is a [`Level`] restricted to `{0, 2}`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("level {0} is outside the binary domain {{0, 2}}")]
    DomainViolation(u8),
    #[error("{0} is not a logic level")]
    InvalidLevel(u8),
    #[error("voltage {0} is not a quiescent level for radix {1}")]
    UnresolvedVoltage(Voltage, u8),
    #[error("digit {digit} is not below radix {radix}")]
    DigitOutOfRange { digit: u8, radix: u8 },
    #[error("unsupported radix {0}")]
    UnsupportedRadix(u8),
}

/// A ternary logic level in `{0, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub const ZERO: Level = Level(0);
    pub const ONE: Level = Level(1);
    pub const TWO: Level = Level(2);
    pub const ALL: [Level; 3] = [Level::ZERO, Level::ONE, Level::TWO];

    pub fn new(value: u8) -> Result<Self, LogicError> {
        if value <= 2 {
            Ok(Level(value))
        } else {
            Err(LogicError::InvalidLevel(value))
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.0 != 1
    }
}

impl TryFrom<u8> for Level {
    type Error = LogicError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Level::new(value)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A binary signal carried on the `0` / `Vdd` rails. `false` is level 0 and
/// `true` is level 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryLevel(bool);

impl BinaryLevel {
    pub const LOW: BinaryLevel = BinaryLevel(false);
    pub const HIGH: BinaryLevel = BinaryLevel(true);
    pub const ALL: [BinaryLevel; 2] = [BinaryLevel::LOW, BinaryLevel::HIGH];

    pub fn from_bool(b: bool) -> Self {
        BinaryLevel(b)
    }

    pub fn as_bool(self) -> bool {
        self.0
    }

    pub fn level(self) -> Level {
        if self.0 {
            Level::TWO
        } else {
            Level::ZERO
        }
    }

    /// Numeric value, `0` or `2`.
    pub fn value(self) -> u8 {
        self.level().value()
    }
}

impl TryFrom<Level> for BinaryLevel {
    type Error = LogicError;

    fn try_from(level: Level) -> Result<Self, Self::Error> {
        match level.0 {
            0 => Ok(BinaryLevel::LOW),
            2 => Ok(BinaryLevel::HIGH),
            v => Err(LogicError::DomainViolation(v)),
        }
    }
}

impl From<BinaryLevel> for Level {
    fn from(b: BinaryLevel) -> Self {
        b.level()
    }
}

impl From<bool> for BinaryLevel {
    fn from(b: bool) -> Self {
        BinaryLevel(b)
    }
}

impl std::ops::Not for BinaryLevel {
    type Output = BinaryLevel;

    fn not(self) -> Self::Output {
        BinaryLevel(!self.0)
    }
}

impl fmt::Display for BinaryLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// An exact voltage in units of `Vdd`, within `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Voltage(Ratio<i64>);

impl Voltage {
    pub const GND: Voltage = Voltage(Ratio::new_raw(0, 1));
    pub const HALF: Voltage = Voltage(Ratio::new_raw(1, 2));
    pub const VDD: Voltage = Voltage(Ratio::new_raw(1, 1));

    /// `numer / denom` in units of Vdd. Returns `None` outside `[0, 1]` or for
    /// a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::zero() || r > Ratio::one() {
            return None;
        }
        Some(Voltage(r))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn is_quiescent(self) -> bool {
        self == Voltage::GND || self == Voltage::HALF || self == Voltage::VDD
    }

    /// Parses a plain decimal such as `0.25`, `.5` or `1`. At most 15
    /// fractional digits are accepted so the value stays exact.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || frac_part.len() > 15
            || int_part.len() > 3
        {
            return None;
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().ok()?
        };
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().ok()?
        };
        let denom = 10i64.pow(frac_part.len() as u32);
        Voltage::new(int.checked_mul(denom)?.checked_add(frac)?, denom)
    }

    /// Shortest exact decimal rendering, or `None` if the value has no
    /// terminating decimal expansion.
    pub fn to_decimal(self) -> Option<String> {
        let numer = *self.0.numer();
        let mut denom = *self.0.denom();
        while denom % 2 == 0 {
            denom /= 2;
        }
        while denom % 5 == 0 {
            denom /= 5;
        }
        if denom != 1 {
            return None;
        }
        let int = numer / self.0.denom();
        let mut rem = numer % self.0.denom();
        let mut out = int.to_string();
        if rem != 0 {
            out.push('.');
            while rem != 0 {
                rem *= 10;
                out.push(char::from(b'0' + (rem / self.0.denom()) as u8));
                rem %= self.0.denom();
            }
        }
        Some(out)
    }
}

impl fmt::Display for Voltage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radix {
    Binary,
    Ternary,
}

impl Radix {
    pub fn value(self) -> u8 {
        match self {
            Radix::Binary => 2,
            Radix::Ternary => 3,
        }
    }

    /// Legal levels on a port of this radix.
    pub fn levels(self) -> &'static [Level] {
        match self {
            Radix::Binary => &[Level::ZERO, Level::TWO],
            Radix::Ternary => &Level::ALL,
        }
    }

    /// Maps an arithmetic digit onto the wire level that carries it.
    pub fn digit_to_level(self, digit: u8) -> Result<Level, LogicError> {
        match (self, digit) {
            (Radix::Binary, 0) => Ok(Level::ZERO),
            (Radix::Binary, 1) => Ok(Level::TWO),
            (Radix::Ternary, d) if d < 3 => Ok(Level(d)),
            (r, d) => Err(LogicError::DigitOutOfRange {
                digit: d,
                radix: r.value(),
            }),
        }
    }

    pub fn level_to_digit(self, level: Level) -> Result<u8, LogicError> {
        match self {
            Radix::Binary => Ok(BinaryLevel::try_from(level)?.as_bool() as u8),
            Radix::Ternary => Ok(level.0),
        }
    }
}

impl TryFrom<u8> for Radix {
    type Error = LogicError;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        match n {
            2 => Ok(Radix::Binary),
            3 => Ok(Radix::Ternary),
            n => Err(LogicError::UnsupportedRadix(n)),
        }
    }
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Negative threshold inverter: high only for input 0 (switches at Vdd/4).
pub fn ni(x: Level) -> BinaryLevel {
    BinaryLevel(x.0 == 0)
}

/// Positive threshold inverter: high for inputs 0 and 1 (switches at 3Vdd/4).
pub fn pi(x: Level) -> BinaryLevel {
    BinaryLevel(x.0 <= 1)
}

pub fn succ(y: Level) -> Level {
    Level((y.0 + 1) % 3)
}

pub fn pred(y: Level) -> Level {
    Level((y.0 + 2) % 3)
}

/// Binary inverter on a wire level. Level 1 means a ternary wire reached a
/// binary-only input.
pub fn not_bin(b: Level) -> Result<Level, LogicError> {
    Ok((!BinaryLevel::try_from(b)?).level())
}

pub fn mux3(s: Level, a0: Level, a1: Level, a2: Level) -> Level {
    match s.0 {
        0 => a0,
        1 => a1,
        _ => a2,
    }
}

pub fn mux2(c: Level, a0: Level, a1: Level) -> Result<Level, LogicError> {
    Ok(if BinaryLevel::try_from(c)?.as_bool() {
        a1
    } else {
        a0
    })
}

/// Digit-level addition, the reference every adder circuit is checked against.
pub fn add_digits(x: u8, y: u8, cin: bool, radix: Radix) -> Result<(u8, bool), LogicError> {
    let r = radix.value();
    for d in [x, y] {
        if d >= r {
            return Err(LogicError::DigitOutOfRange { digit: d, radix: r });
        }
    }
    let total = x + y + cin as u8;
    Ok((total % r, total >= r))
}

pub fn level_to_voltage(x: Level, radix: Radix) -> Result<Voltage, LogicError> {
    match (radix, x.0) {
        (_, 0) => Ok(Voltage::GND),
        (_, 2) => Ok(Voltage::VDD),
        (Radix::Ternary, _) => Ok(Voltage::HALF),
        (Radix::Binary, v) => Err(LogicError::DomainViolation(v)),
    }
}

pub fn voltage_to_level(v: Voltage, radix: Radix) -> Result<Level, LogicError> {
    if v == Voltage::GND {
        Ok(Level::ZERO)
    } else if v == Voltage::VDD {
        Ok(Level::TWO)
    } else if v == Voltage::HALF && radix == Radix::Ternary {
        Ok(Level::ONE)
    } else {
        Err(LogicError::UnresolvedVoltage(v, radix.value()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(v: u8) -> Level {
        Level::new(v).unwrap()
    }

    #[test]
    fn threshold_inverters_match_table() {
        let ni_col: Vec<u8> = Level::ALL.iter().map(|&x| ni(x).value()).collect();
        let pi_col: Vec<u8> = Level::ALL.iter().map(|&x| pi(x).value()).collect();
        assert_eq!(ni_col, [2, 0, 0]);
        assert_eq!(pi_col, [2, 2, 0]);
    }

    #[test]
    fn successor_and_predecessor() {
        assert_eq!(Level::ALL.map(succ), [l(1), l(2), l(0)]);
        assert_eq!(Level::ALL.map(pred), [l(2), l(0), l(1)]);
        for x in Level::ALL {
            assert_eq!(succ(pred(x)), x);
            assert_eq!(pred(succ(x)), x);
            assert_eq!(succ(succ(succ(x))), x);
        }
    }

    #[test]
    fn ni_high_implies_pi_high() {
        for x in Level::ALL {
            if ni(x).as_bool() {
                assert!(pi(x).as_bool());
            }
        }
    }

    #[test]
    fn binary_inverter_rejects_middle_level() {
        assert_eq!(not_bin(l(0)), Ok(l(2)));
        assert_eq!(not_bin(l(2)), Ok(l(0)));
        assert_eq!(not_bin(l(1)), Err(LogicError::DomainViolation(1)));
    }

    #[test]
    fn multiplexers() {
        assert_eq!(mux3(l(0), l(2), l(0), l(1)), l(2));
        assert_eq!(mux3(l(1), l(2), l(0), l(1)), l(0));
        assert_eq!(mux3(l(2), l(2), l(0), l(1)), l(1));
        assert_eq!(mux2(l(0), l(1), l(2)), Ok(l(1)));
        assert_eq!(mux2(l(2), l(1), l(2)), Ok(l(2)));
        assert_eq!(mux2(l(1), l(1), l(2)), Err(LogicError::DomainViolation(1)));
        for s in Level::ALL {
            for a in Level::ALL {
                assert_eq!(mux3(s, a, a, a), a);
            }
        }
        for c in [l(0), l(2)] {
            for a in Level::ALL {
                assert_eq!(mux2(c, a, a), Ok(a));
            }
        }
    }

    const HA_SUM: [[u8; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
    const HA_CARRY: [[u8; 3]; 3] = [[0, 0, 0], [0, 0, 1], [0, 1, 1]];
    const FA1_SUM: [[u8; 3]; 3] = [[1, 2, 0], [2, 0, 1], [0, 1, 2]];
    const FA1_CARRY: [[u8; 3]; 3] = [[0, 0, 1], [0, 1, 1], [1, 1, 1]];

    #[test]
    fn digit_adder_reproduces_half_and_full_adder_tables() {
        for x in 0..3u8 {
            for y in 0..3u8 {
                let (s, c) = add_digits(x, y, false, Radix::Ternary).unwrap();
                assert_eq!(s, HA_SUM[x as usize][y as usize]);
                assert_eq!(c as u8, HA_CARRY[x as usize][y as usize]);
                let (s, c) = add_digits(x, y, true, Radix::Ternary).unwrap();
                assert_eq!(s, FA1_SUM[x as usize][y as usize]);
                assert_eq!(c as u8, FA1_CARRY[x as usize][y as usize]);
            }
        }
        assert_eq!(add_digits(1, 2, false, Radix::Ternary), Ok((0, true)));
        assert_eq!(add_digits(2, 2, true, Radix::Ternary), Ok((2, true)));
        assert_eq!(add_digits(0, 0, false, Radix::Ternary), Ok((0, false)));
        assert!(add_digits(2, 0, false, Radix::Binary).is_err());
    }

    #[test]
    fn voltage_mapping() {
        assert_eq!(level_to_voltage(l(1), Radix::Ternary), Ok(Voltage::HALF));
        assert_eq!(voltage_to_level(Voltage::VDD, Radix::Ternary), Ok(l(2)));
        let v = Voltage::parse_decimal("0.3").unwrap();
        assert_eq!(
            voltage_to_level(v, Radix::Ternary),
            Err(LogicError::UnresolvedVoltage(v, 3))
        );
        assert!(voltage_to_level(Voltage::HALF, Radix::Binary).is_err());
        assert!(level_to_voltage(l(1), Radix::Binary).is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Voltage::parse_decimal("0.25"), Voltage::new(1, 4));
        assert_eq!(Voltage::parse_decimal(".5"), Some(Voltage::HALF));
        assert_eq!(Voltage::parse_decimal("1"), Some(Voltage::VDD));
        assert_eq!(
            Voltage::parse_decimal("0.500")
                .unwrap()
                .to_decimal()
                .unwrap(),
            "0.5"
        );
        assert_eq!(Voltage::new(3, 4).unwrap().to_string(), "0.75");
        assert_eq!(Voltage::new(1, 3).unwrap().to_decimal(), None);
        for bad in ["", ".", "1.2.3", "-0.5", "1.5", "0x1", "0.1234567890123456"] {
            assert_eq!(Voltage::parse_decimal(bad), None, "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn voltage_round_trip(v in 0u8..3, ternary in any::<bool>()) {
            let radix = if ternary { Radix::Ternary } else { Radix::Binary };
            let x = l(v);
            prop_assume!(ternary || x.is_binary());
            let volts = level_to_voltage(x, radix).unwrap();
            prop_assert_eq!(voltage_to_level(volts, radix).unwrap(), x);
        }

        #[test]
        fn decimal_round_trip(n in 0i64..=1_000_000) {
            let v = Voltage::new(n, 1_000_000).unwrap();
            let s = v.to_decimal().unwrap();
            prop_assert_eq!(Voltage::parse_decimal(&s), Some(v));
        }
    }
}
