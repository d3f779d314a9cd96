//! Multi-digit ripple-carry adders assembled from the single-digit cells and
//! checked against integer addition.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{AdderKind, CircuitGraph, GraphError, SupplyMode};
use crate::logic::{BinaryLevel, LogicError, Radix};
use crate::metrics::{
    self, adder_cost, equivalent_trits, information_ratio, range_equivalent_trits,
    ComparisonReport, ComparisonRow, CostBreakdown, FaVersion, WordWidths,
};

/// Seed of the operand sample used when a width is too large to enumerate.
pub const SAMPLE_SEED: u64 = 0x7E1A_2024_0001;
pub const SAMPLE_SIZE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("width {width} is not supported for radix {radix}")]
    InvalidWidth { radix: u8, width: usize },
    #[error("operand width {got} does not match adder width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("operand radix {got} does not match adder radix {expected}")]
    RadixMismatch { expected: u8, got: u8 },
    #[error("value {value} does not fit in {width} digits of radix {radix}")]
    Overflow {
        value: u128,
        radix: u8,
        width: usize,
    },
    #[error("stage {0} does not exist")]
    NoSuchStage(usize),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn capacity(radix: Radix, width: usize) -> Result<u128, ArithmeticError> {
    let cap = u128::from(radix.value())
        .checked_pow(width as u32)
        .filter(|&c| width >= 1 && c <= u128::from(u64::MAX));
    cap.ok_or(ArithmeticError::InvalidWidth {
        radix: radix.value(),
        width,
    })
}

/// Digits least-significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    radix: Radix,
    digits: Vec<u8>,
}

impl DigitVector {
    pub fn new(radix: Radix, digits: Vec<u8>) -> Result<Self, ArithmeticError> {
        capacity(radix, digits.len())?;
        if let Some(&d) = digits.iter().find(|&&d| d >= radix.value()) {
            return Err(LogicError::DigitOutOfRange {
                digit: d,
                radix: radix.value(),
            }
            .into());
        }
        Ok(DigitVector { radix, digits })
    }

    pub fn from_value(radix: Radix, width: usize, value: u128) -> Result<Self, ArithmeticError> {
        if value >= capacity(radix, width)? {
            return Err(ArithmeticError::Overflow {
                value,
                radix: radix.value(),
                width,
            });
        }
        let r = u128::from(radix.value());
        let mut rest = value;
        let digits = (0..width)
            .map(|_| {
                let d = (rest % r) as u8;
                rest /= r;
                d
            })
            .collect();
        Ok(DigitVector { radix, digits })
    }

    pub fn zero(radix: Radix, width: usize) -> Result<Self, ArithmeticError> {
        Self::from_value(radix, width, 0)
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn value(&self) -> u128 {
        let r = u128::from(self.radix.value());
        self.digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * r + u128::from(d))
    }
}

/// Fault injected on the carry wire feeding a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarryFault {
    StuckAt(bool),
    Inverted,
}

impl CarryFault {
    fn apply(self, carry: bool) -> bool {
        match self {
            CarryFault::StuckAt(v) => v,
            CarryFault::Inverted => !carry,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RippleAdder {
    radix: Radix,
    fa_version: FaVersion,
    stages: Vec<(AdderKind, CircuitGraph)>,
    // Entry `i` describes the wire from stage `i - 1` into stage `i`.
    carry_faults: Vec<Option<CarryFault>>,
}

/// Stage 0 is a half adder, every further stage a full adder. Binary adders
/// use the conventional CMOS cells; `fa_version` only applies to radix 3.
pub fn build_ripple_adder(
    radix: Radix,
    width: usize,
    fa_version: FaVersion,
) -> Result<RippleAdder, ArithmeticError> {
    capacity(radix, width)?;
    let (ha, fa) = match (radix, fa_version) {
        (Radix::Ternary, FaVersion::V1) => (AdderKind::TernaryHa, AdderKind::TernaryFaV1),
        (Radix::Ternary, FaVersion::V2) => (AdderKind::TernaryHa, AdderKind::TernaryFaV2),
        (Radix::Binary, _) => (AdderKind::BinaryHaStd14, AdderKind::BinaryFaStd28),
    };
    let (ha_graph, fa_graph) = (ha.build(), fa.build());
    let stages = (0..width)
        .map(|i| {
            if i == 0 {
                (ha, ha_graph.clone())
            } else {
                (fa, fa_graph.clone())
            }
        })
        .collect();
    Ok(RippleAdder {
        radix,
        fa_version,
        stages,
        carry_faults: vec![None; width],
    })
}

impl RippleAdder {
    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn width(&self) -> usize {
        self.stages.len()
    }

    pub fn fa_version(&self) -> FaVersion {
        self.fa_version
    }

    pub fn stage_kinds(&self) -> impl Iterator<Item = AdderKind> + '_ {
        self.stages.iter().map(|(k, _)| *k)
    }

    pub fn name(&self) -> String {
        match self.radix {
            Radix::Ternary => format!("{}-trit ripple (fa-{})", self.width(), self.fa_version),
            Radix::Binary => format!("{}-bit ripple (std cells)", self.width()),
        }
    }

    /// Copy of the adder with a fault on the carry into `stage` (1-based
    /// positions only; stage 0 has no carry in).
    pub fn with_carry_fault(
        &self,
        stage: usize,
        fault: CarryFault,
    ) -> Result<RippleAdder, ArithmeticError> {
        if stage == 0 || stage >= self.width() {
            return Err(ArithmeticError::NoSuchStage(stage));
        }
        let mut adder = self.clone();
        adder.carry_faults[stage] = Some(fault);
        Ok(adder)
    }

    pub fn stage_costs(&self, mode: SupplyMode) -> Vec<CostBreakdown> {
        self.stage_kinds().map(|k| adder_cost(k, mode)).collect()
    }

    /// Sum of the stage costs.
    pub fn cost(&self, mode: SupplyMode) -> u32 {
        self.stage_costs(mode)
            .iter()
            .map(CostBreakdown::headline_total)
            .sum()
    }

    /// Simulates the stage circuits digit by digit.
    pub fn add(
        &self,
        a: &DigitVector,
        b: &DigitVector,
    ) -> Result<(DigitVector, bool), ArithmeticError> {
        for v in [a, b] {
            if v.radix != self.radix {
                return Err(ArithmeticError::RadixMismatch {
                    expected: self.radix.value(),
                    got: v.radix.value(),
                });
            }
            if v.width() != self.width() {
                return Err(ArithmeticError::WidthMismatch {
                    expected: self.width(),
                    got: v.width(),
                });
            }
        }
        let mut carry = false;
        let mut digits = Vec::with_capacity(self.width());
        for (i, (_, stage)) in self.stages.iter().enumerate() {
            if let Some(fault) = self.carry_faults[i] {
                carry = fault.apply(carry);
            }
            let mut ports = vec![
                self.radix.digit_to_level(a.digits[i])?,
                self.radix.digit_to_level(b.digits[i])?,
            ];
            if i > 0 {
                ports.push(BinaryLevel::from_bool(carry).level());
            }
            let out = stage.evaluate_ports(&ports)?;
            digits.push(self.radix.level_to_digit(out[0])?);
            carry = BinaryLevel::try_from(out[1])?.as_bool();
        }
        Ok((
            DigitVector {
                radix: self.radix,
                digits,
            },
            carry,
        ))
    }
}

pub fn add(
    adder: &RippleAdder,
    a: &DigitVector,
    b: &DigitVector,
) -> Result<(DigitVector, bool), ArithmeticError> {
    adder.add(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCase {
    pub a: u128,
    pub b: u128,
    pub sum: u128,
    pub carry_out: bool,
    pub expected_sum: u128,
    pub expected_carry_out: bool,
}

impl WordCase {
    pub fn matches(&self) -> bool {
        self.sum == self.expected_sum && self.carry_out == self.expected_carry_out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub adder: String,
    pub exhaustive: bool,
    pub cases: Vec<WordCase>,
}

impl OracleReport {
    pub fn cases_checked(&self) -> usize {
        self.cases.len()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &WordCase> {
        self.cases.iter().filter(|c| !c.matches())
    }

    pub fn mismatch_count(&self) -> usize {
        self.mismatches().count()
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count() == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} {} cases, {} mismatches",
            self.adder,
            self.cases_checked(),
            if self.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            },
            self.mismatch_count()
        )
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "a",
            "b",
            "sum",
            "carry_out",
            "expected_sum",
            "expected_carry_out",
            "match",
        ])?;
        for c in &self.cases {
            wtr.write_record([
                c.a.to_string(),
                c.b.to_string(),
                c.sum.to_string(),
                c.carry_out.to_string(),
                c.expected_sum.to_string(),
                c.expected_carry_out.to_string(),
                c.matches().to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Operand pairs that stress the carry chain.
fn boundary_pairs(radix: Radix, width: usize) -> Vec<(u128, u128)> {
    let r = u128::from(radix.value());
    let max = r.pow(width as u32) - 1;
    let mut pairs = vec![(0, 0), (max, max), (max, 0), (0, max), (max, 1), (1, max)];
    for i in 0..width as u32 {
        let p = r.pow(i);
        pairs.push(((r - 1) * p, p));
        pairs.push((r.pow(i + 1) - 1, 1));
    }
    pairs
}

/// Checks the adder against integer addition: every operand pair when
/// `radix^(2·width) <= exhaustive_limit`, otherwise a fixed-seed sample of
/// [`SAMPLE_SIZE`] pairs plus the carry-chain boundary pairs.
pub fn oracle_check(
    adder: &RippleAdder,
    exhaustive_limit: u128,
) -> Result<OracleReport, ArithmeticError> {
    let width = adder.width();
    let cap = capacity(adder.radix, width)?;
    let exhaustive = cap.checked_mul(cap).is_some_and(|n| n <= exhaustive_limit);
    let pairs: Vec<(u128, u128)> = if exhaustive {
        (0..cap)
            .flat_map(|a| (0..cap).map(move |b| (a, b)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut pairs: Vec<(u128, u128)> = (0..SAMPLE_SIZE)
            .map(|_| (rng.gen_range(0..cap), rng.gen_range(0..cap)))
            .collect();
        pairs.extend(boundary_pairs(adder.radix, width));
        pairs
    };
    let mut cases = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let (sum, carry_out) = adder.add(
            &DigitVector::from_value(adder.radix, width, a)?,
            &DigitVector::from_value(adder.radix, width, b)?,
        )?;
        cases.push(WordCase {
            a,
            b,
            sum: sum.value(),
            carry_out,
            expected_sum: (a + b) % cap,
            expected_carry_out: a + b >= cap,
        });
    }
    Ok(OracleReport {
        adder: adder.name(),
        exhaustive,
        cases,
    })
}

/// Cost of an n-bit binary ripple adder next to the information-equivalent
/// ternary one.
pub fn word_comparison(
    bits: u32,
    mode: SupplyMode,
    fa_version: FaVersion,
) -> Result<ComparisonReport, ArithmeticError> {
    let trits = equivalent_trits(bits);
    let binary = build_ripple_adder(Radix::Binary, bits as usize, fa_version)?;
    let ternary = build_ripple_adder(Radix::Ternary, trits as usize, fa_version)?;
    let supply = match mode {
        SupplyMode::TwoSupplies => "two supplies",
        SupplyMode::OneSupply => "one supply",
    };
    Ok(ComparisonReport {
        rows: vec![ComparisonRow {
            ternary: format!("{} trits (fa-{fa_version}, {supply})", trits),
            binary: format!("{bits} bits (std cells)"),
            ternary_count: ternary.cost(mode),
            binary_count: binary.cost(mode),
            published: None,
        }],
        information_ratio: information_ratio(Radix::Ternary),
        widths: Some(WordWidths {
            bits,
            trits,
            range_trits: range_equivalent_trits(bits),
        }),
    })
}

/// Ratio of the word comparison as an exact fraction.
pub fn word_ratio(report: &ComparisonReport) -> Option<num_rational::Ratio<u64>> {
    report.rows.first().map(metrics::ComparisonRow::ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(digits: &[u8]) -> DigitVector {
        DigitVector::new(Radix::Ternary, digits.to_vec()).unwrap()
    }

    #[test]
    fn two_trit_example() {
        let adder = build_ripple_adder(Radix::Ternary, 2, FaVersion::V2).unwrap();
        let (a, b) = (t(&[2, 2]), t(&[1, 1]));
        assert_eq!((a.value(), b.value()), (8, 4));
        let (sum, carry) = adder.add(&a, &b).unwrap();
        assert_eq!(sum.digits(), [0, 1]);
        assert!(carry);
    }

    #[test]
    fn binary_overflow_wraps() {
        let adder = build_ripple_adder(Radix::Binary, 8, FaVersion::V2).unwrap();
        let a = DigitVector::from_value(Radix::Binary, 8, 255).unwrap();
        let b = DigitVector::from_value(Radix::Binary, 8, 1).unwrap();
        let (sum, carry) = adder.add(&a, &b).unwrap();
        assert_eq!(sum.value(), 0);
        assert!(carry);
    }

    #[test]
    fn zero_is_the_identity() {
        let adder = build_ripple_adder(Radix::Ternary, 3, FaVersion::V1).unwrap();
        let z = DigitVector::zero(Radix::Ternary, 3).unwrap();
        for v in 0..27 {
            let b = DigitVector::from_value(Radix::Ternary, 3, v).unwrap();
            assert_eq!(adder.add(&z, &b).unwrap(), (b, false));
        }
    }

    #[test]
    fn costs() {
        let t5 = build_ripple_adder(Radix::Ternary, 5, FaVersion::V2).unwrap();
        assert_eq!(t5.cost(SupplyMode::TwoSupplies), 42 + 4 * 72);
        let b8 = build_ripple_adder(Radix::Binary, 8, FaVersion::V2).unwrap();
        assert_eq!(b8.cost(SupplyMode::TwoSupplies), 14 + 7 * 28);
        let t1 = build_ripple_adder(Radix::Ternary, 1, FaVersion::V2).unwrap();
        assert_eq!(t1.stage_kinds().collect::<Vec<_>>(), [AdderKind::TernaryHa]);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            build_ripple_adder(Radix::Ternary, 0, FaVersion::V2).unwrap_err(),
            ArithmeticError::InvalidWidth { radix: 3, width: 0 }
        );
        assert!(build_ripple_adder(Radix::Ternary, 41, FaVersion::V2).is_err());
        let adder = build_ripple_adder(Radix::Ternary, 2, FaVersion::V2).unwrap();
        assert_eq!(
            adder.add(&t(&[1]), &t(&[1, 1])).unwrap_err(),
            ArithmeticError::WidthMismatch {
                expected: 2,
                got: 1
            }
        );
        let bin = DigitVector::from_value(Radix::Binary, 2, 3).unwrap();
        assert!(matches!(
            adder.add(&bin, &t(&[1, 1])),
            Err(ArithmeticError::RadixMismatch { .. })
        ));
        assert!(DigitVector::from_value(Radix::Ternary, 2, 9).is_err());
        assert!(DigitVector::new(Radix::Binary, vec![2]).is_err());
    }

    #[test]
    fn exhaustive_checks() {
        let r = oracle_check(
            &build_ripple_adder(Radix::Ternary, 4, FaVersion::V2).unwrap(),
            10_000,
        )
        .unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.cases_checked(), 6561);
        assert!(r.passed());
        let r = oracle_check(
            &build_ripple_adder(Radix::Binary, 4, FaVersion::V2).unwrap(),
            10_000,
        )
        .unwrap();
        assert_eq!(r.cases_checked(), 256);
        assert!(r.passed());
    }

    #[test]
    fn sampled_check_and_fault_injection() {
        let adder = build_ripple_adder(Radix::Ternary, 5, FaVersion::V2).unwrap();
        let r = oracle_check(&adder, 10_000).unwrap();
        assert!(!r.exhaustive);
        assert!(r.cases_checked() >= SAMPLE_SIZE);
        assert!(r.passed());
        // Same seed, same sample.
        assert_eq!(r, oracle_check(&adder, 10_000).unwrap());

        let broken = adder
            .with_carry_fault(3, CarryFault::StuckAt(false))
            .unwrap();
        assert!(oracle_check(&broken, 10_000).unwrap().mismatch_count() > 0);
        let broken = adder.with_carry_fault(3, CarryFault::Inverted).unwrap();
        assert!(oracle_check(&broken, 10_000).unwrap().mismatch_count() > 0);
        assert!(adder.with_carry_fault(0, CarryFault::Inverted).is_err());
    }

    #[test]
    fn word_comparisons() {
        let r = word_comparison(8, SupplyMode::TwoSupplies, FaVersion::V2).unwrap();
        let w = r.widths.unwrap();
        assert_eq!((w.bits, w.trits, w.range_trits), (8, 5, 6));
        assert_eq!(
            (r.rows[0].ternary_count, r.rows[0].binary_count),
            (330, 210)
        );
        assert_eq!(metrics::format_ratio(word_ratio(&r).unwrap(), 3), "1.571");
        let r = word_comparison(1, SupplyMode::TwoSupplies, FaVersion::V2).unwrap();
        assert_eq!((r.rows[0].ternary_count, r.rows[0].binary_count), (42, 14));
        assert_eq!(metrics::format_ratio(word_ratio(&r).unwrap(), 2), "3.00");
    }

    proptest! {
        #[test]
        fn addition_matches_integers_and_commutes(width in 1usize..=12, a in any::<u64>(), b in any::<u64>(), v1 in any::<bool>()) {
            let version = if v1 { FaVersion::V1 } else { FaVersion::V2 };
            let adder = build_ripple_adder(Radix::Ternary, width, version).unwrap();
            let cap = 3u128.pow(width as u32);
            let (a, b) = (u128::from(a) % cap, u128::from(b) % cap);
            let va = DigitVector::from_value(Radix::Ternary, width, a).unwrap();
            let vb = DigitVector::from_value(Radix::Ternary, width, b).unwrap();
            let (s, c) = adder.add(&va, &vb).unwrap();
            prop_assert_eq!(s.value() + u128::from(c) * cap, a + b);
            prop_assert_eq!(adder.add(&vb, &va).unwrap(), (s, c));
        }

        #[test]
        fn binary_width_covers_ternary_range(w in 1u32..=40) {
            // ceil(w·log2 3) bits hold every w-trit value, with under one bit to spare.
            let bits = (f64::from(w) * information_ratio(Radix::Ternary)).ceil() as u32;
            let trit_cap = 3u128.pow(w);
            prop_assert!(trit_cap <= 1u128 << bits);
            prop_assert!(1u128 << bits < 2 * trit_cap);
        }

        #[test]
        fn cost_is_sum_of_stage_costs(width in 1usize..=16, one in any::<bool>()) {
            let mode = if one { SupplyMode::OneSupply } else { SupplyMode::TwoSupplies };
            let adder = build_ripple_adder(Radix::Ternary, width, FaVersion::V2).unwrap();
            let fa = metrics::fa_cost_table(FaVersion::V2, mode).headline_total();
            let ha = metrics::ha_cost_table(mode).headline_total();
            prop_assert_eq!(adder.cost(mode), ha + (width as u32 - 1) * fa);
        }
    }
}
