//! Transistor-count cost model, the published count tables, prior-work data
//! and the ternary-vs-binary information-ratio comparison.
//!
//! # Per-primitive costs
//!
//! The counts below are not listed per primitive anywhere; they fall out of the
//! table arithmetic:
//!
//! | primitive        | two supplies | one supply | derivation                                  |
//! |------------------|-------------:|-----------:|---------------------------------------------|
//! | successor / pred |            4 |          7 | HA `8 / 14` over 2 circuits, FA `12 / 21` over 3 |
//! | MUX3             |           16 |         16 | HA `MUX 16`                                 |
//! | MUX2             |            4 |          4 | FA `MUX2 4`                                 |
//! | NI, PI, NOT      |            2 |          2 | HA `PI-NI 16` = 8 inverters                 |
//! | CONST            |            0 |          0 | rail tie                                    |
//!
//! The built-in adders are charged the published breakdown for their kind,
//! not the sum over their behavioral gates: the behavioral graphs use the
//! minimal decode, while the published counts include decode and restoring
//! inverters that have no behavioral counterpart.

use std::fmt;
use std::io;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{AdderKind, CircuitGraph, GateKind, SupplyMode};
use crate::logic::{Level, Radix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no transistor-level cost for {0}")]
    UnknownPrimitive(String),
}

pub const INVERTER_COST: u32 = 2;
pub const MUX2_COST: u32 = 4;
pub const MUX3_COST: u32 = 16;

pub fn succ_pred_cost(mode: SupplyMode) -> u32 {
    match mode {
        SupplyMode::TwoSupplies => 4,
        SupplyMode::OneSupply => 7,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CostClass {
    SuccPred,
    Mux3,
    Mux2,
    PiNi,
    Not,
    /// A whole cell charged as a single annotated count.
    Cell,
}

impl CostClass {
    pub fn label(self) -> &'static str {
        match self {
            CostClass::SuccPred => "SUCC_PRED",
            CostClass::Mux3 => "MUX3",
            CostClass::Mux2 => "MUX2",
            CostClass::PiNi => "PI_NI",
            CostClass::Not => "NOT",
            CostClass::Cell => "CELL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    Carry,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostRow {
    pub section: Option<Section>,
    pub class: CostClass,
    pub count: u32,
}

impl CostRow {
    pub fn component(&self) -> String {
        match self.section {
            None => self.class.label().to_string(),
            Some(Section::Carry) => format!("carry.{}", self.class.label()),
            Some(Section::Sum) => format!("sum.{}", self.class.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostBreakdown {
    pub circuit: String,
    /// `None` for cells whose count does not depend on the supply.
    pub supply_mode: Option<SupplyMode>,
    pub rows: Vec<CostRow>,
    /// Total as published, when the breakdown comes from a table.
    pub printed_total: Option<u32>,
}

impl CostBreakdown {
    /// Sum of the rows.
    pub fn total(&self) -> u32 {
        self.rows.iter().map(|r| r.count).sum()
    }

    /// The figure quoted for this circuit: the published total if any,
    /// otherwise the row sum.
    pub fn headline_total(&self) -> u32 {
        self.printed_total.unwrap_or_else(|| self.total())
    }

    /// `(printed, computed)` when the published total disagrees with its rows.
    pub fn discrepancy(&self) -> Option<(u32, u32)> {
        self.printed_total
            .filter(|&p| p != self.total())
            .map(|p| (p, self.total()))
    }

    pub fn section_total(&self, section: Section) -> u32 {
        self.rows
            .iter()
            .filter(|r| r.section == Some(section))
            .map(|r| r.count)
            .sum()
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["component", "count"])?;
        for r in &self.rows {
            wtr.write_record([r.component(), r.count.to_string()])?;
        }
        wtr.write_record(["total".to_string(), self.total().to_string()])?;
        if let Some(p) = self.printed_total {
            wtr.write_record(["printed_total".to_string(), p.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<(String, String)> = self
            .rows
            .iter()
            .map(|r| (r.component(), r.count.to_string()))
            .collect();
        lines.push(("total".into(), self.total().to_string()));
        if let Some(p) = self.printed_total {
            lines.push(("printed total".into(), p.to_string()));
        }
        let w = lines
            .iter()
            .map(|(c, _)| c.len())
            .max()
            .unwrap_or(0)
            .max("component".len());
        let mut out = format!("circuit: {}\n", self.circuit);
        if let Some(m) = self.supply_mode {
            out.push_str(&format!("supply: {m}\n"));
        }
        out.push_str(&format!("{:<w$}  count\n", "component"));
        for (c, n) in lines {
            out.push_str(&format!("{c:<w$}  {n:>5}\n"));
        }
        if let Some((p, c)) = self.discrepancy() {
            out.push_str(&format!(
                "note: printed total {p} differs from the row sum {c}\n"
            ));
        }
        out
    }
}

fn rows(section: Option<Section>, counts: [(CostClass, u32); 5]) -> Vec<CostRow> {
    counts
        .into_iter()
        .map(|(class, count)| CostRow {
            section,
            class,
            count,
        })
        .collect()
}

/// Ternary half adder breakdown.
pub fn ha_cost_table(mode: SupplyMode) -> CostBreakdown {
    use CostClass::*;
    let (sp, total) = match mode {
        SupplyMode::TwoSupplies => (8, 42),
        SupplyMode::OneSupply => (14, 48),
    };
    let rows = vec![
        CostRow {
            section: None,
            class: SuccPred,
            count: sp,
        },
        CostRow {
            section: None,
            class: Mux3,
            count: 16,
        },
        CostRow {
            section: None,
            class: PiNi,
            count: 16,
        },
        CostRow {
            section: None,
            class: Not,
            count: 2,
        },
    ];
    CostBreakdown {
        circuit: "ternary-ha".into(),
        supply_mode: Some(mode),
        rows,
        printed_total: Some(total),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaVersion {
    V1,
    V2,
}

impl fmt::Display for FaVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaVersion::V1 => "v1",
            FaVersion::V2 => "v2",
        })
    }
}

/// Ternary full adder breakdown: carry section, then sum section, with the
/// published total kept alongside the row sum.
pub fn fa_cost_table(version: FaVersion, mode: SupplyMode) -> CostBreakdown {
    use CostClass::*;
    let carry = rows(
        Some(Section::Carry),
        [(SuccPred, 0), (Mux3, 16), (Mux2, 4), (PiNi, 0), (Not, 6)],
    );
    let (sum, printed) = match (version, mode) {
        (FaVersion::V1, SupplyMode::TwoSupplies) => ([12, 8, 4, 24, 2], 76),
        (FaVersion::V2, SupplyMode::TwoSupplies) => ([8, 16, 4, 16, 2], 72),
        (FaVersion::V1, SupplyMode::OneSupply) => ([21, 8, 4, 24, 2], 83),
        (FaVersion::V2, SupplyMode::OneSupply) => ([14, 16, 4, 16, 2], 78),
    };
    let sum = rows(
        Some(Section::Sum),
        [
            (SuccPred, sum[0]),
            (Mux3, sum[1]),
            (Mux2, sum[2]),
            (PiNi, sum[3]),
            (Not, sum[4]),
        ],
    );
    CostBreakdown {
        circuit: format!("ternary-fa-{version}"),
        supply_mode: Some(mode),
        rows: carry.into_iter().chain(sum).collect(),
        printed_total: Some(printed),
    }
}

/// Binary reference counts: MUX-technique cells, their level-restored
/// versions, and the conventional complementary CMOS cells.
pub fn binary_baseline_costs() -> Vec<(&'static str, u32)> {
    vec![
        ("HA_mux", 12),
        ("HA_mux_restored", 14),
        ("HA_std", 14),
        ("FA_mux", 30),
        ("FA_mux_restored", 34),
        ("FA_std", 28),
    ]
}

fn baseline(name: &str) -> u32 {
    binary_baseline_costs()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
        .expect("baseline name")
}

fn flat(circuit: &str, count: u32) -> CostBreakdown {
    CostBreakdown {
        circuit: circuit.into(),
        supply_mode: None,
        rows: vec![CostRow {
            section: None,
            class: CostClass::Cell,
            count,
        }],
        printed_total: None,
    }
}

/// Cost class and transistor count of one gate instance.
pub fn primitive_cost(
    kind: GateKind,
    mode: SupplyMode,
) -> Result<Option<(CostClass, u32)>, MetricsError> {
    Ok(match kind {
        GateKind::Succ | GateKind::Pred => Some((CostClass::SuccPred, succ_pred_cost(mode))),
        GateKind::Mux3 => Some((CostClass::Mux3, MUX3_COST)),
        GateKind::Mux2 => Some((CostClass::Mux2, MUX2_COST)),
        GateKind::Ni | GateKind::Pi => Some((CostClass::PiNi, INVERTER_COST)),
        GateKind::NotBin => Some((CostClass::Not, INVERTER_COST)),
        GateKind::Const(l) if l == Level::ONE && mode == SupplyMode::OneSupply => {
            return Err(MetricsError::UnknownPrimitive(
                "CONST 1 without a Vdd/2 rail".to_string(),
            ))
        }
        GateKind::Const(_) => None,
    })
}

/// Sum of per-primitive costs over the gate instances of `c`.
pub fn primitive_count(c: &CircuitGraph, mode: SupplyMode) -> Result<CostBreakdown, MetricsError> {
    let order = [
        CostClass::SuccPred,
        CostClass::Mux3,
        CostClass::Mux2,
        CostClass::PiNi,
        CostClass::Not,
    ];
    let mut totals = [0u32; 5];
    for g in c.gates() {
        if let Some((class, n)) = primitive_cost(g.kind, mode)? {
            let i = order
                .iter()
                .position(|c| *c == class)
                .expect("gate classes are listed");
            totals[i] += n;
        }
    }
    Ok(CostBreakdown {
        circuit: c.name().to_string(),
        supply_mode: Some(mode),
        rows: order
            .into_iter()
            .zip(totals)
            .filter(|(_, n)| *n > 0)
            .map(|(class, count)| CostRow {
                section: None,
                class,
                count,
            })
            .collect(),
        printed_total: None,
    })
}

/// Cost of a built-in adder comes from its published breakdown; any other
/// circuit is costed gate by gate.
pub fn count_transistors(
    c: &CircuitGraph,
    mode: SupplyMode,
) -> Result<CostBreakdown, MetricsError> {
    match c.kind() {
        Some(kind) => Ok(adder_cost(kind, mode)),
        None => primitive_count(c, mode),
    }
}

pub fn adder_cost(kind: AdderKind, mode: SupplyMode) -> CostBreakdown {
    match kind {
        AdderKind::TernaryHa => ha_cost_table(mode),
        AdderKind::TernaryFaV1 => fa_cost_table(FaVersion::V1, mode),
        AdderKind::TernaryFaV2 => fa_cost_table(FaVersion::V2, mode),
        AdderKind::BinaryHaMux => flat(kind.id(), baseline("HA_mux")),
        AdderKind::BinaryHaStd14 => flat(kind.id(), baseline("HA_std")),
        AdderKind::BinaryFaMux => flat(kind.id(), baseline("FA_mux")),
        AdderKind::BinaryFaStd28 => flat(kind.id(), baseline("FA_std")),
    }
}

/// Bits of information per digit: `log2(radix)`.
pub fn information_ratio(radix: Radix) -> f64 {
    f64::from(radix.value()).log2()
}

/// Trits carrying about the same information as `bits` bits, rounded to the
/// nearest whole digit (8 bits pair with 5 trits).
pub fn equivalent_trits(bits: u32) -> u32 {
    let exact = f64::from(bits) / information_ratio(Radix::Ternary);
    (exact.round() as u32).max(1)
}

/// Smallest trit count whose range covers `bits` bits: least `t` with
/// `3^t >= 2^bits`.
pub fn range_equivalent_trits(bits: u32) -> u32 {
    let exact = f64::from(bits) / information_ratio(Radix::Ternary);
    (exact.ceil() as u32).max(1)
}

/// Exact ratio rendered with `decimals` digits, rounding half up.
pub fn format_ratio(r: Ratio<u64>, decimals: u32) -> String {
    let scale = 10u64.pow(decimals);
    let scaled = (r.numer() * scale * 2 + r.denom()) / (r.denom() * 2);
    if decimals == 0 {
        return scaled.to_string();
    }
    format!(
        "{}.{:0width$}",
        scaled / scale,
        scaled % scale,
        width = decimals as usize
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub ternary: String,
    pub binary: String,
    pub ternary_count: u32,
    pub binary_count: u32,
    /// Ratio as quoted in the literature, when there is one.
    pub published: Option<&'static str>,
}

impl ComparisonRow {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(u64::from(self.ternary_count), u64::from(self.binary_count))
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ternary_count as f64 / self.binary_count as f64
    }

    pub fn exceeds_information_ratio(&self) -> bool {
        self.ratio_f64() > information_ratio(Radix::Ternary)
    }

    /// Whether the exact ratio rounds to the quoted figure at the quoted
    /// precision.
    pub fn matches_published(&self) -> Option<bool> {
        let p = self.published?;
        let decimals = p.split_once('.').map_or(0, |(_, f)| f.len() as u32);
        let value: f64 = p.parse().ok()?;
        let tol = 0.5 * 10f64.powi(-(decimals as i32));
        Some((self.ratio_f64() - value).abs() <= tol + 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordWidths {
    pub bits: u32,
    /// Information-equivalent width.
    pub trits: u32,
    /// Range-equivalent width.
    pub range_trits: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub information_ratio: f64,
    pub widths: Option<WordWidths>,
}

impl ComparisonReport {
    pub fn all_exceed_information_ratio(&self) -> bool {
        self.rows
            .iter()
            .all(ComparisonRow::exceeds_information_ratio)
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "ternary",
            "binary",
            "ternary_count",
            "binary_count",
            "ratio",
            "information_ratio",
        ])?;
        for r in &self.rows {
            wtr.write_record([
                r.ternary.clone(),
                r.binary.clone(),
                r.ternary_count.to_string(),
                r.binary_count.to_string(),
                format_ratio(r.ratio(), 2),
                format!("{:.3}", self.information_ratio),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn to_text(&self) -> String {
        let header = ["ternary", "binary", "T", "B", "ratio", "> 1.585"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.ternary.clone(),
                    r.binary.clone(),
                    r.ternary_count.to_string(),
                    r.binary_count.to_string(),
                    format!(
                        "{}/{} = {}",
                        r.ternary_count,
                        r.binary_count,
                        format_ratio(r.ratio(), 2)
                    ),
                    if r.exceeds_information_ratio() {
                        "yes"
                    } else {
                        "no"
                    }
                    .to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let fmt_row = |cells: Vec<&str>| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i < 2 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if let Some(w) = self.widths {
            out.push_str(&format!(
                "{} bits ~ {} trits (information), {} trits (range)\n",
                w.bits, w.trits, w.range_trits
            ));
        }
        out.push_str(&fmt_row(header.to_vec()));
        for row in &body {
            out.push_str(&fmt_row(row.iter().map(String::as_str).collect()));
        }
        out.push_str(&format!(
            "information ratio log2(3) = {:.3}\n",
            self.information_ratio
        ));
        out
    }
}

/// The four headline ternary/binary ratios against the conventional binary
/// cells, using the version 2 full adder.
pub fn ratio_report() -> ComparisonReport {
    let ha_std = baseline("HA_std");
    let fa_std = baseline("FA_std");
    let row = |ternary: &str, t: u32, binary: &str, b: u32, published| ComparisonRow {
        ternary: ternary.to_string(),
        binary: binary.to_string(),
        ternary_count: t,
        binary_count: b,
        published: Some(published),
    };
    use SupplyMode::*;
    ComparisonReport {
        rows: vec![
            row(
                "HA (two supplies)",
                ha_cost_table(TwoSupplies).headline_total(),
                "HA_std",
                ha_std,
                "3",
            ),
            row(
                "FA (two supplies)",
                fa_cost_table(FaVersion::V2, TwoSupplies).headline_total(),
                "FA_std",
                fa_std,
                "2.57",
            ),
            row(
                "HA (one supply)",
                ha_cost_table(OneSupply).headline_total(),
                "HA_std",
                ha_std,
                "3.4",
            ),
            row(
                "FA (one supply)",
                fa_cost_table(FaVersion::V2, OneSupply).headline_total(),
                "FA_std",
                fa_std,
                "2.8",
            ),
        ],
        information_ratio: information_ratio(Radix::Ternary),
        widths: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitClass {
    TernaryHa,
    TernaryFa,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorWorkEntry {
    pub citation: &'static str,
    pub class: CircuitClass,
    /// `None` where the source does not state the supply convention.
    pub supply_mode: Option<SupplyMode>,
    pub count: u32,
    pub proposed: bool,
}

/// Transistor counts of earlier ternary adders next to the designs here.
pub fn prior_work_tables() -> Vec<PriorWorkEntry> {
    use CircuitClass::*;
    use SupplyMode::*;
    let e = |citation, class, supply_mode, count, proposed| PriorWorkEntry {
        citation,
        class,
        supply_mode,
        count,
        proposed,
    };
    vec![
        e("Lin", TernaryHa, None, 136, false),
        e("Samadi", TernaryHa, None, 112, false),
        e("Sahoo", TernaryHa, None, 112, false),
        e("Jaber", TernaryHa, None, 85, false),
        e("New 2 PS", TernaryHa, Some(TwoSupplies), 42, true),
        e("New 1 PS", TernaryHa, Some(OneSupply), 48, true),
        e("Mirzaee", TernaryFa, Some(OneSupply), 142, false),
        e("Ebrahimi", TernaryFa, Some(TwoSupplies), 106, false),
        e("Kesh", TernaryFa, Some(TwoSupplies), 132, false),
        e("Proposed", TernaryFa, Some(TwoSupplies), 72, true),
        e("Proposed", TernaryFa, Some(OneSupply), 78, true),
    ]
}
