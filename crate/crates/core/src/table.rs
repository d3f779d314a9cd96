use std::fmt::Write as _;

use crate::logic::Level;

/// A total truth table over a finite input domain, rows in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<(Vec<Level>, Vec<Level>)>,
}

impl TruthTable {
    /// Builds a table from rows covering `domains` exactly once each.
    /// Returns `None` when a combination is missing, repeated or ill-shaped.
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        domains: &[&[Level]],
        rows: Vec<(Vec<Level>, Vec<Level>)>,
    ) -> Option<Self> {
        if domains.len() != inputs.len() {
            return None;
        }
        let expected: usize = domains.iter().map(|d| d.len()).product();
        if rows.len() != expected {
            return None;
        }
        let mut seen = std::collections::BTreeSet::new();
        for (ins, outs) in &rows {
            if ins.len() != inputs.len() || outs.len() != outputs.len() {
                return None;
            }
            if ins.iter().zip(domains).any(|(v, d)| !d.contains(v)) {
                return None;
            }
            if !seen.insert(ins.clone()) {
                return None;
            }
        }
        Some(TruthTable {
            inputs,
            outputs,
            rows,
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn rows(&self) -> &[(Vec<Level>, Vec<Level>)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, inputs: &[Level]) -> Option<&[Level]> {
        self.rows
            .iter()
            .find(|(ins, _)| ins.as_slice() == inputs)
            .map(|(_, outs)| outs.as_slice())
    }

    /// Rows with input `name` fixed to `value`, that column removed.
    pub fn slice(&self, name: &str, value: Level) -> Option<TruthTable> {
        let idx = self.inputs.iter().position(|n| n == name)?;
        let mut inputs = self.inputs.clone();
        inputs.remove(idx);
        let rows = self
            .rows
            .iter()
            .filter(|(ins, _)| ins[idx] == value)
            .map(|(ins, outs)| {
                let mut ins = ins.clone();
                ins.remove(idx);
                (ins, outs.clone())
            })
            .collect();
        Some(TruthTable {
            inputs,
            outputs: self.outputs.clone(),
            rows,
        })
    }

    /// Output column as a row-major `X/Y` grid for two-input slices with
    /// three-valued inputs, the layout used for printed adder tables.
    pub fn grid(&self, output: &str) -> Option<[[u8; 3]; 3]> {
        if self.inputs.len() != 2 {
            return None;
        }
        let o = self.outputs.iter().position(|n| n == output)?;
        let mut grid = [[0u8; 3]; 3];
        let mut filled = 0;
        for (ins, outs) in &self.rows {
            grid[ins[0].value() as usize][ins[1].value() as usize] = outs[o].value();
            filled += 1;
        }
        (filled == 9).then_some(grid)
    }

    /// Aligned plain-text rendering, one row per input combination.
    pub fn to_text(&self) -> String {
        self.to_text_with_bits(&[])
    }

    /// Like [`to_text`](Self::to_text), but columns flagged in `bits` (inputs
    /// then outputs) print binary levels as logical bits, so 2 shows as 1.
    pub fn to_text_with_bits(&self, bits: &[bool]) -> String {
        let headers: Vec<&str> = self
            .inputs
            .iter()
            .chain(&self.outputs)
            .map(String::as_str)
            .collect();
        let widths: Vec<usize> = headers.iter().map(|h| h.len().max(1)).collect();
        let mut out = String::new();
        let line = |cells: Vec<String>, out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  "));
        };
        line(headers.iter().map(|h| h.to_string()).collect(), &mut out);
        for (ins, outs) in &self.rows {
            let cells = ins
                .iter()
                .chain(outs)
                .enumerate()
                .map(|(i, l)| {
                    let bit = bits.get(i).copied().unwrap_or(false);
                    if bit {
                        (l.value() / 2).to_string()
                    } else {
                        l.to_string()
                    }
                })
                .collect();
            line(cells, &mut out);
        }
        out
    }
}
