//! Execution trace record and its text format.
//!
//! One line per executed instruction: the pc, the instruction as emitted
//! (constants included), then each state change as `loc ← visible|extra`.
//! Register writes name the register; memory writes show the full-pattern
//! key of the cell in brackets. Fields are tab-separated and the trace ends
//! with a `STOP` line, so `parse_trace(render_trace(t)) == t` bit-exactly.

use crate::asm::{parse_assembly, render_instruction, AsmError};
use crate::isa::Instruction;
use crate::regs::RegisterName;
use crate::word::Word;
use std::fmt::Write as _;
use thiserror::Error;

/// Where a write landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Reg(RegisterName),
    /// Full-pattern memory key: the bit pattern of the effective address.
    Mem { visible: i64, extra: u64 },
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Reg(r) => write!(f, "{r}"),
            Location::Mem { visible, extra } => write!(f, "[{visible}|{extra}]"),
        }
    }
}

/// The state changes of one executed instruction: exactly those, no more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub pc: usize,
    pub instruction: Instruction,
    pub writes: Vec<(Location, Word)>,
}

pub type Trace = Vec<TraceEvent>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceParseError {
    #[error("line {line}: malformed trace line")]
    Malformed { line: usize },
    #[error("line {line}: {source}")]
    BadInstruction { line: usize, source: AsmError },
    #[error("missing STOP terminator")]
    MissingStop,
    #[error("line {line}: unexpected content after STOP")]
    TrailingContent { line: usize },
}

pub fn render_trace(trace: &Trace) -> String {
    let mut out = String::new();
    for ev in trace {
        let _ = write!(out, "{}\t{}", ev.pc, render_instruction(&ev.instruction));
        for (loc, w) in &ev.writes {
            let _ = write!(out, "\t{loc} \u{2190} {}|{}", w.visible, w.extra);
        }
        out.push('\n');
    }
    out.push_str("STOP\n");
    out
}

pub fn parse_trace(text: &str) -> Result<Trace, TraceParseError> {
    let mut trace = Vec::new();
    let mut stopped = false;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        if stopped {
            return Err(TraceParseError::TrailingContent { line: line_no });
        }
        if line == "STOP" {
            stopped = true;
            continue;
        }
        let mut fields = line.split('\t');
        let pc: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(TraceParseError::Malformed { line: line_no })?;
        let instr_text = fields
            .next()
            .ok_or(TraceParseError::Malformed { line: line_no })?;
        let (mut prog, _) = parse_assembly(instr_text)
            .map_err(|source| TraceParseError::BadInstruction { line: line_no, source })?;
        if prog.len() != 1 {
            return Err(TraceParseError::Malformed { line: line_no });
        }
        let mut writes = Vec::new();
        for seg in fields {
            writes.push(parse_write(seg, line_no)?);
        }
        trace.push(TraceEvent {
            pc,
            instruction: prog.remove(0),
            writes,
        });
    }
    if !stopped {
        return Err(TraceParseError::MissingStop);
    }
    Ok(trace)
}

fn parse_write(seg: &str, line: usize) -> Result<(Location, Word), TraceParseError> {
    let malformed = || TraceParseError::Malformed { line };
    let (loc_text, val_text) = seg.split_once(" \u{2190} ").ok_or_else(malformed)?;
    let loc = if let Some(inner) = loc_text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let (v, x) = inner.split_once('|').ok_or_else(malformed)?;
        Location::Mem {
            visible: v.parse().map_err(|_| malformed())?,
            extra: x.parse().map_err(|_| malformed())?,
        }
    } else {
        Location::Reg(loc_text.parse().map_err(|_| malformed())?)
    };
    let (v, x) = val_text.split_once('|').ok_or_else(malformed)?;
    let word = Word::new(
        v.parse().map_err(|_| malformed())?,
        x.parse().map_err(|_| malformed())?,
    );
    Ok((loc, word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regs::RegisterName::*;

    #[test]
    fn empty_trace_is_stop_only() {
        assert_eq!(render_trace(&Vec::new()), "STOP\n");
        assert_eq!(parse_trace("STOP\n").unwrap(), Vec::new());
    }

    #[test]
    fn write_format_matches_expected_shape() {
        let trace = vec![TraceEvent {
            pc: 143,
            instruction: Instruction::Addi {
                dst: V(0),
                src: T(0),
                k: 42_611_675,
            },
            writes: vec![(Location::Reg(V(0)), Word::new(13, 1_680_883_739))],
        }];
        let text = render_trace(&trace);
        assert!(text.contains("v0 \u{2190} 13|1680883739"));
        assert_eq!(parse_trace(&text).unwrap(), trace);
    }

    #[test]
    fn memory_writes_round_trip() {
        let trace = vec![TraceEvent {
            pc: 7,
            instruction: Instruction::Sw {
                disp: -5,
                base: T(1),
                src: T(0),
            },
            writes: vec![(
                Location::Mem {
                    visible: -866_593_757,
                    extra: 1_532_548_040,
                },
                Word::new(1_759_716_698, 1_081_155_516),
            )],
        }];
        let text = render_trace(&trace);
        assert_eq!(parse_trace(&text).unwrap(), trace);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_trace("7\tmov t0\nSTOP\n").is_err());
        assert!(parse_trace("x\tmov t0 t1\nSTOP\n").is_err());
        assert!(parse_trace("7\tmov t0 t1\n").is_err());
        assert!(parse_trace("STOP\n7\tmov t0 t1\n").is_err());
    }
}
