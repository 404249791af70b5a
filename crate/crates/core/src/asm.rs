//! Assembly text format.
//!
//! One instruction or label per line; `#` starts a comment. Labels are
//! `name:` lines attaching to the next instruction. Branch operands accept
//! either a numeric displacement (instruction units) or a label, `jal`
//! accepts a numeric absolute index or a label. Rendering is canonical:
//! single spaces, numeric branch operands, label lines re-emitted from the
//! label map, so `parse(render(p)) == p`.

use crate::isa::{AluOp, Instruction, Program};
use crate::regs::RegisterName;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Label name -> instruction index.
pub type LabelMap = BTreeMap<String, usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsmError {
    #[error("line {line}: unknown mnemonic `{mnemonic}`")]
    UnknownMnemonic { line: usize, mnemonic: String },
    #[error("line {line}: `{mnemonic}` expects {expected} operand(s), got {got}")]
    WrongOperandCount {
        line: usize,
        mnemonic: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: undefined label `{label}`")]
    UndefinedLabel { line: usize, label: String },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: bad register `{token}`")]
    BadRegister { line: usize, token: String },
    #[error("line {line}: bad operand `{token}`")]
    BadOperand { line: usize, token: String },
}

/// Parse assembly source into a program and its label map.
pub fn parse_assembly(text: &str) -> Result<(Program, LabelMap), AsmError> {
    // First pass: strip comments, collect labels against instruction
    // indices, keep raw instruction lines.
    let mut labels = LabelMap::new();
    let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_suffix(':') {
            let name = name.trim();
            if labels.insert(name.to_string(), raw.len()).is_some() {
                return Err(AsmError::DuplicateLabel {
                    line: line_no,
                    label: name.to_string(),
                });
            }
            continue;
        }
        let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        raw.push((line_no, tokens));
    }

    let mut program = Vec::with_capacity(raw.len());
    for (idx, (line, tokens)) in raw.iter().enumerate() {
        program.push(parse_instruction(*line, idx, tokens, &labels)?);
    }
    Ok((program, labels))
}

fn parse_instruction(
    line: usize,
    idx: usize,
    tokens: &[String],
    labels: &LabelMap,
) -> Result<Instruction, AsmError> {
    let mnemonic = tokens[0].as_str();
    let ops = &tokens[1..];
    let need = |expected: usize| -> Result<(), AsmError> {
        if ops.len() != expected {
            Err(AsmError::WrongOperandCount {
                line,
                mnemonic: mnemonic.to_string(),
                expected,
                got: ops.len(),
            })
        } else {
            Ok(())
        }
    };
    let reg = |token: &str| -> Result<RegisterName, AsmError> {
        token.parse().map_err(|_| AsmError::BadRegister {
            line,
            token: token.to_string(),
        })
    };
    let int = |token: &str| -> Result<i64, AsmError> {
        token.parse().map_err(|_| AsmError::BadOperand {
            line,
            token: token.to_string(),
        })
    };
    // Branch displacement: numeric, or a label resolved relative to the
    // next instruction.
    let branch_off = |token: &str| -> Result<i64, AsmError> {
        if let Ok(n) = token.parse::<i64>() {
            return Ok(n);
        }
        match labels.get(token) {
            Some(&target) => Ok(target as i64 - (idx as i64 + 1)),
            None => Err(AsmError::UndefinedLabel {
                line,
                label: token.to_string(),
            }),
        }
    };
    let abs_target = |token: &str| -> Result<i64, AsmError> {
        if let Ok(n) = token.parse::<i64>() {
            return Ok(n);
        }
        match labels.get(token) {
            Some(&target) => Ok(target as i64),
            None => Err(AsmError::UndefinedLabel {
                line,
                label: token.to_string(),
            }),
        }
    };
    // `disp(base)` memory operand.
    let mem = |token: &str| -> Result<(i64, RegisterName), AsmError> {
        let open = token.find('(').ok_or_else(|| AsmError::BadOperand {
            line,
            token: token.to_string(),
        })?;
        if !token.ends_with(')') {
            return Err(AsmError::BadOperand {
                line,
                token: token.to_string(),
            });
        }
        let disp = int(&token[..open])?;
        let base = reg(&token[open + 1..token.len() - 1])?;
        Ok((disp, base))
    };

    if let Some(op) = AluOp::from_mnemonic(mnemonic) {
        need(6)?;
        return Ok(Instruction::Alu {
            op,
            dst: reg(&ops[0])?,
            lhs: reg(&ops[1])?,
            rhs: reg(&ops[2])?,
            k1: int(&ops[3])?,
            k2: int(&ops[4])?,
            k0: int(&ops[5])?,
        });
    }
    match mnemonic {
        "mov" => {
            need(2)?;
            Ok(Instruction::Mov {
                dst: reg(&ops[0])?,
                src: reg(&ops[1])?,
            })
        }
        "addi" => {
            need(3)?;
            Ok(Instruction::Addi {
                dst: reg(&ops[0])?,
                src: reg(&ops[1])?,
                k: int(&ops[2])?,
            })
        }
        "lw" => {
            need(2)?;
            let (disp, base) = mem(&ops[1])?;
            Ok(Instruction::Lw {
                dst: reg(&ops[0])?,
                disp,
                base,
            })
        }
        "sw" => {
            need(2)?;
            let (disp, base) = mem(&ops[0])?;
            Ok(Instruction::Sw {
                disp,
                base,
                src: reg(&ops[1])?,
            })
        }
        "b" => {
            need(1)?;
            Ok(Instruction::B {
                off: branch_off(&ops[0])?,
            })
        }
        "beq" => {
            need(4)?;
            Ok(Instruction::Beq {
                lhs: reg(&ops[0])?,
                rhs: reg(&ops[1])?,
                off: branch_off(&ops[2])?,
                k: int(&ops[3])?,
            })
        }
        "bne" => {
            need(4)?;
            Ok(Instruction::Bne {
                lhs: reg(&ops[0])?,
                rhs: reg(&ops[1])?,
                off: branch_off(&ops[2])?,
                k: int(&ops[3])?,
            })
        }
        "beqz" => {
            need(3)?;
            Ok(Instruction::Beqz {
                reg: reg(&ops[0])?,
                off: branch_off(&ops[1])?,
                k: int(&ops[2])?,
            })
        }
        "jal" => {
            need(2)?;
            Ok(Instruction::Jal {
                dst: reg(&ops[0])?,
                target: abs_target(&ops[1])?,
            })
        }
        "jr" => {
            need(1)?;
            Ok(Instruction::Jr { reg: reg(&ops[0])? })
        }
        "halt" => {
            need(0)?;
            Ok(Instruction::Halt)
        }
        other => Err(AsmError::UnknownMnemonic {
            line,
            mnemonic: other.to_string(),
        }),
    }
}

/// Render one instruction in canonical form.
pub fn render_instruction(instr: &Instruction) -> String {
    match instr {
        Instruction::Mov { dst, src } => format!("mov {dst} {src}"),
        Instruction::Addi { dst, src, k } => format!("addi {dst} {src} {k}"),
        Instruction::Alu {
            op,
            dst,
            lhs,
            rhs,
            k1,
            k2,
            k0,
        } => format!("{op} {dst} {lhs} {rhs} {k1} {k2} {k0}"),
        Instruction::Lw { dst, disp, base } => format!("lw {dst} {disp}({base})"),
        Instruction::Sw { disp, base, src } => format!("sw {disp}({base}) {src}"),
        Instruction::B { off } => format!("b {off}"),
        Instruction::Beq { lhs, rhs, off, k } => format!("beq {lhs} {rhs} {off} {k}"),
        Instruction::Bne { lhs, rhs, off, k } => format!("bne {lhs} {rhs} {off} {k}"),
        Instruction::Beqz { reg, off, k } => format!("beqz {reg} {off} {k}"),
        Instruction::Jal { dst, target } => format!("jal {dst} {target}"),
        Instruction::Jr { reg } => format!("jr {reg}"),
        Instruction::Halt => "halt".to_string(),
    }
}

/// Render a program with its labels in canonical form.
pub fn render_assembly(program: &Program, labels: &LabelMap) -> String {
    // Group labels by target index so each prints right before its
    // instruction (or at the end for one-past-the-end labels).
    let mut by_index: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (name, &idx) in labels {
        by_index.entry(idx).or_default().push(name);
    }
    let mut out = String::new();
    for (idx, instr) in program.iter().enumerate() {
        if let Some(names) = by_index.get(&idx) {
            for name in names {
                let _ = writeln!(out, "{name}:");
            }
        }
        let _ = writeln!(out, "{}", render_instruction(instr));
    }
    if let Some(names) = by_index.get(&program.len()) {
        for name in names {
            let _ = writeln!(out, "{name}:");
        }
    }
    out
}
