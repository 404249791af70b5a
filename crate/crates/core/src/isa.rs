//! The instruction set.
//!
//! A small MIPS-flavoured ISA where every ALU instruction carries three
//! embedded constants: `r <- (s + k1) op (t + k2) - k0`. The triple-constant
//! form is what lets a randomizing compiler cancel operand offsets and
//! install a new one in a single instruction. `mov` is a distinct opcode,
//! not an add of zero: it copies the full physical bit pattern, tag
//! included, which no arithmetic instruction can be trusted to do on an
//! aliasing platform.
//!
//! Branch displacements are in instruction units; a taken branch at `pc`
//! with displacement `i` continues at `pc + 1 + i`.

use crate::regs::RegisterName;
use std::fmt;

/// Binary ALU operation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AluOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Xor,
    And,
    Or,
    /// Set if less-than (signed): 1 or 0.
    Slt,
    /// Set if equal: 1 or 0.
    Seq,
}

impl AluOp {
    pub const ALL: [AluOp; 10] = [
        AluOp::Add,
        AluOp::Sub,
        AluOp::Mul,
        AluOp::Div,
        AluOp::Rem,
        AluOp::Xor,
        AluOp::And,
        AluOp::Or,
        AluOp::Slt,
        AluOp::Seq,
    ];

    pub fn mnemonic(&self) -> &'static str {
        match self {
            AluOp::Add => "add",
            AluOp::Sub => "sub",
            AluOp::Mul => "mul",
            AluOp::Div => "div",
            AluOp::Rem => "rem",
            AluOp::Xor => "xor",
            AluOp::And => "and",
            AluOp::Or => "or",
            AluOp::Slt => "slt",
            AluOp::Seq => "seq",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<AluOp> {
        AluOp::ALL.iter().copied().find(|op| op.mnemonic() == s)
    }
}

impl fmt::Display for AluOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())
    }
}

/// One machine instruction, constants included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Exact full-pattern copy, tag included.
    Mov { dst: RegisterName, src: RegisterName },
    /// `dst <- src + k`.
    Addi {
        dst: RegisterName,
        src: RegisterName,
        k: i64,
    },
    /// `dst <- (lhs + k1) op (rhs + k2) - k0`.
    Alu {
        op: AluOp,
        dst: RegisterName,
        lhs: RegisterName,
        rhs: RegisterName,
        k1: i64,
        k2: i64,
        k0: i64,
    },
    /// `dst <- mem[base + disp]`.
    Lw {
        dst: RegisterName,
        disp: i64,
        base: RegisterName,
    },
    /// `mem[base + disp] <- src`.
    Sw {
        disp: i64,
        base: RegisterName,
        src: RegisterName,
    },
    /// Unconditional relative branch.
    B { off: i64 },
    /// Taken iff `lhs = rhs + k` arithmetically.
    Beq {
        lhs: RegisterName,
        rhs: RegisterName,
        off: i64,
        k: i64,
    },
    /// Taken iff `lhs != rhs + k` arithmetically.
    Bne {
        lhs: RegisterName,
        rhs: RegisterName,
        off: i64,
        k: i64,
    },
    /// Taken iff `reg = k` arithmetically.
    Beqz { reg: RegisterName, off: i64, k: i64 },
    /// `dst <- return address; pc <- target` (absolute instruction index).
    Jal { dst: RegisterName, target: i64 },
    /// `pc <- reg` (arithmetic value, reinterpreted as an unsigned index).
    Jr { reg: RegisterName },
    Halt,
}

impl Instruction {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Mov { .. } => "mov",
            Instruction::Addi { .. } => "addi",
            Instruction::Alu { op, .. } => op.mnemonic(),
            Instruction::Lw { .. } => "lw",
            Instruction::Sw { .. } => "sw",
            Instruction::B { .. } => "b",
            Instruction::Beq { .. } => "beq",
            Instruction::Bne { .. } => "bne",
            Instruction::Beqz { .. } => "beqz",
            Instruction::Jal { .. } => "jal",
            Instruction::Jr { .. } => "jr",
            Instruction::Halt => "halt",
        }
    }

    /// Opcode plus register operands, ignoring all constants. Two programs
    /// with equal shape sequences differ only in embedded constants.
    pub fn shape(&self) -> (&'static str, Vec<RegisterName>) {
        match *self {
            Instruction::Mov { dst, src } => ("mov", vec![dst, src]),
            Instruction::Addi { dst, src, .. } => ("addi", vec![dst, src]),
            Instruction::Alu { op, dst, lhs, rhs, .. } => (op.mnemonic(), vec![dst, lhs, rhs]),
            Instruction::Lw { dst, base, .. } => ("lw", vec![dst, base]),
            Instruction::Sw { base, src, .. } => ("sw", vec![base, src]),
            Instruction::B { .. } => ("b", vec![]),
            Instruction::Beq { lhs, rhs, .. } => ("beq", vec![lhs, rhs]),
            Instruction::Bne { lhs, rhs, .. } => ("bne", vec![lhs, rhs]),
            Instruction::Beqz { reg, .. } => ("beqz", vec![reg]),
            Instruction::Jal { dst, .. } => ("jal", vec![dst]),
            Instruction::Jr { reg } => ("jr", vec![reg]),
            Instruction::Halt => ("halt", vec![]),
        }
    }

    /// Every embedded constant, in operand order (branch displacements and
    /// jump targets included).
    pub fn constants(&self) -> Vec<i64> {
        match *self {
            Instruction::Mov { .. } | Instruction::Jr { .. } | Instruction::Halt => vec![],
            Instruction::Addi { k, .. } => vec![k],
            Instruction::Alu { k1, k2, k0, .. } => vec![k1, k2, k0],
            Instruction::Lw { disp, .. } => vec![disp],
            Instruction::Sw { disp, .. } => vec![disp],
            Instruction::B { off } => vec![off],
            Instruction::Beq { off, k, .. } | Instruction::Bne { off, k, .. } => vec![off, k],
            Instruction::Beqz { off, k, .. } => vec![off, k],
            Instruction::Jal { target, .. } => vec![target],
        }
    }

    /// Whether the instruction carries a data constant (one that a
    /// randomizing compiler varies). Branch displacements and jump targets
    /// are code addresses, pinned by control-flow structure, and do not
    /// count.
    pub fn carries_data_constant(&self) -> bool {
        matches!(
            self,
            Instruction::Addi { .. }
                | Instruction::Alu { .. }
                | Instruction::Lw { .. }
                | Instruction::Sw { .. }
                | Instruction::Beq { .. }
                | Instruction::Bne { .. }
                | Instruction::Beqz { .. }
        )
    }
}

/// A program is a flat instruction vector; the entry point is index 0.
pub type Program = Vec<Instruction>;
