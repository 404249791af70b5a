//! Machine model and virtual machine for platforms with hidden-deterministic
//! hardware aliasing.
//!
//! A word carries an arithmetic-visible part and a hidden tag. Arithmetic
//! ignores the tag; memory addressing distinguishes every full bit pattern.
//! Tags flow through computations by keyed hashing, so identical
//! computations reproduce identical patterns while any variation scrambles
//! them — the environment that aliasing-safe compilation targets and that
//! randomized compilation exploits.

pub mod asm;
pub mod config;
pub mod hash;
pub mod isa;
pub mod regs;
pub mod trace;
pub mod vm;

pub use config::{AliasModel, MachineConfig, UninitPolicy};
pub use isa::{AluOp, Instruction, Program};
pub use regs::RegisterName;
pub use trace::{Location, Trace, TraceEvent};
pub use vm::{run, run_plain, Vm, VmError};
pub use word::{logical_value, Word};

pub mod word;
