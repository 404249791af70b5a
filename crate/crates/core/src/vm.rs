//! Virtual machine with hidden-deterministic hardware aliasing.
//!
//! The machine keeps the contract that makes aliasing survivable:
//!
//! 1. a copy instruction reproduces the full bit pattern exactly, so a
//!    copied address reaches the same cell;
//! 2. repeating an identical computation reproduces the identical bit
//!    pattern, because tags are a pure hash of the operation inputs;
//! 3. arithmetically different addresses never share a cell, because cells
//!    are keyed by the full pattern and the arithmetic part is inside the
//!    key.
//!
//! Arithmetic depends only on visible parts and instruction constants; the
//! tag of every produced value is rehashed from the operation's inputs, so
//! software cannot predict it but identical computations agree. Memory is a
//! sparse map keyed by the full bit pattern of the effective address.
//!
//! `run_plain` is the conventional-machine baseline: every tag is forced to
//! zero, so memory is effectively keyed by the visible address alone.

use crate::config::{mask, wrap_signed, MachineConfig, UninitPolicy};
use crate::hash::{hash_extra, HashTag};
use crate::isa::{AluOp, Instruction, Program};
use crate::regs::{RegisterFile, RegisterName};
use crate::trace::{Location, Trace, TraceEvent};
use crate::word::{encode, logical_value, Word};
use std::collections::BTreeMap;
use thiserror::Error;

/// Sparse memory keyed by the full physical pattern of the address word.
#[derive(Debug, Clone, Default)]
pub struct MemoryStore {
    cells: BTreeMap<(i64, u64), Word>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn store(&mut self, addr: Word, value: Word) {
        self.cells.insert(addr.pattern(), value);
    }

    pub fn load(&self, addr: Word) -> Option<Word> {
        self.cells.get(&addr.pattern()).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.cells.keys().copied()
    }

    /// Pairs of distinct cells that share a visible address: physical
    /// aliases of one logical location. A run of aliasing-safe code never
    /// creates any; the sp-bounce pattern of naive code does.
    pub fn alias_groups(&self) -> Vec<(i64, usize)> {
        let mut groups = Vec::new();
        let mut iter = self.cells.keys().peekable();
        while let Some(&(v, _)) = iter.next() {
            let mut n = 1;
            while matches!(iter.peek(), Some(&&(v2, _)) if v2 == v) {
                iter.next();
                n += 1;
            }
            if n > 1 {
                groups.push((v, n));
            }
        }
        groups
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VmError {
    #[error("read of uninitialized cell [{visible}|{extra}] at pc {pc}")]
    UninitRead { pc: usize, visible: i64, extra: u64 },
    #[error("step limit {limit} exceeded")]
    StepLimitExceeded { limit: u64 },
    #[error("pc {pc} out of range (program length {len})")]
    PcOutOfRange { pc: i64, len: usize },
    #[error("write to read-only register zer at pc {pc}")]
    WriteToZer { pc: usize },
    #[error("division by zero at pc {pc} in `{instr}`")]
    DivisionByZero { pc: usize, instr: String },
    #[error("program has no entry label `main`")]
    NoMain,
    #[error("register {reg} not available with family size {family}")]
    BadRegister { reg: String, family: u32 },
}

/// Apply one triple-constant ALU operation to two words.
///
/// The operation acts on arithmetic (logical) values; the result's tag is
/// hashed from all six inputs. In the low-bits model the result is re-tagged
/// into the low bits of the physical word.
pub fn alu_exec(
    cfg: &MachineConfig,
    plain: bool,
    op: AluOp,
    w1: Word,
    k1: i64,
    w2: Word,
    k2: i64,
    k0: i64,
) -> Result<Word, ()> {
    let lb = cfg.logical_bits();
    let a = wrap_signed(logical_value(w1, cfg).wrapping_add(k1), lb);
    let b = wrap_signed(logical_value(w2, cfg).wrapping_add(k2), lb);
    let raw = match op {
        AluOp::Add => a.wrapping_add(b),
        AluOp::Sub => a.wrapping_sub(b),
        AluOp::Mul => a.wrapping_mul(b),
        AluOp::Div => {
            if b == 0 {
                return Err(());
            }
            a.wrapping_div(b)
        }
        AluOp::Rem => {
            if b == 0 {
                return Err(());
            }
            a.wrapping_rem(b)
        }
        AluOp::Xor => a ^ b,
        AluOp::And => a & b,
        AluOp::Or => a | b,
        AluOp::Slt => (a < b) as i64,
        AluOp::Seq => (a == b) as i64,
    };
    let result = wrap_signed(wrap_signed(raw, lb).wrapping_sub(k0), lb);
    let tag = if plain {
        0
    } else {
        hash_extra(
            cfg.platform_key,
            HashTag::Alu(op),
            &[w1.visible, w1.extra as i64, k1, w2.visible, w2.extra as i64, k2, k0],
        )
    };
    Ok(encode(result, tag, cfg))
}

/// Add a displacement to a base address the way the hardware does.
///
/// The arithmetic part is `base + d`; the tag is rehashed from the base's
/// full pattern and the displacement, so even `d = 0` yields a generically
/// different pattern — but the identical inputs always reproduce the
/// identical address word.
pub fn effective_address(cfg: &MachineConfig, plain: bool, base: Word, d: i64) -> Word {
    let v = wrap_signed(logical_value(base, cfg).wrapping_add(d), cfg.logical_bits());
    let tag = if plain {
        0
    } else {
        hash_extra(
            cfg.platform_key,
            HashTag::Ea,
            &[base.visible, base.extra as i64, d],
        )
    };
    encode(v, tag, cfg)
}

fn addi_word(cfg: &MachineConfig, plain: bool, src: Word, k: i64) -> Word {
    let v = wrap_signed(logical_value(src, cfg).wrapping_add(k), cfg.logical_bits());
    let tag = if plain {
        0
    } else {
        hash_extra(
            cfg.platform_key,
            HashTag::Addi,
            &[src.visible, src.extra as i64, k],
        )
    };
    encode(v, tag, cfg)
}

/// A machine mid-execution.
#[derive(Debug, Clone)]
pub struct Vm {
    pub cfg: MachineConfig,
    program: Program,
    regs: RegisterFile,
    pub memory: MemoryStore,
    pc: i64,
    steps: u64,
    trace: Trace,
    halted: bool,
    plain: bool,
}

impl Vm {
    /// Fresh machine with deterministically initialized registers. Argument
    /// registers get the provided logical values; everything else starts as
    /// a zero word with a hashed tag. `ra` starts at the halt sentinel so a
    /// bare `jr ra` from the entry frame stops the machine.
    pub fn new(program: Program, cfg: MachineConfig, args: &[i64], plain: bool) -> Self {
        let key = cfg.platform_key;
        let tag = |t: HashTag, parts: &[i64]| if plain { 0 } else { hash_extra(key, t, parts) };
        let mut regs = RegisterFile::new(cfg.family_size);
        for (i, r) in RegisterName::all(cfg.family_size).enumerate() {
            regs.set(r, encode(0, tag(HashTag::RegInit, &[i as i64]), &cfg));
        }
        regs.set(RegisterName::Zer, encode(0, tag(HashTag::ZerInit, &[]), &cfg));
        regs.set(
            RegisterName::Sp,
            encode(cfg.sp_init, tag(HashTag::SpInit, &[]), &cfg),
        );
        regs.set(
            RegisterName::Ra,
            encode(-1, tag(HashTag::RegInit, &[-1]), &cfg),
        );
        for (i, &v) in args.iter().enumerate() {
            regs.set(
                RegisterName::A(i as u8),
                encode(v, tag(HashTag::ArgInit, &[i as i64, v]), &cfg),
            );
        }
        Vm {
            cfg,
            program,
            regs,
            memory: MemoryStore::new(),
            pc: 0,
            steps: 0,
            trace: Vec::new(),
            halted: false,
            plain,
        }
    }

    pub fn halted(&self) -> bool {
        self.halted
    }

    pub fn pc(&self) -> i64 {
        self.pc
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    pub fn reg(&self, r: RegisterName) -> Word {
        self.regs.get(r)
    }

    /// Set a register directly (test and harness use; bypasses the zer
    /// write check).
    pub fn set_reg(&mut self, r: RegisterName, w: Word) {
        self.regs.set(r, w);
    }

    /// The pc value `jr` treats as "stop": the all-ones logical value.
    fn halt_sentinel(&self) -> u64 {
        mask(self.cfg.logical_bits())
    }

    fn write_reg(
        &mut self,
        pc: usize,
        r: RegisterName,
        w: Word,
        writes: &mut Vec<(Location, Word)>,
    ) -> Result<(), VmError> {
        if r == RegisterName::Zer {
            return Err(VmError::WriteToZer { pc });
        }
        if r.index(self.cfg.family_size).is_none() {
            return Err(VmError::BadRegister {
                reg: r.to_string(),
                family: self.cfg.family_size,
            });
        }
        self.regs.set(r, w);
        writes.push((Location::Reg(r), w));
        Ok(())
    }

    fn read_reg(&self, r: RegisterName) -> Result<Word, VmError> {
        if r.index(self.cfg.family_size).is_none() {
            return Err(VmError::BadRegister {
                reg: r.to_string(),
                family: self.cfg.family_size,
            });
        }
        Ok(self.regs.get(r))
    }

    /// Execute one instruction, appending exactly one trace event.
    pub fn step(&mut self) -> Result<(), VmError> {
        debug_assert!(!self.halted);
        if self.steps >= self.cfg.step_limit {
            return Err(VmError::StepLimitExceeded {
                limit: self.cfg.step_limit,
            });
        }
        if self.pc < 0 || self.pc as usize >= self.program.len() {
            return Err(VmError::PcOutOfRange {
                pc: self.pc,
                len: self.program.len(),
            });
        }
        let pc = self.pc as usize;
        let instr = self.program[pc].clone();
        let mut writes = Vec::new();
        let mut next_pc = self.pc + 1;
        let cfg = self.cfg.clone();
        let logical = |w: Word| logical_value(w, &cfg);

        match instr {
            Instruction::Mov { dst, src } => {
                let w = self.read_reg(src)?;
                self.write_reg(pc, dst, w, &mut writes)?;
            }
            Instruction::Addi { dst, src, k } => {
                let w = addi_word(&cfg, self.plain, self.read_reg(src)?, k);
                self.write_reg(pc, dst, w, &mut writes)?;
            }
            Instruction::Alu {
                op,
                dst,
                lhs,
                rhs,
                k1,
                k2,
                k0,
            } => {
                let w1 = self.read_reg(lhs)?;
                let w2 = self.read_reg(rhs)?;
                let w = alu_exec(&cfg, self.plain, op, w1, k1, w2, k2, k0).map_err(|_| {
                    VmError::DivisionByZero {
                        pc,
                        instr: crate::asm::render_instruction(&instr),
                    }
                })?;
                self.write_reg(pc, dst, w, &mut writes)?;
            }
            Instruction::Lw { dst, disp, base } => {
                let addr = effective_address(&cfg, self.plain, self.read_reg(base)?, disp);
                let w = match self.memory.load(addr) {
                    Some(w) => w,
                    None => match cfg.uninit_policy {
                        UninitPolicy::Trap => {
                            return Err(VmError::UninitRead {
                                pc,
                                visible: addr.visible,
                                extra: addr.extra,
                            })
                        }
                        UninitPolicy::ZeroFresh => {
                            let tag = if self.plain {
                                0
                            } else {
                                hash_extra(
                                    cfg.platform_key,
                                    HashTag::UninitFresh,
                                    &[addr.visible, addr.extra as i64],
                                )
                            };
                            let w = encode(0, tag, &cfg);
                            self.memory.store(addr, w);
                            w
                        }
                    },
                };
                self.write_reg(pc, dst, w, &mut writes)?;
            }
            Instruction::Sw { disp, base, src } => {
                let addr = effective_address(&cfg, self.plain, self.read_reg(base)?, disp);
                let w = self.read_reg(src)?;
                self.memory.store(addr, w);
                writes.push((
                    Location::Mem {
                        visible: addr.visible,
                        extra: addr.extra,
                    },
                    w,
                ));
            }
            Instruction::B { off } => {
                next_pc = self.pc + 1 + off;
            }
            Instruction::Beq { lhs, rhs, off, k } => {
                let l = logical(self.read_reg(lhs)?);
                let r = logical(self.read_reg(rhs)?);
                if l == wrap_signed(r.wrapping_add(k), cfg.logical_bits()) {
                    next_pc = self.pc + 1 + off;
                }
            }
            Instruction::Bne { lhs, rhs, off, k } => {
                let l = logical(self.read_reg(lhs)?);
                let r = logical(self.read_reg(rhs)?);
                if l != wrap_signed(r.wrapping_add(k), cfg.logical_bits()) {
                    next_pc = self.pc + 1 + off;
                }
            }
            Instruction::Beqz { reg, off, k } => {
                if logical(self.read_reg(reg)?) == wrap_signed(k, cfg.logical_bits()) {
                    next_pc = self.pc + 1 + off;
                }
            }
            Instruction::Jal { dst, target } => {
                let tag = if self.plain {
                    0
                } else {
                    hash_extra(cfg.platform_key, HashTag::Jal, &[pc as i64])
                };
                let w = encode(self.pc + 1, tag, &cfg);
                self.write_reg(pc, dst, w, &mut writes)?;
                next_pc = target;
            }
            Instruction::Jr { reg } => {
                let l = logical(self.read_reg(reg)?);
                let raw = (l as u64) & mask(cfg.logical_bits());
                if raw == self.halt_sentinel() {
                    self.halted = true;
                    next_pc = self.pc;
                } else {
                    next_pc = raw as i64;
                }
            }
            Instruction::Halt => {
                self.halted = true;
                next_pc = self.pc;
            }
        }

        self.trace.push(TraceEvent {
            pc,
            instruction: instr,
            writes,
        });
        self.steps += 1;
        self.pc = next_pc;
        Ok(())
    }

    /// Run until halt or trap.
    pub fn run_to_halt(&mut self) -> Result<(), VmError> {
        while !self.halted {
            self.step()?;
        }
        Ok(())
    }

    /// Final result: the arithmetic value of `v0`.
    pub fn result(&self) -> i64 {
        logical_value(self.regs.get(RegisterName::V(0)), &self.cfg)
    }
}

/// Execute a program on the aliasing machine. Arguments are placed in the
/// argument registers with freshly hashed tags; the result is the
/// arithmetic value of `v0` at halt. An empty program halts immediately.
pub fn run(program: &Program, cfg: &MachineConfig, args: &[i64]) -> Result<(i64, Trace), VmError> {
    run_inner(program, cfg, args, false)
}

/// Execute on a conventional machine: tags forced to zero everywhere, so
/// memory is keyed by visible address alone. The differential baseline.
pub fn run_plain(
    program: &Program,
    cfg: &MachineConfig,
    args: &[i64],
) -> Result<(i64, Trace), VmError> {
    run_inner(program, cfg, args, true)
}

fn run_inner(
    program: &Program,
    cfg: &MachineConfig,
    args: &[i64],
    plain: bool,
) -> Result<(i64, Trace), VmError> {
    let mut vm = Vm::new(program.clone(), cfg.clone(), args, plain);
    if program.is_empty() {
        return Ok((vm.result(), Vec::new()));
    }
    vm.run_to_halt()?;
    let result = vm.result();
    Ok((result, vm.into_trace()))
}
