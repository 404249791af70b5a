//! Property fuzz for the three aliasing-platform guarantees: faithful copy,
//! repeatability, and no confusion between arithmetically distinct
//! addresses.

use havoc_core::config::MachineConfig;
use havoc_core::isa::{AluOp, Instruction};
use havoc_core::regs::RegisterName;
use havoc_core::vm::{effective_address, MemoryStore, Vm, VmError};
use havoc_core::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_word(rng: &mut ChaCha8Rng) -> Word {
    Word::new(rng.gen::<i32>() as i64, rng.gen::<u32>() as u64)
}

/// Faithful copy: a stored word is retrieved bit-exactly through a copied
/// address, 10^5 cases.
#[test]
fn copy_faithful_store_load() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let mut mem = MemoryStore::new();
    for _ in 0..100_000 {
        let addr = rand_word(&mut rng);
        let value = rand_word(&mut rng);
        mem.store(addr, value);
        let copied = addr; // registers copy the full bit pattern
        assert_eq!(mem.load(copied), Some(value));
    }
}

/// The same at the instruction level: sw through one register, mov the
/// address to another register, lw through the copy.
#[test]
fn copy_faithful_through_mov() {
    let cfg = MachineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    let program = vec![
        Instruction::Sw { disp: 0, base: RegisterName::T(0), src: RegisterName::T(2) },
        Instruction::Mov { dst: RegisterName::T(1), src: RegisterName::T(0) },
        Instruction::Lw { dst: RegisterName::T(3), disp: 0, base: RegisterName::T(1) },
        Instruction::Halt,
    ];
    for _ in 0..2_000 {
        let mut vm = Vm::new(program.clone(), cfg.clone(), &[], false);
        let addr = rand_word(&mut rng);
        let value = rand_word(&mut rng);
        vm.set_reg(RegisterName::T(0), addr);
        vm.set_reg(RegisterName::T(2), value);
        vm.run_to_halt().unwrap();
        assert_eq!(vm.reg(RegisterName::T(3)), value);
    }
}

fn random_program(rng: &mut ChaCha8Rng) -> Vec<Instruction> {
    let regs = [
        RegisterName::Sp,
        RegisterName::T(0),
        RegisterName::T(1),
        RegisterName::A(0),
        RegisterName::V(0),
    ];
    let mut pick = |rng: &mut ChaCha8Rng| regs[rng.gen_range(0..regs.len())];
    let len = rng.gen_range(1..50);
    let mut p = Vec::with_capacity(len + 1);
    for _ in 0..len {
        let k = rng.gen::<i32>() as i64;
        p.push(match rng.gen_range(0..8) {
            0 => Instruction::Mov { dst: pick(rng), src: pick(rng) },
            1 => Instruction::Addi { dst: pick(rng), src: pick(rng), k },
            2 => Instruction::Alu {
                op: AluOp::ALL[rng.gen_range(0..AluOp::ALL.len())],
                dst: pick(rng),
                lhs: pick(rng),
                rhs: pick(rng),
                k1: rng.gen::<i32>() as i64,
                k2: rng.gen::<i32>() as i64,
                k0: rng.gen::<i32>() as i64,
            },
            3 => Instruction::Sw { disp: rng.gen_range(-8..8), base: pick(rng), src: pick(rng) },
            4 => Instruction::Lw { dst: pick(rng), disp: rng.gen_range(-8..8), base: pick(rng) },
            5 => Instruction::Beq {
                lhs: pick(rng),
                rhs: pick(rng),
                off: rng.gen_range(0..4),
                k,
            },
            6 => Instruction::Beqz { reg: pick(rng), off: rng.gen_range(0..4), k },
            _ => Instruction::B { off: rng.gen_range(0..4) },
        });
    }
    p.push(Instruction::Halt);
    p
}

fn run_collect(program: &[Instruction], cfg: &MachineConfig) -> (Result<(), VmError>, Vec<u8>) {
    let mut vm = Vm::new(program.to_vec(), cfg.clone(), &[3, 7], false);
    let outcome = vm.run_to_halt();
    // Serialize the trace so comparison covers every bit the text format
    // carries.
    (outcome, havoc_core::trace::render_trace(vm.trace()).into_bytes())
}

/// Repeatability: re-executing any instruction sequence from an identical
/// machine state yields a bit-identical trace and outcome, traps included.
#[test]
fn repeat_identical_traces() {
    let cfg = MachineConfig {
        step_limit: 5_000,
        ..MachineConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xB7);
    for _ in 0..3_000 {
        let program = random_program(&mut rng);
        let (out1, trace1) = run_collect(&program, &cfg);
        let (out2, trace2) = run_collect(&program, &cfg);
        assert_eq!(out1, out2);
        assert_eq!(trace1, trace2);
    }
}

/// No confusion: cells with different visible parts never collide, and the
/// store keeps every distinct full pattern apart.
#[test]
fn distinct_logical_addresses_stay_distinct() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut mem = MemoryStore::new();
    let mut shadow = std::collections::HashMap::new();
    for _ in 0..100_000 {
        let addr = Word::new(rng.gen_range(-500i64..500), rng.gen_range(0u64..8));
        let value = rand_word(&mut rng);
        mem.store(addr, value);
        shadow.insert(addr.pattern(), value);
    }
    assert_eq!(mem.len(), shadow.len());
    for (pattern, value) in &shadow {
        let got = mem.load(Word::new(pattern.0, pattern.1)).unwrap();
        assert_eq!(got, *value);
    }
}

/// Aliasing is real: decrementing and re-incrementing the stack pointer
/// reproduces the original tag with probability about 2^-e, not reliably.
#[test]
fn sp_bounce_rarely_restores_tag() {
    let cfg = MachineConfig {
        extra_bits: 8,
        ..MachineConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD9);
    let mut collisions = 0u32;
    const TRIALS: u32 = 10_000;
    for _ in 0..TRIALS {
        let sp = Word::new(rng.gen::<i32>() as i64, rng.gen_range(0u64..256));
        let down = effective_address(&cfg, false, sp, -16);
        let up = effective_address(&cfg, false, down, 16);
        assert_eq!(up.visible, sp.visible);
        if up.extra == sp.extra {
            collisions += 1;
        }
    }
    // Binomial(10^4, 2^-8) has mean 39 and sd 6.2; 80 is far outside.
    assert!(
        collisions <= 80,
        "tag collisions {collisions} / {TRIALS} exceed 2^-8 + eps"
    );
    // And aliasing does happen: the tags are not preserved in general.
    assert!(collisions < TRIALS / 2);
}
