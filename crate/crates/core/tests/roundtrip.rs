//! Fuzzed round-trips of the assembly and trace text formats.

use havoc_core::asm::{parse_assembly, render_assembly, LabelMap};
use havoc_core::isa::{AluOp, Instruction};
use havoc_core::regs::RegisterName;
use havoc_core::trace::{parse_trace, render_trace, Location, TraceEvent};
use havoc_core::word::Word;
use proptest::prelude::*;

fn reg() -> impl Strategy<Value = RegisterName> {
    prop_oneof![
        Just(RegisterName::Zer),
        Just(RegisterName::Sp),
        Just(RegisterName::Fp),
        Just(RegisterName::Ra),
        (0u8..4).prop_map(RegisterName::A),
        (0u8..4).prop_map(RegisterName::T),
        (0u8..4).prop_map(RegisterName::V),
    ]
}

fn writable_reg() -> impl Strategy<Value = RegisterName> {
    reg().prop_filter("not zer", |r| *r != RegisterName::Zer)
}

fn konst() -> impl Strategy<Value = i64> {
    prop_oneof![
        any::<i32>().prop_map(|k| k as i64),
        Just(-(1i64 << 31)),
        Just((1i64 << 31) - 1),
    ]
}

fn instruction() -> impl Strategy<Value = Instruction> {
    prop_oneof![
        (writable_reg(), reg()).prop_map(|(dst, src)| Instruction::Mov { dst, src }),
        (writable_reg(), reg(), konst()).prop_map(|(dst, src, k)| Instruction::Addi { dst, src, k }),
        (
            prop::sample::select(AluOp::ALL.to_vec()),
            writable_reg(),
            reg(),
            reg(),
            konst(),
            konst(),
            konst()
        )
            .prop_map(|(op, dst, lhs, rhs, k1, k2, k0)| Instruction::Alu {
                op,
                dst,
                lhs,
                rhs,
                k1,
                k2,
                k0
            }),
        (writable_reg(), konst(), reg()).prop_map(|(dst, disp, base)| Instruction::Lw {
            dst,
            disp,
            base
        }),
        (konst(), reg(), reg()).prop_map(|(disp, base, src)| Instruction::Sw { disp, base, src }),
        (-64i64..64).prop_map(|off| Instruction::B { off }),
        (reg(), reg(), -64i64..64, konst())
            .prop_map(|(lhs, rhs, off, k)| Instruction::Beq { lhs, rhs, off, k }),
        (reg(), reg(), -64i64..64, konst())
            .prop_map(|(lhs, rhs, off, k)| Instruction::Bne { lhs, rhs, off, k }),
        (reg(), -64i64..64, konst()).prop_map(|(reg, off, k)| Instruction::Beqz { reg, off, k }),
        (writable_reg(), 0i64..200).prop_map(|(dst, target)| Instruction::Jal { dst, target }),
        reg().prop_map(|reg| Instruction::Jr { reg }),
        Just(Instruction::Halt),
    ]
}

fn location() -> impl Strategy<Value = Location> {
    prop_oneof![
        writable_reg().prop_map(Location::Reg),
        (any::<i32>(), any::<u32>()).prop_map(|(v, x)| Location::Mem {
            visible: v as i64,
            extra: x as u64
        }),
    ]
}

proptest! {
    /// 50-instruction programs survive render -> parse bit-exactly.
    #[test]
    fn assembly_round_trips(program in prop::collection::vec(instruction(), 0..50)) {
        let text = render_assembly(&program, &LabelMap::new());
        let (reparsed, labels) = parse_assembly(&text).unwrap();
        prop_assert_eq!(&reparsed, &program);
        prop_assert!(labels.is_empty());
        // Render is stable: a second round trip gives identical text.
        prop_assert_eq!(render_assembly(&reparsed, &LabelMap::new()), text);
    }

    #[test]
    fn traces_round_trip(
        events in prop::collection::vec(
            (0usize..100_000, instruction(),
             prop::collection::vec((location(), (any::<i32>(), any::<u32>())), 0..2)),
            0..40)
    ) {
        let trace: Vec<TraceEvent> = events
            .into_iter()
            .map(|(pc, instruction, writes)| TraceEvent {
                pc,
                instruction,
                writes: writes
                    .into_iter()
                    .map(|(loc, (v, x))| (loc, Word::new(v as i64, x as u64)))
                    .collect(),
            })
            .collect();
        let text = render_trace(&trace);
        prop_assert_eq!(parse_trace(&text).unwrap(), trace);
    }
}

#[test]
fn labelled_programs_round_trip() {
    let src = "main:\nA:\naddi t0 a0 -86921031\nbeq t0 t1 2 240236822\nloop:\nb loop\njal ra A\nend:\nhalt\n";
    let (program, labels) = parse_assembly(src).unwrap();
    let text = render_assembly(&program, &labels);
    let (p2, l2) = parse_assembly(&text).unwrap();
    assert_eq!(program, p2);
    assert_eq!(labels, l2);
}
