//! Deterministic tag hashing.
//!
//! Every value a computation produces gets a hidden tag derived by hashing
//! the platform key, an operation discriminator, and the full inputs of the
//! operation (visible parts, tags, and instruction constants). Determinism
//! is the point: repeating the identical computation reproduces the
//! identical tag, which is what makes address recomputation reliable, while
//! any change to an input scrambles the tag.
//!
//! The mix is a fixed 64-bit avalanche finalizer folded over a
//! length-prefixed part list. The exact output is frozen by golden vectors
//! in `tests/golden_hash.rs`; changing this function is a format break.

use crate::isa::AluOp;

/// Operation discriminator fed into the tag hash.
///
/// The numeric codes are part of the frozen hash input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashTag {
    Addi,
    Alu(AluOp),
    /// Effective-address computation of a load or store.
    Ea,
    /// Return-address word written by `jal`.
    Jal,
    /// Initial word of an argument register.
    ArgInit,
    /// Initial word of an ordinary register.
    RegInit,
    /// Initial word of the zero register.
    ZerInit,
    /// Initial word of the stack pointer.
    SpInit,
    /// Word synthesized for a never-written cell under the zero-fresh
    /// policy.
    UninitFresh,
}

impl HashTag {
    pub fn code(&self) -> u64 {
        match self {
            HashTag::Addi => 1,
            HashTag::Alu(op) => match op {
                AluOp::Add => 2,
                AluOp::Sub => 3,
                AluOp::Mul => 4,
                AluOp::Div => 5,
                AluOp::Rem => 6,
                AluOp::Xor => 7,
                AluOp::And => 8,
                AluOp::Or => 9,
                AluOp::Slt => 10,
                AluOp::Seq => 11,
            },
            HashTag::Ea => 12,
            HashTag::Jal => 13,
            HashTag::ArgInit => 14,
            HashTag::RegInit => 15,
            HashTag::ZerInit => 16,
            HashTag::SpInit => 17,
            HashTag::UninitFresh => 18,
        }
    }
}

/// 64-bit avalanche finalizer (splitmix style).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash the platform key, discriminator and operation inputs to a full
/// 64-bit value. Callers truncate to the configured tag width.
pub fn hash_extra(key: u64, tag: HashTag, parts: &[i64]) -> u64 {
    let mut h = mix64(key ^ mix64(tag.code()));
    h = mix64(h ^ (parts.len() as u64));
    for &p in parts {
        h = mix64(h ^ p as u64);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = hash_extra(0x9E37_79B9_7F4A_7C15, HashTag::Addi, &[3, 0, -86_921_031]);
        let b = hash_extra(0x9E37_79B9_7F4A_7C15, HashTag::Addi, &[3, 0, -86_921_031]);
        assert_eq!(a, b);
    }

    #[test]
    fn sensitive_to_every_input() {
        let base = hash_extra(1, HashTag::Addi, &[3, 0, 5]);
        assert_ne!(base, hash_extra(2, HashTag::Addi, &[3, 0, 5]));
        assert_ne!(base, hash_extra(1, HashTag::Ea, &[3, 0, 5]));
        assert_ne!(base, hash_extra(1, HashTag::Addi, &[3, 0, 6]));
        assert_ne!(base, hash_extra(1, HashTag::Addi, &[3, 0]));
    }

    #[test]
    fn tag_codes_distinct() {
        let mut codes: Vec<u64> = AluOp::ALL.iter().map(|op| HashTag::Alu(*op).code()).collect();
        codes.extend(
            [
                HashTag::Addi,
                HashTag::Ea,
                HashTag::Jal,
                HashTag::ArgInit,
                HashTag::RegInit,
                HashTag::ZerInit,
                HashTag::SpInit,
                HashTag::UninitFresh,
            ]
            .iter()
            .map(|t| t.code()),
        );
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), 18);
    }
}
