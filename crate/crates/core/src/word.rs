//! Machine words: an arithmetic-visible part plus a hidden tag.

use crate::config::{mask, wrap_signed, AliasModel, MachineConfig};

/// One register or memory cell worth of content.
///
/// `visible` is the part arithmetic sees, a `word_bits`-wide two's-complement
/// value. `extra` is the hidden tag; arithmetic never depends on it but
/// memory addressing distinguishes every full bit pattern. In the low-bits
/// model the tag is folded into the low bits of `visible` and `extra` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub visible: i64,
    pub extra: u64,
}

impl Word {
    pub const fn new(visible: i64, extra: u64) -> Self {
        Word { visible, extra }
    }

    /// Full-pattern key for memory addressing.
    pub fn pattern(&self) -> (i64, u64) {
        (self.visible, self.extra)
    }
}

/// The number a word denotes under the platform's arithmetic equivalence.
pub fn logical_value(w: Word, cfg: &MachineConfig) -> i64 {
    match cfg.alias_model {
        AliasModel::ExtraBits => w.visible,
        // Arithmetic shift right: floor division by 2^e with sign preserved.
        AliasModel::LowBits => w.visible >> cfg.extra_bits,
    }
}

/// Build the word representing logical value `v` with tag `tag`.
///
/// `v` is wrapped to the logical width first; `tag` is truncated to the tag
/// width. In the extra-bits model the tag goes out of band, in the low-bits
/// model it fills the low bits of the physical word.
pub fn encode(v: i64, tag: u64, cfg: &MachineConfig) -> Word {
    let logical = wrap_signed(v, cfg.logical_bits());
    match cfg.alias_model {
        AliasModel::ExtraBits => Word::new(logical, tag & cfg.extra_mask()),
        AliasModel::LowBits => {
            let phys = (logical << cfg.extra_bits) | (tag & cfg.extra_mask()) as i64;
            Word::new(wrap_signed(phys, cfg.word_bits), 0)
        }
    }
}

/// All physical encodings of logical value `v` (only sensible for small tag
/// widths; used by exhaustive checks).
pub fn encodings_of(v: i64, cfg: &MachineConfig) -> impl Iterator<Item = Word> + '_ {
    (0..=mask(cfg.extra_bits)).map(move |tag| encode(v, tag, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AliasModel;

    fn low_bits_cfg(word_bits: u32, extra_bits: u32) -> MachineConfig {
        MachineConfig {
            word_bits,
            extra_bits,
            alias_model: AliasModel::LowBits,
            ..MachineConfig::default()
        }
        .validated()
        .unwrap()
    }

    #[test]
    fn low_bits_aliases_share_logical() {
        // Physical 4 and 5 both denote 2 when one low bit is hidden.
        let cfg = low_bits_cfg(16, 1);
        assert_eq!(logical_value(Word::new(4, 0), &cfg), 2);
        assert_eq!(logical_value(Word::new(5, 0), &cfg), 2);
    }

    #[test]
    fn extra_bits_logical_ignores_tag() {
        let cfg = MachineConfig::default();
        for tag in [0u64, 1, 0xFFFF_FFFF] {
            assert_eq!(logical_value(Word::new(13, tag), &cfg), 13);
        }
    }

    #[test]
    fn low_bits_floor_division() {
        let cfg = low_bits_cfg(16, 2);
        assert_eq!(logical_value(Word::new(13, 0), &cfg), 3);
        let cfg1 = low_bits_cfg(16, 1);
        assert_eq!(logical_value(Word::new(-3, 0), &cfg1), -2);
    }

    #[test]
    fn logical_constant_across_all_encodings() {
        // Exhaustive over the tag space for small tag widths.
        for e in 1..=8 {
            let cfg = low_bits_cfg(16, e);
            for v in [-5i64, 0, 1, 7, -1] {
                for w in encodings_of(v, &cfg) {
                    assert_eq!(logical_value(w, &cfg), v, "e={e} v={v} w={w:?}");
                }
            }
        }
        let cfg = MachineConfig {
            extra_bits: 8,
            ..MachineConfig::default()
        };
        for w in encodings_of(42, &cfg) {
            assert_eq!(logical_value(w, &cfg), 42);
        }
    }

    #[test]
    fn encode_wraps_at_logical_width() {
        let cfg = low_bits_cfg(8, 1);
        // Logical space is 7 bits: 64 wraps to -64.
        let w = encode(64, 0, &cfg);
        assert_eq!(logical_value(w, &cfg), -64);
    }
}
