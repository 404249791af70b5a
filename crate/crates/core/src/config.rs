//! Machine configuration: word width, hidden tag width, aliasing model.

use thiserror::Error;

/// How the hidden tag bits are attached to a word.
///
/// * `ExtraBits` — the tag is stored out of band; the arithmetic value of a
///   word is its full visible part. Two words with equal visible parts but
///   different tags are arithmetically equal yet address different memory.
/// * `LowBits` — the tag occupies the `e` least-significant bits of the
///   physical word; the arithmetic value is the physical value shifted right
///   by `e` (sign preserved). Physical 4 and 5 both denote 2 when `e = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AliasModel {
    ExtraBits,
    LowBits,
}

impl std::fmt::Display for AliasModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AliasModel::ExtraBits => write!(f, "extra-bits"),
            AliasModel::LowBits => write!(f, "low-bits"),
        }
    }
}

impl std::str::FromStr for AliasModel {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "extra-bits" => Ok(AliasModel::ExtraBits),
            "low-bits" => Ok(AliasModel::LowBits),
            other => Err(ConfigError::BadAliasModel(other.to_string())),
        }
    }
}

/// What a load from a never-written cell does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UninitPolicy {
    /// Fail loudly with the offending full-pattern key.
    Trap,
    /// Synthesize a zero word with a deterministically hashed tag.
    ZeroFresh,
}

impl std::fmt::Display for UninitPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UninitPolicy::Trap => write!(f, "trap"),
            UninitPolicy::ZeroFresh => write!(f, "zero-fresh"),
        }
    }
}

impl std::str::FromStr for UninitPolicy {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trap" => Ok(UninitPolicy::Trap),
            "zero-fresh" => Ok(UninitPolicy::ZeroFresh),
            other => Err(ConfigError::BadUninitPolicy(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("word-bits must be 8, 16 or 32, got {0}")]
    BadWordBits(u32),
    #[error("extra-bits must be between 1 and 32, got {0}")]
    BadExtraBits(u32),
    #[error("low-bits model needs extra-bits < word-bits ({extra} >= {word})")]
    TagTooWide { word: u32, extra: u32 },
    #[error("unknown alias model `{0}` (expected `extra-bits` or `low-bits`)")]
    BadAliasModel(String),
    #[error("unknown uninit policy `{0}` (expected `trap` or `zero-fresh`)")]
    BadUninitPolicy(String),
    #[error("register family size must be between 1 and 8, got {0}")]
    BadFamilySize(u32),
}

/// Full description of the simulated platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineConfig {
    /// Arithmetic width of a word in bits. One of 8, 16, 32.
    pub word_bits: u32,
    /// Width of the hidden tag, 1..=32.
    pub extra_bits: u32,
    pub alias_model: AliasModel,
    /// Seed for the platform's hidden tag hashing.
    pub platform_key: u64,
    pub uninit_policy: UninitPolicy,
    /// Maximum instructions executed before the VM gives up.
    pub step_limit: u64,
    /// Initial logical value of the stack pointer.
    pub sp_init: i64,
    /// Number of registers in each of the a/t/v families.
    pub family_size: u32,
}

pub const DEFAULT_PLATFORM_KEY: u64 = 0x9E37_79B9_7F4A_7C15;
pub const DEFAULT_STEP_LIMIT: u64 = 100_000_000;

impl MachineConfig {
    /// Configuration with the given word width and everything else defaulted.
    pub fn with_word_bits(word_bits: u32) -> Result<Self, ConfigError> {
        MachineConfig {
            word_bits,
            extra_bits: 32,
            alias_model: AliasModel::ExtraBits,
            platform_key: DEFAULT_PLATFORM_KEY,
            uninit_policy: UninitPolicy::Trap,
            step_limit: DEFAULT_STEP_LIMIT,
            sp_init: default_sp_init(word_bits),
            family_size: 4,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, ConfigError> {
        if !matches!(self.word_bits, 8 | 16 | 32) {
            return Err(ConfigError::BadWordBits(self.word_bits));
        }
        if !(1..=32).contains(&self.extra_bits) {
            return Err(ConfigError::BadExtraBits(self.extra_bits));
        }
        if self.alias_model == AliasModel::LowBits && self.extra_bits >= self.word_bits {
            return Err(ConfigError::TagTooWide {
                word: self.word_bits,
                extra: self.extra_bits,
            });
        }
        if !(1..=8).contains(&self.family_size) {
            return Err(ConfigError::BadFamilySize(self.family_size));
        }
        Ok(self)
    }

    /// Width in bits of the arithmetic (logical) value space.
    ///
    /// In the low-bits model the tag lives inside the word, so only the top
    /// `word_bits - extra_bits` bits carry arithmetic meaning.
    pub fn logical_bits(&self) -> u32 {
        match self.alias_model {
            AliasModel::ExtraBits => self.word_bits,
            AliasModel::LowBits => self.word_bits - self.extra_bits,
        }
    }

    /// Mask selecting the tag bits.
    pub fn extra_mask(&self) -> u64 {
        mask(self.extra_bits)
    }
}

impl Default for MachineConfig {
    fn default() -> Self {
        MachineConfig::with_word_bits(32).expect("default config is valid")
    }
}

/// Default initial stack pointer: a bit below the top of the positive range.
///
/// The documented default is `2^(n-1) - 2^10`; at `n = 8` that leaves the
/// representable range, so the 8-bit default is 96.
pub fn default_sp_init(word_bits: u32) -> i64 {
    if word_bits >= 16 {
        (1i64 << (word_bits - 1)) - 1024
    } else {
        96
    }
}

/// Low `bits` set, `0 < bits <= 64`.
pub fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Wrap `x` into the signed two's-complement range of the given width.
pub fn wrap_signed(x: i64, bits: u32) -> i64 {
    debug_assert!(bits >= 1 && bits <= 63);
    let m = 1i64 << bits;
    let r = x.rem_euclid(m);
    if r >= m / 2 {
        r - m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_boundaries() {
        assert_eq!(wrap_signed(127, 8), 127);
        assert_eq!(wrap_signed(128, 8), -128);
        assert_eq!(wrap_signed(-129, 8), 127);
        assert_eq!(wrap_signed(1 << 31, 32), -(1i64 << 31));
        assert_eq!(wrap_signed((1 << 31) - 1, 32), (1i64 << 31) - 1);
    }

    #[test]
    fn logical_bits_by_model() {
        let mut cfg = MachineConfig::default();
        assert_eq!(cfg.logical_bits(), 32);
        cfg.word_bits = 16;
        cfg.extra_bits = 4;
        cfg.alias_model = AliasModel::LowBits;
        assert_eq!(cfg.logical_bits(), 12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MachineConfig::with_word_bits(12).is_err());
        let cfg = MachineConfig {
            extra_bits: 8,
            word_bits: 8,
            alias_model: AliasModel::LowBits,
            ..MachineConfig::default()
        };
        assert!(cfg.validated().is_err());
    }
}
