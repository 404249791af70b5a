//! Register names and the register file.

use crate::word::Word;
use std::fmt;
use std::str::FromStr;

/// A named register.
///
/// `zer` holds a fixed base value and is read-only after VM initialization.
/// The program counter is VM state, not an addressable register. The a/t/v
/// families are sized by `MachineConfig::family_size` (default 4 each).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegisterName {
    Zer,
    Sp,
    Fp,
    Ra,
    /// Function arguments a0, a1, ...
    A(u8),
    /// Temporaries t0, t1, ...
    T(u8),
    /// Return values v0, v1, ...
    V(u8),
}

impl fmt::Display for RegisterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegisterName::Zer => write!(f, "zer"),
            RegisterName::Sp => write!(f, "sp"),
            RegisterName::Fp => write!(f, "fp"),
            RegisterName::Ra => write!(f, "ra"),
            RegisterName::A(i) => write!(f, "a{i}"),
            RegisterName::T(i) => write!(f, "t{i}"),
            RegisterName::V(i) => write!(f, "v{i}"),
        }
    }
}

impl FromStr for RegisterName {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zer" => return Ok(RegisterName::Zer),
            "sp" => return Ok(RegisterName::Sp),
            "fp" => return Ok(RegisterName::Fp),
            "ra" => return Ok(RegisterName::Ra),
            _ => {}
        }
        let (fam, idx) = s.split_at(1.min(s.len()));
        let idx: u8 = idx.parse().map_err(|_| ())?;
        match fam {
            "a" => Ok(RegisterName::A(idx)),
            "t" => Ok(RegisterName::T(idx)),
            "v" => Ok(RegisterName::V(idx)),
            _ => Err(()),
        }
    }
}

impl RegisterName {
    /// Dense index for register-file storage. Family registers must have
    /// index < `family_size`.
    pub fn index(&self, family_size: u32) -> Option<usize> {
        let f = family_size as usize;
        match *self {
            RegisterName::Zer => Some(0),
            RegisterName::Sp => Some(1),
            RegisterName::Fp => Some(2),
            RegisterName::Ra => Some(3),
            RegisterName::A(i) => ((i as usize) < f).then(|| 4 + i as usize),
            RegisterName::T(i) => ((i as usize) < f).then(|| 4 + f + i as usize),
            RegisterName::V(i) => ((i as usize) < f).then(|| 4 + 2 * f + i as usize),
        }
    }

    pub fn all(family_size: u32) -> impl Iterator<Item = RegisterName> {
        let fixed = [
            RegisterName::Zer,
            RegisterName::Sp,
            RegisterName::Fp,
            RegisterName::Ra,
        ];
        let fam = (0..family_size as u8).flat_map(|i| {
            [RegisterName::A(i), RegisterName::T(i), RegisterName::V(i)]
        });
        fixed.into_iter().chain(fam)
    }
}

/// Dense register file.
#[derive(Debug, Clone)]
pub struct RegisterFile {
    words: Vec<Word>,
    family_size: u32,
}

impl RegisterFile {
    pub fn new(family_size: u32) -> Self {
        RegisterFile {
            words: vec![Word::new(0, 0); 4 + 3 * family_size as usize],
            family_size,
        }
    }

    pub fn get(&self, r: RegisterName) -> Word {
        self.words[r.index(self.family_size).expect("register in range")]
    }

    pub fn set(&mut self, r: RegisterName, w: Word) {
        let i = r.index(self.family_size).expect("register in range");
        self.words[i] = w;
    }

    pub fn family_size(&self) -> u32 {
        self.family_size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["zer", "sp", "fp", "ra", "a0", "a3", "t2", "v0"] {
            let r: RegisterName = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("pc".parse::<RegisterName>().is_err());
        assert!("x1".parse::<RegisterName>().is_err());
        assert!("t".parse::<RegisterName>().is_err());
    }

    #[test]
    fn family_bound_enforced() {
        assert!(RegisterName::T(3).index(4).is_some());
        assert!(RegisterName::T(4).index(4).is_none());
    }
}
