//! Angular mode bookkeeping for the Y_{ℓm} basis.

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};

/// One spherical-harmonic label (ℓ, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub ell: u32,
    pub m: i32,
}

impl Mode {
    pub fn new(ell: u32, m: i32) -> Self {
        debug_assert!(m.unsigned_abs() <= ell);
        Self { ell, m }
    }

    /// Parity under the antipodal map, (−1)^ℓ.
    pub fn parity(&self) -> i32 {
        if self.ell % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// The ordered collection of all (ℓ, m) with 0 ≤ ℓ ≤ ell_max, |m| ≤ ℓ.
/// Ordering is ℓ-major with m ascending, which makes mode indices stable
/// across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSet {
    ell_max: u32,
    modes: Vec<Mode>,
}

impl ModeSet {
    pub fn new(ell_max: u32) -> Self {
        let mut modes = Vec::with_capacity(((ell_max + 1) * (ell_max + 1)) as usize);
        for ell in 0..=ell_max {
            for m in -(ell as i32)..=(ell as i32) {
                modes.push(Mode::new(ell, m));
            }
        }
        Self { ell_max, modes }
    }

    pub fn ell_max(&self) -> u32 {
        self.ell_max
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Flat index of (ℓ, m): ℓ² + ℓ + m.
    pub fn index_of(&self, ell: u32, m: i32) -> Result<usize> {
        if ell > self.ell_max || m.unsigned_abs() > ell {
            return Err(HilbertError::Domain(format!(
                "mode (ℓ={ell}, m={m}) outside ell_max={}",
                self.ell_max
            )));
        }
        Ok((i64::from(ell * ell + ell) + i64::from(m)) as usize)
    }

    /// Index of the conjugate partner (ℓ, −m).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let mode = self.modes[idx];
        self.index_of(mode.ell, -mode.m)
            .expect("conjugate mode exists by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_and_ordering() {
        let ms = ModeSet::new(3);
        assert_eq!(ms.len(), 16);
        assert_eq!(ms.modes()[0], Mode::new(0, 0));
        assert_eq!(ms.modes()[1], Mode::new(1, -1));
        assert_eq!(ms.modes()[4], Mode::new(2, -2));
        for (i, mode) in ms.modes().iter().enumerate() {
            assert_eq!(ms.index_of(mode.ell, mode.m).unwrap(), i);
        }
    }

    #[test]
    fn out_of_range_mode() {
        let ms = ModeSet::new(2);
        assert!(ms.index_of(3, 0).is_err());
        assert!(ms.index_of(2, 3).is_err());
    }
}
