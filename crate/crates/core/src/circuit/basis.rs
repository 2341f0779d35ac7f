use crate::{Error, Result};

/// Charge state `|n₁, n₂, n₄⟩` of the three independent nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChargeBasisIndex {
    pub n1: i32,
    pub n2: i32,
    pub n4: i32,
}

impl ChargeBasisIndex {
    pub fn new(n1: i32, n2: i32, n4: i32) -> Self {
        ChargeBasisIndex { n1, n2, n4 }
    }

    pub fn as_array(&self) -> [i32; 3] {
        [self.n1, self.n2, self.n4]
    }
}

/// Truncated product charge basis, each charge in `-n_trunc..=n_trunc`.
///
/// States are flattened lexicographically with `n1` slowest and `n4`
/// fastest, so fixed `(n1, n2)` blocks are contiguous runs of
/// `2·n_trunc + 1` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChargeBasis {
    n_trunc: usize,
}

impl ChargeBasis {
    pub fn new(n_trunc: usize) -> Self {
        ChargeBasis { n_trunc }
    }

    /// Checks the dimension against `cap` before any allocation happens.
    pub fn with_cap(n_trunc: usize, cap: usize) -> Result<Self> {
        let side = 2 * n_trunc + 1;
        let dim = side.checked_pow(3).unwrap_or(usize::MAX);
        if dim > cap {
            return Err(Error::DimensionTooLarge { dim, cap });
        }
        Ok(Self::new(n_trunc))
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn side(&self) -> usize {
        2 * self.n_trunc + 1
    }

    pub fn dim(&self) -> usize {
        self.side().pow(3)
    }

    pub fn contains(&self, idx: ChargeBasisIndex) -> bool {
        let n = self.n_trunc as i32;
        idx.as_array().iter().all(|c| (-n..=n).contains(c))
    }

    pub fn flatten(&self, idx: ChargeBasisIndex) -> Option<usize> {
        if !self.contains(idx) {
            return None;
        }
        let n = self.n_trunc as i32;
        let s = self.side();
        let [a, b, c] = idx.as_array().map(|x| (x + n) as usize);
        Some((a * s + b) * s + c)
    }

    pub fn unflatten(&self, flat: usize) -> ChargeBasisIndex {
        let s = self.side();
        let n = self.n_trunc as i32;
        let c = (flat % s) as i32 - n;
        let b = ((flat / s) % s) as i32 - n;
        let a = (flat / (s * s)) as i32 - n;
        ChargeBasisIndex::new(a, b, c)
    }

    pub fn iter(&self) -> impl Iterator<Item = ChargeBasisIndex> + '_ {
        (0..self.dim()).map(|i| self.unflatten(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_roundtrip_and_order() {
        let b = ChargeBasis::new(2);
        assert_eq!(b.dim(), 125);
        for (i, idx) in b.iter().enumerate() {
            assert_eq!(b.flatten(idx), Some(i));
        }
        assert_eq!(b.unflatten(0), ChargeBasisIndex::new(-2, -2, -2));
        assert_eq!(b.unflatten(1), ChargeBasisIndex::new(-2, -2, -1));
        assert_eq!(b.unflatten(5), ChargeBasisIndex::new(-2, -1, -2));
        assert_eq!(b.flatten(ChargeBasisIndex::new(3, 0, 0)), None);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(ChargeBasis::with_cap(10, 21 * 21 * 21).is_ok());
        assert!(matches!(
            ChargeBasis::with_cap(11, 21 * 21 * 21),
            Err(Error::DimensionTooLarge { dim: 12167, .. })
        ));
    }
}
