use super::BitMatrix;
use crate::error::{Error, Result};

/// Shape of a product instance `A (d1 x d3) * B (d3 x d2)` together with the
/// symmetric functions of its dimensions.
///
/// Dimensions are capped at `u32::MAX` so that `psi3 = d1 d2 d3` is exact in
/// a `u128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceStats {
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    pub psi1: u128,
    pub psi2: u128,
    pub psi3: u128,
}

impl InstanceStats {
    pub fn new(d1: usize, d2: usize, d3: usize) -> Result<Self> {
        for (name, d) in [("d1", d1), ("d2", d2), ("d3", d3)] {
            if d == 0 || d as u64 > u64::from(u32::MAX) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {d} must lie in 1..=2^32-1"
                )));
            }
        }
        let (a, b, c) = (d1 as u128, d2 as u128, d3 as u128);
        Ok(Self {
            d1: d1 as u64,
            d2: d2 as u64,
            d3: d3 as u64,
            psi1: a + b + c,
            psi2: a * b + a * c + b * c,
            psi3: a * b * c,
        })
    }

    /// Stats of the instance `a * b`.
    pub fn of(a: &BitMatrix, b: &BitMatrix) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(Error::dims(
                "InstanceStats::of",
                format!("{:?} times {:?}", a.dims(), b.dims()),
            ));
        }
        Self::new(a.rows(), b.cols(), a.cols())
    }

    pub fn max_dim(&self) -> u64 {
        self.d1.max(self.d2).max(self.d3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_functions() {
        let s = InstanceStats::new(2, 3, 5).unwrap();
        assert_eq!((s.psi1, s.psi2, s.psi3), (10, 6 + 10 + 15, 30));
    }

    #[test]
    fn no_overflow_at_cap() {
        let d = u32::MAX as usize;
        let s = InstanceStats::new(d, d, d).unwrap();
        assert_eq!(s.psi3, (d as u128).pow(3));
    }

    #[test]
    fn rejects_zero_dims() {
        assert!(InstanceStats::new(0, 1, 1).is_err());
    }
}
