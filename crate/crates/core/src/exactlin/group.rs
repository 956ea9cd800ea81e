use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::matrix::bigvec;
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dk` with
/// `d1 | d2 | ... | dk` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigvec")]
    pub invariant_factors: Vec<BigInt>,
}

impl FinAbelianGroup {
    pub fn trivial() -> Self {
        FinAbelianGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, vec![BigInt::from(order)]).expect("valid cyclic order")
    }

    /// Normalizes factors equal to one away and checks the divisibility chain.
    pub fn new(free_rank: usize, factors: Vec<BigInt>) -> Result<Self> {
        let factors: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        if factors.iter().any(|d| !d.is_positive()) {
            return Err(Error::Input("invariant factors must be positive".into()));
        }
        if factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Input("invariant factors must form a divisibility chain".into()));
        }
        Ok(FinAbelianGroup {
            free_rank,
            invariant_factors: factors,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn torsion(&self) -> FinAbelianGroup {
        FinAbelianGroup {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }
}

impl fmt::Display for FinAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}
