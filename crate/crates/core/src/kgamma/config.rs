//! Index functions of products of Severi-Brauer varieties.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::ring::TruncatedPolyRing;
use crate::error::{Error, Result};

/// A product of Severi-Brauer varieties described by the degrees `d_j` of
/// the algebras and the index of every tensor combination
/// `A_1^{i_1} (x) ... (x) A_n^{i_n}`, with exponents read modulo `d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriBrauerConfig {
    pub name: String,
    pub degrees: Vec<usize>,
    /// Indexed like the monomials of [`TruncatedPolyRing`].
    pub index: Vec<u64>,
}

const PRESETS: &[&str] = &["conics1", "conics2", "conics3", "conics4", "deg4pair"];

impl SeveriBrauerConfig {
    pub fn new(name: &str, degrees: Vec<usize>, ind: impl Fn(&[usize]) -> u64) -> Result<Self> {
        let ring = TruncatedPolyRing::new(degrees.clone())?;
        let index = (0..ring.rank()).map(|i| ind(ring.exponents(i))).collect();
        let cfg = SeveriBrauerConfig {
            name: name.to_string(),
            degrees,
            index,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Registered names; `split:{d1,...,dn}` is accepted in addition.
    pub fn preset_names() -> Vec<String> {
        let mut v: Vec<String> = PRESETS.iter().map(|s| s.to_string()).collect();
        v.push("split:{d1,...,dn}".into());
        v
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "conics1" => conics(name, &[1, 2]),
            "conics2" => conics(name, &[1, 2, 4]),
            "conics3" => conics(name, &[1, 2, 4, 2]),
            "conics4" => conics(name, &[1, 2, 4, 4, 2]),
            "deg4pair" => Self::new(name, vec![4, 4], |e| match (e[0] % 2, e[1] % 2) {
                (1, 1) => 16,
                (1, 0) | (0, 1) => 4,
                _ if e == [2, 2] => 1,
                _ if e == [0, 0] => 1,
                _ => 2,
            }),
            _ => match name.strip_prefix("split:") {
                Some(rest) => Self::split(parse_degrees(rest)?),
                None => Err(Error::unknown("config", name, &Self::preset_names())),
            },
        }
    }

    /// All indices one: the split case.
    pub fn split(degrees: Vec<usize>) -> Result<Self> {
        let name = format!(
            "split:{{{}}}",
            degrees.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        );
        Self::new(&name, degrees, |_| 1)
    }

    pub fn ring(&self) -> TruncatedPolyRing {
        TruncatedPolyRing::new(self.degrees.clone()).expect("validated degrees")
    }

    pub fn ind(&self, monomial: usize) -> u64 {
        self.index[monomial]
    }

    /// `|K_0(X_E) / K_0(X)| = prod ind(i)`.
    pub fn split_index(&self) -> BigInt {
        self.index.iter().map(|&i| BigInt::from(i)).product()
    }

    pub fn validate(&self) -> Result<()> {
        let ring = TruncatedPolyRing::new(self.degrees.clone())?;
        if self.index.len() != ring.rank() {
            return Err(Error::Dimension {
                expected: ring.rank(),
                got: self.index.len(),
            });
        }
        if self.index[0] != 1 {
            return Err(Error::Config("index of the trivial class must be 1".into()));
        }
        if let Some(i) = self.index.iter().position(|&v| v == 0) {
            return Err(Error::Config(format!("index at {:?} must be positive", ring.exponents(i))));
        }
        let reduce = |e: Vec<usize>| -> usize {
            let e: Vec<usize> = e.iter().zip(&self.degrees).map(|(x, d)| x % d).collect();
            ring.index_of(&e).expect("reduced exponents")
        };
        for i in 0..ring.rank() {
            let ei = ring.exponents(i);
            let neg = reduce(ei.iter().zip(&self.degrees).map(|(x, d)| d - x).collect());
            if self.index[neg] != self.index[i] {
                return Err(Error::Config(format!(
                    "index of {:?} differs from that of its inverse",
                    ei
                )));
            }
            for j in 0..ring.rank() {
                let ej = ring.exponents(j);
                let s = reduce(ei.iter().zip(ej).map(|(a, b)| a + b).collect());
                let prod = self.index[i] * self.index[j];
                if !prod.is_multiple_of(self.index[s]) {
                    return Err(Error::Config(format!(
                        "index of {:?} does not divide the product of the indices of {:?} and {:?}",
                        ring.exponents(s),
                        ei,
                        ej
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rank-one check used by the split sanity property.
    pub fn is_split(&self) -> bool {
        self.index.iter().all(|&i| BigInt::from(i).is_one())
    }
}

/// `k` conics whose tensor products have index `by_weight[w]` when `w`
/// factors are involved.
fn conics(name: &str, by_weight: &[u64]) -> Result<SeveriBrauerConfig> {
    let k = by_weight.len() - 1;
    SeveriBrauerConfig::new(name, vec![2; k], |e| by_weight[e.iter().sum::<usize>()])
}

fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let degrees = inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Input(format!("bad factor degree '{}' in split config", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    if degrees.is_empty() || degrees.len() > 8 {
        return Err(Error::Input("split config needs between 1 and 8 factors".into()));
    }
    Ok(degrees)
}
