use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::Error;

/// The four implemented pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairId {
    /// (ℝ, {0})
    #[serde(rename = "flat_r1")]
    FlatR1,
    /// (SO(2)⋉ℝ², SO(2))
    #[serde(rename = "e2")]
    E2,
    /// (U(1)⋉ℂ, U(1)) as a strong pair
    #[serde(rename = "u1_c")]
    U1C,
    /// (U(1)⋉H₁, U(1))
    #[serde(rename = "heis1")]
    Heis1,
}

impl PairId {
    pub const ALL: [PairId; 4] = [PairId::FlatR1, PairId::E2, PairId::U1C, PairId::Heis1];

    pub fn as_str(self) -> &'static str {
        match self {
            PairId::FlatR1 => "flat_r1",
            PairId::E2 => "e2",
            PairId::U1C => "u1_c",
            PairId::Heis1 => "heis1",
        }
    }

    pub fn descriptor(self) -> PairDescriptor {
        PairDescriptor::new(self)
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PairId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::UnknownPair(s.to_string()))
    }
}

/// Static shape of a pair's embedded spectrum.
///
/// `ell` generators in total, of which the first `r` come from the centre of
/// the enveloping algebra of K (the K-type coordinates).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairDescriptor {
    pub id: PairId,
    pub ell: usize,
    pub r: usize,
    pub generator_names: Vec<&'static str>,
    pub strong: bool,
}

impl PairDescriptor {
    pub fn new(id: PairId) -> Self {
        let (ell, r, generator_names): (usize, usize, Vec<&'static str>) = match id {
            PairId::FlatR1 => (1, 0, vec!["-Laplacian"]),
            PairId::E2 => (1, 0, vec!["-Laplacian"]),
            PairId::U1C => (2, 1, vec!["-i d/dtheta", "-Laplacian_z"]),
            PairId::Heis1 => (2, 0, vec!["sublaplacian", "-i d/dt"]),
        };
        Self { id, ell, r, generator_names, strong: r >= 1 }
    }

    /// Dimension of the H-coordinate of a [`GroupPoint`](super::GroupPoint).
    pub fn h_dim(&self) -> usize {
        match self.id {
            PairId::FlatR1 => 1,
            PairId::E2 | PairId::U1C => 2,
            PairId::Heis1 => 3,
        }
    }

    /// Number of torus angles carried by group points.
    pub fn k_dim(&self) -> usize {
        self.r
    }
}
