use crate::coeffring::{ParamSet, Poly};
use crate::error::{Error, Result};

/// Constant terms of the two worked blocks: half rank (`Λ_1 = 1`, CLI name
/// `ex36`) and rank 3/2 (`Λ_3 = 1`, `β_1 = β_2 = Λ_2 = 0`, CLI name `ex38`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    HalfRank,
    ThreeHalves,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        match s {
            "ex36" | "half" => Ok(Preset::HalfRank),
            "ex38" | "three-halves" => Ok(Preset::ThreeHalves),
            _ => Err(Error::Usage(format!("unknown preset `{s}` (expected ex36/half or ex38/three-halves)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::HalfRank => "ex36",
            Preset::ThreeHalves => "ex38",
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            Preset::HalfRank => 1,
            Preset::ThreeHalves => 2,
        }
    }
}

const HALF_C0: [&str; 3] = [
    "b^3/256 + b (c - 4D + 1)/64",
    "b^6/131072 + b^4 (c - 4D + 6)/16384 + b^2 (3c^2 - 24c D + 74c + 48D^2 - 168D + 103)/24576 + D (D - c - 2)/64",
    "b^9/100663296 + b^7 (c - 4D + 11)/8388608 \
     + b^5 (3c^2 - 24c D + 104c + 48D^2 - 288D + 397)/6291456 \
     + b^3 (3c^3 - 36c^2 D + 213c^2 + 144c D^2 - 1608c D + 3793c - 192D^3 + 2160D^2 - 6660D + 5951)/4718592 \
     - b (6c^2 D + 7c^2 - 30c D^2 + 178c D - 6c + 24D^3 - 158D^2 + 340D - 37)/24576",
];

const THREE_HALVES_C0: [&str; 6] = [
    "0",
    "0",
    "153 b^3/256 - b (5c + 108D - 11)/192",
    "0",
    "0",
    "23409 b^6/131072 - 3 b^4 (85c + 1836D - 3562)/16384 \
     + b^2 (25c^2 + 1080c D - 6050c + 11664D^2 - 58104D + 15781)/73728 + D (5c + 11D - 22)/192",
];

/// `c_∅^{(1)}, c_∅^{(2)}, …` of the preset, expressed through the given `β`
/// (the top exponent `β_{2r−1}`), `c` and `Δ`, which share a parameter set.
pub fn preset_c0(preset: Preset, beta: &Poly, c: &Poly, delta: &Poly) -> Result<Vec<Poly>> {
    let local = ParamSet::plain(&["b", "c", "D"])?;
    let images = [beta.clone(), c.clone(), delta.clone()];
    let table: &[&str] = match preset {
        Preset::HalfRank => &HALF_C0,
        Preset::ThreeHalves => &THREE_HALVES_C0,
    };
    table.iter().map(|s| Poly::parse(&local, s)?.compose(&images)).collect()
}
