use std::fmt;
use std::str::FromStr;

use super::spec::{InteractionError, InteractionSpec, ModeCoupling};

/// The seven named multiwave-mixing processes. In each, mode A is the pump
/// (created in `G`), B the Stokes mode and C the signal mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    SixWave321,
    SixWave231,
    FourWave211,
    Shg21,
    FiveWave32,
    Thg31,
    Trilinear111,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::SixWave321,
        Preset::SixWave231,
        Preset::FourWave211,
        Preset::Shg21,
        Preset::FiveWave32,
        Preset::Thg31,
        Preset::Trilinear111,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SixWave321 => "sixwave-321",
            Preset::SixWave231 => "sixwave-231",
            Preset::FourWave211 => "fourwave-211",
            Preset::Shg21 => "shg-21",
            Preset::FiveWave32 => "fivewave-32",
            Preset::Thg31 => "thg-31",
            Preset::Trilinear111 => "trilinear-111",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Preset::SixWave321 => "Six wave mixing (new)",
            Preset::SixWave231 => "Six wave mixing (earlier)",
            Preset::FourWave211 => "Four wave mixing",
            Preset::Shg21 => "Second harmonic generation",
            Preset::FiveWave32 => "Five wave mixing",
            Preset::Thg31 => "Third harmonic generation",
            Preset::Trilinear111 => "Tri-linear parametric process",
        }
    }

    pub fn exponents(self) -> &'static [u32] {
        match self {
            Preset::SixWave321 => &[3, 2, 1],
            Preset::SixWave231 => &[2, 3, 1],
            Preset::FourWave211 => &[2, 1, 1],
            Preset::Shg21 => &[2, 1],
            Preset::FiveWave32 => &[3, 2],
            Preset::Thg31 => &[3, 1],
            Preset::Trilinear111 => &[1, 1, 1],
        }
    }

    pub fn spec(self) -> InteractionSpec {
        let mut couplings = Vec::new();
        for (idx, &e) in self.exponents().iter().enumerate() {
            couplings.push(if idx == 0 { ModeCoupling::created(e) } else { ModeCoupling::annihilated(e) });
        }
        InteractionSpec::new(couplings).expect("presets are valid")
    }

    pub fn names() -> String {
        Self::ALL.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = InteractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| InteractionError::UnknownPreset { name: s.to_string(), available: Self::names() })
    }
}
