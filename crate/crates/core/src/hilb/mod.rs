//! Graded models of `A*(Hilb² X)`, `A*(Hilb^{[2,3]} X)` and `A*(Hilb³ X)` built from
//! the Chow-ring data of `X`.
//!
//! The nested model is realised as a tower of two blowups:
//! `B = Bl_{X×Δ}(X³)` (a double cover of `X × Hilb² X`) and then the blowup `T` of
//! `B` along the preimage of the universal family `Z₂ ≅ Bl_Δ(X×X)`. The swap of the
//! last two factors acts on `T`; its invariants `W` model the nested Hilbert scheme.

mod hilb2;
mod hilb3;
mod nested;
mod pushpull;

pub use hilb2::{hilb2_model, Hilb2Model};
pub use hilb3::{extract_presentation, hilb3_from_nested, hilb3_generators, hilb3_model, Hilb3Model, Presentation, XiRange};
pub use nested::{nested_model, z2_normal_chern, NestedModel};
pub use pushpull::{PushPull, TypedElement};

use std::fmt;
use std::str::FromStr;

use crate::construct::ChernSigns;
use crate::poly::{ratio, Rational};

/// Sign `s` in `c(N) = c(T_X)·(1 - 2s·e)/(1 - s·e)` for the normal bundle of the universal family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(format!("expected `+` or `-`, got `{other}`")),
        }
    }
}

impl fmt::Display for ChernSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChernSigns::Literal => "literal",
            ChernSigns::Alternating => "alternating",
        })
    }
}

impl FromStr for ChernSigns {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(ChernSigns::Literal),
            "alternating" => Ok(ChernSigns::Alternating),
            other => Err(format!("expected `literal` or `alternating`, got `{other}`")),
        }
    }
}

/// Conventions of the pipeline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Halve the constant term of the second exceptional relation.
    pub rel3_half: bool,
    pub eqcz_sign: Sign,
    pub chern_signs: ChernSigns,
}

impl PipelineConfig {
    /// Coefficient `K` of `Δ₀₁ + Δ₀₂` in the second exceptional relation.
    pub fn rel3_constant(&self) -> Rational {
        if self.rel3_half {
            ratio(1, 2)
        } else {
            ratio(1, 1)
        }
    }
}
