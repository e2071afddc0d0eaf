use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Every inequality the crate knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "B_NORM_EQUIV")]
    NormEquiv,
    #[serde(rename = "B_SANDWICH_DW")]
    SandwichDw,
    #[serde(rename = "B_WN_SANDWICH")]
    WnSandwich,
    #[serde(rename = "B_BAK")]
    Bak,
    #[serde(rename = "B_SANDWICH_DWN")]
    SandwichDwn,
    #[serde(rename = "B_LOW")]
    Low,
    #[serde(rename = "B_REFUTED_UP")]
    RefutedUp,
    #[serde(rename = "B_THM22")]
    Thm22,
    #[serde(rename = "B_COR_EQUAC1")]
    CorEquac1,
    #[serde(rename = "B_COR_ALG")]
    CorAlg,
    #[serde(rename = "B_EQB1")]
    Eqb1,
    #[serde(rename = "B_EQB2")]
    Eqb2,
    #[serde(rename = "B_COR_WNABS")]
    CorWnabs,
    #[serde(rename = "B_COR_WNABS2")]
    CorWnabs2,
    #[serde(rename = "B_WN_MAX")]
    WnMax,
    #[serde(rename = "B_THM28")]
    Thm28,
    #[serde(rename = "B_EQP1")]
    Eqp1,
    #[serde(rename = "B_EQP2")]
    Eqp2,
    #[serde(rename = "B_THM29")]
    Thm29,
    #[serde(rename = "B_TRI_DW")]
    TriDw,
    #[serde(rename = "B_TRI_DWN")]
    TriDwn,
}

/// What a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    LowerOnDwN,
    UpperOnDwN,
    LowerOnWN,
    Sandwich,
    Triangle,
    RefutedUpper,
}

impl BoundId {
    pub const ALL: [BoundId; 21] = [
        BoundId::NormEquiv,
        BoundId::SandwichDw,
        BoundId::WnSandwich,
        BoundId::Bak,
        BoundId::SandwichDwn,
        BoundId::Low,
        BoundId::RefutedUp,
        BoundId::Thm22,
        BoundId::CorEquac1,
        BoundId::CorAlg,
        BoundId::Eqb1,
        BoundId::Eqb2,
        BoundId::CorWnabs,
        BoundId::CorWnabs2,
        BoundId::WnMax,
        BoundId::Thm28,
        BoundId::Eqp1,
        BoundId::Eqp2,
        BoundId::Thm29,
        BoundId::TriDw,
        BoundId::TriDwn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::NormEquiv => "B_NORM_EQUIV",
            BoundId::SandwichDw => "B_SANDWICH_DW",
            BoundId::WnSandwich => "B_WN_SANDWICH",
            BoundId::Bak => "B_BAK",
            BoundId::SandwichDwn => "B_SANDWICH_DWN",
            BoundId::Low => "B_LOW",
            BoundId::RefutedUp => "B_REFUTED_UP",
            BoundId::Thm22 => "B_THM22",
            BoundId::CorEquac1 => "B_COR_EQUAC1",
            BoundId::CorAlg => "B_COR_ALG",
            BoundId::Eqb1 => "B_EQB1",
            BoundId::Eqb2 => "B_EQB2",
            BoundId::CorWnabs => "B_COR_WNABS",
            BoundId::CorWnabs2 => "B_COR_WNABS2",
            BoundId::WnMax => "B_WN_MAX",
            BoundId::Thm28 => "B_THM28",
            BoundId::Eqp1 => "B_EQP1",
            BoundId::Eqp2 => "B_EQP2",
            BoundId::Thm29 => "B_THM29",
            BoundId::TriDw => "B_TRI_DW",
            BoundId::TriDwn => "B_TRI_DWN",
        }
    }

    pub fn side(self) -> BoundSide {
        use BoundId::*;
        match self {
            NormEquiv | SandwichDw | WnSandwich | SandwichDwn => BoundSide::Sandwich,
            Bak | WnMax => BoundSide::LowerOnWN,
            RefutedUp => BoundSide::RefutedUpper,
            TriDw | TriDwn => BoundSide::Triangle,
            Low | Thm22 | CorEquac1 | CorAlg | Eqb1 | Eqb2 | CorWnabs | CorWnabs2 | Thm28
            | Eqp1 | Eqp2 | Thm29 => BoundSide::LowerOnDwN,
        }
    }

    pub fn requires_algebra(self) -> bool {
        use BoundId::*;
        matches!(
            self,
            CorAlg | Eqb1 | Eqb2 | CorWnabs | CorWnabs2 | WnMax | Bak | Eqp1 | Eqp2
        )
    }

    pub fn requires_self_adjoint(self) -> bool {
        matches!(self, BoundId::Bak | BoundId::Thm29)
    }

    pub fn needs_partner(self) -> bool {
        self.side() == BoundSide::Triangle
    }

    /// Bounds whose statement involves the chosen norm. The rest are
    /// statements about the operator norm, `w` and the classical `dw`.
    pub fn depends_on_norm(self) -> bool {
        !matches!(self, BoundId::NormEquiv | BoundId::SandwichDw | BoundId::TriDw)
    }

    /// Human-readable statement. `a = N^2(Re T) + N^4(|T|)`, `b = N^2(Im T)`,
    /// `X = |T|^2 + |T*|^2`, `Y = T^2 + T*^2`; `m1, m2, d1, d2` as in [`super::MdQuadruple`].
    pub fn statement(self) -> &'static str {
        match self {
            BoundId::NormEquiv => "||T||/2 <= w(T) <= ||T||",
            BoundId::SandwichDw => "max{w(T), || |T| ||^2} <= dw(T) <= sqrt(w^2(T) + || |T| ||^4)",
            BoundId::WnSandwich => {
                "max{N(T), N(T*)}/2 <= w_N(T) <= (N(T) + N(T*))/2; self-adjoint N: N(T)/2 <= w_N(T) <= N(T)"
            }
            BoundId::Bak => "w_N(T) >= 1/2 sqrt|N(X) - 2 w_N(T^2)|",
            BoundId::SandwichDwn => {
                "max{w_N(T), w_N^2(|T|)} <= dw_N(T) <= sqrt(w_N^2(T) + w_N^4(|T|))"
            }
            BoundId::Low => "dw_N(T) >= sqrt(N^2(T)/4 + N^4(|T|)/8)",
            BoundId::RefutedUp => {
                "dw_N(T) <= inf_theta sqrt(N^2(Re e^{i theta}T) + N^2(Im e^{i theta}T) + N^4(Re e^{i theta}|T|))"
            }
            BoundId::Thm22 => "dw_N(T) >= 1/2 sqrt(N^2(T) + 2 N^4(|T|) + 2|a - b|)",
            BoundId::CorEquac1 => "dw_N(T) >= 1/2 sqrt(N^2(T) + 2 N^4(|T|))",
            BoundId::CorAlg => "dw_N(T) >= 1/2 sqrt(N(T^2 + 2|T|^4))",
            BoundId::Eqb1 => "dw_N(T) >= 1/2 sqrt(N(X) + 2 N^4(|T|) + 2|a - b|)",
            BoundId::Eqb2 => "dw_N(T) >= 1/2 sqrt(N(Y) + 2 N^4(|T|) + 2|a - b|)",
            BoundId::CorWnabs => "dw_N(T) >= 1/2 sqrt(w_N(X) + 2 w_N^4(|T|))",
            BoundId::CorWnabs2 => "dw_N(T) >= 1/2 sqrt(w_N(X + 2|T|^4))",
            BoundId::WnMax => "w_N(T) >= 1/2 max{sqrt N(X), sqrt N(Y)}",
            BoundId::Thm28 => {
                "dw_N(T) >= 1/2 sqrt(3/4 N^2(T) + 2 N^4(|T|) + d1 + d2 + 2|m1 - m2|)"
            }
            BoundId::Eqp1 => {
                "dw_N(T) >= 1/2 sqrt(N(X)/2 + w_N^2(T) + 2 N^4(|T|) + d1 + d2 + 2|m1 - m2|)"
            }
            BoundId::Eqp2 => {
                "dw_N(T) >= 1/2 sqrt(N(Y)/2 + w_N^2(T) + 2 N^4(|T|) + d1 + d2 + 2|m1 - m2|)"
            }
            BoundId::Thm29 => {
                "dw_N(T) >= 1/2 sqrt(3/2 w_N^2(T) + 2 N^4(|T|) + d1 + d2 + 2|m1 - m2|)"
            }
            BoundId::TriDw => {
                "dw(T+S) <= sqrt(2(dw^2(T) + dw^2(S)) + 6|| |T|^4 + |S|^4 ||) <= 2 sqrt2 (dw(T) + dw(S))"
            }
            BoundId::TriDwn => {
                "dw_N(T+S) <= sqrt(2(dw_N^2(T) + dw_N^2(S)) + 6(N^4(|T|) + N^4(|S|))) <= 2 sqrt2 sqrt(dw_N^2(T) + dw_N^2(S)) <= 2 sqrt2 (dw_N(T) + dw_N(S))"
            }
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        BoundId::ALL
            .iter()
            .copied()
            .find(|b| b.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}
