//! Shipped data: eta-quotient newforms with the `(k, N)` pairs they feed,
//! the curve with its cubic shape, and the Eisenstein example.

use crate::modforms::{EtaQuotientSpec, Weight};

/// A weight-2 newform given as an eta quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaNewform {
    pub level: u64,
    pub spec: &'static str,
    /// Every `(k, N)` with `(k²/4)·N = level` for which the support lemma
    /// applies.
    pub uses: &'static [(u32, u64)],
}

impl EtaNewform {
    pub fn parsed(&self) -> EtaQuotientSpec {
        self.spec.parse().expect("shipped spec parses")
    }
}

pub const ETA_NEWFORMS: [EtaNewform; 4] = [
    EtaNewform {
        level: 20,
        spec: "2^2 10^2",
        uses: &[(4, 5)],
    },
    EtaNewform {
        level: 27,
        spec: "3^2 9^2",
        uses: &[(6, 3)],
    },
    EtaNewform {
        level: 32,
        spec: "4^2 8^2",
        uses: &[(8, 2)],
    },
    EtaNewform {
        level: 36,
        spec: "6^4",
        uses: &[(6, 4), (12, 1)],
    },
];

pub fn eta_newform(level: u64) -> Option<&'static EtaNewform> {
    ETA_NEWFORMS.iter().find(|e| e.level == level)
}

/// Cubic coefficients as `(numerator, denominator)` pairs, for `k = 4` in
/// the order `a2, a4, a6`.
pub type ShapeData = [(i64, i64); 3];

/// `∂₅,₄(Q₅)² = Q₅³ − (89/13)Q₅²Δ − (3500/169)Q₅Δ² − (125000/2197)Δ³`.
pub const LEVEL20_SHAPE: ShapeData = [(-89, 13), (-3500, 169), (-125000, 2197)];

/// The level-76 curve `y² = x³ + Ax + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShippedCurve {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub level: u64,
    pub k: u32,
    pub n: u64,
    pub shape: ShapeData,
    /// `g₂ = −4A`, `g₃ = −4B` of the period lattice.
    pub g2: (i64, i64),
    pub g3: (i64, i64),
    /// Reference lattice generators `ω₁` and `ω₂ = re + im·i`.
    pub omega1: f64,
    pub omega2: (f64, f64),
    /// Leading coefficients of the solution `Q`, numerators over 3.
    pub q_thirds: [i64; 8],
}

pub const LEVEL76: ShippedCurve = ShippedCurve {
    a: (-64, 3),
    b: (-1028, 27),
    level: 76,
    k: 4,
    n: 19,
    shape: [(0, 1), (-64, 3), (-1028, 27)],
    g2: (256, 3),
    g3: (4112, 27),
    omega1: 1.1104197465122,
    omega2: (0.5552098732561, 2.1752061725591),
    q_thirds: [3, 8, 8, 64, 232, 336, 256, 512],
};

/// Levels whose newform is an eta quotient, for `k` and `N`.
pub fn eta_newform_for(k: Weight, n: u64) -> Option<&'static EtaNewform> {
    ETA_NEWFORMS
        .iter()
        .find(|e| e.uses.iter().any(|&(kk, nn)| kk == k.k() && nn == n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_match_k_and_n() {
        for e in ETA_NEWFORMS {
            for &(k, n) in e.uses {
                assert_eq!(Weight::new(k).unwrap().newform_level(n), e.level);
            }
            assert_eq!(e.parsed().weight(), crate::Exponent::from_integer(2));
            assert_eq!(e.parsed().level(), e.level);
        }
        assert_eq!(Weight::K4.newform_level(LEVEL76.n), LEVEL76.level);
    }
}
