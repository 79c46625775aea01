//! Closed-form induced colors of every family, computed without building a
//! graph, and exact sign certificates showing the three colors differ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{Factorization, Family, FamilyParams};
use crate::graph::Color;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("a distinctness certificate needs a factorization 2k+1 = (2r+1)(2s+1)")]
    MissingFactorization,
    #[error("falsification alarm: color {which} equals the center color for {params}")]
    Falsified { params: FamilyParams, which: &'static str },
}

/// The three induced colors of a crossed or merged family graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorTriple {
    /// Color of every `y`, `z` and middle `x` leaf (scaled by `2s+1` after a
    /// merge).
    pub c_center: Color,
    /// Color of every `u_i`.
    pub c_u: Color,
    /// Color of every `v_i`.
    pub c_v: Color,
    pub params: FamilyParams,
}

impl ColorTriple {
    pub fn pairwise_distinct(&self) -> bool {
        self.c_center != self.c_u && self.c_center != self.c_v && self.c_u != self.c_v
    }

    /// Sorted colors.
    pub fn sorted(&self) -> [Color; 3] {
        let mut c = [self.c_center, self.c_u, self.c_v];
        c.sort_unstable();
        c
    }
}

/// Sum of the two labels meeting at a crossed leaf, `f(u_i x_{i,j}) +
/// f(v_{2k+2-i} x_{2k+2-i,j})`, which is the same for every `i` and `j`.
pub fn pair_constant(params: &FamilyParams) -> Color {
    let (n, k) = (params.n() as u64, params.k() as u64);
    match params.family() {
        Family::M2 => n * (8 * k + 4) + 4 * k + 3,
        Family::M3 => (2 * n + 2) * (4 * k + 2) + 1,
    }
}

/// Color of every `u_i`: the u-block column sum.
pub fn u_color(params: &FamilyParams) -> Color {
    let (n, k) = (params.n() as u64, params.k() as u64);
    match params.family() {
        Family::M2 => 8 * k * n * n + 6 * k * n + 4 * n * n + k + 4 * n + 1,
        Family::M3 => (n + 1) * (3 * n + 1) * (4 * k + 2) + n + 2 * k + 2,
    }
}

/// Color of every `v_i`: the v-block column sum.
pub fn v_color(params: &FamilyParams) -> Color {
    let (n, k) = (params.n() as u64, params.k() as u64);
    match params.family() {
        Family::M2 => 8 * k * n * n + 2 * k * n + 4 * n * n + k + 2 * n + 1,
        Family::M3 => (n + 1) * (n + 1) * (4 * k + 2) + n + 1,
    }
}

pub fn color_triple(params: FamilyParams) -> ColorTriple {
    let scale = params.factorization().map_or(1, |f| 2 * f.s as u64 + 1);
    ColorTriple {
        c_center: scale * pair_constant(&params),
        c_u: u_color(&params),
        c_v: v_color(&params),
        params,
    }
}

/// Case split on `s` against `n` used to sign a color difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseBranch {
    /// `2s ≥ n`.
    TwoSAtLeastN,
    /// `2s − n = −1`.
    TwoSMinusNIsMinusOne,
    /// `2s − n ≤ −1`.
    TwoSMinusNAtMostMinusOne,
    /// `2s − n ≤ −2`.
    TwoSMinusNAtMostMinusTwo,
    /// `4s ≥ n`.
    FourSAtLeastN,
    /// `4s − n ≤ −1`.
    FourSMinusNAtMostMinusOne,
}

/// Exact difference of two colors together with the case that applies and
/// the sign the case analysis asserts for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceCheck {
    pub difference: i64,
    pub branch: CaseBranch,
    /// +1 or −1.
    pub claimed_sign: i8,
    pub sign_matches_claim: bool,
}

impl DifferenceCheck {
    fn new(difference: i64, branch: CaseBranch, claimed_sign: i8) -> Self {
        DifferenceCheck {
            difference,
            branch,
            claimed_sign,
            sign_matches_claim: difference.signum() == claimed_sign as i64,
        }
    }
}

/// Record that the center color differs from both path colors. The `u`
/// versus `v` gap needs no case split: it is `4kn + 2n` for `M2` and
/// `2n(n+1)(4k+2) + 2k + 1` for `M3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessCertificate {
    pub triple: ColorTriple,
    /// Center minus u color.
    pub center_minus_u: DifferenceCheck,
    /// Center minus v color.
    pub center_minus_v: DifferenceCheck,
    pub u_minus_v: i64,
}

/// Signs center minus u and center minus v exactly and raises an alarm on a
/// zero.
///
/// The claimed signs follow the case split on `2s` (or `4s`) against `n`.
/// For `M3` the center minus u split assumes a smaller u color than the one
/// the matrix produces, so `sign_matches_claim` can be false there even
/// though the difference is nonzero.
pub fn distinctness_certificate(params: FamilyParams) -> Result<DistinctnessCertificate, FormulaError> {
    let Factorization { s, .. } = params.factorization().ok_or(FormulaError::MissingFactorization)?;
    let triple = color_triple(params);
    let (n, s) = (params.n() as i64, s as i64);
    let center = triple.c_center as i64;
    let du = center - triple.c_u as i64;
    let dv = center - triple.c_v as i64;

    let (center_minus_u, center_minus_v) = match params.family() {
        Family::M2 => {
            let cu = if 2 * s >= n {
                DifferenceCheck::new(du, CaseBranch::TwoSAtLeastN, 1)
            } else {
                DifferenceCheck::new(du, CaseBranch::TwoSMinusNAtMostMinusOne, -1)
            };
            let cv = match 2 * s - n {
                d if d >= 0 => DifferenceCheck::new(dv, CaseBranch::TwoSAtLeastN, 1),
                -1 => DifferenceCheck::new(dv, CaseBranch::TwoSMinusNIsMinusOne, 1),
                _ => DifferenceCheck::new(dv, CaseBranch::TwoSMinusNAtMostMinusTwo, -1),
            };
            (cu, cv)
        }
        Family::M3 => {
            let cu = if 2 * s >= n {
                DifferenceCheck::new(du, CaseBranch::TwoSAtLeastN, 1)
            } else {
                DifferenceCheck::new(du, CaseBranch::TwoSMinusNAtMostMinusOne, -1)
            };
            let cv = if 4 * s >= n {
                DifferenceCheck::new(dv, CaseBranch::FourSAtLeastN, 1)
            } else {
                DifferenceCheck::new(dv, CaseBranch::FourSMinusNAtMostMinusOne, -1)
            };
            (cu, cv)
        }
    };

    if du == 0 {
        return Err(FormulaError::Falsified { params, which: "u" });
    }
    if dv == 0 {
        return Err(FormulaError::Falsified { params, which: "v" });
    }
    let u_minus_v = triple.c_u as i64 - triple.c_v as i64;
    if u_minus_v == 0 {
        return Err(FormulaError::Falsified { params, which: "u = v" });
    }
    Ok(DistinctnessCertificate { triple, center_minus_u, center_minus_v, u_minus_v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn merged(family: Family, n: u32, r: u32, s: u32) -> FamilyParams {
        FamilyParams::merged(family, n, r, s).unwrap()
    }

    #[test]
    fn worked_example_triples() {
        let t = color_triple(FamilyParams::new(Family::M2, 2, 4).unwrap());
        assert_eq!((t.c_center, t.c_u, t.c_v), (91, 205, 169));
        let t = color_triple(merged(Family::M2, 2, 1, 1));
        assert_eq!((t.c_center, t.c_u, t.c_v), (273, 205, 169));
        let t = color_triple(merged(Family::M3, 2, 1, 1));
        assert_eq!((t.c_center, t.c_u, t.c_v), (327, 390, 165));
        let t = color_triple(FamilyParams::new(Family::M3, 2, 4).unwrap());
        assert_eq!(t.c_center, 109);
    }

    #[test]
    fn certificate_branches() {
        let c = distinctness_certificate(merged(Family::M2, 2, 1, 1)).unwrap();
        assert_eq!(c.center_minus_u.difference, 68);
        assert_eq!(c.center_minus_u.branch, CaseBranch::TwoSAtLeastN);

        let c = distinctness_certificate(merged(Family::M2, 6, 1, 1)).unwrap();
        assert_eq!(c.center_minus_u.branch, CaseBranch::TwoSMinusNAtMostMinusOne);
        assert_eq!(c.center_minus_v.branch, CaseBranch::TwoSMinusNAtMostMinusTwo);
        assert!(c.center_minus_u.difference < 0 && c.center_minus_v.difference < 0);

        let c = distinctness_certificate(merged(Family::M2, 3, 1, 1)).unwrap();
        assert_eq!(c.center_minus_v.branch, CaseBranch::TwoSMinusNIsMinusOne);
        assert!(c.center_minus_v.difference > 0);

        let c = distinctness_certificate(merged(Family::M3, 4, 1, 1)).unwrap();
        assert_eq!(c.center_minus_v.branch, CaseBranch::FourSAtLeastN);
        let c = distinctness_certificate(merged(Family::M3, 5, 1, 1)).unwrap();
        assert_eq!(c.center_minus_v.branch, CaseBranch::FourSMinusNAtMostMinusOne);
        assert_ne!(c.center_minus_u.difference, 0);
    }

    #[test]
    fn certificate_needs_factorization() {
        let p = FamilyParams::new(Family::M2, 2, 4).unwrap();
        assert_eq!(distinctness_certificate(p), Err(FormulaError::MissingFactorization));
    }

    #[test]
    fn m3_center_minus_u_sign_differs_from_case_analysis() {
        // 327 < 390 although 2s >= n.
        let c = distinctness_certificate(merged(Family::M3, 2, 1, 1)).unwrap();
        assert_eq!(c.center_minus_u.difference, -63);
        assert!(!c.center_minus_u.sign_matches_claim);
    }

    /// The factored forms of the differences, as an independent route.
    #[test]
    fn factored_differences_agree() {
        for n in 1..=8i64 {
            for r in 1..=3u32 {
                for s in 1..=4u32 {
                    for family in [Family::M2, Family::M3] {
                        let p = merged(family, n as u32, r, s);
                        let t = color_triple(p);
                        let (k, s) = (p.k() as i64, s as i64);
                        let (c, u, v) = (t.c_center as i64, t.c_u as i64, t.c_v as i64);
                        match family {
                            Family::M2 => {
                                assert_eq!(c - u, (8 * k * n + 4 * n + 3) * (2 * s - n) + 2 * k * n + 8 * k * s + 3 * k + 3 * n + 2);
                                assert_eq!(c - v, (8 * k * n + 4 * n + 3) * (2 * s - n) + 6 * k * n + 8 * k * s + 3 * k + 5 * n + 2);
                                assert_eq!(u - v, 4 * k * n + 2 * n);
                            }
                            Family::M3 => {
                                // Against the (2n+1) u color, plus the n(n+1)(4k+2) gap.
                                let printed = (8 * k * n + 4 * n + 4 * k + 5) * (2 * s - n) + 2 * n + 8 * k * s + 2 * k + 1;
                                assert_eq!(c - u, printed - n * (n + 1) * (4 * k + 2));
                                assert_eq!(c - v, (4 * k * n + 2 * n + 2) * (4 * s - n) + n + 16 * k * s + 2 * s + 4 * k + 2);
                                assert_eq!(u - v, 2 * n * (n + 1) * (4 * k + 2) + 2 * k + 1);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_forces_k_at_least_four() {
        for r in 1..=5 {
            for s in 1..=5 {
                assert!(merged(Family::M2, 1, r, s).k() >= 4);
            }
        }
    }
}
