//! Holonomy of a pair of pants with prescribed complex boundary lengths.
//!
//! The representation is built by walking once around the right-angled
//! hexagon whose alternate sides are the half-cuffs σ₁, σ₂, σ₃. Each step
//! translates along the current side and turns by a right angle, so the
//! running frame `F` is a product of `D(s) = diag(e^{s/2}, e^{-s/2})` and a
//! fixed quarter turn `R`. The frame at the start of cuff side `k` is kept,
//! and the cuff holonomy is the translation by `2σₖ` along that side, with
//! the lift fixed by `tr Cₖ = −2 cosh σₖ`. With this normal form
//! `C₁ C₂ C₃ = I` holds identically.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexagon::solve_hexagon;
use crate::moebius::{reduce_mod_2pi_i, Moebius};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PantsBoundaryData {
    pub sigma: [C64; 3],
}

impl PantsBoundaryData {
    pub fn new(sigma: [C64; 3]) -> Result<Self> {
        for (k, s) in sigma.iter().enumerate() {
            if !(s.re > 0.0) || !s.im.is_finite() {
                return Err(Error::InvalidPants(format!(
                    "boundary {} has complex length {s} with non-positive real part",
                    k + 1
                )));
            }
        }
        Ok(PantsBoundaryData { sigma })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PantsRep {
    /// Cuff holonomies `C₁, C₂, C₃`, with `C₁ C₂ C₃ = I`.
    pub cuffs: [Moebius; 3],
    /// Frame at the start of each cuff side; cuff `k`'s axis is the image of
    /// the geodesic 0 → ∞ under `frames[k]`.
    pub frames: [Moebius; 3],
    /// Seam lengths `[s₁₂, s₂₃, s₃₁]`.
    pub seams: [C64; 3],
    /// Distance to the nearest point where a branch choice in the seam
    /// computation could jump. Small values mean finite differences taken
    /// here are not trustworthy.
    pub branch_margin: f64,
}

/// Translation by `s` along the geodesic 0 → ∞.
pub fn translate(s: C64) -> Moebius {
    Moebius::translation(s)
}

/// Rotation by a right angle about the geodesic joining −i and i, which
/// meets 0 → ∞ orthogonally at `j`.
pub fn quarter_turn() -> Moebius {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Moebius {
        a: h,
        b: -h,
        c: h,
        d: h,
    }
}

pub fn pants_representation(d: &PantsBoundaryData) -> Result<PantsRep> {
    let ipi = C64::new(0.0, PI);
    let [s1, s2, s3] = d.sigma;
    let hex = solve_hexagon(s1 + ipi, s2 + ipi, s3 + ipi)?;
    let seams = [
        reduce_mod_2pi_i(hex.side(2) - ipi),
        reduce_mod_2pi_i(hex.side(4) - ipi),
        reduce_mod_2pi_i(hex.side(6) - ipi),
    ];
    let even_re_sum: f64 = [2, 4, 6].iter().map(|&n| hex.side(n).re).sum();
    let branch_margin = seams
        .iter()
        .map(|s| PI - s.im.abs())
        .chain([2, 4, 6].iter().map(|&n| hex.side(n).sinh().norm()))
        .fold(even_re_sum.abs(), f64::min);
    let sides = [s1, seams[0], s2, seams[1], s3, seams[2]];
    let r = quarter_turn();
    let mut frame = Moebius::IDENTITY;
    let mut frames = [Moebius::IDENTITY; 3];
    for (k, side) in sides.iter().enumerate() {
        if k % 2 == 0 {
            frames[k / 2] = frame;
        }
        frame = frame.mul_raw(&translate(*side)).mul_raw(&r);
    }
    let cuffs = [0, 1, 2].map(|k| {
        frames[k]
            .mul_raw(&translate(-2.0 * d.sigma[k]))
            .mul_raw(&frames[k].inverse())
            .negated()
    });
    let comm = cuffs[0]
        .mul_raw(&cuffs[1])
        .mul_raw(&cuffs[0].inverse())
        .mul_raw(&cuffs[1].inverse());
    if (comm.trace() - 2.0).norm() <= 1e-10 {
        return Err(Error::ReduciblePants);
    }
    Ok(PantsRep {
        cuffs,
        frames,
        seams,
        branch_margin,
    })
}
