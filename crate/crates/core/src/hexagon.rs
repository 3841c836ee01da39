//! Right-angled hexagons in ℍ³ with complex side lengths.
//!
//! Sides are indexed 1..=6 cyclically. Given the three alternate sides
//! σ₁, σ₃, σ₅ the remaining sides follow from
//!
//! ```text
//! cosh σₙ = (cosh σₙ₊₃ − cosh σₙ₊₁ cosh σₙ₋₁) / (sinh σₙ₊₁ sinh σₙ₋₁)
//! ```
//!
//! together with the sine rule
//! `sinh σ₁ / sinh σ₄ = sinh σ₃ / sinh σ₆ = sinh σ₅ / sinh σ₂`.
//!
//! With this sign convention a real hyperbolic hexagon with side lengths
//! `a₁..a₆` corresponds to `σₙ = aₙ + iπ`: the rule above is the classical
//! `cosh a₄ = (cosh a₁ + cosh a₃ cosh a₅) / (sinh a₃ sinh a₅)` with every side
//! shifted by `iπ`.
//!
//! The cosine rule determines each even side only up to sign. Sides are
//! oriented, so the sign matters: σ₄ takes the principal arccosh, σ₆ and σ₂
//! are then signed to satisfy the sine rule, and finally all three even sides
//! are negated together if their real parts sum to a negative number. The
//! last step makes the result independent of which odd side is listed first.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::reduce_mod_2pi_i;

const SINH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    /// `sides[k]` is σ_{k+1}.
    pub sides: [C64; 6],
}

impl Hexagon {
    /// Side `n`, 1-based and taken mod 6.
    pub fn side(&self, n: isize) -> C64 {
        self.sides[(n - 1).rem_euclid(6) as usize]
    }

    /// Relabel so that side `k + 1` becomes side 1.
    pub fn rotated(&self, k: isize) -> Hexagon {
        let mut sides = [C64::new(0.0, 0.0); 6];
        for (j, s) in sides.iter_mut().enumerate() {
            *s = self.side(j as isize + 1 + k);
        }
        Hexagon { sides }
    }
}

fn checked_sinh(z: C64, side: usize) -> Result<C64> {
    let s = z.sinh();
    if s.norm() <= SINH_TOL {
        Err(Error::DegenerateSide {
            side,
            modulus: s.norm(),
        })
    } else {
        Ok(s)
    }
}

/// Pick `±w` whose sinh is closest to `target`.
fn signed_like(w: C64, target: C64) -> C64 {
    if (w.sinh() - target).norm() <= ((-w).sinh() - target).norm() {
        w
    } else {
        -w
    }
}

pub fn solve_hexagon(s1: C64, s3: C64, s5: C64) -> Result<Hexagon> {
    let (sh1, sh3, sh5) = (checked_sinh(s1, 1)?, checked_sinh(s3, 3)?, checked_sinh(s5, 5)?);
    let (ch1, ch3, ch5) = (s1.cosh(), s3.cosh(), s5.cosh());

    let s4 = ((ch1 - ch3 * ch5) / (sh3 * sh5)).acosh();
    let sh4 = checked_sinh(s4, 4)?;
    let s6 = signed_like(((ch3 - ch5 * ch1) / (sh5 * sh1)).acosh(), sh3 * sh4 / sh1);
    let s2 = signed_like(((ch5 - ch1 * ch3) / (sh1 * sh3)).acosh(), sh5 * sh4 / sh1);
    checked_sinh(s6, 6)?;
    checked_sinh(s2, 2)?;

    let mut even = [s2, s4, s6];
    if even.iter().map(|z| z.re).sum::<f64>() < 0.0 {
        for z in even.iter_mut() {
            *z = -*z;
        }
    }
    let [s2, s4, s6] = even.map(reduce_mod_2pi_i);
    Ok(Hexagon {
        sides: [
            reduce_mod_2pi_i(s1),
            s2,
            reduce_mod_2pi_i(s3),
            s4,
            reduce_mod_2pi_i(s5),
            s6,
        ],
    })
}

/// `(cosine_residual, sine_residual)`.
pub fn hexagon_residuals(h: &Hexagon) -> (f64, f64) {
    let cosine = (1..=6)
        .map(|n| {
            let (a, b, c, d) = (h.side(n), h.side(n + 1), h.side(n - 1), h.side(n + 3));
            (a.cosh() * b.sinh() * c.sinh() + b.cosh() * c.cosh() - d.cosh()).norm()
        })
        .fold(0.0, f64::max);
    let ratios = [
        h.side(1).sinh() / h.side(4).sinh(),
        h.side(3).sinh() / h.side(6).sinh(),
        h.side(5).sinh() / h.side(2).sinh(),
    ];
    let mut sine: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            sine = sine.max((ratios[i] - ratios[j]).norm());
        }
    }
    if !sine.is_finite() {
        sine = f64::INFINITY;
    }
    (cosine, sine)
}
