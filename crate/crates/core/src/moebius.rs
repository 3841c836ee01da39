//! SL₂(ℂ) lifts of Möbius maps, points of ℂP¹, oriented geodesics of ℍ³,
//! complex displacement and complex distance.
//!
//! Matrices are always stored with unit determinant. Trace formulas fix the
//! PSL₂ sign ambiguity by flipping the lift so that `Re(tr) >= 0` before
//! solving `2 cosh(φ/2) = tr`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for classification and degeneracy checks.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Endpoints closer than this (chordal metric) are treated as coincident.
pub const ENDPOINT_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Reduce the imaginary part into `(-π, π]`.
pub fn reduce_mod_2pi_i(z: C64) -> C64 {
    let two_pi = 2.0 * PI;
    let mut im = z.im - two_pi * ((z.im + PI) / two_pi).floor();
    // floor puts im in [-π, π); move the left end to the right.
    if im <= -PI {
        im += two_pi;
    }
    C64::new(z.re, im)
}

/// Complex length of a loxodromic or elliptic element, or complex distance
/// between geodesics: real part is a translation length, imaginary part a
/// rotation angle. Defined modulo `2πiℤ` and up to sign; the stored
/// representative has `Re >= 0` and `Im ∈ (-π, π]` (for `Re = 0`, `Im >= 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLength(C64);

impl ComplexLength {
    pub fn normalized(z: C64) -> Self {
        let mut w = reduce_mod_2pi_i(z);
        if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
            w = reduce_mod_2pi_i(-w);
        }
        ComplexLength(w)
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    /// Distance to another length, measured modulo `2πi`.
    pub fn distance(self, other: ComplexLength) -> f64 {
        reduce_mod_2pi_i(self.0 - other.0).norm()
    }
}

impl fmt::Display for ComplexLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}{:+.12}i", self.0.re, self.0.im)
    }
}

/// A point `(z : w)` of ℂP¹, stored with `max(|z|, |w|) = 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProjectivePoint {
    z: C64,
    w: C64,
}

impl ProjectivePoint {
    pub fn new(z: C64, w: C64) -> Result<Self> {
        let scale = z.norm().max(w.norm());
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::DegenerateGeodesic(0.0));
        }
        Ok(ProjectivePoint {
            z: z / scale,
            w: w / scale,
        })
    }

    pub fn from_complex(z: C64) -> Self {
        Self::new(z, ONE).expect("finite affine point")
    }

    pub fn infinity() -> Self {
        ProjectivePoint { z: ONE, w: ZERO }
    }

    pub fn homogeneous(self) -> (C64, C64) {
        (self.z, self.w)
    }

    /// Affine coordinate, `None` at (or numerically at) infinity.
    pub fn to_complex(self) -> Option<C64> {
        if self.w.norm() <= f64::EPSILON * self.z.norm() {
            None
        } else {
            Some(self.z / self.w)
        }
    }

    /// Chordal distance: sine of the angle between the two lines in ℂ².
    pub fn chordal_distance(self, other: ProjectivePoint) -> f64 {
        let cross = (self.z * other.w - self.w * other.z).norm();
        let n1 = (self.z.norm_sqr() + self.w.norm_sqr()).sqrt();
        let n2 = (other.z.norm_sqr() + other.w.norm_sqr()).sqrt();
        cross / (n1 * n2)
    }

    pub fn approx_eq(self, other: ProjectivePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(*other, ENDPOINT_TOL)
    }
}

/// Geodesic of ℍ³ given by its ideal endpoints, oriented from `repelling`
/// to `attracting`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedGeodesic {
    pub repelling: ProjectivePoint,
    pub attracting: ProjectivePoint,
}

impl OrientedGeodesic {
    pub fn new(repelling: ProjectivePoint, attracting: ProjectivePoint) -> Result<Self> {
        let gap = repelling.chordal_distance(attracting);
        if gap <= ENDPOINT_TOL {
            return Err(Error::DegenerateGeodesic(gap));
        }
        Ok(OrientedGeodesic {
            repelling,
            attracting,
        })
    }

    pub fn from_complex(repelling: C64, attracting: C64) -> Result<Self> {
        Self::new(
            ProjectivePoint::from_complex(repelling),
            ProjectivePoint::from_complex(attracting),
        )
    }

    pub fn reversed(self) -> Self {
        OrientedGeodesic {
            repelling: self.attracting,
            attracting: self.repelling,
        }
    }

    pub fn approx_eq(&self, other: &OrientedGeodesic, tol: f64) -> bool {
        self.repelling.approx_eq(other.repelling, tol)
            && self.attracting.approx_eq(other.attracting, tol)
    }

    /// Trace-free matrix of the half-turn about this geodesic, scaled so
    /// that its square is the identity.
    fn involution(&self) -> [C64; 4] {
        let (r0, r1) = self.repelling.homogeneous();
        let (a0, a1) = self.attracting.homogeneous();
        let gap = a0 * r1 - r0 * a1;
        let p = (a0 * r1 + r0 * a1) / gap;
        [p, -2.0 * a0 * r0 / gap, 2.0 * a1 * r1 / gap, -p]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Unit-determinant 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Moebius {
    pub const IDENTITY: Moebius = Moebius {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Build from entries, rescaling to unit determinant.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-14 * scale * scale) {
            return Err(Error::SingularMatrix(det.norm()));
        }
        let s = det.sqrt();
        Ok(Moebius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// `diag(λ, 1/λ)`.
    pub fn diagonal(lambda: C64) -> Self {
        Moebius {
            a: lambda,
            b: ZERO,
            c: ZERO,
            d: lambda.inv(),
        }
    }

    /// Pure translation along the geodesic 0 → ∞ with complex displacement `phi`.
    pub fn translation(phi: C64) -> Self {
        Self::diagonal((phi / 2.0).exp())
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Moebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The other SL₂ lift of the same Möbius map.
    pub fn negated(&self) -> Self {
        Moebius {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// Plain matrix product without renormalization.
    pub fn mul_raw(&self, o: &Moebius) -> Moebius {
        Moebius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Matrix product renormalized to unit determinant.
    pub fn compose(&self, o: &Moebius) -> Moebius {
        let m = self.mul_raw(o);
        let s = m.det().sqrt();
        Moebius {
            a: m.a / s,
            b: m.b / s,
            c: m.c / s,
            d: m.d / s,
        }
    }

    /// `m · self · m⁻¹`.
    pub fn conjugated_by(&self, m: &Moebius) -> Moebius {
        m.compose(self).compose(&m.inverse())
    }

    pub fn max_abs_diff(&self, o: &Moebius) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// `‖A − I‖_max`.
    pub fn distance_to_identity(&self) -> f64 {
        self.max_abs_diff(&Moebius::IDENTITY)
    }

    /// Distance to `±I`, the identity of PSL₂.
    pub fn projective_distance_to_identity(&self) -> f64 {
        self.distance_to_identity()
            .min(self.negated().distance_to_identity())
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn apply(&self, p: ProjectivePoint) -> ProjectivePoint {
        let (z, w) = p.homogeneous();
        ProjectivePoint::new(self.a * z + self.b * w, self.c * z + self.d * w)
            .expect("invertible matrix maps nonzero vectors to nonzero vectors")
    }

    pub fn apply_geodesic(&self, g: &OrientedGeodesic) -> OrientedGeodesic {
        OrientedGeodesic {
            repelling: self.apply(g.repelling),
            attracting: self.apply(g.attracting),
        }
    }

    pub fn classify(&self) -> Kind {
        self.classify_with_tol(CLASSIFY_TOL)
    }

    pub fn classify_with_tol(&self, tol: f64) -> Kind {
        if self.projective_distance_to_identity() <= tol {
            return Kind::Identity;
        }
        let t = self.trace();
        if (t * t - 4.0).norm() <= tol {
            Kind::Parabolic
        } else if t.im.abs() <= tol && t.re.abs() < 2.0 {
            Kind::Elliptic
        } else {
            Kind::Loxodromic
        }
    }

    /// Trace of the lift with `Re(tr) >= 0` (ties broken by `Im(tr) >= 0`).
    pub fn normalized_trace(&self) -> C64 {
        let t = self.trace();
        if t.re < 0.0 || (t.re == 0.0 && t.im < 0.0) {
            -t
        } else {
            t
        }
    }

    /// Complex displacement `φ` with `2 cosh(φ/2) = ±tr`.
    pub fn complex_displacement(&self) -> Result<ComplexLength> {
        match self.classify() {
            Kind::Identity | Kind::Parabolic => Err(Error::ParabolicOrIdentity),
            _ => Ok(ComplexLength::normalized(
                2.0 * (self.normalized_trace() / 2.0).acosh(),
            )),
        }
    }

    /// Repelling and attracting fixed points of a loxodromic element.
    pub fn fixed_points(&self) -> Result<OrientedGeodesic> {
        if self.classify() != Kind::Loxodromic {
            return Err(Error::NotLoxodromic);
        }
        let t = self.trace();
        let disc = (t * t - 4.0).sqrt();
        let mut lam_att = (t + disc) / 2.0;
        let mut lam_rep = (t - disc) / 2.0;
        if lam_att.norm() < lam_rep.norm() {
            std::mem::swap(&mut lam_att, &mut lam_rep);
        }
        let attracting = self.eigenline(lam_att)?;
        let repelling = self.eigenline(lam_rep)?;
        OrientedGeodesic::new(repelling, attracting)
    }

    fn eigenline(&self, lambda: C64) -> Result<ProjectivePoint> {
        let v1 = (self.b, lambda - self.a);
        let v2 = (lambda - self.d, self.c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        if n1 >= n2 {
            ProjectivePoint::new(v1.0, v1.1)
        } else {
            ProjectivePoint::new(v2.0, v2.1)
        }
    }

    /// Möbius map sending `p0, p1, p2` to `0, 1, ∞`.
    pub fn normalizing(p0: ProjectivePoint, p1: ProjectivePoint, p2: ProjectivePoint) -> Result<Self> {
        let (z0, w0) = p0.homogeneous();
        let (z1, w1) = p1.homogeneous();
        let (z2, w2) = p2.homogeneous();
        // z ↦ (z - p0)(p1 - p2) / ((z - p2)(p1 - p0)) in homogeneous form.
        let k0 = z1 * w2 - z2 * w1;
        let k2 = z1 * w0 - z0 * w1;
        Moebius::new(w0 * k0, -z0 * k0, w2 * k2, -z2 * k2)
    }
}

impl Mul for Moebius {
    type Output = Moebius;
    fn mul(self, rhs: Moebius) -> Moebius {
        self.compose(&rhs)
    }
}

impl Mul for &Moebius {
    type Output = Moebius;
    fn mul(self, rhs: &Moebius) -> Moebius {
        self.compose(rhs)
    }
}

/// Complex distance between two oriented geodesics.
///
/// The common perpendicular is moved to 0 ↔ ∞, which puts the geodesics at
/// `(-u, u)` and `(-p, p)`; the result is `±log(p/u)` with the sign chosen to
/// make the real part non-negative. Coincident geodesics give `0` (same
/// orientation) or `iπ` (opposite orientation).
pub fn complex_distance(g1: &OrientedGeodesic, g2: &OrientedGeodesic) -> Result<ComplexLength> {
    if g1.approx_eq(g2, ENDPOINT_TOL) {
        return Ok(ComplexLength::normalized(ZERO));
    }
    if g1.approx_eq(&g2.reversed(), ENDPOINT_TOL) {
        return Ok(ComplexLength::normalized(C64::new(0.0, PI)));
    }
    for p in [g1.repelling, g1.attracting] {
        for q in [g2.repelling, g2.attracting] {
            if p.chordal_distance(q) <= ENDPOINT_TOL {
                return Err(Error::SharedEndpoint);
            }
        }
    }
    let l1 = g1.involution();
    let l2 = g2.involution();
    let prod = |x: &[C64; 4], y: &[C64; 4]| {
        [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ]
    };
    let p12 = prod(&l1, &l2);
    let p21 = prod(&l2, &l1);
    let k: Vec<C64> = p12.iter().zip(p21.iter()).map(|(x, y)| x - y).collect();
    // Fixed points of the trace-free matrix k: k21 z² - 2 k11 z - k12 = 0.
    let (k11, k12, k21) = (k[0], k[1], k[2]);
    let root = (k11 * k11 + k12 * k21).sqrt();
    let perp0 = ProjectivePoint::new(k11 + root, k21)
        .or_else(|_| ProjectivePoint::new(k12, root - k11))?;
    let perp1 = ProjectivePoint::new(k11 - root, k21)
        .or_else(|_| ProjectivePoint::new(k12, -root - k11))?;
    if perp0.chordal_distance(perp1) <= ENDPOINT_TOL {
        return Err(Error::SharedEndpoint);
    }
    // Any third point works for the normalization; only ratios p/u matter.
    let third = if perp0.chordal_distance(g1.attracting) > 1e-6
        && perp1.chordal_distance(g1.attracting) > 1e-6
    {
        g1.attracting
    } else {
        ProjectivePoint::from_complex(C64::new(0.3141, 0.2718))
    };
    let m = Moebius::normalizing(perp0, third, perp1)?;
    let u = m
        .apply(g1.attracting)
        .to_complex()
        .ok_or(Error::SharedEndpoint)?;
    let p = m
        .apply(g2.attracting)
        .to_complex()
        .ok_or(Error::SharedEndpoint)?;
    Ok(ComplexLength::normalized((p / u).ln()))
}
