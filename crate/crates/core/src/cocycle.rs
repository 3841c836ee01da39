//! Tangent cocycles, the Goldman pairing and symplectic Gram matrices.
//!
//! A tangent vector at `ρ` is a crossed homomorphism `u : π → 𝔰𝔩₂(ℂ)`,
//! `u(γδ) = u(γ) + Ad_{ρ(γ)} u(δ)`, stored by its values on the generators.
//! Tangent vectors to the Fenchel–Nielsen chart are obtained by central
//! differences of the holonomy map.
//!
//! The pairing of two cocycles is the cup product evaluated on the
//! fundamental class of the one-relator presentation, with coefficients
//! paired by `B(X, Y) = tr(XY)`. For a relator `r = y₁ ⋯ y_m` with prefixes
//! `p_k` the Fox-calculus form of that evaluation is
//!
//! ```text
//! ω(u, v) = s · Σ_k ε_k tr( u(q_k) · Ad_{ρ(q_k)} v(x_k) )
//! ```
//!
//! where `y_k = x_k^{ε_k}`, `q_k = p_{k−1}` for `ε_k = +1` and `q_k = p_k`
//! for `ε_k = −1`, and `s = ±1` fixes the orientation.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::surface::{FnCoordinates, Presentation, Representation, Surface, Word};

/// Orientation sign of the fundamental class relative to the relator
/// `Π [aᵢ, bᵢ]`. Fixed once by requiring `ω(∂/∂l₁, ∂/∂τ₁) > 0` at the
/// Fuchsian point `l = (2, 2.5, 3)`, `τ = (0.3, −0.4, 0.1)` of the genus-2
/// theta graph.
pub const ORIENTATION_SIGN: f64 = 1.0;

pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Trace-free 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraElement(pub [C64; 4]);

impl LieAlgebraElement {
    pub const ZERO: LieAlgebraElement = LieAlgebraElement([C64::new(0.0, 0.0); 4]);

    /// Trace-free part of an arbitrary matrix.
    pub fn projected(m: [C64; 4]) -> Self {
        let h = (m[0] + m[3]) / 2.0;
        LieAlgebraElement([m[0] - h, m[1], m[2], m[3] - h])
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn add(&self, o: &Self) -> Self {
        LieAlgebraElement([0, 1, 2, 3].map(|k| self.0[k] + o.0[k]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        LieAlgebraElement([0, 1, 2, 3].map(|k| self.0[k] - o.0[k]))
    }

    pub fn scale(&self, s: C64) -> Self {
        LieAlgebraElement(self.0.map(|z| z * s))
    }

    /// `g X g⁻¹`.
    pub fn ad(&self, g: &Moebius) -> Self {
        let x = self.as_moebius();
        LieAlgebraElement(g.mul_raw(&x).mul_raw(&g.inverse()).entries())
    }

    /// `tr(XY)`.
    pub fn trace_pairing(&self, o: &Self) -> C64 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        a * e + b * g + c * f + d * h
    }

    pub fn norm_max(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn as_moebius(&self) -> Moebius {
        let [a, b, c, d] = self.0;
        Moebius { a, b, c, d }
    }
}

/// Values of a crossed homomorphism on the standard generators.
#[derive(Clone, Debug)]
pub struct TangentCocycle {
    base: Arc<Representation>,
    values: Vec<LieAlgebraElement>,
}

impl TangentCocycle {
    pub fn new(base: Arc<Representation>, values: Vec<LieAlgebraElement>) -> Self {
        assert_eq!(base.images().len(), values.len());
        TangentCocycle { base, values }
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn values(&self) -> &[LieAlgebraElement] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [LieAlgebraElement] {
        &mut self.values
    }

    /// `(u(w), ρ(w))` via the crossed-homomorphism rule.
    pub fn evaluate(&self, w: &Word) -> (LieAlgebraElement, Moebius) {
        crossed_eval(self.base.images(), &self.values, w)
    }

    pub fn linear_combination(terms: &[(C64, &TangentCocycle)]) -> Result<TangentCocycle> {
        let (_, first) = terms.first().expect("at least one term");
        let mut values = vec![LieAlgebraElement::ZERO; first.values.len()];
        for (c, u) in terms {
            if !same_base(&u.base, &first.base) {
                return Err(Error::BaseMismatch);
            }
            for (acc, x) in values.iter_mut().zip(&u.values) {
                *acc = acc.add(&x.scale(*c));
            }
        }
        Ok(TangentCocycle::new(Arc::clone(&first.base), values))
    }

    pub fn norm_max(&self) -> f64 {
        self.values.iter().map(|x| x.norm_max()).fold(0.0, f64::max)
    }
}

fn crossed_eval(images: &[Moebius], values: &[LieAlgebraElement], w: &Word) -> (LieAlgebraElement, Moebius) {
    let mut u = LieAlgebraElement::ZERO;
    let mut m = Moebius::IDENTITY;
    for l in w.letters() {
        let g = &images[l.gen];
        let (step, value) = if l.inverse {
            let gi = g.inverse();
            (gi, values[l.gen].ad(&gi).scale(C64::new(-1.0, 0.0)))
        } else {
            (*g, values[l.gen])
        };
        u = u.add(&value.ad(&m));
        m = m.mul_raw(&step);
    }
    (u, m)
}

fn same_base(a: &Representation, b: &Representation) -> bool {
    std::ptr::eq(a, b)
        || a.images()
            .iter()
            .zip(b.images())
            .all(|(x, y)| x.max_abs_diff(y) <= 1e-12)
            && a.images().len() == b.images().len()
}

type Builder<'a> = dyn Fn(&FnCoordinates) -> Result<Representation> + Sync + 'a;

/// Central-difference tangent cocycle of `build` along `direction`.
fn fd_cocycle_with(
    base: &Arc<Representation>,
    fn_: &FnCoordinates,
    direction: &[C64],
    h: f64,
    build: &Builder,
) -> Result<TangentCocycle> {
    let shift = |sign: f64| {
        let v: Vec<C64> = fn_
            .to_vec()
            .iter()
            .zip(direction)
            .map(|(x, d)| x + d * (sign * h))
            .collect();
        let n = v.len() / 2;
        FnCoordinates {
            l: v[..n].to_vec(),
            tau: v[n..].to_vec(),
        }
    };
    let plus = build(&shift(1.0))?;
    let minus = build(&shift(-1.0))?;
    let values = base
        .images()
        .iter()
        .zip(plus.images().iter().zip(minus.images()))
        .map(|(g, (p, m))| {
            let gi = g.inverse();
            let dp = p.mul_raw(&gi).entries();
            let dm = m.mul_raw(&gi).entries();
            LieAlgebraElement::projected([0, 1, 2, 3].map(|k| (dp[k] - dm[k]) / (2.0 * h)))
        })
        .collect();
    Ok(TangentCocycle::new(Arc::clone(base), values))
}

fn basis(dim: usize, k: usize) -> Vec<C64> {
    let mut d = vec![C64::new(0.0, 0.0); dim];
    d[k] = C64::new(1.0, 0.0);
    d
}

/// Tangent cocycle of the holonomy along coordinate `k` of
/// `(l₁, …, l_N, τ₁, …, τ_N)`, by central differences with step `h`.
/// The perturbed holonomies use the gauge of the base point.
pub fn fd_tangent_cocycle(surface: &Surface, fn_: &FnCoordinates, k: usize, h: f64) -> Result<TangentCocycle> {
    let base = Arc::new(surface.holonomy(fn_)?);
    let gauge = *base.gauge();
    let build = move |f: &FnCoordinates| surface.holonomy_with_gauge(f, &gauge);
    fd_cocycle_with(&base, fn_, &basis(2 * fn_.len(), k), h, &build)
}

/// `‖u(r)‖_max` for the relator `r`.
pub fn cocycle_residual(u: &TangentCocycle) -> f64 {
    u.evaluate(u.base.presentation().relator()).0.norm_max()
}

/// The principal crossed homomorphism `x ↦ Ad_{ρ(x)} w − w`.
pub fn coboundary(w: &LieAlgebraElement, rep: &Arc<Representation>) -> TangentCocycle {
    let values = rep.images().iter().map(|g| w.ad(g).sub(w)).collect();
    TangentCocycle::new(Arc::clone(rep), values)
}

/// Goldman pairing of two cocycles based at `rep`.
pub fn goldman_pairing(u: &TangentCocycle, v: &TangentCocycle, rep: &Representation) -> Result<C64> {
    if !same_base(&u.base, rep) || !same_base(&v.base, rep) {
        return Err(Error::BaseMismatch);
    }
    Ok(ORIENTATION_SIGN * fox_pairing(u, v, rep.presentation()))
}

fn fox_pairing(u: &TangentCocycle, v: &TangentCocycle, pres: &Presentation) -> C64 {
    let images = u.base.images();
    let mut total = C64::new(0.0, 0.0);
    let mut uu = LieAlgebraElement::ZERO;
    let mut m = Moebius::IDENTITY;
    for l in pres.relator().letters() {
        let g = &images[l.gen];
        if !l.inverse {
            total += uu.trace_pairing(&v.values[l.gen].ad(&m));
            uu = uu.add(&u.values[l.gen].ad(&m));
            m = m.mul_raw(g);
        } else {
            let gi = g.inverse();
            let step = u.values[l.gen].ad(&gi).scale(C64::new(-1.0, 0.0));
            uu = uu.add(&step.ad(&m));
            m = m.mul_raw(&gi);
            total -= uu.trace_pairing(&v.values[l.gen].ad(&m));
        }
    }
    total
}

/// Gram matrix of the Goldman pairing in the basis
/// `(∂/∂l₁, …, ∂/∂l_N, ∂/∂τ₁, …, ∂/∂τ_N)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymplecticGram {
    /// Antisymmetrized matrix `(G − Gᵀ)/2`, row-major.
    pub matrix: Vec<Vec<C64>>,
    /// `max |G + Gᵀ| / 2` of the raw matrix.
    pub raw_asymmetry: f64,
    /// Largest cocycle residual among the basis cocycles.
    pub max_cocycle_residual: f64,
    pub fd_step: f64,
}

impl SymplecticGram {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn n(&self) -> usize {
        self.matrix.len() / 2
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[i][j]
    }

    /// Scale `c` minimizing `‖G − cJ‖` in the Frobenius norm.
    pub fn fitted_scale(&self) -> C64 {
        let n = self.n();
        let s: C64 = (0..n).map(|i| self.matrix[i][n + i] - self.matrix[n + i][i]).sum();
        s / (2.0 * n as f64)
    }

    /// `‖G − cJ‖_max`.
    pub fn residual_against(&self, c: C64) -> f64 {
        let n = self.n();
        let mut r: f64 = 0.0;
        for i in 0..2 * n {
            for j in 0..2 * n {
                r = r.max((self.matrix[i][j] - c * canonical(n, i, j)).norm());
            }
        }
        r
    }

    /// Largest entry of the `l–l` and `τ–τ` blocks.
    pub fn block_residual(&self) -> f64 {
        let n = self.n();
        let mut r: f64 = 0.0;
        for i in 0..2 * n {
            for j in 0..2 * n {
                if (i < n) == (j < n) {
                    r = r.max(self.matrix[i][j].norm());
                }
            }
        }
        r
    }

    /// `max_{i,j} |G[τᵢ][j] + δ_{ij}|`: how far each `∂/∂τᵢ` row is from `−dlᵢ`.
    pub fn twist_row_residual(&self) -> f64 {
        let n = self.n();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..2 * n {
                let target = if j == i { -1.0 } else { 0.0 };
                r = r.max((self.matrix[n + i][j] - target).norm());
            }
        }
        r
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for row in self.matrix.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Entry `(i, j)` of `J = [[0, I], [−I, 0]]`.
pub fn canonical(n: usize, i: usize, j: usize) -> f64 {
    if i < n && j == i + n {
        1.0
    } else if i >= n && j + n == i {
        -1.0
    } else {
        0.0
    }
}

/// `‖G − J‖_max`.
pub fn darboux_residual(g: &SymplecticGram) -> f64 {
    g.residual_against(C64::new(1.0, 0.0))
}

fn gram_with(fn_: &FnCoordinates, h: f64, build: &Builder) -> Result<SymplecticGram> {
    let dim = 2 * fn_.len();
    let base = Arc::new(build(fn_)?);
    let cocycles: Vec<TangentCocycle> = (0..dim)
        .into_par_iter()
        .map(|k| fd_cocycle_with(&base, fn_, &basis(dim, k), h, build))
        .collect::<Result<_>>()?;
    let max_cocycle_residual = cocycles.iter().map(cocycle_residual).fold(0.0, f64::max);
    let raw: Vec<Vec<C64>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (0..dim)
                .map(|j| ORIENTATION_SIGN * fox_pairing(&cocycles[i], &cocycles[j], base.presentation()))
                .collect()
        })
        .collect();
    let mut matrix = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let mut raw_asymmetry: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            matrix[i][j] = (raw[i][j] - raw[j][i]) / 2.0;
            raw_asymmetry = raw_asymmetry.max(((raw[i][j] + raw[j][i]) / 2.0).norm());
        }
    }
    Ok(SymplecticGram {
        matrix,
        raw_asymmetry,
        max_cocycle_residual,
        fd_step: h,
    })
}

/// Gram matrix of the Goldman pairing on the Fenchel–Nielsen frame.
pub fn symplectic_gram(surface: &Surface, fn_: &FnCoordinates, h: f64) -> Result<SymplecticGram> {
    let gauge = *surface.holonomy(fn_)?.gauge();
    let build = move |f: &FnCoordinates| surface.holonomy_with_gauge(f, &gauge);
    gram_with(fn_, h, &build)
}

/// As [`symplectic_gram`], but the holonomy at every point (including the
/// finite-difference neighbours) is built in the gauge `gauge(fn)`.
pub fn symplectic_gram_with_gauge(
    surface: &Surface,
    fn_: &FnCoordinates,
    h: f64,
    gauge: &(dyn Fn(&FnCoordinates) -> Moebius + Sync),
) -> Result<SymplecticGram> {
    let build = |f: &FnCoordinates| surface.holonomy_with_gauge(f, &gauge(f));
    gram_with(fn_, h, &build)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::PantsGraph;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn setup() -> (Surface, FnCoordinates) {
        let s = Surface::new(PantsGraph::theta()).unwrap();
        let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
        (s, f)
    }

    #[test]
    fn empty_word_and_coboundary() {
        let (s, f) = setup();
        let u = fd_tangent_cocycle(&s, &f, 0, 1e-4).unwrap();
        assert_eq!(u.evaluate(&Word::empty()).0, LieAlgebraElement::ZERO);
        let rep = Arc::new(s.holonomy(&f).unwrap());
        let w = LieAlgebraElement([c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.0), c(-0.3, -0.1)]);
        let b = coboundary(&w, &rep);
        assert!(cocycle_residual(&b) < 1e-10);
        let z = coboundary(&LieAlgebraElement::ZERO, &rep);
        assert_eq!(z.norm_max(), 0.0);
    }

    #[test]
    fn fd_residual_is_second_order() {
        let (s, f) = setup();
        let r1 = cocycle_residual(&fd_tangent_cocycle(&s, &f, 0, 1e-3).unwrap());
        let r2 = cocycle_residual(&fd_tangent_cocycle(&s, &f, 0, 5e-4).unwrap());
        let ratio = r1 / r2;
        assert!((3.0..5.0).contains(&ratio), "{r1} {r2}");
    }

    #[test]
    fn zeroed_generator_breaks_cocycle() {
        let (s, f) = setup();
        let u = fd_tangent_cocycle(&s, &f, 0, 1e-4).unwrap();
        assert!(cocycle_residual(&u) < 1e-3);
        for g in 0..u.values().len() {
            let mut broken = u.clone();
            broken.values_mut()[g] = LieAlgebraElement::ZERO;
            assert!(cocycle_residual(&broken) > 1e3 * cocycle_residual(&u));
        }
    }

    #[test]
    fn twist_does_not_move_own_trace() {
        let (s, f) = setup();
        for i in 0..3 {
            let w = s.presentation().marking(i).clone();
            let dtau = fd_tangent_cocycle(&s, &f, 3 + i, 1e-4).unwrap();
            let (u, m) = dtau.evaluate(&w);
            let dtr = LieAlgebraElement(m.entries()).trace_pairing(&u);
            assert!(dtr.norm() < 1e-6, "{dtr}");
            // Length direction: d tr / dl = ∓ sinh(l/2) for the lift with tr = ∓2cosh(l/2).
            let dl = fd_tangent_cocycle(&s, &f, i, 1e-4).unwrap();
            let (u, m) = dl.evaluate(&w);
            let dtr = LieAlgebraElement(m.entries()).trace_pairing(&u);
            let half = f.l[i] / 2.0;
            let expected = half.sinh() * (m.trace() / half.cosh()) / 2.0;
            assert!((dtr - expected).norm() < 1e-6, "{dtr} vs {expected}");
        }
    }

    #[test]
    fn base_mismatch() {
        let (s, f) = setup();
        let u = fd_tangent_cocycle(&s, &f, 0, 1e-4).unwrap();
        let g = FnCoordinates::real(&[2.0, 2.5, 3.1], &[0.3, -0.4, 0.1]).unwrap();
        let other = s.holonomy(&g).unwrap();
        assert_eq!(goldman_pairing(&u, &u, &other), Err(Error::BaseMismatch));
    }

    #[test]
    fn gram_is_half_canonical_on_genus_two() {
        for g in [PantsGraph::theta(), PantsGraph::dumbbell()] {
            let s = Surface::new(g).unwrap();
            let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
            let gram = symplectic_gram(&s, &f, 1e-4).unwrap();
            let c = gram.fitted_scale();
            assert!((c - 0.5).norm() < 1e-5, "{c}");
            assert!(gram.residual_against(C64::new(0.5, 0.0)) < 1e-4);
            assert!(gram.raw_asymmetry < 1e-6);
            assert!(gram.block_residual() < 1e-4);
        }
    }

    #[test]
    fn orientation_is_positive_at_reference() {
        let (s, f) = setup();
        let rep = s.holonomy(&f).unwrap();
        let dl = fd_tangent_cocycle(&s, &f, 0, 1e-4).unwrap();
        let dt = fd_tangent_cocycle(&s, &f, 3, 1e-4).unwrap();
        assert!(goldman_pairing(&dl, &dt, &rep).unwrap().re > 0.0);
    }

    #[test]
    fn coboundaries_pair_to_zero() {
        let (s, f) = setup();
        let u = fd_tangent_cocycle(&s, &f, 1, 1e-4).unwrap();
        let rep = Arc::new((*u.base()).clone());
        let w = LieAlgebraElement::projected([c(0.2, -0.1), c(0.7, 0.3), c(-0.4, 0.0), c(0.1, 0.5)]);
        let b = coboundary(&w, &rep);
        let scale = u.norm_max() * b.norm_max();
        assert!(goldman_pairing(&u, &b, &rep).unwrap().norm() / scale < 1e-6);
        assert!(goldman_pairing(&b, &u, &rep).unwrap().norm() / scale < 1e-6);
    }
}
