//! Numerical Schwarzian derivative `Sf = f‴/f′ − (3/2)(f″/f′)²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::Moebius;

pub const CRITICAL_TOL: f64 = 1e-10;

type Func = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
type Derivs = Arc<dyn Fn(C64) -> [C64; 3] + Send + Sync>;

/// A holomorphic function on the disk `|z − center| < radius`, optionally
/// with exact first, second and third derivatives.
#[derive(Clone)]
pub struct HolomorphicSample {
    f: Func,
    derivs: Option<Derivs>,
    pub center: C64,
    pub radius: f64,
}

impl std::fmt::Debug for HolomorphicSample {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("HolomorphicSample")
            .field("center", &self.center)
            .field("radius", &self.radius)
            .field("exact_derivatives", &self.derivs.is_some())
            .finish()
    }
}

impl HolomorphicSample {
    pub fn new(f: impl Fn(C64) -> C64 + Send + Sync + 'static, center: C64, radius: f64) -> Self {
        HolomorphicSample {
            f: Arc::new(f),
            derivs: None,
            center,
            radius,
        }
    }

    pub fn with_derivatives(
        f: impl Fn(C64) -> C64 + Send + Sync + 'static,
        derivs: impl Fn(C64) -> [C64; 3] + Send + Sync + 'static,
        center: C64,
        radius: f64,
    ) -> Self {
        HolomorphicSample {
            f: Arc::new(f),
            derivs: Some(Arc::new(derivs)),
            center,
            radius,
        }
    }

    /// Drops the exact derivatives so that only the stencil is used.
    pub fn stencil_only(&self) -> Self {
        HolomorphicSample {
            derivs: None,
            ..self.clone()
        }
    }

    pub fn has_exact_derivatives(&self) -> bool {
        self.derivs.is_some()
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }

    pub fn moebius(m: Moebius, center: C64, radius: f64) -> Self {
        let Moebius { a, b, c, d } = m;
        let det = a * d - b * c;
        HolomorphicSample::with_derivatives(
            move |z| (a * z + b) / (c * z + d),
            move |z| {
                let q = c * z + d;
                let d1 = det / (q * q);
                let d2 = -2.0 * c * d1 / q;
                let d3 = -3.0 * c * d2 / q;
                [d1, d2, d3]
            },
            center,
            radius,
        )
    }

    pub fn exp(center: C64, radius: f64) -> Self {
        HolomorphicSample::with_derivatives(|z| z.exp(), |z| [z.exp(); 3], center, radius)
    }

    /// `Σ coeffs[k] z^k`.
    pub fn polynomial(coeffs: Vec<C64>, center: C64, radius: f64) -> Self {
        let c2 = coeffs.clone();
        HolomorphicSample::with_derivatives(
            move |z| coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c),
            move |z| {
                let mut out = [C64::new(0.0, 0.0); 3];
                for (order, slot) in out.iter_mut().enumerate() {
                    let order = order + 1;
                    let mut acc = C64::new(0.0, 0.0);
                    for k in (order..c2.len()).rev() {
                        let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
                        acc = acc * z + c2[k] * falling;
                    }
                    *slot = acc;
                }
                out
            },
            center,
            radius,
        )
    }

    /// `Σ coeffs[k] (z − center)^k`.
    pub fn taylor(coeffs: Vec<C64>, center: C64, radius: f64) -> Self {
        let p = HolomorphicSample::polynomial(coeffs, C64::new(0.0, 0.0), radius);
        let (f, d) = (Arc::clone(&p.f), Arc::clone(p.derivs.as_ref().expect("polynomials have derivatives")));
        HolomorphicSample::with_derivatives(move |z| f(z - center), move |z| d(z - center), center, radius)
    }

    /// `outer ∘ inner`, on the disk of `inner`.
    pub fn compose(outer: &HolomorphicSample, inner: &HolomorphicSample) -> Self {
        let (fo, fi) = (Arc::clone(&outer.f), Arc::clone(&inner.f));
        let f = move |z| fo(fi(z));
        match (&outer.derivs, &inner.derivs) {
            (Some(dg), Some(df)) => {
                let (dg, df, fi) = (Arc::clone(dg), Arc::clone(df), Arc::clone(&inner.f));
                HolomorphicSample::with_derivatives(
                    f,
                    move |z| {
                        let [f1, f2, f3] = df(z);
                        let [g1, g2, g3] = dg(fi(z));
                        [
                            g1 * f1,
                            g2 * f1 * f1 + g1 * f2,
                            g3 * f1 * f1 * f1 + 3.0 * g2 * f1 * f2 + g1 * f3,
                        ]
                    },
                    inner.center,
                    inner.radius,
                )
            }
            _ => HolomorphicSample::new(f, inner.center, inner.radius),
        }
    }

    /// `(f′, f″, f‴)` at `z0`: exact when available, otherwise from the
    /// default stencil.
    pub fn derivatives(&self, z0: C64) -> [C64; 3] {
        match &self.derivs {
            Some(d) => d(z0),
            None => self.stencil_derivatives(z0, Stencil::default()),
        }
    }

    /// Derivatives from the Taylor coefficients read off a ring of nodes
    /// `z0 + r·ωᵏ`, `ω = e^{2πi/N}`.
    pub fn stencil_derivatives(&self, z0: C64, stencil: Stencil) -> [C64; 3] {
        let (n, r) = match stencil {
            Stencil::FourPoint => (4, 1e-3 * self.radius),
            Stencil::Ring => (RING_NODES, RING_FRACTION * self.radius),
        };
        let nodes: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect();
        let values: Vec<C64> = nodes.iter().map(|w| (self.f)(z0 + w * r)).collect();
        let coeff = |order: i32| -> C64 {
            let s: C64 = nodes.iter().zip(&values).map(|(w, v)| v * w.powi(-order)).sum();
            s / (n as f64 * r.powi(order))
        };
        [coeff(1), coeff(2) * 2.0, coeff(3) * 6.0]
    }
}

pub const RING_NODES: usize = 32;
pub const RING_FRACTION: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    /// Four nodes `z0 ± h`, `z0 ± ih` with `h = 10⁻³·radius`; fourth-order
    /// in `h` but with third-derivative roundoff near `10⁻⁷·|f|`.
    FourPoint,
    /// [`RING_NODES`] nodes on the circle of radius `RING_FRACTION·radius`;
    /// the truncation error decays geometrically with the node count.
    #[default]
    Ring,
}

pub fn schwarzian_at(f: &HolomorphicSample, z0: C64) -> Result<C64> {
    let [d1, d2, d3] = f.derivatives(z0);
    if d1.norm() <= CRITICAL_TOL {
        return Err(Error::CriticalPoint(d1.norm()));
    }
    let r = d2 / d1;
    Ok(d3 / d1 - 1.5 * r * r)
}

/// `|S(g∘f)(z0) − Sf(z0) − Sg(f(z0))·f′(z0)²|`.
pub fn cocycle_check(f: &HolomorphicSample, g: &HolomorphicSample, z0: C64) -> Result<f64> {
    let gf = HolomorphicSample::compose(g, f);
    let lhs = schwarzian_at(&gf, z0)?;
    let sf = schwarzian_at(f, z0)?;
    let w = f.eval(z0);
    let sg = schwarzian_at(g, w)?;
    let f1 = f.derivatives(z0)[0];
    Ok((lhs - sf - sg * f1 * f1).norm())
}

/// Maxima of the three property checks over a seeded random sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub moebius_trials: usize,
    /// `max |Sf|` over random Möbius maps, exact derivatives.
    pub moebius_kernel: f64,
    /// Same maps, derivatives from the stencil only.
    pub moebius_kernel_stencil: f64,
    pub cocycle_trials: usize,
    /// `max` of [`cocycle_check`] over random pairs, stencil derivatives.
    pub cocycle: f64,
    /// `max |S(f∘λ)(z0) − λ² Sf(λz0)|`, stencil derivatives.
    pub chart_change: f64,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        self.moebius_kernel <= 1e-8 && self.cocycle <= 1e-6 && self.chart_change <= 1e-6
    }
}

fn random_c(rng: &mut impl Rng, r: f64) -> C64 {
    C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_moebius(rng: &mut impl Rng, z0: C64) -> (Moebius, f64) {
    loop {
        let [a, b, c, d] = [0; 4].map(|_| random_c(rng, 2.0));
        let Ok(m) = Moebius::new(a, b, c, d) else { continue };
        let q = m.c * z0 + m.d;
        if q.norm() < 0.5 {
            continue;
        }
        // Keep the pole outside the disk used by the stencil.
        let radius = if m.c.norm() > 0.0 { (0.5 * q.norm() / m.c.norm()).min(0.5) } else { 0.5 };
        return (m, radius);
    }
}

/// A random member of the test family, as a sample centred at `center`:
/// a cubic with `|f′(center)| ≥ 1` and small higher coefficients, `exp`,
/// or a Möbius map whose pole is kept away from `center`.
fn random_member(rng: &mut impl Rng, center: C64) -> HolomorphicSample {
    match rng.gen_range(0..3) {
        0 => {
            let a1 = C64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(-PI..PI));
            let coeffs = vec![random_c(rng, 1.0), a1, random_c(rng, 0.3), random_c(rng, 0.3)];
            HolomorphicSample::taylor(coeffs, center, 0.5)
        }
        1 => HolomorphicSample::exp(center, 0.5),
        _ => {
            let (m, radius) = random_moebius(rng, center);
            HolomorphicSample::moebius(m, center, radius)
        }
    }
}

pub fn property_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moebius_trials = 50;
    let cocycle_trials = 50;
    let mut kernel: f64 = 0.0;
    let mut kernel_stencil: f64 = 0.0;
    for _ in 0..moebius_trials {
        let z0 = random_c(&mut rng, 1.0);
        let (m, radius) = random_moebius(&mut rng, z0);
        let f = HolomorphicSample::moebius(m, z0, radius);
        kernel = kernel.max(schwarzian_at(&f, z0)?.norm());
        kernel_stencil = kernel_stencil.max(schwarzian_at(&f.stencil_only(), z0)?.norm());
    }
    let mut cocycle: f64 = 0.0;
    let mut chart: f64 = 0.0;
    for _ in 0..cocycle_trials {
        let z0 = random_c(&mut rng, 0.5);
        let f = random_member(&mut rng, z0);
        let g = random_member(&mut rng, f.eval(z0));
        cocycle = cocycle.max(cocycle_check(&f.stencil_only(), &g.stencil_only(), z0)?);

        let lambda = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
        let w0 = z0 / lambda;
        let scaling = HolomorphicSample::new(move |w| lambda * w, w0, f.radius / lambda.norm());
        let pulled = HolomorphicSample::compose(&f.stencil_only(), &scaling);
        let lhs = schwarzian_at(&pulled, w0)?;
        let rhs = lambda * lambda * schwarzian_at(&f.stencil_only(), z0)?;
        chart = chart.max((lhs - rhs).norm());
    }
    Ok(SuiteReport {
        seed,
        moebius_trials,
        moebius_kernel: kernel,
        moebius_kernel_stencil: kernel_stencil,
        cocycle_trials,
        cocycle,
        chart_change: chart,
    })
}
