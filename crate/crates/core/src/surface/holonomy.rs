use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::graph::{CuffRef, FnCoordinates, PantsGraph};
use super::presentation::{build_presentation, Presentation};
use super::word::Word;
use crate::error::{Error, Result};
use crate::moebius::{ComplexLength, Kind, Moebius};
use crate::pants::{pants_representation, translate, PantsBoundaryData, PantsRep};

/// Finite differences are only trusted this far from a branch jump.
pub const BRANCH_MARGIN: f64 = 1e-3;

/// Half-turn exchanging the two ends of the geodesic 0 → ∞.
const FLIP: Moebius = Moebius {
    a: C64::new(0.0, 0.0),
    b: C64::new(-1.0, 0.0),
    c: C64::new(1.0, 0.0),
    d: C64::new(0.0, 0.0),
};

/// A gluing graph together with its presentation; builds holonomies.
#[derive(Clone, Debug)]
pub struct Surface {
    graph: PantsGraph,
    presentation: Arc<Presentation>,
}

impl Surface {
    pub fn new(graph: PantsGraph) -> Result<Self> {
        let presentation = Arc::new(build_presentation(&graph)?);
        Ok(Surface {
            graph,
            presentation,
        })
    }

    pub fn graph(&self) -> &PantsGraph {
        &self.graph
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Holonomy in a balanced gauge: the representation is conjugated so
    /// that the generator matrices are as small as possible, which keeps
    /// long products accurate. The gauge used is recorded in the result.
    pub fn holonomy(&self, fn_: &FnCoordinates) -> Result<Representation> {
        let plain = self.holonomy_with_gauge(fn_, &Moebius::IDENTITY)?;
        let gauge = balancing_gauge(plain.images());
        self.holonomy_with_gauge(fn_, &gauge)
    }

    /// Holonomy with the root pants placed by `gauge` instead of the
    /// identity; the result is the plain holonomy conjugated by `gauge`.
    pub fn holonomy_with_gauge(&self, fn_: &FnCoordinates, gauge: &Moebius) -> Result<Representation> {
        let raw = self.raw_images(fn_, gauge)?;
        let images = self
            .presentation
            .defs()
            .iter()
            .map(|d| eval(&raw, d))
            .collect();
        Ok(Representation {
            presentation: Arc::clone(&self.presentation),
            images,
            gauge: *gauge,
        })
    }

    /// Images of the cuff generators and stable letters before reduction
    /// to the standard presentation.
    pub(crate) fn raw_images(&self, fn_: &FnCoordinates, gauge: &Moebius) -> Result<Vec<Moebius>> {
        let graph = &self.graph;
        let pres = &self.presentation;
        if fn_.len() != graph.num_curves() {
            return Err(Error::DegenerateFn(format!(
                "{} curves but {} coordinate pairs",
                graph.num_curves(),
                fn_.len()
            )));
        }
        for (k, l) in fn_.l.iter().enumerate() {
            if !(l.re > 0.0) {
                return Err(Error::DegenerateFn(format!(
                    "curve `{}` has length {l} with non-positive real part",
                    graph.gluings()[k].curve
                )));
            }
            if l.im.abs() > PI - BRANCH_MARGIN {
                return Err(Error::BranchFailure(format!(
                    "curve `{}`: Im(l) = {} is at the ±π cut",
                    graph.gluings()[k].curve,
                    l.im
                )));
            }
        }

        let m = graph.pants_ids().len();
        let mut pants: Vec<Option<PantsRep>> = vec![None; m];
        for (p, slot) in pants.iter_mut().enumerate() {
            let sigma = [0, 1, 2].map(|k| fn_.l[graph.curve_at(CuffRef::new(p, k))] / 2.0);
            let data = PantsBoundaryData::new(sigma).map_err(|e| Error::DegenerateFn(e.to_string()))?;
            let rep = pants_representation(&data).map_err(|e| match e {
                Error::DegenerateSide { .. } | Error::ReduciblePants | Error::InvalidPants(_) => {
                    Error::DegenerateFn(format!("pants `{}`: {e}", graph.pants_ids()[p]))
                }
                other => other,
            })?;
            if rep.branch_margin < BRANCH_MARGIN {
                return Err(Error::BranchFailure(format!(
                    "pants `{}`: seam branch margin {:.2e}",
                    graph.pants_ids()[p],
                    rep.branch_margin
                )));
            }
            *slot = Some(rep);
        }
        let pants: Vec<PantsRep> = pants.into_iter().map(Option::unwrap).collect();

        // Where the gluing across edge e puts pants ends[1 - from] relative
        // to the placement of pants ends[from].
        let across = |place: &Moebius, e: usize, from: usize| {
            let ends = graph.gluings()[e].ends;
            let (v, w) = (ends[from], ends[1 - from]);
            place
                .compose(&pants[v.pants].frames[v.cuff])
                .compose(&translate(fn_.tau[e]))
                .compose(&FLIP)
                .compose(&pants[w.pants].frames[w.cuff].inverse())
        };

        let mut place: Vec<Option<Moebius>> = vec![None; m];
        let order = pres.bfs_order();
        place[order[0]] = Some(*gauge);
        let tree = pres.tree();
        for &p in &order[1..] {
            let (e, side) = (0..graph.num_curves())
                .find_map(|e| {
                    tree[e].and_then(|side| {
                        (graph.gluings()[e].ends[1 - side].pants == p).then_some((e, side))
                    })
                })
                .expect("every non-root pants has a tree edge");
            let parent = graph.gluings()[e].ends[side].pants;
            let g = across(&place[parent].expect("parent placed first"), e, side);
            place[p] = Some(g);
        }
        let place: Vec<Moebius> = place.into_iter().map(Option::unwrap).collect();

        let mut raw = vec![Moebius::IDENTITY; pres.num_raw()];
        for p in 0..m {
            for k in 0..3 {
                raw[pres.raw_cuff(CuffRef::new(p, k))] = pants[p].cuffs[k].conjugated_by(&place[p]);
            }
        }
        for (e, st) in pres.stable().iter().enumerate() {
            if let Some(t) = st {
                let [v, w] = graph.gluings()[e].ends;
                let moved = across(&place[v.pants], e, 0);
                raw[*t] = moved.compose(&place[w.pants].inverse());
            }
        }

        Ok(raw)
    }
}

/// Conjugating gauge that makes `Σ ‖M g M⁻¹‖²_F` over the given matrices
/// (approximately) minimal: the base point moves to a spot in ℍ³ that is
/// moved as little as possible by all of them.
pub fn balancing_gauge(images: &[Moebius]) -> Moebius {
    let cost = |ms: &[Moebius]| -> f64 {
        ms.iter()
            .map(|m| m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    };
    let mut total = Moebius::IDENTITY;
    let mut cur: Vec<Moebius> = images.to_vec();
    let mut f = cost(&cur);
    let mut step = 0.25 / f.max(1.0);
    for _ in 0..200 {
        // Gradient at the current base point: Σ (g g* − g* g).
        let (mut ga, mut gb) = (0.0, C64::new(0.0, 0.0));
        for m in &cur {
            let [a, b, c, d] = m.entries();
            let gg11 = a.norm_sqr() + b.norm_sqr();
            let gsg11 = a.norm_sqr() + c.norm_sqr();
            let gg12 = a * c.conj() + b * d.conj();
            let gsg12 = a.conj() * b + c.conj() * d;
            ga += gg11 - gsg11;
            gb += gg12 - gsg12;
        }
        let gnorm = (ga * ga + gb.norm_sqr()).sqrt();
        if gnorm <= 1e-14 * f {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let m = hermitian_exp(-0.5 * step * ga, -0.5 * step * gb);
            let mi = m.inverse();
            let trial: Vec<Moebius> = cur.iter().map(|g| m.mul_raw(g).mul_raw(&mi)).collect();
            let ft = cost(&trial);
            if ft < f {
                cur = trial;
                total = m.mul_raw(&total);
                f = ft;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    total
}

/// `exp([[a, b], [b̄, −a]])`.
fn hermitian_exp(a: f64, b: C64) -> Moebius {
    let r = (a * a + b.norm_sqr()).sqrt();
    let (ch, sh) = (r.cosh(), if r > 0.0 { r.sinh() / r } else { 1.0 });
    Moebius {
        a: C64::new(ch + sh * a, 0.0),
        b: sh * b,
        c: sh * b.conj(),
        d: C64::new(ch - sh * a, 0.0),
    }
}

fn eval(images: &[Moebius], w: &Word) -> Moebius {
    w.letters().iter().fold(Moebius::IDENTITY, |acc, l| {
        let m = &images[l.gen];
        if l.inverse {
            acc.compose(&m.inverse())
        } else {
            acc.compose(m)
        }
    })
}

/// Images of the standard generators.
#[derive(Clone, Debug)]
pub struct Representation {
    presentation: Arc<Presentation>,
    images: Vec<Moebius>,
    gauge: Moebius,
}

impl Representation {
    pub fn new(presentation: Arc<Presentation>, images: Vec<Moebius>) -> Self {
        assert_eq!(presentation.num_generators(), images.len());
        Representation {
            presentation,
            images,
            gauge: Moebius::IDENTITY,
        }
    }

    /// Placement of the root pants used when this holonomy was built.
    pub fn gauge(&self) -> &Moebius {
        &self.gauge
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn presentation_arc(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn images(&self) -> &[Moebius] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &Moebius {
        &self.images[gen]
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<Moebius> {
        if let Some(l) = w.letters().iter().find(|l| l.gen >= self.images.len()) {
            return Err(Error::UnknownGenerator(format!("#{}", l.gen)));
        }
        Ok(eval(&self.images, w))
    }

    pub fn relator_residual(&self) -> f64 {
        eval(&self.images, self.presentation.relator()).distance_to_identity()
    }

    pub fn complex_length_of_curve(&self, w: &Word) -> Result<ComplexLength> {
        let m = self.evaluate_word(w)?;
        if m.classify() != Kind::Loxodromic {
            return Err(Error::NotLoxodromic);
        }
        m.complex_displacement()
    }

    /// Complex lengths of the decomposition curves, in graph order.
    pub fn decomposition_lengths(&self) -> Result<Vec<ComplexLength>> {
        self.presentation
            .markings()
            .iter()
            .map(|w| self.complex_length_of_curve(w))
            .collect()
    }

    pub fn conjugated_by(&self, m: &Moebius) -> Representation {
        Representation {
            presentation: Arc::clone(&self.presentation),
            images: self.images.iter().map(|x| x.conjugated_by(m)).collect(),
            gauge: m.compose(&self.gauge),
        }
    }

    /// Largest imaginary part of a generator entry after conjugating so that
    /// the axis of the first generator runs 0 → ∞ and the attracting fixed
    /// point of the second sits at 1. Vanishes exactly on Fuchsian points.
    pub fn fuchsian_residual(&self) -> f64 {
        let normal = (|| {
            let g0 = self.images[0].fixed_points().ok()?;
            let g1 = self.images[1].fixed_points().ok()?;
            Moebius::normalizing(g0.repelling, g1.attracting, g0.attracting).ok()
        })();
        match normal {
            Some(n) => self
                .images
                .iter()
                .map(|x| x.conjugated_by(&n).max_abs_imag())
                .fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn theta() -> Surface {
        Surface::new(PantsGraph::theta()).unwrap()
    }

    #[test]
    fn fuchsian_point_is_real() {
        let s = theta();
        let f = FnCoordinates::real(&[2.0, 2.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
        let rep = s.holonomy(&f).unwrap();
        assert!(rep.relator_residual() < 1e-9);
        for m in rep.images() {
            assert!(m.max_abs_imag() < 1e-9, "{m:?}");
        }
        assert!(rep.fuchsian_residual() < 1e-9);
    }

    #[test]
    fn round_trip_on_all_graphs() {
        let graphs = [
            PantsGraph::theta(),
            PantsGraph::dumbbell(),
            PantsGraph::k4(),
            PantsGraph::chain(3).unwrap(),
            PantsGraph::chain(4).unwrap(),
        ];
        for g in graphs {
            let n = g.num_curves();
            let l: Vec<C64> = (0..n).map(|k| c(1.5 + 0.3 * k as f64, 0.1 - 0.05 * k as f64)).collect();
            let t: Vec<C64> = (0..n).map(|k| c(0.2 * k as f64 - 0.3, 0.1)).collect();
            let f = FnCoordinates::new(l.clone(), t).unwrap();
            // Longer generator words in higher genus cost accuracy.
            let tol = if g.genus() == 2 { 1e-9 } else { 1e-6 };
            let s = Surface::new(g).unwrap();
            let rep = s.holonomy(&f).unwrap();
            assert!(rep.relator_residual() < tol, "{}", rep.relator_residual());
            for (k, len) in rep.decomposition_lengths().unwrap().iter().enumerate() {
                assert!((len.value() - l[k]).norm() < tol, "{k}: {len} vs {}", l[k]);
            }
        }
    }

    #[test]
    fn imaginary_twist_leaves_fuchsian_locus() {
        let s = theta();
        let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
        let base = s.holonomy(&f).unwrap();
        assert!(base.fuchsian_residual() < 1e-9);
        let bent = s.holonomy(&super::super::graph::twist_flow(&f, 0, c(0.0, 0.1))).unwrap();
        assert!(bent.fuchsian_residual() > 1e-3);
        let mut g = f.clone();
        g.l[0] += c(0.0, 0.1);
        assert!(s.holonomy(&g).unwrap().fuchsian_residual() > 1e-3);
    }

    #[test]
    fn gauge_conjugates() {
        let s = theta();
        let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
        let m = Moebius::new(c(1.0, 0.2), c(0.3, 0.0), c(-0.1, 0.5), c(0.9, -0.1)).unwrap();
        let a = s.holonomy_with_gauge(&f, &Moebius::IDENTITY).unwrap().conjugated_by(&m);
        let b = s.holonomy_with_gauge(&f, &m).unwrap();
        for (x, y) in a.images().iter().zip(b.images()) {
            assert!(x.max_abs_diff(y).min(x.max_abs_diff(&y.negated())) < 1e-10);
        }
    }

    #[test]
    fn branch_cut_is_reported() {
        let s = theta();
        let f = FnCoordinates::new(
            vec![c(2.0, PI - 1e-4), c(2.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0); 3],
        )
        .unwrap();
        assert!(matches!(s.holonomy(&f), Err(Error::BranchFailure(_))));
    }
}
