//! Point clouds approximating the limit set: attracting fixed points of
//! the images of all freely reduced words up to a given length.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::moebius::{Kind, Moebius};
use crate::surface::{Letter, Representation, Word};

pub const DEDUP_RESOLUTION: f64 = 1e-10;

/// Letters in enumeration order: `x₀, x₀⁻¹, x₁, x₁⁻¹, …`.
fn alphabet(k: usize) -> Vec<Letter> {
    (0..k).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect()
}

/// Number of freely reduced words of length exactly `len` in `k` free
/// generators.
pub fn count_reduced_words(k: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    2 * k as u64 * (2 * k as u64 - 1).pow(len as u32 - 1)
}

/// Calls `visit(word, image)` for every nonempty freely reduced word of
/// length at most `max_len`, shortest first and lexicographically within
/// each length.
pub fn for_each_reduced_word(images: &[Moebius], max_len: usize, mut visit: impl FnMut(&Word, &Moebius)) {
    let letters = alphabet(images.len());
    let letter_image = |l: Letter| {
        if l.inverse {
            images[l.gen].inverse()
        } else {
            images[l.gen]
        }
    };
    let mut layer: Vec<(Word, Moebius)> = vec![(Word::empty(), Moebius::IDENTITY)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len().saturating_sub(1).max(1));
        for (w, m) in &layer {
            for &l in &letters {
                if w.letters().last() == Some(&l.inv()) {
                    continue;
                }
                let mut word = w.clone();
                word.0.push(l);
                let img = m.mul_raw(&letter_image(l));
                visit(&word, &img);
                next.push((word, img));
            }
        }
        layer = next;
    }
}

#[derive(Clone, Debug, Default)]
pub struct LimitSetCloud {
    pub points: Vec<C64>,
    pub word_lengths: Vec<usize>,
    pub words: Vec<Word>,
}

struct Grid {
    cells: HashMap<(i64, i64), Vec<usize>>,
    cell: f64,
}

impl Grid {
    fn key(&self, z: C64) -> (i64, i64) {
        ((z.re / self.cell).floor() as i64, (z.im / self.cell).floor() as i64)
    }

    fn near(&self, z: C64, points: &[C64], tol: f64) -> bool {
        let (i, j) = self.key(z);
        (i - 1..=i + 1).any(|a| {
            (j - 1..=j + 1).any(|b| {
                self.cells
                    .get(&(a, b))
                    .is_some_and(|v| v.iter().any(|&k| (points[k] - z).norm() <= tol))
            })
        })
    }

    fn insert(&mut self, z: C64, idx: usize) {
        let k = self.key(z);
        self.cells.entry(k).or_default().push(idx);
    }
}

impl LimitSetCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True if some point lies within `tol` of `z`.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.points.iter().any(|p| (p - z).norm() <= tol)
    }

    /// Index for repeated [`contains`](Self::contains) queries at a fixed
    /// tolerance.
    pub fn lookup(&self, tol: f64) -> impl Fn(C64) -> bool + '_ {
        let mut grid = Grid {
            cells: HashMap::new(),
            cell: tol.max(1e-300),
        };
        for (i, p) in self.points.iter().enumerate() {
            grid.insert(*p, i);
        }
        move |z| grid.near(z, &self.points, tol)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,word_length\n");
        for (p, n) in self.points.iter().zip(&self.word_lengths) {
            writeln!(out, "{:.15e},{:.15e},{n}", p.re, p.im).unwrap();
        }
        out
    }

    /// Points as circles of radius 0.5 on a canvas where the cloud's
    /// bounding box is 1000 units across, with a 5% margin.
    pub fn to_svg(&self) -> String {
        let finite: Vec<C64> = self.points.iter().copied().filter(|p| p.re.is_finite() && p.im.is_finite()).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &finite {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        if finite.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let scale = 1000.0 / span;
        let (w, h) = ((x1 - x0) * scale, (y1 - y0) * scale);
        let (mx, my) = (0.05 * w.max(1.0), 0.05 * h.max(1.0));
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.3} {:.3} {:.3} {:.3}\">",
            -mx,
            -my,
            w + 2.0 * mx,
            h + 2.0 * my
        )
        .unwrap();
        for p in &finite {
            // SVG's y axis points down.
            writeln!(
                out,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"0.5\"/>",
                (p.re - x0) * scale,
                (y1 - p.im) * scale
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Attracting fixed points of the loxodromic `ρ(w)` over reduced words
/// `w` with `1 ≤ |w| ≤ max_len`, deduplicated at [`DEDUP_RESOLUTION`],
/// keeping the first word in enumeration order. Points at infinity are
/// skipped.
pub fn limit_set(rep: &Representation, max_len: usize) -> LimitSetCloud {
    let mut cloud = LimitSetCloud::default();
    let mut grid = Grid {
        cells: HashMap::new(),
        cell: DEDUP_RESOLUTION,
    };
    for_each_reduced_word(rep.images(), max_len, |w, m| {
        if m.classify() != Kind::Loxodromic {
            return;
        }
        let Ok(fp) = m.fixed_points() else { return };
        let Some(z) = fp.attracting.to_complex() else { return };
        if !(z.re.is_finite() && z.im.is_finite()) || grid.near(z, &cloud.points, DEDUP_RESOLUTION) {
            return;
        }
        grid.insert(z, cloud.points.len());
        cloud.points.push(z);
        cloud.word_lengths.push(w.len());
        cloud.words.push(w.clone());
    });
    cloud
}

/// Cross-ratio `(a − c)(b − d) / ((a − d)(b − c))`; real iff the four
/// points are concyclic.
pub fn cross_ratio(a: C64, b: C64, c: C64, d: C64) -> C64 {
    (a - c) * (b - d) / ((a - d) * (b - c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{FnCoordinates, PantsGraph, Surface};

    #[test]
    fn counts_match_formula() {
        let images = vec![Moebius::IDENTITY; 4];
        let mut per_len = [0u64; 5];
        for_each_reduced_word(&images, 4, |w, _| {
            assert!(w.is_reduced());
            per_len[w.len()] += 1;
        });
        for n in 1..=4 {
            assert_eq!(per_len[n], count_reduced_words(4, n));
        }
        assert_eq!(count_reduced_words(4, 1), 8);
        assert_eq!(count_reduced_words(4, 3), 8 * 49);
    }

    #[test]
    fn length_one_cloud() {
        let s = Surface::new(PantsGraph::theta()).unwrap();
        let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
        let cloud = limit_set(&s.holonomy(&f).unwrap(), 1);
        assert!(cloud.len() <= 8 && cloud.len() >= 4);
        assert!(cloud.word_lengths.iter().all(|&n| n == 1));
    }

    #[test]
    fn fuchsian_points_are_concyclic() {
        let s = Surface::new(PantsGraph::theta()).unwrap();
        let f = FnCoordinates::real(&[2.0, 2.5, 3.0], &[0.3, -0.4, 0.1]).unwrap();
        let cloud = limit_set(&s.holonomy(&f).unwrap(), 3);
        let p = &cloud.points;
        let n = p.len();
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            let (a, b, c, d) = (p[i % n], p[(7 * i + 1) % n], p[(13 * i + 2) % n], p[(29 * i + 3) % n]);
            if (a - b).norm() * (a - c).norm() * (a - d).norm() * (b - c).norm() * (b - d).norm() * (c - d).norm() > 0.0 {
                worst = worst.max(cross_ratio(a, b, c, d).im.abs());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn csv_and_svg_shape() {
        let cloud = LimitSetCloud {
            points: vec![C64::new(0.0, 0.0), C64::new(1.0, 2.0)],
            word_lengths: vec![1, 2],
            words: vec![Word::empty(), Word::empty()],
        };
        let csv = cloud.to_csv();
        assert!(csv.starts_with("re,im,word_length\n"));
        assert_eq!(csv.lines().count(), 3);
        let svg = cloud.to_svg();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("r=\"0.5\""));
    }
}
