use std::collections::{BTreeSet, VecDeque};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cuff `cuff ∈ {0, 1, 2}` of pants number `pants`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuffRef {
    pub pants: usize,
    pub cuff: usize,
}

impl CuffRef {
    pub fn new(pants: usize, cuff: usize) -> Self {
        CuffRef { pants, cuff }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub curve: String,
    pub ends: [CuffRef; 2],
}

/// Trivalent gluing graph of a pants decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsGraph {
    genus: usize,
    pants: Vec<String>,
    gluings: Vec<Gluing>,
}

impl PantsGraph {
    pub fn new(genus: usize, pants: Vec<String>, gluings: Vec<Gluing>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::MalformedGraph(format!("genus {genus} < 2")));
        }
        if pants.len() != 2 * genus - 2 {
            return Err(Error::MalformedGraph(format!(
                "genus {genus} needs {} pants, found {}",
                2 * genus - 2,
                pants.len()
            )));
        }
        if gluings.len() != 3 * genus - 3 {
            return Err(Error::MalformedGraph(format!(
                "genus {genus} needs {} curves, found {}",
                3 * genus - 3,
                gluings.len()
            )));
        }
        let mut seen = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for g in &gluings {
            if !labels.insert(g.curve.as_str()) {
                return Err(Error::MalformedGraph(format!("curve `{}` listed twice", g.curve)));
            }
            for e in g.ends {
                if e.pants >= pants.len() || e.cuff > 2 {
                    return Err(Error::MalformedGraph(format!(
                        "curve `{}` refers to missing cuff ({}, {})",
                        g.curve, e.pants, e.cuff
                    )));
                }
                if !seen.insert(e) {
                    return Err(Error::MalformedGraph(format!(
                        "cuff ({}, {}) glued more than once",
                        e.pants, e.cuff
                    )));
                }
            }
        }
        let graph = PantsGraph {
            genus,
            pants,
            gluings,
        };
        if graph.bfs().0.len() != graph.pants.len() {
            return Err(Error::MalformedGraph("gluing graph is disconnected".into()));
        }
        Ok(graph)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn pants_ids(&self) -> &[String] {
        &self.pants
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn num_curves(&self) -> usize {
        self.gluings.len()
    }

    pub fn curve_index(&self, label: &str) -> Option<usize> {
        self.gluings.iter().position(|g| g.curve == label)
    }

    /// Curve glued to a given cuff.
    pub fn curve_at(&self, c: CuffRef) -> usize {
        self.gluings
            .iter()
            .position(|g| g.ends.contains(&c))
            .expect("every cuff is glued")
    }

    /// Breadth-first spanning tree from pants 0. Edges at each vertex are
    /// visited in lexicographic order of curve label. Returns the visiting
    /// order and, for every gluing, `Some(parent_end)` if it is a tree edge.
    pub fn bfs(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut order = vec![0];
        let mut visited = vec![false; self.pants.len()];
        let mut tree = vec![None; self.gluings.len()];
        visited[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut by_label: Vec<usize> = (0..self.gluings.len()).collect();
        by_label.sort_by(|&a, &b| self.gluings[a].curve.cmp(&self.gluings[b].curve));
        while let Some(v) = queue.pop_front() {
            for &e in &by_label {
                let ends = self.gluings[e].ends;
                for side in 0..2 {
                    let (here, there) = (ends[side], ends[1 - side]);
                    if here.pants == v && !visited[there.pants] {
                        visited[there.pants] = true;
                        tree[e] = Some(side);
                        order.push(there.pants);
                        queue.push_back(there.pants);
                    }
                }
            }
        }
        (order, tree)
    }

    /// Standard genus-2 graph: two pants joined along all three cuffs.
    pub fn theta() -> Self {
        let p = vec!["P".to_string(), "Q".to_string()];
        let g = (0..3)
            .map(|k| Gluing {
                curve: format!("c{}", k + 1),
                ends: [CuffRef::new(0, k), CuffRef::new(1, k)],
            })
            .collect();
        PantsGraph::new(2, p, g).expect("valid graph")
    }

    /// Genus 2 with a separating curve: each pants glued to itself, then the
    /// two remaining cuffs glued to each other.
    pub fn dumbbell() -> Self {
        let p = vec!["P".to_string(), "Q".to_string()];
        let g = vec![
            Gluing {
                curve: "c1".into(),
                ends: [CuffRef::new(0, 0), CuffRef::new(0, 1)],
            },
            Gluing {
                curve: "c2".into(),
                ends: [CuffRef::new(0, 2), CuffRef::new(1, 2)],
            },
            Gluing {
                curve: "c3".into(),
                ends: [CuffRef::new(1, 0), CuffRef::new(1, 1)],
            },
        ];
        PantsGraph::new(2, p, g).expect("valid graph")
    }

    /// Genus-g chain: handles at both ends, interior pants joined in a
    /// ladder with doubled rungs.
    pub fn chain(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::MalformedGraph(format!("genus {genus} < 2")));
        }
        let m = 2 * genus - 2;
        let pants = (0..m).map(|k| format!("P{k}")).collect();
        let mut g = Vec::new();
        let mut push = |a: CuffRef, b: CuffRef| {
            let n = g.len() + 1;
            g.push(Gluing {
                curve: format!("c{n:02}"),
                ends: [a, b],
            })
        };
        // Pants 0 and m-1 carry a handle; the rest form pairs joined twice.
        push(CuffRef::new(0, 0), CuffRef::new(0, 1));
        let mut prev = CuffRef::new(0, 2);
        let mut k = 1;
        while k + 1 < m {
            push(prev, CuffRef::new(k, 0));
            push(CuffRef::new(k, 1), CuffRef::new(k + 1, 0));
            push(CuffRef::new(k, 2), CuffRef::new(k + 1, 1));
            prev = CuffRef::new(k + 1, 2);
            k += 2;
        }
        push(prev, CuffRef::new(m - 1, 2));
        push(CuffRef::new(m - 1, 0), CuffRef::new(m - 1, 1));
        PantsGraph::new(genus, pants, g)
    }

    /// Genus 3 on the complete graph K₄.
    pub fn k4() -> Self {
        let pants = (0..4).map(|k| format!("P{k}")).collect();
        let mut next = [0usize; 4];
        let mut g = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let ea = CuffRef::new(a, next[a]);
                let eb = CuffRef::new(b, next[b]);
                next[a] += 1;
                next[b] += 1;
                g.push(Gluing {
                    curve: format!("c{a}{b}"),
                    ends: [ea, eb],
                });
            }
        }
        PantsGraph::new(3, pants, g).expect("valid graph")
    }
}

/// Complex Fenchel–Nielsen coordinates, indexed like the graph's gluings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnCoordinates {
    pub l: Vec<C64>,
    pub tau: Vec<C64>,
}

impl FnCoordinates {
    pub fn new(l: Vec<C64>, tau: Vec<C64>) -> Result<Self> {
        if l.len() != tau.len() {
            return Err(Error::DegenerateFn(format!(
                "{} lengths but {} twists",
                l.len(),
                tau.len()
            )));
        }
        for (k, x) in l.iter().enumerate() {
            if !(x.re > 0.0) || !x.im.is_finite() {
                return Err(Error::DegenerateFn(format!(
                    "curve {k}: length {x} has non-positive real part"
                )));
            }
        }
        if tau.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::DegenerateFn("non-finite twist".into()));
        }
        Ok(FnCoordinates { l, tau })
    }

    pub fn real(l: &[f64], tau: &[f64]) -> Result<Self> {
        Self::new(
            l.iter().map(|&x| C64::new(x, 0.0)).collect(),
            tau.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }

    /// `(l₁, …, l_N, τ₁, …, τ_N)`.
    pub fn to_vec(&self) -> Vec<C64> {
        self.l.iter().chain(self.tau.iter()).copied().collect()
    }

    pub fn from_vec(v: &[C64]) -> Result<Self> {
        let n = v.len() / 2;
        Self::new(v[..n].to_vec(), v[n..].to_vec())
    }

    /// Move by `step` along coordinate `k` of [`to_vec`](Self::to_vec),
    /// skipping validation.
    pub fn shifted(&self, k: usize, step: C64) -> Self {
        let mut out = self.clone();
        let n = self.len();
        if k < n {
            out.l[k] += step;
        } else {
            out.tau[k - n] += step;
        }
        out
    }
}

/// Twist along curve `i` by `t`; every other coordinate is unchanged.
pub fn twist_flow(fn_: &FnCoordinates, i: usize, t: C64) -> FnCoordinates {
    let mut out = fn_.clone();
    out.tau[i] += t;
    out
}
