//! Standard presentation `⟨a₁, b₁, …, a_g, b_g | Π [aᵢ, bᵢ]⟩` of the surface
//! group attached to a gluing graph, with a word for every decomposition curve.
//!
//! The construction starts from the obvious presentation of the graph of
//! groups: three cuff generators per pants and one stable letter per gluing
//! outside the spanning tree, with relators
//!
//! * `c₀ c₁ c₂` for each pants,
//! * `c c′` for each tree gluing,
//! * `t c′ t⁻¹ c` for each other gluing.
//!
//! All relators but the last are used to eliminate a generator (the one of
//! highest index occurring exactly once). The surviving relator is a
//! quadratic word; it is oriented consistently with the fundamental class
//! (pants cells counted `+1`, gluing cells `−1`) and then brought into
//! commutator normal form by the usual cut-and-paste substitutions.

use serde::{Deserialize, Serialize};

use super::graph::{CuffRef, PantsGraph};
use super::word::{commutator, Letter, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    genus: usize,
    names: Vec<String>,
    relator: Word,
    markings: Vec<Word>,
    /// Each standard generator as a word in the raw generators.
    defs: Vec<Word>,
    /// Pants in spanning-tree order.
    bfs_order: Vec<usize>,
    /// For each gluing, `Some(k)` if it is a tree edge whose end `k` is on
    /// the parent side.
    tree: Vec<Option<usize>>,
    /// For each non-tree gluing, the raw index of its stable letter.
    stable: Vec<Option<usize>>,
    num_raw: usize,
}

impl Presentation {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Word representing decomposition curve `i` (graph gluing order).
    pub fn marking(&self, i: usize) -> &Word {
        &self.markings[i]
    }

    pub fn markings(&self) -> &[Word] {
        &self.markings
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.names)
    }

    pub(crate) fn defs(&self) -> &[Word] {
        &self.defs
    }

    pub(crate) fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }

    pub(crate) fn tree(&self) -> &[Option<usize>] {
        &self.tree
    }

    pub(crate) fn stable(&self) -> &[Option<usize>] {
        &self.stable
    }

    pub(crate) fn num_raw(&self) -> usize {
        self.num_raw
    }

    pub(crate) fn raw_cuff(&self, c: CuffRef) -> usize {
        let slot = self
            .bfs_order
            .iter()
            .position(|&p| p == c.pants)
            .expect("pants in spanning tree");
        3 * slot + c.cuff
    }
}

fn internal(msg: &str) -> Error {
    Error::MalformedGraph(format!("presentation reduction failed: {msg}"))
}

/// For `w = A P B Q A⁻¹ R B⁻¹ S` (A at 0, B at `pb`, A⁻¹ at `span`), the raw
/// words of the new generators `z = Q⁻¹ R⁻¹ A` and `x = P B Q`.
fn split_move(w: &[Letter], span: usize, pb: usize, defs: &[Word]) -> Result<(Word, Word)> {
    let b = w[pb];
    let pbi = (span + 1..w.len())
        .find(|&p| w[p] == b.inv())
        .ok_or_else(|| internal("unlinked pair"))?;
    let p = Word(w[1..pb].to_vec());
    let q = Word(w[pb + 1..span].to_vec());
    let r = Word(w[span + 1..pbi].to_vec());
    let z = q.inverse().concat(&r.inverse()).concat(&Word::letter(w[0]));
    let x = p.concat(&Word::letter(b)).concat(&q);
    let in_raw = |word: &Word| word.substitute(&|g| defs[g].clone());
    Ok((in_raw(&z), in_raw(&x)))
}

pub fn build_presentation(graph: &PantsGraph) -> Result<Presentation> {
    let genus = graph.genus();
    let (bfs_order, tree) = graph.bfs();
    let m = bfs_order.len();
    let mut slot = vec![0; m];
    for (k, &p) in bfs_order.iter().enumerate() {
        slot[p] = k;
    }
    let cuff = |c: CuffRef| Letter::pos(3 * slot[c.pants] + c.cuff);

    let mut by_label: Vec<usize> = (0..graph.num_curves()).collect();
    by_label.sort_by(|&a, &b| graph.gluings()[a].curve.cmp(&graph.gluings()[b].curve));

    let mut stable = vec![None; graph.num_curves()];
    let mut num_raw = 3 * m;
    for &e in &by_label {
        if tree[e].is_none() {
            stable[e] = Some(num_raw);
            num_raw += 1;
        }
    }

    // Raw relators with their coefficient in the fundamental class.
    let mut relators: Vec<(Word, i32)> = Vec::new();
    for &p in &bfs_order {
        let w = (0..3).map(|k| cuff(CuffRef::new(p, k))).collect();
        relators.push((Word(w), 1));
    }
    let mut tree_edges: Vec<usize> = (0..graph.num_curves()).filter(|&e| tree[e].is_some()).collect();
    tree_edges.sort_by_key(|&e| {
        let child = graph.gluings()[e].ends[1 - tree[e].unwrap()].pants;
        slot[child]
    });
    for &e in &tree_edges {
        let side = tree[e].unwrap();
        let ends = graph.gluings()[e].ends;
        relators.push((Word(vec![cuff(ends[side]), cuff(ends[1 - side])]), -1));
    }
    for &e in &by_label {
        if let Some(t) = stable[e] {
            let [v, w] = graph.gluings()[e].ends;
            relators.push((
                Word(vec![Letter::pos(t), cuff(w), Letter::neg(t), cuff(v)]),
                -1,
            ));
        }
    }

    // Tietze elimination.
    let mut raw_in_current: Vec<Word> = (0..num_raw).map(|g| Word::letter(Letter::pos(g))).collect();
    let mut alive = vec![true; num_raw];
    let last = relators.len() - 1;
    for idx in 0..last {
        let r = relators[idx].0.reduced();
        let x = (0..num_raw)
            .rev()
            .find(|&g| r.occurrences(g) == 1)
            .ok_or_else(|| internal("no generator occurs exactly once"))?;
        let k = r.letters().iter().position(|l| l.gen == x).unwrap();
        let a = Word(r.letters()[..k].to_vec());
        let b = Word(r.letters()[k + 1..].to_vec());
        let image = if r.letters()[k].inverse {
            b.concat(&a)
        } else {
            a.inverse().concat(&b.inverse())
        };
        let sub = |g: usize| {
            if g == x {
                image.clone()
            } else {
                Word::letter(Letter::pos(g))
            }
        };
        for rel in relators.iter_mut().skip(idx + 1) {
            rel.0 = rel.0.substitute(&sub);
        }
        for w in raw_in_current.iter_mut() {
            *w = w.substitute(&sub);
        }
        alive[x] = false;
    }

    let (last_word, coeff) = relators[last].clone();
    let mut w = last_word.cyclically_reduced();
    if coeff < 0 {
        w = w.inverse();
    }

    // Renumber survivors 0..2g.
    let survivors: Vec<usize> = (0..num_raw).filter(|&g| alive[g]).collect();
    if survivors.len() != 2 * genus || w.len() != 4 * genus {
        return Err(internal("final relator has the wrong shape"));
    }
    let mut index = vec![usize::MAX; num_raw];
    for (k, &g) in survivors.iter().enumerate() {
        index[g] = k;
    }
    let renumber = |g: usize| Word::letter(Letter::pos(index[g]));
    let mut w = w.substitute(&renumber).0;
    let mut raw_in_current: Vec<Word> = raw_in_current.iter().map(|x| x.substitute(&renumber)).collect();
    let mut defs: Vec<Word> = survivors.iter().map(|&g| Word::letter(Letter::pos(g))).collect();
    let n = 2 * genus;
    for g in 0..n {
        let occ: Vec<&Letter> = w.iter().filter(|l| l.gen == g).collect();
        if occ.len() != 2 || occ[0].inverse == occ[1].inverse {
            return Err(internal("final relator is not an orientable quadratic word"));
        }
    }

    // Commutator normal form.
    let mut processed = vec![false; n];
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    while blocks.len() < genus {
        let len = w.len();
        // Candidate moves: a pair A…A⁻¹ read from either end, and a letter B
        // inside it whose inverse lies outside. Keep the move producing the
        // shortest new generators; ties go to the shortest span.
        let mut best: Option<((usize, usize, usize, usize, usize), usize)> = None;
        for g in (0..n).filter(|&g| !processed[g]) {
            let pos: Vec<usize> = (0..len).filter(|&p| w[p].gen == g).collect();
            for start in [pos[0], pos[1]] {
                let span = (pos[0] + pos[1] + len - 2 * start) % len;
                for pb in 1..span {
                    let bg = w[(start + pb) % len];
                    if processed[bg.gen] {
                        continue;
                    }
                    let outside = (span + 1..len).any(|p| w[(start + p) % len] == bg.inv());
                    if !outside {
                        continue;
                    }
                    let mut rot = w.clone();
                    rot.rotate_left(start);
                    let (zd, xd) = split_move(&rot, span, pb, &defs)?;
                    let key = (zd.len() + xd.len(), span, g, start, pb);
                    if best.map_or(true, |(k, _)| key < k) {
                        best = Some((key, start));
                    }
                }
            }
        }
        let ((_, span, _, _, pb), start) = best.ok_or_else(|| internal("no linked pair"))?;
        w.rotate_left(start);
        let a = w[0];
        let b = w[pb];
        let pbi = (span + 1..len).find(|&p| w[p] == b.inv()).unwrap();
        let p = Word(w[1..pb].to_vec());
        let q = Word(w[pb + 1..span].to_vec());
        let r = Word(w[span + 1..pbi].to_vec());
        let s = Word(w[pbi + 1..].to_vec());
        let (za, xb) = (a.gen, b.gen);
        let (zd, xd) = split_move(&w, span, pb, &defs)?;
        defs[za] = zd;
        defs[xb] = xd;

        let zw = Word::letter(Letter::pos(za));
        let xw = Word::letter(Letter::pos(xb));
        let a_image = r.concat(&q).concat(&zw).pow(a.exponent());
        let b_image = p.inverse().concat(&xw).concat(&q.inverse()).pow(b.exponent());
        let sub = |g: usize| {
            if g == za {
                a_image.clone()
            } else if g == xb {
                b_image.clone()
            } else {
                Word::letter(Letter::pos(g))
            }
        };
        for x in raw_in_current.iter_mut() {
            *x = x.substitute(&sub);
        }
        let mut next = commutator(za, xb).0;
        for part in [&p, &s, &r, &q] {
            next.extend_from_slice(part.letters());
        }
        w = Word(next).cyclically_reduced().0;
        if w.len() != len {
            return Err(internal("cancellation during normalization"));
        }
        processed[za] = true;
        processed[xb] = true;
        blocks.push((za, xb));
    }

    // Read off blocks in cyclic order and relabel as a₁, b₁, ….
    let first = w
        .iter()
        .position(|l| *l == Letter::pos(blocks[0].0) )
        .ok_or_else(|| internal("missing block"))?;
    w.rotate_left(first);
    let mut perm = vec![usize::MAX; n];
    for k in 0..genus {
        let quad = &w[4 * k..4 * k + 4];
        let (z, x) = (quad[0].gen, quad[1].gen);
        if Word(quad.to_vec()) != commutator(z, x) || !blocks.contains(&(z, x)) {
            return Err(internal("normal form is not a product of commutators"));
        }
        perm[z] = 2 * k;
        perm[x] = 2 * k + 1;
    }
    let relabel = |g: usize| Word::letter(Letter::pos(perm[g]));
    let relator = Word(w).substitute(&relabel);
    let mut final_defs = vec![Word::empty(); n];
    for g in 0..n {
        final_defs[perm[g]] = defs[g].clone();
    }
    let raw_in_final: Vec<Word> = raw_in_current.iter().map(|x| x.substitute(&relabel)).collect();

    let mut markings = Vec::with_capacity(graph.num_curves());
    for gl in graph.gluings() {
        let c = cuff(gl.ends[0]).gen;
        let word = raw_in_final[c].cyclically_reduced();
        if word.is_empty() {
            return Err(internal("trivial curve word"));
        }
        markings.push(word);
    }

    let names = (1..=genus)
        .flat_map(|k| [format!("a{k}"), format!("b{k}")])
        .collect();
    Ok(Presentation {
        genus,
        names,
        relator,
        markings,
        defs: final_defs,
        bfs_order,
        tree,
        stable,
        num_raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_relator(genus: usize) -> Word {
        let mut v = Vec::new();
        for k in 0..genus {
            v.extend(commutator(2 * k, 2 * k + 1).0);
        }
        Word(v)
    }

    #[test]
    fn theta_shape() {
        let p = build_presentation(&PantsGraph::theta()).unwrap();
        assert_eq!(p.num_generators(), 4);
        assert_eq!(p.relator().len(), 8);
        assert_eq!(p.relator(), &standard_relator(2));
        assert_eq!(p.markings().len(), 3);
        for w in p.markings() {
            assert!(!w.is_empty() && w.is_reduced());
        }
    }

    #[test]
    fn separating_curve_is_null_homologous() {
        let g = PantsGraph::dumbbell();
        let p = build_presentation(&g).unwrap();
        assert_eq!(p.relator(), &standard_relator(2));
        let sep = g.curve_index("c2").unwrap();
        assert!(p.marking(sep).abelianization(4).iter().all(|&x| x == 0));
        for k in [0, 2] {
            assert!(p.marking(k).abelianization(4).iter().any(|&x| x != 0));
        }
        let theta = build_presentation(&PantsGraph::theta()).unwrap();
        assert_ne!(theta.markings(), p.markings());
    }

    #[test]
    fn genus_three_shapes() {
        for g in [PantsGraph::chain(3).unwrap(), PantsGraph::k4()] {
            let p = build_presentation(&g).unwrap();
            assert_eq!(p.num_generators(), 6);
            assert_eq!(p.relator(), &standard_relator(3));
            assert_eq!(p.markings().len(), 6);
        }
    }

    #[test]
    fn higher_genus_chains() {
        for genus in 4..=6 {
            let p = build_presentation(&PantsGraph::chain(genus).unwrap()).unwrap();
            assert_eq!(p.relator(), &standard_relator(genus));
        }
    }

    #[test]
    fn deterministic() {
        let a = build_presentation(&PantsGraph::k4()).unwrap();
        let b = build_presentation(&PantsGraph::k4()).unwrap();
        assert_eq!(a, b);
    }
}
