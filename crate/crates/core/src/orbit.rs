//! Covers up to sheet relabeling, and orbits of the mapping class group
//! acting on them through automorphisms of the surface group.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::MonodromyCover;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::presentation::{relator_preserved, Automorphism};

/// A cover in its canonical labeling together with the relabeling that
/// produced it from the input representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverClass {
    pub canonical: MonodromyCover,
    /// Conjugating every input image by `witness` yields `canonical`.
    pub witness: Perm,
}

struct Search<'a> {
    n: usize,
    images: &'a [Perm],
    label_of: Vec<usize>,
    sheet_of: Vec<usize>,
    assigned: usize,
    prefix: Vec<usize>,
    best: Option<(Vec<usize>, Vec<usize>)>,
    /// Bumped whenever `best` is replaced.
    version: usize,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    /// Lexicographic minimization over relabelings. Positions of the
    /// concatenated key are filled in order; a position whose source sheet has
    /// no label yet is the only branching point, and an unlabeled target always
    /// receives the next free label since any other choice is larger.
    /// `tight` means the prefix so far equals the best key's prefix.
    fn run(&mut self, pos: usize, tight: bool) {
        let total = self.n * self.images.len();
        if pos == total {
            if self.assigned < self.n {
                // No generators: the remaining sheets keep their order.
                let rest: Vec<usize> = (0..self.n).filter(|&s| self.label_of[s] == UNSET).collect();
                for s in rest {
                    self.assign(s);
                }
            }
            if tight && self.best.is_some() {
                return;
            }
            self.best = Some((self.prefix.clone(), self.label_of.clone()));
            self.version += 1;
            return;
        }
        let (g, i) = (pos / self.n, pos % self.n);
        if i == self.assigned {
            debug_assert_eq!(g, 0);
            let gen = &self.images[0];
            let free: Vec<usize> = (0..self.n).filter(|&s| self.label_of[s] == UNSET).collect();
            let has_fixed = free.iter().any(|&s| gen.apply(s) == s);
            let mut tight = tight;
            for s in free {
                if has_fixed && gen.apply(s) != s {
                    continue;
                }
                let mark = self.assigned;
                let version = self.version;
                self.assign(s);
                self.step(pos, tight);
                self.unassign_to(mark);
                // A new best found below shares this prefix.
                if self.version != version {
                    tight = true;
                }
            }
            return;
        }
        self.step(pos, tight);
    }

    fn step(&mut self, pos: usize, tight: bool) {
        let (g, i) = (pos / self.n, pos % self.n);
        let target = self.images[g].apply(self.sheet_of[i]);
        let mark = self.assigned;
        if self.label_of[target] == UNSET {
            self.assign(target);
        }
        let value = self.label_of[target];
        let mut tight_next = tight;
        if tight {
            if let Some((best, _)) = &self.best {
                match value.cmp(&best[pos]) {
                    std::cmp::Ordering::Greater => {
                        self.unassign_to(mark);
                        return;
                    }
                    std::cmp::Ordering::Less => tight_next = false,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        self.prefix.push(value);
        self.run(pos + 1, tight_next);
        self.prefix.pop();
        self.unassign_to(mark);
    }

    fn assign(&mut self, s: usize) {
        self.label_of[s] = self.assigned;
        self.sheet_of[self.assigned] = s;
        self.assigned += 1;
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.assigned > mark {
            self.assigned -= 1;
            let s = self.sheet_of[self.assigned];
            self.label_of[s] = UNSET;
            self.sheet_of[self.assigned] = UNSET;
        }
    }
}

/// Canonical representative of the relabeling class: the relabeling whose
/// concatenated image arrays are lexicographically least.
pub fn canonicalize(cover: &MonodromyCover) -> CoverClass {
    let n = cover.degree();
    let mut search = Search {
        n,
        images: cover.images(),
        label_of: vec![UNSET; n],
        sheet_of: vec![UNSET; n],
        assigned: 0,
        prefix: Vec::with_capacity(n * cover.images().len()),
        best: None,
        version: 0,
    };
    search.run(0, true);
    let (_, labels) = search.best.expect("at least one relabeling exists");
    let witness = Perm::new(labels).expect("search assigns every sheet exactly once");
    let canonical = cover.relabel(&witness).expect("witness has the cover's degree");
    CoverClass { canonical, witness }
}

/// Right action: the cover with images `ρ(f(x))` for each generator `x`.
pub fn act(cover: &MonodromyCover, f: &Automorphism) -> Result<MonodromyCover> {
    if f.signature() != cover.signature() {
        return Err(Error::AlphabetMismatch(format!(
            "automorphism {} is over {}, cover over {}",
            f.label(),
            f.signature(),
            cover.signature()
        )));
    }
    if !relator_preserved(f, cover.signature()) {
        return Err(Error::NotRelatorPreserving(f.label().to_string()));
    }
    let moved = act_unchecked(cover, f);
    MonodromyCover::new(moved.signature(), moved.degree(), moved.images().to_vec())
}

pub(crate) fn act_unchecked(cover: &MonodromyCover, f: &Automorphism) -> MonodromyCover {
    let images = f
        .images()
        .map(|(_, w)| cover.evaluate_unchecked(w))
        .collect();
    MonodromyCover::from_images_unchecked(cover.signature(), cover.degree(), images)
}

/// Applies `word` (indices into `gens`) left to right.
pub fn act_word(cover: &MonodromyCover, gens: &[Automorphism], word: &[usize]) -> Result<MonodromyCover> {
    let mut current = cover.clone();
    for &idx in word {
        let f = gens.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx,
            len: gens.len(),
        })?;
        current = act(&current, f)?;
    }
    Ok(current)
}

pub fn in_liftable_subgroup(cover: &MonodromyCover, f: &Automorphism) -> Result<bool> {
    let moved = act(cover, f)?;
    Ok(canonicalize(&moved).canonical == canonicalize(cover).canonical)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitEntry {
    #[serde(rename = "cover")]
    pub class: MonodromyCover,
    /// Automorphism labels, applied left to right to the base cover.
    pub transversal: Vec<String>,
    #[serde(skip)]
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitTable {
    pub classes: Vec<OrbitEntry>,
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, canonical: &MonodromyCover) -> bool {
        self.classes.iter().any(|e| &e.class == canonical)
    }
}

fn check_gens(cover: &MonodromyCover, gens: &[Automorphism]) -> Result<()> {
    for f in gens {
        if f.signature() != cover.signature() {
            return Err(Error::AlphabetMismatch(format!(
                "automorphism {} is over {}, cover over {}",
                f.label(),
                f.signature(),
                cover.signature()
            )));
        }
        if !relator_preserved(f, cover.signature()) {
            return Err(Error::NotRelatorPreserving(f.label().to_string()));
        }
    }
    Ok(())
}

/// Breadth-first orbit walk over canonical classes. Each BFS level is
/// expanded as one batch (in parallel when requested) and merged in
/// (parent, generator) order, so the table never depends on scheduling.
pub struct OrbitWalk<'a> {
    gens: &'a [Automorphism],
    limit: usize,
    parallel: bool,
    seen: HashMap<Vec<usize>, usize>,
    entries: Vec<OrbitEntry>,
    /// Entries before this index have had their children merged.
    expanded: usize,
    next: usize,
}

impl<'a> OrbitWalk<'a> {
    pub fn new(base: &MonodromyCover, gens: &'a [Automorphism], limit: usize, parallel: bool) -> Result<Self> {
        check_gens(base, gens)?;
        if limit == 0 {
            return Err(Error::OrbitLimitExceeded(limit));
        }
        let canonical = canonicalize(base).canonical;
        let mut seen = HashMap::new();
        seen.insert(canonical.key(), 0);
        Ok(OrbitWalk {
            gens,
            limit,
            parallel,
            seen,
            entries: vec![OrbitEntry {
                class: canonical,
                transversal: Vec::new(),
                word: Vec::new(),
            }],
            expanded: 0,
            next: 0,
        })
    }

    /// Returns the next class in BFS order, expanding a new level when the
    /// discovered classes run out.
    pub fn next_class(&mut self) -> Result<Option<&OrbitEntry>> {
        if self.next == self.entries.len() && self.expanded < self.entries.len() {
            self.expand_level()?;
        }
        if self.next == self.entries.len() {
            return Ok(None);
        }
        self.next += 1;
        Ok(Some(&self.entries[self.next - 1]))
    }

    fn expand_level(&mut self) -> Result<()> {
        let level = self.expanded..self.entries.len();
        let gens = self.gens;
        let child = |(parent, gi): (usize, usize), entries: &[OrbitEntry]| {
            canonicalize(&act_unchecked(&entries[parent].class, &gens[gi])).canonical
        };
        let jobs: Vec<(usize, usize)> = level
            .clone()
            .flat_map(|p| (0..gens.len()).map(move |g| (p, g)))
            .collect();
        let entries = &self.entries;
        let children: Vec<MonodromyCover> = if self.parallel {
            jobs.par_iter().map(|&job| child(job, entries)).collect()
        } else {
            jobs.iter().map(|&job| child(job, entries)).collect()
        };
        self.expanded = self.entries.len();
        for ((parent, gi), class) in jobs.into_iter().zip(children) {
            let key = class.key();
            if self.seen.contains_key(&key) {
                continue;
            }
            if self.entries.len() >= self.limit {
                return Err(Error::OrbitLimitExceeded(self.limit));
            }
            self.seen.insert(key, self.entries.len());
            let mut word = self.entries[parent].word.clone();
            word.push(gi);
            self.entries.push(OrbitEntry {
                class,
                transversal: word.iter().map(|&w| self.gens[w].label().to_string()).collect(),
                word,
            });
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<OrbitTable> {
        while self.next_class()?.is_some() {}
        Ok(OrbitTable {
            classes: self.entries,
        })
    }
}

/// The orbit of `base`'s class under the group generated by `gens`, which must
/// be closed under inverses. Transversal words are shortest in BFS order.
pub fn mcg_orbit(base: &MonodromyCover, gens: &[Automorphism], limit: usize) -> Result<OrbitTable> {
    OrbitWalk::new(base, gens, limit, true)?.finish()
}

pub fn mcg_orbit_sequential(base: &MonodromyCover, gens: &[Automorphism], limit: usize) -> Result<OrbitTable> {
    OrbitWalk::new(base, gens, limit, false)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::samples::{simple3, hyperelliptic};
    use crate::presentation::{braid_generators, half_twist, Generator, GroupWord, Signature};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Perm> {
        let mut out = vec![vec![]];
        for len in 0..n {
            let mut next = Vec::new();
            for prefix in &out {
                for x in 0..n {
                    if !prefix.contains(&x) {
                        let mut v: Vec<usize> = prefix.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
            out = next;
            let _ = len;
        }
        out.into_iter().map(|v| Perm::new(v).unwrap()).collect()
    }

    /// Oracle: minimum key over all n! relabelings.
    fn brute_canonical(c: &MonodromyCover) -> Vec<usize> {
        all_perms(c.degree())
            .iter()
            .map(|r| c.relabel(r).unwrap().key())
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let f = simple3();
        let r = p(&[2, 1, 0]);
        let g = f.relabel(&r).unwrap();
        assert_eq!(canonicalize(&f).canonical, canonicalize(&g).canonical);
        let class = canonicalize(&g);
        assert_eq!(g.relabel(&class.witness).unwrap(), class.canonical);
    }

    #[test]
    fn canonical_form_matches_brute_force() {
        let f = simple3();
        assert_eq!(canonicalize(&f).canonical.key(), brute_canonical(&f));
        let mut rng = StdRng::seed_from_u64(7);
        let mut checked = 0;
        for n in 1..=6 {
            for _ in 0..60 {
                let mut rand_perm = || {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut rng);
                    Perm::new(v).unwrap()
                };
                let (c1, c2, a) = (rand_perm(), rand_perm(), rand_perm());
                let c3 = c1.compose(&c2).unwrap().inverse();
                if let Ok(cover) = MonodromyCover::from_parts(0, n, &[], &[], &[c1.clone(), c2, c3]) {
                    assert_eq!(canonicalize(&cover).canonical.key(), brute_canonical(&cover));
                    checked += 1;
                }
                // Torus with one branch point: c = [a, b]⁻¹.
                let b = rand_perm();
                let comm = a.compose(&b).unwrap().compose(&a.inverse()).unwrap().compose(&b.inverse()).unwrap();
                if let Ok(cover) = MonodromyCover::from_parts(1, n, &[a], &[b], &[comm.inverse()]) {
                    assert_eq!(canonicalize(&cover).canonical.key(), brute_canonical(&cover));
                    checked += 1;
                }
            }
        }
        assert!(checked > 100, "only {checked} random covers were valid");
    }

    #[test]
    fn trivial_cover_is_its_own_canonical_form() {
        let sig = Signature::new(2, 0);
        let one = MonodromyCover::new(sig, 1, vec![Perm::identity(1); 4]).unwrap();
        assert_eq!(canonicalize(&one).canonical, one);
    }

    #[test]
    fn simple3_canonical_form_is_pinned() {
        let c = canonicalize(&simple3()).canonical;
        let pinned: Vec<Vec<usize>> = std::iter::repeat_n(vec![0, 2, 1], 2)
            .chain(std::iter::repeat_n(vec![1, 0, 2], 8))
            .collect();
        assert_eq!(c.to_raw().c, pinned);
    }

    #[test]
    fn act_examples() {
        let f = simple3();
        let sig = f.signature();
        assert_eq!(act(&f, &Automorphism::identity(sig)).unwrap(), f);
        let moved = act(&f, &half_twist(sig, 2).unwrap()).unwrap();
        assert_eq!(moved.c_image(2), &p(&[2, 1, 0]));
        assert_eq!(moved.c_image(3), &p(&[1, 0, 2]));
        let h = hyperelliptic(6).unwrap();
        assert_eq!(act(&h, &half_twist(h.signature(), 1).unwrap()).unwrap(), h);
    }

    #[test]
    fn act_rejects_bad_automorphisms() {
        let f = simple3();
        let bad = Automorphism::from_images(
            "bad",
            f.signature(),
            [(Generator::C(1), GroupWord::generator(Generator::C(2)))],
        )
        .unwrap();
        assert!(matches!(act(&f, &bad), Err(Error::NotRelatorPreserving(_))));
        let other = Automorphism::identity(Signature::new(0, 4));
        assert!(act(&f, &other).is_err());
    }

    #[test]
    fn right_action_law() {
        let f = simple3();
        let gens = braid_generators(f.signature()).unwrap();
        for a in &gens[..6] {
            for b in &gens[..6] {
                let stepwise = act(&act(&f, a).unwrap(), b).unwrap();
                let composed = act(&f, &a.compose(b).unwrap()).unwrap();
                assert_eq!(stepwise, composed);
            }
        }
    }

    #[test]
    fn liftable_subgroup_membership() {
        let f = simple3();
        let sig = f.signature();
        assert!(in_liftable_subgroup(&f, &Automorphism::identity(sig)).unwrap());
        assert!(!in_liftable_subgroup(&f, &half_twist(sig, 2).unwrap()).unwrap());
        let h = hyperelliptic(6).unwrap();
        assert!(in_liftable_subgroup(&h, &half_twist(h.signature(), 1).unwrap()).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let h = hyperelliptic(6).unwrap();
        let gens = braid_generators(h.signature()).unwrap();
        assert_eq!(mcg_orbit(&h, &gens, 100).unwrap().len(), 1);
        let table = mcg_orbit(&simple3(), &[], 100).unwrap();
        assert_eq!(table.len(), 1);
        assert!(table.classes[0].transversal.is_empty());
    }

    #[test]
    fn orbit_limit_aborts() {
        let f = simple3();
        let gens = braid_generators(f.signature()).unwrap();
        assert!(matches!(mcg_orbit(&f, &gens, 10), Err(Error::OrbitLimitExceeded(10))));
    }

    #[test]
    fn transversal_words_reach_their_classes() {
        let c = [p(&[1, 0, 2, 3]), p(&[0, 2, 1, 3]), p(&[0, 1, 3, 2]), p(&[0, 1, 3, 2])];
        let c4 = c[0].compose(&c[1]).unwrap().compose(&c[2]).unwrap().inverse();
        let base = MonodromyCover::from_parts(0, 4, &[], &[], &[c[0].clone(), c[1].clone(), c[2].clone(), c4]).unwrap();
        let gens = braid_generators(base.signature()).unwrap();
        let table = mcg_orbit(&base, &gens, 1000).unwrap();
        assert!(table.len() > 1);
        for e in &table.classes {
            let reached = act_word(&base, &gens, &e.word).unwrap();
            assert_eq!(canonicalize(&reached).canonical, e.class);
        }
        let seq = mcg_orbit_sequential(&base, &gens, 1000).unwrap();
        assert_eq!(seq, table);
    }
}
