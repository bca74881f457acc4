//! Permutations of the sheet set `{0, .., n-1}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation stored as its image array: entry `i` is the image of sheet `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    /// Builds a permutation from an image array, rejecting anything that is not
    /// a bijection of `{0, .., n-1}`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// The transposition swapping `a` and `b` in degree `n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n || a == b {
            return Err(Error::NotAPermutation(format!("({a} {b}) in degree {n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Perm { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles. Sheets not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x >= n || touched[x] {
                    return Err(Error::NotAPermutation(format!("cycles {cycles:?}")));
                }
                touched[x] = true;
                images[x] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, the map `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Perm { images }
    }

    /// `r ∘ self ∘ r⁻¹`: the same permutation after renaming sheet `s` to `r(s)`.
    pub fn conjugate_by(&self, r: &Perm) -> Perm {
        let mut images = vec![0; self.degree()];
        for (s, &t) in self.images.iter().enumerate() {
            images[r.apply(s)] = r.apply(t);
        }
        Perm { images }
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }

    pub fn is_transposition(&self) -> bool {
        let moved = self.degree() - self.fixed_points();
        moved == 2
    }

    pub fn cycles(&self) -> CycleSet {
        cycles(self)
    }

    /// Restricts to an invariant subset and counts the cycles there.
    pub(crate) fn cycle_count_on(&self, subset: &[usize]) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for &s in subset {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    /// Cycle notation, fixed points omitted; the identity prints as `()`.
    pub fn cycle_notation(&self) -> String {
        let nontrivial: Vec<_> = self
            .cycles()
            .cycles
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect();
        if nontrivial.is_empty() {
            return "()".to_string();
        }
        nontrivial.iter().map(|c| format_cycle(c)).collect()
    }
}

pub(crate) fn format_cycle(cycle: &[usize]) -> String {
    let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(" "))
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Perm::new(images).map_err(serde::de::Error::custom)
    }
}

/// Disjoint cycle decomposition. Each cycle starts at its least element and
/// cycles are sorted by that element; fixed points are kept as 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CycleSet {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Index of the cycle containing each sheet.
    pub fn membership(&self, n: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; n];
        for (idx, cycle) in self.cycles.iter().enumerate() {
            for &s in cycle {
                owner[s] = idx;
            }
        }
        owner
    }

    pub fn reassemble(&self, n: usize) -> Result<Perm> {
        Perm::from_cycles(n, &self.cycles)
    }
}

pub fn compose(p: &Perm, q: &Perm) -> Result<Perm> {
    p.compose(q)
}

pub fn cycles(p: &Perm) -> CycleSet {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = p.apply(x);
        }
        out.push(cycle);
    }
    CycleSet { cycles: out }
}

fn check_degrees(degree: usize, generators: &[Perm]) -> Result<()> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    Ok(())
}

/// Orbits of the group generated by `generators` acting on `{0, .., degree-1}`.
/// Blocks are sorted internally and ordered by least element.
pub fn orbits(degree: usize, generators: &[Perm]) -> Result<Vec<Vec<usize>>> {
    if degree == 0 {
        return Err(Error::EmptyDegree);
    }
    check_degrees(degree, generators)?;
    Ok(orbits_unchecked(degree, generators.iter()))
}

pub(crate) fn orbits_unchecked<'a>(
    degree: usize,
    generators: impl Iterator<Item = &'a Perm> + Clone,
) -> Vec<Vec<usize>> {
    let mut block = vec![usize::MAX; degree];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..degree {
        if block[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        block[start] = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let s = members[head];
            head += 1;
            for g in generators.clone() {
                let t = g.apply(s);
                if block[t] == usize::MAX {
                    block[t] = id;
                    members.push(t);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Order of the centralizer of the group generated by `generators` in the full
/// symmetric group, i.e. the deck group of the corresponding connected cover.
///
/// For a transitive action a centralizing permutation is determined by where it
/// sends sheet 0, so each candidate image is tried by propagating along the
/// generators and checking consistency.
pub fn centralizer_order(degree: usize, generators: &[Perm]) -> Result<usize> {
    if orbits(degree, generators)?.len() != 1 {
        return Err(Error::Intransitive);
    }
    // Spanning tree: for every sheet, a generator step that first reached it.
    let mut order = vec![0usize];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; degree];
    let mut reached = vec![false; degree];
    reached[0] = true;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for (gi, g) in generators.iter().enumerate() {
            let t = g.apply(s);
            if !reached[t] {
                reached[t] = true;
                parent[t] = Some((s, gi));
                order.push(t);
            }
        }
    }

    let mut count = 0;
    let mut z = vec![0usize; degree];
    'candidate: for target in 0..degree {
        z[0] = target;
        for &s in &order[1..] {
            let (from, gi) = parent[s].expect("spanning tree covers every sheet");
            z[s] = generators[gi].apply(z[from]);
        }
        for g in generators {
            for s in 0..degree {
                if z[g.apply(s)] != g.apply(z[s]) {
                    continue 'candidate;
                }
            }
        }
        count += 1;
    }
    Ok(count)
}
