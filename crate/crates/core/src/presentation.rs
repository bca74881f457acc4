//! Surface signatures, words in the standard generators of the punctured
//! surface group, and substitution automorphisms acting on those words.
//!
//! The generators of `π₁(X°)` for a genus `g` surface with `k` branch points are
//! ordered `a_1, b_1, .., a_g, b_g, c_1, .., c_k` and satisfy the single relation
//! `[a_1,b_1]···[a_g,b_g]·c_1···c_k = 1` with `[x,y] = x y x⁻¹ y⁻¹`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub genus: usize,
    #[serde(rename = "branch_points")]
    pub branch_count: usize,
}

impl Signature {
    pub fn new(genus: usize, branch_count: usize) -> Self {
        Signature {
            genus,
            branch_count,
        }
    }

    /// Number of generators in the standard presentation, `2g + k`.
    pub fn generator_count(&self) -> usize {
        self.genus.saturating_mul(2).saturating_add(self.branch_count)
    }

    /// Euler characteristic of the closed base surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Euler characteristic of the punctured base `X°`.
    pub fn punctured_euler_characteristic(&self) -> i64 {
        self.euler_characteristic() - self.branch_count as i64
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.generator_count()).map(move |i| Generator::from_index(*self, i))
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::A(i) | Generator::B(i) => (1..=self.genus).contains(&i),
            Generator::C(i) => (1..=self.branch_count).contains(&i),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, k={})", self.genus, self.branch_count)
    }
}

/// A standard generator, 1-based as in `a_1`, `c_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A(usize),
    B(usize),
    C(usize),
}

impl Generator {
    /// Position in the ordering `a_1, b_1, .., a_g, b_g, c_1, .., c_k`.
    pub fn index(self, sig: Signature) -> usize {
        match self {
            Generator::A(i) => 2 * (i - 1),
            Generator::B(i) => 2 * (i - 1) + 1,
            Generator::C(i) => 2 * sig.genus + i - 1,
        }
    }

    pub fn from_index(sig: Signature, idx: usize) -> Generator {
        if idx < 2 * sig.genus {
            if idx.is_multiple_of(2) {
                Generator::A(idx / 2 + 1)
            } else {
                Generator::B(idx / 2 + 1)
            }
        } else {
            Generator::C(idx - 2 * sig.genus + 1)
        }
    }

    pub fn is_branch_loop(self) -> bool {
        matches!(self, Generator::C(_))
    }

    fn letter(self) -> (char, usize) {
        match self {
            Generator::A(i) => ('a', i),
            Generator::B(i) => ('b', i),
            Generator::C(i) => ('c', i),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, i) = self.letter();
        write!(f, "{c}{i}")
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letter = GroupWord::from_str(s)?;
        match letter.letters() {
            [l] if !l.inverse => Ok(l.generator),
            _ => Err(Error::ParseWord(format!("{s:?} is not a single generator"))),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator) -> Self {
        Letter {
            generator,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, i) = self.generator.letter();
        let c = if self.inverse { c.to_ascii_uppercase() } else { c };
        write!(f, "{c}{i}")
    }
}

/// A freely reduced word. Serialized as tokens like `c1c2C1`, where an
/// uppercase letter denotes an inverse; the empty word is written `1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Builds a word and freely reduces it.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last == l.inv() => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        GroupWord { letters: out }
    }

    pub fn generator(g: Generator) -> Self {
        GroupWord {
            letters: vec![Letter::new(g)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        GroupWord::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn commutator(x: &GroupWord, y: &GroupWord) -> Self {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// Strips matching letter/inverse pairs from the two ends.
    pub fn cyclically_reduced(&self) -> GroupWord {
        let l = &self.letters;
        let (mut lo, mut hi) = (0, l.len());
        while hi - lo >= 2 && l[lo] == l[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        GroupWord {
            letters: l[lo..hi].to_vec(),
        }
    }

    /// Whether the two words are conjugate in the free group: after cyclic
    /// reduction one is a rotation of the other.
    pub fn is_conjugate_to(&self, other: &GroupWord) -> bool {
        let a = self.cyclically_reduced();
        let b = other.cyclically_reduced();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|r| {
            a.letters[r..]
                .iter()
                .chain(a.letters[..r].iter())
                .eq(b.letters.iter())
        })
    }

    pub fn check_alphabet(&self, sig: Signature) -> Result<()> {
        for l in &self.letters {
            if !sig.contains(l.generator) {
                return Err(Error::AlphabetMismatch(l.generator.to_string()));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.letters.iter().map(|l| l.generator)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(GroupWord::identity());
        }
        let bytes = s.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            if c.is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            let inverse = c.is_ascii_uppercase();
            let make: fn(usize) -> Generator = match c.to_ascii_lowercase() {
                'a' => Generator::A,
                'b' => Generator::B,
                'c' => Generator::C,
                _ => {
                    return Err(Error::ParseWord(format!(
                        "unexpected {c:?} at offset {pos} in {s:?}"
                    )))
                }
            };
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let index: usize = s[start..pos].parse().map_err(|_| {
                Error::ParseWord(format!("missing index after {c:?} in {s:?}"))
            })?;
            if index == 0 {
                return Err(Error::ParseWord(format!("generator indices start at 1 in {s:?}")));
            }
            letters.push(Letter {
                generator: make(index),
                inverse,
            });
        }
        Ok(GroupWord::new(letters))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `[a_1,b_1]···[a_g,b_g]·c_1···c_k`.
pub fn relator(sig: Signature) -> GroupWord {
    let mut w = GroupWord::identity();
    for i in 1..=sig.genus {
        let a = GroupWord::generator(Generator::A(i));
        let b = GroupWord::generator(Generator::B(i));
        w = w.concat(&GroupWord::commutator(&a, &b));
    }
    for i in 1..=sig.branch_count {
        w = w.concat(&GroupWord::generator(Generator::C(i)));
    }
    w
}

/// An endomorphism of the free group on the standard generators, given by the
/// image of each generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    label: String,
    sig: Signature,
    images: Vec<GroupWord>,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (g, w) in self.sig.generators().zip(&self.images) {
            write!(f, " {g}->{w}")?;
        }
        Ok(())
    }
}

impl Automorphism {
    pub fn identity(sig: Signature) -> Self {
        Automorphism {
            label: "id".into(),
            sig,
            images: sig.generators().map(GroupWord::generator).collect(),
        }
    }

    /// Builds a substitution from explicit generator images; generators not
    /// listed are fixed.
    pub fn from_images(
        label: impl Into<String>,
        sig: Signature,
        images: impl IntoIterator<Item = (Generator, GroupWord)>,
    ) -> Result<Self> {
        let mut f = Automorphism::identity(sig);
        f.label = label.into();
        for (g, w) in images {
            if !sig.contains(g) {
                return Err(Error::AlphabetMismatch(g.to_string()));
            }
            w.check_alphabet(sig)?;
            f.images[g.index(sig)] = w;
        }
        Ok(f)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn image(&self, g: Generator) -> &GroupWord {
        &self.images[g.index(self.sig)]
    }

    pub fn images(&self) -> impl Iterator<Item = (Generator, &GroupWord)> {
        self.sig.generators().zip(self.images.iter())
    }

    /// Substitutes and freely reduces.
    pub fn apply(&self, w: &GroupWord) -> Result<GroupWord> {
        w.check_alphabet(self.sig)?;
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &GroupWord) -> GroupWord {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.generator.index(self.sig)];
            if l.inverse {
                out.extend(img.letters().iter().rev().map(|x| x.inv()));
            } else {
                out.extend(img.letters().iter().copied());
            }
        }
        GroupWord::new(out)
    }

    /// `self ∘ other`: substitute with `other` first, then with `self`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.sig != other.sig {
            return Err(Error::AlphabetMismatch(format!(
                "signatures {} and {} differ",
                self.sig, other.sig
            )));
        }
        Ok(Automorphism {
            label: format!("{}*{}", self.label, other.label),
            sig: self.sig,
            images: other.images.iter().map(|w| self.apply_unchecked(w)).collect(),
        })
    }

    /// Equality of substitutions, ignoring labels.
    pub fn same_action(&self, other: &Automorphism) -> bool {
        self.sig == other.sig && self.images == other.images
    }

    pub fn is_identity(&self) -> bool {
        self.same_action(&Automorphism::identity(self.sig))
    }

    /// Both compositions with `other` act as the identity on every generator.
    pub fn is_inverse_of(&self, other: &Automorphism) -> bool {
        match (self.compose(other), other.compose(self)) {
            (Ok(a), Ok(b)) => a.is_identity() && b.is_identity(),
            _ => false,
        }
    }
}

/// The image of the relator is conjugate to the relator.
pub fn relator_preserved(f: &Automorphism, sig: Signature) -> bool {
    if f.sig != sig {
        return false;
    }
    let r = relator(sig);
    f.apply_unchecked(&r).is_conjugate_to(&r)
}

pub fn apply_automorphism(f: &Automorphism, w: &GroupWord) -> Result<GroupWord> {
    f.apply(w)
}

/// Half-twist `σ_i`: `c_i ↦ c_i c_{i+1} c_i⁻¹`, `c_{i+1} ↦ c_i`.
pub fn half_twist(sig: Signature, i: usize) -> Result<Automorphism> {
    if i == 0 || i >= sig.branch_count {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: sig.branch_count.saturating_sub(1),
        });
    }
    let ci = GroupWord::generator(Generator::C(i));
    let cj = GroupWord::generator(Generator::C(i + 1));
    Automorphism::from_images(
        format!("sigma_{i}"),
        sig,
        [
            (Generator::C(i), ci.concat(&cj).concat(&ci.inverse())),
            (Generator::C(i + 1), ci),
        ],
    )
}

/// Inverse half-twist: `c_i ↦ c_{i+1}`, `c_{i+1} ↦ c_{i+1}⁻¹ c_i c_{i+1}`.
pub fn half_twist_inverse(sig: Signature, i: usize) -> Result<Automorphism> {
    if i == 0 || i >= sig.branch_count {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: sig.branch_count.saturating_sub(1),
        });
    }
    let ci = GroupWord::generator(Generator::C(i));
    let cj = GroupWord::generator(Generator::C(i + 1));
    Automorphism::from_images(
        format!("sigma_{i}^-1"),
        sig,
        [
            (Generator::C(i), cj.clone()),
            (Generator::C(i + 1), cj.inverse().concat(&ci).concat(&cj)),
        ],
    )
}

/// `σ_1, σ_1⁻¹, .., σ_{k-1}, σ_{k-1}⁻¹` for a genus-zero signature.
pub fn braid_generators(sig: Signature) -> Result<Vec<Automorphism>> {
    if sig.genus != 0 {
        return Err(Error::UnsupportedSignature(format!(
            "built-in mapping class generators exist only for genus 0, got {sig}; supply --gens"
        )));
    }
    if sig.branch_count < 2 {
        return Err(Error::UnsupportedSignature(format!(
            "half-twists need at least two branch points, got {sig}"
        )));
    }
    let mut out = Vec::with_capacity(2 * (sig.branch_count - 1));
    for i in 1..sig.branch_count {
        out.push(half_twist(sig, i)?);
        out.push(half_twist_inverse(sig, i)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    fn sphere(k: usize) -> Signature {
        Signature::new(0, k)
    }

    #[test]
    fn relator_examples() {
        assert_eq!(relator(sphere(3)).to_string(), "c1c2c3");
        assert_eq!(relator(Signature::new(1, 2)).to_string(), "a1b1A1B1c1c2");
        assert_eq!(relator(Signature::new(2, 0)).to_string(), "a1b1A1B1a2b2A2B2");
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(w("c1C1c2").to_string(), "c2");
        assert_eq!(w("c10C3").letters().len(), 2);
        assert_eq!(w("1"), GroupWord::identity());
        assert!("x1".parse::<GroupWord>().is_err());
        assert!("c".parse::<GroupWord>().is_err());
        assert!("c0".parse::<GroupWord>().is_err());
        assert_eq!(w("c1c2").inverse().to_string(), "C2C1");
    }

    #[test]
    fn half_twist_images() {
        let sig = sphere(3);
        let s1 = half_twist(sig, 1).unwrap();
        assert_eq!(s1.apply(&w("c1")).unwrap().to_string(), "c1c2C1");
        assert_eq!(s1.apply(&w("c2")).unwrap().to_string(), "c1");
        assert_eq!(s1.apply(&w("c3")).unwrap().to_string(), "c3");
        let id = Automorphism::identity(sig);
        assert_eq!(id.apply(&w("c1c2")).unwrap(), w("c1c2"));
        assert!(s1.apply(&w("a1")).is_err());
    }

    #[test]
    fn braid_generator_counts() {
        assert_eq!(braid_generators(sphere(2)).unwrap().len(), 2);
        assert_eq!(braid_generators(sphere(4)).unwrap().len(), 6);
        assert!(braid_generators(Signature::new(1, 2)).is_err());
        assert!(braid_generators(sphere(1)).is_err());
    }

    #[test]
    fn braid_relations_hold() {
        let sig = sphere(5);
        let s = |i| half_twist(sig, i).unwrap();
        for i in 1..4 {
            let lhs = s(i).compose(&s(i + 1)).unwrap().compose(&s(i)).unwrap();
            let rhs = s(i + 1).compose(&s(i)).unwrap().compose(&s(i + 1)).unwrap();
            assert!(lhs.same_action(&rhs), "braid relation at {i}");
        }
        for i in 1usize..5 {
            for j in 1usize..5 {
                if i.abs_diff(j) >= 2 {
                    let lhs = s(i).compose(&s(j)).unwrap();
                    let rhs = s(j).compose(&s(i)).unwrap();
                    assert!(lhs.same_action(&rhs));
                }
            }
        }
    }

    #[test]
    fn half_twists_invert_and_preserve_relator() {
        for k in 2..=7 {
            let sig = sphere(k);
            let gens = braid_generators(sig).unwrap();
            for pair in gens.chunks(2) {
                assert!(pair[0].is_inverse_of(&pair[1]));
                assert!(relator_preserved(&pair[0], sig));
                assert!(relator_preserved(&pair[1], sig));
            }
        }
        assert!(relator_preserved(&Automorphism::identity(sphere(4)), sphere(4)));
    }

    #[test]
    fn non_invertible_substitution_rejected() {
        let sig = sphere(2);
        let f = Automorphism::from_images("bad", sig, [(Generator::C(1), w("c2"))]).unwrap();
        assert!(!relator_preserved(&f, sig));
    }

    #[test]
    fn composition_is_functorial() {
        let sig = sphere(4);
        let gens = braid_generators(sig).unwrap();
        let word = w("c1c3C2c4c4");
        for f in &gens {
            for g in &gens {
                let fg = f.compose(g).unwrap();
                let lhs = fg.apply(&word).unwrap();
                let rhs = f.apply(&g.apply(&word).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn conjugacy_by_rotation() {
        assert!(w("c1c2c3").is_conjugate_to(&w("c2c3c1")));
        assert!(w("c4c1c2c3C4").is_conjugate_to(&w("c1c2c3")));
        assert!(!w("c1c2c3").is_conjugate_to(&w("c1c3c2")));
        assert!(GroupWord::identity().is_conjugate_to(&w("c1C1")));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word(k: usize) -> impl Strategy<Value = Vec<Letter>> {
            proptest::collection::vec((1..=k, any::<bool>()), 0..20).prop_map(|v| {
                v.into_iter()
                    .map(|(i, inverse)| Letter {
                        generator: Generator::C(i),
                        inverse,
                    })
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn results_are_freely_reduced(letters in arb_word(4), fi in 0usize..6) {
                let sig = sphere(4);
                let f = &braid_generators(sig).unwrap()[fi];
                let out = f.apply(&GroupWord::new(letters)).unwrap();
                for pair in out.letters().windows(2) {
                    prop_assert_ne!(pair[0], pair[1].inv());
                }
            }

            #[test]
            fn parse_display_round_trip(letters in arb_word(12)) {
                let word = GroupWord::new(letters);
                prop_assert_eq!(word.to_string().parse::<GroupWord>().unwrap(), word);
            }
        }
    }
}
