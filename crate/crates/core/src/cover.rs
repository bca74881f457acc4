//! Finite branched covers encoded by monodromy into the symmetric group.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CoverViolation, Error, Result};
use crate::perm::{self, CycleSet, Perm};
use crate::presentation::{relator, Generator, GroupWord, Signature};

/// Version tag written into every JSON document this crate emits.
pub const FORMAT_VERSION: u32 = 1;

/// Cover file schema: `{"genus", "branch_points", "degree", "a", "b", "c"}`
/// with 0-based image arrays. `"format"` is optional on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCover {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub genus: usize,
    pub branch_points: usize,
    pub degree: usize,
    #[serde(default)]
    pub a: Vec<Vec<usize>>,
    #[serde(default)]
    pub b: Vec<Vec<usize>>,
    pub c: Vec<Vec<usize>>,
}

/// Fiber over the branch point `x_i`: the cycles of `ρ(c_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberData {
    /// 1-based branch index.
    pub branch_index: usize,
    pub cycles: CycleSet,
    /// Ramification numbers, one per preimage, in cycle order.
    pub ramification_numbers: Vec<usize>,
    pub preimage_count: usize,
}

/// A validated connected branched cover. Immutable once built.
#[derive(Clone)]
pub struct MonodromyCover {
    sig: Signature,
    degree: usize,
    /// One image per generator in the order `a_1, b_1, .., c_1, .., c_k`.
    images: Vec<Perm>,
    fibers: OnceLock<Vec<FiberData>>,
}

impl PartialEq for MonodromyCover {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.degree == other.degree && self.images == other.images
    }
}

impl Eq for MonodromyCover {}

impl fmt::Debug for MonodromyCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonodromyCover{} n={}", self.sig, self.degree)?;
        for (g, p) in self.sig.generators().zip(&self.images) {
            write!(f, " {g}={}", p.cycle_notation())?;
        }
        Ok(())
    }
}

pub fn validate(raw: &RawCover) -> Result<MonodromyCover> {
    MonodromyCover::from_raw(raw)
}

impl MonodromyCover {
    pub fn from_raw(raw: &RawCover) -> Result<Self> {
        let sig = Signature::new(raw.genus, raw.branch_points);
        let n = raw.degree;
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(CoverViolation::ZeroDegree);
        }
        for (name, arr, want) in [
            ("a", &raw.a, sig.genus),
            ("b", &raw.b, sig.genus),
            ("c", &raw.c, sig.branch_count),
        ] {
            if arr.len() != want {
                violations.push(CoverViolation::DegreeMismatch {
                    field: name.into(),
                    expected: want,
                    found: arr.len(),
                });
            }
        }
        let handles = (0..raw.a.len().max(raw.b.len()).min(sig.genus))
            .flat_map(|i| [Generator::A(i + 1), Generator::B(i + 1)])
            .chain((0..raw.c.len().min(sig.branch_count)).map(|i| Generator::C(i + 1)));
        let mut images = Vec::with_capacity(raw.a.len() + raw.b.len() + raw.c.len());
        for g in handles {
            let (name, arr, idx) = match g {
                Generator::A(i) => ("a", &raw.a, i - 1),
                Generator::B(i) => ("b", &raw.b, i - 1),
                Generator::C(i) => ("c", &raw.c, i - 1),
            };
            let Some(v) = arr.get(idx) else { continue };
            let field = format!("{name}[{idx}]");
            if v.len() != n {
                violations.push(CoverViolation::DegreeMismatch {
                    field,
                    expected: n,
                    found: v.len(),
                });
                continue;
            }
            match Perm::new(v.clone()) {
                Ok(p) => images.push(p),
                Err(_) => violations.push(CoverViolation::NotAPermutation { field }),
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidCover(violations));
        }
        MonodromyCover::new(sig, n, images)
    }

    /// Validates images given in the standard generator order.
    pub fn new(sig: Signature, degree: usize, images: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidCover(vec![CoverViolation::ZeroDegree]));
        }
        if images.len() != sig.generator_count() {
            return Err(Error::InvalidCover(vec![CoverViolation::DegreeMismatch {
                field: "images".into(),
                expected: sig.generator_count(),
                found: images.len(),
            }]));
        }
        let mut violations = Vec::new();
        for (g, p) in sig.generators().zip(&images) {
            if p.degree() != degree {
                violations.push(CoverViolation::DegreeMismatch {
                    field: g.to_string(),
                    expected: degree,
                    found: p.degree(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidCover(violations));
        }
        let cover = MonodromyCover {
            sig,
            degree,
            images,
            fibers: OnceLock::new(),
        };
        if !cover.evaluate_unchecked(&relator(sig)).is_identity() {
            violations.push(CoverViolation::RelationViolated);
        }
        if perm::orbits_unchecked(degree, cover.images.iter()).len() != 1 {
            violations.push(CoverViolation::NotTransitive);
        }
        for i in 1..=sig.branch_count {
            if cover.c_image(i).is_identity() {
                violations.push(CoverViolation::TrivialBranchPoint(i));
            }
        }
        if violations.is_empty() {
            Ok(cover)
        } else {
            Err(Error::InvalidCover(violations))
        }
    }

    /// Convenience constructor: `a`, `b` of length `g` and `c` of length `k`.
    pub fn from_parts(genus: usize, degree: usize, a: &[Perm], b: &[Perm], c: &[Perm]) -> Result<Self> {
        if a.len() != genus || b.len() != genus {
            return Err(Error::InvalidCover(vec![CoverViolation::DegreeMismatch {
                field: "a/b".into(),
                expected: genus,
                found: a.len().max(b.len()),
            }]));
        }
        let mut images = Vec::new();
        for (x, y) in a.iter().zip(b) {
            images.push(x.clone());
            images.push(y.clone());
        }
        images.extend(c.iter().cloned());
        MonodromyCover::new(Signature::new(genus, c.len()), degree, images)
    }

    pub(crate) fn from_images_unchecked(sig: Signature, degree: usize, images: Vec<Perm>) -> Self {
        MonodromyCover {
            sig,
            degree,
            images,
            fibers: OnceLock::new(),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image(&self, g: Generator) -> &Perm {
        &self.images[g.index(self.sig)]
    }

    /// `ρ(c_i)`, 1-based. Panics when out of range.
    pub fn c_image(&self, i: usize) -> &Perm {
        self.image(Generator::C(i))
    }

    pub fn c_images(&self) -> &[Perm] {
        &self.images[2 * self.sig.genus..]
    }

    /// `ρ(w)` with `ρ(xy) = ρ(x) ∘ ρ(y)`.
    pub fn evaluate(&self, w: &GroupWord) -> Result<Perm> {
        w.check_alphabet(self.sig)?;
        Ok(self.evaluate_unchecked(w))
    }

    pub(crate) fn evaluate_unchecked(&self, w: &GroupWord) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for l in w.letters() {
            let p = &self.images[l.generator.index(self.sig)];
            acc = if l.inverse {
                acc.compose_unchecked(&p.inverse())
            } else {
                acc.compose_unchecked(p)
            };
        }
        acc
    }

    /// Renames sheet `s` to `r(s)` in every image.
    pub fn relabel(&self, r: &Perm) -> Result<MonodromyCover> {
        if r.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: r.degree(),
            });
        }
        Ok(MonodromyCover::from_images_unchecked(
            self.sig,
            self.degree,
            self.images.iter().map(|p| p.conjugate_by(r)).collect(),
        ))
    }

    /// Concatenated image arrays; the key for lexicographic comparison.
    pub fn key(&self) -> Vec<usize> {
        self.images.iter().flat_map(|p| p.images().iter().copied()).collect()
    }

    pub fn to_raw(&self) -> RawCover {
        let g = self.sig.genus;
        RawCover {
            format: Some(FORMAT_VERSION),
            genus: g,
            branch_points: self.sig.branch_count,
            degree: self.degree,
            a: (0..g).map(|i| self.images[2 * i].images().to_vec()).collect(),
            b: (0..g).map(|i| self.images[2 * i + 1].images().to_vec()).collect(),
            c: self.c_images().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn fibers(&self) -> &[FiberData] {
        self.fibers.get_or_init(|| {
            (1..=self.sig.branch_count)
                .map(|i| {
                    let cycles = self.c_image(i).cycles();
                    let ramification_numbers = cycles.lengths();
                    FiberData {
                        branch_index: i,
                        preimage_count: cycles.len(),
                        cycles,
                        ramification_numbers,
                    }
                })
                .collect()
        })
    }

    /// Fiber over `x_i`, 1-based.
    pub fn fiber(&self, i: usize) -> Result<&FiberData> {
        if i == 0 || i > self.sig.branch_count {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.sig.branch_count,
            });
        }
        Ok(&self.fibers()[i - 1])
    }

    /// Riemann–Hurwitz: `χ(X̃) = n(2 − 2g) − Σ (n − ℓ_i)`.
    pub fn euler_characteristic_total(&self) -> i64 {
        let n = self.degree as i64;
        let defect: i64 = self
            .fibers()
            .iter()
            .map(|f| n - f.preimage_count as i64)
            .sum();
        n * self.sig.euler_characteristic() - defect
    }

    pub fn total_genus(&self) -> i64 {
        (2 - self.euler_characteristic_total()) / 2
    }

    pub fn deck_group_order(&self) -> usize {
        perm::centralizer_order(self.degree, &self.images)
            .expect("validated covers are transitive")
    }

    pub fn is_regular(&self) -> bool {
        self.deck_group_order() == self.degree
    }

    /// No branch-point preimage is unramified: no `ρ(c_i)` fixes a sheet.
    pub fn has_property_nu(&self) -> bool {
        self.c_images().iter().all(|p| p.fixed_points() == 0)
    }

    pub fn has_equal_ramification(&self) -> bool {
        self.fibers()
            .iter()
            .all(|f| f.ramification_numbers.windows(2).all(|w| w[0] == w[1]))
    }

    /// Every `ρ(c_i)` is a transposition.
    pub fn is_simple_cover(&self) -> bool {
        self.c_images().iter().all(Perm::is_transposition)
    }
}

impl Serialize for MonodromyCover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonodromyCover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCover::deserialize(d)?;
        MonodromyCover::from_raw(&raw).map_err(serde::de::Error::custom)
    }
}

pub fn fiber(cover: &MonodromyCover, i: usize) -> Result<&FiberData> {
    cover.fiber(i)
}

pub fn euler_characteristic_total(cover: &MonodromyCover) -> i64 {
    cover.euler_characteristic_total()
}

pub fn is_regular(cover: &MonodromyCover) -> bool {
    cover.is_regular()
}

pub fn has_property_nu(cover: &MonodromyCover) -> bool {
    cover.has_property_nu()
}

pub fn has_equal_ramification(cover: &MonodromyCover) -> bool {
    cover.has_equal_ramification()
}

pub fn is_simple_cover(cover: &MonodromyCover) -> bool {
    cover.is_simple_cover()
}

/// Ready-made covers used in examples and tests.
pub mod samples {
    use super::*;

    /// The 3-fold simple irregular cover of the 10-marked sphere by a closed
    /// genus-3 surface: `c ↦ (0 1), (0 1), (1 2) × 8`.
    pub fn simple3() -> MonodromyCover {
        let t01 = Perm::transposition(3, 0, 1).unwrap();
        let t12 = Perm::transposition(3, 1, 2).unwrap();
        let mut c = vec![t01.clone(), t01];
        c.extend(std::iter::repeat_n(t12, 8));
        MonodromyCover::from_parts(0, 3, &[], &[], &c).unwrap()
    }

    /// Double cover of the sphere branched at `k` points (`k` even).
    pub fn hyperelliptic(k: usize) -> Result<MonodromyCover> {
        let t = Perm::transposition(2, 0, 1)?;
        MonodromyCover::from_parts(0, 2, &[], &[], &vec![t; k])
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    fn violations(r: Result<MonodromyCover>) -> Vec<CoverViolation> {
        match r {
            Err(Error::InvalidCover(v)) => v,
            other => panic!("expected InvalidCover, got {other:?}"),
        }
    }

    #[test]
    fn validate_examples() {
        let s3 = simple3();
        assert_eq!(s3.degree(), 3);
        assert_eq!(s3.signature(), Signature::new(0, 10));
        assert!(hyperelliptic(6).is_ok());
        let t = p(&[1, 0, 2]);
        let v = violations(MonodromyCover::from_parts(0, 3, &[], &[], &[t.clone(), t.clone(), t]));
        assert!(v.contains(&CoverViolation::RelationViolated));
    }

    #[test]
    fn validate_reports_every_violation() {
        let id = Perm::identity(3);
        let t = p(&[1, 0, 2]);
        let v = violations(MonodromyCover::from_parts(0, 3, &[], &[], &[id, t.clone(), t]));
        assert_eq!(
            v,
            vec![CoverViolation::NotTransitive, CoverViolation::TrivialBranchPoint(1)]
        );

        let raw = RawCover {
            format: None,
            genus: 1,
            branch_points: 1,
            degree: 2,
            a: vec![vec![0, 1]],
            b: vec![],
            c: vec![vec![0, 0]],
        };
        let v = violations(validate(&raw));
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(matches!(&v[1], CoverViolation::NotAPermutation { field } if field == "c[0]"));
    }

    #[test]
    fn fiber_examples() {
        let f = simple3();
        let fib = f.fiber(1).unwrap();
        assert_eq!(fib.cycles.cycles, vec![vec![0, 1], vec![2]]);
        assert_eq!(fib.ramification_numbers, vec![2, 1]);
        assert_eq!(fib.preimage_count, 2);
        assert!(f.fiber(0).is_err());
        assert!(f.fiber(11).is_err());
        for fib in f.fibers() {
            assert_eq!(fib.ramification_numbers.iter().sum::<usize>(), 3);
        }
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(simple3().euler_characteristic_total(), -4);
        assert_eq!(simple3().total_genus(), 3);
        // Unbranched 3-fold cyclic cover of the torus.
        let cyc = p(&[1, 2, 0]);
        let torus = MonodromyCover::from_parts(1, 3, &[cyc], &[Perm::identity(3)], &[]).unwrap();
        assert_eq!(torus.euler_characteristic_total(), 0);
        assert!(torus.is_regular());
        assert!(torus.has_property_nu());
        let hyp = hyperelliptic(6).unwrap();
        assert_eq!(hyp.euler_characteristic_total(), -2);
    }

    #[test]
    fn predicates_on_simple3() {
        let f = simple3();
        assert!(!f.is_regular());
        assert_eq!(f.deck_group_order(), 1);
        assert!(!f.has_property_nu());
        assert!(!f.has_equal_ramification());
        assert!(f.is_simple_cover());
    }

    #[test]
    fn predicates_on_hyperelliptic() {
        let h = hyperelliptic(6).unwrap();
        assert!(h.is_regular());
        assert!(h.has_property_nu());
        assert!(h.has_equal_ramification());
        assert!(h.is_simple_cover());
    }

    #[test]
    fn json_round_trip() {
        let f = simple3();
        let s = serde_json::to_string(&f).unwrap();
        let back: MonodromyCover = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<MonodromyCover>(r#"{"genus":0}"#).is_err());
    }

    #[test]
    fn relabeling_preserves_predicates() {
        let f = simple3();
        let r = p(&[2, 0, 1]);
        let g = f.relabel(&r).unwrap();
        assert_eq!(g.euler_characteristic_total(), f.euler_characteristic_total());
        assert_eq!(g.is_regular(), f.is_regular());
        assert!(MonodromyCover::new(g.signature(), 3, g.images().to_vec()).is_ok());
    }
}
