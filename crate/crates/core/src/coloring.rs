//! Colorings of branch points and their fibers, the bipartite multigraphs
//! `Γ_ij`, and certificates for simple covers.

use serde::Serialize;

use crate::cover::MonodromyCover;
use crate::error::{Error, Result};
use crate::lifting::{essential_flags, CutPresentation, LiftComponent};
use crate::orbit::{act_word, OrbitWalk};
use crate::perm::{format_cycle, CycleSet, Perm};
use crate::presentation::{half_twist_inverse, Automorphism};

/// `color(x_i) = ρ(c_i)` and the per-preimage colors, one cycle each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorData {
    pub branch_index: usize,
    pub color: Perm,
    pub fiber_colors: CycleSet,
}

pub fn color(cover: &MonodromyCover, i: usize) -> Result<ColorData> {
    let fiber = cover.fiber(i)?;
    Ok(ColorData {
        branch_index: i,
        color: cover.c_image(i).clone(),
        fiber_colors: fiber.cycles.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaVertex {
    /// Cycle notation, e.g. `(0 1)`; fixed points print as `(2)`.
    pub cycle: String,
    pub sheets: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaEdge {
    pub sheet: usize,
    pub left: usize,
    pub right: usize,
}

/// Bipartite multigraph on the fiber cycles over `x_i` (left) and `x_j`
/// (right), with one edge per sheet joining the two cycles containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaGraph {
    pub i: usize,
    pub j: usize,
    pub left: Vec<GammaVertex>,
    pub right: Vec<GammaVertex>,
    pub edges: Vec<GammaEdge>,
}

impl GammaGraph {
    pub fn left_degrees(&self) -> Vec<usize> {
        degrees(self.left.len(), self.edges.iter().map(|e| e.left))
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        degrees(self.right.len(), self.edges.iter().map(|e| e.right))
    }
}

fn degrees(len: usize, ends: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut d = vec![0; len];
    for v in ends {
        d[v] += 1;
    }
    d
}

fn vertices(cycles: &CycleSet) -> Vec<GammaVertex> {
    cycles
        .cycles
        .iter()
        .map(|c| GammaVertex {
            cycle: format_cycle(c),
            sheets: c.clone(),
        })
        .collect()
}

pub fn gamma_graph(cover: &MonodromyCover, i: usize, j: usize) -> Result<GammaGraph> {
    if i == j {
        return Err(Error::NotApplicable(format!("Γ needs two distinct branch points, got i = j = {i}")));
    }
    let (ci, cj) = (cover.fiber(i)?.cycles.clone(), cover.fiber(j)?.cycles.clone());
    let n = cover.degree();
    let (own_i, own_j) = (ci.membership(n), cj.membership(n));
    Ok(GammaGraph {
        i,
        j,
        left: vertices(&ci),
        right: vertices(&cj),
        edges: (0..n)
            .map(|s| GammaEdge {
                sheet: s,
                left: own_i[s],
                right: own_j[s],
            })
            .collect(),
    })
}

/// Acyclic as a multigraph; a doubled edge counts as a cycle.
pub fn is_forest(g: &GammaGraph) -> bool {
    let offset = g.left.len();
    let mut parent: Vec<usize> = (0..offset + g.right.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.left), find(&mut parent, offset + e.right));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Braid moves, applied left to right, carrying `c_1, c_2` onto `c_i, c_{i+1}`:
/// the resulting automorphism `h` has `h(c_1) = c_i` and `h(c_2) = c_{i+1}`.
pub fn adjacent_pair_moves(cover: &MonodromyCover, i: usize) -> Result<Vec<Automorphism>> {
    let sig = cover.signature();
    if i == 0 || i + 1 > sig.branch_count {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: sig.branch_count.saturating_sub(1),
        });
    }
    let mut moves = Vec::new();
    for t in (1..i).rev() {
        moves.push(half_twist_inverse(sig, t)?);
        moves.push(half_twist_inverse(sig, t + 1)?);
    }
    Ok(moves)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForestCheckStatus {
    /// Γ is a forest and every lifted component is inessential.
    Agree,
    /// Γ is a forest but some lifted component is essential.
    Disagree,
    /// Γ has a circuit; the criterion makes no claim.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestCheckReport {
    pub i: usize,
    pub j: usize,
    pub forest: bool,
    pub colors_distinct: bool,
    pub components: Vec<LiftComponent>,
    pub status: ForestCheckStatus,
}

/// Compares the forest criterion on `Γ_{i,i+1}` with the region-graph
/// essentiality of the curve around `x_i, x_{i+1}`. The curve is brought to
/// the standard two-point curve by braid moves, so the lift is computed on the
/// moved cover.
pub fn forest_implies_trivial_lift_check(cover: &MonodromyCover, i: usize, j: usize) -> Result<ForestCheckReport> {
    let sig = cover.signature();
    if sig.genus != 0 {
        return Err(Error::UnsupportedSignature(format!(
            "two-point curves are realized by braid moves only on genus-0 bases, got {sig}"
        )));
    }
    if sig.branch_count < 3 {
        return Err(Error::NotApplicable(format!(
            "a curve around two branch points is essential only when k >= 3, got {sig}"
        )));
    }
    let lo = i.min(j);
    if i.abs_diff(j) != 1 || lo == 0 || lo.max(i.max(j)) > sig.branch_count {
        return Err(Error::NotApplicable(format!(
            "branch indices {i} and {j} are not adjacent"
        )));
    }
    let gamma = gamma_graph(cover, i, j)?;
    let forest = is_forest(&gamma);
    let moves = adjacent_pair_moves(cover, lo)?;
    let moved = act_word(cover, &moves, &(0..moves.len()).collect::<Vec<_>>())?;
    debug_assert_eq!(moved.c_image(1), cover.c_image(lo));
    debug_assert_eq!(moved.c_image(2), cover.c_image(lo + 1));
    let cut = CutPresentation::disk(sig, 2)?;
    let lifted = essential_flags(&moved, &cut)?;
    let status = match (forest, lifted.all_inessential()) {
        (false, _) => ForestCheckStatus::NotApplicable,
        (true, true) => ForestCheckStatus::Agree,
        (true, false) => ForestCheckStatus::Disagree,
    };
    Ok(ForestCheckReport {
        i,
        j,
        forest,
        colors_distinct: cover.c_image(i) != cover.c_image(j),
        components: lifted.components,
        status,
    })
}

/// A class in the mapping class group orbit with adjacent branch points of
/// different colors, whose `Γ` is then a forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleCertificate {
    pub transversal: Vec<String>,
    pub i: usize,
    pub j: usize,
    pub colors: (String, String),
    pub gamma: GammaGraph,
    pub forest: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleCertificateOutcome {
    /// `None` when the search over the supplied generators found no witness.
    pub witness: Option<SimpleCertificate>,
    /// The witness could not be constructed and the verdict rests on the simple-cover criterion alone.
    pub best_effort: bool,
}

pub fn check_simple_hypotheses(cover: &MonodromyCover) -> Result<()> {
    let sig = cover.signature();
    if !cover.is_simple_cover() {
        return Err(Error::NotApplicable("cover is not simple".into()));
    }
    if cover.degree() < 3 {
        return Err(Error::NotApplicable("simple-cover criterion needs degree at least 3".into()));
    }
    if sig.branch_count < 2 {
        return Err(Error::NotApplicable("simple-cover criterion needs two branch points".into()));
    }
    if sig.genus == 0 && sig.branch_count == 3 {
        return Err(Error::NotApplicable(
            "the sphere with three marked points has no essential curves".into(),
        ));
    }
    Ok(())
}

/// Searches the orbit (BFS order) for a cover with adjacent distinct colors.
pub fn simple_certificate(
    cover: &MonodromyCover,
    gens: &[Automorphism],
    limit: usize,
) -> Result<SimpleCertificateOutcome> {
    check_simple_hypotheses(cover)?;
    let mut walk = OrbitWalk::new(cover, gens, limit, true)?;
    while let Some(entry) = walk.next_class()? {
        let moved = act_word(cover, gens, &entry.word)?;
        let k = moved.signature().branch_count;
        if let Some(i) = (1..k).find(|&i| moved.c_image(i) != moved.c_image(i + 1)) {
            let gamma = gamma_graph(&moved, i, i + 1)?;
            return Ok(SimpleCertificateOutcome {
                witness: Some(SimpleCertificate {
                    transversal: entry.transversal.clone(),
                    i,
                    j: i + 1,
                    colors: (
                        moved.c_image(i).cycle_notation(),
                        moved.c_image(i + 1).cycle_notation(),
                    ),
                    forest: is_forest(&gamma),
                    gamma,
                }),
                best_effort: false,
            });
        }
    }
    if cover.signature().genus == 0 {
        // Two distinct adjacent transpositions always exist in a transitive
        // genus-0 simple cover of degree at least 3.
        unreachable!("genus-0 simple cover without adjacent distinct colors");
    }
    Ok(SimpleCertificateOutcome {
        witness: None,
        best_effort: true,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::samples::{simple3, hyperelliptic};
    use crate::presentation::{braid_generators, Generator, GroupWord, Letter};

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn color_examples() {
        let c = color(&simple3(), 1).unwrap();
        assert_eq!(c.color, p(&[1, 0, 2]));
        assert_eq!(c.fiber_colors.cycles, vec![vec![0, 1], vec![2]]);
        assert_eq!(c.fiber_colors.reassemble(3).unwrap(), c.color);
        assert!(color(&simple3(), 11).is_err());
    }

    #[test]
    fn gamma_path_for_distinct_colors() {
        let g = gamma_graph(&simple3(), 1, 3).unwrap();
        assert_eq!(g.left.iter().map(|v| v.cycle.as_str()).collect::<Vec<_>>(), ["(0 1)", "(2)"]);
        assert_eq!(g.right.iter().map(|v| v.cycle.as_str()).collect::<Vec<_>>(), ["(0)", "(1 2)"]);
        assert_eq!(
            g.edges,
            vec![
                GammaEdge { sheet: 0, left: 0, right: 0 },
                GammaEdge { sheet: 1, left: 0, right: 1 },
                GammaEdge { sheet: 2, left: 1, right: 1 },
            ]
        );
        assert!(is_forest(&g));
        assert_eq!(g.left_degrees(), vec![2, 1]);
        assert_eq!(g.right_degrees(), vec![1, 2]);
    }

    #[test]
    fn gamma_circuit_for_equal_colors() {
        let g = gamma_graph(&simple3(), 1, 2).unwrap();
        assert!(!is_forest(&g));
        assert!(gamma_graph(&simple3(), 2, 2).is_err());
        let single = GammaGraph {
            i: 1,
            j: 2,
            left: vec![GammaVertex { cycle: "(0)".into(), sheets: vec![0] }],
            right: vec![GammaVertex { cycle: "(0)".into(), sheets: vec![0] }],
            edges: vec![GammaEdge { sheet: 0, left: 0, right: 0 }],
        };
        assert!(is_forest(&single));
    }

    #[test]
    fn pair_moves_carry_first_pair() {
        let cover = simple3();
        let sig = cover.signature();
        for i in 1..sig.branch_count {
            let moves = adjacent_pair_moves(&cover, i).unwrap();
            let mut h = Automorphism::identity(sig);
            for f in &moves {
                h = h.compose(f).unwrap();
            }
            let c = |x| GroupWord::new([Letter::new(Generator::C(x))]);
            assert_eq!(h.apply(&c(1)).unwrap(), c(i));
            assert_eq!(h.apply(&c(2)).unwrap(), c(i + 1));
        }
    }

    #[test]
    fn forest_check_examples() {
        let f = simple3();
        let r = forest_implies_trivial_lift_check(&f, 1, 2).unwrap();
        assert_eq!(r.status, ForestCheckStatus::NotApplicable);
        assert_eq!(r.components.len(), 3);
        let r = forest_implies_trivial_lift_check(&f, 2, 3).unwrap();
        assert_eq!(r.status, ForestCheckStatus::Agree);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].degree, 3);
        assert!(forest_implies_trivial_lift_check(&f, 1, 3).is_err());
    }

    #[test]
    fn simple_certificate_examples() {
        let f = simple3();
        let gens = braid_generators(f.signature()).unwrap();
        let out = simple_certificate(&f, &gens, 1000).unwrap();
        let w = out.witness.unwrap();
        assert!(w.transversal.is_empty());
        assert_eq!((w.i, w.j), (2, 3));
        assert!(w.forest);

        let (a, b) = (p(&[1, 0, 2]), p(&[0, 2, 1]));
        let four = MonodromyCover::from_parts(0, 3, &[], &[], &[a.clone(), a, b.clone(), b]).unwrap();
        let out = simple_certificate(&four, &braid_generators(four.signature()).unwrap(), 1000).unwrap();
        assert_eq!(out.witness.map(|w| (w.i, w.j)), Some((2, 3)));

        let h = hyperelliptic(6).unwrap();
        assert!(matches!(simple_certificate(&h, &[], 10), Err(Error::NotApplicable(_))));
    }
}
