//! Lifting simple closed curves through a cover.
//!
//! A separating curve cuts the base into two sides. Its preimage is a
//! multicurve whose components are the cycles of `ρ(boundary word)`, and the
//! preimages of the two sides decompose into regions indexed by the orbits of
//! each side's generators. Regions are nodes and lifted components are edges of
//! a [`RegionGraph`]; a lifted component bounds a disk exactly when removing
//! its edge splits off a part of total Euler characteristic 1.

use serde::{Deserialize, Serialize};

use crate::cover::MonodromyCover;
use crate::error::{Error, Result};
use crate::orbit::OrbitWalk;
use crate::perm::{self, Perm};
use crate::presentation::{braid_generators, Automorphism, Generator, GroupWord, Signature};

/// Default cap on the number of orbit classes visited.
pub const DEFAULT_ORBIT_LIMIT: usize = 100_000;

/// The boundary of a disk around `x_1, .., x_m` on a marked sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StandardCurve {
    pub m: usize,
}

impl StandardCurve {
    /// Essential curves only: each side holds at least two marked points.
    pub fn new(sig: Signature, m: usize) -> Result<Self> {
        if sig.genus != 0 {
            return Err(Error::UnsupportedSignature(format!(
                "standard curves are defined for genus-0 bases, got {sig}"
            )));
        }
        if m < 2 || m + 2 > sig.branch_count {
            return Err(Error::MalformedCut(format!(
                "m = {m} does not give an essential curve on the sphere with {} marked points",
                sig.branch_count
            )));
        }
        Ok(StandardCurve { m })
    }

    /// Representatives of every topological type: `m = 2 ..= ⌊k/2⌋`.
    pub fn catalog(sig: Signature) -> Result<Vec<StandardCurve>> {
        if sig.genus != 0 {
            return Err(Error::UnsupportedSignature(format!(
                "no built-in curve catalog for {sig}; supply cut presentations"
            )));
        }
        if sig.branch_count < 4 {
            return Err(Error::TooFewBranchPoints(sig.branch_count));
        }
        (2..=sig.branch_count / 2).map(|m| StandardCurve::new(sig, m)).collect()
    }

    pub fn word(&self) -> GroupWord {
        GroupWord::new((1..=self.m).map(|i| crate::presentation::Letter::new(Generator::C(i))))
    }

    pub fn cut(&self, sig: Signature) -> CutPresentation {
        CutPresentation::disk(sig, self.m).expect("validated in StandardCurve::new")
    }
}

/// A separating curve given by the generators on each side, the Euler
/// characteristic of each closed side, and the curve as a word in side A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPresentation {
    pub side_a: Vec<Generator>,
    pub chi_a: i64,
    pub side_b: Vec<Generator>,
    pub chi_b: i64,
    pub boundary: GroupWord,
}

impl CutPresentation {
    /// Genus-0 cut around `x_1, .., x_m` for any `1 ≤ m < k`. Both sides are disks.
    pub fn disk(sig: Signature, m: usize) -> Result<Self> {
        if sig.genus != 0 || m == 0 || m >= sig.branch_count {
            return Err(Error::MalformedCut(format!("no disk cut with m = {m} on {sig}")));
        }
        Ok(CutPresentation {
            side_a: (1..=m).map(Generator::C).collect(),
            chi_a: 1,
            side_b: (m + 1..=sig.branch_count).map(Generator::C).collect(),
            chi_b: 1,
            boundary: StandardCurve { m }.word(),
        })
    }

    pub fn check(&self, sig: Signature) -> Result<()> {
        let mut seen = vec![0u8; sig.generator_count()];
        for &g in self.side_a.iter().chain(&self.side_b) {
            if !sig.contains(g) {
                return Err(Error::MalformedCut(format!("{g} is not a generator of {sig}")));
            }
            seen[g.index(sig)] += 1;
        }
        if let Some(idx) = seen.iter().position(|&c| c != 1) {
            return Err(Error::MalformedCut(format!(
                "{} must appear on exactly one side",
                Generator::from_index(sig, idx)
            )));
        }
        if self.chi_a + self.chi_b != sig.euler_characteristic() {
            return Err(Error::MalformedCut(format!(
                "side Euler characteristics {} + {} do not add up to {}",
                self.chi_a,
                self.chi_b,
                sig.euler_characteristic()
            )));
        }
        if self.boundary.is_empty() {
            return Err(Error::MalformedCut("empty boundary word".into()));
        }
        if let Some(g) = self.boundary.generators().find(|g| !self.side_a.contains(g)) {
            return Err(Error::MalformedCut(format!(
                "boundary word uses {g}, which is not on side A"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftComponent {
    /// The cycle of `ρ(boundary)`, starting at its least sheet.
    pub sheets: Vec<usize>,
    /// Degree of the component over the base curve.
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub essential: Option<bool>,
    /// When the component separates the total space: Euler characteristics of
    /// the part on its side-A region and of the part on its side-B region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftedMulticurve {
    pub components: Vec<LiftComponent>,
}

impl LiftedMulticurve {
    pub fn all_inessential(&self) -> bool {
        self.components.iter().all(|c| c.essential == Some(false))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub sheets: Vec<usize>,
    pub chi: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionEdge {
    /// Index into `a_nodes`.
    pub a: usize,
    /// Index into `b_nodes`.
    pub b: usize,
}

/// Regions over the two sides of a cut, joined by the lifted curve components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionGraph {
    pub a_nodes: Vec<Region>,
    pub b_nodes: Vec<Region>,
    /// One edge per lifted component, in component order.
    pub edges: Vec<RegionEdge>,
}

impl RegionGraph {
    pub fn total_chi(&self) -> i64 {
        self.a_nodes.iter().chain(&self.b_nodes).map(|r| r.chi).sum()
    }

    fn node_count(&self) -> usize {
        self.a_nodes.len() + self.b_nodes.len()
    }

    /// Connected components after deleting edge `skip` (if any), as a label per node.
    fn components_without(&self, skip: Option<usize>) -> Vec<usize> {
        let offset = self.a_nodes.len();
        let mut parent: Vec<usize> = (0..self.node_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (idx, e) in self.edges.iter().enumerate() {
            if Some(idx) == skip {
                continue;
            }
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, offset + e.b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..self.node_count()).map(|x| find(&mut parent, x)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let comp = self.components_without(None);
        comp.iter().all(|&c| c == comp[0])
    }

    fn chi_of(&self, node: usize) -> i64 {
        let offset = self.a_nodes.len();
        if node < offset {
            self.a_nodes[node].chi
        } else {
            self.b_nodes[node - offset].chi
        }
    }

    /// If deleting edge `e` disconnects the graph, the total χ of the part
    /// containing its A endpoint and of the part containing its B endpoint.
    pub fn split(&self, e: usize) -> Option<(i64, i64)> {
        let edge = self.edges[e];
        let comp = self.components_without(Some(e));
        let (ca, cb) = (comp[edge.a], comp[self.a_nodes.len() + edge.b]);
        if ca == cb {
            return None;
        }
        let sum = |c| {
            (0..self.node_count())
                .filter(|&x| comp[x] == c)
                .map(|x| self.chi_of(x))
                .sum::<i64>()
        };
        Some((sum(ca), sum(cb)))
    }
}

/// Components of the preimage of the cut curve: the cycles of `ρ(boundary)`.
pub fn lift_components(cover: &MonodromyCover, cut: &CutPresentation) -> Result<LiftedMulticurve> {
    cut.check(cover.signature())?;
    let rho = cover.evaluate(&cut.boundary)?;
    Ok(LiftedMulticurve {
        components: rho
            .cycles()
            .cycles
            .into_iter()
            .map(|sheets| LiftComponent {
                degree: sheets.len(),
                sheets,
                essential: None,
                split: None,
            })
            .collect(),
    })
}

fn side_regions(cover: &MonodromyCover, side: &[Generator], chi_side: i64) -> Vec<Region> {
    let perms: Vec<&Perm> = side.iter().map(|&g| cover.image(g)).collect();
    let branch: Vec<&Perm> = side
        .iter()
        .filter(|g| g.is_branch_loop())
        .map(|&g| cover.image(g))
        .collect();
    perm::orbits_unchecked(cover.degree(), perms.iter().copied())
        .into_iter()
        .map(|sheets| {
            let size = sheets.len() as i64;
            // Riemann–Hurwitz for the restricted cover of this side.
            let defect: i64 = branch
                .iter()
                .map(|p| size - p.cycle_count_on(&sheets) as i64)
                .sum();
            Region {
                chi: size * chi_side - defect,
                sheets,
            }
        })
        .collect()
}

pub fn region_graph(cover: &MonodromyCover, cut: &CutPresentation) -> Result<RegionGraph> {
    let lifted = lift_components(cover, cut)?;
    let a_nodes = side_regions(cover, &cut.side_a, cut.chi_a);
    let b_nodes = side_regions(cover, &cut.side_b, cut.chi_b);
    let owner = |nodes: &[Region]| {
        let mut owner = vec![0; cover.degree()];
        for (idx, r) in nodes.iter().enumerate() {
            for &s in &r.sheets {
                owner[s] = idx;
            }
        }
        owner
    };
    let (owner_a, owner_b) = (owner(&a_nodes), owner(&b_nodes));
    let mut edges = Vec::with_capacity(lifted.components.len());
    for c in &lifted.components {
        let a = owner_a[c.sheets[0]];
        let b = owner_b[c.sheets[0]];
        if c.sheets.iter().any(|&s| owner_a[s] != a || owner_b[s] != b) {
            return Err(Error::MalformedCut(format!(
                "lifted component {:?} straddles regions; the boundary word is not a side-B element",
                c.sheets
            )));
        }
        edges.push(RegionEdge { a, b });
    }
    Ok(RegionGraph {
        a_nodes,
        b_nodes,
        edges,
    })
}

/// Marks each lifted component essential or not. The total space is closed
/// with unmarked points, so a component is inessential exactly when it bounds
/// a disk: it separates and one side has Euler characteristic 1.
pub fn essential_flags(cover: &MonodromyCover, cut: &CutPresentation) -> Result<LiftedMulticurve> {
    let mut lifted = lift_components(cover, cut)?;
    let graph = region_graph(cover, cut)?;
    for (idx, c) in lifted.components.iter_mut().enumerate() {
        c.split = graph.split(idx);
        c.essential = Some(match c.split {
            None => true,
            Some((x, y)) => x != 1 && y != 1,
        });
    }
    Ok(lifted)
}

/// Which curve a WCL certificate refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveRef {
    Standard { m: usize },
    /// Index into a user-supplied cut catalog.
    Cut { index: usize },
}

/// The curves checked by a WCL search.
#[derive(Debug, Clone)]
pub struct CurveCatalog {
    pub entries: Vec<(CurveRef, CutPresentation)>,
}

impl CurveCatalog {
    pub fn standard(sig: Signature) -> Result<Self> {
        Ok(CurveCatalog {
            entries: StandardCurve::catalog(sig)?
                .into_iter()
                .map(|c| (CurveRef::Standard { m: c.m }, c.cut(sig)))
                .collect(),
        })
    }

    pub fn from_cuts(sig: Signature, cuts: Vec<CutPresentation>) -> Result<Self> {
        for c in &cuts {
            c.check(sig)?;
        }
        Ok(CurveCatalog {
            entries: cuts
                .into_iter()
                .enumerate()
                .map(|(index, c)| (CurveRef::Cut { index }, c))
                .collect(),
        })
    }

    pub fn get(&self, r: &CurveRef) -> Option<&CutPresentation> {
        self.entries.iter().find(|(x, _)| x == r).map(|(_, c)| c)
    }
}

/// Evidence that WCL fails: a class in the mapping class group orbit whose
/// lift of a catalog curve has no essential component. By pullback this is
/// the lift of `h(γ)` under the original cover, `h` the transversal word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WclCertificate {
    pub transversal: Vec<String>,
    pub curve: CurveRef,
    /// The canonical cover of the class the components were computed on.
    pub cover: MonodromyCover,
    pub components: Vec<LiftComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum WclOutcome {
    Holds { classes: usize, curves: usize },
    Fails { certificate: WclCertificate },
}

impl WclOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, WclOutcome::Holds { .. })
    }

    pub fn certificate(&self) -> Option<&WclCertificate> {
        match self {
            WclOutcome::Fails { certificate } => Some(certificate),
            WclOutcome::Holds { .. } => None,
        }
    }
}

/// Weak curve lifting check over an explicit generating set and curve catalog.
/// Classes are visited in BFS order and curves in catalog order; the first
/// all-inessential lift is returned.
pub fn wcl_decision_with(
    cover: &MonodromyCover,
    gens: &[Automorphism],
    catalog: &CurveCatalog,
    limit: usize,
) -> Result<WclOutcome> {
    let mut walk = OrbitWalk::new(cover, gens, limit, true)?;
    let mut classes = 0;
    while let Some(entry) = walk.next_class()? {
        classes += 1;
        for (curve, cut) in &catalog.entries {
            let lifted = essential_flags(&entry.class, cut)?;
            if lifted.all_inessential() {
                return Ok(WclOutcome::Fails {
                    certificate: WclCertificate {
                        transversal: entry.transversal.clone(),
                        curve: curve.clone(),
                        cover: entry.class.clone(),
                        components: lifted.components,
                    },
                });
            }
        }
    }
    Ok(WclOutcome::Holds {
        classes,
        curves: catalog.entries.len(),
    })
}

/// Weak curve lifting check for a genus-0 base using half-twist generators
/// and the standard curves `m = 2 ..= ⌊k/2⌋`.
pub fn wcl_decision(cover: &MonodromyCover, limit: usize) -> Result<WclOutcome> {
    let sig = cover.signature();
    if sig.genus != 0 {
        return Err(Error::UnsupportedSignature(format!(
            "{sig}: positive-genus bases need a user automorphism set and cut catalog"
        )));
    }
    let catalog = CurveCatalog::standard(sig)?;
    let gens = braid_generators(sig)?;
    wcl_decision_with(cover, &gens, &catalog, limit)
}
