//! Birman–Hilden verdicts with the rule that decided them and a certificate
//! that can be checked again from the cover alone.

use serde::Serialize;

use crate::coloring::{check_simple_hypotheses, gamma_graph, is_forest, simple_certificate, SimpleCertificateOutcome};
use crate::cover::{FiberData, MonodromyCover};
use crate::error::{Error, Result};
use crate::lifting::{essential_flags, wcl_decision_with, CurveCatalog, CurveRef, CutPresentation, WclCertificate, WclOutcome};
use crate::orbit::{act, canonicalize};
use crate::presentation::{braid_generators, Automorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "BH_HOLDS")]
    Holds,
    #[serde(rename = "BH_FAILS")]
    Fails,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Status {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 10,
            Status::Inconclusive => 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    #[serde(rename = "NU")]
    Nu,
    #[serde(rename = "regular")]
    Regular,
    #[serde(rename = "simple-cover")]
    SimpleCover,
    #[serde(rename = "weak-curve-lifting")]
    WeakCurveLifting,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Every preimage of every branch point is ramified.
    Fibers { fibers: Vec<FiberData> },
    /// The deck group acts transitively on a fiber.
    Deck { deck_group_order: usize, degree: usize },
    Simple {
        coloring: SimpleCertificateOutcome,
        #[serde(skip_serializing_if = "Option::is_none")]
        wcl: Option<WclCertificate>,
    },
    Wcl { wcl: WclCertificate },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Mapping class data for the orbit searches. Genus-0 bases default to the
/// half-twists and standard curves; positive genus needs both fields.
#[derive(Debug, Clone, Default)]
pub struct SearchData {
    pub automorphisms: Option<Vec<Automorphism>>,
    pub cuts: Option<Vec<CutPresentation>>,
}

impl SearchData {
    pub fn generators(&self, cover: &MonodromyCover) -> Result<Option<Vec<Automorphism>>> {
        match &self.automorphisms {
            Some(g) => Ok(Some(g.clone())),
            None if cover.signature().genus == 0 && cover.signature().branch_count >= 2 => {
                Ok(Some(braid_generators(cover.signature())?))
            }
            None => Ok(None),
        }
    }

    /// `None` when no catalog applies: genus 0 with `k < 4`, or positive genus without cuts.
    pub fn catalog(&self, cover: &MonodromyCover) -> Result<Option<CurveCatalog>> {
        let sig = cover.signature();
        match &self.cuts {
            Some(cuts) => Ok(Some(CurveCatalog::from_cuts(sig, cuts.clone())?)),
            None if sig.genus == 0 && sig.branch_count >= 4 => Ok(Some(CurveCatalog::standard(sig)?)),
            None => Ok(None),
        }
    }

    fn resolve(&self, cover: &MonodromyCover, curve: &CurveRef) -> Result<CutPresentation> {
        match curve {
            CurveRef::Standard { m } => CutPresentation::disk(cover.signature(), *m),
            CurveRef::Cut { index } => self
                .cuts
                .as_ref()
                .and_then(|c| c.get(*index))
                .cloned()
                .ok_or_else(|| Error::MalformedCut(format!("certificate names cut {index}, which was not supplied"))),
        }
    }
}

fn require_hyperbolic(cover: &MonodromyCover) -> Result<()> {
    let chi = cover.euler_characteristic_total();
    if chi >= 0 {
        return Err(Error::NonNegativeEuler(chi));
    }
    Ok(())
}

fn wcl_search(cover: &MonodromyCover, data: &SearchData, limit: usize) -> Result<Option<WclOutcome>> {
    let (Some(gens), Some(catalog)) = (data.generators(cover)?, data.catalog(cover)?) else {
        return Ok(None);
    };
    wcl_decision_with(cover, &gens, &catalog, limit).map(Some)
}

pub fn bh_verdict(cover: &MonodromyCover, data: &SearchData, limit: usize) -> Result<Verdict> {
    require_hyperbolic(cover)?;
    if cover.has_property_nu() {
        return Ok(Verdict {
            status: Status::Holds,
            rule: Rule::Nu,
            certificate: Some(Certificate::Fibers {
                fibers: cover.fibers().to_vec(),
            }),
            note: None,
        });
    }
    if cover.is_regular() {
        return Ok(Verdict {
            status: Status::Holds,
            rule: Rule::Regular,
            certificate: Some(Certificate::Deck {
                deck_group_order: cover.deck_group_order(),
                degree: cover.degree(),
            }),
            note: None,
        });
    }
    if check_simple_hypotheses(cover).is_ok() {
        let gens = data.generators(cover)?.unwrap_or_default();
        let coloring = simple_certificate(cover, &gens, limit)?;
        let mut note = coloring
            .best_effort
            .then(|| "no orbit class with adjacent distinct colors was found; the verdict rests on the simple-cover criterion alone".to_string());
        let wcl = match wcl_search(cover, data, limit) {
            Ok(Some(WclOutcome::Fails { certificate })) => Some(certificate),
            Ok(_) => None,
            Err(Error::OrbitLimitExceeded(n)) => {
                note = Some(format!("weak curve lifting certificate omitted: orbit exceeds {n} classes"));
                None
            }
            Err(e) => return Err(e),
        };
        return Ok(Verdict {
            status: Status::Fails,
            rule: Rule::SimpleCover,
            certificate: Some(Certificate::Simple { coloring, wcl }),
            note,
        });
    }
    let inconclusive = |note: String| Verdict {
        status: Status::Inconclusive,
        rule: Rule::None,
        certificate: None,
        note: Some(note),
    };
    match wcl_search(cover, data, limit) {
        Ok(Some(WclOutcome::Fails { certificate })) => Ok(Verdict {
            status: Status::Fails,
            rule: Rule::WeakCurveLifting,
            certificate: Some(Certificate::Wcl { wcl: certificate }),
            note: None,
        }),
        Ok(Some(WclOutcome::Holds { .. })) => Ok(inconclusive(
            "weak curve lifting holds; it is necessary for the Birman–Hilden property but not known to be sufficient"
                .into(),
        )),
        Ok(None) => Ok(inconclusive(
            "no rule applies and weak curve lifting was not checked: supply automorphisms and cuts for this base".into(),
        )),
        Err(Error::OrbitLimitExceeded(n)) => Ok(inconclusive(format!(
            "weak curve lifting undecided: orbit exceeds {n} classes"
        ))),
        Err(e) => Err(e),
    }
}

/// Applies automorphisms named by label, left to right.
pub fn apply_labels(cover: &MonodromyCover, gens: &[Automorphism], labels: &[String]) -> Result<MonodromyCover> {
    let mut current = cover.clone();
    for l in labels {
        let f = gens
            .iter()
            .find(|g| g.label() == l)
            .ok_or_else(|| Error::NotApplicable(format!("unknown automorphism label {l:?}")))?;
        current = act(&current, f)?;
    }
    Ok(current)
}

/// The certificate's class is reached from `cover` by its transversal, and
/// the named curve lifts to exactly the recorded, all-inessential components.
pub fn reverify_wcl(cover: &MonodromyCover, data: &SearchData, cert: &WclCertificate) -> Result<bool> {
    let gens = data.generators(cover)?.unwrap_or_default();
    let moved = apply_labels(cover, &gens, &cert.transversal)?;
    if canonicalize(&moved).canonical != cert.cover {
        return Ok(false);
    }
    let cut = data.resolve(cover, &cert.curve)?;
    let lifted = essential_flags(&cert.cover, &cut)?;
    Ok(lifted.all_inessential() && lifted.components == cert.components)
}

/// Recomputes the verdict's justification from the cover.
pub fn reverify(cover: &MonodromyCover, data: &SearchData, verdict: &Verdict) -> Result<bool> {
    let ok = match (&verdict.status, &verdict.rule, &verdict.certificate) {
        (Status::Holds, Rule::Nu, Some(Certificate::Fibers { fibers })) => {
            cover.has_property_nu() && fibers.as_slice() == cover.fibers()
        }
        (Status::Holds, Rule::Regular, Some(Certificate::Deck { deck_group_order, degree })) => {
            cover.is_regular() && *deck_group_order == cover.deck_group_order() && *degree == cover.degree()
        }
        (Status::Fails, Rule::SimpleCover, Some(Certificate::Simple { coloring, wcl })) => {
            let mut ok = check_simple_hypotheses(cover).is_ok();
            if let Some(w) = &coloring.witness {
                let gens = data.generators(cover)?.unwrap_or_default();
                let moved = apply_labels(cover, &gens, &w.transversal)?;
                let gamma = gamma_graph(&moved, w.i, w.j)?;
                ok &= w.j == w.i + 1
                    && moved.c_image(w.i) != moved.c_image(w.j)
                    && is_forest(&gamma)
                    && gamma == w.gamma;
            }
            if let Some(c) = wcl {
                ok &= reverify_wcl(cover, data, c)?;
            }
            ok
        }
        (Status::Fails, Rule::WeakCurveLifting, Some(Certificate::Wcl { wcl })) => reverify_wcl(cover, data, wcl)?,
        (Status::Inconclusive, Rule::None, None) => {
            !cover.has_property_nu() && !cover.is_regular() && check_simple_hypotheses(cover).is_err()
        }
        _ => false,
    };
    Ok(ok)
}
