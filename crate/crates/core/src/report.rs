//! The analysis report emitted by `bh analyze`.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cover::{FiberData, MonodromyCover, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::verdict::{bh_verdict, reverify, SearchData, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub regular: bool,
    #[serde(rename = "NU")]
    pub nu: bool,
    pub equal_ramification: bool,
    pub simple: bool,
    pub deck_group_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalSpace {
    pub euler_characteristic: i64,
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub format: u32,
    pub input_sha256: String,
    pub cover: MonodromyCover,
    pub properties: Properties,
    pub total_space: TotalSpace,
    pub fibers: Vec<FiberData>,
    /// Absent when no verdict applies, with the reason in `verdict_error`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_error: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(input: &[u8], cover: &MonodromyCover, data: &SearchData, limit: usize) -> Result<Report> {
        let (verdict, verdict_error) = match bh_verdict(cover, data, limit) {
            Ok(v) => (Some(v), None),
            Err(e @ Error::NonNegativeEuler(_)) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        Ok(Report {
            format: FORMAT_VERSION,
            input_sha256: sha256_hex(input),
            cover: cover.clone(),
            properties: Properties {
                regular: cover.is_regular(),
                nu: cover.has_property_nu(),
                equal_ramification: cover.has_equal_ramification(),
                simple: cover.is_simple_cover(),
                deck_group_order: cover.deck_group_order(),
            },
            total_space: TotalSpace {
                euler_characteristic: cover.euler_characteristic_total(),
                genus: cover.total_genus(),
            },
            fibers: cover.fibers().to_vec(),
            verdict,
            verdict_error,
        })
    }

    /// Recomputes every block from the embedded cover and checks the verdict's certificate.
    pub fn reverify(&self, data: &SearchData) -> Result<bool> {
        let c = &self.cover;
        let blocks_agree = self.properties.regular == c.is_regular()
            && self.properties.nu == c.has_property_nu()
            && self.properties.equal_ramification == c.has_equal_ramification()
            && self.properties.simple == c.is_simple_cover()
            && self.properties.deck_group_order == c.deck_group_order()
            && self.total_space.euler_characteristic == c.euler_characteristic_total()
            && self.total_space.genus == c.total_genus()
            && self.fibers.as_slice() == c.fibers();
        Ok(blocks_agree
            && match &self.verdict {
                Some(v) => reverify(c, data, v)?,
                None => c.euler_characteristic_total() >= 0,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::samples::simple3;
    use crate::graphcover::path4_example;
    use crate::io::to_pretty_json;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn reports_reverify_and_are_deterministic() {
        for cover in [path4_example(), simple3()] {
            let input = to_pretty_json(&cover).unwrap();
            let r = Report::new(input.as_bytes(), &cover, &SearchData::default(), 1000).unwrap();
            assert!(r.reverify(&SearchData::default()).unwrap());
            let again = Report::new(input.as_bytes(), &cover, &SearchData::default(), 1000).unwrap();
            assert_eq!(to_pretty_json(&r).unwrap(), to_pretty_json(&again).unwrap());
        }
    }

    #[test]
    fn spherical_total_space_has_no_verdict() {
        let t = crate::perm::Perm::transposition(2, 0, 1).unwrap();
        let c = MonodromyCover::from_parts(0, 2, &[], &[], &[t.clone(), t]).unwrap();
        let r = Report::new(b"x", &c, &SearchData::default(), 10).unwrap();
        assert!(r.verdict.is_none());
        assert!(r.verdict_error.is_some());
        assert!(r.reverify(&SearchData::default()).unwrap());
    }
}
