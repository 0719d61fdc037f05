//! One-directional isomorphism rules for pairs of twists.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::graph::principal_graph;
use crate::group::FinGroup;
use crate::quotient::{
    cyclic_cocycle_test, identify_group, invariants_equivalent, normal_subgroup_structure, CocycleTest,
    ExtendedGroup, Normalization, QuotientGroup,
};
use crate::word::Twist;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Isomorphic,
    Distinct,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Isomorphic => "Isomorphic",
            Verdict::Distinct => "Distinct",
            Verdict::Undetermined => "Undetermined",
        };
        f.write_str(s)
    }
}

/// A verdict with the evidence that decided it.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub reason: String,
    pub graph_hashes: Option<[String; 2]>,
    pub descriptors: Option<[String; 2]>,
    pub cocycle: Option<[CocycleTest; 2]>,
    pub invariants_equivalent: Option<bool>,
}

impl VerdictReport {
    fn new(verdict: Verdict, reason: impl Into<String>) -> Self {
        VerdictReport {
            verdict,
            reason: reason.into(),
            graph_hashes: None,
            descriptors: None,
            cocycle: None,
            invariants_equivalent: None,
        }
    }

    fn decide(mut self, verdict: Verdict, reason: impl Into<String>) -> Self {
        self.verdict = verdict;
        self.reason = reason.into();
        self
    }
}

fn is_prime_cyclic(g: &FinGroup) -> bool {
    let n = g.order();
    g.is_abelian() && n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// No commutator `hkh⁻¹k⁻¹` with `h, k` nontrivial is inner.
fn no_inner_commutators(ext: &ExtendedGroup) -> bool {
    let g = ext.group();
    (1..g.h_order()).all(|h| (1..g.k_order()).all(|k| !ext.is_inner(g.commutator(k, h))))
}

pub fn subfactor_verdict(a: &Twist, b: &Twist, bound: usize, aut_bound: usize) -> Result<VerdictReport> {
    let finite = [
        normal_subgroup_structure(a).is_finite(),
        normal_subgroup_structure(b).is_finite(),
    ];
    match finite {
        [true, true] => {}
        [false, false] => {
            return Ok(VerdictReport::new(
                Verdict::Undetermined,
                "both twists have infinite depth",
            ))
        }
        _ => {
            return Ok(VerdictReport::new(
                Verdict::Distinct,
                "exactly one twist has finite depth",
            ))
        }
    }
    let mut report = VerdictReport::new(Verdict::Undetermined, "");
    let ga = QuotientGroup::build(a, Normalization::Standard, bound)?;
    let gb = QuotientGroup::build(b, Normalization::Standard, bound)?;
    if let (Ok(pa), Ok(pb)) = (principal_graph(&ga), principal_graph(&gb)) {
        let hashes = [pa.canonical_hash(), pb.canonical_hash()];
        let differ = hashes[0] != hashes[1];
        report.graph_hashes = Some(hashes);
        if differ {
            return Ok(report.decide(Verdict::Distinct, "principal graphs differ"));
        }
    }
    let descriptors = [identify_group(&ga).to_string(), identify_group(&gb).to_string()];
    let differ = descriptors[0] != descriptors[1];
    report.descriptors = Some(descriptors);
    if differ {
        return Ok(report.decide(Verdict::Distinct, "groups G differ"));
    }

    let ea = ExtendedGroup::build(a, bound)?;
    let eb = ExtendedGroup::build(b, bound)?;
    let cocycle = [cyclic_cocycle_test(&ea)?, cyclic_cocycle_test(&eb)?];
    let obstructed = |i: usize, e: &ExtendedGroup| cocycle[i].is_witness() && e.inner_order() > 1;
    let split = (obstructed(0, &ea) && eb.inner_order() == 1) || (obstructed(1, &eb) && ea.inner_order() == 1);
    report.cocycle = Some(cocycle);
    if split {
        return Ok(report.decide(
            Verdict::Distinct,
            "one action carries a nontrivial cocycle witness, the other has no inner part",
        ));
    }

    let equivalent = invariants_equivalent(&ea, &eb, aut_bound)?;
    report.invariants_equivalent = Some(equivalent);
    if !equivalent {
        return Ok(report.decide(Verdict::Undetermined, "characteristic invariants differ"));
    }
    let side = is_prime_cyclic(a.h())
        || is_prime_cyclic(a.k())
        || (no_inner_commutators(&ea) && no_inner_commutators(&eb));
    if side {
        Ok(report.decide(Verdict::Isomorphic, "actions are outer conjugate"))
    } else {
        Ok(report.decide(
            Verdict::Undetermined,
            "invariants agree but neither group is prime cyclic and an inner commutator exists",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_AUTOMORPHISM_BOUND;
    use crate::quotient::DEFAULT_GROUP_BOUND;

    fn index4(delta: &str) -> Twist {
        let z2: FinGroup = "Z2".parse().unwrap();
        Twist::from_literals(z2.clone(), z2, &["0", "0", "0", delta]).unwrap()
    }

    fn verdict(a: &Twist, b: &Twist) -> Verdict {
        subfactor_verdict(a, b, DEFAULT_GROUP_BOUND, DEFAULT_AUTOMORPHISM_BOUND)
            .unwrap()
            .verdict
    }

    #[test]
    fn index_four_rules() {
        assert_eq!(verdict(&index4("0"), &index4("1/4")), Verdict::Distinct);
        assert_eq!(verdict(&index4("1/8"), &index4("3/8")), Verdict::Isomorphic);
        assert_eq!(verdict(&index4("1/12"), &index4("5/12")), Verdict::Isomorphic);
        assert_eq!(verdict(&index4("1/8"), &index4("1/12")), Verdict::Distinct);
        assert_eq!(verdict(&index4("1/8"), &index4("0 + 1/1*t1")), Verdict::Distinct);
    }

    fn fourier6(xi: &str) -> Twist {
        let (h, k): (FinGroup, FinGroup) = ("Z2".parse().unwrap(), "Z3".parse().unwrap());
        Twist::from_literals(h, k, &["0", "0", "0", "0", "0", xi]).unwrap()
    }

    #[test]
    fn fifteenth_root_rules() {
        assert_eq!(verdict(&fourier6("1/15"), &fourier6("2/15")), Verdict::Undetermined);
        assert_eq!(verdict(&fourier6("1/15"), &fourier6("4/15")), Verdict::Isomorphic);
    }

    #[test]
    fn prime_cyclic_detection() {
        assert!(is_prime_cyclic(&"Z7".parse().unwrap()));
        assert!(!is_prime_cyclic(&"Z4".parse().unwrap()));
        assert!(!is_prime_cyclic(&"Z1".parse().unwrap()));
        assert!(!is_prime_cyclic(&"S3".parse().unwrap()));
    }
}
