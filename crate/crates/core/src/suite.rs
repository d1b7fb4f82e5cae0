//! The full per-order invariant suite behind the `verify` command.

use crate::batch::{analyze_graph, field_for, Analysis};
use crate::bounds::{self, Classification};
use crate::check::{all_passed, first_failure, Check};
use crate::clique::{is_clique, is_maximal, max_clique_naive};
use crate::error::Result;
use crate::ffield::CharacterTable;
use crate::paley::{verify_self_complementary, verify_srg, PaleyGraph};
use crate::phi;
use crate::primes::isqrt;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Orders up to this size are cross-checked against the naive oracle.
    pub oracle_cap: u64,
    /// Flip one adjacency bit before checking. Test hook.
    pub inject_fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            oracle_cap: crate::clique::NAIVE_CAP,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub q: u64,
    pub s: usize,
    pub checks: Vec<Check>,
    /// Checks not applicable to this order, with the reason.
    pub skipped: Vec<(&'static str, &'static str)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        first_failure(&self.checks)
    }
}

pub fn verify_order(q: u64, opts: &SuiteOptions) -> Result<SuiteReport> {
    let field = field_for(q)?;
    let chi = CharacterTable::build(&field)?;
    let mut graph = PaleyGraph::build(&field, &chi)?;
    if opts.inject_fault {
        let y = (1..graph.order())
            .find(|&y| !graph.adjacent(0, y))
            .expect("P_q has non-edges");
        graph.inject_fault(0, y);
    }

    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    let srg = verify_srg(&graph);
    checks.push(Check::new(
        "strongly regular (q,(q-1)/2,(q-5)/4,(q-1)/4)",
        srg.passed(),
        srg.counterexample
            .map_or_else(|| format!("{:?}", srg.expected), |v| v.to_string()),
    ));
    checks.push(Check::new(
        "self-complementary under x -> z*x",
        verify_self_complementary(&graph, &chi),
        format!("z = {}", chi.smallest_nonresidue()),
    ));
    let half = (q as usize - 1) / 2;
    checks.push(Check::new(
        "|Q| = |NQ| = (q-1)/2",
        chi.residues().count() == half && chi.nonresidues().count() == half,
        format!(
            "|Q| = {}, |NQ| = {}",
            chi.residues().count(),
            chi.nonresidues().count()
        ),
    ));

    let a = analyze_graph(field, chi, graph)?;
    let s = a.clique.s;

    if q <= opts.oracle_cap {
        let naive = max_clique_naive(&a.graph, opts.oracle_cap)?;
        checks.push(Check::equal(
            "branch-and-bound = naive oracle",
            naive.s as i64,
            s as i64,
        ));
    } else {
        skipped.push(("naive oracle", "q above oracle cap"));
    }

    checks.push(Check::new(
        "witness is a maximal clique",
        is_clique(&a.clique.witness, &a.graph)
            && is_maximal(&a.clique.witness, &a.graph) == Ok(true),
        format!("{:?}", a.clique.witness),
    ));
    let n = isqrt(q);
    checks.push(Check::new(
        "s^2 <= q",
        (s * s) as u64 <= q,
        format!("s = {s}"),
    ));
    if a.field.k() % 2 == 0 {
        checks.push(Check::new(
            "s = sqrt(q) for even k",
            (s * s) as u64 == q,
            format!("s = {s}, q = {q}"),
        ));
    }

    checks.extend(phi::verify_moments(&a.profile, q));
    checks.extend(phi::validate_dset(&a.field, &a.chi, &a.profile, &a.dset));
    checks.extend(phi::verify_lemma_count(&a.field, &a.chi, &a.clique.witness, &a.dset).checks());
    checks.push(Check::new(
        "floor(1+(q-1)/(2r)) >= s",
        a.lemma_bound >= s as u64,
        format!("r = {}, bound = {}", a.dset.r, a.lemma_bound),
    ));

    let guarantee = phi::parity_guarantee(&a.profile, &a.field, a.best);
    if guarantee.applies {
        checks.push(Check::new(
            "phi_min <= -2 (s even) / -3 (s odd)",
            guarantee.met(),
            format!(
                "phi_min = {}, required <= {}",
                guarantee.phi_min, guarantee.required_max
            ),
        ));
    } else {
        skipped.push(("parity guarantee", "s < floor(sqrt q) or k even"));
    }

    theorem_checks(&a, n, &mut checks, &mut skipped);

    if a.field.k() == 1 {
        let poly = bounds::poly_zero_check(&a.field, &a.chi, &a.clique.witness)?;
        checks.push(Check::new(
            "interpolant reproduces phi1 mod p",
            poly.roundtrip,
            format!("{} points", poly.p),
        ));
        checks.push(Check::new(
            "deg phi1 = (p-1)/2",
            poly.degree_ok(),
            format!("degree {}", poly.degree),
        ));
        checks.push(Check::new(
            "leading coefficient = s mod p",
            poly.leading_ok(),
            format!("leading {}, s = {s}", poly.leading),
        ));
        checks.push(Check::new(
            "zeros of phi1 <= (p-1)/2",
            poly.zeros_ok(),
            format!("{} zeros", poly.zero_count),
        ));
    } else {
        skipped.push(("polynomial zero count", "extension field"));
    }

    Ok(SuiteReport {
        q,
        s,
        checks,
        skipped,
    })
}

fn theorem_checks(
    a: &Analysis,
    n: u64,
    checks: &mut Vec<Check>,
    skipped: &mut Vec<(&'static str, &'static str)>,
) {
    let Some(b) = &a.bounds else {
        skipped.push(("parity bound", "k even"));
        return;
    };
    let s = a.clique.s as u64;
    checks.push(Check::new(
        "s <= theorem bound <= floor(sqrt q)",
        b.consistent(),
        format!("s = {s}, bound = {}, n = {n}", b.theorem_bound),
    ));
    checks.push(Check::new(
        "theorem bound < n iff classified improved",
        b.improved == b.classification.improved(),
        format!("{}", b.classification),
    ));
    let exception = b.classification == Classification::CaseIIException;
    checks.push(Check::new(
        "exception iff n odd and bound = n",
        exception == (n % 2 == 1 && b.theorem_bound == n),
        format!("{}", b.classification),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders_pass() {
        for q in [5, 13, 17, 29, 125] {
            let r = verify_order(q, &SuiteOptions::default()).unwrap();
            assert!(r.passed(), "q = {q}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn even_k_equality() {
        let r = verify_order(9, &SuiteOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.s, 3);
        assert!(r.skipped.iter().any(|(name, _)| *name == "parity bound"));
    }

    #[test]
    fn fault_is_reported_as_srg_failure() {
        let opts = SuiteOptions {
            inject_fault: true,
            ..SuiteOptions::default()
        };
        let r = verify_order(13, &opts).unwrap();
        assert!(!r.passed());
        assert!(r
            .first_failure()
            .unwrap()
            .name
            .starts_with("strongly regular"));
    }
}
