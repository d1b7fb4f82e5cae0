//! The Paley graph P_q: vertices F_q, x ~ y iff x - y is a nonzero square.

use std::io::{self, Write};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ffield::{CharacterTable, FieldSpec};

#[derive(Debug, Clone)]
pub struct PaleyGraph {
    field: FieldSpec,
    rows: Vec<BitSet>,
}

impl PaleyGraph {
    /// Requires q = 1 (mod 4), which makes the edge relation symmetric.
    pub fn build(field: &FieldSpec, chi: &CharacterTable) -> Result<Self> {
        let q = field.q();
        if q % 4 != 1 {
            return Err(Error::NotOneModFour(q));
        }
        let n = field.order();
        let rows = (0..n)
            .map(|x| {
                BitSet::from_indices(n, (0..n).filter(|&y| chi.is_residue(field.sub_idx(x, y))))
            })
            .collect();
        Ok(PaleyGraph {
            field: field.clone(),
            rows,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    #[inline]
    pub fn neighbors(&self, x: usize) -> &BitSet {
        &self.rows[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.rows[x].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Flips one adjacency bit in one row only; breaks symmetry on purpose.
    /// Used to exercise the verifiers' failure paths.
    pub fn inject_fault(&mut self, x: usize, y: usize) {
        self.rows[x].toggle(y);
    }

    /// Edge list: a `q` header line, then one `x y` line per edge with x < y.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.order())?;
        for (x, row) in self.rows.iter().enumerate() {
            for y in row.iter().filter(|&y| y > x) {
                writeln!(out, "{x} {y}")?;
            }
        }
        Ok(())
    }

    /// Checks that `map` sends edges to edges and non-edges to non-edges
    /// (or swaps them when `complement` is set).
    fn maps_onto(&self, map: &[usize], complement: bool) -> bool {
        let n = self.order();
        (0..n).all(|x| {
            (x + 1..n).all(|y| self.adjacent(x, y) ^ complement == self.adjacent(map[x], map[y]))
        })
    }

    pub fn is_automorphism(&self, map: &[usize]) -> bool {
        self.maps_onto(map, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// The Paley parameters (q, (q-1)/2, (q-5)/4, (q-1)/4).
    pub fn paley(q: usize) -> Self {
        SrgParams {
            v: q,
            k: (q - 1) / 2,
            lambda: (q - 5) / 4,
            mu: (q - 1) / 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SrgViolation {
    Degree { vertex: usize, degree: usize },
    SelfLoop { vertex: usize },
    Asymmetric { x: usize, y: usize },
    Lambda { x: usize, y: usize, common: usize },
    Mu { x: usize, y: usize, common: usize },
}

impl std::fmt::Display for SrgViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SrgViolation::Degree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}")
            }
            SrgViolation::SelfLoop { vertex } => write!(f, "self-loop at {vertex}"),
            SrgViolation::Asymmetric { x, y } => write!(f, "edge ({x},{y}) is not symmetric"),
            SrgViolation::Lambda { x, y, common } => {
                write!(f, "adjacent pair ({x},{y}) has {common} common neighbours")
            }
            SrgViolation::Mu { x, y, common } => {
                write!(
                    f,
                    "non-adjacent pair ({x},{y}) has {common} common neighbours"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgReport {
    pub expected: SrgParams,
    pub counterexample: Option<SrgViolation>,
}

impl SrgReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Exhaustive strongly-regular check against the Paley parameters; reports
/// the first violation found.
pub fn verify_srg(g: &PaleyGraph) -> SrgReport {
    let n = g.order();
    let expected = SrgParams::paley(n);
    let counterexample = first_srg_violation(g, expected);
    SrgReport {
        expected,
        counterexample,
    }
}

fn first_srg_violation(g: &PaleyGraph, params: SrgParams) -> Option<SrgViolation> {
    let n = g.order();
    for x in 0..n {
        if g.adjacent(x, x) {
            return Some(SrgViolation::SelfLoop { vertex: x });
        }
        let degree = g.degree(x);
        if degree != params.k {
            return Some(SrgViolation::Degree { vertex: x, degree });
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let adjacent = g.adjacent(x, y);
            if adjacent != g.adjacent(y, x) {
                return Some(SrgViolation::Asymmetric { x, y });
            }
            let common = g.neighbors(x).intersection_count(g.neighbors(y));
            if adjacent && common != params.lambda {
                return Some(SrgViolation::Lambda { x, y, common });
            }
            if !adjacent && common != params.mu {
                return Some(SrgViolation::Mu { x, y, common });
            }
        }
    }
    None
}

/// Checks that x -> z*x maps P_q onto its complement, z the smallest non-residue.
pub fn verify_self_complementary(g: &PaleyGraph, chi: &CharacterTable) -> bool {
    verify_self_complementary_with(g, chi.smallest_nonresidue())
}

pub fn verify_self_complementary_with(g: &PaleyGraph, z: usize) -> bool {
    let field = g.field();
    let map: Vec<usize> = (0..g.order()).map(|x| field.mul_idx(z, x)).collect();
    g.maps_onto(&map, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: u64, k: u32) -> (PaleyGraph, CharacterTable) {
        let f = FieldSpec::new(p, k, None).unwrap();
        let chi = CharacterTable::build(&f).unwrap();
        (PaleyGraph::build(&f, &chi).unwrap(), chi)
    }

    #[test]
    fn p5_is_the_five_cycle() {
        let (g, _) = graph(5, 1);
        assert_eq!(g.neighbors(0).iter().collect::<Vec<_>>(), vec![1, 4]);
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn p13_degrees() {
        let (g, _) = graph(13, 1);
        assert!((0..13).all(|x| g.degree(x) == 6));
    }

    #[test]
    fn p9_prime_subfield_adjacent_to_zero() {
        let (g, _) = graph(3, 2);
        assert!(g.adjacent(0, 1));
        assert!(g.adjacent(0, 2));
        assert!(g.adjacent(1, 2));
    }

    #[test]
    fn rejects_three_mod_four() {
        let f = FieldSpec::prime(7).unwrap();
        let chi = CharacterTable::build(&f).unwrap();
        assert!(matches!(
            PaleyGraph::build(&f, &chi),
            Err(Error::NotOneModFour(7))
        ));
    }

    #[test]
    fn srg_parameters() {
        let (g, _) = graph(13, 1);
        let report = verify_srg(&g);
        assert!(report.passed());
        assert_eq!(
            report.expected,
            SrgParams {
                v: 13,
                k: 6,
                lambda: 2,
                mu: 3
            }
        );
        let (g, _) = graph(5, 1);
        let report = verify_srg(&g);
        assert!(report.passed());
        assert_eq!(
            report.expected,
            SrgParams {
                v: 5,
                k: 2,
                lambda: 0,
                mu: 1
            }
        );
    }

    #[test]
    fn flipped_bit_is_caught() {
        let (mut g, chi) = graph(13, 1);
        g.inject_fault(0, 2);
        let report = verify_srg(&g);
        assert_eq!(
            report.counterexample,
            Some(SrgViolation::Degree {
                vertex: 0,
                degree: 7
            })
        );
        assert!(!verify_self_complementary(&g, &chi));
    }

    #[test]
    fn self_complementary_small() {
        let (g, chi) = graph(5, 1);
        assert_eq!(chi.smallest_nonresidue(), 2);
        assert!(verify_self_complementary(&g, &chi));
        let (g, _) = graph(13, 1);
        assert!(verify_self_complementary_with(&g, 2));
        let (g, _) = graph(17, 1);
        assert!(verify_self_complementary_with(&g, 3));
        // a residue maps the graph to itself, not its complement
        assert!(!verify_self_complementary_with(&g, 2));
    }

    #[test]
    fn edge_list_format() {
        let (g, _) = graph(5, 1);
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "5\n0 1\n0 4\n1 2\n2 3\n3 4\n"
        );
    }
}
