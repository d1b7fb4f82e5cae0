//! The character-sum profile phi(t) = sum over b in B of chi(b - t), its
//! moment identities, and the D-sets built from it.

use num_rational::Ratio;

use crate::bitset::BitSet;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::ffield::{CharacterTable, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiProfile {
    pub clique: Vec<usize>,
    pub s: usize,
    pub phi: Vec<i64>,
    /// phi + 1 pointwise.
    pub phi1: Vec<i64>,
    pub in_b: BitSet,
    pub sum_phi: i64,
    pub sum_phi_sq: i64,
    pub sum_phi_cube: i64,
    pub sum_phi_outside: i64,
    pub sum_phi1_outside: i64,
    pub sum_phi1_sq_outside: i64,
}

pub fn compute_phi(
    field: &FieldSpec,
    chi: &CharacterTable,
    clique: &[usize],
) -> Result<PhiProfile> {
    if clique.is_empty() {
        return Err(Error::EmptyClique);
    }
    let n = field.order();
    for &b in clique {
        field.element(b)?;
    }
    let in_b = BitSet::from_indices(n, clique.iter().copied());
    let phi: Vec<i64> = (0..n)
        .map(|t| {
            clique
                .iter()
                .map(|&b| chi.chi(field.sub_idx(b, t)) as i64)
                .sum()
        })
        .collect();
    let phi1: Vec<i64> = phi.iter().map(|v| v + 1).collect();

    let outside = || (0..n).filter(|&t| !in_b.contains(t));
    Ok(PhiProfile {
        clique: clique.to_vec(),
        s: clique.len(),
        sum_phi: phi.iter().sum(),
        sum_phi_sq: phi.iter().map(|v| v * v).sum(),
        sum_phi_cube: phi.iter().map(|v| v * v * v).sum(),
        sum_phi_outside: outside().map(|t| phi[t]).sum(),
        sum_phi1_outside: outside().map(|t| phi1[t]).sum(),
        sum_phi1_sq_outside: outside().map(|t| phi1[t] * phi1[t]).sum(),
        phi,
        phi1,
        in_b,
    })
}

impl PhiProfile {
    pub fn q(&self) -> usize {
        self.phi.len()
    }

    /// CSV dump with columns `t,phi,phi1,in_B`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,phi,phi1,in_B\n");
        for t in 0..self.q() {
            let inside = u8::from(self.in_b.contains(t));
            out.push_str(&format!("{t},{},{},{inside}\n", self.phi[t], self.phi1[t]));
        }
        out
    }
}

/// The five integer identities that hold for a maximal clique, plus the
/// pointwise shape of phi (value s-1 on B; at most s-2 and of the parity of s
/// off B).
pub fn verify_moments(profile: &PhiProfile, q: u64) -> Vec<Check> {
    let q = q as i64;
    let s = profile.s as i64;
    let mut checks = vec![
        Check::equal("sum phi = 0", 0, profile.sum_phi),
        Check::equal("sum phi^2 = s(q-s)", s * (q - s), profile.sum_phi_sq),
        Check::equal(
            "sum_{t not in B} phi1 = q-s^2",
            q - s * s,
            profile.sum_phi1_outside,
        ),
        Check::equal(
            "sum_{t not in B} phi1^2 = (s+1)(q-s^2)",
            (s + 1) * (q - s * s),
            profile.sum_phi1_sq_outside,
        ),
        Check::equal(
            "sum_{t not in B} phi = -s(s-1)",
            -s * (s - 1),
            profile.sum_phi_outside,
        ),
    ];

    let on_b = profile.clique.iter().find(|&&b| profile.phi[b] != s - 1);
    checks.push(Check::new(
        "phi = s-1 on B",
        on_b.is_none(),
        on_b.map_or("ok".into(), |&b| format!("phi({b}) = {}", profile.phi[b])),
    ));
    let off_b = (0..profile.q())
        .filter(|&t| !profile.in_b.contains(t))
        .find(|&t| profile.phi[t] > s - 2 || (profile.phi[t] - s).rem_euclid(2) != 0);
    checks.push(Check::new(
        "phi <= s-2 and phi = s mod 2 off B",
        off_b.is_none(),
        off_b.map_or("ok".into(), |t| format!("phi({t}) = {}", profile.phi[t])),
    ));
    checks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestT {
    pub t: usize,
    pub phi_min: i64,
}

/// The t outside B with the smallest phi; ties go to the smallest index.
pub fn find_best_t(profile: &PhiProfile) -> Option<BestT> {
    (0..profile.q())
        .filter(|&t| !profile.in_b.contains(t))
        .min_by_key(|&t| (profile.phi[t], t))
        .map(|t| BestT {
            t,
            phi_min: profile.phi[t],
        })
}

/// Whether the negative value of phi forced by the parity argument is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityGuarantee {
    /// Only asserted when s = floor(sqrt q) and k is odd.
    pub applies: bool,
    /// -2 for even s, -3 for odd s.
    pub required_max: i64,
    pub phi_min: i64,
}

impl ParityGuarantee {
    pub fn met(&self) -> bool {
        self.phi_min <= self.required_max
    }
}

pub fn parity_guarantee(profile: &PhiProfile, field: &FieldSpec, best: BestT) -> ParityGuarantee {
    let n = crate::primes::isqrt(field.q());
    let s = profile.s as i64;
    ParityGuarantee {
        applies: profile.s as u64 == n && field.k() % 2 == 1,
        required_max: if s % 2 == 0 { -2 } else { -3 },
        phi_min: best.phi_min,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSet {
    pub t: usize,
    /// Ascending.
    pub elements: Vec<usize>,
    pub r: usize,
}

/// D = (B - t) ∩ NQ.
pub fn construct_dset(
    field: &FieldSpec,
    chi: &CharacterTable,
    clique: &[usize],
    t: usize,
) -> Result<DSet> {
    field.element(t)?;
    if clique.contains(&t) {
        return Err(Error::TIsInB(t));
    }
    let mut elements: Vec<usize> = clique
        .iter()
        .map(|&b| field.sub_idx(b, t))
        .filter(|&d| chi.is_nonresidue(d))
        .collect();
    elements.sort_unstable();
    Ok(DSet {
        t,
        r: elements.len(),
        elements,
    })
}

/// D ⊆ NQ, D - D ⊆ Q ∪ {0}, and r = (s - phi(t)) / 2.
pub fn validate_dset(
    field: &FieldSpec,
    chi: &CharacterTable,
    profile: &PhiProfile,
    dset: &DSet,
) -> Vec<Check> {
    let outside_nq = dset.elements.iter().find(|&&d| !chi.is_nonresidue(d));
    let mut bad_diff = None;
    'outer: for &a in &dset.elements {
        for &b in &dset.elements {
            if a != b && !chi.is_residue(field.sub_idx(a, b)) {
                bad_diff = Some((a, b));
                break 'outer;
            }
        }
    }
    let from_phi = (profile.s as i64 - profile.phi[dset.t]) / 2;
    vec![
        Check::new(
            "D subset of NQ",
            outside_nq.is_none(),
            outside_nq.map_or("ok".into(), |d| format!("{d} is not a non-residue")),
        ),
        Check::new(
            "D-D subset of Q+{0}",
            bad_diff.is_none(),
            bad_diff.map_or("ok".into(), |(a, b)| format!("{a}-{b} is not a square")),
        ),
        Check::equal("r = (s-phi(t))/2", from_phi, dset.r as i64),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCount {
    pub s: usize,
    pub r: usize,
    pub solutions: u64,
    /// First (b1, z) admitting two solutions, if any.
    pub collision: Option<(usize, usize)>,
    /// s(s-1)r <= s(q-1)/2, compared as 2(s-1)r <= q-1.
    pub bound_holds: bool,
}

impl LemmaCount {
    pub fn expected(&self) -> u64 {
        (self.s * self.s.saturating_sub(1) * self.r) as u64
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::equal(
                "solutions = s(s-1)r",
                self.expected() as i64,
                self.solutions as i64,
            ),
            Check::new(
                "at most one (b2,d) per (b1,z)",
                self.collision.is_none(),
                self.collision.map_or("ok".into(), |(b1, z)| {
                    format!("b1={b1}, z={z} has two solutions")
                }),
            ),
            Check::new(
                "s(s-1)r <= s(q-1)/2",
                self.bound_holds,
                format!("s={}, r={}", self.s, self.r),
            ),
        ]
    }
}

/// Counts solutions of b1 - b2 = z*d over distinct b1, b2 in B, d in D and
/// z in NQ by enumerating every quadruple.
pub fn verify_lemma_count(
    field: &FieldSpec,
    chi: &CharacterTable,
    clique: &[usize],
    dset: &DSet,
) -> LemmaCount {
    let nonresidues: Vec<usize> = chi.nonresidues().iter().collect();
    let mut solutions = 0u64;
    let mut collision = None;
    let mut per_z = vec![0u32; field.order()];
    for &b1 in clique {
        per_z.iter_mut().for_each(|c| *c = 0);
        for &b2 in clique.iter().filter(|&&b2| b2 != b1) {
            let diff = field.sub_idx(b1, b2);
            for &d in &dset.elements {
                for &z in &nonresidues {
                    if field.mul_idx(z, d) == diff {
                        solutions += 1;
                        per_z[z] += 1;
                        if per_z[z] > 1 && collision.is_none() {
                            collision = Some((b1, z));
                        }
                    }
                }
            }
        }
    }
    let s = clique.len() as u64;
    let r = dset.r as u64;
    LemmaCount {
        s: clique.len(),
        r: dset.r,
        solutions,
        collision,
        bound_holds: s * s.saturating_sub(1) * r * 2 <= s * (field.q() - 1),
    }
}

/// 1 + (q-1)/(2r), exactly.
pub fn sbound(r: u64, q: u64) -> Result<Ratio<u64>> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    Ok(Ratio::from_integer(1) + Ratio::new(q - 1, 2 * r))
}

/// Sum of phi(t)^3 over all t. Reported only; nothing is asserted about it.
pub fn third_moment(profile: &PhiProfile) -> i64 {
    profile.sum_phi_cube
}

/// r - s/2, the excess of a D-set over half the clique size.
pub fn r_excess(r: usize, s: usize) -> Ratio<i64> {
    Ratio::from_integer(r as i64) - Ratio::new(s as i64, 2)
}
