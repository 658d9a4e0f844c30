//! Spread verification, transitivity, equivalence and classification.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{param, Error, Result};
use crate::field::{FieldElement, TowerSpec};
use crate::forms::{elliptic_singular_count, FormCtx, CENSUS_MAX_DEGREE};
use crate::linalg::Subspace;
use crate::spreads::{Kind, Provenance, Spread, SpreadParams};

/// Largest ambient degree for which exhaustive verification scans every vector.
pub const EXHAUSTIVE_MAX_DEGREE: u32 = 18;

/// Largest number of ζ-tuples [`classify_tower`] will enumerate.
pub const CLASSIFY_MAX_TUPLES: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Certify the partition from dimensions, pairwise meets and a point count.
    Counting,
    /// Additionally scan every vector and count the members containing it.
    Exhaustive,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counting" => Ok(Mode::Counting),
            "exhaustive" => Ok(Mode::Exhaustive),
            other => param(format!("unknown verification mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: Kind,
    pub member_count: u64,
    pub expected_members: u64,
    pub dims_ok: bool,
    pub all_ts_or_ti: bool,
    pub pairwise_trivial: bool,
    /// `Σ (q^dim - 1)`; counts each covered vector once when meets are trivial.
    pub covered: u64,
    /// Nonzero singular vectors (elliptic) or all nonzero vectors (symplectic).
    pub expected: u64,
    /// Exhaustive mode only: every target vector lies in exactly one member and
    /// no other nonzero vector lies in any.
    pub exact_cover: Option<bool>,
    pub pass: bool,
    pub mode: Mode,
}

/// Checks the spread axioms for `s` against the form `fc`.
///
/// Failures are reported in the returned report; the only error is asking for
/// an exhaustive scan beyond [`EXHAUSTIVE_MAX_DEGREE`].
pub fn verify_spread(fc: &FormCtx, s: &Spread, mode: Mode) -> Result<VerificationReport> {
    let ctx = fc.ctx();
    let d = ctx.degree();
    if mode == Mode::Exhaustive && d > EXHAUSTIVE_MAX_DEGREE {
        return Err(Error::Resource(format!(
            "exhaustive verification over 2^{d} vectors exceeds the budget of 2^{EXHAUSTIVE_MAX_DEGREE}"
        )));
    }
    if **s.ctx() != **ctx {
        return param("spread and form belong to different field contexts");
    }
    let kind = s.kind();
    let members = s.members();
    let q = ctx.q_pow(1);
    let expected_members = ctx.circle_order();
    let want_dim = kind.member_dim(ctx.m());

    let dims_ok = members.iter().all(|x| x.dim() == want_dim);
    let all_ts_or_ti = members.par_iter().all(|x| match kind {
        Kind::Elliptic => fc.is_totally_singular(x),
        Kind::Symplectic => fc.is_totally_isotropic(x),
    });
    let pairwise_trivial = pairwise_trivial(members);
    let covered: u64 = members.iter().map(|x| q.pow(x.dim() as u32) - 1).sum();
    let expected = match kind {
        Kind::Elliptic if d <= CENSUS_MAX_DEGREE => fc.singular_census()?,
        Kind::Elliptic => elliptic_singular_count(ctx),
        Kind::Symplectic => ctx.group_order(),
    };
    let exact_cover = match mode {
        Mode::Counting => None,
        Mode::Exhaustive => Some(exact_cover(fc, s)),
    };
    let pass = members.len() as u64 == expected_members
        && dims_ok
        && all_ts_or_ti
        && pairwise_trivial
        && covered == expected
        && exact_cover.unwrap_or(true);
    Ok(VerificationReport {
        kind,
        member_count: members.len() as u64,
        expected_members,
        dims_ok,
        all_ts_or_ti,
        pairwise_trivial,
        covered,
        expected,
        exact_cover,
        pass,
        mode,
    })
}

/// Whether every pair of distinct list positions meets in zero.
pub fn pairwise_trivial(members: &[Subspace]) -> bool {
    (0..members.len()).into_par_iter().all(|i| {
        let a = members[i].gf2_basis();
        members[i + 1..].iter().all(|y| disjoint(a, y.gf2_basis()))
    })
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    let mut rows = a.to_vec();
    b.iter().all(|&v| bits::insert_reduced(&mut rows, v))
}

fn exact_cover(fc: &FormCtx, s: &Spread) -> bool {
    let ctx = fc.ctx();
    let size = (ctx.group_order() + 1) as usize;
    let mut hits = vec![0u8; size];
    for x in s.members() {
        for v in s.frame().vectors(x).skip(1) {
            let h = &mut hits[v.0 as usize];
            *h = h.saturating_add(1);
        }
    }
    let elliptic = s.kind() == Kind::Elliptic;
    hits.par_iter().enumerate().skip(1).all(|(v, &h)| {
        let target = !elliptic || fc.quad_form(FieldElement(v as u64)).is_zero();
        h == u8::from(target)
    })
}

/// Whether multiplication by `theta` permutes the members of `s` in a single
/// cycle through all `q^m + 1` of them.
pub fn verify_transitive(s: &Spread, theta: FieldElement) -> bool {
    let frame = s.frame();
    let n = s.len();
    if n as u64 != s.ctx().circle_order() || theta.is_zero() {
        return false;
    }
    let index: HashMap<&Subspace, usize> = s.members().iter().enumerate().map(|(i, x)| (x, i)).collect();
    if index.len() != n {
        return false;
    }
    let image: Option<Vec<usize>> = s
        .members()
        .par_iter()
        .map(|x| {
            let y = frame.scale(x, theta).ok()?;
            index.get(&y).copied()
        })
        .collect();
    let Some(image) = image else {
        return false;
    };
    let mut cur = 0;
    for step in 1..=n {
        cur = image[cur];
        if cur == 0 {
            return step == n;
        }
    }
    false
}

/// Outcome of the parameter equivalence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    /// Least `k` with `ζ'_i = ζ_i^(2^k)` for all `i`, if any.
    pub witness: Option<u32>,
    /// Set when the classification hypotheses fail (`q^m <= 8`), so the
    /// answer is not certified.
    pub advisory: bool,
}

impl Equivalence {
    pub fn equivalent(&self) -> bool {
        self.witness.is_some()
    }
}

/// Galois-conjugacy test on elliptic parameters.
pub fn params_equivalent(p: &SpreadParams, other: &SpreadParams) -> Result<Equivalence> {
    if p.kind() != Kind::Elliptic || other.kind() != Kind::Elliptic {
        return param("equivalence is decided for elliptic parameters only");
    }
    let advisory = !(p.theorem_conditions() && other.theorem_conditions());
    let ctx = p.ctx();
    if **ctx != **other.ctx() || p.tower().chain() != other.tower().chain() {
        return Ok(Equivalence {
            witness: None,
            advisory,
        });
    }
    let witness = (0..ctx.degree()).find(|&k| {
        p.zetas()
            .iter()
            .zip(other.zetas())
            .all(|(&z, &w)| ctx.frobenius(z, k) == w)
    });
    Ok(Equivalence { witness, advisory })
}

/// `∏_(1<=i<n) (q^(m_i) + 1) / (2·m_1·log₂ q)`; for `n = 1` the denominator
/// uses `m`.
pub fn theorem_bound(tower: &TowerSpec) -> Ratio<u128> {
    let ctx = tower.ctx();
    let chain = tower.chain();
    let n = tower.n();
    let num: u128 = (1..n).map(|i| ctx.q_pow(chain[i]) as u128 + 1).product();
    let m1 = if n == 1 { chain[0] } else { chain[1] };
    Ratio::new(num, 2 * m1 as u128 * ctx.e() as u128)
}

/// Order of the known automorphism group: `(q^m + 1)(q - 1)·s` with `s` the
/// number of Frobenius powers fixing every `ζ_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutOrder {
    pub order: u128,
    pub stabilizer: u32,
    pub advisory: bool,
}

pub fn aut_order(params: &SpreadParams) -> Result<AutOrder> {
    if params.kind() != Kind::Elliptic {
        return param("automorphism order is computed for elliptic parameters");
    }
    let ctx = params.ctx();
    let stabilizer = (0..ctx.degree())
        .filter(|&k| params.zetas().iter().all(|&z| ctx.frobenius(z, k) == z))
        .count() as u32;
    let order = ctx.circle_order() as u128 * (ctx.q_pow(1) as u128 - 1) * stabilizer as u128;
    Ok(AutOrder {
        order,
        stabilizer,
        advisory: !params.theorem_conditions(),
    })
}

/// Memberwise image under `x ↦ x^(2^k)`.
pub fn galois_image_spread(s: &Spread, k: u32) -> Result<Spread> {
    let d = s.ctx().degree();
    if k >= d {
        return param(format!("Galois exponent {k} outside 0..{d}"));
    }
    let frame = s.frame();
    let members: Vec<Subspace> = s.members().par_iter().map(|x| frame.apply_galois(x, k)).collect();
    let params = s.params().map(|p| p.frobenius_image(k));
    Ok(Spread::new(
        frame.clone(),
        s.kind(),
        members,
        params,
        Provenance::GaloisImage(k),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub rep_exponents: Vec<u64>,
    pub orbit_size: u64,
    pub aut_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundJson {
    pub num: u128,
    pub den: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub chain: Vec<u32>,
    pub e: u32,
    pub tuple_count: u64,
    pub class_count: u64,
    pub classes: Vec<ClassEntry>,
    pub bound: Ratio<u128>,
    pub bound_satisfied: bool,
    /// The classification hypotheses fail (`q^m <= 8`); counts are not certified.
    pub advisory: bool,
}

impl ClassificationResult {
    pub fn representatives(&self) -> impl Iterator<Item = &[u64]> {
        self.classes.iter().map(|c| c.rep_exponents.as_slice())
    }
}

/// Serialized catalog form of a [`ClassificationResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub chain: Vec<u32>,
    pub e: u32,
    pub tuple_count: u64,
    pub class_count: u64,
    pub classes: Vec<ClassEntry>,
    pub bound: BoundJson,
    pub bound_satisfied: bool,
    pub advisory: bool,
}

impl From<&ClassificationResult> for ClassificationJson {
    fn from(r: &ClassificationResult) -> Self {
        Self {
            chain: r.chain.clone(),
            e: r.e,
            tuple_count: r.tuple_count,
            class_count: r.class_count,
            classes: r.classes.clone(),
            bound: BoundJson {
                num: *r.bound.numer(),
                den: *r.bound.denom(),
            },
            bound_satisfied: r.bound_satisfied,
            advisory: r.advisory,
        }
    }
}

/// Partitions all admissible `(k_1, …, k_(n-1))` into orbits under
/// simultaneous Frobenius powers.
pub fn classify_tower(tower: &TowerSpec) -> Result<ClassificationResult> {
    classify_tower_within(tower, CLASSIFY_MAX_TUPLES)
}

pub fn classify_tower_within(tower: &TowerSpec, max_tuples: u64) -> Result<ClassificationResult> {
    let ctx = tower.ctx();
    let n = tower.n();
    // ζ_i = θ_i^k with θ_i of order q^(m_i) + 1, so x ↦ x^2 doubles k.
    let orders: Vec<u64> = (1..n).map(|i| tower.zeta_group_order(i)).collect();
    let mut tuple_count: u64 = 1;
    for &o in &orders {
        tuple_count = tuple_count
            .checked_mul(o - 1)
            .filter(|&c| c <= max_tuples)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "more than {max_tuples} zeta tuples to classify"
                ))
            })?;
    }
    let index_of = |tuple: &[u64]| -> usize {
        tuple
            .iter()
            .zip(&orders)
            .fold(0usize, |acc, (&k, &o)| acc * (o as usize - 1) + (k as usize - 1))
    };
    let mut seen = vec![false; tuple_count as usize];
    let mut classes = Vec::new();
    let mut tuple: Vec<u64> = vec![1; orders.len()];
    for idx in 0..tuple_count as usize {
        if !seen[idx] {
            // Enumeration is lexicographic, so the first unseen tuple is the
            // least member of its orbit.
            let mut orbit_size = 0u64;
            let mut img = tuple.clone();
            for _ in 0..ctx.degree() {
                let j = index_of(&img);
                if !seen[j] {
                    seen[j] = true;
                    orbit_size += 1;
                }
                for (k, &o) in img.iter_mut().zip(&orders) {
                    *k = *k * 2 % o;
                }
            }
            let params = SpreadParams::new(tower.clone(), Kind::Elliptic, tuple.clone())?;
            classes.push(ClassEntry {
                rep_exponents: tuple.clone(),
                orbit_size,
                aut_order: aut_order(&params)?.order,
            });
        }
        // Next tuple in lexicographic order.
        for pos in (0..tuple.len()).rev() {
            if tuple[pos] + 1 < orders[pos] {
                tuple[pos] += 1;
                break;
            }
            tuple[pos] = 1;
        }
    }
    let bound = theorem_bound(tower);
    let class_count = classes.len() as u64;
    Ok(ClassificationResult {
        chain: tower.chain().to_vec(),
        e: ctx.e(),
        tuple_count,
        class_count,
        classes,
        bound,
        bound_satisfied: Ratio::from_integer(class_count as u128) > bound,
        advisory: ctx.q_pow(ctx.m()) <= 8,
    })
}
