//! The quadratic form `Q(x) = T_n(x·x̄)` and its polarization
//! `B(x, y) = T_n(x·ȳ + x̄·y)`, both with values in `F_n = GF(q)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitLinearMap;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{CoordFrame, Subspace};

/// Largest ambient degree for which [`FormCtx::singular_census`] scans.
pub const CENSUS_MAX_DEGREE: u32 = 24;

/// A quadratic form on `F^(2)` over `F_n`.
#[derive(Clone, Debug)]
pub struct FormCtx {
    frame: Arc<CoordFrame>,
    trace: BitLinearMap,
    /// `c` in `Q'(x) = Q(x) + B(x, c)^2`; `None` for the standard form.
    twist: Option<FieldElement>,
}

impl FormCtx {
    /// The standard form `Q_n`.
    pub fn new(frame: Arc<CoordFrame>) -> Self {
        let ctx = frame.ctx();
        let trace = ctx.trace_map(ctx.m(), ctx.e());
        Self {
            frame,
            trace,
            twist: None,
        }
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.frame.ctx()
    }

    /// Degree of `F_n` over GF(2).
    pub fn n_deg(&self) -> u32 {
        self.ctx().e()
    }

    pub fn twist(&self) -> Option<FieldElement> {
        self.twist
    }

    pub fn is_standard(&self) -> bool {
        self.twist.is_none_or(|c| c.is_zero())
    }

    /// `Q'(x) = Q(x) + B(x, c)^2`. Polarizes to the same `B`.
    pub fn variant_form(&self, c: FieldElement) -> Self {
        Self {
            twist: Some(c),
            ..self.clone()
        }
    }

    #[inline]
    fn tn(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.trace.apply(x.0))
    }

    #[inline]
    pub fn quad_form(&self, x: FieldElement) -> FieldElement {
        let ctx = self.ctx();
        let q = self.tn(ctx.mul(x, ctx.conjugate(x)));
        match self.twist {
            Some(c) if !c.is_zero() => q + ctx.square(self.bilinear_form(x, c)),
            _ => q,
        }
    }

    #[inline]
    pub fn bilinear_form(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let ctx = self.ctx();
        let s = ctx.mul(x, ctx.conjugate(y)) + ctx.mul(ctx.conjugate(x), y);
        self.tn(s)
    }

    /// `B` vanishes on every pair of `GF(q)`-basis vectors.
    pub fn is_totally_isotropic(&self, x: &Subspace) -> bool {
        let b = x.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| self.bilinear_form(b[i], b[j]).is_zero()))
    }

    /// Totally isotropic and spanned by singular vectors, which forces `Q` to
    /// vanish on the whole subspace.
    pub fn is_totally_singular(&self, x: &Subspace) -> bool {
        x.basis().iter().all(|&v| self.quad_form(v).is_zero()) && self.is_totally_isotropic(x)
    }

    /// Number of nonzero singular vectors, by exhaustive scan.
    pub fn singular_census(&self) -> Result<u64> {
        self.singular_census_within(CENSUS_MAX_DEGREE)
    }

    pub fn singular_census_within(&self, max_degree: u32) -> Result<u64> {
        let d = self.ctx().degree();
        if d > max_degree {
            return Err(Error::Resource(format!(
                "census over 2^{d} vectors exceeds the scan budget of 2^{max_degree}"
            )));
        }
        let total = self.ctx().group_order();
        // Fixed block size keeps the partition independent of the thread count.
        const BLOCK: u64 = 1 << 14;
        let count = (0..=total / BLOCK)
            .into_par_iter()
            .map(|b| {
                let lo = (b * BLOCK).max(1);
                let hi = ((b + 1) * BLOCK).min(total + 1);
                (lo..hi)
                    .filter(|&x| self.quad_form(FieldElement(x)).is_zero())
                    .count() as u64
            })
            .sum();
        Ok(count)
    }

    /// Census together with its interpretation.
    pub fn census_report(&self) -> CensusReport {
        let ctx = self.ctx();
        let q = ctx.q_pow(1);
        let qm = ctx.q_pow(ctx.m());
        let elliptic = elliptic_singular_count(ctx);
        let hyperbolic = (qm - 1) * (qm / q + 1);
        match self.singular_census() {
            Ok(n) => {
                let quadric = if n == elliptic {
                    QuadricType::Elliptic
                } else if n == hyperbolic {
                    QuadricType::Hyperbolic
                } else {
                    QuadricType::Degenerate
                };
                CensusReport {
                    nonzero_singular: Some(n),
                    expected_elliptic: elliptic,
                    quadric,
                }
            }
            Err(_) => CensusReport {
                nonzero_singular: None,
                expected_elliptic: elliptic,
                quadric: QuadricType::Unknown,
            },
        }
    }

    /// Rank over `F_n` of the Gram matrix of `B` in the power basis.
    pub fn gram_rank(&self) -> usize {
        let ctx = self.ctx();
        let dim = self.frame.dim();
        let g = ctx.generator();
        let basis: Vec<FieldElement> = (0..dim).map(|j| ctx.pow(g, j as u64)).collect();
        let mut rows: Vec<Vec<FieldElement>> = basis
            .iter()
            .map(|&x| basis.iter().map(|&y| self.bilinear_form(x, y)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..dim {
            let Some(p) = (rank..dim).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = ctx.inv(rows[rank][col]).expect("nonzero pivot");
            let pivot: Vec<FieldElement> = rows[rank].iter().map(|&v| ctx.mul(v, inv)).collect();
            for row in rows.iter_mut().skip(rank + 1) {
                let f = row[col];
                if !f.is_zero() {
                    for (v, &p) in row.iter_mut().zip(&pivot) {
                        *v += ctx.mul(f, p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// `(q^m + 1)(q^(m-1) - 1)`, the nonzero singular vector count of an
/// elliptic quadric in dimension `2m`.
pub fn elliptic_singular_count(ctx: &FieldCtx) -> u64 {
    let qm = ctx.q_pow(ctx.m());
    (qm + 1) * (ctx.q_pow(ctx.m() - 1) - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricType {
    Elliptic,
    Hyperbolic,
    Degenerate,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub nonzero_singular: Option<u64>,
    pub expected_elliptic: u64,
    #[serde(rename = "type")]
    pub quadric: QuadricType,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn form(e: u32, m: u32) -> FormCtx {
        let ctx = Arc::new(FieldCtx::new(e, m).unwrap());
        FormCtx::new(Arc::new(CoordFrame::new(ctx)))
    }

    fn trace_kernel(fc: &FormCtx) -> Vec<FieldElement> {
        let ctx = fc.ctx();
        let (e, m) = (ctx.e(), ctx.m());
        ctx.elements()
            .filter(|&x| ctx.in_subfield(x, e * m))
            .filter(|&x| ctx.rel_trace(x, e * m, e).unwrap().is_zero())
            .collect()
    }

    #[test]
    fn basic_values() {
        let fc = form(1, 3);
        assert_eq!(fc.quad_form(FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(fc.quad_form(FieldElement::ONE), FieldElement::ONE);
        let w = trace_kernel(&fc);
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|&x| fc.quad_form(x).is_zero()));
    }

    #[test]
    fn values_lie_in_fn() {
        let fc = form(2, 3);
        let ctx = fc.ctx().clone();
        for x in ctx.elements().step_by(37) {
            assert!(ctx.in_subfield(fc.quad_form(x), 2));
            assert!(ctx.in_subfield(fc.bilinear_form(x, ctx.generator()), 2));
        }
    }

    #[test]
    fn polarization_is_exhaustive_at_q2_m3() {
        let fc = form(1, 3);
        let ctx = fc.ctx().clone();
        for x in ctx.elements() {
            assert!(fc.bilinear_form(x, x).is_zero());
            for y in ctx.elements() {
                let b = fc.bilinear_form(x, y);
                assert_eq!(b, fc.bilinear_form(y, x));
                assert_eq!(b, fc.quad_form(x + y) + fc.quad_form(x) + fc.quad_form(y));
            }
        }
    }

    #[test]
    fn semilinearity_over_fn() {
        for (e, m) in [(1, 3), (2, 3)] {
            let fc = form(e, m);
            let ctx = fc.ctx().clone();
            let y = ctx.pow(ctx.generator(), 5);
            for &l in fc.frame().scalars() {
                for x in ctx.elements() {
                    let lx = ctx.mul(l, x);
                    assert_eq!(fc.quad_form(lx), ctx.mul(ctx.square(l), fc.quad_form(x)));
                    assert_eq!(fc.bilinear_form(lx, y), ctx.mul(l, fc.bilinear_form(x, y)));
                }
            }
        }
    }

    #[test]
    fn polar_form_is_nondegenerate() {
        for (e, m) in [(1, 3), (2, 3), (1, 5), (1, 9)] {
            let fc = form(e, m);
            assert_eq!(fc.gram_rank(), 2 * m as usize);
        }
    }

    #[test]
    fn isotropy_and_singularity_predicates() {
        let fc = form(1, 3);
        let f = fc.frame().clone();
        let ctx = fc.ctx().clone();
        let g = ctx.generator();
        assert!(fc.is_totally_isotropic(&f.zero()));
        assert!(fc.is_totally_singular(&f.zero()));
        let big_f = f.subfield(3).unwrap();
        assert!(fc.is_totally_isotropic(&big_f));
        assert!(!fc.is_totally_singular(&big_f));
        let w = f.span(&trace_kernel(&fc));
        assert_eq!(w.dim(), 2);
        assert!(fc.is_totally_singular(&w));
        // span(1, g) against the pairwise oracle.
        let x = f.span(&[FieldElement::ONE, g]);
        let vecs: Vec<_> = f.vectors(&x).collect();
        let brute = vecs
            .iter()
            .all(|&a| vecs.iter().all(|&b| fc.bilinear_form(a, b).is_zero()));
        assert_eq!(fc.is_totally_isotropic(&x), brute);
    }

    #[test]
    fn singularity_predicate_matches_enumeration() {
        let fc = form(2, 3);
        let f = fc.frame().clone();
        let ctx = fc.ctx().clone();
        let g = ctx.generator();
        let singular: Vec<_> = ctx
            .elements()
            .skip(1)
            .filter(|&x| fc.quad_form(x).is_zero())
            .step_by(97)
            .take(12)
            .collect();
        for w in singular.windows(3) {
            for extra in [None, Some(ctx.pow(g, 3))] {
                let mut gens = w.to_vec();
                gens.extend(extra);
                let x = f.span(&gens);
                let brute = f.vectors(&x).all(|v| fc.quad_form(v).is_zero());
                assert_eq!(fc.is_totally_singular(&x), brute);
            }
        }
    }

    #[test]
    fn census_values() {
        assert_eq!(form(1, 3).singular_census().unwrap(), 27);
        assert_eq!(form(2, 3).singular_census().unwrap(), 975);
        let r = form(1, 3).census_report();
        assert_eq!(r.quadric, QuadricType::Elliptic);
        assert_eq!(r.expected_elliptic, 27);
    }

    #[test]
    fn census_at_degree_18() {
        assert_eq!(form(1, 9).singular_census().unwrap(), 130_815);
    }

    #[test]
    fn census_budget() {
        let fc = form(1, 9);
        assert!(matches!(fc.singular_census_within(12), Err(Error::Resource(_))));
        let big = form(1, 15);
        let r = big.census_report();
        assert_eq!(r.quadric, QuadricType::Unknown);
        assert_eq!(r.nonzero_singular, None);
    }

    #[test]
    fn variant_forms() {
        let fc = form(1, 3);
        let ctx = fc.ctx().clone();
        let same = fc.variant_form(FieldElement::ZERO);
        assert!(ctx.elements().all(|x| same.quad_form(x) == fc.quad_form(x)));
        let mut seen = std::collections::BTreeSet::new();
        for c in ctx.elements().skip(1).step_by(3).take(20) {
            let v = fc.variant_form(c);
            for x in ctx.elements() {
                for y in ctx.elements().step_by(5) {
                    assert_eq!(
                        v.quad_form(x + y) + v.quad_form(x) + v.quad_form(y),
                        fc.bilinear_form(x, y)
                    );
                }
            }
            let n = v.singular_census().unwrap();
            assert!(n == 27 || n == 35, "census {n}");
            seen.insert(n);
        }
        assert!(seen.contains(&35));
    }
}
