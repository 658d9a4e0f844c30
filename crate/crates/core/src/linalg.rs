//! GF(q)-linear algebra on `F^(2)` viewed as a `2m`-dimensional space.
//!
//! Coordinates are taken in the power basis `g^0, …, g^(2m-1)` of the
//! primitive element; scalars are the elements of the subfield `GF(q)` inside
//! the ambient field, so all scalar arithmetic goes through [`FieldCtx`].
//!
//! A [`Subspace`] keeps two canonical views of the same point set: the reduced
//! row-echelon basis over GF(q) (the public, serialized form) and a fully
//! reduced GF(2) echelon basis of the underlying bit-vectors, which makes
//! membership and intersection word operations.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::bits::{self, BitLinearMap};
use crate::error::{param, Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// The coordinate system of `F^(2)` over `GF(q)`.
#[derive(Clone, Debug)]
pub struct CoordFrame {
    ctx: Arc<FieldCtx>,
    /// `1, h, …, h^(e-1)` for a generator `h` of `GF(q)*`.
    scalar_basis: Vec<FieldElement>,
    /// Element bits to coordinate bits; coordinate `j` occupies bits `j·e..(j+1)·e`.
    to_bits: BitLinearMap,
    from_bits: BitLinearMap,
    /// Scalar with the given `e`-bit code.
    code_scalar: Vec<FieldElement>,
}

impl CoordFrame {
    pub fn new(ctx: Arc<FieldCtx>) -> Self {
        let e = ctx.e();
        let dim = 2 * ctx.m();
        let h = ctx.pow(ctx.generator(), ctx.group_order() / (ctx.q_pow(1) - 1));
        let scalar_basis: Vec<FieldElement> = (0..e).map(|a| ctx.pow(h, a as u64)).collect();
        // Column (j·e + a) of the change of basis is h^a · g^j.
        let mut columns = Vec::with_capacity(ctx.degree() as usize);
        for j in 0..dim {
            let gj = ctx.pow(ctx.generator(), j as u64);
            for &b in &scalar_basis {
                columns.push(ctx.mul(b, gj).0);
            }
        }
        let from_bits = BitLinearMap::from_images(&columns);
        let to_bits = BitLinearMap::from_images(&invert_columns(&columns));
        let code_scalar = (0..1u64 << e)
            .map(|code| {
                scalar_basis
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| (code >> a) & 1 == 1)
                    .fold(FieldElement::ZERO, |acc, (_, &b)| acc + b)
            })
            .collect();
        Self {
            ctx,
            scalar_basis,
            to_bits,
            from_bits,
            code_scalar,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Dimension `2m` of the space over `GF(q)`.
    pub fn dim(&self) -> usize {
        2 * self.ctx.m() as usize
    }

    /// The elements of `GF(q)`.
    pub fn scalars(&self) -> &[FieldElement] {
        &self.code_scalar
    }

    fn scalar_code(&self, s: FieldElement) -> u64 {
        // A scalar is its own coordinate 0.
        self.to_bits.apply(s.0)
    }

    /// Coordinates of `x` over `GF(q)` in the power basis of `g`.
    pub fn coords(&self, x: FieldElement) -> Vec<FieldElement> {
        let e = self.ctx.e();
        let bits = self.to_bits.apply(x.0);
        let code_mask = (1u64 << e) - 1;
        (0..self.dim())
            .map(|j| self.code_scalar[((bits >> (j as u32 * e)) & code_mask) as usize])
            .collect()
    }

    /// Inverse of [`Self::coords`].
    pub fn uncoords(&self, coords: &[FieldElement]) -> FieldElement {
        let e = self.ctx.e();
        let bits = coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | (self.scalar_code(c) << (j as u32 * e)));
        FieldElement(self.from_bits.apply(bits))
    }

    pub fn zero(&self) -> Subspace {
        Subspace {
            rows: Vec::new(),
            basis: Vec::new(),
            bits: Vec::new(),
        }
    }

    /// The canonical `GF(q)`-span of `gens`.
    pub fn span(&self, gens: &[FieldElement]) -> Subspace {
        let rows: Vec<Vec<FieldElement>> = gens.iter().map(|&g| self.coords(g)).collect();
        self.subspace_of_rows(rref(&self.ctx, rows))
    }

    /// The subspace spanned by a set of GF(2)-vectors that is already known to
    /// be closed under `GF(q)`-scalars.
    fn subspace_of_closed_bits(&self, gens: &[u64]) -> Subspace {
        let gens: Vec<FieldElement> = gens.iter().map(|&b| FieldElement(b)).collect();
        self.span(&gens)
    }

    fn subspace_of_rows(&self, rows: Vec<Vec<FieldElement>>) -> Subspace {
        let basis: Vec<FieldElement> = rows.iter().map(|r| self.uncoords(r)).collect();
        let bits = bits::echelon(
            basis
                .iter()
                .flat_map(|&b| self.scalar_basis.iter().map(move |&s| (b, s)))
                .map(|(b, s)| self.ctx.mul(b, s).0),
        );
        Subspace { rows, basis, bits }
    }

    pub fn member(&self, x: &Subspace, v: FieldElement) -> bool {
        bits::reduce(&x.bits, v.0) == 0
    }

    pub fn intersect(&self, x: &Subspace, y: &Subspace) -> Subspace {
        let meet = bits::intersect(&x.bits, &y.bits, self.ctx.degree());
        self.subspace_of_closed_bits(&meet)
    }

    /// Dimension of `X ∩ Y` without materializing it.
    pub fn meet_dim(&self, x: &Subspace, y: &Subspace) -> usize {
        let sum = bits::rank(x.bits.iter().chain(&y.bits).copied());
        (x.bits.len() + y.bits.len() - sum) / self.ctx.e() as usize
    }

    pub fn sum(&self, x: &Subspace, y: &Subspace) -> Subspace {
        let gens: Vec<FieldElement> = x.basis.iter().chain(&y.basis).copied().collect();
        self.span(&gens)
    }

    /// `Xθ = {xθ : x ∈ X}`.
    pub fn scale(&self, x: &Subspace, theta: FieldElement) -> Result<Subspace> {
        if theta.is_zero() {
            return param("cannot scale a subspace by zero");
        }
        let gens: Vec<FieldElement> = x.basis.iter().map(|&b| self.ctx.mul(b, theta)).collect();
        Ok(self.span(&gens))
    }

    /// Image of `X` under `x ↦ x^(2^k)`.
    pub fn apply_galois(&self, x: &Subspace, k: u32) -> Subspace {
        let gens: Vec<FieldElement> = x.basis.iter().map(|&b| self.ctx.frobenius(b, k)).collect();
        self.span(&gens)
    }

    /// The subfield of GF(2)-degree `deg` as a `GF(q)`-subspace.
    pub fn subfield(&self, deg: u32) -> Result<Subspace> {
        let ctx = &self.ctx;
        if !ctx.degree().is_multiple_of(deg) || !deg.is_multiple_of(ctx.e()) {
            return param(format!("no GF(q)-subfield of degree {deg}"));
        }
        let domain: Vec<u64> = (0..ctx.degree()).map(|i| 1u64 << i).collect();
        let ker = bits::kernel(&domain, |x| {
            (ctx.frobenius(FieldElement(x), deg).0 ^ x) as u128
        });
        Ok(self.subspace_of_closed_bits(&ker))
    }

    /// Every vector of `X`, `q^dim` in total.
    pub fn vectors<'a>(&self, x: &'a Subspace) -> impl Iterator<Item = FieldElement> + 'a {
        bits::span_vectors(&x.bits).map(FieldElement)
    }

    /// Rebuilds a subspace from serialized basis elements and checks that it
    /// was stored canonically.
    pub fn from_basis_checked(&self, basis: &[FieldElement]) -> Result<Subspace> {
        let s = self.span(basis);
        if s.basis != basis {
            return Err(Error::Format(
                "subspace basis is not in canonical reduced form".into(),
            ));
        }
        Ok(s)
    }
}

/// Reduced row-echelon form over `GF(q)`; zero rows are dropped.
fn rref(ctx: &FieldCtx, mut rows: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = ctx.inv(rows[rank][col]).expect("pivot is nonzero");
        if inv != FieldElement::ONE {
            for v in rows[rank].iter_mut() {
                *v = ctx.mul(*v, inv);
            }
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col];
            for (v, &p) in row.iter_mut().zip(&pivot).skip(col) {
                if !p.is_zero() {
                    *v += ctx.mul(f, p);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Inverts a GF(2) matrix given by its columns; returns the columns of the
/// inverse.
fn invert_columns(columns: &[u64]) -> Vec<u64> {
    let n = columns.len();
    // Solve for the preimage of each unit vector by elimination on rows
    // (column image, preimage tag).
    let mut rows: Vec<(u64, u64)> = columns.iter().enumerate().map(|(i, &c)| (c, 1u64 << i)).collect();
    for bit in 0..n {
        let p = (bit..n)
            .find(|&r| (rows[r].0 >> bit) & 1 == 1)
            .expect("change of basis is invertible");
        rows.swap(bit, p);
        let pivot = rows[bit];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != bit && (row.0 >> bit) & 1 == 1 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
    }
    rows.into_iter().map(|(_, pre)| pre).collect()
}

/// A `GF(q)`-subspace of `F^(2)` in canonical form.
///
/// Equal point sets have identical representations, so `==` is set equality.
/// Ordering follows the serialized basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    rows: Vec<Vec<FieldElement>>,
    basis: Vec<FieldElement>,
    bits: Vec<u64>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduced row-echelon rows over `GF(q)`.
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// The rows read back as field elements; this is the serialized form.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Fully reduced GF(2) echelon basis of the point set.
    pub fn gf2_basis(&self) -> &[u64] {
        &self.bits
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.basis.cmp(&other.basis)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame(e: u32, m: u32) -> CoordFrame {
        CoordFrame::new(Arc::new(FieldCtx::new(e, m).unwrap()))
    }

    fn rand_elem(rng: &mut ChaCha8Rng, f: &CoordFrame) -> FieldElement {
        FieldElement(rng.gen::<u64>() & f.ctx().group_order())
    }

    #[test]
    fn coordinates_of_basis_and_zero() {
        let f = frame(2, 3);
        let g = f.ctx().generator();
        assert!(f.coords(FieldElement::ZERO).iter().all(|c| c.is_zero()));
        for j in 0..f.dim() {
            let c = f.coords(f.ctx().pow(g, j as u64));
            for (i, v) in c.iter().enumerate() {
                assert_eq!(*v, if i == j { FieldElement::ONE } else { FieldElement::ZERO });
            }
        }
    }

    #[test]
    fn coordinates_recombine() {
        let f = frame(2, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = rand_elem(&mut rng, &f);
            let c = f.coords(x);
            assert_eq!(f.uncoords(&c), x);
            // Σ c_j g^j = x with each c_j in GF(q).
            let sum = c.iter().enumerate().fold(FieldElement::ZERO, |acc, (j, &cj)| {
                assert!(ctx.in_subfield(cj, ctx.e()));
                acc + ctx.mul(cj, ctx.pow(g, j as u64))
            });
            assert_eq!(sum, x);
        }
    }

    #[test]
    fn span_basics() {
        let f = frame(1, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        assert_eq!(f.span(&[]).dim(), 0);
        assert_eq!(f.span(&[g, ctx.mul(g, g)]).dim(), 2);
        let x = ctx.pow(g, 11);
        let y = ctx.pow(g, 40);
        let f2 = frame(2, 3);
        let c2 = f2.ctx().clone();
        for &lambda in f2.scalars().iter().skip(1) {
            let (x, y) = (c2.pow(c2.generator(), 11), c2.pow(c2.generator(), 40));
            assert_eq!(f2.span(&[x, c2.mul(lambda, x), x + y]), f2.span(&[x, y]));
        }
        let s = f.span(&[x, y]);
        assert_eq!(f.span(s.basis()), s);
    }

    #[test]
    fn membership() {
        let f = frame(2, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        let line = f.span(&[g]);
        assert!(f.member(&line, FieldElement::ZERO));
        for &l in f.scalars() {
            assert!(f.member(&line, ctx.mul(g, l)));
        }
        assert!(!f.member(&line, ctx.mul(g, g)));
        assert_eq!(f.vectors(&line).count(), 4);
    }

    #[test]
    fn intersection_and_sum() {
        let f = frame(1, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        let x = f.span(&[g, ctx.pow(g, 5), ctx.pow(g, 9)]);
        let zero = f.zero();
        assert_eq!(f.intersect(&x, &x), x);
        assert_eq!(f.intersect(&x, &zero), zero);
        assert_eq!(f.sum(&x, &zero), x);
        assert_eq!(f.sum(&x, &x), x);
    }

    #[test]
    fn modular_law_on_random_pairs() {
        let f = frame(1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let a: Vec<_> = (0..rng.gen_range(0..5)).map(|_| rand_elem(&mut rng, &f)).collect();
            let b: Vec<_> = (0..rng.gen_range(0..5)).map(|_| rand_elem(&mut rng, &f)).collect();
            let (x, y) = (f.span(&a), f.span(&b));
            let meet = f.intersect(&x, &y);
            let join = f.sum(&x, &y);
            assert_eq!(join.dim() + meet.dim(), x.dim() + y.dim());
            assert_eq!(meet.dim(), f.meet_dim(&x, &y));
            // Brute-force meet.
            let count = f.vectors(&x).filter(|&v| f.member(&y, v)).count();
            assert_eq!(count, 1 << meet.dim());
        }
    }

    #[test]
    fn point_count_is_q_to_the_dim() {
        let f = frame(2, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        for k in 0..4u64 {
            let gens: Vec<_> = (0..k).map(|i| ctx.pow(g, 3 * i + 1)).collect();
            let x = f.span(&gens);
            let members = ctx.elements().filter(|&v| f.member(&x, v)).count();
            assert_eq!(members as u64, 1u64 << (2 * x.dim()));
        }
    }

    #[test]
    fn scaling_and_galois() {
        let f = frame(1, 3);
        let ctx = f.ctx().clone();
        let g = ctx.generator();
        let x = f.span(&[g, ctx.pow(g, 4)]);
        assert_eq!(f.scale(&x, FieldElement::ONE).unwrap(), x);
        let th = ctx.pow(g, 13);
        let back = f.scale(&f.scale(&x, th).unwrap(), ctx.inv(th).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(f.scale(&x, FieldElement::ZERO).is_err());
        assert_eq!(f.apply_galois(&x, 0), x);
        assert_eq!(f.apply_galois(&x, ctx.degree()), x);
        let line = f.span(&[g]);
        assert_eq!(f.apply_galois(&line, 2), f.span(&[ctx.frobenius(g, 2)]));
    }

    #[test]
    fn subfield_space() {
        let f = frame(1, 3);
        let sub = f.subfield(3).unwrap();
        assert_eq!(sub.dim(), 3);
        assert!(f.member(&sub, FieldElement::ONE));
        let f2 = frame(2, 3);
        assert_eq!(f2.subfield(6).unwrap().dim(), 3);
        assert!(f2.subfield(3).is_err());
    }

    #[test]
    fn canonical_reload() {
        let f = frame(1, 3);
        let ctx = f.ctx().clone();
        let x = f.span(&[ctx.pow(ctx.generator(), 7), ctx.pow(ctx.generator(), 20)]);
        assert_eq!(f.from_basis_checked(x.basis()).unwrap(), x);
        let raw = [ctx.pow(ctx.generator(), 7), ctx.pow(ctx.generator(), 20)];
        if raw != x.basis() {
            assert!(f.from_basis_checked(&raw).is_err());
        }
    }
}
