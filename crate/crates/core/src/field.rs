//! Arithmetic in GF(2^D), D = 2·e·m, and its subfield lattice.
//!
//! One ambient field hosts every subfield of the tower: the subfield of degree
//! `d` is the fixed field of the `d`-th Frobenius power. The conjugation
//! `x ↦ x^(q^m)` fixes the middle field `F = GF(q^m)`; the norm-1 subgroup of
//! `F^(2) = GF(q^2m)` is the circle group of order `q^m + 1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::BitLinearMap;
use crate::error::{param, Error, Result};
use crate::primitive;

/// Largest ambient degree accepted by [`FieldCtx::new`].
pub const DEFAULT_MAX_DEGREE: u32 = 40;

/// An element of GF(2^D) in the polynomial basis `1, x, …, x^(D-1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl std::ops::Add for FieldElement {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)] // characteristic 2
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

/// The ambient field GF(2^D) together with the tower parameters `e` and `m`.
///
/// Immutable after construction; share it behind an [`Arc`].
#[derive(Clone)]
pub struct FieldCtx {
    e: u32,
    m: u32,
    degree: u32,
    modulus: u64,
    mask: u64,
    reduce_high: BitLinearMap,
    square: BitLinearMap,
    conj: BitLinearMap,
    theta0: FieldElement,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("e", &self.e)
            .field("m", &self.m)
            .field("degree", &self.degree)
            .field("modulus", &format_args!("0x{:x}", self.modulus))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds the context for `q = 2^e` and odd `m > 1` with the default
    /// degree cap.
    pub fn new(e: u32, m: u32) -> Result<Self> {
        Self::with_max_degree(e, m, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(e: u32, m: u32, max_degree: u32) -> Result<Self> {
        if e == 0 {
            return param("e must be at least 1");
        }
        if m <= 1 || m.is_multiple_of(2) {
            return param(format!("m must be odd and greater than 1, got {m}"));
        }
        let degree = 2u64 * e as u64 * m as u64;
        let cap = max_degree.min(62);
        if degree > cap as u64 {
            return Err(Error::Resource(format!(
                "field degree 2·e·m = {degree} exceeds the maximum of {cap}"
            )));
        }
        let degree = degree as u32;
        let modulus = primitive::smallest_primitive(degree);
        Ok(Self::from_modulus(e, m, modulus))
    }

    /// Builds a context around a caller-supplied primitive modulus of degree
    /// `2·e·m`. Used when reloading serialized contexts.
    pub fn from_parts(e: u32, m: u32, modulus: u64) -> Result<Self> {
        if e == 0 || m <= 1 || m.is_multiple_of(2) {
            return param(format!("invalid tower parameters e={e}, m={m}"));
        }
        let degree = 2 * e * m;
        if degree > 62 || modulus >> degree != 1 {
            return Err(Error::Format(format!(
                "modulus 0x{modulus:x} does not have degree {degree}"
            )));
        }
        if !primitive::is_primitive(modulus, degree) {
            return Err(Error::Format(format!("modulus 0x{modulus:x} is not primitive")));
        }
        Ok(Self::from_modulus(e, m, modulus))
    }

    fn from_modulus(e: u32, m: u32, modulus: u64) -> Self {
        let degree = 2 * e * m;
        let mask = (1u64 << degree) - 1;
        // x^(D+i) mod f for each bit i of the high half of a product.
        let mut images = Vec::with_capacity(degree as usize);
        let mut cur = modulus & mask; // x^D mod f
        for _ in 0..degree {
            images.push(cur);
            cur <<= 1;
            if cur >> degree & 1 == 1 {
                cur ^= modulus;
            }
        }
        let reduce_high = BitLinearMap::from_images(&images);
        let mut ctx = Self {
            e,
            m,
            degree,
            modulus,
            mask,
            reduce_high,
            square: BitLinearMap::from_images(&[]),
            conj: BitLinearMap::from_images(&[]),
            theta0: FieldElement::ONE,
        };
        let squares: Vec<u64> = (0..degree)
            .map(|i| ctx.mul(FieldElement(1 << i), FieldElement(1 << i)).0)
            .collect();
        ctx.square = BitLinearMap::from_images(&squares);
        let conj: Vec<u64> = (0..degree)
            .map(|i| ctx.frobenius_slow(FieldElement(1 << i), e * m).0)
            .collect();
        ctx.conj = BitLinearMap::from_images(&conj);
        ctx.theta0 = ctx.pow(ctx.generator(), ctx.q_pow(m) - 1);
        ctx
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree of the ambient field over GF(2).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Modulus with bit `i` holding the coefficient of `x^i` (bit `D` set).
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the ambient multiplicative group, `2^D - 1`.
    pub fn group_order(&self) -> u64 {
        self.mask
    }

    /// `q^k` for `q = 2^e`.
    pub fn q_pow(&self, k: u32) -> u64 {
        1u64 << (self.e * k)
    }

    /// The residue of the indeterminate; primitive by choice of modulus.
    pub fn generator(&self) -> FieldElement {
        FieldElement(2)
    }

    /// Reads an element from raw bits, rejecting bits above the degree.
    pub fn element(&self, bits: u64) -> Result<FieldElement> {
        if bits & !self.mask != 0 {
            return Err(Error::Domain(format!(
                "0x{bits:x} is not an element of GF(2^{})",
                self.degree
            )));
        }
        Ok(FieldElement(bits))
    }

    /// Iterates over all `2^D` elements in integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..=self.mask).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = clmul(a.0, b.0);
        let low = prod as u64 & self.mask;
        let high = (prod >> self.degree) as u64;
        FieldElement(low ^ self.reduce_high.apply(high))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.mask - 1))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.square.apply(a.0))
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        let k = k % self.degree;
        (0..k).fold(x, |acc, _| self.square(acc))
    }

    fn frobenius_slow(&self, x: FieldElement, k: u32) -> FieldElement {
        (0..k).fold(x, |acc, _| self.mul(acc, acc))
    }

    /// The involution `x ↦ x^(q^m)` fixing the middle field `F`.
    #[inline]
    pub fn conjugate(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.conj.apply(x.0))
    }

    /// Whether `x^(2^deg) = x`, i.e. `x` lies in the subfield of degree
    /// `gcd(deg, D)`.
    pub fn in_subfield(&self, x: FieldElement, deg: u32) -> bool {
        self.frobenius(x, deg) == x
    }

    fn check_degree(&self, deg: u32) -> Result<()> {
        if deg == 0 || !self.degree.is_multiple_of(deg) {
            return param(format!(
                "{deg} does not divide the ambient degree {}",
                self.degree
            ));
        }
        Ok(())
    }

    /// Relative trace from the subfield of degree `from_deg` down to the one
    /// of degree `to_deg`.
    pub fn rel_trace(&self, x: FieldElement, from_deg: u32, to_deg: u32) -> Result<FieldElement> {
        self.check_degree(from_deg)?;
        self.check_degree(to_deg)?;
        if !from_deg.is_multiple_of(to_deg) {
            return param(format!("{to_deg} does not divide {from_deg}"));
        }
        if !self.in_subfield(x, from_deg) {
            return Err(Error::Domain(format!(
                "{x:?} is not in the subfield of degree {from_deg}"
            )));
        }
        Ok(self.trace_formula(x, from_deg / to_deg, to_deg))
    }

    /// `Σ_{j<terms} x^(2^(step·j))` without membership checks. On the
    /// appropriate subfield this is the relative trace; on the whole field it
    /// is still GF(2)-linear, which lets it be tabulated.
    pub(crate) fn trace_formula(&self, x: FieldElement, terms: u32, step: u32) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut cur = x;
        for _ in 0..terms {
            acc += cur;
            cur = self.frobenius(cur, step);
        }
        acc
    }

    /// Tabulated GF(2)-linear version of [`Self::trace_formula`].
    pub(crate) fn trace_map(&self, terms: u32, step: u32) -> BitLinearMap {
        let images: Vec<u64> = (0..self.degree)
            .map(|i| self.trace_formula(FieldElement(1 << i), terms, step).0)
            .collect();
        BitLinearMap::from_images(&images)
    }

    /// `θ_0 = g^(q^m - 1)`, a generator of the circle group.
    pub fn circle_generator(&self) -> FieldElement {
        self.theta0
    }

    /// Order of the circle group, `q^m + 1`.
    pub fn circle_order(&self) -> u64 {
        self.q_pow(self.m) + 1
    }

    /// `θ_0^t`, reducing `t` modulo the circle order.
    pub fn circle_element(&self, t: u64) -> FieldElement {
        self.pow(self.theta0, t % self.circle_order())
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        let mut order = self.mask;
        for p in primitive::prime_factors(self.mask) {
            while order.is_multiple_of(p) && self.pow(x, order / p) == FieldElement::ONE {
                order /= p;
            }
        }
        Ok(order)
    }
}

/// Carry-less product of two words of at most 63 bits.
#[inline]
fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        // Four bits at a time; branch-free inside the nibble.
        let nib = b & 0xf;
        acc ^= (a & (0u128.wrapping_sub((nib & 1) as u128))) << shift;
        acc ^= (a & (0u128.wrapping_sub(((nib >> 1) & 1) as u128))) << (shift + 1);
        acc ^= (a & (0u128.wrapping_sub(((nib >> 2) & 1) as u128))) << (shift + 2);
        acc ^= (a & (0u128.wrapping_sub(((nib >> 3) & 1) as u128))) << (shift + 3);
        b >>= 4;
        shift += 4;
    }
    acc
}

/// A divisor chain `m = m_0 > m_1 > … > m_n = 1` over a shared context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    ctx: Arc<FieldCtx>,
    chain: Vec<u32>,
}

impl TowerSpec {
    pub fn new(ctx: Arc<FieldCtx>, chain: Vec<u32>) -> Result<Self> {
        validate_chain(ctx.m(), &chain)?;
        Ok(Self { ctx, chain })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    /// Number of steps `n` in the chain.
    pub fn n(&self) -> usize {
        self.chain.len() - 1
    }

    /// GF(2)-degree of `F_i`.
    pub fn field_degree(&self, i: usize) -> u32 {
        self.ctx.e() * self.chain[i]
    }

    /// `q^(m_i) + 1`, the order of `C ∩ F_i^(2)`.
    pub fn zeta_group_order(&self, i: usize) -> u64 {
        self.ctx.q_pow(self.chain[i]) + 1
    }

    /// `ζ = θ_0^(k·(q^m+1)/(q^(m_i)+1))`, an element of `C ∩ F_i^(2)`.
    pub fn zeta_element(&self, i: usize, k: u64) -> Result<FieldElement> {
        if i == 0 || i > self.n() {
            return param(format!("zeta index {i} outside 1..={}", self.n()));
        }
        let step = self.ctx.circle_order() / self.zeta_group_order(i);
        let exp = (k as u128 * step as u128 % self.ctx.circle_order() as u128) as u64;
        Ok(self.ctx.pow(self.ctx.circle_generator(), exp))
    }
}

/// Checks that `chain` starts at `m`, strictly decreases through divisors and
/// ends at 1.
pub fn validate_chain(m: u32, chain: &[u32]) -> Result<()> {
    if chain.len() < 2 {
        return param("a divisor chain needs at least two terms");
    }
    if chain[0] != m {
        return param(format!("chain must start at m = {m}, got {}", chain[0]));
    }
    if *chain.last().unwrap() != 1 {
        return param("chain must end at 1");
    }
    for w in chain.windows(2) {
        if w[1] >= w[0] || w[1] == 0 || w[0] % w[1] != 0 {
            return param(format!(
                "chain must strictly decrease through divisors: {} -> {}",
                w[0], w[1]
            ));
        }
    }
    Ok(())
}

/// Serialized form of a context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub e: u32,
    pub m: u32,
    /// Coefficient bits with the constant term in bit 0, as lowercase hex.
    pub modulus_hex: String,
}

impl From<&FieldCtx> for ContextJson {
    fn from(ctx: &FieldCtx) -> Self {
        Self {
            e: ctx.e,
            m: ctx.m,
            modulus_hex: format!("{:x}", ctx.modulus),
        }
    }
}

impl TryFrom<&ContextJson> for FieldCtx {
    type Error = Error;

    fn try_from(json: &ContextJson) -> Result<Self> {
        let modulus = u64::from_str_radix(&json.modulus_hex, 16)
            .map_err(|e| Error::Format(format!("bad modulus_hex {:?}: {e}", json.modulus_hex)))?;
        FieldCtx::from_parts(json.e, json.m, modulus)
    }
}
