//! Construction of the cyclic spreads.
//!
//! For a divisor chain `m = m_0 > … > m_n = 1` let `W_i` be the kernel of the
//! relative trace `F_i → F_(i+1)` and `γ_i = ζ_0·…·ζ_i` with `ζ_0 = 1` and
//! `1 ≠ ζ_i ∈ C ∩ F_i^(2)`. The elliptic spread is the orbit of
//! `Σ_(i<n) W_i·γ_i` under multiplication by the circle group `C`; adding the
//! line `F_n·γ_n` to the base gives a symplectic spread whose members restrict
//! to the elliptic ones.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{param, Error, Result};
use crate::field::{FieldCtx, FieldElement, TowerSpec};
use crate::forms::FormCtx;
use crate::linalg::{CoordFrame, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Elliptic,
    Symplectic,
}

impl Kind {
    /// Member dimension over `GF(q)` in a `2m`-dimensional space.
    pub fn member_dim(self, m: u32) -> usize {
        match self {
            Kind::Elliptic => m as usize - 1,
            Kind::Symplectic => m as usize,
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptic" => Ok(Kind::Elliptic),
            "symplectic" => Ok(Kind::Symplectic),
            other => param(format!("unknown spread kind {other:?}")),
        }
    }
}

/// A tower with its `ζ`-elements, addressed by exponent.
///
/// `zeta_exponents[i-1] = k_i` selects `ζ_i = zeta_element(i, k_i)`. Elliptic
/// parameters carry `n - 1` exponents, symplectic ones `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadParams {
    tower: TowerSpec,
    kind: Kind,
    zeta_exponents: Vec<u64>,
    zetas: Vec<FieldElement>,
}

impl SpreadParams {
    pub fn new(tower: TowerSpec, kind: Kind, zeta_exponents: Vec<u64>) -> Result<Self> {
        let n = tower.n();
        let expected = match kind {
            Kind::Elliptic => n - 1,
            Kind::Symplectic => n,
        };
        if zeta_exponents.len() != expected {
            return param(format!(
                "{kind:?} parameters over a chain with n = {n} need {expected} zeta exponents, got {}",
                zeta_exponents.len()
            ));
        }
        let ctx = tower.ctx().clone();
        let mut zetas = Vec::with_capacity(expected);
        for (idx, &k) in zeta_exponents.iter().enumerate() {
            let i = idx + 1;
            let top = tower.zeta_group_order(i) - 1;
            if k == 0 || k > top {
                return param(format!("zeta exponent k_{i} = {k} outside 1..={top}"));
            }
            let z = tower.zeta_element(i, k)?;
            if z == FieldElement::ONE {
                return param(format!("zeta_{i} is trivial for k_{i} = {k}"));
            }
            debug_assert!(ctx.in_subfield(z, 2 * tower.field_degree(i)));
            zetas.push(z);
        }
        Ok(Self {
            tower,
            kind,
            zeta_exponents,
            zetas,
        })
    }

    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.tower.ctx()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn zeta_exponents(&self) -> &[u64] {
        &self.zeta_exponents
    }

    /// `ζ_1, ζ_2, …` (`ζ_0 = 1` is implicit).
    pub fn zetas(&self) -> &[FieldElement] {
        &self.zetas
    }

    /// Whether the hypotheses of the classification theorem hold: `q^m > 8`
    /// (`q` is always even here).
    pub fn theorem_conditions(&self) -> bool {
        let ctx = self.ctx();
        ctx.q_pow(ctx.m()) > 8
    }

    /// `γ_0 = 1, γ_i = γ_(i-1)·ζ_i`, one entry per `ζ` plus `γ_0`.
    pub fn gammas(&self) -> Vec<FieldElement> {
        let ctx = self.ctx();
        let mut out = Vec::with_capacity(self.zetas.len() + 1);
        let mut acc = FieldElement::ONE;
        out.push(acc);
        for &z in &self.zetas {
            acc = ctx.mul(acc, z);
            out.push(acc);
        }
        out
    }

    /// Parameters of the image under `x ↦ x^(2^k)`: `ζ_i ↦ ζ_i^(2^k)`.
    pub fn frobenius_image(&self, k: u32) -> Self {
        let exps = self
            .zeta_exponents
            .iter()
            .enumerate()
            .map(|(idx, &e)| {
                let order = self.tower.zeta_group_order(idx + 1) as u128;
                let mut f = 1u128;
                for _ in 0..k {
                    f = f * 2 % order;
                }
                (e as u128 * f % order) as u64
            })
            .collect();
        Self::new(self.tower.clone(), self.kind, exps).expect("Galois conjugates stay admissible")
    }

    /// The elliptic parameters obtained by dropping `ζ_n`.
    pub fn to_elliptic(&self) -> Self {
        match self.kind {
            Kind::Elliptic => self.clone(),
            Kind::Symplectic => {
                let mut exps = self.zeta_exponents.clone();
                exps.pop();
                Self::new(self.tower.clone(), Kind::Elliptic, exps).expect("prefix stays valid")
            }
        }
    }
}

/// Where a spread came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Orbit,
    Desarguesian,
    Restricted,
    GaloisImage(u32),
    Loaded,
    Manual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Verified {
    #[default]
    Unverified,
    Pass,
    Fail,
}

/// A set of subspaces claimed to form a spread.
#[derive(Clone, Debug)]
pub struct Spread {
    frame: Arc<CoordFrame>,
    kind: Kind,
    members: Vec<Subspace>,
    params: Option<SpreadParams>,
    provenance: Provenance,
    verified: Verified,
}

impl PartialEq for Spread {
    /// Same kind and same member list; for canonical spreads this is set
    /// equality.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && **self.frame.ctx() == **other.frame.ctx()
            && self.members == other.members
    }
}

impl Spread {
    /// Canonical spread: members sorted by basis and de-duplicated.
    pub fn new(
        frame: Arc<CoordFrame>,
        kind: Kind,
        mut members: Vec<Subspace>,
        params: Option<SpreadParams>,
        provenance: Provenance,
    ) -> Self {
        members.sort();
        members.dedup();
        Self::raw(frame, kind, members, params, provenance)
    }

    /// Keeps `members` exactly as given, duplicates and order included.
    pub fn raw(
        frame: Arc<CoordFrame>,
        kind: Kind,
        members: Vec<Subspace>,
        params: Option<SpreadParams>,
        provenance: Provenance,
    ) -> Self {
        Self {
            frame,
            kind,
            members,
            params,
            provenance,
            verified: Verified::Unverified,
        }
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.frame.ctx()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn params(&self) -> Option<&SpreadParams> {
        self.params.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn verified(&self) -> Verified {
        self.verified
    }

    pub fn set_verified(&mut self, pass: bool) {
        self.verified = if pass { Verified::Pass } else { Verified::Fail };
    }

    /// Sorted and free of duplicates.
    pub fn is_canonical(&self) -> bool {
        self.members.windows(2).all(|w| w[0] < w[1])
    }

    pub fn canonicalize(mut self) -> Self {
        self.members.sort();
        self.members.dedup();
        self
    }

    pub fn contains(&self, x: &Subspace) -> bool {
        if self.is_canonical() {
            self.members.binary_search(x).is_ok()
        } else {
            self.members.contains(x)
        }
    }
}

/// `W_i = ker(T_(i+1)|F_i)` for `0 <= i < n`.
pub fn kernel_space(frame: &CoordFrame, tower: &TowerSpec, i: usize) -> Result<Subspace> {
    if i >= tower.n() {
        return param(format!("kernel index {i} outside 0..{}", tower.n()));
    }
    let ctx = frame.ctx();
    let from = tower.field_degree(i);
    let to = tower.field_degree(i + 1);
    let domain: Vec<u64> = (0..ctx.degree()).map(|b| 1u64 << b).collect();
    let d = ctx.degree();
    // x ∈ F_i and T_(i+1)(x) = 0, stacked into one GF(2)-linear map.
    let ker = bits::kernel(&domain, |x| {
        let x = FieldElement(x);
        let fixed = ctx.frobenius(x, from) + x;
        let tr = ctx.trace_formula(x, from / to, to);
        ((fixed.0 as u128) << d) | tr.0 as u128
    });
    let gens: Vec<FieldElement> = ker.into_iter().map(FieldElement).collect();
    let w = frame.span(&gens);
    let expected = (tower.chain()[i] - tower.chain()[i + 1]) as usize;
    if w.dim() != expected {
        return Err(Error::Construction(format!(
            "trace kernel W_{i} has dimension {} instead of {expected}",
            w.dim()
        )));
    }
    Ok(w)
}

/// `Σ_(i<n) W_i·γ_i`, plus `F_n·γ_n` for symplectic parameters.
pub fn base_subspace(frame: &CoordFrame, params: &SpreadParams) -> Result<Subspace> {
    check_frame(frame, params.ctx())?;
    let tower = params.tower();
    let gammas = params.gammas();
    let mut gens = Vec::new();
    for (i, &gamma) in gammas.iter().enumerate().take(tower.n()) {
        let w = kernel_space(frame, tower, i)?;
        gens.extend(w.basis().iter().map(|&b| frame.ctx().mul(b, gamma)));
    }
    if params.kind() == Kind::Symplectic {
        // F_n·γ_n is the GF(q)-line through γ_n.
        gens.push(gammas[tower.n()]);
    }
    let base = frame.span(&gens);
    let expected = params.kind().member_dim(frame.ctx().m());
    if base.dim() != expected {
        return Err(Error::Construction(format!(
            "base subspace has dimension {} instead of {expected}; the sum is not direct",
            base.dim()
        )));
    }
    Ok(base)
}

/// `{Xθ_0^t : 0 <= t <= q^m}` as a canonical spread.
pub fn orbit_of(
    frame: &Arc<CoordFrame>,
    base: &Subspace,
    kind: Kind,
    params: Option<SpreadParams>,
    provenance: Provenance,
) -> Result<Spread> {
    let ctx = frame.ctx();
    let order = ctx.circle_order();
    let members: Vec<Subspace> = (0..order)
        .into_par_iter()
        .map(|t| frame.scale(base, ctx.circle_element(t)))
        .collect::<Result<_>>()?;
    let spread = Spread::new(frame.clone(), kind, members, params, provenance);
    if spread.len() as u64 != order {
        return Err(Error::Construction(format!(
            "circle orbit has {} distinct members instead of {order}",
            spread.len()
        )));
    }
    Ok(spread)
}

/// The circle-group orbit of the base subspace of `params`.
pub fn orbit_spread(frame: &Arc<CoordFrame>, params: &SpreadParams) -> Result<Spread> {
    let base = base_subspace(frame, params)?;
    orbit_of(frame, &base, params.kind(), Some(params.clone()), Provenance::Orbit)
}

/// The member `(base)·θ_0^t` of the orbit, without building the others.
pub fn orbit_member(frame: &CoordFrame, params: &SpreadParams, t: u64) -> Result<Subspace> {
    let base = base_subspace(frame, params)?;
    frame.scale(&base, frame.ctx().circle_element(t))
}

/// `{Fθ : θ ∈ C}`, the orbit of the middle field.
pub fn desarguesian_spread(frame: &Arc<CoordFrame>) -> Result<Spread> {
    let ctx = frame.ctx();
    let f = frame.subfield(ctx.e() * ctx.m())?;
    orbit_of(frame, &f, Kind::Symplectic, None, Provenance::Desarguesian)
}

/// The singular vectors of a totally isotropic `m`-space, which form an
/// `(m-1)`-space because `Q` is additive and semilinear there.
pub fn restrict_singular(fc: &FormCtx, x: &Subspace) -> Result<Subspace> {
    let m = fc.ctx().m() as usize;
    if x.dim() != m {
        return Err(Error::Precondition(format!(
            "restriction needs an {m}-dimensional subspace, got dimension {}",
            x.dim()
        )));
    }
    if !fc.is_totally_isotropic(x) {
        return Err(Error::Precondition("subspace is not totally isotropic".into()));
    }
    let ker = bits::kernel(x.gf2_basis(), |v| fc.quad_form(FieldElement(v)).0 as u128);
    let gens: Vec<FieldElement> = ker.into_iter().map(FieldElement).collect();
    let r = fc.frame().span(&gens);
    if r.dim() != m - 1 {
        return Err(Error::Construction(format!(
            "singular vectors span dimension {} instead of {}; the form is degenerate on this subspace",
            r.dim(),
            m - 1
        )));
    }
    Ok(r)
}

/// Memberwise [`restrict_singular`] of a symplectic spread.
pub fn restrict_spread(fc: &FormCtx, s: &Spread) -> Result<Spread> {
    if s.kind() != Kind::Symplectic {
        return Err(Error::Precondition("restriction needs a symplectic spread".into()));
    }
    if s.verified() == Verified::Fail {
        return Err(Error::Precondition("spread failed verification".into()));
    }
    check_frame(fc.frame(), s.ctx())?;
    let members: Vec<Subspace> = s
        .members()
        .par_iter()
        .map(|x| restrict_singular(fc, x))
        .collect::<Result<_>>()?;
    let params = s.params().map(SpreadParams::to_elliptic);
    let out = Spread::new(
        fc.frame().clone(),
        Kind::Elliptic,
        members,
        params,
        Provenance::Restricted,
    );
    if out.len() != s.len() {
        return Err(Error::Construction(format!(
            "restriction merged members: {} -> {}",
            s.len(),
            out.len()
        )));
    }
    Ok(out)
}

/// The divisor chain from the prime factorization of `m`, primes in
/// nondecreasing order: `m_i = p_(i+1)·…·p_n`.
pub fn default_chain(m: u32) -> Result<Vec<u32>> {
    if m <= 1 || m.is_multiple_of(2) {
        return param(format!("m must be odd and greater than 1, got {m}"));
    }
    let mut primes = Vec::new();
    let mut rest = m;
    let mut p = 3;
    while p * p <= rest {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
        p += 2;
    }
    if rest > 1 {
        primes.push(rest);
    }
    let mut chain = vec![m];
    let mut cur = m;
    for p in primes {
        cur /= p;
        chain.push(cur);
    }
    Ok(chain)
}

fn check_frame(frame: &CoordFrame, ctx: &FieldCtx) -> Result<()> {
    if **frame.ctx() != *ctx {
        return param("objects belong to different field contexts");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    struct Setup {
        frame: Arc<CoordFrame>,
        form: FormCtx,
    }

    fn setup(e: u32, m: u32) -> Setup {
        let ctx = Arc::new(FieldCtx::new(e, m).unwrap());
        let frame = Arc::new(CoordFrame::new(ctx));
        let form = FormCtx::new(frame.clone());
        Setup { frame, form }
    }

    fn tower(s: &Setup, chain: &[u32]) -> TowerSpec {
        TowerSpec::new(s.frame.ctx().clone(), chain.to_vec()).unwrap()
    }

    #[test]
    fn chains_from_factorization() {
        assert_eq!(default_chain(9).unwrap(), vec![9, 3, 1]);
        assert_eq!(default_chain(15).unwrap(), vec![15, 5, 1]);
        assert_eq!(default_chain(7).unwrap(), vec![7, 1]);
        assert_eq!(default_chain(45).unwrap(), vec![45, 15, 5, 1]);
        assert!(default_chain(8).is_err());
        assert!(default_chain(1).is_err());
    }

    #[test]
    fn kernel_dimensions() {
        let s = setup(1, 3);
        let t = tower(&s, &[3, 1]);
        let w = kernel_space(&s.frame, &t, 0).unwrap();
        assert_eq!(w.dim(), 2);
        // Exhaustive scan of F for the trace kernel.
        let ctx = s.frame.ctx();
        for x in ctx.elements() {
            let expected = ctx.in_subfield(x, 3) && ctx.rel_trace(x, 3, 1).unwrap().is_zero();
            assert_eq!(s.frame.member(&w, x), expected);
        }
        assert!(kernel_space(&s.frame, &t, 1).is_err());

        let s9 = setup(1, 9);
        let t9 = tower(&s9, &[9, 3, 1]);
        assert_eq!(kernel_space(&s9.frame, &t9, 0).unwrap().dim(), 6);
        assert_eq!(kernel_space(&s9.frame, &t9, 1).unwrap().dim(), 2);
    }

    #[test]
    fn param_validation() {
        let s = setup(1, 9);
        let t = tower(&s, &[9, 3, 1]);
        assert!(SpreadParams::new(t.clone(), Kind::Elliptic, vec![1]).is_ok());
        assert!(SpreadParams::new(t.clone(), Kind::Elliptic, vec![]).is_err());
        assert!(SpreadParams::new(t.clone(), Kind::Elliptic, vec![9]).is_err());
        assert!(SpreadParams::new(t.clone(), Kind::Elliptic, vec![0]).is_err());
        assert!(SpreadParams::new(t.clone(), Kind::Symplectic, vec![1]).is_err());
        assert!(SpreadParams::new(t.clone(), Kind::Symplectic, vec![1, 2]).is_ok());
        assert!(SpreadParams::new(t, Kind::Symplectic, vec![1, 3]).is_err());
        let small = setup(1, 3);
        let p = SpreadParams::new(tower(&small, &[3, 1]), Kind::Elliptic, vec![]).unwrap();
        assert!(!p.theorem_conditions());
    }

    #[test]
    fn gamma_products() {
        let s = setup(1, 9);
        let ctx = s.frame.ctx().clone();
        let p = SpreadParams::new(tower(&s, &[9, 3, 1]), Kind::Elliptic, vec![1]).unwrap();
        let g = p.gammas();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0], FieldElement::ONE);
        // (q^m + 1)/(q^(m_1) + 1) = 513/9 = 57.
        assert_eq!(g[1], ctx.pow(ctx.circle_generator(), 57));
        let sym = SpreadParams::new(tower(&s, &[9, 3, 1]), Kind::Symplectic, vec![5, 2]).unwrap();
        for x in sym.gammas() {
            assert_eq!(ctx.mul(x, ctx.conjugate(x)), FieldElement::ONE);
        }
        let s3 = setup(1, 3);
        let p1 = SpreadParams::new(tower(&s3, &[3, 1]), Kind::Elliptic, vec![]).unwrap();
        assert_eq!(p1.gammas(), vec![FieldElement::ONE]);
    }

    #[test]
    fn base_subspaces() {
        let s = setup(1, 3);
        let t = tower(&s, &[3, 1]);
        let p = SpreadParams::new(t.clone(), Kind::Elliptic, vec![]).unwrap();
        assert_eq!(
            base_subspace(&s.frame, &p).unwrap(),
            kernel_space(&s.frame, &t, 0).unwrap()
        );
        for k in 1..=2 {
            let sym = SpreadParams::new(t.clone(), Kind::Symplectic, vec![k]).unwrap();
            let b = base_subspace(&s.frame, &sym).unwrap();
            assert_eq!(b.dim(), 3);
            assert!(s.form.is_totally_isotropic(&b));
            // Singular vectors inside the member are exactly W.
            let singular: Vec<_> = s
                .frame
                .vectors(&b)
                .filter(|&v| s.form.quad_form(v).is_zero())
                .collect();
            assert_eq!(s.frame.span(&singular), base_subspace(&s.frame, &p).unwrap());
            assert_eq!(singular.len(), 4);
        }

        let s9 = setup(1, 9);
        for k in 1..=8 {
            let p = SpreadParams::new(tower(&s9, &[9, 3, 1]), Kind::Elliptic, vec![k]).unwrap();
            let b = base_subspace(&s9.frame, &p).unwrap();
            assert_eq!(b.dim(), 8);
            assert!(s9.form.is_totally_singular(&b));
            let t9 = tower(&s9, &[9, 3, 1]);
            let gam = p.gammas();
            for (i, &g) in gam.iter().enumerate().take(2) {
                let w = kernel_space(&s9.frame, &t9, i).unwrap();
                for &v in w.basis() {
                    assert!(s9.form.quad_form(s9.frame.ctx().mul(v, g)).is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_sum_is_direct_at_m9() {
        let s = setup(1, 9);
        let t = tower(&s, &[9, 3, 1]);
        let p = SpreadParams::new(t.clone(), Kind::Elliptic, vec![3]).unwrap();
        let gam = p.gammas();
        let parts: Vec<Subspace> = (0..2)
            .map(|i| s.frame.scale(&kernel_space(&s.frame, &t, i).unwrap(), gam[i]).unwrap())
            .collect();
        assert_eq!(s.frame.meet_dim(&parts[0], &parts[1]), 0);
        assert_eq!(s.frame.sum(&parts[0], &parts[1]).dim(), 8);
    }

    #[test]
    fn small_orbits() {
        let s = setup(1, 3);
        let t = tower(&s, &[3, 1]);
        let p = SpreadParams::new(t.clone(), Kind::Elliptic, vec![]).unwrap();
        let sp = orbit_spread(&s.frame, &p).unwrap();
        assert_eq!(sp.len(), 9);
        assert!(sp.is_canonical());
        assert!(sp.members().iter().all(|x| x.dim() == 2 && s.form.is_totally_singular(x)));

        let sym = SpreadParams::new(t, Kind::Symplectic, vec![1]).unwrap();
        let ss = orbit_spread(&s.frame, &sym).unwrap();
        assert_eq!(ss.len(), 9);
        let mut covered = std::collections::HashSet::new();
        for x in ss.members() {
            assert!(s.form.is_totally_isotropic(x));
            for v in s.frame.vectors(x).skip(1) {
                assert!(covered.insert(v));
            }
        }
        assert_eq!(covered.len(), 63);
    }

    #[test]
    fn desarguesian() {
        let s = setup(1, 3);
        let d = desarguesian_spread(&s.frame).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d.kind(), Kind::Symplectic);
        let f = s.frame.subfield(3).unwrap();
        let with_one: Vec<_> = d
            .members()
            .iter()
            .filter(|x| s.frame.member(x, FieldElement::ONE))
            .collect();
        assert_eq!(with_one, vec![&f]);
        let covered: u64 = d.members().iter().map(|x| (1u64 << x.dim()) - 1).sum();
        assert_eq!(covered, 63);
    }

    #[test]
    fn restriction_of_middle_field() {
        for (e, m) in [(1, 3), (2, 3)] {
            let s = setup(e, m);
            let ctx = s.frame.ctx().clone();
            let f = s.frame.subfield(e * m).unwrap();
            // On F, Q(x) = T(x)^2, so the singular vectors are the trace kernel.
            let w_oracle: Vec<_> = ctx
                .elements()
                .filter(|&x| ctx.in_subfield(x, e * m))
                .filter(|&x| ctx.rel_trace(x, e * m, e).unwrap().is_zero())
                .collect();
            let w = s.frame.span(&w_oracle);
            assert_eq!(w.dim() as u32, m - 1);
            assert_eq!(restrict_singular(&s.form, &f).unwrap(), w);
            for t in 0..ctx.circle_order() {
                let th = ctx.circle_element(t);
                let ft = s.frame.scale(&f, th).unwrap();
                assert_eq!(
                    restrict_singular(&s.form, &ft).unwrap(),
                    s.frame.scale(&w, th).unwrap()
                );
            }
        }
    }

    #[test]
    fn restriction_preconditions() {
        let s = setup(1, 3);
        let ctx = s.frame.ctx().clone();
        let g = ctx.generator();
        let not_ti = s.frame.span(&[FieldElement::ONE, g, ctx.pow(g, 2)]);
        if !s.form.is_totally_isotropic(&not_ti) {
            assert!(matches!(
                restrict_singular(&s.form, &not_ti),
                Err(Error::Precondition(_))
            ));
        }
        let small = s.frame.span(&[FieldElement::ONE]);
        assert!(matches!(
            restrict_singular(&s.form, &small),
            Err(Error::Precondition(_))
        ));
        let t = tower(&s, &[3, 1]);
        let ell = orbit_spread(
            &s.frame,
            &SpreadParams::new(t, Kind::Elliptic, vec![]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            restrict_spread(&s.form, &ell),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn restricted_symplectic_base_is_elliptic_base() {
        let s = setup(1, 9);
        let t = tower(&s, &[9, 3, 1]);
        for k1 in [1, 3, 8] {
            let ell = SpreadParams::new(t.clone(), Kind::Elliptic, vec![k1]).unwrap();
            let expected = base_subspace(&s.frame, &ell).unwrap();
            for k2 in 1..=2 {
                let sym = SpreadParams::new(t.clone(), Kind::Symplectic, vec![k1, k2]).unwrap();
                let b = base_subspace(&s.frame, &sym).unwrap();
                assert_eq!(restrict_singular(&s.form, &b).unwrap(), expected);
                let scan: Vec<_> = s
                    .frame
                    .vectors(&b)
                    .filter(|&v| s.form.quad_form(v).is_zero())
                    .collect();
                assert_eq!(scan.len(), 256);
                assert_eq!(s.frame.span(&scan), expected);
            }
        }
    }

    #[test]
    fn frobenius_image_params() {
        let s = setup(1, 9);
        let ctx = s.frame.ctx().clone();
        let p = SpreadParams::new(tower(&s, &[9, 3, 1]), Kind::Elliptic, vec![1]).unwrap();
        for k in 0..18 {
            let img = p.frobenius_image(k);
            assert_eq!(img.zetas()[0], ctx.frobenius(p.zetas()[0], k));
        }
        assert_eq!(p.frobenius_image(1).zeta_exponents(), &[2]);
    }
}
