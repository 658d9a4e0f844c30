//! JSON file formats.
//!
//! Field elements are written as lowercase hex of their coefficient bits
//! (constant term in bit 0), zero-padded to `ceil(D/4)` digits so that string
//! order agrees with the canonical member order.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ContextJson, FieldCtx, FieldElement, TowerSpec};
use crate::linalg::{CoordFrame, Subspace};
use crate::spreads::{Kind, Provenance, Spread, SpreadParams};

pub fn element_hex(ctx: &FieldCtx, x: FieldElement) -> String {
    let width = ctx.degree().div_ceil(4) as usize;
    format!("{:0width$x}", x.0)
}

pub fn parse_element(ctx: &FieldCtx, s: &str) -> Result<FieldElement> {
    let bits = u64::from_str_radix(s, 16)
        .map_err(|e| Error::Format(format!("bad field element {s:?}: {e}")))?;
    ctx.element(bits)
        .map_err(|_| Error::Format(format!("{s:?} does not fit in GF(2^{})", ctx.degree())))
}

/// A subspace as the hex encodings of its canonical basis elements.
pub fn subspace_to_json(ctx: &FieldCtx, x: &Subspace) -> Vec<String> {
    x.basis().iter().map(|&b| element_hex(ctx, b)).collect()
}

/// Reads a serialized subspace; non-canonical bases are re-canonicalized.
pub fn subspace_from_json(frame: &CoordFrame, basis: &[String]) -> Result<Subspace> {
    let elems = basis
        .iter()
        .map(|s| parse_element(frame.ctx(), s))
        .collect::<Result<Vec<_>>>()?;
    Ok(frame.span(&elems))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadFile {
    pub context: ContextJson,
    pub kind: Kind,
    /// Divisor chain of the construction; absent for spreads not built from
    /// tower parameters.
    pub chain: Option<Vec<u32>>,
    pub zeta_exponents: Option<Vec<u64>>,
    pub members: Vec<Vec<String>>,
}

impl SpreadFile {
    pub fn from_spread(s: &Spread) -> Self {
        let ctx = s.ctx();
        Self {
            context: ContextJson::from(&**ctx),
            kind: s.kind(),
            chain: s.params().map(|p| p.tower().chain().to_vec()),
            zeta_exponents: s.params().map(|p| p.zeta_exponents().to_vec()),
            members: s.members().iter().map(|x| subspace_to_json(ctx, x)).collect(),
        }
    }

    /// Rebuilds the spread with its member list as stored (order and
    /// duplicates preserved, each member canonicalized).
    pub fn into_spread(self) -> Result<Spread> {
        let ctx = Arc::new(FieldCtx::try_from(&self.context)?);
        let frame = Arc::new(CoordFrame::new(ctx.clone()));
        let params = match (self.chain, self.zeta_exponents) {
            (Some(chain), Some(zetas)) => {
                let tower = TowerSpec::new(ctx.clone(), chain)?;
                Some(SpreadParams::new(tower, self.kind, zetas)?)
            }
            (None, None) => None,
            _ => {
                return Err(Error::Format(
                    "chain and zeta_exponents must be given together".into(),
                ))
            }
        };
        let members = self
            .members
            .iter()
            .map(|b| subspace_from_json(&frame, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Spread::raw(frame, self.kind, members, params, Provenance::Loaded))
    }
}

pub fn spread_to_string(s: &Spread) -> String {
    let mut out = serde_json::to_string_pretty(&SpreadFile::from_spread(s)).expect("serializable");
    out.push('\n');
    out
}

pub fn spread_from_str(text: &str) -> Result<Spread> {
    let file: SpreadFile = serde_json::from_str(text)?;
    file.into_spread()
}

pub fn write_spread(path: &Path, s: &Spread) -> Result<()> {
    std::fs::write(path, spread_to_string(s))?;
    Ok(())
}

pub fn read_spread(path: &Path) -> Result<Spread> {
    spread_from_str(&std::fs::read_to_string(path)?)
}
