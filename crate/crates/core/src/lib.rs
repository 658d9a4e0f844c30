//! Cyclic symplectic and elliptic spreads of `F^(2) = GF(q^(2m))` over
//! `GF(q)`, `q = 2^e`, `m` odd.
//!
//! The crate builds the spreads as orbits of the circle group
//! `C = {θ : θ·θ̄ = 1}` acting by multiplication, checks the spread axioms by
//! explicit linear algebra, and classifies the elliptic family up to
//! Galois conjugacy of its parameters.
//!
//! ```
//! use ospread::{orbit_spread, verify_spread, Geometry, Kind, Mode, SpreadParams, TowerSpec};
//!
//! let geo = Geometry::new(1, 3).unwrap();
//! let tower = TowerSpec::new(geo.ctx().clone(), vec![3, 1]).unwrap();
//! let params = SpreadParams::new(tower, Kind::Elliptic, vec![]).unwrap();
//! let spread = orbit_spread(geo.frame(), &params).unwrap();
//! let report = verify_spread(geo.form(), &spread, Mode::Exhaustive).unwrap();
//! assert!(report.pass);
//! assert_eq!(report.covered, 27);
//! ```

pub mod analysis;
pub mod bits;
pub mod error;
pub mod field;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod primitive;
pub mod spreads;

use std::sync::Arc;

pub use analysis::{
    aut_order, classify_tower, galois_image_spread, params_equivalent, theorem_bound,
    verify_spread, verify_transitive, AutOrder, ClassificationJson, ClassificationResult,
    Equivalence, Mode, VerificationReport,
};
pub use error::{Error, Result};
pub use field::{ContextJson, FieldCtx, FieldElement, TowerSpec};
pub use forms::{CensusReport, FormCtx, QuadricType};
pub use linalg::{CoordFrame, Subspace};
pub use spreads::{
    base_subspace, default_chain, desarguesian_spread, kernel_space, orbit_spread,
    restrict_singular, restrict_spread, Kind, Provenance, Spread, SpreadParams, Verified,
};

/// A field context with its coordinate frame and standard quadratic form.
#[derive(Clone, Debug)]
pub struct Geometry {
    frame: Arc<CoordFrame>,
    form: FormCtx,
}

impl Geometry {
    pub fn new(e: u32, m: u32) -> Result<Self> {
        Ok(Self::from_ctx(Arc::new(FieldCtx::new(e, m)?)))
    }

    pub fn with_max_degree(e: u32, m: u32, max_degree: u32) -> Result<Self> {
        Ok(Self::from_ctx(Arc::new(FieldCtx::with_max_degree(
            e, m, max_degree,
        )?)))
    }

    pub fn from_ctx(ctx: Arc<FieldCtx>) -> Self {
        let frame = Arc::new(CoordFrame::new(ctx));
        let form = FormCtx::new(frame.clone());
        Self { frame, form }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.frame.ctx()
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn form(&self) -> &FormCtx {
        &self.form
    }

    pub fn tower(&self, chain: Vec<u32>) -> Result<TowerSpec> {
        TowerSpec::new(self.ctx().clone(), chain)
    }
}
