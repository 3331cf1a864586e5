//! Everything downstream of a root system, built once.

use crate::error::Result;
use crate::quiver::{build_quiver, relators, Quiver, Relators};
use crate::rootsystem::{CartanType, WeylGroup};
use crate::schubert::CohRing;
use crate::soergel::{build_all, BuildMode, ModuleFamily};

pub struct Pipeline {
    pub ring: CohRing,
    pub family: ModuleFamily,
    pub quiver: Quiver,
    pub relators: Relators,
}

impl Pipeline {
    pub fn build(ct: CartanType, mode: BuildMode) -> Result<Self> {
        let ring = CohRing::build(WeylGroup::of_type(ct)?)?;
        let family = build_all(&ring, mode)?;
        Ok(Self::from_parts(ring, family))
    }

    pub fn from_parts(ring: CohRing, family: ModuleFamily) -> Self {
        let quiver = build_quiver(&ring, &family);
        let relators = relators(&quiver);
        Pipeline {
            ring,
            family,
            quiver,
            relators,
        }
    }

    pub fn group(&self) -> &WeylGroup {
        self.ring.group()
    }
}
