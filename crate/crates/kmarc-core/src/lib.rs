//! KM-arcs in the Desarguesian plane PG(2,q), q = 2^h.
//!
//! A KM-arc of type t is a set of q + t points meeting every line in 0, 2
//! or t points. This crate provides the GF(2^h) substrate, F2-linear algebra
//! on the additive group of the field, the plane incidence geometry, a full
//! line-census verifier, every construction of the q/4, q/8 and q/16 families
//! together with the Korchmaros-Mazzocca and Gacs-Weiner lifts, and the
//! collineation machinery (elation/translation classification, stabilizers,
//! PGammaL-equivalence by exhaustive frame search).

pub mod arcs;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod f2linalg;
pub mod gf2e;
pub mod plane;
pub mod symmetry;

pub use error::{Error, Result};
pub use gf2e::{FieldCtx, FieldElement};
