//! Invariants distinguishing G2-manifolds built by (extra-)twisted connected sums.
//!
//! The crate is organised around the pipeline that assembles the integer
//! refinement `nu_bar` of the nu-invariant from declarative building-block
//! data:
//!
//! * [`lattice`] — exact arithmetic on integral symmetric bilinear forms
//!   (signatures, parity, unimodularity, the K3 lattice),
//! * [`config`] — configurations of polarising lattices inside the K3
//!   lattice: projection compositions, gluing angles, configuration angles
//!   and the count `m_rho`,
//! * [`gluing`] — torus gluing matrices, their constraints, derived circle
//!   ratios and the finite enumeration of admissible gluings,
//! * [`eta`] — the logarithm of the Dedekind eta function and the torus
//!   contributions `F_{k,eps}(s)`,
//! * [`dedekind`] — generalised Dedekind sums over isolated fixed points,
//! * [`hyperbolic`] — ideal polygons in the upper half plane giving the
//!   independent cross-check for `F_+ + F_-`,
//! * [`defect`] — coboundary-defect arithmetic (lambda, mu, nu, xi) and
//!   classification counts for 2-connected 7-manifolds,
//! * [`assemble`] — the data model, fixture loading and the `nu_bar`
//!   assembly itself.
//!
//! All lattice-facing computations are exact over the integers or rationals;
//! transcendental quantities carry explicit error bounds.

pub mod angles;
pub mod assemble;
pub mod config;
pub mod dedekind;
pub mod defect;
pub mod eta;
pub mod figure;
pub mod gluing;
pub mod hyperbolic;
pub mod lattice;
pub mod linalg;
pub mod rational;

pub use angles::{AngleSpectrum, ExactAngle};
pub use assemble::{
    assemble_nu_bar, cross_check, load_block, load_configuration, load_gluing, load_instance,
    load_polygon, render_report, BlockRecord, EtcsInstance, NuBarReport, ReportFormat,
};
pub use config::{Configuration, Side};
pub use gluing::{enumerate_gluings, GluingData};
pub use lattice::{standard_lattice, GramMatrix, LatticeSignature, StandardLattice};
