//! Presentation-level constructions: the J-construction, universal central
//! extensions, the Rips construction, fibre products and tubular bundles.

mod fibre;
mod jcons;
mod rips;
mod small_cancellation;
mod tubular;
mod uce;

pub use fibre::{
    fibre_generators, fibre_product_finite_quotient, fibre_product_generators,
    fibre_product_presentation_finite_quotient, FibreProductGenerators, FiniteFibreProduct, FIBRE_TIETZE_BUDGET,
};
pub use jcons::j_construction;
pub use rips::{rips_construction, RipsOutput};
pub use small_cancellation::small_cancellation_ratio;
pub use tubular::{enumerate_tubular_bundles, tubular_bundle_presentation, TubularBundleData, TubularBundleEnumeration};
pub use uce::{commutator_defect_words, uce_presentation};
