//! The two obstruction families: exceptional graphs (no cycle of length
//! divisible by 3) and the special graphs `T₁ … T₅` (no cycle of length
//! divisible by 4), for graphs with `δ ≥ 2` and at most three 2-vertices.

mod exceptional;
mod ops;
mod special;

pub use exceptional::{
    check_lemma_residues, generate_exceptional, recognize_exceptional, Exceptional, LemmaReport,
    PairRelation, Recognition, Recognized, Refutation,
};
pub use ops::{apply_c, apply_f, apply_p, k23, BuildTrace, Step, K23_ROOT};
pub use special::{
    check_observation_special, derive_special_catalog, CatalogRecord, ObservationReport,
    ObservationViolation, SpecialCatalog, SpecialEntry, SPECIAL_MAX_ORDER,
};
