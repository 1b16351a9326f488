//! Exact short-Weierstrass arithmetic over the rationals and Néron-Tate
//! heights computed by the Tate limit `h([2^k]P) / 4^k`.

mod canonical;
mod curve;

pub use canonical::{
    canonical_height, canonical_height_with, estimate_c_nt, is_torsion, is_torsion_with, naive_height, nt_pairing,
    torsion_order, HeightConfig, HeightValue, TorsionConfig,
};
pub use curve::{ECPoint, EllipticCurveQ};
