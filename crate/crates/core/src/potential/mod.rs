//! Freezing sequences (a_j), the potential φ(x) = −a_{j(x)} read through a
//! finite window, its interaction family, and the summability classifier.

pub mod interaction;
pub mod nogo;
pub mod sequence;
pub mod truncated;

pub use interaction::{generate_interaction, InteractionFamily};
pub use nogo::{nogo_classify, NoGoReport, NoGoVerdict};
pub use sequence::{
    build_cor53_sequence, build_thm34_sequence, build_thm51_sequence, build_thm52_sequence, custom_sequence,
    dyadic_range, hofbauer_sequence, hurwitz_zeta, inverse_power_sequence, thm34_from_kappa, AsymptoticClass,
    FreezingSequence, Recipe, Tail,
};
pub use truncated::{
    distance_exponent, eval_truncated, replacement_gain, window_region, DistanceExponent, TruncatedPotential,
};
