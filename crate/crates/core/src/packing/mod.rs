//! Rotation-extension Hamilton search, `A_k` packing, blossom matching,
//! booster enumeration, tau-permutations and the constant-block lemma.

mod boosters;
mod hamilton;
mod matching;
mod pack;
mod path;
mod submatrix;
mod tau;

pub use boosters::{
    booster_candidates, enumerate_augmenting_boosters, enumerate_boosters, enumerate_path_boosters,
    smallest_booster_family, BoosterFamily, BoosterKind, AUGMENTING_CAP, PATH_CAP,
};
pub use hamilton::{
    hamilton_cycle_backtrack, hamiltonicity_obstruction, is_hamilton_cycle, posa_hamilton_search,
    posa_hamilton_search_with, HamiltonOutcome, HamiltonResult, Obstruction, SearchParams, SearchStats,
    DEFAULT_RESTARTS, EXACT_HAMILTON_CAP,
};
pub use matching::{isolatable_pairs, maximum_matching, MatchingState};
pub use pack::{pack_a_k, PackFailure, PackParams};
pub use path::{enumerate_rotation_walks, rotate, rotation_closure, OrientedPath, RotationClosure, RotationWalk};
pub use submatrix::{constant_submatrix, ConstantBlock};
pub use tau::{rotation_successor, tau_of, tau_of_sequence, TauPermutation};
