//! Place/transition nets, the token game, and composition of fragment gadgets.

mod net;
mod simulate;
pub mod translate;

pub use net::{Arc, Marking, NetError, PetriNet, Place, PlaceId, Transition, TransitionId};
pub use simulate::{Enumeration, FiringSequence, CAPACITY_WARNING, DEFAULT_MAX_STATES};
pub use translate::{
    closing_fragment, standalone_net, translate_fragment_pn, translate_spec_pn, NetFragment,
    PlaceRole,
};

/// Label of the transition that starts `activity`.
pub fn start_label(activity: &str) -> String {
    format!("{activity}_start")
}

/// Label of the transition that ends `activity`.
pub fn end_label(activity: &str) -> String {
    format!("{activity}_end")
}
