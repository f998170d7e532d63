//! The link-formation game, network samplers, pairwise stability and the
//! exact stationary law for small populations.

mod exact;
mod meeting;
mod sampler;
mod stability;

pub use exact::{exact_distribution, graph_from_mask, mask_of, ExactDistribution, MAX_ENUMERATION_NODES};
pub use meeting::MeetingProcess;
pub use sampler::{
    default_steps, game_step, mh_step, simulate, simulate_with, ChainTrace, Kernel, SimState, TraceRow, DEFAULT_SWAP_PROB,
};
pub use stability::{find_stable, is_pairwise_stable};
