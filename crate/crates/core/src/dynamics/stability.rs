use super::exact::{check_enumerable, graph_from_mask};
use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::{dyads, Network};
use crate::params::ParamVector;
use crate::scalar::Scalar;
use crate::stats::dyad_change;

/// Pairwise stability with transfers: no single link flip raises the potential.
/// Flips that leave the potential unchanged do not destabilize.
pub fn is_pairwise_stable<T: Scalar>(g: &Network, x: &FirmTable<T>, theta: &ParamVector<T>) -> Result<bool> {
    if g.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g.n(), firms: x.len() });
    }
    Ok(dyads(g.n()).all(|(i, j)| {
        let surplus = dyad_change(g, x, i, j).delta_potential(theta);
        if g.has_edge(i, j) {
            surplus >= T::zero()
        } else {
            surplus <= T::zero()
        }
    }))
}

/// Every pairwise-stable network for a population of at most six firms, in mask order.
pub fn find_stable<T: Scalar>(x: &FirmTable<T>, theta: &ParamVector<T>) -> Result<Vec<Network>> {
    let n = x.len();
    check_enumerable(n)?;
    let mut out = Vec::new();
    for m in 0..1u32 << (n * (n - 1) / 2) {
        let g = graph_from_mask(n, m);
        if is_pairwise_stable(&g, x, theta)? {
            out.push(g);
        }
    }
    Ok(out)
}
