use super::config::Weights;
use crate::error::{Error, Result};
use crate::map::{AttentionMap, MapKind};

/// `w_mem*M_mem + w_sac*M_sac + w_sim*M_sim + w_sal*M_sal` over normalized
/// maps. The result is not renormalized; it may be negative.
pub fn combine_maps(
    m_sim: &AttentionMap,
    m_sal: &AttentionMap,
    m_mem: &AttentionMap,
    m_sac: &AttentionMap,
    weights: &Weights,
) -> Result<AttentionMap> {
    let dims = m_sim.dims();
    for (m, name) in [(m_sal, "saliency"), (m_mem, "memory"), (m_sac, "saccade")] {
        if m.dims() != dims {
            return Err(Error::dimension(format!(
                "{name} map is {:?}, similarity map is {dims:?}",
                m.dims()
            )));
        }
    }
    for (m, name) in [
        (m_sim, "similarity"),
        (m_sal, "saliency"),
        (m_mem, "memory"),
        (m_sac, "saccade"),
    ] {
        if !m.is_normalized() {
            return Err(Error::domain(format!(
                "{name} map must be normalized before integration"
            )));
        }
    }
    let values = m_sim
        .values()
        .iter()
        .zip(m_sal.values())
        .zip(m_mem.values())
        .zip(m_sac.values())
        .map(|(((sim, sal), mem), sac)| {
            weights.mem * mem + weights.sac * sac + weights.sim * sim + weights.sal * sal
        })
        .collect();
    AttentionMap::new(dims.0, dims.1, values, MapKind::Combined)
}
