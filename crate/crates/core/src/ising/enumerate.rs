use super::{log_sum_exp, InverseTemperature, IsingError, LogPartition, SiteGraph};
use crate::lattice::VertexSet;

/// Largest domain accepted by [`log_z_enum`].
pub const ENUM_LIMIT: usize = 25;

/// Exact `log Z` by summing over all `2^n` configurations.
///
/// The sweep visits configurations in Gray-code order and only records a
/// histogram of the integer energy, so the exponentials are taken once per
/// energy level at the end.
pub fn log_z_enum(sites: &VertexSet, beta: InverseTemperature) -> Result<LogPartition, IsingError> {
    let n = sites.len();
    if n > ENUM_LIMIT {
        return Err(IsingError::DomainTooLarge {
            sites: n,
            limit: ENUM_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let g = SiteGraph::new(sites);
    let e_max = g.edge_count() as i64;
    let mut hist = vec![0u64; (2 * e_max + 1) as usize];

    let mut spins = vec![1i8; n];
    // local field h_i = Σ_j σ_j + d_i
    let mut field: Vec<i64> = (0..n)
        .map(|i| g.neighbors[i].len() as i64 + g.exterior[i] as i64)
        .collect();
    let mut energy = e_max;
    hist[(energy + e_max) as usize] += 1;
    for k in 1u64..(1u64 << n) {
        let i = k.trailing_zeros() as usize;
        let s = spins[i] as i64;
        energy -= 2 * s * field[i];
        spins[i] = -spins[i];
        for &j in &g.neighbors[i] {
            field[j] -= 2 * s;
        }
        hist[(energy + e_max) as usize] += 1;
    }
    let b = beta.value();
    Ok(log_sum_exp(hist.iter().enumerate().filter(|(_, &c)| c > 0).map(
        |(idx, &c)| b * (idx as i64 - e_max) as f64 + (c as f64).ln(),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::BETA_C;
    use crate::lattice::Site;

    fn beta(b: f64) -> InverseTemperature {
        InverseTemperature::new(b).unwrap()
    }

    #[test]
    fn single_site() {
        let b = 0.37;
        let z = log_z_enum(&VertexSet::new([Site::new(0, 0)]), beta(b)).unwrap();
        assert!((z - ((4.0 * b).exp() + (-4.0 * b).exp()).ln()).abs() < 1e-14);
    }

    fn two_site_hand_sum(b: f64) -> f64 {
        let mut z = 0.0;
        for s1 in [-1.0, 1.0] {
            for s2 in [-1.0, 1.0] {
                let e: f64 = s1 * s2 + 3.0 * s1 + 3.0 * s2;
                z += (b * e).exp();
            }
        }
        z.ln()
    }

    #[test]
    fn two_sites() {
        let pair = VertexSet::new([Site::new(0, 0), Site::new(1, 0)]);
        for b in [0.1, BETA_C, 1.3] {
            let z = log_z_enum(&pair, beta(b)).unwrap();
            assert!((z - two_site_hand_sum(b)).abs() < 1e-13);
        }
    }

    #[test]
    fn two_sites_at_critical_point_is_pinned() {
        // frozen from the four-term sum above
        let pinned = 3.146_772_582_983_396;
        let pair = VertexSet::new([Site::new(0, 0), Site::new(0, 1)]);
        let z = log_z_enum(&pair, InverseTemperature::CRITICAL).unwrap();
        assert!((z - two_site_hand_sum(BETA_C)).abs() < 1e-13);
        assert!((z - pinned).abs() < 1e-12, "{z:.15}");
    }

    #[test]
    fn brute_force_agrees_on_an_l_shape() {
        let set = VertexSet::new([Site::new(0, 0), Site::new(1, 0), Site::new(1, 1), Site::new(1, 2)]);
        let g = SiteGraph::new(&set);
        let b = 0.6;
        let mut z = 0.0;
        for mask in 0u32..16 {
            let spins: Vec<i8> = (0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            z += (b * g.energy(&spins) as f64).exp();
        }
        assert!((log_z_enum(&set, beta(b)).unwrap() - z.ln()).abs() < 1e-13);
    }

    #[test]
    fn too_large() {
        let set = VertexSet::rectangle(0, 0, 5, 4);
        assert_eq!(
            log_z_enum(&set, InverseTemperature::CRITICAL),
            Err(IsingError::DomainTooLarge { sites: 30, limit: 25 })
        );
    }
}
