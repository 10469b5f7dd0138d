use crate::error::{Error, Result};
use crate::sampling::SampleBatch;

/// Equally populated bins of a sample along one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BinPartition {
    variable: usize,
    n_bins: usize,
    bin_size: usize,
    /// Row indices, bin after bin, ascending in the binned coordinate.
    order: Vec<usize>,
    /// Largest coordinate of each bin.
    upper_edges: Vec<f64>,
}

impl BinPartition {
    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    /// Members per bin, `N_z = floor(N / N_y)`.
    pub fn bin_size(&self) -> usize {
        self.bin_size
    }

    pub fn bin(&self, j: usize) -> &[usize] {
        &self.order[j * self.bin_size..(j + 1) * self.bin_size]
    }

    pub fn bins(&self) -> impl Iterator<Item = &[usize]> {
        self.order.chunks(self.bin_size)
    }

    /// Rows left out because `N` is not a multiple of `N_y`.
    pub fn dropped(&self, total: usize) -> usize {
        total - self.order.len()
    }

    /// Bin whose coordinate range covers `x`; values beyond the last edge
    /// go to the last bin.
    pub fn locate(&self, x: f64) -> usize {
        self.upper_edges
            .partition_point(|&e| e < x)
            .min(self.n_bins - 1)
    }
}

/// Stable sort by coordinate `i`, split into `n_bins` bins of `N / n_bins`
/// points. The `N mod n_bins` largest points are left out.
pub fn partition_bins(batch: &SampleBatch, i: usize, n_bins: usize) -> Result<BinPartition> {
    if i >= batch.dimension() {
        return Err(Error::Contract(format!(
            "variable {i} out of range for dimension {}",
            batch.dimension()
        )));
    }
    if n_bins == 0 || n_bins > batch.len() {
        return Err(Error::Contract(format!(
            "cannot split {} points into {n_bins} bins",
            batch.len()
        )));
    }
    let mut order: Vec<usize> = (0..batch.len()).collect();
    order.sort_by(|&a, &b| batch.coord(a, i).total_cmp(&batch.coord(b, i)));
    let bin_size = batch.len() / n_bins;
    order.truncate(bin_size * n_bins);
    let upper_edges = order
        .chunks(bin_size)
        .map(|c| batch.coord(*c.last().unwrap(), i))
        .collect();
    Ok(BinPartition {
        variable: i,
        n_bins,
        bin_size,
        order,
        upper_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ConstrainedModel;
    use proptest::prelude::*;

    fn batch_1d(coords: &[f64]) -> SampleBatch {
        let m = ConstrainedModel::new("id", 1, |x| x[0]).unwrap();
        SampleBatch::evaluate(&m, coords.to_vec(), None).unwrap()
    }

    #[test]
    fn sort_and_split() {
        let b = batch_1d(&[0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6]);
        let p = partition_bins(&b, 0, 3).unwrap();
        let vals: Vec<Vec<f64>> = p
            .bins()
            .map(|bin| bin.iter().map(|&l| b.coord(l, 0)).collect())
            .collect();
        assert_eq!(vals, vec![vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.6], vec![0.7, 0.8, 0.9]]);
        assert_eq!(p.locate(0.05), 0);
        assert_eq!(p.locate(0.3), 0);
        assert_eq!(p.locate(0.35), 1);
        assert_eq!(p.locate(0.95), 2);
    }

    #[test]
    fn ties_keep_input_order() {
        let b = batch_1d(&[0.5; 6]);
        let p = partition_bins(&b, 0, 2).unwrap();
        assert_eq!(p.bin(0), &[0, 1, 2]);
        assert_eq!(p.bin(1), &[3, 4, 5]);
    }

    #[test]
    fn remainder_is_dropped() {
        let coords: Vec<f64> = (0..10).map(|v| v as f64 / 10.0).collect();
        let b = batch_1d(&coords);
        let p = partition_bins(&b, 0, 3).unwrap();
        assert_eq!(p.bin_size(), 3);
        assert_eq!(p.dropped(10), 1);
        assert!(p.bins().flatten().all(|&l| l != 9));
    }

    #[test]
    fn too_many_bins() {
        let b = batch_1d(&[0.1, 0.2]);
        assert!(matches!(partition_bins(&b, 0, 3), Err(Error::Contract(_))));
        assert!(partition_bins(&b, 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn bins_partition_the_retained_rows(coords in prop::collection::vec(0.0f64..1.0, 4..200), ny in 1usize..4) {
            let b = batch_1d(&coords);
            let p = partition_bins(&b, 0, ny).unwrap();
            let mut seen = vec![false; coords.len()];
            for bin in p.bins() {
                prop_assert_eq!(bin.len(), coords.len() / ny);
                for &l in bin {
                    prop_assert!(!seen[l]);
                    seen[l] = true;
                }
            }
            prop_assert_eq!(seen.iter().filter(|&&s| s).count(), ny * (coords.len() / ny));
            for j in 1..ny {
                let prev = p.bin(j - 1).iter().map(|&l| coords[l]).fold(f64::MIN, f64::max);
                let cur = p.bin(j).iter().map(|&l| coords[l]).fold(f64::MAX, f64::min);
                prop_assert!(prev <= cur);
            }
        }
    }
}
