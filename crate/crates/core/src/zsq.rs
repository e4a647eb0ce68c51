//! Zero-skip quantization of sparse sample histograms.
//!
//! Sample values are grouped into bins of width at most `epsilon`, but a
//! bin only ever opens at an occupied histogram value, so runs of empty
//! values consume no index range. Each bin's representative sits at the
//! rounded midpoint of its occupied span, which caps the reconstruction
//! error of every occupied value at `epsilon / 2` (integer division).
//! At `epsilon = 1` the scheme degenerates to plain histogram packing
//! and is lossless.

use crate::error::Error;
use crate::Result;

/// Parity choice when deriving the step size from the error bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Step size for a maximum error `delta`: `2*delta + 1` (odd) or
/// `2*delta` (even). `delta = 0` forces the odd form; an even step of
/// zero is meaningless.
pub fn choose_step_size(delta: u32, parity: Parity) -> Result<u32> {
    match parity {
        Parity::Odd => Ok(2 * delta + 1),
        Parity::Even if delta == 0 => Err(Error::param("delta = 0 requires odd parity")),
        Parity::Even => Ok(2 * delta),
    }
}

/// Guaranteed per-sample reconstruction bound for a step size.
pub fn error_bound(epsilon: u32) -> u32 {
    epsilon / 2
}

/// Occurrence counts indexed by sample value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    /// Counts every sample; the array covers `0..=max_value`.
    pub fn build(samples: &[u32], max_value: u32) -> Histogram {
        let mut counts = vec![0u64; max_value as usize + 1];
        for &s in samples {
            counts[s as usize] += 1;
        }
        Histogram { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One quantization bin over `[start, end]` with `top` the largest
/// occupied value inside and `rep` the dequantized representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bin {
    pub start: u32,
    pub end: u32,
    pub top: u32,
    pub rep: u32,
}

/// Ordered bins plus the step size they were derived with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZsqCodebook {
    pub bins: Vec<Bin>,
    pub epsilon: u32,
}

impl ZsqCodebook {
    /// Error bound the codebook guarantees for occupied values.
    pub fn delta(&self) -> u32 {
        error_bound(self.epsilon)
    }

    /// The unpacking table: representative per index.
    pub fn reps(&self) -> Vec<u32> {
        self.bins.iter().map(|b| b.rep).collect()
    }

    /// Rebuilds the decode side of a codebook from its unpacking table.
    /// Only `rep` is meaningful on reconstructed bins.
    pub fn from_reps(reps: Vec<u32>, epsilon: u32) -> ZsqCodebook {
        let bins = reps
            .into_iter()
            .map(|rep| Bin {
                start: rep,
                end: rep,
                top: rep,
                rep,
            })
            .collect();
        ZsqCodebook { bins, epsilon }
    }
}

/// Representative for a bin whose occupied values span `[start, top]`:
/// the midpoint, rounded half up.
fn representative(start: u32, top: u32) -> u32 {
    (start + top + 1) / 2
}

/// Derives the codebook for a histogram: scan values left to right,
/// opening a bin of width `epsilon` at each occupied value past the end
/// of the previous bin.
pub fn derive_codebook(hist: &Histogram, epsilon: u32) -> Result<ZsqCodebook> {
    if epsilon == 0 {
        return Err(Error::param("epsilon must be at least 1"));
    }
    let counts = hist.counts();
    let mut bins: Vec<Bin> = Vec::new();
    let mut x = 0usize;
    while x < counts.len() {
        if counts[x] == 0 {
            x += 1;
            continue;
        }
        let start = x as u32;
        let end = start + epsilon - 1;
        // Largest occupied value within the bin span.
        let mut top = start;
        let scan_to = (end as usize).min(counts.len() - 1);
        for v in x..=scan_to {
            if counts[v] != 0 {
                top = v as u32;
            }
        }
        bins.push(Bin {
            start,
            end,
            top,
            rep: representative(start, top),
        });
        x = end as usize + 1;
    }
    if bins.is_empty() {
        return Err(Error::param("all-zero histogram"));
    }
    Ok(ZsqCodebook { bins, epsilon })
}

/// Plane of bin indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexImage {
    pub width: u32,
    pub height: u32,
    pub indices: Vec<u32>,
    pub bin_count: u32,
}

/// Converts samples to bin indices via a precomputed value lookup.
///
/// Every sample must be covered by a bin; a miss means the codebook was
/// built from a different histogram.
pub fn pack(samples: &[u32], width: u32, height: u32, cb: &ZsqCodebook) -> Result<IndexImage> {
    if samples.len() != width as usize * height as usize {
        return Err(Error::param("sample count does not match dimensions"));
    }
    let max_end = cb.bins.last().map(|b| b.end).unwrap_or(0);
    let mut lookup = vec![u32::MAX; max_end as usize + 1];
    for (q, bin) in cb.bins.iter().enumerate() {
        for v in bin.start..=bin.end {
            lookup[v as usize] = q as u32;
        }
    }
    let mut indices = Vec::with_capacity(samples.len());
    for &s in samples {
        let q = lookup
            .get(s as usize)
            .copied()
            .filter(|&q| q != u32::MAX)
            .ok_or_else(|| Error::param(format!("value {} not covered by any bin", s)))?;
        indices.push(q);
    }
    Ok(IndexImage {
        width,
        height,
        indices,
        bin_count: cb.bins.len() as u32,
    })
}

/// Converts bin indices back to representative values.
pub fn unpack(idx: &IndexImage, cb: &ZsqCodebook) -> Result<Vec<u32>> {
    if idx.bin_count as usize != cb.bins.len() {
        return Err(Error::param("index image and codebook bin counts differ"));
    }
    idx.indices
        .iter()
        .map(|&q| {
            cb.bins
                .get(q as usize)
                .map(|b| b.rep)
                .ok_or_else(|| Error::integrity(format!("index {} out of range", q)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist_of(values: &[u32]) -> Histogram {
        let max = values.iter().copied().max().unwrap_or(0);
        Histogram::build(values, max)
    }

    #[test]
    fn step_size_forms() {
        assert_eq!(choose_step_size(1, Parity::Odd).unwrap(), 3);
        assert_eq!(choose_step_size(0, Parity::Odd).unwrap(), 1);
        assert_eq!(choose_step_size(2, Parity::Even).unwrap(), 4);
        assert!(choose_step_size(0, Parity::Even).is_err());
    }

    #[test]
    fn histogram_counts() {
        let h = hist_of(&[5, 5, 7]);
        assert_eq!(h.counts()[5], 2);
        assert_eq!(h.counts()[7], 1);
        assert_eq!(h.counts()[6], 0);
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn codebook_example() {
        // Occupied {0,1,2,7,9}, epsilon 3: two bins.
        let h = hist_of(&[0, 1, 2, 7, 9]);
        let cb = derive_codebook(&h, 3).unwrap();
        assert_eq!(
            cb.bins,
            vec![
                Bin { start: 0, end: 2, top: 2, rep: 1 },
                Bin { start: 7, end: 9, top: 9, rep: 8 },
            ]
        );
    }

    #[test]
    fn codebook_single_bin_midpoint() {
        // Occupied {10,12}, epsilon 3: rep = floor(11 + 0.5) = 11.
        let h = hist_of(&[10, 12]);
        let cb = derive_codebook(&h, 3).unwrap();
        assert_eq!(
            cb.bins,
            vec![Bin { start: 10, end: 12, top: 12, rep: 11 }]
        );
    }

    #[test]
    fn unit_step_gives_one_bin_per_value() {
        let h = hist_of(&[3, 9, 14]);
        let cb = derive_codebook(&h, 1).unwrap();
        assert_eq!(cb.bins.len(), 3);
        for bin in &cb.bins {
            assert_eq!(bin.rep, bin.start);
            assert_eq!(bin.top, bin.start);
        }
    }

    #[test]
    fn all_zero_histogram_is_an_error() {
        let h = Histogram::build(&[], 100);
        assert!(derive_codebook(&h, 3).is_err());
    }

    #[test]
    fn pack_unpack_example() {
        let h = hist_of(&[0, 1, 2, 7, 9]);
        let cb = derive_codebook(&h, 3).unwrap();
        let idx = pack(&[0, 2, 9, 7], 4, 1, &cb).unwrap();
        assert_eq!(idx.indices, vec![0, 0, 1, 1]);
        assert_eq!(unpack(&idx, &cb).unwrap(), vec![1, 1, 8, 8]);
    }

    #[test]
    fn pack_rejects_uncovered_value() {
        let h = hist_of(&[0, 1, 2]);
        let cb = derive_codebook(&h, 3).unwrap();
        assert!(pack(&[5], 1, 1, &cb).is_err());
    }

    #[test]
    fn unpack_rejects_out_of_range_index() {
        let h = hist_of(&[0, 1]);
        let cb = derive_codebook(&h, 1).unwrap();
        let idx = IndexImage {
            width: 1,
            height: 1,
            indices: vec![7],
            bin_count: 2,
        };
        assert!(unpack(&idx, &cb).is_err());
    }

    /// Independent oracle: walk the sorted occupied values directly.
    fn oracle_codebook(occupied: &[u32], epsilon: u32) -> Vec<Bin> {
        let mut bins = Vec::new();
        let mut i = 0usize;
        while i < occupied.len() {
            let start = occupied[i];
            let end = start + epsilon - 1;
            let mut top = start;
            let mut j = i;
            while j < occupied.len() && occupied[j] <= end {
                top = occupied[j];
                j += 1;
            }
            bins.push(Bin {
                start,
                end,
                top,
                rep: (start + top + 1) / 2,
            });
            i = j;
        }
        bins
    }

    proptest! {
        #[test]
        fn matches_oracle_on_random_sparse_histograms(
            values in proptest::collection::vec(0u32..4096, 1..200),
            epsilon in 1u32..=31,
        ) {
            let mut occupied: Vec<u32> = values.clone();
            occupied.sort_unstable();
            occupied.dedup();
            let h = hist_of(&values);
            let cb = derive_codebook(&h, epsilon).unwrap();
            prop_assert_eq!(cb.bins, oracle_codebook(&occupied, epsilon));
        }

        #[test]
        fn error_bound_holds_for_occupied_values(
            values in proptest::collection::vec(0u32..4096, 1..200),
            epsilon in 1u32..=31,
        ) {
            let h = hist_of(&values);
            let cb = derive_codebook(&h, epsilon).unwrap();
            let (w, n) = (values.len() as u32, values.len());
            let idx = pack(&values, w, 1, &cb).unwrap();
            let back = unpack(&idx, &cb).unwrap();
            let bound = error_bound(epsilon) as i64;
            for i in 0..n {
                let err = (back[i] as i64 - values[i] as i64).abs();
                prop_assert!(err <= bound, "err {} > bound {}", err, bound);
            }
        }

        #[test]
        fn reps_strictly_increase(
            values in proptest::collection::vec(0u32..4096, 1..200),
            epsilon in 1u32..=31,
        ) {
            let h = hist_of(&values);
            let cb = derive_codebook(&h, epsilon).unwrap();
            for pair in cb.bins.windows(2) {
                prop_assert!(pair[1].rep > pair[0].rep);
            }
        }

        #[test]
        fn packed_index_histogram_has_no_empty_bins(
            values in proptest::collection::vec(0u32..1024, 1..300),
            epsilon in 1u32..=9,
        ) {
            let h = hist_of(&values);
            let cb = derive_codebook(&h, epsilon).unwrap();
            let idx = pack(&values, values.len() as u32, 1, &cb).unwrap();
            let mut seen = vec![false; idx.bin_count as usize];
            for &q in &idx.indices {
                seen[q as usize] = true;
            }
            prop_assert!(seen.iter().all(|&s| s));
        }

        #[test]
        fn unit_step_roundtrip_is_identity(
            values in proptest::collection::vec(0u32..4096, 1..200),
        ) {
            let h = hist_of(&values);
            let cb = derive_codebook(&h, 1).unwrap();
            let idx = pack(&values, values.len() as u32, 1, &cb).unwrap();
            prop_assert_eq!(unpack(&idx, &cb).unwrap(), values);
        }

        #[test]
        fn histogram_total_matches_sample_count(
            values in proptest::collection::vec(0u32..512, 1..400),
        ) {
            let h = hist_of(&values);
            prop_assert_eq!(h.total(), values.len() as u64);
        }
    }

    #[test]
    fn bound_is_exhaustive_over_small_epsilons() {
        // Exhaustive over all epsilon in [1, 31] with deterministic sparse
        // histograms on a 12-bit domain.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for epsilon in 1u32..=31 {
            let values: Vec<u32> = (0..256).map(|_| (next() % 4096) as u32).collect();
            let h = hist_of(&values);
            let cb = derive_codebook(&h, epsilon).unwrap();
            let idx = pack(&values, 256, 1, &cb).unwrap();
            let back = unpack(&idx, &cb).unwrap();
            for (b, v) in back.iter().zip(&values) {
                assert!((*b as i64 - *v as i64).abs() <= error_bound(epsilon) as i64);
            }
        }
    }
}
