/// Table of `p(n, k)`, the number of partitions of `k` into at most `n` parts.
///
/// Entries that overflow `u128` saturate and are reported as `None`.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    n_max: usize,
    k_max: usize,
    table: Vec<u128>,
}

impl PartitionTable {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        let w = k_max + 1;
        let mut table = vec![0u128; (n_max + 1) * w];
        table[0] = 1;
        for n in 1..=n_max {
            for k in 0..=k_max {
                let fewer = table[(n - 1) * w + k];
                let with_n = if k >= n { table[n * w + k - n] } else { 0 };
                table[n * w + k] = fewer.saturating_add(with_n);
            }
        }
        Self { n_max, k_max, table }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `p(n, k)`, or `None` when out of range or saturated.
    pub fn count(&self, n: usize, k: usize) -> Option<u128> {
        if n > self.n_max || k > self.k_max {
            return None;
        }
        let v = self.table[n * (self.k_max + 1) + k];
        (v != u128::MAX).then_some(v)
    }
}

/// Number of partitions of `k` into at most `n` parts.
///
/// # Panics
/// If the count does not fit in a `u128`.
pub fn partition_count(n: usize, k: usize) -> u128 {
    PartitionTable::new(n.min(k), k)
        .count(n.min(k), k)
        .expect("partition count overflows u128")
}

/// `p(n, k)` for `k = 0..=k_max` as floating point, without overflow.
pub(crate) fn partition_row_f64(n: usize, k_max: usize) -> Vec<f64> {
    let mut row = vec![0.0; k_max + 1];
    row[0] = 1.0;
    // adding parts of size 1..=n in turn counts partitions with parts ≤ n,
    // which equals partitions into at most n parts by conjugation
    for part in 1..=n {
        for k in part..=k_max {
            row[k] += row[k - part];
        }
    }
    row
}
