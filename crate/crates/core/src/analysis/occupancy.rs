use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 51;

/// Sample counts over an `n × n` grid spanning `[−s, s]²` in
/// `(⟨S_y⟩, ⟨S_z⟩)`; `counts[iy * n + iz]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Occupancy {
    pub n_bins: usize,
    pub extent: f64,
    pub counts: Vec<u64>,
    /// Samples falling outside the grid.
    pub outside: u64,
}

impl Occupancy {
    pub fn new(n_bins: usize, extent: f64) -> Self {
        Self {
            n_bins,
            extent,
            counts: vec![0; n_bins * n_bins],
            outside: 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.outside
    }

    fn index(&self, v: f64) -> Option<usize> {
        let n = self.n_bins;
        let u = (v + self.extent) / (2.0 * self.extent);
        if !(0.0..=1.0).contains(&u) {
            return None;
        }
        Some(((u * n as f64) as usize).min(n - 1))
    }

    pub fn add(&mut self, sy: f64, sz: f64) {
        match (self.index(sy), self.index(sz)) {
            (Some(i), Some(j)) => self.counts[i * self.n_bins + j] += 1,
            _ => self.outside += 1,
        }
    }

    pub fn merge(&mut self, other: &Occupancy) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        -self.extent + (i as f64 + 0.5) * 2.0 * self.extent / self.n_bins as f64
    }

    /// Fraction of all samples in bins whose center satisfies `pred(sy, sz)`.
    pub fn fraction_where(&self, pred: impl Fn(f64, f64) -> bool) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let mut hit = 0u64;
        for i in 0..self.n_bins {
            for j in 0..self.n_bins {
                if pred(self.bin_center(i), self.bin_center(j)) {
                    hit += self.counts[i * self.n_bins + j];
                }
            }
        }
        hit as f64 / total as f64
    }
}

pub fn occupancy_2d(sy: &[f64], sz: &[f64], n_bins: usize, extent: f64) -> Occupancy {
    let mut occ = Occupancy::new(n_bins.max(1), extent);
    for (&y, &z) in sy.iter().zip(sz) {
        occ.add(y, z);
    }
    occ
}
