use crate::model::{DetuningProfile, SystemParams};

/// Physical setup a series was generated from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMeta {
    pub params: SystemParams,
    pub profile: DetuningProfile,
}

/// Uniformly sampled trajectory. Sample `k` sits at `t0 + k·dt`; each
/// sample is a state vector of `dim` components stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t0: f64,
    pub dt: f64,
    dim: usize,
    data: Vec<f64>,
    pub meta: Option<SeriesMeta>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, dim: usize) -> Self {
        assert!(dim > 0, "state dimension must be positive");
        Self {
            t0,
            dt,
            dim,
            data: Vec::new(),
            meta: None,
        }
    }

    /// Builds a one-component series from scalar samples.
    pub fn from_scalars(t0: f64, dt: f64, values: &[f64]) -> Self {
        let mut s = Self::new(t0, dt, 1);
        s.data.extend_from_slice(values);
        s
    }

    pub fn with_meta(mut self, meta: SeriesMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn push(&mut self, state: &[f64]) {
        assert_eq!(state.len(), self.dim, "state dimension mismatch");
        self.data.extend_from_slice(state);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states().map(|s| s[i]).collect()
    }

    /// `⟨S_z⟩`, always the first component.
    pub fn sz(&self) -> Vec<f64> {
        self.component(0)
    }

    /// Keeps only the first `len` samples.
    pub fn truncated(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.data.truncate(len.min(self.len()) * self.dim);
        s
    }

    /// Keeps only the listed components, in order.
    pub fn project(&self, components: &[usize]) -> Self {
        let mut s = Self::new(self.t0, self.dt, components.len());
        s.meta = self.meta;
        for st in self.states() {
            s.data.extend(components.iter().map(|&i| st[i]));
        }
        s
    }
}
