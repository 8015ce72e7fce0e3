use crate::error::NumError;

pub type Mode = Vec<i64>;

/// The truncation box `|k|_∞ ≤ cutoff` in `dim` directions, enumerated
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeBox {
    dim: usize,
    cutoff: i64,
    side: usize,
}

impl ModeBox {
    pub fn new(dim: usize, cutoff: i64) -> Result<Self, NumError> {
        if dim != 2 && dim != 3 {
            return Err(NumError::UnsupportedDimension(dim));
        }
        if cutoff < 0 {
            return Err(NumError::InvalidArgument(format!("cutoff {} is negative", cutoff)));
        }
        Ok(ModeBox { dim, cutoff, side: (2 * cutoff + 1) as usize })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, k: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for &c in k {
            if c.abs() > self.cutoff {
                return None;
            }
            idx = idx * self.side + (c + self.cutoff) as usize;
        }
        Some(idx)
    }

    pub fn mode(&self, mut idx: usize) -> Mode {
        let mut k = vec![0i64; self.dim];
        for c in k.iter_mut().rev() {
            *c = (idx % self.side) as i64 - self.cutoff;
            idx /= self.side;
        }
        k
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    /// Whether `k` stays at least `margin` away from the boundary.
    pub fn is_interior(&self, k: &[i64], margin: i64) -> bool {
        k.iter().all(|c| c.abs() <= self.cutoff - margin)
    }
}

pub fn sup_norm(k: &[i64]) -> i64 {
    k.iter().map(|c| c.abs()).max().unwrap_or(0)
}

pub fn euclidean_norm(k: &[f64]) -> f64 {
    k.iter().map(|c| c * c).sum::<f64>().sqrt()
}
