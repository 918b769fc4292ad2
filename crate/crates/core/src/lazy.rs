//! Lazy maintenance of a streamed vector on a dyadic checkpoint schedule.
//!
//! At step `k`, every level `ℓ` with `2^ℓ | k` compares the new vector
//! against the copy taken `2^ℓ` steps earlier and rewrites coordinates that
//! moved by at least `δ / (2L)`, with `L = ⌈log₂ n⌉`. Level `L` rewrites
//! everything.

/// `⌈log₂ n⌉`, with `n ≤ 1` mapping to 0.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug)]
pub struct ShadowVector {
    vbar: Vec<f64>,
    delta: f64,
    k: usize,
    levels: usize,
    /// `checkpoints[ℓ]` is the stream value at the latest multiple of `2^ℓ`.
    checkpoints: Vec<Vec<f64>>,
    update_log: Vec<usize>,
    selected: Vec<bool>,
}

impl ShadowVector {
    /// Start from the baseline `v⁽⁰⁾`, with `v̄ = v⁽⁰⁾`.
    pub fn new(v0: &[f64], delta: f64) -> Self {
        assert!(delta > 0.0, "shadow tolerance must be positive");
        let levels = ceil_log2(v0.len());
        Self {
            vbar: v0.to_vec(),
            delta,
            k: 0,
            levels,
            checkpoints: vec![v0.to_vec(); levels],
            update_log: Vec::new(),
            selected: vec![false; v0.len()],
        }
    }

    pub fn vbar(&self) -> &[f64] {
        &self.vbar
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of advances so far.
    pub fn step(&self) -> usize {
        self.k
    }

    /// `⌈log₂ n⌉`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Movement that triggers a rewrite at a partial level.
    pub fn threshold(&self) -> f64 {
        self.delta / (2.0 * self.levels.max(1) as f64)
    }

    /// Coordinates rewritten at each step.
    pub fn update_log(&self) -> &[usize] {
        &self.update_log
    }

    pub fn total_updates(&self) -> usize {
        self.update_log.iter().sum()
    }

    /// Feed `v⁽ᵏ⁾` and return the rewritten coordinates in ascending order.
    pub fn advance(&mut self, v: &[f64]) -> Vec<usize> {
        let n = self.vbar.len();
        assert_eq!(v.len(), n, "stream length changed");
        self.k += 1;
        let k = self.k;
        let active = |l: usize| k.is_multiple_of(1usize << l);

        let mut selected = std::mem::take(&mut self.selected);
        selected.fill(false);
        if active(self.levels) {
            selected.fill(true);
        } else {
            let threshold = self.threshold();
            for l in (0..self.levels).filter(|&l| active(l)) {
                for (flag, (new, old)) in selected.iter_mut().zip(v.iter().zip(&self.checkpoints[l])) {
                    *flag |= (new - old).abs() >= threshold;
                }
            }
        }
        for l in (0..self.levels).filter(|&l| active(l)) {
            self.checkpoints[l].copy_from_slice(v);
        }
        let updated: Vec<usize> = (0..n).filter(|&i| selected[i]).collect();
        for &i in &updated {
            self.vbar[i] = v[i];
        }
        self.update_log.push(updated.len());
        self.selected = selected;
        updated
    }
}
