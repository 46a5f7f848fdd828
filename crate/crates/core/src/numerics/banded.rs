//! Banded linear systems: LU with partial pivoting.

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl`
/// super-diagonals hold pivoting fill.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.kl + self.ku {
            return None;
        }
        Some(i * self.width + (j + self.kl - i))
    }

    /// Adds `v` at `(i, j)`. Panics outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "({i},{j}) outside band"
        );
        let s = self.slot(i, j).expect("band slot");
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = b` in place, consuming the matrix.
    pub fn solve(mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut piv = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best <= scale * 1e-300 || best == 0.0 {
                return Err(Error::SingularMatrix { row: k });
            }
            let jmax = (k + kl + ku).min(n - 1);
            if piv != k {
                for j in k..=jmax {
                    let a = self.slot(k, j).expect("pivot row slot");
                    let c = self.slot(piv, j).expect("pivot swap slot");
                    self.data.swap(a, c);
                }
                b.swap(k, piv);
            }
            let d = self.get(k, k);
            for i in k + 1..=last {
                let si = self.slot(i, k).expect("elimination slot");
                let factor = self.data[si] / d;
                if factor == 0.0 {
                    continue;
                }
                self.data[si] = 0.0;
                for j in k + 1..=jmax {
                    let v = self.get(k, j);
                    if v != 0.0 {
                        let s = self.slot(i, j).expect("update slot");
                        self.data[s] -= factor * v;
                    }
                }
                b[i] -= factor * b[k];
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + kl + ku).min(n - 1);
            let mut acc = b[k];
            for j in k + 1..=jmax {
                acc -= self.get(k, j) * b[j];
            }
            b[k] = acc / self.get(k, k);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pentadiag(n: usize, seed: &[f64]) -> BandMatrix {
        let mut a = BandMatrix::zeros(n, 2, 2);
        for i in 0..n {
            for d in 0..5usize {
                let j = i as isize + d as isize - 2;
                if j >= 0 && (j as usize) < n {
                    a.add(i, j as usize, seed[(i * 5 + d) % seed.len()]);
                }
            }
        }
        a
    }

    #[test]
    fn solves_requiring_pivoting() {
        // Zero on the diagonal forces a row swap.
        let mut a = BandMatrix::zeros(3, 1, 1);
        a.add(0, 0, 0.0);
        a.add(0, 1, 2.0);
        a.add(1, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(1, 2, 1.0);
        a.add(2, 1, 3.0);
        a.add(2, 2, 1.0);
        let x = [1.0, -2.0, 0.5];
        let mut b = a.mul_vec(&x);
        a.solve(&mut b).unwrap();
        for (u, v) in b.iter().zip(x) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn residual_small_for_random_band(seed in proptest::collection::vec(-1.0f64..1.0, 15), n in 5usize..40) {
            let mut a = pentadiag(n, &seed);
            for i in 0..n { a.add(i, i, 3.0); }
            let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
            let mut b = a.mul_vec(&x);
            a.solve(&mut b).unwrap();
            for (u, v) in b.iter().zip(&x) {
                prop_assert!((u - v).abs() < 1e-10);
            }
        }
    }
}
