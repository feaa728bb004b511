//! Dense matrices over F_p.

use rand::Rng;

use crate::fp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, p: u32) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s = (0..self.cols)
                    .map(|l| self.get(i, l) as u64 * other.get(l, j) as u64)
                    .sum::<u64>();
                out.set(i, j, (s % p as u64) as u32);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32], p: u32) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let s = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>();
                (s % p as u64) as u32
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, p: u32) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fp::inv(self.get(r, c), p);
            for j in 0..self.cols {
                self.set(r, j, fp::mul(self.get(r, j), inv, p));
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && f != 0 {
                    for j in 0..self.cols {
                        let v = fp::sub(self.get(i, j), fp::mul(f, self.get(r, j), p), p);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, p: u32) -> usize {
        self.clone().rref(p).len()
    }

    /// Basis of {v : M v = 0}.
    pub fn nullspace(&self, p: u32) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(p);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = fp::neg(m.get(r, f), p);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, p: u32) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref(p);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Uniformly random invertible n x n matrix (rejection sampling).
    pub fn random_invertible<R: Rng>(n: usize, p: u32, rng: &mut R) -> Matrix {
        loop {
            let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
            let m = Matrix { rows: n, cols: n, data };
            if m.rank(p) == n {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn nullspace_of_singular_matrix() {
        let m = Matrix::from_rows(&[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]]);
        // over F_3 rows 1 and 2 are proportional: 2*(1,2,0) = (2,1,0)
        assert_eq!(m.rank(3), 1);
        let ns = m.nullspace(3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v, 3).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [3u32, 5, 7] {
            let m = Matrix::random_invertible(5, p, &mut rng);
            let inv = m.inverse(p).unwrap();
            assert_eq!(m.mul(&inv, p), Matrix::identity(5));
        }
        assert!(Matrix::from_rows(&[vec![1, 1], vec![2, 2]]).inverse(3).is_none());
    }
}
