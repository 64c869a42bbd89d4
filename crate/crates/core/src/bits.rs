//! Dense square bit relations used for order relations.

/// An `n x n` boolean relation stored row-major as packed `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn from_fn(n: usize, mut rel: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if rel(i, j) {
                    m.set(i, j);
                }
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Transitive closure (Warshall, row-parallel over words).
    pub fn close_transitively(&mut self) {
        let w = self.words;
        for k in 0..self.n {
            let row_k: Vec<u64> = self.row(k).to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    let row_i = &mut self.data[i * w..(i + 1) * w];
                    for (a, b) in row_i.iter_mut().zip(&row_k) {
                        *a |= *b;
                    }
                }
            }
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Returns the relation with rows and columns permuted: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }
}

/// `a & b` written into `out`.
#[inline]
pub fn and_into(out: &mut [u64], a: &[u64], b: &[u64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x & y;
    }
}

#[inline]
pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

#[inline]
pub fn highest(a: &[u64]) -> Option<usize> {
    a.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

#[inline]
pub fn lowest(a: &[u64]) -> Option<usize> {
    a.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub fn ones(a: &[u64]) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_a_path() {
        let mut m = BitMatrix::new(70);
        for i in 0..69 {
            m.set(i, i + 1);
        }
        m.close_transitively();
        assert!(m.get(0, 69));
        assert!(m.get(3, 64));
        assert!(!m.get(69, 0));
        assert!(!m.get(5, 5));
    }

    #[test]
    fn highest_lowest_and_ones() {
        let mut m = BitMatrix::new(130);
        m.set(1, 3);
        m.set(1, 64);
        m.set(1, 129);
        assert_eq!(highest(m.row(1)), Some(129));
        assert_eq!(lowest(m.row(1)), Some(3));
        assert_eq!(ones(m.row(1)).collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(highest(m.row(0)), None);
    }
}
