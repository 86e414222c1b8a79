//! Compressed sparse row storage for the Liouvillian.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Assemble from unordered triplets, summing duplicates and dropping zeros.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            values.push(v);
        }
        let mut keep_cols = Vec::with_capacity(cols.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(values) {
            if v.norm() == 0.0 {
                continue;
            }
            row_ptr[r + 1] += 1;
            keep_cols.push(c);
            keep_vals.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n, row_ptr, cols: keep_cols, values: keep_vals }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    /// `y = scale · A x`.
    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64], scale: f64) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.cols[k]];
            }
            *yi = acc * scale;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.row(i).find(|&(c, _)| c == i).map_or(Complex64::new(0.0, 0.0), |(_, v)| v)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let m = CsrMatrix::from_triplets(
            3,
            vec![(2, 0, c(1.0)), (0, 1, c(2.0)), (0, 1, c(3.0)), (1, 1, c(1.0)), (1, 1, c(-1.0))],
        );
        assert_eq!(m.nnz(), 2);
        let mut y = vec![c(0.0); 3];
        m.mul_vec_into(&[c(1.0), c(1.0), c(1.0)], &mut y, 2.0);
        assert_eq!(y, vec![c(10.0), c(0.0), c(2.0)]);
        assert_eq!(m.diagonal(), vec![c(0.0); 3]);
    }
}
