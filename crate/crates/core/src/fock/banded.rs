//! LU factorization with partial pivoting for complex band matrices.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    /// Row `i` stores columns `i - kl ..= i + ku + kl`.
    rows: Vec<Complex64>,
    lower: Vec<Complex64>,
    pivots: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot {
    pub column: usize,
    pub magnitude: f64,
}

impl BandedLu {
    /// Factor the `n × n` matrix given by `entries`; every entry must lie
    /// within `kl` sub- and `ku` super-diagonals.
    pub fn factor(
        n: usize,
        kl: usize,
        ku: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
        relative_pivot_tolerance: f64,
    ) -> Result<Self, SingularPivot> {
        let width = 2 * kl + ku + 1;
        let mut lu = BandedLu {
            n,
            kl,
            ku,
            width,
            rows: vec![Complex64::new(0.0, 0.0); n * width],
            lower: vec![Complex64::new(0.0, 0.0); n * kl.max(1)],
            pivots: vec![0; n],
        };
        let mut scale: f64 = 0.0;
        for (r, c, v) in entries {
            assert!(c + kl >= r && c <= r + ku, "entry ({r}, {c}) outside the band");
            *lu.at_mut(r, c) += v;
            scale = scale.max(v.norm());
        }
        let tiny = relative_pivot_tolerance * scale;
        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            let last_col = (j + kl + ku).min(n - 1);
            let (p, mag) =
                (j..=last_row).map(|r| (r, lu.at(r, j).norm())).fold((j, -1.0), |b, x| if x.1 > b.1 { x } else { b });
            if !(mag > tiny) {
                return Err(SingularPivot { column: j, magnitude: mag });
            }
            lu.pivots[j] = p;
            if p != j {
                for c in j..=last_col {
                    let a = lu.at(j, c);
                    let b = lu.at(p, c);
                    *lu.at_mut(j, c) = b;
                    *lu.at_mut(p, c) = a;
                }
            }
            let pivot = lu.at(j, j);
            for r in j + 1..=last_row {
                let l = lu.at(r, j) / pivot;
                lu.lower[j * kl + (r - j - 1)] = l;
                if l.norm() == 0.0 {
                    continue;
                }
                *lu.at_mut(r, j) = Complex64::new(0.0, 0.0);
                for c in j + 1..=last_col {
                    let u = lu.at(j, c);
                    *lu.at_mut(r, c) -= l * u;
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn pos(&self, r: usize, c: usize) -> usize {
        r * self.width + (c + self.kl - r)
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.rows[self.pos(r, c)]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut Complex64 {
        let p = self.pos(r, c);
        &mut self.rows[p]
    }

    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let (n, kl) = (self.n, self.kl);
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            for r in j + 1..=(j + kl).min(n - 1) {
                b[r] -= self.lower[j * kl + (r - j - 1)] * bj;
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for c in i + 1..=(i + self.kl + self.ku).min(n - 1) {
                acc -= self.at(i, c) * b[c];
            }
            b[i] = acc / self.at(i, i);
        }
    }
}
