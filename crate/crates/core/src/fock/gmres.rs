//! Restarted GMRES with right preconditioning (flexible variant, storing the
//! preconditioned basis).

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresReport {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Solve `A x = b` starting from `x`. `apply` computes `A v`, `precondition`
/// an approximation of `A⁻¹ v`.
pub fn gmres<A, P>(
    apply: A,
    precondition: P,
    b: &[Complex64],
    x: &mut [Complex64],
    restart: usize,
    max_iterations: usize,
    tolerance: f64,
) -> GmresReport
where
    A: Fn(&[Complex64], &mut [Complex64]),
    P: Fn(&[Complex64], &mut [Complex64]),
{
    let n = b.len();
    let zero = Complex64::new(0.0, 0.0);
    let b_norm = norm(b).max(f64::MIN_POSITIVE);
    let mut work = vec![zero; n];
    let mut iterations = 0;
    let mut relative = f64::INFINITY;

    while iterations < max_iterations {
        apply(x, &mut work);
        let r: Vec<Complex64> = b.iter().zip(&work).map(|(bi, wi)| bi - wi).collect();
        let beta = norm(&r);
        relative = beta / b_norm;
        if relative <= tolerance {
            return GmresReport { iterations, relative_residual: relative, converged: true };
        }
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut precond_basis: Vec<Vec<Complex64>> = Vec::new();
        let mut h = vec![vec![zero; restart]; restart + 1];
        let mut cs = vec![zero; restart];
        let mut sn = vec![zero; restart];
        let mut g = vec![zero; restart + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut used = 0;

        for j in 0..restart {
            let mut z = vec![zero; n];
            precondition(&basis[j], &mut z);
            let mut w = vec![zero; n];
            apply(&z, &mut w);
            precond_basis.push(z);
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let h_next = norm(&w);
            h[j + 1][j] = Complex64::new(h_next, 0.0);
            for i in 0..j {
                let t = cs[i].conj() * h[i][j] + sn[i].conj() * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let (a, bb) = (h[j][j], h[j + 1][j]);
            let denom = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if denom == 0.0 {
                used = j;
                break;
            }
            cs[j] = a / denom;
            sn[j] = bb / denom;
            h[j][j] = cs[j].conj() * a + sn[j].conj() * bb;
            h[j + 1][j] = zero;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j].conj() * g[j];
            iterations += 1;
            used = j + 1;
            relative = g[j + 1].norm() / b_norm;
            if relative <= tolerance || iterations >= max_iterations || h_next == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }

        let mut y = vec![zero; used];
        for i in (0..used).rev() {
            let mut acc = g[i];
            for k in i + 1..used {
                acc -= h[i][k] * y[k];
            }
            y[i] = acc / h[i][i];
        }
        for (yi, z) in y.iter().zip(&precond_basis) {
            for (xk, zk) in x.iter_mut().zip(z) {
                *xk += yi * zk;
            }
        }
        if relative <= tolerance {
            apply(x, &mut work);
            let true_res = norm(&b.iter().zip(&work).map(|(bi, wi)| bi - wi).collect::<Vec<_>>()) / b_norm;
            if true_res <= tolerance * 10.0 {
                return GmresReport { iterations, relative_residual: true_res, converged: true };
            }
        }
    }
    GmresReport { iterations, relative_residual: relative, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_system() {
        let n = 50;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // Tridiagonal non-Hermitian operator.
        let apply = |v: &[Complex64], out: &mut [Complex64]| {
            for i in 0..n {
                let mut acc = c(3.0, 0.5 * i as f64 / n as f64) * v[i];
                if i > 0 {
                    acc += c(-1.0, 0.2) * v[i - 1];
                }
                if i + 1 < n {
                    acc += c(-0.7, -0.1) * v[i + 1];
                }
                out[i] = acc;
            }
        };
        let b: Vec<Complex64> = (0..n).map(|i| c(1.0, i as f64 * 0.01)).collect();
        let mut x = vec![c(0.0, 0.0); n];
        let report = gmres(apply, |v, z| z.copy_from_slice(v), &b, &mut x, 10, 500, 1e-12);
        assert!(report.converged, "{report:?}");
        let mut ax = vec![c(0.0, 0.0); n];
        apply(&x, &mut ax);
        let err: f64 = ax.iter().zip(&b).map(|(a, bb)| (a - bb).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}
