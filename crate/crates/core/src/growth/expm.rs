use std::collections::HashMap;

use num_complex::Complex64;

use crate::matrep::NumericTriMatrix;

/// Divided differences of `x ↦ e^{isx}` over subsets of the diagonal,
/// memoized by index mask.
struct DividedDifferences<'a> {
    nodes: &'a [Complex64],
    s: f64,
    memo: HashMap<u64, Complex64>,
}

impl<'a> DividedDifferences<'a> {
    fn new(nodes: &'a [Complex64], s: f64) -> Self {
        Self {
            nodes,
            s,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, mask: u64) -> Complex64 {
        if let Some(v) = self.memo.get(&mask) {
            return *v;
        }
        let idx: Vec<usize> = (0..self.nodes.len())
            .filter(|k| mask >> k & 1 == 1)
            .collect();
        let v = if idx.len() == 1 {
            (Complex64::i() * self.s * self.nodes[idx[0]]).exp()
        } else {
            let (mut u, mut v, mut spread) = (idx[0], idx[0], 0.0);
            for (a, &x) in idx.iter().enumerate() {
                for &y in &idx[a + 1..] {
                    let d = (self.nodes[x] - self.nodes[y]).norm();
                    if d > spread {
                        (u, v, spread) = (x, y, d);
                    }
                }
            }
            if spread * self.s.abs() <= 1.0 {
                self.clustered(&idx)
            } else {
                let a = self.get(mask & !(1 << u));
                let b = self.get(mask & !(1 << v));
                (a - b) / (self.nodes[v] - self.nodes[u])
            }
        };
        self.memo.insert(mask, v);
        v
    }

    /// Nodes within `1/|s|` of each other: expand around their mean `c`,
    /// `f[x₀..x_m] = e^{isc} (is)^m Σ_{k≥0} h_k(is(x − c)) / (m+k)!` with `h`
    /// the complete homogeneous symmetric polynomials. The arguments of `h`
    /// have modulus at most one, so a fixed number of terms suffices.
    fn clustered(&self, idx: &[usize]) -> Complex64 {
        const TERMS: usize = 40;
        let m = idx.len() - 1;
        let is = Complex64::i() * self.s;
        let c = idx.iter().map(|&k| self.nodes[k]).sum::<Complex64>() / idx.len() as f64;
        let mut h = vec![Complex64::new(0.0, 0.0); TERMS];
        h[0] = Complex64::new(1.0, 0.0);
        for &k in idx {
            let y = is * (self.nodes[k] - c);
            for j in 1..TERMS {
                let prev = h[j - 1];
                h[j] += y * prev;
            }
        }
        let mut inv_fact = (1..=m).fold(1.0, |acc, n| acc / n as f64);
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, hk) in h.iter().enumerate() {
            sum += hk * inv_fact;
            inv_fact /= (m + k + 1) as f64;
        }
        (is * c).exp() * is.powu(m as u32) * sum
    }
}

/// `e^{isM}` for upper triangular `M`.
///
/// Entry `(i, j)` is the closed form of the triangular recurrence: the sum
/// over index chains `i = k₀ < k₁ < … < k_m = j` of
/// `m_{k₀k₁}⋯m_{k_{m−1}k_m} · f[m_{k₀k₀}, …, m_{k_mk_m}]` for
/// `f(x) = e^{isx}`. Divided differences over coincident or nearby
/// eigenvalues use the analytic limit.
pub fn tri_exp(m: &NumericTriMatrix, s: f64) -> NumericTriMatrix {
    let p = m.order();
    assert!(p <= 63, "order {p} too large for chain masks");
    let nodes: Vec<Complex64> = (1..=p).map(|k| m.get(k, k)).collect();
    let mut dd = DividedDifferences::new(&nodes, s);
    let mut out = NumericTriMatrix::zeros(p);
    for i in 1..=p {
        out.set(i, i, dd.get(1 << (i - 1)));
        for j in i + 1..=p {
            let inner = j - i - 1;
            let mut total = Complex64::new(0.0, 0.0);
            for sub in 0u64..(1 << inner) {
                let mut chain = vec![i];
                chain.extend((0..inner).filter(|b| sub >> b & 1 == 1).map(|b| i + 1 + b));
                chain.push(j);
                let weight: Complex64 = chain.windows(2).map(|w| m.get(w[0], w[1])).product();
                if weight == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mask = chain.iter().fold(0u64, |acc, &k| acc | 1 << (k - 1));
                total += weight * dd.get(mask);
            }
            out.set(i, j, total);
        }
    }
    out
}

/// `log ‖e^{isM}‖_∞` without overflow: a multiple of the identity is split
/// off so that every diagonal entry of the remaining exponential has
/// modulus at most one.
pub fn log_norm_exp(m: &NumericTriMatrix, s: f64) -> f64 {
    let p = m.order();
    if p == 0 {
        return f64::NEG_INFINITY;
    }
    let ims = (1..=p).map(|k| m.get(k, k).im);
    let kappa = if s >= 0.0 {
        ims.fold(f64::INFINITY, f64::min)
    } else {
        ims.fold(f64::NEG_INFINITY, f64::max)
    };
    let mut shifted = m.clone();
    for k in 1..=p {
        shifted.set(k, k, m.get(k, k) - Complex64::new(0.0, kappa));
    }
    -s * kappa + tri_exp(&shifted, s).norm_inf().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &NumericTriMatrix, b: &NumericTriMatrix, tol: f64) -> bool {
        a.sub(b).unwrap().norm_inf() < tol
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal() {
        let m = NumericTriMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let e = tri_exp(&m, PI);
        let expect = NumericTriMatrix::from_rows(vec![
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(close(&e, &expect, 1e-14));
    }

    #[test]
    fn jordan_block() {
        let m = NumericTriMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let e = tri_exp(&m, 2.0);
        let f = (c(0.0, 2.0)).exp();
        let expect =
            NumericTriMatrix::from_rows(vec![vec![f, f * c(0.0, 2.0)], vec![c(0.0, 0.0), f]])
                .unwrap();
        assert!(close(&e, &expect, 1e-14));
    }

    #[test]
    fn zero_is_identity() {
        let e = tri_exp(&NumericTriMatrix::zeros(4), 3.7);
        assert!(close(&e, &NumericTriMatrix::identity(4), 1e-15));
    }

    #[test]
    fn nilpotent_closed_form() {
        // e^{isY₂} = I + isY₂ + (is)²Y₂²/2
        let y = NumericTriMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0; 3],
        ])
        .unwrap();
        let s = 5.0;
        let e = tri_exp(&y, s);
        assert!((e.get(1, 2) - c(0.0, s)).norm() < 1e-14);
        assert!((e.get(1, 3) - c(-s * s / 2.0, 0.0)).norm() < 1e-13);
        assert!((e.norm_inf() - (1.0 + s + s * s / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn near_confluent_matches_split() {
        // Nodes 1 and 1 + 1e-9: entry (1,2) is the difference quotient.
        let d = 1e-9;
        let m = NumericTriMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0 + d]]).unwrap();
        let s = 3.0;
        let f = |x: f64| (c(0.0, s * x)).exp();
        let exact = c(0.0, s) * f(1.0 + d / 2.0);
        assert!((tri_exp(&m, s).get(1, 2) - exact).norm() < 1e-8);
    }

    #[test]
    fn log_norm_does_not_overflow() {
        let m = NumericTriMatrix::from_rows(vec![
            vec![c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!((log_norm_exp(&m, -1000.0) - 1000.0).abs() < 1e-9);
        assert!(log_norm_exp(&m, 1000.0).abs() < 1e-12);
    }
}
