use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::domains::RealCompactSet;
use crate::error::{Error, Result};
use crate::uea::{rational_to_f64, Polynomial, Rational, Scalar};

type RPoly = Polynomial<Rational>;

/// Width below which isolating intervals are no longer split.
fn isolation_width() -> Rational {
    Rational::new(1.into(), 1_000_000_000_000i64.into())
}

/// `|g|²` as a real polynomial: `(Re g)² + (Im g)²`.
fn modulus_sq<S: Scalar>(g: &Polynomial<S>) -> RPoly {
    let (re, im): (Vec<_>, Vec<_>) = g.coeffs().iter().map(Scalar::parts).unzip();
    let (re, im) = (RPoly::new(re), RPoly::new(im));
    &(&re * &re) + &(&im * &im)
}

fn rem(a: &RPoly, b: &RPoly) -> RPoly {
    let db = b.degree().expect("nonzero divisor");
    let lead = b.coeffs()[db].clone();
    let mut r = a.coeffs().to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = r[k].clone() / lead.clone();
        if !c.is_zero() {
            for (t, bc) in b.coeffs().iter().enumerate() {
                let idx = k - db + t;
                r[idx] = r[idx].clone() - c.clone() * bc.clone();
            }
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    RPoly::new(r)
}

/// Positive multiple of `p` with coprime integer coefficients.
fn primitive(p: &RPoly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// Sign of `Σ cᵢ (a/b)ⁱ` for `b > 0`, via `Σ cᵢ aⁱ b^{n−i}`.
fn sign_at(c: &[BigInt], a: &BigInt, b: &BigInt) -> Sign {
    let Some((top, rest)) = c.split_last() else {
        return Sign::NoSign;
    };
    let mut acc = top.clone();
    let mut bpow = BigInt::one();
    for ci in rest.iter().rev() {
        bpow *= b;
        acc = acc * a + ci * &bpow;
    }
    acc.sign()
}

struct Sturm {
    chain: Vec<Vec<BigInt>>,
}

impl Sturm {
    fn new(p: &RPoly) -> Self {
        let mut polys = vec![p.clone(), p.derivative()];
        while !polys.last().expect("nonempty").is_zero() {
            let n = polys.len();
            let r = -rem(&polys[n - 2], &polys[n - 1]);
            let r = RPoly::new(
                primitive(&r)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect(),
            );
            polys.push(r);
        }
        polys.pop();
        Self {
            chain: polys.iter().map(primitive).collect(),
        }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last: Option<Sign> = None;
        let mut count = 0;
        for p in &self.chain {
            let v = sign_at(p, x.numer(), x.denom());
            if v == Sign::NoSign {
                continue;
            }
            if last.is_some_and(|l| l != v) {
                count += 1;
            }
            last = Some(v);
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    fn sign(&self, x: &Rational) -> Sign {
        sign_at(&self.chain[0], x.numer(), x.denom())
    }
}

/// Points within the isolation width of every real root of `p` in `(a, b]`.
fn root_candidates(p: &RPoly, a: &Rational, b: &Rational) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(p);
    let width = isolation_width();
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), sturm.count(a, b))];
    while let Some((lo, hi, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if &hi - &lo <= width {
            out.push((&lo + &hi) / Rational::from_integer(2.into()));
            out.push(hi);
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if n == 1 {
            let (sl, sh) = (sturm.sign(&lo), sturm.sign(&hi));
            if sl != Sign::NoSign && sh != Sign::NoSign && sl != sh {
                out.push(bisect_sign_change(&sturm, lo, hi, sl, &width));
                continue;
            }
        }
        let left = sturm.count(&lo, &mid);
        stack.push((mid.clone(), hi, n - left.min(n)));
        stack.push((lo, mid, left));
    }
    out
}

/// Midpoint of a width-limited bracket of the sign change of `p` in
/// `(lo, hi)`.
fn bisect_sign_change(
    sturm: &Sturm,
    mut lo: Rational,
    mut hi: Rational,
    s_lo: Sign,
    width: &Rational,
) -> Rational {
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        match sturm.sign(&mid) {
            Sign::NoSign => return mid,
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    (&lo + &hi) / &two
}

/// Exact maximum of the nonnegative polynomial `g2` over `K`, up to the
/// isolation width of the critical points.
fn max_over(g2: &RPoly, k: &RealCompactSet) -> Rational {
    let d = g2.derivative();
    let mut best = Rational::zero();
    for iv in k.intervals() {
        let mut pts = vec![iv.lo.clone(), iv.hi.clone()];
        if iv.lo < iv.hi {
            pts.extend(root_candidates(&d, &iv.lo, &iv.hi));
        }
        for x in pts {
            let v = g2.eval(&x);
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// `|f|_{K,n} = max_K |f^{(n)}|`.
///
/// The maximum of `|f^{(n)}|²` is taken over the endpoints of `K` and the
/// real critical points, which are isolated by Sturm sequences and exact
/// bisection to width 1e-12.
pub fn seminorm_cn<S: Scalar>(f: &Polynomial<S>, k: &RealCompactSet, n: usize) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::EmptyCompact);
    }
    let g2 = modulus_sq(&f.nth_derivative(n));
    if g2.is_zero() {
        return Ok(0.0);
    }
    Ok(rational_to_f64(&max_over(&g2, k)).sqrt())
}

/// Submultiplicative norm `Σ_{k≤n} |f|_{K,k} / k!`.
pub fn norm_weighted<S: Scalar>(f: &Polynomial<S>, k: &RealCompactSet, n: usize) -> Result<f64> {
    let mut total = 0.0;
    let mut fact = 1.0;
    for j in 0..=n {
        if j > 0 {
            fact *= j as f64;
        }
        total += seminorm_cn(f, k, j)? / fact;
    }
    Ok(total)
}

#[derive(PartialEq)]
struct Cell {
    upper: f64,
    mid: f64,
    half: f64,
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Cell {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

/// Maximum of `|f|` over the closed disk, attained on the boundary circle.
///
/// Branch and bound in the angle on `ψ(θ) = |F(re^{iθ})|²`, where `F` is `f`
/// recentered at the disk's center. On a cell of half-width `h` around `m`,
/// `ψ ≤ ψ(m) + |ψ'(m)|h + M₂h²/2` with
/// `M₂ = 2r²F₁² + 2F₀(rF₁ + r²F₂)` and `F_k` the coefficient bounds of
/// `|F^{(k)}|` on the circle. Cells are split until none can beat the best
/// sample by more than 1e-8 in `|f|`.
pub fn sup_disk<S: Scalar>(f: &Polynomial<S>, center: Complex64, radius: f64) -> Result<f64> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::Range(format!(
            "disk radius must be finite and nonnegative, got {radius}"
        )));
    }
    let mut b: Vec<Complex64> = f.coeffs().iter().map(Scalar::to_complex64).collect();
    let n = b.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = b[j + 1] * center;
            b[j] += t;
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    // (ψ, ψ') at angle θ.
    let eval = |theta: f64| -> (f64, f64) {
        let w = Complex64::from_polar(radius, theta);
        let (mut v, mut d) = (zero, zero);
        for c in b.iter().rev() {
            d = d * w + v;
            v = v * w + c;
        }
        let dv = Complex64::i() * w * d;
        (v.norm_sqr(), 2.0 * (v.conj() * dv).re)
    };
    if n <= 1 || radius == 0.0 {
        return Ok(eval(0.0).0.sqrt());
    }
    let bound = |k: usize| -> f64 {
        b.iter()
            .enumerate()
            .skip(k)
            .map(|(j, c)| {
                let falling: f64 = (0..k).map(|t| (j - t) as f64).product();
                falling * c.norm() * radius.powi((j - k) as i32)
            })
            .sum()
    };
    let (f0, f1, f2) = (bound(0), bound(1), bound(2));
    let m2 = 2.0 * radius * radius * f1 * f1 + 2.0 * f0 * (radius * f1 + radius * radius * f2);
    let upper = |(v, d): (f64, f64), h: f64| (v + d.abs() * h + m2 * h * h / 2.0).sqrt();

    const TOL: f64 = 1e-8;
    const START: usize = 64;
    let mut heap = std::collections::BinaryHeap::new();
    let mut best = 0.0f64;
    let half = std::f64::consts::TAU / (2 * START) as f64;
    for k in 0..START {
        let mid = (2 * k + 1) as f64 * half;
        let e = eval(mid);
        best = best.max(e.0.sqrt());
        heap.push(Cell {
            upper: upper(e, half),
            mid,
            half,
        });
    }
    while let Some(cell) = heap.pop() {
        if cell.upper <= best + TOL {
            break;
        }
        let h = cell.half / 2.0;
        for mid in [cell.mid - h, cell.mid + h] {
            let e = eval(mid);
            best = best.max(e.0.sqrt());
            heap.push(Cell {
                upper: upper(e, h),
                mid,
                half: h,
            });
        }
    }
    Ok(best)
}
