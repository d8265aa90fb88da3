mod common;

use common::*;
use ncsheaf_core::domains::{
    build_w_tuple, cover_compacts, exhaust, ComplexRegion, OmegaOpen, RealCompactSet, RealOpenSet,
    Region, SetOp,
};
use ncsheaf_core::growth::{
    growth_fit, norm_weighted, seminorm_cn, sup_disk, tri_exp, GrowthConfig,
};
use ncsheaf_core::matrep::{
    corner_recover, derived_series, full_basis, pi_tilde, sigma_rep, tri_mul, Generator,
    NumericTriMatrix, TriMatrixElement,
};
use ncsheaf_core::sheaf::{embed_u, glue, nc_mul, tau_restrict, Section};
use ncsheaf_core::uea::{
    int, mul_by_rewriting, oracle::expand, GaussianRational, PbwElement, Polynomial, Rational,
    Scalar,
};
use ncsheaf_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeMap;

type P = Polynomial<Rational>;
type E = PbwElement<Rational>;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig::with_cases(cases)
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn pbw_product_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c): (E, E, E) = (rand_pbw(&mut r, 3, 3), rand_pbw(&mut r, 3, 3), rand_pbw(&mut r, 3, 3));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn pbw_product_matches_rewriting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a: E = rand_pbw(&mut r, 5, 5);
        let b: E = rand_pbw(&mut r, 5, 5);
        prop_assert_eq!(a.mul(&b), mul_by_rewriting(&a, &b));
        let x: PbwElement<GaussianRational> = rand_pbw(&mut r, 3, 3);
        let y: PbwElement<GaussianRational> = rand_pbw(&mut r, 3, 3);
        prop_assert_eq!(x.mul(&y), mul_by_rewriting(&x, &y));
    }

    #[test]
    fn bracket_satisfies_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c): (E, E, E) = (rand_pbw(&mut r, 3, 3), rand_pbw(&mut r, 3, 3), rand_pbw(&mut r, 3, 3));
        let sum = a.bracket(&b.bracket(&c))
            .add(&b.bracket(&c.bracket(&a)))
            .add(&c.bracket(&a.bracket(&b)));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn shifts_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p: P = rand_poly(&mut r, 6);
        let (c, d) = (small_rat(&mut r, 5), small_rat(&mut r, 5));
        prop_assert_eq!(p.shift(&c).shift(&d), p.shift(&(&c + &d)));
        prop_assert_eq!(p.shift(&int(0)), p);
    }

    #[test]
    fn derivative_obeys_leibniz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f: P = rand_poly(&mut r, 5);
        let g: P = rand_poly(&mut r, 5);
        prop_assert_eq!((&f * &g).derivative(), &(&f.derivative() * &g) + &(&f * &g.derivative()));
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn open_sets_closed_under_union_and_intersection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = rand_omega(&mut r, 5, 4);
        let b = rand_omega(&mut r, 5, 4);
        prop_assert!(a.is_valid() && b.is_valid());
        for op in [SetOp::Union, SetOp::Intersect] {
            prop_assert!(a.combine(&b, op).unwrap().is_valid());
        }
    }

    #[test]
    fn membership_saturates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 5, 4);
        for _ in 0..20 {
            let q = r.gen_range(0..5);
            let x = match v.level(q + 1).sample_point() {
                Some(x) if r.gen_bool(0.7) => x,
                _ => small_rat(&mut r, 8),
            };
            if v.member(&x, q + 1) {
                prop_assert!(v.member(&x, q));
                prop_assert!(v.member(&(&x - int(1)), q));
            }
        }
    }

    #[test]
    fn levels_decrease_and_nest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 5, 4);
        for q in 0..6 {
            prop_assert!(v.level(q + 1).is_subset(&v.level(q)));
            for i in 0..=q {
                let j = q - i;
                prop_assert!(v.level(q).is_subset(&v.level(i)));
                prop_assert!(v.level(q).is_subset(&v.level(j).shift(&int(i as i64))));
            }
        }
    }

    #[test]
    fn shift_distributes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (rand_open_set(&mut r, 4), rand_open_set(&mut r, 4));
        let c = small_rat(&mut r, 5);
        prop_assert_eq!(a.union(&b).unwrap().shift(&c), a.shift(&c).union(&b.shift(&c)).unwrap());
        prop_assert_eq!(
            a.intersect(&b).unwrap().shift(&c),
            a.shift(&c).intersect(&b.shift(&c)).unwrap()
        );
        let rect = |r: &mut rand_chacha::ChaCha8Rng| {
            let (x, y) = (small_rat(r, 4), small_rat(r, 4));
            ComplexRegion::rect(x.clone(), x + int(r.gen_range(1..4)), y.clone(), y + int(r.gen_range(1..4)))
        };
        let (a, b) = (rect(&mut r), rect(&mut r));
        let z = GaussianRational::new(small_rat(&mut r, 3), small_rat(&mut r, 3));
        prop_assert_eq!(a.union(&b).unwrap().shift(&z), a.shift(&z).union(&b.shift(&z)).unwrap());
        prop_assert_eq!(
            a.intersect(&b).unwrap().shift(&z),
            a.shift(&z).intersect(&b.shift(&z)).unwrap()
        );
    }

    #[test]
    fn w_tuples_satisfy_the_condition(seed in any::<u64>(), q in 0usize..=8) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 5, 4);
        prop_assert!(build_w_tuple(&v, q).unwrap().check_condition().is_ok());
    }

    #[test]
    fn exhaust_lies_between(seed in any::<u64>(), q in 0usize..4) {
        let mut r = rng(seed);
        let w = rand_w_tuple(&mut r, q);
        let k = rand_compact_inside(&mut r, &w);
        let k2 = exhaust(&k, &w).unwrap();
        prop_assert!(k.is_subset(&k2));
        prop_assert!(k2.inside(&w));
        prop_assert!(k2.check_condition().is_ok());
        prop_assert!(k2.has_dense_interior());
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn restriction_is_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 4, 3);
        let w = rand_sub_omega(&mut r, &v);
        let x = rand_sub_omega(&mut r, &w);
        let s: Section<RealOpenSet> = rand_section(&mut r, &v, 3);
        prop_assert_eq!(&tau_restrict(&v, &v, &s).unwrap(), &s);
        let via_w = tau_restrict(&w, &x, &tau_restrict(&v, &w, &s).unwrap()).unwrap();
        prop_assert_eq!(via_w, tau_restrict(&v, &x, &s).unwrap());
    }

    #[test]
    fn restriction_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 4, 3);
        let w = rand_sub_omega(&mut r, &v);
        let s = rand_section(&mut r, &v, 3);
        let t = rand_section(&mut r, &v, 3);
        let lhs = tau_restrict(&v, &w, &nc_mul(&v, &s, &t).unwrap()).unwrap();
        let rhs = nc_mul(
            &w,
            &tau_restrict(&v, &w, &s).unwrap(),
            &tau_restrict(&v, &w, &t).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedding_is_a_unital_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 4, 3);
        let a: E = rand_pbw(&mut r, 3, 3);
        let b: E = rand_pbw(&mut r, 3, 3);
        let prod = nc_mul(&v, &embed_u(&a, &v).unwrap(), &embed_u(&b, &v).unwrap()).unwrap();
        prop_assert_eq!(prod, embed_u(&a.mul(&b), &v).unwrap());
        prop_assert_eq!(embed_u(&E::one(), &v).unwrap(), Section::unit(v.clone()));
    }

    #[test]
    fn section_product_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 4, 3);
        let (s, t, u) = (rand_section(&mut r, &v, 2), rand_section(&mut r, &v, 2), rand_section(&mut r, &v, 2));
        let left = nc_mul(&v, &nc_mul(&v, &s, &t).unwrap(), &u).unwrap();
        let right = nc_mul(&v, &s, &nc_mul(&v, &t, &u).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compatible_families_glue(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let cover: Vec<OmegaOpen<RealOpenSet>> = (0..n).map(|_| rand_omega(&mut r, 4, 3)).collect();
        check_gluing(&mut r, &cover)?;
    }

    #[test]
    fn compatible_families_glue_over_base_opens(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let cover: Vec<OmegaOpen<ComplexRegion>> = (0..n).map(|_| rand_base(&mut r)).collect();
        check_gluing(&mut r, &cover)?;
    }

    #[test]
    fn complex_embedding_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rand_base(&mut r);
        let a: PbwElement<GaussianRational> = rand_pbw(&mut r, 3, 2);
        let b: PbwElement<GaussianRational> = rand_pbw(&mut r, 3, 2);
        let prod = nc_mul(&v, &embed_u(&a, &v).unwrap(), &embed_u(&b, &v).unwrap()).unwrap();
        prop_assert_eq!(prod, embed_u(&a.mul(&b), &v).unwrap());
    }
}

/// Restricts a random section on the union to each member, glues, and
/// checks the result; then breaks one overlap and expects a refusal.
fn check_gluing<R>(
    rng: &mut rand_chacha::ChaCha8Rng,
    cover: &[OmegaOpen<R>],
) -> Result<(), TestCaseError>
where
    R: Region<Scalar: RandScalar>,
{
    let union = cover
        .iter()
        .skip(1)
        .fold(cover[0].clone(), |u, v| u.combine(v, SetOp::Union).unwrap());
    let s = rand_section(rng, &union, 3);
    let parts: Vec<Section<R>> = cover
        .iter()
        .map(|v| tau_restrict(&union, v, &s).unwrap())
        .collect();
    let glued = glue(cover, &parts).unwrap();
    prop_assert_eq!(&glued, &s);
    for (v, part) in cover.iter().zip(&parts) {
        prop_assert_eq!(&tau_restrict(&union, v, &glued).unwrap(), part);
    }

    for a in 0..cover.len() {
        for b in a + 1..cover.len() {
            let levels = parts[a].levels().len().min(parts[b].levels().len());
            for q in 0..levels {
                let (va, vb) = (cover[a].level(q), cover[b].level(q));
                for (ca, piece) in va.components().iter().enumerate() {
                    if !piece.meets(&vb) {
                        continue;
                    }
                    let mut levels_a = parts[a].levels().to_vec();
                    levels_a[q][ca] = &levels_a[q][ca] + &Polynomial::one();
                    let mut broken = parts.clone();
                    broken[a] = Section::new(cover[a].clone(), levels_a).unwrap();
                    let refused = matches!(glue(cover, &broken), Err(Error::Incompatible { .. }));
                    prop_assert!(refused);
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn rand_tri(
    rng: &mut impl Rng,
    w: &ncsheaf_core::domains::DomainTuple<RealOpenSet>,
) -> TriMatrixElement<RealOpenSet> {
    let entries = w
        .entries()
        .iter()
        .map(|(&ij, d)| {
            (
                ij,
                (0..d.component_count())
                    .map(|_| rand_poly(rng, 2))
                    .collect(),
            )
        })
        .collect::<BTreeMap<_, Vec<P>>>();
    TriMatrixElement::new(w.clone(), entries).unwrap()
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn representation_is_multiplicative(seed in any::<u64>(), q in 0usize..=6) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, 5, 3);
        let a: E = rand_pbw(&mut r, 4, 3);
        let b: E = rand_pbw(&mut r, 4, 3);
        let lhs = tri_mul(&pi_tilde(&a, q, &v).unwrap(), &pi_tilde(&b, q, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, pi_tilde(&a.mul(&b), q, &v).unwrap());
    }

    #[test]
    fn triangular_product_is_associative(seed in any::<u64>(), q in 0usize..5) {
        let mut r = rng(seed);
        let w = rand_w_tuple(&mut r, q);
        let (a, b, c) = (rand_tri(&mut r, &w), rand_tri(&mut r, &w), rand_tri(&mut r, &w));
        let ab = tri_mul(&a, &b).unwrap();
        prop_assert_eq!(ab.domains(), a.domains());
        let left = tri_mul(&ab, &c).unwrap();
        let right = tri_mul(&a, &tri_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn representation_agrees_with_generator_matrices(seed in any::<u64>(), q in 0usize..=5) {
        let mut r = rng(seed);
        let a: E = rand_pbw(&mut r, 4, 4);
        let lambda = small_rat(&mut r, 5);
        let exact = pi_tilde(&a, q, &OmegaOpen::<RealOpenSet>::whole())
            .unwrap()
            .eval_at(&lambda)
            .unwrap();
        let l = lambda.to_complex64();
        let gens = [sigma_rep(l, q, Generator::E1), sigma_rep(l, q, Generator::E2)];
        let mut sum = NumericTriMatrix::zeros(q + 1);
        for (word, c) in expand(&a) {
            let m = word
                .iter()
                .fold(NumericTriMatrix::identity(q + 1), |m, &g| m.mul(&gens[g as usize]).unwrap());
            sum = sum.sub(&m.scale(-c.to_complex64())).unwrap();
        }
        let diff = sum.sub(&NumericTriMatrix::from_exact(&exact)).unwrap();
        prop_assert!(diff.norm_inf() <= 1e-9 * (1.0 + sum.norm_inf()));
    }

    #[test]
    fn generator_matrices_realize_the_bracket(seed in any::<u64>(), q in 0usize..=10) {
        let mut r = rng(seed);
        let x = Complex64::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
        let (e1, e2) = (sigma_rep(x, q, Generator::E1), sigma_rep(x, q, Generator::E2));
        let br = e1.mul(&e2).unwrap().sub(&e2.mul(&e1).unwrap()).unwrap();
        prop_assert!(br.sub(&e2).unwrap().norm_inf() < 1e-12);
    }
}

#[test]
fn derived_series_is_short() {
    for p in 1..=6usize {
        let s = derived_series(&full_basis::<Rational>(p)).unwrap();
        assert!(s.solvable);
        let bound = (p as f64).log2().ceil() as usize + 2;
        assert!(s.dims().len() - 1 <= bound, "p = {p}: {:?}", s.dims());
    }
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn weighted_norm_is_submultiplicative(seed in any::<u64>(), n in 0usize..=3) {
        let mut r = rng(seed);
        let k = RealCompactSet::interval(int(-2), int(2));
        let f: P = rand_poly(&mut r, 4);
        let g: P = rand_poly(&mut r, 4);
        let lhs = norm_weighted(&(&f * &g), &k, n).unwrap();
        let rhs = norm_weighted(&f, &k, n).unwrap() * norm_weighted(&g, &k, n).unwrap();
        prop_assert!(lhs <= rhs + 1e-6 * (1.0 + rhs), "{lhs} > {rhs}");
    }

    #[test]
    fn disk_norm_is_submultiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f: Polynomial<GaussianRational> = rand_poly(&mut r, 3);
        let g: Polynomial<GaussianRational> = rand_poly(&mut r, 3);
        let c = Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let rad = r.gen_range(0.1..2.0);
        let lhs = sup_disk(&(&f * &g), c, rad).unwrap();
        let rhs = sup_disk(&f, c, rad).unwrap() * sup_disk(&g, c, rad).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-7) + 1e-7, "{lhs} > {rhs}");
    }

    #[test]
    fn entries_are_dominated_by_cover_compacts(seed in any::<u64>(), q in 0usize..4, n in 0usize..3) {
        let mut r = rng(seed);
        let v = rand_omega(&mut r, q + 2, 3);
        let w = build_w_tuple(&v, q).unwrap();
        let k = rand_compact_inside(&mut r, &w);
        let a: E = rand_pbw(&mut r, q, 4);
        let m = pi_tilde(&a, q, &v).unwrap();
        let cover = cover_compacts(&k, q).unwrap();
        for (&(i, j), kij) in k.entries() {
            if kij.is_empty() {
                continue;
            }
            let entry = m.global_entry(i, j).unwrap();
            let lhs = seminorm_cn(entry, kij, n).unwrap();
            let rhs = seminorm_cn(&a.level(j - i), &cover[j - i], n).unwrap();
            prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs), "({i},{j}): {lhs} > {rhs}");
        }
    }

    #[test]
    fn corner_entry_recovers_top_coefficient(seed in any::<u64>(), p in 0usize..5, l in 0usize..3) {
        let mut r = rng(seed);
        let a: E = rand_pbw(&mut r, 5, 4);
        let Some(top) = a.e2_degree() else { return Ok(()) };
        let p = p.min(top);
        let lo = small_rat(&mut r, 4);
        let m = RealCompactSet::interval(lo.clone(), lo + int(r.gen_range(1..4)));
        let corner = pi_tilde(&a, p, &OmegaOpen::<RealOpenSet>::whole()).unwrap();
        let corner = corner.global_entry(1, p + 1).unwrap();
        let direct = seminorm_cn(&a.level(p), &m, l).unwrap();
        let via = seminorm_cn(corner, &m.shift(&int(-(p as i64))), l).unwrap();
        prop_assert!((direct - via).abs() <= 1e-9 * direct.max(1.0));
        prop_assert_eq!(corner_recover::<RealOpenSet>(&a, p).unwrap(), a.level(p));
    }
}

fn rand_numeric(rng: &mut impl Rng, p: usize, real: bool) -> NumericTriMatrix {
    let n = p * (p + 1) / 2;
    let upper: Vec<Complex64> = (0..n)
        .map(|_| {
            let re = rng.gen_range(-2.0..2.0);
            let im = if real { 0.0 } else { rng.gen_range(-2.0..2.0) };
            Complex64::new(re, im) / if real { 1.0 } else { 2f64.sqrt() }
        })
        .collect();
    NumericTriMatrix::from_upper(p, &upper).unwrap()
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn exponential_group_law(seed in any::<u64>(), p in 1usize..=5) {
        let mut r = rng(seed);
        let real = r.gen_bool(0.5);
        let m = rand_numeric(&mut r, p, real);
        let (s, t) = (r.gen_range(-10.0..10.0), r.gen_range(-10.0..10.0));
        let (es, et) = (tri_exp(&m, s), tri_exp(&m, t));
        let lhs = tri_exp(&m, s + t);
        let err = lhs.sub(&es.mul(&et).unwrap()).unwrap().norm_inf();
        // rounding in the product is relative to the factors, not the result
        let scale = 1.0 + es.norm_inf() * et.norm_inf();
        prop_assert!(err < 1e-7 * scale, "err {err:e} at s = {s}, t = {t}");
        let det = tri_exp(&m, s).det();
        let want = (Complex64::i() * s * m.trace()).exp();
        prop_assert!((det - want).norm() < 1e-8 * (1.0 + want.norm()));
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn real_triangular_growth_is_polynomial(seed in any::<u64>(), p in 1usize..=5) {
        let mut r = rng(seed);
        let b = rand_numeric(&mut r, p, true);
        let report = growth_fit(&b, 1000.0, 64, &GrowthConfig::default()).unwrap();
        prop_assert!(report.alpha <= (p - 1) as f64 + 0.15, "alpha {} for order {p}", report.alpha);
    }
}
