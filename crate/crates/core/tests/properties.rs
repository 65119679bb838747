//! Randomized invariants across the public API.

use std::sync::Arc;

use proptest::prelude::*;
use tropical_theta::lattice::{is_lll_reduced, lll_reduce, minimize_quadratic, GramForm};
use tropical_theta::matrix::{IntMatrix, RatMatrix};
use tropical_theta::na_theta::{verify_cocycle, NACocycle, PeriodMatrix};
use tropical_theta::pl_geometry::{corner_locus, linearity_cell, PlError};
use tropical_theta::puiseux::PuiseuxNumber;
use tropical_theta::rational::{int, rat, ExtRational, Rational};
use tropical_theta::trop_av::{TropPoint, TropicalPolarizationData};
use tropical_theta::trop_theta::{
    riemann_theta, AutomorphyFactor, ProfileEntry, TropicalThetaFunction, ValuationProfile,
};

fn rational(bound: i64) -> impl Strategy<Value = Rational> {
    (1i64..=8).prop_flat_map(move |d| (-bound * d..=bound * d).prop_map(move |n| rat(n, d)))
}

fn point(g: usize, bound: i64) -> impl Strategy<Value = TropPoint> {
    prop::collection::vec(rational(bound), g).prop_map(TropPoint::new)
}

fn shift(g: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, g)
}

/// Positive-definite symmetric 2x2 integer matrices.
fn pd2() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (1i64..=4, -3i64..=3, 1i64..=4)
        .prop_filter("positive-definite", |(a, b, c)| b * b < a * c)
        .prop_map(|(a, b, c)| [[a, b], [b, c]])
}

fn data2(p: [[i64; 2]; 2], lambda: i64) -> Arc<TropicalPolarizationData> {
    let d = TropicalPolarizationData::new(
        RatMatrix::from_ints(&[&p[0], &p[1]]),
        IntMatrix::from_ints(&[&[lambda, 0], &[0, lambda]]),
    )
    .unwrap();
    Arc::new(d)
}

/// Non-principal g = 1 theta function `(P, Λ, ℓ, w)` with `w` on `0..Λ`.
fn theta1() -> impl Strategy<Value = (i64, i64, Rational, Vec<Rational>)> {
    (1i64..=3, 1i64..=4, rational(2)).prop_flat_map(|(p, k, ell)| {
        prop::collection::vec(rational(2), k as usize).prop_map(move |w| (p, k, ell.clone(), w))
    })
}

fn build1(p: i64, k: i64, ell: &Rational, w: &[Rational]) -> TropicalThetaFunction {
    let data = TropicalPolarizationData::new(RatMatrix::from_ints(&[&[p]]), IntMatrix::identity(1)).unwrap();
    let profile = ValuationProfile::new(
        w.iter().enumerate().map(|(r, x)| ProfileEntry { rep: vec![r as i64], w: ExtRational::Finite(x.clone()) }).collect(),
    );
    TropicalThetaFunction::new(
        Arc::new(data),
        AutomorphyFactor::new(IntMatrix::from_ints(&[&[k]]), vec![ell.clone()]),
        profile,
    )
    .unwrap()
}

/// `w(r + kn) = w(r) + ½pk·n² + ℓn + n·p·r`, minimized by brute force.
fn brute1(p: i64, k: i64, ell: &Rational, w: &[Rational], v: &Rational) -> Rational {
    let mut best: Option<Rational> = None;
    for (r, wr) in w.iter().enumerate() {
        let r = r as i64;
        for n in -40i64..=40 {
            let u = r + k * n;
            let val = wr + rat(p * k * n * n, 2) + ell * int(n) + int(n * p * r) + v * int(u);
            if best.as_ref().is_none_or(|b| val < *b) {
                best = Some(val);
            }
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimizer_matches_box(b in pd2(), l0 in rational(4), l1 in rational(4)) {
        let form = GramForm::from_ints(&[&b[0], &b[1]]).unwrap();
        let m = minimize_quadratic(&form, &[l0.clone(), l1.clone()], &int(0)).unwrap();
        let mut best: Option<Rational> = None;
        let mut arg = Vec::new();
        for x in -25i64..=25 {
            for y in -25i64..=25 {
                let q = rat(b[0][0] * x * x + 2 * b[0][1] * x * y + b[1][1] * y * y, 2) + &l0 * int(x) + &l1 * int(y);
                match &best {
                    Some(v) if q > *v => {}
                    Some(v) if q == *v => arg.push(vec![x, y]),
                    _ => { best = Some(q); arg = vec![vec![x, y]]; }
                }
            }
        }
        prop_assert_eq!(m.value, best.unwrap());
        prop_assert_eq!(m.argmin, arg);
    }

    #[test]
    fn lll_output_is_reduced(b in pd2()) {
        let form = GramForm::from_ints(&[&b[0], &b[1]]).unwrap();
        let red = lll_reduce(&form);
        prop_assert!(is_lll_reduced(&red.reduced));
        prop_assert_eq!(red.transform.determinant().abs(), 1);
    }

    #[test]
    fn automorphy_cocycle(b in pd2(), l in prop::collection::vec(rational(3), 2), n1 in shift(2), n2 in shift(2)) {
        let data = data2(b, 1);
        let f = AutomorphyFactor::new(IntMatrix::identity(2), l);
        let p = data.pairing();
        let sum: Vec<i64> = n1.iter().zip(&n2).map(|(a, c)| a + c).collect();
        let cross = data.pair(&n1, &f.lambda.mul_vec(&n2));
        prop_assert_eq!(f.c_trop(p, &sum), f.c_trop(p, &n1) + f.c_trop(p, &n2) + cross);
    }

    #[test]
    fn embedding_is_additive(b in pd2(), n1 in shift(2), n2 in shift(2)) {
        let data = data2(b, 1);
        let sum: Vec<i64> = n1.iter().zip(&n2).map(|(a, c)| a + c).collect();
        prop_assert_eq!(data.embed_mprime(&sum), data.embed_mprime(&n1).add(&data.embed_mprime(&n2)));
    }

    #[test]
    fn reduction_ignores_periods(b in pd2(), v in point(2, 5), n in shift(2)) {
        let data = data2(b, 1);
        let r = data.reduce_mod_lattice(&v).unwrap();
        prop_assert_eq!(r.rep.add(&data.embed_mprime(&r.shift)), v.clone());
        let moved = data.reduce_mod_lattice(&v.add(&data.embed_mprime(&n))).unwrap();
        prop_assert_eq!(&moved.rep, &r.rep);
        prop_assert_eq!(data.reduce_mod_lattice(&r.rep).unwrap().rep, r.rep);
    }

    #[test]
    fn theta1_matches_brute_force((p, k, ell, w) in theta1(), v in rational(5)) {
        let th = build1(p, k, &ell, &w);
        prop_assert_eq!(th.value(&TropPoint::new(vec![v.clone()])).unwrap(), brute1(p, k, &ell, &w, &v));
    }

    #[test]
    fn quasi_periodicity((p, k, ell, w) in theta1(), v in point(1, 5), n in -4i64..=4) {
        let th = build1(p, k, &ell, &w);
        let report = th.verify_transformation(&[(v, vec![n])]).unwrap();
        prop_assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn quasi_periodicity_g2(b in pd2(), v in point(2, 4), n in shift(2)) {
        let th = riemann_theta(&data2(b, 1)).unwrap();
        prop_assert!(th.verify_transformation(&[(v, n)]).unwrap().passed());
    }

    #[test]
    fn translation_identity((p, k, ell, w) in theta1(), v in point(1, 4), v0 in point(1, 2)) {
        let th = build1(p, k, &ell, &w);
        let moved = th.translate(&v0).unwrap();
        prop_assert_eq!(moved.value(&v).unwrap(), th.value(&v.add(&v0)).unwrap());
    }

    #[test]
    fn riemann_is_even(b in pd2(), v in point(2, 4)) {
        let th = riemann_theta(&data2(b, 1)).unwrap();
        prop_assert_eq!(th.value(&v).unwrap(), th.value(&v.neg()).unwrap());
    }

    #[test]
    fn cell_contains_its_point(b in pd2(), v in point(2, 3)) {
        let th = riemann_theta(&data2(b, 1)).unwrap();
        match linearity_cell(&th, &v) {
            Ok(cell) => {
                prop_assert!(cell.contains(&v.coords));
                prop_assert_eq!(cell.affine_value(&v.coords), th.value(&v).unwrap());
                // vertices are on the boundary, where the cell's form still attains the minimum
                for x in &cell.vertices {
                    prop_assert_eq!(cell.affine_value(x), th.value(&TropPoint::new(x.clone())).unwrap());
                }
            }
            Err(PlError::OnCornerLocus { ties }) => prop_assert!(ties.len() > 1),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn corner_vertices_are_ties(b in pd2()) {
        let th = riemann_theta(&data2(b, 1)).unwrap();
        let complex = corner_locus(&th).unwrap();
        prop_assert_eq!(complex.euler_characteristic, 0);
        for f in complex.corner_points() {
            let at = th.evaluate(&TropPoint::new(f.vertices[0].clone())).unwrap();
            prop_assert!(at.witnesses.len() >= 3);
        }
    }

    #[test]
    fn puiseux_valuation(a in (rational(3), rational(3)), b in (rational(3), rational(3)), c in rational(3)) {
        prop_assume!(a.0 != int(0) && b.0 != int(0));
        let x = PuiseuxNumber::from_terms(vec![a.clone(), (c.clone(), &a.1 + int(1))]);
        let y = PuiseuxNumber::monomial(b.0.clone(), b.1.clone());
        let vx = x.val().finite().unwrap().clone();
        let vy = y.val().finite().unwrap().clone();
        prop_assert_eq!((&x * &y).val(), ExtRational::Finite(&vx + &vy));
        prop_assert!((&x + &y).val() >= ExtRational::Finite(vx.min(vy)));
        prop_assert_eq!(x.to_string().parse::<PuiseuxNumber>().unwrap(), x.clone());
        prop_assert_eq!(PuiseuxNumber::from_terms(x.terms().to_vec()), x);
    }

    #[test]
    fn na_cocycle_identity(b in pd2(), e in prop::collection::vec(rational(3), 2), seed in 0u64..1000) {
        let period = PeriodMatrix::from_exponents(&RatMatrix::from_ints(&[&b[0], &b[1]]));
        let gens = e.into_iter().map(PuiseuxNumber::q_pow).collect();
        let cocycle = NACocycle::from_period(&period, IntMatrix::identity(2), gens).unwrap();
        prop_assert!(verify_cocycle(&cocycle, &period, seed).passed());
    }
}
