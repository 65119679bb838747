use super::*;
use crate::rational::{int, rat};

fn base(p: &[&[i64]], l: &[&[i64]]) -> Arc<TropicalPolarizationData> {
    Arc::new(TropicalPolarizationData::new(RatMatrix::from_ints(p), IntMatrix::from_ints(l)).unwrap())
}

fn pt(c: &[Rational]) -> TropPoint {
    TropPoint::new(c.to_vec())
}

fn riemann_1d() -> TropicalThetaFunction {
    riemann_theta(&base(&[&[2]], &[&[1]])).unwrap()
}

// min over |n| ≤ 10 of n² + n·v
fn brute_1d(v: &Rational) -> Rational {
    (-10i64..=10).map(|n| int(n * n) + v * int(n)).min().unwrap()
}

#[test]
fn riemann_examples() {
    let th = riemann_1d();
    assert_eq!(th.value(&pt(&[int(0)])).unwrap(), int(0));
    let at = th.evaluate(&pt(&[rat(-3, 2)])).unwrap();
    assert_eq!(at.value, rat(-1, 2));
    assert_eq!(at.witnesses, vec![vec![1]]);
    let at = th.evaluate(&pt(&[rat(1, 2)])).unwrap();
    assert_eq!((at.value, at.witnesses), (int(0), vec![vec![0]]));
    let at = th.evaluate(&pt(&[int(1)])).unwrap();
    assert_eq!((at.value, at.witnesses), (int(0), vec![vec![-1], vec![0]]));

    let th2 = riemann_theta(&base(&[&[2, 1], &[1, 2]], &[&[1, 0], &[0, 1]])).unwrap();
    let at = th2.evaluate(&pt(&[int(-2), int(-1)])).unwrap();
    assert_eq!((at.value, at.witnesses), (int(-1), vec![vec![1, 0]]));
}

#[test]
fn matches_brute_force_1d() {
    let th = riemann_1d();
    for k in -40..=40 {
        let v = rat(k, 7);
        assert_eq!(th.value(&pt(std::slice::from_ref(&v))).unwrap(), brute_1d(&v));
    }
}

#[test]
fn not_principal_rejected() {
    let b = base(&[&[1]], &[&[2]]);
    assert_eq!(riemann_theta(&b).unwrap_err(), ThetaError::NotPrincipal);
}

#[test]
fn constant_rational_function() {
    let b = Arc::new(TropicalPolarizationData::unpolarized(RatMatrix::from_ints(&[&[2]])).unwrap());
    let th = TropicalThetaFunction::new(b, AutomorphyFactor::trivial(1), ValuationProfile::origin(1)).unwrap();
    for k in -5..5 {
        assert_eq!(th.value(&pt(&[rat(k, 3)])).unwrap(), int(0));
    }
    let samples: Vec<_> = (-3..3).map(|k| (pt(&[rat(k, 2)]), vec![k])).collect();
    assert!(th.verify_transformation(&samples).unwrap().passed());
}

#[test]
fn profile_validation() {
    let b = base(&[&[1]], &[&[2]]);
    let f = AutomorphyFactor::new(IntMatrix::from_ints(&[&[2]]), vec![int(0)]);
    let e = |rep: i64, w: ExtRational| ProfileEntry { rep: vec![rep], w };
    let fin = |r: Rational| ExtRational::Finite(r);
    assert_eq!(
        TropicalThetaFunction::new(b.clone(), f.clone(), ValuationProfile::new(vec![e(0, fin(int(0)))])).unwrap_err(),
        ThetaError::IncompleteProfile { expected: 2, found: 1 }
    );
    assert!(matches!(
        TropicalThetaFunction::new(b.clone(), f.clone(), ValuationProfile::new(vec![e(0, fin(int(0))), e(2, fin(int(0)))])),
        Err(ThetaError::CongruentRepresentatives(_, _))
    ));
    assert_eq!(
        TropicalThetaFunction::new(
            b.clone(),
            f.clone(),
            ValuationProfile::new(vec![e(0, ExtRational::Infinity), e(1, ExtRational::Infinity)])
        )
        .unwrap_err(),
        ThetaError::EmptyProfile
    );
    // a +∞ coset is allowed
    let th = TropicalThetaFunction::new(b, f, ValuationProfile::new(vec![e(0, ExtRational::Infinity), e(1, fin(int(0)))]))
        .unwrap();
    assert_eq!(th.profile_value(&[0]), ExtRational::Infinity);
    assert_eq!(th.profile_value(&[1]), fin(int(0)));
}

#[test]
fn profile_extension_matches_direct_sum() {
    // Λ = [[2]], P = [[1]]: w(r + 2n) = w(r) + n² + n·r
    let b = base(&[&[1]], &[&[2]]);
    let f = AutomorphyFactor::new(IntMatrix::from_ints(&[&[2]]), vec![rat(1, 3)]);
    let profile = ValuationProfile::new(vec![
        ProfileEntry { rep: vec![0], w: ExtRational::Finite(int(0)) },
        ProfileEntry { rep: vec![3], w: ExtRational::Finite(rat(1, 2)) },
    ]);
    let th = TropicalThetaFunction::new(b, f, profile).unwrap();
    for n in -4i64..=4 {
        let expect = int(n * n) + rat(n, 3);
        assert_eq!(th.profile_value(&[2 * n]), ExtRational::Finite(expect));
        let expect = rat(1, 2) + int(n * n) + rat(n, 3) + int(3 * n);
        assert_eq!(th.profile_value(&[3 + 2 * n]), ExtRational::Finite(expect));
    }
    // evaluation against the extended profile over a box
    for k in -12..=12 {
        let v = pt(&[rat(k, 5)]);
        let brute = (-30i64..=30).map(|u| th.term_value(&[u], &v).finite().unwrap().clone()).min().unwrap();
        assert_eq!(th.value(&v).unwrap(), brute);
    }
}

#[test]
fn transformation_law_examples() {
    let th = riemann_1d();
    let r = th.verify_transformation(&[(pt(&[rat(-3, 2)]), vec![1]), (pt(&[rat(2, 5)]), vec![0])]).unwrap();
    assert!(r.passed());
    assert_eq!(th.value(&pt(&[rat(1, 2)])).unwrap() + int(1) + rat(-3, 2), rat(-1, 2));
}

#[test]
fn translation() {
    let th = riemann_1d();
    let t = th.translate(&pt(&[rat(1, 2)])).unwrap();
    assert_eq!(t.value(&pt(&[int(0)])).unwrap(), int(0));
    let a = pt(&[rat(1, 3)]);
    let b = pt(&[rat(-5, 4)]);
    let ab = th.translate(&a).unwrap().translate(&b).unwrap();
    let direct = th.translate(&a.add(&b)).unwrap();
    for k in -5..5 {
        let v = pt(&[rat(k, 3)]);
        assert_eq!(ab.value(&v).unwrap(), direct.value(&v).unwrap());
        assert_eq!(ab.value(&v).unwrap(), th.value(&v.add(&a).add(&b)).unwrap());
    }
    let same = th.translate(&pt(&[int(0)])).unwrap();
    assert_eq!(same.value(&a).unwrap(), th.value(&a).unwrap());
}

fn term(m: i64, s: Rational, th: &Arc<TropicalThetaFunction>) -> ExpressionTerm {
    ExpressionTerm { multiplicity: m, shift: pt(&[s]), theta: th.clone() }
}

#[test]
fn expression_factors() {
    let th = Arc::new(riemann_1d());
    let single = TropicalThetaExpression::new(vec![term(1, int(0), &th)]).unwrap();
    assert_eq!(expression_automorphy(&single).unwrap(), th.factor().clone());

    let w = rat(1, 2);
    let sym = TropicalThetaExpression::new(vec![term(1, w.clone(), &th), term(1, -w.clone(), &th), term(-2, int(0), &th)])
        .unwrap();
    assert!(expression_automorphy(&sym).unwrap().is_zero());

    let diff = TropicalThetaExpression::new(vec![term(1, w.clone(), &th), term(-1, int(0), &th)]).unwrap();
    let f = expression_automorphy(&diff).unwrap();
    assert!(f.lambda.is_zero());
    assert_eq!(f.ell, vec![w]);
    assert!(matches!(difference_to_periodic(diff), Err(ThetaError::NonzeroAutomorphy { .. })));

    let other = Arc::new(riemann_theta(&base(&[&[3]], &[&[1]])).unwrap());
    let mixed = TropicalThetaExpression::new(vec![term(1, int(0), &th), term(-1, int(0), &other)]).unwrap();
    assert_eq!(expression_automorphy(&mixed).unwrap_err(), ThetaError::Incompatible);
}

#[test]
fn level_two_kummer() {
    let th = Arc::new(riemann_1d());
    let h = level_n_function(&th, &[pt(&[rat(1, 2)]), pt(&[rat(-1, 2)])]).unwrap();
    assert_eq!(h.evaluate(&pt(&[int(0)])).unwrap(), int(0));
    assert_eq!(h.evaluate(&pt(&[int(1)])).unwrap(), rat(-1, 2));
    assert_eq!(h.evaluate(&pt(&[int(3)])).unwrap(), rat(-1, 2));
    assert_eq!(h.evaluate(&pt(&[int(-1)])).unwrap(), rat(-1, 2));
    let samples: Vec<_> = (-10..10).map(|k| pt(&[rat(k, 7)])).collect();
    assert!(kummer_check(&h, &samples).unwrap().passed());

    let zero = level_n_function(&th, &[pt(&[int(0)])]).unwrap();
    assert_eq!(zero.evaluate(&pt(&[rat(2, 3)])).unwrap(), int(0));
    assert!(kummer_check(&zero, &samples).unwrap().passed());

    assert_eq!(
        level_n_function(&th, &[pt(&[rat(1, 2)]), pt(&[rat(1, 2)])]).unwrap_err(),
        ThetaError::ShiftsDoNotSumToZero
    );
}

#[test]
fn self_difference_is_zero() {
    let th = Arc::new(riemann_1d());
    let h = difference_to_periodic(
        TropicalThetaExpression::new(vec![term(1, int(0), &th), term(-1, int(0), &th)]).unwrap(),
    )
    .unwrap();
    assert_eq!(h.evaluate(&pt(&[rat(7, 3)])).unwrap(), int(0));
}

#[test]
fn uneven_theta_flagged() {
    let th = Arc::new(riemann_1d().translate(&pt(&[rat(1, 3)])).unwrap());
    let h = difference_to_periodic(
        TropicalThetaExpression::new(vec![term(1, int(0), &th), term(-1, int(0), &th)]).unwrap(),
    )
    .unwrap();
    let r = kummer_check(&h, &[pt(&[int(0)])]).unwrap();
    assert!(!r.passed());
    assert_eq!(r.precondition_failures.len(), 2);
}
