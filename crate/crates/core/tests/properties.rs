//! Invariants over random rational polygons.

mod common;

use num_traits::Signed;
use proptest::prelude::*;
use spherical_frieze::diamond::{lift, propagate_lr, propagate_rl, restrict, scm4, scm_partial, CayleyMengerDiamond, PartialDirection, Sign};
use spherical_frieze::frieze::{frieze_from_polygon, FriezeKind};
use spherical_frieze::geometry::{SphereConfig, SpherePoint};
use spherical_frieze::io::{frieze_to_json, parse_frieze};
use spherical_frieze::numeric::{q, qr, TolerancePolicy, Q};

use common::*;

fn points(r: &Q, pts: &[P3]) -> Vec<SpherePoint> {
    let cfg = SphereConfig::from_radius(r.clone()).unwrap();
    pts.iter().map(|p| SpherePoint::new(p.clone(), &cfg).unwrap()).collect()
}

fn kind() -> impl Strategy<Value = FriezeKind> {
    prop_oneof![Just(FriezeKind::Heronian), Just(FriezeKind::CayleyMenger)]
}

fn entry() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=6).prop_map(|(a, b)| qr(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn polygon_frieze_matches_coordinates(seed in any::<u64>(), n in 4usize..8, kind in kind()) {
        let (r, pts) = random_sphere(seed, n);
        let z = frieze_from_polygon(&points(&r, &pts), kind, (-1, n as i64)).unwrap();
        prop_assert_eq!(z, sphere_frieze(&r, &pts, kind, (-1, n as i64)));
    }

    #[test]
    fn relabeling_translates(seed in any::<u64>(), n in 4usize..8) {
        let (r, mut pts) = random_sphere(seed, n);
        let z = frieze_from_polygon(&points(&r, &pts), FriezeKind::Heronian, (0, n as i64 + 1)).unwrap();
        pts.rotate_left(1);
        let w = frieze_from_polygon(&points(&r, &pts), FriezeKind::Heronian, (0, n as i64)).unwrap();
        prop_assert_eq!(w, z.cropped(1, n as i64 + 1).unwrap().translated(-1));
    }

    #[test]
    fn rotation_keeps_and_reflection_negates(seed in any::<u64>(), n in 4usize..7) {
        let (r, pts) = random_sphere(seed, n);
        let window = (0, n as i64);
        let z = frieze_from_polygon(&points(&r, &pts), FriezeKind::Heronian, window).unwrap();
        let cycled: Vec<P3> = pts.iter().map(|[x, y, w]| [y.clone(), w.clone(), x.clone()]).collect();
        let mirrored: Vec<P3> = pts.iter().map(|[x, y, w]| [y.clone(), x.clone(), w.clone()]).collect();
        prop_assert_eq!(&frieze_from_polygon(&points(&r, &cycled), FriezeKind::Heronian, window).unwrap(), &z);
        prop_assert_eq!(frieze_from_polygon(&points(&r, &mirrored), FriezeKind::Heronian, window).unwrap(), z.negate_midpoints());
    }

    #[test]
    fn diamond_halves_determine_each_other(seed in any::<u64>()) {
        let (r, pts) = random_sphere(seed, 4);
        let k = q(1) / (&r * &r);
        let z = sphere_frieze(&r, &pts, FriezeKind::Heronian, (0, 4));
        let x = z.heronian_diamond(1, 3).unwrap();
        let pol = TolerancePolicy::exact();
        prop_assert_eq!(
            propagate_lr(&x.a, &x.b, &x.c, &x.d, &x.e, &x.p, &x.q, &k, Some(&pol)).unwrap(),
            (x.f.clone(), x.r.clone(), x.s.clone())
        );
        prop_assert_eq!(
            propagate_rl(&x.a, &x.b, &x.c, &x.d, &x.f, &x.r, &x.s, &k, Some(&pol)).unwrap(),
            (x.e.clone(), x.p.clone(), x.q.clone())
        );
    }

    #[test]
    fn lift_inverts_restrict(seed in any::<u64>()) {
        let (r, pts) = random_sphere(seed, 4);
        let k = q(1) / (&r * &r);
        let x = sphere_frieze(&r, &pts, FriezeKind::Heronian, (0, 4)).heronian_diamond(1, 3).unwrap();
        let cm = restrict(&x, &k, &TolerancePolicy::exact()).unwrap();
        let sign = if x.p.is_negative() { Sign::Minus } else { Sign::Plus };
        prop_assert_eq!(lift(&cm, &k, sign).unwrap(), x.clone());
        let other = lift(&cm, &k, if sign == Sign::Plus { Sign::Minus } else { Sign::Plus }).unwrap();
        prop_assert_eq!([other.p, other.q, other.r, other.s], [-x.p, -x.q, -x.r, -x.s]);
    }

    #[test]
    fn frieze_json_round_trip(seed in any::<u64>(), n in 4usize..7, kind in kind()) {
        let (r, pts) = random_sphere(seed, n);
        let z = sphere_frieze(&r, &pts, kind, (0, n as i64));
        let text = frieze_to_json(&z);
        let back = parse_frieze::<Q>(&text).unwrap();
        prop_assert_eq!(frieze_to_json(&back), text);
        prop_assert_eq!(back, z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinant_and_partials_match_cofactors(
        v in proptest::array::uniform6(entry()),
        k in entry(),
    ) {
        let cm = CayleyMengerDiamond::from_array(v.clone());
        prop_assert_eq!(scm4(&cm, &k), m4(&v, &k));
        let dirs = [
            (PartialDirection::Up, 0),
            (PartialDirection::Ne, 1),
            (PartialDirection::Down, 2),
            (PartialDirection::Se, 3),
            (PartialDirection::Left, 4),
            (PartialDirection::Right, 5),
        ];
        for (dir, slot) in dirs {
            prop_assert_eq!(scm_partial(dir, &cm, &k), m4_partial(&v, slot, &k));
        }
    }
}

fn table(m: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    proptest::collection::vec(entry(), m * (m - 1) / 2).prop_map(move |upper| {
        let mut t = vec![vec![Q::from_integer(0.into()); m]; m];
        let mut it = upper.into_iter();
        for i in 0..m {
            for j in i + 1..m {
                let v = it.next().unwrap();
                t[i][j] = v.clone();
                t[j][i] = v;
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bordered_determinant_matches_leibniz(t in (3usize..=6).prop_flat_map(table), k in entry()) {
        prop_assert_eq!(spherical_frieze::diamond::scm_det(&t, &k).unwrap(), bordered_det(&t, &(&k / q(2))));
    }

    #[test]
    fn cospherical_points_have_zero_determinant(seed in any::<u64>(), n in 5usize..8) {
        let (r, pts) = random_sphere(seed, n);
        let t: Vec<Vec<Q>> = pts.iter().map(|a| pts.iter().map(|b| x3(a, b)).collect()).collect();
        prop_assert_eq!(spherical_frieze::diamond::scm_det(&t, &(q(1) / (&r * &r))).unwrap(), q(0));
    }
}
