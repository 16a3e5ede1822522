use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::*;
use crate::arith::is_square_int;
use crate::qfield::{Place, QuadField};

fn q() -> QuadField {
    QuadField::rationals()
}

fn curve(k: &QuadField, a: [i64; 5]) -> WeierstrassModel {
    WeierstrassModel::from_ints(k, a).unwrap()
}

/// Integral points over `ℚ` with `|x| ≤ bound`.
fn small_points(e: &WeierstrassModel, bound: i64) -> Vec<Point> {
    let k = &e.field;
    let ai: Vec<i64> = e.a_invariants().iter().map(|a| a.a.to_integer().to_i64().unwrap()).collect();
    let mut out = Vec::new();
    for x in -bound..=bound {
        let b = BigInt::from(ai[0] * x + ai[2]);
        let f = BigInt::from(x).pow(3) + BigInt::from(ai[1]) * x * x + BigInt::from(ai[3]) * x + BigInt::from(ai[4]);
        let d = &b * &b + BigInt::from(4) * f;
        if d < BigInt::from(0) {
            continue;
        }
        if let Some(s) = is_square_int(&d) {
            for sg in [1i64, -1] {
                let y2 = -&b + &s * sg;
                if (&y2 % 2u32) == BigInt::from(0) {
                    let y = y2 / 2;
                    let p = Point::Affine(k.int(x), k.bigint(&y));
                    if e.is_on(&p) && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn group_law_examples() {
    let e = curve(&q(), [0, -1, 1, -10, -20]);
    let p = e.point(q().int(5), q().int(5)).unwrap();
    assert_eq!(e.order(&p, 10), Some(5));
    assert!(e.mul(5, &p).is_infinity());
    assert_eq!(e.add(&p, &Point::Infinity), p);
    assert_eq!(e.add(&p, &e.neg(&p)), Point::Infinity);

    let k = QuadField::new(-79).unwrap();
    let e = curve(&k, [1, 1, 1, -420, 3109]);
    let p = e.parse_point("(13, -15)").unwrap();
    let qq = e.parse_point("(101/9, -55/9+16/27*sqrt(-79))").unwrap();
    let s = e.parse_point("(-14+3*sqrt(-79), -186+3*sqrt(-79))").unwrap();
    assert_eq!(e.add(&p, &qq), s);
    assert_eq!(e.order(&p, 10), Some(5));
    assert!(e.parse_point("(1, 1)").is_err());
}

#[test]
fn invariants_identity() {
    let k = QuadField::new(2).unwrap();
    let e = WeierstrassModel::parse(&k, "[1, sqrt(2), 0, -3+sqrt(2), 1/2]").unwrap();
    let lhs = &(&(&e.c4 * &e.c4) * &e.c4) - &(&e.c6 * &e.c6);
    assert_eq!(lhs, &e.disc * &k.int(1728));
    assert!(WeierstrassModel::from_ints(&q(), [0, 0, 0, 0, 0]).is_err());
}

#[test]
fn transform_round_trip() {
    let k = QuadField::new(-47).unwrap();
    let e = curve(&k, [0, -1, 1, -10, -20]);
    let tr = Transform { r: k.int(3), s: k.parse("1+sqrt(-47)").unwrap(), t: k.int(-2), u: k.parse("2").unwrap() };
    let e2 = e.transform(&tr);
    let p = e.parse_point("(5,5)").unwrap();
    let p2 = e.transform_point(&tr, &p);
    assert!(e2.is_on(&p2));
    assert_eq!(WeierstrassModel::untransform_point(&tr, &p2), p);
    assert_eq!(e2.j_invariant(), e.j_invariant());
    // composition
    let tr2 = Transform { r: k.int(1), s: k.int(0), t: k.int(5), u: k.int(3) };
    let both = tr.then(&tr2);
    assert_eq!(e.transform(&both), e2.transform(&tr2));
}

#[test]
fn multiplicative_examples() {
    let l11 = &Place::above(1, 11).unwrap()[0];
    let ld = local_data(&curve(&q(), [0, -1, 1, -10, -20]), l11);
    assert_eq!((ld.kodaira, ld.c, ld.split), (Kodaira::I(5), 5, Some(true)));
    let ld = local_data(&curve(&q(), [0, -1, 1, -7820, -263580]), l11);
    assert_eq!((ld.kodaira, ld.split), (Kodaira::I(1), Some(true)));
    assert_eq!(ld.f, 1);

    let k = QuadField::new(-79).unwrap();
    let e = curve(&k, [1, 1, 1, -420, 3109]);
    for v in k.places_above(2).unwrap() {
        let ld = local_data(&e, &v);
        assert_eq!((ld.kodaira, ld.split, ld.c), (Kodaira::I(20), Some(true), 20));
    }
    let ld = local_data(&e, &k.places_above(79).unwrap()[0]);
    assert_eq!((ld.kodaira, ld.split, ld.c), (Kodaira::I(2), Some(false), 2));
    let ld = local_data(&e, &k.places_above(3).unwrap()[0]);
    assert!(ld.is_good());
    assert_eq!(ld.vu, 0);
}

/// Kodaira symbol from `(v(c4), v(Δ), v(j))` of a minimal model, residue characteristic `≥ 5`.
fn kodaira_oracle(vc4: i64, vd: i64) -> Kodaira {
    let vj = 3 * vc4 - vd;
    if vj < 0 {
        return if vc4 == 0 { Kodaira::I(vd as u32) } else { Kodaira::IStar((vd - 6) as u32) };
    }
    match vd {
        0 => Kodaira::I(0),
        2 => Kodaira::II,
        3 => Kodaira::III,
        4 => Kodaira::IV,
        6 => Kodaira::IStar(0),
        8 => Kodaira::IVStar,
        9 => Kodaira::IIIStar,
        10 => Kodaira::IIStar,
        _ => panic!("not minimal"),
    }
}

#[test]
fn kodaira_matches_table_for_large_residue_characteristic() {
    for (m, l) in [(1i64, 5u64), (1, 7), (-1, 7), (2, 5), (-47, 7)] {
        let k = QuadField::new(if m == 1 { 1 } else { m }).unwrap_or_else(|_| QuadField::rationals());
        let v = &k.places_above(l).unwrap()[0];
        let li = l as i64;
        for (ca, cb) in [(1i64, 1i64), (2, 3), (-1, 2), (3, -5)] {
            for i in 0..5u32 {
                for j in 0..7u32 {
                    let a = ca * li.pow(i);
                    let b = cb * li.pow(j);
                    if i >= 4 && j >= 6 {
                        continue;
                    }
                    let Ok(e) = WeierstrassModel::from_ints(&k, [0, 0, 0, a, b]) else { continue };
                    let ld = local_data(&e, v);
                    let val = |x: &crate::qfield::FieldElement| if x.is_zero() { 99 } else { v.valuation(x) };
                    let mn = &ld.minimal;
                    let (vc4, vc6, vd) = (val(&mn.c4), val(&mn.c6), val(&mn.disc));
                    assert!(vc4 < 4 || vc6 < 6 || vd < 12, "not minimal");
                    assert_eq!(vd, v.valuation(&e.disc) - 12 * ld.vu);
                    assert_eq!(ld.kodaira, kodaira_oracle(vc4, vd), "a={a} b={b} at {v}");
                    assert!(ld.m % ld.c == 0 || ld.kodaira.is_additive(), "c | m for {}", ld.kodaira);
                }
            }
        }
    }
}

#[test]
fn local_data_is_model_invariant() {
    let k = QuadField::new(-2).unwrap();
    let curves = [
        [0i64, -1, 1, -10, -20],
        [1, 1, 1, -420, 3109],
        [0, 1, 1, 9, 1],
        [0, 0, 0, -3, -1],
        [0, 0, 1, 0, -7],
        [1, 0, 1, 4, -6],
    ];
    let trs = [
        Transform { r: k.int(1), s: k.int(-1), t: k.int(2), u: k.int(1) },
        Transform { r: k.parse("sqrt(-2)").unwrap(), s: k.int(3), t: k.int(0), u: k.int(-1) },
    ];
    for a in curves {
        let e = curve(&k, a);
        for l in [2u64, 3, 5, 7, 11] {
            for v in k.places_above(l).unwrap() {
                let base = local_data(&e, &v);
                for tr in &trs {
                    let ld = local_data(&e.transform(tr), &v);
                    assert_eq!(
                        (ld.kodaira, ld.c, ld.split, ld.f),
                        (base.kodaira, base.c, base.split, base.f),
                        "{a:?} at {v}"
                    );
                    assert_eq!(ld.vu, base.vu);
                }
                // an integral but non-minimal model: scaling by a uniformizer
                let pi = v.uniformizer();
                let scaled = e.transform(&Transform { r: k.int(0), s: k.int(0), t: k.int(0), u: pi.inv() });
                let ld = local_data(&scaled, &v);
                assert_eq!((ld.kodaira, ld.c), (base.kodaira, base.c));
                assert_eq!(ld.vu, base.vu + 1, "{a:?} at {v}");
            }
        }
    }
}

#[test]
fn tamagawa_at_three_and_two() {
    // 27a1 and 32a2
    let cases: [([i64; 5], u64, Kodaira, u32, u32); 2] =
        [([0, 0, 1, 0, -7], 3, Kodaira::IVStar, 3, 3), ([0, 0, 0, -1, 0], 2, Kodaira::III, 2, 5)];
    for (a, l, kod, c, f) in cases {
        let ld = local_data(&curve(&q(), a), &Place::above(1, l).unwrap()[0]);
        assert_eq!((ld.kodaira, ld.c, ld.f), (kod, c, f), "{a:?} at {l}");
    }
}

/// `#Ẽ(𝔽_ℓ)` by brute force, singular point included.
fn count_points(a: [i64; 5], l: i64) -> i64 {
    let mut n = 1;
    for x in 0..l {
        for y in 0..l {
            let lhs = y * y + a[0] * x * y + a[2] * y;
            let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
            if (lhs - rhs).rem_euclid(l) == 0 {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn split_flag_matches_point_count() {
    let curves = [
        [0i64, -1, 1, -10, -20],
        [0, 1, 1, 9, 1],
        [1, 1, 1, -420, 3109],
        [0, 0, 1, -7, 6],
        [1, 0, 1, 4, -6],
        [0, 1, 1, -131, -650],
    ];
    for a in curves {
        let e = curve(&q(), a);
        for l in crate::arith::primes_up_to(80) {
            let v = &Place::above(1, l).unwrap()[0];
            let ld = local_data(&e, v);
            if !ld.kodaira.is_multiplicative() || ld.vu != 0 {
                continue;
            }
            let n = v.valuation(&e.disc) as u32;
            assert_eq!(ld.kodaira, Kodaira::I(n));
            let ap = l as i64 + 1 - count_points(a, l as i64);
            assert_eq!(ld.split, Some(ap == 2 - 1), "{a:?} at {l}");
            let want_c = if ap == 1 {
                n
            } else if n % 2 == 0 {
                2
            } else {
                1
            };
            assert_eq!(ld.c, want_c);
        }
    }
}

#[test]
fn component_orders_on_158c1() {
    let k = QuadField::new(-79).unwrap();
    let e = curve(&k, [1, 1, 1, -420, 3109]);
    let p = e.parse_point("(13, -15)").unwrap();
    let qq = e.parse_point("(101/9, -55/9+16/27*sqrt(-79))").unwrap();
    for v in k.places_above(2).unwrap() {
        let ld = local_data(&e, &v);
        let cp = component_index(&ld, &e, &p).unwrap();
        let cq = component_index(&ld, &e, &qq).unwrap();
        assert_eq!(cp.order(), 5);
        assert_eq!(cq.order(), 4);
        for i in -3..=3i64 {
            for j in -3..=3i64 {
                let r = e.add(&e.mul(i, &p), &e.mul(j, &qq));
                let mut want = ComponentIndex::identity(ld.kodaira);
                for _ in 0..i.rem_euclid(20) {
                    want = want.add(&cp);
                }
                for _ in 0..j.rem_euclid(20) {
                    want = want.add(&cq);
                }
                assert_eq!(component_index(&ld, &e, &r).unwrap(), want, "{i}P+{j}Q at {v}");
            }
        }
    }
    let ld = local_data(&e, &k.places_above(79).unwrap()[0]);
    assert!(component_index(&ld, &e, &p).unwrap().is_identity());
    assert!(component_index(&ld, &e, &qq).unwrap().is_identity());
}

/// Homomorphism check on all sums of pairs from a point list.
fn check_homomorphism(e: &WeierstrassModel, v: &Place, pts: &[Point]) -> usize {
    let ld = local_data(e, v);
    let mut nontrivial = 0;
    for a in pts {
        let ca = component_index(&ld, e, a).unwrap();
        if !ca.is_identity() {
            nontrivial += 1;
        }
        assert_eq!(component_index(&ld, e, &e.neg(a)).unwrap(), ca.neg());
        for b in pts {
            let cb = component_index(&ld, e, b).unwrap();
            let s = e.add(a, b);
            assert_eq!(component_index(&ld, e, &s).unwrap(), ca.add(&cb), "{a} + {b} at {v}, {}", ld.kodaira);
        }
    }
    nontrivial
}

/// Curves over `ℚ` with integral points on non-identity components at `ℓ`.
fn additive_cases() -> Vec<([i64; 5], u64)> {
    vec![
        ([1, -1, 0, 9, -27], 3),
        ([1, -1, 0, 9, 81], 3),
        ([0, 0, 0, -4, 16], 2),
        ([0, -1, 0, -8, 16], 2),
        ([0, -1, 0, 8, -16], 2),
        ([0, -1, 0, -32, 256], 2),
        ([1, 1, 0, -25, 625], 5),
        ([1, 1, 0, -250, 12500], 5),
        ([0, -1, 0, -2, 4], 2),
        ([0, 0, 0, -10, 25], 5),
        ([0, 0, 0, 27, -243], 3),
        ([0, 0, 0, -16, 64], 2),
        ([1, -1, 0, 9, 9], 3),
        ([0, -1, 0, -4, 8], 2),
        ([0, 0, 0, 27, -27], 3),
        ([0, 0, 0, -250, 625], 5),
        ([1, -1, 0, -81, -2187], 3),
        ([1, -1, 0, -18, -81], 3),
        ([0, 0, 0, -50, 500], 5),
        ([0, 0, 0, -4 * 49, 0], 7),
    ]
}

#[test]
fn additive_components_are_homomorphic() {
    let mut seen = 0;
    for (a, l) in additive_cases() {
        let e = curve(&q(), a);
        let pts = small_points(&e, 40);
        seen += check_homomorphism(&e, &Place::above(1, l).unwrap()[0], &pts);
    }
    assert!(seen > 40);
}

/// Self-pairing coefficient of the fibral divisor on the point's own component.
fn diagonal_coefficient(kod: Kodaira, label: u32) -> BigRational {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    match kod {
        Kodaira::III => r(1, 2),
        Kodaira::IIIStar => r(3, 2),
        Kodaira::IV => r(2, 3),
        Kodaira::IVStar => r(4, 3),
        Kodaira::IStar(_) if label == 1 => r(1, 1),
        Kodaira::IStar(n) => r(n as i64 + 4, 4),
        _ => unreachable!(),
    }
}

#[test]
fn additive_labels_match_division_polynomial_valuations() {
    // independent check of near/far labels: twice the correction read off
    // from v(ψ₂), v(ψ₃) in the minimal model
    for (a, l) in additive_cases() {
        let e = curve(&q(), a);
        let v = &Place::above(1, l).unwrap()[0];
        let ld = local_data(&e, v);
        let mn = &ld.minimal;
        for p in small_points(&e, 40) {
            let c = component_index(&ld, &e, &p).unwrap();
            if c.is_identity() {
                continue;
            }
            let pm = e.transform_point(&ld.transform, &p);
            let (x, y) = (pm.x().unwrap(), pm.y().unwrap());
            let psi2 = &(&(y + y) + &(&mn.a1 * x)) + &mn.a3;
            let x2 = x * x;
            let k = q();
            let psi3 = &(&(&(&(&k.int(3) * &(&x2 * &x2)) + &(&mn.b2 * &(&x2 * x))) + &(&k.int(3) * &(&mn.b4 * &x2)))
                + &(&k.int(3) * &(&mn.b6 * x)))
                + &mn.b8;
            let o = |z: &crate::qfield::FieldElement| if z.is_zero() { 999 } else { v.valuation(z) };
            let (o2, o3) = (o(&psi2), o(&psi3));
            let want = if o3 >= 3 * o2 {
                BigRational::new((2 * o2).into(), 3.into())
            } else {
                BigRational::new((2 * o3).into(), 8.into())
            };
            assert_eq!(diagonal_coefficient(ld.kodaira, c.label), want, "{p} on {a:?} at {l}, {}", ld.kodaira);
        }
    }
}

#[test]
fn multiplicative_components_are_homomorphic() {
    for (a, l) in [([1i64, 0, 1, 4, -6], 2u64), ([0, 1, 1, 9, 1], 5), ([0, -1, 1, -10, -20], 11), ([0, 0, 1, -7, 6], 2)]
    {
        let e = curve(&q(), a);
        let pts = small_points(&e, 40);
        check_homomorphism(&e, &Place::above(1, l).unwrap()[0], &pts);
    }
}

#[test]
fn denominators_from_duplication() {
    // at good places with Q integral, e_v(2Q) = v(2y + a1 x + a3)
    let e = curve(&q(), [0, 0, 1, -7, 6]);
    let pts = small_points(&e, 30);
    assert!(pts.len() > 4);
    for l in [2u64, 3, 5, 7, 11, 13] {
        let v = &Place::above(1, l).unwrap()[0];
        let ld = local_data(&e, v);
        if !ld.is_good() {
            continue;
        }
        for p in &pts {
            assert_eq!(e_v_of_q(&ld, &e, p).unwrap(), 0);
            let (x, y) = (p.x().unwrap(), p.y().unwrap());
            let psi2 = &(&(y + y) + &(&e.a1 * x)) + &e.a3;
            let d = e.add(p, p);
            if d.is_infinity() {
                continue;
            }
            let want = if psi2.is_zero() { 0 } else { v.valuation(&psi2).max(0) };
            assert_eq!(e_v_of_q(&ld, &e, &d).unwrap(), want, "2{p} at {l}");
        }
    }
}

#[test]
fn orientation_invariant_pairing_value() {
    // j·k/n mod 1 does not depend on the orientation
    let k = QuadField::new(-79).unwrap();
    let e = curve(&k, [1, 1, 1, -420, 3109]);
    let p = e.parse_point("(13, -15)").unwrap();
    let qq = e.parse_point("(101/9, -55/9+16/27*sqrt(-79))").unwrap();
    for v in k.places_above(2).unwrap() {
        let ld = local_data(&e, &v);
        let j = component_index(&ld, &e, &p).unwrap().label as u64;
        let kk = component_index(&ld, &e, &qq).unwrap().label as u64;
        assert_eq!((j * kk) % 20, ((20 - j) * (20 - kk)) % 20);
    }
}

#[test]
fn e_of_origin_tracks_rescaling() {
    let k = QuadField::new(-79).unwrap();
    let e = curve(&k, [1, 1, 1, -420, 3109]);
    let alpha = k.parse("2+sqrt(-79)").unwrap();
    let scaled = e.transform(&Transform { r: k.int(0), s: k.int(0), t: k.int(0), u: alpha.inv() });
    for l in [2u64, 3, 79, 83] {
        for v in k.places_above(l).unwrap() {
            let d = local_data(&scaled, &v).vu - local_data(&e, &v).vu;
            assert_eq!(d, v.valuation(&alpha), "at {v}");
        }
    }
}
