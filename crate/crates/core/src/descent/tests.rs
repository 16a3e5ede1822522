use super::*;
use crate::ellcurve::WeierstrassModel;
use crate::pairing::psi;

const C11A1: [i64; 5] = [0, -1, 1, -10, -20];
const C35A1: [i64; 5] = [0, 1, 1, 9, 1];
const C158C1: [i64; 5] = [1, 1, 1, -420, 3109];

fn ctx(d: i64, a: [i64; 5], p_str: &str, p: u64) -> IsogenyContext {
    let k = if d == 1 { QuadField::rationals() } else { QuadField::new(d).unwrap() };
    let e = WeierstrassModel::from_ints(&k, a).unwrap();
    let pt = e.parse_point(p_str).unwrap();
    IsogenyContext::new(&e, &pt, p).unwrap()
}

#[test]
fn selmer_over_minus_47() {
    let c = ctx(-47, C11A1, "(5, 5)", 5);
    let sel = selmer_phi(&c).unwrap();
    assert!(c.s2.is_empty());
    assert_eq!(sel.dim(), 2);
    assert_eq!(selmer_phihat_dim(&c, &sel).unwrap(), 1);
    assert_eq!(sel_p_dim_if_applicable(&c).unwrap(), Some(2));
}

#[test]
fn duality_identity_with_s2() {
    let c = ctx(-79, C158C1, "(13, -15)", 5);
    assert!(!c.s2.is_empty());
    let sel = selmer_phi(&c).unwrap();
    let dual = selmer_phihat_dim(&c, &sel).unwrap();
    assert_eq!(sel.dim() as i64 - dual as i64, duality_defect(&c));
    assert_eq!(sel_p_dim_if_applicable(&c).unwrap(), None);
}

#[test]
fn kummer_is_a_homomorphism_into_selmer() {
    let c = ctx(-47, C11A1, "(5, 5)", 5);
    let f = MillerFunction::new(&c.e_prime, &c.pt, 5).unwrap();
    let sel = selmer_phi(&c).unwrap();
    let e = &c.e_prime;
    let q1 = e.parse_point("(4, -1/2+1/2*sqrt(-47))").unwrap();
    let q2 = e.parse_point("(-2, -1/2+1/2*sqrt(-47))").unwrap();
    let k = |q: &Point| f.kummer(q).value;
    for (a, b) in [(&q1, &q2), (&c.pt, &q1), (&q2, &q2)] {
        let lhs = k(&e.add(a, b));
        let rhs = &k(a) * &k(b);
        assert_eq!(rank_in_k_mod_p(&c.field, &[&lhs * &rhs.inv()], 5), 0, "κ({} + {})", a, b);
    }
    for q in [&q1, &q2, &c.pt] {
        assert!(sel.contains(&k(q)));
    }
    let t = e.mul(2, &q1);
    let s = f.kummer_shifted(&q2, &t).unwrap();
    assert_eq!(s.method, KummerMethod::Shifted);
    assert_eq!(rank_in_k_mod_p(&c.field, &[&s.value * &k(&q2).inv()], 5), 0);
    assert_eq!(rank_in_k_mod_p(&c.field, &[k(&c.pt)], 5), 1);
}

#[test]
fn rho_of_kappa_is_psi() {
    let c = ctx(-47, C11A1, "(5, 5)", 5);
    let f = MillerFunction::new(&c.e_prime, &c.pt, 5).unwrap();
    let lp = LogPic::new(&c.field, &c.s1).unwrap();
    let e = &c.e_prime;
    for s in ["(4, -1/2+1/2*sqrt(-47))", "(-2, -1/2+1/2*sqrt(-47))"] {
        let q = e.parse_point(s).unwrap();
        let a = psi_sel(&c, &f.kummer(&q).value).unwrap();
        let b = psi(&c, &q).unwrap();
        assert!(lp.equal(&a, &b), "ρκ = {}, ψ = {}", a, b);
    }
    for (d, a, p_str, p, q_str) in [
        (8, C35A1, "(1, 3)", 3, "(9/2, -1/2+35/4*sqrt(2))"),
        (8, C11A1, "(5, 5)", 5, "(5, 5)"),
        (-79, C158C1, "(13, -15)", 5, "(101/9, -55/9+16/27*sqrt(-79))"),
    ] {
        let c = ctx(d, a, p_str, p);
        let f = MillerFunction::new(&c.e_prime, &c.pt, p).unwrap();
        let lp = LogPic::new(&c.field, &c.s1).unwrap();
        let q = c.e_prime.parse_point(q_str).unwrap();
        let a = psi_sel(&c, &f.kummer(&q).value).unwrap();
        let b = psi(&c, &q).unwrap();
        assert!(lp.equal(&a, &b), "{}: ρκ = {}, ψ = {}", q, a, b);
    }
}

#[test]
fn kernel_cokernel_over_q_sqrt_2() {
    let c = ctx(8, C11A1, "(5, 5)", 5);
    let q = c.e_prime.parse_point("(9/2, -1/2+7/4*sqrt(2))").unwrap();
    let r = kernel_cokernel_report(&c, &[q]).unwrap();
    assert_eq!((r.kappa_rank, r.psi_rank, r.ker_psi), (1, 0, 1));

    let c = ctx(8, C35A1, "(1, 3)", 3);
    let q = c.e_prime.parse_point("(9/2, -1/2+35/4*sqrt(2))").unwrap();
    let r = kernel_cokernel_report(&c, &[q]).unwrap();
    assert_eq!((r.kappa_rank, r.psi_rank, r.ker_psi), (1, 1, 0));
}

#[test]
fn search_finds_the_points_over_minus_47() {
    let c = ctx(1, C11A1, "(5, 5)", 5);
    let hits = quadratic_point_search(&c.e_prime, &c.pt, 5, 4, 200, true).unwrap();
    let over: Vec<&SearchHit> = hits.iter().filter(|h| h.m == -47).collect();
    assert!(over.iter().any(|h| h.point.starts_with("(4,") && h.psi_nonzero == Some(false)), "{:?}", over);
    assert!(over.iter().any(|h| h.point.starts_with("(-2,") && h.psi_nonzero == Some(true)), "{:?}", over);
}

#[test]
fn dual_dimension_two_ways() {
    for c in [ctx(-79, C158C1, "(13, -15)", 5), ctx(-47, C11A1, "(5, 5)", 5), ctx(8, C35A1, "(1, 3)", 3)] {
        let sel = selmer_phi(&c).unwrap();
        let a = sel.dim() as i64 - duality_defect(&c);
        let b = selmer_phihat_dim_from_sequence(&c, &sel).unwrap() as i64;
        assert_eq!(a, b, "S1 = {:?}, S2 = {:?}, sel = {}", c.s1, c.s2, sel.dim());
    }
    // (79) is backward non-split and 79 ≡ −1 mod 5
    let c = ctx(-79, C158C1, "(13, -15)", 5);
    assert_eq!(duality_defect_uniform(&c), duality_defect(&c) - 1);
    let c = ctx(-7, [0, -1, 1, 0, 0], "(0, 0)", 5);
    assert_eq!(c.s2.len(), 2);
    assert_eq!(duality_defect_uniform(&c), duality_defect(&c));
    assert_eq!(selmer_phihat_dim(&c, &selmer_phi(&c).unwrap()).unwrap(), 2);
}
