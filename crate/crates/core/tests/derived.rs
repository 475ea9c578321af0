//! Worked values recomputed by brute force in test code (own modular
//! arithmetic, own point addition, plain enumeration) and compared with the
//! library.

mod common;

use common::*;
use hassegen::abgroup::{
    group_from_presentation, hom_kernel, induced_maps, smith_normal_form, FgGroup, GroupHom, IntMatrix,
};
use hassegen::curve::{Curve, Point};
use hassegen::finitefield::make_field;
use hassegen::fundgroup::{Factor, FundGroup};
use hassegen::groups::{self, ClassNumber, Dynkin, GroupSpec, HasseOutcome, Isogeny};
use hassegen::hassedomain::{norm_n0_cyclic, CoverDescriptor, ExplicitCover, HasseDomain};
use hassegen::oracle::oracle_kernels;
use num_bigint::BigInt;
use num_rational::BigRational;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// F_p[u]/(f) with f found here as the least irreducible monic quadratic
/// under low-first lexicographic order.
#[derive(Clone, Copy)]
struct F2 {
    p: i64,
    c0: i64,
    c1: i64,
}

type E2 = (i64, i64);

impl F2 {
    fn new(p: i64) -> Self {
        for c0 in 0..p {
            for c1 in 0..p {
                if (0..p).all(|x| (x * x + c1 * x + c0) % p != 0) {
                    return F2 { p, c0, c1 };
                }
            }
        }
        unreachable!()
    }
    fn add(&self, a: E2, b: E2) -> E2 {
        ((a.0 + b.0).rem_euclid(self.p), (a.1 + b.1).rem_euclid(self.p))
    }
    fn sub(&self, a: E2, b: E2) -> E2 {
        self.add(a, (-b.0, -b.1))
    }
    fn mul(&self, a: E2, b: E2) -> E2 {
        // u^2 = -c1 u - c0
        let (k0, k1, k2) = (a.0 * b.0, a.0 * b.1 + a.1 * b.0, a.1 * b.1);
        ((k0 - k2 * self.c0).rem_euclid(self.p), (k1 - k2 * self.c1).rem_euclid(self.p))
    }
    fn pow(&self, a: E2, e: u64) -> E2 {
        (0..e).fold((1, 0), |acc, _| self.mul(acc, a))
    }
    fn inv(&self, a: E2) -> E2 {
        self.pow(a, (self.p * self.p - 2) as u64)
    }
    fn all(&self) -> Vec<E2> {
        (0..self.p).flat_map(|a| (0..self.p).map(move |b| (a, b))).collect()
    }
}

/// y^2 = x^3 + a x + b, affine points over F_p, None is infinity.
type Pt = Option<(i64, i64)>;

fn ec_add(p: i64, a: i64, u: Pt, v: Pt) -> Pt {
    let ((x1, y1), (x2, y2)) = match (u, v) {
        (None, w) | (w, None) => return w,
        (Some(s), Some(t)) => (s, t),
    };
    let inv = |z: i64| (1..p).find(|w| (z * w).rem_euclid(p) == 1).unwrap();
    let l = if x1 == x2 {
        if (y1 + y2).rem_euclid(p) == 0 {
            return None;
        }
        (3 * x1 * x1 + a) * inv((2 * y1).rem_euclid(p))
    } else {
        (y2 - y1) * inv((x2 - x1).rem_euclid(p))
    }
    .rem_euclid(p);
    let x3 = (l * l - x1 - x2).rem_euclid(p);
    Some((x3, (l * (x1 - x3) - y1).rem_euclid(p)))
}

fn ec_points(p: i64, a: i64, b: i64) -> Vec<Pt> {
    let mut v = vec![None];
    for x in 0..p {
        for y in 0..p {
            if (y * y - x * x * x - a * x - b).rem_euclid(p) == 0 {
                v.push(Some((x, y)));
            }
        }
    }
    v
}

fn ec_order(p: i64, a: i64, pt: Pt) -> u64 {
    let mut acc = pt;
    let mut k = 1;
    while acc.is_some() {
        acc = ec_add(p, a, acc, pt);
        k += 1;
    }
    k
}

/// (d1, d2) with d1 | d2 from the exponent and the count.
fn ec_shape(p: i64, a: i64, b: i64) -> (u64, u64) {
    let pts = ec_points(p, a, b);
    let e = pts.iter().map(|&q| ec_order(p, a, q)).max().unwrap();
    (pts.len() as u64 / e, e)
}

/// |E[m]| by counting points killed by m.
fn ec_killed_by(p: i64, a: i64, b: i64, m: u64) -> u64 {
    ec_points(p, a, b).iter().filter(|&&q| m % ec_order(p, a, q) == 0).count() as u64
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn as_e2(f: &hassegen::finitefield::FieldSpec, x: &hassegen::finitefield::FFElem) -> E2 {
    let c = f.coeffs(x);
    (c[0] as i64, c[1] as i64)
}

fn laurent_spec(d: Dynkin, noncompact: Option<bool>) -> GroupSpec {
    GroupSpec::new(d, Isogeny::Adjoint, laurent(3), None, noncompact, None).unwrap()
}

fn elliptic_cover_line5() -> CoverDescriptor {
    let base = o_infinity(line(5));
    CoverDescriptor::explicit(&base, ExplicitCover { curve: ec(5, 0, 2), degree: 2, fibers: vec![vec![((1, 0), 2)]] })
        .unwrap()
}

#[test]
fn smith_examples() {
    // gcd of entries, then |det| / gcd
    let m = [[2i64, 4], [6, 8]];
    let g = [m[0][0], m[0][1], m[1][0], m[1][1]].into_iter().fold(0, gcd);
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    let s = smith_normal_form(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]));
    assert_eq!(s.diagonal(), vec![big(g), big(det / g)]);

    // Z/2 x Z/3 is cyclic iff some element has order 6
    let cyclic = (0..2).any(|a| (0..3).any(|b| (1..6).all(|k| (k * a % 2, k * b % 3) != (0, 0))));
    let grp = group_from_presentation(2, &IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])).unwrap();
    assert!(cyclic);
    assert_eq!(grp.invariant_factors(), &[big(6)]);
    assert_eq!(grp.free_rank(), 0);
}

#[test]
fn kernel_examples() {
    let z3 = FgGroup::cyclic(3);
    let sum = GroupHom::new(z3.product(&z3), z3.clone(), IntMatrix::from_i64(1, 2, &[1, 1])).unwrap();
    let count = (0..3).flat_map(|a| (0..3).map(move |b| (a + b) % 3)).filter(|&s| s == 0).count();
    assert_eq!(hom_kernel(&sum).unwrap().group.order(), Some(big(count as i64)));

    let two = GroupHom::new(FgGroup::free(1), FgGroup::free(1), IntMatrix::from_i64(1, 1, &[2])).unwrap();
    let (_, mod4) = induced_maps(&two, 4).unwrap();
    let count = (0..4).filter(|x| 2 * x % 4 == 0).count();
    assert_eq!(hom_kernel(&mod4).unwrap().group.order(), Some(big(count as i64)));
    for x in 0..4 {
        assert_eq!(mod4.apply(&[big(x)]), vec![big(2 * x % 4)]);
    }
}

#[test]
fn field_examples() {
    let f9 = make_field(3, 2).unwrap();
    let t9 = F2::new(3);
    assert_eq!(f9.modulus(), &[t9.c0 as u32, t9.c1 as u32, 1]);
    let u = f9.generator();
    assert_eq!(as_e2(&f9, &f9.mul(&u, &u)), t9.mul((0, 1), (0, 1)));
    assert_eq!(as_e2(&f9, &f9.pow(&u, 4)), t9.pow((0, 1), 4));
    assert_eq!(t9.pow((0, 1), 4), (1, 0));

    let f25 = make_field(5, 2).unwrap();
    let t25 = F2::new(5);
    let g = f25.primitive_element();
    let tg = as_e2(&f25, &g);
    let ord = |x: E2| (1..=24u64).find(|&k| t25.pow(x, k) == (1, 0)).unwrap();
    assert_eq!(ord(tg), 24);
    let g6 = t25.pow(tg, 6);
    assert_eq!(g6.1, 0);
    assert_eq!(ord(g6), 4);
    assert_eq!(as_e2(&f25, &f25.pow(&g, 6)), g6);

    let f5 = make_field(5, 1).unwrap();
    let squares: Vec<i64> = (0..5).map(|x| x * x % 5).collect();
    assert_eq!(f5.is_square(&f5.from_int(2)).is_some(), squares.contains(&2));
}

#[test]
fn counting_examples() {
    for (p, a, b) in [(3, 1, 0), (5, -1, 0)] {
        let n1 = brute_ec_count(p, a, b);
        let c = ec(p as u64, a, b);
        assert_eq!(c.point_count(1).unwrap(), n1);
        let trace = p + 1 - n1 as i64;
        assert_eq!(c.l_polynomial().unwrap(), vec![1, -trace, p]);
    }

    // N_2 of y^2 = x^3 + x over F_9
    let t9 = F2::new(3);
    let rhs = |x: E2| t9.add(t9.mul(t9.mul(x, x), x), x);
    let n2 = 1 + t9.all().iter().map(|&x| t9.all().iter().filter(|&&y| t9.mul(y, y) == rhs(x)).count()).sum::<usize>();
    let n1 = brute_ec_count(3, 1, 0) as usize;
    assert_eq!(ec(3, 1, 0).places_of_degree(2).unwrap().len(), (n2 - n1) / 2);

    let irreducible = (0..3).flat_map(|c0| (0..3).map(move |c1| (c0, c1))).filter(|&(c0, c1)| (0..3).all(|x| (x * x + c1 * x + c0) % 3 != 0)).count();
    assert_eq!(line(3).places_of_degree(2).unwrap().len(), irreducible);
}

#[test]
fn group_law_examples() {
    for (p, a, b) in [(3, 1, 0), (5, -1, 0), (5, 0, 2)] {
        let s = ec(p as u64, a, b).group_structure().unwrap();
        assert_eq!((s.d1, s.d2), ec_shape(p, a.rem_euclid(p), b));
    }
    let c = ec(3, 1, 0);
    let f = c.field().clone();
    let p21 = Point::Affine(f.from_int(2), f.from_int(1));
    let expect = ec_add(3, 1, Some((2, 1)), Some((2, 1))).unwrap();
    assert_eq!(c.add(&p21, &p21).unwrap(), Point::Affine(f.from_int(expect.0), f.from_int(expect.1)));
    assert_eq!(ec_order(3, 1, Some((2, 1))), 4);
    let s = c.group_structure().unwrap();
    assert_eq!(s.order(), 4);
}

#[test]
fn degree_two_place_classes() {
    let c = ec(3, 1, 0);
    let t9 = F2::new(3);
    let add9 = |u: Option<E2x>, v: Option<E2x>| -> Option<E2x> {
        let ((x1, y1), (x2, y2)) = match (u, v) {
            (None, w) | (w, None) => return w,
            (Some(s), Some(t)) => (s, t),
        };
        let l = if x1 == x2 {
            if t9.add(y1, y2) == (0, 0) {
                return None;
            }
            let num = t9.add(t9.mul((3, 0), t9.mul(x1, x1)), (1, 0));
            t9.mul(num, t9.inv(t9.add(y1, y1)))
        } else {
            t9.mul(t9.sub(y2, y1), t9.inv(t9.sub(x2, x1)))
        };
        let x3 = t9.sub(t9.sub(t9.mul(l, l), x1), x2);
        Some((x3, t9.sub(t9.mul(l, t9.sub(x1, x3)), y1)))
    };
    let places = c.places_of_degree(2).unwrap();
    assert!(!places.is_empty());
    for pl in places {
        let f9 = pl.residue_field.clone();
        let Point::Affine(x, y) = pl.points[0] else { panic!("degree-2 place at infinity") };
        let pt = (as_e2(&f9, &x), as_e2(&f9, &y));
        let frob = (t9.pow(pt.0, 3), t9.pow(pt.1, 3));
        let sum = add9(Some(pt), Some(frob));
        let cls = c.place_class(&pl).unwrap();
        assert_eq!(cls.degree, 2);
        let f3 = c.field();
        let got = match cls.point.unwrap() {
            Point::Infinity => None,
            Point::Affine(a, b) => Some(((f3.coeffs(&a)[0] as i64, 0), (f3.coeffs(&b)[0] as i64, 0))),
            Point::Line(_) => unreachable!(),
        };
        if let Some((sx, sy)) = sum {
            assert_eq!((sx.1, sy.1), (0, 0), "P + phi(P) must be rational");
        }
        assert_eq!(got, sum);
    }
}

type E2x = (E2, E2);

#[test]
fn picard_and_units() {
    let e = ec(3, 1, 0);
    assert_eq!(o_infinity(e.clone()).pic().order(), Some(big(brute_ec_count(3, 1, 0) as i64)));
    assert!(laurent(3).pic().is_trivial());

    // S = {inf, (2,1)}: Pic = E / <(2,1)>
    let f = e.field().clone();
    let idx = e
        .places_of_degree(1)
        .unwrap()
        .iter()
        .position(|pl| pl.points[0] == Point::Affine(f.from_int(2), f.from_int(1)))
        .unwrap();
    let d = HasseDomain::from_selectors(e.clone(), &[(1, 0), (1, idx)]).unwrap();
    let ord = ec_order(3, 1, Some((2, 1)));
    assert_eq!(d.pic().order(), Some(big(brute_ec_count(3, 1, 0) as i64 / ord as i64)));
    let u = d.unit_data().unwrap();
    assert_eq!(u.rank, 1);
    let b = ord as i64;
    assert!(u.lattice_basis == vec![vec![big(b), big(-b)]] || u.lattice_basis == vec![vec![big(-b), big(b)]]);

    let u = laurent(3).unit_data().unwrap();
    assert_eq!((u.rank, u.torsion_order), (1, 2));
    assert!(u.lattice_basis == vec![vec![big(1), big(-1)]] || u.lattice_basis == vec![vec![big(-1), big(1)]]);
    let u = o_infinity(e).unit_data().unwrap();
    assert_eq!((u.rank, u.torsion_order), (0, 2));
}

/// Zero-sum tuples over S' (mod m) whose fibre sums over each base place
/// vanish.
fn corestriction_kernel(fibres: &[usize], m: u64) -> usize {
    let n: usize = fibres.iter().sum();
    let mut count = 0;
    let mut x = vec![0u64; n];
    loop {
        let total: u64 = x.iter().sum();
        let mut start = 0;
        let mut ok = total % m == 0;
        for &f in fibres {
            ok &= x[start..start + f].iter().sum::<u64>() % m == 0;
            start += f;
        }
        if ok {
            count += 1;
        }
        let mut i = 0;
        while i < n && x[i] == m - 1 {
            x[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
        x[i] += 1;
    }
}

#[test]
fn norm_n2_examples() {
    let l7 = line(7);
    let d7 = HasseDomain::from_selectors(l7, &[(1, 0), (1, 1)]).unwrap();
    let c7 = CoverDescriptor::constant_extension(&d7, 2).unwrap();
    let n2 = c7.norm_n2(3).unwrap();
    assert_eq!(hom_kernel(&n2).unwrap().group.order(), Some(big(corestriction_kernel(&[1, 1], 3) as i64)));

    let d5 = HasseDomain::from_selectors(line(5), &[(2, 0), (1, 0)]).unwrap();
    let c5 = CoverDescriptor::constant_extension(&d5, 2).unwrap();
    assert_eq!(c5.cover_s_size(), 3);
    let n2 = c5.norm_n2(2).unwrap();
    let expect = corestriction_kernel(&[2, 1], 2);
    assert_eq!(expect, 2);
    assert_eq!(hom_kernel(&n2).unwrap().group.order(), Some(big(expect as i64)));
    assert!(oracle_kernels(&n2).passed());

    let one = CoverDescriptor::constant_extension(&o_infinity(ec(3, 1, 0)), 2).unwrap();
    assert_eq!(one.cover_s_size(), 1);
    assert_eq!(one.fibers()[0].residue_degree, 2);
    assert_eq!(one.cover().curve().field().q(), 9);
}

#[test]
fn norm_n1_zero_for_explicit_cover() {
    let c = elliptic_cover_line5();
    assert_eq!(c.base().pic().order(), Some(big(1)));
    assert!(c.norm_n1().unwrap().is_zero());
}

/// Norm on constants inside Z/(q'-1) (exponents of a generator g): x maps
/// to x·e with e = (q'-1)/(q-1), landing in the subgroup eZ of exponents of
/// F_q^x. Returns |ker on m-torsion| and |ker mod m-th powers|.
fn cyclic_norm(qc: i64, q: i64, m: i64) -> (usize, usize) {
    let a = qc - 1;
    let e = a / (q - 1);
    let kt = (0..a).filter(|x| (x * m) % a == 0 && (x * e) % a == 0).count();
    // x*e is an m-th power in F_q^x iff x*e = m*e*y for some y
    let in_ker = |x: i64| (0..a).any(|y| (x * e - m * e * y).rem_euclid(a) == 0);
    let powers = a / gcd(a, m);
    let km = (0..a).filter(|&x| in_ker(x)).count() as i64 / powers;
    (kt, km as usize)
}

#[test]
fn norm_n0_examples() {
    for (qc, q, m) in [(16, 4, 3), (9, 3, 2)] {
        let (kt, km) = cyclic_norm(qc, q, m);
        let n0 = norm_n0_cyclic(qc as u64, q as u64, 2, 2, m as u64, true).unwrap();
        assert_eq!(n0.ker_torsion.order(), Some(big(kt as i64)));
        assert_eq!(n0.ker_mod.unwrap().order(), Some(big(km as i64)));
        // raw l value
        let _ = BigRational::new(big(kt as i64), big(km as i64));
    }
    assert_eq!(cyclic_norm(16, 4, 3), (1, 1));
    assert_eq!(cyclic_norm(9, 3, 2), (2, 1));
}

#[test]
fn i_j_l_h_examples() {
    let o3 = o_infinity(ec(3, 1, 0));
    let mu2 = FundGroup::new(vec![Factor::res_mu(CoverDescriptor::identity(&o3), 2)]);
    let e2 = ec_killed_by(3, 1, 0, 2) as i64;
    // finite Pic: |Pic / 2| = |Pic[2]|
    assert_eq!(mu2.j_group().unwrap().order(), Some(big(e2)));
    let h0 = (1..3).filter(|x| x * x % 3 == 1).count() as i64;
    assert_eq!(mu2.h_vector().unwrap(), [big(h0), big(h0 * e2), big(e2)]);
    assert_eq!(mu2.chi().unwrap(), BigRational::new(big(h0 * e2), big(h0 * e2)));

    let l3 = laurent(3);
    let mu2 = FundGroup::new(vec![Factor::res_mu(CoverDescriptor::identity(&l3), 2)]);
    // units F_3^x x Z, Pic trivial, Br[2] of order 2
    let br = corestriction_kernel(&[2], 2) as i64;
    assert_eq!(mu2.h_vector().unwrap(), [big(h0), big(h0 * 2), big(br)]);
    assert_eq!(mu2.l_value().unwrap(), BigRational::new(big(1), big(2)));
    assert_eq!(mu2.chi().unwrap(), mu2.l_value().unwrap() * BigRational::from_integer(big(br)));

    let res1 = FundGroup::new(vec![Factor::res_one_mu(elliptic_cover_line5(), 3)]);
    let e3 = ec_killed_by(5, 0, 2, 3) as i64;
    assert_eq!(res1.j_group().unwrap().order(), Some(big(e3)));
    assert_eq!(e3, 3);

    let d7 = HasseDomain::from_selectors(line(7), &[(1, 0), (1, 1)]).unwrap();
    let c7 = CoverDescriptor::constant_extension(&d7, 2).unwrap();
    let f = FundGroup::new(vec![Factor::res_one_mu(c7, 3)]);
    assert_eq!(f.i_group().unwrap().order(), Some(big(corestriction_kernel(&[1, 1], 3) as i64)));
}

#[test]
fn verdict_examples() {
    let o3 = o_infinity(ec(3, 1, 0));
    let pgl2 = GroupSpec::new(Dynkin::Pgl(2), Isogeny::Adjoint, o3.clone(), None, Some(true), None).unwrap();
    let e2 = ec_killed_by(3, 1, 0, 2);
    assert_eq!(groups::class_number(&pgl2).unwrap(), ClassNumber::Exact(big(e2 as i64)));
    let even = brute_ec_count(3, 1, 0) % 2 == 0;
    assert_eq!(groups::hasse_verdict(&pgl2).unwrap().outcome == HasseOutcome::Fails, even);

    let d5 = GroupSpec::new(Dynkin::D(5), Isogeny::Adjoint, o3, None, None, None).unwrap();
    let e4 = ec_killed_by(3, 1, 0, 4) as i64;
    assert_eq!(groups::h1_size(&d5).unwrap(), big(e4));

    assert_eq!(groups::h1_size(&laurent_spec(Dynkin::B(4), None)).unwrap(), big(corestriction_kernel(&[2], 2) as i64));
    assert_eq!(groups::genera_count(&laurent_spec(Dynkin::Pgl(2), Some(true))).unwrap(), big(2));

    let base = o_infinity(line(5));
    let res = GroupSpec::new(Dynkin::ResPgl(3), Isogeny::Adjoint, base, Some(elliptic_cover_line5()), Some(true), None).unwrap();
    let e3 = ec_killed_by(5, 0, 2, 3) as i64;
    assert_eq!(groups::class_number(&res).unwrap(), ClassNumber::Exact(big(e3)));
    let coprime = gcd(brute_ec_count(5, 0, 2) as i64, 3) == 1;
    assert_eq!(groups::hasse_verdict(&res).unwrap().outcome == HasseOutcome::Holds, coprime);
}

#[test]
fn quasi_split_2d_tamagawa() {
    // inf of degree 2 on the line over F_5 splits in the quadratic constant
    // extension: |S'| = gcd(2, 2)
    let base = HasseDomain::from_selectors(line(5), &[(2, 0)]).unwrap();
    let cover = CoverDescriptor::constant_extension(&base, 2).unwrap();
    let s_prime = gcd(2, 2);
    assert_eq!(cover.cover_s_size() as i64, s_prime);
    let q_cover = 25;
    // |R^x[2]| / [R^x : (R^x)^2] = g / (g * 2^{|S'|-1}), g = gcd(2, q' - 1)
    let g = gcd(2, q_cover - 1);
    let f_order = 4;
    let tau = BigRational::new(big(g * f_order), big(g * 2i64.pow(s_prime as u32 - 1)));
    let spec = GroupSpec::new(Dynkin::OuterD(4), Isogeny::Adjoint, base, Some(cover), None, Some(true)).unwrap();
    let t = groups::tamagawa(&spec).unwrap();
    assert_eq!(t.tau, tau);
    assert_eq!(t.crosscheck_ok(), Some(true));
}

#[test]
fn curve_debug_display_is_stable() {
    let c: Curve = ec(5, 0, 2);
    assert_eq!(c.to_string(), c.describe());
}
