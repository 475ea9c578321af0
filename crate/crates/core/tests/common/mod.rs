#![allow(dead_code)]

use hassegen::curve::{Curve, Point};
use hassegen::finitefield::make_field;
use hassegen::fundgroup::{Factor, FundGroup};
use hassegen::hassedomain::{CoverDescriptor, HasseDomain};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ec(p: u64, a: i64, b: i64) -> Curve {
    let f = make_field(p, 1).unwrap();
    let (a, b) = (f.from_int(a), f.from_int(b));
    Curve::elliptic(f, a, b).unwrap()
}

pub fn line(p: u64) -> Curve {
    Curve::projective_line(make_field(p, 1).unwrap())
}

/// `F_q[t, 1/t]`: S = {∞, 0} on the line.
pub fn laurent(p: u64) -> HasseDomain {
    let l = line(p);
    let zero = l
        .places_of_degree(1)
        .unwrap()
        .iter()
        .position(|pl| pl.points[0] == Point::Line(l.field().zero()))
        .unwrap();
    HasseDomain::from_selectors(l, &[(1, 0), (1, zero)]).unwrap()
}

pub fn o_infinity(curve: Curve) -> HasseDomain {
    HasseDomain::from_selectors(curve, &[(1, 0)]).unwrap()
}

/// Affine count of y^2 = x^3 + ax + b over F_p plus the point at infinity,
/// by plain modular arithmetic.
pub fn brute_ec_count(p: i64, a: i64, b: i64) -> u64 {
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            if (y * y - x * x * x - a * x - b).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

pub fn nonsingular(p: i64, a: i64, b: i64) -> bool {
    (4 * a * a * a + 27 * b * b).rem_euclid(p) != 0
}

pub fn random_curve(rng: &mut StdRng, p: u64) -> Curve {
    if rng.gen_bool(0.3) {
        return line(p);
    }
    loop {
        let (a, b) = (rng.gen_range(0..p as i64), rng.gen_range(0..p as i64));
        if nonsingular(p as i64, a, b) {
            return ec(p, a, b);
        }
    }
}

/// Up to three distinct places of degree at most 2.
pub fn random_domain(rng: &mut StdRng, p: u64) -> HasseDomain {
    let c = random_curve(rng, p);
    let mut sel = Vec::new();
    for d in 1..=2 {
        for i in 0..c.places_of_degree(d).unwrap().len() {
            sel.push((d, i));
        }
    }
    sel.shuffle(rng);
    let s = rng.gen_range(1..=3usize.min(sel.len()));
    sel.truncate(s);
    HasseDomain::from_selectors(c, &sel).unwrap()
}

/// Random admissible fundamental group over curves on F_3, F_5, F_7 with
/// |S| <= 3, m <= 6 and constant-field covers of degree <= 3. Cover
/// degrees keep `deg(place) * d <= 4` so place lookup stays cheap.
pub fn random_admissible(rng: &mut StdRng) -> (HasseDomain, FundGroup) {
    let p = *[3u64, 5, 7].choose(rng).unwrap();
    let dom = random_domain(rng, p);
    let ms: Vec<u64> = (2..=6).filter(|m| m % p != 0).collect();
    let emax = dom.places().iter().map(|pl| pl.degree).max().unwrap();
    let degrees: Vec<usize> = (2..=3).filter(|d| d * emax <= 4).collect();
    let mut factors = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let m = *ms.choose(rng).unwrap();
        let f = match rng.gen_range(0..3) {
            0 => Factor::res_mu(CoverDescriptor::identity(&dom), m),
            1 => {
                let d = *degrees.choose(rng).unwrap();
                Factor::res_mu(CoverDescriptor::constant_extension(&dom, d).unwrap(), m)
            }
            _ => {
                let ds: Vec<usize> = degrees.iter().copied().filter(|&d| (d as u64).gcd(&m) == 1).collect();
                match ds.choose(rng) {
                    Some(&d) => Factor::res_one_mu(CoverDescriptor::constant_extension(&dom, d).unwrap(), m),
                    None => Factor::res_mu(CoverDescriptor::identity(&dom), m),
                }
            }
        };
        factors.push(f);
    }
    let fg = FundGroup::new(factors);
    assert!(fg.is_admissible(), "{}", fg);
    (dom, fg)
}
