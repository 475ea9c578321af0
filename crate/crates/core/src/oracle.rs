//! Brute-force verifiers. Each oracle redoes its computation with its own
//! arithmetic (naive polynomial field arithmetic, repeated addition,
//! exhaustive enumeration, cofactor determinants) and compares against the
//! main implementation.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::abgroup::{hom_kernel, smith_normal_form, GroupHom, IntMatrix};
use crate::curve::{Curve, CurveKind};
use crate::finitefield::FieldSpec;

pub const MAX_ORACLE_POINTS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub subject: String,
    pub instances: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    fn new(subject: &str) -> Self {
        OracleReport { subject: subject.to_string(), instances: 0, mismatches: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.mismatches.push(what());
        }
    }

    pub fn merge(&mut self, other: OracleReport) {
        self.instances += other.instances;
        self.mismatches.extend(other.mismatches);
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} instances, {} mismatches", self.subject, self.instances, self.mismatches.len())?;
        for m in &self.mismatches {
            write!(f, "\n  {}", m)?;
        }
        Ok(())
    }
}

/// `F_p[u]/(modulus)` with schoolbook multiplication and elements stored as
/// plain coefficient vectors.
#[derive(Clone, Debug)]
struct Gf {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

type G = Vec<u64>;

impl Gf {
    fn new(spec: &FieldSpec) -> Self {
        Gf { p: spec.p(), k: spec.k(), modulus: spec.modulus().iter().map(|&c| c as u64).collect() }
    }

    fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    fn nth(&self, mut i: u64) -> G {
        let mut v = vec![0; self.k];
        for c in v.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        v
    }

    fn rank(&self, x: &G) -> u64 {
        x.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn constant(&self, c: u64) -> G {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        v
    }

    fn add(&self, x: &G, y: &G) -> G {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.p).collect()
    }

    fn sub(&self, x: &G, y: &G) -> G {
        x.iter().zip(y).map(|(a, b)| (a + self.p - b) % self.p).collect()
    }

    fn mul(&self, x: &G, y: &G) -> G {
        let mut prod = vec![0u64; 2 * self.k];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % self.p;
            }
        }
        for top in (self.k..2 * self.k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..self.k {
                let sub = c * self.modulus[j] % self.p;
                let t = top - self.k + j;
                prod[t] = (prod[t] + self.p - sub) % self.p;
            }
        }
        prod.truncate(self.k);
        prod
    }

    fn pow(&self, x: &G, mut e: u64) -> G {
        let mut acc = self.constant(1);
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, x: &G) -> G {
        self.pow(x, self.size() - 2)
    }

    fn is_zero(&self, x: &G) -> bool {
        x.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Pt {
    O,
    A(G, G),
}

struct Ec {
    f: Gf,
    a: G,
    b: G,
}

impl Ec {
    fn rhs(&self, x: &G) -> G {
        let f = &self.f;
        let x3 = f.mul(&f.mul(x, x), x);
        f.add(&f.add(&x3, &f.mul(&self.a, x)), &self.b)
    }

    fn add(&self, p: &Pt, q: &Pt) -> Pt {
        let f = &self.f;
        let (x1, y1, x2, y2) = match (p, q) {
            (Pt::O, _) => return q.clone(),
            (_, Pt::O) => return p.clone(),
            (Pt::A(x1, y1), Pt::A(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Pt::O;
            }
            let num = f.add(&f.mul(&f.constant(3), &f.mul(x1, x1)), &self.a);
            f.mul(&num, &f.inv(&f.add(y1, y1)))
        } else {
            f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)))
        };
        let x3 = f.sub(&f.sub(&f.mul(&lambda, &lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Pt::A(x3, y3)
    }

    fn points(&self) -> Vec<Pt> {
        let n = self.f.size();
        let mut out = vec![Pt::O];
        for i in 0..n {
            let x = self.f.nth(i);
            let r = self.rhs(&x);
            for j in 0..n {
                let y = self.f.nth(j);
                if self.f.mul(&y, &y) == r {
                    out.push(Pt::A(x.clone(), y));
                }
            }
        }
        out
    }
}

/// Some root of `poly` (low-first coefficients over F_p) inside `f`.
fn root_in(f: &Gf, poly: &[u64]) -> Option<G> {
    (0..f.size()).map(|i| f.nth(i)).find(|x| {
        let v = poly.iter().rev().fold(f.constant(0), |acc, &c| f.add(&f.mul(&acc, x), &f.constant(c)));
        f.is_zero(&v)
    })
}

fn embed(f: &Gf, root: &G, coeffs: &[u32]) -> G {
    let mut acc = f.constant(0);
    let mut pw = f.constant(1);
    for &c in coeffs {
        acc = f.add(&acc, &f.mul(&pw, &f.constant(c as u64)));
        pw = f.mul(&pw, root);
    }
    acc
}

fn ec_model(curve: &Curve) -> Option<Ec> {
    let (a, b) = curve.coefficients()?;
    let spec = curve.field();
    let f = Gf::new(spec);
    let (a, b) = (spec.coeffs(&a)[..f.k].iter().map(|&c| c as u64).collect(), spec.coeffs(&b)[..f.k].iter().map(|&c| c as u64).collect());
    Some(Ec { f, a, b })
}

pub fn oracle_ec_structure(curve: &Curve) -> OracleReport {
    let mut rep = OracleReport::new(&format!("ec_structure {}", curve));
    let Some(ec) = ec_model(curve) else {
        rep.check(false, || "not an elliptic curve".into());
        return rep;
    };
    let q = ec.f.size();
    if q + 1 + 2 * ((q as f64).sqrt() as u64 + 1) > MAX_ORACLE_POINTS {
        rep.check(false, || format!("curve over F_{} exceeds the oracle bound", q));
        return rep;
    }
    let pts = ec.points();
    let n = pts.len() as u64;
    let mut orders = Vec::with_capacity(pts.len());
    for p in &pts {
        let mut acc = p.clone();
        let mut k = 1u64;
        while acc != Pt::O {
            acc = ec.add(&acc, p);
            k += 1;
        }
        orders.push(k);
    }
    let exponent = *orders.iter().max().unwrap();
    let d1 = n / exponent;
    // Z/d1 x Z/d2 has exactly d1^2 points killed by d1
    let killed = orders.iter().filter(|&&o| d1 % o == 0).count() as u64;
    rep.check(killed == d1 * d1 && exponent % d1 == 0, || {
        format!("order statistics do not fit Z/{} x Z/{}", d1, exponent)
    });
    match curve.group_structure() {
        Ok(s) => {
            rep.check(s.order() == n, || format!("|E| = {} by enumeration, {} by group_structure", n, s.order()));
            rep.check((s.d1, s.d2) == (d1, exponent), || {
                format!("(d1, d2) = ({}, {}) by enumeration, ({}, {}) by group_structure", d1, exponent, s.d1, s.d2)
            });
        }
        Err(e) => rep.check(false, || format!("group_structure failed: {}", e)),
    }
    // closure: sums of points stay on the curve
    let set: HashSet<&Pt> = pts.iter().collect();
    let step = (pts.len() / 16).max(1);
    for p in pts.iter().step_by(step) {
        for q in pts.iter().step_by(step) {
            let s = ec.add(p, q);
            rep.check(set.contains(&s), || format!("{:?} + {:?} left the curve", p, q));
        }
    }
    rep
}

pub fn oracle_zeta(curve: &Curve, d_max: usize) -> OracleReport {
    let mut rep = OracleReport::new(&format!("zeta {} d<={}", curve, d_max));
    let base = curve.field();
    let q = base.q() as i128;
    let (genus, trace): (i128, i128) = match curve.l_polynomial() {
        Ok(l) if l.len() == 3 => (1, -(l[1] as i128)),
        Ok(_) => (0, 0),
        Err(e) => {
            rep.check(false, || format!("l_polynomial failed: {}", e));
            return rep;
        }
    };
    // s_d = alpha^d + beta^d from s_d = a s_{d-1} - q s_{d-2}
    let mut s = vec![2 * genus, trace];
    for d in 2..=d_max {
        s.push(trace * s[d - 1] - q * s[d - 2]);
    }
    for d in 1..=d_max {
        let predicted = q.pow(d as u32) + 1 - s[d];
        let ext = match base.extension(d) {
            Ok(e) => e,
            Err(e) => {
                rep.check(false, || format!("F_{}^{} unavailable: {}", q, d, e));
                continue;
            }
        };
        let f = Gf::new(&ext);
        let direct = match curve.kind() {
            CurveKind::ProjectiveLine => (0..f.size()).count() as i128 + 1,
            CurveKind::Elliptic { .. } => {
                let (a, b) = curve.coefficients().unwrap();
                let root = match base.k() {
                    1 => f.constant(0),
                    _ => root_in(&f, &Gf::new(base).modulus).expect("subfield modulus splits"),
                };
                let ec = Ec { a: embed(&f, &root, &base.coeffs(&a)[..base.k()]), b: embed(&f, &root, &base.coeffs(&b)[..base.k()]), f };
                let mut squares = vec![0u32; ec.f.size() as usize];
                for i in 0..ec.f.size() {
                    let y = ec.f.nth(i);
                    squares[ec.f.rank(&ec.f.mul(&y, &y)) as usize] += 1;
                }
                let affine: i128 =
                    (0..ec.f.size()).map(|i| squares[ec.f.rank(&ec.rhs(&ec.f.nth(i))) as usize] as i128).sum();
                affine + 1
            }
        };
        rep.check(direct == predicted, || format!("N_{}: enumeration {} vs L-polynomial {}", d, direct, predicted));
        match curve.point_count(d) {
            Ok(n) => rep.check(n as i128 == direct, || format!("N_{}: enumeration {} vs point_count {}", d, direct, n)),
            Err(e) => rep.check(false, || format!("point_count({}) failed: {}", d, e)),
        }
    }
    rep
}

fn all_elements(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &m in moduli {
        out = out.into_iter().flat_map(|v| (0..m).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn small(x: &BigInt) -> Option<u64> {
    u64::try_from(x).ok()
}

pub fn oracle_kernels(hom: &GroupHom) -> OracleReport {
    let mut rep = OracleReport::new("kernels");
    let dom = hom.domain();
    let cod = hom.codomain();
    let too_big = dom.order().map_or(true, |o| o > BigInt::from(MAX_ORACLE_POINTS));
    if too_big || !cod.invariant_factors().iter().all(|d| small(d).is_some()) {
        rep.check(false, || "domain is infinite or too large for exhaustive enumeration".into());
        return rep;
    }
    let dmod: Vec<u64> = dom.invariant_factors().iter().map(|d| small(d).unwrap()).collect();
    let cmod: Vec<i128> = (0..cod.ngens()).map(|i| small(&cod.modulus(i)).map_or(0, |v| v as i128)).collect();
    let mat = hom.matrix();
    let image = |x: &[u64]| -> Vec<i128> {
        (0..cod.ngens())
            .map(|r| {
                let v: i128 = (0..x.len()).map(|c| i128::try_from(mat.get(r, c)).unwrap() * x[c] as i128).sum();
                if cmod[r] == 0 { v } else { v.rem_euclid(cmod[r]) }
            })
            .collect()
    };
    let kernel: HashSet<Vec<u64>> =
        all_elements(&dmod).into_iter().filter(|x| image(x).iter().all(|&c| c == 0)).collect();
    let sub = match hom_kernel(hom) {
        Ok(s) => s,
        Err(e) => {
            rep.check(false, || format!("hom_kernel failed: {}", e));
            return rep;
        }
    };
    let claimed = sub.group.order().unwrap_or_default();
    rep.check(claimed == BigInt::from(kernel.len()), || {
        format!("kernel order {} by enumeration, {} claimed", kernel.len(), claimed)
    });
    // the embedded subgroup is exactly the enumerated kernel
    let smod: Vec<u64> = sub.group.invariant_factors().iter().map(|d| small(d).unwrap_or(1)).collect();
    let emb = sub.embedding.matrix();
    let mut hit = HashSet::new();
    for y in all_elements(&smod) {
        let x: Vec<u64> = (0..dmod.len())
            .map(|r| {
                let v: i128 = (0..y.len()).map(|c| i128::try_from(emb.get(r, c)).unwrap() * y[c] as i128).sum();
                v.rem_euclid(dmod[r] as i128) as u64
            })
            .collect();
        hit.insert(x);
    }
    rep.check(hit == kernel, || format!("embedded kernel has {} elements, enumeration {}", hit.len(), kernel.len()));
    rep
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect()).collect();
                let t = &m[0][j] * det(&minor);
                if j % 2 == 0 { t } else { -t }
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

fn mat_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn naive_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
        .collect()
}

/// Certifies one Smith form; returns the failures found.
pub fn certify_snf(m: &IntMatrix) -> Vec<String> {
    let mut bad = Vec::new();
    let (r, c) = (m.rows(), m.cols());
    let s = smith_normal_form(m);
    let (u, d, v) = (mat_rows(&s.u), mat_rows(&s.d), mat_rows(&s.v));
    let a = mat_rows(m);
    if naive_mul(&naive_mul(&u, &a, r, c), &v, c, c) != d {
        bad.push(format!("U M V != D for {}", m));
    }
    if det(&u).abs() != BigInt::one() || det(&v).abs() != BigInt::one() {
        bad.push(format!("U or V not unimodular for {}", m));
    }
    for i in 0..r {
        for j in 0..c {
            if i != j && !d[i][j].is_zero() {
                bad.push(format!("D not diagonal for {}", m));
            }
        }
    }
    let diag: Vec<BigInt> = (0..r.min(c)).map(|i| d[i][i].clone()).collect();
    if diag.iter().any(|x| x.is_negative()) {
        bad.push(format!("negative invariant factor for {}", m));
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok {
            bad.push(format!("divisibility chain broken at {} | {} for {}", w[0], w[1], m));
        }
    }
    // d_1 ... d_i = gcd of i x i minors
    let mut prefix = BigInt::one();
    for i in 1..=r.min(c) {
        prefix *= &diag[i - 1];
        let mut g = BigInt::zero();
        for rows in subsets(r, i) {
            for cols in subsets(c, i) {
                let sub: Vec<Vec<BigInt>> = rows.iter().map(|&x| cols.iter().map(|&y| a[x][y].clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g != prefix {
            bad.push(format!("minor gcd {} != d_1..d_{} = {} for {}", g, i, prefix, m));
        }
    }
    bad
}

/// Samples `samples` matrices of every shape up to `max_dim` x `max_dim`.
pub fn oracle_snf(max_dim: usize, entry_bound: i64, samples: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::new(&format!("snf dim<={} |a|<={}", max_dim, entry_bound));
    let mut rng = StdRng::seed_from_u64(seed);
    for t in 0..samples {
        let rows = rng.gen_range(1..=max_dim);
        let cols = rng.gen_range(1..=max_dim);
        let data: Vec<i64> = (0..rows * cols)
            .map(|_| if t % 7 == 0 && rng.gen_bool(0.5) { 0 } else { rng.gen_range(-entry_bound..=entry_bound) })
            .collect();
        let m = IntMatrix::from_i64(rows, cols, &data);
        let bad = certify_snf(&m);
        rep.instances += 1;
        rep.mismatches.extend(bad);
    }
    rep
}
