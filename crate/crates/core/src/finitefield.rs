//! Small finite fields `F_{p^k}` in odd characteristic.
//!
//! A field is a context object ([`FieldSpec`]) and elements are plain
//! coefficient vectors ([`FFElem`]) in the power basis of the field's
//! modulus. Comparing elements compares coefficient tuples low degree first.

use std::fmt;

use crate::error::{Error, Result};

/// Largest extension degree over the prime field (3^12 < 2^20 < 3^13).
pub const MAX_DEGREE: usize = 12;
/// Default ceiling on field sizes.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;
pub const FIELD_BOUND_VAR: &str = "HASSEGEN_FIELD_BOUND";

/// The active bound on `q`. The environment may lower it, never raise it.
pub fn field_bound() -> u64 {
    std::env::var(FIELD_BOUND_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .map_or(DEFAULT_FIELD_BOUND, |b| b.min(DEFAULT_FIELD_BOUND))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FFElem([u32; MAX_DEGREE]);

impl FFElem {
    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: usize,
    q: u64,
    // monic, length k + 1, low degree first
    modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `p^k`, or `None` once it passes `limit`.
pub fn checked_power(p: u64, k: usize, limit: u64) -> Option<u64> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.checked_mul(p)?;
        if q > limit {
            return None;
        }
    }
    Some(q)
}

pub fn make_field(p: u64, k: usize) -> Result<FieldSpec> {
    if p == 2 {
        return Err(Error::UnsupportedField("unsupported characteristic 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::UnsupportedField(format!("{} is not a prime", p)));
    }
    if k == 0 {
        return Err(Error::UnsupportedField("extension degree must be at least 1".into()));
    }
    let bound = field_bound();
    let q = match checked_power(p, k, bound) {
        Some(q) if k <= MAX_DEGREE => q,
        _ => {
            return Err(Error::UnsupportedField(format!(
                "{}^{} exceeds the field size bound {}",
                p, k, bound
            )))
        }
    };
    let p32 = p as u32;
    Ok(FieldSpec { p: p32, k, q, modulus: smallest_irreducible(p32, k) })
}

// Monic irreducible of degree k whose coefficient tuple (c_0, ..., c_{k-1})
// is lexicographically least.
fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut c = vec![0u32; k];
    loop {
        if c[0] != 0 {
            let mut f: Vec<u64> = c.iter().map(|&x| x as u64).collect();
            f.push(1);
            if rabin_irreducible(&f, p as u64) {
                let mut m: Vec<u32> = c.clone();
                m.push(1);
                return m;
            }
        }
        // c_{k-1} is the fastest digit
        let mut i = k;
        loop {
            i -= 1;
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
        }
    }
}

mod poly {
    // Dense polynomials over F_p, low degree first, no trailing zeros.

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = super::pow_mod(f[df], p - 2, p);
        while r.len() > df {
            let t = r[r.len() - 1] * lead_inv % p;
            let shift = r.len() - 1 - df;
            for (i, &c) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - t * c % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, f, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(&mut out);
        out
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// Rabin's test: f | x^{p^k} - x and gcd(x^{p^{k/r}} - x, f) = 1 for primes r | k.
fn rabin_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let x = vec![0u64, 1];
    let mut frob = vec![x.clone()];
    for _ in 0..k {
        let next = poly::powmod(frob.last().unwrap(), p, f, p);
        frob.push(next);
    }
    if poly::sub(&frob[k], &poly::rem(&x, f, p), p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = poly::sub(&frob[k / r as usize], &x, p);
        poly::gcd(&h, f, p).len() == 1
    })
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Modulus written as a polynomial in `u`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{}", i),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{}{}", c, mono),
            });
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> FFElem {
        FFElem::default()
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FFElem {
        let mut e = FFElem::default();
        e.0[0] = n.rem_euclid(self.p as i64) as u32;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FFElem> {
        if coeffs.len() > self.k {
            return Err(Error::FieldMismatch(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.k
            )));
        }
        let mut e = FFElem::default();
        for (i, &c) in coeffs.iter().enumerate() {
            e.0[i] = c.rem_euclid(self.p as i64) as u32;
        }
        Ok(e)
    }

    /// The class of `u`, a root of the modulus.
    pub fn generator(&self) -> FFElem {
        if self.k == 1 {
            // u = -modulus[0] = 0 for the modulus x
            return self.zero();
        }
        let mut e = FFElem::default();
        e.0[1] = 1;
        e
    }

    pub fn coeffs<'a>(&self, x: &'a FFElem) -> &'a [u32] {
        &x.0[..self.k]
    }

    pub fn is_zero(&self, x: &FFElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn is_prime_field_elem(&self, x: &FFElem) -> bool {
        x.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut out = FFElem::default();
        for i in 0..self.k {
            let s = a.0[i] + b.0[i];
            out.0[i] = if s >= self.p { s - self.p } else { s };
        }
        out
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        let mut out = FFElem::default();
        for i in 0..self.k {
            out.0[i] = if a.0[i] == 0 { 0 } else { self.p - a.0[i] };
        }
        out
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.p as u64;
        let k = self.k;
        if k == 1 {
            let mut out = FFElem::default();
            out.0[0] = (a.0[0] as u64 * b.0[0] as u64 % p) as u32;
            return out;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            let x = a.0[i] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x * b.0[j] as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let c = self.modulus[j] as u64;
                if c != 0 {
                    prod[i - k + j] = (prod[i - k + j] + (p - t) * c) % p;
                }
            }
        }
        let mut out = FFElem::default();
        for i in 0..k {
            out.0[i] = prod[i] as u32;
        }
        out
    }

    pub fn square(&self, a: &FFElem) -> FFElem {
        self.mul(a, a)
    }

    pub fn scale(&self, a: &FFElem, n: i64) -> FFElem {
        self.mul(a, &self.from_int(n))
    }

    pub fn pow(&self, a: &FFElem, mut e: u64) -> FFElem {
        let mut acc = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FFElem) -> Result<FFElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FFElem) -> Result<u64> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let mut n = self.q - 1;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow(a, n / r) == self.one() {
                n /= r;
            }
        }
        Ok(n)
    }

    /// First element in index order generating the multiplicative group.
    pub fn primitive_element(&self) -> FFElem {
        (1..self.q as usize)
            .map(|i| self.from_index(i))
            .find(|x| self.order(x).ok() == Some(self.q - 1))
            .expect("finite fields have cyclic unit groups")
    }

    /// Square root test; the root returned is the smaller of `±y`.
    pub fn is_square(&self, a: &FFElem) -> Option<FFElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.pow(a, (self.q - 1) / 2) != self.one() {
            return None;
        }
        let r = self.tonelli_shanks(a);
        let nr = self.neg(&r);
        Some(if nr < r { nr } else { r })
    }

    fn tonelli_shanks(&self, a: &FFElem) -> FFElem {
        let mut s = 0;
        let mut t = self.q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (1..self.q as usize)
            .map(|i| self.from_index(i))
            .find(|x| self.pow(x, (self.q - 1) / 2) != self.one())
            .expect("odd fields contain nonsquares");
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut tt = self.pow(a, t);
        let mut r = self.pow(a, (t + 1) / 2);
        let one = self.one();
        while tt != one {
            let mut i = 0;
            let mut x = tt;
            while x != one {
                x = self.square(&x);
                i += 1;
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        r
    }

    /// Base-`p` index, `c_0 + c_1 p + ...`.
    pub fn index(&self, a: &FFElem) -> usize {
        let mut idx = 0usize;
        for i in (0..self.k).rev() {
            idx = idx * self.p as usize + a.0[i] as usize;
        }
        idx
    }

    pub fn from_index(&self, mut idx: usize) -> FFElem {
        let mut e = FFElem::default();
        for i in 0..self.k {
            e.0[i] = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.q as usize).map(move |i| self.from_index(i))
    }

    /// Table of squares by index: `table[index(x)]` is a square root of `x` when one exists.
    pub fn sqrt_table(&self) -> Vec<Option<FFElem>> {
        let mut table = vec![None; self.q as usize];
        for y in self.elements() {
            let idx = self.index(&self.square(&y));
            match table[idx] {
                Some(old) if old <= y => {}
                _ => table[idx] = Some(y),
            }
        }
        table
    }

    /// Evaluates a polynomial with coefficients in this field, low degree first.
    pub fn eval_poly(&self, coeffs: &[FFElem], x: &FFElem) -> FFElem {
        coeffs.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn format(&self, a: &FFElem) -> String {
        if self.k == 1 {
            return a.0[0].to_string();
        }
        let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// `F_{q^d}` with the canonical modulus.
    pub fn extension(&self, d: usize) -> Result<FieldSpec> {
        make_field(self.p as u64, self.k * d)
    }

    pub fn contains_subfield(&self, sub: &FieldSpec) -> bool {
        sub.p == self.p && self.k % sub.k == 0
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.q)
        } else {
            write!(f, "F_{} = F_{}[u]/({})", self.q, self.p, self.modulus_string())
        }
    }
}

/// A field embedding `src -> dst`, fixed by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldSpec,
    dst: FieldSpec,
    // images of 1, u, ..., u^{k-1}
    basis: Vec<FFElem>,
    // reduced echelon data for restriction: (pivot coordinate, row, source combination)
    echelon: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Embedding {
    /// Embedding sending `u` to the least root of the source modulus.
    pub fn new(src: &FieldSpec, dst: &FieldSpec) -> Result<Self> {
        if src == dst {
            return Ok(Self::identity(src));
        }
        let roots = Self::roots(src, dst)?;
        Ok(Self::from_root(src, dst, roots[0]))
    }

    /// The least root whose embedding agrees with `to_dst` on the common
    /// subfield, so that `self ∘ to_src == to_dst`.
    pub fn compatible(src: &FieldSpec, dst: &FieldSpec, to_src: &Embedding, to_dst: &Embedding) -> Result<Self> {
        if to_src.dst != *src || to_dst.dst != *dst || to_src.src != to_dst.src {
            return Err(Error::FieldMismatch("embeddings do not share a base field".into()));
        }
        let base_gen = to_src.src.generator();
        let target = to_dst.map(&base_gen);
        for r in Self::roots(src, dst)? {
            let e = Self::from_root(src, dst, r);
            if e.map(&to_src.map(&base_gen)) == target {
                return Ok(e);
            }
        }
        Err(Error::FieldMismatch("no compatible embedding exists".into()))
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Self::from_root(field, field, field.generator())
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &Embedding) -> Result<Embedding> {
        if self.dst != outer.src {
            return Err(Error::FieldMismatch("embeddings do not compose".into()));
        }
        let root = outer.map(&self.map(&self.src.generator()));
        Ok(Self::from_root(&self.src, &outer.dst, root))
    }

    /// All roots of the source modulus in the destination, sorted.
    fn roots(src: &FieldSpec, dst: &FieldSpec) -> Result<Vec<FFElem>> {
        if !dst.contains_subfield(src) {
            return Err(Error::FieldMismatch(format!("{} is not a subfield of {}", src, dst)));
        }
        let modulus: Vec<FFElem> = src.modulus.iter().map(|&c| dst.from_int(c as i64)).collect();
        let mut roots: Vec<FFElem> = if src.k == 1 {
            vec![dst.from_int(-(src.modulus[0] as i64))]
        } else {
            // the copy of src inside dst is {0} plus the powers of h
            let h = dst.pow(&dst.primitive_element(), (dst.q - 1) / (src.q - 1));
            let mut x = dst.one();
            let mut found = Vec::new();
            for _ in 0..src.q - 1 {
                if dst.is_zero(&dst.eval_poly(&modulus, &x)) {
                    found.push(x);
                }
                x = dst.mul(&x, &h);
            }
            found
        };
        roots.sort();
        roots.dedup();
        if roots.len() != src.k {
            return Err(Error::FieldMismatch("modulus does not split in the extension".into()));
        }
        Ok(roots)
    }

    fn from_root(src: &FieldSpec, dst: &FieldSpec, root: FFElem) -> Self {
        let mut basis = Vec::with_capacity(src.k);
        let mut x = dst.one();
        for _ in 0..src.k {
            basis.push(x);
            x = dst.mul(&x, &root);
        }
        let p = dst.p as u64;
        let mut echelon: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        for (i, b) in basis.iter().enumerate() {
            let mut row: Vec<u64> = dst.coeffs(b).iter().map(|&c| c as u64).collect();
            let mut comb = vec![0u64; src.k];
            comb[i] = 1;
            for (piv, prow, pcomb) in &echelon {
                let t = row[*piv];
                if t != 0 {
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x = (*x + (p - t) * y) % p;
                    }
                    for (x, y) in comb.iter_mut().zip(pcomb) {
                        *x = (*x + (p - t) * y) % p;
                    }
                }
            }
            let piv = row.iter().position(|&c| c != 0).expect("powers of a root are independent");
            let inv = pow_mod(row[piv], p - 2, p);
            row.iter_mut().for_each(|x| *x = *x * inv % p);
            comb.iter_mut().for_each(|x| *x = *x * inv % p);
            for (_, prow, pcomb) in echelon.iter_mut() {
                let t = prow[piv];
                if t != 0 {
                    for (x, y) in prow.iter_mut().zip(&row) {
                        *x = (*x + (p - t) * y) % p;
                    }
                    for (x, y) in pcomb.iter_mut().zip(&comb) {
                        *x = (*x + (p - t) * y) % p;
                    }
                }
            }
            echelon.push((piv, row, comb));
        }
        Embedding { src: src.clone(), dst: dst.clone(), basis, echelon }
    }

    pub fn source(&self) -> &FieldSpec {
        &self.src
    }

    pub fn target(&self) -> &FieldSpec {
        &self.dst
    }

    pub fn map(&self, x: &FFElem) -> FFElem {
        let mut acc = self.dst.zero();
        for (i, b) in self.basis.iter().enumerate() {
            let c = x.0[i];
            if c != 0 {
                acc = self.dst.add(&acc, &self.dst.scale(b, c as i64));
            }
        }
        acc
    }

    /// Preimage of `y`, if it lies in the image.
    pub fn restrict(&self, y: &FFElem) -> Option<FFElem> {
        let p = self.dst.p as u64;
        let mut row: Vec<u64> = self.dst.coeffs(y).iter().map(|&c| c as u64).collect();
        let mut comb = vec![0u64; self.src.k];
        for (piv, prow, pcomb) in &self.echelon {
            let t = row[*piv];
            if t != 0 {
                for (x, v) in row.iter_mut().zip(prow) {
                    *x = (*x + (p - t) * v) % p;
                }
                for (x, v) in comb.iter_mut().zip(pcomb) {
                    *x = (*x + t * v) % p;
                }
            }
        }
        if row.iter().any(|&c| c != 0) {
            return None;
        }
        let mut out = FFElem::default();
        for (i, c) in comb.into_iter().enumerate() {
            out.0[i] = c as u32;
        }
        Some(out)
    }
}

/// `x^{(Q-1)/(q-1)}` for `x` in `ext = F_Q`, read back in `base = F_q`.
pub fn norm_to_base(ext: &FieldSpec, x: &FFElem, base: &FieldSpec) -> Result<FFElem> {
    norm_along(&Embedding::new(base, ext)?, x)
}

/// Norm relative to a given embedding of the base.
pub fn norm_along(emb: &Embedding, x: &FFElem) -> Result<FFElem> {
    let (base, ext) = (emb.source(), emb.target());
    let y = ext.pow(x, (ext.q - 1) / (base.q - 1));
    emb.restrict(&y)
        .ok_or_else(|| Error::FieldMismatch("norm does not lie in the base field".into()))
}
