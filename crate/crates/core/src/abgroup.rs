//! Finitely generated abelian groups presented by integer matrices.
//!
//! Groups are always kept in canonical invariant-factor form
//! `Z/d_1 x ... x Z/d_k x Z^r` with `d_i >= 2` and `d_i | d_{i+1}`; the
//! torsion generators come first, the free ones after. Elements are
//! coordinate vectors in that basis, reduced modulo the invariant factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from machine integers, row-major.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        IntMatrix { rows, cols, data: data.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Stacks row vectors; `cols` is needed to give an empty list a shape.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Places vectors side by side as columns.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {} has {} entries, expected {}",
                    j,
                    c.len(),
                    rows
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal_from(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * self.get(i, j);
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal in
/// divisibility order. `v_inv` is kept because quotient presentations need
/// lifts of the new basis.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries, all nonnegative.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    pub fn v_inverse(&self) -> &IntMatrix {
        &self.v_inv
    }
}

// Smallest nonzero |entry| in the trailing submatrix; row-major scan breaks ties.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    let mut t = 0;
    'diag: while t < r.min(c) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                break 'diag;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..r {
                let q = a.get(i, t) / &p;
                if !q.is_zero() {
                    let nq = -q;
                    a.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = a.get(t, j) / &p;
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                    v_inv.add_row_multiple(t, j, &q);
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(a.get(i, j) % &p).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::one();
                a.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { u, d: a, v, v_inv }
}

/// Basis (as vectors) of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Solves `m x = y` over the integers, if possible.
pub fn solve_integer(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let uy = snf.u.mul_vec(y);
    let diag = snf.diagonal();
    let mut z = vec![BigInt::zero(); m.cols];
    for (i, val) in uy.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !val.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = val.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(snf.v.mul_vec(&z))
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_basis(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..dim {
        loop {
            let live: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            let &best = live.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &live {
                if i == best {
                    continue;
                }
                let q = &rows[i][col] / &rows[best][col];
                let pivot_row = rows[best].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -&*x);
            }
            out.push(r);
            pivots.push(col);
        }
    }
    for k in 0..out.len() {
        let pc = pivots[k];
        let p = out[k][pc].clone();
        for above in 0..k {
            let q = out[above][pc].div_floor(&p);
            if !q.is_zero() {
                let row = out[k].clone();
                for (x, y) in out[above].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// A finitely generated abelian group in canonical invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl FgGroup {
    pub fn new(invariant_factors: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        for (i, d) in invariant_factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidHom(format!("invariant factor {} is below 2", d)));
            }
            if i > 0 && !(d % &invariant_factors[i - 1]).is_zero() {
                return Err(Error::InvalidHom(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    invariant_factors[i - 1],
                    d
                )));
            }
        }
        Ok(FgGroup { invariant_factors, free_rank })
    }

    pub fn trivial() -> Self {
        FgGroup { invariant_factors: Vec::new(), free_rank: 0 }
    }

    pub fn free(rank: usize) -> Self {
        FgGroup { invariant_factors: Vec::new(), free_rank: rank }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FgGroup { invariant_factors: vec![BigInt::from(n)], free_rank: 0 },
        }
    }

    /// Canonical form of `Z/n_1 x ... x Z/n_k` for arbitrary moduli.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|&n| BigInt::from(n)).collect();
        let k = orders.len();
        group_from_presentation(k, &IntMatrix::diagonal_from(k, k, &diag))
            .expect("diagonal presentation is square")
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Order as a machine integer; panics on infinite groups.
    pub fn order_u64(&self) -> u64 {
        self.order()
            .expect("order of an infinite group")
            .to_u64()
            .expect("group order exceeds u64")
    }

    /// Modulus of generator `i`: its invariant factor, or zero for free generators.
    pub fn modulus(&self, i: usize) -> BigInt {
        self.invariant_factors.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.ngens(), "coordinate vector has the wrong length");
        coords
            .iter()
            .enumerate()
            .map(|(i, x)| match self.invariant_factors.get(i) {
                Some(d) => x.mod_floor(d),
                None => x.clone(),
            })
            .collect()
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        self.reduce(coords).iter().all(Zero::is_zero)
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    /// The canonical relations: a diagonal matrix whose quotient is `self`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let t = self.torsion_rank();
        IntMatrix::diagonal_from(t, n, &self.invariant_factors)
    }

    pub fn product(&self, other: &FgGroup) -> FgGroup {
        let mut orders: Vec<BigInt> = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        let k = orders.len();
        let free = self.free_rank + other.free_rank;
        let mut g = group_from_presentation(k, &IntMatrix::diagonal_from(k, k, &orders))
            .expect("diagonal presentation is square");
        g.free_rank += free;
        g
    }

    pub fn product_all<'a>(groups: impl IntoIterator<Item = &'a FgGroup>) -> FgGroup {
        groups.into_iter().fold(FgGroup::trivial(), |acc, g| acc.product(g))
    }

    /// All elements of a finite group in mixed-radix order (last coordinate fastest).
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let d = d.to_u64().expect("invariant factor too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for x in 0..d {
                    let mut e2 = e.clone();
                    e2.push(BigInt::from(x));
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{}", d)).collect();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// `Z^n / rowspace(relations)` together with the change of basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: FgGroup,
    // n x g: presentation coordinates (row vector) -> canonical coordinates
    projection: IntMatrix,
    // g x n: row i is a preimage of canonical generator i
    lifts: IntMatrix,
}

impl Quotient {
    pub fn new(n_generators: usize, relations: &IntMatrix) -> Result<Self> {
        if relations.cols() != n_generators {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} columns for {} generators",
                relations.cols(),
                n_generators
            )));
        }
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let mut torsion = Vec::new();
        let mut kept = Vec::new();
        let mut free_rank = 0;
        for i in 0..n_generators {
            match diag.get(i) {
                Some(d) if d.is_one() => {}
                Some(d) if !d.is_zero() => {
                    torsion.push(d.clone());
                    kept.push(i);
                }
                _ => {
                    free_rank += 1;
                    kept.push(i);
                }
            }
        }
        let group = FgGroup::new(torsion, free_rank)?;
        let g = kept.len();
        let mut projection = IntMatrix::zeros(n_generators, g);
        let mut lifts = IntMatrix::zeros(g, n_generators);
        for (new, &old) in kept.iter().enumerate() {
            for r in 0..n_generators {
                projection.set(r, new, snf.v.get(r, old).clone());
                lifts.set(new, r, snf.v_inv.get(old, r).clone());
            }
        }
        Ok(Quotient { group, projection, lifts })
    }

    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    /// Canonical coordinates of the class of a presentation vector.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(&self.projection.vec_mul(x))
    }

    /// A presentation vector mapping onto canonical generator `i`.
    pub fn lift(&self, i: usize) -> Vec<BigInt> {
        self.lifts.row(i).to_vec()
    }

    pub fn n_generators(&self) -> usize {
        self.projection.rows()
    }
}

/// `Z^n / rowspace(relations)` in canonical form; unit factors are dropped.
pub fn group_from_presentation(n_generators: usize, relations: &IntMatrix) -> Result<FgGroup> {
    Ok(Quotient::new(n_generators, relations)?.group)
}

/// A homomorphism between canonical groups. Column `j` of the matrix is the
/// image of domain generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgGroup,
    codomain: FgGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(domain: FgGroup, codomain: FgGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map {} -> {}",
                matrix.rows(),
                matrix.cols(),
                domain,
                codomain
            )));
        }
        let mut reduced = IntMatrix::zeros(matrix.rows(), matrix.cols());
        for j in 0..matrix.cols() {
            let col = codomain.reduce(&matrix.column(j));
            let dj = domain.modulus(j);
            if !dj.is_zero() {
                let scaled: Vec<BigInt> = col.iter().map(|x| x * &dj).collect();
                if !codomain.is_zero_element(&scaled) {
                    return Err(Error::InvalidHom(format!(
                        "generator {} of order {} maps to an element whose {}-multiple is nonzero",
                        j, dj, dj
                    )));
                }
            }
            for (i, x) in col.into_iter().enumerate() {
                reduced.set(i, j, x);
            }
        }
        Ok(GroupHom { domain, codomain, matrix: reduced })
    }

    pub fn identity(group: &FgGroup) -> Self {
        Self::scalar(group, 1)
    }

    pub fn zero(domain: &FgGroup, codomain: &FgGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.ngens(), domain.ngens()),
        }
    }

    /// Multiplication by `k` on `group`.
    pub fn scalar(group: &FgGroup, k: i64) -> Self {
        let n = group.ngens();
        let diag = vec![BigInt::from(k); n];
        GroupHom::new(group.clone(), group.clone(), IntMatrix::diagonal_from(n, n, &diag))
            .expect("scalar maps are always valid")
    }

    pub fn domain(&self) -> &FgGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.codomain.reduce(&self.matrix.mul_vec(x))
    }

    pub fn image_of_generator(&self, j: usize) -> Vec<BigInt> {
        self.matrix.column(j)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.codomain != self.domain {
            return Err(Error::DimensionMismatch("composing maps with mismatched groups".into()));
        }
        GroupHom::new(inner.domain.clone(), self.codomain.clone(), self.matrix.mul(&inner.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.data.iter().all(Zero::is_zero)
    }
}

/// A group together with an injective map into an ambient group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgGroup,
    pub embedding: GroupHom,
}

/// The subgroup of `ambient` generated by the given coordinate vectors.
pub fn subgroup_generated(ambient: &FgGroup, gens: &[Vec<BigInt>]) -> Result<Subgroup> {
    let a = ambient.ngens();
    let k = gens.len();
    // {c in Z^k : sum c_i g_i lies in the relation lattice of the ambient group}
    let mut n = IntMatrix::zeros(a, k + a);
    for (j, g) in gens.iter().enumerate() {
        if g.len() != a {
            return Err(Error::DimensionMismatch("generator of the wrong length".into()));
        }
        for (i, x) in g.iter().enumerate() {
            n.set(i, j, x.clone());
        }
    }
    for i in 0..a {
        n.set(i, k + i, -ambient.modulus(i));
    }
    let relations: Vec<Vec<BigInt>> = integer_kernel(&n).into_iter().map(|v| v[..k].to_vec()).collect();
    let quotient = Quotient::new(k, &IntMatrix::from_rows(k, &relations)?)?;
    let gen_matrix = IntMatrix::from_columns(a, gens)?;
    let columns: Vec<Vec<BigInt>> = (0..quotient.group.ngens())
        .map(|i| gen_matrix.mul_vec(&quotient.lift(i)))
        .collect();
    let embedding = GroupHom::new(
        quotient.group.clone(),
        ambient.clone(),
        IntMatrix::from_columns(a, &columns)?,
    )?;
    Ok(Subgroup { group: quotient.group, embedding })
}

/// Kernel of `f` with its embedding into the domain.
pub fn hom_kernel(f: &GroupHom) -> Result<Subgroup> {
    let a = f.domain.ngens();
    let b = f.codomain.ngens();
    let mut n = IntMatrix::zeros(b, a + b);
    for i in 0..b {
        for j in 0..a {
            n.set(i, j, f.matrix.get(i, j).clone());
        }
        n.set(i, a + i, -f.codomain.modulus(i));
    }
    let gens: Vec<Vec<BigInt>> = integer_kernel(&n).into_iter().map(|v| v[..a].to_vec()).collect();
    subgroup_generated(&f.domain, &gens)
}

/// Image of `f` inside the codomain.
pub fn hom_image(f: &GroupHom) -> Result<Subgroup> {
    let gens: Vec<Vec<BigInt>> = (0..f.domain.ngens()).map(|j| f.image_of_generator(j)).collect();
    subgroup_generated(&f.codomain, &gens)
}

fn gcd_u(d: &BigInt, m: u64) -> BigInt {
    d.gcd(&BigInt::from(m))
}

/// `A[m]`, the kernel of multiplication by `m`, embedded in `A`.
pub fn m_torsion(a: &FgGroup, m: u64) -> Subgroup {
    let mut factors = Vec::new();
    let mut cols = Vec::new();
    for (i, d) in a.invariant_factors.iter().enumerate() {
        let g = gcd_u(d, m);
        if g > BigInt::one() {
            let mut col = a.zero_element();
            col[i] = d / &g;
            cols.push(col);
            factors.push(g);
        }
    }
    let group = FgGroup::new(factors, 0).expect("gcds of a divisibility chain form a chain");
    let matrix = IntMatrix::from_columns(a.ngens(), &cols).expect("columns have ambient length");
    let embedding = GroupHom::new(group.clone(), a.clone(), matrix).expect("m-torsion embedding is valid");
    Subgroup { group, embedding }
}

/// `A/m` together with the projection `A -> A/m`.
pub fn mod_m(a: &FgGroup, m: u64) -> (FgGroup, GroupHom) {
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in a.invariant_factors.iter().enumerate() {
        let g = gcd_u(d, m);
        if g > BigInt::one() {
            factors.push(g);
            rows.push(i);
        }
    }
    if m >= 2 {
        for j in 0..a.free_rank {
            factors.push(BigInt::from(m));
            rows.push(a.torsion_rank() + j);
        }
    }
    let group = FgGroup::new(factors, 0).expect("gcds with m divide m and form a chain");
    let mut matrix = IntMatrix::zeros(group.ngens(), a.ngens());
    for (r, &i) in rows.iter().enumerate() {
        matrix.set(r, i, BigInt::one());
    }
    let proj = GroupHom::new(a.clone(), group.clone(), matrix).expect("projection onto A/m is valid");
    (group, proj)
}

/// `(A[m], A/m)`.
pub fn torsion_and_quotient(a: &FgGroup, m: u64) -> (FgGroup, FgGroup) {
    assert!(m >= 1, "m must be positive");
    (m_torsion(a, m).group, mod_m(a, m).0)
}

/// The maps `f[m]: A[m] -> B[m]` and `f/m: A/m -> B/m` induced by `f`.
pub fn induced_maps(f: &GroupHom, m: u64) -> Result<(GroupHom, GroupHom)> {
    let src_t = m_torsion(&f.domain, m);
    let dst_t = m_torsion(&f.codomain, m);
    let b = &f.codomain;
    let mut cols = Vec::new();
    for j in 0..src_t.group.ngens() {
        let y = f.apply(&src_t.embedding.image_of_generator(j));
        let mut coords = Vec::new();
        for (i, yi) in y.iter().enumerate() {
            if i >= b.torsion_rank() {
                if !yi.is_zero() {
                    return Err(Error::InvalidHom("torsion maps into the free part".into()));
                }
                continue;
            }
            let d = &b.invariant_factors[i];
            let g = gcd_u(d, m);
            let step = d / &g;
            if !(yi % &step).is_zero() {
                return Err(Error::InvalidHom("image of an m-torsion element is not m-torsion".into()));
            }
            if g > BigInt::one() {
                coords.push(yi / &step);
            }
        }
        cols.push(coords);
    }
    let f_tors = GroupHom::new(
        src_t.group.clone(),
        dst_t.group.clone(),
        IntMatrix::from_columns(dst_t.group.ngens(), &cols)?,
    )?;

    let (src_q, _) = mod_m(&f.domain, m);
    let (dst_q, proj_b) = mod_m(&f.codomain, m);
    let a = &f.domain;
    let mut qcols = Vec::new();
    for (i, d) in a.invariant_factors.iter().enumerate() {
        if gcd_u(d, m) > BigInt::one() {
            qcols.push(proj_b.apply(&f.image_of_generator(i)));
        }
    }
    if m >= 2 {
        for j in 0..a.free_rank {
            qcols.push(proj_b.apply(&f.image_of_generator(a.torsion_rank() + j)));
        }
    }
    let f_quot = GroupHom::new(src_q, dst_q.clone(), IntMatrix::from_columns(dst_q.ngens(), &qcols)?)?;
    Ok((f_tors, f_quot))
}
