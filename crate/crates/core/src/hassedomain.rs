//! Hasse domains `O_S` on genus 0 and 1 curves, their finite étale covers
//! given as combinatorial data, and the three norm maps between the
//! cohomology-relevant groups.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::abgroup::{hermite_basis, hom_kernel, induced_maps, FgGroup, GroupHom, IntMatrix, Quotient};
use crate::curve::{map_point, restrict_point, Curve, EcStructure, PicClass, Place, Point};
use crate::error::{Error, Result};
use crate::finitefield::Embedding;

/// `Pic(C)` as `E(F_q) ⊕ Z` (or `Z` on the line). The degree coordinate is last.
#[derive(Clone, Debug)]
pub struct CurvePic {
    pub group: FgGroup,
    pub ec: Option<EcStructure>,
}

impl CurvePic {
    pub fn new(curve: &Curve) -> Result<Self> {
        let ec = if curve.is_elliptic() { Some(curve.group_structure()?) } else { None };
        let torsion = ec.as_ref().map_or_else(FgGroup::trivial, |s| s.group.clone());
        Ok(CurvePic { group: torsion.product(&FgGroup::free(1)), ec })
    }

    pub fn degree_index(&self) -> usize {
        self.group.ngens() - 1
    }

    pub fn coords(&self, cls: &PicClass) -> Result<Vec<BigInt>> {
        let mut v = match (&self.ec, &cls.point) {
            (Some(ec), Some(p)) => ec.coordinates(p)?,
            (None, None) => Vec::new(),
            _ => return Err(Error::InvalidDomain("divisor class does not match the curve".into())),
        };
        v.push(BigInt::from(cls.degree));
        Ok(v)
    }

    /// Coordinates of a rational point viewed as the degree-0 class `(P) - (∞)`.
    pub fn point_coords(&self, p: &Point) -> Result<Vec<BigInt>> {
        self.coords(&PicClass { degree: 0, point: Some(*p) })
    }
}

#[derive(Clone, Debug)]
pub struct PicardData {
    pub group: FgGroup,
    quotient: Quotient,
}

impl PicardData {
    /// Image in `Pic(O_S)` of a class given in `Pic(C)` coordinates.
    pub fn project(&self, pic_c_coords: &[BigInt]) -> Vec<BigInt> {
        self.quotient.project(pic_c_coords)
    }

    /// A `Pic(C)` representative of canonical generator `i`.
    pub fn lift(&self, i: usize) -> Vec<BigInt> {
        self.quotient.lift(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    pub torsion_order: u64,
    pub rank: usize,
    /// Divisors over S of a basis of units modulo constants, in Hermite form.
    pub lattice_basis: Vec<Vec<BigInt>>,
}

/// `{x ∈ (Z/m)^S : Σ x = 0}` with basis `e_i - e_last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerTorsion {
    pub m: u64,
    pub places: usize,
    pub group: FgGroup,
}

impl BrauerTorsion {
    pub fn new(places: usize, m: u64) -> Self {
        assert!(places >= 1 && m >= 1);
        let group = if m == 1 { FgGroup::trivial() } else { FgGroup::from_cyclic_orders(&vec![m; places - 1]) };
        BrauerTorsion { m, places, group }
    }

    pub fn order(&self) -> BigInt {
        self.group.order().expect("finite")
    }

    /// Coordinate tuple of a group element.
    pub fn to_local(&self, x: &[BigInt]) -> Vec<BigInt> {
        let m = BigInt::from(self.m);
        let mut out = vec![BigInt::zero(); self.places];
        for (i, c) in x.iter().enumerate() {
            out[i] = c.mod_floor(&m);
            out[self.places - 1] -= c;
        }
        let last = out[self.places - 1].mod_floor(&m);
        out[self.places - 1] = last;
        out
    }

    /// Group coordinates of a zero-sum tuple.
    pub fn from_local(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let m = BigInt::from(self.m);
        let total: BigInt = x.iter().sum();
        if x.len() != self.places || !total.mod_floor(&m).is_zero() {
            return Err(Error::InvalidHom("local invariants do not sum to zero".into()));
        }
        if self.group.is_trivial() {
            return Ok(Vec::new());
        }
        Ok(self.group.reduce(&x[..self.places - 1]))
    }

    /// Every tuple of the coordinate model, by enumeration of `(Z/m)^S`.
    pub fn enumerate_model(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.places {
            let mut next = Vec::new();
            for v in &out {
                for x in 0..self.m {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out.into_iter().filter(|v| v.iter().sum::<u64>() % self.m == 0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct HasseDomain {
    curve: Curve,
    places: Vec<Place>,
    pic_c: CurvePic,
    classes: Vec<Vec<BigInt>>,
    picard: PicardData,
}

impl HasseDomain {
    pub fn new(curve: Curve, places: Vec<Place>) -> Result<Self> {
        if places.is_empty() {
            return Err(Error::InvalidDomain("S must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for pl in &places {
            if !seen.insert((pl.degree, pl.index)) {
                return Err(Error::InvalidDomain(format!("place {{deg={}, idx={}}} listed twice", pl.degree, pl.index)));
            }
        }
        let pic_c = CurvePic::new(&curve)?;
        let classes = places
            .iter()
            .map(|pl| pic_c.coords(&curve.place_class(pl)?))
            .collect::<Result<Vec<_>>>()?;
        let n = pic_c.group.ngens();
        let mut relations: Vec<Vec<BigInt>> = pic_c.group.relation_matrix().to_rows();
        relations.extend(classes.iter().cloned());
        let quotient = Quotient::new(n, &IntMatrix::from_rows(n, &relations)?)?;
        let picard = PicardData { group: quotient.group().clone(), quotient };
        Ok(HasseDomain { curve, places, pic_c, classes, picard })
    }

    /// Places picked by `(degree, index)` in the canonical ordering.
    pub fn from_selectors(curve: Curve, selectors: &[(usize, usize)]) -> Result<Self> {
        let places = selectors.iter().map(|&(d, i)| curve.place(d, i)).collect::<Result<Vec<_>>>()?;
        Self::new(curve, places)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn s_size(&self) -> usize {
        self.places.len()
    }

    pub fn q(&self) -> u64 {
        self.curve.field().q()
    }

    pub fn curve_pic(&self) -> &CurvePic {
        &self.pic_c
    }

    /// `Pic(C)` coordinates of the classes of the places in S.
    pub fn place_classes(&self) -> &[Vec<BigInt>] {
        &self.classes
    }

    pub fn picard(&self) -> &PicardData {
        &self.picard
    }

    pub fn pic(&self) -> &FgGroup {
        &self.picard.group
    }

    /// Class of an arbitrary place in `Pic(O_S)`.
    pub fn class_of(&self, place: &Place) -> Result<Vec<BigInt>> {
        Ok(self.picard.project(&self.pic_c.coords(&self.curve.place_class(place)?)?))
    }

    pub fn unit_data(&self) -> Result<UnitData> {
        let s = self.s_size();
        let cols = IntMatrix::from_columns(self.pic_c.group.ngens(), &self.classes)?;
        let divisor_map = GroupHom::new(FgGroup::free(s), self.pic_c.group.clone(), cols)?;
        let kernel = hom_kernel(&divisor_map)?;
        let gens: Vec<Vec<BigInt>> =
            (0..kernel.group.ngens()).map(|j| kernel.embedding.image_of_generator(j)).collect();
        let lattice_basis = hermite_basis(&gens, s);
        Ok(UnitData { torsion_order: self.q() - 1, rank: lattice_basis.len(), lattice_basis })
    }

    pub fn brauer_torsion(&self, m: u64) -> BrauerTorsion {
        BrauerTorsion::new(self.s_size(), m)
    }

    pub fn describe_places(&self) -> Vec<String> {
        self.places.iter().map(Place::label).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverKind {
    Identity,
    ConstantExt(usize),
    Explicit,
}

/// One cover place over a place of S.
#[derive(Clone, Debug)]
pub struct FiberEntry {
    pub base_index: usize,
    pub residue_degree: usize,
}

#[derive(Clone, Debug)]
pub struct CoverDescriptor {
    base: HasseDomain,
    kind: CoverKind,
    cover: HasseDomain,
    degree: usize,
    constant_degree: usize,
    /// Parallel to the places of the cover domain.
    fibers: Vec<FiberEntry>,
    constant_embedding: Option<Embedding>,
}

/// Input for an explicit cover: the cover curve, its degree, and for every
/// place of S the cover places `(degree, index)` with residue degrees.
#[derive(Clone, Debug)]
pub struct ExplicitCover {
    pub curve: Curve,
    pub degree: usize,
    pub fibers: Vec<Vec<((usize, usize), usize)>>,
}

impl CoverDescriptor {
    pub fn identity(base: &HasseDomain) -> Self {
        let fibers = (0..base.s_size()).map(|i| FiberEntry { base_index: i, residue_degree: 1 }).collect();
        CoverDescriptor {
            base: base.clone(),
            kind: CoverKind::Identity,
            cover: base.clone(),
            degree: 1,
            constant_degree: 1,
            fibers,
            constant_embedding: None,
        }
    }

    pub fn constant_extension(base: &HasseDomain, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidCover("constant extensions need degree at least 2".into()));
        }
        let base_curve = base.curve();
        let ext = base_curve.extension(d)?;
        let cover_curve = ext.curve.clone();
        let mut places = Vec::new();
        let mut fibers = Vec::new();
        for (i, pl) in base.places().iter().enumerate() {
            let e = pl.degree;
            let g = e.gcd(&d);
            let e_cover = e / g;
            // everything meets in F_{q^{lcm(e, d)}}
            let up = cover_curve.extension(e_cover)?;
            let to_top = ext.embedding.then(&up.embedding)?;
            let down = base_curve.extension(e)?;
            let lift = Embedding::compatible(down.curve.field(), up.curve.field(), &down.embedding, &to_top)?;
            let orbit: HashSet<Point> = pl.points.iter().map(|p| map_point(&lift, p)).collect();
            let over: Vec<Place> = cover_curve
                .places_of_degree(e_cover)?
                .into_iter()
                .filter(|c| orbit.contains(&c.points[0]))
                .collect();
            if over.len() != g {
                return Err(Error::InvalidCover(format!(
                    "found {} places over {}, expected {}",
                    over.len(),
                    pl.label(),
                    g
                )));
            }
            for c in over {
                places.push(c);
                fibers.push(FiberEntry { base_index: i, residue_degree: d / g });
            }
        }
        let cover = HasseDomain::new(cover_curve, places)?;
        Ok(CoverDescriptor {
            base: base.clone(),
            kind: CoverKind::ConstantExt(d),
            cover,
            degree: d,
            constant_degree: d,
            fibers,
            constant_embedding: Some(ext.embedding),
        })
    }

    pub fn explicit(base: &HasseDomain, spec: ExplicitCover) -> Result<Self> {
        let bf = base.curve().field();
        let cf = spec.curve.field();
        if bf.p() != cf.p() || cf.k() % bf.k() != 0 {
            return Err(Error::InvalidCover(format!("{} does not contain {}", cf, bf)));
        }
        let c = cf.k() / bf.k();
        if spec.degree == 0 || spec.degree % c != 0 {
            return Err(Error::InvalidCover(format!(
                "constant field degree {} does not divide the cover degree {}",
                c, spec.degree
            )));
        }
        if spec.fibers.len() != base.s_size() {
            return Err(Error::InvalidCover(format!(
                "fibers given for {} places, S has {}",
                spec.fibers.len(),
                base.s_size()
            )));
        }
        let mut places = Vec::new();
        let mut fibers = Vec::new();
        for (i, fiber) in spec.fibers.iter().enumerate() {
            let sum: usize = fiber.iter().map(|(_, f)| f).sum();
            if sum != spec.degree {
                return Err(Error::FiberSumMismatch { place: i, sum, degree: spec.degree });
            }
            for &((deg, idx), f) in fiber {
                if f == 0 {
                    return Err(Error::InvalidCover("residue degrees must be positive".into()));
                }
                places.push(spec.curve.place(deg, idx)?);
                fibers.push(FiberEntry { base_index: i, residue_degree: f });
            }
        }
        let cover = HasseDomain::new(spec.curve, places)?;
        Ok(CoverDescriptor {
            base: base.clone(),
            kind: CoverKind::Explicit,
            cover,
            degree: spec.degree,
            constant_degree: c,
            fibers,
            constant_embedding: None,
        })
    }

    pub fn base(&self) -> &HasseDomain {
        &self.base
    }

    pub fn cover(&self) -> &HasseDomain {
        &self.cover
    }

    pub fn kind(&self) -> &CoverKind {
        &self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `[F_{q'} : F_q]`.
    pub fn constant_degree(&self) -> usize {
        self.constant_degree
    }

    pub fn cover_q(&self) -> u64 {
        self.cover.q()
    }

    pub fn fibers(&self) -> &[FiberEntry] {
        &self.fibers
    }

    pub fn cover_s_size(&self) -> usize {
        self.cover.s_size()
    }

    /// No place of S splits into several places.
    pub fn is_imaginary(&self) -> bool {
        self.cover_s_size() == self.base.s_size()
    }

    pub fn is_identity(&self) -> bool {
        self.kind == CoverKind::Identity
    }

    /// `Br(R)[m] -> Br(O_S)[m]`, summing local invariants over each fiber.
    pub fn norm_n2(&self, m: u64) -> Result<GroupHom> {
        let src = self.cover.brauer_torsion(m);
        let dst = self.base.brauer_torsion(m);
        let mut cols = Vec::new();
        for j in 0..src.group.ngens() {
            let mut unit = vec![BigInt::zero(); src.group.ngens()];
            unit[j] = BigInt::from(1);
            let local = src.to_local(&unit);
            let mut pushed = vec![BigInt::zero(); dst.places];
            for (x, fe) in local.iter().zip(&self.fibers) {
                pushed[fe.base_index] += x;
            }
            cols.push(dst.from_local(&pushed)?);
        }
        GroupHom::new(src.group.clone(), dst.group.clone(), IntMatrix::from_columns(dst.group.ngens(), &cols)?)
    }

    /// `Pic(R) -> Pic(O_S)` induced by the norm of divisors.
    pub fn norm_n1(&self) -> Result<GroupHom> {
        let src = self.cover.pic().clone();
        let dst = self.base.pic().clone();
        match self.kind {
            CoverKind::Identity => Ok(GroupHom::identity(&src)),
            CoverKind::ConstantExt(d) => {
                let cols = (0..src.ngens())
                    .map(|i| {
                        let lifted = self.cover.picard().lift(i);
                        Ok(self.base.picard().project(&self.curve_norm(&lifted, d)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupHom::new(src, dst.clone(), IntMatrix::from_columns(dst.ngens(), &cols)?)
            }
            CoverKind::Explicit => {
                if src.is_trivial() || dst.is_trivial() {
                    Ok(GroupHom::zero(&src, &dst))
                } else {
                    Err(Error::UnsupportedCover(
                        "norm on Pic(R) cannot be derived from fiber data when both Picard groups are nontrivial".into(),
                    ))
                }
            }
        }
    }

    // Pic(C') -> Pic(C) for the constant extension of degree d, in coordinates.
    fn curve_norm(&self, x: &[BigInt], d: usize) -> Result<Vec<BigInt>> {
        let cover_pic = self.cover.curve_pic();
        let base_pic = self.base.curve_pic();
        let deg_i = cover_pic.degree_index();
        let mut out = vec![BigInt::zero(); base_pic.group.ngens()];
        // class of ∞' has norm d·∞
        out[base_pic.degree_index()] += &x[deg_i] * BigInt::from(d);
        if let Some(ec) = &cover_pic.ec {
            let cover_curve = self.cover.curve();
            let q = self.base.q();
            let emb = self.constant_embedding.as_ref().expect("constant extension");
            for (j, g) in ec.generators.iter().enumerate() {
                let mut trace = Point::Infinity;
                let mut conj = *g;
                for _ in 0..d {
                    trace = cover_curve.add_unchecked(&trace, &conj);
                    conj = cover_curve.frobenius_point(&conj, q);
                }
                let down = restrict_point(emb, &trace)
                    .ok_or_else(|| Error::FieldMismatch("trace point is not rational".into()))?;
                let img = base_pic.point_coords(&down)?;
                for (o, v) in out.iter_mut().zip(img) {
                    *o += &x[j] * v;
                }
            }
        }
        Ok(base_pic.group.reduce(&out))
    }

    pub fn norm_n0(&self, m: u64) -> Result<NormN0> {
        norm_n0_cyclic(self.cover_q(), self.base.q(), self.degree, self.constant_degree, m, self.unit_norm_known())
    }

    /// Units of R are constants, or the cover is trivial.
    pub fn unit_norm_known(&self) -> bool {
        self.is_identity() || self.cover_s_size() == 1
    }

    pub fn describe(&self) -> String {
        match self.kind {
            CoverKind::Identity => "identity".to_string(),
            CoverKind::ConstantExt(d) => format!("constant extension of degree {}", d),
            CoverKind::Explicit => format!("explicit cover of degree {}", self.degree),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormN0 {
    pub ker_torsion: FgGroup,
    /// `None` when the norm on non-constant units is not determined by the data.
    pub ker_mod: Option<FgGroup>,
}

/// `N^(0)` kernels from constant-field data alone. When `known` is false the
/// quotient kernel is reported unavailable.
pub fn norm_n0_cyclic(q_cover: u64, q_base: u64, degree: usize, constant_degree: usize, m: u64, known: bool) -> Result<NormN0> {
    if degree == 1 && q_cover == q_base {
        return Ok(NormN0 { ker_torsion: FgGroup::trivial(), ker_mod: Some(FgGroup::trivial()) });
    }
    if (q_cover - 1) % (q_base - 1) != 0 || constant_degree == 0 || degree % constant_degree != 0 {
        return Err(Error::InvalidCover("constant fields are not nested".into()));
    }
    let src = FgGroup::cyclic(q_cover - 1);
    let dst = FgGroup::cyclic(q_base - 1);
    let k = (degree / constant_degree) as i64;
    let matrix = if src.ngens() == 0 || dst.ngens() == 0 {
        IntMatrix::zeros(dst.ngens(), src.ngens())
    } else {
        IntMatrix::from_i64(1, 1, &[k])
    };
    let f = GroupHom::new(src, dst, matrix)?;
    let (ft, fq) = induced_maps(&f, m)?;
    Ok(NormN0 {
        ker_torsion: hom_kernel(&ft)?.group,
        ker_mod: if known { Some(hom_kernel(&fq)?.group) } else { None },
    })
}

/// `|S'|`-independent order of `R^×[m]`.
pub fn unit_torsion_m(q_cover: u64, m: u64) -> u64 {
    (q_cover - 1).gcd(&m)
}

pub fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("value fits in u64")
}
