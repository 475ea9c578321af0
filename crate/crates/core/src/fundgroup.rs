//! Fundamental groups built from `Res(μ_m)` and `Res^(1)(μ_m)` factors, and
//! the invariants `i`, `j`, `l`, the h-vector and the Euler–Poincaré
//! characteristic attached to them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::abgroup::{hom_kernel, induced_maps, mod_m, torsion_and_quotient, FgGroup};
use crate::error::{Error, Result};
use crate::hassedomain::{unit_torsion_m, CoverDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// `Res_{R/O_S}(μ_m)`
    ResMu,
    /// `Res^(1)_{R/O_S}(μ_m)`
    ResOneMu,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub flavor: Flavor,
    pub cover: CoverDescriptor,
    pub m: u64,
}

#[derive(Clone, Debug, Default)]
pub struct FundGroup {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

fn order_of(g: &FgGroup) -> BigInt {
    g.order().expect("finite group")
}

fn ratio(a: BigInt, b: BigInt) -> BigRational {
    BigRational::new(a, b)
}

/// Kernels of `N^(1)[m]` and `N^(1)/m`. Without an explicit norm the
/// kernels are still determined when `Pic(O_S)/m` vanishes.
fn n1_kernels(cover: &CoverDescriptor, m: u64) -> Result<(FgGroup, FgGroup)> {
    match cover.norm_n1() {
        Ok(n1) => {
            let (t, q) = induced_maps(&n1, m)?;
            Ok((hom_kernel(&t)?.group, hom_kernel(&q)?.group))
        }
        Err(Error::UnsupportedCover(why)) => {
            if mod_m(cover.base().pic(), m).0.is_trivial() {
                Ok(torsion_and_quotient(cover.cover().pic(), m))
            } else {
                Err(Error::UnsupportedCover(why))
            }
        }
        Err(e) => Err(e),
    }
}

impl Factor {
    pub fn res_mu(cover: CoverDescriptor, m: u64) -> Self {
        Factor { flavor: Flavor::ResMu, cover, m }
    }

    pub fn res_one_mu(cover: CoverDescriptor, m: u64) -> Self {
        Factor { flavor: Flavor::ResOneMu, cover, m }
    }

    pub fn n(&self) -> usize {
        self.cover.degree()
    }

    /// `|F_k|`: `m^n`, or `m^{n-1}` for the norm-one torus.
    pub fn order(&self) -> BigInt {
        let e = match self.flavor {
            Flavor::ResMu => self.n(),
            Flavor::ResOneMu => self.n() - 1,
        };
        BigInt::from(self.m).pow(e as u32)
    }

    pub fn admissibility(&self) -> Admissibility {
        let p = self.cover.base().curve().field().p();
        if self.m < 2 {
            return Admissibility { admissible: false, reason: "m must be at least 2".into() };
        }
        if self.m % p == 0 {
            return Admissibility { admissible: false, reason: format!("m = {} is divisible by the characteristic {}", self.m, p) };
        }
        if self.flavor == Flavor::ResOneMu && (self.n() as u64).gcd(&self.m) != 1 {
            return Admissibility {
                admissible: false,
                reason: format!("norm-one factor with [R:O_S] = {} not prime to m = {}", self.n(), self.m),
            };
        }
        Admissibility { admissible: true, reason: "ok".into() }
    }

    pub fn i_group(&self) -> Result<FgGroup> {
        match self.flavor {
            Flavor::ResMu => Ok(self.cover.cover().brauer_torsion(self.m).group),
            Flavor::ResOneMu => Ok(hom_kernel(&self.cover.norm_n2(self.m)?)?.group),
        }
    }

    pub fn j_group(&self) -> Result<FgGroup> {
        match self.flavor {
            Flavor::ResMu => Ok(mod_m(self.cover.cover().pic(), self.m).0),
            Flavor::ResOneMu => Ok(n1_kernels(&self.cover, self.m)?.1),
        }
    }

    pub fn l_value(&self) -> Result<BigRational> {
        match self.flavor {
            Flavor::ResMu => {
                let s = self.cover.cover_s_size() as i32;
                Ok(BigRational::from_integer(BigInt::from(self.m)).pow(1 - s))
            }
            Flavor::ResOneMu => {
                let n0 = self.cover.norm_n0(self.m)?;
                let km = n0.ker_mod.ok_or_else(|| {
                    Error::UnitsUnavailable("norm on non-constant units of R is not determined by the cover data".into())
                })?;
                Ok(ratio(order_of(&n0.ker_torsion), order_of(&km)))
            }
        }
    }

    pub fn h_vector(&self) -> Result<[BigInt; 3]> {
        let m = self.m;
        match self.flavor {
            Flavor::ResMu => {
                let s = self.cover.cover_s_size() as u32;
                let h0 = BigInt::from(unit_torsion_m(self.cover.cover_q(), m));
                let free = BigInt::from(m).pow(s - 1);
                let (tors, quot) = torsion_and_quotient(self.cover.cover().pic(), m);
                let h1 = &h0 * &free * order_of(&tors);
                let h2 = order_of(&quot) * &free;
                Ok([h0, h1, h2])
            }
            Flavor::ResOneMu => {
                let n0 = self.cover.norm_n0(m)?;
                let km0 = n0.ker_mod.ok_or_else(|| {
                    Error::UnitsUnavailable("norm on non-constant units of R is not determined by the cover data".into())
                })?;
                let (kt1, km1) = n1_kernels(&self.cover, m)?;
                let i = self.i_group()?;
                Ok([
                    order_of(&n0.ker_torsion),
                    order_of(&km0) * order_of(&kt1),
                    order_of(&km1) * order_of(&i),
                ])
            }
        }
    }

    pub fn is_split(&self) -> bool {
        self.flavor == Flavor::ResMu && self.cover.is_identity()
    }

    pub fn describe(&self) -> String {
        let name = match self.flavor {
            Flavor::ResMu if self.cover.is_identity() => return format!("mu_{}", self.m),
            Flavor::ResMu => "Res(mu_{})",
            Flavor::ResOneMu => "Res1(mu_{})",
        };
        format!("{} over {}", name.replace("{}", &self.m.to_string()), self.cover.describe())
    }
}

/// A value that may be unavailable, with the reason kept.
pub type Partial<T> = std::result::Result<T, Error>;

#[derive(Clone, Debug)]
pub struct InvariantBundle {
    pub i: FgGroup,
    pub j: Partial<FgGroup>,
    pub l: Partial<BigRational>,
    pub h: Partial<[BigInt; 3]>,
    pub chi: Partial<BigRational>,
}

impl InvariantBundle {
    pub fn i_order(&self) -> BigInt {
        order_of(&self.i)
    }

    /// `chi = l · |i|` when both sides are known.
    pub fn identity_holds(&self) -> Option<bool> {
        match (&self.chi, &self.l) {
            (Ok(chi), Ok(l)) => Some(*chi == l * BigRational::from_integer(self.i_order())),
            _ => None,
        }
    }
}

impl FundGroup {
    pub fn trivial() -> Self {
        FundGroup { factors: Vec::new() }
    }

    pub fn new(factors: Vec<Factor>) -> Self {
        FundGroup { factors }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().map(Factor::order).product()
    }

    pub fn is_split(&self) -> bool {
        self.factors.iter().all(Factor::is_split)
    }

    pub fn all_res_mu(&self) -> bool {
        self.factors.iter().all(|f| f.flavor == Flavor::ResMu)
    }

    pub fn admissibility(&self) -> Admissibility {
        for (k, f) in self.factors.iter().enumerate() {
            let a = f.admissibility();
            if !a.admissible {
                return Admissibility { admissible: false, reason: format!("factor {}: {}", k, a.reason) };
            }
        }
        Admissibility { admissible: true, reason: "ok".into() }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().admissible
    }

    fn require_admissible(&self) -> Result<()> {
        let a = self.admissibility();
        if a.admissible {
            Ok(())
        } else {
            Err(Error::NotAdmissible(a.reason))
        }
    }

    pub fn i_group(&self) -> Result<FgGroup> {
        self.require_admissible()?;
        let parts = self.factors.iter().map(Factor::i_group).collect::<Result<Vec<_>>>()?;
        Ok(FgGroup::product_all(&parts))
    }

    pub fn j_group(&self) -> Result<FgGroup> {
        self.require_admissible()?;
        let parts = self.factors.iter().map(Factor::j_group).collect::<Result<Vec<_>>>()?;
        Ok(FgGroup::product_all(&parts))
    }

    pub fn l_value(&self) -> Result<BigRational> {
        self.require_admissible()?;
        self.factors.iter().try_fold(BigRational::one(), |acc, f| Ok(acc * f.l_value()?))
    }

    pub fn h_vector(&self) -> Result<[BigInt; 3]> {
        self.require_admissible()?;
        let mut h = [BigInt::one(), BigInt::one(), BigInt::one()];
        for f in &self.factors {
            let v = f.h_vector()?;
            for (a, b) in h.iter_mut().zip(v) {
                *a *= b;
            }
        }
        Ok(h)
    }

    pub fn chi(&self) -> Result<BigRational> {
        let [h0, h1, h2] = self.h_vector()?;
        Ok(BigRational::new(h0 * h2, h1))
    }

    /// All invariants at once; unavailable parts are kept as errors.
    pub fn invariants(&self) -> Result<InvariantBundle> {
        let i = self.i_group()?;
        Ok(InvariantBundle { i, j: self.j_group(), l: self.l_value(), h: self.h_vector(), chi: self.chi() })
    }
}

impl fmt::Display for FundGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(Factor::describe).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, Point};
    use crate::finitefield::make_field;
    use crate::hassedomain::{ExplicitCover, HasseDomain};

    fn ec(p: u64, a: i64, b: i64) -> Curve {
        let f = make_field(p, 1).unwrap();
        let (a, b) = (f.from_int(a), f.from_int(b));
        Curve::elliptic(f, a, b).unwrap()
    }

    fn line(p: u64) -> Curve {
        Curve::projective_line(make_field(p, 1).unwrap())
    }

    fn laurent_f3() -> HasseDomain {
        let l = line(3);
        let t0 = l
            .places_of_degree(1)
            .unwrap()
            .iter()
            .position(|p| p.points[0] == Point::Line(l.field().zero()))
            .unwrap();
        HasseDomain::from_selectors(l, &[(1, t0), (1, 0)]).unwrap()
    }

    fn split(d: &HasseDomain, m: u64) -> FundGroup {
        FundGroup::new(vec![Factor::res_mu(CoverDescriptor::identity(d), m)])
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn elliptic_cover(m: u64) -> Factor {
        let base = HasseDomain::from_selectors(line(5), &[(1, 0)]).unwrap();
        let spec = ExplicitCover { curve: ec(5, 0, 2), degree: 2, fibers: vec![vec![((1, 0), 2)]] };
        Factor::res_one_mu(CoverDescriptor::explicit(&base, spec).unwrap(), m)
    }

    #[test]
    fn admissibility_examples() {
        let d = laurent_f3();
        assert!(split(&d, 2).is_admissible());
        assert!(FundGroup::new(vec![elliptic_cover(3)]).is_admissible());
        assert!(!FundGroup::new(vec![elliptic_cover(2)]).is_admissible());
        assert!(!split(&d, 3).is_admissible());
        assert!(matches!(FundGroup::new(vec![elliptic_cover(2)]).i_group(), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn i_examples() {
        let o_inf = HasseDomain::from_selectors(ec(3, 1, 0), &[(1, 0)]).unwrap();
        assert!(split(&o_inf, 2).i_group().unwrap().is_trivial());
        assert_eq!(split(&laurent_f3(), 2).i_group().unwrap().to_string(), "Z/2");
        let base = HasseDomain::from_selectors(line(7), &[(1, 0), (1, 1)]).unwrap();
        let cov = CoverDescriptor::constant_extension(&base, 2).unwrap();
        assert!(FundGroup::new(vec![Factor::res_one_mu(cov, 3)]).i_group().unwrap().is_trivial());
    }

    #[test]
    fn j_examples() {
        let o_inf = HasseDomain::from_selectors(ec(3, 1, 0), &[(1, 0)]).unwrap();
        assert_eq!(split(&o_inf, 2).j_group().unwrap().to_string(), "Z/2");
        assert!(split(&laurent_f3(), 2).j_group().unwrap().is_trivial());
        assert_eq!(FundGroup::new(vec![elliptic_cover(3)]).j_group().unwrap().to_string(), "Z/3");
    }

    #[test]
    fn l_examples() {
        let o_inf = HasseDomain::from_selectors(ec(3, 1, 0), &[(1, 0)]).unwrap();
        assert_eq!(split(&o_inf, 2).l_value().unwrap(), q(1, 1));
        assert_eq!(split(&laurent_f3(), 2).l_value().unwrap(), q(1, 2));
        // raw value for a non-admissible norm-one factor
        let base = HasseDomain::from_selectors(line(3), &[(1, 0)]).unwrap();
        let cov = CoverDescriptor::constant_extension(&base, 2).unwrap();
        assert_eq!(Factor::res_one_mu(cov, 2).l_value().unwrap(), q(2, 1));
    }

    #[test]
    fn h_and_chi_examples() {
        let o_inf = HasseDomain::from_selectors(ec(3, 1, 0), &[(1, 0)]).unwrap();
        let f = split(&o_inf, 2);
        let h = f.h_vector().unwrap();
        assert_eq!(h, [BigInt::from(2), BigInt::from(4), BigInt::from(2)]);
        assert_eq!(f.chi().unwrap(), q(1, 1));
        let g = split(&laurent_f3(), 2);
        assert_eq!(g.h_vector().unwrap(), [BigInt::from(2), BigInt::from(4), BigInt::from(2)]);
        assert_eq!(g.chi().unwrap(), q(1, 1));
        assert_eq!(g.invariants().unwrap().identity_holds(), Some(true));
        let t = FundGroup::trivial();
        assert_eq!(t.h_vector().unwrap(), [BigInt::one(), BigInt::one(), BigInt::one()]);
        assert_eq!(t.chi().unwrap(), q(1, 1));
    }

    #[test]
    fn unavailable_l_for_split_fibres() {
        // a degree-2 place splits in the quadratic constant extension
        let base = HasseDomain::from_selectors(line(7), &[(2, 0)]).unwrap();
        let cov = CoverDescriptor::constant_extension(&base, 2).unwrap();
        assert_eq!(cov.cover_s_size(), 2);
        let f = FundGroup::new(vec![Factor::res_one_mu(cov, 3)]);
        let b = f.invariants().unwrap();
        assert!(matches!(b.l, Err(Error::UnitsUnavailable(_))));
        assert!(b.j.is_ok());
    }
}
