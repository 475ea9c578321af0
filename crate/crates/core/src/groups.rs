//! Catalog of semisimple groups over a Hasse domain and the verdicts
//! computed from their fundamental groups: genera, class numbers, `H^1`,
//! the Hasse principle and Tamagawa numbers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fundgroup::{Factor, FundGroup, Partial};
use crate::hassedomain::{CoverDescriptor, HasseDomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynkin {
    /// inner `A_{n-1}`, parametrized by `n`
    A(usize),
    B(usize),
    C(usize),
    /// inner `D_n`
    D(usize),
    /// `^2D_n`, `n` even
    OuterD(usize),
    /// `^3D_4` or `^6D_4`
    Triality(usize),
    E6,
    OuterE6,
    E7,
    E8,
    F4,
    G2,
    Pgl(usize),
    /// `SO` of a regular quadratic form of the given rank
    So(usize),
    /// `Res_{R/O_S}(PGL_n)`
    ResPgl(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isogeny {
    Adjoint,
    SimplyConnected,
}

impl FromStr for Isogeny {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjoint" => Ok(Isogeny::Adjoint),
            "simply_connected" | "sc" => Ok(Isogeny::SimplyConnected),
            _ => Err(Error::UnsupportedGroup(format!(
                "isogeny '{}' is neither adjoint nor simply_connected",
                s
            ))),
        }
    }
}

impl Dynkin {
    /// Parses labels such as `A`, `2D`, `3D4`, `2E6`, `PGL`, `SO`, `ResPGL`
    /// together with the numeric parameter `n` where one is needed.
    pub fn parse(label: &str, n: Option<usize>) -> Result<Self> {
        let need = |what: &str| n.ok_or_else(|| Error::UnsupportedGroup(format!("type {} needs n", what)));
        let d = match label {
            "A" => Dynkin::A(need("A")?),
            "B" => Dynkin::B(need("B")?),
            "C" => Dynkin::C(need("C")?),
            "D" => Dynkin::D(need("D")?),
            "2D" => Dynkin::OuterD(need("2D")?),
            "3D4" => Dynkin::Triality(3),
            "6D4" => Dynkin::Triality(6),
            "E6" => Dynkin::E6,
            "2E6" => Dynkin::OuterE6,
            "E7" => Dynkin::E7,
            "E8" => Dynkin::E8,
            "F4" => Dynkin::F4,
            "G2" => Dynkin::G2,
            "PGL" => Dynkin::Pgl(need("PGL")?),
            "SO" => Dynkin::So(need("SO")?),
            "ResPGL" => Dynkin::ResPgl(need("ResPGL")?),
            _ => return Err(Error::UnsupportedGroup(format!("unknown type '{}'", label))),
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::UnsupportedGroup(msg));
        match *self {
            Dynkin::A(n) | Dynkin::Pgl(n) | Dynkin::ResPgl(n) if n < 2 => bad(format!("n = {} is below 2", n)),
            Dynkin::B(n) | Dynkin::C(n) if n < 2 => bad(format!("rank {} is below 2", n)),
            Dynkin::D(n) if n < 4 => bad(format!("D_{} is not of type D", n)),
            Dynkin::OuterD(n) if n < 4 || n % 2 == 1 => bad(format!("2D_{} needs an even n >= 4", n)),
            Dynkin::Triality(n) if n != 3 && n != 6 => bad(format!("{}D4 is not a triality form", n)),
            Dynkin::So(r) if r < 3 => bad(format!("SO of rank {} is not semisimple", r)),
            _ => Ok(()),
        }
    }

    /// Absolute type A, including the low-rank orthogonal coincidences.
    pub fn is_type_a(&self) -> bool {
        matches!(self, Dynkin::A(_) | Dynkin::Pgl(_) | Dynkin::ResPgl(_) | Dynkin::So(3) | Dynkin::So(4) | Dynkin::So(6))
    }

    pub fn is_outer(&self) -> bool {
        matches!(self, Dynkin::OuterD(_) | Dynkin::Triality(_) | Dynkin::OuterE6 | Dynkin::ResPgl(_))
    }
}

impl fmt::Display for Dynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dynkin::A(n) => write!(f, "A_{}", n - 1),
            Dynkin::B(n) => write!(f, "B_{}", n),
            Dynkin::C(n) => write!(f, "C_{}", n),
            Dynkin::D(n) => write!(f, "D_{}", n),
            Dynkin::OuterD(n) => write!(f, "2D_{}", n),
            Dynkin::Triality(n) => write!(f, "{}D_4", n),
            Dynkin::E6 => write!(f, "E_6"),
            Dynkin::OuterE6 => write!(f, "2E_6"),
            Dynkin::E7 => write!(f, "E_7"),
            Dynkin::E8 => write!(f, "E_8"),
            Dynkin::F4 => write!(f, "F_4"),
            Dynkin::G2 => write!(f, "G_2"),
            Dynkin::Pgl(n) => write!(f, "PGL_{}", n),
            Dynkin::So(r) => write!(f, "SO_{}", r),
            Dynkin::ResPgl(n) => write!(f, "Res(PGL_{})", n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub dynkin: Dynkin,
    pub isogeny: Isogeny,
    pub domain: HasseDomain,
    pub twist: Option<CoverDescriptor>,
    pub noncompact: bool,
    pub splitting_point: bool,
}

impl GroupSpec {
    /// `noncompact` defaults to true away from type A, where it must be given.
    /// `splitting_point` defaults to whether the twisting cover splits
    /// completely over S.
    pub fn new(
        dynkin: Dynkin,
        isogeny: Isogeny,
        domain: HasseDomain,
        twist: Option<CoverDescriptor>,
        noncompact: Option<bool>,
        splitting_point: Option<bool>,
    ) -> Result<Self> {
        dynkin.validate()?;
        if matches!(dynkin, Dynkin::Pgl(_) | Dynkin::ResPgl(_)) && isogeny != Isogeny::Adjoint {
            return Err(Error::UnsupportedGroup(format!("{} is adjoint", dynkin)));
        }
        if dynkin.is_outer() != twist.is_some() {
            return Err(Error::InconsistentTwist(if dynkin.is_outer() {
                format!("{} needs a twisting cover", dynkin)
            } else {
                format!("{} is an inner form and takes no twisting cover", dynkin)
            }));
        }
        if let Some(c) = &twist {
            if c.is_identity() {
                return Err(Error::InconsistentTwist(format!("{} needs a nontrivial cover", dynkin)));
            }
        }
        let noncompact = match noncompact {
            Some(b) => b,
            None if dynkin.is_type_a() => {
                return Err(Error::UnsupportedGroup(format!("{} is of type A: state noncompact explicitly", dynkin)))
            }
            None => true,
        };
        let splitting_point = splitting_point
            .unwrap_or_else(|| twist.as_ref().map_or(true, |c| c.fibers().iter().all(|f| f.residue_degree == 1)));
        Ok(GroupSpec { dynkin, isogeny, domain, twist, noncompact, splitting_point })
    }

    pub fn fundamental_group(&self) -> Result<FundGroup> {
        fundamental_group_of(self)
    }
}

pub fn fundamental_group_of(spec: &GroupSpec) -> Result<FundGroup> {
    let id = || CoverDescriptor::identity(&spec.domain);
    let mu = |m: u64| Factor::res_mu(id(), m);
    let twist_of_degree = |n: usize| -> Result<CoverDescriptor> {
        let c = spec.twist.clone().ok_or_else(|| Error::InconsistentTwist(format!("{} needs a twisting cover", spec.dynkin)))?;
        if c.degree() != n {
            return Err(Error::InconsistentTwist(format!(
                "{} needs a cover of degree {}, got {}",
                spec.dynkin,
                n,
                c.degree()
            )));
        }
        Ok(c)
    };
    let sc = spec.isogeny == Isogeny::SimplyConnected && !matches!(spec.dynkin, Dynkin::So(_));
    let factors = match spec.dynkin {
        Dynkin::OuterD(_) => {
            let c = twist_of_degree(2)?;
            if sc { vec![] } else { vec![Factor::res_mu(c, 2)] }
        }
        Dynkin::Triality(_) => {
            let c = twist_of_degree(3)?;
            if sc { vec![] } else { vec![Factor::res_one_mu(c, 2)] }
        }
        Dynkin::OuterE6 => {
            let c = twist_of_degree(2)?;
            if sc { vec![] } else { vec![Factor::res_one_mu(c, 3)] }
        }
        Dynkin::ResPgl(n) => {
            let c = spec.twist.clone().ok_or_else(|| Error::InconsistentTwist("Res(PGL) needs a cover".into()))?;
            vec![Factor::res_one_mu(c, n as u64)]
        }
        _ if sc => vec![],
        Dynkin::A(n) | Dynkin::Pgl(n) => vec![mu(n as u64)],
        Dynkin::B(_) | Dynkin::C(_) | Dynkin::E7 | Dynkin::So(_) => vec![mu(2)],
        Dynkin::D(n) if n % 2 == 1 => vec![mu(4)],
        Dynkin::D(_) => vec![mu(2), mu(2)],
        Dynkin::E6 => vec![mu(3)],
        Dynkin::E8 | Dynkin::F4 | Dynkin::G2 => vec![],
    };
    Ok(FundGroup::new(factors))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassNumber {
    Exact(BigInt),
    AtLeast(BigInt),
}

impl ClassNumber {
    pub fn value(&self) -> &BigInt {
        match self {
            ClassNumber::Exact(v) | ClassNumber::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ClassNumber::Exact(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HasseOutcome {
    Holds,
    Fails,
    /// compact case with no obstruction visible in `j`
    HoldsIfNoncompact,
}

impl fmt::Display for HasseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HasseOutcome::Holds => "holds",
            HasseOutcome::Fails => "fails",
            HasseOutcome::HoldsIfNoncompact => "holds_if_noncompact",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    /// the gcd test decides the principle
    Iff,
    /// gcd coprimality forces the principle but is not forced by it
    SufficientOnly,
    /// compact: a violated gcd condition shows failure, nothing more
    NecessaryOnly,
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::Iff => "iff",
            CriterionKind::SufficientOnly => "sufficient_only",
            CriterionKind::NecessaryOnly => "necessary_only",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseReport {
    pub outcome: HasseOutcome,
    pub criterion: CriterionKind,
    /// `gcd(|Pic(R_k)|, m_k) = 1` for every factor
    pub gcd_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauReport {
    pub tau: BigRational,
    /// `"l-formula"` or `"h-vector"`
    pub route: &'static str,
    pub crosscheck: Option<BigRational>,
}

impl TauReport {
    pub fn crosscheck_ok(&self) -> Option<bool> {
        self.crosscheck.as_ref().map(|c| *c == self.tau)
    }
}

pub fn genera_count(spec: &GroupSpec) -> Result<BigInt> {
    let f = spec.fundamental_group()?;
    Ok(f.i_group()?.order().expect("finite"))
}

pub fn class_number(spec: &GroupSpec) -> Result<ClassNumber> {
    let f = spec.fundamental_group()?;
    let j = f.j_group()?.order().expect("finite");
    Ok(if spec.noncompact { ClassNumber::Exact(j) } else { ClassNumber::AtLeast(j) })
}

/// Whether `H^1(O_S, G)` is in bijection with `H^2(O_S, F)`.
pub fn h1_applicable(spec: &GroupSpec) -> Result<()> {
    if !spec.dynkin.is_type_a() {
        return Ok(());
    }
    let f = spec.fundamental_group()?;
    let imaginary = f.factors.iter().all(|k| k.cover.is_imaginary());
    if spec.domain.s_size() == 1 && imaginary && spec.noncompact {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!(
            "{} is of type A; H^1 is only identified with H^2 for |S| = 1, an imaginary splitting cover and a noncompact group",
            spec.dynkin
        )))
    }
}

pub fn h1_size(spec: &GroupSpec) -> Result<BigInt> {
    h1_applicable(spec)?;
    let [_, _, h2] = spec.fundamental_group()?.h_vector()?;
    Ok(h2)
}

pub fn hasse_verdict(spec: &GroupSpec) -> Result<HasseReport> {
    let f = spec.fundamental_group()?;
    let j = f.j_group()?.order().expect("finite");
    let gcd_condition = f.factors.iter().all(|k| {
        let pic = k.cover.cover().pic().order().expect("finite");
        pic.gcd(&BigInt::from(k.m)).is_one()
    });
    let criterion = if !spec.noncompact {
        CriterionKind::NecessaryOnly
    } else if f.all_res_mu() {
        CriterionKind::Iff
    } else {
        CriterionKind::SufficientOnly
    };
    let outcome = if j > BigInt::one() {
        HasseOutcome::Fails
    } else if spec.noncompact {
        HasseOutcome::Holds
    } else {
        HasseOutcome::HoldsIfNoncompact
    };
    Ok(HasseReport { outcome, criterion, gcd_condition })
}

pub fn tamagawa(spec: &GroupSpec) -> Result<TauReport> {
    if spec.domain.s_size() != 1 {
        return Err(Error::NotApplicable("Tamagawa numbers are computed for |S| = 1 only".into()));
    }
    if !spec.splitting_point {
        return Err(Error::NoSplittingPoint);
    }
    h1_applicable(spec)?;
    let f = spec.fundamental_group()?;
    let t = BigRational::from_integer(f.order());
    let via_h = || -> Result<BigRational> {
        let [h0, h1, h2] = f.h_vector()?;
        let i = BigRational::from_integer(f.i_group()?.order().expect("finite"));
        let h = BigRational::from_integer(h2) / i;
        let j = BigRational::new(h1, h0);
        Ok(h * &t / j)
    };
    match f.l_value() {
        Ok(l) => Ok(TauReport { tau: l * &t, route: "l-formula", crosscheck: via_h().ok() }),
        Err(Error::UnitsUnavailable(why)) => match via_h() {
            Ok(tau) => Ok(TauReport { tau, route: "h-vector", crosscheck: None }),
            Err(_) => Err(Error::UnitsUnavailable(why)),
        },
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub genera_count: BigInt,
    pub class_number: Partial<ClassNumber>,
    pub h1_size: Partial<BigInt>,
    pub hasse: Partial<HasseReport>,
    pub tau: Partial<TauReport>,
}

impl Verdict {
    /// `genera · class number = |H^1|` when all three are exact.
    pub fn consistency(&self) -> Option<bool> {
        match (&self.class_number, &self.h1_size) {
            (Ok(ClassNumber::Exact(c)), Ok(h1)) => Some(&self.genera_count * c == *h1),
            _ => None,
        }
    }
}

pub fn verdict(spec: &GroupSpec) -> Result<Verdict> {
    Ok(Verdict {
        genera_count: genera_count(spec)?,
        class_number: class_number(spec),
        h1_size: h1_size(spec),
        hasse: hasse_verdict(spec),
        tau: tamagawa(spec),
    })
}
