//! The ratio function `phi`, the zero sphere `S_0`, the level sets `R_t`, and
//! exact closed forms for their Fourier transforms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclotomic::{chi, gauss_sum, CycNum};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::fourier::dft;
use crate::pointset::{ambient_size, decode, PointSet};
use crate::Rational;

/// `phi(x, y) = ||x' - y'|| / ||x'' - y''||`, or 0 when the denominator vanishes.
pub fn phi(f: &FieldSpec, x: &[FieldElem], y: &[FieldElem]) -> Result<FieldElem> {
    if x.len() != y.len() {
        return Err(Error::Dimension(y.len(), "phi arguments differ in length"));
    }
    if !x.len().is_multiple_of(2) || x.is_empty() {
        return Err(Error::Dimension(
            x.len(),
            "phi needs an even positive dimension",
        ));
    }
    Ok(phi_unchecked(f, x, y))
}

#[inline]
pub(crate) fn phi_unchecked(f: &FieldSpec, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
    let half = x.len() / 2;
    let mut top = FieldElem::ZERO;
    let mut bottom = FieldElem::ZERO;
    for i in 0..half {
        top = f.add(top, f.square(f.sub(x[i], y[i])));
        bottom = f.add(bottom, f.square(f.sub(x[half + i], y[half + i])));
    }
    f.div(top, bottom).unwrap_or(FieldElem::ZERO)
}

/// `{x in F_q^n : ||x|| = 0}`.
pub fn zero_sphere(f: &Arc<FieldSpec>, n: usize, cap: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Dimension(n, "zero sphere needs n >= 1"));
    }
    PointSet::filter(f.clone(), n, cap, |x| f.norm(x).is_zero())
}

/// `R_t = {x in F_q^d : phi(x, 0) = t}`.
pub fn ratio_sphere(f: &Arc<FieldSpec>, d: usize, t: FieldElem, cap: u64) -> Result<PointSet> {
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::Dimension(
            d,
            "ratio sphere needs an even positive dimension",
        ));
    }
    let zero = vec![FieldElem::ZERO; d];
    PointSet::filter(f.clone(), d, cap, |x| phi_unchecked(f, x, &zero) == t)
}

/// Which rational specialization of the zero-sphere transform applies in
/// dimension `n`, decided from `n mod 4` and `eta(-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum S0Case {
    /// `n = 0 mod 4`.
    EvenZeroMod4,
    /// `n = 2 mod 4`, `q = 1 mod 4`.
    EvenTwoMod4Plus,
    /// `n = 2 mod 4`, `q = 3 mod 4`.
    EvenTwoMod4Minus,
    /// `n = 3 mod 4`: decay `q^-(n+1)/2 eta(-||m||)`.
    OddThreeMod4,
    /// `n = 1 mod 4`, `n >= 5`: decay `q^-(n+1)/2 eta(||m||)`.
    OddOneMod4,
}

impl S0Case {
    pub fn for_dimension(f: &FieldSpec, n: usize) -> Result<Self> {
        match n % 4 {
            _ if n < 2 => Err(Error::Dimension(n, "zero-sphere closed form needs n >= 2")),
            0 => Ok(S0Case::EvenZeroMod4),
            2 if f.eta_minus_one() == 1 => Ok(S0Case::EvenTwoMod4Plus),
            2 => Ok(S0Case::EvenTwoMod4Minus),
            3 => Ok(S0Case::OddThreeMod4),
            _ => Ok(S0Case::OddOneMod4),
        }
    }
}

pub(crate) fn q_pow_rat(q: u32, e: i32) -> Rational {
    let base = Rational::from(q as i128);
    if e >= 0 {
        rat_pow(base, e as u32)
    } else {
        rat_pow(base, (-e) as u32).recip()
    }
}

fn rat_pow(base: Rational, e: u32) -> Rational {
    (0..e).fold(Rational::from(1), |acc, _| acc * base)
}

/// Zero-sphere transform from the general Gauss-sum formula,
/// `delta(m)/q + q^-(n+1) eta^n(-1) G_1^n sum_{r != 0} eta^n(r) chi(r ||m||)`,
/// as a function of the frequency class (`m = 0`? and `||m||`).
pub(crate) fn s0_ft_by_class(f: &FieldSpec, n: usize, origin: bool, norm: FieldElem) -> CycNum {
    let (p, q) = (f.p(), f.q());
    let g1 = gauss_sum(f, FieldElem::ONE).expect("1 is nonzero");
    let odd = n % 2 == 1;
    let eta_n = |x: FieldElem| {
        if odd {
            f.eta(x)
        } else {
            (x != FieldElem::ZERO) as i32
        }
    };
    let mut inner = CycNum::zero(p, q);
    for r in f.nonzero() {
        inner += &chi(f, f.mul(r, norm)).scale(eta_n(r) as i128);
    }
    let sign = eta_n(f.neg(FieldElem::ONE)) as i128;
    let tail = (&g1.pow(n as u32) * &inner)
        .scale(sign)
        .div_q_pow(n as u32 + 1);
    let head = if origin {
        CycNum::one(p, q).div_q_pow(1)
    } else {
        CycNum::zero(p, q)
    };
    &head + &tail
}

/// `S_0^(m')` for `S_0 ⊂ F_q^n`, `n >= 2`, evaluated exactly from the Gauss-sum formula.
pub fn s0_ft_closed(f: &FieldSpec, n: usize, m: &[FieldElem]) -> Result<CycNum> {
    if n < 2 {
        return Err(Error::Dimension(n, "zero-sphere closed form needs n >= 2"));
    }
    if m.len() != n {
        return Err(Error::Dimension(m.len(), "frequency length differs from n"));
    }
    let origin = m.iter().all(|x| x.is_zero());
    Ok(s0_ft_by_class(f, n, origin, f.norm(m)))
}

/// Rational specialization of `S_0^(m')` selected by [`S0Case`].
pub fn s0_ft_case_value(f: &FieldSpec, n: usize, m: &[FieldElem]) -> Result<(S0Case, Rational)> {
    let case = S0Case::for_dimension(f, n)?;
    if m.len() != n {
        return Err(Error::Dimension(m.len(), "frequency length differs from n"));
    }
    let q = f.q();
    let origin = m.iter().all(|x| x.is_zero());
    let norm = f.norm(m);
    let head = if origin {
        q_pow_rat(q, -1)
    } else {
        Rational::from(0)
    };
    let ni = n as i32;
    let value = match case {
        S0Case::EvenZeroMod4 | S0Case::EvenTwoMod4Plus | S0Case::EvenTwoMod4Minus => {
            // G_1^n = (eta(-1) q)^(n/2); its sign is +1 unless n = 2 mod 4 and q = 3 mod 4.
            let s = Rational::from(if case == S0Case::EvenTwoMod4Minus {
                -1
            } else {
                1
            });
            let near = q_pow_rat(q, -ni / 2);
            let far = q_pow_rat(q, -(ni / 2 + 1));
            if norm.is_zero() {
                head + s * (near - far)
            } else {
                -s * far
            }
        }
        S0Case::OddThreeMod4 | S0Case::OddOneMod4 => {
            if norm.is_zero() {
                head
            } else {
                let arg = if case == S0Case::OddThreeMod4 {
                    f.neg(norm)
                } else {
                    norm
                };
                q_pow_rat(q, -(ni + 1) / 2) * Rational::from(f.eta(arg) as i128)
            }
        }
    };
    Ok((case, value))
}

#[derive(Clone, Debug, Serialize)]
pub struct FtFailure {
    pub t: Option<u32>,
    pub m: Vec<u32>,
    pub direct: String,
    pub closed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FtVerdict {
    pub pass: bool,
    pub case: Option<S0Case>,
    pub checked: usize,
    pub first_failure: Option<FtFailure>,
}

/// Compares the direct DFT of `S_0 ⊂ F_q^n` against both the Gauss-sum
/// formula and the rational case table at every frequency.
pub fn verify_s0_ft(f: &Arc<FieldSpec>, n: usize, cap: u64) -> Result<FtVerdict> {
    let case = S0Case::for_dimension(f, n)?;
    let s0 = zero_sphere(f, n, cap)?;
    let table = dft(&s0, cap)?;
    let mut cache: HashMap<(bool, FieldElem), CycNum> = HashMap::new();
    let mut checked = 0;
    for code in 0..table.values().len() as u32 {
        let m = decode(f, n, code);
        let origin = code == 0;
        let norm = f.norm(&m);
        let closed = cache
            .entry((origin, norm))
            .or_insert_with(|| s0_ft_by_class(f, n, origin, norm))
            .clone();
        let direct = table.normalized(code);
        let (_, rational) = s0_ft_case_value(f, n, &m)?;
        let agree = direct == closed && closed.to_rational() == Some(rational);
        checked += 1;
        if !agree {
            return Ok(FtVerdict {
                pass: false,
                case: Some(case),
                checked,
                first_failure: Some(FtFailure {
                    t: None,
                    m: m.iter().map(|e| e.index()).collect(),
                    direct: direct.to_string(),
                    closed: format!("{closed} (case value {rational})"),
                }),
            });
        }
    }
    Ok(FtVerdict {
        pass: true,
        case: Some(case),
        checked,
        first_failure: None,
    })
}

/// Precomputed pieces of the `R_t` closed form for one `(field, d)`.
pub(crate) struct RtClosedForm<'a> {
    f: &'a FieldSpec,
    d: usize,
    g_d: CycNum,
    s0: HashMap<(bool, FieldElem), CycNum>,
}

impl<'a> RtClosedForm<'a> {
    pub(crate) fn new(f: &'a FieldSpec, d: usize) -> Result<Self> {
        if !d.is_multiple_of(2) || d < 4 {
            return Err(Error::Dimension(
                d,
                "ratio-sphere closed form needs even d >= 4",
            ));
        }
        let g1 = gauss_sum(f, FieldElem::ONE)?;
        let n = d / 2;
        let mut s0 = HashMap::new();
        for norm in f.elements() {
            for origin in [false, true] {
                if origin && !norm.is_zero() {
                    continue;
                }
                s0.insert((origin, norm), s0_ft_by_class(f, n, origin, norm));
            }
        }
        Ok(RtClosedForm {
            f,
            d,
            g_d: g1.pow(d as u32),
            s0,
        })
    }

    pub(crate) fn s0(&self, origin: bool, norm: FieldElem) -> &CycNum {
        &self.s0[&(origin, norm)]
    }

    /// `G_1^d`.
    pub(crate) fn g_d(&self) -> &CycNum {
        &self.g_d
    }

    /// `eta^(d/2)(-t)` for `t != 0`.
    pub(crate) fn eta_half_d(&self, t: FieldElem) -> i32 {
        if (self.d / 2) % 2 == 1 {
            self.f.eta(self.f.neg(t))
        } else {
            1
        }
    }

    pub(crate) fn eval(&self, t: FieldElem, m: &[FieldElem]) -> CycNum {
        let f = self.f;
        let (p, q) = (f.p(), f.q());
        let n = self.d / 2;
        let (m1, m2) = m.split_at(n);
        let o1 = m1.iter().all(|x| x.is_zero());
        let o2 = m2.iter().all(|x| x.is_zero());
        let (n1, n2) = (f.norm(m1), f.norm(m2));

        let mut out = if o1 && o2 {
            CycNum::one(p, q).div_q_pow(1)
        } else {
            CycNum::zero(p, q)
        };
        out = &out - &(self.s0(o1, n1) * self.s0(o2, n2));
        let on_cone = f.sub(f.mul(t, n1), n2).is_zero();
        let bracket = if on_cone { q as i128 - 1 } else { -1 };
        let last = self
            .g_d
            .clone()
            .scale(self.eta_half_d(t) as i128 * bracket)
            .div_q_pow(self.d as u32 + 1);
        &out + &last
    }
}

/// `R_t^(m)` for `t != 0` from the closed form
/// `q^-1 delta(m) - S_0^(m') S_0^(m'') + G_1^d q^(-d-1) eta^(d/2)(-t) (q delta(t||m'|| - ||m''||) - 1)`.
pub fn rt_ft_closed(f: &FieldSpec, d: usize, t: FieldElem, m: &[FieldElem]) -> Result<CycNum> {
    if t.is_zero() {
        return Err(Error::ZeroArgument("ratio t"));
    }
    if m.len() != d {
        return Err(Error::Dimension(m.len(), "frequency length differs from d"));
    }
    Ok(RtClosedForm::new(f, d)?.eval(t, m))
}

/// Direct DFT of every `R_t`, `t != 0`, against the closed form at every frequency.
pub fn verify_rt_ft(f: &Arc<FieldSpec>, d: usize, cap: u64) -> Result<FtVerdict> {
    let closed = RtClosedForm::new(f, d)?;
    ambient_size(f, d, cap)?;
    let mut checked = 0;
    for t in f.nonzero() {
        let rt = ratio_sphere(f, d, t, cap)?;
        let table = dft(&rt, cap)?;
        for code in 0..table.values().len() as u32 {
            let m = decode(f, d, code);
            let want = closed.eval(t, &m);
            let got = table.normalized(code);
            checked += 1;
            if got != want {
                return Ok(FtVerdict {
                    pass: false,
                    case: None,
                    checked,
                    first_failure: Some(FtFailure {
                        t: Some(t.index()),
                        m: m.iter().map(|e| e.index()).collect(),
                        direct: got.to_string(),
                        closed: want.to_string(),
                    }),
                });
            }
        }
    }
    Ok(FtVerdict {
        pass: true,
        case: None,
        checked,
        first_failure: None,
    })
}
