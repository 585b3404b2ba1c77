//! The pair count `nu(t) = #{(x, y) in E x E : phi(x, y) = t}`.
//!
//! Two independent routes: a direct double loop, and the Fourier expansion
//!
//! ```text
//! nu(t) = q^-1 |E|^2 - sum_m S_0^(m') S_0^(m'') |V(m)|^2
//!       + q^-d G_1^d eta^(d/2)(-t) sum_{t||m'|| = ||m''||} |V(m)|^2
//!       - q^-1 G_1^d eta^(d/2)(-t) |E|
//! ```
//!
//! with `V(m) = q^d E^(m)` the unnormalized transform, valid for `t != 0`. The Fourier route must land on a nonnegative integer.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::fourier::dft;
use crate::isotropic::sharpness_set;
use crate::pointset::{decode, PointSet};
use crate::suite::Verdict;
use crate::varieties::{phi_unchecked, q_pow_rat as qpow, RtClosedForm};
use crate::Rational;

/// Largest `|E|^2` the brute-force counter accepts.
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NuSource {
    Brute,
    Fourier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuProfile {
    pub q: u32,
    pub d: usize,
    /// `counts[t.index()] = nu(t)`.
    pub counts: Vec<u64>,
    pub source: NuSource,
}

impl NuProfile {
    pub fn get(&self, t: FieldElem) -> u64 {
        self.counts[t.index() as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn min_nonzero_t(&self) -> u64 {
        self.counts[1..].iter().copied().min().unwrap_or(0)
    }

    pub fn image(&self) -> Vec<FieldElem> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, _)| FieldElem(t as u32))
            .collect()
    }

    pub fn covers_field(&self) -> bool {
        self.counts.iter().all(|&c| c > 0)
    }
}

fn check_even(d: usize) -> Result<()> {
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::Dimension(d, "phi needs an even positive dimension"));
    }
    Ok(())
}

fn check_pairs(e: &PointSet, budget: u64) -> Result<()> {
    let pairs = (e.len() as u128).pow(2);
    if pairs > budget as u128 {
        return Err(Error::CapExceeded {
            what: "pair count |E|^2",
            size: pairs,
            cap: budget as u128,
        });
    }
    Ok(())
}

/// Every `nu(t)` at once by the double loop over `E x E`.
pub fn nu_profile_brute(e: &PointSet, budget: u64) -> Result<NuProfile> {
    let d = e.dim();
    check_even(d)?;
    check_pairs(e, budget)?;
    let f = e.field();
    let q = f.q() as usize;
    let coords = e.coords();
    let counts = coords
        .par_chunks_exact(d)
        .fold(
            || vec![0u64; q],
            |mut acc, x| {
                for y in coords.chunks_exact(d) {
                    acc[phi_unchecked(f, x, y).index() as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; q],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(NuProfile {
        q: f.q(),
        d,
        counts,
        source: NuSource::Brute,
    })
}

/// `nu(t)` by the double loop.
pub fn nu_brute(e: &PointSet, t: FieldElem, budget: u64) -> Result<u64> {
    let d = e.dim();
    check_even(d)?;
    check_pairs(e, budget)?;
    let f = e.field();
    let coords = e.coords();
    Ok(coords
        .par_chunks_exact(d)
        .map(|x| {
            coords
                .chunks_exact(d)
                .filter(|y| phi_unchecked(f, x, y) == t)
                .count() as u64
        })
        .sum())
}

/// The four terms of the Fourier expansion of `nu(t)`.
#[derive(Clone, Debug)]
pub struct NuTerms {
    pub main: Rational,
    pub sphere: CycNum,
    pub cone: CycNum,
    pub diagonal: CycNum,
}

impl NuTerms {
    pub fn total(&self) -> CycNum {
        let q = self.sphere.q();
        let p = self.sphere.p();
        let main = CycNum::from_rational(p, q, self.main).expect("q-power denominator");
        &(&(&main - &self.sphere) + &self.cone) - &self.diagonal
    }
}

/// Fourier-side data for one set `E`, reusable across every `t != 0`.
///
/// `|V(m)|^2` is accumulated per frequency class `(m' = 0?, ||m'||, m'' = 0?, ||m''||)`;
/// the zero-sphere transforms depend on nothing else.
pub struct NuFourier {
    field: Arc<FieldSpec>,
    d: usize,
    size: u64,
    /// Accumulated `|V(m)|^2` per class, indexed by `class(m') * (q + 1) + class(m'')`,
    /// where class is `q` for the zero vector and `||.||` otherwise.
    energy: Vec<CycNum>,
    /// `sum_m S_0^(m') S_0^(m'') |V(m)|^2`, independent of `t`.
    sphere: CycNum,
    g_d: CycNum,
}

impl NuFourier {
    pub fn new(e: &PointSet, cap: u64) -> Result<Self> {
        let d = e.dim();
        check_even(d)?;
        if d < 4 {
            return Err(Error::Dimension(d, "Fourier pair count needs d >= 4"));
        }
        let f = e.field().clone();
        let (p, q) = (f.p(), f.q());
        let table = dft(e, cap)?;
        let n = d / 2;
        let classes = q as usize + 1;
        let class = |v: &[FieldElem]| {
            if v.iter().all(|x| x.is_zero()) {
                q as usize
            } else {
                f.norm(v).index() as usize
            }
        };
        let energy = table
            .values()
            .par_iter()
            .enumerate()
            .fold(
                || vec![CycNum::zero(p, q); classes * classes],
                |mut acc, (code, v)| {
                    let m = decode(&f, d, code as u32);
                    let (m1, m2) = m.split_at(n);
                    acc[class(m1) * classes + class(m2)] += &v.abs_sq();
                    acc
                },
            )
            .reduce(
                || vec![CycNum::zero(p, q); classes * classes],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );

        let closed = RtClosedForm::new(&f, d)?;
        let s0_of = |c: usize| {
            if c == q as usize {
                closed.s0(true, FieldElem::ZERO)
            } else {
                closed.s0(false, FieldElem(c as u32))
            }
        };
        let mut sphere = CycNum::zero(p, q);
        for c1 in 0..classes {
            for c2 in 0..classes {
                let en = &energy[c1 * classes + c2];
                if en.is_zero() {
                    continue;
                }
                sphere += &(&(s0_of(c1) * s0_of(c2)) * en);
            }
        }
        Ok(NuFourier {
            d,
            size: e.len() as u64,
            energy,
            sphere,
            g_d: closed.g_d().clone(),
            field: f,
        })
    }

    /// `sum |V(m)|^2 = q^d |E|` (unnormalized Plancherel), from the class sums.
    pub fn total_energy(&self) -> CycNum {
        let f = &self.field;
        self.energy
            .iter()
            .fold(CycNum::zero(f.p(), f.q()), |acc, e| &acc + e)
    }

    pub fn terms(&self, t: FieldElem) -> Result<NuTerms> {
        if t.is_zero() {
            return Err(Error::ZeroArgument(
                "ratio t (the Fourier pair count holds only for t != 0)",
            ));
        }
        let f = &self.field;
        let (p, q) = (f.p(), f.q());
        let classes = q as usize + 1;
        let eta = if (self.d / 2) % 2 == 1 {
            f.eta(f.neg(t))
        } else {
            1
        } as i128;
        let on_cone = |c1: usize, c2: usize| {
            let n1 = if c1 == q as usize {
                FieldElem::ZERO
            } else {
                FieldElem(c1 as u32)
            };
            let n2 = if c2 == q as usize {
                FieldElem::ZERO
            } else {
                FieldElem(c2 as u32)
            };
            f.mul(t, n1) == n2
        };
        let mut cone_energy = CycNum::zero(p, q);
        for c1 in 0..classes {
            for c2 in 0..classes {
                if on_cone(c1, c2) {
                    cone_energy += &self.energy[c1 * classes + c2];
                }
            }
        }
        let size = self.size as i128;
        let d = self.d as u32;
        Ok(NuTerms {
            main: Rational::new(size * size, q as i128),
            sphere: self.sphere.clone(),
            cone: (&self.g_d * &cone_energy).scale(eta).div_q_pow(d),
            diagonal: self.g_d.clone().scale(eta * size).div_q_pow(1),
        })
    }

    /// Exact `nu(t)`, `t != 0`; fails if the expansion is not a nonnegative integer.
    pub fn nu(&self, t: FieldElem) -> Result<u64> {
        let total = self.terms(t)?.total();
        match total.to_integer() {
            Some(v) if v >= 0 => Ok(v as u64),
            _ => Err(Error::Exactness(format!(
                "Fourier pair count for t = {t} evaluated to {total}, not a nonnegative integer"
            ))),
        }
    }

    /// Profile over all `t`; `nu(0)` is filled in as `|E|^2 - sum_{t != 0} nu(t)`.
    pub fn profile(&self) -> Result<NuProfile> {
        let f = &self.field;
        let mut counts = vec![0u64; f.q() as usize];
        for t in f.nonzero() {
            counts[t.index() as usize] = self.nu(t)?;
        }
        let rest: u64 = counts.iter().sum();
        let sq = self.size * self.size;
        if rest > sq {
            return Err(Error::Exactness(format!(
                "nonzero-t counts sum to {rest} > |E|^2 = {sq}"
            )));
        }
        counts[0] = sq - rest;
        Ok(NuProfile {
            q: f.q(),
            d: self.d,
            counts,
            source: NuSource::Fourier,
        })
    }
}

/// `nu(t)` for `t != 0` from the Fourier expansion.
pub fn nu_fourier(e: &PointSet, t: FieldElem, cap: u64) -> Result<u64> {
    if t.is_zero() {
        return Err(Error::ZeroArgument(
            "ratio t (the Fourier pair count holds only for t != 0)",
        ));
    }
    NuFourier::new(e, cap)?.nu(t)
}

/// `phi(E, E)`, by the double loop when `|E|^2` fits the pair budget and by
/// the Fourier expansion otherwise.
pub fn phi_image(e: &PointSet, cap: u64, budget: u64) -> Result<Vec<FieldElem>> {
    if e.is_empty() {
        return Ok(Vec::new());
    }
    let profile = if (e.len() as u128).pow(2) <= budget as u128 {
        nu_profile_brute(e, budget)?
    } else {
        NuFourier::new(e, cap)?.profile()?
    };
    Ok(profile.image())
}

/// `(q^-1 + q^-2) |E| (|E| - q^2)`, the lower bound on `min_{t != 0} nu(t)` in
/// `F_q^4` for `q = 3 mod 4`.
pub fn bound_thm_main1(size: u64, q: u32) -> Result<Rational> {
    if q % 4 != 3 {
        return Err(Error::Hypothesis(format!(
            "the F_q^4 bound needs q = 3 mod 4, got q = {q}"
        )));
    }
    let e = Rational::from(size as i128);
    Ok((qpow(q, -1) + qpow(q, -2)) * e * (e - qpow(q, 2)))
}

/// Which of the general-dimension lower bounds to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// `d = 4 mod 8`, `d >= 12`, `q = 3 mod 4`.
    A,
    /// `d = 0 mod 4`.
    B,
    /// `d = 2 mod 4`, `d >= 6`.
    Part2,
}

impl BoundCase {
    pub fn check(self, q: u32, d: usize) -> Result<()> {
        let fail = |why: &str| {
            Err(Error::Hypothesis(format!(
                "case {self:?} at (d, q) = ({d}, {q}): {why}"
            )))
        };
        match self {
            BoundCase::A if d % 8 != 4 || d < 12 => fail("needs d = 8k + 4 with k >= 1"),
            BoundCase::A if q % 4 != 3 => fail("needs q = 3 mod 4"),
            BoundCase::B if !d.is_multiple_of(4) || d < 4 => fail("needs d = 4k with k >= 1"),
            BoundCase::Part2 if d % 4 != 2 || d < 6 => fail("needs d = 4k + 2 with k >= 1"),
            _ => Ok(()),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundCase::A => "case-A",
            BoundCase::B => "case-B",
            BoundCase::Part2 => "part-2",
        }
    }
}

/// Lower bounds on `min_{t != 0} nu(t)` in general even dimension:
///
/// * A: `q^-1|E|^2 - q^-2|E|^2 - q^((3d-8)/4)|E| - q^((d-4)/2)|E| - q^((d-2)/2)|E|`
/// * B: `q^-1|E|^2 - 4q^-2|E|^2 - 4q^((3d-4)/4)|E|`
/// * Part2: `q^-1|E|^2 - q^-2|E|^2 - 3q^((3d-6)/4)|E|`
pub fn bound_thm_main22(size: u64, q: u32, d: usize, case: BoundCase) -> Result<Rational> {
    case.check(q, d)?;
    let e = Rational::from(size as i128);
    let e2 = e * e;
    let d = d as i32;
    let v = match case {
        BoundCase::A => {
            qpow(q, -1) * e2
                - qpow(q, -2) * e2
                - qpow(q, (3 * d - 8) / 4) * e
                - qpow(q, (d - 4) / 2) * e
                - qpow(q, (d - 2) / 2) * e
        }
        BoundCase::B => {
            qpow(q, -1) * e2
                - Rational::from(4) * qpow(q, -2) * e2
                - Rational::from(4) * qpow(q, (3 * d - 4) / 4) * e
        }
        BoundCase::Part2 => {
            qpow(q, -1) * e2 - qpow(q, -2) * e2 - Rational::from(3) * qpow(q, (3 * d - 6) / 4) * e
        }
    };
    Ok(v)
}

/// A bound evaluated against an observed `min_{t != 0} nu(t)`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub bound: String,
    pub verdict: Verdict,
}

/// Every lower bound whose hypotheses hold at `(q, d)`.
pub fn applicable_bounds(size: u64, q: u32, d: usize) -> Vec<(&'static str, Rational)> {
    let mut out = Vec::new();
    if d == 4 {
        if let Ok(b) = bound_thm_main1(size, q) {
            out.push(("dim-4", b));
        }
    }
    for case in [BoundCase::A, BoundCase::B, BoundCase::Part2] {
        if let Ok(b) = bound_thm_main22(size, q, d, case) {
            out.push((case.label(), b));
        }
    }
    out
}

/// Pass when `min_nu >= bound > 0`, vacuous when `bound <= 0`.
pub fn check_bound(name: &'static str, bound: Rational, min_nu: u64) -> BoundCheck {
    let verdict = if bound <= Rational::from(0) {
        Verdict::Vacuous
    } else if Rational::from(min_nu as i128) >= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    BoundCheck {
        name,
        bound: bound.to_string(),
        verdict,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NuMethod {
    Brute,
    Fourier,
}

#[derive(Clone, Debug)]
pub struct ThresholdConfig {
    pub field: Arc<FieldSpec>,
    pub d: usize,
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub cap: u64,
    pub method: NuMethod,
    /// Replace the first sample of a size by the sharpness set of that size, if one exists.
    pub plant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlantedReport {
    pub claim: String,
    pub image: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub size: usize,
    pub samples: usize,
    pub covered: usize,
    pub coverage: String,
    pub min_nu: u64,
    pub max_min_nu: u64,
    pub bounds: Vec<BoundCheck>,
    pub planted: Option<PlantedReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub q: String,
    pub d: usize,
    pub seed: u64,
    pub method: NuMethod,
    pub sizes: Vec<SizeReport>,
}

fn size_seed(seed: u64, size: usize) -> u64 {
    seed ^ (size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Seeded random subsets of `F_q^d` for one size; deterministic in `(seed, size)`.
pub fn sample_sets(
    field: &Arc<FieldSpec>,
    d: usize,
    size: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<PointSet>> {
    let mut rng = ChaCha8Rng::seed_from_u64(size_seed(seed, size));
    (0..samples)
        .map(|_| PointSet::random(field.clone(), d, size, &mut rng))
        .collect()
}

fn profile_with(e: &PointSet, method: NuMethod, cap: u64) -> Result<NuProfile> {
    match method {
        NuMethod::Brute => nu_profile_brute(e, DEFAULT_PAIR_BUDGET),
        NuMethod::Fourier => NuFourier::new(e, cap)?.profile(),
    }
}

/// For each size, the fraction of random sets with `phi(E, E) = F_q` and the
/// spread of `min_{t != 0} nu(t)`, checked against every applicable lower bound.
pub fn threshold_experiment(cfg: &ThresholdConfig) -> Result<ThresholdReport> {
    let f = &cfg.field;
    let total = (f.q() as u128).pow(cfg.d as u32);
    let mut reports = Vec::new();
    for &size in &cfg.sizes {
        if size as u128 > total {
            return Err(Error::Hypothesis(format!(
                "size {size} exceeds q^d = {total}"
            )));
        }
        let mut sets = sample_sets(f, cfg.d, size, cfg.samples, cfg.seed)?;
        let mut planted_claim = None;
        if cfg.plant && !sets.is_empty() {
            if let Ok(sh) = sharpness_set(f, cfg.d) {
                if sh.points.len() == size {
                    planted_claim = Some(format!("{:?}", sh.claim));
                    sets[0] = sh.points;
                }
            }
        }
        let profiles: Vec<NuProfile> = sets
            .par_iter()
            .map(|e| profile_with(e, cfg.method, cfg.cap))
            .collect::<Result<_>>()?;
        let mins: Vec<u64> = profiles.iter().map(NuProfile::min_nonzero_t).collect();
        let covered = profiles.iter().filter(|p| p.covers_field()).count();
        let min_nu = mins.iter().copied().min().unwrap_or(0);
        let bounds = applicable_bounds(size as u64, f.q(), cfg.d)
            .into_iter()
            .map(|(name, b)| check_bound(name, b, min_nu))
            .collect();
        reports.push(SizeReport {
            size,
            samples: sets.len(),
            covered,
            coverage: format!("{covered}/{}", sets.len()),
            min_nu,
            max_min_nu: mins.iter().copied().max().unwrap_or(0),
            bounds,
            planted: planted_claim.map(|claim| PlantedReport {
                claim,
                image: profiles[0].image().iter().map(|t| t.index()).collect(),
            }),
        });
    }
    Ok(ThresholdReport {
        q: f.designation(),
        d: cfg.d,
        seed: cfg.seed,
        method: cfg.method,
        sizes: reports,
    })
}
