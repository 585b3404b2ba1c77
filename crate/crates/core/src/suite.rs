//! Verification batteries emitting one JSON record per check.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{
    bound_thm_main1, bound_thm_main22, check_bound, nu_brute, nu_fourier, nu_profile_brute,
    phi_image, sample_sets, threshold_experiment, BoundCase, NuFourier, NuMethod, ThresholdConfig,
    DEFAULT_PAIR_BUDGET,
};
use crate::cyclotomic::{
    chi, completed_square_sum, complex_embed, gauss_sum, gauss_sum_expected, orthogonality_sum,
    verify_gauss_square,
};
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldElem, FieldSpec, DEFAULT_POINT_CAP};
use crate::fourier::{dft, inversion_check, plancherel_sum};
use crate::isotropic::{max_isotropic_brute, max_isotropic_construct, sharpness_set, verify_null};
use crate::pointset::{decode, PointSet};
use crate::varieties::{
    phi, ratio_sphere, rt_ft_closed, s0_ft_closed, verify_rt_ft, verify_s0_ft, zero_sphere,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_ok(self) -> bool {
        self != Verdict::Fail
    }
}

/// One check. Exact values are strings; `wall_ms` is the only float.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub id: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub verdict: Verdict,
    /// Library operations exercised by this check.
    pub ops: Vec<&'static str>,
    pub wall_ms: f64,
}

impl ReportRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Every operation a full default run must exercise.
pub const ALL_OPS: &[&str] = &[
    "field_new",
    "eta",
    "trace",
    "sqrt_minus_one",
    "sum_two_squares_minus_one",
    "chi",
    "orthogonality_sum",
    "gauss_sum",
    "verify_gauss_square",
    "completed_square_sum",
    "complex_embed",
    "dft",
    "inversion_check",
    "plancherel_sum",
    "phi",
    "zero_sphere",
    "ratio_sphere",
    "s0_ft_closed",
    "verify_s0_ft",
    "rt_ft_closed",
    "verify_rt_ft",
    "nu_brute",
    "nu_fourier",
    "phi_image",
    "bound_thm_main1",
    "bound_thm_main22",
    "threshold_experiment",
    "max_isotropic_construct",
    "max_isotropic_brute",
    "sharpness_set",
    "verify_null",
    "run_suite",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Battery {
    Gauss,
    SphereFt,
    RtFt,
    NuCross,
    Theorem12,
    Theorem13Bounds,
    Sharpness,
    Isotropic,
}

impl Battery {
    pub const ALL: [Battery; 8] = [
        Battery::Gauss,
        Battery::SphereFt,
        Battery::RtFt,
        Battery::NuCross,
        Battery::Theorem12,
        Battery::Theorem13Bounds,
        Battery::Sharpness,
        Battery::Isotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Battery::Gauss => "gauss",
            Battery::SphereFt => "sphere-ft",
            Battery::RtFt => "rt-ft",
            Battery::NuCross => "nu-cross",
            Battery::Theorem12 => "theorem-1.2",
            Battery::Theorem13Bounds => "theorem-1.3-bounds",
            Battery::Sharpness => "sharpness",
            Battery::Isotropic => "isotropic",
        }
    }
}

impl FromStr for Battery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Battery::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown battery '{s}'")))
    }
}

/// Overrides for a battery run; `None` means the battery's default grid.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub field: Option<Arc<FieldSpec>>,
    pub d: Option<usize>,
    pub t: Option<u32>,
    pub sizes: Option<Vec<usize>>,
    pub samples: usize,
    pub seed: u64,
    pub cap: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            field: None,
            d: None,
            t: None,
            sizes: None,
            samples: 20,
            seed: 0,
            cap: DEFAULT_POINT_CAP,
        }
    }
}

impl ExperimentConfig {
    fn fields_or(&self, default: &[u64]) -> Result<Vec<Arc<FieldSpec>>> {
        match &self.field {
            Some(f) => Ok(vec![f.clone()]),
            None => default
                .iter()
                .map(|&q| FieldSpec::from_order(q).map(Arc::new))
                .collect(),
        }
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

struct Emitter<'a> {
    battery: Battery,
    count: usize,
    sink: &'a mut dyn FnMut(ReportRecord),
}

impl Emitter<'_> {
    fn emit(
        &mut self,
        inputs: Value,
        ops: &[&'static str],
        check: impl FnOnce() -> Result<(Value, Verdict)>,
    ) {
        let start = Instant::now();
        let (results, verdict) = match check() {
            Ok(r) => r,
            Err(e) => (json!({ "error": e.to_string() }), Verdict::Fail),
        };
        self.count += 1;
        let mut ops = ops.to_vec();
        ops.push("run_suite");
        (self.sink)(ReportRecord {
            id: format!("{}#{}", self.battery.name(), self.count),
            command: self.battery.name().to_string(),
            inputs,
            results,
            verdict,
            ops,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
}

/// Odd prime powers up to `max`.
pub fn odd_prime_powers(max: u64) -> Vec<u64> {
    (3..=max)
        .filter(|&q| q % 2 == 1 && prime_power(q).is_ok())
        .collect()
}

/// Runs one battery, streaming records to `sink`. Returns the number of failing checks.
pub fn run_suite(
    battery: Battery,
    cfg: &ExperimentConfig,
    sink: &mut dyn FnMut(ReportRecord),
) -> Result<usize> {
    let mut fails = 0usize;
    let mut counting_sink = |r: ReportRecord| {
        if r.verdict == Verdict::Fail {
            fails += 1;
        }
        sink(r)
    };
    let em = &mut Emitter {
        battery,
        count: 0,
        sink: &mut counting_sink,
    };
    match battery {
        Battery::Gauss => gauss(cfg, em)?,
        Battery::SphereFt => sphere_ft(cfg, em)?,
        Battery::RtFt => rt_ft(cfg, em)?,
        Battery::NuCross => nu_cross(cfg, em)?,
        Battery::Theorem12 => theorem12(cfg, em)?,
        Battery::Theorem13Bounds => theorem13(cfg, em)?,
        Battery::Sharpness => sharpness(cfg, em)?,
        Battery::Isotropic => isotropic(cfg, em)?,
    }
    Ok(fails)
}

fn gauss(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let qs: Vec<u64> = match &cfg.field {
        Some(f) => vec![f.q() as u64],
        None => odd_prime_powers(49),
    };
    for q in qs {
        let f = FieldSpec::from_order(q)?;
        em.emit(json!({ "q": f.designation() }), &["field_new", "gauss_sum", "verify_gauss_square", "complex_embed", "eta"], || {
            let g = gauss_sum(&f, FieldElem::ONE)?;
            let exact = verify_gauss_square(&f);
            let want = gauss_sum_expected(&f);
            let err = (complex_embed(&g) - want).norm();
            let twisted = f.nonzero().all(|a| {
                gauss_sum(&f, a).map(|ga| ga == g.clone().scale(f.eta(a) as i128)).unwrap_or(false)
            });
            Ok((
                json!({ "g1_squared": s(g.pow(2)), "embedding_error": format!("{err:.3e}"), "g_a_twist": twisted }),
                Verdict::from_bool(exact && err < 1e-9 && twisted),
            ))
        });
        if q <= 13 {
            em.emit(
                json!({ "q": f.designation() }),
                &["completed_square_sum", "chi", "trace"],
                || {
                    let mut checked = 0;
                    for a in f.nonzero() {
                        for b in f.elements() {
                            if !completed_square_sum(&f, a, b)?.holds() {
                                return Ok((
                                    json!({ "failed_at": [a.index(), b.index()] }),
                                    Verdict::Fail,
                                ));
                            }
                            checked += 1;
                        }
                    }
                    let conj = f.elements().all(|x| chi(&f, f.neg(x)) == chi(&f, x).conj());
                    Ok((
                        json!({ "pairs": checked, "chi_conjugation": conj }),
                        Verdict::from_bool(conj),
                    ))
                },
            );
        }
        if q <= 9 {
            em.emit(
                json!({ "q": f.designation(), "n": 2 }),
                &["orthogonality_sum"],
                || {
                    let mut ok = true;
                    for code in 0..q * q {
                        let beta = decode(&f, 2, code as u32);
                        let want = if code == 0 { (q * q) as i128 } else { 0 };
                        ok &= orthogonality_sum(&f, &beta)?.to_integer() == Some(want);
                    }
                    Ok((json!({ "frequencies": q * q }), Verdict::from_bool(ok)))
                },
            );
        }
    }
    Ok(())
}

fn sphere_ft(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(usize, u64)> = match (&cfg.field, cfg.d) {
        (Some(f), Some(n)) => vec![(n, f.q() as u64)],
        (Some(f), None) => vec![(2, f.q() as u64), (3, f.q() as u64)],
        (None, _) => vec![
            (2, 3),
            (2, 5),
            (2, 7),
            (4, 3),
            (4, 5),
            (6, 3),
            (3, 3),
            (3, 5),
            (3, 7),
            (5, 3),
        ],
    };
    for (n, q) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        em.emit(
            json!({ "q": f.designation(), "n": n }),
            &["verify_s0_ft", "zero_sphere", "dft", "s0_ft_closed"],
            || {
                let v = verify_s0_ft(&f, n, cfg.cap)?;
                Ok((
                    serde_json::to_value(&v).expect("verdict serializes"),
                    Verdict::from_bool(v.pass),
                ))
            },
        );
        em.emit(json!({ "q": f.designation(), "n": n }), &["zero_sphere", "dft", "inversion_check", "plancherel_sum"], || {
            let s0 = zero_sphere(&f, n, cfg.cap)?;
            let t = dft(&s0, cfg.cap)?;
            let inv = inversion_check(&s0, &t);
            let pl = plancherel_sum(&t);
            let want = Rational::new(s0.len() as i128, (q as i128).pow(n as u32));
            let origin = s0_ft_closed(&f, n, &vec![FieldElem::ZERO; n])?;
            Ok((
                json!({ "size": s0.len(), "plancherel": s(pl), "inversion": inv, "closed_at_origin": s(&origin) }),
                Verdict::from_bool(inv && pl == want && origin.to_rational() == Some(want)),
            ))
        });
    }
    Ok(())
}

fn rt_ft(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(usize, u64)> = match (&cfg.field, cfg.d) {
        (Some(f), Some(d)) => vec![(d, f.q() as u64)],
        (Some(f), None) => vec![(4, f.q() as u64)],
        (None, _) => vec![(4, 3), (4, 5), (4, 7), (6, 3)],
    };
    for (d, q) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        em.emit(
            json!({ "q": f.designation(), "d": d }),
            &["verify_rt_ft", "ratio_sphere", "rt_ft_closed", "dft"],
            || {
                let v = verify_rt_ft(&f, d, cfg.cap)?;
                let r1 = ratio_sphere(&f, d, FieldElem::ONE, cfg.cap)?;
                let origin = rt_ft_closed(&f, d, FieldElem::ONE, &vec![FieldElem::ZERO; d])?;
                let density = Rational::new(r1.len() as i128, (q as i128).pow(d as u32));
                let ok = v.pass && origin.to_rational() == Some(density);
                let mut out = serde_json::to_value(&v).expect("verdict serializes");
                out["r1_size"] = json!(r1.len());
                Ok((out, Verdict::from_bool(ok)))
            },
        );
    }
    Ok(())
}

fn nu_cross(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(u64, usize, Vec<usize>)> = match &cfg.field {
        Some(f) => {
            let q = f.q() as u64;
            let d = cfg.d.unwrap_or(4);
            vec![(
                q,
                d,
                cfg.sizes
                    .clone()
                    .unwrap_or_else(|| vec![5, 20, (q * q) as usize]),
            )]
        }
        None => vec![
            (3, 4, vec![5, 20, 9]),
            (5, 4, vec![5, 20, 25]),
            (7, 4, vec![5, 20, 49]),
            (3, 6, vec![20, 100]),
            (3, 8, vec![20, 100]),
        ],
    };
    for (q, d, sizes) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        for size in sizes {
            let inputs = json!({ "q": f.designation(), "d": d, "size": size, "samples": cfg.samples, "seed": cfg.seed.to_string() });
            em.emit(inputs, &["nu_brute", "nu_fourier", "phi_image", "phi", "dft", "plancherel_sum"], || {
                let sets = sample_sets(&f, d, size, cfg.samples, cfg.seed)?;
                let mut mismatches = Vec::new();
                let mut props = true;
                for (i, e) in sets.iter().enumerate() {
                    let brute = nu_profile_brute(e, DEFAULT_PAIR_BUDGET)?;
                    let nf = NuFourier::new(e, cfg.cap)?;
                    for t in f.nonzero() {
                        if nf.nu(t)? != brute.get(t) {
                            mismatches.push(json!([i, t.index()]));
                        }
                    }
                    props &= brute.total() == (size * size) as u64 && brute.get(FieldElem::ZERO) >= size as u64;
                    if i == 0 {
                        let t = FieldElem::ONE;
                        props &= nu_fourier(e, t, cfg.cap)? == nu_brute(e, t, DEFAULT_PAIR_BUDGET)?;
                        props &= phi_image(e, cfg.cap, DEFAULT_PAIR_BUDGET)? == brute.image();
                        let x: Vec<_> = e.iter().next().expect("nonempty");
                        props &= phi(&f, &x, &x)? == FieldElem::ZERO;
                        let table = dft(e, cfg.cap)?;
                        props &= plancherel_sum(&table) == Rational::new(size as i128, (q as i128).pow(d as u32));
                        let text = e.to_text();
                        props &= PointSet::parse(&text)? == *e;
                    }
                }
                Ok((
                    json!({ "sets": sets.len(), "mismatches": mismatches, "properties": props }),
                    Verdict::from_bool(mismatches.is_empty() && props),
                ))
            });
        }
    }
    Ok(())
}

fn theorem12(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let fields = cfg.fields_or(&[3, 7, 11])?;
    for f in fields {
        let q = f.q() as usize;
        let sizes = cfg.sizes.clone().unwrap_or_else(|| vec![q * q + 1]);
        let inputs = json!({ "q": f.designation(), "d": 4, "sizes": sizes, "samples": cfg.samples, "seed": cfg.seed.to_string() });
        em.emit(
            inputs,
            &["threshold_experiment", "bound_thm_main1", "nu_fourier"],
            || {
                if f.q() % 4 != 3 {
                    return Err(Error::Hypothesis(format!(
                        "the F_q^4 theorem needs q = 3 mod 4, got {}",
                        f.q()
                    )));
                }
                let report = threshold_experiment(&ThresholdConfig {
                    field: f.clone(),
                    d: 4,
                    sizes: sizes.clone(),
                    samples: cfg.samples,
                    seed: cfg.seed,
                    cap: cfg.cap,
                    method: NuMethod::Fourier,
                    plant: false,
                })?;
                let mut ok = true;
                for r in &report.sizes {
                    let bound = bound_thm_main1(r.size as u64, f.q())?;
                    let chk = check_bound("dim-4", bound, r.min_nu);
                    ok &= chk.verdict.is_ok();
                    if r.size > q * q {
                        ok &= r.covered == r.samples && chk.verdict == Verdict::Pass;
                    }
                }
                Ok((
                    serde_json::to_value(&report).expect("report serializes"),
                    Verdict::from_bool(ok),
                ))
            },
        );
    }
    Ok(())
}

/// Default bound checks: the listed sizes plus sizes where each bound is positive.
fn theorem13(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(u64, usize, usize, BoundCase, bool)> = match (&cfg.field, cfg.d) {
        (Some(f), Some(d)) => {
            let case = if d % 4 == 2 {
                BoundCase::Part2
            } else if d % 8 == 4 && d >= 12 && f.q() % 4 == 3 {
                BoundCase::A
            } else {
                BoundCase::B
            };
            let sizes = cfg
                .sizes
                .clone()
                .unwrap_or_else(|| vec![(f.q() as usize).pow(d as u32 / 2)]);
            sizes
                .into_iter()
                .map(|s| (f.q() as u64, d, s, case, false))
                .collect()
        }
        _ => vec![
            (3, 8, 729, BoundCase::B, false),
            (3, 8, 729, BoundCase::B, true),
            (3, 6, 81, BoundCase::Part2, false),
            (3, 6, 81, BoundCase::Part2, true),
            (3, 6, 500, BoundCase::Part2, false),
            (9, 4, 6000, BoundCase::B, false),
        ],
    };
    for (q, d, size, case, constructed) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        let inputs = json!({
            "q": f.designation(), "d": d, "size": size, "case": case.label(),
            "set": if constructed { "constructed" } else { "random" },
            "samples": if constructed { 1 } else { cfg.samples }, "seed": cfg.seed.to_string(),
        });
        em.emit(
            inputs,
            &["bound_thm_main22", "nu_fourier", "sharpness_set"],
            || {
                let bound = bound_thm_main22(size as u64, f.q(), d, case)?;
                let sets = if constructed {
                    let sh = sharpness_set(&f, d)?;
                    if sh.points.len() != size {
                        return Err(Error::Hypothesis(format!(
                            "constructed set has size {}, not {size}",
                            sh.points.len()
                        )));
                    }
                    vec![sh.points]
                } else {
                    sample_sets(&f, d, size, cfg.samples, cfg.seed)?
                };
                let mut min_nu = u64::MAX;
                for e in &sets {
                    let nf = NuFourier::new(e, cfg.cap)?;
                    for t in f.nonzero() {
                        min_nu = min_nu.min(nf.nu(t)?);
                    }
                }
                let chk = check_bound(case.label(), bound, min_nu);
                Ok((
                    json!({ "bound": chk.bound, "min_nu": min_nu.to_string(), "sets": sets.len() }),
                    chk.verdict,
                ))
            },
        );
    }
    Ok(())
}

fn sharpness(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(usize, u64)> = match (&cfg.field, cfg.d) {
        (Some(f), Some(d)) => vec![(d, f.q() as u64)],
        _ => vec![
            (4, 3),
            (4, 7),
            (4, 5),
            (4, 13),
            (12, 3),
            (8, 3),
            (8, 5),
            (6, 3),
            (6, 5),
            (10, 3),
        ],
    };
    for (d, q) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        em.emit(json!({ "q": f.designation(), "d": d, "seed": cfg.seed.to_string() }), &["sharpness_set", "verify_null", "max_isotropic_construct"], || {
            let sh = sharpness_set(&f, d)?;
            let v = verify_null(&sh, cfg.seed)?;
            let ok = v.pass && sh.points.len() as u64 == sh.expected_size;
            Ok((
                json!({
                    "claim": sh.claim, "size": sh.points.len().to_string(),
                    "expected_size": sh.expected_size.to_string(), "h_dim": sh.h.dim(), "null": v,
                }),
                Verdict::from_bool(ok),
            ))
        });
    }
    Ok(())
}

fn isotropic(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<()> {
    let grid: Vec<(usize, u64)> = match (&cfg.field, cfg.d) {
        (Some(f), Some(n)) => vec![(n, f.q() as u64)],
        _ => {
            let mut g: Vec<(usize, u64)> = [3u64, 5, 7]
                .iter()
                .flat_map(|&q| (2..=5).map(move |n| (n, q)))
                .collect();
            g.push((6, 3));
            g
        }
    };
    for (n, q) in grid {
        let f = Arc::new(FieldSpec::from_order(q)?);
        em.emit(json!({ "q": f.designation(), "n": n }), &["max_isotropic_construct", "max_isotropic_brute", "sqrt_minus_one", "sum_two_squares_minus_one"], || {
            let h = max_isotropic_construct(n, &f)?;
            let brute = max_isotropic_brute(n, &f, cfg.cap)?;
            let helper_ok = match f.sqrt_minus_one() {
                Some(i) => f.square(i) == f.neg(FieldElem::ONE),
                None => {
                    let (a, b) = f.sum_two_squares_minus_one();
                    f.add(f.square(a), f.square(b)) == f.neg(FieldElem::ONE)
                }
            };
            Ok((
                json!({ "constructed_dim": h.dim(), "brute_dim": brute, "certified": h.is_certified() }),
                Verdict::from_bool(h.dim() == brute && h.is_certified() && helper_ok),
            ))
        });
    }
    Ok(())
}

/// Every battery in order.
pub fn run_all(cfg: &ExperimentConfig, sink: &mut dyn FnMut(ReportRecord)) -> Result<usize> {
    let mut fails = 0;
    for b in Battery::ALL {
        fails += run_suite(b, cfg, sink)?;
    }
    Ok(fails)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_names_round_trip() {
        for b in Battery::ALL {
            assert_eq!(b.name().parse::<Battery>().unwrap(), b);
        }
        assert!("nope".parse::<Battery>().is_err());
    }

    #[test]
    fn odd_prime_power_list() {
        assert_eq!(
            odd_prime_powers(30),
            vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]
        );
    }

    #[test]
    fn small_batteries_pass_and_are_deterministic() {
        let cfg = ExperimentConfig {
            field: Some(Arc::new(FieldSpec::from_order(3).unwrap())),
            d: Some(4),
            samples: 3,
            seed: 7,
            ..Default::default()
        };
        for b in [
            Battery::RtFt,
            Battery::NuCross,
            Battery::Sharpness,
            Battery::Isotropic,
            Battery::Theorem12,
        ] {
            let mut recs = Vec::new();
            let fails = run_suite(b, &cfg, &mut |r| recs.push(r)).unwrap();
            assert_eq!(fails, 0, "{}: {:?}", b.name(), recs);
            let mut again = Vec::new();
            run_suite(b, &cfg, &mut |r| again.push(r)).unwrap();
            for (x, y) in recs.iter().zip(&again) {
                assert_eq!((&x.results, x.verdict), (&y.results, y.verdict));
            }
        }
    }

    #[test]
    fn errors_become_failing_records() {
        let cfg = ExperimentConfig {
            field: Some(Arc::new(FieldSpec::from_order(5).unwrap())),
            samples: 2,
            ..Default::default()
        };
        let mut recs = Vec::new();
        let fails = run_suite(Battery::Theorem12, &cfg, &mut |r| recs.push(r)).unwrap();
        assert_eq!(fails, 1);
        assert!(recs[0].results["error"]
            .as_str()
            .unwrap()
            .contains("3 mod 4"));
    }
}
