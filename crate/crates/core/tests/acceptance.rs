//! Acceptance criteria 1-10. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use ffphi::counting::{check_bound, sample_sets, DEFAULT_PAIR_BUDGET};
use ffphi::cyclotomic::completed_square_sum;
use ffphi::isotropic::{SharpnessClaim, NULL_BRUTE_PAIRS};
use ffphi::pointset::decode;
use ffphi::suite::{odd_prime_powers, Verdict};
use ffphi::{
    bound_thm_main1, bound_thm_main22, dft, gauss_sum, inversion_check, max_isotropic_brute,
    max_isotropic_construct, nu_brute, nu_profile_brute, phi, plancherel_sum, sharpness_set,
    verify_null, verify_rt_ft, verify_s0_ft, zero_sphere, BoundCase, CycNum, FieldElem, FieldSpec,
    NuFourier, Rational, S0Case, DEFAULT_POINT_CAP,
};

const CAP: u64 = DEFAULT_POINT_CAP;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn field(q: u64) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::from_order(q).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

/// `chi(x)` as a complex number, from the trace alone.
fn chi_f64(f: &FieldSpec, x: FieldElem) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * f.trace(x) as f64 / f.p() as f64)
}

/// Closed-form `G_1`: `(-1)^(l-1) sqrt q` for `p = 1 mod 4`, `(-1)^(l-1) i^l sqrt q` for `p = 3 mod 4`.
fn gauss_closed(p: u32, ell: u32, q: u32) -> Complex64 {
    let sign = if (ell - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let root = (q as f64).sqrt();
    let unit = if p % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::i().powu(ell)
    };
    unit * sign * root
}

fn criterion_1() -> Outcome {
    let qs = odd_prime_powers(49);
    for &q in &qs {
        let f = field(q);
        let g = e(gauss_sum(&f, FieldElem::ONE))?;
        let want = CycNum::from_int(f.p(), f.q(), f.eta_minus_one() as i128 * q as i128);
        ensure(&g * &g == want, || format!("q = {q}: G_1^2 = {}", &g * &g))?;
        let closed = gauss_closed(f.p(), f.ell(), f.q());
        ensure((g.embed() - closed).norm() < 1e-9, || {
            format!("q = {q}: embedding {} vs {closed}", g.embed())
        })?;
        let direct: Complex64 = f.nonzero().map(|s| chi_f64(&f, s) * f.eta(s) as f64).sum();
        ensure((direct - closed).norm() < 1e-9, || {
            format!("q = {q}: float sum {direct}")
        })?;
    }
    Ok(format!("{} fields, q <= 49", qs.len()))
}

fn criterion_2() -> Outcome {
    let mut pairs = 0;
    for q in [3u64, 5, 7, 9, 11, 13] {
        let f = field(q);
        let g = gauss_closed(f.p(), f.ell(), f.q());
        for a in f.nonzero() {
            for b in f.elements() {
                let cs = e(completed_square_sum(&f, a, b))?;
                ensure(cs.holds(), || {
                    format!("q = {q}, a = {a}, b = {b}: exact sides differ")
                })?;
                let direct: Complex64 = f
                    .elements()
                    .map(|s| chi_f64(&f, f.add(f.mul(a, f.square(s)), f.mul(b, s))))
                    .sum();
                let four_a = f.mul(f.from_int(-4), a);
                let rhs = g * f.eta(a) as f64 * chi_f64(&f, f.div(f.square(b), four_a).unwrap());
                ensure((direct - rhs).norm() < 1e-9, || {
                    format!("q = {q}, a = {a}, b = {b}: float sides differ")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (a, b) pairs"))
}

fn criterion_3() -> Outcome {
    let even = [(2usize, 3u64), (2, 5), (2, 7), (4, 3), (4, 5), (6, 3)];
    let odd = [(3usize, 3u64), (3, 5), (3, 7), (5, 3)];
    let mut freqs = 0;
    for &(n, q) in even.iter().chain(&odd) {
        let f = field(q);
        let v = e(verify_s0_ft(&f, n, CAP))?;
        ensure(v.pass, || {
            format!("(n, q) = ({n}, {q}): {:?}", v.first_failure)
        })?;
        ensure(v.checked as u64 == q.pow(n as u32), || {
            format!("(n, q) = ({n}, {q}): checked {}", v.checked)
        })?;
        let case = e(S0Case::for_dimension(&f, n))?;
        let want = match (n % 4, q % 4) {
            (0, _) => S0Case::EvenZeroMod4,
            (2, 1) => S0Case::EvenTwoMod4Plus,
            (2, _) => S0Case::EvenTwoMod4Minus,
            (3, _) => S0Case::OddThreeMod4,
            _ => S0Case::OddOneMod4,
        };
        ensure(case == want, || {
            format!("(n, q) = ({n}, {q}): case {case:?}")
        })?;
        freqs += v.checked;
    }
    Ok(format!("10 configurations, {freqs} frequencies"))
}

fn criterion_4() -> Outcome {
    let mut freqs = 0;
    for (d, q) in [(4usize, 3u64), (4, 5), (4, 7), (6, 3)] {
        let f = field(q);
        let v = e(verify_rt_ft(&f, d, CAP))?;
        ensure(v.pass, || {
            format!("(d, q) = ({d}, {q}): {:?}", v.first_failure)
        })?;
        let want = (q - 1) * q.pow(d as u32);
        ensure(v.checked as u64 == want, || {
            format!("(d, q) = ({d}, {q}): checked {} of {want}", v.checked)
        })?;
        freqs += v.checked;
    }
    Ok(format!("{freqs} (t, m) pairs"))
}

fn criterion_5() -> Outcome {
    let grid: &[(u64, usize, &[usize])] = &[
        (3, 4, &[5, 20, 9]),
        (5, 4, &[5, 20, 25]),
        (7, 4, &[5, 20, 49]),
        (3, 6, &[20, 100]),
        (3, 8, &[20, 100]),
    ];
    let mut compared = 0;
    for &(q, d, sizes) in grid {
        let f = field(q);
        for &size in sizes {
            for (i, set) in e(sample_sets(&f, d, size, 20, 5))?.iter().enumerate() {
                let nf = e(NuFourier::new(set, CAP))?;
                for t in f.nonzero() {
                    let a = e(nf.nu(t))?;
                    let b = e(nu_brute(set, t, DEFAULT_PAIR_BUDGET))?;
                    ensure(a == b, || {
                        format!("q = {q}, d = {d}, size = {size}, sample {i}, t = {t}: {a} vs {b}")
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} (set, t) comparisons"))
}

fn criterion_6() -> Outcome {
    let mut sets = 0;
    for q in [3u64, 7, 11] {
        let f = field(q);
        let size = (q * q + 1) as usize;
        // (q^-1 + q^-2) |E| (|E| - q^2) = (q + 1) |E| (|E| - q^2) / q^2
        let bound = Rational::new(
            (q as i128 + 1) * size as i128 * (size as i128 - (q * q) as i128),
            (q * q) as i128,
        );
        ensure(e(bound_thm_main1(size as u64, q as u32))? == bound, || {
            format!("q = {q}: bound value")
        })?;
        for (i, set) in e(sample_sets(&f, 4, size, 100, 42))?.iter().enumerate() {
            let nf = e(NuFourier::new(set, CAP))?;
            let mut min = u64::MAX;
            for t in f.nonzero() {
                min = min.min(e(nf.nu(t))?);
            }
            ensure(min > 0, || {
                format!("q = {q}, sample {i}: phi(E, E) misses a nonzero t")
            })?;
            ensure(Rational::from(min as i128) >= bound, || {
                format!("q = {q}, sample {i}: min nu {min} < {bound}")
            })?;
            sets += 1;
        }
    }
    Ok(format!("{sets} sets, all cover F_q and meet the bound"))
}

fn criterion_7() -> Outcome {
    let grid: &[(usize, u64, SharpnessClaim, u32)] = &[
        (4, 3, SharpnessClaim::PlaneTimesOrigin, 2),
        (4, 7, SharpnessClaim::PlaneTimesOrigin, 2),
        (4, 5, SharpnessClaim::PlaneTimesIsotropicLine, 3),
        (4, 13, SharpnessClaim::PlaneTimesIsotropicLine, 3),
        (12, 3, SharpnessClaim::CaseA, 8),
        (8, 3, SharpnessClaim::CaseB, 6),
        (8, 5, SharpnessClaim::CaseB, 6),
        (6, 3, SharpnessClaim::Part2, 4),
        (6, 5, SharpnessClaim::Part2, 4),
        (10, 3, SharpnessClaim::Part2, 7),
    ];
    let mut notes = Vec::new();
    for &(d, q, claim, exp) in grid {
        let f = field(q);
        let s = e(sharpness_set(&f, d))?;
        let want = q.pow(exp);
        ensure(s.claim == claim, || {
            format!("(d, q) = ({d}, {q}): claim {:?}", s.claim)
        })?;
        ensure(
            s.points.len() as u64 == want && s.expected_size == want,
            || format!("(d, q) = ({d}, {q}): size {} vs {want}", s.points.len()),
        )?;
        for x in s.points.iter() {
            ensure(f.norm(&x[d / 2..]).is_zero(), || {
                format!("(d, q) = ({d}, {q}): tail not isotropic")
            })?;
        }
        let v = e(verify_null(&s, 7))?;
        let brute = want * want <= NULL_BRUTE_PAIRS;
        ensure(v.subsample.is_none() == brute, || {
            format!("(d, q) = ({d}, {q}): wrong tier")
        })?;
        ensure(v.pass && v.image == [0], || {
            format!("(d, q) = ({d}, {q}): {v:?}")
        })?;
        notes.push(format!(
            "({d},{q}):{}",
            if brute {
                "all pairs"
            } else {
                "certificate+subsample"
            }
        ));
    }
    Ok(notes.join(" "))
}

/// Maximal isotropic dimension by the residue rule.
fn isotropic_dim(n: usize, q: u64) -> usize {
    match n % 2 {
        1 => (n - 1) / 2,
        _ if q % 4 == 1 || n.is_multiple_of(4) => n / 2,
        _ => (n - 2) / 2,
    }
}

fn criterion_8() -> Outcome {
    let mut grid: Vec<(usize, u64)> = [3u64, 5, 7]
        .iter()
        .flat_map(|&q| (2..=5).map(move |n| (n, q)))
        .collect();
    grid.push((6, 3));
    for &(n, q) in &grid {
        let f = field(q);
        let h = e(max_isotropic_construct(n, &f))?;
        let b = e(max_isotropic_brute(n, &f, CAP))?;
        ensure(h.is_certified(), || {
            format!("(n, q) = ({n}, {q}): certificate")
        })?;
        ensure(h.dim() == b && b == isotropic_dim(n, q), || {
            format!(
                "(n, q) = ({n}, {q}): constructed {} brute {b} rule {}",
                h.dim(),
                isotropic_dim(n, q)
            )
        })?;
    }
    Ok(format!("{} (n, q) pairs", grid.len()))
}

/// `q^2` times each bound as an integer.
fn bound_times_q2(case: BoundCase, size: i128, q: i128, d: u32) -> i128 {
    match case {
        BoundCase::B => q * size * size - 4 * size * size - 4 * q.pow((3 * d - 4) / 4 + 2) * size,
        BoundCase::Part2 => q * size * size - size * size - 3 * q.pow((3 * d - 6) / 4 + 2) * size,
        BoundCase::A => unreachable!(),
    }
}

fn criterion_9() -> Outcome {
    // (q, d, |E|, case, constructed). The last two rows sit where the bound is positive.
    let grid = [
        (3u64, 8usize, 729usize, BoundCase::B, false),
        (3, 8, 729, BoundCase::B, true),
        (3, 6, 81, BoundCase::Part2, false),
        (3, 6, 81, BoundCase::Part2, true),
        (3, 6, 500, BoundCase::Part2, false),
        (9, 4, 6000, BoundCase::B, false),
    ];
    let mut notes = Vec::new();
    for (q, d, size, case, constructed) in grid {
        let f = field(q);
        let bound = e(bound_thm_main22(size as u64, q as u32, d, case))?;
        let want = Rational::new(
            bound_times_q2(case, size as i128, q as i128, d as u32),
            (q * q) as i128,
        );
        ensure(bound == want, || {
            format!("(d, q, |E|) = ({d}, {q}, {size}): bound {bound} vs {want}")
        })?;
        let sets = if constructed {
            vec![e(sharpness_set(&f, d))?.points]
        } else {
            e(sample_sets(&f, d, size, 5, 9))?
        };
        for set in &sets {
            ensure(set.len() == size, || "set size".into())?;
            let nf = e(NuFourier::new(set, CAP))?;
            let min = f
                .nonzero()
                .map(|t| nf.nu(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|x| x.to_string())?;
            let min = *min.iter().min().unwrap();
            let chk = check_bound(case.label(), bound, min);
            let expect = if bound <= Rational::from(0) {
                Verdict::Vacuous
            } else {
                Verdict::Pass
            };
            ensure(chk.verdict == expect, || {
                format!(
                    "(d, q, |E|) = ({d}, {q}, {size}): verdict {:?}, min nu {min}, bound {bound}",
                    chk.verdict
                )
            })?;
            if bound > Rational::from(0) {
                ensure(min > 0, || "positive bound without coverage".into())?;
            }
        }
        let tag = if bound > Rational::from(0) {
            "pass"
        } else {
            "vacuous"
        };
        notes.push(format!(
            "({d},{q},{size}{}):{tag}",
            if constructed { ",H" } else { "" }
        ));
    }
    Ok(notes.join(" "))
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    let configs: &[(u64, usize, usize)] = &[
        (3, 4, 20),
        (5, 4, 25),
        (7, 4, 49),
        (3, 6, 100),
        (3, 8, 100),
        (11, 4, 122),
        (9, 4, 60),
        (13, 2, 40),
    ];
    for &(q, d, size) in configs {
        let f = field(q);
        let total = q.pow(d as u32);
        for (i, set) in e(sample_sets(&f, d, size, 3, 10))?.iter().enumerate() {
            let tag = || format!("q = {q}, d = {d}, sample {i}");
            let table = e(dft(set, CAP))?;
            ensure(
                plancherel_sum(&table) == Rational::new(size as i128, total as i128),
                || format!("{}: Plancherel", tag()),
            )?;
            if total <= 6561 {
                ensure(inversion_check(set, &table), || {
                    format!("{}: inversion", tag())
                })?;
            }
            // Translation multiplies every coefficient by chi(-m . v).
            let v = decode(&f, d, (total / 3) as u32 + 1);
            let shifted = e(dft(&set.translate(&v), CAP))?;
            for code in (0..total as u32).step_by(((total / 200) as usize).max(1)) {
                let m = decode(&f, d, code);
                let phase = ffphi::chi(&f, f.neg(f.dot(&m, &v)));
                ensure(*shifted.value(code) == &phase * table.value(code), || {
                    format!("{}: modulation", tag())
                })?;
            }
            if d >= 4 && d % 2 == 0 {
                let prof = e(nu_profile_brute(set, DEFAULT_PAIR_BUDGET))?;
                ensure(prof.total() == (size * size) as u64, || {
                    format!("{}: nu sum", tag())
                })?;
                ensure(prof.get(FieldElem::ZERO) >= size as u64, || {
                    format!("{}: nu(0) >= |E|", tag())
                })?;
                let nf = e(NuFourier::new(set, CAP))?;
                let fourier = e(nf.profile())?;
                ensure(fourier.counts == prof.counts, || {
                    format!("{}: integral Fourier profile", tag())
                })?;
            }
            if d % 2 == 0 {
                let pts: Vec<_> = set.iter().take(12).collect();
                for c in f.nonzero().take(4) {
                    for x in &pts {
                        for y in &pts {
                            let cx: Vec<_> = x.iter().map(|&a| f.mul(c, a)).collect();
                            let cy: Vec<_> = y.iter().map(|&a| f.mul(c, a)).collect();
                            ensure(e(phi(&f, &cx, &cy))? == e(phi(&f, x, y))?, || {
                                format!("{}: dilation", tag())
                            })?;
                        }
                    }
                }
            }
            checked += 1;
        }
    }
    // Zero spheres and the constructed sets touched above.
    for (n, q) in [(2usize, 5u64), (4, 3), (3, 7), (5, 3)] {
        let f = field(q);
        let s0 = e(zero_sphere(&f, n, CAP))?;
        let table = e(dft(&s0, CAP))?;
        ensure(inversion_check(&s0, &table), || {
            format!("zero sphere ({n}, {q}): inversion")
        })?;
        ensure(
            plancherel_sum(&table) == Rational::new(s0.len() as i128, q.pow(n as u32) as i128),
            || format!("zero sphere ({n}, {q}): Plancherel"),
        )?;
        checked += 1;
    }
    for (d, q) in [(4usize, 5u64), (6, 3)] {
        let s = e(sharpness_set(&field(q), d))?;
        let nf = e(NuFourier::new(&s.points, CAP))?;
        let prof = e(nf.profile())?;
        let n = s.points.len() as u64;
        ensure(prof.counts[0] == n * n && prof.total() == n * n, || {
            format!("sharpness ({d}, {q}): nu")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} sets"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (1, "Gauss sums", criterion_1, Duration::from_secs(1)),
        (2, "completed square", criterion_2, Duration::from_secs(1)),
        (
            3,
            "zero-sphere closed forms",
            criterion_3,
            Duration::from_secs(30),
        ),
        (
            4,
            "ratio-sphere closed form",
            criterion_4,
            Duration::from_secs(120),
        ),
        (
            5,
            "counting oracle equivalence",
            criterion_5,
            Duration::from_secs(300),
        ),
        (
            6,
            "dimension-4 threshold",
            criterion_6,
            Duration::from_secs(600),
        ),
        (7, "sharpness sets", criterion_7, Duration::from_secs(300)),
        (
            8,
            "maximal isotropic dimension",
            criterion_8,
            Duration::from_secs(60),
        ),
        (
            9,
            "general-dimension bounds",
            criterion_9,
            Duration::from_secs(600),
        ),
        (10, "property suite", criterion_10, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        println!(
            "criterion {id:>2} {}: {name} [{:.2}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
