//! Exact DFT of indicator functions on `F_q^n`.
//!
//! Tables hold the unnormalized sums `V(m) = sum_{x in E} chi(-m . x)`; the
//! normalized transform is `E^(m) = q^-n V(m)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::cyclotomic::CycNum;
use crate::error::Result;
use crate::field::{FieldElem, FieldSpec};
use crate::pointset::{ambient_size, decode, PointSet};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct FourierTable {
    field: Arc<FieldSpec>,
    n: usize,
    values: Vec<CycNum>,
}

/// `Tr(a b)` for all pairs, flattened `q x q`.
pub(crate) fn trace_product_table(f: &FieldSpec) -> Vec<u32> {
    let q = f.q();
    let mut t = vec![0u32; (q * q) as usize];
    for a in 0..q {
        for b in 0..q {
            t[(a * q + b) as usize] = f.trace(f.mul(FieldElem(a), FieldElem(b)));
        }
    }
    t
}

/// Residue histogram of `Tr(-m . x)` over `x in E`, for one frequency.
#[inline]
fn frequency_histogram(
    p: u32,
    q: u32,
    trmul: &[u32],
    m: &[FieldElem],
    coords: &[FieldElem],
    hist: &mut [i128],
) {
    hist.iter_mut().for_each(|h| *h = 0);
    let n = m.len();
    for x in coords.chunks_exact(n) {
        let mut t = 0u32;
        for (a, b) in m.iter().zip(x) {
            t += trmul[(a.0 * q + b.0) as usize];
        }
        let t = t % p;
        hist[((p - t) % p) as usize] += 1;
    }
}

/// Full table of unnormalized Fourier coefficients, `O(q^n |E|)`.
pub fn dft(e: &PointSet, cap: u64) -> Result<FourierTable> {
    let f = e.field().clone();
    let n = e.dim();
    let total = ambient_size(&f, n, cap)?;
    let (p, q) = (f.p(), f.q());
    let trmul = trace_product_table(&f);
    let coords = e.coords();
    let values = (0..total as u32)
        .into_par_iter()
        .map_init(
            || vec![0i128; p as usize],
            |hist, code| {
                let m = decode(&f, n, code);
                frequency_histogram(p, q, &trmul, &m, &coords, hist);
                CycNum::from_histogram(p, q, hist)
            },
        )
        .collect();
    Ok(FourierTable {
        field: f,
        n,
        values,
    })
}

impl FourierTable {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Normalization exponent: `E^(m) = q^-norm_exp * values[m]`.
    pub fn norm_exp(&self) -> u32 {
        self.n as u32
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    /// Unnormalized coefficient at the frequency with code `m`.
    pub fn value(&self, m: u32) -> &CycNum {
        &self.values[m as usize]
    }

    pub fn value_at(&self, m: &[FieldElem]) -> &CycNum {
        self.value(crate::pointset::encode(&self.field, m))
    }

    /// `E^(m)` with the `q^-n` normalization applied.
    pub fn normalized(&self, m: u32) -> CycNum {
        self.values[m as usize].clone().div_q_pow(self.n as u32)
    }

    /// JSON rows `(m, coeffs, scale, embedding)`, normalized.
    pub fn to_json_rows(&self) -> Vec<serde_json::Value> {
        (0..self.values.len() as u32)
            .map(|code| {
                let m: Vec<u32> = decode(&self.field, self.n, code)
                    .iter()
                    .map(|e| e.index())
                    .collect();
                json!({ "m": m, "value": self.normalized(code).to_json() })
            })
            .collect()
    }
}

/// `sum_m chi(m . x) V(m) == q^n 1_E(x)` for every `x in F_q^n`.
pub fn inversion_check(e: &PointSet, t: &FourierTable) -> bool {
    let f = e.field();
    if t.field() != f || t.dim() != e.dim() {
        return false;
    }
    let n = e.dim();
    let (p, q) = (f.p() as usize, f.q());
    let total = t.values.len() as u32;
    let trmul = trace_product_table(f);
    let lifted: Vec<Vec<i128>> = t
        .values
        .iter()
        .map(|v| {
            let mut h = v.coeffs().to_vec();
            h.push(0);
            h
        })
        .collect();
    let qn = (q as i128).pow(n as u32);
    (0..total).into_par_iter().all(|xcode| {
        let x = decode(f, n, xcode);
        let mut acc = vec![0i128; p];
        for mcode in 0..total {
            let m = decode(f, n, mcode);
            let mut k = 0usize;
            for (a, b) in m.iter().zip(&x) {
                k += trmul[(a.0 * q + b.0) as usize] as usize;
            }
            for (j, &c) in lifted[mcode as usize].iter().enumerate() {
                acc[(j + k) % p] += c;
            }
        }
        let got = CycNum::from_histogram(f.p(), f.q(), &acc);
        let want = if e.contains_code(xcode) { qn } else { 0 };
        got == CycNum::from_int(f.p(), f.q(), want)
    })
}

/// `sum_m |E^(m)|^2` as an exact rational; equals `q^-n |E|`.
pub fn plancherel_sum(t: &FourierTable) -> Rational {
    let f = &t.field;
    let total = t
        .values
        .par_iter()
        .map(|v| v.abs_sq())
        .reduce(|| CycNum::zero(f.p(), f.q()), |a, b| &a + &b);
    total
        .div_q_pow(2 * t.n as u32)
        .to_rational()
        .expect("sum of |E^(m)|^2 is rational")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_POINT_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u64) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::from_order(q).unwrap())
    }

    /// Independent route: sum chi(-m.x) through CycNum products, no histograms.
    fn naive_coefficient(e: &PointSet, m: &[FieldElem]) -> CycNum {
        let f = e.field();
        e.iter().fold(CycNum::zero(f.p(), f.q()), |acc, x| {
            let dot = f.dot(m, &x);
            &acc + &crate::cyclotomic::chi(f, f.neg(dot))
        })
    }

    #[test]
    fn empty_full_and_origin() {
        let f = field(3);
        let empty = PointSet::empty(f.clone(), 2).unwrap();
        let t = dft(&empty, DEFAULT_POINT_CAP).unwrap();
        assert!(t.values().iter().all(CycNum::is_zero));

        let full = PointSet::full(f.clone(), 3, DEFAULT_POINT_CAP).unwrap();
        let t = dft(&full, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(t.value(0).to_integer(), Some(27));
        assert!(t.values()[1..].iter().all(CycNum::is_zero));

        let origin = PointSet::from_codes(f.clone(), 3, [0]).unwrap();
        let t = dft(&origin, DEFAULT_POINT_CAP).unwrap();
        assert!(t.values().iter().all(|v| v.to_integer() == Some(1)));
        assert!(inversion_check(&origin, &t));
    }

    #[test]
    fn matches_naive_sum() {
        let f = field(9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = PointSet::random(f.clone(), 2, 17, &mut rng).unwrap();
        let t = dft(&e, DEFAULT_POINT_CAP).unwrap();
        for (code, m) in (0..81u32).map(|c| (c, decode(&f, 2, c))) {
            assert_eq!(t.value(code), &naive_coefficient(&e, &m));
        }
    }

    #[test]
    fn inversion_and_plancherel() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let e = PointSet::random(f.clone(), 4, 10, &mut rng).unwrap();
        let t = dft(&e, DEFAULT_POINT_CAP).unwrap();
        assert!(inversion_check(&e, &t));
        assert_eq!(plancherel_sum(&t), Rational::new(10, 81));

        let e7 = PointSet::random(f.clone(), 4, 7, &mut rng).unwrap();
        assert_eq!(
            plancherel_sum(&dft(&e7, DEFAULT_POINT_CAP).unwrap()),
            Rational::new(7, 81)
        );

        let full = PointSet::full(f.clone(), 2, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(
            plancherel_sum(&dft(&full, DEFAULT_POINT_CAP).unwrap()),
            Rational::from(1)
        );

        // A wrong table must fail inversion.
        let other = PointSet::from_codes(f.clone(), 4, [1]).unwrap();
        assert!(!inversion_check(&other, &t));
    }

    #[test]
    fn zero_sphere_in_f5_squared() {
        let f = field(5);
        let s0 =
            PointSet::filter(f.clone(), 2, DEFAULT_POINT_CAP, |x| f.norm(x).is_zero()).unwrap();
        assert_eq!(s0.len(), 9);
        let t = dft(&s0, DEFAULT_POINT_CAP).unwrap();
        assert!(inversion_check(&s0, &t));
        assert_eq!(plancherel_sum(&t), Rational::new(9, 25));
    }

    #[test]
    fn modulation_law_and_symmetry() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = PointSet::random(f.clone(), 3, 30, &mut rng).unwrap();
        let v = [f.elem(1), f.elem(4), f.elem(2)];
        let t = dft(&e, DEFAULT_POINT_CAP).unwrap();
        let tt = dft(&e.translate(&v), DEFAULT_POINT_CAP).unwrap();
        for code in 0..125u32 {
            let m = decode(&f, 3, code);
            let phase = crate::cyclotomic::chi(&f, f.neg(f.dot(&m, &v)));
            assert_eq!(tt.value(code), &(&phase * t.value(code)));
            let minus: Vec<_> = m.iter().map(|&x| f.neg(x)).collect();
            assert_eq!(t.value_at(&minus), &t.value(code).conj());
        }
    }

    #[test]
    fn cap_rejection_names_size() {
        let f = field(3);
        let e = PointSet::from_codes(f, 5, [0]).unwrap();
        let err = dft(&e, 100).unwrap_err();
        assert!(err.to_string().contains("243"), "{err}");
    }
}
