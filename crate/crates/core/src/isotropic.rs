//! Totally isotropic subspaces of `x_1^2 + ... + x_n^2` and the product sets
//! `F_q^(d/2) x H` on which `phi` vanishes identically.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::nu_profile_brute;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec, DEFAULT_POINT_CAP};
use crate::pointset::{ambient_size, decode, encode, increment, PointSet};

/// Pair budget below which `verify_null` checks every pair.
pub const NULL_BRUTE_PAIRS: u64 = 10_000_000;
/// Subsample size for the pair check above the budget.
pub const NULL_SUBSAMPLE: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: Arc<FieldSpec>,
    n: usize,
    basis: Vec<Vec<FieldElem>>,
}

impl SubspaceBasis {
    pub fn new(field: Arc<FieldSpec>, n: usize, basis: Vec<Vec<FieldElem>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension(n, "basis vector length differs from n"));
        }
        let s = SubspaceBasis { field, n, basis };
        if s.rank() != s.basis.len() {
            return Err(Error::Hypothesis(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(s)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElem>] {
        &self.basis
    }

    /// `q^dim`.
    pub fn size(&self) -> u64 {
        (self.field.q() as u64).pow(self.dim() as u32)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank(&self.field, self.basis.clone())
    }

    /// Every `b_i . b_j` (including `i = j`) is zero.
    pub fn gram_is_zero(&self) -> bool {
        let f = &self.field;
        self.basis
            .iter()
            .all(|u| self.basis.iter().all(|v| f.dot(u, v).is_zero()))
    }

    /// Independent and zero Gram matrix.
    pub fn is_certified(&self) -> bool {
        self.rank() == self.dim() && self.gram_is_zero()
    }

    /// All `q^dim` vectors of the span, as point codes.
    pub fn span_codes(&self) -> Vec<u32> {
        let f = &self.field;
        let k = self.dim();
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut c = vec![FieldElem::ZERO; k];
        for _ in 0..self.size() {
            let mut v = vec![FieldElem::ZERO; self.n];
            for (ci, b) in c.iter().zip(&self.basis) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(*ci, y));
                }
            }
            out.push(encode(f, &v));
            increment(f, &mut c);
        }
        out
    }

    pub fn span(&self) -> Result<PointSet> {
        ambient_size(&self.field, self.n, DEFAULT_POINT_CAP)?;
        PointSet::from_codes(self.field.clone(), self.n, self.span_codes())
    }
}

fn rank(f: &FieldSpec, mut rows: Vec<Vec<FieldElem>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        let pivot: Vec<FieldElem> = rows[r].iter().map(|&x| f.mul(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Dimension of a maximal totally isotropic subspace of `F_q^n`:
/// `(n-1)/2` for odd `n`, `n/2` if `eta(-1)^(n/2) = 1`, else `(n-2)/2`.
pub fn max_isotropic_dim(f: &FieldSpec, n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else if (n / 2).is_multiple_of(2) || f.eta_minus_one() == 1 {
        n / 2
    } else {
        (n - 2) / 2
    }
}

/// Explicit maximal totally isotropic subspace.
///
/// `q = 1 mod 4`: `e_(2j-1) + i e_(2j)` with `i^2 = -1`.
/// `q = 3 mod 4`: blocks `(a, b, 1, 0)`, `(-b, a, 0, 1)` with `a^2 + b^2 = -1`,
/// plus `(a, b, 1)` on the last three coordinates when `n = 3 mod 4`.
pub fn max_isotropic_construct(n: usize, f: &Arc<FieldSpec>) -> Result<SubspaceBasis> {
    if n < 2 {
        return Err(Error::Dimension(n, "isotropic construction needs n >= 2"));
    }
    let mut basis = Vec::new();
    let unit = |entries: &[(usize, FieldElem)]| {
        let mut v = vec![FieldElem::ZERO; n];
        for &(i, x) in entries {
            v[i] = x;
        }
        v
    };
    if let Some(i) = f.sqrt_minus_one() {
        for j in 0..n / 2 {
            basis.push(unit(&[(2 * j, FieldElem::ONE), (2 * j + 1, i)]));
        }
    } else {
        let (a, b) = f.sum_two_squares_minus_one();
        for blk in 0..n / 4 {
            let o = 4 * blk;
            basis.push(unit(&[(o, a), (o + 1, b), (o + 2, FieldElem::ONE)]));
            basis.push(unit(&[(o, f.neg(b)), (o + 1, a), (o + 3, FieldElem::ONE)]));
        }
        if n % 4 == 3 {
            basis.push(unit(&[(n - 3, a), (n - 2, b), (n - 1, FieldElem::ONE)]));
        }
    }
    let h = SubspaceBasis::new(f.clone(), n, basis)?;
    if !h.gram_is_zero() || h.dim() != max_isotropic_dim(f, n) {
        return Err(Error::Exactness(format!(
            "construction in F_{}^{n} gave dimension {} without a zero Gram matrix",
            f.q(),
            h.dim()
        )));
    }
    Ok(h)
}

struct Search<'a> {
    f: &'a FieldSpec,
    n: usize,
    q: u32,
    /// Normalized isotropic vectors (first nonzero coordinate 1), increasing code.
    cands: Vec<Vec<FieldElem>>,
    in_span: Vec<bool>,
    best: usize,
}

impl Search<'_> {
    /// `cands[idx]` are the candidates orthogonal to the current basis.
    fn dfs(&mut self, depth: usize, span: &[u32], idx: &[usize]) {
        self.best = self.best.max(depth);
        if depth + idx.len() <= self.best {
            return;
        }
        for (pos, &i) in idx.iter().enumerate() {
            let v = &self.cands[i];
            let code = encode(self.f, v);
            if self.in_span[code as usize] {
                continue;
            }
            let mut grown = Vec::with_capacity(span.len() * self.q as usize);
            for &s in span {
                let sv = decode(self.f, self.n, s);
                for c in self.f.elements() {
                    let w: Vec<FieldElem> = sv
                        .iter()
                        .zip(v)
                        .map(|(&x, &y)| self.f.add(x, self.f.mul(c, y)))
                        .collect();
                    grown.push(encode(self.f, &w));
                }
            }
            let next: Vec<usize> = idx[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| self.f.dot(v, &self.cands[j]).is_zero())
                .collect();
            let newly: Vec<u32> = grown
                .iter()
                .copied()
                .filter(|&c| !self.in_span[c as usize])
                .collect();
            for &c in &newly {
                self.in_span[c as usize] = true;
            }
            self.dfs(depth + 1, &grown, &next);
            for &c in &newly {
                self.in_span[c as usize] = false;
            }
        }
    }
}

/// Largest dimension of a totally isotropic subspace of `F_q^n`, by exhaustive
/// search over bases built from isotropic vectors in increasing order.
pub fn max_isotropic_brute(n: usize, f: &FieldSpec, cap: u64) -> Result<usize> {
    if n < 1 {
        return Err(Error::Dimension(n, "isotropic search needs n >= 1"));
    }
    let total = ambient_size(f, n, cap)?;
    let mut cands = Vec::new();
    let mut x = vec![FieldElem::ZERO; n];
    for _ in 0..total {
        let lead = x.iter().find(|c| !c.is_zero());
        if lead == Some(&FieldElem::ONE) && f.norm(&x).is_zero() {
            cands.push(x.clone());
        }
        increment(f, &mut x);
    }
    let mut in_span = vec![false; total as usize];
    in_span[0] = true;
    let idx: Vec<usize> = (0..cands.len()).collect();
    let mut s = Search {
        f,
        n,
        q: f.q(),
        cands,
        in_span,
        best: 0,
    };
    s.dfs(0, &[0], &idx);
    Ok(s.best)
}

/// Which construction a sharpness set realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SharpnessClaim {
    /// `d = 4`, `q = 3 mod 4`: `F_q^2 x {(0, 0)}`, size `q^2`.
    PlaneTimesOrigin,
    /// `d = 4`, `q = 1 mod 4`: `F_q^2 x {(t, it)}`, size `q^3`.
    PlaneTimesIsotropicLine,
    /// `d = 8k + 4`, `k >= 1`, `q = 3 mod 4`: size `q^((3d-4)/4)`.
    CaseA,
    /// `d = 4k`, `k >= 1`, with `k` even or `q = 1 mod 4`: size `q^(3d/4)`.
    CaseB,
    /// `d = 4k + 2`, `k >= 1`: size `q^((3d-2)/4)`.
    Part2,
}

impl SharpnessClaim {
    pub fn for_params(d: usize, q: u32) -> Result<Self> {
        let q1 = q % 4 == 1;
        if d % 2 == 1 || d < 4 {
            return Err(Error::Hypothesis(format!(
                "d = {d}: sharpness sets need even d >= 4"
            )));
        }
        if d == 4 {
            return Ok(if q1 {
                Self::PlaneTimesIsotropicLine
            } else {
                Self::PlaneTimesOrigin
            });
        }
        if d % 4 == 2 {
            return Ok(Self::Part2);
        }
        let k = d / 4;
        if k.is_multiple_of(2) || q1 {
            return Ok(Self::CaseB);
        }
        if q % 4 == 3 {
            return Ok(Self::CaseA);
        }
        Err(Error::Hypothesis(format!(
            "no construction covers (d, q) = ({d}, {q})"
        )))
    }

    /// `log_q |E|`.
    pub fn size_exponent(self, d: usize) -> usize {
        match self {
            Self::PlaneTimesOrigin => 2,
            Self::PlaneTimesIsotropicLine => 3,
            Self::CaseA => (3 * d - 4) / 4,
            Self::CaseB => 3 * d / 4,
            Self::Part2 => (3 * d - 2) / 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SharpnessSet {
    pub d: usize,
    pub points: PointSet,
    pub h: SubspaceBasis,
    pub expected_size: u64,
    pub claim: SharpnessClaim,
}

/// `F_q^(d/2) x H` with `H` a maximal totally isotropic subspace of `F_q^(d/2)`.
pub fn sharpness_set(f: &Arc<FieldSpec>, d: usize) -> Result<SharpnessSet> {
    let claim = SharpnessClaim::for_params(d, f.q())?;
    let n = d / 2;
    let h = max_isotropic_construct(n, f)?;
    let expected_size = (f.q() as u64).pow(claim.size_exponent(d) as u32);
    let front = PointSet::full(f.clone(), n, DEFAULT_POINT_CAP)?;
    let points = PointSet::product(&front, &h.span()?)?;
    if points.len() as u64 != expected_size {
        return Err(Error::Exactness(format!(
            "{claim:?} at (d, q) = ({d}, {}): built {} points, expected {expected_size}",
            f.q(),
            points.len()
        )));
    }
    Ok(SharpnessSet {
        d,
        points,
        h,
        expected_size,
        claim,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NullVerdict {
    /// Zero Gram certificate, independence, and `E = F_q^(d/2) x span(H)`.
    pub algebraic: bool,
    /// Pairs checked directly; all of `E x E` or of a subsample.
    pub pairs_checked: u64,
    pub subsample: Option<usize>,
    /// `phi` values seen on the checked pairs.
    pub image: Vec<u32>,
    pub pass: bool,
}

/// Two-tier check of `phi(E, E) = {0}`: the structural certificate, plus the
/// direct pair count on all of `E` when `|E|^2 <= NULL_BRUTE_PAIRS`, else on a
/// seeded subsample.
pub fn verify_null(s: &SharpnessSet, seed: u64) -> Result<NullVerdict> {
    let e = &s.points;
    let f = e.field();
    let n = s.d / 2;
    let span: std::collections::HashSet<u32> = s.h.span_codes().into_iter().collect();
    let tail = (f.q() as u64).pow(n as u32);
    let structural = s.h.ambient_dim() == n
        && e.dim() == s.d
        && e.len() as u64 == tail * s.h.size()
        && e.codes()
            .iter()
            .all(|&c| span.contains(&((c as u64 % tail) as u32)));
    let algebraic = structural && s.h.is_certified();

    let pairs = (e.len() as u64).pow(2);
    let (checked, subsample) = if pairs <= NULL_BRUTE_PAIRS {
        (e.clone(), None)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = NULL_SUBSAMPLE.min(e.len());
        let pick = rand::seq::index::sample(&mut rng, e.len(), k);
        let codes = pick.into_iter().map(|i| e.codes()[i]);
        (PointSet::from_codes(f.clone(), s.d, codes)?, Some(k))
    };
    let prof = nu_profile_brute(&checked, u64::MAX)?;
    let image: Vec<u32> = prof.image().iter().map(|t| t.index()).collect();
    Ok(NullVerdict {
        algebraic,
        pairs_checked: prof.total(),
        subsample,
        pass: algebraic && image == [0],
        image,
    })
}
