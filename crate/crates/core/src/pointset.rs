//! Multiplicity-free subsets of `F_q^n` and their text file format.
//!
//! A point `(x_1, ..., x_n)` is encoded as the integer
//! `x_1 q^(n-1) + ... + x_n`, so sorted codes are lexicographically sorted points.
//!
//! File format:
//!
//! ```text
//! q=3^2 n=4
//! 0,1,2,8
//! 5,5,0,0
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec, DEFAULT_POINT_CAP};

/// Odometer step on a coordinate vector; last coordinate varies fastest.
pub(crate) fn increment(f: &FieldSpec, v: &mut [FieldElem]) {
    for x in v.iter_mut().rev() {
        if x.0 + 1 < f.q() {
            x.0 += 1;
            return;
        }
        x.0 = 0;
    }
}

/// `q^n`, refusing anything above `cap`.
pub fn ambient_size(f: &FieldSpec, n: usize, cap: u64) -> Result<u64> {
    let size = (f.q() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 || size > u32::MAX as u128 {
        return Err(Error::CapExceeded {
            what: "ambient space F_q^n",
            size,
            cap: cap.min(u32::MAX as u64) as u128,
        });
    }
    Ok(size as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Arc<FieldSpec>,
    n: usize,
    points: Vec<u32>,
}

impl PointSet {
    /// Builds a set from point codes; duplicates collapse.
    pub fn from_codes(
        field: Arc<FieldSpec>,
        n: usize,
        codes: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let total = ambient_size(&field, n, DEFAULT_POINT_CAP)?;
        let mut points: Vec<u32> = codes.into_iter().collect();
        if let Some(&bad) = points.iter().find(|&&c| c as u64 >= total) {
            return Err(Error::Parse(format!("point code {bad} outside F_q^{n}")));
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { field, n, points })
    }

    pub fn from_points<'a>(
        field: Arc<FieldSpec>,
        n: usize,
        pts: impl IntoIterator<Item = &'a [FieldElem]>,
    ) -> Result<Self> {
        let mut codes = Vec::new();
        for x in pts {
            if x.len() != n {
                return Err(Error::Dimension(
                    x.len(),
                    "point length differs from set dimension",
                ));
            }
            codes.push(encode(&field, x));
        }
        Self::from_codes(field, n, codes)
    }

    pub fn empty(field: Arc<FieldSpec>, n: usize) -> Result<Self> {
        Self::from_codes(field, n, [])
    }

    /// All of `F_q^n`, subject to `cap`.
    pub fn full(field: Arc<FieldSpec>, n: usize, cap: u64) -> Result<Self> {
        let total = ambient_size(&field, n, cap)?;
        Ok(PointSet {
            field,
            n,
            points: (0..total as u32).collect(),
        })
    }

    /// `{x in F_q^n : keep(x)}` by exhaustive enumeration.
    pub fn filter(
        field: Arc<FieldSpec>,
        n: usize,
        cap: u64,
        mut keep: impl FnMut(&[FieldElem]) -> bool,
    ) -> Result<Self> {
        let total = ambient_size(&field, n, cap)?;
        let mut x = vec![FieldElem::ZERO; n];
        let mut points = Vec::new();
        for code in 0..total as u32 {
            if keep(&x) {
                points.push(code);
            }
            increment(&field, &mut x);
        }
        Ok(PointSet { field, n, points })
    }

    /// Uniform random subset of the given size, drawn without replacement.
    pub fn random<R: Rng + ?Sized>(
        field: Arc<FieldSpec>,
        n: usize,
        size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let total = ambient_size(&field, n, DEFAULT_POINT_CAP)?;
        if size as u64 > total {
            return Err(Error::Hypothesis(format!(
                "cannot draw {size} distinct points from F_q^{n} of size {total}"
            )));
        }
        let idx = rand::seq::index::sample(rng, total as usize, size);
        Self::from_codes(field, n, idx.into_iter().map(|i| i as u32))
    }

    /// `A x B` in `F_q^(n_A + n_B)`.
    pub fn product(a: &PointSet, b: &PointSet) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(
                "product of sets over different fields".into(),
            ));
        }
        let n = a.n + b.n;
        ambient_size(&a.field, n, DEFAULT_POINT_CAP)?;
        let shift = a.field.q().pow(b.n as u32);
        let codes = a
            .points
            .iter()
            .flat_map(|&x| b.points.iter().map(move |&y| x * shift + y))
            .collect::<Vec<_>>();
        Ok(PointSet {
            field: a.field.clone(),
            n,
            points: codes,
        })
    }

    /// `E + v`.
    pub fn translate(&self, v: &[FieldElem]) -> Self {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        let codes = self.iter().map(|x| {
            let y: Vec<FieldElem> = x.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect();
            encode(f, &y)
        });
        Self::from_codes(self.field.clone(), self.n, codes).expect("translate stays in range")
    }

    pub fn with_point(&self, x: &[FieldElem]) -> Self {
        let mut codes = self.points.clone();
        codes.push(encode(&self.field, x));
        Self::from_codes(self.field.clone(), self.n, codes).expect("valid point")
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn codes(&self) -> &[u32] {
        &self.points
    }

    pub fn contains_code(&self, code: u32) -> bool {
        self.points.binary_search(&code).is_ok()
    }

    pub fn contains(&self, x: &[FieldElem]) -> bool {
        x.len() == self.n && self.contains_code(encode(&self.field, x))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
        self.points.iter().map(|&c| decode(&self.field, self.n, c))
    }

    /// Coordinates of every point, row-major (`len * n` entries).
    pub fn coords(&self) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.points.len() * self.n);
        for &c in &self.points {
            out.extend(decode(&self.field, self.n, c));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("q={} n={}\n", self.field.designation(), self.n);
        for x in self.iter() {
            let row: Vec<String> = x.iter().map(|e| e.index().to_string()).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty point-set file".into()))?;
        let mut q = None;
        let mut n = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("q", v)) => q = Some(v),
                Some(("n", v)) => {
                    n = Some(
                        v.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad dimension {v:?}")))?,
                    )
                }
                _ => return Err(Error::Parse(format!("unexpected header token {tok:?}"))),
            }
        }
        let (q, n) = match (q, n) {
            (Some(q), Some(n)) => (q, n),
            _ => {
                return Err(Error::Parse(format!(
                    "header must be \"q=<p^ell> n=<n>\", got {header:?}"
                )))
            }
        };
        let field = Arc::new(FieldSpec::parse(q)?);
        let mut codes = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let coords: Vec<FieldElem> = line
                .split(',')
                .map(|t| {
                    let v: u64 = t.trim().parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad entry {t:?}", lineno + 2))
                    })?;
                    field.try_elem(v)
                })
                .collect::<Result<_>>()?;
            if coords.len() != n {
                return Err(Error::Parse(format!(
                    "line {}: expected {n} coordinates, found {}",
                    lineno + 2,
                    coords.len()
                )));
            }
            codes.push(encode(&field, &coords));
        }
        Self::from_codes(field, n, codes)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

pub fn encode(f: &FieldSpec, x: &[FieldElem]) -> u32 {
    x.iter().fold(0u32, |acc, e| acc * f.q() + e.index())
}

pub fn decode(f: &FieldSpec, n: usize, mut code: u32) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::ZERO; n];
    for x in out.iter_mut().rev() {
        *x = FieldElem(code % f.q());
        code /= f.q();
    }
    out
}
