//! Arithmetic in `F_q`, `q = p^ell` odd, with precomputed lookup tables.
//!
//! An element is stored as an index in `[0, q)` whose base-`p` digits (least
//! significant first) are its coefficients in the basis `1, a, ..., a^(ell-1)`,
//! `a` a root of the field modulus. For `ell = 1` the index is the residue.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of points any enumeration may touch.
pub const DEFAULT_POINT_CAP: u64 = 1 << 24;

/// Largest field order for which `q x q` tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q` together with its addition, multiplication, trace and
/// quadratic-character tables. Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    ell: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    eta: Vec<i8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("ell", &self.ell)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, ell)` with `q = p^ell`, `p` prime.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut ell = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        ell += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, ell))
}

fn check_characteristic(p: u64, ell: u32) -> Result<()> {
    if ell == 0 {
        return Err(Error::ZeroDegree);
    }
    if p.is_multiple_of(2) {
        return Err(Error::EvenCharacteristic(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = (p as u128).checked_pow(ell).unwrap_or(u128::MAX);
    if q > MAX_FIELD_ORDER as u128 {
        return Err(Error::CapExceeded {
            what: "field order",
            size: q,
            cap: MAX_FIELD_ORDER as u128,
        });
    }
    Ok(())
}

// Polynomials over F_p are coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic.
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm && r.len() > 1 {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    poly_trim(&mut r);
    r
}

/// `true` when the monic polynomial `m` of degree `ell` has no monic factor
/// of degree `1..=ell/2`, checked by exhaustive trial division.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 || *m.last().unwrap() != 1 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = (p as usize).pow(k as u32);
        for idx in 0..count {
            let mut div = digits(idx as u32, p, k);
            div.push(1);
            let r = poly_rem(m, &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Lexicographically smallest monic irreducible of degree `ell` over `F_p`,
/// comparing coefficient vectors from the constant term upwards.
pub fn smallest_irreducible(p: u32, ell: u32) -> Vec<u32> {
    let ell = ell as usize;
    let count = (p as usize).pow(ell as u32);
    for idx in 0..count {
        // Big-endian digits of idx give (c_0, c_1, ..., c_{ell-1}) so that
        // c_0 is the most significant key.
        let mut coeffs = digits(idx as u32, p, ell);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// `F_{p^ell}` built on the lexicographically smallest irreducible modulus.
    pub fn new(p: u64, ell: u32) -> Result<Self> {
        check_characteristic(p, ell)?;
        let modulus = smallest_irreducible(p as u32, ell);
        Self::build(p as u32, ell, modulus)
    }

    /// `F_{p^ell}` on a caller-chosen monic irreducible modulus (lowest degree first).
    pub fn with_modulus(p: u64, ell: u32, modulus: Vec<u32>) -> Result<Self> {
        check_characteristic(p, ell)?;
        if modulus.len() != ell as usize + 1 || modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::Hypothesis(format!(
                "modulus {modulus:?} is not a degree-{ell} polynomial over F_{p}"
            )));
        }
        if !is_irreducible(&modulus, p as u32) {
            return Err(Error::Hypothesis(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Self::build(p as u32, ell, modulus)
    }

    /// Field of order `q`, which must be an odd prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, ell) = prime_power(q)?;
        Self::new(p, ell)
    }

    /// Parses `"p^ell"` (e.g. `"3^2"`) or a plain order such as `"7"` or `"9"`.
    pub fn parse(designation: &str) -> Result<Self> {
        let s = designation.trim();
        let bad = || Error::Parse(format!("bad field designation {designation:?}"));
        match s.split_once('^') {
            Some((p, ell)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let ell: u32 = ell.trim().parse().map_err(|_| bad())?;
                Self::new(p, ell)
            }
            None => Self::from_order(s.parse().map_err(|_| bad())?),
        }
    }

    fn build(p: u32, ell: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(ell);
        let qs = q as usize;
        let ellu = ell as usize;
        let dig: Vec<Vec<u32>> = (0..q).map(|i| digits(i, p, ellu)).collect();

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let mut prod = vec![0u32; 2 * ellu];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = dig[a]
                    .iter()
                    .zip(&dig[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = undigits(&s, p);

                prod.iter_mut().for_each(|c| *c = 0);
                for (i, x) in dig[a].iter().enumerate() {
                    for (j, y) in dig[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(ellu, 0);
                mul[a * qs + b] = undigits(&r, p);
            }
        }

        let neg: Vec<u32> = (0..qs)
            .map(|a| (0..q).find(|&b| add[a * qs + b as usize] == 0).unwrap())
            .collect();
        let mut inv = vec![0u32; qs];
        for a in 1..qs {
            inv[a] = (1..q)
                .find(|&b| mul[a * qs + b as usize] == 1)
                .ok_or_else(|| Error::Hypothesis("modulus does not define a field".into()))?;
        }

        let mut eta = vec![-1i8; qs];
        eta[0] = 0;
        for s in 1..qs {
            eta[mul[s * qs + s] as usize] = 1;
        }

        let mut trace = vec![0u32; qs];
        for (x, tr) in trace.iter_mut().enumerate() {
            let mut acc = 0usize;
            let mut frob = x;
            for _ in 0..ell {
                acc = add[acc * qs + frob] as usize;
                // frob <- frob^p
                let mut pw = 1usize;
                for _ in 0..p {
                    pw = mul[pw * qs + frob] as usize;
                }
                frob = pw;
            }
            debug_assert!(acc < p as usize, "trace must land in the prime field");
            *tr = acc as u32;
        }

        Ok(FieldSpec {
            p,
            ell,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace,
            eta,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest degree first. `[0, 1]` (the polynomial `x`) for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `"p^ell"` for extensions, plain `"p"` for prime fields.
    pub fn designation(&self) -> String {
        if self.ell == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.ell)
        }
    }

    pub fn elem(&self, index: u32) -> FieldElem {
        assert!(
            index < self.q,
            "index {index} out of range for F_{}",
            self.q
        );
        FieldElem(index)
    }

    pub fn try_elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::Parse(format!(
                "element index {index} out of range for F_{}",
                self.q
            )))
        }
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (!a.is_zero()).then(|| FieldElem(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character with `eta(0) = 0`.
    #[inline]
    pub fn eta(&self, a: FieldElem) -> i32 {
        self.eta[a.0 as usize] as i32
    }

    /// Absolute trace to `F_p`, as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, a: FieldElem) -> u32 {
        self.trace[a.0 as usize]
    }

    /// `eta(-1)`: `1` iff `q = 1 mod 4`.
    pub fn eta_minus_one(&self) -> i32 {
        self.eta(self.neg(FieldElem::ONE))
    }

    /// Smallest-index `i` with `i^2 = -1`, present iff `q = 1 mod 4`.
    pub fn sqrt_minus_one(&self) -> Option<FieldElem> {
        let m1 = self.neg(FieldElem::ONE);
        self.elements().find(|&x| self.square(x) == m1)
    }

    /// Lexicographically smallest `(a, b)` with `a^2 + b^2 = -1`.
    pub fn sum_two_squares_minus_one(&self) -> (FieldElem, FieldElem) {
        let m1 = self.neg(FieldElem::ONE);
        for a in self.elements() {
            for b in self.elements() {
                if self.add(self.square(a), self.square(b)) == m1 {
                    return (a, b);
                }
            }
        }
        unreachable!("-1 is a sum of two squares in every odd-characteristic field")
    }

    /// `v_1^2 + ... + v_k^2`.
    #[inline]
    pub fn norm(&self, v: &[FieldElem]) -> FieldElem {
        v.iter()
            .fold(FieldElem::ZERO, |acc, &x| self.add(acc, self.square(x)))
    }

    #[inline]
    pub fn dot(&self, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(u.len(), v.len());
        u.iter().zip(v).fold(FieldElem::ZERO, |acc, (&a, &b)| {
            self.add(acc, self.mul(a, b))
        })
    }

    /// Trace of `u . v` computed directly in `F_p`.
    #[inline]
    pub fn trace_dot(&self, u: &[FieldElem], v: &[FieldElem]) -> u32 {
        self.trace(self.dot(u, v))
    }
}
