//! Exact scalars: rationals, phases in ℚ/ℤ and cyclotomic numbers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};

/// Exact rational number.
pub type Q = num_rational::Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a.lcm(&b)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Element of a cyclotomic field, stored as a finite ℚ-combination of
/// roots of unity `e(φ) = exp(2πiφ)` with `φ ∈ [0,1)`.
///
/// The formal representation is not unique (`1 + e(1/2) = 0`); equality and
/// `is_zero` reduce modulo the relevant cyclotomic polynomial.
#[derive(Clone, Debug, Default)]
pub struct Cyclo {
    terms: BTreeMap<Q, Q>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo::default()
    }

    pub fn one() -> Self {
        Cyclo::root(Q::zero())
    }

    pub fn rational(x: Q) -> Self {
        let mut c = Cyclo::zero();
        c.push(Q::zero(), x);
        c
    }

    /// The root of unity `e(phase)`.
    pub fn root(phase: Q) -> Self {
        let mut c = Cyclo::zero();
        c.push(phase, Q::one());
        c
    }

    fn push(&mut self, phase: Q, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let key = frac(phase);
        let entry = self.terms.entry(key).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Formal terms `(phase, coefficient)`; not canonical.
    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, s: Q) -> Self {
        let mut out = Cyclo::zero();
        for (p, c) in &self.terms {
            out.push(*p, *c * s);
        }
        out
    }

    pub fn rotate(&self, phase: Q) -> Self {
        let mut out = Cyclo::zero();
        for (p, c) in &self.terms {
            out.push(*p + phase, *c);
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Cyclo::zero();
        for (p, c) in &self.terms {
            out.push(-*p, *c);
        }
        out
    }

    fn order(&self) -> i128 {
        self.terms.keys().fold(1, |acc, p| lcm(acc, *p.denom()))
    }

    /// Canonical coefficients in the power basis of ℚ(ζ_N), where `N` is the
    /// least common denominator of the phases involved.
    pub fn reduced(&self) -> (i128, Vec<Q>) {
        let n = self.order();
        let mut poly = vec![Q::zero(); n as usize];
        for (p, c) in &self.terms {
            let k = (*p * Q::from_integer(n)).to_integer();
            poly[k as usize] += *c;
        }
        let phi = cyclotomic_polynomial(n);
        (n, poly_rem(&poly, &phi))
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.reduced().1.iter().all(|c| c.is_zero())
    }

    /// Returns the rational value if this number is rational.
    pub fn as_rational(&self) -> Option<Q> {
        let (_, coeffs) = self.reduced();
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(coeffs.first().copied().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    /// If the number is `r·e(φ)` with `r` rational and nonzero, returns `(r, φ)`.
    /// The rational factor returned is positive.
    pub fn as_scaled_root(&self) -> Option<(Q, Q)> {
        if self.is_zero() {
            return None;
        }
        let n = 2 * self.order();
        for k in 0..n {
            let phase = Q::new(k, n);
            if let Some(r) = self.rotate(-phase).as_rational() {
                if r > Q::zero() {
                    return Some((r, phase));
                }
            }
        }
        None
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Eq for Cyclo {}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(mut self, rhs: Cyclo) -> Cyclo {
        for (p, c) in rhs.terms {
            self.push(p, c);
        }
        self
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        self + (-rhs)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        self.scale(-Q::one())
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        let mut out = Cyclo::zero();
        for (p, c) in &self.terms {
            for (p2, c2) in &rhs.terms {
                out.push(*p + *p2, *c * *c2);
            }
        }
        out
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p.is_zero() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}·e({})", c, p)?;
            }
        }
        Ok(())
    }
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: i128) -> Vec<Q> {
    // x^n - 1 divided by all Φ_d with d | n, d < n.
    let mut num = vec![Q::zero(); n as usize + 1];
    num[0] = -Q::one();
    num[n as usize] = Q::one();
    for d in 1..n {
        if n % d == 0 {
            let phi = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi);
        }
    }
    num
}

fn trim(p: &mut Vec<Q>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_div_exact(num: &[Q], den: &[Q]) -> Vec<Q> {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den[dd];
    if rem.len() <= dd {
        return vec![Q::zero()];
    }
    let mut quot = vec![Q::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * *d;
        }
    }
    quot
}

fn poly_rem(num: &[Q], den: &[Q]) -> Vec<Q> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    if rem.len() > dd {
        for k in (0..rem.len() - dd).rev() {
            let c = rem[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * *d;
            }
        }
    }
    rem.truncate(dd.max(1));
    rem
}

/// Sign `(-1)^k`.
pub fn sign(k: usize) -> i128 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn abs(x: i128) -> i128 {
    x.abs()
}
