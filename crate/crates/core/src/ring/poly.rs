use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, ToPrimitive, Zero};

use super::Rational;
use crate::error::{check_dim, Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Largest supported variable count.
pub const MAX_VARS: usize = 24;

/// Packed exponents, one byte per variable, variable 1 in the most
/// significant byte of `hi` and variables 17.. in `lo`. Unused bytes are zero,
/// so integer order is lexicographic order on the exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Exps {
    hi: u128,
    lo: u64,
}

const ONE_EXPS: Exps = Exps { hi: 0, lo: 0 };
/// Lowest bit of every byte except the first.
const HI_CARRY: u128 = 0x0101_0101_0101_0101_0101_0101_0101_0100;
const LO_CARRY: u64 = 0x0101_0101_0101_0100;

impl Exps {
    fn get(&self, i: usize) -> u32 {
        let byte = if i < 16 { self.hi >> (8 * (15 - i)) } else { u128::from(self.lo >> (8 * (23 - i))) };
        (byte & 0xff) as u32
    }

    fn set(&mut self, i: usize, k: u32) {
        let k = u8::try_from(k).unwrap_or_else(|_| panic!("exponent {k} exceeds {}", u8::MAX));
        if i < 16 {
            let shift = 8 * (15 - i);
            self.hi = (self.hi & !(0xff << shift)) | (u128::from(k) << shift);
        } else {
            let shift = 8 * (23 - i);
            self.lo = (self.lo & !(0xff << shift)) | (u64::from(k) << shift);
        }
    }

    fn total(&self) -> u32 {
        (0..MAX_VARS).map(|i| self.get(i)).sum()
    }

    fn to_vec(self, nvars: usize) -> Monomial {
        (0..nvars).map(|i| self.get(i)).collect()
    }
}

fn pack(e: &[u32], nvars: usize) -> Exps {
    assert_eq!(e.len(), nvars, "exponent vector length");
    let mut out = ONE_EXPS;
    for (i, &k) in e.iter().enumerate() {
        out.set(i, k);
    }
    out
}

fn times(a: &Exps, b: &Exps) -> Exps {
    let (hi, hi_over) = a.hi.overflowing_add(b.hi);
    let (lo, lo_over) = a.lo.overflowing_add(b.lo);
    // a carry crossing a byte boundary means some exponent passed 255
    let carried = (a.hi ^ b.hi ^ hi) & HI_CARRY != 0 || (a.lo ^ b.lo ^ lo) & LO_CARRY != 0;
    assert!(!(hi_over || lo_over || carried), "exponent exceeds {}", u8::MAX);
    Exps { hi, lo }
}

/// Multivariate polynomial over the rationals in `nvars` commuting variables
/// `x1..xn`.
///
/// Terms are kept canonical: no zero coefficients, all exponent vectors of
/// length `nvars`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    nvars: usize,
    /// Strictly increasing exponents, nonzero coefficients.
    terms: Vec<(Exps, Rational)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "{nvars} variables exceed {MAX_VARS}");
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `x_{axis+1}`.
    pub fn var(nvars: usize, axis: usize) -> Self {
        assert!(axis < nvars, "variable index {axis} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.push((pack(&exps, nvars), c));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(pack(&e, nvars), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == ONE_EXPS)
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.first() {
            // the constant monomial sorts first
            Some((e, c)) if *e == ONE_EXPS => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (e.to_vec(self.nvars), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.total()).max()
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(k, _)| k.cmp(&e)) {
            Ok(i) => {
                self.terms[i].1 += c;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (e, c)),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        Ok(self * other)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative along `axis` (0-based).
    ///
    /// # Panics
    /// If `axis >= nvars`; see [`Polynomial::partial`] for the checked form.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < self.nvars, "axis {axis} out of range for {} variables", self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(axis);
            if k == 0 {
                continue;
            }
            let mut e2 = *e;
            e2.set(axis, k - 1);
            out.add_term(e2, c * Rational::from_integer(k.into()));
        }
        out
    }

    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.nvars {
            return Err(Error::AxisOutOfRange { axis, dim: self.nvars });
        }
        Ok(self.derivative(axis))
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        check_dim(self.nvars, point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = point.iter().enumerate().map(|(i, &x)| x.powi(e.get(i) as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum())
    }

    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, point.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let k = e.get(i);
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Composition `self(subs[0], ..., subs[n-1])`. All substitutes must share
    /// one variable count, which becomes the variable count of the result.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        check_dim(self.nvars, subs.len())?;
        let target = match subs.first() {
            Some(s) => s.nvars,
            None => 0,
        };
        for s in subs {
            check_dim(target, s.nvars)?;
        }
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Polynomial::one(s.nvars), s.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for i in 0..self.nvars {
                let k = e.get(i) as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out += &t;
        }
        Ok(out)
    }

    /// Re-embed into a ring with more (trailing) variables.
    pub fn extend_vars(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Parse the text grammar `3/2*x1^2*x2 - x3`.
    pub fn parse(s: &str, nvars: usize) -> Result<Polynomial> {
        super::parse::parse_polynomial(s, nvars)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.total(), b.total());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let constant = *e == ONE_EXPS;
            let mut first = true;
            if constant || !mag.is_one() {
                write!(f, "{mag}")?;
                first = false;
            }
            for v in 0..self.nvars {
                let k = e.get(v);
                if k == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match k {
                    1 => write!(f, "x{}", v + 1)?,
                    _ => write!(f, "x{}^{}", v + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

/// Sums two sorted term sequences into a canonical one in a single pass.
fn merge<'a>(
    a: impl Iterator<Item = &'a (Exps, Rational)>,
    b: impl Iterator<Item = (Exps, Rational)>,
) -> Vec<(Exps, Rational)> {
    let mut a = a.peekable();
    let mut b = b.peekable();
    let mut out = Vec::with_capacity(a.size_hint().0 + b.size_hint().0);
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => return out,
        };
        match next {
            Ordering::Less => out.push(a.next().expect("peeked").clone()),
            Ordering::Greater => out.push(b.next().expect("peeked")),
            Ordering::Equal => {
                let (e, ca) = a.next().expect("peeked");
                let (_, cb) = b.next().expect("peeked");
                let c = ca + cb;
                if !c.is_zero() {
                    out.push((*e, c));
                }
            }
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        Polynomial { nvars: self.nvars, terms: merge(self.terms.iter(), rhs.terms.iter().cloned()) }
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        if rhs.terms.len() * 8 < self.terms.len() {
            for (e, c) in &rhs.terms {
                self.add_term(*e, c.clone());
            }
        } else {
            self.terms = merge(self.terms.iter(), rhs.terms.iter().cloned());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        if rhs.terms.len() * 8 < self.terms.len() {
            for (e, c) in &rhs.terms {
                self.add_term(*e, -c);
            }
        } else {
            self.terms = merge(self.terms.iter(), rhs.terms.iter().map(|(e, c)| (*e, -c)));
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        let mut products = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                products.push((times(ea, eb), ca * cb));
            }
        }
        products.sort_unstable_by_key(|x| x.0);
        let mut terms: Vec<(Exps, Rational)> = Vec::with_capacity(products.len());
        for (e, c) in products {
            match terms.last_mut() {
                Some((last, acc)) if *last == e => *acc += c,
                _ => {
                    if terms.last().is_some_and(|(_, acc)| acc.is_zero()) {
                        terms.pop();
                    }
                    terms.push((e, c));
                }
            }
        }
        if terms.last().is_some_and(|(_, acc)| acc.is_zero()) {
            terms.pop();
        }
        Polynomial { nvars: self.nvars, terms }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{frac, int};

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn display_round_trips() {
        for text in ["0", "-1/2", "x1", "-x1*x2^2 + 3/2*x1 - 1", "2*x2 - x1 + 5"] {
            let q = p(text, 2);
            assert_eq!(p(&q.to_string(), 2), q, "{text}");
        }
        assert_eq!(p("-x1*x2^2 + 3/2*x1 - 1", 2).to_string(), "-x1*x2^2 + 3/2*x1 - 1");
    }

    #[test]
    fn packed_exponents_span_all_variables() {
        let n = MAX_VARS;
        let x = |i| Polynomial::var(n, i);
        let prod = &(&x(0) * &x(15)) * &(&x(16) * &x(23));
        let (e, c) = prod.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(e.iter().enumerate().filter(|(_, &k)| k == 1).map(|(i, _)| i).collect::<Vec<_>>(), vec![0, 15, 16, 23]);
        assert_eq!(prod.derivative(16), &(&x(0) * &x(15)) * &x(23));
        assert_eq!(x(16).pow(255).degree(), Some(255));
    }

    #[test]
    #[should_panic(expected = "exponent exceeds")]
    fn exponent_overflow_panics() {
        let _ = Polynomial::var(20, 17).pow(256);
    }

    #[test]
    #[should_panic(expected = "exponent exceeds")]
    fn exponent_overflow_in_high_word_panics() {
        let _ = Polynomial::var(2, 1).pow(256);
    }

    #[test]
    fn difference_of_squares() {
        let a = p("1*x1 + 1", 1);
        let b = p("1*x1 + -1", 1);
        assert_eq!(&a * &b, p("1*x1^2 + -1", 1));
    }

    #[test]
    fn additive_identity() {
        let a = p("3/2*x1^2*x2 + -1*x2", 2);
        assert_eq!(&a + &Polynomial::zero(2), a);
    }

    #[test]
    fn power_rule_and_vanishing_partial() {
        assert_eq!(p("x1^2*x2", 2).derivative(0), p("2*x1*x2", 2));
        assert!(p("x1", 2).derivative(1).is_zero());
    }

    #[test]
    fn partial_axis_out_of_range() {
        assert_eq!(p("x1", 2).partial(2), Err(Error::AxisOutOfRange { axis: 2, dim: 2 }));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("x1 + 2*x2", 2).eval(&[1.0, 2.0]).unwrap(), 5.0);
        assert_eq!(Polynomial::zero(3).eval(&[0.3, 1.0, -2.0]).unwrap(), 0.0);
        assert_eq!(p("x1^2 + -1", 2).eval(&[3.0, 0.0]).unwrap(), 8.0);
        assert_eq!(p("x1^2 + -1", 2).eval_exact(&[int(3), frac(1, 2)]).unwrap(), int(8));
        assert!(matches!(p("x1", 2).eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mismatched_dims_are_reported() {
        assert!(matches!(
            Polynomial::one(2).try_add(&Polynomial::one(3)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(Polynomial::one(2).try_mul(&Polynomial::one(1)).is_err());
    }

    #[test]
    fn substitution_composes() {
        // x1^2 * x2 with x1 = t, x2 = t^2 + 1
        let f = p("x1^2*x2", 2);
        let out = f.substitute(&[p("x1", 1), p("x1^2 + 1", 1)]).unwrap();
        assert_eq!(out, p("x1^4 + x1^2", 1));
    }

    #[test]
    fn display_round_trips_three_vars() {
        let a = p("3/2*x1^2*x2 + -1*x3 + 7", 3);
        assert_eq!(p(&a.to_string(), 3), a);
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }
}
