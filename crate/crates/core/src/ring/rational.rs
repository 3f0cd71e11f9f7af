//! Exact rationals with a machine-word fast path.
//!
//! Values whose lowest-terms numerator and denominator fit in `i64` are stored
//! inline and combined in `i128`; everything else is a [`BigRational`]. The
//! representation is canonical (a value is `Small` whenever it fits), so the
//! derived equality and hash are structural.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Lowest terms, `den > 0`, `num != i64::MIN`.
    Small(i64, i64),
    /// Lowest terms and not representable as `Small`.
    Big(BigRational),
}

/// Binary gcd; `gcd(0, d) = d`.
fn gcd64(a: u64, b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    let mut a = a >> a.trailing_zeros();
    let mut b = b >> b.trailing_zeros();
    while a != b {
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        b >>= b.trailing_zeros();
    }
    a << shift
}

fn small(v: i128) -> Option<i64> {
    i64::try_from(v).ok().filter(|&x| x != i64::MIN)
}

impl Rational {
    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n.into(), 1)
    }

    /// `num / den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num.into(), den.into())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) => match (small(n), small(d)) {
                (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
                _ => Rational(Repr::Big(r)),
            },
            _ => Rational(Repr::Big(r)),
        }
    }

    /// `n / d` for `d > 0` computed in machine words.
    fn from_i64(n: i64, d: i64) -> Self {
        debug_assert!(d > 0);
        if d == 1 {
            return Rational(Repr::Small(n, 1));
        }
        let g = gcd64(n.unsigned_abs(), d as u64) as i64;
        Rational(Repr::Small(n / g, d / g))
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = if d == 1 { 1 } else { n.gcd(&d) };
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (small(n), small(d)) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => (*n).into(),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => (*d).into(),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) if *n > 0 => Rational(Repr::Small(*d, *n)),
            Repr::Small(n, d) => Self::from_i128((*d).into(), (*n).into()),
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, 1), Repr::Small(c, 1)) => match a.checked_add(*c) {
                Some(n) if n != i64::MIN => Rational(Repr::Small(n, 1)),
                _ => Self::from_i128(i128::from(*a) + i128::from(*c), 1),
            },
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let fast = a.checked_mul(*d).zip(c.checked_mul(*b)).and_then(|(x, y)| x.checked_add(y)).zip(b.checked_mul(*d));
                if let Some((n, den)) = fast.filter(|(n, _)| *n != i64::MIN) {
                    return Self::from_i64(n, den);
                }
                let (a, b, c, d) = (i128::from(*a), i128::from(*b), i128::from(*c), i128::from(*d));
                Self::from_i128(a * d + c * b, b * d)
            }
            _ => Self::from_big(self.to_big() + rhs.to_big()),
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if let Some((n, den)) = a.checked_mul(*c).zip(b.checked_mul(*d)).filter(|(n, _)| *n != i64::MIN) {
                    return Self::from_i64(n, den);
                }
                let (a, b, c, d) = (i128::from(*a), i128::from(*b), i128::from(*c), i128::from(*d));
                Self::from_i128(a * c, b * d)
            }
            _ => Self::from_big(self.to_big() * rhs.to_big()),
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Self::from_big(-b),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            Repr::Small(..) => None,
            Repr::Big(b) => b.to_integer().to_i64().filter(|_| b.is_integer()),
        }
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|n| u64::try_from(n).ok())
    }
    fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(n, d) => Some(*n as f64 / *d as f64),
            Repr::Big(b) => b.to_f64(),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (i128::from(*a) * i128::from(*d)).cmp(&(i128::from(*c) * i128::from(*b))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, |a, b| a.add_ref(b));
binop!(Sub, sub, SubAssign, sub_assign, |a, b| a.add_ref(&b.neg_ref()));
binop!(Mul, mul, MulAssign, mul_assign, |a, b| a.mul_ref(b));
binop!(Div, div, DivAssign, div_assign, |a, b| a.mul_ref(&b.recip()));

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Rational::new(6, -4), Rational::new(-3, 2));
        assert_eq!(Rational::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rational::new(0, -7), Rational::zero());
        assert!(Rational::new(4, 2).is_integer());
        assert_eq!(Rational::from_big(big(10, 5)), Rational::from_integer(2));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let m = Rational::from_integer(i64::MAX);
        let sq = &m * &m;
        assert!(matches!(sq.0, Repr::Big(_)));
        assert_eq!(sq.to_big(), big(i64::MAX, 1) * big(i64::MAX, 1));
        let back = &sq / &m;
        assert_eq!(back, m);
        assert!(matches!(back.0, Repr::Small(..)));
        let min = Rational::from_integer(i64::MIN + 1) - Rational::one();
        assert!(matches!(min.0, Repr::Big(_)));
        assert_eq!(-(-&min), min);
    }

    #[test]
    fn binary_gcd() {
        assert_eq!(gcd64(0, 7), 7);
        assert_eq!(gcd64(12, 18), 6);
        assert_eq!(gcd64(1 << 40, 3 << 20), 1 << 20);
        assert_eq!(gcd64(u64::MAX, u64::MAX - 1), 1);
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals(a in -1_000_000_000_000i64..1_000_000_000_000, b in 1i64..1_000_000, c in any::<i64>().prop_filter("not min", |&c| c != i64::MIN), d in 1i64..i64::MAX) {
            let (x, y) = (Rational::new(a, b), Rational::new(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if !y.is_zero() {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert_eq!(Rational::from_big(&bx * &by), &x * &y);
        }
    }
}
