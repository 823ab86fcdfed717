//! Arbitrary-precision rational numbers with a machine-word fast path.
//!
//! Values are kept as reduced `i64` fractions while they fit; any operation
//! whose result does not fit promotes to a [`BigRational`]. Results that fit
//! again are demoted, so the representation is canonical and structural
//! equality coincides with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
enum Repr {
    /// Reduced fraction, denominator positive.
    Small(i64, i64),
    /// Reduced fraction that does not fit in `Small`.
    Big(Box<BigRational>),
}

/// An exact rational number.
///
/// Division by zero panics; every algorithm in this crate checks pivots and
/// divisors for zero before dividing.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u128(a.unsigned_abs() as u128, b.unsigned_abs() as u128) as i64
}

/// Build from a not-necessarily-reduced fraction with `|n|, |d| < 2^127`.
fn norm128(mut n: i128, mut d: i128) -> Rational {
    debug_assert!(d != 0);
    if n == 0 {
        return Rational::zero();
    }
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
    norm128_reduced(n / g, d / g)
}

/// As [`norm128`] but the fraction is already reduced with `d > 0`.
fn norm128_reduced(n: i128, d: i128) -> Rational {
    debug_assert!(d > 0);
    if n == 0 {
        return Rational::zero();
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(ns), Ok(ds)) => Rational(Repr::Small(ns, ds)),
        _ => Rational(Repr::Big(Box::new(BigRational::new_raw(
            BigInt::from(n),
            BigInt::from(d),
        )))),
    }
}

fn demote(r: BigRational) -> Rational {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
        _ => Rational(Repr::Big(Box::new(r))),
    }
}

impl Rational {
    pub fn zero() -> Rational {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Rational {
        Rational(Repr::Small(1, 1))
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "rational with zero denominator");
        norm128(num as i128, den as i128)
    }

    pub fn from_big(r: BigRational) -> Rational {
        demote(r)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    /// Parse an unsigned decimal integer literal of any length.
    pub fn from_integer_literal(digits: &str) -> Option<Rational> {
        let n: BigInt = digits.parse().ok()?;
        Some(demote(BigRational::from_integer(n)))
    }

    /// Parse `num/den` from unsigned decimal literals; `None` if `den` is zero.
    pub fn from_ratio_literals(num: &str, den: &str) -> Option<Rational> {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(demote(BigRational::new(n, d)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.denom().is_one(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Positive generator of the fractional ideal spanned by `self` and
    /// `other`: gcd of the numerators over lcm of the denominators. Zero if
    /// both are zero.
    pub fn ideal_gcd(&self, other: &Rational) -> Rational {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                let x = (*an as i128 * *bd as i128).unsigned_abs();
                let y = (*bn as i128 * *ad as i128).unsigned_abs();
                let g = gcd_u128(x, y);
                norm128(g as i128, *ad as i128 * *bd as i128)
            }
            _ => {
                let a = self.to_big();
                let b = other.to_big();
                let g = num::Integer::gcd(
                    &(a.numer() * b.denom()),
                    &(b.numer() * a.denom()),
                );
                demote(BigRational::new(g, a.denom() * b.denom()))
            }
        }
    }

    pub(crate) fn small_parts(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(n, d) => Some((*n, *d)),
            Repr::Big(_) => None,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "inverse of zero");
                if *n < 0 {
                    norm128_reduced(-(*d as i128), -(*n as i128))
                } else {
                    Rational(Repr::Small(*d, *n))
                }
            }
            Repr::Big(b) => {
                assert!(!b.is_zero(), "inverse of zero");
                demote(b.recip())
            }
        }
    }

    fn add_impl(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                let n1 = *an as i128 * *bd as i128;
                let n2 = *bn as i128 * *ad as i128;
                match n1.checked_add(n2) {
                    Some(n) => norm128(n, *ad as i128 * *bd as i128),
                    None => demote(self.to_big() + rhs.to_big()),
                }
            }
            _ => demote(self.to_big() + rhs.to_big()),
        }
    }

    fn sub_impl(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                let n1 = *an as i128 * *bd as i128;
                let n2 = *bn as i128 * *ad as i128;
                match n1.checked_sub(n2) {
                    Some(n) => norm128(n, *ad as i128 * *bd as i128),
                    None => demote(self.to_big() - rhs.to_big()),
                }
            }
            _ => demote(self.to_big() - rhs.to_big()),
        }
    }

    fn mul_impl(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                if *an == 0 || *bn == 0 {
                    return Rational::zero();
                }
                let g1 = gcd_i64(*an, *bd);
                let g2 = gcd_i64(*bn, *ad);
                let n = (*an / g1) as i128 * (*bn / g2) as i128;
                let d = (*ad / g2) as i128 * (*bd / g1) as i128;
                norm128_reduced(n, d)
            }
            _ => demote(self.to_big() * rhs.to_big()),
        }
    }

    fn div_impl(&self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        self.mul_impl(&rhs.recip())
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        // Both representations are canonical, so mixed variants never match.
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => an == bn && ad == bd,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                state.write_u8(0);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                state.write_u8(1);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => {
                if *n == i64::MIN {
                    norm128_reduced(-(*n as i128), *d as i128)
                } else {
                    Rational(Repr::Small(-n, *d))
                }
            }
            Repr::Big(b) => demote(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$impl_fn(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$impl_fn(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = self.add_impl(rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = self.sub_impl(rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = self.mul_impl(rhs);
    }
}

impl DivAssign<&Rational> for Rational {
    fn div_assign(&mut self, rhs: &Rational) {
        *self = self.div_impl(rhs);
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{}", n),
            Repr::Small(n, d) => write!(f, "{}/{}", n, d),
            Repr::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn reduction_and_sign() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(1, -2), r(-1, 2));
        assert_eq!(r(-3, -6), r(1, 2));
        assert_eq!(r(0, 5), Rational::zero());
        assert_eq!(r(-1, 2).to_string(), "-1/2");
        assert_eq!(r(7, 1).to_string(), "7");
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(1, 2) - r(1, 3), r(1, 6));
        assert_eq!(r(2, 3) * r(3, 4), r(1, 2));
        assert_eq!(r(1, 2) / r(3, 4), r(2, 3));
        assert_eq!(-r(1, 2), r(-1, 2));
        assert_eq!(r(-7, 3).abs(), r(7, 3));
        assert_eq!(r(-7, 3).recip(), r(-3, 7));
    }

    #[test]
    fn ordering() {
        assert!(r(1, 3) < r(1, 2));
        assert!(r(-1, 2) < r(-1, 3));
        assert!(r(2, 1) > r(1, 1));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn division_by_zero_panics() {
        let _ = r(1, 2) / Rational::zero();
    }

    #[test]
    #[should_panic(expected = "zero denominator")]
    fn zero_denominator_panics() {
        let _ = Rational::new(1, 0);
    }

    #[test]
    fn ideal_gcd_small_cases() {
        assert_eq!(r(4, 1).ideal_gcd(&r(6, 1)), r(2, 1));
        assert_eq!(r(1, 2).ideal_gcd(&r(1, 3)), r(1, 6));
        assert_eq!(r(-3, 4).ideal_gcd(&r(9, 2)), r(3, 4));
        assert_eq!(Rational::zero().ideal_gcd(&r(-5, 7)), r(5, 7));
        assert_eq!(r(5, 7).ideal_gcd(&Rational::zero()), r(5, 7));
        assert_eq!(Rational::zero().ideal_gcd(&Rational::zero()), Rational::zero());
    }

    #[test]
    fn promotion_and_demotion() {
        let max = r(i64::MAX, 1);
        let up = &max + &Rational::one();
        // 2^63 does not fit an i64 numerator.
        assert_eq!(up.to_big(), max.to_big() + BigRational::one());
        let back = &up - &Rational::one();
        // The demoted value is structurally equal to the small one.
        assert_eq!(back, max);
        assert_eq!(back.to_string(), i64::MAX.to_string());
    }

    #[test]
    fn promotion_in_products() {
        let a = r(i64::MAX, 2);
        let sq = &a * &a;
        assert_eq!(sq.to_big(), a.to_big() * a.to_big());
        assert_eq!(&sq / &a, a);
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(Rational::from_integer_literal("42"), Some(r(42, 1)));
        assert_eq!(Rational::from_ratio_literals("2", "4"), Some(r(1, 2)));
        assert_eq!(Rational::from_ratio_literals("1", "0"), None);
        let huge = Rational::from_integer_literal("123456789012345678901234567890").unwrap();
        assert_eq!(huge.to_string(), "123456789012345678901234567890");
    }

    fn any_rational() -> impl Strategy<Value = Rational> {
        // Mix ordinary magnitudes with values that force promotion.
        prop_oneof![
            4 => (any::<i32>(), 1i64..10_000).prop_map(|(n, d)| Rational::new(n as i64, d)),
            1 => (any::<i64>(), any::<i64>().prop_filter("nonzero", |d| *d != 0))
                .prop_map(|(n, d)| Rational::new(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn matches_bigrational_oracle(a in any_rational(), b in any_rational()) {
            prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
            prop_assert_eq!((&a * &b).to_big(), a.to_big() * b.to_big());
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), a.to_big() / b.to_big());
            }
        }

        #[test]
        fn field_axioms(a in any_rational(), b in any_rational(), c in any_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + Rational::zero(), a.clone());
            prop_assert_eq!(&a * Rational::one(), a.clone());
            prop_assert_eq!(&a + (-&a), Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
        }

        #[test]
        fn ordering_matches_oracle(a in any_rational(), b in any_rational()) {
            prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        }

        #[test]
        fn ideal_gcd_divides_and_generates(a in any_rational(), b in any_rational()) {
            let g = a.ideal_gcd(&b);
            if a.is_zero() && b.is_zero() {
                prop_assert!(g.is_zero());
            } else {
                // g divides both with integer quotient, and some integer
                // combination recovers it (Bezout over the ideal).
                prop_assert!(!g.is_negative() && !g.is_zero());
                if !a.is_zero() {
                    prop_assert!((&a / &g).is_integer());
                }
                if !b.is_zero() {
                    prop_assert!((&b / &g).is_integer());
                }
                if !a.is_zero() && !b.is_zero() {
                    let big_a = a.to_big();
                    let big_b = b.to_big();
                    let e = num::Integer::extended_gcd(
                        &(big_a.numer() * big_b.denom()),
                        &(big_b.numer() * big_a.denom()),
                    );
                    let combo = &a * Rational::from_big(BigRational::from_integer(e.x))
                        + &b * Rational::from_big(BigRational::from_integer(e.y));
                    prop_assert_eq!(combo, g);
                }
            }
        }
    }
}
