//! Exact arithmetic in the cyclotomic field K = Q(ζ), ζ a primitive 20th root of unity.
//!
//! Elements are kept in the power basis 1, ζ, …, ζ⁷ reduced modulo
//! Φ₂₀(x) = x⁸ − x⁶ + x⁴ − x² + 1. Internally the eight rational coefficients
//! share one positive denominator, and the tuple (numerators, denominator) is
//! kept primitive, so structural equality is field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Degree of K over Q.
pub const DEGREE: usize = 8;
/// Order of the distinguished root of unity ζ.
pub const ORDER: u32 = 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    num: [BigInt; DEGREE],
    den: BigInt,
}

/// Reduces a coefficient vector of any length modulo Φ₂₀ in place and
/// truncates it to `DEGREE` entries.
fn reduce_mod_phi(terms: &mut Vec<BigInt>) {
    // x^d = x^(d-2) - x^(d-4) + x^(d-6) - x^(d-8)
    for d in (DEGREE..terms.len()).rev() {
        let c = std::mem::take(&mut terms[d]);
        if c.is_zero() {
            continue;
        }
        terms[d - 2] += &c;
        terms[d - 4] -= &c;
        terms[d - 6] += &c;
        terms[d - 8] -= &c;
    }
    terms.truncate(DEGREE);
    terms.resize(DEGREE, BigInt::zero());
}

impl FieldElement {
    fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len(), DEGREE);
        let mut num: [BigInt; DEGREE] = num.try_into().expect("length checked");
        let mut den = den;
        assert!(!den.is_zero(), "zero denominator");
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in num.iter() {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        FieldElement { num, den }
    }

    pub fn zero() -> Self {
        FieldElement {
            num: Default::default(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = BigInt::from(n);
        FieldElement {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        if d == 0 {
            panic!("zero denominator");
        }
        let mut num = vec![BigInt::zero(); DEGREE];
        num[0] = BigInt::from(n);
        Self::from_parts(num, BigInt::from(d))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); DEGREE];
        num[0] = q.numer().clone();
        Self::from_parts(num, q.denom().clone())
    }

    /// Builds an element from its eight power-basis coefficients.
    pub fn from_coeffs(coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() != DEGREE {
            return Err(Error::DimensionMismatch(format!(
                "expected {DEGREE} coefficients, got {}",
                coeffs.len()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_parts(num, den))
    }

    /// Builds an element from a coefficient vector of arbitrary length,
    /// reducing modulo Φ₂₀.
    pub fn from_poly(coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        if num.len() < DEGREE {
            num.resize(DEGREE, BigInt::zero());
        }
        reduce_mod_phi(&mut num);
        Self::from_parts(num, den)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        let e = k.rem_euclid(ORDER as i64) as usize;
        let (e, sign) = if e >= 10 { (e - 10, -1) } else { (e, 1) };
        let mut num = vec![BigInt::zero(); e.max(DEGREE - 1) + 1];
        num[e] = BigInt::from(sign);
        reduce_mod_phi(&mut num);
        Self::from_parts(num, BigInt::one())
    }

    /// The primitive 20th root of unity ζ.
    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// The primitive fifth root of unity ζ⁴.
    pub fn zeta5() -> Self {
        Self::zeta_pow(4)
    }

    /// The square root of −1 realized as ζ⁵.
    pub fn i() -> Self {
        Self::zeta_pow(5)
    }

    /// √5 = 1 + 2(ζ₅ + ζ₅⁴).
    pub fn sqrt5() -> Self {
        let two = Self::from_integer(2);
        Self::one() + &two * &(Self::zeta_pow(4) + Self::zeta_pow(16))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        BigRational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..DEGREE).map(|k| self.coeff(k)).collect()
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ₂₀.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = phi20();
        let a = trim(self.coeffs());
        let (g, s) = ext_gcd_inverse(phi, a);
        // Φ₂₀ is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(g.len(), 1);
        let c = &g[0];
        let s: Vec<BigRational> = s.into_iter().map(|x| x / c).collect();
        Ok(Self::from_poly(&s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Applies the automorphism ζ ↦ ζᵏ.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        if num_integer::gcd(k, ORDER as i64) != 1 {
            return Err(Error::InvalidAutomorphism(k));
        }
        let mut acc = vec![BigInt::zero(); DEGREE];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = Self::zeta_pow(j as i64 * k);
            // images of basis vectors are integral
            for (a, b) in acc.iter_mut().zip(img.num.iter()) {
                *a += c * b;
            }
        }
        Ok(Self::from_parts(acc, self.den.clone()))
    }

    /// Complex conjugation, ζ ↦ ζ¹⁹.
    pub fn conj(&self) -> Self {
        self.galois_apply(19).expect("19 is a unit mod 20")
    }

    /// Serialized coefficient strings, "num/den" in lowest terms.
    pub fn to_strings(&self) -> Vec<String> {
        (0..DEGREE)
            .map(|k| {
                let q = self.coeff(k);
                format!("{}/{}", q.numer(), q.denom())
            })
            .collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(&coeffs)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("{s}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

fn phi20() -> Vec<BigRational> {
    [1, 0, -1, 0, 1, 0, -1, 0, 1]
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / lead;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &c * bk;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// Returns (g, s) with s·a ≡ g (mod m) and g = gcd(m, a).
fn ext_gcd_inverse(m: Vec<BigRational>, a: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return FieldElement::from_parts(num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        FieldElement::from_parts(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        let mut terms = vec![BigInt::zero(); 2 * DEGREE - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    terms[i + j] += a * b;
                }
            }
        }
        reduce_mod_phi(&mut terms);
        FieldElement::from_parts(terms, &self.den * &rhs.den)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: self.num.clone().map(|c| -c),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: self.num.map(|c| -c),
            den: self.den,
        }
    }
}

/// Panics on division by zero; use [`FieldElement::checked_div`] for a `Result`.
impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in 0..DEGREE {
            if self.num[k].is_zero() {
                continue;
            }
            let q = self.coeff(k);
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({self})")
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        FieldElement::from_strings(&items).map_err(D::Error::custom)
    }
}

/// A root of unity ζᵉ inside K, stored by its exponent e mod 20.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity(pub u32);

impl RootOfUnity {
    pub fn new(exponent: i64) -> Self {
        RootOfUnity(exponent.rem_euclid(ORDER as i64) as u32)
    }

    pub fn one() -> Self {
        RootOfUnity(0)
    }

    /// All n-th roots of unity, for n dividing 20.
    pub fn all_of_order_dividing(n: u32) -> Vec<Self> {
        assert!(ORDER.is_multiple_of(n), "{n} does not divide {ORDER}");
        let step = ORDER / n;
        (0..n).map(|k| RootOfUnity(k * step)).collect()
    }

    pub fn value(&self) -> FieldElement {
        FieldElement::zeta_pow(self.0 as i64)
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(-(self.0 as i64))
    }

    pub fn mul(&self, other: &Self) -> Self {
        RootOfUnity::new(self.0 as i64 + other.0 as i64)
    }

    pub fn order(&self) -> u32 {
        ORDER / num_integer::gcd(self.0, ORDER)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            5 => write!(f, "i"),
            10 => write!(f, "-1"),
            15 => write!(f, "-i"),
            e if e % 4 == 0 => write!(f, "zeta5^{}", e / 4),
            e => write!(f, "z^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(c: &[i64]) -> FieldElement {
        let coeffs: Vec<BigRational> = c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        FieldElement::from_poly(&coeffs)
    }

    #[test]
    fn fifth_roots_multiply_to_one() {
        let z5 = FieldElement::zeta5();
        assert!((&z5 * &z5.pow(4)).is_one());
        assert!(z5.pow(5).is_one());
        assert!(!z5.is_one());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = FieldElement::i();
        assert_eq!(&i * &i, FieldElement::from_integer(-1));
    }

    #[test]
    fn sqrt5_squares_to_five() {
        // expansion: ζ₅ + ζ₅⁴ satisfies t² + t − 1 = 0, so (1 + 2t)² = 1 + 4(t + t²) = 5
        let t = FieldElement::zeta_pow(4) + FieldElement::zeta_pow(16);
        assert_eq!(&t * &t + &t, FieldElement::one());
        let s = FieldElement::sqrt5();
        assert_eq!(&s * &s, FieldElement::from_integer(5));
    }

    #[test]
    fn phi20_vanishes_at_zeta() {
        let z = FieldElement::zeta();
        let val = z.pow(8) - z.pow(6) + z.pow(4) - z.pow(2) + FieldElement::one();
        assert!(val.is_zero());
        assert!(FieldElement::zeta_pow(20).is_one());
        assert_eq!(FieldElement::zeta_pow(10), FieldElement::from_integer(-1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            FieldElement::one().checked_div(&FieldElement::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(FieldElement::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn conjugation_of_i() {
        let i = FieldElement::i();
        assert_eq!(i.galois_apply(19).unwrap(), -&i);
        let q = FieldElement::from_ratio(-7, 3);
        assert_eq!(q.galois_apply(19).unwrap(), q);
    }

    #[test]
    fn non_units_are_rejected() {
        for k in [0, 2, 4, 5, 10, 15, 22] {
            assert_eq!(FieldElement::i().galois_apply(k), Err(Error::InvalidAutomorphism(k)));
        }
    }

    #[test]
    fn canonical_form_is_lowest_terms() {
        let a = FieldElement::from_ratio(2, -4);
        assert_eq!(a, FieldElement::from_ratio(-1, 2));
        assert_eq!(a.to_strings()[0], "-1/2");
        assert_eq!(a.to_strings()[1], "0/1");
    }

    #[test]
    fn string_round_trip_is_exact() {
        let a = elem(&[3, -1, 0, 7, 0, 0, 2, 1]) * FieldElement::from_ratio(5, 6);
        let s = serde_json::to_string(&a).unwrap();
        let back: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn root_of_unity_orders() {
        assert_eq!(RootOfUnity(5).order(), 4);
        assert_eq!(RootOfUnity(4).order(), 5);
        assert_eq!(RootOfUnity(10).order(), 2);
        assert_eq!(RootOfUnity::all_of_order_dividing(4).len(), 4);
        assert_eq!(RootOfUnity(5).value(), FieldElement::i());
    }

    fn small_elem() -> impl Strategy<Value = FieldElement> {
        (proptest::collection::vec(-4i64..=4, DEGREE), 1i64..=3)
            .prop_map(|(c, d)| elem(&c) * FieldElement::from_ratio(1, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in small_elem(), b in small_elem(), c in small_elem()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&a - &b) + &b) == a);
        }

        #[test]
        fn inverse_is_two_sided(a in small_elem()) {
            prop_assume!(!a.is_zero());
            let inv = FieldElement::one().checked_div(&a).unwrap();
            prop_assert!((&a * &inv).is_one());
        }

        #[test]
        fn galois_is_homomorphism(a in small_elem(), b in small_elem(), k in prop::sample::select(vec![1i64, 3, 7, 9, 11, 13, 17, 19])) {
            let fa = a.galois_apply(k).unwrap();
            let fb = b.galois_apply(k).unwrap();
            prop_assert_eq!((&a * &b).galois_apply(k).unwrap(), &fa * &fb);
            prop_assert_eq!((&a + &b).galois_apply(k).unwrap(), &fa + &fb);
        }

        #[test]
        fn conjugation_is_involution(a in small_elem()) {
            prop_assert_eq!(a.conj().conj(), a);
        }
    }
}
