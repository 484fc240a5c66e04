//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CoreError, Result};

/// Coefficients in ascending powers, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Parses `"3"`, `"-3/4"` or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(CoreError::input(format!("bad decimal {s:?}")));
        }
        let digits = format!("{whole}{frac}");
        let num = BigInt::from_str(&digits).map_err(|e| CoreError::input(format!("{s:?}: {e}")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    BigRational::from_str(s).map_err(|e| CoreError::input(format!("bad rational {s:?}: {e}")))
}

/// Renders integers plainly and other values as `num/den`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `c · z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// Coefficients of the expansion in powers of `(z − z0)`.
    pub fn taylor_at(&self, z0: &BigRational) -> Vec<BigRational> {
        // repeated synthetic division by (z - z0)
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(work.len());
        while !work.is_empty() {
            let mut carry = BigRational::zero();
            for c in work.iter_mut().rev() {
                let next = &*c + &carry * z0;
                carry = next.clone();
                *c = next;
            }
            // work[0] now holds the remainder; the rest is the quotient
            out.push(work.remove(0));
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let factor = &rem[top] / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[top - d + i] -= &factor * c;
            }
            quot[top - d] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lead) => self.scale(&lead.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let coeff = format_rational(&mag);
            match (k, mag.is_one()) {
                (0, _) => f.write_str(&coeff)?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{coeff}z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{coeff}z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// JSON form: array of coefficients (ascending), each a `"num/den"` string or an integer.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CoeffVisitor;

        impl<'de> Visitor<'de> for CoeffVisitor {
            type Value = Poly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rational coefficients")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Poly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(value) = seq.next_element::<serde_json::Value>()? {
                    let c = match value {
                        serde_json::Value::String(s) => parse_rational(&s).map_err(de::Error::custom)?,
                        serde_json::Value::Number(num) => {
                            parse_rational(&num.to_string()).map_err(de::Error::custom)?
                        }
                        other => return Err(de::Error::custom(format!("bad coefficient {other}"))),
                    };
                    coeffs.push(c);
                }
                Ok(Poly::new(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-9i64..=9, 0..6).prop_map(|c| Poly::from_ints(&c))
    }

    #[test]
    fn taylor_shift() {
        // z^2 (z - 1) = z^3 - z^2 around z0 = 1: (z-1) + 2(z-1)^2 + (z-1)^3
        let f = Poly::from_ints(&[0, 0, -1, 1]);
        assert_eq!(f.taylor_at(&int(1)), vec![int(0), int(1), int(2), int(1)]);
        assert_eq!(f.taylor_at(&int(0)), f.coeffs().to_vec());
    }

    #[test]
    fn gcd_and_division() {
        let a = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 0, 1]);
        let b = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[3, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&[2, 0, 1]));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("x").is_err());
        let p: Poly = serde_json::from_str(r#"["1/2", 0, "-3"]"#).unwrap();
        assert_eq!(p, Poly::new(vec![rat(1, 2), int(0), int(-3)]));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/2","0","-3"]"#);
        assert_eq!(p.to_string(), "1/2 - 3z^2");
    }

    proptest! {
        #[test]
        fn taylor_coefficients_reconstruct(f in small_poly(), z0 in -4i64..=4) {
            let z0 = int(z0);
            let taylor = f.taylor_at(&z0);
            let shift = Poly::new(vec![-z0.clone(), int(1)]);
            let mut rebuilt = Poly::zero();
            let mut power = Poly::constant(int(1));
            for c in taylor {
                rebuilt = &rebuilt + &power.scale(&c);
                power = &power * &shift;
            }
            prop_assert_eq!(rebuilt, f);
        }

        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }
    }
}
