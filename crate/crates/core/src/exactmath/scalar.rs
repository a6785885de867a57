use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use super::ExactError;

/// The coefficient field: either ℚ or a real quadratic extension ℚ(√d).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FieldConfig {
    Rational,
    Quadratic { d: i64 },
}

impl FieldConfig {
    pub fn quadratic(d: i64) -> Result<FieldConfig, ExactError> {
        if d == 0 || d == 1 {
            return Err(ExactError::BadField(d));
        }
        // squarefree and not a perfect square
        let ad = d.unsigned_abs();
        let mut k = 2u64;
        while k * k <= ad {
            if ad % (k * k) == 0 {
                return Err(ExactError::BadField(d));
            }
            k += 1;
        }
        Ok(FieldConfig::Quadratic { d })
    }

    pub fn d(&self) -> Option<i64> {
        match self {
            FieldConfig::Rational => None,
            FieldConfig::Quadratic { d } => Some(*d),
        }
    }
}

/// An exact element a + b·√d of the configured field. For a `Rational`
/// config the √d coordinate is identically zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Scalar {
    field: FieldConfig,
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, field: FieldConfig) -> Scalar {
        if field == FieldConfig::Rational {
            assert!(b.is_zero(), "rational field has no sqrt coordinate");
        }
        Scalar { field, a, b }
    }

    pub fn zero(field: FieldConfig) -> Scalar {
        Scalar::new(BigRational::zero(), BigRational::zero(), field)
    }

    pub fn one(field: FieldConfig) -> Scalar {
        Scalar::new(BigRational::one(), BigRational::zero(), field)
    }

    pub fn from_int(n: i64, field: FieldConfig) -> Scalar {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero(), field)
    }

    pub fn from_ratio(p: i64, q: i64, field: FieldConfig) -> Scalar {
        assert!(q != 0);
        Scalar::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
            field,
        )
    }

    /// The element b·√d; panics for a rational config.
    pub fn sqrt_d(field: FieldConfig) -> Scalar {
        assert!(matches!(field, FieldConfig::Quadratic { .. }));
        Scalar::new(BigRational::zero(), BigRational::one(), field)
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate a − b·√d.
    pub fn conjugate(&self) -> Scalar {
        Scalar::new(self.a.clone(), -self.b.clone(), self.field)
    }

    fn d_ratio(&self) -> BigRational {
        match self.field {
            FieldConfig::Rational => BigRational::zero(),
            FieldConfig::Quadratic { d } => BigRational::from_integer(BigInt::from(d)),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // (a + b√d)⁻¹ = (a − b√d) / (a² − b²d); the norm is nonzero since
        // d is not a perfect square.
        let norm = &self.a * &self.a - &self.b * &self.b * self.d_ratio();
        assert!(!norm.is_zero());
        Ok(Scalar::new(&self.a / &norm, -(&self.b / &norm), self.field))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        Ok(self.clone() * rhs.inv()?)
    }

    pub fn pow_i64(&self, n: i64) -> Result<Scalar, ExactError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.field);
        let mut e = n.unsigned_abs();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root inside the configured field, if one exists.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero(self.field));
        }
        match self.field {
            FieldConfig::Rational => {
                rational_sqrt(&self.a).map(|r| Scalar::new(r, BigRational::zero(), self.field))
            }
            FieldConfig::Quadratic { d } => {
                let dr = BigRational::from_integer(BigInt::from(d));
                if self.b.is_zero() {
                    if let Some(r) = rational_sqrt(&self.a) {
                        return Some(Scalar::new(r, BigRational::zero(), self.field));
                    }
                    // a = (a/d)·d, so √a = √(a/d)·√d when a/d is a square
                    let q = &self.a / &dr;
                    return rational_sqrt(&q)
                        .map(|r| Scalar::new(BigRational::zero(), r, self.field));
                }
                // (x + y√d)² = x² + y²d + 2xy√d: t = x² satisfies
                // t² − a·t + b²d/4 = 0, with discriminant a² − b²d
                let disc = &self.a * &self.a - &self.b * &self.b * &dr;
                let root = rational_sqrt(&disc)?;
                let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                for t in [(&self.a + &root) * &half, (&self.a - &root) * &half] {
                    if t.is_negative() {
                        continue;
                    }
                    if let Some(x) = rational_sqrt(&t) {
                        if x.is_zero() {
                            continue;
                        }
                        let y = &self.b / (&x * BigRational::from_integer(BigInt::from(2)));
                        return Some(Scalar::new(x, y, self.field));
                    }
                }
                None
            }
        }
    }
}

/// √r for a nonnegative rational with square numerator and denominator.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn check_fields(x: &Scalar, y: &Scalar) {
    assert!(
        x.field == y.field,
        "scalar field mismatch: {:?} vs {:?}",
        x.field,
        y.field
    );
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        check_fields(&self, &rhs);
        Scalar::new(self.a + rhs.a, self.b + rhs.b, self.field)
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_fields(&self, rhs);
        Scalar::new(self.a + &rhs.a, self.b + &rhs.b, self.field)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        check_fields(self, &rhs);
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        check_fields(&self, &rhs);
        Scalar::new(self.a - rhs.a, self.b - rhs.b, self.field)
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        check_fields(&self, rhs);
        Scalar::new(self.a - &rhs.a, self.b - &rhs.b, self.field)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        check_fields(self, &rhs);
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        check_fields(&self, &rhs);
        let d = self.d_ratio();
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::new(a, b, self.field)
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self * rhs.clone()
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.clone() * rhs.clone()
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b, self.field)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.field {
            FieldConfig::Rational => 0,
            FieldConfig::Quadratic { d } => d,
        };
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", fmt_rational(&self.b), d)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", fmt_rational(&self.a), fmt_rational(&(-&self.b)), d)
        } else {
            write!(f, "{}+{}*sqrt({})", fmt_rational(&self.a), fmt_rational(&self.b), d)
        }
    }
}

fn parse_big_rational(s: &str) -> Result<BigRational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::ParseScalar(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(p))
    }
}

impl Scalar {
    /// Parses "p/q", "p/q+r/s*sqrt(d)" and the shorthand forms emitted by
    /// `Display`. The field config supplies d and must match.
    pub fn parse(input: &str, field: FieldConfig) -> Result<Scalar, ExactError> {
        let mut s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        // allow a bare "sqrt(d)" with implicit coefficient 1
        if s.starts_with("sqrt(") {
            s.insert_str(0, "1*");
        }
        s = s.replace("+sqrt(", "+1*sqrt(").replace("-sqrt(", "-1*sqrt(");
        let bad = || ExactError::ParseScalar(input.to_string());
        if let Some(pos) = s.find("*sqrt(") {
            let d_expected = field.d().ok_or_else(bad)?;
            let close = s.rfind(')').ok_or_else(bad)?;
            let d_str = &s[pos + 6..close];
            let d: i64 = d_str.parse().map_err(|_| bad())?;
            if d != d_expected {
                return Err(bad());
            }
            let head = &s[..pos];
            // split head into rational part and sqrt coefficient at the last
            // top-level +/- that is not a leading sign or exponent-free
            let mut split = None;
            for (i, c) in head.char_indices().skip(1) {
                if (c == '+' || c == '-') && !matches!(head.as_bytes()[i - 1], b'+' | b'-' | b'/') {
                    split = Some((i, c));
                }
            }
            let (a, b) = match split {
                Some((i, c)) => {
                    let a = parse_big_rational(&head[..i])?;
                    let b = parse_big_rational(&head[i + 1..])?;
                    (a, if c == '-' { -b } else { b })
                }
                None => (BigRational::zero(), parse_big_rational(head)?),
            };
            Ok(Scalar::new(a, b, field))
        } else {
            let a = parse_big_rational(&s)?;
            Ok(Scalar::new(a, BigRational::zero(), field))
        }
    }
}
