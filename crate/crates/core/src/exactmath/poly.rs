use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use super::matrix::ExactMatrix;
use super::scalar::{FieldConfig, Scalar};

/// Univariate polynomial, coefficients in ascending degree order, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    field: FieldConfig,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>, field: FieldConfig) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldConfig) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Scalar::from_int(i as i64, self.field) * c)
            .collect();
        Poly::new(coeffs, self.field)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("leading coefficient nonzero");
        Poly::new(self.coeffs.iter().map(|c| c * &inv).collect(), self.field)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out, self.field)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Scalar::zero(self.field); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c.clone();
        }
        Poly::new(out, self.field)
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dn = divisor.degree();
        if self.is_zero() || self.degree() < dn {
            return (Poly::zero(self.field), self.clone());
        }
        let lead_inv = divisor.leading().inv().unwrap();
        let mut quot = vec![Scalar::zero(self.field); self.degree() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn].clone() * &lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        (Poly::new(quot, self.field), Poly::new(rem, self.field))
    }

    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// p with all repeated roots collapsed: p / gcd(p, p').
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.is_zero() || g.degree() == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Galois-conjugates every coefficient.
    pub fn conjugate(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(Scalar::conjugate).collect(), self.field)
    }

    pub fn has_rational_coeffs(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }
}

/// Characteristic polynomial det(xI − M) by the Faddeev–LeVerrier recurrence.
pub fn charpoly(m: &ExactMatrix) -> Poly {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let field = m.field();
    let mut coeffs = vec![Scalar::zero(field); n + 1];
    coeffs[n] = Scalar::one(field);
    let mut aux = ExactMatrix::identity(n, field);
    for k in 1..=n {
        aux = m.mul(&aux);
        let c = -(aux.trace().checked_div(&Scalar::from_int(k as i64, field)).unwrap());
        coeffs[n - k] = c.clone();
        for i in 0..n {
            let v = aux.get(i, i).clone() + &c;
            aux.set(i, i, v);
        }
    }
    Poly::new(coeffs, field)
}

/// All roots of p lying in its coefficient field, with multiplicities, plus a
/// flag for whether p splits completely into the roots found.
pub fn roots_in_field(p: &Poly) -> (Vec<(Scalar, usize)>, bool) {
    if p.is_zero() || p.degree() == 0 {
        return (Vec::new(), true);
    }
    let sqf = p.squarefree_part();
    let mut roots = squarefree_roots(&sqf);
    roots.sort();
    let mut found = Vec::new();
    let mut total = 0usize;
    for r in roots {
        let mut mult = 0usize;
        let mut q = p.monic();
        loop {
            let lin = Poly::new(vec![-r.clone(), Scalar::one(p.field)], p.field);
            let (quot, rem) = q.div_rem(&lin);
            if rem.is_zero() {
                mult += 1;
                q = quot;
            } else {
                break;
            }
        }
        total += mult;
        found.push((r, mult));
    }
    (found, total == p.degree())
}

fn squarefree_roots(p: &Poly) -> Vec<Scalar> {
    if p.degree() == 0 {
        return Vec::new();
    }
    if p.has_rational_coeffs() {
        rational_coeff_roots(p)
    } else {
        // roots in ℚ(√d) are among the roots of the rational norm p·p̄
        let norm = p.mul(&p.conjugate());
        let candidates = rational_coeff_roots(&norm.squarefree_part());
        candidates
            .into_iter()
            .filter(|r| p.eval(r).is_zero())
            .collect()
    }
}

/// Roots (within the configured field) of a squarefree polynomial whose
/// coefficients are all rational: rational-root extraction first, then
/// quadratic factors.
fn rational_coeff_roots(p: &Poly) -> Vec<Scalar> {
    let field = p.field;
    let mut roots = Vec::new();
    let mut q = p.monic();
    for r in rational_roots(&q) {
        let lin = Poly::new(vec![-r.clone(), Scalar::one(field)], field);
        q = q.div_rem(&lin).0;
        roots.push(r);
    }
    if q.degree() == 2 {
        roots.extend(quadratic_roots(&q));
        return roots;
    }
    if q.degree() >= 4 {
        for quad in kronecker_quadratic_factors(&q) {
            roots.extend(quadratic_roots(&quad));
        }
    }
    roots
}

fn quadratic_roots(q: &Poly) -> Vec<Scalar> {
    assert_eq!(q.degree(), 2);
    let field = q.field;
    let c = &q.coeffs[0];
    let b = &q.coeffs[1];
    let a = &q.coeffs[2];
    let four = Scalar::from_int(4, field);
    let disc = b * b - &(four * a * c);
    let Some(s) = disc.sqrt_in_field() else {
        return Vec::new();
    };
    let two_a_inv = (Scalar::from_int(2, field) * a).inv().unwrap();
    let r1 = (-b.clone() + &s) * &two_a_inv;
    let r2 = (-b.clone() - &s) * two_a_inv;
    if r1 == r2 {
        vec![r1]
    } else {
        vec![r1, r2]
    }
}

fn to_integer_poly(p: &Poly) -> Option<Vec<BigInt>> {
    if !p.has_rational_coeffs() {
        return None;
    }
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        let den = c.rational_part().denom().clone();
        let g = num::integer::gcd(lcm.clone(), den.clone());
        lcm = lcm * den / g;
    }
    Some(
        p.coeffs()
            .iter()
            .map(|c| {
                let r = c.rational_part() * BigRational::from_integer(lcm.clone());
                r.to_integer()
            })
            .collect(),
    )
}

fn divisors_bounded(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(1_000_000_000_000i64) {
        return None;
    }
    let mut divs = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            divs.push(k.clone());
            let other = &n / &k;
            if other != k {
                divs.push(other);
            }
            if divs.len() > cap {
                return None;
            }
        }
        k += 1;
    }
    Some(divs)
}

/// Candidate rational roots p/q with p | constant, q | leading.
fn rational_roots(p: &Poly) -> Vec<Scalar> {
    let field = p.field;
    let Some(ints) = to_integer_poly(p) else {
        return Vec::new();
    };
    let mut roots = Vec::new();
    // strip x^k factors first
    let poly = p.monic();
    let zero = Scalar::zero(field);
    if poly.eval(&zero).is_zero() {
        roots.push(zero);
    }
    let n0 = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let constant = &ints[n0];
    let leading = ints.last().unwrap();
    let (Some(ps), Some(qs)) = (divisors_bounded(constant, 4096), divisors_bounded(leading, 4096))
    else {
        return roots;
    };
    for pn in &ps {
        for qd in &qs {
            for sign in [1i64, -1] {
                let cand = Scalar::new(
                    BigRational::new(pn * BigInt::from(sign), qd.clone()),
                    BigRational::zero(),
                    field,
                );
                if poly.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Kronecker-style search for monic rational quadratic factors of a
/// squarefree rational polynomial with no rational roots.
fn kronecker_quadratic_factors(p: &Poly) -> Vec<Poly> {
    let field = p.field;
    let Some(_) = to_integer_poly(p) else {
        return Vec::new();
    };
    let ints = {
        // primitive integer polynomial with positive leading coefficient
        let mut v = to_integer_poly(p).unwrap();
        let mut g = BigInt::zero();
        for c in &v {
            g = num::integer::gcd(g, c.clone());
        }
        if !g.is_zero() && !g.is_one() {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
        if v.last().unwrap().is_negative() {
            for c in v.iter_mut() {
                *c = -&*c;
            }
        }
        v
    };
    let eval_int = |x: i64| -> BigInt {
        let mut acc = BigInt::zero();
        for c in ints.iter().rev() {
            acc = acc * BigInt::from(x) + c;
        }
        acc
    };
    let (v0, v1, vm1) = (eval_int(0), eval_int(1), eval_int(-1));
    if v0.is_zero() || v1.is_zero() || vm1.is_zero() {
        return Vec::new(); // rational roots handled elsewhere
    }
    let (Some(d0), Some(d1), Some(dm1)) = (
        divisors_bounded(&v0, 256),
        divisors_bounded(&v1, 256),
        divisors_bounded(&vm1, 256),
    ) else {
        return Vec::new();
    };
    let mut factors: Vec<Poly> = Vec::new();
    let mut remaining = p.monic();
    let two = BigInt::from(2);
    'outer: for a0 in signed(&d0) {
        for a1 in signed(&d1) {
            for am1 in signed(&dm1) {
                // interpolate q(0)=a0, q(1)=a1, q(−1)=am1
                let lin2 = &a1 - &am1; // 2·(linear coeff)
                let quad2 = &a1 + &am1 - &a0 * &two; // 2·(quadratic coeff)
                if (&lin2 % &two) != BigInt::zero() || (&quad2 % &two) != BigInt::zero() {
                    continue;
                }
                let c2 = &quad2 / &two;
                if c2.is_zero() {
                    continue;
                }
                let cand = Poly::new(
                    vec![
                        int_scalar(&a0, field),
                        int_scalar(&(&lin2 / &two), field),
                        int_scalar(&c2, field),
                    ],
                    field,
                )
                .monic();
                if cand.degree() != 2 {
                    continue;
                }
                if factors.contains(&cand) {
                    continue;
                }
                let (quot, rem) = remaining.div_rem(&cand);
                if rem.is_zero() {
                    factors.push(cand);
                    remaining = quot;
                    if remaining.degree() < 2 {
                        break 'outer;
                    }
                }
            }
        }
    }
    factors
}

fn signed(divs: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

fn int_scalar(n: &BigInt, field: FieldConfig) -> Scalar {
    Scalar::new(BigRational::from_integer(n.clone()), BigRational::zero(), field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Scalar {
        Scalar::from_int(n, FieldConfig::Rational)
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| rat(c)).collect(), FieldConfig::Rational)
    }

    #[test]
    fn charpoly_of_diag() {
        let m = ExactMatrix::from_int_rows(&[&[2, 0], &[0, 3]], FieldConfig::Rational);
        // (x−2)(x−3) = x² − 5x + 6
        assert_eq!(charpoly(&m), poly(&[6, -5, 1]));
    }

    #[test]
    fn div_rem_and_gcd() {
        let p = poly(&[-2, 0, 1]); // x² − 2
        let q = poly(&[1, 1]); // x + 1
        let (d, r) = p.div_rem(&q);
        assert_eq!(d.mul(&q).add(&r), p);
        let g = poly(&[-1, 1]).mul(&poly(&[-2, 1]));
        let h = poly(&[-1, 1]).mul(&poly(&[3, 1]));
        assert_eq!(g.gcd(&h), poly(&[-1, 1]));
    }

    #[test]
    fn roots_rational_and_quadratic() {
        // x² − 2 over ℚ: no roots, incomplete
        let (r, complete) = roots_in_field(&poly(&[-2, 0, 1]));
        assert!(r.is_empty());
        assert!(!complete);
        // x² − 2 over ℚ(√2): ±√2, complete
        let q2 = FieldConfig::quadratic(2).unwrap();
        let p = Poly::new(
            vec![Scalar::from_int(-2, q2), Scalar::zero(q2), Scalar::one(q2)],
            q2,
        );
        let (r, complete) = roots_in_field(&p);
        assert!(complete);
        let vals: Vec<Scalar> = r.into_iter().map(|(s, _)| s).collect();
        assert!(vals.contains(&Scalar::sqrt_d(q2)));
        assert!(vals.contains(&(-Scalar::sqrt_d(q2))));
    }

    #[test]
    fn repeated_roots_and_multiplicity() {
        // (x−1)²(x+2)
        let p = poly(&[-1, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[2, 1]));
        let (r, complete) = roots_in_field(&p);
        assert!(complete);
        assert_eq!(r, vec![(rat(-2), 1), (rat(1), 2)]);
    }

    #[test]
    fn quartic_with_two_quadratic_factors() {
        // (x²−2)(x²−8) over ℚ(√2): roots ±√2, ±2√2
        let q2 = FieldConfig::quadratic(2).unwrap();
        let f1 = Poly::new(vec![Scalar::from_int(-2, q2), Scalar::zero(q2), Scalar::one(q2)], q2);
        let f2 = Poly::new(vec![Scalar::from_int(-8, q2), Scalar::zero(q2), Scalar::one(q2)], q2);
        let p = f1.mul(&f2);
        let (r, complete) = roots_in_field(&p);
        assert!(complete, "expected full split, got {r:?}");
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn irrational_coefficient_roots() {
        // (x − √2)(x − 3) over ℚ(√2)
        let q2 = FieldConfig::quadratic(2).unwrap();
        let s2 = Scalar::sqrt_d(q2);
        let p = Poly::new(vec![-s2.clone(), Scalar::one(q2)], q2)
            .mul(&Poly::new(vec![Scalar::from_int(-3, q2), Scalar::one(q2)], q2));
        let (r, complete) = roots_in_field(&p);
        assert!(complete);
        let vals: Vec<Scalar> = r.into_iter().map(|(s, _)| s).collect();
        assert!(vals.contains(&s2));
        assert!(vals.contains(&Scalar::from_int(3, q2)));
    }
}
