//! Exact scalar arithmetic over Q, Q(sqrt2) and one quadratic step above it.
//!
//! All comparisons refer to the real embedding with sqrt2 > 0 and every
//! tower radical positive.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact field element. Every operation is total on valid elements and
/// returns canonical (reduced) representatives.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; None on zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Exact sign under the fixed real embedding: -1, 0 or +1.
    fn sign(&self) -> i32;
    /// Embed a rational scalar.
    fn from_rational(r: &BigRational) -> Self;
    /// The rational value, when the element lies in Q.
    fn to_rational(&self) -> Option<BigRational>;
    /// JSON field tag shared by all modules.
    fn field_tag() -> &'static str;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::JsonDecode(format!("bad integer {t:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::JsonDecode("zero denominator".into()));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from(BigInt::from(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i32 {
        if self.numer().is_positive() {
            1
        } else if self.numer().is_negative() {
            -1
        } else {
            0
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn field_tag() -> &'static str {
        "Q"
    }
    fn to_json(&self) -> Value {
        Value::String(rat_to_string(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => rat_from_str(s),
            _ => Err(Error::JsonDecode(format!("expected rational string, got {v}"))),
        }
    }
}

/// Element a + b*sqrt2 of Q(sqrt2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Sqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Sqrt2 { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Sqrt2 { a, b: <BigRational as num_traits::Zero>::zero() }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Sqrt2 { a: rat(a, 1), b: rat(b, 1) }
    }

    /// sqrt2 itself.
    pub fn sqrt2() -> Self {
        Sqrt2::from_ints(0, 1)
    }

    /// Galois conjugate sigma2: sqrt2 -> -sqrt2.
    pub fn conjugate(&self) -> Self {
        Sqrt2 { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm a^2 - 2 b^2 down to Q.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from(BigInt::from(2)) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// The rational part, when b = 0.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }
}

impl fmt::Display for Sqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", rat_to_string(&self.a))
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt2", rat_to_string(&self.b))
        } else {
            write!(f, "{} + {}*sqrt2", rat_to_string(&self.a), rat_to_string(&self.b))
        }
    }
}

impl Field for Sqrt2 {
    fn zero() -> Self {
        Sqrt2::from_ints(0, 0)
    }
    fn one() -> Self {
        Sqrt2::from_ints(1, 0)
    }
    fn from_int(n: i64) -> Self {
        Sqrt2::from_ints(n, 0)
    }
    fn add(&self, rhs: &Self) -> Self {
        Sqrt2 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Sqrt2 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let two = BigRational::from(BigInt::from(2));
        Sqrt2 {
            a: &self.a * &rhs.a + &two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
    fn neg(&self) -> Self {
        Sqrt2 { a: -&self.a, b: -&self.b }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let ni = n.recip();
        Some(Sqrt2 { a: &self.a * &ni, b: -(&self.b * &ni) })
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn sign(&self) -> i32 {
        let sa = Field::sign(&self.a);
        let sb = Field::sign(&self.b);
        match (sa, sb) {
            (0, _) => sb,
            (_, 0) => sa,
            _ if sa == sb => sa,
            // opposite signs: compare a^2 against 2 b^2
            _ => {
                let n = self.norm();
                if n.is_positive() {
                    sa
                } else {
                    sb
                }
            }
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        Sqrt2::from_rational(r.clone())
    }
    fn to_rational(&self) -> Option<BigRational> {
        self.as_rational()
    }
    fn field_tag() -> &'static str {
        "Q(sqrt2)"
    }
    fn to_json(&self) -> Value {
        json!({ "a": rat_to_string(&self.a), "b": rat_to_string(&self.b) })
    }
    fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonDecode(format!("expected {{a,b}} object, got {v}")))?;
        let get = |k: &str| -> Result<BigRational> {
            let s = obj
                .get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::JsonDecode(format!("missing field {k:?}")))?;
            rat_from_str(s)
        };
        Ok(Sqrt2 { a: get("a")?, b: get("b")? })
    }
}

/// Element u + v*sqrt(d) of the tower Q(sqrt2)(sqrt d), d in Q(sqrt2), d > 0.
///
/// Elements with v = 0 carry d = 0 as a neutral marker so that zero and one
/// exist without a radicand context; binary operations unify the radicands
/// and reject genuinely distinct ones.
#[derive(Clone, PartialEq, Debug)]
pub struct Tower {
    pub u: Sqrt2,
    pub v: Sqrt2,
    pub d: Sqrt2,
}

impl Tower {
    pub fn new(u: Sqrt2, v: Sqrt2, d: Sqrt2) -> Self {
        let mut t = Tower { u, v, d };
        t.normalize();
        t
    }

    pub fn from_base(u: Sqrt2) -> Self {
        Tower { u, v: Field::zero(), d: Field::zero() }
    }

    /// sqrt(d) as a tower element. Requires d > 0 in the real embedding.
    pub fn sqrt_of(d: Sqrt2) -> Result<Self> {
        if Field::sign(&d) <= 0 {
            return Err(Error::UnsupportedTower);
        }
        Ok(Tower::new(Field::zero(), Field::one(), d))
    }

    /// Exact square root of a non-negative rational, when it exists.
    fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
        if num_traits::Signed::is_negative(r) {
            return None;
        }
        let pn = r.numer().sqrt();
        let pd = r.denom().sqrt();
        (&pn * &pn == *r.numer() && &pd * &pd == *r.denom())
            .then(|| BigRational::new(pn, pd))
    }

    /// Positive square root of d inside Q(sqrt2), when one exists.
    fn sqrt_in_sqrt2(d: &Sqrt2) -> Option<Sqrt2> {
        if Field::is_zero(d) {
            return Some(Field::zero());
        }
        if Field::sign(d) < 0 {
            return None;
        }
        let two = BigRational::from(BigInt::from(2));
        if d.is_rational() {
            if let Some(p) = Self::rational_sqrt(&d.a) {
                return Some(Sqrt2::from_rational(p));
            }
            // d = 2 q^2 gives sqrt(d) = q sqrt2
            if let Some(q) = Self::rational_sqrt(&(&d.a / &two)) {
                return Some(Sqrt2::new(<BigRational as num_traits::Zero>::zero(), q));
            }
            return None;
        }
        // (p + q sqrt2)^2 = d means z = p^2 solves z^2 - a z + b^2 / 2 = 0
        let disc = Self::rational_sqrt(&d.norm())?;
        for z in [(&d.a + &disc) / &two, (&d.a - &disc) / &two] {
            let Some(p) = Self::rational_sqrt(&z) else { continue };
            if num_traits::Zero::is_zero(&p) {
                continue;
            }
            let q = &d.b / (&two * &p);
            for cand in [Sqrt2::new(p.clone(), q.clone()), Sqrt2::new(-&p, -&q)] {
                if Field::sign(&cand) > 0 && Field::mul(&cand, &cand) == *d {
                    return Some(cand);
                }
            }
        }
        None
    }

    fn normalize(&mut self) {
        if Field::is_zero(&self.v) {
            self.d = Field::zero();
            return;
        }
        // collapse square radicands: if d = e^2 in Q(sqrt2), fold v*e into u
        if let Some(e) = Self::sqrt_in_sqrt2(&self.d) {
            self.u = Field::add(&self.u, &Field::mul(&self.v, &e));
            self.v = Field::zero();
            self.d = Field::zero();
        }
    }

    fn unified_d(&self, rhs: &Self) -> Sqrt2 {
        if Field::is_zero(&self.d) {
            rhs.d.clone()
        } else if Field::is_zero(&rhs.d) || self.d == rhs.d {
            self.d.clone()
        } else {
            panic!("mixed tower radicands {} and {}", self.d, rhs.d)
        }
    }

    /// Conjugate over Q(sqrt2): sqrt(d) -> -sqrt(d).
    pub fn conjugate_over_base(&self) -> Self {
        Tower { u: self.u.clone(), v: Field::neg(&self.v), d: self.d.clone() }
    }

    /// Relative norm u^2 - d v^2 down to Q(sqrt2).
    pub fn rel_norm(&self) -> Sqrt2 {
        Field::sub(&Field::mul(&self.u, &self.u), &Field::mul(&self.d, &Field::mul(&self.v, &self.v)))
    }

    pub fn as_base(&self) -> Option<Sqrt2> {
        Field::is_zero(&self.v).then(|| self.u.clone())
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Field::is_zero(&self.v) {
            write!(f, "{}", self.u)
        } else {
            write!(f, "({}) + ({})*sqrt({})", self.u, self.v, self.d)
        }
    }
}

impl Field for Tower {
    fn zero() -> Self {
        Tower::from_base(Field::zero())
    }
    fn one() -> Self {
        Tower::from_base(Field::one())
    }
    fn from_int(n: i64) -> Self {
        Tower::from_base(Sqrt2::from_ints(n, 0))
    }
    fn add(&self, rhs: &Self) -> Self {
        let d = self.unified_d(rhs);
        Tower::new(Field::add(&self.u, &rhs.u), Field::add(&self.v, &rhs.v), d)
    }
    fn sub(&self, rhs: &Self) -> Self {
        let d = self.unified_d(rhs);
        Tower::new(Field::sub(&self.u, &rhs.u), Field::sub(&self.v, &rhs.v), d)
    }
    fn mul(&self, rhs: &Self) -> Self {
        let d = self.unified_d(rhs);
        let uu = Field::mul(&self.u, &rhs.u);
        let vv = Field::mul(&self.v, &rhs.v);
        let u = if Field::is_zero(&d) {
            uu
        } else {
            Field::add(&uu, &Field::mul(&d, &vv))
        };
        let v = Field::add(&Field::mul(&self.u, &rhs.v), &Field::mul(&self.v, &rhs.u));
        Tower::new(u, v, d)
    }
    fn neg(&self) -> Self {
        Tower { u: Field::neg(&self.u), v: Field::neg(&self.v), d: self.d.clone() }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.rel_norm();
        let ni = Field::inv(&n)?;
        Some(Tower::new(
            Field::mul(&self.u, &ni),
            Field::neg(&Field::mul(&self.v, &ni)),
            self.d.clone(),
        ))
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(&self.u) && Field::is_zero(&self.v)
    }
    fn sign(&self) -> i32 {
        let su = Field::sign(&self.u);
        let sv = Field::sign(&self.v);
        match (su, sv) {
            (0, _) => sv,
            (_, 0) => su,
            _ if su == sv => su,
            // opposite signs: compare u^2 against d v^2 in Q(sqrt2)
            _ => {
                let n = self.rel_norm();
                if Field::sign(&n) > 0 {
                    su
                } else {
                    sv
                }
            }
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        Tower::from_base(Sqrt2::from_rational(r.clone()))
    }
    fn to_rational(&self) -> Option<BigRational> {
        self.as_base().and_then(|b| b.as_rational())
    }
    fn field_tag() -> &'static str {
        "tower"
    }
    fn to_json(&self) -> Value {
        json!({ "u": self.u.to_json(), "v": self.v.to_json(), "d": self.d.to_json() })
    }
    fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonDecode(format!("expected {{u,v,d}} object, got {v}")))?;
        let get = |k: &str| -> Result<Sqrt2> {
            let f = obj.get(k).ok_or_else(|| Error::JsonDecode(format!("missing field {k:?}")))?;
            Sqrt2::from_json(f)
        };
        Ok(Tower::new(get("u")?, get("v")?, get("d")?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s2(a: (i64, i64), b: (i64, i64)) -> Sqrt2 {
        Sqrt2::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Field::sign(&Sqrt2::from_ints(1, 0)), 1);
        assert_eq!(Field::sign(&Sqrt2::from_ints(-1, 1)), 1); // sqrt2 > 1
        assert_eq!(Field::sign(&Sqrt2::from_ints(3, -2)), 1); // 9 > 8
        assert_eq!(Field::sign(&Sqrt2::from_ints(-3, 2)), -1);
        assert_eq!(Field::sign(&Sqrt2::from_ints(0, 0)), 0);
        assert_eq!(Field::sign(&Sqrt2::from_ints(1, -1)), -1); // 1 < sqrt2
    }

    #[test]
    fn sqrt2_inverse() {
        let x = s2((3, 2), (-1, 5));
        let inv = Field::inv(&x).unwrap();
        assert_eq!(Field::mul(&x, &inv), Field::one());
        assert!(Field::inv(&Sqrt2::zero()).is_none());
    }

    #[test]
    fn tower_arithmetic_and_sign() {
        // lambda = 2 + sqrt3 in Q(sqrt2)(sqrt12): (4 + sqrt12)/2
        let d = Sqrt2::from_ints(12, 0);
        let lambda = Tower::new(Sqrt2::from_ints(2, 0), Sqrt2::new(rat(1, 2), rat(0, 1)), d.clone());
        assert_eq!(Field::sign(&lambda), 1);
        let lam_inv = Field::inv(&lambda).unwrap();
        assert_eq!(Field::mul(&lambda, &lam_inv), Field::one());
        // lambda > 1
        assert_eq!(Field::sign(&Field::sub(&lambda, &Tower::one())), 1);
        // 2 - sqrt(12)/2 = 2 - sqrt3 > 0 but < 1
        let mu = lam_inv;
        assert_eq!(Field::sign(&mu), 1);
        assert_eq!(Field::sign(&Field::sub(&mu, &Tower::one())), -1);
    }

    #[test]
    fn deeper_tower_rejected() {
        assert!(Tower::sqrt_of(Sqrt2::from_ints(-3, 0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = s2((22, 7), (-5, 3));
        let v = x.to_json();
        assert_eq!(Sqrt2::from_json(&v).unwrap(), x);
        let r = rat(-9, 4);
        assert_eq!(BigRational::from_json(&r.to_json()).unwrap(), r);
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| rat(p, q))
    }

    fn arb_sqrt2() -> impl Strategy<Value = Sqrt2> {
        (arb_rat(), arb_rat()).prop_map(|(a, b)| Sqrt2::new(a, b))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in arb_sqrt2(), y in arb_sqrt2()) {
            let lhs = Field::mul(&x, &y).norm();
            let rhs = x.norm() * y.norm();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugate_product_is_norm(x in arb_sqrt2()) {
            let p = Field::mul(&x, &x.conjugate());
            prop_assert_eq!(p.as_rational().unwrap(), x.norm());
        }

        #[test]
        fn sign_is_multiplicative(x in arb_sqrt2(), y in arb_sqrt2()) {
            prop_assume!(!Field::is_zero(&x) && !Field::is_zero(&y));
            prop_assert_eq!(Field::sign(&Field::mul(&x, &y)), Field::sign(&x) * Field::sign(&y));
        }
    }
}
