//! Exact scalars in the four supported *-fields: rationals, Gaussian
//! rationals, rational quaternions, and odd prime fields.
//!
//! All values are kept in canonical form (lowest terms, positive
//! denominators, least residues) so equality is structural.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Which concrete *-field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    GaussianRational,
    RationalQuaternion,
    PrimeField,
}

/// The star map on scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    Identity,
    Conjugation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("descriptor mismatch: {0:?} vs {1:?}")]
    DescriptorMismatch(FieldDescriptor, FieldDescriptor),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not an odd prime >= 3")]
    BadModulus(u64),
    #[error("involution {0:?} is not valid for field kind {1:?}")]
    BadInvolution(Involution, FieldKind),
    #[error("scalar literal `{0}`: {1}")]
    Syntax(String, String),
}

/// A *-field descriptor: kind, modulus (prime fields only), involution.
///
/// The involution is forced by the kind (conjugation exactly for the
/// Gaussian and quaternion fields); `new` rejects the other pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub modulus: Option<u64>,
    pub involution: Involution,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldDescriptor {
    pub fn new(
        kind: FieldKind,
        modulus: Option<u64>,
        involution: Involution,
    ) -> Result<Self, ScalarError> {
        match (kind, involution) {
            (FieldKind::Rational | FieldKind::PrimeField, Involution::Identity) => {}
            (
                FieldKind::GaussianRational | FieldKind::RationalQuaternion,
                Involution::Conjugation,
            ) => {}
            _ => return Err(ScalarError::BadInvolution(involution, kind)),
        }
        match (kind, modulus) {
            (FieldKind::PrimeField, Some(p)) => {
                if !is_odd_prime(p) {
                    return Err(ScalarError::BadModulus(p));
                }
            }
            (FieldKind::PrimeField, None) => return Err(ScalarError::BadModulus(0)),
            (_, Some(p)) => return Err(ScalarError::BadModulus(p)),
            (_, None) => {}
        }
        Ok(FieldDescriptor {
            kind,
            modulus,
            involution,
        })
    }

    pub fn rational() -> Self {
        FieldDescriptor {
            kind: FieldKind::Rational,
            modulus: None,
            involution: Involution::Identity,
        }
    }

    pub fn gaussian() -> Self {
        FieldDescriptor {
            kind: FieldKind::GaussianRational,
            modulus: None,
            involution: Involution::Conjugation,
        }
    }

    pub fn quaternion() -> Self {
        FieldDescriptor {
            kind: FieldKind::RationalQuaternion,
            modulus: None,
            involution: Involution::Conjugation,
        }
    }

    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        FieldDescriptor::new(FieldKind::PrimeField, Some(p), Involution::Identity)
    }

    pub fn is_prime_field(&self) -> bool {
        self.kind == FieldKind::PrimeField
    }

    pub fn is_commutative(&self) -> bool {
        self.kind != FieldKind::RationalQuaternion
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    Gauss(BigRational, BigRational),
    Quat([BigRational; 4]),
    Res(u64),
}

/// An exact element of one of the supported *-fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    desc: FieldDescriptor,
    value: Value,
}

fn br(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mod_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // extended Euclid on (a, p)
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    Some(t.rem_euclid(p as i128) as u64)
}

impl Scalar {
    fn assert_same(&self, other: &Scalar) {
        assert_eq!(
            self.desc, other.desc,
            "scalar descriptor mismatch; validate inputs before arithmetic"
        );
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn zero(desc: FieldDescriptor) -> Scalar {
        let value = match desc.kind {
            FieldKind::Rational => Value::Rat(BigRational::zero()),
            FieldKind::GaussianRational => Value::Gauss(BigRational::zero(), BigRational::zero()),
            FieldKind::RationalQuaternion => Value::Quat([
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ]),
            FieldKind::PrimeField => Value::Res(0),
        };
        Scalar { desc, value }
    }

    pub fn one(desc: FieldDescriptor) -> Scalar {
        Scalar::from_integer(desc, 1)
    }

    pub fn from_integer(desc: FieldDescriptor, n: i64) -> Scalar {
        let value = match desc.kind {
            FieldKind::Rational => Value::Rat(br(n)),
            FieldKind::GaussianRational => Value::Gauss(br(n), BigRational::zero()),
            FieldKind::RationalQuaternion => Value::Quat([
                br(n),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ]),
            FieldKind::PrimeField => {
                let p = desc.modulus.unwrap();
                Value::Res((n.rem_euclid(p as i64)) as u64)
            }
        };
        Scalar { desc, value }
    }

    pub fn from_rational(desc: FieldDescriptor, r: BigRational) -> Scalar {
        let value = match desc.kind {
            FieldKind::Rational => Value::Rat(r),
            FieldKind::GaussianRational => Value::Gauss(r, BigRational::zero()),
            FieldKind::RationalQuaternion => Value::Quat([
                r,
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ]),
            FieldKind::PrimeField => panic!("from_rational is not defined for prime fields"),
        };
        Scalar { desc, value }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar {
            desc: FieldDescriptor::gaussian(),
            value: Value::Gauss(re, im),
        }
    }

    pub fn quaternion(parts: [BigRational; 4]) -> Scalar {
        Scalar {
            desc: FieldDescriptor::quaternion(),
            value: Value::Quat(parts),
        }
    }

    pub fn residue(desc: FieldDescriptor, v: u64) -> Scalar {
        let p = desc
            .modulus
            .expect("residue requires a prime field descriptor");
        Scalar {
            desc,
            value: Value::Res(v % p),
        }
    }

    /// Quaternion/Gaussian unit by component index (0 = 1, 1 = i, 2 = j, 3 = k).
    pub fn unit(desc: FieldDescriptor, component: usize) -> Scalar {
        match desc.kind {
            FieldKind::GaussianRational => {
                assert!(component < 2);
                let mut re = BigRational::zero();
                let mut im = BigRational::zero();
                if component == 0 {
                    re = BigRational::one();
                } else {
                    im = BigRational::one();
                }
                Scalar {
                    desc,
                    value: Value::Gauss(re, im),
                }
            }
            FieldKind::RationalQuaternion => {
                assert!(component < 4);
                let mut parts = [
                    BigRational::zero(),
                    BigRational::zero(),
                    BigRational::zero(),
                    BigRational::zero(),
                ];
                parts[component] = BigRational::one();
                Scalar {
                    desc,
                    value: Value::Quat(parts),
                }
            }
            _ => {
                assert_eq!(component, 0);
                Scalar::one(desc)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_zero(),
            Value::Gauss(a, b) => a.is_zero() && b.is_zero(),
            Value::Quat(q) => q.iter().all(|c| c.is_zero()),
            Value::Res(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.desc)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same(other);
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Gauss(a, b), Value::Gauss(c, d)) => Value::Gauss(a + c, b + d),
            (Value::Quat(a), Value::Quat(b)) => {
                Value::Quat([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2], &a[3] + &b[3]])
            }
            (Value::Res(a), Value::Res(b)) => {
                Value::Res(mod_add(*a, *b, self.desc.modulus.unwrap()))
            }
            _ => unreachable!(),
        };
        Scalar {
            desc: self.desc,
            value,
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(-a),
            Value::Gauss(a, b) => Value::Gauss(-a, -b),
            Value::Quat(a) => Value::Quat([-&a[0], -&a[1], -&a[2], -&a[3]]),
            Value::Res(a) => {
                let p = self.desc.modulus.unwrap();
                Value::Res(if *a == 0 { 0 } else { p - a })
            }
        };
        Scalar {
            desc: self.desc,
            value,
        }
    }

    /// Product. Noncommutative for quaternions: i*j = k, j*i = -k.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same(other);
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Gauss(a, b), Value::Gauss(c, d)) => Value::Gauss(a * c - b * d, a * d + b * c),
            (Value::Quat(a), Value::Quat(b)) => Value::Quat([
                &a[0] * &b[0] - &a[1] * &b[1] - &a[2] * &b[2] - &a[3] * &b[3],
                &a[0] * &b[1] + &a[1] * &b[0] + &a[2] * &b[3] - &a[3] * &b[2],
                &a[0] * &b[2] - &a[1] * &b[3] + &a[2] * &b[0] + &a[3] * &b[1],
                &a[0] * &b[3] + &a[1] * &b[2] - &a[2] * &b[1] + &a[3] * &b[0],
            ]),
            (Value::Res(a), Value::Res(b)) => {
                Value::Res(mod_mul(*a, *b, self.desc.modulus.unwrap()))
            }
            _ => unreachable!(),
        };
        Scalar {
            desc: self.desc,
            value,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if self.desc != other.desc {
            return Err(ScalarError::DescriptorMismatch(self.desc, other.desc));
        }
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if self.desc != other.desc {
            return Err(ScalarError::DescriptorMismatch(self.desc, other.desc));
        }
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if self.desc != other.desc {
            return Err(ScalarError::DescriptorMismatch(self.desc, other.desc));
        }
        Ok(self.mul(other))
    }

    /// Multiplicative inverse; `a * a^-1 = a^-1 * a = 1`.
    pub fn invert(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(a.recip()),
            Value::Gauss(a, b) => {
                let n = a * a + b * b;
                Value::Gauss(a / &n, -b / &n)
            }
            Value::Quat(q) => {
                // q^-1 = q* / (q q*)
                let n: BigRational = q.iter().map(|c| c * c).sum();
                Value::Quat([&q[0] / &n, -&q[1] / &n, -&q[2] / &n, -&q[3] / &n])
            }
            Value::Res(a) => Value::Res(mod_inv(*a, self.desc.modulus.unwrap()).unwrap()),
        };
        Ok(Scalar {
            desc: self.desc,
            value,
        })
    }

    /// The involution: identity, complex conjugation, or quaternion conjugation.
    pub fn star(&self) -> Scalar {
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(a.clone()),
            Value::Gauss(a, b) => Value::Gauss(a.clone(), -b),
            Value::Quat(q) => Value::Quat([q[0].clone(), -&q[1], -&q[2], -&q[3]]),
            Value::Res(a) => Value::Res(*a),
        };
        Scalar {
            desc: self.desc,
            value,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.star()
    }

    /// a * a*, always a symmetric element; rational-valued in every field here.
    pub fn norm(&self) -> Scalar {
        self.mul(&self.star())
    }

    /// For symmetric elements of the infinite fields, the underlying rational.
    pub fn rational_part(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rat(a) => Some(a.clone()),
            Value::Gauss(a, b) => b.is_zero().then(|| a.clone()),
            Value::Quat(q) => {
                (q[1].is_zero() && q[2].is_zero() && q[3].is_zero()).then(|| q[0].clone())
            }
            Value::Res(_) => None,
        }
    }

    pub fn residue_value(&self) -> Option<u64> {
        match &self.value {
            Value::Res(v) => Some(*v),
            _ => None,
        }
    }

    /// Component list: 1 (rational/prime), 2 (gaussian), 4 (quaternion).
    pub fn components(&self) -> Vec<BigRational> {
        match &self.value {
            Value::Rat(a) => vec![a.clone()],
            Value::Gauss(a, b) => vec![a.clone(), b.clone()],
            Value::Quat(q) => q.to_vec(),
            Value::Res(v) => vec![BigRational::from_integer(BigInt::from(*v))],
        }
    }

    pub fn from_components(desc: FieldDescriptor, comps: &[BigRational]) -> Scalar {
        match desc.kind {
            FieldKind::Rational => {
                assert_eq!(comps.len(), 1);
                Scalar {
                    desc,
                    value: Value::Rat(comps[0].clone()),
                }
            }
            FieldKind::GaussianRational => {
                assert_eq!(comps.len(), 2);
                Scalar {
                    desc,
                    value: Value::Gauss(comps[0].clone(), comps[1].clone()),
                }
            }
            FieldKind::RationalQuaternion => {
                assert_eq!(comps.len(), 4);
                Scalar {
                    desc,
                    value: Value::Quat([
                        comps[0].clone(),
                        comps[1].clone(),
                        comps[2].clone(),
                        comps[3].clone(),
                    ]),
                }
            }
            FieldKind::PrimeField => panic!("from_components is not defined for prime fields"),
        }
    }

    /// Whether the element commutes with everything in its field.
    pub fn is_central(&self) -> bool {
        match &self.value {
            Value::Quat(q) => q[1].is_zero() && q[2].is_zero() && q[3].is_zero(),
            _ => true,
        }
    }

    /// Total order on same-descriptor scalars for canonical indexing.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        self.assert_same(other);
        match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => a.cmp(b),
            (Value::Gauss(a, b), Value::Gauss(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Value::Quat(a), Value::Quat(b)) => {
                for (x, y) in a.iter().zip(b.iter()) {
                    let o = x.cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
            (Value::Res(a), Value::Res(b)) => a.cmp(b),
            _ => unreachable!(),
        }
    }

    /// Parse a scalar literal. Grammar (no whitespace):
    ///   rational    `[-]a` or `[-]a/b`
    ///   gaussian    ordered components `<rat>`, `<rat>i` joined by `+`/`-`
    ///   quaternion  ordered components with suffixes ``, `i`, `j`, `k`
    ///   prime field decimal integer, reduced mod p
    /// Zero components are omitted on output except the lone `0`.
    pub fn parse(text: &str, desc: &FieldDescriptor) -> Result<Scalar, ScalarError> {
        let err = |m: &str| ScalarError::Syntax(text.to_string(), m.to_string());
        let t = text.trim();
        if t.is_empty() {
            return Err(err("empty literal"));
        }
        if t.contains(char::is_whitespace) {
            return Err(err("whitespace inside literal"));
        }
        match desc.kind {
            FieldKind::Rational => {
                let r = parse_signed_rational(t).ok_or_else(|| err("expected [-]a or [-]a/b"))?;
                Ok(Scalar {
                    desc: *desc,
                    value: Value::Rat(r),
                })
            }
            FieldKind::PrimeField => {
                let p = desc.modulus.unwrap();
                let (neg, body) = match t.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, t),
                };
                if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err("expected a decimal integer"));
                }
                let n: BigInt = body.parse().map_err(|_| err("bad integer"))?;
                let p_big = BigInt::from(p);
                let mut r = n % &p_big;
                if neg {
                    r = -r;
                }
                let r = ((r % &p_big) + &p_big) % &p_big;
                Ok(Scalar {
                    desc: *desc,
                    value: Value::Res(r.to_u64().unwrap()),
                })
            }
            FieldKind::GaussianRational | FieldKind::RationalQuaternion => {
                let max_comp = if desc.kind == FieldKind::GaussianRational {
                    2
                } else {
                    4
                };
                let terms = split_terms(t).ok_or_else(|| err("malformed component list"))?;
                if terms.is_empty() {
                    return Err(err("empty literal"));
                }
                let mut comps = vec![BigRational::zero(); 4];
                let mut last_slot: i32 = -1;
                for (sign, body) in terms {
                    let (slot, digits) = match body.chars().last() {
                        Some('i') => (1, &body[..body.len() - 1]),
                        Some('j') => (2, &body[..body.len() - 1]),
                        Some('k') => (3, &body[..body.len() - 1]),
                        _ => (0, body),
                    };
                    if slot >= max_comp {
                        return Err(ScalarError::Syntax(
                            text.to_string(),
                            "component not valid for this field".to_string(),
                        ));
                    }
                    if slot as i32 <= last_slot {
                        return Err(err("components out of order or repeated"));
                    }
                    last_slot = slot as i32;
                    let mut r = parse_unsigned_rational(digits)
                        .ok_or_else(|| err("bad component coefficient"))?;
                    if sign < 0 {
                        r = -r;
                    }
                    comps[slot] = r;
                }
                let value = if desc.kind == FieldKind::GaussianRational {
                    Value::Gauss(comps[0].clone(), comps[1].clone())
                } else {
                    Value::Quat([
                        comps[0].clone(),
                        comps[1].clone(),
                        comps[2].clone(),
                        comps[3].clone(),
                    ])
                };
                Ok(Scalar { desc: *desc, value })
            }
        }
    }
}

/// Exposed per-operation entry point used by the CLI layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return None;
    }
    if !num.bytes().all(|b| b.is_ascii_digit()) || !den.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn parse_signed_rational(s: &str) -> Option<BigRational> {
    match s.strip_prefix('-') {
        Some(rest) => parse_unsigned_rational(rest).map(|r| -r),
        None => parse_unsigned_rational(s),
    }
}

/// Split `a+bi-cj` style text into signed term bodies.
fn split_terms(s: &str) -> Option<Vec<(i32, &str)>> {
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut i = 0usize;
    if bytes[0] == b'-' {
        sign = -1;
        start = 1;
        i = 1;
    } else if bytes[0] == b'+' {
        return None;
    }
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'+' || b == b'-' {
            if i == start {
                return None;
            }
            terms.push((sign, &s[start..i]));
            sign = if b == b'-' { -1 } else { 1 };
            start = i + 1;
        }
        i += 1;
    }
    if start >= bytes.len() {
        return None;
    }
    terms.push((sign, &s[start..]));
    Some(terms)
}

fn write_rat(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, comps: &[(&BigRational, &str)]) -> fmt::Result {
    let mut any = false;
    for (r, suffix) in comps {
        if r.is_zero() {
            continue;
        }
        if any {
            write!(f, "{}", if r.is_negative() { "-" } else { "+" })?;
        } else if r.is_negative() {
            write!(f, "-")?;
        }
        write_rat(f, &r.abs())?;
        write!(f, "{suffix}")?;
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(r) => write_rat(f, r),
            Value::Gauss(a, b) => write_terms(f, &[(a, ""), (b, "i")]),
            Value::Quat(q) => {
                write_terms(f, &[(&q[0], ""), (&q[1], "i"), (&q[2], "j"), (&q[3], "k")])
            }
            Value::Res(v) => write!(f, "{v}"),
        }
    }
}
