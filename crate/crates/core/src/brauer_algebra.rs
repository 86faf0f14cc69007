//! Brauer categories enriched in free modules over a commutative ring.
//!
//! `Br_δ(m, n)` is the free module on open diagrams `m -> n`; composing two
//! basis diagrams multiplies by `δ^k`, where `k` counts the loops formed.
//!
//! ```
//! use brauerkit::brauer::BrauerDiagram;
//! use brauerkit::brauer_algebra::{br_compose, BrElement, Ring, RingElem};
//!
//! let z = Ring::Integers;
//! let cap = BrElement::basis(&z, &BrauerDiagram::cap()).unwrap();
//! let cup = BrElement::basis(&z, &BrauerDiagram::cup()).unwrap();
//! let five = RingElem::Int(5.into());
//! let loop_ = br_compose(&cap, &cup, &five).unwrap();
//! assert_eq!(loop_.coefficient(&BrauerDiagram::empty()), five);
//! ```

use crate::brauer::BrauerDiagram;
use crate::error::{Error, Result};
use crate::util::{bigint_from_json, bigint_to_json};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// The provided commutative rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The integers `Z`.
    Integers,
    /// The rationals `Q`.
    Rationals,
    /// Integer polynomials `Z[t]`.
    IntPoly,
    /// Integers modulo `p` (`p ≥ 2`; a field when `p` is prime).
    IntMod(u64),
}

/// An element of one of the provided rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(BigInt),
    Rat(BigRational),
    /// Dense coefficients by degree, without trailing zeros.
    Poly(Vec<BigInt>),
    Mod(u64),
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl Ring {
    pub fn name(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::IntPoly => "Z[t]".into(),
            Ring::IntMod(p) => format!("Z/{p}"),
        }
    }

    /// Parses `Z`, `Q`, `Z[t]` or `Z/p`.
    pub fn parse(s: &str) -> Result<Ring> {
        match s {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            "Z[t]" => Ok(Ring::IntPoly),
            _ => {
                let p = s
                    .strip_prefix("Z/")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?}")))?;
                if p < 2 {
                    return Err(Error::InvalidParameter(format!("modulus {p} is below 2")));
                }
                Ok(Ring::IntMod(p))
            }
        }
    }

    pub fn contains(&self, x: &RingElem) -> bool {
        match (self, x) {
            (Ring::Integers, RingElem::Int(_)) | (Ring::Rationals, RingElem::Rat(_)) => true,
            (Ring::IntPoly, RingElem::Poly(c)) => c.last().is_none_or(|l| !l.is_zero()),
            (Ring::IntMod(p), RingElem::Mod(v)) => v < p,
            _ => false,
        }
    }

    fn check(&self, x: &RingElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{x} is not an element of {}", self.name())))
        }
    }

    pub fn zero(&self) -> RingElem {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// The image of an integer.
    pub fn from_int(&self, k: i64) -> RingElem {
        self.from_bigint(&BigInt::from(k))
    }

    pub fn from_bigint(&self, k: &BigInt) -> RingElem {
        match self {
            Ring::Integers => RingElem::Int(k.clone()),
            Ring::Rationals => RingElem::Rat(BigRational::from_integer(k.clone())),
            Ring::IntPoly => RingElem::Poly(trim(vec![k.clone()])),
            Ring::IntMod(p) => {
                let r = k.mod_floor(&BigInt::from(*p));
                RingElem::Mod(r.to_u64().expect("residue below modulus"))
            }
        }
    }

    /// The polynomial variable `t`; only defined in `Z[t]`.
    pub fn t(&self) -> Result<RingElem> {
        match self {
            Ring::IntPoly => Ok(RingElem::Poly(vec![BigInt::zero(), BigInt::one()])),
            _ => Err(Error::RingMismatch(format!("{} has no variable t", self.name()))),
        }
    }

    pub fn is_zero(&self, x: &RingElem) -> bool {
        *x == self.zero()
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x + y),
            (RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x + y),
            (RingElem::Poly(x), RingElem::Poly(y)) => {
                let mut out = vec![BigInt::zero(); x.len().max(y.len())];
                for (i, c) in x.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in y.iter().enumerate() {
                    out[i] += c;
                }
                RingElem::Poly(trim(out))
            }
            (RingElem::Mod(x), RingElem::Mod(y)) => {
                let Ring::IntMod(p) = self else { unreachable!() };
                RingElem::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!("checked membership"),
        })
    }

    pub fn neg(&self, a: &RingElem) -> Result<RingElem> {
        self.check(a)?;
        Ok(match a {
            RingElem::Int(x) => RingElem::Int(-x),
            RingElem::Rat(x) => RingElem::Rat(-x),
            RingElem::Poly(x) => RingElem::Poly(x.iter().map(|c| -c).collect()),
            RingElem::Mod(x) => {
                let Ring::IntMod(p) = self else { unreachable!() };
                RingElem::Mod(if *x == 0 { 0 } else { p - x })
            }
        })
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x * y),
            (RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x * y),
            (RingElem::Poly(x), RingElem::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Ok(RingElem::Poly(vec![]));
                }
                let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
                for (i, c) in x.iter().enumerate() {
                    for (j, d) in y.iter().enumerate() {
                        out[i + j] += c * d;
                    }
                }
                RingElem::Poly(trim(out))
            }
            (RingElem::Mod(x), RingElem::Mod(y)) => {
                let Ring::IntMod(p) = self else { unreachable!() };
                RingElem::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!("checked membership"),
        })
    }

    /// `a^k` by repeated squaring; `a^0 = 1`, including `0^0`.
    pub fn pow(&self, a: &RingElem, k: &BigUint) -> Result<RingElem> {
        self.check(a)?;
        let mut result = self.one();
        if k.is_zero() {
            return Ok(result);
        }
        if self.is_zero(a) {
            return Ok(self.zero());
        }
        if *a == self.one() {
            return Ok(result);
        }
        let mut base = a.clone();
        for i in 0..k.bits() {
            if k.bit(i) {
                result = self.mul(&result, &base)?;
            }
            if i + 1 < k.bits() {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// A small random element, for property tests.
    pub fn random<R: Rng>(&self, rng: &mut R) -> RingElem {
        match self {
            Ring::Integers | Ring::IntMod(_) => self.from_int(rng.gen_range(-6..=6)),
            Ring::Rationals => {
                let num = BigInt::from(rng.gen_range(-6..=6));
                let den = BigInt::from(rng.gen_range(1..=4));
                RingElem::Rat(BigRational::new(num, den))
            }
            Ring::IntPoly => {
                let deg = rng.gen_range(0..=2);
                RingElem::Poly(trim((0..=deg).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect()))
            }
        }
    }

    pub fn elem_to_json(&self, x: &RingElem) -> Value {
        match x {
            RingElem::Int(v) => bigint_to_json(v),
            RingElem::Rat(v) if v.is_integer() => bigint_to_json(v.numer()),
            RingElem::Rat(v) => Value::String(format!("{}/{}", v.numer(), v.denom())),
            RingElem::Poly(c) => Value::Array(c.iter().map(bigint_to_json).collect()),
            RingElem::Mod(v) => json!(v),
        }
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<RingElem> {
        let bad = || Error::Parse(format!("bad {} coefficient {v}", self.name()));
        match self {
            Ring::Integers => bigint_from_json(v).map(RingElem::Int).ok_or_else(bad),
            Ring::IntMod(_) => bigint_from_json(v).map(|k| self.from_bigint(&k)).ok_or_else(bad),
            Ring::Rationals => {
                if let Some(k) = bigint_from_json(v) {
                    return Ok(self.from_bigint(&k));
                }
                let s = v.as_str().ok_or_else(bad)?;
                let (a, b) = s.split_once('/').ok_or_else(bad)?;
                let (a, b): (BigInt, BigInt) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if b.is_zero() {
                    return Err(bad());
                }
                Ok(RingElem::Rat(BigRational::new(a, b)))
            }
            Ring::IntPoly => {
                if let Some(k) = bigint_from_json(v) {
                    return Ok(self.from_bigint(&k));
                }
                let arr = v.as_array().ok_or_else(bad)?;
                let c = arr.iter().map(|x| bigint_from_json(x).ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
                Ok(RingElem::Poly(trim(c)))
            }
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Int(v) => write!(f, "{v}"),
            RingElem::Rat(v) => write!(f, "{v}"),
            RingElem::Mod(v) => write!(f, "{v}"),
            RingElem::Poly(c) => {
                if c.is_empty() {
                    return write!(f, "0");
                }
                let mut terms = Vec::new();
                for (i, a) in c.iter().enumerate().rev() {
                    if a.is_zero() {
                        continue;
                    }
                    let mag = a.abs();
                    let coeff = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
                    let var = match i {
                        0 => String::new(),
                        1 => "t".into(),
                        _ => format!("t^{i}"),
                    };
                    let sign = if a.is_negative() { "-" } else { "+" };
                    terms.push((sign, format!("{coeff}{var}")));
                }
                for (k, (sign, t)) in terms.iter().enumerate() {
                    match (k, *sign) {
                        (0, "-") => write!(f, "-{t}")?,
                        (0, _) => write!(f, "{t}")?,
                        (_, s) => write!(f, " {s} {t}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// A finite linear combination of open diagrams `m -> n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrElement {
    ring: Ring,
    m: usize,
    n: usize,
    terms: BTreeMap<BrauerDiagram, RingElem>,
}

impl BrElement {
    pub fn zero(ring: &Ring, m: usize, n: usize) -> Self {
        BrElement { ring: ring.clone(), m, n, terms: BTreeMap::new() }
    }

    /// `coeff · d` for an open diagram `d`.
    pub fn term(ring: &Ring, d: &BrauerDiagram, coeff: RingElem) -> Result<Self> {
        ring.check(&coeff)?;
        if !d.is_open() {
            return Err(Error::InvalidParameter(format!("basis diagram {d} has closed components")));
        }
        let mut e = Self::zero(ring, d.m(), d.n());
        if !ring.is_zero(&coeff) {
            e.terms.insert(d.clone(), coeff);
        }
        Ok(e)
    }

    /// The basis element of an open diagram.
    pub fn basis(ring: &Ring, d: &BrauerDiagram) -> Result<Self> {
        Self::term(ring, d, ring.one())
    }

    /// The identity `n -> n`.
    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::basis(ring, &BrauerDiagram::identity(n)).expect("identity is open")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<BrauerDiagram, RingElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &BrauerDiagram) -> RingElem {
        self.terms.get(d).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn add_term(&mut self, d: BrauerDiagram, c: RingElem) -> Result<()> {
        let sum = match self.terms.get(&d) {
            Some(old) => self.ring.add(old, &c)?,
            None => c,
        };
        if self.ring.is_zero(&sum) {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
        Ok(())
    }

    fn same_shape(&self, other: &BrElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring.name(), other.ring.name())));
        }
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::ArityMismatch(format!(
                "{}->{} vs {}->{}",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &BrElement) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RingElem) -> Result<Self> {
        let mut out = Self::zero(&self.ring, self.m, self.n);
        for (d, a) in &self.terms {
            out.add_term(d.clone(), self.ring.mul(c, a)?)?;
        }
        Ok(out)
    }

    /// Bilinear tensor product; loops cannot form.
    pub fn tensor(&self, other: &BrElement) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring.name(), other.ring.name())));
        }
        let mut out = Self::zero(&self.ring, self.m + other.m, self.n + other.n);
        for (d1, a) in &self.terms {
            for (d2, b) in &other.terms {
                out.add_term(d1.tensor(d2), self.ring.mul(a, b)?)?;
            }
        }
        Ok(out)
    }
}

/// Composes `a : m -> n` then `b : n -> p`; each loop contributes a factor `delta`.
pub fn br_compose(a: &BrElement, b: &BrElement, delta: &RingElem) -> Result<BrElement> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", a.ring.name(), b.ring.name())));
    }
    a.ring.check(delta)?;
    if a.n != b.m {
        return Err(Error::ArityMismatch(format!(
            "cannot compose {}->{} with {}->{}",
            a.m, a.n, b.m, b.n
        )));
    }
    let ring = &a.ring;
    let mut out = BrElement::zero(ring, a.m, b.n);
    for (f, x) in &a.terms {
        for (g, y) in &b.terms {
            let gf = f.then(g)?;
            let scale = ring.pow(delta, gf.closed())?;
            let coeff = ring.mul(&ring.mul(x, y)?, &scale)?;
            out.add_term(gf.with_closed(BigUint::zero()), coeff)?;
        }
    }
    Ok(out)
}

/// The image `t^k · (τ, 0)` of a diagram `(τ, k)` in `Br_t` over `Z[t]`.
pub fn bd_to_br_t(f: &BrauerDiagram) -> BrElement {
    let ring = Ring::IntPoly;
    let k = f.closed().to_usize().expect("bubble count fits in memory");
    let mut coeff = vec![BigInt::zero(); k + 1];
    coeff[k] = BigInt::one();
    BrElement::term(&ring, &f.with_closed(BigUint::zero()), RingElem::Poly(coeff)).expect("open basis diagram")
}

/// Dimension of `Br_δ(n, n)`: the number of open diagrams `n -> n`, `(2n-1)!!`.
pub fn algebra_dimension(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(2 * i - 1))
}

/// Whether an open diagram respects the walls `(m1, n1)` on sources and
/// `(m2, n2)` on targets.
///
/// The first `m1` sources and first `m2` targets carry `+`, the rest `-`.
/// Every pair must join `{s+, t-}` with `{s-, t+}`.
pub fn is_walled(f: &BrauerDiagram, wall: (usize, usize, usize, usize)) -> Result<bool> {
    let (m1, n1, m2, n2) = wall;
    if m1 + n1 != f.m() || m2 + n2 != f.n() {
        return Err(Error::ArityMismatch(format!(
            "wall ({m1},{n1}),({m2},{n2}) does not fit {}->{}",
            f.m(),
            f.n()
        )));
    }
    if !f.is_open() {
        return Ok(false);
    }
    use crate::brauer::Point;
    let in_a = |p: Point| match p {
        Point::Source(i) => i < m1,
        Point::Target(j) => j >= m2,
    };
    Ok(f.pairs().iter().all(|&(x, y)| in_a(x) != in_a(y)))
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    diagram: BrauerDiagram,
    coeff: Value,
}

#[derive(Serialize, Deserialize)]
struct ElementWire {
    ring: String,
    m: usize,
    n: usize,
    terms: Vec<TermWire>,
}

impl Serialize for BrElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementWire {
            ring: self.ring.name(),
            m: self.m,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| TermWire { diagram: d.clone(), coeff: self.ring.elem_to_json(c) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BrElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ElementWire::deserialize(d)?;
        let build = || -> Result<BrElement> {
            let ring = Ring::parse(&w.ring)?;
            let mut e = BrElement::zero(&ring, w.m, w.n);
            for t in &w.terms {
                if (t.diagram.m(), t.diagram.n()) != (w.m, w.n) {
                    return Err(Error::ArityMismatch(format!("term {} in a {}->{} element", t.diagram, w.m, w.n)));
                }
                let single = BrElement::term(&ring, &t.diagram, ring.elem_from_json(&t.coeff)?)?;
                e = e.add(&single)?;
            }
            Ok(e)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for BrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("({c}) [{d}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
