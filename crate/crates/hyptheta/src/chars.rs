//! Exact arithmetic on theta characteristics over (Z/2Z)^g.
//!
//! Binary vectors are stored as bit masks with the leftmost coordinate in the
//! most significant position, so the natural integer order on the mask agrees
//! with the lexicographic order on the printed string ("0000" < "0001" < ...).

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported genus; 2^g enumeration is the practical bound anyway.
pub const MAX_GENUS: usize = 16;

/// An element of (Z/2Z)^g.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryVector {
    bits: u32,
    len: u8,
}

impl BinaryVector {
    pub fn zeros(g: usize) -> Self {
        assert!(g >= 1 && g <= MAX_GENUS, "genus out of range");
        BinaryVector { bits: 0, len: g as u8 }
    }

    /// Basis vector e_k (1-based). `basis_or_zero(g, g+1)` is the zero
    /// vector, matching the convention that e_{g+1} = 0.
    pub fn basis(g: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= g, "basis index out of range");
        let mut v = Self::zeros(g);
        v.set(k - 1, 1);
        v
    }

    pub fn basis_or_zero(g: usize, k: usize) -> Self {
        if k == g + 1 {
            Self::zeros(g)
        } else {
            Self::basis(g, k)
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Coordinate i (0-based), either 0 or 1.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len());
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, value: u8) {
        assert!(i < self.len());
        let mask = 1u32 << (self.len() - 1 - i);
        if value & 1 == 1 {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    /// Componentwise sum mod 2, with length validation.
    pub fn add_mod2(&self, other: &BinaryVector) -> Result<BinaryVector> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(BinaryVector {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }

    /// Scalar product mod 2.
    pub fn dot(&self, other: &BinaryVector) -> Result<u8> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(((self.bits & other.bits).count_ones() % 2) as u8)
    }

    /// Position in `enumerate(g)`.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn from_index(g: usize, index: usize) -> Self {
        assert!(g >= 1 && g <= MAX_GENUS && index < (1usize << g));
        BinaryVector { bits: index as u32, len: g as u8 }
    }

    /// Coordinates as 0/1 integers.
    pub fn coords(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Coordinates as f64, convenient for forming tau*alpha etc.
    pub fn coords_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i) as f64).collect()
    }
}

impl std::ops::BitXor for BinaryVector {
    type Output = BinaryVector;
    /// Internal shift arithmetic; lengths must agree structurally.
    fn bitxor(self, rhs: BinaryVector) -> BinaryVector {
        assert_eq!(self.len, rhs.len, "binary vector length mismatch");
        BinaryVector {
            bits: self.bits ^ rhs.bits,
            len: self.len,
        }
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BinaryVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let g = s.len();
        if g == 0 || g > MAX_GENUS || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::BadCharacteristic(s.to_string()));
        }
        let mut v = BinaryVector::zeros(g);
        for (i, b) in s.bytes().enumerate() {
            v.set(i, b - b'0');
        }
        Ok(v)
    }
}

impl Serialize for BinaryVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinaryVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Parity of a characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A theta characteristic [eps; delta].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic {
    pub eps: BinaryVector,
    pub delta: BinaryVector,
}

impl Characteristic {
    pub fn new(eps: BinaryVector, delta: BinaryVector) -> Result<Self> {
        if eps.len() != delta.len() {
            return Err(Error::LengthMismatch {
                expected: eps.len(),
                got: delta.len(),
            });
        }
        Ok(Characteristic { eps, delta })
    }

    pub fn zero(g: usize) -> Self {
        Characteristic {
            eps: BinaryVector::zeros(g),
            delta: BinaryVector::zeros(g),
        }
    }

    pub fn genus(&self) -> usize {
        self.eps.len()
    }

    /// Even iff (eps, delta) = 0 mod 2.
    pub fn parity(&self) -> Parity {
        match self.eps.dot(&self.delta).expect("equal lengths by construction") {
            0 => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Sum of characteristics mod 2 (sum of the order-two points).
    pub fn add(&self, other: &Characteristic) -> Result<Characteristic> {
        Ok(Characteristic {
            eps: self.eps.add_mod2(&other.eps)?,
            delta: self.delta.add_mod2(&other.delta)?,
        })
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.eps, self.delta)
    }
}

impl FromStr for Characteristic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadCharacteristic(s.to_string());
        let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(';').ok_or_else(bad)?;
        let eps: BinaryVector = a.parse().map_err(|_| bad())?;
        let delta: BinaryVector = b.parse().map_err(|_| bad())?;
        Characteristic::new(eps, delta)
    }
}

impl Serialize for Characteristic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Characteristic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// s_k = e_1 + ... + e_k; s_0 is the zero vector.
pub fn s_vector(g: usize, k: usize) -> Result<BinaryVector> {
    if g < 1 || g > MAX_GENUS {
        return Err(Error::GenusOutOfRange { genus: g, min: 1, max: MAX_GENUS });
    }
    if k > g {
        return Err(Error::PrefixOutOfRange { k, genus: g });
    }
    let mut v = BinaryVector::zeros(g);
    for i in 0..k {
        v.set(i, 1);
    }
    Ok(v)
}

/// All 2^g binary vectors in lexicographic order.
pub fn enumerate(g: usize) -> Vec<BinaryVector> {
    assert!(g >= 1 && g <= MAX_GENUS, "genus out of range");
    (0..1usize << g).map(|i| BinaryVector::from_index(g, i)).collect()
}

/// All 2^{2g} characteristics, eps-major lexicographic order.
pub fn enumerate_characteristics(g: usize) -> Vec<Characteristic> {
    let vs = enumerate(g);
    let mut out = Vec::with_capacity(vs.len() * vs.len());
    for &eps in &vs {
        for &delta in &vs {
            out.push(Characteristic { eps, delta });
        }
    }
    out
}
