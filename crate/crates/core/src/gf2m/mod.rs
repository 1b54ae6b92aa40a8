//! Arithmetic in binary extension fields GF(2^m), 1 <= m <= 24.
//!
//! Elements are bit strings in the polynomial basis: bit `i` is the
//! coefficient of `x^i`. The default modulus is the lexicographically
//! smallest irreducible polynomial of degree `m` (smallest as an integer).
//!
//! Fields of even degree `2m` are built directly; the subfield GF(2^m) is the
//! fixed set of `x -> x^{2^m}` inside them.

mod kloosterman;
pub(crate) use kloosterman::walsh_hadamard;

pub use kloosterman::{
    kloosterman, kloosterman2, kloosterman_lifted, kloosterman_lifted_direct,
    kloosterman_one_carlitz, kloosterman_one_recursive, kloosterman_value_set, lemma_value_set,
    weil_bound, KloostermanTable,
};

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 24;

/// An element of GF(2^m) in polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Element(pub u64);

impl Gf2Element {
    pub const ZERO: Gf2Element = Gf2Element(0);
    pub const ONE: Gf2Element = Gf2Element(1);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Carry-less product of two polynomials over GF(2).
fn clmul(a: u64, mut b: u64) -> u64 {
    let mut acc = 0u64;
    let mut shifted = a;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= shifted;
        }
        b >>= 1;
        shifted <<= 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, f: u64) -> u64 {
    let df = degree(f);
    while a != 0 && degree(a) >= df {
        a ^= f << (degree(a) - df);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: `f` of degree `m` is irreducible iff
/// `gcd(f, x^{2^i} - x) = 1` for every `1 <= i <= m/2`.
pub fn is_irreducible(f: u64) -> bool {
    let m = degree(f);
    if m < 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = 0b10u64;
    let mut power = x;
    for _ in 1..=m / 2 {
        power = poly_rem(clmul(power, power), f);
        if poly_gcd(f, power ^ x) != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest irreducible polynomial of degree `m`.
pub fn smallest_irreducible(m: u32) -> u64 {
    ((1u64 << m)..(1u64 << (m + 1)))
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

/// Arithmetic context for GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2Field {
    m: u32,
    modulus: u64,
    trace_mask: u64,
}

impl Gf2Field {
    /// GF(2^m) with the default (smallest irreducible) modulus.
    pub fn new(m: u32) -> Result<Self> {
        Self::check_degree(m)?;
        Self::with_modulus(m, smallest_irreducible(m))
    }

    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        Self::check_degree(m)?;
        if degree(modulus) != m as i32 {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:#x} does not have degree {m}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::Reducible(modulus));
        }
        let mut field = Self {
            m,
            modulus,
            trace_mask: 0,
        };
        // Trace is linear: record Tr(x^i) for each basis monomial.
        field.trace_mask = (0..m)
            .filter(|&i| field.trace_by_frobenius(Gf2Element(1 << i)) == Gf2Element::ONE)
            .fold(0, |acc, i| acc | (1 << i));
        Ok(field)
    }

    fn check_degree(m: u32) -> Result<()> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::Budget(format!(
                "field degree {m} outside 1..={MAX_DEGREE}"
            )));
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1 << self.m
    }

    pub fn element(&self, bits: u64) -> Result<Gf2Element> {
        if bits >= self.size() {
            return Err(Error::InvalidParameter(format!(
                "{bits:#x} is not reduced modulo {:#x}",
                self.modulus
            )));
        }
        Ok(Gf2Element(bits))
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf2Element> {
        (0..self.size()).map(Gf2Element)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Gf2Element> {
        (1..self.size()).map(Gf2Element)
    }

    pub fn add(&self, a: Gf2Element, b: Gf2Element) -> Gf2Element {
        Gf2Element(a.0 ^ b.0)
    }

    pub fn mul(&self, a: Gf2Element, b: Gf2Element) -> Gf2Element {
        Gf2Element(poly_rem(clmul(a.0, b.0), self.modulus))
    }

    pub fn square(&self, a: Gf2Element) -> Gf2Element {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Gf2Element, mut e: u64) -> Gf2Element {
        let mut base = a;
        let mut acc = Gf2Element::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Gf2Element) -> Result<Gf2Element> {
        if a.is_zero() {
            return Err(Error::ZeroInverse { m: self.m });
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// `a^{2^i}`.
    pub fn frobenius(&self, a: Gf2Element, i: u32) -> Gf2Element {
        (0..i % self.m).fold(a, |acc, _| self.square(acc))
    }

    /// `sum_{i<m} a^{2^i}` evaluated literally, as a field element.
    pub fn trace_by_frobenius(&self, a: Gf2Element) -> Gf2Element {
        let mut acc = Gf2Element::ZERO;
        let mut y = a;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.square(y);
        }
        acc
    }

    /// Absolute trace to GF(2), as a bit.
    pub fn abs_trace(&self, a: Gf2Element) -> u8 {
        ((a.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Trace from the subfield GF(2^d) to GF(2) of an element of that
    /// subfield: `sum_{i<d} e^{2^i}`.
    pub fn subfield_trace(&self, e: Gf2Element, d: u32) -> Result<u8> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::InvalidParameter(format!(
                "GF(2^{d}) is not a subfield of GF(2^{})",
                self.m
            )));
        }
        if self.frobenius(e, d) != e {
            return Err(Error::NotInSubfield {
                element: e.0,
                sub_degree: d,
            });
        }
        let mut acc = Gf2Element::ZERO;
        let mut y = e;
        for _ in 0..d {
            acc = self.add(acc, y);
            y = self.square(y);
        }
        debug_assert!(acc.0 <= 1);
        Ok(acc.0 as u8)
    }

    /// `x^{2^{m/2}}` in a field of even degree.
    pub fn conjugate(&self, x: Gf2Element) -> Result<Gf2Element> {
        let half = self.half_degree()?;
        Ok(self.frobenius(x, half))
    }

    fn half_degree(&self) -> Result<u32> {
        if !self.m.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "GF(2^{}) has no quadratic subfield",
                self.m
            )));
        }
        Ok(self.m / 2)
    }

    pub fn is_in_subfield(&self, x: Gf2Element, d: u32) -> bool {
        self.m.is_multiple_of(d) && self.frobenius(x, d) == x
    }

    /// Unique factorization `x = y z` in GF(2^{2m})^* with `y` in the
    /// subfield GF(2^m)^* and `z^{2^m + 1} = 1`.
    pub fn polar_decompose(&self, x: Gf2Element) -> Result<(Gf2Element, Gf2Element)> {
        let half = self.half_degree()?;
        if x.is_zero() {
            return Err(Error::ZeroInverse { m: self.m });
        }
        // x^{2^m + 1} = y^{2^m + 1} z^{2^m + 1} = y^2, and squaring is bijective.
        let norm = self.pow(x, (1 << half) + 1);
        let y = self.frobenius(norm, self.m - 1);
        let z = self.mul(x, self.inv(y)?);
        debug_assert_eq!(self.square(y), norm);
        Ok((y, z))
    }

    /// The unit-norm subgroup `{z : z^{2^m + 1} = 1}` of GF(2^{2m})^*.
    pub fn unit_norm_group(&self) -> Result<Vec<Gf2Element>> {
        let half = self.half_degree()?;
        let e = (1u64 << half) + 1;
        Ok(self
            .nonzero_elements()
            .filter(|&z| self.pow(z, e) == Gf2Element::ONE)
            .collect())
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Gf2Element) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse { m: self.m });
        }
        let q1 = self.size() - 1;
        let mut order = q1;
        for p in prime_factors(q1) {
            while order.is_multiple_of(p) && self.pow(a, order / p) == Gf2Element::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    /// Smallest (as an integer) primitive element.
    pub fn primitive_element(&self) -> Gf2Element {
        let q1 = self.size() - 1;
        self.nonzero_elements()
            .find(|&a| self.order_of(a).ok() == Some(q1))
            .expect("the multiplicative group is cyclic")
    }

    /// Table `t` with `t[x] = x^{-1}` for `x != 0` and `t[0] = 0`.
    pub fn inverse_table(&self) -> Vec<u64> {
        let q = self.size() as usize;
        let mut table = vec![0u64; q];
        if q == 2 {
            table[1] = 1;
            return table;
        }
        let g = self.primitive_element();
        let mut powers = Vec::with_capacity(q - 1);
        let mut x = Gf2Element::ONE;
        for _ in 0..q - 1 {
            powers.push(x);
            x = self.mul(x, g);
        }
        for i in 0..q - 1 {
            table[powers[i].0 as usize] = powers[(q - 1 - i) % (q - 1)].0;
        }
        table
    }

    /// Embedding of `self` into `big`, given by the image of the generator `x`.
    pub fn embedding_into(&self, big: &Gf2Field) -> Result<FieldEmbedding> {
        if !big.m.is_multiple_of(self.m) {
            return Err(Error::InvalidParameter(format!(
                "GF(2^{}) does not embed in GF(2^{})",
                self.m, big.m
            )));
        }
        let root = big
            .elements()
            .find(|&y| big.eval_poly(self.modulus, y).is_zero())
            .ok_or_else(|| Error::InvalidParameter("modulus has no root in extension".into()))?;
        Ok(FieldEmbedding {
            small_degree: self.m,
            image_of_x: root,
        })
    }

    fn eval_poly(&self, poly: u64, y: Gf2Element) -> Gf2Element {
        let mut acc = Gf2Element::ZERO;
        for i in (0..=degree(poly)).rev() {
            acc = self.mul(acc, y);
            if (poly >> i) & 1 == 1 {
                acc = self.add(acc, Gf2Element::ONE);
            }
        }
        acc
    }
}

/// Field homomorphism GF(2^d) -> GF(2^{ds}) determined by the image of `x`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    small_degree: u32,
    image_of_x: Gf2Element,
}

impl FieldEmbedding {
    pub fn apply(&self, big: &Gf2Field, a: Gf2Element) -> Gf2Element {
        let mut acc = Gf2Element::ZERO;
        let mut power = Gf2Element::ONE;
        for i in 0..self.small_degree {
            if (a.0 >> i) & 1 == 1 {
                acc = big.add(acc, power);
            }
            power = big.mul(power, self.image_of_x);
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
