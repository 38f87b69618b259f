//! Arithmetic in GF(2^h), 1 <= h <= 16, in the polynomial basis.
//!
//! A `FieldCtx` fixes the degree and an irreducible modulus and owns the
//! log/antilog tables that multiplication, inversion and the precomputed
//! absolute-trace table are built on. Elements are plain h-bit masks;
//! addition is XOR and does not need the context.
//!
//! Moduli: h = 4 uses z^4 = z + 1, h = 6 uses z^6 = z^4 + z^3 + z + 1 and
//! h = 7 uses z^7 = z + 1; every other degree uses the lexicographically
//! least irreducible polynomial. `FieldCtx::with_modulus` accepts any
//! irreducible polynomial of the right degree instead.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// An element of GF(2^h): the coefficient vector of the polynomial basis,
/// packed into the low h bits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement {
    bits: u32,
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { bits: 0 };
    pub const ONE: FieldElement = FieldElement { bits: 1 };

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Wrap raw bits without a range check; prefer `FieldCtx::el` outside
    /// the crate internals.
    pub(crate) const fn from_bits(bits: u32) -> FieldElement {
        FieldElement { bits }
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Lowercase-hex form used in every serialized artifact.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.bits)
    }

    pub fn from_hex(s: &str) -> Result<FieldElement> {
        let bits = u32::from_str_radix(s.trim(), 16)
            .map_err(|_| Error::Argument(format!("bad hex field element {s:?}")))?;
        Ok(FieldElement { bits })
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement { bits: self.bits ^ rhs.bits }
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.bits ^= rhs.bits;
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

/// Carry-less product of two F2 polynomials (bit masks).
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = a as u64;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Reduce a polynomial modulo `m` (degree of m must be positive).
fn poly_mod(mut p: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while poly_degree(p) >= dm {
        p ^= m << (poly_degree(p) - dm);
    }
    p
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u64, b: u64, m: u64) -> u64 {
    poly_mod(clmul(a as u32, b as u32), m)
}

/// x^(2^k) mod m by repeated squaring.
fn poly_x_pow_pow2(k: u32, m: u64) -> u64 {
    let mut t = poly_mod(0b10, m);
    for _ in 0..k {
        t = poly_mulmod(t, t, m);
    }
    t
}

/// Rabin's irreducibility test for a degree-h polynomial over F2.
pub fn is_irreducible(modulus: u32, h: u32) -> bool {
    let m = modulus as u64;
    if h == 0 || poly_degree(m) != h as i32 {
        return false;
    }
    if h == 1 {
        return true;
    }
    // x^(2^h) == x mod m
    if poly_x_pow_pow2(h, m) != 0b10 {
        return false;
    }
    // gcd(x^(2^(h/p)) - x, m) == 1 for every prime p | h
    let mut n = h;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let t = poly_x_pow_pow2(h / p, m) ^ 0b10;
            if poly_gcd(t, m) != 1 {
                return false;
            }
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 && n < h {
        let t = poly_x_pow_pow2(h / n, m) ^ 0b10;
        if poly_gcd(t, m) != 1 {
            return false;
        }
    }
    if n == h && h > 1 {
        let t = poly_x_pow_pow2(1, m) ^ 0b10;
        if poly_gcd(t, m) != 1 {
            return false;
        }
    }
    true
}

/// Default modulus for degree h: the fixed choices for h = 4, 6, 7, the
/// lexicographically least irreducible polynomial otherwise.
pub fn default_modulus(h: u32) -> Result<u32> {
    match h {
        0 | 17.. => Err(Error::UnsupportedDegree(h)),
        4 => Ok(0x13),
        6 => Ok(0x5b),
        7 => Ok(0x83),
        _ => {
            for r in 0..(1u32 << h) {
                let m = (1 << h) | r;
                if is_irreducible(m, h) {
                    return Ok(m);
                }
            }
            unreachable!("an irreducible polynomial of every degree exists")
        }
    }
}

/// GF(2^h) context: modulus, a primitive generator and the multiplication,
/// inversion and trace tables. Immutable after construction; all operations
/// take `&self` and are safe to share across threads.
pub struct FieldCtx {
    h: u32,
    modulus: u32,
    generator: FieldElement,
    /// exp[i] = generator^i for i in 0..2(q-1); doubled so index sums skip a reduction.
    exp: Vec<u32>,
    /// log[x] = discrete log of x base generator; log[0] is unused.
    log: Vec<u32>,
    /// trace[x] = absolute trace of x, one byte per element.
    trace: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(h={}, modulus={:#x})", self.h, self.modulus)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

impl FieldCtx {
    pub fn new(h: u32) -> Result<FieldCtx> {
        FieldCtx::with_modulus(h, default_modulus(h)?)
    }

    pub fn with_modulus(h: u32, modulus: u32) -> Result<FieldCtx> {
        if h == 0 || h > 16 {
            return Err(Error::UnsupportedDegree(h));
        }
        if !is_irreducible(modulus, h) {
            return Err(Error::ReducibleModulus(modulus, h));
        }
        let q = 1u32 << h;
        // Shift-and-reduce product, used only while bootstrapping the tables.
        let slow_mul = |a: u32, b: u32| poly_mod(clmul(a, b), modulus as u64) as u32;

        // Find the least primitive element and fill exp/log from its powers.
        let mut generator = 0;
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        'candidates: for g in 2..q.max(3) {
            let g = if q == 2 { 1 } else { g };
            log.iter_mut().for_each(|v| *v = 0);
            let mut x = 1u32;
            for i in 0..(q - 1) as usize {
                if x == 1 && i > 0 {
                    continue 'candidates; // order < q-1
                }
                exp[i] = x;
                log[x as usize] = i as u32;
                x = slow_mul(x, g);
            }
            // after q-1 steps x = g^(q-1) = 1 by Lagrange
            generator = g;
            break;
        }
        if generator == 0 {
            return Err(Error::ReducibleModulus(modulus, h));
        }
        log[1] = 0;
        for i in 0..(q as usize - 1) {
            exp[i + q as usize - 1] = exp[i];
        }

        let mut ctx = FieldCtx {
            h,
            modulus,
            generator: FieldElement { bits: generator },
            exp,
            log,
            trace: Vec::new(),
        };
        let mut trace = vec![0u8; q as usize];
        for bits in 0..q {
            let x = FieldElement { bits };
            let mut acc = x;
            let mut t = x;
            for _ in 1..h {
                t = ctx.mul(t, t);
                acc += t;
            }
            debug_assert!(acc.bits <= 1, "trace must land in F2");
            trace[bits as usize] = acc.bits as u8;
        }
        ctx.trace = trace;
        Ok(ctx)
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Field size q = 2^h.
    pub fn q(&self) -> u32 {
        1 << self.h
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Wrap raw bits, panicking when out of range. Use `try_el` at I/O boundaries.
    pub fn el(&self, bits: u32) -> FieldElement {
        assert!(bits < self.q(), "element {bits:#x} out of range for GF(2^{})", self.h);
        FieldElement { bits }
    }

    pub fn try_el(&self, bits: u32) -> Result<FieldElement> {
        if bits < self.q() {
            Ok(FieldElement { bits })
        } else {
            Err(Error::ElementOutOfRange(bits, self.h))
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.bits < self.q()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(|bits| FieldElement { bits })
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.bits == 0 || b.bits == 0 {
            return FieldElement::ZERO;
        }
        let idx = self.log[a.bits as usize] + self.log[b.bits as usize];
        FieldElement { bits: self.exp[idx as usize] }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.bits == 0 {
            return Err(Error::DivisionByZero);
        }
        let qm1 = self.q() - 1;
        Ok(FieldElement { bits: self.exp[(qm1 - self.log[a.bits as usize]) as usize] })
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        if b.bits == 0 {
            return Err(Error::DivisionByZero);
        }
        if a.bits == 0 {
            return Ok(FieldElement::ZERO);
        }
        let qm1 = self.q() - 1;
        let idx = self.log[a.bits as usize] + qm1 - self.log[b.bits as usize];
        Ok(FieldElement { bits: self.exp[idx as usize] })
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.bits == 0 {
            return FieldElement::ZERO;
        }
        let qm1 = (self.q() - 1) as u64;
        let idx = (self.log[a.bits as usize] as u64 * (e % qm1)) % qm1;
        FieldElement { bits: self.exp[idx as usize] }
    }

    /// The unique square root; squaring is a bijection in characteristic 2.
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        self.frobenius(a, self.h - 1)
    }

    /// Absolute trace Tr(x) = x + x^2 + ... + x^(2^(h-1)), valued in {0,1}.
    #[inline]
    pub fn trace_abs(&self, x: FieldElement) -> u8 {
        self.trace[x.bits as usize]
    }

    /// Relative trace onto the subfield of order 2^h':
    /// L(x) = sum of x^(2^(h'i)) over i = 0 .. h/h' - 1.
    pub fn trace_rel(&self, x: FieldElement, h_prime: u32) -> Result<FieldElement> {
        if h_prime == 0 || self.h % h_prime != 0 {
            return Err(Error::NotADivisor(h_prime, self.h));
        }
        let mut acc = x;
        let mut term = x;
        for _ in 1..self.h / h_prime {
            term = self.frobenius(term, h_prime);
            acc += term;
        }
        Ok(acc)
    }

    /// x ^ (2^k), the k-th power of the Frobenius automorphism.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        let mut t = x;
        for _ in 0..k % self.h {
            t = self.mul(t, t);
        }
        t
    }

    /// The elements of the subfield of order 2^h', realized as the fixed
    /// field of x -> x^(2^h') (no alignment with low bits is assumed).
    pub fn subfield(&self, h_prime: u32) -> Result<Vec<FieldElement>> {
        if h_prime == 0 || self.h % h_prime != 0 {
            return Err(Error::NotADivisor(h_prime, self.h));
        }
        Ok(self
            .elements()
            .filter(|&x| self.frobenius(x, h_prime) == x)
            .collect())
    }

    /// Field embedding of a smaller context into this one, determined by the
    /// least root of the small modulus. `map` is the forward isomorphism.
    pub fn subfield_embedding(&self, small: &FieldCtx) -> Result<SubfieldEmbedding> {
        if self.h % small.h != 0 {
            return Err(Error::NotADivisor(small.h, self.h));
        }
        let root = self
            .elements()
            .find(|&t| {
                // evaluate the small modulus at t
                let mut acc = FieldElement::ZERO;
                for i in (0..=small.h).rev() {
                    acc = self.mul(acc, t);
                    if small.modulus >> i & 1 != 0 {
                        acc += FieldElement::ONE;
                    }
                }
                acc.is_zero()
            })
            .expect("an irreducible divisor of x^q - x has a root in every extension");
        let mut powers = Vec::with_capacity(small.h as usize);
        let mut p = FieldElement::ONE;
        for _ in 0..small.h {
            powers.push(p);
            p = self.mul(p, root);
        }
        let mut backward = HashMap::with_capacity(small.q() as usize);
        for e in small.elements() {
            let mut img = FieldElement::ZERO;
            for (i, &pw) in powers.iter().enumerate() {
                if e.bits >> i & 1 != 0 {
                    img += pw;
                }
            }
            backward.insert(img, e);
        }
        Ok(SubfieldEmbedding { powers, backward })
    }
}

/// Isomorphism from an abstract GF(2^h') onto the subfield it generates
/// inside a larger GF(2^h).
pub struct SubfieldEmbedding {
    powers: Vec<FieldElement>,
    backward: HashMap<FieldElement, FieldElement>,
}

impl SubfieldEmbedding {
    pub fn map(&self, e: FieldElement) -> FieldElement {
        let mut img = FieldElement::ZERO;
        for (i, &pw) in self.powers.iter().enumerate() {
            if e.bits() >> i & 1 != 0 {
                img += pw;
            }
        }
        img
    }

    /// Inverse map; `None` when the element is outside the embedded subfield.
    pub fn unmap(&self, e: FieldElement) -> Option<FieldElement> {
        self.backward.get(&e).copied()
    }
}
