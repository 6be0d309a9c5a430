//! Standard constructions of the local codes.

use super::BinaryLinearCode;
use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// Largest Hamming redundancy accepted; beyond this the dense generator matrix stops
/// being practical.
pub const MAX_HAMMING_R: u32 = 12;

/// Hamming code of length `2^r − 1`: column `j` of the parity-check matrix is the
/// binary expansion of `j + 1`.
pub fn hamming(r: u32) -> Result<BinaryLinearCode> {
    if !(3..=MAX_HAMMING_R).contains(&r) {
        return Err(Error::invalid(format!(
            "hamming redundancy r must be in 3..={MAX_HAMMING_R}, got {r}"
        )));
    }
    let n = (1usize << r) - 1;
    let rows = (0..r as usize)
        .map(|b| BitVec::from_positions(n, (0..n).filter(|j| ((j + 1) >> b) & 1 == 1)))
        .collect();
    BinaryLinearCode::from_parity_check(format!("hamming:{r}"), n, BitMatrix::from_rows(n, rows), Some(3))
}

/// `g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1`.
const GOLAY_GENERATOR: u64 = 0xC75;

pub fn golay23() -> Result<BinaryLinearCode> {
    BinaryLinearCode::from_generator("golay23", 23, cyclic_generator(23, GOLAY_GENERATOR), Some(7))
}

/// Narrow-sense binary BCH code of length 31 and designed distance 5 over GF(2⁵).
pub fn bch_31_21() -> Result<BinaryLinearCode> {
    let field = Gf2m::new(5, 0b100101);
    let g = field.bch_generator(5);
    debug_assert_eq!(poly_degree(g), 10);
    BinaryLinearCode::from_generator("bch31", 31, cyclic_generator(31, g), Some(5))
}

pub fn spc(n: usize) -> Result<BinaryLinearCode> {
    if n < 2 {
        return Err(Error::invalid("single parity-check code needs n >= 2"));
    }
    BinaryLinearCode::from_parity_check(
        format!("spc:{n}"),
        n,
        BitMatrix::from_rows(n, vec![BitVec::ones(n)]),
        Some(2),
    )
}

pub fn repetition(n: usize) -> Result<BinaryLinearCode> {
    if n < 2 {
        return Err(Error::invalid("repetition code needs n >= 2"));
    }
    BinaryLinearCode::from_generator(
        format!("repetition:{n}"),
        n,
        BitMatrix::from_rows(n, vec![BitVec::ones(n)]),
        Some(n),
    )
}

/// Rows `x^i g(x)`, `i = 0..n − deg g`, as length-`n` vectors (coefficient of `x^j`
/// at bit `j`).
fn cyclic_generator(n: usize, g: u64) -> BitMatrix {
    let deg = poly_degree(g);
    let k = n - deg;
    let rows = (0..k)
        .map(|shift| BitVec::from_positions(n, (0..=deg).filter(|&j| (g >> j) & 1 == 1).map(|j| j + shift)))
        .collect();
    BitMatrix::from_rows(n, rows)
}

fn poly_degree(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

/// Carry-less product of two GF(2) polynomials.
fn poly_mul(a: u64, b: u64) -> u64 {
    let mut acc = 0;
    for i in 0..64 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}

/// GF(2^m) by log/antilog tables over a primitive polynomial.
struct Gf2m {
    m: u32,
    order: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2m {
    fn new(m: u32, primitive: u32) -> Self {
        let order = (1usize << m) - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> m != 0 {
                x ^= primitive;
            }
        }
        assert_eq!(x, 1, "polynomial is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Gf2m { m, order, exp, log }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    fn cyclotomic_coset(&self, j: usize) -> Vec<usize> {
        let mut coset = vec![j % self.order];
        let mut c = (2 * j) % self.order;
        while c != coset[0] {
            coset.push(c);
            c = (2 * c) % self.order;
        }
        coset
    }

    /// Minimal polynomial of α^j as a GF(2) bitmask.
    fn minimal_polynomial(&self, j: usize) -> u64 {
        // Coefficients in GF(2^m), lowest degree first.
        let mut poly: Vec<u32> = vec![1];
        for c in self.cyclotomic_coset(j) {
            let root = self.exp[c];
            let mut next = vec![0u32; poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i + 1] ^= a;
                next[i] ^= self.mul(a, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            assert!(c <= 1, "minimal polynomial over GF(2^{}) left GF(2)", self.m);
            acc | ((c as u64) << i)
        })
    }

    /// LCM of the minimal polynomials of α, α², …, α^(designed − 1).
    fn bch_generator(&self, designed: usize) -> u64 {
        let mut seen = vec![false; self.order];
        let mut g = 1u64;
        for j in 1..designed {
            if seen[j % self.order] {
                continue;
            }
            for c in self.cyclotomic_coset(j) {
                seen[c] = true;
            }
            g = poly_mul(g, self.minimal_polynomial(j));
        }
        g
    }
}
