//! Arithmetic in GF(2^w) for w in {8, 16, 32}, plus the region kernel and
//! dense matrices that every encoder and decoder in this crate reduces to.
//!
//! Symbols are byte regions; for w > 8 each field element occupies w/8
//! consecutive little-endian bytes of the region.

mod matrix;
mod region;

pub use matrix::Matrix;

use crate::error::{Error, Result};

/// A field element. Only the low `w` bits are ever set.
pub type Elem = u32;

/// Default reduction polynomial for w = 8 (x^8 + x^4 + x^3 + x^2 + 1).
pub const POLY_W8: u32 = 0x11D;
/// Default reduction polynomial for w = 16 (x^16 + x^12 + x^3 + x + 1).
pub const POLY_W16: u32 = 0x1100B;
/// Default reduction polynomial for w = 32, stored without the x^32 term
/// (x^32 + x^22 + x^2 + x + 1).
pub const POLY_W32: u32 = 0x0040_0007;

/// GF(2^w) with a fixed reduction polynomial.
///
/// Immutable after construction; cheap to share behind an `Arc` or by
/// reference across threads.
#[derive(Clone)]
pub struct Field {
    width: u32,
    /// Full polynomial including the x^w term.
    poly: u64,
    tables: Tables,
}

#[derive(Clone)]
enum Tables {
    /// 256x256 product table and inverse table.
    Full8 { mul: Box<[u8]>, inv: Box<[u8; 256]> },
    /// Wider fields multiply bitwise; region products use per-constant
    /// split tables built on the fly.
    Wide,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("width", &self.width)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.poly == other.poly
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(2^w). `poly` may be given with or without its x^w term.
    pub fn new(width: u32, poly: u64) -> Result<Self> {
        if !matches!(width, 8 | 16 | 32) {
            return Err(Error::UnsupportedWidth(width));
        }
        let top = 1u64 << width;
        let full = if poly < top { poly | top } else { poly };
        if full >> width != 1 || !is_irreducible(full, width) {
            return Err(Error::ReduciblePolynomial { width, poly });
        }
        let tables = if width == 8 {
            let mut mul = vec![0u8; 256 * 256].into_boxed_slice();
            let mut inv = Box::new([0u8; 256]);
            for a in 0..256u64 {
                for b in a..256u64 {
                    let p = clmul_mod(a, b, full, width) as u8;
                    mul[(a as usize) << 8 | b as usize] = p;
                    mul[(b as usize) << 8 | a as usize] = p;
                    if p == 1 {
                        inv[a as usize] = b as u8;
                        inv[b as usize] = a as u8;
                    }
                }
            }
            Tables::Full8 { mul, inv }
        } else {
            Tables::Wide
        };
        Ok(Field { width, poly: full, tables })
    }

    /// GF(2^w) with the default polynomial for that width.
    pub fn with_width(width: u32) -> Result<Self> {
        let poly = match width {
            8 => POLY_W8 as u64,
            16 => POLY_W16 as u64,
            32 => POLY_W32 as u64,
            other => return Err(Error::UnsupportedWidth(other)),
        };
        Field::new(width, poly)
    }

    /// GF(2^8) over 0x11D.
    pub fn gf256() -> Self {
        Field::new(8, POLY_W8 as u64).expect("0x11D is irreducible")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Reduction polynomial including the x^w term.
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Reduction polynomial with the x^w term dropped, as stored in
    /// container headers.
    pub fn poly_low(&self) -> u32 {
        (self.poly & ((1u64 << self.width) - 1)) as u32
    }

    /// Bytes per field element inside a region.
    pub fn elem_bytes(&self) -> usize {
        self.width as usize / 8
    }

    /// Number of field elements, 2^w.
    pub fn order(&self) -> u64 {
        1u64 << self.width
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Tables::Full8 { mul, .. } => mul[(a as usize & 0xff) << 8 | (b as usize & 0xff)] as Elem,
            Tables::Wide => clmul_mod(a as u64, b as u64, self.poly, self.width) as Elem,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Tables::Full8 { inv, .. } => Some(inv[a as usize & 0xff] as Elem),
            Tables::Wide => {
                // a^(2^w - 2) by square-and-multiply.
                let mut result: Elem = 1;
                let mut base = a;
                let mut e = (1u64 << self.width) - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = self.mul(result, base);
                    }
                    base = self.mul(base, base);
                    e >>= 1;
                }
                Some(result)
            }
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// `dst ^= a * src`, elementwise over the region.
    pub fn mult_xor(&self, src: &[u8], dst: &mut [u8], a: Elem) -> Result<()> {
        if src.len() != dst.len() {
            return Err(Error::LengthMismatch { expected: dst.len(), actual: src.len() });
        }
        let eb = self.elem_bytes();
        if src.len() % eb != 0 {
            return Err(Error::MisalignedRegion { len: src.len(), elem: eb });
        }
        self.mult_xor_unchecked(src, dst, a);
        Ok(())
    }

    /// Same as [`Field::mult_xor`] without the length checks. Callers
    /// guarantee equal, element-aligned lengths.
    pub(crate) fn mult_xor_unchecked(&self, src: &[u8], dst: &mut [u8], a: Elem) {
        match a {
            0 => {}
            1 => region::xor_into(src, dst),
            _ => match &self.tables {
                Tables::Full8 { mul, .. } => {
                    let row = &mul[(a as usize & 0xff) << 8..][..256];
                    region::mult_xor_w8(row.try_into().unwrap(), src, dst);
                }
                Tables::Wide => region::mult_xor_wide(self, src, dst, a),
            },
        }
    }
}

/// Carry-less multiply of two elements of degree < w, reduced by `poly`.
fn clmul_mod(a: u64, b: u64, poly: u64, width: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> width & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u128, p: u64) -> u64 {
    let dp = poly_degree(p);
    let p = p as u128;
    while a != 0 {
        let da = 127 - a.leading_zeros() as i32;
        if da < dp {
            break;
        }
        a ^= p << (da - dp);
    }
    a as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test specialised to w a power of two: p is irreducible iff
/// x^(2^w) = x (mod p) and gcd(x^(2^(w/2)) - x, p) = 1.
fn is_irreducible(poly: u64, width: u32) -> bool {
    if poly & 1 == 0 {
        return false;
    }
    let square = |v: u64| -> u64 {
        let mut acc = 0u128;
        for bit in 0..64 {
            if v >> bit & 1 == 1 {
                acc ^= 1u128 << (2 * bit);
            }
        }
        poly_mod(acc, poly)
    };
    let x = 2u64;
    let mut t = x;
    let mut half = 0u64;
    for i in 1..=width {
        t = square(t);
        if i == width / 2 {
            half = t;
        }
    }
    if t != x {
        return false;
    }
    poly_gcd(poly, half ^ x) == 1
}
