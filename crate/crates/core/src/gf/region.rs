use super::{Elem, Field};

/// `dst ^= src`, a word at a time.
pub(super) fn xor_into(src: &[u8], dst: &mut [u8]) {
    let mut d = dst.chunks_exact_mut(8);
    let mut s = src.chunks_exact(8);
    for (dw, sw) in (&mut d).zip(&mut s) {
        let x = u64::from_ne_bytes(dw.try_into().unwrap()) ^ u64::from_ne_bytes(sw.try_into().unwrap());
        dw.copy_from_slice(&x.to_ne_bytes());
    }
    for (db, sb) in d.into_remainder().iter_mut().zip(s.remainder()) {
        *db ^= *sb;
    }
}

/// `dst ^= a * src` for w = 8, given the product-table row of `a`.
pub(super) fn mult_xor_w8(row: &[u8; 256], src: &[u8], dst: &mut [u8]) {
    let mut d = dst.chunks_exact_mut(8);
    let mut s = src.chunks_exact(8);
    for (dw, sw) in (&mut d).zip(&mut s) {
        for k in 0..8 {
            dw[k] ^= row[sw[k] as usize];
        }
    }
    for (db, sb) in d.into_remainder().iter_mut().zip(s.remainder()) {
        *db ^= row[*sb as usize];
    }
}

/// `dst ^= a * src` for w = 16 or 32 using one 256-entry table per input
/// byte lane: a * x = XOR over lanes k of a * (byte_k(x) << 8k).
pub(super) fn mult_xor_wide(field: &Field, src: &[u8], dst: &mut [u8], a: Elem) {
    let lanes = field.elem_bytes();
    let mut tables = vec![[0u32; 256]; lanes];
    for (k, table) in tables.iter_mut().enumerate() {
        for bit in 0..8 {
            table[1 << bit] = field.mul(a, 1 << (8 * k + bit));
        }
        for b in 1..256usize {
            let low = b & b.wrapping_neg();
            if low != b {
                table[b] = table[b ^ low] ^ table[low];
            }
        }
    }
    for (s, d) in src.chunks_exact(lanes).zip(dst.chunks_exact_mut(lanes)) {
        let mut acc = 0u32;
        for k in 0..lanes {
            acc ^= tables[k][s[k] as usize];
        }
        for k in 0..lanes {
            d[k] ^= (acc >> (8 * k)) as u8;
        }
    }
}
