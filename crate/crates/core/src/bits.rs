//! Small helpers for `u64` element masks.

pub type Mask = u64;

pub fn full(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn bit(i: usize) -> Mask {
    1u64 << i
}

pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Indices of the set bits, ascending.
pub fn ones(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Keeps the inclusion-minimal masks, sorted by (size, index list).
pub fn minimal_masks(mut v: Vec<Mask>) -> Vec<Mask> {
    sort_masks(&mut v);
    v.dedup();
    let mut out: Vec<Mask> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|&k| subset(k, m)) {
            out.push(m);
        }
    }
    out
}

/// Orders masks by cardinality, then lexicographically by ascending index list.
pub fn sort_masks(v: &mut [Mask]) {
    v.sort_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
}
