//! Basis blades of R_n in graded-lexicographic order.
//!
//! A blade e_A is stored as a bitmask over {e_1, ..., e_n} (bit i-1 for e_i).
//! Coordinates of a multivector are laid out in graded-lex order of the
//! masks: e_∅, e_1, ..., e_n, e_12, e_13, ..., e_{n-1,n}, ..., e_{12...n}.

use std::sync::OnceLock;

pub const MAX_N: usize = 5;
pub const MAX_DIM: usize = 1 << MAX_N;

pub struct BladeTable {
    /// graded-lex index -> mask
    pub masks: Vec<u32>,
    /// mask -> graded-lex index
    pub index: Vec<usize>,
}

fn build(n: usize) -> BladeTable {
    let dim = 1usize << n;
    let mut masks: Vec<u32> = (0..dim as u32).collect();
    // graded first, then lexicographic on the sorted index lists
    masks.sort_by_key(|&m| (m.count_ones(), indices(m)));
    let mut index = vec![0usize; dim];
    for (i, &m) in masks.iter().enumerate() {
        index[m as usize] = i;
    }
    BladeTable { masks, index }
}

fn indices(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

pub fn table(n: usize) -> &'static BladeTable {
    static TABLES: OnceLock<Vec<BladeTable>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAX_N).map(build).collect());
    &tables[n]
}

/// Sign of e_a e_b = ±e_{a xor b} under e_i e_j = -e_j e_i and e_i² = -1.
pub fn product_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Grade of a blade mask.
pub fn grade(mask: u32) -> u32 {
    mask.count_ones()
}

/// Human-readable blade name, e.g. `e13`; the scalar blade is `1`.
pub fn blade_name(mask: u32) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("e");
    for b in indices(mask) {
        s.push_str(&(b + 1).to_string());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order_n3() {
        let t = table(3);
        let names: Vec<String> = t.masks.iter().map(|&m| blade_name(m)).collect();
        assert_eq!(names, ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"]);
    }

    #[test]
    fn index_inverts_masks() {
        for n in 1..=MAX_N {
            let t = table(n);
            for (i, &m) in t.masks.iter().enumerate() {
                assert_eq!(t.index[m as usize], i);
            }
        }
    }

    #[test]
    fn generator_signs() {
        // e1 e2 = e12, e2 e1 = -e12, e1 e1 = -1
        assert_eq!(product_sign(0b01, 0b10), 1.0);
        assert_eq!(product_sign(0b10, 0b01), -1.0);
        assert_eq!(product_sign(0b01, 0b01), -1.0);
        // e12 e12 = e1 e2 e1 e2 = -e1 e1 e2 e2 = -1
        assert_eq!(product_sign(0b11, 0b11), -1.0);
    }
}
