//! The integer sequences defining the staircase subalgebra.
//!
//! `generator_exponent(i)` is the x-degree of the i-th generator `U^i X^(a_i)`,
//! and `floor(i)` is the minimal admissible x-exponent for a support monomial
//! `U^i X^j`: the subalgebra consists of elements whose support satisfies
//! `j >= floor(i)`.

/// `a_i`: 1 for i = 0, otherwise the smallest integer `a` with `2^a > i`.
pub fn generator_exponent(i: u64) -> u64 {
    if i == 0 {
        return 1;
    }
    // smallest a with 2^a > i is the bit length of i
    let a = 64 - i.leading_zeros() as u64;
    debug_assert!(exceeds_pow2(a, i) && !exceeds_pow2(a.saturating_sub(1), i));
    a
}

/// `b_i`: 0 for i = 0, otherwise `generator_exponent(i)`.
pub fn floor(i: u64) -> u64 {
    if i == 0 {
        0
    } else {
        generator_exponent(i)
    }
}

/// Support predicate of the staircase subalgebra: `x >= floor(u)`.
pub fn admissible(u: u64, x: u64) -> bool {
    x >= floor(u)
}

// 2^a > i by exact comparison, without shifting past the word size.
fn exceeds_pow2(a: u64, i: u64) -> bool {
    if a >= 64 {
        return true;
    }
    (1u128 << a) > i as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: find the least `a` with `2^a > i` by linear scan.
    fn generator_exponent_oracle(i: u64) -> u64 {
        if i == 0 {
            return 1;
        }
        let mut a = 0u64;
        let mut pow = 1u128;
        while pow <= i as u128 {
            a += 1;
            pow *= 2;
        }
        a
    }

    #[test]
    fn pinned_values() {
        assert_eq!(generator_exponent(0), 1);
        assert_eq!(generator_exponent(4), 3);
        assert_eq!(generator_exponent(8), 4);
        assert_eq!(floor(0), 0);
        assert_eq!(floor(1), 1);
        assert_eq!(floor(3), 2);
        assert_eq!(floor(1024), 11);
        assert_eq!(floor(4096), 13);
    }

    #[test]
    fn matches_oracle() {
        for i in 0..5000 {
            assert_eq!(
                generator_exponent(i),
                generator_exponent_oracle(i),
                "i = {i}"
            );
        }
        for i in [u64::MAX, 1 << 51, (1 << 51) + 1, (1 << 62) - 1] {
            assert_eq!(
                generator_exponent(i),
                generator_exponent_oracle(i),
                "i = {i}"
            );
        }
    }

    #[test]
    fn floor_is_subadditive_exhaustively() {
        // b_{i+j} <= b_i + b_j for all i, j <= 2^10; this is what keeps the
        // subalgebra closed under multiplication.
        let n = 1u64 << 10;
        let table: Vec<u64> = (0..=2 * n).map(floor).collect();
        for i in 0..=n {
            for j in 0..=n {
                assert!(
                    table[(i + j) as usize] <= table[i as usize] + table[j as usize],
                    "subadditivity fails at ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn generators_are_admissible() {
        for i in 0..200 {
            assert!(admissible(i, generator_exponent(i)));
        }
        assert!(!admissible(2, 1));
        assert!(admissible(2, 2));
        assert!(admissible(0, 0));
    }
}
