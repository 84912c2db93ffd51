//! Keyed pseudo-random choice of embedding positions.
//!
//! Sender and receiver derive the same position order from a shared seed:
//! a Fisher-Yates shuffle of `0..n` driven by xorshift64*. The generator is
//! fixed bit-for-bit so stego keys are portable between implementations.

use thiserror::Error;

/// Replacement for a zero seed; xorshift state must be nonzero.
pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

const XORSHIFT_MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectionError {
    #[error("xorshift64* state must be nonzero")]
    ZeroState,
    #[error("requested {requested} positions but the image has only {available} pixels")]
    Capacity { requested: usize, available: usize },
}

/// One xorshift64* step: returns `(output, next_state)`.
pub fn xorshift64star_next(state: u64) -> Result<(u64, u64), SelectionError> {
    if state == 0 {
        return Err(SelectionError::ZeroState);
    }
    let mut s = state;
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    Ok((s.wrapping_mul(XORSHIFT_MULTIPLIER), s))
}

/// Stateful wrapper around [`xorshift64star_next`].
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// Seeds the generator; seed 0 maps to [`ZERO_SEED_REPLACEMENT`].
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 {
            ZERO_SEED_REPLACEMENT
        } else {
            seed
        };
        Self { state }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        // The xorshift recurrence is a bijection on nonzero states.
        let (value, next) = xorshift64star_next(self.state).expect("xorshift state is never zero");
        self.state = next;
        value
    }
}

/// The shared secret that orders embedding positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SelectionKey {
    pub seed: u64,
}

impl SelectionKey {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }
}

/// First `m` entries of the keyed shuffle of `0..n`.
///
/// The full permutation is computed and truncated, so a shorter request is
/// always a prefix of a longer one under the same key.
pub fn select_positions(
    key: SelectionKey,
    n: usize,
    m: usize,
) -> Result<Vec<usize>, SelectionError> {
    if m > n {
        return Err(SelectionError::Capacity {
            requested: m,
            available: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = XorShift64Star::new(key.seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order.truncate(m);
    Ok(order)
}

/// Positions `0..m` in order. Used to replay the sequential worked example.
pub fn sequential_positions(m: usize) -> Vec<usize> {
    (0..m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_output_from_state_one() {
        // Independently evaluated with arbitrary-precision integer arithmetic.
        let (value, state) = xorshift64star_next(1).unwrap();
        assert_eq!(state, 0x0200_0001);
        assert_eq!(value, 0x47E4_CE4B_896C_DD1D);
    }

    #[test]
    fn known_sequence() {
        let mut rng = XorShift64Star::new(1);
        assert_eq!(rng.next_u64(), 0x47E4_CE4B_896C_DD1D);
        assert_eq!(rng.next_u64(), 0xABCF_A6A8_E079_651D);
        assert_eq!(rng.next_u64(), 0xB9D1_0D8F_EB73_1F57);
    }

    #[test]
    fn zero_state_rejected() {
        assert_eq!(xorshift64star_next(0), Err(SelectionError::ZeroState));
    }

    #[test]
    fn deterministic_step() {
        assert_eq!(xorshift64star_next(42), xorshift64star_next(42));
    }

    #[test]
    fn million_draws_never_hit_zero() {
        let mut rng = XorShift64Star::new(0xDEAD_BEEF);
        for _ in 0..1_000_000 {
            rng.next_u64();
            assert_ne!(rng.state(), 0);
        }
    }

    #[test]
    fn shuffle_examples() {
        // Hand-simulated Fisher-Yates over the same generator.
        assert_eq!(
            select_positions(SelectionKey::new(0x1234), 8, 3).unwrap(),
            vec![5, 2, 3]
        );
        assert_eq!(
            select_positions(SelectionKey::new(0x1234), 8, 8).unwrap(),
            vec![5, 2, 3, 7, 4, 6, 1, 0]
        );
        assert_eq!(
            select_positions(SelectionKey::new(0), 5, 5).unwrap(),
            vec![4, 2, 1, 3, 0]
        );
    }

    #[test]
    fn capacity_error() {
        assert_eq!(
            select_positions(SelectionKey::new(1), 4, 5),
            Err(SelectionError::Capacity {
                requested: 5,
                available: 4
            })
        );
        assert!(select_positions(SelectionKey::new(1), 0, 0)
            .unwrap()
            .is_empty());
    }
}
