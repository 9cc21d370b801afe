use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded source of random strings and positions for example generation.
///
/// String lengths are geometric (continue with probability `p_continue`), capped
/// at `max_len`, so the support is finite.
#[derive(Clone, Debug)]
pub struct SamplingOracle {
    seed: u64,
    rng: ChaCha8Rng,
    alphabet: Vec<char>,
    pub p_continue: f64,
    pub max_len: usize,
}

pub const DEFAULT_MAX_LEN: usize = 12;

/// Letters and digits always available to the sampler.
pub fn base_alphabet() -> impl Iterator<Item = char> {
    ('a'..='z').chain('0'..='9')
}

impl SamplingOracle {
    pub fn new(seed: u64, alphabet: impl IntoIterator<Item = char>) -> Self {
        let mut alphabet: Vec<char> = alphabet.into_iter().collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        assert!(!alphabet.is_empty(), "empty sampling alphabet");
        SamplingOracle {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            alphabet,
            p_continue: 0.8,
            max_len: DEFAULT_MAX_LEN,
        }
    }

    /// Alphabet of the corpus plus `a-z0-9`.
    pub fn for_corpus(seed: u64, corpus: impl IntoIterator<Item = char>) -> Self {
        SamplingOracle::new(seed, corpus.into_iter().chain(base_alphabet()))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// An independent oracle with a seed derived from this one's seed and `salt`.
    pub fn derive(&self, salt: u64) -> SamplingOracle {
        let mut o = SamplingOracle::new(mix(self.seed, salt), self.alphabet.iter().copied());
        o.p_continue = self.p_continue;
        o.max_len = self.max_len;
        o
    }

    pub fn string(&mut self) -> Vec<char> {
        let mut n = 0;
        while n < self.max_len && self.rng.gen_bool(self.p_continue) {
            n += 1;
        }
        (0..n).map(|_| self.alphabet[self.rng.gen_range(0..self.alphabet.len())]).collect()
    }

    /// Positions `i1 <= i2` within a string of length `len`.
    pub fn positions(&mut self, len: usize) -> (i64, i64) {
        let i1 = self.rng.gen_range(0..=len);
        let i2 = self.rng.gen_range(i1..=len);
        (i1 as i64, i2 as i64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

/// SplitMix64-style mixing of a seed with a salt.
pub fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit FNV-1a hash, used to name slots independent of iteration order.
pub fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = SamplingOracle::for_corpus(7, "XYZ".chars());
        let mut b = SamplingOracle::for_corpus(7, "XYZ".chars());
        for _ in 0..50 {
            assert_eq!(a.string(), b.string());
        }
        let mut c = a.derive(1);
        let mut d = b.derive(1);
        assert_eq!(c.string(), d.string());
        assert_ne!(mix(7, 1), mix(7, 2));
    }

    #[test]
    fn bounded_support() {
        let mut o = SamplingOracle::new(1, "ab".chars());
        for _ in 0..500 {
            let s = o.string();
            assert!(s.len() <= DEFAULT_MAX_LEN);
            assert!(s.iter().all(|c| "ab".contains(*c)));
            let (i1, i2) = o.positions(s.len());
            assert!(0 <= i1 && i1 <= i2 && i2 <= s.len() as i64);
        }
    }
}
