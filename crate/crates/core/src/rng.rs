//! Counter-based random numbers.
//!
//! Every draw is a pure function of `(seed, phase, generation, individual, lane)`,
//! computed with Philox4x32-10. Nothing is carried between draws, so the
//! order in which workers consume streams cannot change any value.

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// Philox4x32 with 10 rounds.
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, c[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, c[2]);
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
    }
    c
}

/// Independent sub-streams of one run. Each phase of the algorithm draws
/// from its own tag so adding draws to one phase never shifts another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum Phase {
    Init = 0,
    DeIndices = 1,
    DeCrossover = 2,
    GwoDiscrete = 3,
    GwoReference = 4,
    Test = 0xFFFF,
}

/// A keyed stream for one (phase, generation, individual) triple.
#[derive(Clone, Copy, Debug)]
pub struct Stream {
    key: [u32; 2],
    phase: u32,
    generation: u32,
    individual: u32,
}

impl Stream {
    pub fn new(seed: u64, phase: Phase, generation: usize, individual: usize) -> Self {
        Self {
            key: [seed as u32, (seed >> 32) as u32],
            phase: phase as u32,
            generation: generation as u32,
            individual: individual as u32,
        }
    }

    #[inline]
    pub fn raw(&self, lane: u32) -> [u32; 4] {
        philox4x32_10(
            [lane, self.individual, self.generation, self.phase],
            self.key,
        )
    }

    #[inline]
    pub fn u64_at(&self, lane: u32) -> u64 {
        let r = self.raw(lane);
        (u64::from(r[0]) << 32) | u64::from(r[1])
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, lane: u32) -> f64 {
        (self.u64_at(lane) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` (multiply-high reduction).
    #[inline]
    pub fn index(&self, lane: u32, n: usize) -> usize {
        ((u128::from(self.u64_at(lane)) * n as u128) >> 64) as usize
    }

    /// Sequential view over consecutive lanes starting at `start`.
    pub fn cursor(self, start: u32) -> Cursor {
        Cursor {
            stream: self,
            lane: start,
        }
    }
}

/// Walks a [`Stream`] lane by lane for variable-length draw sequences
/// (rejection sampling).
#[derive(Clone, Debug)]
pub struct Cursor {
    stream: Stream,
    lane: u32,
}

impl Cursor {
    pub fn next_uniform(&mut self) -> f64 {
        let u = self.stream.uniform(self.lane);
        self.lane = self.lane.wrapping_add(1);
        u
    }

    pub fn next_index(&mut self, n: usize) -> usize {
        let i = self.stream.index(self.lane, n);
        self.lane = self.lane.wrapping_add(1);
        i
    }

    pub fn lane(&self) -> u32 {
        self.lane
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors published with the Random123 library.
    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x32_10([0; 4], [0; 2]),
            [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]
        );
        assert_eq!(
            philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]
        );
        assert_eq!(
            philox4x32_10(
                [0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344],
                [0xa4093822, 0x299f31d0]
            ),
            [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]
        );
    }

    #[test]
    fn streams_are_pure() {
        let a = Stream::new(42, Phase::Init, 3, 7);
        let b = Stream::new(42, Phase::Init, 3, 7);
        for lane in 0..100 {
            assert_eq!(a.uniform(lane), b.uniform(lane));
        }
        let other = Stream::new(42, Phase::DeIndices, 3, 7);
        assert_ne!(a.u64_at(0), other.u64_at(0));
    }

    #[test]
    fn uniform_moments() {
        let s = Stream::new(9, Phase::Test, 0, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|l| s.uniform(l)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        let mut counts = [0usize; 5];
        for l in 0..n {
            counts[s.index(l, 5)] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.2).abs() < 0.01);
        }
    }
}
