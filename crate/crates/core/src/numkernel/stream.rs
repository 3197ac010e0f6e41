use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Counter-keyed random stream.
///
/// The ChaCha key comes from `seed` and the ChaCha stream (nonce) from
/// `stream_id`, so any `(seed, stream_id)` pair can be materialized
/// independently of every other one. Monte Carlo trials use the trial
/// index as `stream_id`; `fork` derives independent lanes inside a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RandomStream { seed, stream_id }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Same stream id under a key derived from `(seed, lane)`.
    pub fn fork(&self, lane: u64) -> RandomStream {
        let key = splitmix64(self.seed ^ splitmix64(lane.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RandomStream {
            seed: key,
            stream_id: self.stream_id,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
