//! Seed derivation and the deterministic variate generators.
//!
//! A run has one root seed. Each work unit draws from its own ChaCha8 stream,
//! seeded by
//!
//! ```text
//! derive_seed(root, tag, index) = mix(mix(mix(root) ^ tag) ^ index)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer, `tag` names the purpose of the
//! stream and `index` is the replication or batch number. Streams therefore
//! depend only on `(root, tag, index)` and never on execution order.
//!
//! Uniform variates take the top 53 bits of a `u64`. Standard normals are
//! produced by inverting the normal CDF (Wichura's AS 241, ~1e-16 relative
//! accuracy) on an open-interval uniform, which keeps the Gaussian stream
//! bit-identical on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub use rand_chacha::ChaCha8Rng as StreamRng;

/// Purpose label mixed into derived seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamTag(pub u64);

impl StreamTag {
    /// Packs up to eight ASCII bytes little-endian.
    pub const fn from_name(name: &[u8]) -> Self {
        let mut acc = 0u64;
        let mut i = 0;
        while i < name.len() && i < 8 {
            acc |= (name[i] as u64) << (8 * i);
            i += 1;
        }
        StreamTag(acc)
    }

    pub const SAMPLE: StreamTag = StreamTag::from_name(b"sample");
    pub const RADEMACHER: StreamTag = StreamTag::from_name(b"rademach");
    pub const GAUSSIAN: StreamTag = StreamTag::from_name(b"gaussian");
    pub const EXPECTATION: StreamTag = StreamTag::from_name(b"expect");
    pub const PROBE_POINTS: StreamTag = StreamTag::from_name(b"fdprobe");
    pub const TAIL: StreamTag = StreamTag::from_name(b"tail");
    pub const SIGMA: StreamTag = StreamTag::from_name(b"sigma");
    pub const DELTA_SEARCH: StreamTag = StreamTag::from_name(b"deltasup");
    pub const CLASS: StreamTag = StreamTag::from_name(b"class");
    pub const REPLICATION: StreamTag = StreamTag::from_name(b"replica");
}

const fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub const fn derive_seed(root: u64, tag: StreamTag, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(root) ^ tag.0) ^ index)
}

pub fn stream(root: u64, tag: StreamTag, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, tag, index))
}

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// Uniform on `[0, 1)`.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * TWO_POW_M53
}

/// Uniform on the open interval `(0, 1)`.
#[inline]
pub fn open_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * TWO_POW_M53
}

#[inline]
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    inverse_normal_cdf(open_uniform(rng))
}

/// Fills `out` with independent ±1 signs, 64 per `u64` drawn.
pub fn fill_signs<R: RngCore + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for chunk in out.chunks_mut(64) {
        let bits = rng.next_u64();
        for (i, v) in chunk.iter_mut().enumerate() {
            *v = if (bits >> i) & 1 == 1 { 1.0 } else { -1.0 };
        }
    }
}

/// Fills `out` with independent {0, 1} selectors, 64 per `u64` drawn.
pub fn fill_bits<R: RngCore + ?Sized>(rng: &mut R, out: &mut [bool]) {
    for chunk in out.chunks_mut(64) {
        let bits = rng.next_u64();
        for (i, v) in chunk.iter_mut().enumerate() {
            *v = (bits >> i) & 1 == 1;
        }
    }
}

pub fn fill_normals<R: RngCore + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out {
        *v = standard_normal(rng);
    }
}

/// Quantile function of the standard normal distribution (AS 241, PPND16).
///
/// Returns `±∞` at `p = 1` / `p = 0` and NaN outside `[0, 1]`.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if libm::fabs(q) <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r + 6.726_577_092_700_87e4) * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((5.226_495_278_852_545e3 * r + 2.872_908_573_572_194_3e4) * r + 3.930_789_580_009_271e4) * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return q * num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = libm::sqrt(-libm::log(tail));
    let value = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5;
        let den =
            ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r + 1.519_866_656_361_645_7e-2) * r
                + 1.481_039_764_274_800_8e-1)
                * r
                + 6.897_673_349_851e-1)
                * r
                + 1.676_384_830_183_803_8)
                * r
                + 2.053_191_626_637_759)
                * r
                + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den =
            ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r + 1.846_318_317_510_054_8e-5) * r
                + 7.868_691_311_456_133e-4)
                * r
                + 1.487_536_129_085_061_5e-2)
                * r
                + 1.369_298_809_227_358e-1)
                * r
                + 5.998_322_065_558_88e-1)
                * r
                + 1.0;
        num / den
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}
