//! Seeded reproduction of the Gaussian shift study.
//!
//! Observation `k` is `x_k ~ N(alt_mean, 1)` for the first `n_false`
//! hypotheses and `x_k ~ N(0, 1)` for the rest. Each hypothesis is tested
//! with the likelihood ratio of the alternative to the standard normal null,
//!
//! ```text
//! E(x) = φ(x − μ) / φ(x) = exp(μx − μ²/2)
//! ```
//!
//! which for `μ = −3` is `exp(−3x − 9/2)`, and with the left-tail p-value
//! `Φ(x)`.
//!
//! The random stream is pinned so other implementations can reproduce it
//! bit for bit: uniforms come from splitmix64 mapped to the open interval
//! `(0, 1)` as `((z >> 11) + 0.5) · 2⁻⁵³`, and normals from Wichura's AS241
//! (`PPND16`) inverse CDF applied to one uniform each.

use crate::error::{Error, Result};
use crate::merge::EValueVec;

/// Seed used by the default study configuration.
pub const DEFAULT_SEED: u64 = 1;

/// The splitmix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw strictly inside `(0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    pub fn next_normal(&mut self) -> f64 {
        inverse_normal_cdf(self.next_uniform())
    }
}

/// Standard normal quantile, Wichura's algorithm AS241 (`PPND16`).
///
/// Relative accuracy is about 1e-16 over `(0, 1)`. Returns `∓∞` at 0 and 1
/// and NaN outside `[0, 1]`.
#[allow(clippy::excessive_precision)]
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        133.141_667_891_784_377_45,
        1_971.590_950_306_551_442_7,
        13_731.693_765_509_461_125,
        45_921.953_931_549_871_457,
        67_265.770_927_008_700_853,
        33_430.575_583_588_128_105,
        2_509.080_928_730_122_672_7,
    ];
    const B: [f64; 8] = [
        1.0,
        42.313_330_701_600_911_252,
        687.187_007_492_057_908_3,
        5_394.196_021_424_751_107_7,
        21_213.794_301_586_595_867,
        39_307.895_800_092_710_61,
        28_729.085_735_721_942_674,
        5_226.495_278_852_854_561,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        0.241_780_725_177_450_611_77,
        0.022_723_844_989_269_184_583_3,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        0.689_767_334_985_100_004_55,
        0.148_103_976_427_480_074_59,
        0.015_198_666_563_616_457_196_6,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        0.296_560_571_828_504_891_23,
        0.026_532_189_526_576_123_093,
        0.001_242_660_947_388_078_438_6,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        0.599_832_206_555_887_937_69,
        0.136_929_880_922_735_805_31,
        0.014_875_361_290_850_614_852_5,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    fn ratio(num: &[f64; 8], den: &[f64; 8], r: f64) -> f64 {
        let horner = |c: &[f64; 8]| c.iter().rev().fold(0.0, |acc, &x| acc * r + x);
        horner(num) / horner(den)
    }

    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * ratio(&A, &B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    if tail == 0.0 {
        return if q < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    let r = (-tail.ln()).sqrt();
    let value = if r <= 5.0 {
        ratio(&C, &D, r - 1.6)
    } else {
        ratio(&E, &F, r - 5.0)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

/// Standard normal CDF `Φ(x) = erfc(−x/√2) / 2`.
///
/// `erfc` is the fdlibm implementation (under 1 ulp), which keeps full
/// relative accuracy in the left tail.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Likelihood ratio of `N(alt_mean, 1)` against `N(0, 1)` at `x`.
pub fn e_from_obs(x: f64, alt_mean: f64) -> f64 {
    (alt_mean * x - 0.5 * alt_mean * alt_mean).exp()
}

/// Left-tail p-value `Φ(x)`.
pub fn p_from_obs(x: f64) -> f64 {
    normal_cdf(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    k: usize,
    n_false: usize,
    alt_mean: f64,
    seed: u64,
}

impl SimConfig {
    pub fn new(k: usize, n_false: usize, alt_mean: f64, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        if n_false > k {
            return Err(Error::Config(format!(
                "number of false nulls ({n_false}) exceeds K ({k})"
            )));
        }
        if !alt_mean.is_finite() {
            return Err(Error::Config(format!(
                "alternative mean must be finite, got {alt_mean}"
            )));
        }
        Ok(SimConfig {
            k,
            n_false,
            alt_mean,
            seed,
        })
    }

    /// `K` true null hypotheses.
    pub fn global_null(k: usize, seed: u64) -> Result<Self> {
        SimConfig::new(k, 0, -3.0, seed)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_false(&self) -> usize {
        self.n_false
    }

    pub fn alt_mean(&self) -> f64 {
        self.alt_mean
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for SimConfig {
    /// 200 hypotheses, the first 100 false, alternative `N(−3, 1)`.
    fn default() -> Self {
        SimConfig {
            k: 200,
            n_false: 100,
            alt_mean: -3.0,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub x: Vec<f64>,
    pub e: EValueVec,
    pub p: Vec<f64>,
    /// `true` where the null hypothesis holds.
    pub is_null: Vec<bool>,
}

impl SimOutput {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

pub fn gen_study(cfg: &SimConfig) -> SimOutput {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut x = Vec::with_capacity(cfg.k);
    let mut is_null = Vec::with_capacity(cfg.k);
    for k in 0..cfg.k {
        let z = rng.next_normal();
        let alternative = k < cfg.n_false;
        x.push(if alternative { cfg.alt_mean + z } else { z });
        is_null.push(!alternative);
    }
    let e = x.iter().map(|&x| e_from_obs(x, cfg.alt_mean)).collect();
    let p = x.iter().map(|&x| p_from_obs(x)).collect();
    SimOutput {
        e: EValueVec::new(e).expect("likelihood ratios are nonnegative"),
        x,
        p,
        is_null,
    }
}
