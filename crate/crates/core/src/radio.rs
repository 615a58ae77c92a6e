//! Physical-layer model of a multi-carrier secondary user.
//!
//! Every subcarrier carries a discrete power level and a modulation
//! scheme. Powers come from a 94-entry codebook spanning
//! [`MIN_POWER_MW`, `MAX_POWER_MW`]; modulations from an 11-entry codebook
//! (BPSK followed by 2- to 1024-point QAM). Bit error rates use the
//! closed-form PSK/QAM expressions on top of a rational approximation of
//! the Gaussian tail function.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POWER_MW: f64 = 0.1;
pub const MAX_POWER_MW: f64 = 2.4808;
pub const POWER_CODE_MAX: u8 = 93;
pub const POWER_LEVELS: usize = POWER_CODE_MAX as usize + 1;

pub const MODULATION_CODE_MIN: u8 = 1;
pub const MODULATION_CODE_MAX: u8 = 11;
pub const MODULATION_LEVELS: usize = (MODULATION_CODE_MAX - MODULATION_CODE_MIN) as usize + 1;
/// Largest constellation size reachable from the modulation codebook.
pub const MAX_ORDER: u32 = 1024;

/// Lower clamp applied to every bit error rate so that logarithms stay finite.
pub const BER_FLOOR: f64 = 1e-300;

/// Largest per-channel attenuation in dB.
pub const MAX_ATTENUATION_DB: f64 = 1.0;

/// Index into the 94-level transmit power codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct PowerCode(u8);

impl PowerCode {
    pub const MIN: PowerCode = PowerCode(0);
    pub const MAX: PowerCode = PowerCode(POWER_CODE_MAX);

    pub fn new(code: i64) -> Result<Self> {
        if (0..=POWER_CODE_MAX as i64).contains(&code) {
            Ok(PowerCode(code as u8))
        } else {
            Err(Error::domain(format!(
                "power code {code} outside [0, {POWER_CODE_MAX}]"
            )))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Transmit power in mW.
    pub fn milliwatts(self) -> f64 {
        MIN_POWER_MW + (MAX_POWER_MW - MIN_POWER_MW) * f64::from(self.0) / f64::from(POWER_CODE_MAX)
    }

    pub fn all() -> impl Iterator<Item = PowerCode> {
        (0..=POWER_CODE_MAX).map(PowerCode)
    }
}

impl TryFrom<i64> for PowerCode {
    type Error = Error;
    fn try_from(code: i64) -> Result<Self> {
        PowerCode::new(code)
    }
}

impl From<PowerCode> for u8 {
    fn from(code: PowerCode) -> u8 {
        code.0
    }
}

/// Index into the modulation codebook: 1 is BPSK, `c >= 2` is `2^(c-1)`-QAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct ModulationCode(u8);

impl ModulationCode {
    pub const MIN: ModulationCode = ModulationCode(MODULATION_CODE_MIN);
    pub const MAX: ModulationCode = ModulationCode(MODULATION_CODE_MAX);

    pub fn new(code: i64) -> Result<Self> {
        if (MODULATION_CODE_MIN as i64..=MODULATION_CODE_MAX as i64).contains(&code) {
            Ok(ModulationCode(code as u8))
        } else {
            Err(Error::domain(format!(
                "modulation code {code} outside [{MODULATION_CODE_MIN}, {MODULATION_CODE_MAX}]"
            )))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn scheme(self) -> ModulationScheme {
        if self.0 == 1 {
            ModulationScheme {
                family: Family::Bpsk,
                order: 2,
            }
        } else {
            ModulationScheme {
                family: Family::Mqam,
                order: 1 << (self.0 - 1),
            }
        }
    }

    pub fn bits_per_symbol(self) -> u32 {
        self.scheme().bits_per_symbol()
    }

    pub fn all() -> impl Iterator<Item = ModulationCode> {
        (MODULATION_CODE_MIN..=MODULATION_CODE_MAX).map(ModulationCode)
    }
}

impl TryFrom<i64> for ModulationCode {
    type Error = Error;
    fn try_from(code: i64) -> Result<Self> {
        ModulationCode::new(code)
    }
}

impl From<ModulationCode> for u8 {
    fn from(code: ModulationCode) -> u8 {
        code.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bpsk,
    Mpsk,
    Mqam,
}

/// A modulation family together with its constellation size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModulationScheme {
    family: Family,
    order: u32,
}

impl ModulationScheme {
    pub fn new(family: Family, order: u32) -> Result<Self> {
        if !order.is_power_of_two() || !(2..=MAX_ORDER).contains(&order) {
            return Err(Error::domain(format!(
                "constellation size {order} is not a power of two in [2, {MAX_ORDER}]"
            )));
        }
        if family == Family::Bpsk && order != 2 {
            return Err(Error::domain(format!("BPSK has 2 points, got {order}")));
        }
        Ok(ModulationScheme { family, order })
    }

    pub fn bpsk() -> Self {
        ModulationScheme {
            family: Family::Bpsk,
            order: 2,
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn bits_per_symbol(self) -> u32 {
        self.order.trailing_zeros()
    }

    /// The scheme whose error formula applies. Two-point constellations of
    /// any family are antipodal and use the BPSK expression.
    pub fn error_model(self) -> ModulationScheme {
        if self.order == 2 {
            ModulationScheme::bpsk()
        } else {
            self
        }
    }
}

impl fmt::Display for ModulationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Bpsk => f.write_str("BPSK"),
            Family::Mpsk => write!(f, "{}PSK", self.order),
            Family::Mqam => write!(f, "{}QAM", self.order),
        }
    }
}

pub fn decode_power(code: PowerCode) -> f64 {
    code.milliwatts()
}

pub fn decode_modulation(code: ModulationCode) -> ModulationScheme {
    code.scheme()
}

/// Rational approximation of the Gaussian tail probability Q(x) for x >= 0.
pub fn q_approx(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("Q(x) requires x >= 0, got {x}")));
    }
    Ok(q(x))
}

#[inline]
fn q(x: f64) -> f64 {
    (-x * x / 2.0).exp() / (1.64 * x + (0.7 * x * x + 4.0).sqrt())
}

/// Bit error probability of `scheme` at linear signal-to-noise ratio `snr`.
///
/// The result is clamped to `[BER_FLOOR, 1)`.
pub fn ber(scheme: ModulationScheme, snr: f64) -> Result<f64> {
    if snr.is_nan() || snr <= 0.0 {
        return Err(Error::domain(format!("snr must be positive, got {snr}")));
    }
    if scheme.family != Family::Bpsk && scheme.order < 4 {
        return Err(Error::domain(format!(
            "{scheme} formula needs at least 4 points"
        )));
    }
    Ok(ber_unchecked(scheme, snr))
}

#[inline]
pub(crate) fn ber_unchecked(scheme: ModulationScheme, snr: f64) -> f64 {
    let raw = match scheme.family {
        Family::Bpsk => q(snr.sqrt()),
        Family::Mpsk => {
            let k = f64::from(scheme.bits_per_symbol());
            let m = f64::from(scheme.order);
            2.0 / k * q((2.0 * k * snr).sqrt() * (PI / m).sin())
        }
        Family::Mqam => {
            let k = f64::from(scheme.bits_per_symbol());
            let m = f64::from(scheme.order);
            4.0 / k * (1.0 - 1.0 / m.sqrt()) * q((3.0 * k / (m - 1.0) * snr).sqrt())
        }
    };
    raw.clamp(BER_FLOOR, 1.0 - f64::EPSILON)
}

/// Linear signal-to-noise ratio of a subcarrier.
pub fn snr(power_mw: f64, noise_lin: f64) -> Result<f64> {
    if power_mw.is_nan() || power_mw <= 0.0 {
        return Err(Error::domain(format!(
            "power must be positive, got {power_mw} mW"
        )));
    }
    if noise_lin.is_nan() || noise_lin < 1.0 {
        return Err(Error::domain(format!(
            "linear noise factor must be >= 1, got {noise_lin}"
        )));
    }
    Ok(power_mw / noise_lin)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Per-subcarrier attenuation for one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEnvironment {
    atten_db: Vec<f64>,
    noise_lin: Vec<f64>,
}

impl ChannelEnvironment {
    pub fn from_attenuation(atten_db: Vec<f64>) -> Result<Self> {
        if atten_db.is_empty() {
            return Err(Error::domain("environment needs at least one subcarrier"));
        }
        if let Some((i, a)) = atten_db
            .iter()
            .enumerate()
            .find(|(_, a)| !(0.0..=MAX_ATTENUATION_DB).contains(*a))
        {
            return Err(Error::domain(format!(
                "attenuation {a} dB on subcarrier {i} outside [0, {MAX_ATTENUATION_DB}]"
            )));
        }
        let noise_lin = atten_db.iter().map(|&a| db_to_linear(a)).collect();
        Ok(ChannelEnvironment {
            atten_db,
            noise_lin,
        })
    }

    pub fn n(&self) -> usize {
        self.atten_db.len()
    }

    pub fn attenuation_db(&self) -> &[f64] {
        &self.atten_db
    }

    pub fn noise_lin(&self) -> &[f64] {
        &self.noise_lin
    }

    /// Signal-to-noise ratio of subcarrier `i` at the given power level.
    #[inline]
    pub fn snr_at(&self, i: usize, power: PowerCode) -> f64 {
        power.milliwatts() / self.noise_lin[i]
    }
}

/// Draws `n` i.i.d. attenuations from U[0, 1] dB.
pub fn sample_environment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ChannelEnvironment> {
    if n == 0 {
        return Err(Error::domain("environment needs at least one subcarrier"));
    }
    let atten = (0..n)
        .map(|_| rng.random::<f64>() * MAX_ATTENUATION_DB)
        .collect();
    ChannelEnvironment::from_attenuation(atten)
}

/// Power and modulation assigned to one subcarrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubcarrierSetting {
    pub power: PowerCode,
    pub modulation: ModulationCode,
}

impl SubcarrierSetting {
    pub fn new(power: PowerCode, modulation: ModulationCode) -> Self {
        SubcarrierSetting { power, modulation }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        SubcarrierSetting {
            power: PowerCode(rng.random_range(0..=POWER_CODE_MAX)),
            modulation: ModulationCode(rng.random_range(MODULATION_CODE_MIN..=MODULATION_CODE_MAX)),
        }
    }

    /// Every setting, power ascending then modulation ascending.
    pub fn all() -> impl Iterator<Item = SubcarrierSetting> {
        PowerCode::all().flat_map(|p| ModulationCode::all().map(move |m| SubcarrierSetting::new(p, m)))
    }
}

/// One candidate solution: a setting per subcarrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransmissionPlan {
    settings: Vec<SubcarrierSetting>,
}

impl TransmissionPlan {
    pub fn new(settings: Vec<SubcarrierSetting>) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::domain("plan needs at least one subcarrier"));
        }
        Ok(TransmissionPlan { settings })
    }

    /// Builds a plan from raw `(power, modulation)` code pairs.
    pub fn from_codes(codes: &[(i64, i64)]) -> Result<Self> {
        let settings = codes
            .iter()
            .map(|&(p, m)| Ok(SubcarrierSetting::new(PowerCode::new(p)?, ModulationCode::new(m)?)))
            .collect::<Result<Vec<_>>>()?;
        TransmissionPlan::new(settings)
    }

    pub fn uniform(n: usize, setting: SubcarrierSetting) -> Result<Self> {
        TransmissionPlan::new(vec![setting; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n > 0, "plan needs at least one subcarrier");
        TransmissionPlan {
            settings: (0..n).map(|_| SubcarrierSetting::random(rng)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn settings(&self) -> &[SubcarrierSetting] {
        &self.settings
    }

    pub fn settings_mut(&mut self) -> &mut [SubcarrierSetting] {
        &mut self.settings
    }

    /// Flattened genes: power and modulation codes alternating per subcarrier.
    pub fn to_genes(&self) -> Vec<u8> {
        self.settings
            .iter()
            .flat_map(|s| [s.power.0, s.modulation.0])
            .collect()
    }

    pub fn from_genes(genes: &[u8]) -> Result<Self> {
        if !genes.len().is_multiple_of(2) {
            return Err(Error::domain("gene vector must have even length"));
        }
        let codes: Vec<(i64, i64)> = genes
            .chunks_exact(2)
            .map(|c| (i64::from(c[0]), i64::from(c[1])))
            .collect();
        TransmissionPlan::from_codes(&codes)
    }

    pub(crate) fn from_settings_unchecked(settings: Vec<SubcarrierSetting>) -> Self {
        debug_assert!(!settings.is_empty());
        TransmissionPlan { settings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_codebook_endpoints() {
        assert_eq!(decode_power(PowerCode::new(0).unwrap()), 0.1);
        assert_eq!(decode_power(PowerCode::new(93).unwrap()), 2.4808);
        assert!((decode_power(PowerCode::new(46).unwrap()) - 1.2776).abs() < 1e-9);
        assert_eq!(
            decode_power(PowerCode::MAX) - decode_power(PowerCode::MIN),
            2.3808
        );
        assert_eq!(PowerCode::all().count(), 94);
    }

    #[test]
    fn power_codebook_is_strictly_increasing() {
        let values: Vec<f64> = PowerCode::all().map(decode_power).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        // uniform spacing of 2.3808 / 93
        for w in values.windows(2) {
            assert!((w[1] - w[0] - 0.0256).abs() < 1e-12);
        }
    }

    #[test]
    fn codes_out_of_range_are_rejected() {
        assert!(PowerCode::new(-1).is_err());
        assert!(PowerCode::new(94).is_err());
        assert!(ModulationCode::new(0).is_err());
        assert!(ModulationCode::new(12).is_err());
    }

    #[test]
    fn modulation_codebook() {
        let m = |c| decode_modulation(ModulationCode::new(c).unwrap());
        assert_eq!(m(1).family(), Family::Bpsk);
        assert_eq!(m(1).order(), 2);
        assert_eq!(m(5).to_string(), "16QAM");
        assert_eq!(m(11).to_string(), "1024QAM");
        assert_eq!(m(11).bits_per_symbol(), 10);
        assert_eq!(m(2).to_string(), "2QAM");
        assert_eq!(ModulationCode::new(1).unwrap().bits_per_symbol(), 1);
        assert_eq!(ModulationCode::new(2).unwrap().bits_per_symbol(), 1);
        for c in 2..=11 {
            assert_eq!(m(c).bits_per_symbol(), c as u32 - 1);
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(q_approx(0.0).unwrap(), 0.5);
        // 30-digit reference evaluations of the closed form
        assert!((q_approx(1.0).unwrap() - 0.159_280_170_248_569_5).abs() < 1e-15);
        assert!((q_approx(3.0).unwrap() - 0.001_366_527_592_817_873).abs() < 1e-17);
        assert!(q_approx(-0.1).is_err());
        assert!(q_approx(f64::NAN).is_err());
    }

    #[test]
    fn q_is_decreasing_and_bounded() {
        let grid: Vec<f64> = (0..10_000).map(|i| 8.0 * i as f64 / 9_999.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| q_approx(x).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] > w[1]));
        assert!(values.iter().all(|&v| v > 0.0 && v <= 0.5));
    }

    #[test]
    fn ber_reference_values() {
        let bpsk = ModulationScheme::bpsk();
        assert!((ber(bpsk, 1e-12).unwrap() - 0.5).abs() < 1e-6);
        let qam4 = ModulationScheme::new(Family::Mqam, 4).unwrap();
        let qam16 = ModulationScheme::new(Family::Mqam, 16).unwrap();
        let b4 = ber(qam4, 10.0).unwrap();
        assert!((b4 / 3.921_581_647_283_107e-6 - 1.0).abs() < 1e-12);
        assert!((ber(qam16, 10.0).unwrap() / 1.775_457_729_290_667e-3 - 1.0).abs() < 1e-12);
        assert!(ber(qam16, 10.0).unwrap() > b4);
        let psk8 = ModulationScheme::new(Family::Mpsk, 8).unwrap();
        assert!((ber(psk8, 5.0).unwrap() / 1.215_471_478_475_269e-2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ber_rejects_bad_inputs() {
        assert!(ber(ModulationScheme::bpsk(), 0.0).is_err());
        assert!(ber(ModulationScheme::bpsk(), -1.0).is_err());
        assert!(ModulationScheme::new(Family::Mqam, 12).is_err());
        assert!(ModulationScheme::new(Family::Mqam, 2048).is_err());
        assert!(ModulationScheme::new(Family::Bpsk, 4).is_err());
        let qam2 = ModulationScheme::new(Family::Mqam, 2).unwrap();
        assert!(ber(qam2, 1.0).is_err());
        assert_eq!(qam2.error_model(), ModulationScheme::bpsk());
        let psk2 = ModulationScheme::new(Family::Mpsk, 2).unwrap();
        assert!(ber(psk2, 1.0).is_err());
    }

    #[test]
    fn ber_is_decreasing_in_snr() {
        let mut schemes = vec![ModulationScheme::bpsk()];
        for k in 2..=10 {
            schemes.push(ModulationScheme::new(Family::Mqam, 1 << k).unwrap());
            schemes.push(ModulationScheme::new(Family::Mpsk, 1 << k).unwrap());
        }
        let grid: Vec<f64> = (0..2_000).map(|i| 0.01 + (100.0 - 0.01) * i as f64 / 1_999.0).collect();
        for s in schemes {
            let values: Vec<f64> = grid.iter().map(|&x| ber(s, x).unwrap()).collect();
            // strict until the floor clamp takes over
            for w in values.windows(2) {
                assert!(w[0] > w[1] || w[1] == BER_FLOOR, "{s}: {} !> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn qam_ber_increases_with_order() {
        // Below snr ~2.44 the 4/log2(M) prefactor dominates and the ordering flips.
        for i in 0..200 {
            let s = 2.5 + i as f64 * 0.49;
            let values: Vec<f64> = (3..=11)
                .map(|c| ber(ModulationCode::new(c).unwrap().scheme(), s).unwrap())
                .collect();
            for w in values.windows(2) {
                assert!(w[0] < w[1] || w[0] == BER_FLOOR, "snr {s}: {values:?}");
            }
        }
    }

    #[test]
    fn qam_ber_order_flips_at_low_snr() {
        let b = |c, s| ber(ModulationCode::new(c).unwrap().scheme(), s).unwrap();
        assert!(b(11, 0.1) < b(3, 0.1));
        assert!(b(11, 5.0) > b(3, 5.0));
    }

    #[test]
    fn snr_examples() {
        assert_eq!(snr(2.4808, 1.0).unwrap(), 2.4808);
        assert!((snr(0.1, db_to_linear(1.0)).unwrap() - 0.079_432_823_472_428_15).abs() < 1e-15);
        assert!(snr(0.0, 1.0).is_err());
        assert!(snr(-1.0, 1.0).is_err());
        assert!(snr(1.0, 0.5).is_err());
        let values: Vec<f64> = PowerCode::all().map(|p| snr(p.milliwatts(), 1.1).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn environment_sampling() {
        let a = sample_environment(4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = sample_environment(4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(sample_environment(0, &mut ChaCha8Rng::seed_from_u64(7)).is_err());

        let env = sample_environment(512, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(env.attenuation_db().iter().all(|&a| (0.0..=1.0).contains(&a)));
        let top = db_to_linear(1.0);
        for (&a, &n) in env.attenuation_db().iter().zip(env.noise_lin()) {
            assert_eq!(n, db_to_linear(a));
            assert!((1.0..=top).contains(&n));
        }
    }

    #[test]
    fn environment_mean_attenuation() {
        let env = sample_environment(10_000, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let mean = env.attenuation_db().iter().sum::<f64>() / 10_000.0;
        assert!((0.45..=0.55).contains(&mean), "mean {mean}");
    }

    #[test]
    fn environment_rejects_out_of_range() {
        assert!(ChannelEnvironment::from_attenuation(vec![]).is_err());
        assert!(ChannelEnvironment::from_attenuation(vec![0.5, 1.5]).is_err());
        assert!(ChannelEnvironment::from_attenuation(vec![-0.1]).is_err());
        assert!(ChannelEnvironment::from_attenuation(vec![f64::NAN]).is_err());
    }

    #[test]
    fn plan_genes() {
        let plan = TransmissionPlan::from_codes(&[(4, 1), (93, 11)]).unwrap();
        assert_eq!(plan.to_genes(), vec![4, 1, 93, 11]);
        assert_eq!(TransmissionPlan::from_genes(&plan.to_genes()).unwrap(), plan);
        assert!(TransmissionPlan::from_genes(&[4, 0]).is_err());
        assert!(TransmissionPlan::from_genes(&[4]).is_err());
        assert!(TransmissionPlan::from_codes(&[]).is_err());
        assert_eq!(SubcarrierSetting::all().count(), 94 * 11);
    }
}
