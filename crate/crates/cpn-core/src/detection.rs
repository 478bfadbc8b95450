//! On-off detection after displacement: click probabilities for ideal and mildly
//! non-ideal detectors, and the two-element per-slot control set.

use crate::error::{CpnError, Result};
use crate::signal::{Amplitude, Family, SlotSymbol};

/// Relative tolerance used to match a requested β against the control set.
const BETA_SNAP_TOL: f64 = 1e-9;

/// On-off detector model: quantum efficiency η ∈ (0, 1] and dark-click probability
/// p_d ∈ [0, 1). The defaults η = 1, p_d = 0 are the ideal detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionModel {
    efficiency: f64,
    dark_click: f64,
}

impl DetectionModel {
    pub fn new(efficiency: f64, dark_click: f64) -> Result<Self> {
        if !efficiency.is_finite() || efficiency <= 0.0 || efficiency > 1.0 {
            return Err(CpnError::InvalidEnsemble(format!(
                "detector efficiency must lie in (0, 1], got {efficiency}"
            )));
        }
        if !dark_click.is_finite() || dark_click < 0.0 || dark_click >= 1.0 {
            return Err(CpnError::InvalidEnsemble(format!(
                "dark-click probability must lie in [0, 1), got {dark_click}"
            )));
        }
        Ok(DetectionModel { efficiency, dark_click })
    }

    pub fn ideal() -> Self {
        DetectionModel { efficiency: 1.0, dark_click: 0.0 }
    }

    pub fn efficiency(self) -> f64 {
        self.efficiency
    }

    pub fn dark_click(self) -> f64 {
        self.dark_click
    }
}

impl Default for DetectionModel {
    fn default() -> Self {
        DetectionModel::ideal()
    }
}

/// A per-slot displacement control β, restricted to the two-element control set Σ
/// of the ensemble family:
///
/// - OOK-like: β ∈ {0, −α} — direct detection or pulse nulling;
/// - BPSK: β ∈ {+α, −α} — null the `−α` symbol or null the `+α` symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    beta: f64,
    family: Family,
}

impl Control {
    /// Validate β against the family's control set; values within a small relative
    /// tolerance of a set element are snapped to it exactly.
    pub fn new(beta: f64, family: Family, amplitude: Amplitude) -> Result<Self> {
        if !beta.is_finite() {
            return Err(CpnError::InvalidStrategy(format!("control beta is {beta}")));
        }
        let set = control_set(family, amplitude);
        let tol = BETA_SNAP_TOL * (1.0 + amplitude.alpha());
        let mut best: Option<Control> = None;
        let mut best_dist = f64::INFINITY;
        for c in set {
            let d = (beta - c.beta).abs();
            if d < best_dist {
                best_dist = d;
                best = Some(c);
            }
        }
        match best {
            Some(c) if best_dist <= tol => Ok(c),
            _ => Err(CpnError::InvalidStrategy(format!(
                "beta = {beta} is not in the {} control set {{{}, {}}} at alpha = {}",
                family.label(),
                set[0].beta,
                set[1].beta,
                amplitude.alpha()
            ))),
        }
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn family(self) -> Family {
        self.family
    }
}

/// The canonical control set Σ for a family.
///
/// The first element is the deterministic tie-break winner in strategy
/// optimization: direct detection (β = 0) for OOK-like, null-MinusAlpha (β = +α)
/// for BPSK.
pub fn control_set(family: Family, amplitude: Amplitude) -> [Control; 2] {
    let a = amplitude.alpha();
    match family {
        Family::OokLike => [
            Control { beta: 0.0, family },
            Control { beta: -a, family },
        ],
        Family::Bpsk => [
            Control { beta: a, family },
            Control { beta: -a, family },
        ],
    }
}

/// Field amplitude after displacement, γ + β.
///
/// Fails if the symbol is not legal for the control's family (e.g. a `−α` symbol
/// under an OOK control).
pub fn displaced_amplitude(symbol: SlotSymbol, control: Control, amplitude: Amplitude) -> Result<f64> {
    if !symbol.allowed_in(control.family()) {
        return Err(CpnError::InvalidEnsemble(format!(
            "symbol {symbol:?} is not part of the {} family",
            control.family().label()
        )));
    }
    Ok(symbol.field_amplitude(amplitude) + control.beta())
}

/// Probability of **no** click: (1 − p_d) · exp(−η·(γ + β)²).
///
/// This is the computational primitive; [`click_probability`] is its complement.
/// Computing the survival side directly keeps very small no-click probabilities
/// (e.g. e^{−4n̄} for a bright non-nulled BPSK slot) from rounding to zero through
/// the complement.
pub fn no_click_probability(
    symbol: SlotSymbol,
    control: Control,
    amplitude: Amplitude,
    model: DetectionModel,
) -> Result<f64> {
    let d = displaced_amplitude(symbol, control, amplitude)?;
    Ok((1.0 - model.dark_click()) * (-model.efficiency() * d * d).exp())
}

/// Probability of a click: 1 − (1 − p_d) · exp(−η·(γ + β)²).
///
/// With the ideal defaults this reproduces the standard on-off statistics: a
/// vacuum (or perfectly nulled) slot never clicks; a slot with residual amplitude
/// `d` clicks with probability 1 − e^{−d²}.
pub fn click_probability(
    symbol: SlotSymbol,
    control: Control,
    amplitude: Amplitude,
    model: DetectionModel,
) -> Result<f64> {
    Ok(1.0 - no_click_probability(symbol, control, amplitude, model)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(n_bar: f64) -> Amplitude {
        Amplitude::from_n_bar(n_bar).unwrap()
    }

    fn ook_controls(a: Amplitude) -> [Control; 2] {
        control_set(Family::OokLike, a)
    }

    #[test]
    fn model_validation() {
        assert!(DetectionModel::new(0.0, 0.0).is_err());
        assert!(DetectionModel::new(1.1, 0.0).is_err());
        assert!(DetectionModel::new(1.0, -0.1).is_err());
        assert!(DetectionModel::new(1.0, 1.0).is_err());
        assert!(DetectionModel::new(0.7, 0.01).is_ok());
        assert_eq!(DetectionModel::default(), DetectionModel::ideal());
    }

    #[test]
    fn control_set_order_and_snap() {
        let a = amp(1.0);
        let [dd, null] = ook_controls(a);
        assert_eq!(dd.beta(), 0.0);
        assert_eq!(null.beta(), -1.0);
        let [null_minus, null_plus] = control_set(Family::Bpsk, a);
        assert_eq!(null_minus.beta(), 1.0);
        assert_eq!(null_plus.beta(), -1.0);
        // snapping
        let c = Control::new(-1.0 + 1e-12, Family::OokLike, a).unwrap();
        assert_eq!(c.beta(), -1.0);
        assert!(Control::new(0.5, Family::OokLike, a).is_err());
        assert!(Control::new(f64::NAN, Family::OokLike, a).is_err());
    }

    #[test]
    fn displacement_examples() {
        let a = amp(1.0);
        let [dd, null] = ook_controls(a);
        assert_eq!(displaced_amplitude(SlotSymbol::PlusAlpha, null, a).unwrap(), 0.0);
        assert_eq!(displaced_amplitude(SlotSymbol::Vacuum, null, a).unwrap(), -1.0);
        assert_eq!(displaced_amplitude(SlotSymbol::Vacuum, dd, a).unwrap(), 0.0);
        let [null_minus, _] = control_set(Family::Bpsk, a);
        assert_eq!(displaced_amplitude(SlotSymbol::MinusAlpha, null_minus, a).unwrap(), 0.0);
        // illegal pairing
        assert!(displaced_amplitude(SlotSymbol::MinusAlpha, dd, a).is_err());
    }

    #[test]
    fn ideal_click_probabilities() {
        let a = amp(1.0);
        let m = DetectionModel::ideal();
        let [dd, null] = ook_controls(a);
        // vacuum under direct detection never clicks
        assert_eq!(click_probability(SlotSymbol::Vacuum, dd, a, m).unwrap(), 0.0);
        // a nulled pulse never clicks
        assert_eq!(click_probability(SlotSymbol::PlusAlpha, null, a, m).unwrap(), 0.0);
        // pulse under direct detection: 1 − e^{−n̄}
        let p = click_probability(SlotSymbol::PlusAlpha, dd, a, m).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        // nulled vacuum clicks like a pulse
        let p = click_probability(SlotSymbol::Vacuum, null, a, m).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn bpsk_wrong_symbol_sees_doubled_amplitude() {
        let a = amp(0.5);
        let m = DetectionModel::ideal();
        let [null_minus, null_plus] = control_set(Family::Bpsk, a);
        // nulling the matching symbol is exact
        assert_eq!(click_probability(SlotSymbol::MinusAlpha, null_minus, a, m).unwrap(), 0.0);
        assert_eq!(click_probability(SlotSymbol::PlusAlpha, null_plus, a, m).unwrap(), 0.0);
        // the other symbol is displaced to ±2α: P(click) = 1 − e^{−4n̄} = 1 − e^{−2}
        let p = click_probability(SlotSymbol::PlusAlpha, null_minus, a, m).unwrap();
        assert!((p - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        let p = click_probability(SlotSymbol::MinusAlpha, null_plus, a, m).unwrap();
        assert!((p - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn zero_light_never_clicks_ideally() {
        let a = amp(0.0);
        let m = DetectionModel::ideal();
        for c in ook_controls(a) {
            for s in [SlotSymbol::Vacuum, SlotSymbol::PlusAlpha] {
                assert_eq!(click_probability(s, c, a, m).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn click_probability_monotone_in_n_bar() {
        let m = DetectionModel::ideal();
        let mut last = -1.0;
        for nb in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let a = amp(nb);
            let [dd, _] = ook_controls(a);
            let p = click_probability(SlotSymbol::PlusAlpha, dd, a, m).unwrap();
            assert!(p > last);
            last = p;
        }
    }

    #[test]
    fn nonideal_model_shifts_both_ends() {
        let a = amp(1.0);
        let m = DetectionModel::new(0.8, 0.02).unwrap();
        let [dd, _] = ook_controls(a);
        // vacuum now dark-clicks
        let p0 = click_probability(SlotSymbol::Vacuum, dd, a, m).unwrap();
        assert!((p0 - 0.02).abs() < 1e-15);
        // pulse click probability reflects the reduced efficiency
        let p1 = click_probability(SlotSymbol::PlusAlpha, dd, a, m).unwrap();
        assert!((p1 - (1.0 - 0.98 * (-0.8f64).exp())).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&p0) && (0.0..=1.0).contains(&p1));
        // complement identity
        let s1 = no_click_probability(SlotSymbol::PlusAlpha, dd, a, m).unwrap();
        assert!((p1 + s1 - 1.0).abs() < 1e-15);
    }
}
