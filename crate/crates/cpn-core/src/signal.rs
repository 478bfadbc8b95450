//! Coherent-state codeword ensembles: MPPM and binary-coded OOK/BPSK signal sets.

use crate::error::{CpnError, Result};

/// Priors must sum to 1 within this tolerance.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// Real coherent-state pulse amplitude α ≥ 0. The mean photon number is n̄ = α².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    alpha: f64,
}

impl Amplitude {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(CpnError::InvalidEnsemble(format!(
                "pulse amplitude must be a finite nonnegative real, got {alpha}"
            )));
        }
        Ok(Amplitude { alpha })
    }

    /// Amplitude with the given mean photon number: α = √n̄.
    pub fn from_n_bar(n_bar: f64) -> Result<Self> {
        if !n_bar.is_finite() || n_bar < 0.0 {
            return Err(CpnError::InvalidEnsemble(format!(
                "mean photon number must be a finite nonnegative real, got {n_bar}"
            )));
        }
        Ok(Amplitude { alpha: n_bar.sqrt() })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// Mean photon number of a single pulse, n̄ = α².
    pub fn n_bar(self) -> f64 {
        self.alpha * self.alpha
    }
}

/// Modulation family of an ensemble.
///
/// `OokLike` covers every on-off construction (PPM, MPPM, OOK-coded words): slots are
/// vacuum or `+α`. `Bpsk` slots are `−α` or `+α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    OokLike,
    Bpsk,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::OokLike => "ook",
            Family::Bpsk => "bpsk",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "ook" => Ok(Family::OokLike),
            "bpsk" => Ok(Family::Bpsk),
            other => Err(CpnError::Parse(format!(
                "unknown family {other:?} (expected \"ook\" or \"bpsk\")"
            ))),
        }
    }

    /// Bit-to-symbol map: bit 1 ↦ `PlusAlpha`; bit 0 ↦ `Vacuum` (OOK) or `MinusAlpha` (BPSK).
    pub fn symbol_for_bit(self, bit: u8) -> SlotSymbol {
        match (self, bit) {
            (_, 1) => SlotSymbol::PlusAlpha,
            (Family::OokLike, _) => SlotSymbol::Vacuum,
            (Family::Bpsk, _) => SlotSymbol::MinusAlpha,
        }
    }
}

/// Per-slot symbol of a codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotSymbol {
    Vacuum,
    PlusAlpha,
    MinusAlpha,
}

impl SlotSymbol {
    /// Field amplitude γ of this symbol at pulse amplitude α.
    pub fn field_amplitude(self, amplitude: Amplitude) -> f64 {
        match self {
            SlotSymbol::Vacuum => 0.0,
            SlotSymbol::PlusAlpha => amplitude.alpha(),
            SlotSymbol::MinusAlpha => -amplitude.alpha(),
        }
    }

    /// Whether this symbol may appear in ensembles of the given family.
    pub fn allowed_in(self, family: Family) -> bool {
        match family {
            Family::OokLike => matches!(self, SlotSymbol::Vacuum | SlotSymbol::PlusAlpha),
            Family::Bpsk => matches!(self, SlotSymbol::PlusAlpha | SlotSymbol::MinusAlpha),
        }
    }

    /// `1` for `PlusAlpha`, `0` otherwise (the inverse of [`Family::symbol_for_bit`]).
    pub fn bit(self) -> u8 {
        match self {
            SlotSymbol::PlusAlpha => 1,
            _ => 0,
        }
    }
}

/// An M-slot codeword: one [`SlotSymbol`] per time slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    slots: Vec<SlotSymbol>,
}

impl Codeword {
    pub fn new(slots: Vec<SlotSymbol>) -> Self {
        Codeword { slots }
    }

    /// Parse a string of `0`/`1` characters under the family's bit map.
    pub fn from_bit_str(bits: &str, family: Family) -> Result<Self> {
        let mut slots = Vec::with_capacity(bits.len());
        for c in bits.chars() {
            match c {
                '0' => slots.push(family.symbol_for_bit(0)),
                '1' => slots.push(family.symbol_for_bit(1)),
                other => {
                    return Err(CpnError::Parse(format!(
                        "codeword {bits:?} contains {other:?}; only '0' and '1' are allowed"
                    )))
                }
            }
        }
        Ok(Codeword { slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn symbol(&self, slot: usize) -> SlotSymbol {
        self.slots[slot]
    }

    pub fn symbols(&self) -> &[SlotSymbol] {
        &self.slots
    }

    /// Bit view of the word (`PlusAlpha` ↦ 1, else 0).
    pub fn bits(&self) -> Vec<u8> {
        self.slots.iter().map(|s| s.bit()).collect()
    }
}

/// A validated discrimination problem: N distinct M-slot codewords with priors,
/// a common pulse amplitude, and a modulation family.
#[derive(Debug, Clone)]
pub struct SignalEnsemble {
    m_slots: usize,
    codewords: Vec<Codeword>,
    priors: Vec<f64>,
    amplitude: Amplitude,
    family: Family,
}

impl SignalEnsemble {
    /// Build and validate an ensemble. `priors = None` means uniform.
    pub fn new(
        codewords: Vec<Codeword>,
        priors: Option<Vec<f64>>,
        amplitude: Amplitude,
        family: Family,
    ) -> Result<Self> {
        if codewords.is_empty() {
            return Err(CpnError::InvalidEnsemble("no codewords given".into()));
        }
        let m_slots = codewords[0].len();
        if m_slots == 0 {
            return Err(CpnError::InvalidEnsemble("codewords must have at least one slot".into()));
        }
        for (i, w) in codewords.iter().enumerate() {
            if w.len() != m_slots {
                return Err(CpnError::InvalidEnsemble(format!(
                    "codeword {i} has {} slots, expected {m_slots}",
                    w.len()
                )));
            }
            for (k, s) in w.symbols().iter().enumerate() {
                if !s.allowed_in(family) {
                    return Err(CpnError::InvalidEnsemble(format!(
                        "codeword {i} slot {k} holds {s:?}, not allowed in the {} family",
                        family.label()
                    )));
                }
            }
            for (j, other) in codewords.iter().enumerate().take(i) {
                if w == other {
                    return Err(CpnError::InvalidEnsemble(format!(
                        "codewords {j} and {i} are identical"
                    )));
                }
            }
        }
        let n = codewords.len();
        let priors = match priors {
            Some(p) => p,
            None => vec![1.0 / n as f64; n],
        };
        if priors.len() != n {
            return Err(CpnError::InvalidEnsemble(format!(
                "{} priors for {n} codewords",
                priors.len()
            )));
        }
        for (i, &p) in priors.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(CpnError::InvalidEnsemble(format!(
                    "prior {i} is {p}; priors must be finite and nonnegative"
                )));
            }
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(CpnError::InvalidEnsemble(format!(
                "priors sum to {sum}, expected 1 within {PRIOR_SUM_TOL:e}"
            )));
        }
        Ok(SignalEnsemble { m_slots, codewords, priors, amplitude, family })
    }

    pub fn m_slots(&self) -> usize {
        self.m_slots
    }

    /// Number of hypotheses N.
    pub fn num_codewords(&self) -> usize {
        self.codewords.len()
    }

    pub fn codeword(&self, i: usize) -> &Codeword {
        &self.codewords[i]
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    pub fn amplitude(&self) -> Amplitude {
        self.amplitude
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Per-pulse mean photon number n̄ = α².
    pub fn n_bar(&self) -> f64 {
        self.amplitude.n_bar()
    }

    /// Field amplitude of hypothesis `i` in (0-based) slot `k`.
    pub fn slot_amplitude(&self, i: usize, k: usize) -> f64 {
        self.codewords[i].symbol(k).field_amplitude(self.amplitude)
    }

    /// Same codewords in a new slot order: slot `k` of each output word is slot
    /// `perm[k]` of the input word. `perm` must be a permutation of `0..M`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<SignalEnsemble> {
        if perm.len() != self.m_slots {
            return Err(CpnError::InvalidEnsemble(format!(
                "permutation has {} entries for {} slots",
                perm.len(),
                self.m_slots
            )));
        }
        let mut seen = vec![false; self.m_slots];
        for &p in perm {
            if p >= self.m_slots || seen[p] {
                return Err(CpnError::InvalidEnsemble(format!(
                    "invalid slot permutation {perm:?}"
                )));
            }
            seen[p] = true;
        }
        let words = self
            .codewords
            .iter()
            .map(|w| Codeword::new(perm.iter().map(|&p| w.symbol(p)).collect()))
            .collect();
        SignalEnsemble::new(words, Some(self.priors.clone()), self.amplitude, self.family)
    }
}

/// All C(M, L) codewords with exactly L pulses among M slots, uniform priors.
///
/// Words are ordered lexicographically with a pulse sorting before vacuum, i.e. for
/// M = 4, L = 2: `1100, 1010, 1001, 0110, 0101, 0011`.
pub fn make_mppm(m_slots: usize, l_pulses: usize, amplitude: Amplitude) -> Result<SignalEnsemble> {
    if m_slots == 0 || l_pulses == 0 || l_pulses > m_slots {
        return Err(CpnError::InvalidEnsemble(format!(
            "need 1 ≤ L ≤ M, got M = {m_slots}, L = {l_pulses}"
        )));
    }
    if m_slots > 30 {
        return Err(CpnError::InvalidEnsemble(format!(
            "MPPM construction limited to M ≤ 30 slots, got {m_slots}"
        )));
    }
    let mut words = Vec::new();
    // Enumerate L-subsets of slot indices in lexicographic order; ascending pulse
    // positions are exactly the pulse-first word order documented above.
    let mut pos: Vec<usize> = (0..l_pulses).collect();
    loop {
        let mut slots = vec![SlotSymbol::Vacuum; m_slots];
        for &p in &pos {
            slots[p] = SlotSymbol::PlusAlpha;
        }
        words.push(Codeword::new(slots));
        // Advance to the next combination.
        let mut j = l_pulses;
        while j > 0 && pos[j - 1] == m_slots - l_pulses + (j - 1) {
            j -= 1;
        }
        if j == 0 {
            break;
        }
        pos[j - 1] += 1;
        for k in j..l_pulses {
            pos[k] = pos[k - 1] + 1;
        }
    }
    SignalEnsemble::new(words, None, amplitude, Family::OokLike)
}

/// Ensemble from binary codeword strings under the family's bit map
/// (bit 1 ↦ `+α`; bit 0 ↦ vacuum for OOK, `−α` for BPSK). `priors = None` means uniform.
pub fn make_coded<S: AsRef<str>>(
    codeword_bits: &[S],
    family: Family,
    amplitude: Amplitude,
    priors: Option<Vec<f64>>,
) -> Result<SignalEnsemble> {
    let words = codeword_bits
        .iter()
        .map(|s| Codeword::from_bit_str(s.as_ref(), family))
        .collect::<Result<Vec<_>>>()?;
    SignalEnsemble::new(words, priors, amplitude, family)
}

/// The 16 codewords of the systematic Hamming(7,4) code, as bit strings.
///
/// Generator G = [I₄ | P] with P rows `110`, `101`, `011`, `111`; messages are
/// enumerated in lexicographic order, so the codeword list is lexicographic as well.
pub fn hamming_7_4_codewords() -> Vec<String> {
    (0u8..16)
        .map(|m| {
            let b = [(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1];
            let p = [b[0] ^ b[1] ^ b[3], b[0] ^ b[2] ^ b[3], b[1] ^ b[2] ^ b[3]];
            b.iter()
                .chain(p.iter())
                .map(|bit| char::from(b'0' + bit))
                .collect()
        })
        .collect()
}

/// Parse a codeword file: one binary string per line; blank lines and `#` comments
/// are ignored.
pub fn parse_codeword_lines(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !line.chars().all(|c| c == '0' || c == '1') {
            return Err(CpnError::Parse(format!(
                "line {}: codeword {line:?} must consist of '0' and '1' only",
                lineno + 1
            )));
        }
        out.push(line.to_string());
    }
    if out.is_empty() {
        return Err(CpnError::Parse("codeword file contains no codewords".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_mppm(m: usize, l: usize) -> SignalEnsemble {
        make_mppm(m, l, Amplitude::from_n_bar(1.0).unwrap()).unwrap()
    }

    #[test]
    fn amplitude_roundtrip() {
        let a = Amplitude::from_n_bar(2.25).unwrap();
        assert!((a.alpha() - 1.5).abs() < 1e-15);
        assert!((a.n_bar() - 2.25).abs() < 1e-15);
        assert!(Amplitude::new(-0.1).is_err());
        assert!(Amplitude::from_n_bar(f64::NAN).is_err());
    }

    #[test]
    fn mppm_2_4_word_order_matches_pulse_position_listing() {
        let ens = uniform_mppm(4, 2);
        let got: Vec<String> = ens
            .codewords()
            .iter()
            .map(|w| w.bits().iter().map(|b| char::from(b'0' + b)).collect())
            .collect();
        assert_eq!(got, vec!["1100", "1010", "1001", "0110", "0101", "0011"]);
        assert!(ens.priors().iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn ppm_4_word_order() {
        let ens = uniform_mppm(4, 1);
        let got: Vec<Vec<u8>> = ens.codewords().iter().map(|w| w.bits()).collect();
        assert_eq!(got, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    }

    #[test]
    fn mppm_counts_and_degenerate_case() {
        assert_eq!(uniform_mppm(6, 2).num_codewords(), 15);
        let full = uniform_mppm(3, 3);
        assert_eq!(full.num_codewords(), 1);
        assert_eq!(full.priors(), &[1.0]);
        for l in 0..=4 {
            let c = make_mppm(4, l, Amplitude::new(1.0).unwrap());
            if l == 0 {
                assert!(c.is_err());
            } else {
                assert_eq!(c.unwrap().num_codewords(), [4usize, 6, 4, 1][l - 1]);
            }
        }
        assert!(make_mppm(4, 5, Amplitude::new(1.0).unwrap()).is_err());
        assert!(make_mppm(0, 0, Amplitude::new(1.0).unwrap()).is_err());
    }

    #[test]
    fn mppm_every_word_has_l_pulses() {
        let ens = uniform_mppm(6, 3);
        assert_eq!(ens.num_codewords(), 20);
        for w in ens.codewords() {
            assert_eq!(w.bits().iter().map(|&b| b as usize).sum::<usize>(), 3);
        }
    }

    #[test]
    fn hamming_7_4_structure() {
        let words = hamming_7_4_codewords();
        assert_eq!(words.len(), 16);
        assert_eq!(words[0], "0000000");
        assert_eq!(words[15], "1111111");
        // weight distribution 1, 7, 7, 1 over weights 0, 3, 4, 7
        let mut weight_counts = [0usize; 8];
        for w in &words {
            weight_counts[w.chars().filter(|&c| c == '1').count()] += 1;
        }
        assert_eq!(weight_counts, [1, 0, 0, 7, 7, 0, 0, 1]);
        // minimum pairwise distance 3
        let mut dmin = usize::MAX;
        for i in 0..16 {
            for j in 0..i {
                let d = words[i]
                    .chars()
                    .zip(words[j].chars())
                    .filter(|(a, b)| a != b)
                    .count();
                dmin = dmin.min(d);
            }
        }
        assert_eq!(dmin, 3);
        // closed under GF(2) addition
        let set: std::collections::HashSet<&String> = words.iter().collect();
        for a in &words {
            for b in &words {
                let sum: String = a
                    .chars()
                    .zip(b.chars())
                    .map(|(x, y)| if x == y { '0' } else { '1' })
                    .collect();
                assert!(set.contains(&sum));
            }
        }
    }

    #[test]
    fn coded_bpsk_maps_bits_to_signed_amplitudes() {
        let ens = make_coded(
            &hamming_7_4_codewords(),
            Family::Bpsk,
            Amplitude::from_n_bar(1.0).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(ens.num_codewords(), 16);
        assert_eq!(ens.m_slots(), 7);
        assert!((ens.prior(3) - 1.0 / 16.0).abs() < 1e-15);
        // all-zeros message is the all-minus-alpha product state
        for k in 0..7 {
            assert!((ens.slot_amplitude(0, k) + 1.0).abs() < 1e-15);
        }
        assert!((ens.slot_amplitude(15, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation_rejects_bad_inputs() {
        let amp = Amplitude::new(1.0).unwrap();
        // duplicate words
        assert!(make_coded(&["01", "01"], Family::OokLike, amp, None).is_err());
        // length mismatch
        assert!(make_coded(&["01", "011"], Family::OokLike, amp, None).is_err());
        // bad priors: wrong length, negative entry, wrong sum
        assert!(make_coded(&["01", "10"], Family::OokLike, amp, Some(vec![1.0])).is_err());
        assert!(make_coded(&["01", "10"], Family::OokLike, amp, Some(vec![1.5, -0.5])).is_err());
        assert!(make_coded(&["01", "10"], Family::OokLike, amp, Some(vec![0.6, 0.5])).is_err());
        // empty inputs
        assert!(make_coded::<&str>(&[], Family::OokLike, amp, None).is_err());
        assert!(make_coded(&[""], Family::OokLike, amp, None).is_err());
        // family mismatch: a vacuum slot in a BPSK ensemble
        let vac = Codeword::new(vec![SlotSymbol::Vacuum]);
        let plus = Codeword::new(vec![SlotSymbol::PlusAlpha]);
        assert!(SignalEnsemble::new(vec![vac, plus], None, amp, Family::Bpsk).is_err());
        // ... and a minus-alpha slot in an OOK ensemble
        let minus = Codeword::new(vec![SlotSymbol::MinusAlpha]);
        let plus = Codeword::new(vec![SlotSymbol::PlusAlpha]);
        assert!(SignalEnsemble::new(vec![minus, plus], None, amp, Family::OokLike).is_err());
    }

    #[test]
    fn priors_accept_tolerated_rounding() {
        let amp = Amplitude::new(1.0).unwrap();
        let third = 1.0 / 3.0;
        let ens = make_coded(
            &["001", "010", "100"],
            Family::OokLike,
            amp,
            Some(vec![third, third, third]),
        )
        .unwrap();
        assert_eq!(ens.num_codewords(), 3);
    }

    #[test]
    fn parse_codeword_lines_handles_comments_and_blanks() {
        let text = "# header comment\n0101\n\n  1010  # trailing\n";
        assert_eq!(parse_codeword_lines(text).unwrap(), vec!["0101", "1010"]);
        assert!(parse_codeword_lines("01a1\n").is_err());
        assert!(parse_codeword_lines("# only a comment\n").is_err());
    }

    #[test]
    fn permute_slots_roundtrip_and_validation() {
        let ens = uniform_mppm(4, 2);
        let perm = [2, 0, 3, 1];
        let permuted = ens.permute_slots(&perm).unwrap();
        assert_eq!(permuted.codeword(0).bits(), vec![0, 1, 0, 1]); // 1100 viewed through perm
        assert!(ens.permute_slots(&[0, 1]).is_err());
        assert!(ens.permute_slots(&[0, 0, 1, 2]).is_err());
        assert!(ens.permute_slots(&[0, 1, 2, 4]).is_err());
    }
}
