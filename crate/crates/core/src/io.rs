//! JSON state files.
//!
//! ```json
//! {"n": 4, "amplitudes": [{"log_mag": "-inf", "phase": 0.0}, ...]}
//! ```
//!
//! Index `k` of `amplitudes` is `|J, m = k - J⟩` along z, `k` counting up-spins. A file may instead
//! carry `"coherent_components": [{"log_mag", "phase", "theta", "phi"}, ...]` for a superposition
//! of coherent states. Readers renormalize and reject norm defects above `1e-6`.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coherent::CoherentSuperposition;
use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::numeric::{lit, Real};
use crate::state::{make_state, SymmetricState};

/// Log-magnitude that serializes `-∞` as the string `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMag(pub f64);

impl Serialize for LogMag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for LogMag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = LogMag;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<LogMag, E> {
                Ok(LogMag(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<LogMag, E> {
                Ok(LogMag(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<LogMag, E> {
                Ok(LogMag(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<LogMag, E> {
                match v {
                    "-inf" | "-Infinity" => Ok(LogMag(f64::NEG_INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub log_mag: LogMag,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub log_mag: LogMag,
    pub phase: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<AmplitudeRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherent_components: Option<Vec<ComponentRecord>>,
}

/// A loaded file: either explicit amplitudes or a coherent superposition.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState<T> {
    Amplitudes(SymmetricState<T>),
    Coherent(CoherentSuperposition<T>),
}

impl<T: Real> LoadedState<T> {
    pub fn n_qubits(&self) -> usize {
        match self {
            LoadedState::Amplitudes(s) => s.n_qubits(),
            LoadedState::Coherent(c) => c.n_qubits,
        }
    }

    pub fn to_state(&self) -> Result<SymmetricState<T>> {
        match self {
            LoadedState::Amplitudes(s) => Ok(s.clone()),
            LoadedState::Coherent(c) => c.to_state(),
        }
    }
}

fn lc<T: Real>(log_mag: LogMag, phase: f64) -> Result<LogComplex<T>> {
    if log_mag.0.is_nan() || log_mag.0 == f64::INFINITY || !phase.is_finite() {
        return Err(Error::Format("non-finite amplitude".into()));
    }
    Ok(LogComplex::new(lit(log_mag.0), lit(phase)))
}

impl StateFile {
    pub fn from_state<T: Real>(state: &SymmetricState<T>) -> Self {
        let amps = state
            .canonical()
            .amplitudes()
            .iter()
            .map(|a| AmplitudeRecord { log_mag: LogMag(a.log_mag.to_f64().unwrap_or(f64::NEG_INFINITY)), phase: a.phase.to_f64().unwrap_or(0.0) })
            .collect();
        Self { n: state.n_qubits(), amplitudes: Some(amps), coherent_components: None }
    }

    pub fn from_superposition<T: Real>(sup: &CoherentSuperposition<T>) -> Self {
        let f = |x: T| x.to_f64().unwrap_or(0.0);
        let comps = sup
            .components
            .iter()
            .map(|&(w, t, p)| ComponentRecord { log_mag: LogMag(w.log_mag.to_f64().unwrap_or(f64::NEG_INFINITY)), phase: f(w.phase), theta: f(t), phi: f(p) })
            .collect();
        Self { n: sup.n_qubits, amplitudes: None, coherent_components: Some(comps) }
    }

    pub fn load<T: Real>(&self) -> Result<LoadedState<T>> {
        match (&self.amplitudes, &self.coherent_components) {
            (Some(a), None) => {
                let amps = a.iter().map(|r| lc(r.log_mag, r.phase)).collect::<Result<Vec<_>>>()?;
                Ok(LoadedState::Amplitudes(make_state(self.n, amps)?))
            }
            (None, Some(c)) => {
                let comps = c.iter().map(|r| Ok((lc(r.log_mag, r.phase)?, lit(r.theta), lit(r.phi)))).collect::<Result<Vec<_>>>()?;
                let sup = CoherentSuperposition::<T>::new(self.n, comps)?;
                let d = (sup.norm_sqr() - T::one()).abs();
                if !(d <= lit(1e-6)) {
                    return Err(Error::NotNormalized(d.to_f64().unwrap_or(f64::NAN)));
                }
                Ok(LoadedState::Coherent(sup.normalized()?))
            }
            _ => Err(Error::Format("exactly one of `amplitudes` or `coherent_components` is required".into())),
        }
    }
}

pub fn to_json<T: Real>(state: &SymmetricState<T>) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).unwrap_or_default()
}

pub fn from_json<T: Real>(text: &str) -> Result<LoadedState<T>> {
    let f: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    f.load()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{coherent_state, fidelity};

    #[test]
    fn round_trip() {
        let s = coherent_state::<f64>(10, 0.7, 1.9).unwrap();
        let text = to_json(&s);
        let back = match from_json::<f64>(&text).unwrap() {
            LoadedState::Amplitudes(b) => b,
            _ => panic!(),
        };
        assert!((fidelity(&s, &back).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn minus_inf_round_trips() {
        let s = coherent_state::<f64>(4, 0.0, 0.0).unwrap();
        let text = to_json(&s);
        assert!(text.contains("\"-inf\""));
        let back = from_json::<f64>(&text).unwrap().to_state().unwrap();
        assert!(back.amplitude(0).is_zero());
    }

    #[test]
    fn rejects_bad_norm_and_shape() {
        let bad = r#"{"n": 2, "amplitudes": [{"log_mag": 0.1, "phase": 0}, {"log_mag": "-inf", "phase": 0}, {"log_mag": "-inf", "phase": 0}]}"#;
        assert!(matches!(from_json::<f64>(bad), Err(Error::NotNormalized(_))));
        let short = r#"{"n": 2, "amplitudes": [{"log_mag": 0, "phase": 0}]}"#;
        assert!(matches!(from_json::<f64>(short), Err(Error::LengthMismatch { .. })));
        assert!(from_json::<f64>(r#"{"n": 2}"#).is_err());
        assert!(from_json::<f64>("nope").is_err());
    }

    #[test]
    fn coherent_variant() {
        let h = std::f64::consts::FRAC_PI_2;
        let w = (0.5f64).ln() / 2.0;
        let text = format!(
            r#"{{"n": 8, "coherent_components": [{{"log_mag": {w}, "phase": 0, "theta": {h}, "phi": 0}}, {{"log_mag": {w}, "phase": 0, "theta": {h}, "phi": {pi}}}]}}"#,
            pi = std::f64::consts::PI
        );
        let l = from_json::<f64>(&text).unwrap();
        assert!(matches!(l, LoadedState::Coherent(_)));
        assert_eq!(l.n_qubits(), 8);
        let round = StateFile::from_superposition(match &l {
            LoadedState::Coherent(c) => c,
            _ => unreachable!(),
        });
        assert_eq!(round.coherent_components.as_ref().unwrap().len(), 2);
    }
}
