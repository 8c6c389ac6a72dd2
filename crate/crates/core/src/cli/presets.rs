//! Named parameter sets for the no-modulation, monochromatic and
//! bichromatic scenarios.

use super::config::RunSpec;
use crate::model::{DetuningProfile, SystemParams};

pub const PRESET_NAMES: [&str; 7] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "bi-overtone"];

/// Short human-readable description of a preset.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => "no modulation: N=3.5, delta0=0",
        "fig2" => "monochromatic, incommensurate: N=2.5, delta0=1, omega=sqrt(17)",
        "fig3" => "monochromatic, synchronized: N=3.5, delta0=1, omega=Omega=sqrt(17)",
        "fig4" => "monochromatic, subharmonic: N=2.5, delta0=1, omega=Omega/100",
        "fig5" => "bichromatic: N=1.5, delta0=1, omega1=sqrt(7), omega2=sqrt(17)",
        "fig6" => "bichromatic: N=1.5, delta0=1, omega1=sqrt(10), omega2=sqrt(13)",
        "bi-overtone" => "experimental bichromatic overtones: N=1.5, delta0=1, omega1=Omega, omega2=2 Omega",
        _ => return None,
    })
}

fn params(capital_n: f64, delta0: f64) -> SystemParams {
    SystemParams::new(capital_n, 1.0, delta0).expect("preset parameters are valid")
}

/// Physical parameters of a preset.
pub fn preset_physics(name: &str) -> Option<(SystemParams, DetuningProfile)> {
    let physics = match name {
        "fig1" => (params(3.5, 0.0), DetuningProfile::Constant),
        "fig2" => (
            params(2.5, 1.0),
            DetuningProfile::Monochromatic { omega: 17f64.sqrt() },
        ),
        "fig3" => {
            let p = params(3.5, 1.0);
            (p, DetuningProfile::Monochromatic { omega: p.rabi_frequency() })
        }
        "fig4" => {
            let p = params(2.5, 1.0);
            (p, DetuningProfile::Monochromatic { omega: p.rabi_frequency() / 100.0 })
        }
        "fig5" => (
            params(1.5, 1.0),
            DetuningProfile::Bichromatic {
                omega1: 7f64.sqrt(),
                omega2: 17f64.sqrt(),
            },
        ),
        "fig6" => (
            params(1.5, 1.0),
            DetuningProfile::Bichromatic {
                omega1: 10f64.sqrt(),
                omega2: 13f64.sqrt(),
            },
        ),
        "bi-overtone" => {
            let p = params(1.5, 1.0);
            let w = p.rabi_frequency();
            (
                p,
                DetuningProfile::Bichromatic {
                    omega1: w,
                    omega2: 2.0 * w,
                },
            )
        }
        _ => return None,
    };
    Some(physics)
}

/// A preset with default numerics.
pub fn preset(name: &str) -> Option<RunSpec> {
    preset_physics(name).map(|(p, profile)| RunSpec::new(name, p, profile))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve_and_validate() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap();
            spec.validate().unwrap();
            assert!(describe(name).is_some());
            assert!(spec.warnings().is_empty(), "{name}: {:?}", spec.warnings());
        }
        assert!(preset("fig7").is_none());
    }

    #[test]
    fn preset_rabi_frequencies() {
        let omega = |n: &str| preset(n).unwrap().params.rabi_frequency();
        assert_eq!(omega("fig1"), 4.0);
        assert_eq!(omega("fig2"), 13f64.sqrt());
        assert_eq!(omega("fig3"), 17f64.sqrt());
        assert_eq!(omega("fig5"), 3.0);
        assert_eq!(omega("fig6"), 3.0);
    }
}
