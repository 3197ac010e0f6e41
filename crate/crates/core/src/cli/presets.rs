use crate::feedback::Regime;
use crate::montecarlo::ExperimentConfig;

pub const PRESET_NAMES: [&str; 6] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"];

/// Trials per grid point unless overridden.
pub const DEFAULT_TRIALS: usize = 10_000;

/// One simulated curve of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub config: ExperimentConfig,
}

/// Closed-form curve drawn next to the simulated ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpec {
    pub name: String,
    pub regime: Regime,
    pub n_t: usize,
    pub user_grid: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub curves: Vec<CurveSpec>,
    pub references: Vec<ReferenceSpec>,
}

fn range(lo: usize, hi: usize, step: usize) -> impl Iterator<Item = usize> {
    (lo..=hi).step_by(step)
}

/// Dense at small `U`, sparse up to 200.
fn wide_grid() -> Vec<usize> {
    range(1, 10, 1)
        .chain(range(12, 40, 2))
        .chain(range(50, 200, 10))
        .collect()
}

/// Roughly log-spaced grid from 1 to 140.
fn scaling_grid() -> Vec<usize> {
    range(1, 10, 1)
        .chain(range(12, 30, 3))
        .chain(range(35, 140, 5))
        .collect()
}

fn curve(name: String, config: ExperimentConfig) -> CurveSpec {
    CurveSpec { name, config }
}

pub fn preset(name: &str, seed: u64, trials: Option<usize>) -> Option<Preset> {
    let trials = trials.unwrap_or(DEFAULT_TRIALS);
    let p = match name {
        "fig2" => {
            let grid = scaling_grid();
            let curves = [0.0, 5.0, 30.0]
                .iter()
                .map(|&snr| {
                    curve(
                        format!("pu2rc_snr{snr}"),
                        ExperimentConfig::pu2rc(2, 16, snr, grid.clone(), trials, seed),
                    )
                })
                .collect();
            let ref_grid: Vec<usize> = grid.iter().copied().filter(|&u| u >= 3).collect();
            Preset {
                name: "fig2",
                description:
                    "asymptotic vs simulated throughput scaling, Nt=2, N=16, SNR 0/5/30 dB",
                curves,
                references: vec![
                    ReferenceSpec {
                        name: "ref_loglog".into(),
                        regime: Regime::Normal,
                        n_t: 2,
                        user_grid: ref_grid.clone(),
                    },
                    ReferenceSpec {
                        name: "ref_log".into(),
                        regime: Regime::InterferenceLimited,
                        n_t: 2,
                        user_grid: ref_grid,
                    },
                ],
            }
        }
        "fig3" | "fig4" => {
            let mut curves = Vec::new();
            for n in [16, 64] {
                curves.push(curve(
                    format!("pu2rc_n{n}"),
                    ExperimentConfig::pu2rc(4, n, 5.0, wide_grid(), trials, seed),
                ));
                curves.push(curve(
                    format!("zf_sdma_n{n}"),
                    ExperimentConfig::zf_sdma(4, n, 5.0, wide_grid(), trials, seed),
                ));
            }
            Preset {
                name: if name == "fig3" { "fig3" } else { "fig4" },
                description: if name == "fig3" {
                    "PU2RC vs ZF-SDMA throughput, Nt=4, SNR 5 dB, N in {16, 64}"
                } else {
                    "scheduled users of PU2RC and ZF-SDMA, Nt=4, SNR 5 dB, N in {16, 64}"
                },
                curves,
                references: vec![],
            }
        }
        "fig5" => Preset {
            name: "fig5",
            description: "PU2RC throughput vs codebook size, Nt=4, SNR 5 dB, N in {4..64}",
            curves: [4, 8, 16, 32, 64]
                .iter()
                .map(|&n| {
                    curve(
                        format!("pu2rc_n{n}"),
                        ExperimentConfig::pu2rc(4, n, 5.0, wide_grid(), trials, seed),
                    )
                })
                .collect(),
            references: vec![],
        },
        "fig6" => {
            let mut curves: Vec<CurveSpec> = [2, 4, 8, 16]
                .iter()
                .map(|&n| {
                    curve(
                        format!("pu2rc_n{n}"),
                        ExperimentConfig::pu2rc(2, n, 5.0, wide_grid(), trials, seed),
                    )
                })
                .collect();
            curves.push(curve(
                "dpc".into(),
                ExperimentConfig::dpc(2, 5.0, wide_grid(), trials, seed),
            ));
            Preset {
                name: "fig6",
                description: "PU2RC vs DPC sum capacity, Nt=2, SNR 5 dB, N in {2, 4, 8, 16}",
                curves,
                references: vec![],
            }
        }
        "fig7" => {
            let base = ExperimentConfig::pu2rc(4, 16, 5.0, wide_grid(), trials, seed);
            let mut curves = vec![curve("pu2rc_perfect".into(), base.clone())];
            for bits in [1, 2, 3] {
                curves.push(curve(
                    format!("pu2rc_sinr{bits}bit"),
                    ExperimentConfig {
                        sinr_feedback_bits: Some(bits),
                        ..base.clone()
                    },
                ));
            }
            Preset {
                name: "fig7",
                description: "effect of scalar SINR feedback quantization, Nt=4, SNR 5 dB, N=16",
                curves,
                references: vec![],
            }
        }
        _ => return None,
    };
    Some(p)
}
