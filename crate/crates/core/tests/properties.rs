use num_complex::Complex64;
use proptest::prelude::*;
use pu2rc::baselines::{dpc_objective, zf_schedule_and_rate, ZfConfig};
use pu2rc::feedback::{
    decompose, quantize_shape, sinr, Codebook, FeedbackReport, Regime, SinrQuantizer,
};
use pu2rc::montecarlo::{Algorithm, Experiment, ExperimentConfig};
use pu2rc::numkernel::{
    inner_product, sample_gaussian_vec, sample_haar_basis, sample_unit_vec, RandomStream,
};
use pu2rc::scheduler::{associate, schedule};
use rand::Rng;

fn reports_for(
    seed: u64,
    n_t: usize,
    m: usize,
    users: usize,
    gamma: f64,
) -> (
    Vec<FeedbackReport>,
    Codebook,
    Vec<pu2rc::feedback::ChannelRealization>,
) {
    let mut rng = RandomStream::new(seed, 0).rng();
    let codebook = Codebook::random_multi_basis(&mut rng, n_t, m).unwrap();
    let chans: Vec<_> = (0..users)
        .map(|_| decompose(sample_gaussian_vec(&mut rng, n_t).unwrap()).unwrap())
        .collect();
    let reports = chans
        .iter()
        .enumerate()
        .map(|(u, ch)| {
            let q = quantize_shape(ch.shape(), &codebook).unwrap();
            FeedbackReport::new(u, q, sinr(gamma, ch.power(), q.quant_error, Regime::Normal))
        })
        .collect();
    (reports, codebook, chans)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn haar_basis_is_orthonormal(seed in any::<u64>(), dim in 1usize..=8) {
        let basis = sample_haar_basis(&mut RandomStream::new(seed, 0).rng(), dim).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let g = inner_product(&basis[i], &basis[j]).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - Complex64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn same_stream_same_samples(seed in any::<u64>(), id in any::<u64>()) {
        let a = sample_gaussian_vec(&mut RandomStream::new(seed, id).rng(), 5).unwrap();
        let b = sample_gaussian_vec(&mut RandomStream::new(seed, id).rng(), 5).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn decompose_reconstructs(seed in any::<u64>(), dim in 1usize..=8) {
        let h = sample_gaussian_vec(&mut RandomStream::new(seed, 0).rng(), dim).unwrap();
        let ch = decompose(h.clone()).unwrap();
        prop_assert!((ch.shape().norm() - 1.0).abs() < 1e-12);
        prop_assert!((ch.power() - ch.gain() * ch.gain()).abs() < 1e-12 * ch.power().max(1.0));
        for i in 0..dim {
            prop_assert!((ch.shape()[i] * ch.gain() - h[i]).norm() < 1e-12 * ch.gain().max(1.0));
        }
    }

    #[test]
    fn quantizer_picks_minimum_distortion(seed in any::<u64>(), n_t in 2usize..=4, m in 1usize..=4, theta in 0.0f64..std::f64::consts::TAU) {
        let mut rng = RandomStream::new(seed, 0).rng();
        let cb = Codebook::random_multi_basis(&mut rng, n_t, m).unwrap();
        let s = sample_unit_vec(&mut rng, n_t).unwrap();
        let q = quantize_shape(&s, &cb).unwrap();
        let d = |v| 1.0 - inner_product(v, &s).unwrap().norm_sqr();
        prop_assert!((q.quant_error - d(&cb.vectors()[q.codeword_index])).abs() < 1e-12);
        for v in cb.vectors() {
            prop_assert!(q.quant_error <= d(v) + 1e-15);
        }
        // a global phase on the shape changes nothing
        let rotated = s.scale(Complex64::from_polar(1.0, theta));
        let qr = quantize_shape(&rotated, &cb).unwrap();
        prop_assert!((qr.quant_error - q.quant_error).abs() < 1e-12);
    }

    #[test]
    fn normal_sinr_decreases_in_error(gr in 1e-3f64..1e3, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        prop_assume!((e1 - e2).abs() > 1e-9);
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(sinr(gr, 1.0, lo, Regime::Normal) > sinr(gr, 1.0, hi, Regime::Normal));
    }

    #[test]
    fn feedback_sinr_equals_received_signal_model(seed in any::<u64>(), n_t in 2usize..=4, gamma in 0.1f64..100.0) {
        let mut rng = RandomStream::new(seed, 0).rng();
        let basis = sample_haar_basis(&mut rng, n_t).unwrap();
        let cb = Codebook::multi_basis(vec![basis.clone()]).unwrap();
        let ch = decompose(sample_gaussian_vec(&mut rng, n_t).unwrap()).unwrap();
        let q = quantize_shape(ch.shape(), &cb).unwrap();
        let gains: Vec<f64> = basis.iter().map(|w| inner_product(ch.channel(), w).unwrap().norm_sqr()).collect();
        let k = q.codeword_index;
        let interference: f64 = gains.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g).sum();
        let direct = gamma * gains[k] / (1.0 + gamma * interference);
        let fed_back = sinr(gamma, ch.power(), q.quant_error, Regime::Normal);
        prop_assert!((direct - fed_back).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn schedule_invariants(seed in any::<u64>(), n_t in 1usize..=4, m in 1usize..=4, users in 1usize..=20) {
        let (reports, cb, _) = reports_for(seed, n_t, m, users, 3.0);
        let groups = associate(&reports, &cb).unwrap();
        let mut seen = vec![0; users];
        for g in &groups {
            for &u in g {
                seen[u] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));

        let d = schedule(&reports, &cb).unwrap();
        prop_assert_eq!(d.assignments.len(), n_t);
        let served: Vec<usize> = d.scheduled().map(|(_, u)| u).collect();
        let mut dedup = served.clone();
        dedup.sort_unstable();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), served.len());
        for (n, a) in d.assignments.iter().enumerate() {
            match a {
                None => prop_assert_eq!(d.beam_sinrs[n], 0.0),
                Some(u) => {
                    prop_assert_eq!(reports[*u].codeword_index, cb.flat_index(d.basis_index, n));
                    prop_assert_eq!(d.beam_sinrs[n], reports[*u].sinr);
                }
            }
        }
    }

    #[test]
    fn adding_a_user_never_lowers_the_objective(seed in any::<u64>(), n_t in 2usize..=4, m in 1usize..=4, users in 1usize..=15) {
        let (reports, cb, _) = reports_for(seed, n_t, m, users + 1, 3.0);
        let before = schedule(&reports[..users], &cb).unwrap();
        let after = schedule(&reports, &cb).unwrap();
        prop_assert!(after.sum_rate >= before.sum_rate);
    }

    #[test]
    fn common_sinr_scaling_keeps_per_beam_winners(seed in any::<u64>(), n_t in 2usize..=4, m in 1usize..=4, users in 1usize..=15, c in 0.01f64..100.0) {
        let (reports, cb, _) = reports_for(seed, n_t, m, users, 3.0);
        let scaled: Vec<FeedbackReport> = reports.iter().map(|r| FeedbackReport { sinr: r.sinr * c, ..*r }).collect();
        let winners = |rs: &[FeedbackReport]| -> Vec<Option<usize>> {
            associate(rs, &cb).unwrap().iter().map(|g| {
                g.iter().copied().fold(None, |best: Option<usize>, u| match best {
                    Some(b) if rs[b].sinr >= rs[u].sinr => Some(b),
                    _ => Some(u),
                })
            }).collect()
        };
        prop_assert_eq!(winners(&reports), winners(&scaled));
    }

    #[test]
    fn single_basis_assignments_ignore_common_scaling(seed in any::<u64>(), n_t in 2usize..=4, users in 1usize..=15, c in 0.01f64..100.0) {
        let (reports, cb, _) = reports_for(seed, n_t, 1, users, 3.0);
        let scaled: Vec<FeedbackReport> = reports.iter().map(|r| FeedbackReport { sinr: r.sinr * c, ..*r }).collect();
        prop_assert_eq!(schedule(&reports, &cb).unwrap().assignments, schedule(&scaled, &cb).unwrap().assignments);
    }

    #[test]
    fn zf_selection_invariants(seed in any::<u64>(), n_t in 2usize..=4, users in 1usize..=20, bits in 1u32..=6) {
        let mut rng = RandomStream::new(seed, 0).rng();
        let chans: Vec<_> = (0..users).map(|_| decompose(sample_gaussian_vec(&mut rng, n_t).unwrap()).unwrap()).collect();
        let cfg = ZfConfig::new(bits, 3.0);
        let out = zf_schedule_and_rate(&chans, &cfg, &mut rng).unwrap();
        prop_assert!(!out.selected.is_empty());
        prop_assert!(out.selected.len() <= n_t);
        for i in 0..out.directions.len() {
            prop_assert!((out.beams[i].norm() - 1.0).abs() < 1e-10);
            for j in 0..out.directions.len() {
                if i != j {
                    let corr = inner_product(&out.directions[i], &out.directions[j]).unwrap().norm_sqr();
                    prop_assert!(corr <= cfg.ortho_threshold);
                    prop_assert!(inner_product(&out.directions[i], &out.beams[j]).unwrap().norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn dpc_objective_grows_with_power(seed in any::<u64>(), users in 1usize..=5, scale in 1.0f64..4.0) {
        let mut rng = RandomStream::new(seed, 0).rng();
        let chans: Vec<_> = (0..users).map(|_| decompose(sample_gaussian_vec(&mut rng, 3).unwrap()).unwrap()).collect();
        let p: Vec<f64> = (0..users).map(|_| rng.random_range(0.0..2.0)).collect();
        let q: Vec<f64> = p.iter().map(|x| x * scale).collect();
        prop_assert!(dpc_objective(&chans, &q) >= dpc_objective(&chans, &p) - 1e-12);
    }

    #[test]
    fn sinr_quantizer_levels_are_even(bits in 1u32..=8, top in 1e-3f64..1e3, x in 0.0f64..2e3) {
        let q = SinrQuantizer::evenly_spaced(bits, top).unwrap();
        let l = q.levels();
        prop_assert_eq!(l.len(), 1usize << bits);
        let step = l[1] - l[0];
        for w in l.windows(2) {
            prop_assert!(w[1] > w[0]);
            prop_assert!(((w[1] - w[0]) - step).abs() < 1e-9 * top);
        }
        let y = q.quantize(x);
        prop_assert!(l.iter().all(|&v| (x - y).powi(2) <= (x - v).powi(2)));
    }
}

#[test]
fn interference_limited_is_the_high_snr_limit() {
    let normal = sinr(1e6, 1.0, 0.1, Regime::Normal);
    let limit = sinr(1e6, 1.0, 0.1, Regime::InterferenceLimited);
    assert!((normal - limit).abs() / limit < 1e-4);
}

fn small(cfg: ExperimentConfig) -> Vec<pu2rc::montecarlo::CurvePoint> {
    Experiment::new(cfg).unwrap().run().unwrap()
}

#[test]
fn curves_grow_with_users_and_respect_beam_count() {
    let grid = vec![1, 2, 4, 8, 16, 32];
    let configs = [
        ExperimentConfig::pu2rc(2, 16, 5.0, grid.clone(), 300, 3),
        ExperimentConfig::pu2rc(4, 64, 5.0, grid.clone(), 300, 3),
        ExperimentConfig::zf_sdma(4, 16, 5.0, grid.clone(), 300, 3),
        ExperimentConfig::dpc(2, 5.0, grid.clone(), 300, 3),
    ];
    for cfg in configs {
        let n_t = cfg.n_t as f64;
        let algorithm = cfg.algorithm;
        let pts = small(cfg);
        for p in &pts {
            assert!(p.mean >= 0.0 && p.stderr >= 0.0);
            // dual-channel power may spread over more than n_t users
            if algorithm != Algorithm::Dpc {
                assert!(p.mean_scheduled <= n_t);
            }
        }
        for w in pts.windows(2) {
            let tol = 2.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
            assert!(
                w[1].mean >= w[0].mean - tol,
                "{algorithm:?}: throughput drops at U={}",
                w[1].users
            );
            if algorithm != Algorithm::Dpc {
                assert!(
                    w[1].mean_scheduled >= w[0].mean_scheduled - 0.2,
                    "{algorithm:?}: fewer users at U={}",
                    w[1].users
                );
            }
        }
    }
}

#[test]
fn dpc_curve_dominates_pointwise() {
    let grid = vec![1, 4, 16, 64];
    let dpc = small(ExperimentConfig::dpc(4, 5.0, grid.clone(), 200, 9));
    for other in [
        small(ExperimentConfig::pu2rc(4, 16, 5.0, grid.clone(), 200, 9)),
        small(ExperimentConfig::zf_sdma(4, 16, 5.0, grid.clone(), 200, 9)),
    ] {
        for (d, o) in dpc.iter().zip(&other) {
            assert!(d.mean >= o.mean - 2.0 * (d.stderr.powi(2) + o.stderr.powi(2)).sqrt());
        }
    }
}

#[test]
fn engine_output_is_a_pure_function_of_config() {
    let cfg = ExperimentConfig::zf_sdma(3, 8, 5.0, vec![2, 7], 40, 17);
    assert_eq!(small(cfg.clone()), small(cfg));
}

#[test]
fn scheduled_users_approach_beam_count() {
    let p = Experiment::new(ExperimentConfig::pu2rc(4, 16, 5.0, vec![200], 1000, 5))
        .unwrap()
        .point(200)
        .unwrap();
    assert!(
        p.mean_scheduled > 3.5 && p.mean_scheduled <= 4.0,
        "{}",
        p.mean_scheduled
    );
}
