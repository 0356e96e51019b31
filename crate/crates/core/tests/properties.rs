use netconfound::causal_dag::CausalDag;
use netconfound::dynamics::{contagion_panel, latent_trend_panel, stride_checkpoints, voter_init, voter_run};
use netconfound::inference::{build_asymmetry_design, ols, AsymmetryDesignOptions, DesignMatrix};
use netconfound::network::Direction;
use netconfound::population::{nomination_network, planted_partition_network, sample_latent_uniform};
use netconfound::seed::substream;
use netconfound::{OutcomePanel, SocialNetwork};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nominations_respect_the_cap(n in 2usize..80, k in 1usize..4, seed in any::<u64>()) {
        let mut rng = substream(seed, 0);
        let traits = sample_latent_uniform::<f64, _>(n, &mut rng).unwrap();
        let net = nomination_network(&traits, k, &mut rng).unwrap();
        for i in 0..n {
            prop_assert!(net.out_degree(i) <= k);
            prop_assert!(!net.has_edge(i, i));
        }
    }

    #[test]
    fn exposure_is_linear(n in 2usize..40, seed in any::<u64>(), a in -3.0f64..3.0) {
        let mut rng = substream(seed, 1);
        let traits = sample_latent_uniform::<f64, _>(n, &mut rng).unwrap();
        let net = nomination_network(&traits, 2, &mut rng).unwrap();
        let y: Vec<f64> = traits.latent().to_vec();
        let z: Vec<f64> = y.iter().map(|v| v * v - 0.3).collect();
        let combo: Vec<f64> = y.iter().zip(&z).map(|(u, v)| a * u + v).collect();
        for dir in [Direction::Out, Direction::In] {
            let (ey, ez, ec) = (net.exposure(dir, &y).unwrap(), net.exposure(dir, &z).unwrap(), net.exposure(dir, &combo).unwrap());
            for i in 0..n {
                prop_assert!((ec[i] - (a * ey[i] + ez[i])).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ols_residuals_are_orthogonal(seed in any::<u64>()) {
        let mut rng = substream(seed, 2);
        let traits = sample_latent_uniform::<f64, _>(60, &mut rng).unwrap();
        let net = nomination_network(&traits, 1, &mut rng).unwrap();
        let panel = latent_trend_panel(&traits, 0.02, 0.4, &mut rng).unwrap();
        let (x, y) = build_asymmetry_design(&net, &panel, AsymmetryDesignOptions::default()).unwrap();
        if let Ok(fit) = ols(&x, &y) {
            let r = fit.residuals.as_ref().unwrap();
            for j in 0..x.cols() {
                let dot: f64 = x.column(j).iter().zip(r).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() < 1e-8, "column {} dot {}", j, dot);
            }
        }
    }

    #[test]
    fn voter_states_stay_binary(seed in any::<u64>(), flip in 0.0f64..0.4) {
        let mut rng = substream(seed, 3);
        let (_, net) = planted_partition_network::<f64, _>(30, 0.3, 0.05, &mut rng).unwrap();
        let p: OutcomePanel = voter_run(&net, &voter_init(30, &mut rng), 300, flip, &stride_checkpoints(300, 60), &mut rng).unwrap();
        prop_assert_eq!(p.times(), &[0, 60, 120, 180, 240, 300]);
        prop_assert!(p.slices().iter().flatten().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn d_separation_is_symmetric(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = substream(seed, 4);
        let n = rng.random_range(2..10);
        let names: Vec<String> = (0..n).map(|k| format!("n{k}")).collect();
        let mut b = CausalDag::builder();
        for name in &names {
            b = b.observed(name);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(0.35) {
                    b = b.edge(&names[i], &names[j]);
                }
            }
        }
        let dag = b.build().unwrap();
        let cond: Vec<&str> = names[2..].iter().filter(|_| rng.random_bool(0.4)).map(String::as_str).collect();
        prop_assert_eq!(
            dag.d_separated(&names[0], &names[1], &cond).unwrap(),
            dag.d_separated(&names[1], &names[0], &cond).unwrap()
        );
    }
}

#[test]
fn contagion_without_edges_is_a_random_walk() {
    let net = SocialNetwork::empty(5).unwrap();
    let a: OutcomePanel = contagion_panel(&net, 0.9, 4, 1.0, &mut substream(1, 0)).unwrap();
    let b: OutcomePanel = contagion_panel(&net, 0.0, 4, 1.0, &mut substream(1, 0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn design_matrix_shapes() {
    let x = DesignMatrix::from_columns(true, vec![("a".into(), vec![1.0, 2.0, 3.0])]).unwrap();
    assert_eq!((x.rows(), x.cols()), (3, 2));
    assert!(DesignMatrix::from_columns(true, vec![("a".into(), vec![1.0]), ("b".into(), vec![1.0, 2.0])]).is_err());
}
