mod common;

use proptest::prelude::*;
use rand::Rng;
use tweetmine::features::{Scheme, SparseVector};
use tweetmine::ingest::Label;
use tweetmine::models::{
    evaluate, lasso_sweep, top_coefficients, train_lasso, train_logreg, train_nb, ConfusionMatrix2, LinearModel,
    LogisticObjective, Regularization, SolverOptions, TrainedModel,
};
use tweetmine::{Diagnostics, Error, ErrorClass};

const TOL: f64 = 1e-8;

fn labels(n_topic: usize, n_control: usize) -> Vec<Label> {
    std::iter::repeat_n(Label::Topic, n_topic).chain(std::iter::repeat_n(Label::Control, n_control)).collect()
}

#[test]
fn balanced_prior_is_half() {
    let ds = common::dataset_from_dense(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![0.0, 1.0]], &labels(2, 2), Scheme::Count);
    let m = train_nb(&ds, 1.0).unwrap();
    for lp in m.log_prior {
        assert!((lp - 0.5f64.ln()).abs() < 1e-15);
    }
}

#[test]
fn hand_computed_likelihood() {
    let ds = common::dataset_from_dense(&[vec![9.0, 1.0], vec![1.0, 9.0]], &labels(1, 1), Scheme::Count);
    let m = train_nb(&ds, 1.0).unwrap();
    let p = m.log_likelihood[Label::Topic.index()][0].exp();
    assert!((p - 10.0 / 12.0).abs() < 1e-15);
    for c in 0..2 {
        let s: f64 = m.log_likelihood[c].iter().map(|l| l.exp()).sum();
        assert!((s - 1.0).abs() < 1e-9);
    }
    let pri: f64 = m.log_prior.iter().map(|l| l.exp()).sum();
    assert!((pri - 1.0).abs() < 1e-12);
}

#[test]
fn single_class_is_degenerate() {
    let ds = common::dataset_from_dense(&[vec![1.0], vec![2.0]], &labels(2, 0), Scheme::Count);
    assert!(matches!(train_nb(&ds, 1.0), Err(Error::DegenerateTraining(_))));
    assert!(train_logreg(&ds, 1.0, TOL).is_err());
}

#[test]
fn nb_labels_match_direct_map_rule() {
    let mut g = common::rng(1);
    let dim = 12;
    let rows: Vec<Vec<f64>> = (0..80)
        .map(|i| (0..dim).map(|j| if (j < 6) == (i % 2 == 0) { g.gen_range(0..4) as f64 } else { g.gen_range(0..2) as f64 }).collect())
        .collect();
    let lab: Vec<Label> = (0..80).map(|i| if i % 2 == 0 { Label::Topic } else { Label::Control }).collect();
    let ds = common::dataset_from_dense(&rows, &lab, Scheme::Count);
    let m = train_nb(&ds, 1.0).unwrap();
    let prior = [40.0 / 80.0, 40.0 / 80.0];
    let mut theta = [vec![0.0; dim], vec![0.0; dim]];
    for c in 0..2 {
        let mut cnt = vec![1.0; dim];
        for (r, l) in rows.iter().zip(&lab) {
            if l.index() == c {
                (0..dim).for_each(|j| cnt[j] += r[j]);
            }
        }
        let tot: f64 = cnt.iter().sum();
        (0..dim).for_each(|j| theta[c][j] = cnt[j] / tot);
    }
    for _ in 0..100 {
        let x: Vec<f64> = (0..dim).map(|_| g.gen_range(0..3) as f64).collect();
        let joint: Vec<f64> = (0..2).map(|c| (0..dim).fold(prior[c], |p, j| p * theta[c][j].powf(x[j]))).collect();
        let want = if joint[1] > joint[0] { Label::Topic } else { Label::Control };
        let sv = SparseVector::new(Scheme::Count, (0..dim).filter(|&j| x[j] > 0.0).map(|j| (j, x[j])).collect());
        assert_eq!(m.predict(&sv).unwrap().0, want);
    }
}

#[test]
fn equal_likelihoods_predict_prior_argmax() {
    let ds = common::dataset_from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]], &labels(1, 2), Scheme::Count);
    let m = train_nb(&ds, 1.0).unwrap();
    let x = SparseVector::new(Scheme::Count, vec![(0, 3.0), (1, 1.0)]);
    assert_eq!(m.predict(&x).unwrap().0, Label::Control);
}

#[test]
fn unit_weight_predicts_topic() {
    let m = LinearModel {
        weights: vec![1.0],
        bias: 0.0,
        reg: Regularization::L2 { c: 1.0 },
        diagnostics: Diagnostics { final_objective: 0.0, iterations: 0, violation: 0.0 },
        nnz: 1,
        vocab_hash: String::new(),
    };
    assert_eq!(m.predict(&SparseVector::new(Scheme::Binary, vec![(0, 1.0)])).unwrap().0, Label::Topic);
    assert_eq!(m.predict(&SparseVector::new(Scheme::Binary, vec![])).unwrap().0, Label::Control);
    let e = m.predict(&SparseVector::new(Scheme::Binary, vec![(3, 1.0)])).unwrap_err();
    assert_eq!(e.class(), ErrorClass::Data);
}

#[test]
fn separable_line_gets_positive_weight() {
    let ds = common::dataset_from_dense(&[vec![1.0], vec![1.0], vec![-1.0], vec![-1.0]], &labels(2, 2), Scheme::Count);
    let m = train_logreg(&ds, 1.0, TOL).unwrap();
    assert!(m.weights[0] > 0.0);
    assert!(m.diagnostics.violation <= TOL);
}

#[test]
fn doubling_c_never_increases_loss() {
    let ds = common::noisy_logistic(300, 10, 2);
    let mut prev = f64::INFINITY;
    for k in 0..8 {
        let c = 0.05 * 2f64.powi(k);
        let m = train_logreg(&ds, c, TOL).unwrap();
        let loss = LogisticObjective::new(&ds, Regularization::L2 { c: 1.0 }).loss(&m.weights, m.bias).unwrap();
        assert!(loss <= prev + 1e-9, "C={c}: {loss} > {prev}");
        prev = loss;
    }
}

#[test]
fn objective_is_convex_along_random_chords() {
    let ds = common::noisy_logistic(100, 6, 3);
    let mut g = common::rng(4);
    for reg in [Regularization::L2 { c: 1.5 }, Regularization::L1 { c: 1.0, lambda: 0.3 }] {
        let obj = LogisticObjective::new(&ds, reg);
        for _ in 0..200 {
            let w1: Vec<f64> = (0..6).map(|_| g.gen_range(-5.0..5.0)).collect();
            let w2: Vec<f64> = (0..6).map(|_| g.gen_range(-5.0..5.0)).collect();
            let (b1, b2) = (g.gen_range(-3.0..3.0), g.gen_range(-3.0..3.0));
            let mid: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| (a + b) / 2.0).collect();
            let lhs = obj.value(&mid, (b1 + b2) / 2.0).unwrap();
            let rhs = (obj.value(&w1, b1).unwrap() + obj.value(&w2, b2).unwrap()) / 2.0;
            assert!(lhs <= rhs + 1e-9);
        }
    }
}

#[test]
fn lasso_beats_zero_and_huge_lambda_zeroes() {
    let ds = common::noisy_logistic(200, 15, 5);
    let m = train_lasso(&ds, 0.5, TOL).unwrap();
    let obj = LogisticObjective::new(&ds, m.reg);
    assert!(obj.value(&m.weights, m.bias).unwrap() <= obj.value(&[0.0; 15], 0.0).unwrap());
    let z = train_lasso(&ds, 1e6, TOL).unwrap();
    assert!(z.weights.iter().all(|w| *w == 0.0));
    assert_eq!(z.nnz, 0);
}

#[test]
fn nonconvergence_carries_diagnostics() {
    let ds = common::noisy_logistic(100, 5, 6);
    let opts = SolverOptions { tol: 1e-14, max_passes: 1, fit_bias: true };
    match tweetmine::models::train_linear(&ds, Regularization::L2 { c: 1.0 }, &opts) {
        Err(Error::NonConvergence(d)) => {
            assert_eq!(d.iterations, 1);
            assert!(d.violation > 1e-14 && d.final_objective.is_finite());
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn perfect_and_constant_classifier_rates() {
    let mut perfect = ConfusionMatrix2::default();
    for _ in 0..10 {
        perfect.record(Label::Control, Label::Control);
        perfect.record(Label::Topic, Label::Topic);
    }
    assert_eq!(perfect.rates(), [[1.0, 0.0], [0.0, 1.0]]);
    let constant = ConfusionMatrix2::from_pairs((0..20).map(|i| (if i < 10 { Label::Control } else { Label::Topic }, Label::Topic)));
    assert_eq!(constant.rates(), [[0.0, 1.0], [0.0, 1.0]]);
}

#[test]
fn confusion_counts_match_recount() {
    let mut g = common::rng(7);
    let pairs: Vec<(Label, Label)> = (0..1000)
        .map(|_| {
            let t = if g.gen_bool(0.4) { Label::Topic } else { Label::Control };
            let p = if g.gen_bool(0.7) { t } else if t == Label::Topic { Label::Control } else { Label::Topic };
            (t, p)
        })
        .collect();
    let m = ConfusionMatrix2::from_pairs(pairs.iter().copied());
    for t in [Label::Control, Label::Topic] {
        for p in [Label::Control, Label::Topic] {
            let n = pairs.iter().filter(|x| **x == (t, p)).count() as u64;
            assert_eq!(m.counts[t.index()][p.index()], n);
        }
        let r = m.rates()[t.index()];
        assert!((r[0] + r[1] - 1.0).abs() <= 1e-9);
    }
    assert_eq!(m.total(), 1000);
}

#[test]
fn evaluate_checks_inputs() {
    let ds = common::noisy_logistic(60, 4, 8);
    let model: TrainedModel<f64> = train_nb(&ds, 1.0).unwrap().into();
    let m = evaluate(&model, &ds).unwrap();
    assert_eq!(m.total(), 60);
    let empty = common::dataset_from_dense(&[], &[], Scheme::Count);
    assert!(evaluate(&model, &empty).is_err());
    let other = common::noisy_logistic(60, 5, 8);
    assert!(matches!(evaluate(&model, &other), Err(Error::VocabMismatch { .. })));
}

#[test]
fn models_round_trip_through_json() {
    let ds = common::noisy_logistic(80, 5, 9);
    let models: [TrainedModel<f64>; 3] = [
        train_nb(&ds, 1.0).unwrap().into(),
        train_logreg(&ds, 1.0, TOL).unwrap().into(),
        train_lasso(&ds, 0.1, TOL).unwrap().into(),
    ];
    for m in models {
        let text = serde_json::to_string(&m).unwrap();
        let back: TrainedModel<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}

#[test]
fn sweep_and_top_coefficients() {
    let train = common::noisy_logistic(400, 20, 10);
    let test = common::noisy_logistic(400, 20, 11);
    let lambdas = [0.01, 0.1, 1.0, 10.0, 100.0];
    let sweep = lasso_sweep(&train, &test, &lambdas, 1.0, &SolverOptions::default()).unwrap();
    let nnz: Vec<usize> = sweep.iter().map(|(p, _)| p.nnz).collect();
    assert!(nnz.windows(2).all(|w| w[1] <= w[0]), "{nnz:?}");
    let (_, m) = &sweep[1];
    let top = top_coefficients(m, &train.vocab, 5).unwrap();
    assert!(top.len() <= 5);
    assert!(top.windows(2).all(|w| w[0].1.abs() >= w[1].1.abs()));
    for (term, w) in &top {
        assert_eq!(m.weights[train.vocab.index_of(term).unwrap()], *w);
    }
}

proptest! {
    #[test]
    fn nb_label_is_scale_consistent(x in prop::collection::vec(0u8..4, 6), k in 0.01f64..100.0) {
        let ds = common::noisy_logistic(50, 6, 12);
        let m = train_nb(&ds, 1.0).unwrap();
        let sv = SparseVector::new(Scheme::Count, x.iter().enumerate().filter(|e| *e.1 > 0).map(|(i, &v)| (i, v as f64)).collect());
        let [c, t] = m.joint_log_scores(&sv).unwrap();
        // Multiplying both unnormalized scores by k adds ln k to each log score.
        let scaled = if t + k.ln() > c + k.ln() { Label::Topic } else { Label::Control };
        prop_assert_eq!(m.predict(&sv).unwrap().0, scaled);
    }
}
