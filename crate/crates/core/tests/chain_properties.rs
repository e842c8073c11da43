use std::sync::Arc;

use proptest::prelude::*;
use raag_core::calculus::{power, roots};
use raag_core::chain::{
    bounds, claim_check, replay, witness_index, ChainConfig, FinalOutcome, StepOutcome,
};
use raag_core::presentation::{standard_graph, GraphPresentation, StandardKind};
use raag_core::words::{normalize, random_word, NormalForm};

fn graphs() -> Vec<Arc<GraphPresentation>> {
    [
        (StandardKind::Free, 2),
        (StandardKind::Abelian, 2),
        (StandardKind::Path, 3),
        (StandardKind::Free, 1),
    ]
    .into_iter()
    .map(|(k, n)| Arc::new(standard_graph(k, n).unwrap()))
    .collect()
}

/// Random configurations over torsion-free graphs. Exponent steps are small
/// so that chains are sometimes solvable for several steps.
fn config() -> impl Strategy<Value = ChainConfig> {
    (
        0..4usize,
        1..5usize,
        any::<u64>(),
        prop::collection::vec(1u64..4, 5),
        1u64..4,
        0usize..4,
    )
        .prop_map(|(gi, n, seed, steps, start, c0_len)| {
            let g = graphs()[gi].clone();
            let mut g_seq = Vec::new();
            let mut s = seed;
            while g_seq.len() < n {
                s = s.wrapping_add(1);
                let x = normalize(&random_word(&g, 1 + (s % 4) as usize, s));
                if !x.is_identity() {
                    g_seq.push(x);
                }
            }
            let mut eta = vec![start];
            for d in &steps[..n - 1] {
                eta.push(eta.last().unwrap() + d);
            }
            let c0 = normalize(&random_word(&g, c0_len, seed ^ 0x5eed));
            ChainConfig::new(g_seq, eta, c0).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tables_are_monotone(cfg in config()) {
        let t = bounds(&cfg);
        prop_assert!(t.f1.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(t.f2.windows(2).all(|w| w[0] < w[1]));
        for (n, g) in cfg.g_seq().iter().enumerate() {
            prop_assert!(t.f1[n] > g.length());
            prop_assert_eq!(t.f2[n + 1], t.f2[n] + t.f1[n]);
        }
        prop_assert_eq!(t.f2[0], cfg.m_star() + 1);
    }

    #[test]
    fn trace_invariants(cfg in config()) {
        let trace = replay(&cfg, cfg.g_seq().len()).unwrap();
        prop_assert!(claim_check(&trace, &bounds(&cfg)).unwrap());
        for (i, step) in trace.steps.iter().enumerate() {
            match step.outcome {
                StepOutcome::Extended | StepOutcome::ForcedIdentity => {
                    let next = step.next.as_ref().unwrap();
                    prop_assert_eq!(&power(next, step.eta as i64), &step.rhs);
                }
                _ => prop_assert!(step.next.is_none()),
            }
            if step.outcome == StepOutcome::ForcedIdentity {
                prop_assert!(step.eta > step.rhs.length());
                prop_assert!(step.next.as_ref().unwrap().is_identity());
            }
            // cascade fidelity: a root of something shorter than eta is e
            if step.eta > step.rhs.length() {
                if let Some(r) = &step.next {
                    prop_assert!(r.is_identity());
                }
            }
            if step.outcome == StepOutcome::Contradiction {
                prop_assert_eq!(trace.steps[i - 1].outcome, StepOutcome::ForcedIdentity);
                prop_assert!(!step.g.is_identity());
                prop_assert!(step.eta > step.g.length());
                let brute = roots(&step.g, step.eta as i64, step.g.length()).unwrap();
                prop_assert!(brute.is_empty());
            }
        }
        if let Some(last) = trace.steps.last() {
            let expected = match last.outcome {
                StepOutcome::Contradiction => FinalOutcome::Contradiction,
                StepOutcome::Unsolvable => FinalOutcome::Unsolvable,
                _ => FinalOutcome::Exhausted,
            };
            prop_assert_eq!(trace.final_outcome, expected);
        }
    }

    #[test]
    fn witness_forces_collapse(cfg in config(), boost in 0u64..3) {
        // lift eta above the tables so a witness exists
        let mut t = bounds(&cfg);
        t.extend_to(cfg.g_seq().len() + 1);
        let eta: Vec<u64> = (0..cfg.g_seq().len()).map(|n| t.f2[n + 2] + 1 + boost).collect();
        let cfg = ChainConfig::new(cfg.g_seq().to_vec(), eta.clone(), cfg.c0().clone()).unwrap();
        let w = witness_index(&eta, &t.f2).unwrap();
        let trace = replay(&cfg, cfg.g_seq().len()).unwrap();
        let collapse = trace
            .steps
            .iter()
            .position(|s| matches!(s.outcome, StepOutcome::ForcedIdentity | StepOutcome::Unsolvable))
            .unwrap();
        prop_assert!(collapse <= w);
        prop_assert!(trace.steps.len() <= w + 2);
        if let Some(at) = trace.steps.get(w) {
            prop_assert!(at.inequalities.star.iter().all(|c| c.holds));
            prop_assert!(at.inequalities.star_star.iter().all(|c| c.holds));
        }
    }
}

#[test]
fn forced_identity_cascade_on_abelian_group() {
    let z2 = Arc::new(standard_graph(StandardKind::Abelian, 2).unwrap());
    let nf = |t: &str| NormalForm::parse(t, &z2).unwrap();
    let cfg = ChainConfig::new(vec![nf("a b"), nf("b^2")], vec![5, 6], nf("b^-1 a^-1")).unwrap();
    let trace = replay(&cfg, 2).unwrap();
    assert_eq!(trace.steps[0].outcome, StepOutcome::ForcedIdentity);
    assert_eq!(trace.steps[1].outcome, StepOutcome::Contradiction);
    assert!(trace.steps[1].inequalities.cascade.iter().all(|c| c.holds));
}
