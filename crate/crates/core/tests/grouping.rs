mod common;

use std::collections::BTreeMap;

use common::{werewolf_roles, full_corpus, small_corpus};
use secgroup::oracle::{
    audit_transcript, card_count, collect_trials, conditional_uniformity_test,
    enumerate_valid_groupings, enumerate_valid_permutations, fiber_report,
    transcript_independence_test, uniformity_test,
};
use secgroup::{
    grouping_of_permutation, parse_constraint_file, precompute_tau_general, run_seeded,
    Constraint, Error, Grouping, RunMode, Significance,
};

#[test]
fn tau_precomputation_satisfies_every_corpus_constraint() {
    for c in full_corpus() {
        let pre = precompute_tau_general(&c).unwrap();
        assert!(
            secgroup::permutation_satisfies_constraint(&pre.tau, &c),
            "{c}: {}",
            pre.tau
        );
    }
}

#[test]
fn oracles_agree_on_the_image() {
    for c in small_corpus() {
        let perms = enumerate_valid_permutations(&c).unwrap();
        let mut image: Vec<Grouping> = perms.iter().map(grouping_of_permutation).collect();
        image.sort();
        image.dedup();
        assert_eq!(image, enumerate_valid_groupings(&c).unwrap(), "{c}");
    }
}

#[test]
fn fibers_are_equal_across_the_corpus() {
    for c in small_corpus() {
        let r = fiber_report(&c).unwrap();
        assert!(r.fibers_equal() && r.support_matches, "{}", r.render());
        if c.has_sets() {
            continue;
        }
        // each fiber holds (k-1)! cyclic orders per group of size k
        let expect: usize = c
            .sizes()
            .iter()
            .map(|(&k, &m)| (1..k).product::<usize>().pow(m as u32))
            .product();
        assert_eq!(r.fiber_size(), Some(expect), "{c}");
    }
}

#[test]
fn runs_are_uniform_over_valid_groupings() {
    let cases = [
        Constraint::from_tuple(4, &[0, 2]),
        Constraint::from_tuple(5, &[1, 2]),
        Constraint::from_tuple(5, &[0, 1, 1]).with_set(3, vec![4, 5]),
        Constraint::from_tuple(6, &[1, 1, 1]).with_set(2, vec![5]).with_set(3, vec![6]),
        Constraint::from_tuple(6, &[0, 0, 2]).with_set(3, vec![1]).with_set(3, vec![2]),
    ];
    for (i, c) in cases.iter().enumerate() {
        let cells = enumerate_valid_groupings(c).unwrap().len();
        let trials = collect_trials(c, 100 + i as u64, 500 * cells).unwrap();
        let samples: Vec<Grouping> = trials.into_iter().map(|t| t.grouping).collect();
        let res = uniformity_test(&samples, c, Significance::P001).unwrap();
        assert_eq!(res.cells, cells);
        assert!(res.pass, "{c}\n{}", res.stanza("uniformity"));
    }
}

#[test]
fn views_alone_reconstruct_the_grouping() {
    for c in full_corpus() {
        for seed in 0..5 {
            let run = run_seeded(&c, seed, RunMode::Verify).unwrap();
            let from_views = Grouping::from_views(&run.views).unwrap();
            assert_eq!(from_views, run.verification.unwrap().grouping);
            assert!(run.views.iter().all(|v| v.group.len() <= c.max_group_size()));
        }
    }
}

#[test]
fn transcripts_never_carry_hidden_values() {
    for c in full_corpus() {
        for seed in 0..10 {
            let run = run_seeded(&c, seed, RunMode::Verify).unwrap();
            let v = run.verification.as_ref().unwrap();
            audit_transcript(&run.transcript, &v.secret_log, &[], c.n()).unwrap();
            let text = run.transcript.to_string();
            assert!(!text.contains("SECRET"));
            assert_eq!(run.transcript.cards_used(), card_count(&c).unwrap().cards);
        }
    }
}

#[test]
fn audit_rejects_a_doctored_transcript() {
    let c = Constraint::from_tuple(4, &[0, 2]);
    let run = run_seeded(&c, 3, RunMode::Verify).unwrap();
    let v = run.verification.unwrap();
    let text = run.transcript.to_string();
    let open = text.lines().find(|l| l.starts_with("OPEN")).unwrap();
    let doctored = text.replace(open, "OPEN row=1 values=1,2,3,4");
    let doctored = if doctored == text {
        text.replace(open, "OPEN row=1 values=4,3,2,1")
    } else {
        doctored
    };
    let t = doctored.parse().unwrap();
    assert!(matches!(
        audit_transcript(&t, &v.secret_log, &[], 4),
        Err(Error::ReplayDiverged(_))
    ));
}

#[test]
fn two_pairs_leak_nothing_about_the_other_pair() {
    // with n=4 the other pair is the complement of the observer's own
    let c = Constraint::from_tuple(4, &[0, 2]);
    let trials = collect_trials(&c, 8, 3_000).unwrap();
    let res = conditional_uniformity_test(&trials, &c, 1, Significance::P001);
    assert!(matches!(res, Err(Error::InsufficientSamples(_))));
    let mut by_partner: BTreeMap<Vec<usize>, Vec<String>> = BTreeMap::new();
    for t in &trials {
        by_partner
            .entry(t.views[0].partners())
            .or_default()
            .push(t.grouping.rest_key(1));
    }
    for rests in by_partner.values() {
        assert!(rests.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn biased_grouping_samples_fail_conditional_uniformity() {
    let c = Constraint::from_tuple(6, &[0, 3]);
    let mut trials = collect_trials(&c, 9, 6_000).unwrap();
    // keep only runs where 3 and 4 are paired, unless 1 sits with 3 or 4
    trials.retain(|t| {
        let g = t.grouping.group_of(3).unwrap();
        g.contains(&4) || g.contains(&1)
    });
    let res = conditional_uniformity_test(&trials, &c, 1, Significance::P001).unwrap();
    assert!(!res.pass);
}

#[test]
fn conditional_and_transcript_tests_pass_on_honest_runs() {
    let c = Constraint::from_tuple(6, &[0, 3]);
    let trials = collect_trials(&c, 10, 6_000).unwrap();
    let cond = conditional_uniformity_test(&trials, &c, 1, Significance::P001).unwrap();
    assert!(cond.pass, "{}", cond.stanza("conditional"));
    let ind = transcript_independence_test(&trials, &c, 1, Significance::P001).unwrap();
    assert!(ind.pass, "{}", ind.stanza("independence"));
}

#[test]
fn role_file_names_roles() {
    let f = parse_constraint_file(
        "n = 9\nM = (2,2,1)\nC[2] = {8}\nC[3] = {9}\ndummy = 8,9\nname[8] = Role B\nname[9] = Role C\n",
    )
    .unwrap();
    assert_eq!(f.constraint, werewolf_roles());
    for seed in 0..20 {
        let run = run_seeded(&f.constraint, seed, RunMode::Strict).unwrap();
        let with = |d: usize| {
            f.players()
                .into_iter()
                .filter(|&p| run.view(p).unwrap().group.contains(&d))
                .count()
        };
        assert_eq!((with(8), with(9)), (1, 2));
    }
}

#[test]
fn card_count_is_within_three_dn() {
    for c in full_corpus() {
        let cc = card_count(&c).unwrap();
        assert!(cc.within_bound(), "{c}");
        assert_eq!(cc.cards, 2 * (cc.max_group_size.max(1) - 1) * c.n());
    }
}
