use fimreg::campaign::{compare_oracle, run_campaign, CampaignConfig, CAMPAIGNS};
use fimreg::checks::CheckViolation;
use fimreg::fim::MultiIndex;
use fimreg::Error;

fn cfg(campaign: &str, m: usize, dr: (i64, i64), top: usize, count: usize) -> CampaignConfig {
    CampaignConfig::new(campaign, m, dr.0, dr.1, top, 2, count, 40)
}

#[test]
fn reports_are_reproducible() {
    for name in ["four-term", "ce-m1", "lift-strategies"] {
        let c = cfg(name, 1, (1, 2), 4, 5);
        let a = run_campaign(&c).unwrap();
        let b = run_campaign(&c).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
        let seeds: Vec<u64> = a.instances.iter().map(|i| i.seed).collect();
        assert_eq!(seeds, (0..5).map(|k| c.instance_seed(k)).collect::<Vec<_>>());
        assert_eq!(seeds, (40..45).collect::<Vec<_>>());
        assert!(!a.to_json().contains("time"));
    }
}

#[test]
fn every_campaign_runs_clean_on_a_small_window() {
    for name in CAMPAIGNS {
        let m = if ["ce-m1"].contains(name) { 1 } else { 2 };
        let dr = if *name == "kv-bounds" { (0, 0) } else { (1, 2) };
        let report = run_campaign(&cfg(name, m, dr, 3, 2)).unwrap();
        assert_ne!(report.verdict, "fail", "{name}");
        assert_eq!(report.summary.skipped, 0, "{name}");
    }
}

#[test]
fn vacuity_is_flagged_not_passed() {
    let r = run_campaign(&cfg("main-bound", 2, (1, 1), 5, 2)).unwrap();
    assert_eq!(r.vacuous, Some(true));
    assert_eq!(r.verdict, "vacuous");
    assert!(r.passed());
    let r = run_campaign(&cfg("ce-m1", 1, (1, 1), 5, 2)).unwrap();
    assert_eq!(r.vacuous, Some(false));
    assert_eq!(r.verdict, "pass");
    let r = run_campaign(&cfg("kv-bounds", 2, (2, 2), 5, 1)).unwrap();
    assert_eq!(r.vacuous, Some(true));
}

#[test]
fn violations_name_seed_degree_index_and_both_sides() {
    let mut report = run_campaign(&cfg("four-term", 2, (1, 2), 3, 2)).unwrap();
    let inst = &mut report.instances[1];
    let seed = inst.seed;
    inst.checks[0].violations.push(CheckViolation::new(&MultiIndex::new(vec![2, 1]), Some(1), "dim lhs = dim rhs", 7, 5));
    let text = report.render();
    assert!(text.contains(&format!("seed {seed:>6}")));
    assert!(text.contains("1 violations"));
    assert!(text.contains("four-term at [2, 1] i=Some(1) dim lhs = dim rhs: 7 vs 5"));
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let v = &json["instances"][1]["checks"][0];
    assert_eq!(v["instance-seed"], seed);
    assert_eq!(v["violations"][0]["degree"], serde_json::json!([2, 1]));
    assert_eq!(v["violations"][0]["index"], 1);
    assert_eq!(v["violations"][0]["lhs"], "7");
    assert_eq!(v["violations"][0]["rhs"], "5");
}

#[test]
fn compare_oracle_refuses_over_budget() {
    let mut c = cfg("compare-oracle", 2, (1, 2), 3, 2);
    c.oracle_max_morphisms = Some(10);
    match compare_oracle(&c) {
        Err(Error::Budget(why)) => assert!(why.contains("instance seed 40"), "{why}"),
        other => panic!("expected a budget refusal, got {other:?}"),
    }
    c.oracle_max_morphisms = None;
    assert_eq!(compare_oracle(&c).unwrap().verdict, "pass");
}

#[test]
fn config_errors_are_input_errors() {
    let bad = [
        cfg("nonsense", 1, (1, 1), 3, 1),
        cfg("ce-m1", 2, (1, 1), 3, 1),
        cfg("four-term", 1, (1, 5), 3, 1),
        cfg("weak-bound", 1, (1, 1), 3, 1),
        cfg("four-term", 1, (1, 1), 3, 0),
    ];
    for c in &bad {
        assert!(matches!(run_campaign(c), Err(Error::Input(_))), "{c:?}");
    }
    assert!(CampaignConfig::from_json(r#"{"campaign":"ce-m1","m":1}"#).is_err());
    assert!(CampaignConfig::from_json(r#"{"campaign":"ce-m1","m":1,"d":1,"r":1,"N":3,"I":2,"count":1,"seed":0,"bogus":1}"#).is_err());
}
