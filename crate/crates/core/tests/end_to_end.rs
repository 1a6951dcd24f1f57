use sbs_core::{
    build_graph, filter_edges, merge_nodes, rescale, sbs, Document, Pipeline, PipelineConfig, RescaleMethod,
    SbsOptions, Timestamp,
};

const POSTS: [&str; 4] = [
    "I drink Coke every morning, coke and toast.",
    "Cocacola tastes sweet; Pepsi tastes sweeter?",
    "<p>Morning toast with Pepsi</p> #breakfast",
    "Sweet morning: coke, pepsi, cocacola and 3 toasts",
];

fn docs() -> Vec<Document> {
    POSTS
        .iter()
        .enumerate()
        .map(|(i, t)| Document::new(i.to_string(), *t, Timestamp(i as i64)))
        .collect()
}

#[test]
fn aliasing_equals_merging_single_token_variants() {
    let plain = Pipeline::new(PipelineConfig::default()).unwrap();
    let raw: Vec<_> = docs().iter().map(|d| plain.preprocess(d)).collect();
    assert_eq!(raw[2].tokens, ["morning", "toast", "pepsi"]);

    let mut cfg = PipelineConfig::default();
    cfg.add_alias("cocacola", "coke");
    let aliased = Pipeline::new(cfg).unwrap();
    let corpus: Vec<_> = docs().iter().map(|d| aliased.preprocess(d)).collect();

    for w in [1, 3, 5] {
        let merged = merge_nodes(&build_graph(&raw, w).unwrap(), &["coke", "cocacola"], "coke").unwrap();
        assert_eq!(merged, build_graph(&corpus, w).unwrap());
    }
}

#[test]
fn scores_from_raw_text() {
    let mut cfg = PipelineConfig::default();
    cfg.add_alias("cocacola", "coke");
    cfg.add_brand("Pepsi");
    let p = Pipeline::new(cfg).unwrap();
    let corpus: Vec<_> = docs().iter().map(|d| p.preprocess(d)).collect();
    let g = build_graph(&corpus, 5).unwrap();

    let scores = sbs(&corpus, &g, &["coke", "pepsi", "fanta"], &SbsOptions::default()).unwrap();
    assert_eq!(scores.iter().map(|s| s.prevalence).collect::<Vec<_>>(), [5, 3, 0]);
    assert!(scores[0].sbs > scores[1].sbs && scores[1].sbs > scores[2].sbs);
    assert_eq!(scores[2].diversity, 0);

    let map = scores.iter().map(|s| (s.brand.clone(), s.sbs)).collect();
    let r = rescale(&map, RescaleMethod::MinMax);
    assert_eq!((r["coke"], r["fanta"]), (1.0, 0.0));

    // Raising the edge threshold keeps every word but thins the brand's neighborhood.
    let thin = filter_edges(&g, 2);
    assert_eq!(thin.node_count(), g.node_count());
    assert!(thin.degree_of(thin.node_id("coke").unwrap()) < g.degree_of(g.node_id("coke").unwrap()));
}
