use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sbs::export::read_scores;

const AURORA: &str = "Aurora was bright as the DAWN and yet she was mysterious and dark, as the night surrounding the stars.";
const DREAMS: &str = "Unexpected mysteries and dreams sometimes come true, in the dark night.";

fn sbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbs"))
        .args(args)
        .output()
        .expect("run sbs")
}

fn write_two_docs(dir: &Path) -> PathBuf {
    let path = dir.join("corpus.jsonl");
    let lines = [
        serde_json::json!({"id": "1", "text": AURORA, "timestamp": "2017-06-26T09:00:00Z"}),
        serde_json::json!({"id": 2, "text": DREAMS, "timestamp": "2017-06-27T18:30:00+02:00"}),
    ];
    let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn score_two_document_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_two_docs(dir.path());
    let out = dir.path().join("out");
    let o = sbs(&[
        "score", "--corpus", s(&corpus), "--brands", "mysteri", "--stemmer", "snowball",
        "--output", s(&out), "--export-graphs",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let rows = read_scores(fs::File::open(out.join("scores.csv")).unwrap(), Path::new("scores.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!((r.brand.as_str(), r.period.as_str()), ("mysteri", "all"));
    assert_eq!(r.prevalence, 2);
    assert_eq!(r.prevalence_rel, 0.117647);
    assert_eq!(r.diversity, 13);
    assert_eq!(r.diversity_norm, 1.0);
    assert_eq!(r.n_nodes, 14);
    assert_eq!(r.tot_words, 17);
    assert_eq!(r.connectivity, 16.5);

    let graph = fs::read_to_string(out.join("graphs/all.tsv")).unwrap();
    assert!(graph.contains("dark\tmysteri\t2\n"));
    assert!(graph.contains("dark\tnight\t2\n"));
    assert_eq!(graph.lines().take_while(|l| *l != "#nodes").count(), 53);

    let text = fs::read_to_string(out.join("scores.csv")).unwrap();
    assert!(!text.contains('\r'));
}

#[test]
fn score_by_day_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_two_docs(dir.path());
    let o = sbs(&[
        "score", "--corpus", s(&corpus), "--brands", "mysteri,Dark", "--stemmer", "snowball",
        "--granularity", "day", "--output", s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let scores = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    let periods: Vec<&str> = scores.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(periods, ["2017-06-26", "2017-06-26", "2017-06-27", "2017-06-27"]);
    let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("period,dark.connectivity,dark.diversity,dark.prevalence,dark.sbs,"));
    assert_eq!(traj.lines().count(), 3);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_two_docs(dir.path());
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        format!("corpus = {}\nbrands = mysteri\nstemmer = snowball\nwindow = 0\n", s(&corpus)),
    )
    .unwrap();
    let o = sbs(&["score", "--config", s(&cfg), "--output", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = sbs(&["score", "--config", s(&cfg), "--window", "1", "--output", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.jsonl");
    let o = sbs(&["score", "--corpus", s(&missing), "--brands", "x", "--output", s(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.jsonl"));

    let corpus = write_two_docs(dir.path());
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "window = 0\n").unwrap();
    let o = sbs(&["score", "--config", s(&cfg), "--corpus", s(&corpus), "--brands", "x"]);
    assert_eq!(o.status.code(), Some(2));

    let o = sbs(&["score", "--corpus", s(&corpus), "--output", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2), "missing brands");

    let o = sbs(&["score", "--corpus", s(&corpus), "--brands", "x", "--rescale", "zscore"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"id\": 1, \"text\": \"a\", \"timestamp\": \"2017-01-01T00:00:00Z\"}\nnot json\n").unwrap();
    let o = sbs(&["score", "--corpus", s(&bad), "--brands", "x", "--output", s(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.jsonl:2"));
}

/// Doc i holds twelve filler words with brand A inserted, and brand B right
/// after A in even documents.
fn dominance_jsonl(dir: &Path) -> PathBuf {
    let mut body = String::new();
    for i in 0..30 {
        let mut words: Vec<String> = (0..12).map(|j| format!("w{}", (7 * i + 3 * j) % 41)).map(|w| letters(&w)).collect();
        let pos = (5 * i) % 12;
        words.insert(pos, "brandA".into());
        if i % 2 == 0 {
            words.insert(pos + 1, "brandB".into());
        }
        let line = serde_json::json!({"id": i, "text": words.join(" "), "timestamp": "2018-01-01T00:00:00Z"});
        body.push_str(&format!("{line}\n"));
    }
    let path = dir.join("dominance.jsonl");
    fs::write(&path, body).unwrap();
    path
}

/// `w17` → `wbh`: digits would be stripped as numbers by the pipeline.
fn letters(w: &str) -> String {
    w.chars()
        .map(|c| match c.to_digit(10) {
            Some(d) => (b'a' + d as u8) as char,
            None => c,
        })
        .collect()
}

#[test]
fn sweep_dominance_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dominance_jsonl(dir.path());
    let o = sbs(&[
        "sweep", "--corpus", s(&corpus), "--brands", "brandA,brandB", "--thresholds", "1-20",
        "--output", s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(text.starts_with("threshold,brand,sbs,rank\n"));
    assert_eq!(text.lines().count(), 1 + 40 + 1);
    assert_eq!(text.lines().last(), Some("# stable: true"));
}

#[test]
fn single_threshold_sweep_matches_score() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dominance_jsonl(dir.path());
    let base = ["--corpus", s(&corpus), "--brands", "brandA,brandB", "--output", s(dir.path())];
    assert!(sbs(&[&["sweep", "--thresholds", "4"], &base[..]].concat()).status.success());
    assert!(sbs(&[&["score", "--window", "4"], &base[..]].concat()).status.success());
    let sweep = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let scores = read_scores(fs::File::open(dir.path().join("scores.csv")).unwrap(), Path::new("scores.csv")).unwrap();
    let swept: Vec<(String, String)> = sweep
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].to_string(), f[2].to_string())
        })
        .collect();
    let scored: Vec<(String, String)> = scores
        .iter()
        .map(|r| (r.brand.clone(), format!("{:.6}", r.sbs)))
        .collect();
    assert_eq!(swept, scored);
}

#[test]
fn empty_threshold_list_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dominance_jsonl(dir.path());
    let o = sbs(&["sweep", "--corpus", s(&corpus), "--brands", "brandA", "--output", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = sbs(&["sweep", "--corpus", s(&corpus), "--brands", "brandA", "--thresholds", ""]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_and_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_two_docs(dir.path());
    let lex = dir.path().join("lex.tsv");
    fs::write(&lex, "bright\t1\ndark\t-1\ndream\t0.5\n").unwrap();
    let o = sbs(&[
        "compare", "--corpus", s(&corpus), "--brands", "mysteri,star,nothing", "--stemmer", "snowball",
        "--lexicon", s(&lex), "--top-k", "3", "--output", s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "brand,prevalence,diversity,connectivity,sbs,sbs_minmax,sbs_percentile,rank,polarity,unique_associations,top_associations");
    let mysteri: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(mysteri[0], "mysteri");
    assert_eq!(mysteri[5], "1.000000");
    assert_eq!(mysteri[7], "1");
    // Neighbors of mysteri in the lexicon: bright (1), dark (-1, weight 2), dream (0.5).
    assert_eq!(mysteri[8], "-0.125000");
    assert_eq!(mysteri[10], "dark:2;aurora:1;bright:1");
    let nothing: Vec<&str> = lines[3].split(',').collect();
    assert_eq!((nothing[1], nothing[8], nothing[10]), ("0", "NA", ""));

    let o = sbs(&["score", "--corpus", s(&corpus), "--brands", "mysteri,nothing", "--stemmer", "snowball",
        "--lexicon", s(&lex), "--output", s(dir.path())]);
    assert!(o.status.success());
    let scores = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    assert!(scores.lines().nth(1).unwrap().contains(",-0.125000,"));
    assert!(scores.lines().nth(2).unwrap().contains(",NA,"));
}

#[test]
fn granger_from_scores() {
    let dir = tempfile::tempdir().unwrap();
    // One document per day over 40 days; brand frequency drives the external series a day later.
    let mut body = String::new();
    let counts: Vec<usize> = (0..40).map(|i| 1 + (i * 7919 % 13) % 5).collect();
    for (i, &c) in counts.iter().enumerate() {
        let text = format!("{} alpha beta gamma", vec!["acme"; c].join(" delta "));
        let ts = format!("2019-03-{:02}T12:00:00Z", 1 + i % 31);
        let ts = if i < 31 { ts } else { format!("2019-04-{:02}T12:00:00Z", i - 30) };
        body.push_str(&format!("{}\n", serde_json::json!({"id": i, "text": text, "timestamp": ts})));
    }
    let corpus = dir.path().join("c.jsonl");
    fs::write(&corpus, body).unwrap();
    let o = sbs(&["score", "--corpus", s(&corpus), "--brands", "acme", "--granularity", "day", "--output", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let scores = read_scores(fs::File::open(dir.path().join("scores.csv")).unwrap(), Path::new("s")).unwrap();
    let mut ext = String::from("period,value\n");
    for (i, r) in scores.iter().enumerate() {
        let prev = if i == 0 { 0.0 } else { scores[i - 1].prevalence as f64 };
        ext.push_str(&format!("{},{}\n", r.period, 2.0 * prev + 0.01 * ((i * 31) % 7) as f64));
    }
    let ext_path = dir.path().join("ext.csv");
    fs::write(&ext_path, ext).unwrap();
    let o = sbs(&[
        "granger", "--scores", s(&dir.path().join("scores.csv")), "--external", s(&ext_path), "--brand", "acme",
        "--metric", "prevalence", "--max-lag", "2", "--output", s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("granger.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lag,chi2,df,p_value,nobs");
    assert_eq!(lines.len(), 3);
    let p: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(p < 1e-6, "{text}");

    let o = sbs(&["granger", "--scores", s(&dir.path().join("scores.csv")), "--external", s(&ext_path), "--brand", "acme", "--metric", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dominance_jsonl(dir.path());
    let mut outputs = Vec::new();
    for t in ["1", "3", "8"] {
        let out = dir.path().join(format!("t{t}"));
        let o = sbs(&["score", "--corpus", s(&corpus), "--brands", "brandA,brandB", "--threads", t, "--window", "3", "--output", s(&out)]);
        assert!(o.status.success());
        outputs.push(fs::read(out.join("scores.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}
