use socmdp::harness::{csv_header, run, summarize, trace_from_json, trace_to_csv, trace_to_json, RunManifest};
use socmdp::rollout::MODELS;
use socmdp::scenarios::canonical_scenario;
use socmdp::{rollout, Episode, Planner};

fn episode() -> Episode {
    let spec = canonical_scenario("S2").unwrap();
    let planner = Planner::new(spec.grid().clone(), spec.config).unwrap();
    rollout(&planner, &spec).unwrap()
}

#[test]
fn exports_are_consistent() {
    let ep = episode();
    for model in MODELS {
        let trace = ep.trace(model).unwrap();
        assert_eq!(trace.model, model);

        let json = trace_to_json(trace).unwrap();
        assert_eq!(&trace_from_json(&json).unwrap(), trace);

        let csv = trace_to_csv(trace).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, csv_header(trace));
        assert_eq!(&header[..4], ["t", "agent", "action", "reward"]);
        let n_goal = trace.landmarks.len();
        let mut rows = 0;
        for rec in reader.records() {
            let rec = rec.unwrap();
            let p: Vec<f64> = rec.iter().skip(4).map(|x| x.parse().unwrap()).collect();
            let goal: f64 = p[..n_goal].iter().sum();
            let social: f64 = p[n_goal..].iter().sum();
            assert!((goal - 1.0).abs() <= 1e-5, "{goal}");
            assert!((social - 1.0).abs() <= 1e-5, "{social}");
            rows += 1;
        }
        assert_eq!(rows, 2 * trace.steps.len());

        let mut empty = trace.clone();
        empty.steps.clear();
        let csv = trace_to_csv(&empty).unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert_eq!(csv.trim_end(), csv_header(trace).join(","));
    }
}

#[test]
fn summary_reads_the_trace_alone() {
    let ep = episode();
    let row = summarize(&ep.social);
    assert_eq!(row.scenario, "S2");
    assert_eq!(row.steps, ep.social.steps.len());
    assert!(row.p_true_class >= row.p_true_social - 1e-15);
    assert_eq!(row.recognized, row.p_true_class >= 0.5);
}

#[test]
fn batch_run_writes_one_file_per_trace() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = RunManifest {
        scenarios: vec![canonical_scenario("S2").unwrap(), canonical_scenario("S3").unwrap()],
        models: MODELS.iter().map(|m| m.to_string()).collect(),
        out: dir.path().to_path_buf(),
        jobs: 2,
    };
    let report = run(&manifest).unwrap();
    assert!(report.ok());
    assert_eq!(report.rows.len(), 4);
    for id in ["S2", "S3"] {
        for m in MODELS {
            for ext in ["json", "csv"] {
                assert!(dir.path().join(format!("{id}.{m}.{ext}")).is_file());
            }
        }
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(dir.path().join("summary.txt").is_file());

    let mut dup = manifest.clone();
    dup.scenarios.push(canonical_scenario("S2").unwrap());
    assert!(run(&dup).is_err());
}
