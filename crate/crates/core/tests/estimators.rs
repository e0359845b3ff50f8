use gpfewshot::policy::PolicyKind;
use gpfewshot::sim::{run_experiment, InstanceSource, SimConfig};

fn normreg_stderr(episodes: u64) -> f64 {
    let cfg = SimConfig::new(InstanceSource::Iid { n_arms: 200, horizon: 20 }, PolicyKind::RandomWor, episodes, 17);
    run_experiment(&cfg).unwrap().report.normreg_estimate.stderr
}

#[test]
fn four_times_the_episodes_halves_the_stderr() {
    let ratio = normreg_stderr(2000) / normreg_stderr(8000);
    assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let cfg = SimConfig::new(InstanceSource::RandomPsd { n_arms: 60, horizon: 20, seed: 3 }, PolicyKind::Ei2, 64, 9);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| run_experiment(&cfg)).unwrap().report;
    let b = three.install(|| run_experiment(&cfg)).unwrap().report;
    assert_eq!(
        gpfewshot::format::to_json_string(&a).unwrap(),
        gpfewshot::format::to_json_string(&b).unwrap()
    );
}
