//! Parallel execution of the catalog and report assembly.

use crate::catalog::{catalog, derived, tasks, Context, Measurement, Task};
use crate::config::SuiteConfig;
use crate::report::{CheckRecord, ReportBody, Runtime, Summary, SuiteReport, TaskTiming};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

type Outcome = Result<Vec<(String, Measurement)>, String>;

fn run_one(task: &Task, ctx: &Context) -> (Outcome, f64) {
    let start = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| task.run(ctx)));
    let out = match out {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err(e.to_string()),
        Err(_) => Err("task panicked".to_string()),
    };
    (out, start.elapsed().as_secs_f64())
}

/// Runs every task of the selected suites on up to `jobs` threads; results
/// land in per-task slots so completion order does not matter.
fn run_tasks(list: &[Task], ctx: &Context, jobs: usize) -> Vec<(Outcome, f64)> {
    let slots: Vec<Mutex<Option<(Outcome, f64)>>> = list.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, list.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= list.len() {
                    break;
                }
                let r = run_one(&list[i], ctx);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every task ran")).collect()
}

/// Executes the selected suites and assembles the report in catalog order.
/// Component errors become failed records; the batch never aborts.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let jobs = config.parallelism.threads();
    let ctx = Context::new(config.clone());
    let list = tasks(&config.suites);
    let results = run_tasks(&list, &ctx, jobs);

    let mut values: BTreeMap<String, Result<Measurement, String>> = BTreeMap::new();
    let mut timings = Vec::new();
    for (task, (outcome, secs)) in list.iter().zip(results) {
        timings.push(TaskTiming { task: task.id.clone(), seconds: secs });
        match outcome {
            Ok(ms) => {
                for (name, meas) in ms {
                    values.insert(name, Ok(meas));
                }
                for name in &task.outputs {
                    values.entry(name.clone()).or_insert_with(|| Err(format!("task {} produced no value", task.id)));
                }
            }
            Err(msg) => {
                for name in &task.outputs {
                    values.insert(name.clone(), Err(format!("{}: {msg}", task.id)));
                }
            }
        }
    }
    for d in derived(&config.suites) {
        let inputs: Result<Vec<f64>, String> = d
            .inputs
            .iter()
            .map(|i| match values.get(i) {
                Some(Ok(m)) => Ok(m.value),
                Some(Err(e)) => Err(e.clone()),
                None => Err(format!("input {i} unavailable")),
            })
            .collect();
        let detail = d.inputs.join(", ");
        values.insert(
            d.name.clone(),
            inputs.map(|v| Measurement { value: (d.combine)(&v), warning: None, detail: Some(format!("from {detail}")) }),
        );
    }

    let records: Vec<CheckRecord> = catalog()
        .iter()
        .filter(|c| config.suites.contains(&c.suite))
        .map(|c| match values.get(&c.name) {
            Some(Ok(m)) => CheckRecord::judge(c, m),
            Some(Err(e)) => CheckRecord::failed(c, e.clone()),
            None => CheckRecord::failed(c, "not produced"),
        })
        .collect();
    SuiteReport {
        body: ReportBody {
            tool: "epr-verify",
            version: env!("CARGO_PKG_VERSION"),
            parameters: config.clone(),
            summary: Summary::of(&records),
            records,
        },
        runtime: Runtime { jobs, total_seconds: start.elapsed().as_secs_f64(), tasks: timings },
    }
}
