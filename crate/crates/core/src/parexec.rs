//! Deterministic parallel batch evaluation.
//!
//! Work is split into contiguous chunks handed out to a scoped worker pool.
//! Every result lands in the slot of its item, so outputs do not depend on the
//! worker count, the chunk size or the scheduling order.
//!
//! [`BatchBackend`] is the seam for other execution backends (for instance a
//! GPU kernel launcher): the optimizer only talks to that trait.

use std::any::Any;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::error::{Error, Result};

/// Caps the worker count of every executor, e.g. on shared CI machines.
pub const MAX_WORKERS_ENV: &str = "QPM_MAX_WORKERS";

pub trait BatchBackend: Sync {
    /// Apply `f` to every item; results in item order.
    fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync;

    /// Indices of the `k` largest values, largest first, ties to the lower index.
    fn top_k(&self, values: &[f64], k: usize) -> Vec<usize>;
}

/// One batch: items, chunking and worker count.
#[derive(Clone, Copy, Debug)]
pub struct BatchJob<'a, T> {
    pub items: &'a [T],
    pub chunk_size: usize,
    pub workers: usize,
}

impl<'a, T> BatchJob<'a, T> {
    /// Default chunking: ⌈items / (4·workers)⌉.
    pub fn new(items: &'a [T], workers: usize) -> Self {
        let workers = workers.max(1);
        let chunk_size = items.len().div_ceil(4 * workers).max(1);
        Self {
            items,
            chunk_size,
            workers,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size.max(1);
        self
    }
}

fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

/// Run `f` over the job's items. A panic in any item fails the whole batch
/// and reports the lowest failing index observed; no partial output escapes.
pub fn run_batch<T, R, F>(job: &BatchJob<'_, T>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let items = job.items;
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let chunk = job.chunk_size.max(1);
    let n_chunks = items.len().div_ceil(chunk);
    let workers = job.workers.max(1).min(n_chunks);

    let eval = |i: usize| -> std::result::Result<R, (usize, String)> {
        catch_unwind(AssertUnwindSafe(|| f(i, &items[i]))).map_err(|p| (i, panic_message(&*p)))
    };

    if workers == 1 {
        let mut out = Vec::with_capacity(items.len());
        for i in 0..items.len() {
            match eval(i) {
                Ok(r) => out.push(r),
                Err((index, message)) => return Err(Error::BatchItem { index, message }),
            }
        }
        return Ok(out);
    }

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let failure: Mutex<Option<(usize, String)>> = Mutex::new(None);
    let mut parts: Vec<(usize, Vec<R>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        if abort.load(Ordering::Relaxed) {
                            break;
                        }
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        if c >= n_chunks {
                            break;
                        }
                        let start = c * chunk;
                        let end = (start + chunk).min(items.len());
                        let mut out = Vec::with_capacity(end - start);
                        for i in start..end {
                            match eval(i) {
                                Ok(r) => out.push(r),
                                Err(e) => {
                                    abort.store(true, Ordering::Relaxed);
                                    let mut slot =
                                        failure.lock().unwrap_or_else(|p| p.into_inner());
                                    if slot.as_ref().is_none_or(|(j, _)| e.0 < *j) {
                                        *slot = Some(e);
                                    }
                                    return local;
                                }
                            }
                        }
                        local.push((start, out));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap_or_default())
            .collect()
    });
    if let Some((index, message)) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(Error::BatchItem { index, message });
    }
    parts.sort_unstable_by_key(|(start, _)| *start);
    Ok(parts.into_iter().flat_map(|(_, v)| v).collect())
}

/// Fitness of every item, in item order.
pub fn evaluate_batch<T, F>(job: &BatchJob<'_, T>, objective: F) -> Result<Vec<f64>>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    run_batch(job, |_, item| objective(item))
}

#[inline]
fn better(values: &[f64], a: usize, b: usize) -> std::cmp::Ordering {
    values[b].total_cmp(&values[a]).then(a.cmp(&b))
}

fn top_k_of(values: &[f64], mut candidates: Vec<usize>, k: usize) -> Vec<usize> {
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k, |&a, &b| better(values, a, b));
        candidates.truncate(k);
    }
    candidates.sort_unstable_by(|&a, &b| better(values, a, b));
    candidates
}

/// Top-`k` indices via per-chunk partial reductions merged in a fixed order.
pub fn reduce_best(values: &[f64], k: usize, workers: usize) -> Vec<usize> {
    let k = k.min(values.len());
    if k == 0 {
        return Vec::new();
    }
    let chunk = values.len().div_ceil(4 * workers.max(1)).max(k);
    let starts: Vec<usize> = (0..values.len()).step_by(chunk).collect();
    let job = BatchJob::new(&starts, workers).with_chunk_size(1);
    let partial = run_batch(&job, |_, &start| {
        let end = (start + chunk).min(values.len());
        top_k_of(values, (start..end).collect(), k)
    })
    .expect("top-k reduction does not panic");
    top_k_of(values, partial.into_iter().flatten().collect(), k)
}

/// CPU worker pool.
#[derive(Clone, Copy, Debug)]
pub struct Executor {
    workers: usize,
}

impl Executor {
    /// `workers == 0` means one per available core. The environment cap
    /// [`MAX_WORKERS_ENV`] applies in both cases.
    pub fn new(workers: usize) -> Self {
        let requested = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        let cap = std::env::var(MAX_WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
            .unwrap_or(usize::MAX);
        Self {
            workers: requested.min(cap).max(1),
        }
    }

    pub fn sequential() -> Self {
        Self { workers: 1 }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl BatchBackend for Executor {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync,
    {
        run_batch(&BatchJob::new(items, self.workers), f)
    }

    fn top_k(&self, values: &[f64], k: usize) -> Vec<usize> {
        reduce_best(values, k, self.workers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingRow {
    pub workers: usize,
    pub median_seconds: f64,
    pub speedup: f64,
}

/// Median wall times per worker count; speedups are relative to the
/// `workers == 1` row, or the first row when there is none.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
}

impl TimingReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("workers,median_seconds,speedup\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{}",
                r.workers,
                crate::io::fmt_sig(r.median_seconds),
                crate::io::fmt_sig(r.speedup)
            );
        }
        s
    }
}

pub const DEFAULT_TIMING_REPETITIONS: usize = 5;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Time `job` for each worker count: one warm-up, then the median of
/// `repetitions` runs on a monotonic clock.
pub fn time_run<F>(workers: &[usize], repetitions: usize, mut job: F) -> TimingReport
where
    F: FnMut(&Executor),
{
    let mut rows: Vec<TimingRow> = workers
        .iter()
        .map(|&w| {
            let exec = Executor { workers: w.max(1) };
            job(&exec);
            let times = (0..repetitions.max(1))
                .map(|_| {
                    let t0 = Instant::now();
                    job(&exec);
                    t0.elapsed().as_secs_f64().max(1e-9)
                })
                .collect();
            TimingRow {
                workers: exec.workers,
                median_seconds: median(times),
                speedup: 1.0,
            }
        })
        .collect();
    let base = rows
        .iter()
        .find(|r| r.workers == 1)
        .or(rows.first())
        .map(|r| r.median_seconds);
    if let Some(base) = base {
        for r in &mut rows {
            r.speedup = base / r.median_seconds;
        }
    }
    TimingReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_for_any_split() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = run_batch(&BatchJob::new(&items, 1), |i, x| x * 3 + i as u64).unwrap();
        for w in [2, 3, 8] {
            for c in [1, 7, 1000] {
                let job = BatchJob::new(&items, w).with_chunk_size(c);
                assert_eq!(run_batch(&job, |i, x| x * 3 + i as u64).unwrap(), seq);
            }
        }
    }

    #[test]
    fn single_item() {
        let items = [2.5f64];
        let out = evaluate_batch(&BatchJob::new(&items, 4), |x| x * x).unwrap();
        assert_eq!(out, vec![6.25]);
    }

    #[test]
    fn panic_reports_index() {
        let items: Vec<usize> = (0..100).collect();
        for w in [1, 4] {
            let err = run_batch(&BatchJob::new(&items, w).with_chunk_size(3), |_, &x| {
                if x == 41 {
                    panic!("bad item");
                }
                x
            })
            .unwrap_err();
            match err {
                Error::BatchItem { index, message } => {
                    assert_eq!(index, 41);
                    assert!(message.contains("bad item"));
                }
                other => panic!("unexpected {other}"),
            }
        }
    }

    #[test]
    fn reduce_best_examples() {
        assert_eq!(reduce_best(&[3.0, 1.0, 2.0], 1, 2), vec![0]);
        assert_eq!(reduce_best(&[1.0; 5], 2, 3), vec![0, 1]);
        assert_eq!(
            reduce_best(&[5.0, 9.0, 1.0, 7.0, 7.0], 4, 2),
            vec![1, 3, 4, 0]
        );
        assert!(reduce_best(&[], 3, 2).is_empty());
    }

    #[test]
    fn timing_single_row() {
        let report = time_run(&[1], 1, |_| {});
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].speedup, 1.0);
        assert!(report
            .to_csv()
            .starts_with("workers,median_seconds,speedup\n1,"));
    }

    #[test]
    fn default_chunking() {
        let items = [0u8; 100];
        assert_eq!(BatchJob::new(&items, 8).chunk_size, 4);
        assert_eq!(BatchJob::new(&items, 1).chunk_size, 25);
        assert_eq!(BatchJob::new(&items[..1], 8).chunk_size, 1);
    }
}
