//! Thread-count control for the internally parallel enumerations.
//!
//! `ZONOSET_THREADS` caps the number of worker threads; `0` or unset means
//! automatic. Work is always split into contiguous chunks that are merged
//! in chunk order, so results are identical for every thread count.

use std::ops::Range;

pub(crate) fn effective_threads() -> usize {
    match std::env::var("ZONOSET_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => automatic(),
            Ok(k) => k,
        },
        Err(_) => automatic(),
    }
}

fn automatic() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Splits `0..total` into at most `parts` contiguous non-empty ranges.
pub(crate) fn split_range(total: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1).min(total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut ranges = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        if len == 0 {
            continue;
        }
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// Runs `work` on chunks of `0..total` and merges the per-chunk results in
/// chunk order. Falls back to a single inline call when only one chunk is
/// needed.
pub(crate) fn map_chunks<T, F>(total: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync,
{
    let threads = effective_threads();
    let ranges = split_range(total, threads);
    if ranges.len() <= 1 {
        return ranges.into_iter().map(work).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(|| work(r)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_without_overlap() {
        for total in [0usize, 1, 7, 64, 1001] {
            for parts in [1usize, 2, 3, 8] {
                let ranges = split_range(total, parts);
                let mut expected = 0;
                for r in &ranges {
                    assert_eq!(r.start, expected);
                    assert!(!r.is_empty());
                    expected = r.end;
                }
                assert_eq!(expected, total);
            }
        }
    }

    #[test]
    fn chunked_map_matches_serial() {
        let sums = map_chunks(1000, |r| r.map(|i| i as u64).sum::<u64>());
        let total: u64 = sums.iter().sum();
        assert_eq!(total, 499_500);
    }
}
