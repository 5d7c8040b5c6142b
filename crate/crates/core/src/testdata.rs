//! Shared fixture job sets used across module tests.

use crate::model::JobSet;

/// Single alert job with release jitter [1,2], execution [3,4], deadline 6,
/// highest priority, possibly absent.
pub fn smoke_alarm() -> JobSet {
    JobSet::from_rows(&[(1, 2, 3, 4, 6, 1, true)], 10000)
}

/// Four jobs without jitter or execution variation; J1 may be absent.
pub fn example_1() -> JobSet {
    JobSet::from_rows(
        &[
            (0, 0, 2, 2, 5, 1, true),
            (0, 0, 2, 2, 10, 4, false),
            (1, 1, 2, 2, 10, 3, false),
            (2, 2, 3, 3, 5, 2, false),
        ],
        10000,
    )
}

/// Four jobs with both jitter and execution variation; J1 may be absent.
pub fn example_2() -> JobSet {
    JobSet::from_rows(
        &[
            (0, 2, 9, 10, 20, 1, true),
            (1, 2, 5, 6, 25, 4, false),
            (4, 5, 1, 2, 25, 3, false),
            (3, 6, 2, 3, 25, 2, false),
        ],
        10000,
    )
}
