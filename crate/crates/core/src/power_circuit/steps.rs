//! A per-thread counter of elementary circuit operations, used to measure
//! growth rates independently of wall-clock noise.

use std::cell::Cell;

thread_local! {
    static STEPS: Cell<u64> = const { Cell::new(0) };
}

pub fn reset() {
    STEPS.with(|s| s.set(0));
}

pub fn count() -> u64 {
    STEPS.with(|s| s.get())
}

pub(crate) fn bump(n: u64) {
    STEPS.with(|s| s.set(s.get().wrapping_add(n)));
}
