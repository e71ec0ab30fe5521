//! Workspace metering through a counting global allocator.
//!
//! Binaries opt in with
//! `#[global_allocator] static A: sublcs::meter::CountingAlloc = sublcs::meter::CountingAlloc;`.
//! Counters are per thread, so a measured closure only sees its own allocations.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;

thread_local! {
    static CURRENT: Cell<isize> = const { Cell::new(0) };
    static PEAK: Cell<isize> = const { Cell::new(0) };
}

pub const WORD: usize = std::mem::size_of::<usize>();

fn record(delta: isize) {
    let _ = CURRENT.try_with(|c| {
        let v = c.get() + delta;
        c.set(v);
        let _ = PEAK.try_with(|p| {
            if v > p.get() {
                p.set(v)
            }
        });
    });
}

pub struct CountingAlloc;

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        record(-(layout.size() as isize));
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            record(new_size as isize - layout.size() as isize);
        }
        p
    }
}

/// Bytes currently allocated by this thread, as seen by the counting allocator.
pub fn current_bytes() -> isize {
    CURRENT.with(Cell::get)
}

/// Whether [`CountingAlloc`] is the global allocator of this process.
pub fn is_installed() -> bool {
    let before = current_bytes();
    let probe = std::hint::black_box(vec![0u8; 64]);
    let seen = current_bytes() != before;
    drop(probe);
    seen
}

/// Runs `f` and returns its result with the peak number of words it held
/// above what was allocated on entry.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, usize) {
    let base = current_bytes();
    PEAK.with(|p| p.set(base));
    let r = f();
    let peak = PEAK.with(Cell::get);
    (r, ((peak - base).max(0) as usize).div_ceil(WORD))
}
