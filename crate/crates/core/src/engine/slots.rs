use std::marker::PhantomData;
use std::sync::atomic::{AtomicU64, Ordering};

use super::encoding::Payload;

/// Fixed-size array of message slots with per-slot atomic read-modify-write.
///
/// Every update goes through a compare-and-swap loop, so a fold with an
/// associative and commutative operator is linearizable per slot no matter
/// how writers interleave.
pub struct SlotArray<M> {
    cells: Vec<AtomicU64>,
    _marker: PhantomData<M>,
}

impl<M: Payload> SlotArray<M> {
    pub fn new(len: usize, init: M) -> Self {
        let bits = init.to_bits();
        SlotArray {
            cells: (0..len).map(|_| AtomicU64::new(bits)).collect(),
            _marker: PhantomData,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn load(&self, i: usize) -> M {
        M::from_bits(self.cells[i].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn store(&self, i: usize, value: M) {
        self.cells[i].store(value.to_bits(), Ordering::Relaxed);
    }

    /// Replaces slot `i` with `combine(current, value)` and returns the value it held before.
    #[inline]
    pub fn fold(&self, i: usize, value: M, combine: impl Fn(M, M) -> M) -> M {
        let cell = &self.cells[i];
        let mut current = cell.load(Ordering::Relaxed);
        loop {
            let next = combine(M::from_bits(current), value).to_bits();
            if next == current {
                return M::from_bits(current);
            }
            match cell.compare_exchange_weak(current, next, Ordering::AcqRel, Ordering::Relaxed) {
                Ok(prev) => return M::from_bits(prev),
                Err(actual) => current = actual,
            }
        }
    }

    pub fn fill(&self, value: M) {
        let bits = value.to_bits();
        for c in &self.cells {
            c.store(bits, Ordering::Relaxed);
        }
    }

    pub(crate) fn raw(&self, i: usize) -> u64 {
        self.cells[i].load(Ordering::Relaxed)
    }

    pub(crate) fn store_raw(&self, i: usize, bits: u64) {
        self.cells[i].store(bits, Ordering::Relaxed);
    }

    pub fn to_vec(&self) -> Vec<M> {
        (0..self.len()).map(|i| self.load(i)).collect()
    }
}

impl<M: Payload> std::fmt::Debug for SlotArray<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_returns_previous() {
        let s = SlotArray::new(1, u32::MAX);
        assert_eq!(s.fold(0, 5, u32::min), u32::MAX);
        assert_eq!(s.fold(0, 3, u32::min), 5);
        assert_eq!(s.fold(0, 9, u32::min), 3);
        assert_eq!(s.load(0), 3);
    }

    #[test]
    fn concurrent_sum() {
        let s = SlotArray::new(1, 0.0f64);
        std::thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| {
                    for _ in 0..1000 {
                        s.fold(0, 1.0, |a, b| a + b);
                    }
                });
            }
        });
        assert_eq!(s.load(0), 4000.0);
    }
}
