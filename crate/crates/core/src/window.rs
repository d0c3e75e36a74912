//! Bounded FIFO of samples with borrowed sub-window views.

use std::collections::VecDeque;

use crate::sample::Sample;
use crate::scalar::Scalar;

/// Sliding window over a stream: pushing onto a full window evicts the
/// oldest element. Iteration order is arrival order.
#[derive(Debug, Clone)]
pub struct SlidingWindow<S: Scalar> {
    capacity: usize,
    items: VecDeque<Sample<S>>,
}

impl<S: Scalar> SlidingWindow<S> {
    /// `capacity` must be at least 1.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window capacity must be at least 1");
        SlidingWindow {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.items.len() == self.capacity
    }

    /// Append a sample, evicting the oldest one if the window is full.
    pub fn push(&mut self, sample: Sample<S>) {
        if self.is_full() {
            self.items.pop_front();
        }
        self.items.push_back(sample);
    }

    /// Remove the `k` oldest samples. `k` must not exceed the occupancy.
    pub fn drain_oldest(&mut self, k: usize) {
        assert!(k <= self.items.len(), "drain beyond window occupancy");
        for _ in 0..k {
            self.items.pop_front();
        }
    }

    /// Drop everything and refill from `samples`, which must fit the capacity.
    pub fn replace(&mut self, samples: &[Sample<S>]) {
        assert!(samples.len() <= self.capacity, "reseed beyond capacity");
        self.items.clear();
        self.items.extend(samples.iter().cloned());
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sample<S>> {
        self.items.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Sample<S>> {
        self.items.get(i)
    }

    /// View of the `n` oldest samples. Borrows; never copies.
    pub fn oldest(&self, n: usize) -> impl Iterator<Item = &Sample<S>> {
        assert!(n <= self.items.len(), "sub-window view out of range");
        self.items.iter().take(n)
    }

    /// View of the `n` newest samples. Borrows; never copies.
    pub fn newest(&self, n: usize) -> impl Iterator<Item = &Sample<S>> {
        assert!(n <= self.items.len(), "sub-window view out of range");
        self.items.iter().skip(self.items.len() - n)
    }

    /// Owned copy of the current contents in arrival order.
    pub fn snapshot(&self) -> Vec<Sample<S>> {
        self.items.iter().cloned().collect()
    }
}
