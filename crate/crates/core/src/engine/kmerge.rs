//! K-way merge over ordered sources via a loser tree.
//!
//! The tree keeps one comparison per level on the replay path, so producing
//! the next item costs O(log k) comparisons regardless of which source wins.
//! Ties go to the lower source index, which keeps the merge stable.

use std::cmp::Ordering;

pub struct LoserTree<I: Iterator, F> {
    sources: Vec<I>,
    /// Current head of each source, padded with `None` to a power of two.
    heads: Vec<Option<I::Item>>,
    /// losers[0] holds the overall winner; losers[j] the loser at node j.
    losers: Vec<usize>,
    size: usize,
    cmp: F,
}

impl<I, F> LoserTree<I, F>
where
    I: Iterator,
    F: Fn(&I::Item, &I::Item) -> Ordering,
{
    pub fn new(mut sources: Vec<I>, cmp: F) -> Self {
        let size = sources.len().next_power_of_two().max(1);
        let mut heads: Vec<Option<I::Item>> = Vec::with_capacity(size);
        for s in &mut sources {
            heads.push(s.next());
        }
        heads.resize_with(size, || None);
        let mut tree = Self { sources, heads, losers: vec![0; size], size, cmp };
        let winner = tree.build(1);
        tree.losers[0] = winner;
        tree
    }

    /// `true` when leaf `a` should advance past leaf `b`. Item ties fall
    /// back to the leaf index so stability survives replays, where the
    /// incumbent would otherwise win.
    fn beats(&self, a: usize, b: usize) -> bool {
        match (&self.heads[a], &self.heads[b]) {
            (Some(x), Some(y)) => match (self.cmp)(x, y) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => a < b,
            },
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => a < b,
        }
    }

    /// Builds the subtree under `node`, storing losers; returns its winner.
    fn build(&mut self, node: usize) -> usize {
        if node >= self.size {
            return node - self.size;
        }
        let left = self.build(2 * node);
        let right = self.build(2 * node + 1);
        if self.beats(left, right) {
            self.losers[node] = right;
            left
        } else {
            self.losers[node] = left;
            right
        }
    }
}

impl<I, F> Iterator for LoserTree<I, F>
where
    I: Iterator,
    F: Fn(&I::Item, &I::Item) -> Ordering,
{
    type Item = I::Item;

    fn next(&mut self) -> Option<I::Item> {
        let mut winner = self.losers[0];
        let item = self.heads[winner].take()?;
        if winner < self.sources.len() {
            self.heads[winner] = self.sources[winner].next();
        }
        // Replay the path from the winner's leaf to the root.
        let mut node = (self.size + winner) / 2;
        while node >= 1 {
            if !self.beats(winner, self.losers[node]) {
                std::mem::swap(&mut winner, &mut self.losers[node]);
            }
            node /= 2;
        }
        self.losers[0] = winner;
        Some(item)
    }
}
