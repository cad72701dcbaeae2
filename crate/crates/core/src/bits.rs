/// Compact per-vertex flag vector. Vertex ids are 1-based, like every other
/// interface in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexBits {
    len: usize,
    words: Vec<u64>,
}

impl VertexBits {
    pub fn new(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, v: u32) -> bool {
        let i = (v - 1) as usize;
        debug_assert!(i < self.len, "vertex {v} out of range [1, {}]", self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, v: u32) {
        let i = (v - 1) as usize;
        debug_assert!(i < self.len, "vertex {v} out of range [1, {}]", self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, v: u32) {
        let i = (v - 1) as usize;
        debug_assert!(i < self.len, "vertex {v} out of range [1, {}]", self.len);
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}
