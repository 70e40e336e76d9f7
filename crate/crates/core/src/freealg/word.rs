use std::cmp::Ordering;
use std::fmt;

/// A monomial of the tensor algebra: a sequence of 0-based generator indices.
/// Ordered degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn from_indices(ix: &[usize]) -> Self {
        Word(ix.iter().map(|&i| i as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&c| c as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|&c| c as usize)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Position of the first occurrence of `pat` as a factor.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        if pat.0.len() > self.0.len() {
            return None;
        }
        (0..=self.0.len() - pat.0.len()).find(|&i| self.0[i..i + pat.0.len()] == pat.0[..])
    }

    /// Rank among all words of the same length over `n` letters (base-n digits).
    pub fn rank(&self, n: usize) -> usize {
        self.0.iter().fold(0usize, |acc, &c| acc * n + c as usize)
    }

    pub fn unrank(mut r: usize, len: usize, n: usize) -> Word {
        let mut v = vec![0u8; len];
        for slot in v.iter_mut().rev() {
            *slot = (r % n) as u8;
            r /= n;
        }
        Word(v)
    }

    /// All words of length `len` over `n` letters, ascending.
    pub fn all(n: usize, len: usize) -> impl Iterator<Item = Word> {
        let count = n.checked_pow(len as u32).unwrap_or(usize::MAX);
        (0..count).map(move |r| Word::unrank(r, len, n))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let s: Vec<String> = self.0.iter().map(|c| format!("x{}", c + 1)).collect();
        f.write_str(&s.join("*"))
    }
}
