use std::cmp::Ordering;
use std::fmt;

/// Integer partition with parts stored in non-increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.iter().any(|&p| p == 0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, if any.
    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Smallest part, if any.
    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// The partition with the largest part removed.
    pub fn without_first(&self) -> Partition {
        Partition(self.0[1..].to_vec())
    }

    /// The partition with the smallest part removed.
    pub fn without_last(&self) -> Partition {
        Partition(self.0[..self.0.len() - 1].to_vec())
    }

    /// Adds a part no smaller than the current largest one.
    pub fn with_front(&self, p: u32) -> Partition {
        debug_assert!(self.first().map_or(true, |f| p >= f));
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(p);
        v.extend_from_slice(&self.0);
        Partition(v)
    }

    pub fn with_part(&self, p: u32) -> Partition {
        let mut v = self.0.clone();
        v.push(p);
        Partition::new(v).expect("positive part")
    }

    /// Multiplicities `m_i` of each distinct part.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, k)) if *q == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// All partitions of `n`, in the canonical order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        gen(n, n, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All partitions of size at most `n` (including the empty one).
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all_of).collect()
    }
}

fn gen(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=rem.min(max)).rev() {
        cur.push(p);
        gen(rem - p, p, cur, out);
        cur.pop();
    }
}

/// Size first, then reverse-lexicographic on parts, so `(1,1)` precedes `(2)`.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.0.len().cmp(&other.0.len()).reverse()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
