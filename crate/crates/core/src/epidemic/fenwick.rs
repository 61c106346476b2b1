//! Binary indexed tree over nonnegative integer weights with weighted
//! sampling by prefix-sum descent.

#[derive(Debug, Clone)]
pub(crate) struct Fenwick {
    tree: Vec<i64>,
    top: usize,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        let top = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Fenwick {
            tree: vec![0; n + 1],
            top,
        }
    }

    pub fn add(&mut self, i: usize, delta: i64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of weights at indices `< i`.
    pub fn prefix(&self, i: usize) -> i64 {
        let mut i = i;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    pub fn total(&self) -> i64 {
        self.prefix(self.tree.len() - 1)
    }

    /// Smallest index `i` with `prefix(i + 1) > target`; requires
    /// `0 <= target < total()`.
    pub fn find(&self, mut target: i64) -> usize {
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn find_matches_linear_scan(w in proptest::collection::vec(0i64..5, 1..70)) {
            let mut f = Fenwick::new(w.len());
            for (i, &x) in w.iter().enumerate() {
                f.add(i, x);
            }
            let total: i64 = w.iter().sum();
            prop_assert_eq!(f.total(), total);
            for t in 0..total {
                let mut acc = 0;
                let expect = w.iter().position(|&x| { acc += x; acc > t }).unwrap();
                prop_assert_eq!(f.find(t), expect);
            }
        }
    }
}
