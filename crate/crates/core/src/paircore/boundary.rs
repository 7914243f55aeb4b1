use crate::filtration::SimplexKey;

/// A mod-2 set of same-dimension simplices kept sorted by filtration key.
///
/// Entries are `(key, id)`; the key alone identifies the simplex, the id is
/// carried along so callers never have to search for it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundarySet {
    items: Vec<(SimplexKey, u32)>,
}

impl BoundarySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary entries, cancelling pairs of duplicates.
    pub fn from_unsorted(mut items: Vec<(SimplexKey, u32)>) -> Self {
        items.sort_unstable();
        let mut out = Vec::with_capacity(items.len());
        let mut i = 0;
        while i < items.len() {
            let mut j = i + 1;
            while j < items.len() && items[j].0 == items[i].0 {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(items[i]);
            }
            i = j;
        }
        Self { items: out }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn max(&self) -> Option<(SimplexKey, u32)> {
        self.items.last().copied()
    }

    pub fn contains(&self, key: SimplexKey) -> bool {
        self.items.binary_search_by_key(&key, |e| e.0).is_ok()
    }

    /// Adds one simplex mod 2.
    #[inline]
    pub fn toggle(&mut self, key: SimplexKey, id: u32) {
        match self.items.binary_search_by_key(&key, |e| e.0) {
            Ok(i) => {
                self.items.remove(i);
            }
            Err(i) => self.items.insert(i, (key, id)),
        }
    }

    /// Adds another set mod 2 (symmetric difference).
    pub fn add(&mut self, other: &BoundarySet) {
        if other.items.len() <= 4 {
            for &(k, id) in &other.items {
                self.toggle(k, id);
            }
            return;
        }
        let (a, b) = (&self.items, &other.items);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.items = out;
    }

    pub fn iter(&self) -> impl Iterator<Item = (SimplexKey, u32)> + '_ {
        self.items.iter().copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.items.iter().map(|e| e.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn toggle_twice_removes() {
        let mut b = BoundarySet::new();
        b.toggle(5, 0);
        b.toggle(3, 1);
        assert_eq!(b.max(), Some((5, 0)));
        b.toggle(5, 0);
        assert_eq!(b.max(), Some((3, 1)));
        b.toggle(3, 1);
        assert!(b.is_empty());
    }

    proptest! {
        #[test]
        fn add_is_symmetric_difference(a in proptest::collection::vec(0u8..40, 0..30),
                                       b in proptest::collection::vec(0u8..40, 0..30)) {
            let sa = BoundarySet::from_unsorted(a.iter().map(|&k| (k as u128, k as u32)).collect());
            let sb = BoundarySet::from_unsorted(b.iter().map(|&k| (k as u128, k as u32)).collect());
            let mut sum = sa.clone();
            sum.add(&sb);

            let parity = |v: &[u8]| -> BTreeSet<u8> {
                let mut s = BTreeSet::new();
                for &x in v { if !s.remove(&x) { s.insert(x); } }
                s
            };
            let expected: Vec<u32> = parity(&a).symmetric_difference(&parity(&b)).map(|&k| k as u32).collect();
            prop_assert_eq!(sum.ids().collect::<Vec<_>>(), expected);
            let mut back = sum.clone();
            back.add(&sb);
            prop_assert_eq!(back, sa);
        }
    }
}
