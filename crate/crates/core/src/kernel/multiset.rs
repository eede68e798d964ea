use serde::{Deserialize, Serialize};

/// A finite multiset kept as a sorted vector, so that derived equality,
/// ordering and hashing are all order-insensitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Ord"))]
#[serde(from = "Vec<T>", into = "Vec<T>")]
pub struct Multiset<T: Ord + Clone>(Vec<T>);

impl<T: Ord + Clone> Default for Multiset<T> {
    fn default() -> Self {
        Multiset(Vec::new())
    }
}

impl<T: Ord + Clone> From<Vec<T>> for Multiset<T> {
    fn from(mut v: Vec<T>) -> Self {
        v.sort();
        Multiset(v)
    }
}

impl<T: Ord + Clone> From<Multiset<T>> for Vec<T> {
    fn from(m: Multiset<T>) -> Vec<T> {
        m.0
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Multiset::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a, T: Ord + Clone> IntoIterator for &'a Multiset<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        Multiset(vec![x])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    /// Elements in canonical order.
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        self.0.get(i)
    }

    pub fn insert(&mut self, x: T) {
        let at = self.0.partition_point(|y| y <= &x);
        self.0.insert(at, x);
    }

    pub fn with(mut self, x: T) -> Self {
        self.insert(x);
        self
    }

    pub fn contains(&self, x: &T) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn count(&self, x: &T) -> usize {
        self.0.iter().filter(|y| *y == x).count()
    }

    /// Removes one occurrence; returns false when `x` is absent.
    pub fn remove(&mut self, x: &T) -> bool {
        match self.0.binary_search(x) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, x: &T) -> Option<Self> {
        let mut m = self.clone();
        m.remove(x).then_some(m)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Multiset::from(v)
    }

    /// `self − other`, or `None` when `other` is not a sub-multiset.
    pub fn difference(&self, other: &Self) -> Option<Self> {
        let mut m = self.clone();
        for x in other {
            if !m.remove(x) {
                return None;
            }
        }
        Some(m)
    }

    pub fn is_submultiset(&self, other: &Self) -> bool {
        other.difference(self).is_some()
    }

    pub fn map<U: Ord + Clone>(&self, f: impl FnMut(&T) -> U) -> Multiset<U> {
        self.0.iter().map(f).collect()
    }

    /// Distinct elements in canonical order.
    pub fn distinct(&self) -> Vec<&T> {
        let mut out: Vec<&T> = Vec::new();
        for x in &self.0 {
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        out
    }

    /// All distinct sub-multisets, in a fixed enumeration order.
    pub fn submultisets(&self) -> Vec<Multiset<T>> {
        let mut groups: Vec<(&T, usize)> = Vec::new();
        for x in &self.0 {
            match groups.last_mut() {
                Some((y, n)) if *y == x => *n += 1,
                _ => groups.push((x, 1)),
            }
        }
        let mut out = vec![Vec::new()];
        for (x, n) in groups {
            let mut next = Vec::with_capacity(out.len() * (n + 1));
            for base in &out {
                for k in 0..=n {
                    let mut v: Vec<T> = base.clone();
                    v.extend(std::iter::repeat_n(x.clone(), k));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(Multiset::from).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_insensitive_equality() {
        let a: Multiset<u8> = vec![3, 1, 2, 1].into();
        let b: Multiset<u8> = vec![1, 1, 2, 3].into();
        assert_eq!(a, b);
        assert_ne!(a, vec![1, 2, 3].into());
    }

    #[test]
    fn difference_and_submultisets() {
        let a: Multiset<u8> = vec![1, 1, 2].into();
        assert_eq!(a.difference(&vec![1].into()), Some(vec![1, 2].into()));
        assert_eq!(a.difference(&vec![2, 2].into()), None);
        let subs = a.submultisets();
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&vec![1, 1].into()));
    }

    #[test]
    fn insert_keeps_sorted() {
        let mut m: Multiset<u8> = Multiset::new();
        for x in [5, 1, 3, 1] {
            m.insert(x);
        }
        assert_eq!(m.as_slice(), &[1, 1, 3, 5]);
        assert!(m.remove(&1));
        assert_eq!(m.count(&1), 1);
    }
}
